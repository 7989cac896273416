//! The 3x3-diagram sign check for connecting homomorphisms.
//!
//! A `NineDiagram` is a commuting grid of cochain complexes whose rows are
//! the pair sequences `0 -> C*(E,F;A) -> C*(E;A) -> C*(F;A) -> 0` with
//! coefficients `A = Z, Z, Z/m` down the columns, and whose columns are the
//! coefficient sequences `0 -> Z -(xm)-> Z -> Z/m -> 0` applied to one
//! space. `nine_check` chases both connecting-homomorphism composites
//! `H^{n-1}(C'') -> H^{n+1}(A)` at the cochain level and reports whether
//! they are negatives of each other.

use super::{
    snf, solve_mod, CwPair, ClassSpace, CochainComplexZ, Coefficients, HomalgError, IntMatrix,
};

/// Commuting 3x3 grid built from a CW pair and a coefficient column.
pub struct NineDiagram {
    rel: CochainComplexZ,
    e: CochainComplexZ,
    f: CochainComplexZ,
    /// Degree-wise inclusion `C^n(E,F) -> C^n(E)`.
    h_incl: Vec<IntMatrix>,
    /// Degree-wise restriction `C^n(E) -> C^n(F)`.
    h_proj: Vec<IntMatrix>,
    /// Modulus of the bottom coefficient row.
    pub modulus: i64,
    pub name: String,
}

/// Composite values for one generator of `H^{n-1}(C''; Z/m)`.
#[derive(Debug, Clone)]
pub struct CompositeSample {
    pub source_order: u64,
    pub comp1: Vec<i64>,
    pub comp2: Vec<i64>,
    /// Order of the class of `comp1` in `H^{n+1}(A; Z)`; `None` = infinite.
    pub value_order: Option<u64>,
    pub nonzero: bool,
    /// True when `comp1 = -comp2` holds while `comp1 != +comp2`, i.e. the
    /// minus sign is actually visible on this class.
    pub sign_observable: bool,
}

#[derive(Debug, Clone)]
pub struct NineCheckOutcome {
    pub holds: bool,
    pub samples: Vec<CompositeSample>,
}

impl NineCheckOutcome {
    pub fn any_nonzero(&self) -> bool {
        self.samples.iter().any(|s| s.nonzero)
    }

    pub fn any_sign_observable(&self) -> bool {
        self.samples.iter().any(|s| s.sign_observable)
    }

    fn merge(&mut self, other: NineCheckOutcome) {
        self.holds &= other.holds;
        self.samples.extend(other.samples);
    }
}

/// Rows from the cellular pair, columns from `0 -> Z -(xm)-> Z -> Z/m -> 0`.
pub fn pair_coefficient_diagram(pair: &CwPair, m: i64) -> Result<NineDiagram, HomalgError> {
    if m < 2 {
        return Err(HomalgError::InvalidDiagram(format!(
            "coefficient modulus must be >= 2, got {m}"
        )));
    }
    let top = pair.e.top_degree();
    let diagram = NineDiagram {
        rel: pair.rel_cochain(),
        e: pair.e_cochain(),
        f: pair.f_cochain(),
        h_incl: (0..=top).map(|n| pair.inclusion(n)).collect(),
        h_proj: (0..=top).map(|n| pair.restriction(n)).collect(),
        modulus: m,
        name: format!("{} x{m}", pair.name),
    };
    diagram.validate()?;
    Ok(diagram)
}

impl NineDiagram {
    fn rank_f(&self, n: usize) -> usize {
        self.f.rank(n)
    }

    /// Exactness and commutation checks; reports the failing square or row.
    pub fn validate(&self) -> Result<(), HomalgError> {
        let top = self.e.top_degree();
        for n in 0..=top {
            let incl = &self.h_incl[n];
            let proj = &self.h_proj[n];
            if !proj.mul(incl)?.is_zero() {
                return Err(HomalgError::InvalidDiagram(format!(
                    "row not a complex at degree {n}: proj∘incl != 0"
                )));
            }
            // incl primitive (injective with torsion-free cokernel), proj onto.
            let di = snf(incl)?;
            if di.rank() != self.rel.rank(n) || di.diagonal().iter().take(di.rank()).any(|&d| d != 1)
            {
                return Err(HomalgError::InvalidDiagram(format!(
                    "inclusion not a primitive embedding in degree {n}"
                )));
            }
            let dp = snf(proj)?;
            if dp.rank() != self.rank_f(n) || dp.diagonal().iter().take(dp.rank()).any(|&d| d != 1)
            {
                return Err(HomalgError::InvalidDiagram(format!(
                    "restriction not surjective in degree {n}"
                )));
            }
            if self.rel.rank(n) + self.rank_f(n) != self.e.rank(n) {
                return Err(HomalgError::InvalidDiagram(format!(
                    "row not exact in degree {n}: rank mismatch"
                )));
            }
        }
        // The ranks guarantee degree-wise split short exact rows over Z, so
        // the mod-m rows are exact as well; the columns are the coefficient
        // sequences by construction. What remains are the commuting squares
        // between the horizontal maps and the differentials.
        for n in 0..top {
            let lhs = self.h_incl[n + 1].mul(&self.rel.differential(n))?;
            let rhs = self.e.differential(n).mul(&self.h_incl[n])?;
            if lhs != rhs {
                return Err(HomalgError::InvalidDiagram(format!(
                    "inclusion square fails between degrees {n} and {}",
                    n + 1
                )));
            }
            let lhs = self.h_proj_padded(n + 1).mul(&self.e.differential(n))?;
            let rhs = self.f.differential(n).mul(&self.h_proj[n])?;
            if lhs != rhs {
                return Err(HomalgError::InvalidDiagram(format!(
                    "restriction square fails between degrees {n} and {}",
                    n + 1
                )));
            }
        }
        Ok(())
    }

    /// Restriction in a degree where F may already have rank 0.
    fn h_proj_padded(&self, n: usize) -> IntMatrix {
        if n < self.h_proj.len() && self.h_proj[n].nrows() == self.rank_f(n) {
            self.h_proj[n].clone()
        } else {
            IntMatrix::zeros(self.rank_f(n), self.e.rank(n))
        }
    }

    /// Connecting homomorphism of a pair row: cocycle in `C^deg(F)` to a
    /// cochain in `C^{deg+1}(E,F)`, everything mod `modulus` (0 = Z).
    fn connect_row(&self, deg: usize, cocycle: &[i64], modulus: i64) -> Result<Vec<i64>, HomalgError> {
        let proj = self.h_proj_padded(deg);
        let b = solve_mod(&proj, cocycle, modulus)?.ok_or_else(|| {
            HomalgError::InvalidDiagram(format!("no lift through restriction in degree {deg}"))
        })?;
        let db = self.e.differential(deg).mul_vec(&b)?;
        let incl = if deg < self.e.top_degree() {
            self.h_incl[deg + 1].clone()
        } else {
            IntMatrix::zeros(0, 0)
        };
        if incl.nrows() == 0 {
            // No cells above: db must vanish mod modulus.
            let ok = db
                .iter()
                .all(|&x| if modulus == 0 { x == 0 } else { x % modulus == 0 });
            if !ok {
                return Err(HomalgError::InvalidDiagram(
                    "connecting chase left the diagram".into(),
                ));
            }
            return Ok(Vec::new());
        }
        solve_mod(&incl, &db, modulus)?.ok_or_else(|| {
            HomalgError::InvalidDiagram(format!(
                "coboundary not supported on relative cells in degree {}",
                deg + 1
            ))
        })
    }

    /// Connecting homomorphism of a coefficient column on the space complex
    /// `x`: a mod-m cocycle in degree `deg` lifts to itself over Z; apply d
    /// and divide by m.
    fn connect_col(x: &CochainComplexZ, deg: usize, cocycle: &[i64], m: i64) -> Result<Vec<i64>, HomalgError> {
        let db = x.differential(deg).mul_vec(cocycle)?;
        let mut out = Vec::with_capacity(db.len());
        for &v in &db {
            if v % m != 0 {
                return Err(HomalgError::InvalidDiagram(
                    "column chase input was not a mod-m cocycle".into(),
                ));
            }
            out.push(v / m);
        }
        Ok(out)
    }

    /// Chase both composites `H^{n-1}(C*(F; Z/m)) -> H^{n+1}(C*(E,F; Z))`
    /// over a generating set and compare them up to sign.
    pub fn nine_check(&self, n: usize) -> Result<NineCheckOutcome, HomalgError> {
        self.validate()?;
        let mut outcome = NineCheckOutcome {
            holds: true,
            samples: Vec::new(),
        };
        if n == 0 || n - 1 > self.f.top_degree() {
            return Ok(outcome);
        }
        let m = self.modulus;
        let source = ClassSpace::new(&self.f, n - 1, Coefficients::Mod(m as u32))?;
        let gens = source.generators()?;
        if gens.is_empty() {
            return Ok(outcome);
        }
        let target = if n < self.rel.top_degree() {
            Some(ClassSpace::new(&self.rel, n + 1, Coefficients::Integers)?)
        } else {
            None
        };
        for (gen, order) in gens {
            // Composite 1: bottom-row connecting, then left-column Bockstein.
            let a_mod_m = self.connect_row(n - 1, &gen, m)?;
            let comp1 = if a_mod_m.is_empty() && self.rel.rank(n) == 0 {
                vec![0; self.rel.rank(n + 1)]
            } else {
                Self::connect_col(&self.rel, n, &a_mod_m, m)?
            };
            // Composite 2: right-column Bockstein, then top-row connecting.
            let c_int = Self::connect_col(&self.f, n - 1, &gen, m)?;
            let comp2 = self.connect_row(n, &c_int, 0)?;

            let (holds, value_order, nonzero, sign_observable) = match &target {
                None => (true, Some(1), false, false),
                Some(space) => {
                    let neg2: Vec<i64> = comp2.iter().map(|&x| -x).collect();
                    let holds = space.classes_equal(&comp1, &neg2)?;
                    let nonzero = !space.is_zero_class(&comp1)?;
                    let order = space.class_order(&comp1)?;
                    let observable = holds && nonzero && !space.classes_equal(&comp1, &comp2)?;
                    (holds, order, nonzero, observable)
                }
            };
            outcome.holds &= holds;
            outcome.samples.push(CompositeSample {
                source_order: order,
                comp1,
                comp2,
                value_order,
                nonzero,
                sign_observable,
            });
        }
        Ok(outcome)
    }

    /// `nine_check` across every degree of the diagram.
    pub fn nine_check_all(&self) -> Result<NineCheckOutcome, HomalgError> {
        let mut outcome = NineCheckOutcome {
            holds: true,
            samples: Vec::new(),
        };
        for n in 1..=(self.e.top_degree() + 1) {
            outcome.merge(self.nine_check(n)?);
        }
        Ok(outcome)
    }
}
