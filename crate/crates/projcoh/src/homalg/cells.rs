//! Cellular chain models and CW pairs.
//!
//! A `ChainModel` records ranks and boundary matrices of a cellular chain
//! complex; a `CwPair` embeds a subcomplex whose cells come first in every
//! degree. Pairs feed the 3x3-diagram machinery: the relative cochain
//! complex is spanned by the non-subcomplex cells, so the row
//! `0 -> C*(E,F) -> C*(E) -> C*(F) -> 0` is split in every degree.

use super::{CochainComplexZ, HomalgError, IntMatrix};

/// Cellular chain complex: `boundary[n] : C_n -> C_{n-1}` for `n >= 1`.
#[derive(Debug, Clone)]
pub struct ChainModel {
    pub ranks: Vec<usize>,
    pub boundary: Vec<IntMatrix>,
}

impl ChainModel {
    pub fn new(ranks: Vec<usize>, boundary: Vec<IntMatrix>) -> Result<Self, HomalgError> {
        if !ranks.is_empty() && boundary.len() + 1 != ranks.len() {
            return Err(HomalgError::Shape(format!(
                "{} ranks need {} boundaries, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundary.len()
            )));
        }
        for (i, b) in boundary.iter().enumerate() {
            if b.nrows() != ranks[i] || b.ncols() != ranks[i + 1] {
                return Err(HomalgError::Shape(format!(
                    "boundary[{}] has shape {}x{}, expected {}x{}",
                    i + 1,
                    b.nrows(),
                    b.ncols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        for i in 0..boundary.len().saturating_sub(1) {
            if !boundary[i].mul(&boundary[i + 1])?.is_zero() {
                return Err(HomalgError::Invalid(format!(
                    "boundary∘boundary != 0 between degrees {} and {}",
                    i + 2,
                    i
                )));
            }
        }
        Ok(ChainModel { ranks, boundary })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    /// `∂_{n} : C_n -> C_{n-1}` as stored, zero outside the range.
    pub fn boundary_from(&self, n: usize) -> IntMatrix {
        if n >= 1 && n <= self.boundary.len() {
            self.boundary[n - 1].clone()
        } else {
            IntMatrix::zeros(self.rank(n.wrapping_sub(1)), self.rank(n))
        }
    }

    /// Cochain complex: transposed boundaries.
    pub fn cochain(&self) -> CochainComplexZ {
        let d = (0..self.top_degree())
            .map(|n| self.boundary_from(n + 1).transpose())
            .collect();
        CochainComplexZ::new(self.ranks.clone(), d).expect("transpose of a chain complex")
    }
}

/// Minimal sphere model: `S^0` is two points, `S^n` (n >= 1) one 0-cell and
/// one n-cell.
pub fn sphere(n: usize) -> ChainModel {
    if n == 0 {
        return ChainModel::new(vec![2], vec![]).unwrap();
    }
    let mut ranks = vec![0; n + 1];
    ranks[0] = 1;
    ranks[n] = 1;
    let boundary = (1..=n)
        .map(|k| IntMatrix::zeros(ranks[k - 1], ranks[k]))
        .collect();
    ChainModel::new(ranks, boundary).unwrap()
}

/// Standard cell structure of `RP^n`: one cell per degree, boundaries
/// alternating 0 and 2.
pub fn rp_chain(n: usize) -> ChainModel {
    let ranks = vec![1; n + 1];
    let boundary = (1..=n)
        .map(|k| IntMatrix::from_rows(vec![vec![if k % 2 == 0 { 2 } else { 0 }]]))
        .collect();
    ChainModel::new(ranks, boundary).unwrap()
}

/// Mod-m Moore space `S^1 ∪_m e^2`: one cell in degrees 0, 1, 2 with
/// `∂e^2 = m·e^1`.
pub fn moore(m: i64) -> ChainModel {
    ChainModel::new(
        vec![1, 1, 1],
        vec![
            IntMatrix::zeros(1, 1),
            IntMatrix::from_rows(vec![vec![m]]),
        ],
    )
    .unwrap()
}

/// Cone on a chain model. Basis order per degree: the original cells first,
/// then the cone cells (one per cell a degree below), with the cone vertex
/// appended in degree 0. `∂(c·σ) = σ - c·(∂σ)`, and `∂(c·v) = v - w` for a
/// vertex `v` and cone point `w`.
pub fn cone(x: &ChainModel) -> ChainModel {
    let top = x.top_degree();
    let mut ranks = vec![0usize; top + 2];
    for n in 0..=top {
        ranks[n] += x.rank(n);
        ranks[n + 1] += x.rank(n);
    }
    ranks[0] += 1; // cone vertex

    // Offsets within each degree: [x cells][cone cells], vertex last in degree 0.
    let x_off = |_n: usize| 0usize;
    let cone_off = |n: usize| x.rank(n);

    let mut boundary = Vec::new();
    for n in 1..=(top + 1) {
        let mut b = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        // Original cells keep their boundary.
        if n <= top {
            let bx = x.boundary_from(n);
            for i in 0..bx.nrows() {
                for j in 0..bx.ncols() {
                    b[(x_off(n - 1) + i, x_off(n) + j)] = bx[(i, j)];
                }
            }
        }
        // Cone cells: c·σ for σ of degree n-1.
        let bx_prev = x.boundary_from(n - 1);
        for j in 0..x.rank(n - 1) {
            // σ term
            b[(x_off(n - 1) + j, cone_off(n) + j)] = 1;
            if n - 1 == 0 {
                // ∂(c·v) = v - w
                b[(vertex_index_in_degree0(x), cone_off(n) + j)] = -1;
            } else {
                // -c·(∂σ): cone cells of degree n-1 sit after the x block.
                for i in 0..bx_prev.nrows() {
                    if bx_prev[(i, j)] != 0 {
                        b[(cone_off(n - 1) + i, cone_off(n) + j)] = -bx_prev[(i, j)];
                    }
                }
            }
        }
        boundary.push(b);
    }
    ChainModel::new(ranks, boundary).expect("cone of a chain complex is a chain complex")
}

fn vertex_index_in_degree0(x: &ChainModel) -> usize {
    // degree 0 layout: [x 0-cells][vertex]; the cone block in degree 0 is empty.
    x.rank(0)
}

/// CW pair `(E, F)` with the `F`-cells first in every degree.
#[derive(Debug, Clone)]
pub struct CwPair {
    pub e: ChainModel,
    pub f_ranks: Vec<usize>,
    pub name: String,
}

impl CwPair {
    pub fn new(e: ChainModel, f_ranks: Vec<usize>, name: impl Into<String>) -> Result<Self, HomalgError> {
        let mut padded = f_ranks;
        padded.resize(e.ranks.len(), 0);
        for (n, (&f, &t)) in padded.iter().zip(&e.ranks).enumerate() {
            if f > t {
                return Err(HomalgError::Shape(format!(
                    "subcomplex rank {f} exceeds total rank {t} in degree {n}"
                )));
            }
        }
        // Subcomplex condition: boundaries of F-cells stay in the F-span.
        for n in 1..=e.top_degree() {
            let b = e.boundary_from(n);
            for j in 0..padded[n] {
                for i in padded[n - 1]..e.rank(n - 1) {
                    if b[(i, j)] != 0 {
                        return Err(HomalgError::Invalid(format!(
                            "F is not a subcomplex: ∂ of F-cell {j} in degree {n} hits non-F cell {i}"
                        )));
                    }
                }
            }
        }
        Ok(CwPair {
            e,
            f_ranks: padded,
            name: name.into(),
        })
    }

    pub fn f_rank(&self, n: usize) -> usize {
        self.f_ranks.get(n).copied().unwrap_or(0)
    }

    pub fn rel_rank(&self, n: usize) -> usize {
        self.e.rank(n) - self.f_rank(n)
    }

    /// Cochain complex of the total space.
    pub fn e_cochain(&self) -> CochainComplexZ {
        self.e.cochain()
    }

    /// Cochain complex of the subcomplex: the F-block of the differential.
    pub fn f_cochain(&self) -> CochainComplexZ {
        let top = self.e.top_degree();
        let f_top = (0..=top).rev().find(|&n| self.f_rank(n) > 0).unwrap_or(0);
        let ranks: Vec<usize> = (0..=f_top).map(|n| self.f_rank(n)).collect();
        let d: Vec<IntMatrix> = (0..f_top)
            .map(|n| {
                let full = self.e.boundary_from(n + 1).transpose();
                let mut m = IntMatrix::zeros(self.f_rank(n + 1), self.f_rank(n));
                for i in 0..self.f_rank(n + 1) {
                    for j in 0..self.f_rank(n) {
                        m[(i, j)] = full[(i, j)];
                    }
                }
                m
            })
            .collect();
        CochainComplexZ::new(ranks, d).expect("subcomplex block")
    }

    /// Relative cochain complex: the non-F block of the differential.
    pub fn rel_cochain(&self) -> CochainComplexZ {
        let top = self.e.top_degree();
        let ranks: Vec<usize> = (0..=top).map(|n| self.rel_rank(n)).collect();
        let d: Vec<IntMatrix> = (0..top)
            .map(|n| {
                let full = self.e.boundary_from(n + 1).transpose();
                let mut m = IntMatrix::zeros(self.rel_rank(n + 1), self.rel_rank(n));
                for i in 0..self.rel_rank(n + 1) {
                    for j in 0..self.rel_rank(n) {
                        m[(i, j)] = full[(self.f_rank(n + 1) + i, self.f_rank(n) + j)];
                    }
                }
                m
            })
            .collect();
        CochainComplexZ::new(ranks, d).expect("relative block")
    }

    /// Degree-wise inclusion `C^n(E,F) -> C^n(E)` (cochains vanishing on F).
    pub fn inclusion(&self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.e.rank(n), self.rel_rank(n));
        for j in 0..self.rel_rank(n) {
            m[(self.f_rank(n) + j, j)] = 1;
        }
        m
    }

    /// Degree-wise restriction `C^n(E) -> C^n(F)`.
    pub fn restriction(&self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.f_rank(n), self.e.rank(n));
        for i in 0..self.f_rank(n) {
            m[(i, i)] = 1;
        }
        m
    }
}

/// The pair `(D^k, S^{k-1})`, built as the cone on the minimal sphere.
pub fn disc_pair(k: usize) -> CwPair {
    assert!(k >= 1);
    let s = sphere(k - 1);
    let e = cone(&s);
    CwPair::new(e, s.ranks.clone(), format!("(D^{k}, S^{})", k - 1)).expect("cone pair")
}

/// The pair `(RP^n, RP^{n-1})`.
pub fn rp_pair(n: usize) -> CwPair {
    assert!(n >= 1);
    let e = rp_chain(n);
    let f_ranks = vec![1; n];
    CwPair::new(e, f_ranks, format!("(RP^{n}, RP^{})", n - 1)).expect("skeleton pair")
}

/// The pair `(Cone(P), P)` for the mod-m Moore space `P = S^1 ∪_m e^2`.
///
/// The relative complex has a differential with entry `±m`, so with the
/// `×m` coefficient column the connecting composites land on classes of
/// order `m`; this is the diagram family member that makes the sign of the
/// anticommutation observable.
pub fn moore_cone_pair(m: i64) -> CwPair {
    let p = moore(m);
    let e = cone(&p);
    CwPair::new(e, p.ranks.clone(), format!("(Cone(P^2({m})), P^2({m}))")).expect("cone pair")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{cohomology, Coefficients, FGAbelianGroup};

    #[test]
    fn cone_is_contractible() {
        for x in [sphere(0), sphere(1), sphere(2), rp_chain(2), moore(4)] {
            let c = cone(&x).cochain();
            assert_eq!(
                cohomology(&c, 0, Coefficients::Integers).unwrap(),
                FGAbelianGroup::free(1)
            );
            for n in 1..=c.top_degree() {
                assert!(
                    cohomology(&c, n, Coefficients::Integers).unwrap().is_zero(),
                    "H^{n} of a cone"
                );
            }
        }
    }

    #[test]
    fn disc_pair_relative_cohomology() {
        let pair = disc_pair(2);
        let rel = pair.rel_cochain();
        assert!(cohomology(&rel, 1, Coefficients::Integers).unwrap().is_zero());
        assert_eq!(
            cohomology(&rel, 2, Coefficients::Integers).unwrap(),
            FGAbelianGroup::free(1)
        );
    }

    #[test]
    fn rp_pair_blocks() {
        let pair = rp_pair(2);
        let f = pair.f_cochain();
        assert_eq!(
            cohomology(&f, 1, Coefficients::Integers).unwrap(),
            FGAbelianGroup::free(1)
        );
        let rel = pair.rel_cochain();
        assert_eq!(rel.rank(2), 1);
        assert_eq!(rel.rank(1), 0);
    }

    #[test]
    fn moore_cone_pair_has_order_m_relative_class() {
        let pair = moore_cone_pair(4);
        let rel = pair.rel_cochain();
        assert_eq!(
            cohomology(&rel, 3, Coefficients::Integers).unwrap(),
            FGAbelianGroup::cyclic(4)
        );
    }

    #[test]
    fn restriction_after_inclusion_vanishes() {
        for pair in [disc_pair(2), rp_pair(3), moore_cone_pair(2)] {
            for n in 0..=pair.e.top_degree() {
                let comp = pair.restriction(n).mul(&pair.inclusion(n)).unwrap();
                assert!(comp.is_zero());
            }
        }
    }
}
