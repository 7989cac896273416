//! The admissibility engine for candidate group actions.
//!
//! An `ActionDescriptor` packages the rank `r`, the factor dimensions, the
//! k-invariants and the integral-triviality flag. `necessary_conditions`
//! runs the condition battery C1-C4, `rank_bound_trace` builds the subgroup
//! certificate behind the inequality `r <= b + 2c`, and `catalog` emits the
//! model actions. A pass means "consistent with a free action"; the
//! conditions are necessary, never sufficient.

use crate::f2algebra::{ideal_membership_window, parse_poly, LinearForm, RingDescriptor};
use crate::quadforms::{
    common_zero, factor_product, intersect, is_square, kernel, restrict_form, Point,
    QuadraticForm, Subspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CheckerError {
    #[error("malformed descriptor: {0}")]
    Malformed(String),
    #[error("rank_bound_trace requires a passing necessary_conditions verdict")]
    ConditionsNotChecked,
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogName(String),
    #[error("invalid catalog parameters: {0}")]
    InvalidCatalogParams(String),
    #[error("parameters outside the contrapositive regime: need s > 2c, got s={0}, c={1}")]
    OutsideRegime(usize, usize),
}

/// Weight of one projective factor in the rank bound: 0 for even
/// dimensions, 1 for 1 mod 4, 2 for 3 mod 4.
pub fn mu(n: u32) -> u32 {
    match n % 4 {
        1 => 1,
        3 => 2,
        _ => 0,
    }
}

/// `sum_i mu(n_i)`.
pub fn bound(dims: &[u32]) -> u32 {
    dims.iter().copied().map(mu).sum()
}

/// Outcome of removing the dimension-0 and dimension-1 factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StripInfo {
    /// Indices (1-based) of removed n_i = 1 factors.
    pub ones: Vec<usize>,
    /// Indices (1-based) of removed n_i = 0 factors.
    pub zeros: Vec<usize>,
    /// Dimensions kept (all >= 2), in order.
    pub kept_dims: Vec<u32>,
    /// Original positions of the kept factors (1-based).
    pub kept_indices: Vec<usize>,
}

/// Removes `n_i = 1` entries (counted by `ones`, each contributing 1 to the
/// bound) and `n_i = 0` entries (no bound contribution), keeping everything
/// else: `bound(dims) = bound(kept) + ones.len()`.
pub fn strip_dim_one(dims: &[u32]) -> StripInfo {
    let mut info = StripInfo {
        ones: Vec::new(),
        zeros: Vec::new(),
        kept_dims: Vec::new(),
        kept_indices: Vec::new(),
    };
    for (idx, &n) in dims.iter().enumerate() {
        match n {
            0 => info.zeros.push(idx + 1),
            1 => info.ones.push(idx + 1),
            _ => {
                info.kept_dims.push(n);
                info.kept_indices.push(idx + 1);
            }
        }
    }
    info
}

/// Candidate action data: the checker's input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDescriptor {
    pub r: usize,
    pub dims: Vec<u32>,
    pub k_invariants: Vec<QuadraticForm>,
    pub integral_trivial: bool,
}

impl ActionDescriptor {
    pub fn new(
        r: usize,
        dims: Vec<u32>,
        k_invariants: Vec<QuadraticForm>,
        integral_trivial: bool,
    ) -> Result<Self, CheckerError> {
        let desc = ActionDescriptor {
            r,
            dims,
            k_invariants,
            integral_trivial,
        };
        desc.validate()?;
        Ok(desc)
    }

    pub fn validate(&self) -> Result<(), CheckerError> {
        if self.r > crate::f2algebra::MAX_GENERATORS {
            return Err(CheckerError::Malformed(format!(
                "r: rank {} exceeds the supported maximum {}",
                self.r,
                crate::f2algebra::MAX_GENERATORS
            )));
        }
        if self.dims.len() != self.k_invariants.len() {
            return Err(CheckerError::Malformed(format!(
                "k_invariants: {} entries for {} dims",
                self.k_invariants.len(),
                self.dims.len()
            )));
        }
        for (i, form) in self.k_invariants.iter().enumerate() {
            if form.r() != self.r {
                return Err(CheckerError::Malformed(format!(
                    "k_invariants[{i}]: form over {} variables, descriptor has r = {}",
                    form.r(),
                    self.r
                )));
            }
        }
        Ok(())
    }

    /// Window bound used by the spectral-sequence front end.
    pub fn default_window(&self) -> u32 {
        self.dims.iter().sum::<u32>() + 6
    }

    pub fn from_json_str(text: &str) -> Result<Self, CheckerError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CheckerError::Malformed(format!("json: {e}")))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self, CheckerError> {
        let obj = value
            .as_object()
            .ok_or_else(|| CheckerError::Malformed("top level: expected an object".into()))?;
        let r = obj
            .get("r")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| CheckerError::Malformed("r: expected a non-negative integer".into()))?
            as usize;
        let dims: Vec<u32> = obj
            .get("dims")
            .and_then(|v| v.as_array())
            .ok_or_else(|| CheckerError::Malformed("dims: expected an array".into()))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|n| n as u32)
                    .ok_or_else(|| CheckerError::Malformed("dims: expected integers".into()))
            })
            .collect::<Result<_, _>>()?;
        let ring = RingDescriptor::free_x(r)
            .map_err(|e| CheckerError::Malformed(format!("r: {e}")))?;
        let k_values = obj
            .get("k_invariants")
            .and_then(|v| v.as_array())
            .ok_or_else(|| CheckerError::Malformed("k_invariants: expected an array".into()))?;
        let mut k_invariants = Vec::new();
        for (i, v) in k_values.iter().enumerate() {
            let form = match v {
                serde_json::Value::String(s) => {
                    let poly = parse_poly(s, &ring)
                        .map_err(|e| CheckerError::Malformed(format!("k_invariants[{i}]: {e}")))?;
                    QuadraticForm::from_poly(&poly)
                        .map_err(|e| CheckerError::Malformed(format!("k_invariants[{i}]: {e}")))?
                }
                other => serde_json::from_value(other.clone())
                    .map_err(|e| CheckerError::Malformed(format!("k_invariants[{i}]: {e}")))?,
            };
            k_invariants.push(form);
        }
        let integral_trivial = obj
            .get("integral_trivial")
            .and_then(|v| v.as_bool())
            .ok_or_else(|| {
                CheckerError::Malformed("integral_trivial: expected a boolean".into())
            })?;
        Self::new(r, dims, k_invariants, integral_trivial)
    }
}

impl Serialize for ActionDescriptor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ActionDescriptor", 4)?;
        s.serialize_field("r", &self.r)?;
        s.serialize_field("dims", &self.dims)?;
        let texts: Vec<String> = self.k_invariants.iter().map(|f| f.to_string()).collect();
        s.serialize_field("k_invariants", &texts)?;
        s.serialize_field("integral_trivial", &self.integral_trivial)?;
        s.end()
    }
}

/// One entry of the condition battery.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub id: String,
    pub ok: bool,
    /// 1-based factor index the finding refers to, when applicable.
    pub index: Option<usize>,
    pub detail: String,
    pub witness: Option<String>,
}

/// Certificate emitted by a rank-bound trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceCertificate {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub combos_tried: usize,
    /// (factor index, chosen linear factor, its factor pair).
    pub chosen_factors: Vec<(usize, String, String)>,
    pub h_basis: Vec<String>,
    pub s: usize,
    pub restricted_c_forms: Vec<String>,
    pub c_scan: String,
    pub r: usize,
    pub bound: u32,
    pub inequality: String,
    pub attains_bound: bool,
}

/// Outcome of the battery and, when it ran, the trace.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub label: String,
    pub stripped: StripInfo,
    pub conditions: Vec<ConditionCheck>,
    pub trace: Option<TraceCertificate>,
}

impl Verdict {
    pub fn first_failure(&self) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| !c.ok)
    }
}

/// The necessary-condition battery, evaluated in order:
/// C1 (even dimension forces a zero invariant), C2 (a factorization exists
/// in dimensions 1 mod 4), C2' (a square when the integral action is
/// trivial), C3 (`Sq1(alpha_i)` lies in the ideal of the invariants), and
/// C4 (no common zeros, over the full invariant list including stripped
/// factors).
pub fn necessary_conditions(desc: &ActionDescriptor) -> Result<Verdict, CheckerError> {
    desc.validate()?;
    let strip = strip_dim_one(&desc.dims);
    let mut conditions = Vec::new();
    let kept: Vec<(usize, u32, &QuadraticForm)> = strip
        .kept_indices
        .iter()
        .zip(&strip.kept_dims)
        .map(|(&idx, &n)| (idx, n, &desc.k_invariants[idx - 1]))
        .collect();

    // C1: n_i even => alpha_i = 0.
    let mut c1 = ConditionCheck {
        id: "C1".into(),
        ok: true,
        index: None,
        detail: "even-dimensional factors carry zero k-invariants".into(),
        witness: None,
    };
    for &(idx, n, form) in &kept {
        if n % 2 == 0 && !form.is_zero() {
            c1.ok = false;
            c1.index = Some(idx);
            c1.witness = Some(form.to_string());
            c1.detail = format!("factor {idx} has even dimension {n} but nonzero k-invariant");
            break;
        }
    }
    conditions.push(c1);

    // C2: n_i = 1 mod 4 => alpha_i factors as a product of linear forms.
    let mut c2 = ConditionCheck {
        id: "C2".into(),
        ok: true,
        index: None,
        detail: "k-invariants in dimensions 1 mod 4 split into linear factors".into(),
        witness: None,
    };
    for &(idx, n, form) in &kept {
        if n % 4 == 1 {
            match factor_product(form).first() {
                Some((l, m)) => {
                    if c2.witness.is_none() {
                        c2.witness = Some(format!("alpha_{idx} = ({l})*({m})"));
                    }
                }
                None => {
                    c2.ok = false;
                    c2.index = Some(idx);
                    c2.witness = Some(form.to_string());
                    c2.detail =
                        format!("factor {idx} (dimension {n}) has an irreducible k-invariant");
                    break;
                }
            }
        }
    }
    conditions.push(c2);

    // C2': with trivial integral action, those invariants must be squares.
    if desc.integral_trivial {
        let mut c2p = ConditionCheck {
            id: "C2'".into(),
            ok: true,
            index: None,
            detail: "trivial integral action forces square k-invariants in dimensions 1 mod 4"
                .into(),
            witness: None,
        };
        for &(idx, n, form) in &kept {
            if n % 4 == 1 {
                match is_square(form) {
                    Some(l) => {
                        if c2p.witness.is_none() {
                            c2p.witness = Some(format!("alpha_{idx} = ({l})^2"));
                        }
                    }
                    None => {
                        c2p.ok = false;
                        c2p.index = Some(idx);
                        c2p.witness = Some(form.to_string());
                        c2p.detail = format!(
                            "factor {idx} (dimension {n}) has a non-square k-invariant despite the trivial integral action"
                        );
                        break;
                    }
                }
            }
        }
        conditions.push(c2p);
    }

    // C3: Sq1(alpha_i) lies in the ideal generated by the kept invariants.
    let mut c3 = ConditionCheck {
        id: "C3".into(),
        ok: true,
        index: None,
        detail: "Sq1 of each 1-mod-4 k-invariant lies in the ideal of the k-invariants".into(),
        witness: None,
    };
    let gens: Vec<_> = kept.iter().map(|(_, _, f)| f.to_poly()).collect();
    for &(idx, n, form) in &kept {
        if n % 4 == 1 {
            let target = form.to_poly().sq1();
            match ideal_membership_window(&target, &gens, 3)
                .map_err(|e| CheckerError::Malformed(e.to_string()))?
            {
                Some(witness) => {
                    if c3.witness.is_none() {
                        let parts: Vec<String> = witness
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(g, c)| format!("({c})*alpha_{}", kept[g].0))
                            .collect();
                        let rhs = if parts.is_empty() {
                            "0".to_string()
                        } else {
                            parts.join(" + ")
                        };
                        c3.witness = Some(format!("Sq1(alpha_{idx}) = {rhs}"));
                    }
                }
                None => {
                    c3.ok = false;
                    c3.index = Some(idx);
                    c3.witness = Some(target.to_string());
                    c3.detail = format!(
                        "Sq1 of the factor-{idx} k-invariant is not in the ideal of the k-invariants"
                    );
                    break;
                }
            }
        }
    }
    conditions.push(c3);

    // C4: no common zeros, over every invariant of the descriptor.
    let mut c4 = ConditionCheck {
        id: "C4".into(),
        ok: true,
        index: None,
        detail: "the k-invariants have no common nonzero zero".into(),
        witness: None,
    };
    if let Some(point) = common_zero(&desc.k_invariants, desc.r) {
        c4.ok = false;
        c4.witness = Some(point.to_string());
        c4.detail = "all k-invariants vanish at a nonzero point".into();
    }
    conditions.push(c4);

    let pass = conditions.iter().all(|c| c.ok);
    Ok(Verdict {
        pass,
        label: if pass {
            "necessary conditions hold".into()
        } else {
            "fails necessary conditions".into()
        },
        stripped: strip,
        conditions,
        trace: None,
    })
}

/// The subgroup-certificate trace behind `r <= b + 2c`.
///
/// Indices split into the `a` block (even), `b` block (1 mod 4) and `c`
/// block (3 mod 4). Every combination of linear-factor choices for the `b`
/// block is tried (both factors of each pair); `H` is the intersection of
/// the chosen kernels; the restrictions of the `a`/`b` forms to `H` must
/// vanish and the restricted `c` forms must have no common zero over `H`.
/// The best passing combination (largest `H`, earliest in scan order) is
/// certified. With no passing combination the verdict is inconclusive:
/// the data is inconsistent with a free action.
pub fn rank_bound_trace(
    desc: &ActionDescriptor,
    conditions: &Verdict,
) -> Result<Verdict, CheckerError> {
    if !conditions.pass {
        return Err(CheckerError::ConditionsNotChecked);
    }
    let strip = strip_dim_one(&desc.dims);
    let ones = strip.ones.len() as u32;
    let kept: Vec<(usize, u32, &QuadraticForm)> = strip
        .kept_indices
        .iter()
        .zip(&strip.kept_dims)
        .map(|(&idx, &n)| (idx, n, &desc.k_invariants[idx - 1]))
        .collect();

    let a_block: Vec<_> = kept.iter().filter(|(_, n, _)| n % 2 == 0).collect();
    let b_block: Vec<_> = kept.iter().filter(|(_, n, _)| n % 4 == 1).collect();
    let c_block: Vec<_> = kept.iter().filter(|(_, n, _)| n % 4 == 3).collect();
    let (a, b, c) = (a_block.len(), b_block.len(), c_block.len());

    // Candidate linear factors per b-block index, in scan order.
    type FactorChoice = (LinearForm, (LinearForm, LinearForm));
    let mut candidates: Vec<(usize, Vec<FactorChoice>)> = Vec::new();
    for &&(idx, _, form) in &b_block {
        let mut list: Vec<FactorChoice> = Vec::new();
        for (l, m) in factor_product(form) {
            if !list.iter().any(|(f, _)| *f == l) {
                list.push((l, (l, m)));
            }
            if !list.iter().any(|(f, _)| *f == m) {
                list.push((m, (l, m)));
            }
        }
        if list.is_empty() {
            return Err(CheckerError::Malformed(format!(
                "factor {idx} passed C2 but has no factorization"
            )));
        }
        candidates.push((idx, list));
    }

    type Choice = (usize, LinearForm, (LinearForm, LinearForm));
    let mut combos_tried = 0usize;
    let mut best: Option<(usize, Vec<Choice>, Subspace, Option<Point>)> = None;
    let mut counters = vec![0usize; candidates.len()];
    'outer: loop {
        combos_tried += 1;
        let chosen: Vec<Choice> = candidates
            .iter()
            .zip(&counters)
            .map(|((idx, list), &ci)| (*idx, list[ci].0, list[ci].1))
            .collect();
        let h = if chosen.is_empty() {
            Subspace::full(desc.r)
        } else {
            let kernels: Vec<Subspace> = chosen.iter().map(|(_, l, _)| kernel(l)).collect();
            intersect(&kernels).map_err(|e| CheckerError::Malformed(e.to_string()))?
        };
        // res_H alpha_i = 0 for the a- and b-blocks.
        let restrictions_vanish = a_block
            .iter()
            .chain(b_block.iter())
            .all(|&&(_, _, form)| restrict_form(form, &h).is_zero());
        if restrictions_vanish {
            let restricted: Vec<QuadraticForm> = c_block
                .iter()
                .map(|&&(_, _, form)| restrict_form(form, &h))
                .collect();
            let scan = common_zero(&restricted, h.dim());
            if scan.is_none() {
                let better = match &best {
                    None => true,
                    Some((dim, _, _, _)) => h.dim() > *dim,
                };
                if better {
                    best = Some((h.dim(), chosen.clone(), h.clone(), scan));
                }
            }
        }
        // Advance the odometer over factor choices.
        if candidates.is_empty() {
            break;
        }
        let mut pos = candidates.len() - 1;
        loop {
            counters[pos] += 1;
            if counters[pos] < candidates[pos].1.len() {
                break;
            }
            counters[pos] = 0;
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
        }
    }

    let total_bound = bound(&desc.dims);
    let mut verdict = Verdict {
        pass: false,
        label: String::new(),
        stripped: strip,
        conditions: conditions.conditions.clone(),
        trace: None,
    };
    match best {
        None => {
            verdict.label =
                "inconclusive: no factor choice avoids a common zero on the restricted forms; \
                 the data is inconsistent with a free action"
                    .into();
        }
        Some((s, chosen, h, _)) => {
            let r = desc.r;
            let chain_holds = (r - s) <= b && s <= 2 * c;
            let pass = chain_holds && (r as u32) <= total_bound;
            let restricted: Vec<String> = c_block
                .iter()
                .map(|&&(_, _, form)| restrict_form(form, &h).to_string())
                .collect();
            verdict.pass = pass;
            verdict.label = if pass {
                "consistent with a free action (necessary conditions only)".into()
            } else {
                "rank exceeds the certified bound".into()
            };
            verdict.trace = Some(TraceCertificate {
                a,
                b,
                c,
                combos_tried,
                chosen_factors: chosen
                    .iter()
                    .map(|(idx, l, (p, q))| (*idx, l.to_string(), format!("({p})*({q})")))
                    .collect(),
                h_basis: h.basis_points().iter().map(ToString::to_string).collect(),
                s,
                restricted_c_forms: restricted,
                c_scan: "no common zero".into(),
                r,
                bound: total_bound,
                inequality: format!(
                    "r = {r} <= (r - s) + s = {} + {s} <= b + 2c{} = {}{}; bound(dims) = {total_bound}",
                    r - s,
                    if ones > 0 { " + l" } else { "" },
                    b + 2 * c,
                    if ones > 0 {
                        format!(" + {ones}")
                    } else {
                        String::new()
                    },
                ),
                attains_bound: pass && desc.r as u32 == total_bound,
            });
        }
    }
    Ok(verdict)
}

/// `necessary_conditions` followed by `rank_bound_trace` when they pass.
pub fn verify(desc: &ActionDescriptor) -> Result<Verdict, CheckerError> {
    let nc = necessary_conditions(desc)?;
    if !nc.pass {
        return Ok(nc);
    }
    rank_bound_trace(desc, &nc)
}

/// Report of the small-case search: every tested c-tuple of quadratic forms
/// on `F2^s` with `s > 2c` must have a common nonzero zero.
#[derive(Debug, Clone, Serialize)]
pub struct PropDReport {
    pub s: usize,
    pub c: usize,
    pub exhaustive: bool,
    pub tuples_tested: u64,
    pub counterexamples: Vec<Vec<String>>,
}

/// Exhaustive when the tuple space is at most 2^24, otherwise `samples`
/// random tuples from a fixed-seed generator.
pub fn propd_smalltest(
    s: usize,
    c: usize,
    samples: u64,
    seed: u64,
) -> Result<PropDReport, CheckerError> {
    if s <= 2 * c {
        return Err(CheckerError::OutsideRegime(s, c));
    }
    let bits = QuadraticForm::coefficient_bits(s) as u64;
    let exhaustive = bits * c as u64 <= 24;
    let mut report = PropDReport {
        s,
        c,
        exhaustive,
        tuples_tested: 0,
        counterexamples: Vec::new(),
    };
    let check_tuple = |forms: &[QuadraticForm], report: &mut PropDReport| {
        report.tuples_tested += 1;
        if common_zero(forms, s).is_none() {
            report
                .counterexamples
                .push(forms.iter().map(ToString::to_string).collect());
        }
    };
    if exhaustive {
        let per_form = 1u64 << bits;
        let total = per_form.pow(c as u32);
        for code in 0..total {
            let mut rest = code;
            let forms: Vec<QuadraticForm> = (0..c)
                .map(|_| {
                    let f = form_from_code(s, rest % per_form);
                    rest /= per_form;
                    f
                })
                .collect();
            check_tuple(&forms, &mut report);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let forms: Vec<QuadraticForm> = (0..c)
                .map(|_| form_from_code(s, rng.gen_range(0..1u64 << bits)))
                .collect();
            check_tuple(&forms, &mut report);
        }
    }
    Ok(report)
}

fn form_from_code(r: usize, code: u64) -> QuadraticForm {
    let cross_bits = r * (r - 1) / 2;
    QuadraticForm::from_parts(
        r,
        (code >> cross_bits) as u16,
        (code & ((1u64 << cross_bits) - 1)) as u128,
    )
}

/// A catalog expression: the model actions and the two combinators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogSpec {
    /// `r = 2` on `RP^{4m+3}` with the norm-form invariant; integral action
    /// trivial.
    Q8Join(u32),
    /// `r = 1` on `RP^{2m+1}` with invariant `x^2`; integral action trivial.
    Z4(u32),
    /// `r = 2` on `RP^{2m+1}` with invariant `x1*x2`; integral action
    /// trivial exactly for odd `m`.
    D8(u32),
    /// `r = 2` on `RP^{4m+1} x RP^{2l+1}` with invariants `x1*x2` and
    /// `(x1+x2)^2`; integral action nontrivial.
    JoProduct(u32, u32),
    /// Block sum on disjoint variables.
    Product(Box<CatalogSpec>, Box<CatalogSpec>),
    /// Substitution along a linear surjection (rows = old generators).
    Inflate(Box<CatalogSpec>, Vec<Vec<u8>>),
}

impl CatalogSpec {
    pub fn build(&self) -> Result<ActionDescriptor, CheckerError> {
        match self {
            CatalogSpec::Q8Join(m) => {
                let mut alpha = QuadraticForm::zero(2);
                alpha.set_diag(0, true);
                alpha.set_diag(1, true);
                alpha.set_cross(0, 1, true);
                ActionDescriptor::new(2, vec![4 * m + 3], vec![alpha], true)
            }
            CatalogSpec::Z4(m) => {
                let mut alpha = QuadraticForm::zero(1);
                alpha.set_diag(0, true);
                ActionDescriptor::new(1, vec![2 * m + 1], vec![alpha], true)
            }
            CatalogSpec::D8(m) => {
                let mut alpha = QuadraticForm::zero(2);
                alpha.set_cross(0, 1, true);
                ActionDescriptor::new(2, vec![2 * m + 1], vec![alpha], *m % 2 == 1)
            }
            CatalogSpec::JoProduct(m, l) => {
                if *m < 1 || *l < 1 {
                    return Err(CheckerError::InvalidCatalogParams(
                        "jo_product needs m >= 1 and l >= 1".into(),
                    ));
                }
                let mut alpha1 = QuadraticForm::zero(2);
                alpha1.set_cross(0, 1, true);
                let mut alpha2 = QuadraticForm::zero(2);
                alpha2.set_diag(0, true);
                alpha2.set_diag(1, true);
                ActionDescriptor::new(2, vec![4 * m + 1, 2 * l + 1], vec![alpha1, alpha2], false)
            }
            CatalogSpec::Product(left, right) => {
                let d1 = left.build()?;
                let d2 = right.build()?;
                let r = d1.r + d2.r;
                if r > crate::f2algebra::MAX_GENERATORS {
                    return Err(CheckerError::InvalidCatalogParams(format!(
                        "product rank {r} exceeds the maximum"
                    )));
                }
                let mut dims = d1.dims.clone();
                dims.extend_from_slice(&d2.dims);
                let mut forms = Vec::new();
                for f in &d1.k_invariants {
                    forms.push(embed_form(f, r, 0));
                }
                for f in &d2.k_invariants {
                    forms.push(embed_form(f, r, d1.r));
                }
                ActionDescriptor::new(r, dims, forms, d1.integral_trivial && d2.integral_trivial)
            }
            CatalogSpec::Inflate(inner, matrix) => {
                let d = inner.build()?;
                let rows = matrix.len();
                if rows != d.r {
                    return Err(CheckerError::InvalidCatalogParams(format!(
                        "surjection matrix has {rows} rows for rank {}",
                        d.r
                    )));
                }
                let r_new = matrix.first().map_or(0, Vec::len);
                if matrix.iter().any(|row| row.len() != r_new) {
                    return Err(CheckerError::InvalidCatalogParams(
                        "surjection matrix rows differ in length".into(),
                    ));
                }
                if r_new > crate::f2algebra::MAX_GENERATORS {
                    return Err(CheckerError::InvalidCatalogParams(format!(
                        "inflated rank {r_new} exceeds the maximum"
                    )));
                }
                // A surjection of groups dualizes to an injection on degree-1
                // classes: the matrix must have full row rank over F2.
                let bit_rows: Vec<crate::f2linalg::BitVec> = matrix
                    .iter()
                    .map(|row| {
                        let mut v = crate::f2linalg::BitVec::zeros(r_new);
                        for (j, &x) in row.iter().enumerate() {
                            if x % 2 == 1 {
                                v.set(j, true);
                            }
                        }
                        v
                    })
                    .collect();
                let rank = crate::f2linalg::BitMatrix::from_rows(bit_rows, r_new).rank();
                if rank != d.r {
                    return Err(CheckerError::InvalidCatalogParams(
                        "matrix does not define a surjection (row rank too small)".into(),
                    ));
                }
                let images: Vec<LinearForm> = matrix
                    .iter()
                    .map(|row| {
                        LinearForm::from_coeffs(&row.iter().map(|&x| x % 2 == 1).collect::<Vec<_>>())
                    })
                    .collect();
                let target = RingDescriptor::free_x(r_new)
                    .map_err(|e| CheckerError::InvalidCatalogParams(e.to_string()))?;
                let forms = d
                    .k_invariants
                    .iter()
                    .map(|f| {
                        let poly = f
                            .to_poly()
                            .substitute(&images, &target)
                            .map_err(|e| CheckerError::InvalidCatalogParams(e.to_string()))?;
                        QuadraticForm::from_poly(&poly)
                            .map_err(|e| CheckerError::InvalidCatalogParams(e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ActionDescriptor::new(r_new, d.dims.clone(), forms, d.integral_trivial)
            }
        }
    }

    /// Parses `name(arg, ...)` expressions: integers, nested specs, and
    /// `[[0,1],[1,0]]` matrices for `inflate`.
    pub fn parse(text: &str) -> Result<CatalogSpec, CheckerError> {
        let mut parser = SpecParser {
            text: text.as_bytes(),
            pos: 0,
        };
        let spec = parser.parse_spec()?;
        parser.skip_ws();
        if parser.pos != parser.text.len() {
            return Err(CheckerError::InvalidCatalogParams(format!(
                "trailing input at byte {}",
                parser.pos
            )));
        }
        Ok(spec)
    }
}

fn embed_form(f: &QuadraticForm, r: usize, offset: usize) -> QuadraticForm {
    let mut out = QuadraticForm::zero(r);
    for j in 0..f.r() {
        if f.diag_coeff(j) {
            out.set_diag(j + offset, true);
        }
        for k in (j + 1)..f.r() {
            if f.cross_coeff(j, k) {
                out.set_cross(j + offset, k + offset, true);
            }
        }
    }
    out
}

struct SpecParser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl SpecParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, ch: u8) -> Result<(), CheckerError> {
        self.skip_ws();
        if self.pos < self.text.len() && self.text[self.pos] == ch {
            self.pos += 1;
            Ok(())
        } else {
            Err(CheckerError::InvalidCatalogParams(format!(
                "expected `{}` at byte {}",
                ch as char, self.pos
            )))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn parse_int(&mut self) -> Result<u32, CheckerError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(CheckerError::InvalidCatalogParams(format!(
                "expected a number at byte {start}"
            )));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| CheckerError::InvalidCatalogParams("number out of range".into()))
    }

    fn parse_matrix(&mut self) -> Result<Vec<Vec<u8>>, CheckerError> {
        self.expect(b'[')?;
        let mut rows = Vec::new();
        loop {
            self.expect(b'[')?;
            let mut row = Vec::new();
            loop {
                row.push((self.parse_int()? % 2) as u8);
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    _ => break,
                }
            }
            self.expect(b']')?;
            rows.push(row);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        self.expect(b']')?;
        Ok(rows)
    }

    fn parse_spec(&mut self) -> Result<CatalogSpec, CheckerError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string();
        if name.is_empty() {
            return Err(CheckerError::InvalidCatalogParams(format!(
                "expected a name at byte {start}"
            )));
        }
        self.expect(b'(')?;
        let spec = match name.as_str() {
            "q8_join" => CatalogSpec::Q8Join(self.parse_int()?),
            "z4" => CatalogSpec::Z4(self.parse_int()?),
            "d8" => CatalogSpec::D8(self.parse_int()?),
            "jo_product" => {
                let m = self.parse_int()?;
                self.expect(b',')?;
                let l = self.parse_int()?;
                CatalogSpec::JoProduct(m, l)
            }
            "product" => {
                let left = self.parse_spec()?;
                self.expect(b',')?;
                let right = self.parse_spec()?;
                CatalogSpec::Product(Box::new(left), Box::new(right))
            }
            "inflate" => {
                let inner = self.parse_spec()?;
                self.expect(b',')?;
                let matrix = self.parse_matrix()?;
                CatalogSpec::Inflate(Box::new(inner), matrix)
            }
            other => return Err(CheckerError::UnknownCatalogName(other.to_string())),
        };
        self.expect(b')')?;
        Ok(spec)
    }
}

/// Builds a catalog descriptor from a name and flat integer parameters,
/// or from a full expression when `name` contains parentheses.
pub fn catalog(name: &str, params: &[u32]) -> Result<ActionDescriptor, CheckerError> {
    let spec = if name.contains('(') {
        CatalogSpec::parse(name)?
    } else {
        match (name, params) {
            ("q8_join", [m]) => CatalogSpec::Q8Join(*m),
            ("z4", [m]) => CatalogSpec::Z4(*m),
            ("d8", [m]) => CatalogSpec::D8(*m),
            ("jo_product", [m, l]) => CatalogSpec::JoProduct(*m, *l),
            ("q8_join" | "z4" | "d8" | "jo_product", _) => {
                return Err(CheckerError::InvalidCatalogParams(format!(
                    "wrong parameter count for {name}"
                )))
            }
            _ => return Err(CheckerError::UnknownCatalogName(name.to_string())),
        }
    };
    spec.build()
}

/// Names and signatures for `examples list`.
pub fn catalog_names() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "q8_join(m)",
            "r=2 on RP^{4m+3}, invariant x1^2+x1*x2+x2^2, trivial integral action",
        ),
        ("z4(m)", "r=1 on RP^{2m+1}, invariant x1^2, trivial integral action"),
        (
            "d8(m)",
            "r=2 on RP^{2m+1}, invariant x1*x2, integral action trivial iff m is odd",
        ),
        (
            "jo_product(m,l)",
            "r=2 on RP^{4m+1} x RP^{2l+1}, invariants x1*x2 and x1^2+x2^2",
        ),
        ("product(spec,spec)", "block sum on disjoint variables"),
        ("inflate(spec,[[..]])", "substitution along a linear surjection matrix"),
    ]
}
