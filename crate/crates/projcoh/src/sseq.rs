//! Windowed pages of the Borel spectral sequence.
//!
//! For a candidate action with invariants `alpha_1..alpha_k` the second page
//! is the bigraded tensor product of `F2[x_1..x_r]` with the truncated ring
//! on `t_1..t_k`; the differential is the derivation with
//! `d2(t_i) = alpha_i`. Everything is computed inside a total-degree window
//! with explicit validity flags: a slot of the third page is reported only
//! when both the incoming and outgoing differentials are known inside the
//! window. `d3` is filled in only on the subalgebra generated by the
//! `[t_i^2]`, the base classes and the surviving `t_j` with `alpha_j = 0`;
//! other slots are flagged unknown rather than guessed.

use crate::checker::ActionDescriptor;
use crate::f2algebra::{monomials_of_degree, Monomial, PolyF2, RingDescriptor};
use crate::f2linalg::{BitMatrix, BitVec, Quotient};
use crate::quadforms::Point;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SseqError {
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    #[error("window {0} is too small; need at least 2")]
    WindowTooSmall(u32),
    #[error("{0}")]
    Internal(String),
}

/// Basis label of the second page: an x-monomial paired with an admissible
/// t-monomial.
pub type MonPair = (Monomial, Monomial);

/// A formal F2 sum of basis pairs, with the multiplicative structure of the
/// page (x-parts multiply freely, t-parts truncate).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct E2Elem {
    pub terms: BTreeSet<MonPair>,
}

impl E2Elem {
    pub fn zero() -> Self {
        E2Elem::default()
    }

    pub fn from_pair(x: Monomial, t: Monomial) -> Self {
        let mut e = Self::zero();
        e.terms.insert((x, t));
        e
    }

    pub fn toggle(&mut self, pair: MonPair) {
        if !self.terms.remove(&pair) {
            self.terms.insert(pair);
        }
    }

    pub fn add(&self, other: &E2Elem) -> E2Elem {
        let mut out = self.clone();
        for pair in &other.terms {
            out.toggle(pair.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Slot basis of the second page at `(p, q)`.
#[derive(Debug, Clone)]
pub struct E2Slot {
    pub basis: Vec<MonPair>,
}

impl E2Slot {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, pair: &MonPair) -> Option<usize> {
        self.basis.binary_search(pair).ok()
    }

    pub fn vector_of(&self, elem: &E2Elem) -> Option<BitVec> {
        let mut v = BitVec::zeros(self.basis.len());
        for pair in &elem.terms {
            v.set(self.index_of(pair)?, true);
        }
        Some(v)
    }

    pub fn element_of(&self, v: &BitVec) -> E2Elem {
        let mut e = E2Elem::zero();
        for i in v.ones() {
            e.toggle(self.basis[i].clone());
        }
        e
    }
}

/// Second page of the spectral sequence inside a total-degree window.
pub struct E2Page {
    pub window: u32,
    pub r: usize,
    pub dims: Vec<u32>,
    x_ring: RingDescriptor,
    t_ring: RingDescriptor,
    alphas: Vec<PolyF2>,
    alphas_zero: Vec<bool>,
    slots: BTreeMap<(u32, u32), E2Slot>,
    d2: BTreeMap<(u32, u32), BitMatrix>,
}

/// Builds the second page: bases for all `(p, q)` with `p + q <= window`,
/// differentials filled from `d2(x^A t^B) = sum over odd B_i of
/// x^A alpha_i t^{B - e_i}`.
pub fn build_e2(desc: &ActionDescriptor, window: u32) -> Result<E2Page, SseqError> {
    desc.validate().map_err(|e| SseqError::Descriptor(e.to_string()))?;
    if window < 2 {
        return Err(SseqError::WindowTooSmall(window));
    }
    let x_ring = RingDescriptor::free_x(desc.r).map_err(|e| SseqError::Descriptor(e.to_string()))?;
    let caps: Vec<u16> = desc.dims.iter().map(|&n| n as u16).collect();
    let t_ring = if caps.is_empty() {
        RingDescriptor::free_t(0).map_err(|e| SseqError::Descriptor(e.to_string()))?
    } else {
        RingDescriptor::truncated_t(&caps).map_err(|e| SseqError::Descriptor(e.to_string()))?
    };
    let alphas: Vec<PolyF2> = desc.k_invariants.iter().map(|f| f.to_poly()).collect();
    let alphas_zero: Vec<bool> = alphas.iter().map(PolyF2::is_zero).collect();

    let mut slots = BTreeMap::new();
    for p in 0..=window {
        for q in 0..=(window - p) {
            let mut basis = Vec::new();
            for x in monomials_of_degree(&x_ring, p) {
                for t in monomials_of_degree(&t_ring, q) {
                    basis.push((x.clone(), t));
                }
            }
            basis.sort();
            slots.insert((p, q), E2Slot { basis });
        }
    }

    let mut page = E2Page {
        window,
        r: desc.r,
        dims: desc.dims.clone(),
        x_ring,
        t_ring,
        alphas,
        alphas_zero,
        slots,
        d2: BTreeMap::new(),
    };

    let mut d2 = BTreeMap::new();
    for (&(p, q), slot) in &page.slots {
        if q == 0 || p + q + 1 > window {
            continue;
        }
        let target = &page.slots[&(p + 2, q - 1)];
        let mut matrix = BitMatrix::zeros(target.dim(), slot.dim());
        for (j, pair) in slot.basis.iter().enumerate() {
            let image = page.d2_of_pair(pair);
            for t in &image.terms {
                let i = target.index_of(t).ok_or_else(|| {
                    SseqError::Internal("d2 image leaves the slot basis".into())
                })?;
                matrix.toggle(i, j);
            }
        }
        d2.insert((p, q), matrix);
    }
    page.d2 = d2;
    Ok(page)
}

impl E2Page {
    pub fn slot(&self, p: u32, q: u32) -> Option<&E2Slot> {
        self.slots.get(&(p, q))
    }

    pub fn d2_matrix(&self, p: u32, q: u32) -> Option<&BitMatrix> {
        self.d2.get(&(p, q))
    }

    pub fn alphas(&self) -> &[PolyF2] {
        &self.alphas
    }

    pub fn x_ring(&self) -> &RingDescriptor {
        &self.x_ring
    }

    pub fn t_ring(&self) -> &RingDescriptor {
        &self.t_ring
    }

    /// `d2` of one basis pair, as a formal element.
    pub fn d2_of_pair(&self, (x, t): &MonPair) -> E2Elem {
        let mut out = E2Elem::zero();
        for i in 0..self.dims.len() {
            if t.exp(i) % 2 == 1 && !self.alphas_zero[i] {
                let mut t_exps = t.exps().to_vec();
                t_exps[i] -= 1;
                let t_new = Monomial::new(t_exps);
                let x_poly = PolyF2::from_monomials(&self.x_ring, [x.clone()])
                    .mul(&self.alphas[i])
                    .expect("same ring");
                for xt in x_poly.terms() {
                    out.toggle((xt.clone(), t_new.clone()));
                }
            }
        }
        out
    }

    /// `d2` extended linearly to formal elements.
    pub fn d2_of_elem(&self, elem: &E2Elem) -> E2Elem {
        let mut out = E2Elem::zero();
        for pair in &elem.terms {
            out = out.add(&self.d2_of_pair(pair));
        }
        out
    }

    /// Product of two formal elements (t-part truncates).
    pub fn mul_elems(&self, a: &E2Elem, b: &E2Elem) -> E2Elem {
        let mut out = E2Elem::zero();
        for (ax, at) in &a.terms {
            for (bx, bt) in &b.terms {
                let x = PolyF2::from_monomials(&self.x_ring, [ax.clone()])
                    .mul(&PolyF2::from_monomials(&self.x_ring, [bx.clone()]))
                    .expect("same ring");
                let t = PolyF2::from_monomials(&self.t_ring, [at.clone()])
                    .mul(&PolyF2::from_monomials(&self.t_ring, [bt.clone()]))
                    .expect("same ring");
                for xm in x.terms() {
                    for tm in t.terms() {
                        out.toggle((xm.clone(), tm.clone()));
                    }
                }
            }
        }
        out
    }

    /// Checks `d2 ∘ d2 = 0` on every composable pair of stored matrices.
    pub fn d2_squares_to_zero(&self) -> bool {
        for (&(p, q), first) in &self.d2 {
            if let Some(second) = self.d2.get(&(p + 2, q - 1)) {
                if !second.mul(first).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Status of the partial `d3` on a slot of the third page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum D3Status {
    NotComputed,
    /// Matrix from this slot's representatives to the target slot's.
    Known(BitMatrix),
    /// The slot contains classes outside the `[t_i^2]`-generated
    /// subalgebra, or the target leaves the window.
    Unknown,
}

/// One slot of the third page.
pub struct E3Slot {
    pub valid: bool,
    pub dim: usize,
    /// Coset representatives as vectors over the E2 slot basis.
    pub reps: Vec<BitVec>,
    quot: Quotient,
    pub d3: D3Status,
}

impl E3Slot {
    /// E3 coordinates of an E2 cocycle vector.
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        self.quot.coords(v)
    }
}

/// Third page: kernels modulo images of the second page, with validity
/// flags and the partial `d3`.
pub struct E3Page {
    pub e2: E2Page,
    pub slots: BTreeMap<(u32, u32), E3Slot>,
}

/// Replaces every slot by `ker(outgoing)/im(incoming)` with an explicit
/// basis of coset representatives; slots whose outgoing differential leaves
/// the window are flagged invalid.
pub fn turn_page(e2: E2Page) -> E3Page {
    let mut slots = BTreeMap::new();
    for (&(p, q), slot) in &e2.slots {
        let dim_e2 = slot.dim();
        let valid = q == 0 || p + q < e2.window;
        let kernel: Vec<BitVec> = if q == 0 {
            (0..dim_e2).map(|i| BitVec::unit(dim_e2, i)).collect()
        } else {
            match e2.d2.get(&(p, q)) {
                Some(m) => m.kernel_basis(),
                None => (0..dim_e2).map(|i| BitVec::unit(dim_e2, i)).collect(),
            }
        };
        let image: Vec<BitVec> = if p >= 2 {
            match e2.d2.get(&(p - 2, q + 1)) {
                Some(m) => (0..m.ncols()).map(|j| m.column(j)).collect(),
                None => Vec::new(),
            }
        } else {
            Vec::new()
        };
        let quot = Quotient::new(&image, &kernel, dim_e2);
        slots.insert(
            (p, q),
            E3Slot {
                valid,
                dim: quot.dim(),
                reps: quot.reps().to_vec(),
                quot,
                d3: D3Status::NotComputed,
            },
        );
    }
    E3Page { e2, slots }
}

impl E3Page {
    pub fn slot(&self, p: u32, q: u32) -> Option<&E3Slot> {
        self.slots.get(&(p, q))
    }

    /// Dimension of a valid slot, `None` when the slot is window-invalid.
    pub fn dim(&self, p: u32, q: u32) -> Option<usize> {
        self.slots
            .get(&(p, q))
            .and_then(|s| if s.valid { Some(s.dim) } else { None })
    }

    /// Whether every admissible t-monomial of degree `q` is even at each
    /// index with a nonzero invariant, i.e. the whole slot lies in the
    /// subalgebra where `d3` is defined.
    fn slot_in_square_subalgebra(&self, q: u32) -> bool {
        monomials_of_degree(self.e2.t_ring(), q).iter().all(|t| {
            (0..self.e2.dims.len())
                .all(|i| self.e2.alphas_zero[i] || t.exp(i) % 2 == 0)
        })
    }

    /// `d3` of one subalgebra basis pair: contributions from each index with
    /// `B_i = 2 mod 4` are `x^A Sq1(alpha_i) t^{B - 2 e_i}`.
    fn d3_of_pair(&self, (x, t): &MonPair) -> E2Elem {
        let mut out = E2Elem::zero();
        for i in 0..self.e2.dims.len() {
            if self.e2.alphas_zero[i] || t.exp(i) % 4 != 2 {
                continue;
            }
            let sq1 = self.e2.alphas[i].sq1();
            if sq1.is_zero() {
                continue;
            }
            let mut t_exps = t.exps().to_vec();
            t_exps[i] -= 2;
            let t_new = Monomial::new(t_exps);
            let x_poly = PolyF2::from_monomials(self.e2.x_ring(), [x.clone()])
                .mul(&sq1)
                .expect("same ring");
            for xm in x_poly.terms() {
                out.toggle((xm.clone(), t_new.clone()));
            }
        }
        out
    }
}

/// Fills the partial `d3` on the subalgebra generated by the `[t_i^2]`, the
/// base classes, and the surviving `t_j` with zero invariant. Slots outside
/// that subalgebra, and slots whose target leaves the window, are flagged
/// `Unknown`.
pub fn d3_on_squares(page: &mut E3Page) -> Result<(), SseqError> {
    let keys: Vec<(u32, u32)> = page.slots.keys().copied().collect();
    for (p, q) in keys {
        let (valid, dim) = {
            let slot = &page.slots[&(p, q)];
            (slot.valid, slot.dim)
        };
        if !valid {
            continue;
        }
        if dim == 0 {
            page.slots.get_mut(&(p, q)).unwrap().d3 = D3Status::Known(BitMatrix::zeros(0, 0));
            continue;
        }
        if !page.slot_in_square_subalgebra(q) {
            page.slots.get_mut(&(p, q)).unwrap().d3 = D3Status::Unknown;
            continue;
        }
        if q < 2 {
            // Target below the first row: the zero map.
            let m = BitMatrix::zeros(0, dim);
            page.slots.get_mut(&(p, q)).unwrap().d3 = D3Status::Known(m);
            continue;
        }
        let target_key = (p + 3, q - 2);
        let target_ok = page
            .slots
            .get(&target_key)
            .map(|s| s.valid)
            .unwrap_or(false);
        if !target_ok {
            page.slots.get_mut(&(p, q)).unwrap().d3 = D3Status::Unknown;
            continue;
        }
        let source_slot_e2 = page.e2.slot(p, q).unwrap();
        let target_slot_e2 = page.e2.slot(target_key.0, target_key.1).unwrap();
        let reps = page.slots[&(p, q)].reps.clone();
        let target_dim = page.slots[&target_key].dim;
        let mut matrix = BitMatrix::zeros(target_dim, reps.len());
        for (j, rep) in reps.iter().enumerate() {
            let elem = source_slot_e2.element_of(rep);
            let mut image = E2Elem::zero();
            for pair in &elem.terms {
                image = image.add(&page.d3_of_pair(pair));
            }
            let Some(vec) = target_slot_e2.vector_of(&image) else {
                return Err(SseqError::Internal("d3 image leaves the slot basis".into()));
            };
            let coords = page.slots[&target_key].coords(&vec).ok_or_else(|| {
                SseqError::Internal("d3 image is not a d2-cocycle".into())
            })?;
            for i in coords.ones() {
                matrix.toggle(i, j);
            }
        }
        page.slots.get_mut(&(p, q)).unwrap().d3 = D3Status::Known(matrix);
    }
    Ok(())
}

/// Result of restricting the invariants to one cyclic direction.
#[derive(Debug, Clone)]
pub struct CyclicPoint {
    pub point: Point,
    /// `alpha_i(lambda)` for each invariant.
    pub evaluations: Vec<bool>,
    /// All invariants vanish: the restricted page collapses.
    pub collapses: bool,
}

#[derive(Debug, Clone)]
pub struct CyclicScanReport {
    pub points: Vec<CyclicPoint>,
}

impl CyclicScanReport {
    pub fn collapsing_points(&self) -> Vec<Point> {
        self.points
            .iter()
            .filter(|p| p.collapses)
            .map(|p| p.point)
            .collect()
    }
}

/// For each nonzero direction, the restricted invariants are
/// `alpha_i(lambda) x^2`; the restriction collapses exactly when they all
/// vanish, which is incompatible with a free action.
pub fn cyclic_scan(desc: &ActionDescriptor) -> Result<CyclicScanReport, SseqError> {
    desc.validate().map_err(|e| SseqError::Descriptor(e.to_string()))?;
    let mut points = Vec::new();
    for mask in 1u32..1 << desc.r {
        let evaluations: Vec<bool> = desc
            .k_invariants
            .iter()
            .map(|f| f.evaluate_mask(mask))
            .collect();
        let collapses = evaluations.iter().all(|&b| !b);
        points.push(CyclicPoint {
            point: Point { r: desc.r, mask },
            evaluations,
            collapses,
        });
    }
    Ok(CyclicScanReport { points })
}

/// Diagnostic row entry of the finiteness probe.
#[derive(Debug, Clone)]
pub struct SlotDim {
    pub p: u32,
    pub q: u32,
    pub dim: Option<usize>,
}

/// Diagnostic report: collapse witnesses plus the third-page dimensions on
/// the rows `q = 0, 1`. A collapse forces infinite growth of the limit; the
/// probe makes no finiteness claim otherwise.
#[derive(Debug, Clone)]
pub struct PageReport {
    pub window: u32,
    pub collapse_points: Vec<Point>,
    pub infinite_growth: bool,
    pub row0: Vec<SlotDim>,
    pub row1: Vec<SlotDim>,
}

pub fn finiteness_probe(desc: &ActionDescriptor, window: u32) -> Result<PageReport, SseqError> {
    let scan = cyclic_scan(desc)?;
    let collapse_points = scan.collapsing_points();
    let e3 = turn_page(build_e2(desc, window)?);
    let row = |q: u32| -> Vec<SlotDim> {
        (0..=window.saturating_sub(q))
            .map(|p| SlotDim {
                p,
                q,
                dim: e3.dim(p, q),
            })
            .collect()
    };
    Ok(PageReport {
        window,
        infinite_growth: !collapse_points.is_empty(),
        collapse_points,
        row0: row(0),
        row1: row(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::CatalogSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q8() -> ActionDescriptor {
        CatalogSpec::Q8Join(0).build().unwrap()
    }

    fn z4(m: u32) -> ActionDescriptor {
        CatalogSpec::Z4(m).build().unwrap()
    }

    #[test]
    fn e2_dimensions_match_the_tensor_product() {
        let desc = q8(); // r=2, dims [3]
        let page = build_e2(&desc, 8).unwrap();
        for p in 0..=6u32 {
            for q in 0..=2u32 {
                let expected = (p as usize + 1) * usize::from(q <= 3);
                assert_eq!(page.slot(p, q).unwrap().dim(), expected, "slot ({p},{q})");
            }
        }
        // q beyond the truncation is empty.
        assert_eq!(page.slot(0, 4).unwrap().dim(), 0);
    }

    #[test]
    fn d2_on_generators_and_products() {
        // k = 2 with invariants x1^2 and x2^2 (product of two rank-1 actions).
        let desc = CatalogSpec::Product(Box::new(CatalogSpec::Z4(1)), Box::new(CatalogSpec::Z4(2)))
            .build()
            .unwrap();
        let page = build_e2(&desc, 10).unwrap();
        let x_one = Monomial::one(2);
        // d2(t1 t2) = alpha_1 t2 + alpha_2 t1.
        let t1t2 = Monomial::new(vec![1, 1]);
        let image = page.d2_of_pair(&(x_one.clone(), t1t2));
        let mut expected = E2Elem::zero();
        expected.toggle((Monomial::new(vec![2, 0]), Monomial::new(vec![0, 1])));
        expected.toggle((Monomial::new(vec![0, 2]), Monomial::new(vec![1, 0])));
        assert_eq!(image, expected);
        // Even exponents die: d2(t1^2) = 0.
        let image = page.d2_of_pair(&(x_one.clone(), Monomial::new(vec![2, 0])));
        assert!(image.is_zero());
        // d2(t^{2m+1}) = alpha t^{2m} on the k=1 factor.
        let z = z4(1); // dims [3]
        let zp = build_e2(&z, 9).unwrap();
        let image = zp.d2_of_pair(&(Monomial::one(1), Monomial::new(vec![3])));
        let mut expected = E2Elem::zero();
        expected.toggle((Monomial::new(vec![2]), Monomial::new(vec![2])));
        assert_eq!(image, expected);
    }

    #[test]
    fn d2_squares_to_zero_on_catalog_pages() {
        for desc in [
            q8(),
            z4(1),
            CatalogSpec::D8(1).build().unwrap(),
            CatalogSpec::JoProduct(1, 1).build().unwrap(),
        ] {
            let page = build_e2(&desc, desc.default_window()).unwrap();
            assert!(page.d2_squares_to_zero());
        }
    }

    #[test]
    fn leibniz_on_random_basis_products() {
        let desc = CatalogSpec::JoProduct(1, 1).build().unwrap();
        let window = desc.default_window();
        let page = build_e2(&desc, window).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let keys: Vec<(u32, u32)> = page
            .slots
            .iter()
            .filter(|(_, s)| s.dim() > 0)
            .map(|(&k, _)| k)
            .collect();
        for _ in 0..200 {
            let (p1, q1) = keys[rng.gen_range(0..keys.len())];
            let (p2, q2) = keys[rng.gen_range(0..keys.len())];
            if p1 + p2 + q1 + q2 + 1 > window {
                continue;
            }
            let s1 = page.slot(p1, q1).unwrap();
            let s2 = page.slot(p2, q2).unwrap();
            let u = E2Elem::from_pair(
                s1.basis[rng.gen_range(0..s1.dim())].0.clone(),
                s1.basis[rng.gen_range(0..s1.dim())].1.clone(),
            );
            let v = E2Elem::from_pair(
                s2.basis[rng.gen_range(0..s2.dim())].0.clone(),
                s2.basis[rng.gen_range(0..s2.dim())].1.clone(),
            );
            let lhs = page.d2_of_elem(&page.mul_elems(&u, &v));
            let rhs = page
                .mul_elems(&page.d2_of_elem(&u), &v)
                .add(&page.mul_elems(&u, &page.d2_of_elem(&v)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn e3_of_zero_invariant_page_keeps_dimensions() {
        // r=1, n=1, alpha = 0: all differentials vanish, E3 = E2 in-window.
        let desc = ActionDescriptor::new(
            1,
            vec![1],
            vec![crate::quadforms::QuadraticForm::zero(1)],
            true,
        )
        .unwrap();
        let page = build_e2(&desc, 6).unwrap();
        let dims_e2: BTreeMap<(u32, u32), usize> = page
            .slots
            .iter()
            .map(|(&k, s)| (k, s.dim()))
            .collect();
        let e3 = turn_page(page);
        for (&(p, q), &d) in &dims_e2 {
            if let Some(dim) = e3.dim(p, q) {
                assert_eq!(dim, d, "slot ({p},{q})");
            }
        }
    }

    #[test]
    fn e3_rows_vanish_when_multiplication_by_alpha_is_injective() {
        // q8_join(0): alpha = x1^2+x1x2+x2^2 is irreducible, so multiplying
        // F2[x1,x2] by it is injective and the odd rows die on page 3.
        let e3 = turn_page(build_e2(&q8(), 9).unwrap());
        for q in [1u32, 3] {
            for p in 0..=7u32 {
                if let Some(dim) = e3.dim(p, q) {
                    assert_eq!(dim, 0, "slot ({p},{q})");
                }
            }
        }
    }

    #[test]
    fn e3_table_for_the_rank_one_lens_model_matches_a_dense_oracle() {
        // r=1, k=1, n=3, alpha = x^2, window 4. Independent oracle: dims by
        // rank-nullity over freshly built dense boolean matrices.
        let desc = z4(1);
        let window = 4u32;
        let e3 = turn_page(build_e2(&desc, window).unwrap());

        let x_dim = |_p: u32| 1usize;
        let t_dim = |q: u32| usize::from(q <= 3);
        // d2: x^p t^q -> x^{p+2} t^{q-1} iff q odd (alpha = x^2 has one term).
        let rank_d2 = |_p: u32, q: u32| -> usize {
            if q % 2 == 1 && t_dim(q) == 1 && t_dim(q - 1) == 1 {
                1
            } else {
                0
            }
        };
        let mut total = 0usize;
        for p in 0..=window {
            for q in 0..=(window - p) {
                let valid = q == 0 || p + q < window;
                if !valid {
                    assert_eq!(e3.dim(p, q), None);
                    continue;
                }
                let dim_e2 = x_dim(p) * t_dim(q);
                let out_rank = rank_d2(p, q);
                let in_rank = if p >= 2 { rank_d2(p - 2, q + 1) } else { 0 };
                let in_rank = in_rank.min(dim_e2);
                let expected = dim_e2 - out_rank - in_rank;
                assert_eq!(e3.dim(p, q), Some(expected), "slot ({p},{q})");
                total += expected;
            }
        }
        // The surviving total in this window: classes at (0,0), (1,0),
        // (0,2), (1,2) only — the F2-cohomology of the rank-one quotient.
        assert_eq!(total, 4);
        assert_eq!(e3.dim(0, 0), Some(1));
        assert_eq!(e3.dim(1, 0), Some(1));
        assert_eq!(e3.dim(0, 1), Some(0));
        assert_eq!(e3.dim(0, 2), Some(1));
        assert_eq!(e3.dim(1, 2), Some(1));
    }

    #[test]
    fn d3_rule_on_the_square_classes() {
        // alpha = x^2 (r=1): Sq1(alpha) = 0, so d3[t^2] = 0.
        let desc = z4(2); // dims [5]
        let mut e3 = turn_page(build_e2(&desc, desc.default_window()).unwrap());
        d3_on_squares(&mut e3).unwrap();
        match &e3.slot(0, 2).unwrap().d3 {
            D3Status::Known(m) => assert!(m.is_zero()),
            other => panic!("expected known d3, got {other:?}"),
        }

        // alpha = x1^2+x1x2+x2^2 with n = 5: Sq1(alpha) = x1^2 x2 + x1 x2^2
        // is NOT in the ideal (alpha), so d3[t^2] is nonzero in E3^{3,0}.
        let mut alpha = crate::quadforms::QuadraticForm::zero(2);
        alpha.set_diag(0, true);
        alpha.set_diag(1, true);
        alpha.set_cross(0, 1, true);
        let desc = ActionDescriptor::new(2, vec![5], vec![alpha], false).unwrap();
        let mut e3 = turn_page(build_e2(&desc, desc.default_window()).unwrap());
        d3_on_squares(&mut e3).unwrap();
        let slot02 = e3.slot(0, 2).unwrap();
        assert_eq!(slot02.dim, 1);
        match &slot02.d3 {
            D3Status::Known(m) => assert!(!m.is_zero(), "d3[t^2] should be nonzero"),
            other => panic!("expected known d3, got {other:?}"),
        }

        // alpha = x1*x2 with n = 5: Sq1(alpha) = (x1+x2) alpha lies in the
        // ideal, so the class [Sq1(alpha)] dies in E3^{3,0} and d3[t^2] = 0.
        let desc = CatalogSpec::D8(2).build().unwrap();
        let mut e3 = turn_page(build_e2(&desc, desc.default_window()).unwrap());
        d3_on_squares(&mut e3).unwrap();
        match &e3.slot(0, 2).unwrap().d3 {
            D3Status::Known(m) => assert!(m.is_zero()),
            other => panic!("expected known d3, got {other:?}"),
        }
    }

    #[test]
    fn d3_unknown_outside_the_subalgebra() {
        // jo_product has two nonzero invariants; odd t-degrees mix surviving
        // classes outside the square subalgebra.
        let desc = CatalogSpec::JoProduct(1, 1).build().unwrap();
        let mut e3 = turn_page(build_e2(&desc, desc.default_window()).unwrap());
        d3_on_squares(&mut e3).unwrap();
        let mut saw_unknown = false;
        let mut saw_known = false;
        for slot in e3.slots.values() {
            match slot.d3 {
                D3Status::Unknown => saw_unknown = true,
                D3Status::Known(_) => saw_known = true,
                D3Status::NotComputed => {}
            }
        }
        assert!(saw_known);
        assert!(saw_unknown);
    }

    #[test]
    fn cyclic_scan_examples() {
        // Example data with no common zeros: nothing collapses.
        let desc = CatalogSpec::JoProduct(1, 1).build().unwrap();
        let scan = cyclic_scan(&desc).unwrap();
        assert!(scan.collapsing_points().is_empty());
        // A single product invariant alone collapses at (1,0).
        let desc = CatalogSpec::D8(1).build().unwrap();
        let scan = cyclic_scan(&desc).unwrap();
        let collapses = scan.collapsing_points();
        assert_eq!(collapses.first().map(ToString::to_string).as_deref(), Some("(1,0)"));
        // k = 0: every direction collapses vacuously.
        let desc = ActionDescriptor::new(1, vec![], vec![], true).unwrap();
        let scan = cyclic_scan(&desc).unwrap();
        assert_eq!(scan.collapsing_points().len(), 1);
    }

    #[test]
    fn finiteness_probe_examples() {
        // A collapse direction flags infinite growth.
        let desc = CatalogSpec::D8(1).build().unwrap();
        let report = finiteness_probe(&desc, 8).unwrap();
        assert!(report.infinite_growth);
        // The quaternion model has no collapse and its q=1 row dies.
        let report = finiteness_probe(&q8(), 9).unwrap();
        assert!(!report.infinite_growth);
        for entry in &report.row1 {
            if let Some(dim) = entry.dim {
                assert_eq!(dim, 0, "q=1, p={}", entry.p);
            }
        }
        // r = 0: one column, trivially finite.
        let desc = ActionDescriptor::new(0, vec![], vec![], true).unwrap();
        let report = finiteness_probe(&desc, 4).unwrap();
        assert!(!report.infinite_growth);
        assert_eq!(report.row0[0].dim, Some(1));
        for entry in report.row0.iter().skip(1) {
            assert_eq!(entry.dim, Some(0));
        }
    }

    #[test]
    fn naturality_under_rank_one_restriction() {
        // Substituting x_i -> lambda_i y commutes with d2, slot by slot.
        for desc in [q8(), CatalogSpec::JoProduct(1, 1).build().unwrap()] {
            let window = 8u32;
            let page = build_e2(&desc, window).unwrap();
            for mask in 1u32..1 << desc.r {
                // Restricted descriptor: r' = 1, alpha_i' = alpha_i(lambda) y^2.
                let restricted_forms: Vec<crate::quadforms::QuadraticForm> = desc
                    .k_invariants
                    .iter()
                    .map(|f| {
                        let mut g = crate::quadforms::QuadraticForm::zero(1);
                        g.set_diag(0, f.evaluate_mask(mask));
                        g
                    })
                    .collect();
                let rdesc = ActionDescriptor::new(
                    1,
                    desc.dims.clone(),
                    restricted_forms,
                    desc.integral_trivial,
                )
                .unwrap();
                let rpage = build_e2(&rdesc, window).unwrap();

                // Substitution on x-monomials: x^A -> y^{|A|} if supp(A) ⊆ supp(lambda).
                let subst = |x: &Monomial| -> Option<Monomial> {
                    let mut deg = 0u16;
                    for i in 0..desc.r {
                        if x.exp(i) > 0 && mask >> i & 1 == 0 {
                            return None;
                        }
                        deg += x.exp(i);
                    }
                    Some(Monomial::new(vec![deg]))
                };
                let subst_elem = |e: &E2Elem| -> E2Elem {
                    let mut out = E2Elem::zero();
                    for (x, t) in &e.terms {
                        if let Some(y) = subst(x) {
                            out.toggle((y, t.clone()));
                        }
                    }
                    out
                };
                for (&(p, q), slot) in &page.slots {
                    if q == 0 || p + q + 1 > window {
                        continue;
                    }
                    for pair in &slot.basis {
                        let through_g = subst_elem(&page.d2_of_pair(pair));
                        let through_restriction =
                            rpage.d2_of_elem(&subst_elem(&E2Elem::from_pair(
                                pair.0.clone(),
                                pair.1.clone(),
                            )));
                        assert_eq!(through_g, through_restriction, "slot ({p},{q})");
                    }
                }
            }
        }
    }

    #[test]
    fn row_one_dimensions_match_an_independent_polynomial_oracle() {
        // E3^{p,1} is the kernel of the joint multiplication map
        // (c_1..c_k) -> sum c_i alpha_i on degree-p multipliers, reduced by
        // the incoming image from (p-2, 2). Both sides of the comparison
        // are built here with dense polynomial arithmetic, independent of
        // the page machinery. Injectivity of the joint map forces the slot
        // to vanish; with a single nonzero invariant it is the whole story.
        for desc in [
            q8(),
            z4(1),
            CatalogSpec::D8(1).build().unwrap(),
            CatalogSpec::JoProduct(1, 1).build().unwrap(),
        ] {
            let window = desc.default_window().min(10);
            let e3 = turn_page(build_e2(&desc, window).unwrap());
            let x_ring = RingDescriptor::free_x(desc.r).unwrap();
            let t_ring = e3.e2.t_ring().clone();
            let k = desc.k_invariants.len();
            let t_deg1 = monomials_of_degree(&t_ring, 1).len();
            if t_deg1 == 0 {
                continue;
            }
            for p in 0..window {
                let Some(dim) = e3.dim(p, 1) else { continue };
                let mons = monomials_of_degree(&x_ring, p);
                let target = monomials_of_degree(&x_ring, p + 2);
                let lookup: BTreeMap<_, usize> =
                    target.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
                // Columns: one per (invariant, degree-p multiplier).
                let mut matrix = BitMatrix::zeros(target.len(), mons.len() * k);
                for (i_alpha, alpha) in e3.e2.alphas().iter().enumerate() {
                    for (j, m) in mons.iter().enumerate() {
                        let prod = PolyF2::from_monomials(&x_ring, [m.clone()])
                            .mul(alpha)
                            .unwrap();
                        for t in prod.terms() {
                            matrix.toggle(lookup[t], i_alpha * mons.len() + j);
                        }
                    }
                }
                let joint_kernel = matrix.ncols() - matrix.rank();
                // Incoming image from (p-2, 2): d2 of x^{A'} t_i t_j lands in
                // row 1 as the pair (.., alpha_j on t_i slot, alpha_i on t_j
                // slot, ..); its rank is computed from the same dense data.
                let incoming_rank = if p >= 2 {
                    let source_x = monomials_of_degree(&x_ring, p - 2);
                    let t_pairs: Vec<(usize, usize)> = (0..k)
                        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
                        .filter(|&(i, j)| {
                            // t_i t_j admissible (caps are >= 1 always here)
                            let mut e = vec![0u16; k];
                            e[i] += 1;
                            e[j] += 1;
                            monomials_of_degree(&t_ring, 2).contains(&Monomial::new(e))
                        })
                        .collect();
                    let mut img = BitMatrix::zeros(
                        mons.len() * k,
                        source_x.len() * t_pairs.len(),
                    );
                    let x_lookup: BTreeMap<_, usize> =
                        mons.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
                    for (pi, &(ti, tj)) in t_pairs.iter().enumerate() {
                        for (aj, am) in source_x.iter().enumerate() {
                            let col = pi * source_x.len() + aj;
                            let base = PolyF2::from_monomials(&x_ring, [am.clone()]);
                            // t_i survives with coefficient alpha_j and vice versa.
                            for (slot_t, alpha) in [(ti, &e3.e2.alphas()[tj]), (tj, &e3.e2.alphas()[ti])] {
                                for t in base.mul(alpha).unwrap().terms() {
                                    img.toggle(slot_t * mons.len() + x_lookup[t], col);
                                }
                            }
                        }
                    }
                    img.rank()
                } else {
                    0
                };
                assert_eq!(dim, joint_kernel - incoming_rank, "{desc:?} at p={p}");
                if joint_kernel == 0 {
                    assert_eq!(dim, 0);
                }
            }
        }
        // The quaternion model's q=1 row dies outright.
        let e3 = turn_page(build_e2(&q8(), 9).unwrap());
        assert!((0..9).filter_map(|p| e3.dim(p, 1)).all(|d| d == 0));
    }

    #[test]
    fn window_too_small_is_rejected() {
        assert!(matches!(build_e2(&q8(), 1), Err(SseqError::WindowTooSmall(1))));
    }
}
