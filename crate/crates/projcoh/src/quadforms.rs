//! Quadratic forms over F2 and the subspace machinery built on them.
//!
//! A form is stored by its diagonal coefficients (of `x_j^2`) and its
//! strictly upper cross coefficients (of `x_j x_k`, `j < k`). Every search
//! in this module is an exhaustive scan over F2 points or linear forms in a
//! fixed order, so results are deterministic certificates: the scan order
//! over points identifies coordinate `i` with bit `i-1` of an ascending
//! counter, hence `(1,0)` comes before `(0,1)`.

use crate::f2algebra::{
    AlgebraError, GenFamily, LinearForm, PolyF2, RingDescriptor, MAX_GENERATORS,
};
use crate::f2linalg::{BitMatrix, BitVec};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A nonzero point of F2^r, used as a witness in scan results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub r: usize,
    pub mask: u32,
}

impl Point {
    pub fn coords(&self) -> Vec<bool> {
        (0..self.r).map(|i| self.mask >> i & 1 == 1).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = (0..self.r)
            .map(|i| if self.mask >> i & 1 == 1 { "1" } else { "0" })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

fn pair_index(j: usize, k: usize) -> usize {
    debug_assert!(j < k);
    k * (k - 1) / 2 + j
}

/// Degree-2 element of `F2[x_1..x_r]` in triangular coefficient form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    r: usize,
    diag: u16,
    cross: u128,
}

impl QuadraticForm {
    pub fn zero(r: usize) -> Self {
        assert!(r <= MAX_GENERATORS);
        QuadraticForm { r, diag: 0, cross: 0 }
    }

    pub fn from_parts(r: usize, diag: u16, cross: u128) -> Self {
        assert!(r <= MAX_GENERATORS);
        let mut q = Self::zero(r);
        q.diag = diag & (((1u32 << r) - 1) as u16);
        for j in 0..r {
            for k in (j + 1)..r {
                if cross >> pair_index(j, k) & 1 == 1 {
                    q.cross |= 1 << pair_index(j, k);
                }
            }
        }
        q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.diag == 0 && self.cross == 0
    }

    pub fn diag_coeff(&self, j: usize) -> bool {
        self.diag >> j & 1 == 1
    }

    pub fn cross_coeff(&self, j: usize, k: usize) -> bool {
        debug_assert!(j < k);
        self.cross >> pair_index(j, k) & 1 == 1
    }

    pub fn set_diag(&mut self, j: usize, bit: bool) {
        if bit {
            self.diag |= 1 << j;
        } else {
            self.diag &= !(1 << j);
        }
    }

    pub fn set_cross(&mut self, j: usize, k: usize, bit: bool) {
        let idx = pair_index(j, k);
        if bit {
            self.cross |= 1 << idx;
        } else {
            self.cross &= !(1 << idx);
        }
    }

    /// The product `l * m` of two linear forms, as a quadratic form.
    pub fn product_of(l: &LinearForm, m: &LinearForm) -> QuadraticForm {
        assert_eq!(l.r(), m.r());
        let r = l.r();
        let mut q = QuadraticForm::zero(r);
        q.diag = (l.bits() & m.bits()) as u16;
        for j in 0..r {
            for k in (j + 1)..r {
                let bit = (l.coeff(j) & m.coeff(k)) ^ (l.coeff(k) & m.coeff(j));
                if bit {
                    q.cross |= 1 << pair_index(j, k);
                }
            }
        }
        q
    }

    pub fn to_poly(&self) -> PolyF2 {
        let ring = RingDescriptor::free_x(self.r).expect("r <= MAX_GENERATORS");
        let mut terms = Vec::new();
        for j in 0..self.r {
            if self.diag_coeff(j) {
                let mut e = vec![0u16; self.r];
                e[j] = 2;
                terms.push(crate::f2algebra::Monomial::new(e));
            }
        }
        for j in 0..self.r {
            for k in (j + 1)..self.r {
                if self.cross_coeff(j, k) {
                    let mut e = vec![0u16; self.r];
                    e[j] = 1;
                    e[k] = 1;
                    terms.push(crate::f2algebra::Monomial::new(e));
                }
            }
        }
        PolyF2::from_monomials(&ring, terms)
    }

    /// Reads back a homogeneous quadratic polynomial; the conversion
    /// round-trips exactly.
    pub fn from_poly(p: &PolyF2) -> Result<QuadraticForm, AlgebraError> {
        let r = p.ring().gens();
        if r > MAX_GENERATORS {
            return Err(AlgebraError::TooManyGenerators(r));
        }
        let mut q = QuadraticForm::zero(r);
        for m in p.terms() {
            if m.degree() != 2 {
                return Err(AlgebraError::Invalid(format!(
                    "not a homogeneous quadratic: {p}"
                )));
            }
            let support: Vec<usize> = (0..r).filter(|&i| m.exp(i) > 0).collect();
            match support.as_slice() {
                [j] => q.set_diag(*j, true),
                [j, k] => q.set_cross(*j, *k, true),
                _ => unreachable!("degree-2 monomial has 1 or 2 support variables"),
            }
        }
        Ok(q)
    }

    /// Value at the point whose coordinates are the bits of `mask`.
    pub fn evaluate_mask(&self, mask: u32) -> bool {
        let mut acc = (self.diag as u32 & mask).count_ones() % 2 == 1;
        let mut cross = self.cross;
        while cross != 0 {
            let idx = cross.trailing_zeros() as usize;
            cross &= cross - 1;
            // invert pair_index: k(k-1)/2 <= idx < k(k+1)/2
            let mut k = 1;
            while (k + 1) * k / 2 <= idx {
                k += 1;
            }
            let j = idx - k * (k - 1) / 2;
            if mask >> j & 1 == 1 && mask >> k & 1 == 1 {
                acc = !acc;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[bool]) -> Result<bool, AlgebraError> {
        if point.len() != self.r {
            return Err(AlgebraError::ArityMismatch {
                expected: self.r,
                got: point.len(),
            });
        }
        let mut mask = 0u32;
        for (i, &b) in point.iter().enumerate() {
            if b {
                mask |= 1 << i;
            }
        }
        Ok(self.evaluate_mask(mask))
    }

    /// Number of coefficient bits of a form on `r` variables.
    pub fn coefficient_bits(r: usize) -> u32 {
        (r + r * r.saturating_sub(1) / 2) as u32
    }

    /// All `2^(r(r+1)/2)` quadratic forms, for exhaustive small-rank scans.
    pub fn all(r: usize) -> impl Iterator<Item = QuadraticForm> {
        assert!(Self::coefficient_bits(r) <= 40, "enumeration too large");
        let cross_bits = r * (r - 1) / 2;
        (0u64..1 << Self::coefficient_bits(r)).map(move |code| QuadraticForm {
            r,
            diag: (code >> cross_bits) as u16,
            cross: (code & ((1u64 << cross_bits) - 1)) as u128,
        })
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("r", &self.r)?;
        let diag: Vec<u8> = (0..self.r).map(|j| u8::from(self.diag_coeff(j))).collect();
        map.serialize_entry("diag", &diag)?;
        let mut cross = Vec::new();
        for j in 0..self.r {
            for k in (j + 1)..self.r {
                if self.cross_coeff(j, k) {
                    cross.push([j + 1, k + 1]);
                }
            }
        }
        map.serialize_entry("cross", &cross)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            r: usize,
            #[serde(default)]
            diag: Vec<u8>,
            #[serde(default)]
            cross: Vec<[usize; 2]>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.r > MAX_GENERATORS {
            return Err(serde::de::Error::custom(format!(
                "r = {} exceeds the maximum {MAX_GENERATORS}",
                repr.r
            )));
        }
        if repr.diag.len() > repr.r {
            return Err(serde::de::Error::custom("diag longer than r"));
        }
        let mut q = QuadraticForm::zero(repr.r);
        for (j, &b) in repr.diag.iter().enumerate() {
            q.set_diag(j, b != 0);
        }
        for [j, k] in repr.cross {
            if j == 0 || k == 0 || j >= k || k > repr.r {
                return Err(serde::de::Error::custom(format!(
                    "bad cross pair [{j},{k}]: need 1 <= j < k <= r"
                )));
            }
            q.set_cross(j - 1, k - 1, true);
        }
        Ok(q)
    }
}

/// Subspace of F2^r given by a reduced row-echelon basis of bitmask rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    r: usize,
    basis: Vec<u32>,
}

impl Subspace {
    pub fn full(r: usize) -> Self {
        Subspace {
            r,
            basis: (0..r).map(|i| 1 << i).collect(),
        }
    }

    pub fn trivial(r: usize) -> Self {
        Subspace { r, basis: Vec::new() }
    }

    /// Span of the given bitmask rows, reduced to canonical echelon form.
    pub fn from_spanning(r: usize, rows: &[u32]) -> Self {
        let vecs: Vec<BitVec> = rows.iter().map(|&m| BitVec::from_mask(r, m as u64)).collect();
        let mut mat = BitMatrix::from_rows(vecs, r);
        let pivots = mat.rref_in_place();
        let basis = (0..pivots.len())
            .map(|i| {
                let mut mask = 0u32;
                for j in mat.row(i).ones() {
                    mask |= 1 << j;
                }
                mask
            })
            .collect();
        Subspace { r, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn basis_points(&self) -> Vec<Point> {
        self.basis.iter().map(|&mask| Point { r: self.r, mask }).collect()
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        let mut m = mask;
        for &row in &self.basis {
            let pivot = row.trailing_zeros();
            if m >> pivot & 1 == 1 {
                m ^= row;
            }
        }
        m == 0
    }

    /// The point with coordinate vector `coeffs` in this basis.
    pub fn point_from_coeffs(&self, coeffs: u32) -> u32 {
        let mut mask = 0u32;
        for (j, &row) in self.basis.iter().enumerate() {
            if coeffs >> j & 1 == 1 {
                mask ^= row;
            }
        }
        mask
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "{{0}}");
        }
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|&m| Point { r: self.r, mask: m }.to_string())
            .collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}

/// `Some(l)` with `l^2 = alpha` iff every cross coefficient vanishes.
pub fn is_square(alpha: &QuadraticForm) -> Option<LinearForm> {
    if alpha.cross == 0 {
        Some(LinearForm::new(alpha.r, alpha.diag as u32))
    } else {
        None
    }
}

/// All unordered pairs `(l, m)` of linear forms with `l * m = alpha`,
/// found by exhaustion; an empty list means `alpha` is irreducible over F2.
pub fn factor_product(alpha: &QuadraticForm) -> Vec<(LinearForm, LinearForm)> {
    let r = alpha.r;
    let mut out = Vec::new();
    for lbits in 0u32..1 << r {
        for mbits in lbits..1 << r {
            let l = LinearForm::new(r, lbits);
            let m = LinearForm::new(r, mbits);
            if QuadraticForm::product_of(&l, &m) == *alpha {
                out.push((l, m));
            }
        }
    }
    out
}

/// First nonzero common zero of all the forms in scan order, over the full
/// space.
pub fn common_zero(forms: &[QuadraticForm], r: usize) -> Option<Point> {
    common_zero_in(forms, &Subspace::full(r))
}

/// First nonzero common zero inside the given subspace, scanning coordinate
/// vectors with respect to its echelon basis in ascending order.
pub fn common_zero_in(forms: &[QuadraticForm], domain: &Subspace) -> Option<Point> {
    let d = domain.dim();
    for coeffs in 1u32..1 << d {
        let mask = domain.point_from_coeffs(coeffs);
        if forms.iter().all(|f| !f.evaluate_mask(mask)) {
            return Some(Point {
                r: domain.ambient_dim(),
                mask,
            });
        }
    }
    None
}

/// All linear forms `gamma` with `Sq1(alpha) = gamma * alpha`, by exhaustion.
///
/// For `alpha != 0` the list has at most one element since multiplication by
/// a nonzero polynomial is injective in `F2[x_1..x_r]`; for `alpha = 0` every
/// linear form qualifies.
pub fn solve_bockstein_factor(alpha: &QuadraticForm) -> Vec<LinearForm> {
    let poly = alpha.to_poly();
    let target = poly.sq1();
    let ring = poly.ring().clone();
    LinearForm::all(alpha.r)
        .filter(|gamma| {
            let gp = gamma.to_poly(&ring).expect("same rank");
            gp.mul(&poly).expect("same ring") == target
        })
        .collect()
}

/// First `eta` with `eta * (eta + gamma) = alpha` in scan order, if any.
pub fn eta_factor(alpha: &QuadraticForm, gamma: &LinearForm) -> Option<LinearForm> {
    assert_eq!(alpha.r, gamma.r());
    LinearForm::all(alpha.r).find(|eta| {
        let other = eta.add(gamma);
        QuadraticForm::product_of(eta, &other) == *alpha
    })
}

/// Kernel of a linear form: an `(r-1)`-dimensional subspace for `l != 0`,
/// the full space for `l = 0`.
pub fn kernel(l: &LinearForm) -> Subspace {
    let r = l.r();
    if l.is_zero() {
        return Subspace::full(r);
    }
    let mut row = BitMatrix::zeros(1, r);
    for i in 0..r {
        if l.coeff(i) {
            row.set(0, i, true);
        }
    }
    let masks: Vec<u32> = row
        .kernel_basis()
        .iter()
        .map(|v| {
            let mut m = 0u32;
            for i in v.ones() {
                m |= 1 << i;
            }
            m
        })
        .collect();
    Subspace::from_spanning(r, &masks)
}

/// Intersection of subspaces via annihilators: `ann(U ∩ V) = ann(U) + ann(V)`.
pub fn intersect(subspaces: &[Subspace]) -> Result<Subspace, AlgebraError> {
    let Some(first) = subspaces.first() else {
        return Err(AlgebraError::Invalid("empty intersection list".into()));
    };
    let r = first.ambient_dim();
    for s in subspaces {
        if s.ambient_dim() != r {
            return Err(AlgebraError::ArityMismatch {
                expected: r,
                got: s.ambient_dim(),
            });
        }
    }
    let mut ann_rows: Vec<BitVec> = Vec::new();
    for s in subspaces {
        let rows: Vec<BitVec> = s
            .basis
            .iter()
            .map(|&m| BitVec::from_mask(r, m as u64))
            .collect();
        let mat = BitMatrix::from_rows(rows, r);
        ann_rows.extend(mat.kernel_basis());
    }
    let ann = BitMatrix::from_rows(ann_rows, r);
    let masks: Vec<u32> = ann
        .kernel_basis()
        .iter()
        .map(|v| {
            let mut m = 0u32;
            for i in v.ones() {
                m |= 1 << i;
            }
            m
        })
        .collect();
    Ok(Subspace::from_spanning(r, &masks))
}

/// Restriction of `alpha` along the inclusion of `H`, expressed in fresh
/// coordinates with respect to the echelon basis of `H`.
pub fn restrict_form(alpha: &QuadraticForm, h: &Subspace) -> QuadraticForm {
    let r = alpha.r;
    assert_eq!(h.ambient_dim(), r);
    let d = h.dim();
    // x_i pulls back to sum_j basis_j[i] * y_j.
    let images: Vec<LinearForm> = (0..r)
        .map(|i| {
            let mut bits = 0u32;
            for (j, &row) in h.basis.iter().enumerate() {
                if row >> i & 1 == 1 {
                    bits |= 1 << j;
                }
            }
            LinearForm::new(d, bits)
        })
        .collect();
    let target = RingDescriptor::free(GenFamily::X, d).expect("dim bounded by r");
    let restricted = alpha
        .to_poly()
        .substitute(&images, &target)
        .expect("arity matches");
    QuadraticForm::from_poly(&restricted).expect("substitution of a quadratic is quadratic")
}
