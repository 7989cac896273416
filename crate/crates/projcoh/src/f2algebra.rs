//! Graded polynomial algebra over F2.
//!
//! Two ring shapes cover everything the rest of the crate needs: the free
//! ring `F2[x_1..x_r]` (cohomology of `B(Z/2)^r`) and the truncated ring
//! `F2[t_1..t_k]/(t_i^{n_i+1})` (cohomology of a product of projective
//! spaces). Polynomials are kept canonical at all times: term sets are
//! duplicate-free, ordered, and exponent-capped in quotient rings.

use crate::f2linalg::{BitMatrix, BitVec};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Generator counts are capped so points and linear forms fit in a machine word.
pub const MAX_GENERATORS: usize = 16;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgebraError {
    #[error("ambient rings differ: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("expected {expected} entries, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("generator count {0} exceeds the supported maximum {MAX_GENERATORS}")]
    TooManyGenerators(usize),
    #[error("exponent cap must be at least 1, got {0}")]
    InvalidCap(u16),
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Which letter a ring's generators print as.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenFamily {
    X,
    T,
}

impl GenFamily {
    pub fn letter(self) -> char {
        match self {
            GenFamily::X => 'x',
            GenFamily::T => 't',
        }
    }
}

/// Ambient ring: a generator family plus optional per-generator exponent caps.
///
/// A cap of `n_i` means the relation `g_i^{n_i+1} = 0` holds; terms that
/// exceed a cap are dropped eagerly by every operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    family: GenFamily,
    gens: usize,
    caps: Option<Vec<u16>>,
}

impl RingDescriptor {
    pub fn free(family: GenFamily, gens: usize) -> Result<Self, AlgebraError> {
        if gens > MAX_GENERATORS {
            return Err(AlgebraError::TooManyGenerators(gens));
        }
        Ok(RingDescriptor {
            family,
            gens,
            caps: None,
        })
    }

    /// Free ring `F2[x_1..x_r]`.
    pub fn free_x(gens: usize) -> Result<Self, AlgebraError> {
        Self::free(GenFamily::X, gens)
    }

    /// Free ring `F2[t_1..t_k]`.
    pub fn free_t(gens: usize) -> Result<Self, AlgebraError> {
        Self::free(GenFamily::T, gens)
    }

    /// Truncated ring `F2[t_1..t_k]/(t_i^{caps_i+1})`.
    pub fn truncated_t(caps: &[u16]) -> Result<Self, AlgebraError> {
        if caps.len() > MAX_GENERATORS {
            return Err(AlgebraError::TooManyGenerators(caps.len()));
        }
        for &c in caps {
            if c == 0 {
                return Err(AlgebraError::InvalidCap(c));
            }
        }
        Ok(RingDescriptor {
            family: GenFamily::T,
            gens: caps.len(),
            caps: Some(caps.to_vec()),
        })
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn family(&self) -> GenFamily {
        self.family
    }

    pub fn caps(&self) -> Option<&[u16]> {
        self.caps.as_deref()
    }

    fn admits(&self, exps: &[u16]) -> bool {
        match &self.caps {
            None => true,
            Some(caps) => exps.iter().zip(caps).all(|(e, c)| e <= c),
        }
    }

    fn describe(&self) -> String {
        match &self.caps {
            None => format!("F2[{}1..{}{}]", self.family.letter(), self.family.letter(), self.gens),
            Some(caps) => format!(
                "F2[{}1..{}{}]/(caps {:?})",
                self.family.letter(),
                self.family.letter(),
                self.gens,
                caps
            ),
        }
    }
}

/// Monomial: one exponent per generator.
///
/// The total order is graded: lower degree first, and within a degree the
/// monomial with the larger exponent on the earliest generator comes first,
/// so degree 2 in two variables reads `x1^2, x1*x2, x2^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Monomial { exps }
    }

    pub fn one(gens: usize) -> Self {
        Monomial {
            exps: vec![0; gens],
        }
    }

    pub fn generator(gens: usize, i: usize) -> Self {
        let mut exps = vec![0; gens];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| u32::from(e)).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over F2 in canonical form: the set of monomials with
/// coefficient 1, every term admissible in the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyF2 {
    ring: RingDescriptor,
    terms: BTreeSet<Monomial>,
}

impl PolyF2 {
    pub fn zero(ring: &RingDescriptor) -> Self {
        PolyF2 {
            ring: ring.clone(),
            terms: BTreeSet::new(),
        }
    }

    pub fn one(ring: &RingDescriptor) -> Self {
        let mut p = Self::zero(ring);
        p.toggle_term(Monomial::one(ring.gens));
        p
    }

    /// The `i`-th generator (0-based).
    pub fn generator(ring: &RingDescriptor, i: usize) -> Self {
        assert!(i < ring.gens);
        let mut p = Self::zero(ring);
        p.toggle_term(Monomial::generator(ring.gens, i));
        p
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(ring: &RingDescriptor, it: I) -> Self {
        let mut p = Self::zero(ring);
        for m in it {
            p.toggle_term(m);
        }
        p
    }

    /// Single monomial with the given exponents.
    pub fn monomial(ring: &RingDescriptor, exps: &[u16]) -> Result<Self, AlgebraError> {
        if exps.len() != ring.gens {
            return Err(AlgebraError::ArityMismatch {
                expected: ring.gens,
                got: exps.len(),
            });
        }
        let mut p = Self::zero(ring);
        p.toggle_term(Monomial::new(exps.to_vec()));
        Ok(p)
    }

    fn toggle_term(&mut self, m: Monomial) {
        debug_assert_eq!(m.exps.len(), self.ring.gens);
        if !self.ring.admits(&m.exps) {
            return;
        }
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Maximum term degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_ring(&self, other: &PolyF2) -> Result<(), AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch(
                self.ring.describe(),
                other.ring.describe(),
            ));
        }
        Ok(())
    }

    /// Sum in F2: the symmetric difference of the term sets.
    pub fn add(&self, other: &PolyF2) -> Result<PolyF2, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle_term(m.clone());
        }
        Ok(out)
    }

    /// Product; exponent-capped terms are dropped in quotient rings.
    pub fn mul(&self, other: &PolyF2) -> Result<PolyF2, AlgebraError> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle_term(a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> PolyF2 {
        let mut out = Self::one(&self.ring);
        for _ in 0..k {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// The derivation with `Sq1(g) = g^2` on every degree-1 generator,
    /// extended by the Leibniz rule. On a quotient ring the free-ring value
    /// is computed first and capped terms are dropped.
    pub fn sq1(&self) -> PolyF2 {
        let mut out = Self::zero(&self.ring);
        for m in &self.terms {
            for i in 0..self.ring.gens {
                if m.exps[i] % 2 == 1 {
                    let mut e = m.clone();
                    e.exps[i] += 1;
                    out.toggle_term(e);
                }
            }
        }
        out
    }

    /// Evaluation at an F2 point.
    pub fn evaluate(&self, point: &[bool]) -> Result<bool, AlgebraError> {
        if point.len() != self.ring.gens {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ring.gens,
                got: point.len(),
            });
        }
        let mut acc = false;
        for m in &self.terms {
            let val = m
                .exps
                .iter()
                .zip(point)
                .all(|(&e, &x)| e == 0 || x);
            acc ^= val;
        }
        Ok(acc)
    }

    /// Ring homomorphism sending generator `i` to `images[i]`, landing in
    /// `target`.
    pub fn substitute(
        &self,
        images: &[LinearForm],
        target: &RingDescriptor,
    ) -> Result<PolyF2, AlgebraError> {
        if images.len() != self.ring.gens {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ring.gens,
                got: images.len(),
            });
        }
        let image_polys: Vec<PolyF2> = images
            .iter()
            .map(|l| l.to_poly(target))
            .collect::<Result<_, _>>()?;
        let mut out = Self::zero(target);
        for m in &self.terms {
            let mut term = Self::one(target);
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&image_polys[i].pow(u32::from(e))).expect("same ring");
                }
            }
            out = out.add(&term).expect("same ring");
        }
        Ok(out)
    }

    /// Homogeneous part of the given degree.
    pub fn homogeneous_part(&self, degree: u32) -> PolyF2 {
        PolyF2 {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|m| m.degree() == degree)
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for PolyF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let letter = self.ring.family.letter();
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|m| {
                let factors: Vec<String> = m
                    .exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("{letter}{}", i + 1)
                        } else {
                            format!("{letter}{}^{e}", i + 1)
                        }
                    })
                    .collect();
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Homogeneous degree-1 class: a coefficient vector over F2 of length `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    r: usize,
    bits: u32,
}

impl LinearForm {
    pub fn new(r: usize, bits: u32) -> Self {
        assert!(r <= MAX_GENERATORS);
        LinearForm {
            r,
            bits: bits & ((1u32 << r) - 1),
        }
    }

    pub fn zero(r: usize) -> Self {
        Self::new(r, 0)
    }

    pub fn from_coeffs(coeffs: &[bool]) -> Self {
        let mut bits = 0u32;
        for (i, &c) in coeffs.iter().enumerate() {
            if c {
                bits |= 1 << i;
            }
        }
        Self::new(coeffs.len(), bits)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        assert_eq!(self.r, other.r);
        LinearForm {
            r: self.r,
            bits: self.bits ^ other.bits,
        }
    }

    /// Value at the point whose coordinates are the bits of `mask`.
    pub fn evaluate_mask(&self, mask: u32) -> bool {
        (self.bits & mask).count_ones() % 2 == 1
    }

    /// All `2^r` linear forms in scan order (ascending coefficient mask).
    pub fn all(r: usize) -> impl Iterator<Item = LinearForm> {
        (0u32..1 << r).map(move |bits| LinearForm { r, bits })
    }

    pub fn to_poly(&self, ring: &RingDescriptor) -> Result<PolyF2, AlgebraError> {
        if ring.gens != self.r {
            return Err(AlgebraError::ArityMismatch {
                expected: self.r,
                got: ring.gens,
            });
        }
        let mut p = PolyF2::zero(ring);
        for i in 0..self.r {
            if self.coeff(i) {
                p.toggle_term(Monomial::generator(ring.gens, i));
            }
        }
        Ok(p)
    }

    /// Reads back a homogeneous degree-1 polynomial.
    pub fn from_poly(p: &PolyF2) -> Result<LinearForm, AlgebraError> {
        let mut bits = 0u32;
        for m in &p.terms {
            if m.degree() != 1 {
                return Err(AlgebraError::Invalid(format!(
                    "not a linear form: {p}"
                )));
            }
            let i = m.exps.iter().position(|&e| e == 1).unwrap();
            bits |= 1 << i;
        }
        Ok(LinearForm {
            r: p.ring.gens,
            bits,
        })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "0");
        }
        let parts: Vec<String> = (0..self.r)
            .filter(|&i| self.coeff(i))
            .map(|i| format!("x{}", i + 1))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All admissible monomials of the given total degree, in canonical order.
pub fn monomials_of_degree(ring: &RingDescriptor, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; ring.gens];
    fn rec(
        ring: &RingDescriptor,
        i: usize,
        remaining: u32,
        exps: &mut Vec<u16>,
        out: &mut Vec<Monomial>,
    ) {
        if i == ring.gens {
            if remaining == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        let cap = match ring.caps() {
            Some(caps) => u32::from(caps[i]).min(remaining),
            None => remaining,
        };
        for e in 0..=cap {
            exps[i] = e as u16;
            rec(ring, i + 1, remaining - e, exps, out);
        }
        exps[i] = 0;
    }
    if ring.gens == 0 {
        if degree == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(ring, 0, degree, &mut exps, &mut out);
    out.sort();
    out
}

/// Dimension of the degree-`d` slice of the ring.
pub fn dim_of_degree(ring: &RingDescriptor, degree: u32) -> usize {
    monomials_of_degree(ring, degree).len()
}

/// Decides whether `p` lies in the ideal generated by `gens` using only
/// multiplier degrees bounded by `max_degree - deg(gen)`, by F2 linear
/// algebra over the monomial basis. On success the witness coefficients
/// satisfy `p = sum_i c_i * gens_i` exactly.
pub fn ideal_membership_window(
    p: &PolyF2,
    gens: &[PolyF2],
    max_degree: u32,
) -> Result<Option<Vec<PolyF2>>, AlgebraError> {
    for g in gens {
        p.check_ring(g)?;
    }
    if p.is_zero() {
        return Ok(Some(vec![PolyF2::zero(p.ring()); gens.len()]));
    }
    if p.degree().unwrap_or(0) > max_degree {
        return Ok(None);
    }
    let ring = p.ring();

    // Basis of all admissible monomials of degree <= max_degree.
    let mut basis: Vec<Monomial> = Vec::new();
    for d in 0..=max_degree {
        basis.extend(monomials_of_degree(ring, d));
    }
    let index = |m: &Monomial| basis.binary_search_by(|b| b.cmp(m).then(std::cmp::Ordering::Equal));
    let lookup: std::collections::BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let _ = index;

    // One column per (generator, multiplier monomial) pair.
    let mut columns: Vec<BitVec> = Vec::new();
    let mut column_labels: Vec<(usize, Monomial)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let Some(gdeg) = g.degree() else { continue };
        if gdeg > max_degree {
            continue;
        }
        for d in 0..=(max_degree - gdeg) {
            for m in monomials_of_degree(ring, d) {
                let prod = g
                    .mul(&PolyF2::from_monomials(ring, [m.clone()]))
                    .expect("same ring");
                let mut col = BitVec::zeros(basis.len());
                for t in prod.terms() {
                    if let Some(&i) = lookup.get(t) {
                        col.toggle(i);
                    }
                }
                columns.push(col);
                column_labels.push((gi, m));
            }
        }
    }

    let matrix = BitMatrix::from_columns(&columns, basis.len());
    let mut rhs = BitVec::zeros(basis.len());
    for t in p.terms() {
        if let Some(&i) = lookup.get(t) {
            rhs.set(i, true);
        }
    }
    let Some(solution) = matrix.solve(&rhs) else {
        return Ok(None);
    };
    let mut witness = vec![PolyF2::zero(ring); gens.len()];
    for j in solution.ones() {
        let (gi, m) = &column_labels[j];
        witness[*gi].toggle_term(m.clone());
    }
    Ok(Some(witness))
}

/// Text parser for the `x1^2*x2 + x1*x2^2` format.
pub fn parse_poly(input: &str, ring: &RingDescriptor) -> Result<PolyF2, AlgebraError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let err = |at: usize, msg: &str| AlgebraError::Parse {
        at,
        msg: msg.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let parse_number = |pos: &mut usize| -> Result<u32, AlgebraError> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(err(start, "expected a number"));
        }
        input[start..*pos]
            .parse::<u32>()
            .map_err(|_| err(start, "number out of range"))
    };

    let mut poly = PolyF2::zero(ring);
    loop {
        // One term: product of factors.
        let mut exps = vec![0u16; ring.gens];
        let mut constant_one = false;
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(err(pos, "expected a factor"));
            }
            let c = bytes[pos] as char;
            if c == '0' && !constant_one {
                // A bare zero term; only valid as a standalone factor.
                pos += 1;
                skip_ws(&mut pos);
                if exps.iter().all(|&e| e == 0) {
                    // contributes nothing
                    constant_one = false;
                    if pos < bytes.len() && bytes[pos] as char == '+' {
                        pos += 1;
                        break;
                    } else if pos >= bytes.len() {
                        return Ok(poly);
                    }
                    return Err(err(pos, "unexpected input after 0"));
                }
                return Err(err(pos, "0 cannot appear inside a product"));
            } else if c == '1' {
                pos += 1;
                constant_one = true;
            } else if c == ring.family.letter() || c == 'x' || c == 't' {
                if c != ring.family.letter() {
                    return Err(err(
                        pos,
                        &format!("generator family mismatch: expected {}", ring.family.letter()),
                    ));
                }
                pos += 1;
                let idx = parse_number(&mut pos)? as usize;
                if idx == 0 || idx > ring.gens {
                    return Err(err(pos, &format!("generator index {idx} out of range 1..{}", ring.gens)));
                }
                let mut exp = 1u32;
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] as char == '^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    exp = parse_number(&mut pos)?;
                }
                exps[idx - 1] = exps[idx - 1]
                    .checked_add(exp as u16)
                    .ok_or_else(|| err(pos, "exponent overflow"))?;
                constant_one = true;
            } else {
                return Err(err(pos, &format!("unexpected character `{c}`")));
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] as char == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        if constant_one {
            poly.toggle_term(Monomial::new(exps));
        }
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            return Ok(poly);
        }
        if bytes[pos] as char == '+' {
            pos += 1;
            continue;
        }
        return Err(err(pos, "expected `+` or end of input"));
    }
}
