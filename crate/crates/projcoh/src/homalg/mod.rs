//! Exact integer homological algebra.
//!
//! Smith normal form over checked machine integers drives everything here:
//! cohomology of bounded cochain complexes with Z and Z/m coefficients,
//! cellular models for spheres, discs, projective and Moore spaces,
//! tensor products with the signed differential, the integral Bockstein,
//! and the connecting-homomorphism sign check on 3x3 diagrams.

mod cells;
mod nine;

pub use cells::{cone, disc_pair, moore, moore_cone_pair, rp_chain, rp_pair, sphere, ChainModel, CwPair};
pub use nine::{pair_coefficient_diagram, CompositeSample, NineCheckOutcome, NineDiagram};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum HomalgError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("degree {0} out of range 0..{1}")]
    DegreeOutOfRange(usize, usize),
    #[error("not a cocycle in degree {0}")]
    NotACocycle(usize),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("{0}")]
    Invalid(String),
}

/// Dense integer matrix with checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, HomalgError> {
        if self.cols != other.rows {
            return Err(HomalgError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.checked_mul(other[(k, j)]).ok_or(HomalgError::Overflow)?;
                    out[(i, j)] = out[(i, j)].checked_add(prod).ok_or(HomalgError::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>, HomalgError> {
        if v.len() != self.cols {
            return Err(HomalgError::Shape(format!(
                "matrix {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0i64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0i64;
            for j in 0..self.cols {
                let prod = self[(i, j)].checked_mul(v[j]).ok_or(HomalgError::Overflow)?;
                acc = acc.checked_add(prod).ok_or(HomalgError::Overflow)?;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn map_mod(&self, m: i64) -> IntMatrix {
        if m == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        for x in &mut out.data {
            *x = x.rem_euclid(m);
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }

    /// row_dst += c * row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: i64) -> Result<(), HomalgError> {
        for j in 0..self.cols {
            let prod = c.checked_mul(self[(src, j)]).ok_or(HomalgError::Overflow)?;
            self[(dst, j)] = self[(dst, j)].checked_add(prod).ok_or(HomalgError::Overflow)?;
        }
        Ok(())
    }

    /// col_dst += c * col_src
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: i64) -> Result<(), HomalgError> {
        for i in 0..self.rows {
            let prod = c.checked_mul(self[(i, src)]).ok_or(HomalgError::Overflow)?;
            self[(i, dst)] = self[(i, dst)].checked_add(prod).ok_or(HomalgError::Overflow)?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `U * M * V = S` with unimodular transforms and their
/// inverses.
#[derive(Debug, Clone)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        (0..self.s.nrows().min(self.s.ncols()))
            .take_while(|&i| self.s[(i, i)] != 0)
            .count()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.s.nrows().min(self.s.ncols()))
            .map(|i| self.s[(i, i)])
            .collect()
    }
}

/// Smith normal form by elementary row/column operations: diagonal,
/// non-negative, in divisibility order.
pub fn snf(m: &IntMatrix) -> Result<Snf, HomalgError> {
    let mut s = m.clone();
    let rows = s.nrows();
    let cols = s.ncols();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Row op applied on the left of S; U <- R U, U_inv <- U_inv R^{-1}.
    macro_rules! row_swap {
        ($a:expr, $b:expr) => {{
            s.swap_rows($a, $b);
            u.swap_rows($a, $b);
            u_inv.swap_cols($a, $b);
        }};
    }
    macro_rules! row_add {
        ($dst:expr, $src:expr, $c:expr) => {{
            s.add_row_multiple($dst, $src, $c)?;
            u.add_row_multiple($dst, $src, $c)?;
            u_inv.add_col_multiple($src, $dst, -($c))?;
        }};
    }
    macro_rules! row_neg {
        ($i:expr) => {{
            s.negate_row($i);
            u.negate_row($i);
            u_inv.negate_col($i);
        }};
    }
    macro_rules! col_swap {
        ($a:expr, $b:expr) => {{
            s.swap_cols($a, $b);
            v.swap_cols($a, $b);
            v_inv.swap_rows($a, $b);
        }};
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $c:expr) => {{
            s.add_col_multiple($dst, $src, $c)?;
            v.add_col_multiple($dst, $src, $c)?;
            v_inv.add_row_multiple($src, $dst, -($c))?;
        }};
    }

    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        // Entry of minimal absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if s[(i, j)] != 0
                    && pivot.is_none_or(|(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap!(k, pi);
        col_swap!(k, pj);

        // Euclidean reduction of row and column k.
        loop {
            let mut dirty = false;
            for i in (k + 1)..rows {
                if s[(i, k)] != 0 {
                    let q = s[(i, k)].div_euclid(s[(k, k)]);
                    if q != 0 {
                        row_add!(i, k, -q);
                    }
                    if s[(i, k)] != 0 {
                        row_swap!(k, i);
                        dirty = true;
                    }
                }
            }
            for j in (k + 1)..cols {
                if s[(k, j)] != 0 {
                    let q = s[(k, j)].div_euclid(s[(k, k)]);
                    if q != 0 {
                        col_add!(j, k, -q);
                    }
                    if s[(k, j)] != 0 {
                        col_swap!(k, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        if s[(k, k)] < 0 {
            row_neg!(k);
        }

        // Enforce divisibility of the trailing block by the pivot.
        let pivot_val = s[(k, k)];
        let mut fixed = true;
        'scan: for i in (k + 1)..rows {
            for j in (k + 1)..cols {
                if s[(i, j)] % pivot_val != 0 {
                    row_add!(k, i, 1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            k += 1;
        }
    }
    Ok(Snf { s, u, v, u_inv, v_inv })
}

/// Solve `M x = b` over the integers via SNF; `None` when unsolvable.
pub fn solve_integer(m: &IntMatrix, b: &[i64]) -> Result<Option<Vec<i64>>, HomalgError> {
    let decomposition = snf(m)?;
    solve_with_snf(&decomposition, m.ncols(), b)
}

/// Solve using a precomputed SNF of the matrix.
pub fn solve_with_snf(
    decomposition: &Snf,
    ncols: usize,
    b: &[i64],
) -> Result<Option<Vec<i64>>, HomalgError> {
    let y = decomposition.u.mul_vec(b)?;
    let mut x_prime = vec![0i64; ncols];
    let diag = decomposition.diagonal();
    for (i, &yi) in y.iter().enumerate() {
        let d = if i < diag.len() { diag[i] } else { 0 };
        if d == 0 {
            if yi != 0 {
                return Ok(None);
            }
        } else {
            if yi % d != 0 {
                return Ok(None);
            }
            x_prime[i] = yi / d;
        }
    }
    Ok(Some(decomposition.v.mul_vec(&x_prime)?))
}

/// Integral basis of `ker M` (as columns).
pub fn kernel_lattice(m: &IntMatrix) -> Result<Vec<Vec<i64>>, HomalgError> {
    let d = snf(m)?;
    let rank = d.rank();
    Ok((rank..m.ncols()).map(|j| d.v.column(j)).collect())
}

/// Integral basis of the column lattice of `M`.
pub fn image_lattice(m: &IntMatrix) -> Result<Vec<Vec<i64>>, HomalgError> {
    let d = snf(m)?;
    let rank = d.rank();
    let mut basis = Vec::with_capacity(rank);
    for i in 0..rank {
        let s_i = d.s[(i, i)];
        let col = d.u_inv.column(i);
        basis.push(
            col.iter()
                .map(|&x| x.checked_mul(s_i).ok_or(HomalgError::Overflow))
                .collect::<Result<Vec<i64>, _>>()?,
        );
    }
    Ok(basis)
}

/// Finitely generated abelian group in invariant-factor form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FGAbelianGroup {
    pub free_rank: usize,
    /// Torsion coefficients, each >= 2, in divisibility order.
    pub torsion: Vec<u64>,
}

impl FGAbelianGroup {
    pub fn zero() -> Self {
        FGAbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(m: u64) -> Self {
        FGAbelianGroup {
            free_rank: 0,
            torsion: vec![m],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Dimension as an F2 vector space when every torsion coefficient is 2
    /// and the free rank is zero.
    pub fn f2_dim(&self) -> Option<usize> {
        if self.free_rank == 0 && self.torsion.iter().all(|&t| t == 2) {
            Some(self.torsion.len())
        } else {
            None
        }
    }
}

impl std::fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        for &t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Bounded cochain complex of finitely generated free Z-modules:
/// `d[n] : C^n -> C^{n+1}`.
#[derive(Debug, Clone)]
pub struct CochainComplexZ {
    ranks: Vec<usize>,
    d: Vec<IntMatrix>,
}

impl CochainComplexZ {
    pub fn new(ranks: Vec<usize>, d: Vec<IntMatrix>) -> Result<Self, HomalgError> {
        if !ranks.is_empty() && d.len() + 1 != ranks.len() {
            return Err(HomalgError::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                d.len()
            )));
        }
        for (n, m) in d.iter().enumerate() {
            if m.nrows() != ranks[n + 1] || m.ncols() != ranks[n] {
                return Err(HomalgError::Shape(format!(
                    "d[{n}] has shape {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    ranks[n + 1],
                    ranks[n]
                )));
            }
        }
        let complex = CochainComplexZ { ranks, d };
        complex.check_dd()?;
        Ok(complex)
    }

    fn check_dd(&self) -> Result<(), HomalgError> {
        for n in 0..self.d.len().saturating_sub(1) {
            if !self.d[n + 1].mul(&self.d[n])?.is_zero() {
                return Err(HomalgError::Invalid(format!("d∘d != 0 at degree {n}")));
            }
        }
        Ok(())
    }

    pub fn point() -> Self {
        CochainComplexZ {
            ranks: vec![1],
            d: Vec::new(),
        }
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `d^n`, materialized as a zero map outside the stored range.
    pub fn differential(&self, n: usize) -> IntMatrix {
        if n < self.d.len() {
            self.d[n].clone()
        } else {
            IntMatrix::zeros(self.rank(n + 1), self.rank(n))
        }
    }

    /// Total rank, a rough size gauge.
    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }
}

/// Cellular cochain complex of `RP^n`: one Z per degree, coboundaries
/// alternating 0, x2, 0, ...
pub fn rp_complex(n: usize) -> CochainComplexZ {
    let ranks = vec![1; n + 1];
    let d = (0..n)
        .map(|i| IntMatrix::from_rows(vec![vec![if i % 2 == 1 { 2 } else { 0 }]]))
        .collect();
    CochainComplexZ::new(ranks, d).expect("alternating complex is a complex")
}

/// Tensor product with the signed differential
/// `d(a ⊗ b) = da ⊗ b + (-1)^p a ⊗ db`.
pub fn tensor(a: &CochainComplexZ, b: &CochainComplexZ) -> Result<CochainComplexZ, HomalgError> {
    let top = a.top_degree() + b.top_degree();
    let block_offset = |n: usize, p: usize| -> usize {
        (0..p).map(|pp| a.rank(pp) * b.rank(n - pp)).sum()
    };
    let degree_rank = |n: usize| -> usize { (0..=n).map(|p| a.rank(p) * b.rank(n - p)).sum() };
    let ranks: Vec<usize> = (0..=top).map(degree_rank).collect();
    let mut diffs = Vec::new();
    for n in 0..top {
        let mut m = IntMatrix::zeros(ranks[n + 1], ranks[n]);
        for p in 0..=n {
            let q = n - p;
            let ra = a.rank(p);
            let rb = b.rank(q);
            if ra == 0 || rb == 0 {
                continue;
            }
            let src = block_offset(n, p);
            // d_A ⊗ I : block (p,q) -> block (p+1,q)
            let da = a.differential(p);
            let dst = block_offset(n + 1, p + 1);
            for i in 0..da.nrows() {
                for ii in 0..ra {
                    if da[(i, ii)] != 0 {
                        for j in 0..rb {
                            m[(dst + i * rb + j, src + ii * rb + j)] = da[(i, ii)];
                        }
                    }
                }
            }
            // (-1)^p I ⊗ d_B : block (p,q) -> block (p,q+1)
            let db = b.differential(q);
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let dst = block_offset(n + 1, p);
            let rb_next = b.rank(q + 1);
            for ii in 0..ra {
                for j in 0..db.nrows() {
                    for jj in 0..rb {
                        if db[(j, jj)] != 0 {
                            m[(dst + ii * rb_next + j, src + ii * rb + jj)] = sign * db[(j, jj)];
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    CochainComplexZ::new(ranks, diffs)
}

/// Tensor product of the `rp_complex`es of the given dimensions.
pub fn rp_product_complex(dims: &[u32]) -> Result<CochainComplexZ, HomalgError> {
    let mut acc = CochainComplexZ::point();
    for &n in dims {
        acc = tensor(&acc, &rp_complex(n as usize))?;
    }
    Ok(acc)
}

/// Coefficient ring for cohomology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Mod(u32),
}

/// Cohomology of a complex in one degree, with explicit class arithmetic.
///
/// Cocycles and boundaries are kept as integer lattices; classes are
/// canonical coordinate vectors with respect to the invariant-factor
/// presentation of the quotient.
pub struct ClassSpace {
    ambient: usize,
    z_basis: IntMatrix,
    z_solve: Snf,
    presentation: Snf,
    invariants: Vec<i64>,
    z_rank: usize,
}

impl ClassSpace {
    pub fn new(
        complex: &CochainComplexZ,
        n: usize,
        coeff: Coefficients,
    ) -> Result<ClassSpace, HomalgError> {
        if n > complex.top_degree() {
            return Err(HomalgError::DegreeOutOfRange(n, complex.top_degree() + 1));
        }
        let modulus = match coeff {
            Coefficients::Integers => 0i64,
            Coefficients::Mod(m) => i64::from(m),
        };
        let ambient = complex.rank(n);
        let d_out = complex.differential(n);
        let d_in = if n > 0 {
            complex.differential(n - 1)
        } else {
            IntMatrix::zeros(ambient, 0)
        };

        // Cocycle lattice: {x : d_out x ≡ 0 (mod m)}.
        let cocycle_gens: Vec<Vec<i64>> = if modulus == 0 {
            kernel_lattice(&d_out)?
        } else {
            let stacked = augment_mod(&d_out, modulus);
            kernel_lattice(&stacked)?
                .into_iter()
                .map(|v| v[..ambient].to_vec())
                .collect()
        };
        let gen_matrix = columns_to_matrix(&cocycle_gens, ambient);
        let z_cols = image_lattice(&gen_matrix)?;
        let z_basis = columns_to_matrix(&z_cols, ambient);
        let z_rank = z_cols.len();

        // Boundary lattice: im(d_in) (+ m Z^a when reducing mod m).
        let mut boundary_gens = image_lattice(&d_in)?;
        if modulus != 0 {
            for i in 0..ambient {
                let mut v = vec![0i64; ambient];
                v[i] = modulus;
                boundary_gens.push(v);
            }
        }

        // Express boundaries in cocycle-basis coordinates and present.
        let z_solve = snf(&z_basis)?;
        let mut w_cols = Vec::new();
        for b in &boundary_gens {
            let sol = solve_with_snf(&z_solve, z_rank, b)?
                .ok_or_else(|| HomalgError::Invalid("boundary not a cocycle".into()))?;
            w_cols.push(sol);
        }
        let w = columns_to_matrix(&w_cols, z_rank);
        let presentation = snf(&w)?;
        let mut invariants = vec![0i64; z_rank];
        for (i, d) in presentation.diagonal().into_iter().enumerate() {
            invariants[i] = d;
        }
        Ok(ClassSpace {
            ambient,
            z_basis,
            z_solve,
            presentation,
            invariants,
            z_rank,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn group(&self) -> FGAbelianGroup {
        let mut free = 0;
        let mut torsion = Vec::new();
        for &inv in &self.invariants {
            match inv {
                0 => free += 1,
                1 => {}
                d => torsion.push(d.unsigned_abs()),
            }
        }
        torsion.sort_unstable();
        FGAbelianGroup {
            free_rank: free,
            torsion,
        }
    }

    pub fn is_cocycle(&self, x: &[i64]) -> Result<bool, HomalgError> {
        Ok(self.raw_coords(x)?.is_some())
    }

    /// Coordinates in the presentation basis before reduction mod invariants.
    fn raw_coords(&self, x: &[i64]) -> Result<Option<Vec<i64>>, HomalgError> {
        if x.len() != self.ambient {
            return Err(HomalgError::Shape(format!(
                "class vector length {} vs ambient {}",
                x.len(),
                self.ambient
            )));
        }
        let Some(w) = solve_with_snf(&self.z_solve, self.z_rank, x)? else {
            return Ok(None);
        };
        Ok(Some(self.presentation.u.mul_vec(&w)?))
    }

    /// Canonical coordinates of the class of `x`: entry `i` is reduced
    /// modulo the `i`-th invariant factor (factor-1 entries are dropped,
    /// factor-0 entries are free integers).
    pub fn class_coords(&self, x: &[i64]) -> Result<Vec<i64>, HomalgError> {
        let raw = self
            .raw_coords(x)?
            .ok_or(HomalgError::NotACocycle(usize::MAX))?;
        let mut out = Vec::new();
        for (i, &c) in raw.iter().enumerate() {
            match self.invariants[i] {
                1 => {}
                0 => out.push(c),
                d => out.push(c.rem_euclid(d)),
            }
        }
        Ok(out)
    }

    pub fn is_zero_class(&self, x: &[i64]) -> Result<bool, HomalgError> {
        Ok(self.class_coords(x)?.iter().all(|&c| c == 0))
    }

    pub fn classes_equal(&self, x: &[i64], y: &[i64]) -> Result<bool, HomalgError> {
        Ok(self.class_coords(x)? == self.class_coords(y)?)
    }

    /// Order of the class of `x`; `None` means infinite.
    pub fn class_order(&self, x: &[i64]) -> Result<Option<u64>, HomalgError> {
        let raw = self
            .raw_coords(x)?
            .ok_or(HomalgError::NotACocycle(usize::MAX))?;
        let mut order = 1u64;
        for (i, &c) in raw.iter().enumerate() {
            match self.invariants[i] {
                1 => {}
                0 => {
                    if c != 0 {
                        return Ok(None);
                    }
                }
                d => {
                    let d = d.unsigned_abs();
                    let c = c.rem_euclid(d as i64) as u64;
                    if c != 0 {
                        let g = gcd(c, d);
                        order = lcm(order, d / g);
                    }
                }
            }
        }
        Ok(Some(order))
    }

    /// One cocycle per nontrivial summand of the presentation, with its
    /// order (0 meaning infinite).
    pub fn generators(&self) -> Result<Vec<(Vec<i64>, u64)>, HomalgError> {
        let mut gens = Vec::new();
        for (i, &inv) in self.invariants.iter().enumerate() {
            if inv == 1 {
                continue;
            }
            // w = U^{-1} e_i, cocycle = Z_basis w.
            let e_i: Vec<i64> = (0..self.z_rank).map(|j| i64::from(j == i)).collect();
            let w = self.presentation.u_inv.mul_vec(&e_i)?;
            let cocycle = self.z_basis.mul_vec(&w)?;
            gens.push((cocycle, inv.unsigned_abs()));
        }
        Ok(gens)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn columns_to_matrix(cols: &[Vec<i64>], rows: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

/// `[M | m*I]`, the standard trick for solving congruences via integer SNF.
fn augment_mod(m: &IntMatrix, modulus: i64) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.nrows(), m.ncols() + m.nrows());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] = m[(i, j)];
        }
        out[(i, m.ncols() + i)] = modulus;
    }
    out
}

/// Solve `M x ≡ b (mod modulus)`; for `modulus = 0` this is the integer solve.
pub fn solve_mod(m: &IntMatrix, b: &[i64], modulus: i64) -> Result<Option<Vec<i64>>, HomalgError> {
    if modulus == 0 {
        return solve_integer(m, b);
    }
    let aug = augment_mod(m, modulus);
    Ok(solve_integer(&aug, b)?.map(|xy| xy[..m.ncols()].to_vec()))
}

/// Cohomology of the complex in one degree.
pub fn cohomology(
    complex: &CochainComplexZ,
    n: usize,
    coeff: Coefficients,
) -> Result<FGAbelianGroup, HomalgError> {
    Ok(ClassSpace::new(complex, n, coeff)?.group())
}

/// All cohomology groups up to `max_degree` (inclusive); degrees above the
/// top of the complex are zero.
pub fn cohomology_table(
    complex: &CochainComplexZ,
    max_degree: usize,
    coeff: Coefficients,
) -> Result<Vec<FGAbelianGroup>, HomalgError> {
    (0..=max_degree)
        .map(|n| {
            if n > complex.top_degree() {
                Ok(FGAbelianGroup::zero())
            } else {
                cohomology(complex, n, coeff)
            }
        })
        .collect()
}

/// The integral Bockstein: lift a mod-2 cocycle to integers, apply `d`,
/// divide by 2, and return the class of the result in `H^{n+1}(C; Z)`.
pub fn bockstein0(
    complex: &CochainComplexZ,
    class_mod2: &[i64],
    n: usize,
) -> Result<(FGAbelianGroup, Vec<i64>), HomalgError> {
    if n > complex.top_degree() {
        return Err(HomalgError::DegreeOutOfRange(n, complex.top_degree() + 1));
    }
    let d_out = complex.differential(n);
    let image = d_out.mul_vec(class_mod2)?;
    if image.iter().any(|&x| x % 2 != 0) {
        return Err(HomalgError::NotACocycle(n));
    }
    let halved: Vec<i64> = image.iter().map(|&x| x / 2).collect();
    if n + 1 > complex.top_degree() {
        return Ok((FGAbelianGroup::zero(), Vec::new()));
    }
    let space = ClassSpace::new(complex, n + 1, Coefficients::Integers)?;
    let coords = space.class_coords(&halved)?;
    Ok((space.group(), coords))
}
