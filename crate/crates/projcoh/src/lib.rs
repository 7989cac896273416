//! Exact algebra for free `(Z/2)^r`-actions on products of real projective spaces.
//!
//! The crate mechanizes the cohomological obstruction theory behind the rank
//! bound `r <= mu(n_1) + ... + mu(n_k)` for free cellular actions of
//! elementary abelian 2-groups on spaces homotopy equivalent to
//! `RP^{n_1} x ... x RP^{n_k}` with trivial action on mod-2 cohomology:
//!
//! * [`f2algebra`] — multivariate polynomials over F2 (free and truncated
//!   rings), the Sq^1 derivation, evaluation, substitution and windowed
//!   ideal membership;
//! * [`quadforms`] — quadratic forms over F2: square detection, linear
//!   factorizations, common-zero scans, Bockstein-factor solving, subspaces;
//! * [`intcoh`] — integral cohomology of `B(Z/2)^r` and of products of
//!   projective spaces through mod-2 images of torsion classes;
//! * [`homalg`] — Smith normal form, integer cochain complexes, cellular
//!   models, connecting homomorphisms and the 3x3-diagram sign check;
//! * [`sseq`] — windowed E2/E3 pages of the Borel spectral sequence with
//!   differentials driven by the k-invariants;
//! * [`checker`] — the admissibility engine: mu, the rank bound, the
//!   necessary-condition battery, the subgroup-certificate trace, the
//!   small-case quadratic-form search and the catalog of model actions.

pub mod checker;
pub mod f2algebra;
pub mod f2linalg;
pub mod homalg;
pub mod intcoh;
pub mod quadforms;
pub mod sseq;
