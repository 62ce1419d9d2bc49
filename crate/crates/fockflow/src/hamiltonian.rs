//! Initial, problem, and time-interpolated Hamiltonians.
//!
//! The initial Hamiltonian is the coherent-state form
//! `H_I = Σ_i (a†_i − α_i*)(a_i − α_i)`, optionally with the one-mode
//! diagonal shift `(1 − |α|²)·1` that fixes its ground energy near zero.
//! Problem Hamiltonians are diagonal in the Fock basis, either from an
//! explicit diagonal or from a squared integer polynomial. The two are
//! joined by the linear ramp `ℋ(t) = (1 − t/T)·H_I + (t/T)·H_P`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{single_mode_lowering, embed, BoundaryCondition, FockSpace};
use crate::polynomial::DiophantineSpec;

/// Elementwise tolerance of the Hermiticity certificate.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Per-mode coherent-state displacements `α_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Alpha(Vec<Complex64>);

impl Alpha {
    pub fn new(values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty(), "alpha needs at least one component");
        Self(values)
    }

    /// One-mode real displacement.
    pub fn real(value: f64) -> Self {
        Self(vec![Complex64::new(value, 0.0)])
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α|² = Σ_i |α_i|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescale so the total modulus `√Σ|α_i|²` equals `modulus`,
    /// preserving all phases and component ratios.
    pub fn with_modulus(&self, modulus: f64) -> Self {
        let current = self.norm_sqr().sqrt();
        if current == 0.0 {
            let mut v = vec![Complex64::new(0.0, 0.0); self.0.len()];
            v[0] = Complex64::new(modulus, 0.0);
            return Self(v);
        }
        Self(self.0.iter().map(|a| a * (modulus / current)).collect())
    }

    /// Multiply every component's modulus by `factor`, phases preserved.
    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|a| a * factor).collect())
    }
}

/// A dense complex square matrix certified Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Certify and wrap a matrix. The largest deviation
    /// `|H[i,j] − conj(H[j,i])|` must stay within [`HERMITICITY_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimMismatch(matrix.nrows(), matrix.ncols()));
        }
        let mut max_dev: f64 = 0.0;
        for i in 0..matrix.nrows() {
            for j in i..matrix.ncols() {
                let dev = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                max_dev = max_dev.max(dev);
            }
        }
        if max_dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(max_dev));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Real part of the diagonal entry `⟨m|H|m⟩`.
    pub fn diagonal_entry(&self, m: usize) -> f64 {
        self.matrix[(m, m)].re
    }

    /// Frobenius norm, used as a cheap upper bound on the operator norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// The linear evolution window `[0, T]` with its sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    t_total: f64,
    grid: Vec<f64>,
}

impl Schedule {
    /// Uniform grid of `points ≥ 2` samples covering `[0, t_total]`.
    pub fn linear(t_total: f64, points: usize) -> Result<Self> {
        if !(t_total > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "total time must be positive, got {t_total}"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidConfig(format!(
                "schedule needs at least 2 grid points, got {points}"
            )));
        }
        let n = points - 1;
        let grid = (0..=n)
            .map(|i| {
                if i == n {
                    t_total
                } else {
                    t_total * i as f64 / n as f64
                }
            })
            .collect();
        Ok(Self { t_total, grid })
    }

    /// Wrap an explicit grid; it must start at 0, end at its maximum,
    /// and increase strictly.
    pub fn from_grid(grid: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidConfig(
                "schedule needs at least 2 grid points".into(),
            ));
        }
        if grid[0] != 0.0 {
            return Err(Error::InvalidConfig("schedule grid must start at 0".into()));
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "schedule grid must be strictly increasing".into(),
            ));
        }
        let t_total = *grid.last().unwrap();
        Ok(Self { t_total, grid })
    }

    pub fn t_total(&self) -> f64 {
        self.t_total
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

/// Source of a problem Hamiltonian: an explicit diagonal pinned to one
/// dimension, or a polynomial that grows with the truncation.
#[derive(Debug, Clone)]
pub enum HpSpec {
    Diag(Vec<f64>),
    Polynomial(DiophantineSpec),
}

impl HpSpec {
    pub fn build(&self, space: &FockSpace) -> Result<HermitianOperator> {
        match self {
            HpSpec::Diag(diag) => build_h_problem_diag(space, diag),
            HpSpec::Polynomial(poly) => build_h_problem_dioph(space, poly),
        }
    }
}

/// Build `H_I` on `space` from its boundary-conditioned ladder matrices.
///
/// Per mode the operator is `a†a + |α|²·1` plus hopping cross terms
/// `−α√(n+1)` on the sub-diagonal (`−α*` above). Under a wraparound
/// boundary the number operator carries `d` at the vacuum slot and the
/// cross terms gain corner entries `±α√d` (sign `+` periodic, `−`
/// anti-periodic — the corners enter with the opposite sign to the bulk
/// hopping). With `shifted`, adds Smith's `(1 − |α|²)·1` (one mode only).
pub fn build_h_initial(space: &FockSpace, alpha: &Alpha, shifted: bool) -> Result<HermitianOperator> {
    let modes = space.modes();
    if alpha.len() != modes {
        return Err(Error::LengthMismatch {
            got: alpha.len(),
            expected: modes,
        });
    }
    if shifted && modes != 1 {
        return Err(Error::ShiftUnsupported(modes));
    }
    let dim = space.dim();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for (mode, &a) in alpha.components().iter().enumerate() {
        let d = space.dims()[mode];
        let block = single_mode_h_initial(d, a, space.boundary());
        h += embed(space, mode, &block);
    }
    if shifted {
        let shift = Complex64::new(1.0 - alpha.norm_sqr(), 0.0);
        for i in 0..dim {
            h[(i, i)] += shift;
        }
    }
    HermitianOperator::new(h)
}

fn single_mode_h_initial(d: usize, alpha: Complex64, boundary: BoundaryCondition) -> DMatrix<Complex64> {
    let a = single_mode_lowering(d, boundary);
    let mut h = a.adjoint() * &a;
    let alpha_sq = Complex64::new(alpha.norm_sqr(), 0.0);
    for n in 0..d {
        h[(n, n)] += alpha_sq;
    }
    for n in 0..d - 1 {
        let hop = ((n + 1) as f64).sqrt();
        h[(n, n + 1)] += -alpha.conj() * hop;
        h[(n + 1, n)] += -alpha * hop;
    }
    if let Some(sign) = boundary.wrap_sign() {
        let wrap = sign * (d as f64).sqrt();
        h[(0, d - 1)] += alpha.conj() * wrap;
        h[(d - 1, 0)] += alpha * wrap;
    }
    h
}

/// Diagonal problem Hamiltonian from explicit entries in basis order.
/// The boundary condition plays no role in `H_P`.
pub fn build_h_problem_diag(space: &FockSpace, diag: &[f64]) -> Result<HermitianOperator> {
    if diag.len() != space.dim() {
        return Err(Error::LengthMismatch {
            got: diag.len(),
            expected: space.dim(),
        });
    }
    let mut h = DMatrix::<Complex64>::zeros(space.dim(), space.dim());
    for (i, &v) in diag.iter().enumerate() {
        h[(i, i)] = Complex64::new(v, 0.0);
    }
    HermitianOperator::new(h)
}

/// Diagonal problem Hamiltonian with entry `D(n_1, …, n_K)²` at each
/// basis tuple; `D` is evaluated in exact integer arithmetic.
pub fn build_h_problem_dioph(
    space: &FockSpace,
    poly: &DiophantineSpec,
) -> Result<HermitianOperator> {
    if poly.variables() != space.modes() {
        return Err(Error::VariableCountMismatch {
            got: poly.variables(),
            expected: space.modes(),
        });
    }
    let mut diag = Vec::with_capacity(space.dim());
    for occ in space.basis() {
        diag.push(poly.eval_squared(&occ)?);
    }
    build_h_problem_diag(space, &diag)
}

/// The ramp `ℋ(t) = (1 − t/T)·hI + (t/T)·hP`; exact at both endpoints.
pub fn interpolate(
    hi: &HermitianOperator,
    hp: &HermitianOperator,
    t: f64,
    sched: &Schedule,
) -> Result<HermitianOperator> {
    if hi.dim() != hp.dim() {
        return Err(Error::DimMismatch(hi.dim(), hp.dim()));
    }
    let t_total = sched.t_total();
    if !(0.0..=t_total).contains(&t) {
        return Err(Error::TimeOutOfRange {
            t,
            lo: 0.0,
            hi: t_total,
        });
    }
    let s = t / t_total;
    let m = hi.matrix() * Complex64::new(1.0 - s, 0.0) + hp.matrix() * Complex64::new(s, 0.0);
    HermitianOperator::new(m)
}

/// Ratio of the ramp's diagonal pieces at basis state `m`:
/// `(1 − t/T)(Σn_i + |α|²)` over `(t/T)·⟨m|H_P|m⟩`. Values well above 1
/// mean the initial Hamiltonian still dominates this late in the ramp,
/// leaving no room for an avoided crossing to form afterwards. Returns
/// `+∞` when the problem diagonal vanishes.
pub fn diagonal_dominance(
    space: &FockSpace,
    m: usize,
    alpha: &Alpha,
    hp_diag_m: f64,
    t: f64,
    sched: &Schedule,
) -> Result<f64> {
    let t_total = sched.t_total();
    if !(t > 0.0 && t < t_total) {
        return Err(Error::TimeOutOfRange {
            t,
            lo: 0.0,
            hi: t_total,
        });
    }
    let s = t / t_total;
    let numerator = (1.0 - s) * (space.total_occupation(m) as f64 + alpha.norm_sqr());
    let denominator = s * hp_diag_m;
    if denominator == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(numerator / denominator)
}
