//! Truncated bosonic Fock spaces and their ladder-operator matrices.
//!
//! A [`FockSpace`] enumerates the tensor-product occupation basis
//! `|n_1, …, n_K⟩` with per-mode truncations `d_i`, ordered
//! lexicographically with mode 0 slowest. The truncation edge carries a
//! [`BoundaryCondition`]: a rigid cutoff, or a (anti-)periodic wraparound
//! where the ladder operators connect `|d-1⟩` and `|0⟩` with amplitude
//! `±√d`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest total dimension accepted by [`FockSpace::new`]. Dense
/// eigensolves above this stop being desk-scale.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Rule for the ladder-operator action at the truncation edge.
///
/// Rigid: `a†|d-1⟩ = 0`, `a|0⟩ = 0`. Periodic / anti-periodic:
/// `a†|d-1⟩ = ±√d |0⟩` and `a|0⟩ = ±√d |d-1⟩`, so the number operator
/// picks up `a†a|0⟩ = d |0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Rigid,
    Periodic,
    AntiPeriodic,
}

impl BoundaryCondition {
    /// Sign of the `√d` wraparound amplitude, `None` for rigid.
    pub fn wrap_sign(self) -> Option<f64> {
        match self {
            BoundaryCondition::Rigid => None,
            BoundaryCondition::Periodic => Some(1.0),
            BoundaryCondition::AntiPeriodic => Some(-1.0),
        }
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BoundaryCondition::Rigid => "rigid",
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::AntiPeriodic => "antiperiodic",
        };
        f.write_str(s)
    }
}

/// A truncated multi-mode Fock basis with a shared boundary condition.
///
/// Immutable after construction; basis index `0` is the vacuum
/// `|0, …, 0⟩` and indices increase lexicographically in the occupation
/// tuple (mode 0 is the slowest digit).
#[derive(Debug, Clone)]
pub struct FockSpace {
    dims: Vec<usize>,
    boundary: BoundaryCondition,
    strides: Vec<usize>,
    dim: usize,
}

impl FockSpace {
    /// Build a space with the default dimension cap.
    pub fn new(modes: usize, dims: &[usize], boundary: BoundaryCondition) -> Result<Self> {
        Self::with_cap(modes, dims, boundary, DEFAULT_DIM_CAP)
    }

    /// Build a space with an explicit cap on the total dimension.
    pub fn with_cap(
        modes: usize,
        dims: &[usize],
        boundary: BoundaryCondition,
        cap: usize,
    ) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidConfig("at least one mode is required".into()));
        }
        if dims.len() != modes {
            return Err(Error::LengthMismatch {
                got: dims.len(),
                expected: modes,
            });
        }
        let mut total: u128 = 1;
        for &d in dims {
            if d < 2 {
                return Err(Error::ZeroDimension(d));
            }
            total *= d as u128;
            if total > cap as u128 {
                return Err(Error::Overflow { got: total, cap });
            }
        }
        let dim = total as usize;
        // strides for lexicographic order, mode 0 slowest
        let mut strides = vec![1usize; modes];
        for i in (0..modes.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Ok(Self {
            dims: dims.to_vec(),
            boundary,
            strides,
            dim,
        })
    }

    pub fn modes(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.boundary
    }

    /// Total dimension `Π d_i`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis index of an occupation tuple.
    pub fn index_of(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.modes() {
            return Err(Error::LengthMismatch {
                got: occupation.len(),
                expected: self.modes(),
            });
        }
        let mut idx = 0usize;
        for (i, &n) in occupation.iter().enumerate() {
            if n >= self.dims[i] {
                return Err(Error::InvalidConfig(format!(
                    "occupation {n} out of range for mode {i} (dim {})",
                    self.dims[i]
                )));
            }
            idx += n * self.strides[i];
        }
        Ok(idx)
    }

    /// Occupation tuple of a basis index.
    pub fn occupation(&self, index: usize) -> Vec<usize> {
        assert!(index < self.dim, "basis index {index} out of range");
        self.strides
            .iter()
            .zip(&self.dims)
            .map(|(&s, &d)| (index / s) % d)
            .collect()
    }

    /// Total occupation `Σ n_i` of a basis index.
    pub fn total_occupation(&self, index: usize) -> usize {
        self.occupation(index).iter().sum()
    }

    /// Enumerate all occupation tuples in basis order.
    pub fn basis(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.dim).map(|i| self.occupation(i))
    }
}

/// Per-mode ladder matrices embedded in the full tensor-product space.
#[derive(Debug, Clone)]
pub struct LadderMatrices {
    lowering: Vec<DMatrix<Complex64>>,
    raising: Vec<DMatrix<Complex64>>,
    number: Vec<DMatrix<Complex64>>,
}

impl LadderMatrices {
    /// Build `a_i`, `a†_i` and `n_i = a†_i a_i` for every mode of `space`.
    pub fn build(space: &FockSpace) -> Self {
        let modes = space.modes();
        let mut lowering = Vec::with_capacity(modes);
        let mut raising = Vec::with_capacity(modes);
        let mut number = Vec::with_capacity(modes);
        for mode in 0..modes {
            let a = embed(space, mode, &single_mode_lowering(space.dims[mode], space.boundary));
            let adag = a.adjoint();
            let num = &adag * &a;
            lowering.push(a);
            raising.push(adag);
            number.push(num);
        }
        Self {
            lowering,
            raising,
            number,
        }
    }

    pub fn lowering(&self, mode: usize) -> &DMatrix<Complex64> {
        &self.lowering[mode]
    }

    pub fn raising(&self, mode: usize) -> &DMatrix<Complex64> {
        &self.raising[mode]
    }

    pub fn number(&self, mode: usize) -> &DMatrix<Complex64> {
        &self.number[mode]
    }
}

/// Single-mode annihilation matrix: `a|n⟩ = √n |n-1⟩`, plus the
/// wraparound column `a|0⟩ = ±√d |d-1⟩` for (anti-)periodic edges.
pub(crate) fn single_mode_lowering(d: usize, boundary: BoundaryCondition) -> DMatrix<Complex64> {
    let mut a = DMatrix::<Complex64>::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    if let Some(sign) = boundary.wrap_sign() {
        a[(d - 1, 0)] = Complex64::new(sign * (d as f64).sqrt(), 0.0);
    }
    a
}

/// Embed a single-mode operator into the tensor-product space:
/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with mode 0 the leftmost factor.
pub(crate) fn embed(
    space: &FockSpace,
    mode: usize,
    op: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let left: usize = space.dims[..mode].iter().product();
    let right: usize = space.dims[mode + 1..].iter().product();
    let eye_left = DMatrix::<Complex64>::identity(left, left);
    let eye_right = DMatrix::<Complex64>::identity(right, right);
    eye_left.kronecker(op).kronecker(&eye_right)
}
