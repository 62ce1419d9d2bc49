//! Dense Hermitian eigendecomposition, spectral flow along the ramp,
//! and the crossing / matrix-element condition monitor.
//!
//! Branches are identified by ascending energy order at every time, not
//! by eigenvector continuity: the monitored condition concerns the
//! instantaneous ground and first-excited states, which are defined by
//! that order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{interpolate, HermitianOperator, Schedule};

/// Relative spacing of the gap refinement stop: `δt = T · GAP_REFINE_REL`.
pub const GAP_REFINE_REL: f64 = 1e-6;

/// Default absolute tolerance of [`degeneracy_check`].
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Eigenvalues in ascending order with orthonormal eigenvectors in
/// matching columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// The eigenvector of the `k`-th lowest eigenvalue.
    pub fn vector(&self, k: usize) -> DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Full decomposition of a certified Hermitian operator.
pub fn eigensystem(h: &HermitianOperator) -> Result<EigenSystem> {
    let dim = h.dim();
    let eig = h
        .matrix()
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure(dim))?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(dim, dim);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok(EigenSystem { values, vectors })
}

/// Eigenvalues only, ascending. Cheaper than [`eigensystem`] inside the
/// gap refinement loop.
fn eigenvalues_sorted(h: &HermitianOperator) -> Vec<f64> {
    let mut v: Vec<f64> = h.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// One sample of the spectral flow: ordered eigenvalues, the lowest gap,
/// and the three monitored matrix-element magnitudes between the ground
/// and first-excited eigenvectors:
/// `m_pi = |⟨e|H_P − H_I|g⟩|`, `m_p = |⟨e|H_P|g⟩|`, `m_i = |⟨e|H_I|g⟩|`.
#[derive(Debug, Clone)]
pub struct FlowRecord {
    pub t: f64,
    pub values: Vec<f64>,
    pub gap: f64,
    pub m_pi: f64,
    pub m_p: f64,
    pub m_i: f64,
}

/// Where the two lowest branches come closest, and when (if ever) all
/// three monitored magnitudes vanish simultaneously.
///
/// `zero_times` holds the grid times of interior sub-`eps` dips. Runs of
/// sub-`eps` samples that extend into either end of the grid are endpoint
/// artifacts, not violations: the condition is stated on the open
/// interval, and under a rigid edge every cross element decays to zero
/// as `t → T` whenever `H_I` does not couple the two final eigenstates.
#[derive(Debug, Clone)]
pub struct CrossingReport {
    pub t_min_gap: f64,
    pub min_gap: f64,
    pub is_avoided: bool,
    pub zero_times: Vec<f64>,
}

/// Magnitude of `⟨bra| op |ket⟩`.
fn sandwich(bra: &DVector<Complex64>, op: &DMatrix<Complex64>, ket: &DVector<Complex64>) -> f64 {
    bra.dotc(&(op * ket)).norm()
}

/// Decompose `ℋ(t)` at every grid time of `sched`.
pub fn spectral_flow(
    hi: &HermitianOperator,
    hp: &HermitianOperator,
    sched: &Schedule,
) -> Result<Vec<FlowRecord>> {
    if hi.dim() != hp.dim() {
        return Err(Error::DimMismatch(hi.dim(), hp.dim()));
    }
    let diff = hp.matrix() - hi.matrix();
    let mut records = Vec::with_capacity(sched.grid().len());
    for &t in sched.grid() {
        let h = interpolate(hi, hp, t, sched)?;
        let es = eigensystem(&h)?;
        let g = es.vector(0);
        let e = es.vector(1);
        records.push(FlowRecord {
            t,
            gap: es.values()[1] - es.values()[0],
            m_pi: sandwich(&e, &diff, &g),
            m_p: sandwich(&e, hp.matrix(), &g),
            m_i: sandwich(&e, hi.matrix(), &g),
            values: es.values().to_vec(),
        });
    }
    Ok(records)
}

/// Scan a flow for simultaneous sub-`eps` dips and refine the minimum
/// gap by golden-section search around the coarse minimum, stopping at
/// a bracket width of `T · 1e-6`.
pub fn condition_monitor(
    hi: &HermitianOperator,
    hp: &HermitianOperator,
    sched: &Schedule,
    flow: &[FlowRecord],
    eps: f64,
) -> Result<CrossingReport> {
    if flow.is_empty() {
        return Err(Error::InvalidConfig("flow is empty".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "eps must be positive, got {eps}"
        )));
    }

    let n = flow.len();
    let sub_eps: Vec<bool> = flow
        .iter()
        .map(|r| r.m_pi.max(r.m_p).max(r.m_i) < eps)
        .collect();
    let mut zero_times = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if sub_eps[i] {
            let start = i;
            while i + 1 < n - 1 && sub_eps[i + 1] {
                i += 1;
            }
            let touches_left = start == 1;
            let touches_right = i == n - 2;
            if !(touches_left || touches_right) {
                zero_times.extend(flow[start..=i].iter().map(|r| r.t));
            }
            i += 1;
        } else {
            i += 1;
        }
    }

    // coarse minimum of the gap, then golden-section refinement
    let coarse = flow
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.gap.total_cmp(&b.1.gap))
        .map(|(i, _)| i)
        .unwrap();
    let lo = flow[coarse.saturating_sub(1)].t;
    let hi_t = flow[(coarse + 1).min(n - 1)].t;
    let gap_at = |t: f64| -> Result<f64> {
        let h = interpolate(hi, hp, t, sched)?;
        let v = eigenvalues_sorted(&h);
        Ok(v[1] - v[0])
    };
    let (mut t_min_gap, mut min_gap) = (flow[coarse].t, flow[coarse].gap);
    if hi_t > lo {
        let (t_star, g_star) = golden_section_min(&gap_at, lo, hi_t, sched.t_total() * GAP_REFINE_REL)?;
        if g_star < min_gap {
            t_min_gap = t_star;
            min_gap = g_star;
        }
    }

    Ok(CrossingReport {
        t_min_gap,
        min_gap,
        is_avoided: min_gap > 0.0,
        zero_times,
    })
}

fn golden_section_min(
    f: &impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

/// True when the two lowest eigenvalues are within `tol` of each other.
/// A true result at `t = T` bars the identification criterion.
pub fn degeneracy_check(es: &EigenSystem, tol: f64) -> bool {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(es.dim() >= 2, "degeneracy needs at least two levels");
    es.values()[1] - es.values()[0] < tol
}
