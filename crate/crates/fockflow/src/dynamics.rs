//! Time-dependent Schrödinger integration along the ramp.
//!
//! The propagator is the exponential midpoint rule: over each substep
//! `[t, t+h]` the state is advanced by the exact unitary
//! `exp(−i·h·ℋ(t+h/2))`. The exponential uses a diagonal Padé
//! approximant with scaling and squaring, which maps the skew-Hermitian
//! generator to a unitary matrix by construction, with an
//! eigendecomposition fallback. Substep boundaries align with the
//! sampling grid, so sampled probabilities never interpolate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{interpolate, HermitianOperator, Schedule};
use crate::spectra::{degeneracy_check, eigensystem, DEGENERACY_TOL};

/// Allowed deviation of the state norm from one at sample times.
pub const NORM_TOL: f64 = 1e-8;

/// Substeps per unit time giving 20000 substeps at Smith's T.
const SUBSTEPS_PER_TIME: f64 = 20000.0 / 13.3444;

/// A normalized amplitude vector over the Fock basis at one time.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    t: f64,
}

impl StateVector {
    pub fn new(amplitudes: DVector<Complex64>, t: f64) -> Self {
        Self { amplitudes, t }
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `|amplitude|²` per basis state.
    pub fn fock_probs(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// One sampled point of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: StateVector,
    pub fock_probs: Vec<f64>,
    /// `|⟨g(t)|ψ(t)⟩|²` against the instantaneous ground state.
    pub p_ground: f64,
    /// `|⟨e(t)|ψ(t)⟩|²` against the instantaneous first excited state.
    pub p_excited: f64,
}

/// The sampled evolution of one state along the schedule grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn first(&self) -> &TrajectorySample {
        self.samples.first().expect("trajectory is never empty")
    }

    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory is never empty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorMethod {
    ExponentialMidpoint,
}

/// Stepping resolution for [`evolve`].
#[derive(Debug, Clone, Copy)]
pub struct PropagatorConfig {
    substeps: usize,
    method: PropagatorMethod,
}

impl PropagatorConfig {
    pub const MIN_SUBSTEPS: usize = 100;

    /// `substeps` uniform steps over `[0, T]`; at least 100.
    pub fn new(substeps: usize) -> Result<Self> {
        if substeps < Self::MIN_SUBSTEPS {
            return Err(Error::InvalidConfig(format!(
                "substeps must be at least {}, got {substeps}",
                Self::MIN_SUBSTEPS
            )));
        }
        Ok(Self {
            substeps,
            method: PropagatorMethod::ExponentialMidpoint,
        })
    }

    /// Default resolution scaled linearly with the total time.
    pub fn scaled_for(t_total: f64) -> Self {
        let substeps = (t_total * SUBSTEPS_PER_TIME).round() as usize;
        Self {
            substeps: substeps.max(Self::MIN_SUBSTEPS),
            method: PropagatorMethod::ExponentialMidpoint,
        }
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn method(&self) -> PropagatorMethod {
        self.method
    }
}

/// The ground state of `hi`, with the global phase fixed by making the
/// largest-magnitude amplitude real and positive.
pub fn initial_state(hi: &HermitianOperator) -> Result<StateVector> {
    let es = eigensystem(hi)?;
    if degeneracy_check(&es, DEGENERACY_TOL) {
        return Err(Error::DegenerateStart(es.values()[1] - es.values()[0]));
    }
    let mut v = es.vector(0);
    let k = (0..v.len())
        .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
        .unwrap();
    let pivot = v[k];
    let phase = pivot / pivot.norm();
    v *= phase.conj();
    v /= Complex64::new(v.norm(), 0.0);
    Ok(StateVector::new(v, 0.0))
}

/// Integrate the Schrödinger equation `∂_t ψ = −i ℋ(t) ψ` from `psi0`,
/// sampling at every grid time of `sched`.
pub fn evolve(
    hi: &HermitianOperator,
    hp: &HermitianOperator,
    sched: &Schedule,
    cfg: &PropagatorConfig,
    psi0: &StateVector,
) -> Result<Trajectory> {
    if hi.dim() != hp.dim() {
        return Err(Error::DimMismatch(hi.dim(), hp.dim()));
    }
    if psi0.dim() != hi.dim() {
        return Err(Error::DimMismatch(psi0.dim(), hi.dim()));
    }
    if (psi0.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidConfig(format!(
            "initial state norm is {}, expected 1",
            psi0.norm()
        )));
    }
    let t_total = sched.t_total();
    let mut psi = psi0.amplitudes().clone();
    let mut samples = Vec::with_capacity(sched.grid().len());
    let mut t_prev = 0.0;
    for (k, &t) in sched.grid().iter().enumerate() {
        if k > 0 {
            let span = t - t_prev;
            let n = ((cfg.substeps as f64) * span / t_total).round().max(1.0) as usize;
            let h = span / n as f64;
            for j in 0..n {
                let t_mid = t_prev + (j as f64 + 0.5) * h;
                let gen = interpolate(hi, hp, t_mid, sched)?;
                let u = expm_minus_i(gen.matrix(), h)?;
                psi = &u * psi;
            }
        }
        let state = StateVector::new(psi.clone(), t);
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NormDrift { t, norm });
        }
        let es = eigensystem(&interpolate(hi, hp, t, sched)?)?;
        let p_ground = es.vector(0).dotc(&psi).norm_sqr();
        let p_excited = es.vector(1).dotc(&psi).norm_sqr();
        samples.push(TrajectorySample {
            t,
            fock_probs: state.fock_probs(),
            state,
            p_ground,
            p_excited,
        });
        t_prev = t;
    }
    Ok(Trajectory { samples })
}

/// Final `|amplitude|²` per Fock basis state.
pub fn final_fock_probs(traj: &Trajectory) -> Vec<f64> {
    traj.last().fock_probs.clone()
}

/// `exp(−i·theta·h)` for Hermitian `h`: diagonal [6/6] Padé approximant
/// with scaling and squaring. The approximant of a skew-Hermitian
/// argument is exactly unitary, so the norm cannot drift systematically.
pub(crate) fn expm_minus_i(h: &DMatrix<Complex64>, theta: f64) -> Result<DMatrix<Complex64>> {
    let dim = h.nrows();
    let a = h * Complex64::new(0.0, -theta);
    let norm1 = one_norm(&a);
    let scalings = if norm1 > 0.25 {
        (norm1 / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let b = &a * Complex64::new(1.0 / 2f64.powi(scalings as i32), 0.0);

    const PADE6: [f64; 7] = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15840.0,
        1.0 / 665_280.0,
    ];
    let eye = DMatrix::<Complex64>::identity(dim, dim);
    let b2 = &b * &b;
    let b4 = &b2 * &b2;
    let b6 = &b4 * &b2;
    let odd = &b * (&eye * Complex64::new(PADE6[1], 0.0)
        + &b2 * Complex64::new(PADE6[3], 0.0)
        + &b4 * Complex64::new(PADE6[5], 0.0));
    let even = &eye * Complex64::new(PADE6[0], 0.0)
        + &b2 * Complex64::new(PADE6[2], 0.0)
        + &b4 * Complex64::new(PADE6[4], 0.0)
        + &b6 * Complex64::new(PADE6[6], 0.0);
    let p = &even + &odd;
    let q = &even - &odd;
    let mut u = match q.lu().solve(&p) {
        Some(solution) => solution,
        None => return expm_minus_i_eigh(h, theta),
    };
    for _ in 0..scalings {
        u = &u * &u;
    }
    Ok(u)
}

/// Eigendecomposition route: `V · exp(−i·theta·Λ) · V†`.
fn expm_minus_i_eigh(h: &DMatrix<Complex64>, theta: f64) -> Result<DMatrix<Complex64>> {
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure(h.nrows()))?;
    let phases = DVector::from_iterator(
        h.nrows(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::new(0.0, -theta * l).exp()),
    );
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * v.adjoint())
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{BoundaryCondition, FockSpace};
    use crate::hamiltonian::{build_h_initial, build_h_problem_diag, Alpha};

    fn smith() -> (HermitianOperator, HermitianOperator) {
        let s = FockSpace::new(1, &[5], BoundaryCondition::Rigid).unwrap();
        let hi = build_h_initial(&s, &Alpha::real(1.0), true).unwrap();
        let hp = build_h_problem_diag(&s, &[2.0, 4.0, 5.0, 3.0, 1.0]).unwrap();
        (hi, hp)
    }

    #[test]
    fn initial_state_of_diagonal() {
        let s = FockSpace::new(1, &[5], BoundaryCondition::Rigid).unwrap();
        let hi = build_h_initial(&s, &Alpha::real(0.0), true).unwrap(); // diag(1..5)
        let psi = initial_state(&hi).unwrap();
        assert!((psi.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn initial_state_matches_lowest_eigenvalue() {
        let (hi, _) = smith();
        let psi = initial_state(&hi).unwrap();
        let hv = hi.matrix() * psi.amplitudes();
        let rayleigh = psi.amplitudes().dotc(&hv).re;
        assert!((rayleigh - 0.0114457).abs() < 1e-4);
        // phase fixed: the largest amplitude is real positive
        let k = (0..5)
            .max_by(|&a, &b| {
                psi.amplitudes()[a]
                    .norm()
                    .total_cmp(&psi.amplitudes()[b].norm())
            })
            .unwrap();
        assert!(psi.amplitudes()[k].im.abs() < 1e-14);
        assert!(psi.amplitudes()[k].re > 0.0);
    }

    #[test]
    fn initial_state_rejects_degenerate_ground() {
        let s = FockSpace::new(1, &[4], BoundaryCondition::Rigid).unwrap();
        let hp = build_h_problem_diag(&s, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            initial_state(&hp),
            Err(Error::DegenerateStart(_))
        ));
    }

    #[test]
    fn coherent_ground_is_poisson_at_large_truncation() {
        let s = FockSpace::new(1, &[50], BoundaryCondition::Rigid).unwrap();
        let hi = build_h_initial(&s, &Alpha::real(1.0), false).unwrap();
        let psi = initial_state(&hi).unwrap();
        let probs = psi.fock_probs();
        // independent oracle: |⟨n|α⟩|² = e^{−|α|²} |α|^{2n} / n!
        let mut factorial = 1.0;
        for n in 0..=10usize {
            if n > 0 {
                factorial *= n as f64;
            }
            let expect = (-1.0f64).exp() / factorial;
            assert!(
                (probs[n] - expect).abs() < 1e-6,
                "n={n}: {} vs {expect}",
                probs[n]
            );
        }
    }

    #[test]
    fn expm_agrees_with_eigendecomposition_route() {
        let (hi, _) = smith();
        for theta in [1e-3, 0.1, 2.5] {
            let a = expm_minus_i(hi.matrix(), theta).unwrap();
            let b = expm_minus_i_eigh(hi.matrix(), theta).unwrap();
            assert!((a.clone() - b).norm() < 1e-12, "theta={theta}");
            // unitarity
            let eye = DMatrix::<Complex64>::identity(5, 5);
            assert!((a.adjoint() * &a - eye).norm() < 1e-13);
        }
    }

    #[test]
    fn smith_final_probability_reproduced() {
        let (hi, hp) = smith();
        let sched = Schedule::linear(13.3444, 201).unwrap();
        let cfg = PropagatorConfig::new(5000).unwrap();
        let psi0 = initial_state(&hi).unwrap();
        let traj = evolve(&hi, &hp, &sched, &cfg, &psi0).unwrap();
        let probs = final_fock_probs(&traj);
        assert!((probs[0] - 0.999323).abs() < 2e-3, "p0 = {}", probs[0]);
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-8);
        // every initial Fock probability is below one half
        assert!(traj.first().fock_probs.iter().all(|&p| p < 0.5));
    }

    #[test]
    fn ground_occupation_plummets_near_transfer() {
        let (hi, hp) = smith();
        let sched = Schedule::linear(13.3444, 401).unwrap();
        let cfg = PropagatorConfig::new(5000).unwrap();
        let psi0 = initial_state(&hi).unwrap();
        let traj = evolve(&hi, &hp, &sched, &cfg, &psi0).unwrap();
        for s in traj.samples().iter().filter(|s| s.t < 9.0) {
            assert!(s.p_ground > 0.9, "t={}: {}", s.t, s.p_ground);
        }
        assert!(traj.last().p_ground < 0.01);
        assert!(traj.last().p_excited > 0.99);
        // norm conserved at every sample
        for s in traj.samples() {
            assert!((s.state.norm() - 1.0).abs() < 1e-10);
            let total: f64 = s.fock_probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-8);
            assert!((0.0..=1.0).contains(&s.p_ground));
            assert!((0.0..=1.0).contains(&s.p_excited));
        }
    }

    #[test]
    fn stationary_state_is_constant() {
        let s = FockSpace::new(1, &[4], BoundaryCondition::Rigid).unwrap();
        let hi = build_h_initial(&s, &Alpha::real(0.4), false).unwrap();
        // schedule degenerates to a static Hamiltonian
        let sched = Schedule::linear(3.0, 31).unwrap();
        let cfg = PropagatorConfig::new(300).unwrap();
        let psi0 = initial_state(&hi).unwrap();
        let traj = evolve(&hi, &hi, &sched, &cfg, &psi0).unwrap();
        let p0 = traj.first().fock_probs.clone();
        for s in traj.samples() {
            for (a, b) in s.fock_probs.iter().zip(&p0) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn step_halving_is_second_order() {
        let (hi, hp) = smith();
        let sched = Schedule::linear(13.3444, 2).unwrap();
        let psi0 = initial_state(&hi).unwrap();
        let run = |substeps: usize| {
            let cfg = PropagatorConfig::new(substeps).unwrap();
            final_fock_probs(&evolve(&hi, &hp, &sched, &cfg, &psi0).unwrap())
        };
        let p1 = run(2500);
        let p2 = run(5000);
        let p3 = run(10000);
        let change12: f64 = p1
            .iter()
            .zip(&p2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let change23: f64 = p2
            .iter()
            .zip(&p3)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        // halving the step should shrink the change by about 4x
        assert!(change23 < change12, "{change23} !< {change12}");
        assert!(change12 < 4.0 * 4.0 * change23 + 1e-12);
    }

    #[test]
    fn brute_force_product_oracle_small_dims() {
        // oracle: time-ordered product of eigendecomposition exponentials
        // at 10x finer substeps, independent of the Padé path
        let s = FockSpace::new(1, &[3], BoundaryCondition::Rigid).unwrap();
        let hi = build_h_initial(&s, &Alpha::new(vec![Complex64::new(0.7, 0.0)]), false).unwrap();
        let hp = build_h_problem_diag(&s, &[1.0, 0.0, 2.0]).unwrap();
        let t_total = 2.0;
        let sched = Schedule::linear(t_total, 2).unwrap();
        let psi0 = initial_state(&hi).unwrap();

        let cfg = PropagatorConfig::new(3000).unwrap();
        let main = final_fock_probs(&evolve(&hi, &hp, &sched, &cfg, &psi0).unwrap());

        let oracle_steps = 30_000usize;
        let h = t_total / oracle_steps as f64;
        let mut psi = psi0.amplitudes().clone();
        for j in 0..oracle_steps {
            let t_mid = (j as f64 + 0.5) * h;
            let gen = interpolate(&hi, &hp, t_mid, &sched).unwrap();
            let u = expm_minus_i_eigh(gen.matrix(), h).unwrap();
            psi = u * psi;
        }
        for (i, want) in main.iter().enumerate() {
            let got = psi[i].norm_sqr();
            assert!((want - got).abs() <= 1e-6, "i={i}: {want} vs {got}");
        }
    }

    #[test]
    fn propagator_config_bounds() {
        assert!(PropagatorConfig::new(99).is_err());
        assert!(PropagatorConfig::new(100).is_ok());
        assert_eq!(PropagatorConfig::scaled_for(13.3444).substeps(), 20000);
        assert!(PropagatorConfig::scaled_for(0.01).substeps() >= 100);
    }
}
