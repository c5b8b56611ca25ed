//! Brute-force Monte Carlo integration of the raw fluctuating Hamiltonian.
//!
//! Each trajectory draws an independent white-noise realization: per step of
//! length dt the Hamiltonian is H₀ + Σ_m √(γ_m/dt)·z_m·A_m with standard
//! normals z_m, and the state advances by the exact unitary of that frozen
//! Hamiltonian. The per-step variance γ/dt makes the time integral of the
//! noise a Wiener increment, and the symmetric (exponential-midpoint)
//! construction converges to the same averaged dynamics as the
//! master-equation path in [`crate::liouville`] — which is exactly what the
//! cross-validation suite checks.
//!
//! Trajectory RNG streams are counter-based (ChaCha streams keyed by the
//! trajectory index), so results do not depend on scheduling, and the
//! mean/stderr reduction runs over fixed-order chunks to stay bit-identical
//! under any thread count.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::hamiltonian::Hamiltonian;
use crate::linalg::CMat;
use crate::noise::FluctuationChannel;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Hard ceiling on dt·max(‖H₀‖_F, Σγ) so per-step rotations stay small.
const STEP_BUDGET: f64 = 0.05;

const REDUCTION_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub dt: f64,
    pub t_final: f64,
    pub n_trajectories: usize,
    pub master_seed: u64,
}

impl TrajectoryConfig {
    /// Check the step-size constraint against a concrete model.
    pub fn validate(&self, h0: &Hamiltonian, channels: &[FluctuationChannel]) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dt = {} must be positive",
                self.dt
            )));
        }
        if !self.t_final.is_finite() || self.t_final <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "t_final = {} must be positive",
                self.t_final
            )));
        }
        if self.n_trajectories == 0 {
            return Err(Error::InvalidParameter(
                "n_trajectories must be at least 1".into(),
            ));
        }
        let h_norm = h0.matrix().norm();
        if self.dt * h_norm > STEP_BUDGET + 1e-12 {
            return Err(Error::TimeStepTooCoarse(format!(
                "dt·‖H₀‖ = {:.3e} exceeds {STEP_BUDGET}",
                self.dt * h_norm
            )));
        }
        let gamma_total: f64 = channels.iter().map(|c| c.strength()).sum();
        if self.dt * gamma_total > STEP_BUDGET + 1e-12 {
            return Err(Error::TimeStepTooCoarse(format!(
                "dt·Σγ = {:.3e} exceeds {STEP_BUDGET}",
                self.dt * gamma_total
            )));
        }
        Ok(())
    }

    /// Number of steps; the last step is shortened to land on t_final.
    pub fn n_steps(&self) -> usize {
        ((self.t_final / self.dt) - 1e-9).ceil().max(1.0) as usize
    }

    /// Sample times 0, dt, 2dt, …, t_final.
    pub fn sample_times(&self) -> Vec<f64> {
        let n = self.n_steps();
        (0..=n)
            .map(|k| ((k as f64) * self.dt).min(self.t_final))
            .collect()
    }
}

fn trajectory_rng(master_seed: u64, trajectory_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trajectory_index as u64);
    rng
}

/// Run one noise realization, handing every post-step state (and the initial
/// one) to `sink`.
fn run_trajectory(
    h0: &CMat,
    channels: &[FluctuationChannel],
    rho0: &CMat,
    cfg: &TrajectoryConfig,
    trajectory_index: usize,
    sink: &mut dyn FnMut(usize, &CMat),
) -> Result<()> {
    let mut rng = trajectory_rng(cfg.master_seed, trajectory_index);
    let n_steps = cfg.n_steps();
    let mut rho = rho0.clone();
    sink(0, &rho);
    let mut t = 0.0;
    for step in 1..=n_steps {
        let t_next = ((step as f64) * cfg.dt).min(cfg.t_final);
        let dt = t_next - t;
        let mut h = h0.clone();
        for c in channels {
            let z: f64 = StandardNormal.sample(&mut rng);
            let amp = (c.strength() / dt).sqrt() * z;
            h += c.operator().scale(amp);
        }
        let u = expm(&h.map(|v| -Complex64::i() * dt * v))?;
        rho = &u * rho * u.adjoint();
        // the step is exactly unitary; rescaling the trace only removes
        // accumulated roundoff
        let trace = rho.trace().re;
        rho.apply(|v| *v /= Complex64::new(trace, 0.0));
        sink(step, &rho);
        t = t_next;
    }
    Ok(())
}

/// One full trajectory with validated states at every step.
pub fn sample_trajectory(
    h0: &Hamiltonian,
    channels: &[FluctuationChannel],
    rho0: &DensityMatrix,
    cfg: &TrajectoryConfig,
    trajectory_index: usize,
) -> Result<Vec<(f64, DensityMatrix)>> {
    cfg.validate(h0, channels)?;
    let times = cfg.sample_times();
    let mut states = Vec::with_capacity(times.len());
    run_trajectory(
        h0.matrix(),
        channels,
        rho0.matrix(),
        cfg,
        trajectory_index,
        &mut |_, rho| states.push(rho.clone()),
    )?;
    times
        .into_iter()
        .zip(states)
        .map(|(t, m)| Ok((t, DensityMatrix::with_tol(m, rho0.tol())?)))
        .collect()
}

/// Element-wise mean and standard error over trajectories at each sample
/// time.
#[derive(Debug, Clone)]
pub struct MonteCarloRun {
    pub times: Vec<f64>,
    pub mean: Vec<DensityMatrix>,
    /// Per-entry standard error of the mean (complex deviations folded into
    /// one non-negative number per entry).
    pub stderr: Vec<DMatrix<f64>>,
    pub n_trajectories: usize,
}

struct Accumulator {
    sum: Vec<CMat>,
    sumsq: Vec<DMatrix<f64>>,
}

impl Accumulator {
    fn zeros(n_samples: usize, dim: usize) -> Self {
        Self {
            sum: vec![CMat::zeros(dim, dim); n_samples],
            sumsq: vec![DMatrix::zeros(dim, dim); n_samples],
        }
    }

    fn absorb_state(&mut self, sample: usize, rho: &CMat) {
        self.sum[sample] += rho;
        let sq = &mut self.sumsq[sample];
        for (dst, z) in sq.iter_mut().zip(rho.iter()) {
            *dst += z.norm_sqr();
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        for (a, b) in self.sum.iter_mut().zip(other.sum.iter()) {
            *a += b;
        }
        for (a, b) in self.sumsq.iter_mut().zip(other.sumsq.iter()) {
            *a += b;
        }
    }
}

/// Average `cfg.n_trajectories` independent realizations (at least 100).
pub fn monte_carlo_average(
    h0: &Hamiltonian,
    channels: &[FluctuationChannel],
    rho0: &DensityMatrix,
    cfg: &TrajectoryConfig,
) -> Result<MonteCarloRun> {
    cfg.validate(h0, channels)?;
    if cfg.n_trajectories < 100 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo averaging needs ≥ 100 trajectories, got {}",
            cfg.n_trajectories
        )));
    }
    let dim = rho0.dim();
    let times = cfg.sample_times();
    let n_samples = times.len();
    let n = cfg.n_trajectories;

    let n_chunks = n.div_ceil(REDUCTION_CHUNK);
    let chunk_results: Vec<Result<Accumulator>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * REDUCTION_CHUNK;
            let hi = ((chunk + 1) * REDUCTION_CHUNK).min(n);
            let mut acc = Accumulator::zeros(n_samples, dim);
            for idx in lo..hi {
                run_trajectory(
                    h0.matrix(),
                    channels,
                    rho0.matrix(),
                    cfg,
                    idx,
                    &mut |sample, rho| acc.absorb_state(sample, rho),
                )?;
            }
            Ok(acc)
        })
        .collect();

    let mut total = Accumulator::zeros(n_samples, dim);
    for res in chunk_results {
        total.merge(&res?);
    }

    let deterministic = channels.iter().all(|c| c.strength() == 0.0);
    let nf = n as f64;
    let mut mean = Vec::with_capacity(n_samples);
    let mut stderr = Vec::with_capacity(n_samples);
    for (sum, sumsq) in total.sum.iter().zip(total.sumsq.iter()) {
        let m = sum.map(|z| z / Complex64::new(nf, 0.0));
        let se = if deterministic || n == 1 {
            DMatrix::zeros(dim, dim)
        } else {
            DMatrix::from_fn(dim, dim, |i, j| {
                let var = (sumsq[(i, j)] - nf * m[(i, j)].norm_sqr()) / (nf - 1.0);
                (var.max(0.0) / nf).sqrt()
            })
        };
        mean.push(DensityMatrix::with_tol(m, rho0.tol())?);
        stderr.push(se);
    }
    Ok(MonteCarloRun {
        times,
        mean,
        stderr,
        n_trajectories: n,
    })
}

/// A named Hermitian observable Tr(Oρ).
#[derive(Debug, Clone)]
pub struct Observable {
    pub name: String,
    pub operator: CMat,
}

impl Observable {
    pub fn new(name: impl Into<String>, operator: CMat) -> Result<Self> {
        if crate::linalg::hermiticity_defect(&operator) > 1e-12 {
            return Err(Error::InvalidParameter(
                "observables must be Hermitian".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            operator,
        })
    }

    /// Projector |v⟩⟨v| onto a (normalized) state.
    pub fn projector(name: impl Into<String>, v: &crate::linalg::CVec) -> Result<Self> {
        Self::new(name, v * v.adjoint())
    }

    pub fn evaluate(&self, rho: &CMat) -> f64 {
        (&self.operator * rho).trace().re
    }
}

/// Scalar mean/stderr statistics per sample time and observable.
#[derive(Debug, Clone)]
pub struct ObservableRun {
    pub times: Vec<f64>,
    /// mean[sample][observable]
    pub mean: Vec<Vec<f64>>,
    /// stderr[sample][observable]
    pub stderr: Vec<Vec<f64>>,
    pub n_trajectories: usize,
}

/// Monte Carlo mean and standard error of scalar observables, accumulated
/// per trajectory (which makes the stderr statistically meaningful for each
/// observable, unlike recombined per-entry errors).
pub fn monte_carlo_observables(
    h0: &Hamiltonian,
    channels: &[FluctuationChannel],
    rho0: &DensityMatrix,
    cfg: &TrajectoryConfig,
    observables: &[Observable],
) -> Result<ObservableRun> {
    cfg.validate(h0, channels)?;
    if cfg.n_trajectories < 100 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo averaging needs ≥ 100 trajectories, got {}",
            cfg.n_trajectories
        )));
    }
    if observables.is_empty() {
        return Err(Error::InvalidParameter("no observables given".into()));
    }
    let times = cfg.sample_times();
    let n_samples = times.len();
    let n_obs = observables.len();
    let n = cfg.n_trajectories;

    let n_chunks = n.div_ceil(REDUCTION_CHUNK);
    let chunk_results: Vec<Result<(Vec<f64>, Vec<f64>)>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * REDUCTION_CHUNK;
            let hi = ((chunk + 1) * REDUCTION_CHUNK).min(n);
            let mut sum = vec![0.0f64; n_samples * n_obs];
            let mut sumsq = vec![0.0f64; n_samples * n_obs];
            for idx in lo..hi {
                run_trajectory(
                    h0.matrix(),
                    channels,
                    rho0.matrix(),
                    cfg,
                    idx,
                    &mut |sample, rho| {
                        for (k, obs) in observables.iter().enumerate() {
                            let v = obs.evaluate(rho);
                            sum[sample * n_obs + k] += v;
                            sumsq[sample * n_obs + k] += v * v;
                        }
                    },
                )?;
            }
            Ok((sum, sumsq))
        })
        .collect();

    let mut sum = vec![0.0f64; n_samples * n_obs];
    let mut sumsq = vec![0.0f64; n_samples * n_obs];
    for res in chunk_results {
        let (s, sq) = res?;
        for (a, b) in sum.iter_mut().zip(s.iter()) {
            *a += b;
        }
        for (a, b) in sumsq.iter_mut().zip(sq.iter()) {
            *a += b;
        }
    }

    let deterministic = channels.iter().all(|c| c.strength() == 0.0);
    let nf = n as f64;
    let mut mean = Vec::with_capacity(n_samples);
    let mut stderr = Vec::with_capacity(n_samples);
    for sample in 0..n_samples {
        let mut m_row = Vec::with_capacity(n_obs);
        let mut s_row = Vec::with_capacity(n_obs);
        for k in 0..n_obs {
            let m = sum[sample * n_obs + k] / nf;
            m_row.push(m);
            if deterministic {
                s_row.push(0.0);
            } else {
                let var = (sumsq[sample * n_obs + k] - nf * m * m) / (nf - 1.0);
                s_row.push((var.max(0.0) / nf).sqrt());
            }
        }
        mean.push(m_row);
        stderr.push(s_row);
    }
    Ok(ObservableRun {
        times,
        mean,
        stderr,
        n_trajectories: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cx, max_abs, CVec};
    use crate::qubits::{pauli, Pauli};

    fn qubit_h(eps: f64) -> Hamiltonian {
        Hamiltonian::new(pauli(Pauli::Z).scale(eps)).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&CVec::from_vec(vec![cx(s, 0.0), cx(s, 0.0)])).unwrap()
    }

    #[test]
    fn zero_channels_reduce_to_deterministic_unitary_evolution() {
        let h = qubit_h(0.4);
        let cfg = TrajectoryConfig {
            dt: 0.05,
            t_final: 1.0,
            n_trajectories: 1,
            master_seed: 11,
        };
        let traj = sample_trajectory(&h, &[], &plus_state(), &cfg, 0).unwrap();
        let (t_end, ref last) = traj[traj.len() - 1];
        assert!((t_end - 1.0).abs() < 1e-12);
        // analytic: ρ₀₁(t) = ½ e^{−2iεt}
        let want = 0.5 * cx(0.0, -2.0 * 0.4 * t_end).exp();
        assert!((last.matrix()[(0, 1)] - want).norm() < 1e-10);
    }

    #[test]
    fn dephasing_channel_keeps_populations_constant_per_trajectory() {
        let h = Hamiltonian::zero(2);
        let c = FluctuationChannel::new(pauli(Pauli::Z), 0.2, "z").unwrap();
        let cfg = TrajectoryConfig {
            dt: 0.1,
            t_final: 2.0,
            n_trajectories: 1,
            master_seed: 5,
        };
        let traj = sample_trajectory(&h, &[c], &plus_state(), &cfg, 3).unwrap();
        for (t, rho) in &traj {
            assert!((rho.population(0) - 0.5).abs() < 1e-12, "t = {t}");
            assert!((rho.purity() - 1.0).abs() < 1e-12, "purity drifted at {t}");
        }
    }

    #[test]
    fn identical_seed_and_index_reproduce_the_trajectory_exactly() {
        let h = qubit_h(0.3);
        let c = FluctuationChannel::new(pauli(Pauli::X), 0.1, "x").unwrap();
        let cfg = TrajectoryConfig {
            dt: 0.05,
            t_final: 0.5,
            n_trajectories: 1,
            master_seed: 42,
        };
        let a = sample_trajectory(&h, std::slice::from_ref(&c), &plus_state(), &cfg, 7).unwrap();
        let b = sample_trajectory(&h, std::slice::from_ref(&c), &plus_state(), &cfg, 7).unwrap();
        for ((_, x), (_, y)) in a.iter().zip(b.iter()) {
            assert_eq!(x.matrix(), y.matrix());
        }
        // a different trajectory index gives a different realization
        let other =
            sample_trajectory(&h, std::slice::from_ref(&c), &plus_state(), &cfg, 8).unwrap();
        let diff = max_abs(&(a[10].1.matrix() - other[10].1.matrix()));
        assert!(diff > 1e-6);
    }

    #[test]
    fn coarse_steps_are_rejected() {
        let h = qubit_h(10.0);
        let cfg = TrajectoryConfig {
            dt: 0.1,
            t_final: 1.0,
            n_trajectories: 1,
            master_seed: 0,
        };
        assert!(matches!(
            cfg.validate(&h, &[]),
            Err(Error::TimeStepTooCoarse(_))
        ));
    }

    #[test]
    fn single_qubit_dephasing_mean_decays_at_the_predicted_rate() {
        // ⟨ρ₀₁(t)⟩ = ρ₀₁(0)·e^{−2γt}
        let gamma = 0.2;
        let h = Hamiltonian::zero(2);
        let c = FluctuationChannel::new(pauli(Pauli::Z), gamma, "z").unwrap();
        let cfg = TrajectoryConfig {
            dt: 0.02,
            t_final: 2.0,
            n_trajectories: 2000,
            master_seed: 314,
        };
        let run = monte_carlo_average(&h, std::slice::from_ref(&c), &plus_state(), &cfg).unwrap();
        for (k, &t) in run.times.iter().enumerate() {
            let want = 0.5 * (-2.0 * gamma * t).exp();
            let got = run.mean[k].matrix()[(0, 1)];
            let se = run.stderr[k][(0, 1)].max(1e-12);
            let z = (got - cx(want, 0.0)).norm() / se;
            assert!(z < 4.5, "t = {t}: mean {got}, want {want}, z = {z:.2}");
        }
    }

    #[test]
    fn zero_noise_average_has_exactly_zero_stderr() {
        let h = qubit_h(0.5);
        let cfg = TrajectoryConfig {
            dt: 0.05,
            t_final: 0.5,
            n_trajectories: 128,
            master_seed: 1,
        };
        let run = monte_carlo_average(&h, &[], &plus_state(), &cfg).unwrap();
        for se in &run.stderr {
            assert!(se.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn averaging_requires_at_least_one_hundred_trajectories() {
        let h = qubit_h(0.1);
        let cfg = TrajectoryConfig {
            dt: 0.05,
            t_final: 0.5,
            n_trajectories: 99,
            master_seed: 1,
        };
        assert!(monte_carlo_average(&h, &[], &plus_state(), &cfg).is_err());
    }

    #[test]
    fn reduction_is_independent_of_chunk_scheduling() {
        // same seed on the default pool and on a single-thread pool must be
        // bit-identical
        let h = qubit_h(0.2);
        let c = FluctuationChannel::new(pauli(Pauli::X), 0.15, "x").unwrap();
        let cfg = TrajectoryConfig {
            dt: 0.05,
            t_final: 0.5,
            n_trajectories: 300,
            master_seed: 99,
        };
        let a = monte_carlo_average(&h, std::slice::from_ref(&c), &plus_state(), &cfg).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = single
            .install(|| monte_carlo_average(&h, std::slice::from_ref(&c), &plus_state(), &cfg))
            .unwrap();
        for (x, y) in a.mean.iter().zip(b.mean.iter()) {
            assert_eq!(x.matrix(), y.matrix());
        }
        for (x, y) in a.stderr.iter().zip(b.stderr.iter()) {
            assert_eq!(x, y);
        }
    }
}
