//! Scenario execution: every subcommand maps onto the corresponding library
//! calls and yields one table.

use crate::config::*;
use crate::output::{Cell, Table};
use squill_core::{
    bell_fidelity_trace, bell_state, basis_state, collective_bath_populations, flip_flop_operator,
    monte_carlo_observables, propagate_fixed, two_qubit_gate, BellIndex, CMat,
    CorrelationTensor, CouplingSweepBase, DensityMatrix, EprBath, EprModel, FieldStrengths,
    Gamma2Model, GateNoiseSpec, Hamiltonian, NoiseAxis, NoiseCombo, Observable, QubitRegister,
    Superoperator, TrajectoryConfig,
};

type CoreResult<T> = squill_core::Result<T>;

fn linear_grid(max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| max * i as f64 / (steps - 1) as f64)
        .collect()
}

fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    let (lo, hi) = (min.ln(), max.ln());
    (0..points)
        .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

fn bell_trace_table(model: &EprModel, t_max: f64, steps: usize) -> CoreResult<Table> {
    let grid = linear_grid(t_max, steps);
    let traces: Vec<Vec<(f64, f64)>> = [BellIndex::B1, BellIndex::B2, BellIndex::B3, BellIndex::B4]
        .iter()
        .map(|&idx| bell_fidelity_trace(model, idx, &grid))
        .collect::<CoreResult<_>>()?;
    let rows = (0..grid.len())
        .map(|k| {
            vec![
                Cell::Num(grid[k]),
                Cell::Num(traces[0][k].1),
                Cell::Num(traces[1][k].1),
                Cell::Num(traces[2][k].1),
                Cell::Num(traces[3][k].1),
            ]
        })
        .collect();
    Ok(Table {
        header: vec!["t", "f_b1", "f_b2", "f_b3", "f_b4"],
        rows,
    })
}

fn teleport_fidelity(p: &TeleportFidelityParams) -> CoreResult<Table> {
    // total rates split evenly over the two channel qubits
    let model = EprModel::degenerate_independent(
        p.gamma0 / 2.0,
        p.gamma0 / 2.0,
        p.gamma1 / 2.0,
        p.gamma1 / 2.0,
    );
    bell_trace_table(&model, p.t_max, p.steps)
}

fn bell_trace(p: &BellTraceParams) -> CoreResult<Table> {
    let bath = if p.bath == "collective" {
        EprBath::Collective {
            g0: p.gamma0,
            g1: p.gamma1,
        }
    } else {
        EprBath::Independent {
            g0a: p.gamma0a,
            g0b: p.gamma0b,
            g1a: p.gamma1a,
            g1b: p.gamma1b,
        }
    };
    let model = EprModel {
        eps_a: p.eps_a,
        eps_b: p.eps_b,
        j_a: p.j_a,
        j_b: p.j_b,
        bath,
    };
    bell_trace_table(&model, p.t_max, p.steps)
}

fn collective_bath(p: &CollectiveBathParams) -> CoreResult<Table> {
    let initial = BellIndex::from_label(p.bell_state)?;
    let rows = linear_grid(p.t_max, p.steps)
        .into_iter()
        .map(|t| {
            let w = collective_bath_populations(p.gamma0, p.gamma1, t, initial)?;
            let [p1, p2, p3, p4] = w.as_array();
            Ok(vec![
                Cell::Num(t),
                Cell::Num(p1),
                Cell::Num(p2),
                Cell::Num(p3),
                Cell::Num(p4),
            ])
        })
        .collect::<CoreResult<_>>()?;
    Ok(Table {
        header: vec!["t", "p1", "p2", "p3", "p4"],
        rows,
    })
}

fn cnot_time_resolved(p: &CnotTimeResolvedParams, input_index: usize) -> CoreResult<Table> {
    let noise = GateNoiseSpec::new(p.gamma0, p.gamma1, p.gamma2)?;
    let strengths = FieldStrengths::new(p.eps0, p.j0, p.g0)?;
    let trace =
        squill_core::time_resolved_run(input_index, &noise, &strengths, p.samples_per_segment)?;
    let rows = trace
        .into_iter()
        .map(|(t, pops)| {
            vec![
                Cell::Num(t),
                Cell::Num(pops[0]),
                Cell::Num(pops[1]),
                Cell::Num(pops[2]),
                Cell::Num(pops[3]),
            ]
        })
        .collect();
    Ok(Table {
        header: vec!["t", "p00", "p01", "p10", "p11"],
        rows,
    })
}

fn cnot_noise_sweep(p: &CnotNoiseSweepParams) -> CoreResult<Table> {
    let axis = match p.axis.as_str() {
        "gamma0" => NoiseAxis::Gamma0,
        "gamma1" => NoiseAxis::Gamma1,
        "gamma2" => NoiseAxis::Gamma2,
        _ => NoiseAxis::All,
    };
    let strengths = FieldStrengths::new(p.eps0, p.j0, p.g0)?;
    let grid = log_grid(p.gamma_min, p.gamma_max, p.points);
    let rows = squill_core::noise_sweep(axis, &grid, &strengths)?
        .into_iter()
        .map(|pt| {
            vec![
                Cell::Num(pt.gamma),
                Cell::Num(pt.metrics.fidelity),
                Cell::Num(pt.metrics.purity),
                Cell::Num(pt.metrics.error),
            ]
        })
        .collect();
    Ok(Table {
        header: vec!["gamma", "fidelity", "purity", "error"],
        rows,
    })
}

fn cnot_additivity(p: &CnotAdditivityParams) -> CoreResult<Table> {
    let combo = match p.combo.as_str() {
        "g0g1" => NoiseCombo::G0G1,
        "g1g2" => NoiseCombo::G1G2,
        "g0g2" => NoiseCombo::G0G2,
        _ => NoiseCombo::All,
    };
    let strengths = FieldStrengths::new(p.eps0, p.j0, p.g0)?;
    let grid = log_grid(p.gamma_min, p.gamma_max, p.points);
    let rows = squill_core::additivity_sweep(combo, &grid, &strengths)?
        .into_iter()
        .map(|pt| {
            vec![
                Cell::Num(pt.gamma),
                Cell::Num(pt.joint_error),
                Cell::Num(pt.sum_individual),
            ]
        })
        .collect();
    Ok(Table {
        header: vec!["gamma", "error_joint", "error_sum"],
        rows,
    })
}

fn cnot_g0_sweep(p: &CnotG0SweepParams) -> CoreResult<Table> {
    let model = match p.g0_model.as_str() {
        "linear" => Gamma2Model::Linear,
        "quadratic" => Gamma2Model::Quadratic,
        _ => Gamma2Model::Constant,
    };
    let base = CouplingSweepBase {
        gamma0: p.gamma0,
        gamma1: p.gamma1,
        gamma2_coeff: p.gamma2_coeff,
        eps0: p.eps0,
        j0: p.j0,
    };
    let grid = log_grid(p.g0_min, p.g0_max, p.points);
    let rows = squill_core::coupling_sweep(&grid, model, &base)?
        .into_iter()
        .map(|pt| {
            vec![
                Cell::Num(pt.g0),
                Cell::Num(pt.gamma2),
                Cell::Num(pt.error),
            ]
        })
        .collect();
    Ok(Table {
        header: vec!["g0", "gamma2", "error"],
        rows,
    })
}

fn mc_validate(p: &McValidateParams, seed: u64) -> CoreResult<Table> {
    let (h0, channels, rho0, observables) = match p.benchmark.as_str() {
        "flipflop" => {
            let h0 = two_qubit_gate(0.0, 0.0, 0.0, 0.0, -1.0)?;
            let channels = GateNoiseSpec::new(0.0, 0.0, p.gamma2)?.channels()?;
            let reg = QubitRegister::new(2)?;
            let rho0 = DensityMatrix::pure(&basis_state(reg, 1)?)?;
            let mut observables: Vec<Observable> = (0..4)
                .map(|i| Observable::projector(format!("pop{i:02b}"), &basis_state(reg, i)?))
                .collect::<CoreResult<_>>()?;
            observables.push(Observable::new("flip_x", flip_flop_operator())?);
            let mut y = CMat::zeros(4, 4);
            y[(1, 2)] = squill_core::linalg::cx(0.0, 1.0);
            y[(2, 1)] = squill_core::linalg::cx(0.0, -1.0);
            observables.push(Observable::new("flip_y", y)?);
            (h0, channels, rho0, observables)
        }
        _ => {
            let model = EprModel::degenerate_independent(
                p.gamma0 / 2.0,
                p.gamma0 / 2.0,
                p.gamma1 / 2.0,
                p.gamma1 / 2.0,
            );
            let channels = model.channels()?;
            let rho0 = DensityMatrix::pure(&bell_state(1)?)?;
            let observables: Vec<Observable> = (1..=4)
                .map(|i| Observable::projector(format!("p{i}"), &bell_state(i)?))
                .collect::<CoreResult<_>>()?;
            (Hamiltonian::zero(4), channels, rho0, observables)
        }
    };

    let cfg = TrajectoryConfig {
        dt: p.dt,
        t_final: p.t_max,
        n_trajectories: p.trajectories,
        master_seed: seed,
    };
    let run = monte_carlo_observables(&h0, &channels, &rho0, &cfg, &observables)?;
    let r = if channels.is_empty() {
        CorrelationTensor::zero(4)
    } else {
        CorrelationTensor::from_channels(&channels)?
    };
    let l = Superoperator::build(&h0, &r)?;

    let mut rows = Vec::new();
    for (k, &t) in run.times.iter().enumerate().step_by(p.stride) {
        let reference = propagate_fixed(&l, &rho0, t)?;
        for (obs_idx, obs) in observables.iter().enumerate() {
            let master = obs.evaluate(reference.matrix());
            let mc = run.mean[k][obs_idx];
            let se = run.stderr[k][obs_idx];
            let z = (mc - master).abs() / se.max(1e-13);
            rows.push(vec![
                Cell::Num(t),
                Cell::Text(obs.name.clone()),
                Cell::Num(master),
                Cell::Num(mc),
                Cell::Num(se),
                Cell::Num(z),
            ]);
        }
    }
    Ok(Table {
        header: vec!["t", "observable", "master_eq", "mc_mean", "mc_stderr", "z_score"],
        rows,
    })
}

/// Execute a validated configuration.
pub fn run(config: &RunConfig) -> CoreResult<Table> {
    match &config.params {
        ScenarioParams::TeleportFidelity(p) => teleport_fidelity(p),
        ScenarioParams::BellTrace(p) => bell_trace(p),
        ScenarioParams::CollectiveBath(p) => collective_bath(p),
        ScenarioParams::CnotTimeResolved(p) => {
            let idx = p
                .input_index()
                .expect("validated before execution");
            cnot_time_resolved(p, idx)
        }
        ScenarioParams::CnotNoiseSweep(p) => cnot_noise_sweep(p),
        ScenarioParams::CnotAdditivity(p) => cnot_additivity(p),
        ScenarioParams::CnotG0Sweep(p) => cnot_g0_sweep(p),
        ScenarioParams::McValidate(p) => mc_validate(p, config.seed),
    }
}
