//! Hopfield–Tank analog network: explicit Euler integration of
//! `dx_i/dt = -alpha x_i + beta sum_j J_ij tanh(x_j)`.
//!
//! Neurons are real-valued (nominally in `[-1, 1]`; no clamping is
//! applied — divergence is an error, not a clip). Reported energies use
//! the sign-rounded state so the trace is comparable with the binary
//! solvers.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::RngCore;

use crate::bits::BitVec64;
use crate::energy::{Energy, energy_of_bits};
use crate::instance::IsingInstance;
use crate::spin::SpinState;
use crate::trace::Tracer;
use crate::weight::Weight;

use super::{CouplingOp, SolveError, TrialOutcome};

/// Real-valued neuron activations plus accumulated model time.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalogState {
    pub x: Vec<f64>,
    pub t: f64,
    pub steps: u64,
}

impl AnalogState {
    pub fn new(x: Vec<f64>) -> Self {
        Self { x, t: 0.0, steps: 0 }
    }

    /// Small symmetric perturbation around the unstable origin: each
    /// activation uniform in `[-0.1, 0.1]`, drawn in index order.
    pub fn random(n: usize, rng: &mut (impl RngCore + Rng)) -> Self {
        Self::new((0..n).map(|_| rng.random::<f64>() * 0.2 - 0.1).collect())
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct HtnnConfig {
    /// Neuron decay rate.
    pub alpha: f64,
    /// Synaptic connection strength.
    pub beta: f64,
    /// Euler step size.
    pub dt: f64,
    pub max_steps: u64,
    // The activation is tanh; the model is defined with it.
}

impl Default for HtnnConfig {
    fn default() -> Self {
        Self {
            alpha: 6.0,
            beta: 0.1,
            dt: 0.01,
            max_steps: 2000,
        }
    }
}

impl HtnnConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(SolveError::InvalidConfig("alpha must be positive"));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(SolveError::InvalidConfig("beta must be non-negative"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SolveError::InvalidConfig("dt must be positive"));
        }
        Ok(())
    }
}

fn step_with<W: Weight>(
    op: &CouplingOp<'_, W>,
    s: &mut AnalogState,
    cfg: &HtnnConfig,
    activated: &mut Vec<f64>,
    field: &mut Vec<f64>,
) -> Result<(), SolveError> {
    activated.clear();
    activated.extend(s.x.iter().map(|&v| libm::tanh(v)));
    field.resize(s.x.len(), 0.0);
    op.apply(activated, field);
    let mut finite = true;
    for (xi, fi) in s.x.iter_mut().zip(field.iter()) {
        *xi += cfg.dt * (-cfg.alpha * *xi + cfg.beta * *fi);
        finite &= xi.is_finite();
    }
    s.t += cfg.dt;
    s.steps += 1;
    if !finite {
        return Err(SolveError::Diverged { iteration: s.steps });
    }
    Ok(())
}

/// One Euler step of the network dynamics.
pub fn htnn_step<W: Weight>(
    inst: &IsingInstance<W>,
    s: &mut AnalogState,
    cfg: &HtnnConfig,
) -> Result<(), SolveError> {
    cfg.validate()?;
    check_dims(inst, s)?;
    let op = CouplingOp::sparse(inst);
    let mut activated = Vec::with_capacity(s.len());
    let mut field = vec![0.0; s.len()];
    step_with(&op, s, cfg, &mut activated, &mut field)
}

fn check_dims<W: Weight>(inst: &IsingInstance<W>, s: &AnalogState) -> Result<(), SolveError> {
    if s.len() != inst.n() {
        return Err(SolveError::Kernel(
            crate::energy::KernelError::DimensionMismatch {
                expected: inst.n(),
                found: s.len(),
            },
        ));
    }
    Ok(())
}

fn round_bits(s: &AnalogState) -> BitVec64 {
    // x > 0 -> +1, x < 0 -> -1, x == 0 -> +1 (deterministic tie rule).
    BitVec64::from_fn(s.len(), |i| s.x[i] >= 0.0)
}

/// Sign-round an analog state to spins.
pub fn round_state<W: Weight>(
    inst: &IsingInstance<W>,
    s: &AnalogState,
) -> Result<SpinState<W::Acc>, SolveError> {
    check_dims(inst, s)?;
    Ok(SpinState::from_bits(inst, round_bits(s)))
}

/// Integrate for `max_steps` steps. Trace samples report the Ising energy
/// of the sign-rounded state; the outcome carries the rounded final state.
pub fn htnn_solve<W: Weight>(
    inst: &IsingInstance<W>,
    x0: AnalogState,
    cfg: &HtnnConfig,
    mut tracer: Tracer<'_, W::Acc>,
) -> Result<TrialOutcome<W::Acc>, SolveError> {
    cfg.validate()?;
    check_dims(inst, &x0)?;
    for (i, v) in x0.x.iter().enumerate() {
        if !v.is_finite() {
            return Err(SolveError::Diverged { iteration: i as u64 });
        }
    }

    let op = CouplingOp::new(inst);
    let mut s = x0;
    let mut activated = Vec::with_capacity(s.len());
    let mut field = vec![0.0; s.len()];

    tracer.sample(0, energy_of_bits(inst, &round_bits(&s)));
    let start = s.steps;
    for k in 0..cfg.max_steps {
        step_with(&op, &mut s, cfg, &mut activated, &mut field)?;
        if tracer.due(k + 1) {
            tracer.sample(k + 1, energy_of_bits(inst, &round_bits(&s)));
        }
    }
    let steps_run = s.steps - start;
    let final_value = energy_of_bits(inst, &round_bits(&s));
    tracer.sample(steps_run, final_value);

    let final_state = SpinState::from_bits(inst, round_bits(&s));
    Ok(TrialOutcome {
        final_state,
        final_energy: Energy::new(final_value, inst.n()),
        trace: tracer.finish(),
        sweeps: steps_run,
        reached_target: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{AnyInstance, IsingInstance, parse_edge_list};
    use crate::rng::rng_from_seed;
    use crate::solvers::SolverId;
    use crate::trace::{LogicalClock, TraceOptions};

    fn no_coupling(n: usize) -> IsingInstance<i32> {
        IsingInstance::from_edges(n, []).unwrap()
    }

    fn tracer_for<'c>(
        inst: &IsingInstance<i32>,
        clock: &'c mut LogicalClock,
    ) -> Tracer<'c, i64> {
        Tracer::new(
            SolverId::Htnn,
            0,
            0,
            TraceOptions::default(),
            inst.total_weight(),
            clock,
        )
    }

    #[test]
    fn single_decay_step_value() {
        let inst = no_coupling(1);
        let mut s = AnalogState::new(vec![1.0]);
        let cfg = HtnnConfig::default();
        htnn_step(&inst, &mut s, &cfg).unwrap();
        // 1 - 6 * 0.01 * 1 = 0.94
        assert!((s.x[0] - 0.94).abs() < 1e-15);
        assert_eq!(s.steps, 1);
    }

    #[test]
    fn origin_is_a_fixed_point() {
        let AnyInstance::Int(inst) = parse_edge_list("3 3\n1 2 1\n1 3 -1\n2 3 1").unwrap() else {
            panic!()
        };
        let mut s = AnalogState::new(vec![0.0; 3]);
        let cfg = HtnnConfig::default();
        for _ in 0..50 {
            htnn_step(&inst, &mut s, &cfg).unwrap();
        }
        assert_eq!(s.x, vec![0.0; 3]);
    }

    #[test]
    fn zero_coupling_decay_tracks_exponential() {
        // Euler with alpha*dt = 0.06 tracks e^(-alpha t) to first order;
        // at t = 1 the absolute gap must be below 1e-3 and the trajectory
        // must match the exact Euler closed form (1 - alpha dt)^k.
        let inst = no_coupling(1);
        let cfg = HtnnConfig {
            max_steps: 2000,
            ..HtnnConfig::default()
        };
        let mut s = AnalogState::new(vec![1.0]);
        for k in 0..100 {
            htnn_step(&inst, &mut s, &cfg).unwrap();
            let closed = libm::pow(1.0 - cfg.alpha * cfg.dt, (k + 1) as f64);
            assert!((s.x[0] - closed).abs() < 1e-12);
        }
        let exact = libm::exp(-cfg.alpha * 1.0);
        assert!((s.x[0] - exact).abs() < 1e-3);

        // With a step fine enough for the first-order error bound, the
        // relative gap at t = 1 drops below 1e-3 as well.
        let fine = HtnnConfig {
            dt: 5e-5,
            ..HtnnConfig::default()
        };
        let mut s = AnalogState::new(vec![1.0]);
        for _ in 0..20_000 {
            htnn_step(&inst, &mut s, &fine).unwrap();
        }
        assert!((s.x[0] - exact).abs() / exact < 1e-3);
    }

    #[test]
    fn beta_zero_decouples_neurons() {
        // With beta = 0 each neuron evolves independently: permuting the
        // initial state permutes the trajectory.
        let AnyInstance::Int(inst) = parse_edge_list("3 3\n1 2 1\n1 3 -1\n2 3 1").unwrap() else {
            panic!()
        };
        let cfg = HtnnConfig {
            beta: 0.0,
            ..HtnnConfig::default()
        };
        let mut a = AnalogState::new(vec![0.3, -0.7, 0.05]);
        let mut b = AnalogState::new(vec![-0.7, 0.05, 0.3]);
        for _ in 0..100 {
            htnn_step(&inst, &mut a, &cfg).unwrap();
            htnn_step(&inst, &mut b, &cfg).unwrap();
        }
        assert_eq!(a.x[0], b.x[2]);
        assert_eq!(a.x[1], b.x[0]);
        assert_eq!(a.x[2], b.x[1]);
    }

    #[test]
    fn ferromagnetic_pair_rounds_aligned() {
        // J_12 = +1: from a small positive-leaning start both neurons grow
        // positive. Verified against a tight-step integration oracle.
        let inst = IsingInstance::<i32>::from_edges(2, [(0, 1, -1)]).unwrap();

        // Oracle: same dynamics at dt = 1e-4 for the same model time.
        let fine = HtnnConfig {
            dt: 1e-4,
            ..HtnnConfig::default()
        };
        let mut oracle = AnalogState::new(vec![0.1, 0.05]);
        for _ in 0..200_000 {
            htnn_step(&inst, &mut oracle, &fine).unwrap();
        }
        assert!(oracle.x[0] > 0.0 && oracle.x[1] > 0.0);

        let cfg = HtnnConfig::default();
        let mut clock = LogicalClock::default();
        let out = htnn_solve(
            &inst,
            AnalogState::new(vec![0.1, 0.05]),
            &cfg,
            tracer_for(&inst, &mut clock),
        )
        .unwrap();
        assert_eq!(out.final_state.spin(0), 1);
        assert_eq!(out.final_state.spin(1), 1);
        assert_eq!(out.final_energy.value, -1);
    }

    #[test]
    fn zero_coupling_rounded_energy_is_zero() {
        let inst = no_coupling(6);
        let mut rng = rng_from_seed(8);
        let mut clock = LogicalClock::default();
        let out = htnn_solve(
            &inst,
            AnalogState::random(6, &mut rng),
            &HtnnConfig::default(),
            tracer_for(&inst, &mut clock),
        )
        .unwrap();
        assert_eq!(out.final_energy.value, 0);
    }

    #[test]
    fn antiferro_triangle_usually_cuts_two() {
        let AnyInstance::Int(inst) = parse_edge_list("3 3\n1 2 1\n1 3 1\n2 3 1").unwrap() else {
            panic!()
        };
        let mut rng = rng_from_seed(77);
        let mut good = 0;
        for _ in 0..100 {
            let x0 = AnalogState::random(3, &mut rng);
            let mut clock = LogicalClock::default();
            let out =
                htnn_solve(&inst, x0, &HtnnConfig::default(), tracer_for(&inst, &mut clock))
                    .unwrap();
            if crate::energy::cut_value(&inst, &out.final_state).unwrap() == 2 {
                good += 1;
            }
        }
        assert!(good >= 90, "only {good}/100 runs reached a max cut");
    }

    #[test]
    fn rounding_rules() {
        let inst = no_coupling(2);
        let s = AnalogState::new(vec![0.3, -0.2]);
        let r = round_state(&inst, &s).unwrap();
        assert_eq!((r.spin(0), r.spin(1)), (1, -1));

        let ties = AnalogState::new(vec![0.0, -0.0]);
        let r = round_state(&inst, &ties).unwrap();
        assert_eq!((r.spin(0), r.spin(1)), (1, 1));

        // Idempotence: rounding a ±1-valued state returns it.
        let pm = AnalogState::new(vec![1.0, -1.0]);
        let r = round_state(&inst, &pm).unwrap();
        assert_eq!((r.spin(0), r.spin(1)), (1, -1));
    }

    #[test]
    fn divergence_is_reported_with_step_index() {
        // A huge step size makes the decay term explode.
        let inst = no_coupling(1);
        let cfg = HtnnConfig {
            dt: 1e300,
            max_steps: 10,
            ..HtnnConfig::default()
        };
        let mut s = AnalogState::new(vec![1.0]);
        let mut err = None;
        for _ in 0..10 {
            if let Err(e) = htnn_step(&inst, &mut s, &cfg) {
                err = Some(e);
                break;
            }
        }
        assert!(matches!(err, Some(SolveError::Diverged { .. })));
    }

    #[test]
    fn deterministic_trajectory() {
        let inst = IsingInstance::<i32>::from_edges(4, [(0, 1, -1), (1, 2, 1), (2, 3, -1)]).unwrap();
        let run = || {
            let mut clock = LogicalClock::default();
            htnn_solve(
                &inst,
                AnalogState::new(vec![0.02, -0.07, 0.01, 0.09]),
                &HtnnConfig::default(),
                tracer_for(&inst, &mut clock),
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.final_state, b.final_state);
    }
}
