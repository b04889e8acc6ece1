//! Simulated annealing with Metropolis acceptance.
//!
//! One step = one attempted single-spin flip at a uniformly random index,
//! accepted with probability `min(1, exp(-dE_i / T))` while the temperature
//! follows a non-increasing schedule. A "sweep" is `n` attempts, for
//! reporting parity with the Hopfield network.

use crate::energy::{apply_flip, delta_energy, ising_energy};
use crate::instance::IsingInstance;
use crate::rng::SolverRng;
use crate::spin::SpinState;
use crate::trace::Tracer;
use crate::weight::{Accum, Weight};

use rand::Rng;

use super::{SolveError, TrialOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ScheduleLaw {
    Geometric,
    Linear,
}

/// Annealing schedule: temperature as a function of the attempt index.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SaSchedule {
    pub t0: f64,
    pub tf: f64,
    /// Total single-spin attempts.
    pub steps: u64,
    pub law: ScheduleLaw,
}

impl SaSchedule {
    pub fn geometric(t0: f64, tf: f64, steps: u64) -> Self {
        Self {
            t0,
            tf,
            steps,
            law: ScheduleLaw::Geometric,
        }
    }

    pub fn linear(t0: f64, tf: f64, steps: u64) -> Self {
        Self {
            t0,
            tf,
            steps,
            law: ScheduleLaw::Linear,
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.t0.is_finite() && self.tf.is_finite()) {
            return Err(SolveError::InvalidSchedule("temperatures must be finite"));
        }
        if !(self.tf > 0.0) {
            return Err(SolveError::InvalidSchedule("final temperature must be > 0"));
        }
        if self.t0 < self.tf {
            return Err(SolveError::InvalidSchedule("t0 must be >= tf"));
        }
        if self.steps == 0 {
            return Err(SolveError::InvalidSchedule("steps must be >= 1"));
        }
        Ok(())
    }

    /// Temperature at attempt `k` (non-increasing in `k`).
    pub fn temperature(&self, k: u64) -> f64 {
        let r = k as f64 / self.steps as f64;
        match self.law {
            ScheduleLaw::Geometric => self.t0 * libm::exp(r * libm::log(self.tf / self.t0)),
            ScheduleLaw::Linear => self.t0 + (self.tf - self.t0) * r,
        }
    }

    /// Default initial temperature for a state: twice the mean absolute
    /// local field, a scale at which most early moves are accepted.
    pub fn auto_t0<A: Accum>(x0: &SpinState<A>) -> f64 {
        let n = x0.len().max(1);
        let mut sum = 0.0;
        for i in 0..x0.len() {
            sum += x0.field(i).abs().as_f64();
        }
        2.0 * sum / n as f64
    }
}

/// Metropolis acceptance for a proposed flip: `u < exp(-dE / T)`, with
/// `dE <= 0` always accepted. `u` is a uniform draw in `[0, 1)`.
pub fn sa_acceptance(d_e: f64, t: f64, u: f64) -> Result<bool, SolveError> {
    if !(t > 0.0) {
        return Err(SolveError::NonPositiveTemperature);
    }
    Ok(d_e <= 0.0 || u < libm::exp(-d_e / t))
}

/// Anneal from `x0`. Draw order per attempt: the spin index, then one
/// uniform `[0, 1)` draw only when `dE > 0`.
pub fn sa_solve<W: Weight>(
    inst: &IsingInstance<W>,
    x0: SpinState<W::Acc>,
    sched: &SaSchedule,
    rng: &mut SolverRng,
    mut tracer: Tracer<'_, W::Acc>,
) -> Result<TrialOutcome<W::Acc>, SolveError> {
    sched.validate()?;
    let n = inst.n();
    let mut x = x0;
    let mut energy = ising_energy(inst, &x)?.value;
    tracer.sample(0, energy);

    for k in 0..sched.steps {
        let t = sched.temperature(k);
        let i = rng.random_range(0..n);
        let d_e = delta_energy(inst, &x, i)?;
        let accept = if d_e <= W::Acc::ZERO {
            true
        } else {
            let u: f64 = rng.random();
            u < libm::exp(-d_e.as_f64() / t)
        };
        if accept {
            energy += apply_flip(inst, &mut x, i)?;
        }
        if (k + 1) % n as u64 == 0 {
            tracer.maybe_sample((k + 1) / n as u64, energy);
        }
    }
    let sweeps = sched.steps.div_ceil(n as u64);
    tracer.sample(sweeps, energy);

    let final_energy = ising_energy(inst, &x)?;
    debug_assert!(energy.approx_eq(final_energy.value));
    Ok(TrialOutcome {
        final_state: x,
        final_energy,
        trace: tracer.finish(),
        sweeps,
        reached_target: None,
    })
}
