//! Derandomized Hopfield network: sequential majority-vote updates.
//!
//! Spins are visited in index order `0..n` (derandomized rather than
//! randomly selected) and set to the sign of their local field,
//! `x_i <- sgn(sum_j J_ij x_j)`. A zero field keeps the current spin, so
//! every executed flip strictly decreases the energy and the solver
//! terminates at a 1-flip local optimum (`dE_i >= 0` for all `i`) or at
//! the sweep cap.

use crate::energy::{apply_flip, ising_energy};
use crate::instance::IsingInstance;
use crate::spin::SpinState;
use crate::trace::Tracer;
use crate::weight::{Accum, Weight};

use super::{SolveError, TrialOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct HnConfig {
    /// Hard cap on sweeps; the network normally stops earlier, at the
    /// first sweep that flips nothing.
    pub max_sweeps: u64,
}

impl Default for HnConfig {
    fn default() -> Self {
        Self { max_sweeps: 10_000 }
    }
}

pub fn hn_solve<W: Weight>(
    inst: &IsingInstance<W>,
    x0: SpinState<W::Acc>,
    cfg: &HnConfig,
    mut tracer: Tracer<'_, W::Acc>,
) -> Result<TrialOutcome<W::Acc>, SolveError> {
    let mut x = x0;
    let mut energy = ising_energy(inst, &x)?.value;
    tracer.sample(0, energy);

    let mut sweeps = 0;
    for sweep in 0..cfg.max_sweeps {
        let mut flips = 0u64;
        for i in 0..inst.n() {
            let h = x.field(i);
            let want_plus = if h > W::Acc::ZERO {
                true
            } else if h < W::Acc::ZERO {
                false
            } else {
                x.bit(i) // tie: keep the current spin
            };
            if want_plus != x.bit(i) {
                let d_e = apply_flip(inst, &mut x, i)?;
                debug_assert!(d_e < W::Acc::ZERO, "HN flip must strictly decrease E");
                energy += d_e;
                flips += 1;
            }
        }
        sweeps = sweep + 1;
        tracer.maybe_sample(sweeps, energy);
        if flips == 0 {
            break;
        }
    }
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
