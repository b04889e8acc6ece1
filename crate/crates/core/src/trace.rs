//! Energy-descent traces: time-stamped `(iteration, energy, cut)` samples
//! recorded while a solver runs.
//!
//! Solvers are wall-clock agnostic: they stamp samples through the [`Clock`]
//! trait. The benchmark harness injects a monotonic wall clock; tests and
//! byte-reproducible runs inject [`LogicalClock`]. Stamps are forced
//! strictly increasing.

use alloc::vec::Vec;

use crate::solvers::SolverId;
use crate::weight::Accum;

/// Source of elapsed-time stamps, in nanoseconds since the solve started.
pub trait Clock {
    fn elapsed_ns(&mut self) -> u64;
}

/// Deterministic clock: advances a fixed number of nanoseconds per reading.
/// Traces recorded under it are byte-reproducible across runs.
#[derive(Clone, Debug)]
pub struct LogicalClock {
    ticks: u64,
    ns_per_tick: u64,
}

impl LogicalClock {
    pub fn new(ns_per_tick: u64) -> Self {
        Self {
            ticks: 0,
            ns_per_tick: ns_per_tick.max(1),
        }
    }
}

impl Default for LogicalClock {
    fn default() -> Self {
        Self::new(1)
    }
}

impl Clock for LogicalClock {
    fn elapsed_ns(&mut self) -> u64 {
        self.ticks += 1;
        self.ticks * self.ns_per_tick
    }
}

/// How often a solver records a sample, in solver-native iterations
/// (HN/SA sweeps, HTNN steps, CIM roundtrips). `0` disables periodic
/// samples; the initial and final states are always recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TraceOptions {
    pub sample_every: u64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { sample_every: 1 }
    }
}

/// One trace sample. `cut` is derived from the energy via
/// `CUT = (W - E) / 2`, which the kernels keep exact for integer weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample<A> {
    pub iteration: u64,
    pub elapsed_ns: u64,
    pub energy: A,
    pub cut: A,
}

/// Energy descent of a single trial.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyTrace<A> {
    pub solver: SolverId,
    pub trial: u64,
    pub seed: u64,
    pub samples: Vec<TraceSample<A>>,
}

impl<A: Accum> EnergyTrace<A> {
    pub fn last_energy(&self) -> Option<A> {
        self.samples.last().map(|s| s.energy)
    }
}

/// Records samples for one trial: applies the sampling cadence, stamps
/// strictly increasing elapsed times, and derives cut values.
pub struct Tracer<'c, A> {
    opts: TraceOptions,
    clock: &'c mut dyn Clock,
    total_weight: A,
    last_ns: u64,
    trace: EnergyTrace<A>,
}

impl<'c, A: Accum> Tracer<'c, A> {
    pub fn new(
        solver: SolverId,
        trial: u64,
        seed: u64,
        opts: TraceOptions,
        total_weight: A,
        clock: &'c mut dyn Clock,
    ) -> Self {
        Self {
            opts,
            clock,
            total_weight,
            last_ns: 0,
            trace: EnergyTrace {
                solver,
                trial,
                seed,
                samples: Vec::new(),
            },
        }
    }

    /// Whether the cadence asks for a sample at this iteration. Callers use
    /// this to skip energy evaluation entirely on non-sampled iterations.
    #[inline]
    pub fn due(&self, iteration: u64) -> bool {
        self.opts.sample_every != 0 && iteration % self.opts.sample_every == 0
    }

    /// Record unconditionally (deduplicates an already-recorded iteration).
    pub fn sample(&mut self, iteration: u64, energy: A) {
        if let Some(last) = self.trace.samples.last()
            && last.iteration == iteration
        {
            return;
        }
        let ns = self.clock.elapsed_ns().max(self.last_ns + 1);
        self.last_ns = ns;
        self.trace.samples.push(TraceSample {
            iteration,
            elapsed_ns: ns,
            energy,
            cut: (self.total_weight - energy).halve(),
        });
    }

    /// Record if the cadence is due at `iteration`.
    pub fn maybe_sample(&mut self, iteration: u64, energy: A) {
        if self.due(iteration) {
            self.sample(iteration, energy);
        }
    }

    pub fn finish(self) -> EnergyTrace<A> {
        self.trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stamps_strictly_increase_and_cut_identity_holds() {
        let mut clock = LogicalClock::default();
        // total weight 3 (triangle of +1 edges)
        let mut tr = Tracer::<i64>::new(SolverId::Hn, 0, 1, TraceOptions::default(), 3, &mut clock);
        tr.sample(0, 3);
        tr.sample(1, -1);
        tr.sample(1, -1); // duplicate iteration is dropped
        tr.sample(2, -1);
        let trace = tr.finish();
        assert_eq!(trace.samples.len(), 3);
        assert!(
            trace
                .samples
                .windows(2)
                .all(|p| p[0].elapsed_ns < p[1].elapsed_ns)
        );
        assert_eq!(trace.samples[0].cut, 0);
        assert_eq!(trace.samples[1].cut, 2);
    }

    #[test]
    fn cadence_skips_iterations() {
        let mut clock = LogicalClock::default();
        let mut tr =
            Tracer::<i64>::new(SolverId::Sa, 0, 1, TraceOptions { sample_every: 3 }, 0, &mut clock);
        for k in 0..10 {
            assert_eq!(tr.due(k), k % 3 == 0);
            tr.maybe_sample(k, 0);
        }
        assert_eq!(tr.finish().samples.len(), 4); // 0, 3, 6, 9
    }
}
