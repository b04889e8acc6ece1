//! Software model of a measurement-feedback coherent Ising machine.
//!
//! Each pulse carries an in-phase amplitude `c_i` (and optionally a
//! quadrature `s_i`). One roundtrip applies three maps in order:
//!
//! 1. gain (Euler–Maruyama):
//!    `c_i += (p - c_i^2 - s_i^2) c_i dt + (1/A_s) sqrt(c_i^2 + s_i^2 + 1/2) sqrt(dt) g_i`
//! 2. measurement out-coupling: `c_i <- sqrt(1-T_mes) c_i + sqrt(T_mes) f_i / A_s`,
//!    reporting the pre-map amplitudes (optionally quantized) as the
//!    measured vector;
//! 3. feedback injection: `c_i <- sqrt(1-T_inj) c_i + sqrt(T_inj) xi sum_j J_ij m_j`.
//!
//! The pump `p` ramps linearly from below to above threshold. Noise draws
//! `g_i` are standard normal and `f_i` are vacuum draws of variance 1/2;
//! with noise off both are zero and the whole trajectory is odd in the
//! initial amplitudes. By default the quadrature stays identically zero;
//! the optional two-quadrature mode evolves `s_i` under the gain map with
//! `p` negated.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::bits::BitVec64;
use crate::energy::{Energy, energy_of_bits};
use crate::instance::IsingInstance;
use crate::rng::{SolverRng, rng_from_seed};
use crate::spin::SpinState;
use crate::trace::Tracer;
use crate::weight::Weight;

use super::{CouplingOp, SolveError, TrialOutcome};

/// Per-pulse oscillator amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct OpoState {
    /// In-phase amplitudes.
    pub c: Vec<f64>,
    /// Quadrature amplitudes (all zero unless two-quadrature mode is on).
    pub s: Vec<f64>,
    pub roundtrip: u64,
}

impl OpoState {
    pub fn new(c: Vec<f64>) -> Self {
        let n = c.len();
        Self {
            c,
            s: vec![0.0; n],
            roundtrip: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    fn check_finite(&self) -> Result<(), SolveError> {
        let ok = self.c.iter().chain(self.s.iter()).all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(SolveError::Diverged {
                iteration: self.roundtrip,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct CimConfig {
    /// Pump rate at roundtrip 0 (below threshold).
    pub p_start: f64,
    /// Pump rate after the ramp (above threshold).
    pub p_end: f64,
    /// Roundtrips over which the pump ramps linearly from `p_start` to
    /// `p_end`; it holds at `p_end` afterwards.
    pub ramp_roundtrips: u64,
    /// Total roundtrips to simulate.
    pub roundtrips: u64,
    /// Euler–Maruyama step per roundtrip.
    pub dt: f64,
    /// Saturation amplitude scale `A_s`.
    pub saturation: f64,
    /// Measurement out-coupling ratio in `[0, 1]`.
    pub t_mes: f64,
    /// Injection coupling ratio in `[0, 1]`.
    pub t_inj: f64,
    /// Feedback gain `xi`.
    pub feedback_gain: f64,
    pub noise: bool,
    /// Amplitude quantization of the measured values, off by default
    /// (5 bits reproduces the hardware's analog-digital slicing).
    pub quantize_bits: Option<u32>,
    /// Full-scale range of the quantizer.
    pub quantize_range: f64,
    /// Evolve the quadrature with the pump-negated gain map instead of
    /// holding it at zero.
    pub two_quadrature: bool,
    /// Standard deviation of the initial amplitudes.
    pub init_sigma: f64,
    pub seed: u64,
}

impl Default for CimConfig {
    fn default() -> Self {
        Self {
            p_start: -0.5,
            p_end: 1.2,
            ramp_roundtrips: 1000,
            roundtrips: 1000,
            dt: 0.01,
            saturation: 200.0,
            t_mes: 0.1,
            t_inj: 0.1,
            feedback_gain: 1.0,
            noise: true,
            quantize_bits: None,
            quantize_range: 2.0,
            two_quadrature: false,
            init_sigma: 0.01,
            seed: 0,
        }
    }
}

impl CimConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if !(0.0..=1.0).contains(&self.t_mes) {
            return Err(SolveError::InvalidConfig("t_mes must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.t_inj) {
            return Err(SolveError::InvalidConfig("t_inj must be in [0, 1]"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SolveError::InvalidConfig("dt must be positive"));
        }
        if !(self.saturation > 0.0 && self.saturation.is_finite()) {
            return Err(SolveError::InvalidConfig("saturation must be positive"));
        }
        if self.p_end < self.p_start {
            return Err(SolveError::InvalidConfig("pump ramp must be non-decreasing"));
        }
        if self.ramp_roundtrips == 0 {
            return Err(SolveError::InvalidConfig("ramp_roundtrips must be >= 1"));
        }
        if self.roundtrips == 0 {
            return Err(SolveError::InvalidConfig("roundtrips must be >= 1"));
        }
        if let Some(bits) = self.quantize_bits {
            validate_quantizer(bits, self.quantize_range)?;
        }
        if !(self.init_sigma >= 0.0 && self.init_sigma.is_finite()) {
            return Err(SolveError::InvalidConfig("init_sigma must be non-negative"));
        }
        Ok(())
    }

    /// Pump rate at roundtrip `r`: linear in `r` up to the ramp length,
    /// then held at `p_end`. Non-decreasing.
    pub fn pump_at(&self, r: u64) -> f64 {
        if r >= self.ramp_roundtrips {
            self.p_end
        } else {
            self.p_start + (self.p_end - self.p_start) * r as f64 / self.ramp_roundtrips as f64
        }
    }
}

fn validate_quantizer(bits: u32, range: f64) -> Result<(), SolveError> {
    if bits == 0 || bits > 32 {
        return Err(SolveError::InvalidConfig("quantizer bits must be in 1..=32"));
    }
    if !(range > 0.0 && range.is_finite()) {
        return Err(SolveError::InvalidConfig("quantizer range must be positive"));
    }
    Ok(())
}

/// Clip `v` to `[-range, range]` and snap it to the nearest of `2^bits`
/// uniformly spaced levels spanning that interval (both endpoints are
/// levels). Monotone and idempotent; the error never exceeds
/// `range / (2^bits - 1)` inside the interval.
pub fn quantize(v: f64, bits: u32, range: f64) -> Result<f64, SolveError> {
    validate_quantizer(bits, range)?;
    let clipped = v.clamp(-range, range);
    let levels = (1u64 << bits) as f64;
    let step = 2.0 * range / (levels - 1.0);
    let k = libm::round((clipped + range) / step);
    Ok(-range + k * step)
}

/// One Euler–Maruyama gain step at pump rate `p`, both drifts evaluated at
/// the pre-step amplitudes. When noise is on, one standard normal is drawn
/// per pulse in index order (in two-quadrature mode: the in-phase draw,
/// then the quadrature draw, per pulse).
pub fn gain_step(
    state: &mut OpoState,
    p: f64,
    cfg: &CimConfig,
    rng: &mut SolverRng,
) -> Result<(), SolveError> {
    let sqrt_dt = libm::sqrt(cfg.dt);
    let inv_sat = 1.0 / cfg.saturation;
    for i in 0..state.c.len() {
        let (c, s) = (state.c[i], state.s[i]);
        let sat = c * c + s * s;
        let noise_amp = inv_sat * libm::sqrt(sat + 0.5) * sqrt_dt;
        let mut c_next = c + (p - sat) * c * cfg.dt;
        if cfg.noise {
            let g: f64 = rng.sample(StandardNormal);
            c_next += noise_amp * g;
        }
        state.c[i] = c_next;
        if cfg.two_quadrature {
            // The quadrature sees the pump with opposite sign.
            let mut s_next = s + (-p - sat) * s * cfg.dt;
            if cfg.noise {
                let g: f64 = rng.sample(StandardNormal);
                s_next += noise_amp * g;
            }
            state.s[i] = s_next;
        }
    }
    state.check_finite()
}

fn measure_into(
    state: &mut OpoState,
    cfg: &CimConfig,
    rng: &mut SolverRng,
    measured: &mut Vec<f64>,
) -> Result<(), SolveError> {
    measured.clear();
    if let Some(bits) = cfg.quantize_bits {
        for &c in &state.c {
            measured.push(quantize(c, bits, cfg.quantize_range)?);
        }
    } else {
        measured.extend_from_slice(&state.c);
    }
    let keep = libm::sqrt(1.0 - cfg.t_mes);
    let vac = libm::sqrt(cfg.t_mes) / cfg.saturation;
    if cfg.t_mes > 0.0 {
        for c in &mut state.c {
            let f = if cfg.noise {
                let g: f64 = rng.sample(StandardNormal);
                g * libm::sqrt(0.5) // f_i ~ Normal(0, 1/2)
            } else {
                0.0
            };
            *c = keep * *c + vac * f;
        }
    }
    state.check_finite()
}

/// Measurement out-coupling. Returns the measured amplitudes: the pre-map
/// in-phase values, quantized when configured. The retained state loses a
/// fraction `T_mes` and picks up a vacuum draw `f_i ~ Normal(0, 1/2)`
/// (zero with noise off); draws are in index order.
pub fn measure(
    state: &mut OpoState,
    cfg: &CimConfig,
    rng: &mut SolverRng,
) -> Result<Vec<f64>, SolveError> {
    let mut measured = Vec::with_capacity(state.len());
    measure_into(state, cfg, rng, &mut measured)?;
    Ok(measured)
}

fn inject_with<W: Weight>(
    op: &CouplingOp<'_, W>,
    state: &mut OpoState,
    measured: &[f64],
    cfg: &CimConfig,
    feedback: &mut Vec<f64>,
) -> Result<(), SolveError> {
    feedback.resize(state.len(), 0.0);
    op.apply(measured, feedback);
    let keep = libm::sqrt(1.0 - cfg.t_inj);
    let gain = libm::sqrt(cfg.t_inj) * cfg.feedback_gain;
    for (c, f) in state.c.iter_mut().zip(feedback.iter()) {
        *c = keep * *c + gain * *f;
    }
    state.check_finite()
}

/// Feedback injection: add the coupling sum of the measured amplitudes,
/// `c_i <- sqrt(1-T_inj) c_i + sqrt(T_inj) xi sum_j J_ij m_j`, with a fixed
/// ascending-`j` summation order.
pub fn inject<W: Weight>(
    state: &mut OpoState,
    measured: &[f64],
    inst: &IsingInstance<W>,
    cfg: &CimConfig,
) -> Result<(), SolveError> {
    if measured.len() != inst.n() || state.len() != inst.n() {
        return Err(SolveError::Kernel(
            crate::energy::KernelError::DimensionMismatch {
                expected: inst.n(),
                found: measured.len().min(state.len()),
            },
        ));
    }
    let op = CouplingOp::sparse(inst);
    let mut feedback = vec![0.0; state.len()];
    inject_with(&op, state, measured, cfg, &mut feedback)
}

fn sign_bits(state: &OpoState) -> BitVec64 {
    // c > 0 -> +1, c < 0 -> -1, c == 0 -> +1.
    BitVec64::from_fn(state.len(), |i| state.c[i] >= 0.0)
}

/// Run the full machine: per roundtrip, gain at the ramped pump, then
/// measurement, then injection. Trace samples report the Ising energy of
/// the sign of `c`; the outcome carries the sign-rounded final state.
/// Deterministic given `cfg.seed`. Draw order per roundtrip: gain normals,
/// then measurement vacuum draws, each in pulse index order.
pub fn cim_solve<W: Weight>(
    inst: &IsingInstance<W>,
    cfg: &CimConfig,
    mut tracer: Tracer<'_, W::Acc>,
) -> Result<TrialOutcome<W::Acc>, SolveError> {
    cfg.validate()?;
    let n = inst.n();
    let mut rng = rng_from_seed(cfg.seed);
    let init: Vec<f64> = (0..n)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            g * cfg.init_sigma
        })
        .collect();
    let mut state = OpoState::new(init);
    let op = CouplingOp::new(inst);
    let mut measured = Vec::with_capacity(n);
    let mut feedback = vec![0.0; n];

    tracer.sample(0, energy_of_bits(inst, &sign_bits(&state)));
    for r in 0..cfg.roundtrips {
        let p = cfg.pump_at(r);
        gain_step(&mut state, p, cfg, &mut rng)?;
        measure_into(&mut state, cfg, &mut rng, &mut measured)?;
        inject_with(&op, &mut state, &measured, cfg, &mut feedback)?;
        state.roundtrip = r + 1;
        if tracer.due(r + 1) {
            tracer.sample(r + 1, energy_of_bits(inst, &sign_bits(&state)));
        }
    }
    let final_value = energy_of_bits(inst, &sign_bits(&state));
    tracer.sample(cfg.roundtrips, final_value);

    Ok(TrialOutcome {
        final_state: SpinState::from_bits(inst, sign_bits(&state)),
        final_energy: Energy::new(final_value, n),
        trace: tracer.finish(),
        sweeps: cfg.roundtrips,
        reached_target: None,
    })
}
