//! Numeric scalar traits for edge weights and energy accumulators.
//!
//! Instances come in two numeric classes: `i32` weights for graphs whose
//! edges are all `±1` (energies stay exact integers, accumulated in `i64`),
//! and `f64` weights for general weighted graphs. Everything downstream
//! (kernels, solvers, traces) is generic over [`Weight`].

use core::fmt::{Debug, Display};
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// Scalar type of an edge weight.
pub trait Weight: Copy + PartialEq + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// Accumulator used for local fields, energies, and cut values.
    /// Exact for integer weights.
    type Acc: Accum;

    /// Whether this weight class is backed by sign bitplanes (`±1` edges
    /// packed one bit per edge).
    const PACKED: bool;

    const ZERO: Self;

    fn acc(self) -> Self::Acc;
    fn as_f64(self) -> f64;
    /// `|w| == 1`.
    fn is_unit(self) -> bool;
    /// Unit weight from a sign bit (`true` -> `+1`).
    fn from_unit_sign(plus: bool) -> Self;
}

/// Accumulator scalar for fields, energies, and cuts.
pub trait Accum:
    Copy
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;

    fn as_f64(self) -> f64;
    /// Exact conversion from a signed bit/population count.
    fn from_count(v: i64) -> Self;
    /// Halve a value known to be even in the integer case (used for the
    /// cut/energy identity `CUT = (W - E) / 2`).
    fn halve(self) -> Self;
    fn double(self) -> Self;
    fn abs(self) -> Self;
    /// Equality check for sanity assertions: exact for integers, small
    /// relative tolerance for floats.
    fn approx_eq(self, other: Self) -> bool;
}

impl Weight for i32 {
    type Acc = i64;
    const PACKED: bool = true;
    const ZERO: Self = 0;

    #[inline]
    fn acc(self) -> i64 {
        self as i64
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn is_unit(self) -> bool {
        self == 1 || self == -1
    }
    #[inline]
    fn from_unit_sign(plus: bool) -> Self {
        if plus { 1 } else { -1 }
    }
}

impl Weight for f64 {
    type Acc = f64;
    const PACKED: bool = false;
    const ZERO: Self = 0.0;

    #[inline]
    fn acc(self) -> f64 {
        self
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
    #[inline]
    fn is_unit(self) -> bool {
        self == 1.0 || self == -1.0
    }
    #[inline]
    fn from_unit_sign(plus: bool) -> Self {
        if plus { 1.0 } else { -1.0 }
    }
}

impl Accum for i64 {
    const ZERO: Self = 0;

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn from_count(v: i64) -> Self {
        v
    }
    #[inline]
    fn halve(self) -> Self {
        debug_assert!(self % 2 == 0);
        self / 2
    }
    #[inline]
    fn double(self) -> Self {
        self * 2
    }
    #[inline]
    fn abs(self) -> Self {
        i64::abs(self)
    }
    #[inline]
    fn approx_eq(self, other: Self) -> bool {
        self == other
    }
}

impl Accum for f64 {
    const ZERO: Self = 0.0;

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
    #[inline]
    fn from_count(v: i64) -> Self {
        v as f64
    }
    #[inline]
    fn halve(self) -> Self {
        0.5 * self
    }
    #[inline]
    fn double(self) -> Self {
        2.0 * self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn approx_eq(self, other: Self) -> bool {
        let scale = f64::abs(self).max(f64::abs(other)).max(1.0);
        f64::abs(self - other) <= 1e-9 * scale
    }
}
