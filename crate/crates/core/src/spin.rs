//! Spin assignments with cached local fields.

use alloc::vec::Vec;

use rand_chacha::rand_core::RngCore;

use crate::bits::BitVec64;
use crate::instance::IsingInstance;
use crate::weight::{Accum, Weight};

/// A `±1` assignment packed one bit per spin (bit set = `+1`), together
/// with the cached local fields `h_i = sum_j J_ij x_j`.
///
/// The fields are maintained incrementally by [`crate::energy::apply_flip`];
/// a single flip costs `O(deg i)` instead of the `O(n^2)` full sweep
/// recomputation, which is what makes the discrete solvers fast on CPU.
/// Single-owner: exactly one solver mutates a state at a time.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState<A: Accum> {
    bits: BitVec64,
    fields: Vec<A>,
}

impl<A: Accum> SpinState<A> {
    /// Wrap a bit assignment, computing every local field from scratch.
    pub fn from_bits<W: Weight<Acc = A>>(inst: &IsingInstance<W>, bits: BitVec64) -> Self {
        assert_eq!(bits.len(), inst.n(), "spin/instance dimension mismatch");
        let fields = compute_fields(inst, &bits);
        Self { bits, fields }
    }

    /// Uniform random `±1` state drawn from `rng` (word-filled bit vector).
    pub fn random<W: Weight<Acc = A>>(inst: &IsingInstance<W>, rng: &mut impl RngCore) -> Self {
        Self::from_bits(inst, BitVec64::random(inst.n(), rng))
    }

    /// Convenience constructor from explicit signs (`> 0` means `+1`).
    pub fn from_signs<W: Weight<Acc = A>>(inst: &IsingInstance<W>, signs: &[i8]) -> Self {
        assert_eq!(signs.len(), inst.n());
        Self::from_bits(inst, BitVec64::from_fn(signs.len(), |i| signs[i] > 0))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    /// Spin value of vertex `i` as `+1` / `-1`.
    #[inline]
    pub fn spin(&self, i: usize) -> i8 {
        if self.bits.get(i) { 1 } else { -1 }
    }

    #[inline]
    pub fn bits(&self) -> &BitVec64 {
        &self.bits
    }

    /// Cached local field `h_i = sum_j J_ij x_j`.
    #[inline]
    pub fn field(&self, i: usize) -> A {
        self.fields[i]
    }

    #[inline]
    pub fn fields(&self) -> &[A] {
        &self.fields
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut BitVec64, &mut [A]) {
        (&mut self.bits, &mut self.fields)
    }
}

/// Local fields from scratch: `h_i = sum_j J_ij x_j` with `J = -w`.
fn compute_fields<W: Weight>(inst: &IsingInstance<W>, bits: &BitVec64) -> Vec<W::Acc> {
    let mut fields = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let mut h = W::Acc::ZERO;
        for (j, w) in inst.neighbors(i) {
            if bits.get(j) {
                h -= w.acc();
            } else {
                h += w.acc();
            }
        }
        fields.push(h);
    }
    fields
}
