//! Brute-force ground-state search for small instances.
//!
//! Enumerates all `2^n` assignments and evaluates each by a direct edge
//! sum, independent of the incremental kernels the solvers run on. Used as
//! the reference optimum in tests and small-scale studies.

use alloc::vec::Vec;

use crate::bits::BitVec64;
use crate::energy::{Energy, KernelError};
use crate::instance::IsingInstance;
use crate::weight::{Accum, Weight};

pub const MAX_EXHAUSTIVE_N: usize = 24;

/// Minimum Ising energy and one minimizing state, by full enumeration.
pub fn exhaustive_best<W: Weight>(
    inst: &IsingInstance<W>,
) -> Result<(Energy<W::Acc>, BitVec64), KernelError> {
    let n = inst.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(KernelError::TooLarge {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    let edges: Vec<(u32, u32, W::Acc)> = inst
        .edges()
        .map(|(i, j, w)| (i as u32, j as u32, w.acc()))
        .collect();

    let mut best_mask = 0u64;
    let mut best = energy_of_mask(&edges, 0);
    for mask in 1..(1u64 << n) {
        let e = energy_of_mask(&edges, mask);
        if e < best {
            best = e;
            best_mask = mask;
        }
    }
    let bits = BitVec64::from_fn(n, |i| (best_mask >> i) & 1 == 1);
    Ok((Energy::new(best, n), bits))
}

/// `E = sum_{i<j} w_ij x_i x_j` with spin `i` read from bit `i` of `mask`.
fn energy_of_mask<A: Accum>(edges: &[(u32, u32, A)], mask: u64) -> A {
    let mut e = A::ZERO;
    for &(i, j, w) in edges {
        if (mask >> i ^ mask >> j) & 1 == 0 {
            e += w;
        } else {
            e -= w;
        }
    }
    e
}
