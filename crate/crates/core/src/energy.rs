//! Exact cut/energy evaluation and flip-energy kernels.
//!
//! Sign convention: `E(x) = -sum_{i<j} J_ij x_i x_j` with `J_ij = -w_ij`,
//! i.e. `E(x) = sum_{i<j} w_ij x_i x_j`. Under it both
//! `CUT(x) = (W - E(x)) / 2` and `dE_i = 2 x_i h_i` hold exactly, with
//! `h_i = sum_j J_ij x_j` the cached local field.

use crate::bits::BitVec64;
use crate::instance::IsingInstance;
use crate::spin::SpinState;
use crate::weight::{Accum, Weight};

/// An Ising energy value together with its per-spin normalization `E/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Energy<A> {
    pub value: A,
    pub per_spin: f64,
}

impl<A: Accum> Energy<A> {
    pub fn new(value: A, n: usize) -> Self {
        Self {
            value,
            per_spin: value.as_f64() / n as f64,
        }
    }
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("state has {found} spins but instance has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertex index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("instance lacks the sign-bitplane form")]
    NoBitplanes,
    #[error("instance too large for exhaustive enumeration (n={n}, max {max})")]
    TooLarge { n: usize, max: usize },
}

fn check_dims<W: Weight, A: Accum>(
    inst: &IsingInstance<W>,
    x: &SpinState<A>,
) -> Result<(), KernelError> {
    if x.len() != inst.n() {
        return Err(KernelError::DimensionMismatch {
            expected: inst.n(),
            found: x.len(),
        });
    }
    Ok(())
}

fn check_index<W: Weight>(inst: &IsingInstance<W>, i: usize) -> Result<(), KernelError> {
    if i >= inst.n() {
        return Err(KernelError::IndexOutOfRange {
            index: i,
            n: inst.n(),
        });
    }
    Ok(())
}

/// Direct edge sum of `E(x) = sum_{i<j} w_ij x_i x_j` over a raw bit
/// assignment. This is the authoritative evaluator; caches never enter it.
pub(crate) fn energy_of_bits<W: Weight>(inst: &IsingInstance<W>, bits: &BitVec64) -> W::Acc {
    let mut e = W::Acc::ZERO;
    for i in 0..inst.n() {
        let xi = bits.get(i);
        for (j, w) in inst.neighbors(i) {
            if j > i {
                if xi == bits.get(j) {
                    e += w.acc();
                } else {
                    e -= w.acc();
                }
            }
        }
    }
    e
}

/// Total weight of edges crossing the cut: `sum_{i<j} w_ij (1 - x_i x_j)/2`,
/// summed directly over edges.
pub fn cut_value<W: Weight>(
    inst: &IsingInstance<W>,
    x: &SpinState<W::Acc>,
) -> Result<W::Acc, KernelError> {
    check_dims(inst, x)?;
    let mut cut = W::Acc::ZERO;
    for (i, j, w) in inst.edges() {
        if x.bit(i) != x.bit(j) {
            cut += w.acc();
        }
    }
    Ok(cut)
}

/// Ising energy of a state (direct edge sum, exact for integer weights).
pub fn ising_energy<W: Weight>(
    inst: &IsingInstance<W>,
    x: &SpinState<W::Acc>,
) -> Result<Energy<W::Acc>, KernelError> {
    check_dims(inst, x)?;
    Ok(Energy::new(energy_of_bits(inst, x.bits()), inst.n()))
}

/// Energy change from flipping spin `i`: `dE_i = 2 x_i h_i`, read from the
/// cached field in O(1).
pub fn delta_energy<W: Weight>(
    inst: &IsingInstance<W>,
    x: &SpinState<W::Acc>,
    i: usize,
) -> Result<W::Acc, KernelError> {
    check_dims(inst, x)?;
    check_index(inst, i)?;
    let h2 = x.field(i).double();
    Ok(if x.bit(i) { h2 } else { -h2 })
}

/// Flip-energy from the sign bitplanes alone: AND/XOR word operations
/// against the spin bits plus population counts, no cached state.
///
/// Each present edge contributes `w_ij x_j = +1` exactly when its sign bit
/// agrees with the spin bit, so with `a = popcount(mask & !(sign ^ x))`:
/// `sum_j w_ij x_j = 2a - deg(i)` and `h_i = deg(i) - 2a` under `J = -w`.
pub fn delta_energy_packed<W: Weight>(
    inst: &IsingInstance<W>,
    x: &SpinState<W::Acc>,
    i: usize,
) -> Result<W::Acc, KernelError> {
    check_dims(inst, x)?;
    check_index(inst, i)?;
    let planes = inst.planes().ok_or(KernelError::NoBitplanes)?;
    let mask = planes.row_mask(i);
    let sign = planes.row_sign(i);
    let spins = x.bits().words();
    let mut agree: i64 = 0;
    for k in 0..mask.len() {
        agree += (mask[k] & !(sign[k] ^ spins[k])).count_ones() as i64;
    }
    let h = planes.degree(i) as i64 - 2 * agree;
    let xi = if x.bit(i) { 1 } else { -1 };
    Ok(W::Acc::from_count(2 * xi * h))
}

/// Flip spin `i` in place, updating every cached field in `O(deg i)`.
/// Returns the energy change `dE_i` that the flip applied.
pub fn apply_flip<W: Weight>(
    inst: &IsingInstance<W>,
    x: &mut SpinState<W::Acc>,
    i: usize,
) -> Result<W::Acc, KernelError> {
    let d_e = delta_energy(inst, x, i)?;
    let (bits, fields) = x.parts_mut();
    bits.toggle(i);
    let new_plus = bits.get(i);
    // h_j changes by J_ij * (new x_i - old x_i) = -w_ij * 2 * new x_i.
    for (j, w) in inst.neighbors(i) {
        let step = w.acc().double();
        if new_plus {
            fields[j] -= step;
        } else {
            fields[j] += step;
        }
    }
    Ok(d_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{IsingInstance, gen_complete_pm1, parse_edge_list};
    use crate::rng::rng_from_seed;

    fn triangle() -> IsingInstance<i32> {
        match parse_edge_list("3 3\n1 2 1\n1 3 1\n2 3 1").unwrap() {
            crate::instance::AnyInstance::Int(i) => i,
            _ => unreachable!(),
        }
    }

    /// Independent oracle: plain double loop over an explicit edge list.
    fn oracle_cut_energy(edges: &[(usize, usize, i64)], spins: &[i8]) -> (i64, i64) {
        let mut cut = 0;
        let mut e = 0;
        for &(i, j, w) in edges {
            let prod = spins[i] as i64 * spins[j] as i64;
            e += w * prod;
            if prod < 0 {
                cut += w;
            }
        }
        (cut, e)
    }

    #[test]
    fn triangle_cut_examples() {
        let inst = triangle();
        let x = SpinState::from_signs(&inst, &[1, 1, -1]);
        assert_eq!(cut_value(&inst, &x).unwrap(), 2);
        let same = SpinState::from_signs(&inst, &[-1, -1, -1]);
        assert_eq!(cut_value(&inst, &same).unwrap(), 0);
    }

    #[test]
    fn two_spin_energy_and_delta() {
        // J_12 = +1 means w_12 = -1.
        let inst = IsingInstance::<i32>::from_edges(2, [(0, 1, -1)]).unwrap();
        let x = SpinState::from_signs(&inst, &[1, 1]);
        assert_eq!(ising_energy(&inst, &x).unwrap().value, -1);
        assert_eq!(delta_energy(&inst, &x, 0).unwrap(), 2);
        assert_eq!(delta_energy(&inst, &x, 1).unwrap(), 2);
    }

    #[test]
    fn zero_couplings_zero_energy() {
        let inst = IsingInstance::<i32>::from_edges(4, []).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..4 {
            let x = SpinState::random(&inst, &mut rng);
            assert_eq!(ising_energy(&inst, &x).unwrap().value, 0);
            assert_eq!(delta_energy(&inst, &x, 2).unwrap(), 0);
        }
    }

    #[test]
    fn energy_cut_match_oracle_and_identity() {
        let mut rng = rng_from_seed(11);
        for seed in 0..20 {
            let inst = gen_complete_pm1(10 + (seed as usize % 3), seed).unwrap();
            let edges: Vec<(usize, usize, i64)> =
                inst.edges().map(|(i, j, w)| (i, j, w as i64)).collect();
            let x = SpinState::random(&inst, &mut rng);
            let spins: Vec<i8> = (0..inst.n()).map(|i| x.spin(i)).collect();
            let (cut_o, e_o) = oracle_cut_energy(&edges, &spins);
            let e = ising_energy(&inst, &x).unwrap().value;
            let cut = cut_value(&inst, &x).unwrap();
            assert_eq!(e, e_o);
            assert_eq!(cut, cut_o);
            // CUT = (W - E) / 2
            assert_eq!(cut, (inst.total_weight() - e) / 2);
        }
    }

    #[test]
    fn delta_matches_recompute_difference() {
        let mut rng = rng_from_seed(3);
        for seed in 0..10 {
            let inst = gen_complete_pm1(12, seed).unwrap();
            let mut x = SpinState::random(&inst, &mut rng);
            for i in 0..inst.n() {
                let before = ising_energy(&inst, &x).unwrap().value;
                let de = delta_energy(&inst, &x, i).unwrap();
                let de_packed = delta_energy_packed(&inst, &x, i).unwrap();
                assert_eq!(de, de_packed);
                apply_flip(&inst, &mut x, i).unwrap();
                let after = ising_energy(&inst, &x).unwrap().value;
                assert_eq!(after - before, de);
                apply_flip(&inst, &mut x, i).unwrap();
            }
        }
    }

    #[test]
    fn packed_requires_bitplanes() {
        let inst = IsingInstance::<f64>::from_edges(3, [(0, 1, 0.5)]).unwrap();
        let x = SpinState::from_signs(&inst, &[1, 1, -1]);
        assert_eq!(
            delta_energy_packed(&inst, &x, 0),
            Err(KernelError::NoBitplanes)
        );
        // The plain kernels still work on the general form.
        assert_eq!(delta_energy(&inst, &x, 0).unwrap(), -1.0);
    }

    #[test]
    fn packed_zero_degree_row() {
        let inst = IsingInstance::<i32>::from_edges(3, [(1, 2, 1)]).unwrap();
        let x = SpinState::from_signs(&inst, &[1, 1, -1]);
        assert_eq!(delta_energy_packed(&inst, &x, 0).unwrap(), 0);
    }

    #[test]
    fn packed_full_row_closed_form() {
        // All neighbors +1, x everywhere +1: dE_i = 2 * (-sum w_ij).
        let n = 9;
        let edges: Vec<_> = (1..n).map(|j| (0usize, j, 1i32)).collect();
        let inst = IsingInstance::<i32>::from_edges(n, edges).unwrap();
        let x = SpinState::from_signs(&inst, &[1; 9]);
        assert_eq!(delta_energy_packed(&inst, &x, 0).unwrap(), -2 * (n as i64 - 1));
    }

    #[test]
    fn flip_is_involution_and_keeps_cache() {
        let inst = gen_complete_pm1(33, 21).unwrap();
        let mut rng = rng_from_seed(9);
        let mut x = SpinState::random(&inst, &mut rng);
        let orig = x.clone();
        apply_flip(&inst, &mut x, 17).unwrap();
        assert_ne!(x, orig);
        apply_flip(&inst, &mut x, 17).unwrap();
        assert_eq!(x, orig);

        // After many flips the cache still equals a from-scratch rebuild.
        for k in 0..200 {
            apply_flip(&inst, &mut x, (k * 7) % inst.n()).unwrap();
        }
        let rebuilt = SpinState::from_bits(&inst, x.bits().clone());
        assert_eq!(x, rebuilt);
    }

    #[test]
    fn dimension_and_index_errors() {
        let inst = gen_complete_pm1(8, 0).unwrap();
        let other = gen_complete_pm1(9, 0).unwrap();
        let x = SpinState::from_bits(&other, crate::bits::BitVec64::zeros(9));
        assert!(matches!(
            ising_energy(&inst, &x),
            Err(KernelError::DimensionMismatch { .. })
        ));
        let y = SpinState::from_bits(&inst, crate::bits::BitVec64::zeros(8));
        assert!(matches!(
            delta_energy(&inst, &y, 8),
            Err(KernelError::IndexOutOfRange { .. })
        ));
    }
}
