use std::collections::HashMap;

use crate::blocks::Blocks;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::dual::{pair_count, pairs};
use super::fdpg::DualState;

/// Stable identifier of a query point across sliding windows.
pub type PointId = u64;

/// Initial dual state for a window that shares points with the previous one.
///
/// `prev` pairs the previous final dual state with the ids of the points it
/// was solved over. Dual blocks of pairs present in both windows are copied
/// (negated if the two points swapped order); pairs involving new points
/// start at zero. Momentum is reset.
pub fn warm_start_shift<T: Scalar>(
    prev: Option<(&DualState<T>, &[PointId])>,
    new_ids: &[PointId],
    dim: usize,
) -> Result<DualState<T>> {
    let mut s = Blocks::zeros(pair_count(new_ids.len()), dim);
    let Some((state, prev_ids)) = prev else {
        return Ok(DualState::from_dual(s));
    };
    let expected = pair_count(prev_ids.len());
    if state.s.count() != expected {
        return Err(Error::BlockCount { expected, found: state.s.count() });
    }
    if state.s.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: state.s.dim() });
    }

    let position: HashMap<PointId, usize> = prev_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let k_prev = prev_ids.len();
    for (p, (m, l)) in pairs(new_ids.len()).enumerate() {
        let (Some(&a), Some(&b)) = (position.get(&new_ids[m]), position.get(&new_ids[l])) else {
            continue;
        };
        let (lo, hi, sign) = if a < b { (a, b, T::one()) } else { (b, a, -T::one()) };
        let src = state.s.block(super::dual::pair_index(lo, hi, k_prev));
        for (dst, &v) in s.block_mut(p).iter_mut().zip(src) {
            *dst = sign * v;
        }
    }
    Ok(DualState::from_dual(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(values: &[f64]) -> DualState<f64> {
        let mut st = DualState::from_dual(Blocks::from_flat(values.to_vec(), 1).unwrap());
        st.t = 7.0;
        st.iteration = 42;
        st
    }

    #[test]
    fn slide_by_one_copies_retained_pairs() {
        // pairs over ids [1,2,3]: (1,2), (1,3), (2,3)
        let prev = state(&[10.0, 20.0, 30.0]);
        let st = warm_start_shift(Some((&prev, &[1, 2, 3][..])), &[2, 3, 4], 1).unwrap();
        // pairs over ids [2,3,4]: (2,3), (2,4), (3,4)
        assert_eq!(st.s.as_slice(), &[30.0, 0.0, 0.0]);
        assert_eq!(st.y, st.s);
        assert_eq!(st.t, 1.0);
    }

    #[test]
    fn cold_and_identical_windows() {
        let cold = warm_start_shift::<f64>(None, &[5, 6, 7], 2).unwrap();
        assert_eq!(cold, DualState::zeros(3, 2));

        let prev = state(&[1.0, -2.0, 3.0]);
        let st = warm_start_shift(Some((&prev, &[1, 2, 3][..])), &[1, 2, 3], 1).unwrap();
        assert_eq!(st.s, prev.s);
        assert_eq!(st.t, 1.0);
        assert_eq!(st.iteration, 0);
    }

    #[test]
    fn growing_window_and_swapped_order() {
        let prev = state(&[4.0]);
        let st = warm_start_shift(Some((&prev, &[8, 9][..])), &[8, 9, 10], 1).unwrap();
        assert_eq!(st.s.as_slice(), &[4.0, 0.0, 0.0]);
        let st = warm_start_shift(Some((&prev, &[8, 9][..])), &[9, 8], 1).unwrap();
        assert_eq!(st.s.as_slice(), &[-4.0]);
    }

    #[test]
    fn structure_mismatch() {
        let prev = state(&[1.0, 2.0]);
        assert!(matches!(
            warm_start_shift(Some((&prev, &[1, 2, 3][..])), &[2, 3, 4], 1),
            Err(Error::BlockCount { expected: 3, found: 2 })
        ));
    }
}
