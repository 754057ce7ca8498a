//! Power-of-two adaptive step controller.
//!
//! Step sizes are powers of two in ticks, and a step of size h may begin
//! only at a time that is a multiple of h, which keeps neighboring step
//! patterns nested.  Increasing the step too quickly grows the error, so an
//! increase is limited to one factor of two and allowed only after the
//! previous k-1 steps were all of the same size.  Decreases take effect
//! immediately.

/// Largest power of two at most `v` (v >= 1).
pub fn pow2_floor(v: i64) -> i64 {
    debug_assert!(v >= 1);
    1i64 << (63 - v.leading_zeros())
}

/// Pick the next step size in ticks.
///
/// * `current`: size of the step just completed (a power of two).
/// * `now_tick`: the current time; always a multiple of `current`.
/// * `equal_run`: how many consecutive completed steps had size `current`.
/// * `order`: the integration order k.
/// * `bound_ticks`: the stability bound (at most this many ticks).
pub fn next_step_ticks(
    current: i64,
    now_tick: i64,
    equal_run: usize,
    order: usize,
    bound_ticks: i64,
) -> i64 {
    debug_assert!(current >= 1 && current.count_ones() == 1);
    debug_assert_eq!(now_tick.rem_euclid(current), 0);
    let bound = pow2_floor(bound_ticks.max(1));
    if bound < current {
        return bound;
    }
    if bound > current && equal_run + 1 >= order && now_tick.rem_euclid(2 * current) == 0 {
        return 2 * current;
    }
    current
}

/// Clamp a chosen step so the evolution lands exactly on the end time.
/// The result still divides the current time, so alignment is preserved.
pub fn clamp_to_gap(step: i64, gap: i64) -> i64 {
    debug_assert!(gap >= 1);
    step.min(pow2_floor(gap))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubles_when_run_is_long_enough_and_aligned() {
        // k = 3: the previous two steps must match before an increase
        assert_eq!(next_step_ticks(4, 16, 2, 3, 1000), 8);
        assert_eq!(next_step_ticks(4, 16, 1, 3, 1000), 4);
    }

    #[test]
    fn increase_limited_to_one_factor_of_two() {
        // plenty of stability margin still only doubles
        assert_eq!(next_step_ticks(4, 32, 5, 3, 64), 8);
    }

    #[test]
    fn decrease_is_immediate_and_unrestricted() {
        assert_eq!(next_step_ticks(16, 16, 0, 5, 3), 2);
        assert_eq!(next_step_ticks(16, 16, 0, 5, 1), 1);
    }

    #[test]
    fn misaligned_increase_waits() {
        // now = 12 is a multiple of 4 but not of 8
        assert_eq!(next_step_ticks(4, 12, 4, 3, 1000), 4);
        assert_eq!(next_step_ticks(4, 16, 4, 3, 1000), 8);
    }

    #[test]
    fn equal_bound_keeps_step() {
        assert_eq!(next_step_ticks(8, 16, 9, 2, 8), 8);
    }

    #[test]
    fn order_one_doubles_without_a_run() {
        assert_eq!(next_step_ticks(4, 8, 0, 1, 100), 8);
    }

    #[test]
    fn gap_clamp_lands_exactly() {
        // gap 24 from a time aligned to 32: 16, then 8
        assert_eq!(clamp_to_gap(32, 24), 16);
        assert_eq!(clamp_to_gap(32, 8), 8);
        assert_eq!(clamp_to_gap(4, 24), 4);
    }

    #[test]
    fn pow2_floor_values() {
        assert_eq!(pow2_floor(1), 1);
        assert_eq!(pow2_floor(2), 2);
        assert_eq!(pow2_floor(3), 2);
        assert_eq!(pow2_floor(1023), 512);
        assert_eq!(pow2_floor(1024), 1024);
    }
}
