//! Adams-Bashforth coefficients for arbitrary strictly monotonic times.

use super::lagrange::lagrange_integral;
use super::{CoeffError, CoeffScalar};

/// Coefficients of one explicit Adams-Bashforth step.
///
/// `alpha[j]` multiplies the derivative recorded at the j-th most recent
/// time; the step increment is `step * sum_j alpha[j] * D_j`.  The
/// coefficients always sum to one, so constant derivatives integrate
/// exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct AbCoeffs<T> {
    pub alpha: Vec<T>,
    pub step: T,
}

impl<T: CoeffScalar> AbCoeffs<T> {
    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha_sum(&self) -> T {
        self.alpha.iter().fold(T::zero(), |acc, a| acc + a.clone())
    }
}

/// Order-k Adams-Bashforth coefficients for stepping from `past[0]` to
/// `next`, using derivative records at `past` (strictly decreasing, the
/// most recent first).
pub fn ab_coefficients<T: CoeffScalar>(past: &[T], next: &T) -> Result<AbCoeffs<T>, CoeffError> {
    if past.is_empty() || past.windows(2).any(|w| w[0] <= w[1]) || *next <= past[0] {
        return Err(CoeffError::NonMonotonicTimes);
    }
    let step = next.clone() - past[0].clone();
    let mut alpha = Vec::with_capacity(past.len());
    for j in 0..past.len() {
        let integral = lagrange_integral(&past[0], next, past, j)?;
        alpha.push(integral / step.clone());
    }
    Ok(AbCoeffs { alpha, step })
}

/// `ab_coefficients` over integer tick times.
pub fn ab_coefficients_ticks<T: CoeffScalar>(
    past_ticks: &[i64],
    next_tick: i64,
) -> Result<AbCoeffs<T>, CoeffError> {
    let past: Vec<T> = past_ticks.iter().map(|&t| T::from_int(t)).collect();
    ab_coefficients(&past, &T::from_int(next_tick))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::scalar::{rat, Rational};
    use rand::{Rng, SeedableRng};

    #[test]
    fn order_one_is_euler() {
        let c: AbCoeffs<Rational> = ab_coefficients_ticks(&[0], 5).unwrap();
        assert_eq!(c.alpha, vec![rat(1, 1)]);
        assert_eq!(c.step, rat(5, 1));
    }

    #[test]
    fn order_two_uniform() {
        let c: AbCoeffs<Rational> = ab_coefficients_ticks(&[0, -1], 1).unwrap();
        assert_eq!(c.alpha, vec![rat(3, 2), rat(-1, 2)]);
    }

    #[test]
    fn order_three_uniform() {
        let c: AbCoeffs<Rational> = ab_coefficients_ticks(&[0, -1, -2], 1).unwrap();
        assert_eq!(c.alpha, vec![rat(23, 12), rat(-4, 3), rat(5, 12)]);
    }

    #[test]
    fn order_five_uniform() {
        // classical AB5 coefficients
        let c: AbCoeffs<Rational> = ab_coefficients_ticks(&[0, -1, -2, -3, -4], 1).unwrap();
        assert_eq!(
            c.alpha,
            vec![
                rat(1901, 720),
                rat(-1387, 360),
                rat(109, 30),
                rat(-637, 360),
                rat(251, 720)
            ]
        );
    }

    #[test]
    fn coefficients_sum_to_one_on_random_times() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let k = rng.gen_range(1..8);
            let mut t = rng.gen_range(-1000..1000);
            let mut past = vec![t];
            for _ in 1..k {
                t -= rng.gen_range(1..50);
                past.push(t);
            }
            let next = past[0] + rng.gen_range(1..50);
            let c: AbCoeffs<Rational> = ab_coefficients_ticks(&past, next).unwrap();
            assert_eq!(c.alpha_sum(), rat(1, 1));
        }
    }

    #[test]
    fn non_monotonic_rejected() {
        assert_eq!(
            ab_coefficients_ticks::<Rational>(&[0, 1], 2).unwrap_err(),
            CoeffError::NonMonotonicTimes
        );
        assert_eq!(
            ab_coefficients_ticks::<Rational>(&[0, -1], 0).unwrap_err(),
            CoeffError::NonMonotonicTimes
        );
    }
}
