use super::TimeGridError;
use num::BigRational;
use std::cmp::Ordering;
use std::fmt;

/// Default binary resolution: one tick = 2^-40 time units.
pub const DEFAULT_RESOLUTION_EXPONENT: i32 = -40;

/// A binary time resolution: one tick = 2^exponent time units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Resolution {
    exponent: i32,
}

impl Resolution {
    pub fn new(exponent: i32) -> Self {
        Resolution { exponent }
    }

    pub fn exponent(&self) -> i32 {
        self.exponent
    }

    /// Length of one tick in time units (exact: a power of two).
    pub fn tick_size(&self) -> f64 {
        2f64.powi(self.exponent)
    }

    /// Exact conversion of a rational time `num/den` into ticks.
    ///
    /// Fails with `NonRepresentable` unless the time is an integer number of
    /// ticks, i.e. a dyadic rational no finer than the resolution.
    pub fn ticks_of(&self, num: i64, den: i64) -> Result<TickTime, TimeGridError> {
        assert!(den != 0, "zero denominator");
        let err = TimeGridError::NonRepresentable {
            num,
            den,
            resolution: self.exponent,
        };
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        // ticks = num * 2^-exponent / den, required to be an exact integer
        let mut shift = -self.exponent;
        if shift < 0 {
            // coarse resolution: fold 2^|shift| into the denominator
            den = den
                .checked_shl((-shift) as u32)
                .ok_or_else(|| err.clone())?;
            shift = 0;
        }
        while shift > 0 && num % 2 == 0 {
            num /= 2;
            shift -= 1;
        }
        while shift > 0 && den % 2 == 0 {
            den /= 2;
            shift -= 1;
        }
        let num = num
            .checked_shl(shift as u32)
            .filter(|v| v >> shift == num)
            .ok_or_else(|| err.clone())?;
        if num % den != 0 {
            return Err(err);
        }
        Ok(TickTime::new(num / den, *self))
    }

    /// Exact conversion of an `f64` that must be dyadic at this resolution.
    pub fn ticks_of_f64(&self, t: f64) -> Result<TickTime, TimeGridError> {
        let scaled = t / self.tick_size();
        if !scaled.is_finite() || scaled.fract() != 0.0 || scaled.abs() >= 2f64.powi(62) {
            return Err(TimeGridError::NonRepresentable {
                num: 0,
                den: 0,
                resolution: self.exponent,
            });
        }
        Ok(TickTime::new(scaled as i64, *self))
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::new(DEFAULT_RESOLUTION_EXPONENT)
    }
}

/// An exact dyadic time: `ticks` multiples of 2^resolution_exponent.
///
/// Comparison between values at different resolutions rescales the coarser
/// operand exactly, so distinct dyadic times never compare equal.
#[derive(Clone, Copy, Debug)]
pub struct TickTime {
    ticks: i64,
    resolution: Resolution,
}

impl TickTime {
    pub fn new(ticks: i64, resolution: Resolution) -> Self {
        TickTime { ticks, resolution }
    }

    pub fn ticks(&self) -> i64 {
        self.ticks
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn resolution_exponent(&self) -> i32 {
        self.resolution.exponent
    }

    /// Time in floating-point units (exact while |ticks| < 2^53).
    pub fn to_f64(&self) -> f64 {
        self.ticks as f64 * self.resolution.tick_size()
    }

    /// Time as an exact rational number of time units.
    pub fn to_rational(&self) -> BigRational {
        use num::BigInt;
        let e = self.resolution.exponent;
        if e >= 0 {
            BigRational::from(BigInt::from(self.ticks) << e as usize)
        } else {
            BigRational::new(BigInt::from(self.ticks), BigInt::from(1) << (-e) as usize)
        }
    }

    /// Both tick counts rescaled to the finer of the two resolutions.
    fn aligned(&self, other: &TickTime) -> (i128, i128) {
        let ea = self.resolution.exponent;
        let eb = other.resolution.exponent;
        let fine = ea.min(eb);
        let a = (self.ticks as i128) << (ea - fine) as u32;
        let b = (other.ticks as i128) << (eb - fine) as u32;
        (a, b)
    }
}

impl PartialEq for TickTime {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a == b
    }
}

impl Eq for TickTime {}

impl PartialOrd for TickTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TickTime {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for TickTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.ticks, self.resolution.exponent)
    }
}
