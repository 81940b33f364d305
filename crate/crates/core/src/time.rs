//! Integer-microsecond durations.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};

use serde::{Deserialize, Serialize};

/// A duration or instant in whole microseconds.
///
/// All timing arithmetic happens in this unit so that totals are exact sums
/// of their parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Micros(pub i64);

impl Micros {
    pub const ZERO: Micros = Micros(0);

    /// Rounds a millisecond quantity to the nearest microsecond.
    pub fn from_ms(ms: f64) -> Micros {
        Micros((ms * 1000.0).round() as i64)
    }

    pub fn as_ms(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn as_secs(self) -> f64 {
        self.0 as f64 / 1_000_000.0
    }

    /// Milliseconds with exactly three decimals, computed from the integer value.
    pub fn ms_string(self) -> String {
        fixed3(self.0)
    }

    /// Seconds with exactly three decimals (rounded half away from zero).
    pub fn secs_string(self) -> String {
        let ms = if self.0 >= 0 {
            (self.0 + 500) / 1000
        } else {
            (self.0 - 500) / 1000
        };
        fixed3(ms)
    }
}

fn fixed3(thousandths: i64) -> String {
    let sign = if thousandths < 0 { "-" } else { "" };
    let v = thousandths.unsigned_abs();
    format!("{sign}{}.{:03}", v / 1000, v % 1000)
}

impl fmt::Display for Micros {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ms", self.ms_string())
    }
}

impl Add for Micros {
    type Output = Micros;
    fn add(self, rhs: Micros) -> Micros {
        Micros(self.0 + rhs.0)
    }
}

impl AddAssign for Micros {
    fn add_assign(&mut self, rhs: Micros) {
        self.0 += rhs.0;
    }
}

impl Sub for Micros {
    type Output = Micros;
    fn sub(self, rhs: Micros) -> Micros {
        Micros(self.0 - rhs.0)
    }
}

impl Mul<i64> for Micros {
    type Output = Micros;
    fn mul(self, rhs: i64) -> Micros {
        Micros(self.0 * rhs)
    }
}

impl Sum for Micros {
    fn sum<I: Iterator<Item = Micros>>(iter: I) -> Micros {
        iter.fold(Micros::ZERO, Add::add)
    }
}
