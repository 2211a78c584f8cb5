//! Exact positions on the circle `R/Z`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i64>;

/// A point of the circle, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Rational);

impl Angle {
    pub fn new(numer: i64, denom: i64) -> Option<Angle> {
        if denom == 0 {
            return None;
        }
        Angle::from_ratio(Ratio::new(numer, denom))
    }

    /// Accepts only values already in `[0, 1)`.
    pub fn from_ratio(r: Rational) -> Option<Angle> {
        if r >= Rational::zero() && r < Rational::one() {
            Some(Angle(r))
        } else {
            None
        }
    }

    /// Reduces any rational modulo 1.
    pub fn wrap(r: Rational) -> Angle {
        let f = r - r.floor();
        Angle(f)
    }

    pub fn zero() -> Angle {
        Angle(Rational::zero())
    }

    pub fn ratio(self) -> Rational {
        self.0
    }

    /// Length of the positive arc from `self` to `to`, in `(0, 1]`.
    /// Equal endpoints give a full turn.
    pub fn arc_to(self, to: Angle) -> Rational {
        let d = to.0 - self.0;
        if d > Rational::zero() {
            d
        } else {
            d + Rational::one()
        }
    }

    /// True when `self` lies strictly inside the positive arc `from -> to`.
    pub fn in_open_arc(self, from: Angle, to: Angle) -> bool {
        if self == from {
            return false;
        }
        from.arc_to(self) < from.arc_to(to)
    }

    pub fn shift(self, by: Rational) -> Angle {
        Angle::wrap(self.0 + by)
    }

    /// Midpoint of the positive arc `self -> to`.
    pub fn midpoint_to(self, to: Angle) -> Angle {
        self.shift(self.arc_to(to) / 2)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Angle, String> {
        let r = parse_rational(s)?;
        Angle::from_ratio(r).ok_or_else(|| format!("angle {s} is outside [0,1)"))
    }
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("malformed rational '{s}'");
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => s.trim().parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

/// Formats any rational as `p/q`, or `p` when integral.
pub fn format_rational(r: Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
