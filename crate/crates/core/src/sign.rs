use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use serde::{Deserialize, Serialize};

/// An element of the group `{+1, -1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i32", try_from = "i32")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^n`.
    pub fn from_parity(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_i32() as f64
    }
}

impl From<Sign> for i32 {
    fn from(s: Sign) -> i32 {
        s.to_i32()
    }
}

impl TryFrom<i32> for Sign {
    type Error = String;

    fn try_from(v: i32) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("{other} is not a sign")),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}
