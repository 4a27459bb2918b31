//! Scalar abstraction shared by the double and extended-precision paths.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Unit roundoff of the representation.
    const EPSILON: f64;
    /// Half-width of the tanh-sinh abscissa range worth sampling.
    const TANH_SINH_LIMIT: f64;

    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn pi() -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn atan(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self^e` for positive `self`.
    fn pow(&self, e: &Self) -> Self {
        (self.ln() * e.clone()).exp()
    }
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;
    const TANH_SINH_LIMIT: f64 = 5.0;

    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn atan(&self) -> Self {
        f64::atan(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn pow(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
}

/// Working precision of [`Extended`] in bits.
pub const EXTENDED_BITS: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A 192-bit binary float.
#[derive(Clone)]
pub struct Extended(BigFloat);

impl Extended {
    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    /// Decimal rendering with all working digits.
    pub fn to_decimal(&self) -> String {
        with_consts(|cc| self.0.format(astro_float::Radix::Dec, RM, cc)).unwrap_or_else(|e| format!("{e:?}"))
    }

    pub fn parse(s: &str) -> Extended {
        Extended(with_consts(|cc| BigFloat::parse(s, astro_float::Radix::Dec, EXTENDED_BITS, RM, cc)))
    }
}

impl fmt::Debug for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl PartialEq for Extended {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident) => {
        impl $trait for Extended {
            type Output = Extended;
            fn $method(self, rhs: Extended) -> Extended {
                Extended(self.0.$method(&rhs.0, EXTENDED_BITS, RM))
            }
        }
    };
}

binary_op!(Add, add);
binary_op!(Sub, sub);
binary_op!(Mul, mul);
binary_op!(Div, div);

impl Neg for Extended {
    type Output = Extended;
    fn neg(self) -> Extended {
        Extended(self.0.neg())
    }
}

impl Real for Extended {
    const EPSILON: f64 = 1.59e-58;
    const TANH_SINH_LIMIT: f64 = 6.0;

    fn from_f64(v: f64) -> Self {
        Extended(BigFloat::from_f64(v, EXTENDED_BITS))
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        let (words, _, sign, exponent, _) = self.0.as_raw_parts().expect("finite value");
        // mantissa is normalised with its top bit set: value = 0.m * 2^exponent
        let top = *words.last().expect("non-empty mantissa");
        let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
        let fraction = (top as f64 + next as f64 / 2f64.powi(64)) / 2f64.powi(64);
        // scale in two halves so the factor itself never leaves the normal range
        let half = exponent / 2;
        let magnitude = fraction * 2f64.powi(half) * 2f64.powi(exponent - half);
        if sign == Sign::Neg {
            -magnitude
        } else {
            magnitude
        }
    }

    fn pi() -> Self {
        Extended(with_consts(|cc| cc.pi(EXTENDED_BITS, RM)))
    }

    fn sqrt(&self) -> Self {
        Extended(self.0.sqrt(EXTENDED_BITS, RM))
    }

    fn exp(&self) -> Self {
        Extended(with_consts(|cc| self.0.exp(EXTENDED_BITS, RM, cc)))
    }

    fn ln(&self) -> Self {
        Extended(with_consts(|cc| self.0.ln(EXTENDED_BITS, RM, cc)))
    }

    fn atan(&self) -> Self {
        Extended(with_consts(|cc| self.0.atan(EXTENDED_BITS, RM, cc)))
    }

    fn sinh(&self) -> Self {
        Extended(with_consts(|cc| self.0.sinh(EXTENDED_BITS, RM, cc)))
    }

    fn cosh(&self) -> Self {
        Extended(with_consts(|cc| self.0.cosh(EXTENDED_BITS, RM, cc)))
    }
}
