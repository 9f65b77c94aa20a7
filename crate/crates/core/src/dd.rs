//! Double-double scalar built on `twofloat::TwoFloat`.
//!
//! `TwoFloat / TwoFloat` and `TwoFloat::recip` in twofloat 0.8 form the
//! remainder `1 - b.hi * (1 / b.hi)` without a fused multiply-add, so the
//! quotient is only correct to `f64` precision. `DoubleDouble` forwards every
//! operation to `TwoFloat` except division, which is redone from the exact
//! `TwoFloat * f64` product and subtraction, and `exp`/`ln`, whose twofloat
//! versions carry errors near `1e-14`.

use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Float, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble(pub TwoFloat);

impl DoubleDouble {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }

    fn quotient(a: TwoFloat, b: TwoFloat) -> TwoFloat {
        let bh = b.hi();
        if bh == 0.0 || !bh.is_finite() || !a.hi().is_finite() {
            return <TwoFloat as From<f64>>::from(a.hi() / bh);
        }
        let q1 = a.hi() / bh;
        if !q1.is_finite() {
            return <TwoFloat as From<f64>>::from(q1);
        }
        let r = a - b * q1;
        let q2 = r.hi() / bh;
        let r = r - b * q2;
        let q3 = r.hi() / bh;
        TwoFloat::new_add(q1, q2) + q3
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.0.hi(), self.0.lo())
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        Self(<TwoFloat as From<f64>>::from(v))
    }
}

impl From<TwoFloat> for DoubleDouble {
    fn from(v: TwoFloat) -> Self {
        Self(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident) => {
        impl $tr for DoubleDouble {
            type Output = Self;
            #[inline]
            fn $f(self, rhs: Self) -> Self {
                Self(self.0.$f(rhs.0))
            }
        }
        impl $atr for DoubleDouble {
            #[inline]
            fn $af(&mut self, rhs: Self) {
                *self = (*self).$f(rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        Self(Self::quotient(self.0, rhs.0))
    }
}

impl DivAssign for DoubleDouble {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        self - (self / rhs).trunc() * rhs
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self(<TwoFloat as From<f64>>::from(0.0))
    }

    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self(<TwoFloat as From<f64>>::from(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(Self)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    fn to_f64(&self) -> Option<f64> {
        Some(self.0.hi() + self.0.lo())
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Self(<TwoFloat as From<_>>::from(n)))
    }

    fn from_u64(n: u64) -> Option<Self> {
        Some(Self(<TwoFloat as From<_>>::from(n)))
    }

    fn from_f64(v: f64) -> Option<Self> {
        Some(<Self as From<f64>>::from(v))
    }
}

impl NumCast for DoubleDouble {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        n.to_f64().map(<Self as From<f64>>::from)
    }
}

macro_rules! forward_unary {
    ($($f:ident),*) => {
        $(
            #[inline]
            fn $f(self) -> Self {
                Self(Float::$f(self.0))
            }
        )*
    };
}

macro_rules! forward_const {
    ($($f:ident),*) => {
        $(
            #[inline]
            fn $f() -> Self {
                Self(<TwoFloat as Float>::$f())
            }
        )*
    };
}

macro_rules! forward_pred {
    ($($f:ident),*) => {
        $(
            #[inline]
            fn $f(self) -> bool {
                Float::$f(self.0)
            }
        )*
    };
}

impl Float for DoubleDouble {
    forward_const!(nan, infinity, neg_infinity, neg_zero, min_value, min_positive_value, max_value, epsilon);
    forward_pred!(is_nan, is_infinite, is_finite, is_normal, is_sign_positive, is_sign_negative);
    forward_unary!(
        floor, ceil, round, trunc, fract, abs, signum, sqrt, cbrt, sin, cos, tan, asin, acos, atan,
        sinh, cosh, tanh, asinh, acosh, atanh
    );

    fn exp(self) -> Self {
        let x = self.hi();
        if x.is_nan() {
            return self;
        }
        if x > 709.0 {
            return Self::infinity();
        }
        if x < -745.0 {
            return Self::zero();
        }
        let k = (x / std::f64::consts::LN_2).round();
        let r = self - ln2() * <Self as From<f64>>::from(k);
        // |r / 2^10| < 3.4e-4, so 11 Taylor terms reach 1e-33 before squaring.
        let s = r * <Self as From<f64>>::from(1.0 / 1024.0);
        // u = e^s - 1 through the squarings keeps the relative error flat.
        let mut term = s;
        let mut u = s;
        for j in 2..=11 {
            term = term * s / <Self as From<f64>>::from(j as f64);
            u += term;
        }
        for _ in 0..10 {
            u = u * (<Self as From<f64>>::from(2.0) + u);
        }
        let sum = Self::one() + u;
        let hi = (k as i32).clamp(-1074, 1023);
        let scaled = sum * <Self as From<f64>>::from(2f64.powi(hi));
        let rest = k as i32 - hi;
        if rest == 0 {
            scaled
        } else {
            scaled * <Self as From<f64>>::from(2f64.powi(rest))
        }
    }

    fn ln(self) -> Self {
        let x = self.hi();
        if !(x > 0.0) || !x.is_finite() {
            return <Self as From<f64>>::from(x.ln());
        }
        let y = <Self as From<f64>>::from(x.ln());
        y + self * (-y).exp() - Self::one()
    }

    fn exp2(self) -> Self {
        (self * ln2()).exp()
    }

    fn log2(self) -> Self {
        self.ln() / ln2()
    }

    fn log10(self) -> Self {
        self.ln() / <Self as From<f64>>::from(10.0).ln()
    }

    fn exp_m1(self) -> Self {
        if self.hi().abs() < 1e-5 {
            let mut term = self;
            let mut sum = self;
            for j in 2..=8 {
                term = term * self / <Self as From<f64>>::from(j as f64);
                sum += term;
            }
            sum
        } else {
            self.exp() - Self::one()
        }
    }

    fn ln_1p(self) -> Self {
        (Self::one() + self).ln()
    }

    fn classify(self) -> FpCategory {
        Float::classify(self.0)
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn powi(self, n: i32) -> Self {
        if n < 0 {
            Self::one() / Self(Float::powi(self.0, n.unsigned_abs() as i32))
        } else {
            Self(Float::powi(self.0, n))
        }
    }

    fn powf(self, n: Self) -> Self {
        (n * self.ln()).exp()
    }

    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }

    fn max(self, other: Self) -> Self {
        Self(Float::max(self.0, other.0))
    }

    fn min(self, other: Self) -> Self {
        Self(Float::min(self.0, other.0))
    }

    #[allow(deprecated)]
    fn abs_sub(self, other: Self) -> Self {
        if self > other {
            self - other
        } else {
            Self::zero()
        }
    }

    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }

    fn atan2(self, other: Self) -> Self {
        Self(Float::atan2(self.0, other.0))
    }

    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = Float::sin_cos(self.0);
        (Self(s), Self(c))
    }

    fn integer_decode(self) -> (u64, i16, i8) {
        Float::integer_decode(self.0)
    }
}

fn ln2() -> DoubleDouble {
    DoubleDouble(TwoFloat::new_add(std::f64::consts::LN_2, 2.3190468138462996e-17))
}
