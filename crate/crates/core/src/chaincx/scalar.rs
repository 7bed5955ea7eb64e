use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Field elements the exact linear algebra runs over.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(x: i64) -> Self;
}

impl Scalar for BigRational {
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
}

/// Integers mod a prime P.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zp<const P: u32>(u32);

impl<const P: u32> Zp<P> {
    pub fn new(x: i64) -> Self {
        Zp(x.rem_euclid(i64::from(P)) as u32)
    }
    pub fn value(self) -> u32 {
        self.0
    }
    pub fn inv(self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        let g = i64::from(self.0).extended_gcd(&i64::from(P));
        Some(Self::new(g.x))
    }
    /// Reduction of a rational whose denominator is prime to P.
    pub fn from_rational(x: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let num = (x.numer() % &p).to_i64()?;
        let den = Self::new((x.denom() % &p).to_i64()?).inv()?;
        Some(Self::new(num) * den)
    }
}

impl<const P: u32> fmt::Debug for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {P}", self.0)
    }
}
impl<const P: u32> Zero for Zp<P> {
    fn zero() -> Self {
        Zp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}
impl<const P: u32> One for Zp<P> {
    fn one() -> Self {
        Zp(1 % P)
    }
}
impl<const P: u32> Add for Zp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Zp(((u64::from(self.0) + u64::from(o.0)) % u64::from(P)) as u32)
    }
}
impl<const P: u32> Sub for Zp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}
impl<const P: u32> Neg for Zp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Zp((P - self.0) % P)
    }
}
impl<const P: u32> Mul for Zp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Zp(((u64::from(self.0) * u64::from(o.0)) % u64::from(P)) as u32)
    }
}
impl<const P: u32> Div for Zp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("division by zero in Z/p")
    }
}
impl<const P: u32> Scalar for Zp<P> {
    fn from_i64(x: i64) -> Self {
        Self::new(x)
    }
}
