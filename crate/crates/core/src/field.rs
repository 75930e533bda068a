//! Scalar fields: exact rationals and small prime fields.

use alloc::format;
use alloc::string::String;
use core::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub trait Field: Clone + PartialEq + Eq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Characteristic, 0 for the rationals.
    fn characteristic() -> u64;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// A field with finitely many elements, listed in a fixed order starting with zero.
pub trait FiniteField: Field {
    fn elements() -> alloc::vec::Vec<Self>;
}

/// Exact rational scalar.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Parses `"a"` or `"a/b"`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidInput(format!("bad rational {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q(BigRational::new(n, d)))
    }

    /// Canonical `"num/den"` form, with the denominator omitted when it is 1.
    pub fn to_canonical(&self) -> String {
        if self.0.denom().is_one() {
            format!("{}", self.0.numer())
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl Field for Q {
    fn zero() -> Self {
        Q(BigRational::zero())
    }
    fn one() -> Self {
        Q(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    // integer fast paths skip the gcd normalisation, which dominates elimination
    fn add(&self, other: &Self) -> Self {
        if self.0.is_integer() && other.0.is_integer() {
            return Q(BigRational::from_integer(self.0.numer() + other.0.numer()));
        }
        Q(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        if self.0.is_integer() && other.0.is_integer() {
            return Q(BigRational::from_integer(self.0.numer() - other.0.numer()));
        }
        Q(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.0.is_zero() || other.0.is_zero() {
            return Q::zero();
        }
        if self.0.is_integer() && other.0.is_integer() {
            return Q(BigRational::from_integer(self.0.numer() * other.0.numer()));
        }
        Q(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Q(-&self.0)
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Q(self.0.recip())
    }
    fn from_i64(v: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(v)))
    }
    fn characteristic() -> u64 {
        0
    }
}

/// The prime field with `P` elements. `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// Reduces a rational whose denominator is prime to `P`.
    pub fn from_rational(q: &Q) -> Result<Self, Error> {
        let p = BigInt::from(P);
        let num = q.numer() % &p;
        let den = q.denom() % &p;
        if den.is_zero() {
            return Err(Error::InvalidInput(format!("{q} is not defined modulo {P}")));
        }
        let to_i64 = |b: BigInt| -> i64 {
            let (sign, digits) = b.to_u64_digits();
            let v = digits.first().copied().unwrap_or(0) as i64;
            if sign == num_bigint::Sign::Minus {
                -v
            } else {
                v
            }
        };
        Ok(Self::new(to_i64(num)).mul(&Self::new(to_i64(den)).inv()))
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 + other.0 as u64) % P as u64) as u32)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 + P as u64 - other.0 as u64) % P as u64) as u32)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 * other.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        // Fermat: a^(P-2)
        let mut base = self.0 as u64;
        let mut exp = P as u64 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Fp(acc as u32)
    }
    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }
    fn characteristic() -> u64 {
        P as u64
    }
}

impl<const P: u32> FiniteField for Fp<P> {
    fn elements() -> alloc::vec::Vec<Self> {
        (0..P).map(Fp).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let q = Q::parse("6/-4").unwrap();
        assert_eq!(q.to_canonical(), "-3/2");
        assert_eq!(Q::parse("7").unwrap().to_canonical(), "7");
        assert!(Q::parse("1/0").is_err());
        assert!(Q::parse("x").is_err());
    }

    #[test]
    fn prime_field_inverse() {
        for a in 1..7 {
            let x = Fp::<7>::new(a);
            assert!(x.mul(&x.inv()).is_one());
        }
        assert_eq!(Fp::<2>::new(-1), Fp::<2>::new(1));
    }

    #[test]
    fn reduce_rational_mod_p() {
        let q = Q::new(1, 2);
        assert_eq!(Fp::<3>::from_rational(&q).unwrap(), Fp::<3>::new(2));
        assert!(Fp::<2>::from_rational(&q).is_err());
        assert_eq!(Fp::<5>::from_rational(&Q::new(-3, 1)).unwrap(), Fp::<5>::new(2));
    }
}
