//! Coefficient rings for cobordism morphisms.
//!
//! Three rings are supported: the integers (default), the rationals and the
//! field with two elements. Linear solving always happens over a field; the
//! integers solve over the rationals and check integrality afterwards.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingKind {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "Q")]
    Q,
    #[serde(rename = "F2")]
    F2,
}

impl RingKind {
    pub fn is_field(self) -> bool {
        !matches!(self, RingKind::Z)
    }

    pub fn name(self) -> &'static str {
        match self {
            RingKind::Z => "Z",
            RingKind::Q => "Q",
            RingKind::F2 => "F2",
        }
    }
}

impl Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(RingKind::Z),
            "Q" | "q" => Ok(RingKind::Q),
            "F2" | "f2" => Ok(RingKind::F2),
            other => Err(Error::Parse(format!("unknown ring {other:?}"))),
        }
    }
}

/// A commutative coefficient ring.
pub trait Coeff:
    Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    const KIND: RingKind;
    /// The field used when solving linear systems with these coefficients.
    type Field: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse if `self` is a unit.
    fn inv(&self) -> Option<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn is_unit(&self) -> bool {
        self.inv().is_some()
    }

    fn to_field(&self) -> Self::Field;
    /// `None` when the field element has no preimage (non-integral rational).
    fn from_field(f: &Self::Field) -> Option<Self>;

    /// Canonical string form used by the JSON formats.
    fn to_coeff_string(&self) -> String {
        self.to_string()
    }
    fn parse_coeff(s: &str) -> Result<Self>;
}

/// A coefficient ring in which every nonzero element is invertible.
pub trait Field: Coeff {
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv().expect("division by zero"))
    }
}

/// Integers. Overflow is treated as a bug and panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Z(pub i64);

impl Debug for Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coeff for Z {
    const KIND: RingKind = RingKind::Z;
    type Field = Q;

    fn zero() -> Self {
        Z(0)
    }
    fn one() -> Self {
        Z(1)
    }
    fn from_i64(n: i64) -> Self {
        Z(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Z(self.0.checked_add(other.0).expect("integer overflow"))
    }
    fn mul(&self, other: &Self) -> Self {
        Z(self.0.checked_mul(other.0).expect("integer overflow"))
    }
    fn neg(&self) -> Self {
        Z(-self.0)
    }
    fn inv(&self) -> Option<Self> {
        match self.0 {
            1 => Some(Z(1)),
            -1 => Some(Z(-1)),
            _ => None,
        }
    }
    fn to_field(&self) -> Q {
        Q(BigRational::from_integer(BigInt::from(self.0)))
    }
    fn from_field(f: &Q) -> Option<Self> {
        if f.0.is_integer() {
            f.0.to_integer().to_i64().map(Z)
        } else {
            None
        }
    }
    fn parse_coeff(s: &str) -> Result<Self> {
        s.trim()
            .parse::<i64>()
            .map(Z)
            .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
    }
}

/// Rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(n: i64, d: i64) -> Self {
        Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

impl Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coeff for Q {
    const KIND: RingKind = RingKind::Q;
    type Field = Q;

    fn zero() -> Self {
        Q(BigRational::zero())
    }
    fn one() -> Self {
        Q(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Q(&self.0 + &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Q(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Q(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Q(self.0.recip()))
        }
    }
    fn to_field(&self) -> Q {
        self.clone()
    }
    fn from_field(f: &Q) -> Option<Self> {
        Some(f.clone())
    }
    fn parse_coeff(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigRational>()
            .map(Q)
            .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
    }
}

impl Field for Q {}

impl Q {
    pub fn abs_is_one(&self) -> bool {
        self.0.abs().is_one()
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F2(pub bool);

impl Debug for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Coeff for F2 {
    const KIND: RingKind = RingKind::F2;
    type Field = F2;

    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn from_i64(n: i64) -> Self {
        F2(n.rem_euclid(2) == 1)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, other: &Self) -> Self {
        F2(self.0 ^ other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        F2(self.0 & other.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn inv(&self) -> Option<Self> {
        self.0.then_some(*self)
    }
    fn to_field(&self) -> F2 {
        *self
    }
    fn from_field(f: &F2) -> Option<Self> {
        Some(*f)
    }
    fn parse_coeff(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(F2(false)),
            "1" => Ok(F2(true)),
            other => Err(Error::Parse(format!("bad F2 element {other:?}"))),
        }
    }
}

impl Field for F2 {}
