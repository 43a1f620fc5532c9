//! Coefficient rings: prime fields F_p and exact rationals.
//!
//! Fields are context objects; elements are plain data manipulated through
//! the context. F_p is p-local (and a complete local PID, being a field), and
//! the rationals are p-local for every p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

pub trait Field: Clone {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// None exactly on zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> usize;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    /// Every integer prime other than p is invertible here?
    fn is_p_local(&self, p: usize) -> bool {
        let c = self.characteristic();
        c == 0 || c == p
    }
    fn render(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}

/// F_p for a prime p, elements as residues in 0..p.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField, String> {
        if !crate::grp::is_prime(p as usize) {
            return Err(format!("{p} is not prime"));
        }
        Ok(PrimeField { p })
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p.
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn characteristic(&self) -> usize {
        self.p as usize
    }
    fn render(&self, a: &u64) -> String {
        format!("{a}")
    }
}

/// Exact rationals backed by arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> usize {
        0
    }
    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            format!("{}", a.numer())
        } else if a.is_negative() || !a.is_negative() {
            format!("{}/{}", a.numer(), a.denom())
        } else {
            unreachable!()
        }
    }
}
