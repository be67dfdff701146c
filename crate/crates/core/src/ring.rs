//! Value carriers: commutative rings with unity.
//!
//! Sections assign carrier elements to points. Four carriers are built in:
//! machine integers, rationals, floats with an equality tolerance, and the
//! prime field `F_p`. The carrier object owns whatever the element type
//! cannot (the tolerance, the modulus) and performs all arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use rand::{Rng, RngCore};
use thiserror::Error;

/// Exact rational numbers over machine integers.
pub type Rat = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must fit in 32 bits so products cannot overflow)")]
    ModulusTooLarge(u64),
}

/// A commutative ring with unity, presented as a carrier object.
///
/// Equality goes through the carrier so that inexact carriers can compare up
/// to a tolerance; exact carriers use plain equality.
pub trait Ring: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn eq_elem(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// Renders an element for traces and tables.
    fn render(&self, a: &Self::Elem) -> String {
        a.to_string()
    }

    /// A random element, for sampled checks.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// All elements, for finite carriers; `None` when infinite.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// A ring whose elements carry a total order, enough for `min`-style
/// recurrences.
pub trait OrderedRing: Ring {
    fn cmp(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    fn min(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        if self.cmp(&b, &a) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

/// The ring of machine integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn neg(&self, a: &i64) -> i64 {
        -a
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a * b
    }
    fn sample(&self, rng: &mut dyn RngCore) -> i64 {
        rng.gen_range(-1000..=1000)
    }
}

impl OrderedRing for Integers {
    fn cmp(&self, a: &i64, b: &i64) -> Ordering {
        a.cmp(b)
    }
}

/// The field of rationals with machine-integer numerator and denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Ratio::new(0, 1)
    }
    fn one(&self) -> Rat {
        Ratio::new(1, 1)
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn render(&self, a: &Rat) -> String {
        if *a.denom() == 1 {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Rat {
        Ratio::new(rng.gen_range(-40..=40), rng.gen_range(1..=12))
    }
}

impl OrderedRing for Rationals {
    fn cmp(&self, a: &Rat, b: &Rat) -> Ordering {
        a.cmp(b)
    }
}

/// Floats compared with an absolute tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reals {
    pub tolerance: f64,
}

impl Default for Reals {
    fn default() -> Self {
        Reals { tolerance: 1e-9 }
    }
}

impl Ring for Reals {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn eq_elem(&self, a: &f64, b: &f64) -> bool {
        (a - b).abs() <= self.tolerance
    }
    fn render(&self, a: &f64) -> String {
        render_significant(*a, 6)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        rng.gen_range(-100.0..=100.0)
    }
}

impl OrderedRing for Reals {
    fn cmp(&self, a: &f64, b: &f64) -> Ordering {
        a.partial_cmp(b).expect("non-finite value in ordered comparison")
    }
}

/// Renders `x` with `sig` significant digits, trailing zeros trimmed.
fn render_significant(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { format!("{x}") };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let trimmed = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        &s
    };
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

/// The prime field `F_p`, elements reduced to `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if p >= 1 << 32 {
            return Err(RingError::ModulusTooLarge(p));
        }
        if is_prime(p) {
            Ok(PrimeField { modulus: p })
        } else {
            Err(RingError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, a: u64) -> u64 {
        a % self.modulus
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.modulus;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = self.reduce(a);
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.modulus - 2))
        }
    }

    /// `a / b`; panics if `b` is zero.
    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(&a, &self.inv(b).expect("division by zero in F_p"))
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a % self.modulus * (b % self.modulus) % self.modulus
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.modulus)
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.modulus).collect())
    }
}
