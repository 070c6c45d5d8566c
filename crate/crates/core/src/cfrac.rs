//! Negative continued fractions and the gluing data of a singular fiber.
//!
//! The expansion `[a0, a1, ..., ak]` stands for
//! `-a0 - 1/(-a1 - 1/(... - 1/(-ak)))` with every `aj >= 2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rational::Rational;

/// A negative continued fraction expansion; nonempty, all entries at least two.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nce(Vec<BigInt>);

impl Nce {
    pub fn new(coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(domain("empty continued fraction"));
        }
        if let Some(a) = coefficients.iter().find(|a| **a < BigInt::from(2)) {
            return Err(domain(format!("continued fraction coefficient {a} is below 2")));
        }
        Ok(Nce(coefficients))
    }

    pub fn from_slice(coefficients: &[i64]) -> Result<Self> {
        Nce::new(coefficients.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    /// Index of the last coefficient (`k` for `[a0, ..., ak]`).
    pub fn last_index(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient `a_j`, reading `a_j = 2` past the end of the expansion.
    pub fn a(&self, j: usize) -> BigInt {
        self.0.get(j).cloned().unwrap_or_else(|| BigInt::from(2))
    }

    pub fn reversed(&self) -> Nce {
        Nce(self.0.iter().rev().cloned().collect())
    }
}

impl Serialize for Nce {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_big::bigint_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Nce {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = crate::serde_big::bigint_vec::deserialize(d)?;
        Nce::new(v).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for Nce {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Expands `x < -1` as a negative continued fraction.
///
/// Ceiling algorithm: `a0 = ceil(-x)`; if `x + a0 = 0` we are done, otherwise
/// recurse on `-1/(x + a0)`. Since `0 < x + a0 < 1`, the next value is again
/// below `-1`, and its denominator is the numerator of `x + a0`, strictly
/// smaller than the denominator of `x`. So the loop terminates after at most
/// `denom(x)` steps.
pub fn nce(x: &Rational) -> Result<Nce> {
    if *x >= Rational::from(-1) {
        return Err(domain(format!("negative continued fraction needs x < -1, got {x}")));
    }
    let mut coefficients = Vec::new();
    let mut x = x.clone();
    loop {
        let a = (-&x).ceil();
        let rest = &x + &Rational::from_integer(a.clone());
        coefficients.push(a);
        match rest.recip() {
            None => break,
            Some(inv) => x = -inv,
        }
    }
    Nce::new(coefficients)
}

/// Exact value of an expansion.
pub fn eval_nce(c: &Nce) -> Rational {
    let mut coefficients = c.0.iter().rev();
    let last = coefficients.next().expect("nonempty expansion");
    let mut value = Rational::from_integer(-last);
    for a in coefficients {
        // value <= -1 here, so the reciprocal exists
        let inv = value.recip().expect("partial value is at most -1");
        value = Rational::from_integer(-a) - inv;
    }
    value
}

/// Gluing data `(alpha, beta, alpha', beta')` of a singular fiber with
/// `beta * alpha' - alpha * beta' = 1` and `0 < alpha' < alpha`.
///
/// The gluing matrix is `[[alpha, alpha'], [-beta, -beta']]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingData {
    #[serde(with = "crate::serde_big::bigint")]
    pub alpha: BigInt,
    #[serde(with = "crate::serde_big::bigint")]
    pub beta: BigInt,
    #[serde(with = "crate::serde_big::bigint")]
    pub alpha_prime: BigInt,
    #[serde(with = "crate::serde_big::bigint")]
    pub beta_prime: BigInt,
}

impl GluingData {
    /// `beta * alpha' - alpha * beta'`; always one for valid data.
    pub fn determinant(&self) -> BigInt {
        &self.beta * &self.alpha_prime - &self.alpha * &self.beta_prime
    }

    /// The gluing matrix as `[[alpha, alpha'], [-beta, -beta']]`.
    pub fn matrix(&self) -> [[BigInt; 2]; 2] {
        [
            [self.alpha.clone(), self.alpha_prime.clone()],
            [-&self.beta, -&self.beta_prime],
        ]
    }
}

pub fn gluing_data(alpha: &BigInt, beta: &BigInt) -> Result<GluingData> {
    if *alpha <= BigInt::one() {
        return Err(domain(format!("gluing data needs alpha >= 2, got {alpha}")));
    }
    let eg = beta.extended_gcd(alpha);
    if !eg.gcd.abs().is_one() {
        return Err(domain(format!("alpha = {alpha} and beta = {beta} are not coprime")));
    }
    // beta * x ≡ gcd (mod alpha), with gcd = ±1
    let alpha_prime = (&eg.x * &eg.gcd).mod_floor(alpha);
    debug_assert!(!alpha_prime.is_zero());
    let numerator = beta * &alpha_prime - BigInt::one();
    let (beta_prime, rem) = numerator.div_rem(alpha);
    debug_assert!(rem.is_zero());
    Ok(GluingData { alpha: alpha.clone(), beta: beta.clone(), alpha_prime, beta_prime })
}
