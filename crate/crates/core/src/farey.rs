//! Slopes on a torus boundary and the Farey tessellation.
//!
//! A slope `p/q` corresponds to the primitive column vector `(q, p)`: the
//! first coordinate is the section direction, the second the fiber direction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cfrac::{GluingData, Nce};
use crate::error::{domain, Error, Result};
use crate::rational::{parse_big_int, Rational};

/// A reduced slope `p/q` with `q >= 0`; infinity is `1/0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// The slope of the vector `(q, p)`, i.e. `p/q`. The zero vector has no slope.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(domain("the zero vector has no slope"));
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn infinity() -> Self {
        Slope { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Slope { p: n.into(), q: BigInt::one() }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Slope { p: r.numer().clone(), q: r.denom().clone() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    /// The finite value of the slope, `None` for infinity.
    pub fn to_rational(&self) -> Option<Rational> {
        (!self.is_infinite()).then(|| Rational::new(self.p.clone(), self.q.clone()).unwrap())
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.q.is_one() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `inf`, `p`, or `p/q`; `q` may be zero (`1/0`, `-3/0` are infinity).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, msg: format!("invalid slope: {s:?}") };
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Slope::infinity());
        }
        let (p, q) = match s.split_once('/') {
            Some((p, q)) if !q.starts_with(['-', '+']) => (p, q),
            Some(_) => return Err(bad()),
            None => (s, "1"),
        };
        let p = parse_big_int(p).ok_or_else(bad)?;
        let q = parse_big_int(q).ok_or_else(bad)?;
        Slope::new(p, q).map_err(|_| bad())
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn det(s: &Slope, t: &Slope) -> BigInt {
    &s.p * &t.q - &t.p * &s.q
}

/// Two slopes span an edge of the Farey tessellation.
pub fn farey_adjacent(s: &Slope, t: &Slope) -> bool {
    det(s, t).abs().is_one()
}

/// The Farey vertex adjacent to `s1` that is closest to `s0` on the arc from
/// `s0` to `s1`.
///
/// Conjugate by an `SL(2, Z)` map `g` sending `s1` to infinity; the neighbours
/// of infinity are the integers and the closest one to `g(s0)` on the chosen
/// side is `floor(g(s0))`. Pull that integer back by `g⁻¹`.
pub fn bypass_successor(s0: &Slope, s1: &Slope) -> Result<Slope> {
    if s0 == s1 {
        return Err(domain(format!("bypass successor needs distinct slopes, got {s0} twice")));
    }
    let (p, q) = (&s1.p, &s1.q);
    // u*q + v*p = 1; g = [[p, -q], [u, v]] acting on (q, p) vectors
    let eg = q.extended_gcd(p);
    let (u, v) = (&eg.x * &eg.gcd, &eg.y * &eg.gcd);
    let den = p * &s0.q - q * &s0.p;
    let num = &u * &s0.q + &v * &s0.p;
    let image = Rational::new(num, den).expect("s0 != s1");
    let n = image.floor();
    // g⁻¹ = [[v, q], [-u, p]] applied to (1, n)
    Slope::new(p * &n - &u, q * &n + &v)
}

/// Value of the negative continued fraction `[b0, ..., bm]` with arbitrary
/// integer entries, as a slope so that vanishing partial denominators give
/// infinity instead of failing.
pub fn eval_slope(entries: &[BigInt]) -> Slope {
    // projective fold from the right, starting at infinity
    let (mut num, mut den) = (BigInt::one(), BigInt::zero());
    for b in entries.iter().rev() {
        let next = -(b * &num) - &den;
        den = num;
        num = next;
    }
    Slope::new(num, den).expect("unimodular fold never yields the zero vector")
}

/// One layer `N_j` of the solid torus between the slope `-1` torus and the
/// boundary torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub index: usize,
    pub outer: Slope,
    pub inner: Slope,
    /// Boundary slopes of the basic slices in this layer, from `outer` to
    /// `inner`; consecutive entries are Farey-adjacent.
    pub path: Vec<Slope>,
    /// `a_j = 2` for `j >= 1`: the layer is an invariant neighbourhood of a torus.
    pub trivial: bool,
}

impl Layer {
    pub fn basic_slices(&self) -> usize {
        self.path.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSlopes {
    pub u_slope: Slope,
    pub layers: Vec<Layer>,
}

/// Layer decomposition for the expansion `[a0, ..., ak]` of `-1/r`.
///
/// Layer `j` has outer slope `[ak, ..., a_{j+1}, a_j - 1]` (for `j = 0` the
/// boundary slope `[ak, ..., a0]`) and inner slope `[ak, ..., a_{j+1} - 1]`,
/// read as `-1` when nothing is left. Its basic slices have slopes
/// `[ak, ..., a_{j+1}, t]` for `t` running down to `1`.
pub fn leg_layer_slopes(c: &Nce) -> LayerSlopes {
    let a = c.coefficients();
    let k = c.last_index();
    let one = BigInt::one();
    let mut layers = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut prefix: Vec<BigInt> = a[j + 1..].iter().rev().cloned().collect();
        let top = if j == 0 { a[0].clone() } else { &a[j] - &one };
        let mut path = Vec::new();
        let mut t = top;
        while t >= one {
            prefix.push(t.clone());
            path.push(eval_slope(&prefix));
            prefix.pop();
            t -= &one;
        }
        layers.push(Layer {
            index: j,
            outer: path[0].clone(),
            inner: path[path.len() - 1].clone(),
            path,
            trivial: j > 0 && a[j] == BigInt::from(2),
        });
    }
    LayerSlopes { u_slope: eval_slope(c.reversed().coefficients()), layers }
}

/// Image of a slope under the gluing matrix, or its inverse.
pub fn slope_transform(g: &GluingData, s: &Slope, inverse: bool) -> Slope {
    let [[m00, m01], [m10, m11]] = if inverse {
        // inverse of a determinant-one matrix [[a, b], [c, d]] is [[d, -b], [-c, a]]
        [
            [-&g.beta_prime, -&g.alpha_prime],
            [g.beta.clone(), g.alpha.clone()],
        ]
    } else {
        g.matrix()
    };
    let x = &m00 * &s.q + &m01 * &s.p;
    let y = &m10 * &s.q + &m11 * &s.p;
    Slope::new(y, x).expect("invertible map")
}
