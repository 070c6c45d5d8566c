//! Validated model of `M(-1; r1, r2, r3)` with `r1 >= r2 >= 1/2`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::cfrac::{eval_nce, gluing_data, nce, GluingData, Nce};
use crate::error::{domain, Error, Result};
use crate::farey::{bypass_successor, Slope};
use crate::rational::Rational;

/// Invariants of one singular fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegData {
    pub gluing: GluingData,
    /// Expansion of `-1/r`.
    pub expansion: Nce,
    /// Number of basic slices in layer `j`: `a0 - 1` for `j = 0`, `aj - 2` after.
    #[serde(with = "crate::serde_big::bigint_vec")]
    pub layer_bounds: Vec<BigInt>,
}

impl LegData {
    /// Leg with coefficient `r`; `first` selects `beta/alpha = r - 1`.
    pub fn new(r: &Rational, first: bool) -> Result<Self> {
        let expansion = nce(&-r.recip().ok_or_else(|| domain("zero Seifert coefficient"))?)?;
        // beta/alpha = r - 1 on the first leg, r on the others
        let beta = if first { r.numer() - r.denom() } else { r.numer().clone() };
        let gluing = gluing_data(r.denom(), &beta)?;
        let two = BigInt::from(2);
        let layer_bounds = expansion
            .coefficients()
            .iter()
            .enumerate()
            .map(|(j, a)| if j == 0 { a - BigInt::one() } else { a - &two })
            .collect();
        Ok(LegData { gluing, expansion, layer_bounds })
    }

    /// `a_j` with the convention `a_j = 2` past the end.
    pub fn a(&self, j: usize) -> BigInt {
        self.expansion.a(j)
    }

    /// `k`, the index of the last expansion coefficient.
    pub fn k(&self) -> usize {
        self.expansion.last_index()
    }

    /// Slope of the boundary of the neighbourhood U: `-alpha/alpha'`.
    pub fn u_slope(&self) -> Slope {
        Slope::new(-&self.gluing.alpha, self.gluing.alpha_prime.clone()).unwrap()
    }

    /// `(-beta + beta') / (alpha - alpha')`, the slope reached from the `-1`
    /// torus in the complement's basis.
    pub fn inner_torus_slope(&self) -> Rational {
        let g = &self.gluing;
        Rational::new(&g.beta_prime - &g.beta, &g.alpha - &g.alpha_prime).unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeifertData {
    #[serde(with = "crate::serde_big::bigint")]
    pub e0: BigInt,
    pub r: [Rational; 3],
    pub legs: [LegData; 3],
    /// The input coefficients were not in decreasing order and have been sorted.
    pub reordered: bool,
}

impl SeifertData {
    pub fn leg(&self, i: usize) -> &LegData {
        &self.legs[i]
    }

    /// `M(-1; 1/2, 1/2, 1/p)`.
    pub fn mp(p: u64) -> Result<Self> {
        let half = Rational::new(1, 2)?;
        parse_seifert(&BigInt::from(-1), &half, &half, &Rational::new(1, p)?)
    }

    pub fn label(&self) -> String {
        format!("M({}; {}, {}, {})", self.e0, self.r[0], self.r[1], self.r[2])
    }
}

pub fn parse_seifert(e0: &BigInt, r1: &Rational, r2: &Rational, r3: &Rational) -> Result<SeifertData> {
    if *e0 != BigInt::from(-1) {
        return Err(Error::Unsupported(format!(
            "e0 = {e0}: only e0 = -1 is classified here (e0 >= 0 and e0 <= -2 are covered by other classifications)"
        )));
    }
    let (zero, one, half) = (Rational::zero(), Rational::one(), Rational::new(1, 2)?);
    let mut failed = Vec::new();
    for (i, r) in [r1, r2, r3].iter().enumerate() {
        if **r <= zero || **r >= one {
            failed.push(format!("r{} = {r} is not in (0, 1)", i + 1));
        }
    }
    if !failed.is_empty() {
        return Err(Error::Validation(failed));
    }
    let mut r = [r1.clone(), r2.clone(), r3.clone()];
    let reordered = !(r[0] >= r[1] && r[1] >= r[2]);
    r.sort_by(|a, b| b.cmp(a));
    if r[1] < half {
        failed.push(format!("r2 = {} is below 1/2 (need r1 >= r2 >= 1/2)", r[1]));
        return Err(Error::Validation(failed));
    }
    let legs = [LegData::new(&r[0], true)?, LegData::new(&r[1], false)?, LegData::new(&r[2], false)?];
    for (i, (leg, ri)) in legs.iter().zip(&r).enumerate() {
        let back = eval_nce(&leg.expansion);
        if back != -ri.recip().unwrap() {
            return Err(Error::Invariant(format!("leg {} expansion does not evaluate to -1/r", i + 1)));
        }
    }
    Ok(SeifertData { e0: e0.clone(), r, legs, reordered })
}

/// Leg `i` in `1..=3`.
pub fn leg_params(m: &SeifertData, i: usize) -> Result<&LegData> {
    if !(1..=3).contains(&i) {
        return Err(domain(format!("leg index {i} is not in 1..=3")));
    }
    let leg = &m.legs[i - 1];
    if leg.u_slope() != crate::farey::eval_slope(leg.expansion.reversed().coefficients()) {
        return Err(Error::Invariant(format!("leg {i}: -alpha/alpha' differs from the reversed expansion")));
    }
    Ok(leg)
}

/// Boundary slopes of the complements of the `Z_i` (the solid tori with the
/// outermost basic slice removed).
pub fn z_slopes(m: &SeifertData) -> [Slope; 3] {
    let inf = Slope::infinity();
    m.legs.each_ref().map(|leg| {
        let s0 = Slope::from_rational(&leg.inner_torus_slope());
        bypass_successor(&s0, &inf).expect("inner torus slope is finite")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn m(r1: &str, r2: &str, r3: &str) -> Result<SeifertData> {
        parse_seifert(&BigInt::from(-1), &q(r1), &q(r2), &q(r3))
    }

    #[test]
    fn mp_family_expansions() {
        let mp = m("1/2", "1/2", "1/2").unwrap();
        for leg in &mp.legs {
            assert_eq!(leg.expansion, Nce::from_slice(&[2]).unwrap());
        }
    }

    #[test]
    fn generic_expansions() {
        let x = m("3/4", "2/3", "2/5").unwrap();
        let e: Vec<_> = x.legs.iter().map(|l| l.expansion.clone()).collect();
        assert_eq!(
            e,
            vec![
                Nce::from_slice(&[2, 2, 2]).unwrap(),
                Nce::from_slice(&[2, 2]).unwrap(),
                Nce::from_slice(&[3, 2]).unwrap()
            ]
        );
        assert!(!x.reordered);
    }

    #[test]
    fn rejects_small_r2() {
        assert!(matches!(m("1/2", "1/3", "1/4"), Err(Error::Validation(_))));
        assert!(matches!(m("1", "1/2", "1/4"), Err(Error::Validation(_))));
        assert!(matches!(m("1/2", "1/2", "0"), Err(Error::Validation(_))));
    }

    #[test]
    fn rejects_other_e0() {
        let r = parse_seifert(&BigInt::from(0), &q("1/2"), &q("1/2"), &q("1/2"));
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn sorts_with_flag() {
        let x = m("1/3", "3/4", "1/2").unwrap();
        assert!(x.reordered);
        assert_eq!(x.r, [q("3/4"), q("1/2"), q("1/3")]);
    }

    #[test]
    fn leg_examples() {
        let x = m("3/4", "1/2", "2/5").unwrap();
        let g = &leg_params(&x, 1).unwrap().gluing;
        assert_eq!(
            (&g.alpha, &g.beta, &g.alpha_prime, &g.beta_prime),
            (&4.into(), &(-1).into(), &3.into(), &(-1).into())
        );
        let g = &leg_params(&x, 2).unwrap().gluing;
        assert_eq!(
            (&g.alpha, &g.beta, &g.alpha_prime, &g.beta_prime),
            (&2.into(), &1.into(), &1.into(), &0.into())
        );
        let l3 = leg_params(&x, 3).unwrap();
        let g = &l3.gluing;
        assert_eq!(
            (&g.alpha, &g.beta, &g.alpha_prime, &g.beta_prime),
            (&5.into(), &2.into(), &3.into(), &1.into())
        );
        assert_eq!(l3.u_slope(), "-5/3".parse().unwrap());
        assert!(leg_params(&x, 0).is_err());
        assert!(leg_params(&x, 4).is_err());
    }

    #[test]
    fn z_slope_examples() {
        let x = m("3/4", "2/3", "2/5").unwrap();
        assert_eq!(z_slopes(&x), [Slope::integer(0), Slope::integer(-1), Slope::integer(-1)]);
        assert_eq!(x.legs[2].inner_torus_slope(), q("-1/2"));
        let half = m("1/2", "1/2", "1/3").unwrap();
        assert_eq!(half.legs[0].inner_torus_slope(), q("0"));
    }

    #[test]
    fn layer_bounds() {
        let x = m("3/4", "2/3", "3/8").unwrap();
        assert_eq!(x.legs[2].layer_bounds, vec![BigInt::from(2), BigInt::from(1)]);
        assert_eq!(x.legs[0].layer_bounds, vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)]);
    }
}
