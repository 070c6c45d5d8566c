//! Lower-bound lattices: Chern class values of Stein structures on the
//! fillings `X_{p,k,l}`, `X_{p,k}` and spin^c classes on the cobordisms out
//! of `(M_p, Xi)` and `(M_p, Xi')`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::census::{phi_branch, psi_branch, PhiBranch, PsiBranch};
use crate::error::{domain, Error, Result};
use crate::linalg::{smith_normal_form, solve_with_snf, IntMatrix, SnfResult};
use crate::seifert::SeifertData;
use crate::spinc::{d_plumbing, mp_linking_matrix, spinc_distinct, structure_classes};

fn check(name: &str, v: u64) -> Result<()> {
    if v < 2 {
        return Err(domain(format!("{name} must be at least 2, got {v}")));
    }
    Ok(())
}

/// `{-n + 2i : i = 1..n-1}`.
pub fn rot_range(n: u64) -> impl Iterator<Item = i64> + Clone {
    let n = n as i64;
    (1..n).map(move |i| -n + 2 * i)
}

/// Rotation numbers of the knot `L`: `{-p - 1 + 2i : i = 1..p}`.
pub fn z_range(p: u64) -> impl Iterator<Item = i64> + Clone {
    let p = p as i64;
    (1..=p).map(move |i| -p - 1 + 2 * i)
}

/// `|S(p, k, l)|`: distinct pairs `(x - y - A, z - x - y)`.
pub fn count_stein_classes_pkl(p: u64, k: u64, l: u64) -> Result<u64> {
    check("p", p)?;
    check("k", k)?;
    check("l", l)?;
    let mut seen = BTreeSet::new();
    for x in rot_range(k) {
        for y in rot_range(l) {
            for z in z_range(p) {
                for a in [-1, 1] {
                    seen.insert((x - y - a, z - x - y));
                }
            }
        }
    }
    Ok(seen.len() as u64)
}

/// `2(k-1)(l-1) + (p-1)(k+l-2)`.
pub fn stein_formula_pkl(p: u64, k: u64, l: u64) -> u64 {
    2 * (k - 1) * (l - 1) + (p - 1) * (k + l - 2)
}

/// Distinct values `z + A - 2x`.
pub fn count_stein_classes_pk(p: u64, k: u64) -> Result<u64> {
    check("p", p)?;
    check("k", k)?;
    let mut seen = BTreeSet::new();
    for x in rot_range(k) {
        for z in z_range(p) {
            for a in [-1, 1] {
                seen.insert(z + a - 2 * x);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// `2(k-1) + p - 1`.
pub fn stein_formula_pk(p: u64, k: u64) -> u64 {
    2 * (k - 1) + p - 1
}

/// The map `H^2(X_p, M_p) -> H^2(X)` for the eight-knot diagram: the linking
/// matrix of `M_p` on top, then one meridian row for each of `K6, K7, K8`.
pub fn phi_star(p: u64) -> Result<IntMatrix> {
    let l = mp_linking_matrix(p)?;
    let mut rows = l.to_rows();
    for col in [2, 3, 4] {
        let mut r = vec![BigInt::zero(); 5];
        r[col] = BigInt::from(-1);
        rows.push(r);
    }
    IntMatrix::from_rows(rows)
}

/// Which of the knots `K7` (parameter `l`) and `K8` (parameter `m`) are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Pklm,
    Pkm,
    Pkl,
    Pk,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Pklm, Variant::Pkm, Variant::Pkl, Variant::Pk];

    pub fn has_y(self) -> bool {
        matches!(self, Variant::Pklm | Variant::Pkl)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Variant::Pklm | Variant::Pkm)
    }

    /// Rows of [`phi_star`] kept for this variant.
    pub fn rows(self) -> Vec<usize> {
        let mut r = vec![0, 1, 2, 3, 4, 5];
        if self.has_y() {
            r.push(6);
        }
        if self.has_z() {
            r.push(7);
        }
        r
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pklm" => Ok(Variant::Pklm),
            "pkm" => Ok(Variant::Pkm),
            "pkl" => Ok(Variant::Pkl),
            "pk" => Ok(Variant::Pk),
            _ => Err(Error::Parse { line: 1, msg: format!("unknown variant {s:?}; use pklm, pkm, pkl or pk") }),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Pklm => "pklm",
            Variant::Pkm => "pkm",
            Variant::Pkl => "pkl",
            Variant::Pk => "pk",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    Xi,
    XiPrime,
}

/// Rotation numbers of `K6, K7, K8` on a diagram built on `Xi` or `Xi'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RotTuple {
    pub source: Source,
    pub x: i64,
    pub y: Option<i64>,
    pub z: Option<i64>,
}

/// Parameters `(k, l, m)` of a cobordism; `l`, `m` are ignored when absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnotParams {
    pub k: u64,
    pub l: u64,
    pub m: u64,
}

impl RotTuple {
    pub fn validate(&self, variant: Variant, params: KnotParams) -> Result<()> {
        let inr = |v: i64, n: u64| rot_range(n).any(|r| r == v);
        if !inr(self.x, params.k) {
            return Err(domain(format!("x = {} outside the range for k = {}", self.x, params.k)));
        }
        match (variant.has_y(), self.y) {
            (true, Some(y)) if inr(y, params.l) => {}
            (false, None) => {}
            _ => return Err(domain(format!("y = {:?} does not fit variant {variant} with l = {}", self.y, params.l))),
        }
        match (variant.has_z(), self.z) {
            (true, Some(z)) if inr(z, params.m) => {}
            (false, None) => {}
            _ => return Err(domain(format!("z = {:?} does not fit variant {variant} with m = {}", self.z, params.m))),
        }
        Ok(())
    }
}

/// All valid tuples, sources `Xi` first.
pub fn enumerate_tuples(variant: Variant, params: KnotParams) -> Vec<RotTuple> {
    let ys: Vec<Option<i64>> =
        if variant.has_y() { rot_range(params.l).map(Some).collect() } else { vec![None] };
    let zs: Vec<Option<i64>> =
        if variant.has_z() { rot_range(params.m).map(Some).collect() } else { vec![None] };
    let mut out = Vec::new();
    for source in [Source::Xi, Source::XiPrime] {
        for x in rot_range(params.k) {
            for &y in &ys {
                for &z in &zs {
                    out.push(RotTuple { source, x, y, z });
                }
            }
        }
    }
    out
}

/// [`phi_star`] restricted to a variant, with its Smith normal form cached.
#[derive(Debug, Clone)]
pub struct CobordismLattice {
    pub p: u64,
    pub variant: Variant,
    matrix: IntMatrix,
    snf: SnfResult,
}

impl CobordismLattice {
    pub fn new(p: u64, variant: Variant) -> Result<Self> {
        let matrix = phi_star(p)?.select_rows(&variant.rows());
        let snf = smith_normal_form(&matrix);
        Ok(CobordismLattice { p, variant, matrix, snf })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `c_1` of the surgery diagram in the dual basis of the knots present.
    pub fn c1(&self, t: &RotTuple) -> Result<Vec<BigInt>> {
        if t.y.is_some() != self.variant.has_y() || t.z.is_some() != self.variant.has_z() {
            return Err(domain(format!("tuple {t:?} does not match variant {}", self.variant)));
        }
        let s: i64 = match t.source {
            Source::Xi => 1,
            Source::XiPrime => -1,
        };
        let mut v = vec![0, 0, s, s, -s * (self.p as i64 - 1), t.x];
        v.extend(t.y);
        v.extend(t.z);
        Ok(v.into_iter().map(BigInt::from).collect())
    }

    /// Whether the integer vector lies in the image of the restricted map.
    pub fn in_image(&self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.matrix.rows() {
            return Err(domain("vector length does not match the lattice"));
        }
        Ok(solve_with_snf(&self.snf, self.matrix.cols(), v).is_some())
    }

    pub fn spinc_equal(&self, t1: &RotTuple, t2: &RotTuple) -> Result<bool> {
        let (a, b) = (self.c1(t1)?, self.c1(t2)?);
        let mut half = Vec::with_capacity(a.len());
        for (x, y) in a.iter().zip(&b) {
            let (h, r) = (x - y).div_rem(&BigInt::from(2));
            if !r.is_zero() {
                return Err(domain("Chern classes differ by an odd vector"));
            }
            half.push(h);
        }
        self.in_image(&half)
    }
}

pub fn cobordism_spinc_equal(p: u64, variant: Variant, t1: &RotTuple, t2: &RotTuple) -> Result<bool> {
    CobordismLattice::new(p, variant)?.spinc_equal(t1, t2)
}

/// The explicit equality conditions: same source and equal tuples, or
/// `Xi` against `Xi'` with `x, y` equal and `z` lower by two on the `Xi` side.
pub fn closed_form_equal(t1: &RotTuple, t2: &RotTuple) -> bool {
    if t1.source == t2.source {
        return t1 == t2;
    }
    let (a, b) = if t1.source == Source::Xi { (t1, t2) } else { (t2, t1) };
    a.x == b.x && a.y == b.y && a.z.zip(b.z).is_none_or(|(za, zb)| za == zb - 2)
}

/// Number of spin^c classes among all valid tuples, by union-find over the
/// lattice membership predicate.
pub fn count_cobordism_classes(p: u64, variant: Variant, params: KnotParams) -> Result<u64> {
    check("p", p)?;
    check("k", params.k)?;
    if variant.has_y() {
        check("l", params.l)?;
    }
    if variant.has_z() {
        check("m", params.m)?;
    }
    let lattice = CobordismLattice::new(p, variant)?;
    let tuples = enumerate_tuples(variant, params);
    let mut root: Vec<usize> = (0..tuples.len()).collect();
    fn find(root: &mut [usize], mut i: usize) -> usize {
        while root[i] != i {
            root[i] = root[root[i]];
            i = root[i];
        }
        i
    }
    for i in 0..tuples.len() {
        for j in i + 1..tuples.len() {
            if lattice.spinc_equal(&tuples[i], &tuples[j])? {
                let (a, b) = (find(&mut root, i), find(&mut root, j));
                root[a] = b;
            }
        }
    }
    Ok((0..tuples.len()).filter(|&i| find(&mut root, i) == i).count() as u64)
}

pub fn cobordism_formula(variant: Variant, params: KnotParams) -> u64 {
    let KnotParams { k, l, m } = params;
    match variant {
        Variant::Pklm => (k - 1) * (l - 1) * m,
        Variant::Pkm => (k - 1) * m,
        Variant::Pkl => (k - 1) * (l - 1),
        Variant::Pk => k - 1,
    }
}

fn small(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::Unsupported(format!("{what} = {x} is too large to enumerate")))
}

fn tails(m: &SeifertData, legs: &[usize], from: usize) -> BigUint {
    legs.iter()
        .flat_map(|&i| {
            let leg = &m.legs[i];
            (from..=leg.k()).map(move |j| leg.a(j) - 1)
        })
        .product::<BigInt>()
        .to_biguint()
        .expect("positive factors")
}

/// Lower bound on the structures built from `xi_1, xi_2` (and their
/// variants), assembled from the brute-force lattice counts.
pub fn xi_lower_bound(m: &SeifertData) -> Result<BigUint> {
    let a03 = small(&m.legs[2].a(0), "a_0^3")?;
    let a13 = m.legs[2].a(1);
    let a11 = small(&m.legs[0].a(1), "a_1^1")?;
    let a12 = small(&m.legs[1].a(1), "a_1^2")?;
    let third = (a13 - BigInt::from(1)).to_biguint().expect("positive");
    Ok(match phi_branch(m) {
        PhiBranch::R2GtHalf => {
            BigUint::from(count_stein_classes_pkl(a03, a11, a12)?) * third * tails(m, &[0, 1, 2], 2)
        }
        PhiBranch::R1GtR2EqHalf => BigUint::from(count_stein_classes_pk(a03, a11)?) * third * tails(m, &[0, 2], 2),
        PhiBranch::R1EqR2EqHalf => {
            let q = d_plumbing(a03)?;
            let [c1, c2, _] = structure_classes(a03)?;
            let distinct = if spinc_distinct(&q, &c1, &c2)? { 2u32 } else { 1 };
            BigUint::from(distinct) * tails(m, &[2], 1)
        }
    })
}

/// Which cobordism an instance reduces to, with its parameters.
pub fn xi_prime_setup(m: &SeifertData) -> Result<(u64, Variant, KnotParams)> {
    let has_y = m.legs[1].k() >= 1;
    let has_z = psi_branch(m) == PsiBranch::R3Generic;
    let variant = match (has_y, has_z) {
        (true, true) => Variant::Pklm,
        (false, true) => Variant::Pkm,
        (true, false) => Variant::Pkl,
        (false, false) => Variant::Pk,
    };
    let params = KnotParams {
        k: small(&m.legs[0].a(1), "a_1^1")?,
        l: small(&m.legs[1].a(1), "a_1^2")?,
        m: small(&m.legs[2].a(1), "a_1^3")?,
    };
    Ok((small(&m.legs[2].a(0), "a_0^3")?, variant, params))
}

/// Lower bound on the structures built from `Xi, Xi'`.
pub fn big_xi_lower_bound(m: &SeifertData) -> Result<BigUint> {
    let (p, variant, params) = xi_prime_setup(m)?;
    Ok(BigUint::from(count_cobordism_classes(p, variant, params)?) * tails(m, &[0, 1, 2], 2))
}

/// The partition of all valid tuples into spin^c classes, in enumeration order.
pub fn cobordism_classes(p: u64, variant: Variant, params: KnotParams) -> Result<Vec<Vec<RotTuple>>> {
    let lattice = CobordismLattice::new(p, variant)?;
    let mut classes: Vec<Vec<RotTuple>> = Vec::new();
    'next: for t in enumerate_tuples(variant, params) {
        for class in classes.iter_mut() {
            if lattice.spinc_equal(&class[0], &t)? {
                class.push(t);
                continue 'next;
            }
        }
        classes.push(vec![t]);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{count_phi, count_psi};
    use crate::seifert::parse_seifert;

    fn kp(k: u64, l: u64, m: u64) -> KnotParams {
        KnotParams { k, l, m }
    }

    #[test]
    fn stein_examples() {
        assert_eq!(count_stein_classes_pkl(2, 2, 2).unwrap(), 4);
        assert_eq!(count_stein_classes_pkl(4, 5, 4).unwrap(), 45);
        assert_eq!(stein_formula_pkl(4, 5, 4), 45);
        for p in 2..10 {
            assert_eq!(count_stein_classes_pkl(p, 2, 2).unwrap(), 2 * p);
        }
        assert_eq!(count_stein_classes_pk(2, 3).unwrap(), 5);
        assert_eq!(count_stein_classes_pk(2, 2).unwrap(), 3);
        assert_eq!(count_stein_classes_pk(5, 2).unwrap(), 6);
        assert!(count_stein_classes_pk(1, 2).is_err());
    }

    #[test]
    fn phi_star_rows() {
        let m = phi_star(7).unwrap();
        assert_eq!(m.rows(), 8);
        assert_eq!(m.row(4), [-1, -1, -1, -1, -8].map(BigInt::from).as_slice());
        assert_eq!(m.row(7), [0, 0, 0, 0, -1].map(BigInt::from).as_slice());
        assert_eq!(m.row(5), [0, 0, -1, 0, 0].map(BigInt::from).as_slice());
    }

    #[test]
    fn column_relation() {
        for p in 2..8 {
            let m = phi_star(p).unwrap();
            let c: Vec<Vec<BigInt>> = (0..5).map(|j| m.column(j)).collect();
            let rel: Vec<BigInt> = (0..8).map(|i| &c[4][i] - &c[0][i] - &c[1][i]).collect();
            let want: Vec<BigInt> = [0, 0, 1, 1, -(p as i64 - 1), 0, 0, -1].map(BigInt::from).to_vec();
            assert_eq!(rel, want);
        }
    }

    #[test]
    fn spinc_equal_examples() {
        let t = |source, x, y, z| RotTuple { source, x, y: Some(y), z: Some(z) };
        let p = 4;
        let v = Variant::Pklm;
        let a = t(Source::Xi, 0, 1, -1);
        assert!(cobordism_spinc_equal(p, v, &a, &a).unwrap());
        assert!(!cobordism_spinc_equal(p, v, &a, &t(Source::Xi, 2, 1, -1)).unwrap());
        assert!(cobordism_spinc_equal(p, v, &a, &t(Source::XiPrime, 0, 1, 1)).unwrap());
        assert!(!cobordism_spinc_equal(p, v, &a, &t(Source::XiPrime, 0, 1, -1)).unwrap());
        let odd = t(Source::Xi, 1, 1, -1);
        assert!(cobordism_spinc_equal(p, v, &a, &odd).is_err());
    }

    #[test]
    fn class_counts() {
        assert_eq!(count_cobordism_classes(3, Variant::Pklm, kp(2, 2, 2)).unwrap(), 2);
        assert_eq!(count_cobordism_classes(3, Variant::Pkm, kp(3, 0, 2)).unwrap(), 4);
        assert_eq!(count_cobordism_classes(3, Variant::Pkl, kp(3, 3, 0)).unwrap(), 4);
        assert_eq!(count_cobordism_classes(3, Variant::Pk, kp(4, 0, 0)).unwrap(), 3);
        let classes = cobordism_classes(3, Variant::Pklm, kp(3, 2, 4)).unwrap();
        assert_eq!(classes.len() as u64, cobordism_formula(Variant::Pklm, kp(3, 2, 4)));
    }

    #[test]
    fn tuple_validation() {
        let t = RotTuple { source: Source::Xi, x: 0, y: None, z: Some(1) };
        assert!(t.validate(Variant::Pkm, kp(2, 0, 3)).is_ok());
        assert!(t.validate(Variant::Pklm, kp(2, 2, 3)).is_err());
        assert!(t.validate(Variant::Pkm, kp(2, 0, 2)).is_err());
        assert_eq!(enumerate_tuples(Variant::Pklm, kp(3, 3, 3)).len(), 16);
    }

    #[test]
    fn bounds_meet_formulas() {
        for (r1, r2, r3) in [("3/4", "2/3", "2/5"), ("3/4", "1/2", "2/5"), ("1/2", "1/2", "2/5"), ("2/3", "2/3", "1/3"), ("5/7", "3/5", "3/11")] {
            let m = parse_seifert(&BigInt::from(-1), &r1.parse().unwrap(), &r2.parse().unwrap(), &r3.parse().unwrap()).unwrap();
            assert_eq!(xi_lower_bound(&m).unwrap(), count_phi(&m), "{r1} {r2} {r3}");
            assert_eq!(big_xi_lower_bound(&m).unwrap(), count_psi(&m), "{r1} {r2} {r3}");
        }
    }
}
