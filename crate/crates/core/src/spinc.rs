//! Homology, spin^c structures and correction terms for
//! `M_p = M(-1; 1/2, 1/2, 1/p)`, plus `d3` of contact surgery diagrams.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{determinant, in_column_span, is_negative_definite, signature, solve_rational, IntMatrix};
use crate::rational::Rational;

fn check_p(p: u64) -> Result<()> {
    if p < 2 {
        return Err(domain(format!("p must be at least 2, got {p}")));
    }
    Ok(())
}

/// Linking matrix of the five-component diagram of `M_p`: framings
/// `0, 0, -3, -3, -p-1`, every pair linked `-1`.
pub fn mp_linking_matrix(p: u64) -> Result<IntMatrix> {
    check_p(p)?;
    let diag = [0i64, 0, -3, -3, -(p as i64) - 1];
    let mut m = IntMatrix::zeros(5, 5);
    for i in 0..5 {
        for j in 0..5 {
            m[(i, j)] = BigInt::from(if i == j { diag[i] } else { -1 });
        }
    }
    let det = determinant(&m)?;
    if det.abs() != BigInt::from(4) {
        return Err(Error::Invariant(format!("linking matrix of M_{p} has determinant {det}")));
    }
    Ok(m)
}

/// A plumbing tree: framed vertices joined by edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingGraph {
    #[serde(with = "crate::serde_big::bigint_vec")]
    pub framings: Vec<BigInt>,
    pub edges: Vec<(usize, usize)>,
}

impl PlumbingGraph {
    pub fn new(framings: Vec<BigInt>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = framings.len();
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(domain(format!("edge ({a}, {b}) refers to a missing vertex; there are {n}")));
            }
            if a == b {
                return Err(domain(format!("self-loop at vertex {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(domain(format!("edge ({a}, {b}) listed twice")));
            }
        }
        Ok(PlumbingGraph { framings, edges })
    }

    /// Intersection form: framings on the diagonal, one per edge.
    pub fn form(&self) -> IntMatrix {
        let mut q = IntMatrix::diagonal(&self.framings);
        for &(a, b) in &self.edges {
            q[(a, b)] += 1;
            q[(b, a)] += 1;
        }
        q
    }
}

/// The D-shaped tree with `p + 2` vertices framed `-2`. Vertex 0 and 1 are
/// the leaves, 2 the trivalent vertex, `3..=p+1` the chain.
pub fn d_plumbing_graph(p: u64) -> Result<PlumbingGraph> {
    check_p(p)?;
    let n = p as usize + 2;
    let mut edges = vec![(0, 2), (1, 2)];
    edges.extend((2..n - 1).map(|i| (i, i + 1)));
    PlumbingGraph::new(vec![BigInt::from(-2); n], edges)
}

pub fn d_plumbing(p: u64) -> Result<IntMatrix> {
    let q = d_plumbing_graph(p)?.form();
    if !is_negative_definite(&q)? {
        return Err(Error::Invariant(format!("D-plumbing for p = {p} is not negative definite")));
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharVector {
    #[serde(with = "crate::serde_big::bigint_vec")]
    pub values: Vec<BigInt>,
}

impl CharVector {
    pub fn new(values: Vec<BigInt>) -> Self {
        CharVector { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        CharVector::new(values.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `K(v) = Q(v, v) mod 2` on every vertex.
    pub fn is_characteristic(&self, q: &IntMatrix) -> bool {
        self.values.len() == q.rows() && self.values.iter().enumerate().all(|(i, k)| (k - &q[(i, i)]).is_even())
    }
}

/// `K1, ..., K4` on [`d_plumbing`]: two on the bottom leaf, on the top
/// leaf, on the end of the chain, and zero.
pub fn initial_vectors(p: u64) -> Result<[CharVector; 4]> {
    check_p(p)?;
    let n = p as usize + 2;
    let at = |i: usize| {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::from(2);
        CharVector::new(v)
    };
    Ok([at(1), at(0), at(n - 1), CharVector::new(vec![BigInt::zero(); n])])
}

/// Classes `C1, C2, C3` on [`d_plumbing`] whose restrictions give the
/// spin^c structures of `xi_1`, `xi_2` and `Xi`.
pub fn structure_classes(p: u64) -> Result<[CharVector; 3]> {
    check_p(p)?;
    let n = p as usize + 2;
    let mut c1 = vec![BigInt::zero(); n];
    c1[0] = BigInt::from(-4);
    c1[1] = BigInt::from(2);
    let mut c2 = c1.clone();
    c2[n - 1] = BigInt::from(2);
    let mut c3 = vec![BigInt::zero(); n];
    c3[0] = BigInt::from(-2);
    c3[1] = BigInt::from(2);
    Ok([CharVector::new(c1), CharVector::new(c2), CharVector::new(c3)])
}

/// `K^T Q^{-1} K`, solved exactly.
pub fn k_squared(q: &IntMatrix, k: &CharVector) -> Result<Rational> {
    if !k.is_characteristic(q) {
        return Err(domain("vector is not characteristic for the form"));
    }
    let x = solve_rational(q, &k.values)?;
    Ok(x.iter().zip(&k.values).fold(Rational::zero(), |acc, (xi, ki)| acc + xi * &Rational::from_integer(ki.clone())))
}

/// Correction terms `(K_i^2 + p + 2) / 4` for `i = 1..4`.
pub fn d_invariants_mp(p: u64) -> Result<[Rational; 4]> {
    let q = d_plumbing(p)?;
    let shift = Rational::from_integer(BigInt::from(p + 2));
    let four = Rational::from(4);
    let ks = initial_vectors(p)?;
    let mut out = Vec::with_capacity(4);
    for k in &ks {
        out.push((k_squared(&q, k)? + shift.clone()) / four.clone());
    }
    Ok(out.try_into().expect("four vectors"))
}

/// `m(v) + 2 <= K(v) <= -m(v)` for every vertex framed `m(v)`.
pub fn is_initial_vector(q: &IntMatrix, k: &CharVector) -> bool {
    k.values.len() == q.rows()
        && k.values.iter().enumerate().all(|(i, kv)| {
            let m = &q[(i, i)];
            *kv >= m + 2 && *kv <= -m
        })
}

/// The two vectors restrict to different spin^c structures on the boundary.
pub fn spinc_distinct(q: &IntMatrix, k1: &CharVector, k2: &CharVector) -> Result<bool> {
    if k1.values.len() != q.rows() || k2.values.len() != q.rows() {
        return Err(domain("vector length does not match the form"));
    }
    let mut half = Vec::with_capacity(q.rows());
    for (a, b) in k1.values.iter().zip(&k2.values) {
        let (h, r) = (a - b).div_rem(&BigInt::from(2));
        if !r.is_zero() {
            return Err(domain("the two vectors differ by an odd amount"));
        }
        half.push(h);
    }
    Ok(!in_column_span(q, &half)?)
}

/// The first Chern class restricts to zero on the boundary.
pub fn chern_class_zero(q: &IntMatrix, k: &CharVector) -> Result<bool> {
    if k.values.len() != q.rows() {
        return Err(domain("vector length does not match the form"));
    }
    in_column_span(q, &k.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContactSign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl ContactSign {
    pub fn from_i64(x: i64) -> Result<Self> {
        match x {
            1 => Ok(ContactSign::Plus),
            -1 => Ok(ContactSign::Minus),
            _ => Err(domain(format!("contact coefficient must be +1 or -1, got {x}"))),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            ContactSign::Plus => 1,
            ContactSign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramComponent {
    #[serde(with = "crate::serde_big::bigint")]
    pub framing: BigInt,
    #[serde(with = "crate::serde_big::bigint")]
    pub rot: BigInt,
    pub contact: ContactSign,
}

/// Contact `(+-1)`-surgery diagram with the smooth linking matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryDiagram {
    components: Vec<DiagramComponent>,
    linking: IntMatrix,
}

impl SurgeryDiagram {
    pub fn new(components: Vec<DiagramComponent>, linking: IntMatrix) -> Result<Self> {
        if linking.rows() != components.len() || !linking.is_symmetric() {
            return Err(domain("linking matrix must be symmetric with one row per component"));
        }
        if let Some(i) = (0..components.len()).find(|&i| linking[(i, i)] != components[i].framing) {
            return Err(domain(format!("component {i}: framing differs from the linking matrix diagonal")));
        }
        Ok(SurgeryDiagram { components, linking })
    }

    pub fn components(&self) -> &[DiagramComponent] {
        &self.components
    }

    pub fn linking(&self) -> &IntMatrix {
        &self.linking
    }

    pub fn rot(&self) -> Vec<BigInt> {
        self.components.iter().map(|c| c.rot.clone()).collect()
    }

    pub fn plus_count(&self) -> usize {
        self.components.iter().filter(|c| c.contact == ContactSign::Plus).count()
    }

    /// Same diagram with every rotation number negated.
    pub fn mirrored(&self) -> Self {
        let components =
            self.components.iter().map(|c| DiagramComponent { rot: -&c.rot, ..c.clone() }).collect();
        SurgeryDiagram { components, linking: self.linking.clone() }
    }
}

/// The diagram of `Xi` on `M_p` (or of its mirror `Xi'`).
pub fn xi_diagram(p: u64, mirrored: bool) -> Result<SurgeryDiagram> {
    let l = mp_linking_matrix(p)?;
    let rot = [0i64, 0, 1, 1, -(p as i64 - 1)];
    let signs = [ContactSign::Plus, ContactSign::Plus, ContactSign::Minus, ContactSign::Minus, ContactSign::Minus];
    let components = (0..5)
        .map(|i| DiagramComponent { framing: l[(i, i)].clone(), rot: BigInt::from(rot[i]), contact: signs[i] })
        .collect();
    let d = SurgeryDiagram::new(components, l)?;
    Ok(if mirrored { d.mirrored() } else { d })
}

/// `c^2 = rot^T L^{-1} rot`.
pub fn c_squared(d: &SurgeryDiagram) -> Result<Rational> {
    let rot = d.rot();
    let x = solve_rational(&d.linking, &rot)?;
    Ok(x.iter().zip(&rot).fold(Rational::zero(), |acc, (xi, r)| acc + xi * &Rational::from_integer(r.clone())))
}

/// `(c^2 - 3 sigma - 2 b2) / 4 + q`, with `q` the number of `+1` surgeries.
pub fn d3_from_diagram(d: &SurgeryDiagram) -> Result<Rational> {
    let c2 = c_squared(d)?;
    let sigma = signature(&d.linking)?;
    let b2 = d.components.len() as i64;
    Ok(degree_shift(&c2, sigma, b2) + Rational::from(d.plus_count() as i64))
}

/// `(c^2 - 3 sigma - 2 chi) / 4`.
pub fn degree_shift(c_sq: &Rational, sigma: i64, chi: i64) -> Rational {
    (c_sq.clone() - Rational::from(3 * sigma + 2 * chi)) / Rational::from(4)
}

/// Values `n_i >= 1` with `p - 2 = sum 4 n_i (n_i + 1)`, if any; zero terms
/// are dropped since they contribute nothing.
pub fn fillability_decomposition(p: u64) -> Result<Option<Vec<u64>>> {
    check_p(p)?;
    let target = (p - 2) as usize;
    let terms: Vec<(u64, usize)> =
        (1u64..).map(|n| (n, (4 * n * (n + 1)) as usize)).take_while(|&(_, t)| t <= target).collect();
    // reach[s] = last term used to reach the sum s
    let mut reach: Vec<Option<(u64, usize)>> = vec![None; target + 1];
    let mut ok = vec![false; target + 1];
    ok[0] = true;
    for s in 1..=target {
        if let Some(&t) = terms.iter().find(|&&(_, t)| t <= s && ok[s - t]) {
            ok[s] = true;
            reach[s] = Some(t);
        }
    }
    if !ok[target] {
        return Ok(None);
    }
    let mut out = Vec::new();
    let mut s = target;
    while s > 0 {
        let (n, t) = reach[s].expect("reachable sums have a last term");
        out.push(n);
        s -= t;
    }
    Ok(Some(out))
}

/// True when no negative definite diagonal filling can match `d3 = (2-p)/4`.
pub fn fillability_obstruction(p: u64) -> Result<bool> {
    Ok(fillability_decomposition(p)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::smith_normal_form;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn linking_matrix() {
        for p in 2..10 {
            let l = mp_linking_matrix(p).unwrap();
            assert_eq!(determinant(&l).unwrap(), BigInt::from(-4));
            assert_eq!(signature(&l).unwrap(), -1);
        }
        assert!(mp_linking_matrix(1).is_err());
    }

    #[test]
    fn homology() {
        let d = |m: &IntMatrix| smith_normal_form(m).torsion_and_free(m.rows());
        assert_eq!(d(&mp_linking_matrix(3).unwrap()), vec![BigInt::from(4)]);
        assert_eq!(d(&mp_linking_matrix(4).unwrap()), vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(d(&d_plumbing(3).unwrap()), vec![BigInt::from(4)]);
        assert_eq!(d(&d_plumbing(2).unwrap()), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn squares_and_d_invariants() {
        let qf = d_plumbing(3).unwrap();
        let ks = initial_vectors(3).unwrap();
        assert_eq!(k_squared(&qf, &ks[0]).unwrap(), q("-5"));
        assert_eq!(k_squared(&qf, &ks[2]).unwrap(), q("-4"));
        assert_eq!(k_squared(&qf, &ks[3]).unwrap(), q("0"));
        assert_eq!(d_invariants_mp(2).unwrap(), [q("0"), q("0"), q("0"), q("1")]);
        assert_eq!(d_invariants_mp(3).unwrap(), [q("0"), q("0"), q("1/4"), q("5/4")]);
        assert_eq!(d_invariants_mp(6).unwrap(), [q("0"), q("0"), q("1"), q("2")]);
        assert!(k_squared(&qf, &CharVector::from_i64(&[1, 0, 0, 0, 0])).is_err());
    }

    #[test]
    fn initial_vectors_pass() {
        let qf = d_plumbing(5).unwrap();
        for k in initial_vectors(5).unwrap() {
            assert!(is_initial_vector(&qf, &k));
        }
        assert!(!is_initial_vector(&qf, &CharVector::from_i64(&[4, 0, 0, 0, 0, 0, 0])));
    }

    #[test]
    fn distinctness_and_chern() {
        for p in 2..12 {
            let qf = d_plumbing(p).unwrap();
            let ks = initial_vectors(p).unwrap();
            for i in 0..4 {
                assert!(!spinc_distinct(&qf, &ks[i], &ks[i]).unwrap());
                for j in i + 1..4 {
                    assert!(spinc_distinct(&qf, &ks[i], &ks[j]).unwrap(), "p = {p}, K{} vs K{}", i + 1, j + 1);
                }
            }
            assert!(chern_class_zero(&qf, &ks[3]).unwrap());
            assert!(chern_class_zero(&qf, &ks[2]).unwrap());
            assert_eq!(chern_class_zero(&qf, &ks[0]).unwrap(), p % 2 == 0);
            // K + 2 Q e_1 restricts to the same structure
            let shifted: Vec<BigInt> =
                ks[0].values.iter().zip(qf.column(0)).map(|(k, c)| k + BigInt::from(2) * c).collect();
            assert!(!spinc_distinct(&qf, &ks[0], &CharVector::new(shifted)).unwrap());
        }
        let qf = d_plumbing(2).unwrap();
        assert!(spinc_distinct(&qf, &CharVector::from_i64(&[1, 0, 0, 0]), &CharVector::from_i64(&[0; 4])).is_err());
    }

    #[test]
    fn structure_classes_are_distinct() {
        for p in 2..12 {
            let qf = d_plumbing(p).unwrap();
            let [c1, c2, c3] = structure_classes(p).unwrap();
            let ks = initial_vectors(p).unwrap();
            assert!(spinc_distinct(&qf, &c1, &c2).unwrap());
            assert!(spinc_distinct(&qf, &c1, &c3).unwrap());
            assert!(spinc_distinct(&qf, &c2, &c3).unwrap());
            assert!(!spinc_distinct(&qf, &c3, &ks[2]).unwrap(), "p = {p}");
            let same_as = |c: &CharVector| (0..4).filter(|&i| !spinc_distinct(&qf, c, &ks[i]).unwrap()).collect::<Vec<_>>();
            let mut pair = [same_as(&c1), same_as(&c2)].concat();
            pair.sort();
            assert_eq!(pair, vec![0, 1], "p = {p}");
        }
    }

    #[test]
    fn d3_examples() {
        assert_eq!(d3_from_diagram(&xi_diagram(2, false).unwrap()).unwrap(), q("0"));
        assert_eq!(d3_from_diagram(&xi_diagram(3, false).unwrap()).unwrap(), q("-1/4"));
        assert_eq!(c_squared(&xi_diagram(2, false).unwrap()).unwrap(), q("-1"));
        assert_eq!(c_squared(&xi_diagram(3, false).unwrap()).unwrap(), q("-2"));
        let m = xi_diagram(2, true).unwrap();
        assert_eq!(m.rot(), [0, 0, -1, -1, 1].map(BigInt::from).to_vec());
        assert_eq!(m.plus_count(), 2);
        assert_eq!(d3_from_diagram(&m).unwrap(), q("0"));
    }

    #[test]
    fn degree_shift_examples() {
        assert_eq!(degree_shift(&q("0"), 0, 0), q("0"));
        assert_eq!(degree_shift(&q("-1"), -1, 5), q("-2"));
        assert_eq!(degree_shift(&q("-4"), -4, 5), q("-1/2"));
    }

    #[test]
    fn fillability() {
        assert!(fillability_obstruction(3).unwrap());
        assert!(!fillability_obstruction(2).unwrap());
        assert!(!fillability_obstruction(10).unwrap());
        assert_eq!(fillability_decomposition(10).unwrap(), Some(vec![1]));
        let parts = fillability_decomposition(26).unwrap().unwrap();
        assert_eq!(parts.iter().map(|n| 4 * n * (n + 1)).sum::<u64>(), 24);
        assert_eq!(fillability_decomposition(2).unwrap(), Some(vec![]));
    }

    #[test]
    fn diagram_validation() {
        let l = IntMatrix::from_i64(&[&[-1, 1], &[1, -2]]);
        let c = |f: i64| DiagramComponent { framing: BigInt::from(f), rot: BigInt::zero(), contact: ContactSign::Minus };
        assert!(SurgeryDiagram::new(vec![c(-1), c(-2)], l.clone()).is_ok());
        assert!(SurgeryDiagram::new(vec![c(-1), c(-3)], l.clone()).is_err());
        assert!(SurgeryDiagram::new(vec![c(-1)], l).is_err());
        assert!(ContactSign::from_i64(0).is_err());
    }
}
