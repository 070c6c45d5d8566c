//! Cross-validation sweeps. Each section compares two independent routes to
//! the same number and records every disagreement.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::count_total;
use crate::cfrac::{eval_nce, nce};
use crate::error::{domain, Error, Result};
use crate::farey::{bypass_successor, eval_slope, farey_adjacent, leg_layer_slopes, slope_transform, Slope};
use crate::lattice::{
    closed_form_equal, cobordism_formula, count_stein_classes_pk, count_stein_classes_pkl, enumerate_tuples,
    stein_formula_pk, stein_formula_pkl, xi_lower_bound, big_xi_lower_bound, CobordismLattice, KnotParams, Variant,
};
use crate::linalg::{determinant, smith_normal_form, verify_snf, IntMatrix};
use crate::orbits::count_orbits_with_cap;
use crate::rational::Rational;
use crate::seifert::{leg_params, parse_seifert, z_slopes, LegData, SeifertData};
use crate::spinc::{
    chern_class_zero, d3_from_diagram, d_invariants_mp, d_plumbing, fillability_decomposition, initial_vectors,
    k_squared, mp_linking_matrix, spinc_distinct, xi_diagram,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: String,
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Number of comparisons made, per check.
    pub checks: BTreeMap<String, u64>,
    pub mismatches: Vec<Mismatch>,
    /// Instances not decided because the orbit state space exceeded the cap.
    pub skipped: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.skipped.is_empty()
    }

    pub fn total_checks(&self) -> u64 {
        self.checks.values().sum()
    }

    fn check(&mut self, name: &str, instance: &str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(name.to_string()).or_default() += 1;
        if !ok {
            self.mismatches.push(Mismatch { check: name.into(), instance: instance.into(), detail: detail() });
        }
    }

    fn error(&mut self, name: &str, instance: &str, e: Error) {
        *self.checks.entry(name.to_string()).or_default() += 1;
        let m = Mismatch { check: name.into(), instance: instance.into(), detail: e.to_string() };
        match e {
            Error::Resource { .. } => self.skipped.push(m),
            _ => self.mismatches.push(m),
        }
    }

    /// Runs `f`, recording an error as a failure of `name`.
    fn attempt<T>(&mut self, name: &str, instance: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        match f() {
            Ok(x) => Some(x),
            Err(e) => {
                self.error(name, instance, e);
                None
            }
        }
    }

    pub fn merge(&mut self, other: VerifyReport) {
        for (k, v) in other.checks {
            *self.checks.entry(k).or_default() += v;
        }
        self.mismatches.extend(other.mismatches);
        self.skipped.extend(other.skipped);
    }

    fn merged(parts: impl IntoIterator<Item = VerifyReport>) -> VerifyReport {
        let mut out = VerifyReport::default();
        for p in parts {
            out.merge(p);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub max_denominator: u64,
    /// Worker threads; zero means one per core.
    pub jobs: usize,
    pub cap: u128,
    /// Largest `p` for the `M_p` family checks.
    pub max_p: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_denominator: 12, jobs: 0, cap: crate::orbits::DEFAULT_CAP, max_p: 64 }
    }
}

/// Reduced fractions in `(0, 1)` with denominator at most `d`, increasing.
pub fn rationals_up_to(d: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 2..=d {
        for p in 1..q {
            if p.gcd(&q) == 1 {
                out.push(Rational::new(p, q).expect("nonzero denominator"));
            }
        }
    }
    out.sort();
    out
}

/// All `(r1, r2, r3)` with `r1 >= r2 >= 1/2`, `r3 <= r2` and denominators at
/// most `d`.
pub fn seifert_instances(d: u64) -> Vec<[Rational; 3]> {
    let all = rationals_up_to(d);
    let half = Rational::new(1, 2).unwrap();
    let upper: Vec<&Rational> = all.iter().filter(|r| **r >= half).collect();
    let mut out = Vec::new();
    for (i, r1) in upper.iter().enumerate() {
        for r2 in &upper[..=i] {
            for r3 in all.iter().filter(|r3| r3 <= r2) {
                out.push([(*r1).clone(), (*r2).clone(), r3.clone()]);
            }
        }
    }
    out
}

/// Orbit counts against `phi`/`psi`, both lower bounds against the closed
/// forms, and the slopes of one instance.
pub fn check_instance(r: &[Rational; 3], cap: u128) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let label = format!("M(-1; {}, {}, {})", r[0], r[1], r[2]);
    let Some(m) = rep.attempt("seifert.parse", &label, || parse_seifert(&BigInt::from(-1), &r[0], &r[1], &r[2]))
    else {
        return rep;
    };
    let census = count_total(&m);
    rep.check("census.total", &label, census.total == &census.phi + &census.psi, || format!("{census:?}"));
    if let Some(o) = rep.attempt("census.orbits", &label, || count_orbits_with_cap(&m, cap)) {
        let ok = BigUint::from(o.mixed) == census.phi && BigUint::from(o.equal) == census.psi;
        rep.check("census.orbits", &label, ok, || {
            format!("orbits ({}, {}), formulas ({}, {})", o.mixed, o.equal, census.phi, census.psi)
        });
    }
    if let Some(b) = rep.attempt("bounds.xi", &label, || xi_lower_bound(&m)) {
        rep.check("bounds.xi", &label, b == census.phi, || format!("lower bound {b}, phi {}", census.phi));
    }
    if let Some(b) = rep.attempt("bounds.big_xi", &label, || big_xi_lower_bound(&m)) {
        rep.check("bounds.big_xi", &label, b == census.psi, || format!("lower bound {b}, psi {}", census.psi));
    }
    let z = z_slopes(&m);
    let want = [Slope::integer(0), Slope::integer(-1), Slope::integer(-1)];
    rep.check("slopes.z", &label, z == want, || format!("{} {} {}", z[0], z[1], z[2]));
    for i in 1..=3 {
        let r = leg_params(&m, i).map(|_| ());
        rep.check("slopes.u", &label, r.is_ok(), || format!("leg {i}: {r:?}"));
    }
    rep
}

pub fn verify_seifert(d: u64, cap: u128) -> VerifyReport {
    let parts: Vec<VerifyReport> = seifert_instances(d).par_iter().map(|r| check_instance(r, cap)).collect();
    VerifyReport::merged(parts)
}

/// Expansion, gluing and slope checks for a single coefficient `r` on either
/// kind of leg.
pub fn check_leg(r: &Rational) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let label = format!("r = {r}");
    let Some(minus_inv) = r.recip().map(|x| -x) else {
        rep.error("legs.nce", &label, domain("zero coefficient"));
        return rep;
    };
    if let Some(c) = rep.attempt("legs.nce", &label, || nce(&minus_inv)) {
        let back = eval_nce(&c);
        rep.check("legs.nce", &label, back == minus_inv, || format!("{c:?} evaluates to {back}"));
    }
    for first in [true, false] {
        let Some(leg) = rep.attempt("legs.gluing", &label, || LegData::new(r, first)) else {
            continue;
        };
        let g = &leg.gluing;
        let one = BigInt::from(1);
        let ok = g.determinant() == one && BigInt::from(0) < g.alpha_prime && g.alpha_prime < g.alpha;
        rep.check("legs.gluing", &label, ok, || format!("{g:?}"));

        let ls = leg_layer_slopes(&leg.expansion);
        let u = leg.u_slope();
        rep.check("slopes.u", &label, u == eval_slope(leg.expansion.reversed().coefficients()), || {
            format!("-alpha/alpha' = {u}")
        });
        let below = u.to_rational().is_some_and(|x| x < Rational::from(-1));
        rep.check("slopes.u_below", &label, below, || format!("u slope {u}"));
        rep.check("slopes.u_outer", &label, ls.layers[0].outer == ls.u_slope && ls.u_slope == u, || {
            format!("outer {} vs u {}", ls.layers[0].outer, u)
        });
        let last = ls.layers.last().expect("at least one layer");
        rep.check("slopes.inner", &label, last.inner == Slope::integer(-1), || format!("innermost {}", last.inner));
        for w in ls.layers.windows(2) {
            rep.check("slopes.chain", &label, w[0].inner == w[1].outer, || {
                format!("layer {} ends at {}, next starts at {}", w[0].index, w[0].inner, w[1].outer)
            });
        }
        for layer in &ls.layers {
            for w in layer.path.windows(2) {
                rep.check("slopes.adjacent", &label, farey_adjacent(&w[0], &w[1]), || {
                    format!("layer {}: {} and {}", layer.index, w[0], w[1])
                });
            }
            let bound = &leg.layer_bounds[layer.index];
            let slices = BigInt::from(layer.basic_slices() as u64);
            rep.check("slopes.slices", &label, &slices == bound, || {
                format!("layer {} has {slices} slices, bound {bound}", layer.index)
            });
        }
        for s in [Slope::infinity(), Slope::integer(0), Slope::integer(-1), u.clone()] {
            let t = slope_transform(g, &slope_transform(g, &s, false), true);
            rep.check("slopes.transform", &label, t == s, || format!("{s} maps back to {t}"));
        }
        let s0 = Slope::from_rational(&leg.inner_torus_slope());
        if let Some(z) = rep.attempt("slopes.successor", &label, || bypass_successor(&s0, &Slope::infinity())) {
            let want = Slope::integer(if first { 0 } else { -1 });
            rep.check("slopes.successor", &label, z == want, || format!("successor of {s0} is {z}"));
        }
    }
    rep
}

pub fn verify_legs(d: u64) -> VerifyReport {
    VerifyReport::merged(rationals_up_to(d).par_iter().map(check_leg).collect::<Vec<_>>())
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

/// Census, d-invariants, homology, `d3` and spin^c checks on `M_p`.
pub fn check_mp(p: u64, cap: u128) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let label = format!("p = {p}");
    let pi = p as i64;
    let Some(m) = rep.attempt("mp.census", &label, || SeifertData::mp(p)) else {
        return rep;
    };
    let total = count_total(&m).total;
    rep.check("mp.census", &label, total == BigUint::from(3u32), || format!("total {total}"));
    if let Some(o) = rep.attempt("mp.orbits", &label, || count_orbits_with_cap(&m, cap)) {
        rep.check("mp.orbits", &label, o.mixed + o.equal == 3, || format!("{o:?}"));
    }

    if let Some(d) = rep.attempt("mp.d_invariants", &label, || d_invariants_mp(p)) {
        let want = [q(0, 1), q(0, 1), q(pi - 2, 4), q(pi + 2, 4)];
        rep.check("mp.d_invariants", &label, d == want, || format!("{d:?}"));
    }
    let squares = rep.attempt("mp.k_squared", &label, || {
        let qf = d_plumbing(p)?;
        initial_vectors(p)?.iter().map(|k| k_squared(&qf, k)).collect::<Result<Vec<_>>>()
    });
    if let Some(sq) = squares {
        let want = vec![q(-pi - 2, 1), q(-pi - 2, 1), q(-4, 1), q(0, 1)];
        rep.check("mp.k_squared", &label, sq == want, || format!("{sq:?}"));
    }

    let want_h: Vec<BigInt> = if p % 2 == 1 { vec![4.into()] } else { vec![2.into(), 2.into()] };
    for (name, mat) in [("linking", mp_linking_matrix(p)), ("plumbing", d_plumbing(p))] {
        let Some(mat) = rep.attempt("mp.homology", &label, || mat) else { continue };
        check_homology(&mut rep, &label, name, &mat, &want_h);
    }

    for mirrored in [false, true] {
        if let Some(d3) = rep.attempt("mp.d3", &label, || d3_from_diagram(&xi_diagram(p, mirrored)?)) {
            rep.check("mp.d3", &label, d3 == q(2 - pi, 4), || format!("mirrored {mirrored}: {d3}"));
        }
    }

    let spinc = rep.attempt("mp.spinc", &label, || {
        let qf = d_plumbing(p)?;
        let ks = initial_vectors(p)?;
        let mut distinct = true;
        for i in 0..4 {
            for j in i + 1..4 {
                distinct &= spinc_distinct(&qf, &ks[i], &ks[j])?;
            }
        }
        let zero = ks.iter().map(|k| chern_class_zero(&qf, k)).collect::<Result<Vec<_>>>()?;
        Ok((distinct, zero))
    });
    if let Some((distinct, zero)) = spinc {
        rep.check("mp.spinc_distinct", &label, distinct, || "two initial vectors agree on the boundary".into());
        let even = p.is_multiple_of(2);
        let want = vec![even, even, true, true];
        rep.check("mp.chern_zero", &label, zero == want, || format!("{zero:?}"));
    }
    rep
}

fn check_homology(rep: &mut VerifyReport, label: &str, name: &str, m: &IntMatrix, want: &[BigInt]) {
    let snf = smith_normal_form(m);
    if let Err(e) = verify_snf(m, &snf) {
        rep.error("mp.homology", label, e);
        return;
    }
    let got = snf.torsion_and_free(m.rows());
    rep.check("mp.homology", label, got == want, || format!("{name}: {got:?}"));
    if let Some(det) = rep.attempt("mp.homology", label, || determinant(m)) {
        rep.check("mp.homology", label, det.magnitude() == &BigUint::from(4u32), || format!("{name}: det {det}"));
    }
}

pub fn verify_mp(ps: std::ops::RangeInclusive<u64>, cap: u128) -> VerifyReport {
    let ps: Vec<u64> = ps.collect();
    VerifyReport::merged(ps.par_iter().map(|&p| check_mp(p, cap)).collect::<Vec<_>>())
}

/// The obstruction holds exactly when `p - 2` is not a multiple of eight; a
/// found decomposition must add up.
pub fn verify_fillability(ps: std::ops::RangeInclusive<u64>) -> VerifyReport {
    let mut rep = VerifyReport::default();
    for p in ps {
        let label = format!("p = {p}");
        let Some(dec) = rep.attempt("fillability", &label, || fillability_decomposition(p)) else { continue };
        let want = (p - 2) % 8 == 0;
        rep.check("fillability.congruence", &label, dec.is_some() == want, || format!("decomposition {dec:?}"));
        if let Some(ns) = dec {
            let sum: u64 = ns.iter().map(|n| 4 * n * (n + 1)).sum();
            rep.check("fillability.sum", &label, sum == p - 2, || format!("{ns:?} sums to {sum}"));
        }
    }
    rep
}

/// Brute-force Stein class counts against their closed forms.
pub fn verify_stein(max_pkl: u64, max_pk: u64) -> VerifyReport {
    let mut rep = VerifyReport::default();
    for p in 2..=max_pkl {
        for k in 2..=max_pkl {
            for l in 2..=max_pkl {
                let label = format!("(p, k, l) = ({p}, {k}, {l})");
                if let Some(n) = rep.attempt("lattice.pkl", &label, || count_stein_classes_pkl(p, k, l)) {
                    let f = stein_formula_pkl(p, k, l);
                    rep.check("lattice.pkl", &label, n == f, || format!("brute force {n}, formula {f}"));
                }
            }
        }
    }
    for p in 2..=max_pk {
        for k in 2..=max_pk {
            let label = format!("(p, k) = ({p}, {k})");
            if let Some(n) = rep.attempt("lattice.pk", &label, || count_stein_classes_pk(p, k)) {
                let f = stein_formula_pk(p, k);
                rep.check("lattice.pk", &label, n == f, || format!("brute force {n}, formula {f}"));
            }
        }
    }
    rep
}

/// Membership predicate against the closed-form conditions on every pair of
/// tuples, and the resulting class count against its formula.
pub fn check_cobordism(p: u64, variant: Variant, params: KnotParams) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let label = format!("{variant} p = {p}, (k, l, m) = ({}, {}, {})", params.k, params.l, params.m);
    let Some(lattice) = rep.attempt("cobordism.lattice", &label, || CobordismLattice::new(p, variant)) else {
        return rep;
    };
    let tuples = enumerate_tuples(variant, params);
    let mut root: Vec<usize> = (0..tuples.len()).collect();
    fn find(root: &mut [usize], mut i: usize) -> usize {
        while root[i] != i {
            root[i] = root[root[i]];
            i = root[i];
        }
        i
    }
    let mut disagreements = 0u64;
    let mut first = None;
    for i in 0..tuples.len() {
        for j in i..tuples.len() {
            let Some(eq) = rep.attempt("cobordism.lattice", &label, || lattice.spinc_equal(&tuples[i], &tuples[j]))
            else {
                return rep;
            };
            if eq != closed_form_equal(&tuples[i], &tuples[j]) {
                disagreements += 1;
                first.get_or_insert((i, j, eq));
            }
            if eq {
                let (a, b) = (find(&mut root, i), find(&mut root, j));
                root[a] = b;
            }
        }
    }
    rep.check("cobordism.conditions", &label, disagreements == 0, || {
        let (i, j, eq) = first.unwrap();
        format!("{disagreements} pairs disagree, first {:?} vs {:?} (lattice says {eq})", tuples[i], tuples[j])
    });
    let classes = (0..tuples.len()).filter(|&i| find(&mut root, i) == i).count() as u64;
    let f = cobordism_formula(variant, params);
    rep.check("cobordism.count", &label, classes == f, || format!("{classes} classes, formula {f}"));
    rep
}

pub fn verify_cobordism(max: u64) -> VerifyReport {
    let mut jobs = Vec::new();
    for variant in Variant::ALL {
        for p in 2..=max {
            for k in 2..=max {
                let ls: Vec<u64> = if variant.has_y() { (2..=max).collect() } else { vec![2] };
                let ms: Vec<u64> = if variant.has_z() { (2..=max).collect() } else { vec![2] };
                for &l in &ls {
                    for &m in &ms {
                        jobs.push((p, variant, KnotParams { k, l, m }));
                    }
                }
            }
        }
    }
    VerifyReport::merged(jobs.par_iter().map(|&(p, v, kp)| check_cobordism(p, v, kp)).collect::<Vec<_>>())
}

/// Every section, with ranges scaled to `max_denominator`.
pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.max_denominator < 2 {
        return Err(domain("max denominator must be at least 2"));
    }
    if opts.max_p < 2 {
        return Err(domain("max p must be at least 2"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("cannot start worker pool: {e}")))?;
    let d = opts.max_denominator;
    Ok(pool.install(|| {
        VerifyReport::merged([
            verify_legs(d),
            verify_seifert(d, opts.cap),
            verify_mp(2..=opts.max_p, opts.cap),
            verify_fillability(2..=opts.max_p),
            verify_stein(d.min(10), d.min(20)),
            verify_cobordism(d.min(5)),
        ])
    }))
}
