use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

use seifert_census::census::{count_phi, count_psi};
use seifert_census::cfrac::{eval_nce, gluing_data, nce};
use seifert_census::farey::{bypass_successor, farey_adjacent, slope_transform, Slope};
use seifert_census::format::{
    diagram_to_json, diagram_to_text, parse_diagram_json, parse_diagram_text, parse_plumbing_json,
    parse_plumbing_text, plumbing_to_json, plumbing_to_text,
};
use seifert_census::lattice::{closed_form_equal, cobordism_spinc_equal, enumerate_tuples, KnotParams, Variant};
use seifert_census::linalg::{determinant, smith_normal_form, verify_snf, IntMatrix};
use seifert_census::orbits::count_orbits;
use seifert_census::seifert::parse_seifert;
use seifert_census::spinc::{ContactSign, DiagramComponent, PlumbingGraph, SurgeryDiagram};
use seifert_census::Rational;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn coprime_pair(max: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max).prop_flat_map(|a| (Just(a), 1..a)).prop_filter("coprime", |(a, b)| a.gcd(b) == 1)
}

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(|rows| IntMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(big).collect()).collect()).unwrap())
    })
}

fn slope() -> impl Strategy<Value = Slope> {
    prop_oneof![
        Just(Slope::infinity()),
        (-50i64..=50, 1i64..=50).prop_map(|(p, q)| Slope::new(p, q).unwrap()),
    ]
}

/// A tree on `n` vertices: vertex `i > 0` hangs off a random earlier one.
fn plumbing() -> impl Strategy<Value = PlumbingGraph> {
    (1usize..12).prop_flat_map(|n| {
        (prop::collection::vec(-9i64..=9, n), prop::collection::vec(any::<prop::sample::Index>(), n - 1)).prop_map(
            move |(f, parents)| {
                let edges = parents.iter().enumerate().map(|(i, ix)| (ix.index(i + 1), i + 1)).collect();
                PlumbingGraph::new(f.into_iter().map(big).collect(), edges).unwrap()
            },
        )
    })
}

fn diagram() -> impl Strategy<Value = SurgeryDiagram> {
    (1usize..7).prop_flat_map(|n| {
        (
            prop::collection::vec((-9i64..=9, -9i64..=9, any::<bool>()), n),
            prop::collection::vec(-3i64..=3, n * (n - 1) / 2),
        )
            .prop_map(move |(cs, lk)| {
                let mut l = IntMatrix::zeros(n, n);
                let mut it = lk.into_iter();
                for i in 0..n {
                    l[(i, i)] = big(cs[i].0);
                    for j in i + 1..n {
                        let x = big(it.next().unwrap());
                        l[(i, j)] = x.clone();
                        l[(j, i)] = x;
                    }
                }
                let comps = cs
                    .iter()
                    .map(|&(f, r, plus)| DiagramComponent {
                        framing: big(f),
                        rot: big(r),
                        contact: if plus { ContactSign::Plus } else { ContactSign::Minus },
                    })
                    .collect();
                SurgeryDiagram::new(comps, l).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nce_round_trip((q, p) in coprime_pair(200)) {
        // -q/p < -1
        let x = Rational::new(-q, p).unwrap();
        let c = nce(&x).unwrap();
        prop_assert!(c.coefficients().iter().all(|a| *a >= big(2)));
        prop_assert_eq!(eval_nce(&c), x);
    }

    #[test]
    fn gluing_is_unimodular((alpha, beta) in coprime_pair(200), neg in any::<bool>()) {
        let beta = if neg { beta - alpha } else { beta };
        let g = gluing_data(&big(alpha), &big(beta)).unwrap();
        prop_assert_eq!(g.determinant(), big(1));
        prop_assert!(big(0) < g.alpha_prime && g.alpha_prime < g.alpha);
    }

    #[test]
    fn snf_certificate(m in matrix(8)) {
        let s = smith_normal_form(&m);
        prop_assert!(verify_snf(&m, &s).is_ok());
        if m.rows() == m.cols() {
            let prod: BigInt = s.d.iter().product();
            prop_assert_eq!(prod, determinant(&m).unwrap().abs());
        }
    }

    #[test]
    fn transform_inverse((alpha, beta) in coprime_pair(60), s in slope()) {
        let g = gluing_data(&big(alpha), &big(beta)).unwrap();
        let t = slope_transform(&g, &s, false);
        prop_assert_eq!(slope_transform(&g, &t, true), s.clone());
        // unimodular maps preserve adjacency to infinity's image
        prop_assert_eq!(
            farey_adjacent(&s, &Slope::infinity()),
            farey_adjacent(&t, &slope_transform(&g, &Slope::infinity(), false))
        );
    }

    #[test]
    fn successor_adjacent_to_target(s0 in slope(), s1 in slope()) {
        prop_assume!(s0 != s1);
        let z = bypass_successor(&s0, &s1).unwrap();
        prop_assert!(farey_adjacent(&z, &s1));
        if farey_adjacent(&s0, &s1) {
            prop_assert_eq!(z, s0);
        }
    }

    #[test]
    fn lattice_matches_closed_form(
        v in 0usize..4, p in 2u64..=8, k in 2u64..=7, l in 2u64..=7, m in 2u64..=7,
        i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(),
    ) {
        let variant = Variant::ALL[v];
        let tuples = enumerate_tuples(variant, KnotParams { k, l, m });
        let (a, b) = (i.get(&tuples), j.get(&tuples));
        prop_assert_eq!(cobordism_spinc_equal(p, variant, a, b).unwrap(), closed_form_equal(a, b));
    }

    #[test]
    fn plumbing_formats_round_trip(g in plumbing()) {
        prop_assert_eq!(parse_plumbing_text(&plumbing_to_text(&g)).unwrap(), g.clone());
        prop_assert_eq!(parse_plumbing_json(&plumbing_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn diagram_formats_round_trip(d in diagram()) {
        prop_assert_eq!(parse_diagram_text(&diagram_to_text(&d)).unwrap(), d.clone());
        prop_assert_eq!(parse_diagram_json(&diagram_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn parsers_reject_without_panicking(s in "\\PC{0,200}") {
        let _ = parse_plumbing_text(&s);
        let _ = parse_diagram_text(&s);
        let _ = parse_plumbing_json(&s);
        let _ = parse_diagram_json(&s);
        let _ = s.parse::<Rational>();
        let _ = s.parse::<Slope>();
    }

    #[test]
    fn structured_garbage(lines in prop::collection::vec(
        prop_oneof![
            Just("plumbing".to_string()),
            Just("diagram".to_string()),
            (0u64..5, -5i64..5).prop_map(|(i, f)| format!("vertex {i} {f}")),
            (0u64..5, 0u64..5).prop_map(|(a, b)| format!("edge {a} {b}")),
            (-5i64..5, -5i64..5, -2i64..=2).prop_map(|(f, r, c)| format!("component {f} {r} {c}")),
            (0u64..5, 0u64..5, -3i64..3).prop_map(|(a, b, l)| format!("link {a} {b} {l}")),
        ], 0..12)) {
        let text = lines.join("\n");
        if let Ok(g) = parse_plumbing_text(&text) {
            prop_assert_eq!(parse_plumbing_text(&plumbing_to_text(&g)).unwrap(), g);
        }
        if let Ok(d) = parse_diagram_text(&text) {
            prop_assert_eq!(parse_diagram_text(&diagram_to_text(&d)).unwrap(), d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Denominators past the exhaustive sweep.
    #[test]
    fn orbits_match_formulas((d1, n1) in coprime_pair(16), (d2, n2) in coprime_pair(16), (d3, n3) in coprime_pair(16)) {
        let mut r = [Rational::new(n1, d1).unwrap(), Rational::new(n2, d2).unwrap(), Rational::new(n3, d3).unwrap()];
        r.sort();
        r.reverse();
        let half = Rational::new(1, 2).unwrap();
        prop_assume!(r[1] >= half);
        let m = parse_seifert(&big(-1), &r[0], &r[1], &r[2]).unwrap();
        match count_orbits(&m) {
            Ok(o) => {
                prop_assert_eq!(BigUint::from(o.mixed), count_phi(&m));
                prop_assert_eq!(BigUint::from(o.equal), count_psi(&m));
            }
            Err(seifert_census::Error::Resource { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
