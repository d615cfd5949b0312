use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fqlines::census::{count_line_classes, AuxEvaluator, Classifier, LineClassification};
use fqlines::field::parse_field_literal;
use fqlines::gallery::{
    katz_surface, random_form, random_smooth_surface, spacefilling_candidates, spacefilling_surface,
};
use fqlines::groebner::buchberger;
use fqlines::projective::{
    count_points_on, enumerate_lines, enumerate_points, line_at, line_count, point_count,
    tangent_plane, LineRep,
};
use fqlines::{FieldSpec, Polynomial};

const FIELDS: [&str; 9] = ["2", "3", "5", "7", "2^2", "3^2", "2^3", "5^2", "3^4"];

fn field(text: &str) -> FieldSpec {
    parse_field_literal(text).unwrap()
}

fn nonzero_form(f: &FieldSpec, d: u32, rng: &mut ChaCha8Rng) -> Polynomial {
    loop {
        let g = random_form(f, d, rng);
        if !g.is_zero() {
            return g;
        }
    }
}

fn add_coords(f: &FieldSpec, s: u64, a: &[u64], t: u64, b: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(x, y)| f.add(f.mul(s, *x), f.mul(t, *y)))
        .collect()
}

#[test]
fn elements_of_fq_are_fixed_by_frobenius() {
    for text in FIELDS {
        let f = field(text);
        let q = f.order();
        for x in 0..q {
            assert_eq!(f.pow(x, q), x, "{text}");
        }
    }
}

#[test]
fn frobenius_is_a_ring_map_on_small_fields() {
    for text in ["2", "3", "5", "7", "2^2", "3^2", "2^3"] {
        let f = field(text);
        let p = f.characteristic();
        for x in 0..f.order() {
            for y in 0..f.order() {
                assert_eq!(f.pow(f.add(x, y), p), f.add(f.pow(x, p), f.pow(y, p)));
                assert_eq!(f.pow(f.mul(x, y), p), f.mul(f.pow(x, p), f.pow(y, p)));
            }
        }
    }
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn field_axioms(idx in 0..FIELDS.len(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(FIELDS[idx]);
        let q = f.order();
        let (x, y, z) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.add(x, f.neg(x)), 0);
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        if x != 0 {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
    }

    #[test]
    fn embedding_commutes_with_arithmetic(pair in 0usize..4, a in any::<u64>(), b in any::<u64>()) {
        let (small, big) = [("3", "3^2"), ("2", "2^3"), ("2^2", "2^4"), ("3^2", "3^4")][pair];
        let (s, l) = (field(small), field(big));
        let emb = l.embedding_from(&s).unwrap();
        let (x, y) = (a % s.order(), b % s.order());
        prop_assert_eq!(emb.apply(s.add(x, y)), l.add(emb.apply(x), emb.apply(y)));
        prop_assert_eq!(emb.apply(s.mul(x, y)), l.mul(emb.apply(x), emb.apply(y)));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn operations_preserve_homogeneity(seed in any::<u64>(), idx in 0usize..6, d in 1u32..4, e in 1u32..3) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (nonzero_form(&f, d, &mut rng), nonzero_form(&f, e, &mut rng));
        let prod = &g * &h;
        prop_assert_eq!(prod.homogeneous_degree(), Some(d + e));
        let sum = &g + &random_form(&f, d, &mut rng);
        prop_assert!(sum.is_zero() || sum.homogeneous_degree() == Some(d));
        for dg in g.gradient() {
            prop_assert!(dg.is_zero() || dg.homogeneous_degree() == Some(d - 1));
        }
        let q = f.order() as u32;
        prop_assert_eq!(g.frobenius_substitute(1).homogeneous_degree(), Some(d * q));
    }

    #[test]
    fn euler_identity(seed in any::<u64>(), idx in 0usize..6, d in 1u32..6) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_form(&f, d, &mut rng);
        let dmodp = d as u64 % f.characteristic();
        prop_assert_eq!(g.euler_combination(), g.scale(dmodp));
    }

    #[test]
    fn restriction_matches_pointwise_evaluation(seed in any::<u64>(), idx in 0usize..6, d in 1u32..5) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_form(&f, d, &mut rng);
        let line = line_at(&f, rng.gen_range(0..line_count(&f)));
        let [a, b] = line.rows();
        let form = g.restrict_to_line(a, b).unwrap();
        for s in 0..f.order() {
            for t in 0..f.order() {
                prop_assert_eq!(form.eval(s, t), g.eval_raw(&add_coords(&f, s, a, t, b)));
            }
        }
    }

    #[test]
    fn multiples_are_divisible(seed in any::<u64>(), idx in 0usize..6, d in 1u32..4, e in 0u32..3) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = nonzero_form(&f, d, &mut rng);
        let h = random_form(&f, e, &mut rng);
        let target = &g * &h;
        prop_assert!(g.divides(&target).unwrap());
        let (quot, rem) = target.div_rem(&g).unwrap();
        prop_assert!(rem.is_zero());
        prop_assert_eq!(&quot * &g, target);
    }

    #[test]
    fn groebner_membership_matches_divides(seed in any::<u64>(), idx in 0usize..3) {
        let f = field(["3", "5", "2^2"][idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = nonzero_form(&f, 2, &mut rng);
        let basis = buchberger(std::slice::from_ref(&g), 32).unwrap();
        prop_assert!(basis.verify());
        for p in basis.polynomials() {
            prop_assert_eq!(p.leading_term().unwrap().1, 1);
        }
        let h = random_form(&f, 2, &mut rng);
        let multiple = &g * &h;
        prop_assert!(basis.contains(&multiple).unwrap());
        let other = random_form(&f, 4, &mut rng);
        prop_assert_eq!(basis.contains(&other).unwrap(), g.divides(&other).unwrap());

        let pair = [g.clone(), nonzero_form(&f, 2, &mut rng)];
        let basis = buchberger(&pair, 32).unwrap();
        prop_assert!(basis.verify());
        for p in basis.polynomials() {
            prop_assert_eq!(p.leading_term().unwrap().1, 1);
        }
        let combo = &(&pair[0] * &random_form(&f, 1, &mut rng)) + &(&pair[1] * &random_form(&f, 1, &mut rng));
        prop_assert!(basis.contains(&combo).unwrap());
    }

    #[test]
    fn quadrics_in_odd_characteristic_have_no_special_tangents(seed in any::<u64>(), idx in 0usize..3) {
        let f = field(["3", "5", "3^2"][idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = nonzero_form(&f, 2, &mut rng);
        let (counts, contained) = count_line_classes(&g).unwrap();
        let q = f.order();
        prop_assert_eq!(counts.total(), (q * q + 1) * (q * q + q + 1));
        prop_assert_eq!(counts.contained as usize, contained.len());
        prop_assert_eq!(counts.special_tangent, 0);
    }

    #[test]
    fn special_tangents_have_no_rational_double_root(seed in any::<u64>()) {
        let f = field("3");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = nonzero_form(&f, 4, &mut rng);
        let classifier = Classifier::new(&g).unwrap();
        for line in enumerate_lines(&f) {
            if let LineClassification::SpecialTangent { repeated_degree } = classifier.classify(&line) {
                prop_assert!(repeated_degree >= 1);
                let [a, b] = line.rows();
                let form = g.restrict_to_line(a, b).unwrap();
                for (_, m) in form.rational_multiplicities().unwrap() {
                    prop_assert!(m <= 1);
                }
            }
        }
    }

    #[test]
    fn shifted_aux_surfaces_share_points(seed in any::<u64>(), m in 0u32..2, n in 0u32..2, k in 1u32..3) {
        let f = field("3");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = nonzero_form(&f, 3, &mut rng);
        let ext = f.extension(k).unwrap();
        let aux = AuxEvaluator::new(&g, &ext).unwrap();
        let mut scratch = Vec::new();
        for p in enumerate_points(3, &ext) {
            let here = aux.eval(m, n, p.coords(), &mut scratch) == 0;
            let shifted = aux.eval(m + 1, n + 1, p.coords(), &mut scratch) == 0;
            prop_assert_eq!(here, shifted, "{}", p);
        }
    }
}

#[test]
fn tangent_planes_contain_their_points() {
    for (text, d, seed) in [("3", 3, 1), ("5", 2, 2), ("5", 4, 3), ("7", 3, 1)] {
        let f = field(text);
        let s = random_smooth_surface(&f, d, seed, 100).unwrap();
        for p in enumerate_points(3, &f) {
            if s.eval_raw(p.coords()) == 0 {
                let plane = tangent_plane(&s, &p).unwrap();
                assert!(plane.contains(&p), "{s} at {p}");
            }
        }
    }
}

#[test]
fn spanned_lines_are_enumerated() {
    let f = field("3");
    let lines: std::collections::HashSet<LineRep> = enumerate_lines(&f).collect();
    let points: Vec<_> = enumerate_points(3, &f).collect();
    for (i, p) in points.iter().enumerate().step_by(3) {
        for r in points.iter().skip(i + 1).step_by(5) {
            let l = LineRep::from_rows(&f, p.coords(), r.coords()).unwrap();
            assert!(lines.contains(&l));
            assert!(l.contains_point(p) && l.contains_point(r));
        }
    }
}

#[test]
fn space_filling_surfaces_contain_every_point() {
    for text in ["3", "5"] {
        let f = field(text);
        let all = point_count(3, &f);
        assert_eq!(count_points_on(&katz_surface(&f), 1).unwrap(), all);
        for forms in spacefilling_candidates(&f, 5, 4) {
            if let Ok(s) = spacefilling_surface(&f, &forms) {
                assert_eq!(count_points_on(&s, 1).unwrap(), all);
            }
        }
    }
}

#[test]
fn gallery_output_round_trips() {
    let f = field("5");
    let mut surfaces = vec![
        katz_surface(&f),
        random_smooth_surface(&f, 3, 1, 50).unwrap(),
    ];
    for forms in spacefilling_candidates(&f, 3, 2) {
        surfaces.extend(spacefilling_surface(&f, &forms));
    }
    for s in surfaces {
        assert_eq!(Polynomial::parse(&s.to_string(), &f, 4).unwrap(), s);
    }
}
