//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with its
//! measured time and the pinned limit, then asserts.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fqlines::census::{
    aux_surface, count_line_classes, full_census_with, hessian_vanishes_on, is_frobenius_classical,
    CensusOptions,
};
use fqlines::field::parse_field_literal;
use fqlines::gallery::{
    fermat_surface, katz_surface, monomials_of_degree, random_form, random_smooth_surface,
    spacefilling_candidates, spacefilling_surface,
};
use fqlines::groebner::{certify_smooth, SmoothnessVerdict};
use fqlines::projective::{
    count_points_on, enumerate_points, find_common_zero, line_count, lines_contained_in,
    tangent_plane, PlaneRep,
};
use fqlines::{BinaryForm, FieldSpec, Monomial, Polynomial};

/// Runs one criterion, prints its verdict line and fails the test on error
/// or when the time limit is exceeded.
fn criterion(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Result<String, String>) {
    let started = Instant::now();
    let outcome = body();
    let elapsed = started.elapsed();
    let (pass, detail) = match &outcome {
        Ok(d) if elapsed <= limit => (true, d.clone()),
        Ok(d) => (false, format!("{d}; too slow")),
        Err(e) => (false, e.clone()),
    };
    let line = format!(
        "[{}] criterion {id:>2}: {title}: {detail} ({:.2} s, limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    // Written to the raw handle so the verdict shows without --nocapture.
    std::io::stderr()
        .write_all(format!("{line}\n").as_bytes())
        .unwrap();
    assert!(pass, "{line}");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(text: &str) -> FieldSpec {
    parse_field_literal(text).unwrap()
}

fn poly(text: &str, f: &FieldSpec) -> Polynomial {
    Polynomial::parse(text, f, 4).unwrap()
}

fn quick(workers: usize) -> CensusOptions {
    CensusOptions {
        workers: Some(workers),
        check_hypotheses: false,
        ..Default::default()
    }
}

fn seeded_cubic(f: &FieldSpec) -> Polynomial {
    random_smooth_surface(f, 3, 1, 50).unwrap()
}

/// Seeded smooth surfaces: `d` in {2, 3, 4} and `q` in {3, 5}.
fn smooth_corpus() -> Vec<(u64, u32, Polynomial)> {
    let combos = [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (5, 4)];
    (0..20u64)
        .map(|i| {
            let (q, d) = combos[i as usize % combos.len()];
            let f = field(&q.to_string());
            (q, d, random_smooth_surface(&f, d, i, 200).unwrap())
        })
        .collect()
}

#[test]
fn criterion_01_line_totals() {
    criterion(1, "line totals", Duration::from_secs(30), || {
        let mut parts = Vec::new();
        for (q, text) in [
            (2u64, "X0*X3 + X1*X2"),
            (3, "X0*X3 - X1*X2"),
            (5, "X0^3 + X1^3 + X2^3 + X3^3"),
        ] {
            let f = field(&q.to_string());
            let started = Instant::now();
            let report = full_census_with(&poly(text, &f), &quick(4)).map_err(|e| e.to_string())?;
            let secs = started.elapsed().as_secs_f64();
            let expected = (q * q + 1) * (q * q + q + 1);
            ensure(
                report.census.total() == expected && line_count(&f) == expected,
                || format!("q={q}: total {} != {expected}", report.census.total()),
            )?;
            ensure(secs < 1.0, || format!("q={q} took {secs:.2} s"))?;
            parts.push(format!("q={q}: {expected}"));
        }
        let f7 = field("7");
        let report = full_census_with(&seeded_cubic(&f7), &quick(4)).map_err(|e| e.to_string())?;
        ensure(report.census.total() == 50 * 57, || {
            format!("q=7: total {}", report.census.total())
        })?;
        parts.push("q=7: 2850".into());
        Ok(parts.join(", "))
    });
}

#[test]
fn criterion_02_katz_surface() {
    criterion(2, "Katz surface over F_3", Duration::from_secs(5), || {
        let f = field("3");
        let katz = katz_surface(&f);
        let (q, d) = (3u64, 4u64);
        let points = count_points_on(&katz, 1).map_err(|e| e.to_string())?;
        let homma_kim = (q + 1) * (q * d - q + 1);
        ensure(points == 40 && homma_kim == 40, || {
            format!("{points} points, bound {homma_kim}")
        })?;
        ensure(aux_surface(&katz, 1, 0).unwrap().is_zero(), || {
            "aux(1,0) nonzero".into()
        })?;
        ensure(!is_frobenius_classical(&katz, 1).unwrap(), || {
            "classical".into()
        })?;
        let mut planes = HashSet::new();
        for p in enumerate_points(3, &f) {
            if katz.eval_raw(p.coords()) == 0 {
                planes.insert(
                    *tangent_plane(&katz, &p)
                        .map_err(|e| e.to_string())?
                        .coeffs(),
                );
            }
        }
        let all_planes: HashSet<[u64; 4]> = enumerate_points(3, &f)
            .map(|p| {
                *PlaneRep::new(&f, p.coords().try_into().unwrap())
                    .unwrap()
                    .coeffs()
            })
            .collect();
        ensure(planes == all_planes, || {
            format!("{} tangent planes", planes.len())
        })?;
        Ok(format!(
            "{points} points, aux(1,0) = 0, non-classical, 40/40 planes tangent"
        ))
    });
}

#[test]
fn criterion_03_spacefilling_has_no_transverse_lines() {
    criterion(
        3,
        "space-filling family over F_3",
        Duration::from_secs(30),
        || {
            let f = field("3");
            let members: Vec<Polynomial> = spacefilling_candidates(&f, 60, 1)
                .iter()
                .filter_map(|forms| spacefilling_surface(&f, forms).ok())
                .take(25)
                .collect();
            ensure(members.len() == 25, || {
                format!("only {} nonzero members", members.len())
            })?;
            for (k, s) in members.iter().enumerate() {
                ensure(s.homogeneous_degree() == Some(5), || {
                    format!("member {k} has wrong degree")
                })?;
                let (counts, _) = count_line_classes(s).map_err(|e| e.to_string())?;
                ensure(counts.transverse == 0 && counts.total() == 130, || {
                    format!("member {k}: {} transverse", counts.transverse)
                })?;
            }
            Ok("25 members, 0 transverse lines each".into())
        },
    );
}

#[test]
fn criterion_04_transverse_bound_f7() {
    criterion(
        4,
        "transverse lower bound, cubic over F_7",
        Duration::from_secs(60),
        || {
            let f = field("7");
            let s = seeded_cubic(&f);
            let report =
                full_census_with(&s, &CensusOptions::default()).map_err(|e| e.to_string())?;
            let hyp = report.hypotheses.as_ref().unwrap();
            ensure(hyp.smooth.is_smooth(), || "not certified smooth".into())?;
            ensure(hyp.frobenius_classical_r1.trusted() == Some(true), || {
                "not classical".into()
            })?;
            let bound = report.bounds.get("transverse_classical").unwrap();
            ensure(
                bound.integer_threshold() == 1202 && bound.applicable,
                || format!("threshold {}", bound.integer_threshold()),
            )?;
            let t = report.census.transverse;
            ensure(t >= 1202, || format!("{t} transverse < 1202"))?;
            ensure(report.violations().is_empty(), || {
                format!("violations {:?}", report.violations())
            })?;
            Ok(format!("{t} transverse >= 1202"))
        },
    );
}

#[test]
fn criterion_05_transverse_existence_f9() {
    criterion(
        5,
        "transverse lines, cubic over F_9",
        Duration::from_secs(300),
        || {
            let f = field("3^2");
            let s = seeded_cubic(&f);
            let opts = CensusOptions {
                workers: Some(4),
                ..Default::default()
            };
            let report = full_census_with(&s, &opts).map_err(|e| e.to_string())?;
            ensure(
                report.hypotheses.as_ref().unwrap().smooth.is_smooth(),
                || "not smooth".into(),
            )?;
            ensure(report.census.total() == 7462, || {
                format!("total {}", report.census.total())
            })?;
            let bound = report.bounds.get("transverse_smooth").unwrap();
            ensure(bound.integer_threshold() == 3197, || {
                format!("threshold {}", bound.integer_threshold())
            })?;
            let t = report.census.transverse;
            ensure(t >= 3197, || format!("{t} transverse < 3197"))?;
            Ok(format!("{t} transverse >= 3197 of 7462"))
        },
    );
}

#[test]
fn criterion_06_point_bounds() {
    criterion(
        6,
        "point-count bounds on smooth corpus",
        Duration::from_secs(120),
        || {
            let mut lineless = 0;
            for (q, d, s) in smooth_corpus() {
                let d = d as u64;
                let points = count_points_on(&s, 1).map_err(|e| e.to_string())?;
                ensure(points <= (q + 1) * (q * d - q + 1), || {
                    format!("{s}: {points} points")
                })?;
                if lines_contained_in(&s)
                    .map_err(|e| e.to_string())?
                    .is_empty()
                {
                    lineless += 1;
                    ensure(points <= (d - 1) * (q * q + 1), || {
                        format!("{s}: {points} points, no lines")
                    })?;
                }
            }
            Ok(format!("20 surfaces, {lineless} without rational lines"))
        },
    );
}

#[test]
fn criterion_07_contained_lines_on_aux_surfaces() {
    criterion(
        7,
        "contained lines lie on every auxiliary surface",
        Duration::from_secs(30),
        || {
            let f = field("3");
            let cases = [
                ("quadric", poly("X0*X3 - X1*X2", &f), 8),
                ("Fermat", fermat_surface(&f), 8),
            ];
            let mut checked = 0;
            for (name, s, expected) in cases {
                let lines = lines_contained_in(&s).map_err(|e| e.to_string())?;
                ensure(lines.len() == expected, || {
                    format!("{name}: {} lines", lines.len())
                })?;
                for m in 0..=2 {
                    for n in 0..=2 {
                        let aux = aux_surface(&s, m, n).map_err(|e| e.to_string())?;
                        for l in &lines {
                            let [a, b] = l.rows();
                            let r = aux.restrict_to_line(a, b).map_err(|e| e.to_string())?;
                            ensure(r.is_zero(), || format!("{name}: {l} not on S_{m},{n}"))?;
                            checked += 1;
                        }
                    }
                }
            }
            Ok(format!("{checked} (line, m, n) triples"))
        },
    );
}

#[test]
fn criterion_08_hessian_consistency() {
    criterion(
        8,
        "non-classical implies vanishing Hessian",
        Duration::from_secs(60),
        || {
            let (f3, f5, f9) = (field("3"), field("5"), field("3^2"));
            let mut surfaces: Vec<Polynomial> =
                smooth_corpus().into_iter().map(|(_, _, s)| s).collect();
            surfaces.extend([
                katz_surface(&f3),
                katz_surface(&f5),
                fermat_surface(&f3),
                fermat_surface(&f5),
                fermat_surface(&f9),
                poly("X0*X3 - X1*X2", &f3),
                seeded_cubic(&f9),
            ]);
            let mut non_classical = 0;
            for s in &surfaces {
                let classical = is_frobenius_classical(s, 1).map_err(|e| e.to_string())?;
                let vanishes = hessian_vanishes_on(s).map_err(|e| e.to_string())?;
                ensure(classical || vanishes, || {
                    format!("{s}: non-classical, Hessian nonvanishing")
                })?;
                non_classical += usize::from(!classical);
            }
            let fermat9 = fermat_surface(&f9);
            ensure(
                !is_frobenius_classical(&fermat9, 1).unwrap()
                    && hessian_vanishes_on(&fermat9).unwrap(),
                || "Fermat over F_9".into(),
            )?;
            let quad = poly("X0*X3 - X1*X2", &f3);
            ensure(
                is_frobenius_classical(&quad, 1).unwrap() && !hessian_vanishes_on(&quad).unwrap(),
                || "quadric over F_3".into(),
            )?;
            Ok(format!(
                "{} surfaces, {non_classical} non-classical",
                surfaces.len()
            ))
        },
    );
}

/// Solves for `h` with `g h = f` by linear algebra on coefficient vectors.
fn divides_by_linear_algebra(g: &Polynomial, f: &Polynomial) -> bool {
    let field = g.field();
    let (dg, df) = (
        g.homogeneous_degree().unwrap(),
        f.homogeneous_degree().unwrap(),
    );
    if df < dg {
        return false;
    }
    let rows = monomials_of_degree(df);
    let cols: Vec<Polynomial> = monomials_of_degree(df - dg)
        .iter()
        .map(|m| g.mul_monomial(m, 1))
        .collect();
    // augmented matrix [cols | f]
    let mut mat: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c.coefficient(r)).collect();
            row.push(f.coefficient(r));
            row
        })
        .collect();
    let rank_a = rank(
        field,
        &mut mat
            .iter()
            .map(|r| r[..cols.len()].to_vec())
            .collect::<Vec<_>>(),
    );
    rank_a == rank(field, &mut mat)
}

fn rank(f: &FieldSpec, mat: &mut [Vec<u64>]) -> usize {
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(pivot) = (r..mat.len()).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pivot);
        let inv = f.inv(mat[r][c]).unwrap();
        for i in 0..mat.len() {
            if i != r && mat[i][c] != 0 {
                let k = f.mul(mat[i][c], inv);
                let pivot_row = mat[r].clone();
                for (x, y) in mat[i].iter_mut().zip(pivot_row).skip(c) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
        }
        r += 1;
    }
    r
}

/// Repeated root over `F_{q^k}` for some `k <= 4`, found as a common zero of
/// the form and both partial derivatives.
fn has_repeated_root_by_scan(form: &BinaryForm) -> bool {
    let base = form.field();
    let d = form.degree() as u32;
    let g = Polynomial::from_terms(
        base,
        2,
        form.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::from_exponents(&[d - i as u32, i as u32]), *c)),
    );
    let mut system = vec![g.clone()];
    system.extend(g.gradient());
    (1..=4).any(|k| {
        let ext = base.extension(k).unwrap();
        let lifted: Vec<Polynomial> = system.iter().map(|p| p.embed(&ext).unwrap()).collect();
        let points = (0..ext.order())
            .map(|t| [1, t])
            .chain(std::iter::once([0, 1]));
        points
            .into_iter()
            .any(|pt| lifted.iter().all(|p| p.eval_raw(&pt) == 0))
    })
}

#[test]
fn criterion_09_oracle_cross_checks() {
    criterion(9, "oracle cross-checks", Duration::from_secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut divisible = 0;
        for i in 0..200 {
            let f = field(["3", "5", "2^2"][i % 3]);
            let g = loop {
                let g = random_form(&f, rng.gen_range(1..=2), &mut rng);
                if !g.is_zero() {
                    break g;
                }
            };
            let dh = rng.gen_range(0..=2);
            let h = random_form(&f, dh, &mut rng);
            let mut target = &g * &h;
            if rng.gen_bool(0.5) {
                let e = random_form(&f, g.homogeneous_degree().unwrap() + dh, &mut rng);
                target = &target + &e;
            }
            if target.is_zero() {
                continue;
            }
            let fast = g.divides(&target).map_err(|e| e.to_string())?;
            let oracle = divides_by_linear_algebra(&g, &target);
            ensure(fast == oracle, || {
                format!("divides({g}, {target}) = {fast}")
            })?;
            let (quot, rem) = target.div_rem(&g).map_err(|e| e.to_string())?;
            ensure(&(&quot * &g) + &rem == target, || {
                format!("reconstruction failed for {g}")
            })?;
            divisible += usize::from(fast);
        }

        let f3 = field("3");
        let mut forms = 0;
        for d in 1..=4u32 {
            for code in 1..3u64.pow(d + 1) {
                let coeffs: Vec<u64> = (0..=d).map(|i| code / 3u64.pow(i) % 3).collect();
                let form = BinaryForm::new(&f3, coeffs);
                let fast = form.squarefree().map_err(|e| e.to_string())?.squarefree;
                ensure(fast != has_repeated_root_by_scan(&form), || {
                    format!("{:?}", form.coeffs())
                })?;
                forms += 1;
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut surfaces: Vec<Polynomial> = (0..20)
            .map(|i| random_form(&f3, 2 + i % 3, &mut rng))
            .filter(|s| !s.is_zero())
            .collect();
        surfaces.extend([
            poly("X0^2*X1", &f3),
            poly("X0*X3 - X1*X2", &f3),
            katz_surface(&f3),
        ]);
        surfaces.extend(
            smooth_corpus()
                .into_iter()
                .filter(|(q, _, _)| *q == 3)
                .map(|(_, _, s)| s),
        );
        let (mut smooth, mut singular) = (0, 0);
        for s in &surfaces {
            let mut system = vec![s.clone()];
            system.extend(s.gradient());
            let scan = (1..=3)
                .find_map(|k| find_common_zero(&system, k).unwrap())
                .map(|p| p.to_string());
            match certify_smooth(s) {
                SmoothnessVerdict::Smooth => {
                    ensure(scan.is_none(), || {
                        format!("{s}: smooth but singular at {}", scan.unwrap())
                    })?;
                    smooth += 1;
                }
                SmoothnessVerdict::Singular { witness } => {
                    if let Some(w) = witness {
                        let ok = system
                            .iter()
                            .all(|p| p.embed(w.field()).unwrap().eval_raw(w.coords()) == 0);
                        ensure(ok, || format!("{s}: bad witness {w}"))?;
                    }
                    singular += 1;
                }
                SmoothnessVerdict::Inconclusive { .. } => {}
            }
        }
        Ok(format!(
            "200 division instances ({divisible} divisible), {forms} binary forms, {smooth} smooth / {singular} singular surfaces"
        ))
    });
}

fn random_invertible(f: &FieldSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    loop {
        let m: Vec<Vec<u64>> = (0..4)
            .map(|_| (0..4).map(|_| rng.gen_range(0..f.order())).collect())
            .collect();
        if rank(f, &mut m.clone()) == 4 {
            return m;
        }
    }
}

#[test]
fn criterion_10_pgl_invariance() {
    criterion(
        10,
        "census invariant under coordinate change",
        Duration::from_secs(120),
        || {
            let f = field("5");
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            for s in [poly("X0*X3 - X1*X2", &f), seeded_cubic(&f)] {
                let (base, _) = count_line_classes(&s).map_err(|e| e.to_string())?;
                for _ in 0..10 {
                    let a = random_invertible(&f, &mut rng);
                    let t = s.substitute_linear(&a).map_err(|e| e.to_string())?;
                    let (counts, _) = count_line_classes(&t).map_err(|e| e.to_string())?;
                    ensure(counts == base, || format!("{s}: {counts:?} != {base:?}"))?;
                }
            }
            Ok("2 surfaces x 10 transforms".into())
        },
    );
}
