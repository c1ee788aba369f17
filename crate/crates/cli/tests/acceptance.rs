//! Acceptance suite: eight end-to-end criteria, one test each. Every test
//! finishes by printing a single verdict line (visible with --nocapture).
//! All comparisons are exact; the timed criteria carry hard wall-clock
//! bounds.

use std::time::{Duration, Instant};

use conifold_core::{
    complete_from_a, complete_from_b, glue_check, monodromy_block, monodromy_pairing,
    multiple_cover_series, pl_nilpotent, pl_operator, random_presentation, residue_oracle,
    standard_form, yukawa_from_periods, yukawa_principal, ExtremalModel, IntMatrix, OmegaJets,
    Prepotential, Scalar, SphereSystem, SymplecticLattice, TransitionPresentation,
};
use conifold_cli::commands::{cmd_transform, Direction};
use conifold_cli::schema::parse_str;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUITE_SEED: u64 = 42;
const RANDOM_COUNT: usize = 50;

fn im(rows: &[&[i64]]) -> IntMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let entries = rows.iter().flat_map(|row| row.iter().map(|&x| BigInt::from(x))).collect();
    IntMatrix::new(r, c, entries)
}

fn two_node() -> TransitionPresentation {
    TransitionPresentation::new(2, im(&[&[1], &[-1]]), im(&[&[1], &[1]])).unwrap()
}

fn three_node() -> TransitionPresentation {
    complete_from_a(3, im(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap()
}

fn sixteen_node() -> TransitionPresentation {
    complete_from_b(16, im(&(0..16).map(|_| [1i64].as_slice()).collect::<Vec<_>>())).unwrap()
}

fn named_presentations() -> Vec<(&'static str, TransitionPresentation)> {
    vec![("2-node", two_node()), ("3-node", three_node()), ("16-node", sixteen_node())]
}

fn random_suite() -> Vec<TransitionPresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..RANDOM_COUNT).map(|_| random_presentation(&mut rng, 20)).collect()
}

fn all_presentations() -> Vec<(String, TransitionPresentation)> {
    let mut out: Vec<(String, TransitionPresentation)> =
        named_presentations().into_iter().map(|(t, p)| (t.to_string(), p)).collect();
    for (i, p) in random_suite().into_iter().enumerate() {
        out.push((format!("random #{i}"), p));
    }
    out
}

#[test]
fn criterion_1_exact_sequence_on_random_presentations() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for trial in 0..RANDOM_COUNT {
        let p = random_presentation(&mut rng, 20);
        assert!(p.k <= 20 && p.mu() + p.rho() == p.k, "trial {trial}: dimension count");
        let report = p.validate().unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        for name in [
            "dimension-count",
            "orthogonality",
            "rank-of-a",
            "rank-of-b",
            "spheres-span-curve-kernel",
            "curves-span-sphere-kernel",
            "triple-symmetry",
        ] {
            let check = report.check(name).unwrap();
            assert!(check.passed, "trial {trial}: {name} failed: {:?}", check.detail);
        }
        assert!(report.exactness_ok(), "trial {trial}");
        // the generator never leaves a zero row in A
        assert!(report.check("friedman").unwrap().passed, "trial {trial}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, bound is 1 s");
    println!(
        "criterion 1: pass; {RANDOM_COUNT} random presentations (k ≤ 20) satisfy the exact \
         sequence checks in {elapsed:?}"
    );
}

#[test]
fn criterion_2_glue_theorem() {
    let suite = all_presentations();
    for (tag, p) in &suite {
        let report = glue_check(p).unwrap_or_else(|e| panic!("{tag}: {e}"));
        assert!(
            report.dubrovin_glued(),
            "{tag}: quantum side failed: orthogonality {:?}, residues {:?}",
            report.orthogonality_mismatch,
            report.dubrovin_mismatch
        );
        assert!(
            report.gauss_manin_glued(),
            "{tag}: period side failed: det = {}, residues {:?}",
            report.splitting_det,
            report.gauss_manin_mismatch
        );
    }
    println!(
        "criterion 2: pass; both glue verdicts exact on 2-node, 3-node, 16-node, and \
         {RANDOM_COUNT} random presentations"
    );
}

#[test]
fn criterion_3_monodromy_oracle_equivalence() {
    let suite = all_presentations();
    let mut compared = 0usize;
    for (tag, p) in &suite {
        let model = ExtremalModel::new(p.clone(), 1);
        for l in 0..p.rho() {
            let block = monodromy_block(&model, l).unwrap();
            let oracle = residue_oracle(&model, l).unwrap();
            assert!(block == oracle, "{tag}: branch {l} differs from the series residue");
            compared += 1;
        }
    }
    println!(
        "criterion 3: pass; closed-form monodromy blocks match series residues on \
         {compared} branches across {} presentations",
        suite.len()
    );
}

#[test]
fn criterion_4_picard_lefschetz_suite() {
    let mut suite = named_presentations()
        .into_iter()
        .map(|(t, p)| (t.to_string(), p))
        .collect::<Vec<_>>();
    for (i, p) in random_suite().into_iter().take(10).enumerate() {
        suite.push((format!("random #{i}"), p));
    }
    for (tag, p) in &suite {
        let mu = p.mu();
        let lattice = SymplecticLattice::standard(mu);
        let spheres = SphereSystem::new(&lattice, &p.a).unwrap();
        let j = standard_form(mu + 1);
        let t = pl_operator(&lattice, &spheres);
        assert!(t.transpose().mul(&j).mul(&t) == j, "{tag}: pairing not preserved");
        let n = pl_nilpotent(&lattice, &spheres);
        assert!(n.mul(&n).is_zero(), "{tag}: (T − I)² ≠ 0");
        // per-node operators annihilate each other in both orders
        let dim = lattice.rank();
        let single: Vec<IntMatrix> = (0..p.k)
            .map(|i| {
                let mut m = IntMatrix::zeros(dim, dim);
                for r in 0..dim {
                    for c in 0..dim {
                        m.set(r, c, &spheres.dual(i)[r] * &spheres.cycle(i)[c]);
                    }
                }
                m
            })
            .collect();
        for a in &single {
            for b in &single {
                assert!(a.mul(b).is_zero(), "{tag}: node operators do not annihilate");
            }
        }
        for l in 0..mu {
            let pairing = monodromy_pairing(p, l).unwrap();
            let al = p.a.select_rows(|i| !p.a.get(i, l).is_zero());
            assert!(pairing == al.transpose().mul(&al), "{tag}: pairing matrix, branch {l}");
        }
    }
    let anchor = monodromy_pairing(&two_node(), 0).unwrap();
    assert!(anchor == im(&[&[2]]), "worked example A = (1, −1)ᵗ must give [2]");
    println!(
        "criterion 4: pass; monodromy preserves the symplectic form, squares to zero \
         nilpotently, node operators annihilate, pairing anchor [2] reproduced"
    );
}

fn random_weight_two(rng: &mut ChaCha8Rng, h: usize) -> Prepotential {
    loop {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=6) {
            let d = rng.gen_range(0..=5usize);
            let mut e = vec![0i64; h + 1];
            for _ in 0..d {
                e[rng.gen_range(1..=h)] += 1;
            }
            e[0] = 2 - d as i64;
            let num = rng.gen_range(-9..=9i64);
            if num == 0 {
                continue;
            }
            let den = rng.gen_range(1..=4i64);
            terms.push((e, BigRational::new(num.into(), den.into())));
        }
        if terms.is_empty() {
            continue;
        }
        if let Ok(u) = Prepotential::new(h, terms) {
            return u;
        }
    }
}

#[test]
fn criterion_5_bryant_griffiths_flatness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for trial in 0..20 {
        let h = rng.gen_range(1..=4usize);
        let u = random_weight_two(&mut rng, h);
        let (_conn, report) = conifold_core::bryant_griffiths_connection(&u);
        assert!(report.curvature_zero, "trial {trial} (h = {h}): curvature does not vanish");
        assert!(report.euler_ok, "trial {trial} (h = {h}): Euler relation fails");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}, bound is 5 s");
    println!(
        "criterion 5: pass; 20 random weight-2 potentials (h ≤ 4, degree ≤ 5) give flat \
         connections with the Euler relation, in {elapsed:?}"
    );
}

/// Index window for triple enumeration: everything for small μ, six
/// indices spread across the range (both endpoints included) otherwise.
fn coupling_indices(mu: usize) -> Vec<usize> {
    if mu <= 8 {
        return (0..mu).collect();
    }
    let mut picks: Vec<usize> = (0..6).map(|t| t * (mu - 1) / 5).collect();
    picks.dedup();
    picks
}

#[test]
fn criterion_6_yukawa_two_path_agreement() {
    let suite = all_presentations();
    let mut compared = 0usize;
    for (tag, p) in &suite {
        let expansion = omega(p);
        let idx = coupling_indices(p.mu());
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate().skip(i) {
                for &c in &idx[j..] {
                    let direct = yukawa_principal(p, a, b, c).unwrap();
                    let via_periods = yukawa_from_periods(&expansion, a, b, c).unwrap();
                    assert!(
                        direct.sub(&via_periods).is_zero(),
                        "{tag}: coupling ({a}, {b}, {c}) differs between the two paths"
                    );
                    compared += 1;
                }
            }
        }
    }
    println!(
        "criterion 6: pass; {compared} triple couplings agree exactly between the direct \
         formula and period derivatives across {} presentations",
        suite.len()
    );
}

fn omega(p: &TransitionPresentation) -> conifold_core::OmegaExpansion {
    conifold_core::omega_expansion(p, &OmegaJets::default_for(p.mu())).unwrap()
}

#[test]
fn criterion_7_multiple_cover_coefficients() {
    let s = multiple_cover_series(4);
    for d in 1..=4u32 {
        let expected = BigRational::new(BigInt::from(1), BigInt::from(i64::from(d).pow(3)));
        assert!(
            s.coefficient(&[d], &[0]) == Scalar::from_rational(expected),
            "degree {d} coefficient is not 1/d³"
        );
    }
    println!("criterion 7: pass; cover contributions 1/1, 1/8, 1/27, 1/64 at degrees 1..4");
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("conifold-acceptance-{}-{name}.json", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn random_gw_list(rng: &mut ChaCha8Rng, mu: usize) -> Vec<(Vec<i64>, String)> {
    let mut classes = std::collections::BTreeMap::new();
    for _ in 0..rng.gen_range(1..=6) {
        let class: Vec<i64> = (0..mu).map(|_| rng.gen_range(-5..=5)).collect();
        if class.iter().all(|&x| x == 0) {
            continue;
        }
        let num = loop {
            let n = rng.gen_range(-9..=9i64);
            if n != 0 {
                break n;
            }
        };
        let r = BigRational::new(num.into(), rng.gen_range(1..=9i64).into());
        classes.insert(class, format!("{}/{}", r.numer(), r.denom()));
    }
    classes.into_iter().collect()
}

fn presentation_json(p: &TransitionPresentation, gw: &[(Vec<i64>, String)]) -> String {
    let matrix = |m: &IntMatrix| {
        let rows: Vec<String> = (0..m.rows())
            .map(|i| {
                let cells: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    };
    let entries: Vec<String> = gw
        .iter()
        .map(|(class, n)| {
            let cells: Vec<String> = class.iter().map(i64::to_string).collect();
            format!(r#"{{"class": [{}], "n": "{n}"}}"#, cells.join(", "))
        })
        .collect();
    format!(
        r#"{{"k": {}, "A": {}, "B": {}, "gw": [{}]}}"#,
        p.k,
        matrix(&p.a),
        matrix(&p.b),
        entries.join(", ")
    )
}

#[test]
fn criterion_8_transform_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let presentations = [two_node(), three_node()];
    let mut inputs = Vec::new();
    for trial in 0..20 {
        let p = &presentations[trial % presentations.len()];
        let gw = random_gw_list(&mut rng, p.mu());
        inputs.push((trial, presentation_json(p, &gw), gw));
    }
    let start = Instant::now();
    for (trial, json, gw) in &inputs {
        let forward_path = write_temp(&format!("fwd-{trial}"), json);
        let forward = cmd_transform(&forward_path, Direction::XToY).unwrap();
        assert_eq!(forward.code, 0, "trial {trial}: forward transform failed");
        let back_path = write_temp(&format!("back-{trial}"), &forward.stdout);
        let back = cmd_transform(&back_path, Direction::YToX).unwrap();
        assert_eq!(back.code, 0, "trial {trial}: backward transform failed");
        let file = parse_str(&back.stdout).unwrap();
        let returned: Vec<(Vec<i64>, String)> =
            file.gw.unwrap().into_iter().map(|e| (e.class, e.n)).collect();
        assert_eq!(&returned, gw, "trial {trial}: round trip is not the identity");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, bound is 1 s");
    println!(
        "criterion 8: pass; 20 random coefficient lists survive x-to-y ∘ y-to-x unchanged \
         in {elapsed:?}"
    );
}

/// Exit-code contract through the real binary: 0 valid, 1 named violation,
/// 2 unparseable input or bad flags.
#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_conifold");
    let run = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();

    let valid = write_temp("bin-valid", r#"{"k": 2, "A": [[1], [-1]], "B": [[1], [1]]}"#);
    let out = run(&["validate", valid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("result: pass"));

    let broken = write_temp("bin-broken", r#"{"k": 2, "A": [[1], [-1]], "B": [[1], [2]]}"#);
    let out = run(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("(AᵗB)[0][0]"));

    let malformed = write_temp("bin-malformed", "{\"k\": ");
    let out = run(&["validate", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["transform", valid.to_str().unwrap(), "--direction", "sideways"]);
    assert_eq!(out.status.code(), Some(2), "bad direction must be a usage error");

    let out = run(&["report", valid.to_str().unwrap(), "--glue", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"dubrovin\": \"pass\""));
    assert!(text.contains("\"gauss_manin\": \"pass\""));
    println!("binary: pass; exit codes 0/1/2 and report plumbing verified end to end");
}
