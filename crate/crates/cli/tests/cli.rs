use std::path::PathBuf;
use std::process::Command;

use chiral_cli::{parse_datum, print_datum, run, ParsedDatum};
use chiral_core::catalog::{bc, beta_gamma, commutative_example, four_generator_example, heisenberg, kac_moody_example, sl2, SL2_NAMES};
use chiral_core::datum::{dual_datum, module_equal, GeneratorSpec, Parity, QuadraticDatum};
use chiral_core::laurent::LaurentPoly;
use chiral_core::scalar::{int, rat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.display().to_string()
}

fn chiral(args: &[&str]) -> (i32, String, String) {
    let out = run(std::iter::once("chiral").chain(args.iter().copied()));
    (out.code, out.stdout, out.stderr)
}

fn assert_round_trip(d: &QuadraticDatum) {
    let text = print_datum(d);
    let back = parse_datum(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(back.datum().generators(), d.generators());
    assert!(module_equal(back.datum().relations(), d.relations()).unwrap());
}

#[test]
fn catalog_data_round_trip() {
    let bundles = [
        four_generator_example().unwrap(),
        commutative_example(&[0, 2, -1]).unwrap(),
        kac_moody_example(&sl2(int(3)).unwrap(), Some(&SL2_NAMES)).unwrap(),
        kac_moody_example(&heisenberg(rat(-1, 2)).unwrap(), None).unwrap(),
        beta_gamma().unwrap(),
        bc().unwrap(),
    ];
    for b in &bundles {
        assert_round_trip(b.datum.datum());
        assert_round_trip(&dual_datum(b.datum.datum()).unwrap());
    }
}

#[test]
fn data_file_matches_catalog() {
    let text = std::fs::read_to_string(data("four_generator.datum")).unwrap();
    let parsed = parse_datum(&text).unwrap();
    let b = four_generator_example().unwrap();
    assert_eq!(parsed.datum(), b.datum.datum());
}

#[test]
fn small_grammar_cases() {
    let d = parse_datum("[generators]\nphi3 0 even 1\nphi4 0 even 1\n[relations]\n1 t^-1 phi3 phi4\n").unwrap();
    assert_eq!(d.datum().relations().len(), 1);
    assert_eq!(d.datum().relations()[0][1], LaurentPoly::t_pow(-1));

    let d = parse_datum("[generators]\nx 0 odd 1/2 # comment\n[relations]\n").unwrap();
    assert!(d.datum().relations().is_empty());
    assert!(!chiral_core::datum::validate(d.datum()).is_valid_datum);

    let q = parse_datum("[generators]\nunit 0 even 0\nx 1 even 1\n").unwrap();
    assert!(matches!(q, ParsedDatum::Qls(_)));
}

#[test]
fn parse_errors_are_positioned() {
    let cases = [
        ("[generators]\nx 0 even 1\n[relations]\n1 t^0 x y\n", 4, 9),
        ("[generators]\nx 0 even 1\n[relations]\n1 t0 x x\n", 4, 3),
        ("[generators]\nx 0 maybe 1\n", 2, 5),
        ("[generators]\nx 0 even 1\nx 1 odd 0\n", 3, 1),
        ("x 0 even 1\n", 1, 1),
        ("[generators]\nx 0 even 1\n[relations]\n1 t^0 x x +\n", 4, 11),
        ("[generators]\nx 0 even 1\n[relations]\n1 t^0 x x + -1 t^0 x x\n", 4, 1),
        ("[generators]\nunit 0 even 1\n", 2, 1),
        ("[generators]\nx 0 even one\n", 2, 10),
        ("[gens]\n", 1, 1),
    ];
    for (text, line, column) in cases {
        let e = parse_datum(text).unwrap_err();
        assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_data_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=3);
        let gens: Vec<GeneratorSpec> = (0..r)
            .map(|i| {
                let p = if rng.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
                GeneratorSpec::new(format!("g{i}"), rng.gen_range(-3..=3), p, rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
            })
            .collect();
        let rows: Vec<Vec<LaurentPoly>> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let mut row = vec![LaurentPoly::zero(); r * r];
                while row.iter().all(LaurentPoly::is_zero) {
                    for p in row.iter_mut() {
                        if rng.gen_bool(0.4) {
                            p.add_term(rng.gen_range(-3..=3), rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
                        }
                    }
                }
                row
            })
            .collect();
        let d = QuadraticDatum::new(gens, rows).unwrap();
        let back = parse_datum(&print_datum(&d)).unwrap();
        prop_assert_eq!(back.datum(), &d);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(chiral(&["check", &data("four_generator.datum")]).0, 0);
    let (code, out, _) = chiral(&["check", &data("nondualizable.datum")]);
    assert_eq!(code, 2);
    assert!(out.contains("1 t^0 + 1 t^1"), "{out}");
    assert_eq!(chiral(&["check", &data("missing.datum")]).0, 1);
    assert_eq!(chiral(&["dual", &data("nondualizable.datum")]).0, 2);
    assert_eq!(chiral(&["qls-dual", &data("sl2_level1.datum")]).0, 0);
    assert_eq!(chiral(&["qls-dual", &data("four_generator.datum")]).0, 1);
    assert_eq!(chiral(&["mc-verify", "--example", "kac-moody-sl2", "--level", "1", "--cutoff", "4"]).0, 0);
    assert_eq!(chiral(&["mc-verify", "--example", "nope"]).0, 1);
    assert_eq!(chiral(&["mc-verify"]).0, 1);
    assert_eq!(chiral(&["hom-check", &data("sl2_level1.datum"), &data("sl2_identity.map")]).0, 0);
    assert_eq!(chiral(&["hom-check", &data("sl2_level1.datum"), &data("sl2_perturbed.map")]).0, 2);
    assert_eq!(chiral(&["hom-check", &data("heisenberg.datum"), &data("heisenberg_to_beta_gamma.map")]).0, 2);
    assert_eq!(chiral(&["frobnicate"]).0, 1);
    assert_eq!(chiral(&["--help"]).0, 0);
}

#[test]
fn qls_dual_on_non_qls_datum_is_negative() {
    let dir = std::env::temp_dir().join(format!("chiral-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("extra.datum");
    let text = std::fs::read_to_string(data("heisenberg.datum")).unwrap() + "1 t^-1 unit b\n";
    std::fs::write(&path, text).unwrap();
    let p = path.display().to_string();
    assert_eq!(chiral(&["check", &p]).0, 2);
    let (code, out, _) = chiral(&["--json", "qls-dual", &p]);
    assert_eq!(code, 2);
    assert!(out.contains("\"qls\": false"), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dual_output_reparses_to_original() {
    for name in ["four_generator.datum", "sl2_level1.datum", "bc.datum"] {
        let (code, out, _) = chiral(&["dual", &data(name)]);
        assert_eq!(code, 0);
        let dual = parse_datum(&out).unwrap();
        let back = dual_datum(dual.datum()).unwrap();
        let orig = parse_datum(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        assert_eq!(back.generators(), orig.datum().generators());
        assert!(module_equal(back.relations(), orig.datum().relations()).unwrap(), "{name}");
    }
}

#[test]
fn json_reports_are_stable() {
    let runs: Vec<Vec<String>> = vec![
        vec!["check".into(), data("sl2_level1.datum")],
        vec!["qls-dual".into(), data("bc.datum")],
        vec!["mc-verify".into(), data("beta_gamma.datum")],
        vec!["hom-check".into(), data("sl2_level1.datum"), data("sl2_perturbed.map")],
    ];
    for args in runs {
        let mut full = vec!["--json"];
        full.extend(args.iter().map(String::as_str));
        let (c1, a, _) = chiral(&full);
        let (c2, b, _) = chiral(&full);
        assert_eq!((c1, &a), (c2, &b));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["exit_code"], c1);
    }
}

#[test]
fn cutoff_env_override() {
    let bin = env!("CARGO_BIN_EXE_chiral");
    let out = Command::new(bin)
        .args(["--json", "mc-verify", "--example", "bc"])
        .env("CHIRAL_CUTOFF", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["cutoff"], 3);
    let out = Command::new(bin)
        .args(["mc-verify", "--example", "bc"])
        .env("CHIRAL_CUTOFF", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin)
        .args(["check", &data("nondualizable.datum")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
