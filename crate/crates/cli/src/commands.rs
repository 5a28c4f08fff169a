use std::fmt::Write as _;
use std::path::Path;

use chiral_core::catalog::{
    bc, beta_gamma, heisenberg, kac_moody_example, sl2, ExampleBundle, Source, SL2_NAMES,
};
use chiral_core::datum::{dual_datum, validate};
use chiral_core::qls::{check_qls, extract_twisted_pair, QlsError, TwistedPairPresentation};
use chiral_core::scalar::{int, parse_scalar, Scalar};
use chiral_core::vertex::derivation::bilinear_state;
use chiral_core::vertex::{
    hom_check, mc_check, McSetup, ModeAlgebra, RelationWitness, Side, State, TensorEngine, DEFAULT_CUTOFF,
};
use serde::Serialize;

use crate::family::{recognize, Family};
use crate::text::{datum_from_sections, parse_state, sections, ParsedDatum};
use crate::{Cli, CliError, Command, Outcome, CUTOFF_ENV, EXIT_NEGATIVE};

#[derive(Debug, Serialize)]
struct Report<T: Serialize> {
    command: Vec<String>,
    status: &'static str,
    exit_code: i32,
    result: T,
    golden: Vec<Golden>,
}

/// A comparison against a closed-form or independently computed value.
#[derive(Debug, Serialize)]
struct Golden {
    quantity: String,
    source: &'static str,
    matches: bool,
}

fn source_name(s: Source) -> &'static str {
    match s {
        Source::ClosedForm => "closed-form",
        Source::Computed => "computed",
    }
}

struct Rendered<T: Serialize> {
    echo: Vec<String>,
    passed: bool,
    result: T,
    golden: Vec<Golden>,
    text: String,
}

fn finish<T: Serialize>(json: bool, r: Rendered<T>) -> Outcome {
    let code = if r.passed { 0 } else { EXIT_NEGATIVE };
    let stdout = if json {
        let report = Report {
            command: r.echo,
            status: if r.passed { "pass" } else { "negative" },
            exit_code: code,
            result: r.result,
            golden: r.golden,
        };
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        r.text
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check { file } => check(cli.json, file),
        Command::Dual { file } => dual(cli.json, file),
        Command::QlsDual { file } => qls_dual(cli.json, file),
        Command::McVerify {
            file,
            example,
            level,
            cutoff,
            mmax,
        } => mc_verify(cli.json, file.as_deref(), example.as_deref(), level.as_deref(), *cutoff, *mmax),
        Command::HomCheck { file, map, cutoff } => hom(cli.json, file, map, *cutoff),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<ParsedDatum, CliError> {
    crate::parse_datum(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, Serialize)]
struct CheckResult {
    rank: usize,
    qls_datum: bool,
    valid_datum: bool,
    dualizable: bool,
    qls_condition: Option<bool>,
    determinant: String,
    max_pole_order: Option<i64>,
    failure_witness: Option<String>,
}

fn check(json: bool, file: &Path) -> Result<Outcome, CliError> {
    let parsed = load(file)?;
    let rep = validate(parsed.datum());
    let qls = match &parsed {
        ParsedDatum::Qls(q) => Some(check_qls(q)),
        ParsedDatum::Quadratic(_) => None,
    };
    let result = CheckResult {
        rank: parsed.datum().rank(),
        qls_datum: qls.is_some(),
        valid_datum: rep.is_valid_datum,
        dualizable: rep.is_dualizable,
        qls_condition: qls,
        determinant: rep.determinant.to_string(),
        max_pole_order: rep.max_pole_order,
        failure_witness: rep.failure_witness.clone(),
    };
    let mut text = String::new();
    writeln!(text, "generators: {}", result.rank).unwrap();
    writeln!(text, "valid datum: {}", yes(result.valid_datum)).unwrap();
    writeln!(text, "dualizable: {}", yes(result.dualizable)).unwrap();
    if let Some(q) = qls {
        writeln!(text, "qls: {}", yes(q)).unwrap();
    }
    writeln!(text, "determinant: {}", result.determinant).unwrap();
    if let Some(p) = result.max_pole_order {
        writeln!(text, "max pole order: {p}").unwrap();
    }
    if let Some(w) = &result.failure_witness {
        writeln!(text, "witness: {w}").unwrap();
    }
    Ok(finish(
        json,
        Rendered {
            echo: vec!["check".into(), file.display().to_string()],
            passed: rep.is_dualizable && qls != Some(false),
            result,
            golden: Vec::new(),
            text,
        },
    ))
}

#[derive(Debug, Serialize)]
struct DualResult {
    dualizable: bool,
    determinant: String,
    dual: Option<String>,
}

fn dual(json: bool, file: &Path) -> Result<Outcome, CliError> {
    let parsed = load(file)?;
    let rep = validate(parsed.datum());
    let dual = if rep.is_dualizable {
        Some(crate::print_datum(&dual_datum(parsed.datum())?))
    } else {
        None
    };
    let text = match &dual {
        Some(d) => d.clone(),
        None => format!("not dualizable: determinant {}\n", rep.determinant),
    };
    Ok(finish(
        json,
        Rendered {
            echo: vec!["dual".into(), file.display().to_string()],
            passed: dual.is_some(),
            result: DualResult {
                dualizable: rep.is_dualizable,
                determinant: rep.determinant.to_string(),
                dual,
            },
            golden: Vec::new(),
            text,
        },
    ))
}

#[derive(Debug, Serialize)]
struct Differential {
    generator: String,
    image: String,
}

#[derive(Debug, Serialize)]
struct TwistedPairResult {
    qls: bool,
    failed_condition: Option<String>,
    s: Option<String>,
    differential: Vec<Differential>,
    curving: Option<String>,
    quadratic_dual: Option<String>,
    full_dual: Option<String>,
}

fn twisted_pair_result(tp: &TwistedPairPresentation) -> TwistedPairResult {
    let names = tp.dual_names();
    TwistedPairResult {
        qls: true,
        failed_condition: None,
        s: Some(tp.s.name.clone()),
        differential: tp
            .differential_table
            .iter()
            .zip(&names)
            .map(|(e, n)| Differential {
                generator: n.clone(),
                image: e.format(&names),
            })
            .collect(),
        curving: Some(tp.curving.format(&names)),
        quadratic_dual: Some(crate::print_datum(&tp.quadratic_dual)),
        full_dual: Some(crate::print_datum(&tp.full_dual)),
    }
}

fn qls_dual(json: bool, file: &Path) -> Result<Outcome, CliError> {
    let ParsedDatum::Qls(q) = load(file)? else {
        return Err(CliError::Usage(format!(
            "{}: qls-dual needs a datum with a `unit` generator",
            file.display()
        )));
    };
    let echo = vec!["qls-dual".into(), file.display().to_string()];
    let negative = |qls: bool, cond: Option<String>, text: String| Rendered {
        echo: echo.clone(),
        passed: false,
        result: TwistedPairResult {
            qls,
            failed_condition: cond,
            s: None,
            differential: Vec::new(),
            curving: None,
            quadratic_dual: None,
            full_dual: None,
        },
        golden: Vec::new(),
        text,
    };
    let tp = match extract_twisted_pair(&q) {
        Ok(tp) => tp,
        Err(QlsError::NotQls) => return Ok(finish(json, negative(false, None, "not a QLS datum\n".into()))),
        Err(QlsError::NotQLSDualizable(c)) => {
            let text = format!("dual is not a twisted pair: condition {c} fails\n");
            return Ok(finish(json, negative(true, Some(c.id().to_string()), text)));
        }
        Err(e) => return Err(e.into()),
    };
    let result = twisted_pair_result(&tp);
    let mut text = String::new();
    writeln!(text, "# S = {} (degree {})", tp.s.name, tp.s.degree).unwrap();
    for d in &result.differential {
        writeln!(text, "# d({}) = {}", d.generator, d.image).unwrap();
    }
    writeln!(text, "# curving = {}", tp.curving.format(&tp.dual_names())).unwrap();
    text.push_str("# full dual\n");
    text.push_str(&crate::print_datum(&tp.full_dual));
    Ok(finish(
        json,
        Rendered {
            echo,
            passed: true,
            result,
            golden: Vec::new(),
            text,
        },
    ))
}

fn resolve_cutoff(flag: Option<i64>) -> Result<i64, CliError> {
    let w = match flag {
        Some(w) => w,
        None => match std::env::var(CUTOFF_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{CUTOFF_ENV}={v} is not an integer")))?,
            Err(_) => DEFAULT_CUTOFF,
        },
    };
    if w < 0 {
        return Err(CliError::Usage(format!("cutoff must be non-negative, got {w}")));
    }
    Ok(w)
}

fn example_bundle(name: &str, level: Option<&str>) -> Result<ExampleBundle, CliError> {
    let level: Option<Scalar> = level
        .map(|l| parse_scalar(l).ok_or_else(|| CliError::Usage(format!("invalid level `{l}`"))))
        .transpose()?;
    let needs_no_level = |b: ExampleBundle| match level {
        Some(_) => Err(CliError::Usage(format!("--level does not apply to `{name}`"))),
        None => Ok(b),
    };
    let level = level.clone().unwrap_or_else(|| int(1));
    match name {
        "kac-moody-sl2" => Ok(kac_moody_example(&sl2(level)?, Some(&SL2_NAMES))?),
        "heisenberg" => Ok(kac_moody_example(&heisenberg(level)?, None)?),
        "abelian" => needs_no_level(kac_moody_example(&heisenberg(int(0))?, None)?),
        "beta-gamma" => needs_no_level(beta_gamma()?),
        "bc" => needs_no_level(bc()?),
        other => Err(CliError::Usage(format!(
            "unknown example `{other}` (expected kac-moody-sl2, heisenberg, abelian, beta-gamma or bc)"
        ))),
    }
}

#[derive(Debug, Serialize)]
struct McResult {
    input: String,
    family: String,
    cutoff: i64,
    m_max: usize,
    passed: bool,
    residual_e1: String,
    residuals_em: Vec<String>,
    witness: Option<String>,
}

fn mc_verify(
    json: bool,
    file: Option<&Path>,
    example: Option<&str>,
    level: Option<&str>,
    cutoff: Option<i64>,
    mmax: Option<i64>,
) -> Result<Outcome, CliError> {
    let w = resolve_cutoff(cutoff)?;
    let mut echo = vec!["mc-verify".to_string()];
    let mut golden = Vec::new();
    let mut names: Option<(Vec<String>, Vec<String>)> = None;
    let (bundle, input, family) = match (file, example) {
        (Some(path), None) => {
            if level.is_some() {
                return Err(CliError::Usage("--level only applies to --example".into()));
            }
            echo.push(path.display().to_string());
            let ParsedDatum::Qls(q) = load(path)? else {
                return Err(CliError::Usage(format!("{}: mc-verify needs a QLS datum", path.display())));
            };
            let rec = recognize(&q)?;
            let bundle = rec.family.bundle()?;
            let dual = &bundle.engines.as_ref().expect("catalog bundles carry engines").dual;
            let tp = &rec.twisted_pair;
            let d = bundle.expected_d.as_ref().expect("catalog bundles carry d");
            let d_matches = tp
                .differential_table
                .iter()
                .enumerate()
                .all(|(c, e)| &bilinear_state(dual, &e.terms()) == d.image(c));
            let iota_matches = Some(&bilinear_state(dual, &tp.curving.terms())) == bundle.expected_iota.as_ref();
            for (q, ok) in [("expected_d", d_matches), ("expected_iota", iota_matches)] {
                golden.push(Golden {
                    quantity: q.replace("expected_", ""),
                    source: source_name(bundle.sources[q]),
                    matches: ok,
                });
            }
            names = Some((
                rec.generators.iter().map(|g| g.name.clone()).collect(),
                tp.dual_names(),
            ));
            (bundle, path.display().to_string(), rec.family.name().to_string())
        }
        (None, Some(name)) => {
            echo.extend(["--example".to_string(), name.to_string()]);
            if let Some(l) = level {
                echo.extend(["--level".to_string(), l.to_string()]);
            }
            let bundle = example_bundle(name, level)?;
            (bundle, name.to_string(), name.to_string())
        }
        _ => return Err(CliError::Usage("mc-verify needs a datum file or --example".into())),
    };
    echo.extend(["--cutoff".to_string(), w.to_string()]);
    if let Some(m) = mmax {
        echo.extend(["--mmax".to_string(), m.to_string()]);
    }
    let engines = bundle.engines.as_ref().expect("catalog bundles carry engines");
    let (mut primal, mut dual) = (engines.primal.clone().with_cutoff(w), engines.dual.clone().with_cutoff(w));
    if let Some((p, d)) = &names {
        primal = primal.with_names(p)?;
        dual = dual.with_names(d)?;
    }
    let pair = TensorEngine::new(&primal, &dual);
    let i = pair.canonical_element()?;
    if let Some(expected) = &bundle.expected_i0i {
        golden.push(Golden {
            quantity: "i0i".into(),
            source: source_name(bundle.sources["expected_i0i"]),
            matches: &pair.nth_product(&i, 0, &i)? == expected,
        });
    }
    let setup = McSetup {
        pair,
        dual_side: Side::Right,
        d: bundle.expected_d.as_ref().expect("catalog bundles carry d"),
        curving: bundle.expected_iota.as_ref().expect("catalog bundles carry ι"),
    };
    let rep = mc_check(&setup, &i, mmax)?;
    let names: Vec<String> = primal.generators().iter().map(|g| g.name.clone()).collect();
    let result = McResult {
        input,
        family,
        cutoff: w,
        m_max: rep.residuals_em.len(),
        passed: rep.passed,
        residual_e1: pair.format(&rep.residual_e1),
        residuals_em: rep.residuals_em.iter().map(|e| pair.format(e)).collect(),
        witness: rep.witness.map(|x| witness_text(&x, &names)),
    };
    let mut text = String::new();
    writeln!(text, "canonical element: {}", pair.format(&i)).unwrap();
    writeln!(text, "dI + 1/2 I(0)I + 1/2 ι = {}", result.residual_e1).unwrap();
    for (m, e) in result.residuals_em.iter().enumerate() {
        writeln!(text, "I({})I = {e}", m + 1).unwrap();
    }
    for g in &golden {
        writeln!(text, "{} matches {} value: {}", g.quantity, g.source, yes(g.matches)).unwrap();
    }
    if let Some(wit) = &result.witness {
        writeln!(text, "witness: {wit}").unwrap();
    }
    writeln!(text, "maurer-cartan: {}", if rep.passed { "pass" } else { "FAIL" }).unwrap();
    Ok(finish(
        json,
        Rendered {
            echo,
            passed: rep.passed,
            result,
            golden,
            text,
        },
    ))
}

fn witness_text(w: &RelationWitness, names: &[String]) -> String {
    format!("{}({}) {}", names[w.a], w.n, names[w.b])
}

#[derive(Debug, Serialize)]
struct RelationFailureText {
    relation: String,
    defect: String,
}

#[derive(Debug, Serialize)]
struct HomResult {
    passed: bool,
    failures: Vec<RelationFailureText>,
    witness: Option<String>,
    commutators_checked: usize,
    commutator_failures: Vec<String>,
    mc_passed: bool,
    mc_witness: Option<String>,
}

/// Reads the `[map]` section; other sections describe the target.
fn load_map(
    path: &Path,
    source_names: &[String],
    source_family: &Family,
    source_gens: &[chiral_core::datum::GeneratorSpec],
    cutoff: i64,
) -> Result<(ModeAlgebra, Vec<State>), CliError> {
    let text = read(path)?;
    let perr = |source| CliError::Parse {
        path: path.display().to_string(),
        source,
    };
    let secs = sections(&text).map_err(perr)?;
    let (maps, target_secs): (Vec<_>, Vec<_>) = secs.into_iter().partition(|s| s.name == "map");
    let [map] = maps.as_slice() else {
        return Err(CliError::Usage(format!("{}: expected exactly one [map] section", path.display())));
    };
    let target = if target_secs.is_empty() {
        source_family.engine(source_gens.to_vec())?
    } else {
        let ParsedDatum::Qls(q) = datum_from_sections(&target_secs).map_err(perr)? else {
            return Err(CliError::Usage(format!("{}: target datum needs a `unit` generator", path.display())));
        };
        let rec = recognize(&q)?;
        rec.family.engine(rec.generators.clone())?
    }
    .with_cutoff(cutoff);
    let mut images: Vec<Option<State>> = vec![None; source_names.len()];
    for line in &map.lines {
        let toks = line.tokens();
        let at = |k: usize, msg: String| {
            let t = &toks[k.min(toks.len() - 1)];
            perr(crate::ParseError {
                line: t.line,
                column: t.column,
                message: msg,
            })
        };
        if toks.len() < 3 || toks[1].text != "=" {
            return Err(at(0, "expected `name = expression`".into()));
        }
        let Some(a) = source_names.iter().position(|n| n == toks[0].text) else {
            return Err(at(0, format!("unknown source generator `{}`", toks[0].text)));
        };
        if images[a].is_some() {
            return Err(at(0, format!("`{}` is assigned twice", toks[0].text)));
        }
        images[a] = Some(parse_state(&toks[2..], &target).map_err(perr)?);
    }
    let images = images
        .into_iter()
        .zip(source_names)
        .map(|(y, n)| {
            y.ok_or_else(|| {
                perr(crate::ParseError {
                    line: map.header_line,
                    column: 1,
                    message: format!("no image for `{n}`"),
                })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((target, images))
}

fn hom(json: bool, file: &Path, map: &Path, cutoff: Option<i64>) -> Result<Outcome, CliError> {
    let w = resolve_cutoff(cutoff)?;
    let ParsedDatum::Qls(q) = load(file)? else {
        return Err(CliError::Usage(format!("{}: hom-check needs a QLS datum", file.display())));
    };
    let rec = recognize(&q)?;
    let Family::KacMoody(lie) = &rec.family else {
        return Err(CliError::Unsupported("hom-check sources must be affine Kac-Moody data".into()));
    };
    let names: Vec<String> = rec.generators.iter().map(|g| g.name.clone()).collect();
    let (target, images) = load_map(map, &names, &rec.family, &rec.generators, w)?;
    let report = hom_check(lie, &target, &images)?;

    let bundle = rec.family.bundle()?;
    let dual = bundle.engines.as_ref().expect("catalog bundles carry engines").dual.clone().with_cutoff(w);
    let pair = TensorEngine::new(&dual, &target);
    let alpha = pair.element_from_images(&images)?;
    let setup = McSetup {
        pair,
        dual_side: Side::Left,
        d: bundle.expected_d.as_ref().expect("catalog bundles carry d"),
        curving: bundle.expected_iota.as_ref().expect("catalog bundles carry ι"),
    };
    let mc = mc_check(&setup, &alpha, None)?;

    let result = HomResult {
        passed: report.passed,
        failures: report
            .failures
            .iter()
            .map(|f| RelationFailureText {
                relation: format!("{}({}) {}", names[f.ordered.0], f.witness.n, names[f.ordered.1]),
                defect: target.format_state(&f.defect),
            })
            .collect(),
        witness: report.witness.map(|x| witness_text(&x, &names)),
        commutators_checked: report.commutators_checked,
        commutator_failures: report
            .commutator_failures
            .iter()
            .map(|(a, b, l, m)| format!("[{}({l}), {}({m})]", names[*a], names[*b]))
            .collect(),
        mc_passed: mc.passed,
        mc_witness: mc.witness.map(|x| witness_text(&x, &names)),
    };
    let mut text = String::new();
    for f in &result.failures {
        writeln!(text, "relation {} off by {}", f.relation, f.defect).unwrap();
    }
    for c in &result.commutator_failures {
        writeln!(text, "commutator {c} fails").unwrap();
    }
    writeln!(text, "commutators checked: {}", result.commutators_checked).unwrap();
    if let Some(wit) = &result.witness {
        writeln!(text, "witness: {wit}").unwrap();
    }
    writeln!(text, "maurer-cartan of induced element: {}", if mc.passed { "pass" } else { "FAIL" }).unwrap();
    if let Some(wit) = &result.mc_witness {
        writeln!(text, "maurer-cartan witness: {wit}").unwrap();
    }
    writeln!(text, "homomorphism: {}", if report.passed { "pass" } else { "FAIL" }).unwrap();
    let mut echo = vec!["hom-check".to_string(), file.display().to_string(), map.display().to_string()];
    echo.extend(["--cutoff".to_string(), w.to_string()]);
    Ok(finish(
        json,
        Rendered {
            echo,
            passed: report.passed,
            result,
            golden: Vec::new(),
            text,
        },
    ))
}
