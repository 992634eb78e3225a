use std::fmt::Write as _;
use std::path::Path;

use imm_core::catalog::{
    jacobian_catalog, parse_point_file, sing_catalog, CatalogDocument, QuotientRecord,
};
use imm_core::hessian::{
    a_n, dual_dimension_ranks, segre_hessian_determinant, verify_hessian_inverse,
};
use imm_core::exact::rational_to_string as rational_string;
use imm_core::imm::evaluate;
use imm_core::random;
use imm_core::symmetry::{
    check_invariance, dynkin_stabilizer, lie_annihilates, random_word, symmetry_generators, DynkinReport, GroupElement,
    LieElement,
};
use imm_core::Error;
use serde::Serialize;

use crate::{Failure, Format, Report, RunConfig};

const RANDOM_WORDS: usize = 10;
const WORD_LENGTH: usize = 6;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn eval(path: &Path, format: Format) -> Result<Report, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let point = parse_point_file(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let value = evaluate(&point);
    let text = match format {
        Format::Plain => format!("{value}\n"),
        Format::Csv => csv_rows(&["n", "q", "value"], [vec![
            point.n().to_string(),
            point.q().to_string(),
            rational_string(&value),
        ]]),
        Format::Json => to_json(&serde_json::json!({
            "n": point.n(),
            "q": point.q(),
            "value": rational_string(&value),
        })),
    };
    Ok(Report { text, ok: true })
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
}

#[derive(Serialize)]
struct SymmetryReport {
    n: usize,
    q: usize,
    seed: u64,
    trials: usize,
    checks: Vec<Check>,
    dynkin: DynkinReport,
}

fn generator_name(g: &GroupElement, index: usize, n: usize) -> String {
    match g {
        GroupElement::CyclicShift(k) => format!("cyclic shift by {k}"),
        GroupElement::TransposeReversal => "transpose-reversal".into(),
        GroupElement::SlotTranspose(a) => format!("transpose of slot {a} (injected)"),
        _ if index < n => format!("base change at vertex {}", index + 1),
        _ => "random base-change tuple".into(),
    }
}

pub fn symmetry(cfg: &RunConfig) -> Result<Report, Failure> {
    let (n, q) = (cfg.n, cfg.q);
    if n == 0 || q == 0 {
        return Err(Failure::Input(format!("need n >= 1 and q >= 1 (got n={n}, q={q})")));
    }
    let dynkin = dynkin_stabilizer(n, q)?;
    let mut generators = symmetry_generators(n, q, cfg.seed);
    if cfg.inject_fault {
        generators.push(GroupElement::SlotTranspose(1));
    }
    let mut checks = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        let passed = check_invariance(g, n, q, cfg.trials, cfg.seed.wrapping_add(i as u64))?;
        checks.push(Check { name: generator_name(g, i, n), passed });
    }
    let mut rng = random::rng(cfg.seed ^ 0x5eed);
    for k in 0..RANDOM_WORDS {
        let word = random_word(&mut rng, &generators, WORD_LENGTH);
        let passed = check_invariance(&word, n, q, cfg.trials, cfg.seed.wrapping_add(1000 + k as u64))?;
        checks.push(Check { name: format!("random word {}", k + 1), passed });
    }
    for alpha in 1..=n {
        let element = LieElement { alpha, l: random::matrix(&mut rng, q, 9, 4) };
        let passed = lie_annihilates(&element, n, q, cfg.trials, cfg.seed.wrapping_add(2000 + alpha as u64));
        checks.push(Check { name: format!("infinitesimal base change at vertex {alpha}"), passed });
    }
    let ok = checks.iter().all(|c| c.passed);
    let report = SymmetryReport { n, q, seed: cfg.seed, trials: cfg.trials, checks, dynkin };
    let text = match cfg.format {
        Format::Json => to_json(&report),
        Format::Csv => csv_rows(
            &["check", "passed"],
            report.checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string()]).chain([
                vec!["dynkin stabilizer order".into(), report.dynkin.order.to_string()],
                vec!["dynkin stabilizer dihedral".into(), report.dynkin.is_dihedral.to_string()],
            ]),
        ),
        Format::Plain => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            let d = &report.dynkin;
            let _ = writeln!(s, "dynkin stabilizer order: {} (dihedral: {})", d.order, yes_no(d.is_dihedral));
            if d.order != d.permutation_image_order {
                let _ = writeln!(
                    s,
                    "acting on vertices: order {} (dihedral: {})",
                    d.permutation_image_order,
                    yes_no(d.permutation_image_is_dihedral)
                );
            }
            s
        }
    };
    Ok(Report { text, ok })
}

#[derive(Serialize)]
struct HessianReport {
    n: usize,
    q: usize,
    a_n: String,
    /// `verified`, `failed`, or the reason the closed form does not apply.
    closed_form_inverse: String,
    determinant: QuotientRecord,
    determinant_is_unit: bool,
    hessian_ranks: Vec<usize>,
    dual_dimension: usize,
    expected_dual_dimension: usize,
}

pub fn hessian(cfg: &RunConfig) -> Result<Report, Failure> {
    let (n, q) = (cfg.n, cfg.q);
    let ranks = dual_dimension_ranks(n, q, cfg.trials, cfg.seed)?;
    let dual = ranks.iter().copied().max().unwrap_or(2).saturating_sub(2);
    let (closed_form, inverse_ok) = match verify_hessian_inverse(n, q) {
        Ok(true) => ("verified".to_string(), true),
        Ok(false) => ("failed".to_string(), false),
        Err(Error::DegenerateFormula(reason)) => (format!("degenerate ({reason})"), true),
        Err(e) => return Err(e.into()),
    };
    let det = segre_hessian_determinant(n, q)?;
    let report = HessianReport {
        n,
        q,
        a_n: rational_string(&a_n(n, q)),
        closed_form_inverse: closed_form,
        determinant_is_unit: det.is_unit(),
        determinant: QuotientRecord::from_scalar(&det),
        hessian_ranks: ranks,
        dual_dimension: dual,
        expected_dual_dimension: n * q * q - 2,
    };
    let ok = inverse_ok && report.determinant_is_unit && report.dual_dimension == report.expected_dual_dimension;
    let text = match cfg.format {
        Format::Json => to_json(&report),
        Format::Csv => csv_rows(
            &["key", "value"],
            [
                ("a_n", report.a_n.clone()),
                ("closed_form_inverse", report.closed_form_inverse.clone()),
                ("determinant", det.to_string()),
                ("determinant_is_unit", report.determinant_is_unit.to_string()),
                ("dual_dimension", report.dual_dimension.to_string()),
                ("expected_dual_dimension", report.expected_dual_dimension.to_string()),
            ]
            .map(|(k, v)| vec![k.to_string(), v]),
        ),
        Format::Plain => {
            let mut s = String::new();
            let _ = writeln!(s, "a_n = {}", a_n(n, q));
            let _ = writeln!(s, "closed-form inverse: {}", report.closed_form_inverse);
            let _ = writeln!(s, "det H(p) = {det} (unit: {})", yes_no(report.determinant_is_unit));
            let ranks: Vec<String> = report.hessian_ranks.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "hessian ranks at sampled points: {}", ranks.join(" "));
            let _ = writeln!(s, "dual dim = {} (n q^2 - 2 = {})", report.dual_dimension, report.expected_dual_dimension);
            s
        }
    };
    Ok(Report { text, ok })
}

fn catalog_report(mut doc: CatalogDocument, cfg: &RunConfig) -> Result<Report, Failure> {
    if cfg.inject_fault {
        if let Some(c) = doc.components.first_mut() {
            c.dim += 1;
        }
    }
    let mut ok = doc.mismatches().is_empty();
    for c in &doc.components {
        ok &= c.verify_membership()?;
    }
    let oracle = |d: Option<usize>| d.map_or_else(String::new, |d| d.to_string());
    let text = match cfg.format {
        Format::Json => {
            let mut s = doc.to_json();
            s.push('\n');
            s
        }
        Format::Csv => csv_rows(
            &["kind", "label", "dim", "dim_oracle"],
            doc.components.iter().map(|c| {
                let kind = serde_json::to_value(c.kind).expect("serializable");
                vec![kind.as_str().unwrap_or_default().to_string(), c.label.clone(), c.dim.to_string(), oracle(c.dim_oracle)]
            }),
        ),
        Format::Plain => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{} components, locus dimension {}",
                doc.components.len(),
                doc.locus_dim.map_or_else(|| "-".to_string(), |d| d.to_string())
            );
            for c in &doc.components {
                let _ = writeln!(s, "{}  dim {}  oracle {}", c.label, c.dim, oracle(c.dim_oracle));
            }
            s
        }
    };
    Ok(Report { text, ok })
}

pub fn sing(cfg: &RunConfig) -> Result<Report, Failure> {
    catalog_report(sing_catalog(cfg.n, cfg.q, cfg.seed, cfg.trials)?, cfg)
}

pub fn jacobian(cfg: &RunConfig) -> Result<Report, Failure> {
    catalog_report(jacobian_catalog(cfg.n, cfg.q, cfg.seed, cfg.trials)?, cfg)
}
