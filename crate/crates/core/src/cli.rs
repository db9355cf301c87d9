//! Command dispatch shared by the binary: every command returns an exit status and a JSON report.

use std::path::PathBuf;

use serde_json::{json, Value};

use crate::bounds::{ambient_csr_bound, sample_words, weak_csr_bound, BoundReport, Branch};
use crate::counterexamples::{build_family, check_displays, verify_family, FamilyId};
use crate::csr::{csr_critical_projections, csr_terms, rank_compress, verdict_from_terms};
use crate::ensemble::{Ensemble, EnsembleFile};
use crate::error::{Error, Result};
use crate::format::json_number;
use crate::reference;
use crate::semiring::{MaxPlus, MaxPlusMatrix};
use crate::trellis::{first_passage_weights, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Bounds,
    Product,
    CsrCheck,
    Counterexample,
    Repro,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub word: Option<String>,
    pub family: Option<String>,
    pub t: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: usize,
    pub emit_factors: bool,
    pub k_max: usize,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input_path: None,
            word: None,
            family: None,
            t: None,
            output_path: None,
            seed: None,
            samples: 500,
            emit_factors: false,
            k_max: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: Value,
}

impl RunOutcome {
    /// Pretty-printed report with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports are valid JSON");
        s.push('\n');
        s
    }
}

fn is_input_error(e: &Error) -> bool {
    !matches!(e, Error::Consistency(_) | Error::PeriodicityCap { .. })
}

pub fn run(config: &RunConfig) -> RunOutcome {
    let result = match config.command {
        Command::Analyze => analyze(config),
        Command::Bounds => bounds(config),
        Command::Product => product(config),
        Command::CsrCheck => csr_check(config),
        Command::Counterexample => counterexample(config),
        Command::Repro => reproduce(),
    };
    match result {
        Ok((ok, report)) => RunOutcome {
            exit_code: if ok { EXIT_OK } else { EXIT_VERIFICATION },
            report,
        },
        Err(e) => RunOutcome {
            exit_code: if is_input_error(&e) { EXIT_INPUT } else { EXIT_VERIFICATION },
            report: json!({ "error": e.to_string() }),
        },
    }
}

fn matrix(m: &MaxPlusMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialise")
}

fn scalar(x: MaxPlus) -> Value {
    serde_json::to_value(x).expect("scalars serialise")
}

fn scalars(xs: &[MaxPlus]) -> Value {
    Value::Array(xs.iter().copied().map(scalar).collect())
}

fn real(x: f64) -> Value {
    Value::Number(json_number(x))
}

fn one_based(xs: &[usize]) -> Value {
    json!(xs.iter().map(|x| x + 1).collect::<Vec<_>>())
}

fn read_ensemble(config: &RunConfig) -> Result<Ensemble> {
    let path = config
        .input_path
        .as_ref()
        .ok_or_else(|| Error::Parse("--input is required".into()))?;
    let text = std::fs::read_to_string(path)?;
    let file: EnsembleFile = serde_json::from_str(&text)?;
    Ensemble::build(file.generators)
}

fn read_word(config: &RunConfig, e: &Ensemble) -> Result<Word> {
    let text = config
        .word
        .as_ref()
        .ok_or_else(|| Error::Parse("--word is required".into()))?;
    let w: Word = text.parse()?;
    w.validate(e.generator_count())?;
    Ok(w)
}

/// Structure, assumptions and path weights of an ensemble, with 1-based indices.
pub fn analysis(e: &Ensemble) -> Result<Value> {
    let pw = e.path_weights();
    let components: Vec<Value> = e
        .critical
        .components
        .iter()
        .map(|c| {
            json!({
                "nodes": one_based(&c.nodes),
                "cyclicity": c.cyclicity,
                "classes": c.classes,
            })
        })
        .collect();
    let edges: Vec<[usize; 2]> = e.critical.critical_edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
    let mut report = json!({
        "n": e.n(),
        "generator_count": e.generator_count(),
        "lambdas": e.lambdas.iter().copied().map(real).collect::<Vec<_>>(),
        "visualisation": e.visualisation.iter().copied().map(real).collect::<Vec<_>>(),
        "a_sup": matrix(&e.a_sup),
        "a_inf": matrix(&e.a_inf),
        "b_sup": matrix(&e.b_sup),
        "lambda_star": scalar(e.lambda_star),
        "critical": {
            "nodes": one_based(&e.critical.critical_nodes),
            "edges": edges,
            "components": components,
            "global_cyclicity": e.critical.global_cyclicity,
            "ambient_cyclicity": e.critical.ambient_cyclicity,
        },
        "assumptions": serde_json::to_value(&e.report)?,
    });
    if let Ok(pw) = pw {
        report["path_weights"] = json!({
            "alpha": scalars(&pw.alpha),
            "beta": scalars(&pw.beta),
            "gamma": matrix(&pw.gamma_avoid),
            "w": scalars(&pw.w_inf),
            "v": scalars(&pw.v_inf),
        });
    }
    Ok(report)
}

fn analyze(config: &RunConfig) -> Result<(bool, Value)> {
    let e = read_ensemble(config)?;
    Ok((true, analysis(&e)?))
}

fn bound_json(r: &BoundReport) -> Value {
    let (branch, i, j) = r.argmax;
    json!({
        "profile": r.profile.to_string(),
        "lambda_star": scalar(r.lambda_star),
        "n": r.n,
        "q": r.q,
        "gamma": r.gamma,
        "schwarz": r.schwarz,
        "branch_one": matrix(&r.branch_one),
        "branch_two": matrix(&r.branch_two),
        "ambient_bound": real(r.ambient_bound),
        "ambient_k": r.ambient_k,
        "argmax": {
            "branch": match branch { Branch::Schwarz => "one", Branch::Avoiding => "two" },
            "entry": [i + 1, j + 1],
        },
    })
}

fn bounds(config: &RunConfig) -> Result<(bool, Value)> {
    let e = read_ensemble(config)?;
    let r = ambient_csr_bound(&e)?;
    let weak = weak_csr_bound(&e, config.k_max)?;
    let mut report = bound_json(&r);
    report["weak_bound"] = json!({
        "k": weak.k,
        "k_max": weak.k_max,
        "values": matrix(&weak.values),
        "realized_max": weak.realized_max.map(|(v, i, j)| json!({"value": real(v), "entry": [i + 1, j + 1]})),
        "diagnostics": weak.diagnostics,
    });
    let mut ok = true;
    if let Some(seed) = config.seed {
        let mut runs = Vec::new();
        for (offset, k) in [r.ambient_k, r.ambient_k + 1].into_iter().enumerate() {
            let s = sample_words(&e, k, config.samples, seed.wrapping_add(offset as u64))?;
            ok &= s.csr_equal == s.samples;
            runs.push(serde_json::to_value(&s)?);
        }
        report["samples"] = Value::Array(runs);
    }
    Ok((ok, report))
}

fn product(config: &RunConfig) -> Result<(bool, Value)> {
    let e = read_ensemble(config)?;
    let w = read_word(config, &e)?;
    let tw = first_passage_weights(&e, &w)?;
    Ok((
        true,
        json!({
            "word": w.to_string(),
            "k": w.len(),
            "product": matrix(&tw.product),
            "w_star": scalars(&tw.w_star),
            "v_star": scalars(&tw.v_star),
            "w_len": tw.w_len,
            "v_len": tw.v_len,
        }),
    ))
}

fn csr_check(config: &RunConfig) -> Result<(bool, Value)> {
    let e = read_ensemble(config)?;
    let w = read_word(config, &e)?;
    let terms = csr_terms(&e, &w)?;
    let verdict = verdict_from_terms(&terms)?;
    let factors = rank_compress(&terms)?;
    let projections = csr_critical_projections(&terms)?;
    let mut report = json!({
        "word": w.to_string(),
        "k": w.len(),
        "gamma": terms.gamma,
        "threshold": terms.threshold,
        "t": terms.t_exponent,
        "v": terms.v,
        "product": matrix(&verdict.product),
        "csr": matrix(&verdict.csr),
        "is_csr": verdict.holds,
        "witness": verdict.witness.map(|w| json!({
            "entry": [w.row + 1, w.col + 1],
            "product": scalar(w.product),
            "csr": scalar(w.csr),
        })),
        "rank_bound": factors.rank_bound,
        "projections_hold": projections.passed(),
    });
    if config.emit_factors {
        report["factors"] = json!({
            "c_prime": matrix(&factors.c_prime),
            "s_residue": matrix(&terms.s_residue),
            "r_prime": matrix(&factors.r_prime),
            "representatives": factors
                .representatives
                .iter()
                .map(|&(c, class, node)| json!({"component": c + 1, "class": class, "node": node + 1}))
                .collect::<Vec<_>>(),
        });
    }
    Ok((verdict.holds, report))
}

fn counterexample(config: &RunConfig) -> Result<(bool, Value)> {
    let id: FamilyId = config
        .family
        .as_deref()
        .ok_or_else(|| Error::Parse("--family is required".into()))?
        .parse()?;
    let t = config.t.unwrap_or(10);
    let f = build_family(id);
    let e = Ensemble::build(f.generators.clone())?;
    let report = verify_family(&f, &[t])?;
    let mut words = Vec::new();
    for (class, check) in f.word_classes.iter().zip(&report.checks) {
        let v = crate::csr::is_csr(&e, &class.word(t))?;
        words.push(json!({
            "pattern": class.pattern,
            "length": check.length,
            "product": matrix(&v.product),
            "csr": matrix(&v.csr),
            "is_csr": v.holds,
            "witnesses": check.witnesses.iter().map(|w| json!({
                "entry": [w.row + 1, w.col + 1],
                "product": scalar(w.product),
                "expected_product": real(w.expected_product),
                "csr": scalar(w.csr),
                "expected_csr": real(w.expected_csr),
                "ok": w.ok,
            })).collect::<Vec<_>>(),
        }));
    }
    Ok((
        report.passed(),
        json!({
            "family": id.name(),
            "t": t,
            "profile": report.profile_found.to_string(),
            "words": words,
            "passed": report.passed(),
        }),
    ))
}

fn mismatches(m: &MaxPlusMatrix, table: &str) -> Value {
    Value::Array(
        reference::printed_mismatches(m, table)
            .into_iter()
            .map(|(i, j, v, p)| json!({"entry": [i + 1, j + 1], "computed": scalar(v), "printed": p}))
            .collect(),
    )
}

fn eight_node_manifest() -> Result<(bool, Value)> {
    let e = Ensemble::build(reference::eight_node_generators())?;
    let pw = e.path_weights()?;
    let exact = |xs: &[MaxPlus], want: &[f64]| xs.iter().zip(want).all(|(x, &y)| *x == MaxPlus::finite(y));
    let r = ambient_csr_bound(&e)?;
    let w = reference::eight_node_word();
    let terms = csr_terms(&e, &w)?;
    let verdict = verdict_from_terms(&terms)?;
    let factors = rank_compress(&terms)?;

    let checks = [
        ("a_sup", e.a_sup == reference::eight_node_a_sup()),
        ("a_inf", e.a_inf == reference::eight_node_a_inf()),
        ("alpha", exact(&pw.alpha, &reference::EIGHT_NODE_ALPHA)),
        ("beta", exact(&pw.beta, &reference::EIGHT_NODE_BETA)),
        ("w", exact(&pw.w_inf, &reference::EIGHT_NODE_W)),
        ("v", exact(&pw.v_inf, &reference::EIGHT_NODE_V)),
        ("ambient_bound", (r.ambient_bound - reference::EIGHT_NODE_PRINTED_BOUND).abs() <= 1e-9),
        ("ambient_k", r.ambient_k == reference::EIGHT_NODE_PRINTED_K),
        (
            "branch_one_table",
            reference::printed_mismatches(&r.branch_one, reference::EIGHT_NODE_BRANCH_ONE_PRINTED).is_empty(),
        ),
        (
            "branch_two_table",
            reference::printed_mismatches(&r.branch_two, reference::EIGHT_NODE_BRANCH_TWO_PRINTED).is_empty(),
        ),
        ("gamma_24", verdict.product == reference::eight_node_gamma24()),
        ("is_csr", verdict.holds),
        ("rank_bound", factors.rank_bound == 2),
        ("c_prime", factors.c_prime == reference::eight_node_c_prime()),
        ("r_prime", factors.r_prime == reference::eight_node_r_prime()),
    ];
    let ok = checks.iter().all(|c| c.1);
    let mut report = serde_json::Map::new();
    for (name, pass) in checks {
        report.insert(name.to_string(), Value::Bool(pass));
    }
    report.insert(
        "values".into(),
        json!({
            "lambda_star": scalar(e.lambda_star),
            "ambient_bound": real(r.ambient_bound),
            "printed_bound": real(reference::EIGHT_NODE_PRINTED_BOUND),
            "ambient_k": r.ambient_k,
            "printed_k": reference::EIGHT_NODE_PRINTED_K,
            "branch_one_mismatches": mismatches(&r.branch_one, reference::EIGHT_NODE_BRANCH_ONE_PRINTED),
            "branch_two_mismatches": mismatches(&r.branch_two, reference::EIGHT_NODE_BRANCH_TWO_PRINTED),
            "gamma_mismatches": mismatches(&pw.gamma_avoid, reference::EIGHT_NODE_GAMMA_PRINTED),
        }),
    );
    Ok((ok, Value::Object(report)))
}

fn reproduce() -> Result<(bool, Value)> {
    let (mut ok, eight) = eight_node_manifest()?;
    let ts: Vec<usize> = (2..=20).collect();
    let mut families = serde_json::Map::new();
    for id in FamilyId::ALL {
        let f = build_family(id);
        let displays = check_displays(&f)?;
        let verified = verify_family(&f, &ts)?;
        let displays_ok = displays.iter().all(|d| d.passed());
        ok &= displays_ok && verified.passed();
        families.insert(
            id.name().to_string(),
            json!({
                "displays": displays.iter().map(|d| json!({
                    "name": d.name,
                    "product_matches": d.product_matches,
                    "csr_matches": d.csr_matches,
                })).collect::<Vec<_>>(),
                "profile": verified.profile_found.to_string(),
                "t_range": [2, 20],
                "all_words_fail_csr": verified.checks.iter().all(|c| !c.is_csr),
                "witnesses_match": verified.checks.iter().all(|c| c.passed()),
            }),
        );
    }
    Ok((
        ok,
        json!({
            "eight_node": eight,
            "families": families,
            "passed": ok,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_command_passes_at_ten() {
        let mut c = RunConfig::new(Command::Counterexample);
        c.family = Some("P2_six".into());
        c.t = Some(10);
        let out = run(&c);
        assert_eq!(out.exit_code, EXIT_OK, "{}", out.render());
        assert_eq!(out.report["words"][0]["witnesses"][0]["entry"], json!([1, 5]));
    }

    #[test]
    fn unknown_family_is_input_error() {
        let mut c = RunConfig::new(Command::Counterexample);
        c.family = Some("nope".into());
        assert_eq!(run(&c).exit_code, EXIT_INPUT);
    }

    #[test]
    fn missing_input_is_input_error() {
        assert_eq!(run(&RunConfig::new(Command::Analyze)).exit_code, EXIT_INPUT);
    }

    #[test]
    fn repro_is_byte_stable() {
        let a = run(&RunConfig::new(Command::Repro)).render();
        let b = run(&RunConfig::new(Command::Repro)).render();
        assert_eq!(a, b);
    }
}
