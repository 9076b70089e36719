//! JSON-lines equation corpus: `{"word", "group", "target", "vars"}` per line.

use std::path::Path;

use klein_core::closure::{brute_force_solve, transfer_solution, Equation};
use klein_core::groups::{evaluate_word_dyn, Ball, Element, GElt, GroupId};
use klein_core::maps::decompose_k;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::{element, word};
use crate::report::{CliError, Report};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Line {
    word: String,
    group: String,
    target: String,
    #[serde(default)]
    vars: Option<usize>,
}

enum Outcome {
    Found {
        solution: Vec<Element>,
        transfer: Option<Value>,
        ok: bool,
    },
    NotFound,
}

fn solve_line(line: &Line, lmax: i64, kmax: i64) -> Result<Outcome, CliError> {
    let group: GroupId = line
        .group
        .parse()
        .map_err(|e: klein_core::Error| CliError::Usage(e.to_string()))?;
    let w = word(&line.word, line.vars)?;
    let target = element(group, &line.target)?;
    let ball = Ball::new(group, lmax, kmax);
    let Some(solution) = brute_force_solve(&Equation::new(w.clone(), target), &ball, w.arity())?
    else {
        return Ok(Outcome::NotFound);
    };
    let mut ok = evaluate_word_dyn(&w, group, &solution)? == target;
    let mut transfer = None;
    if let Element::G(h) = target {
        if decompose_k(&h).is_some() {
            let tuple: Vec<GElt> = solution.iter().filter_map(|e| e.as_typed().ok()).collect();
            let rep = transfer_solution(&w, &tuple)?;
            ok &= rep.verified;
            transfer = Some(json!({ "k_solution": rep.k_solution, "verified": rep.verified }));
        }
    }
    Ok(Outcome::Found {
        solution,
        transfer,
        ok,
    })
}

pub fn run(path: &Path, lmax: i64, kmax: i64) -> Result<Report, CliError> {
    if lmax < 0 || kmax < 0 {
        return Err(CliError::Usage("ball bounds must be nonnegative".into()));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut r = Report::new(
        "run-corpus",
        json!({ "path": path.display().to_string(), "lmax": lmax, "kmax": kmax }),
    );
    let (mut found, mut not_found, mut errors, mut bad) = (0usize, 0usize, 0usize, 0usize);
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let parsed: Result<Line, CliError> =
            serde_json::from_str(raw).map_err(|e| CliError::Usage(format!("malformed line: {e}")));
        let outcome = parsed.and_then(|l| solve_line(&l, lmax, kmax).map(|o| (l, o)));
        let entry = match outcome {
            Ok((
                l,
                Outcome::Found {
                    solution,
                    transfer,
                    ok,
                },
            )) => {
                found += 1;
                if !ok {
                    bad += 1;
                }
                r.line(format!(
                    "{lineno}: {} = {} -> {}",
                    l.word,
                    l.target,
                    crate::commands::strings(&solution).join(", ")
                ));
                json!({ "line": lineno, "word": l.word, "group": l.group, "target": l.target,
                        "status": "found", "solution": solution, "transfer": transfer, "verified": ok })
            }
            Ok((l, Outcome::NotFound)) => {
                not_found += 1;
                r.line(format!("{lineno}: {} = {} -> not found", l.word, l.target));
                json!({ "line": lineno, "word": l.word, "group": l.group, "target": l.target, "status": "not_found" })
            }
            Err(e) => {
                errors += 1;
                r.line(format!(
                    "{lineno}: error[{}]: {}",
                    e.kind(),
                    e.to_string().lines().next().unwrap_or("")
                ));
                json!({ "line": lineno, "status": "error", "error": { "kind": e.kind(), "message": e.to_string() } })
            }
        };
        entries.push(entry);
    }
    r.result = json!({
        "entries": entries,
        "summary": { "lines": found + not_found + errors, "found": found, "not_found": not_found, "errors": errors },
    });
    r.line(format!(
        "{found} found, {not_found} not found, {errors} errors"
    ));
    r.check(
        "all_lines_parsed",
        errors == 0,
        format!("{errors} malformed lines"),
    );
    r.check(
        "solutions_verified",
        bad == 0,
        format!("{bad} unverified solutions"),
    );
    Ok(r)
}
