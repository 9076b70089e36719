use klein_core::closure::{
    brute_force_solve, dihedral_solve, no_retraction_certificate, probe_verbal_closedness,
    transfer_solution, Equation, ProbeConfig, TransferReport,
};
use klein_core::freewords::{exponent_sums, nielsen_normalize, FreeWord};
use klein_core::groups::{evaluate_word_dyn, Ball, Element, GElt, GroupId};
use klein_core::maps::{
    decompose_k, deg_hom, f_hom, in_fibred_product, in_h, phi, phi_inv_on_k, rho_retract,
};
use klein_core::parse::{parse_element, parse_g, parse_word};
use klein_core::selfcheck::{run_selfcheck, Profile};
use klein_core::Error;
use serde_json::json;

use crate::report::{parsed, CliError, Report};

pub type Outcome = Result<Report, CliError>;

pub fn element(group: GroupId, src: &str) -> Result<Element, CliError> {
    parsed(src, parse_element(group, src))
}

pub fn g_element(src: &str) -> Result<GElt, CliError> {
    parsed(src, parse_g(src))
}

/// Parse a word; a variable beyond `--vars` is a usage error.
pub fn word(src: &str, vars: Option<usize>) -> Result<FreeWord, CliError> {
    match parse_word(src, vars) {
        Ok(w) => Ok(w),
        Err(e @ (Error::VarOutOfRange { .. } | Error::ArityMismatch { .. })) => {
            Err(CliError::Usage(format!("word `{src}`: {e}")))
        }
        Err(e) => parsed(src, Err(e)),
    }
}

pub fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn check_bounds(lmax: i64, kmax: i64) -> Result<(), CliError> {
    if lmax < 0 || kmax < 0 {
        return Err(CliError::Usage("ball bounds must be nonnegative".into()));
    }
    Ok(())
}

pub fn mul(group: GroupId, x: &str, y: &str) -> Outcome {
    let (a, b) = (element(group, x)?, element(group, y)?);
    let v = a.mul(&b)?;
    let mut r = Report::new("mul", json!({ "group": group, "lhs": x, "rhs": y }));
    r.result = json!({ "value": v });
    r.line(v.to_string());
    Ok(r)
}

pub fn inv(group: GroupId, x: &str) -> Outcome {
    let v = element(group, x)?.inv()?;
    let mut r = Report::new("inv", json!({ "group": group, "element": x }));
    r.result = json!({ "value": v });
    r.line(v.to_string());
    Ok(r)
}

pub fn pow(group: GroupId, x: &str, n: i64) -> Outcome {
    let v = element(group, x)?.pow(n)?;
    let mut r = Report::new(
        "pow",
        json!({ "group": group, "element": x, "exponent": n }),
    );
    r.result = json!({ "value": v });
    r.line(v.to_string());
    Ok(r)
}

fn tuple(group: GroupId, assign: &[String]) -> Result<Vec<Element>, CliError> {
    assign.iter().map(|s| element(group, s)).collect()
}

fn arity_check(w: &FreeWord, n: usize) -> Result<(), CliError> {
    if n < w.arity() {
        return Err(CliError::Usage(format!(
            "word has {} variables but {} values were assigned",
            w.arity(),
            n
        )));
    }
    Ok(())
}

pub fn eval(group: GroupId, w_src: &str, assign: &[String]) -> Outcome {
    let w = word(w_src, None)?;
    let t = tuple(group, assign)?;
    arity_check(&w, t.len())?;
    let v = evaluate_word_dyn(&w, group, &t)?;
    let mut r = Report::new(
        "eval",
        json!({ "group": group, "word": w_src, "assign": assign }),
    );
    r.result = json!({ "value": v });
    r.line(v.to_string());
    Ok(r)
}

pub struct SolveArgs<'a> {
    pub group: GroupId,
    pub word: &'a str,
    pub target: &'a str,
    pub vars: Option<usize>,
    pub lmax: i64,
    pub kmax: i64,
}

pub fn solve(a: &SolveArgs) -> Outcome {
    check_bounds(a.lmax, a.kmax)?;
    let w = word(a.word, a.vars)?;
    let target = element(a.group, a.target)?;
    let ball = Ball::new(a.group, a.lmax, a.kmax);
    let mut r = Report::new(
        "solve",
        json!({ "group": a.group, "word": a.word, "target": a.target, "vars": w.arity(), "lmax": a.lmax, "kmax": a.kmax }),
    );
    match brute_force_solve(&Equation::new(w.clone(), target), &ball, w.arity())? {
        Some(sol) => {
            let v = evaluate_word_dyn(&w, a.group, &sol)?;
            r.result = json!({ "found": true, "solution": sol });
            r.check(
                "solution_evaluates_to_target",
                v == target,
                format!("{w} -> {v}"),
            );
            r.line(format!("solution: {}", strings(&sol).join(", ")));
        }
        None => {
            r.result = json!({ "found": false, "solution": null });
            r.line("not found in the ball (this is not a proof of unsolvability)");
        }
    }
    Ok(r)
}

pub fn dihedral(w_src: &str, target: &str, vars: Option<usize>, kmax: i64) -> Outcome {
    check_bounds(0, kmax)?;
    let w = word(w_src, vars)?;
    let h = element(GroupId::D, target)?;
    let mut r = Report::new(
        "dihedral-solve",
        json!({ "word": w_src, "target": target, "vars": w.arity(), "kmax": kmax }),
    );
    match dihedral_solve(
        &Equation::new(w.clone(), h),
        &Ball::new(GroupId::D, 0, kmax),
    )? {
        Some(sol) => {
            let elts: Vec<Element> = sol.tuple.iter().map(|d| Element::D(*d)).collect();
            let v = evaluate_word_dyn(&w, GroupId::D, &elts)?;
            r.result = json!({ "found": true, "solution": sol.tuple, "method": sol.method });
            r.check(
                "solution_evaluates_to_target",
                v == h,
                format!("{w} -> {v}"),
            );
            r.line(format!(
                "solution: {}  ({:?})",
                strings(&sol.tuple).join(", "),
                sol.method
            ));
        }
        None => {
            r.result = json!({ "found": false, "solution": null, "method": null });
            r.line("not found in the ball");
        }
    }
    Ok(r)
}

pub fn transfer_checks(r: &mut Report, t: &TransferReport) {
    r.check("verified", t.verified, format!("{} -> {}", t.word, t.h));
    r.check("first_coordinate_matches", t.first_coordinate_matches, "");
    r.check("degree_matches", t.degree_matches, "");
}

pub fn transfer(w_src: &str, assign: &[String]) -> Outcome {
    let w = word(w_src, None)?;
    let t: Vec<GElt> = assign
        .iter()
        .map(|s| g_element(s))
        .collect::<Result<_, _>>()?;
    arity_check(&w, t.len())?;
    let rep = transfer_solution(&w, &t)?;
    let mut r = Report::new("transfer", json!({ "word": w_src, "assign": assign }));
    r.result = serde_json::to_value(&rep).expect("serializable");
    r.line(format!("h = {}", rep.h));
    r.line(format!("nielsen: m = {}, u = {}", rep.m, rep.u));
    if let Some(p) = &rep.perm {
        r.line(format!("renamed by {p}"));
    }
    r.line(format!(
        "K-solution: {}",
        strings(&rep.k_solution).join(", ")
    ));
    transfer_checks(&mut r, &rep);
    Ok(r)
}

pub fn nielsen(w_src: &str, vars: Option<usize>) -> Outcome {
    let w = word(w_src, vars)?;
    let nf = nielsen_normalize(&w)?;
    let image = nf.alpha.apply(&w)?;
    let images = nf.alpha.generator_images()?;
    let inverse_images = nf.alpha.inverse()?.generator_images()?;
    let mut r = Report::new("nielsen", json!({ "word": w_src, "vars": w.arity() }));
    r.result = json!({
        "m": nf.m,
        "u": nf.u,
        "moves": nf.alpha.moves(),
        "alpha_images": strings(&images),
        "alpha_inverse_images": strings(&inverse_images),
        "alpha_of_word": image,
    });
    r.line(format!("m = {}", nf.m));
    r.line(format!("u = {}", nf.u));
    r.line(format!("alpha(w) = {image}"));
    for (i, im) in images.iter().enumerate() {
        r.line(format!("alpha(x{}) = {im}", i + 1));
    }
    let expected = FreeWord::from_pairs(&[(1, nf.m)], w.arity())?.mul(&nf.u)?;
    r.check("normal_form", image == expected, format!("x1^{} * u", nf.m));
    r.check(
        "u_in_commutator_subgroup",
        exponent_sums(&nf.u)?.iter().all(|&s| s == 0),
        "",
    );
    r.check("round_trip", nf.alpha.inverse()?.apply(&image)? == w, "");
    Ok(r)
}

pub fn phi_cmd(x: &str) -> Outcome {
    let g = g_element(x)?;
    let z = phi(&g);
    let mut r = Report::new("phi", json!({ "element": x }));
    let preimage = phi_inv_on_k(&z).ok();
    r.result = json!({
        "phi": z,
        "f": f_hom(&g),
        "deg": deg_hom(&g),
        "in_fibred_product": in_fibred_product(&z),
        "k_preimage": preimage,
    });
    r.line(format!("phi = {z}"));
    r.line(format!("f = {}, deg = {}", f_hom(&g), deg_hom(&g)));
    if let Some(e) = preimage {
        r.line(format!("the K-element with this image is {e}"));
    }
    if let Some(e) = decompose_k(&g) {
        r.check("phi_inverts_on_k", preimage == Some(e), e.to_string());
    }
    Ok(r)
}

pub fn retract(x: &str) -> Outcome {
    let g = g_element(x)?;
    let mut r = Report::new("retract", json!({ "element": x }));
    r.result = json!({ "in_h": in_h(&g) });
    let rho = rho_retract(&g)?;
    r.result["rho"] = json!(rho);
    r.line(format!("rho = {rho}"));
    if let Some(e) = decompose_k(&g) {
        r.check("fixes_k", rho == e, e.to_string());
    }
    Ok(r)
}

pub fn probe(max_len: usize, g: (i64, i64), k: (i64, i64)) -> Outcome {
    check_bounds(g.0, g.1)?;
    check_bounds(k.0, k.1)?;
    let rep = probe_verbal_closedness(&ProbeConfig::exhaustive(max_len, g, k))?;
    let mut r = Report::new(
        "probe",
        json!({ "maxlen": max_len, "lmax": g.0, "kmax": g.1, "k_lmax": k.0, "k_kmax": k.1 }),
    );
    r.result = json!({
        "words": rep.words,
        "evaluations": rep.evaluations,
        "in_k": rep.in_k,
        "transfers_verified": rep.transfers_verified,
    });
    r.witness = serde_json::to_value(&rep.witnesses).expect("serializable");
    r.line(format!(
        "{} words, {} evaluations, {} in K, {} transfers verified",
        rep.words, rep.evaluations, rep.in_k, rep.transfers_verified
    ));
    r.check(
        "transfers_verified",
        rep.transfer_failures.is_empty() && rep.transfers_verified == rep.in_k,
        rep.transfer_failures.join("; "),
    );
    r.check(
        "oracle_agrees",
        rep.oracle_failures.is_empty(),
        rep.oracle_failures.join("; "),
    );
    r.check(
        "degree_and_f_bookkeeping",
        rep.bookkeeping_failures.is_empty(),
        rep.bookkeeping_failures.join("; "),
    );
    Ok(r)
}

pub fn certify() -> Outcome {
    let cert = no_retraction_certificate();
    let mut r = Report::new("certify-no-retraction", json!({}));
    r.result = json!({ "verified": cert.verify(), "conclusion": "K is not a retract of G" });
    r.witness = serde_json::to_value(&cert).expect("serializable");
    r.text = cert.to_string();
    for (i, s) in cert.steps.iter().enumerate() {
        r.check(
            &format!("step_{}_{}", i + 1, s.check),
            s.pass,
            s.claim.clone(),
        );
    }
    r.check("chain_verifies", cert.verify(), "");
    Ok(r)
}

pub fn selfcheck(profile: Profile) -> Outcome {
    let suites = run_selfcheck(profile);
    let mut r = Report::new("selfcheck", json!({ "profile": profile }));
    let total: u64 = suites.iter().map(|s| s.checks).sum();
    r.result = json!({
        "suites": suites.len(),
        "checks": total,
        "passed": suites.iter().filter(|s| s.pass).count(),
    });
    for s in &suites {
        r.line(format!(
            "{:<40} {:>9} checks {:>7} ms  {}",
            s.name,
            s.checks,
            s.millis,
            if s.pass { "pass" } else { "FAIL" }
        ));
        r.check(&s.name, s.pass, s.failures.join("; "));
    }
    Ok(r)
}
