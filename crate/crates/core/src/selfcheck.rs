//! Invariant suites for every module, at two sizes.
//!
//! Each suite counts the individual checks it performs and records the
//! first few failures. The generic suites (`group_axioms`, `pow_agreement`,
//! `square_law`) take their carrier as a type parameter so they can be run
//! against deliberately broken group laws.

use std::collections::HashSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closure::{
    b2_closure_check, brute_force_solve_typed, check_square_law, dihedral_solve,
    involutions_in_k_ball, no_retraction_certificate, probe_verbal_closedness, Equation,
    ProbeConfig,
};
use crate::freewords::{
    enumerate_reduced_words, exponent_sums, gcd_of, nielsen_normalize, random_aut, random_word,
    reduce, FreeWord, Letter,
};
use crate::groups::{
    centralizes_squares_k, is_square_k, unique_sqrt_k, Ball, DihedralElt, GElt, Group, GroupId,
    KleinElt, VFour, ZxDElt,
};
use crate::maps::{
    deg_hom, embed_k, f_hom, hat_subst, in_h, perm_aut, phi, phi_inv_on_k, pi_quotient,
    rho_retract, IndexPerm,
};
use crate::parse::{parse_d, parse_g, parse_k, parse_word, parse_zd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Profile::Quick => quick,
            Profile::Full => full,
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(format!("unknown profile `{s}` (expected quick or full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub pass: bool,
    pub checks: u64,
    pub failures: Vec<String>,
    pub millis: u128,
}

/// Accumulates checks for one suite.
pub struct Suite {
    name: String,
    checks: u64,
    failures: Vec<String>,
    failed: bool,
    started: Instant,
}

impl Suite {
    pub fn new(name: &str) -> Self {
        Suite {
            name: name.to_string(),
            checks: 0,
            failures: Vec::new(),
            failed: false,
            started: Instant::now(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < 5 {
                self.failures.push(what());
            }
        }
    }

    pub fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            pass: !self.failed,
            checks: self.checks,
            failures: self.failures,
            millis: self.started.elapsed().as_millis(),
        }
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x006b_6c65_696e)
}

// ---------------------------------------------------------------------------
// Generic group suites

/// Associativity on `triples` random triples from `sample`, identity and
/// inverse laws on every element of `sample`.
pub fn group_axioms<T: Group>(name: &str, sample: &[T], triples: usize) -> SuiteResult {
    let mut s = Suite::new(name);
    let mut r = rng();
    let e = T::identity();
    for g in sample {
        s.check(
            e.mul(g).ok() == Some(*g) && g.mul(&e).ok() == Some(*g),
            || format!("identity law at {g}"),
        );
        let inv = g.inv();
        let ok = inv.is_ok_and(|i| g.mul(&i).ok() == Some(e) && i.mul(g).ok() == Some(e));
        s.check(ok, || format!("inverse law at {g}"));
    }
    for _ in 0..triples {
        let (a, b, c) = (
            *sample.choose(&mut r).expect("nonempty sample"),
            *sample.choose(&mut r).expect("nonempty sample"),
            *sample.choose(&mut r).expect("nonempty sample"),
        );
        let lhs = a.mul(&b).and_then(|ab| ab.mul(&c));
        let rhs = b.mul(&c).and_then(|bc| a.mul(&bc));
        s.check(lhs.is_ok() && lhs == rhs, || {
            format!("associativity at ({a}, {b}, {c})")
        });
    }
    s.finish()
}

/// `pow` against repeated multiplication for exponents in `-max_n..=max_n`.
pub fn pow_agreement<T: Group>(name: &str, sample: &[T], max_n: i64) -> SuiteResult {
    let mut s = Suite::new(name);
    for g in sample {
        let mut acc = T::identity();
        for n in 0..=max_n {
            s.check(g.pow(n).ok() == Some(acc), || format!("{g}^{n}"));
            let inv = acc.inv().ok();
            s.check(g.pow(-n).ok() == inv, || format!("{g}^-{n}"));
            acc = match acc.mul(g) {
                Ok(x) => x,
                Err(_) => break,
            };
        }
    }
    s.finish()
}

pub fn square_law<T: Group>(name: &str, sample: &[T]) -> SuiteResult {
    let mut s = Suite::new(name);
    let squares: Vec<Option<T>> = sample.iter().map(|g| g.pow(2).ok()).collect();
    for (g, sg) in sample.iter().zip(&squares) {
        for (h, sh) in sample.iter().zip(&squares) {
            let ok = match (sg, sh) {
                (Some(a), Some(b)) => a.commutator(b).is_ok_and(|c| c.is_identity()),
                _ => false,
            };
            s.check(ok, || format!("[{g}^2, {h}^2] != 1"));
        }
    }
    s.finish()
}

// ---------------------------------------------------------------------------
// freewords

fn nielsen_suite(n_words: usize) -> SuiteResult {
    let mut s = Suite::new("freewords.nielsen_normalize");
    let mut r = rng();
    for _ in 0..n_words {
        let arity = r.gen_range(1..=4);
        let w = random_word(&mut r, arity, 12);
        let Ok(nf) = nielsen_normalize(&w) else {
            s.check(false, || format!("normalize failed on {w}"));
            continue;
        };
        let image = nf.alpha.apply(&w);
        let expected = FreeWord::from_pairs(&[(1, nf.m)], arity).and_then(|x| x.mul(&nf.u));
        s.check(image.is_ok() && image == expected, || {
            format!("alpha(w) != x^m u for {w}")
        });
        s.check(
            exponent_sums(&nf.u).is_ok_and(|v| v.iter().all(|&x| x == 0)),
            || format!("u not in [F,F] for {w}"),
        );
        let sums = exponent_sums(&w).unwrap_or_default();
        s.check(gcd_of(&sums).ok() == Some(nf.m), || {
            format!("m != gcd for {w}")
        });
        let back = nf.alpha.inverse().and_then(|inv| inv.apply(&image?));
        s.check(back.as_ref() == Ok(&w), || {
            format!("alpha^-1 alpha w != w for {w}")
        });
    }
    s.finish()
}

fn gcd_invariance_suite(n: usize) -> SuiteResult {
    let mut s = Suite::new("freewords.gcd_invariance");
    let mut r = rng();
    for _ in 0..n {
        let arity = r.gen_range(1..=4);
        let w = random_word(&mut r, arity, 12);
        let alpha = random_aut(&mut r, arity, 8);
        let g0 = exponent_sums(&w).and_then(|v| gcd_of(&v));
        let g1 = alpha
            .apply(&w)
            .and_then(|x| exponent_sums(&x))
            .and_then(|v| gcd_of(&v));
        s.check(g0.is_ok() && g0 == g1, || {
            format!("gcd changed for {w} under {:?}", alpha.moves())
        });
        let back = alpha.inverse().and_then(|inv| inv.apply(&alpha.apply(&w)?));
        s.check(back.as_ref() == Ok(&w), || {
            format!("round trip failed for {w}")
        });
    }
    s.finish()
}

fn reduce_idempotent_suite(n: usize) -> SuiteResult {
    let mut s = Suite::new("freewords.reduce_idempotent");
    let mut r = rng();
    for _ in 0..n {
        let arity = r.gen_range(1..=4);
        let raw: Vec<Letter> = (0..r.gen_range(0..=12))
            .map(|_| Letter::new(r.gen_range(1..=arity), r.gen_range(-2..=2)))
            .collect();
        let once = reduce(&raw, arity).expect("in range");
        let twice = reduce(once.letters(), arity).expect("in range");
        s.check(once == twice, || {
            format!("reduce not idempotent on {raw:?}")
        });
        s.check(
            once.letters().windows(2).all(|p| p[0].var != p[1].var)
                && once.letters().iter().all(|l| l.exp != 0),
            || format!("not fully merged: {once}"),
        );
    }
    s.finish()
}

// ---------------------------------------------------------------------------
// groups

fn structure_suite() -> SuiteResult {
    let mut s = Suite::new("groups.b_squared_central_and_action");
    let b2 = GElt::new(VFour::E, 2, [0; 3]);
    for g in GElt::ball_elements(1, 1) {
        s.check(b2.mul(&g).ok() == g.mul(&b2).ok(), || {
            format!("b^2 does not commute with {g}")
        });
    }
    let a = embed_k(&KleinElt::A);
    s.check(
        a.conj(&GElt::B).ok() == Some(GElt::new(VFour::E, 0, [-1, -1, -1])),
        || "a^b != a^-1 in G".into(),
    );
    s.finish()
}

fn squares_suite(sqrt_bound: i64) -> SuiteResult {
    let mut s = Suite::new("groups.squares_toolkit");
    let roots_ball = KleinElt::ball_elements(3, 6);
    let squares: HashSet<KleinElt> = roots_ball.iter().filter_map(|g| g.pow(2).ok()).collect();
    for t in KleinElt::ball_elements(6, 6) {
        s.check(is_square_k(&t) == squares.contains(&t), || {
            format!("is_square_k({t})")
        });
    }
    for m in -sqrt_bound..=sqrt_bound {
        for k in -sqrt_bound..=sqrt_bound {
            let target = KleinElt::new(4 * m, 2 * k);
            let root = unique_sqrt_k(&target);
            s.check(
                root.as_ref().is_ok_and(|r| r.pow(2).ok() == Some(target)),
                || format!("sqrt of {target}"),
            );
            let found: Vec<KleinElt> = KleinElt::ball_elements(2 * m.abs() + 1, k.abs())
                .into_iter()
                .filter(|g| g.pow(2).ok() == Some(target))
                .collect();
            s.check(found.len() == 1 && root.as_ref() == Ok(&found[0]), || {
                format!("roots of {target}: {found:?}")
            });
        }
    }
    s.check(unique_sqrt_k(&KleinElt::new(2, 0)).is_err(), || {
        "b^2 accepted".into()
    });
    let sq_sample: Vec<KleinElt> = KleinElt::ball_elements(3, 3)
        .iter()
        .filter_map(|g| g.pow(2).ok())
        .collect();
    for g in KleinElt::ball_elements(4, 4) {
        let commutes = sq_sample
            .iter()
            .all(|q| g.commutator(q).is_ok_and(|c| c.is_identity()));
        s.check(centralizes_squares_k(&g) == commutes, || {
            format!("centralizes_squares_k({g})")
        });
        s.check(centralizes_squares_k(&g) == (g.l % 2 == 0), || {
            format!("parity at {g}")
        });
    }
    // every square has even degree, b has degree 1
    s.check(
        squares.iter().all(|q| q.l % 2 == 0) && KleinElt::B.l == 1,
        || "square of odd degree".into(),
    );
    s.finish()
}

// ---------------------------------------------------------------------------
// maps

fn homomorphism_suite() -> SuiteResult {
    let mut s = Suite::new("maps.homomorphisms");
    let ball = GElt::ball_elements(1, 1);
    for g in &ball {
        for h in &ball {
            let gh = g.mul(h).expect("small ball");
            s.check(Ok(f_hom(&gh)) == f_hom(g).mul(&f_hom(h)), || {
                format!("f at ({g}, {h})")
            });
            s.check(deg_hom(&gh) == deg_hom(g) + deg_hom(h), || {
                format!("deg at ({g}, {h})")
            });
            s.check(Ok(phi(&gh)) == phi(g).mul(&phi(h)), || {
                format!("phi at ({g}, {h})")
            });
        }
        s.check(
            hat_subst(g).is_ok_and(|x| f_hom(&embed_k(&x)) == f_hom(g)),
            || format!("hat changes f at {g}"),
        );
    }
    let kball = KleinElt::ball_elements(3, 3);
    for e in &kball {
        for e2 in &kball {
            let p = e.mul(e2).expect("small ball");
            s.check(
                Ok(pi_quotient(&p)) == pi_quotient(e).mul(&pi_quotient(e2)),
                || format!("pi at ({e}, {e2})"),
            );
            s.check(Ok(embed_k(&p)) == embed_k(e).mul(&embed_k(e2)), || {
                format!("embed at ({e}, {e2})")
            });
        }
    }
    for k in -10..=10 {
        for m in -10..=10 {
            let g = KleinElt::A
                .pow(2 * k)
                .and_then(|x| x.mul(&KleinElt::B.pow(4 * m)?));
            let c = g.and_then(|g| KleinElt::B.commutator(&g));
            s.check(c == KleinElt::A.pow(4 * k), || {
                format!("[b, a^{}b^{}]", 2 * k, 4 * m)
            });
        }
    }
    let k5 = KleinElt::ball_elements(5, 5);
    let images: HashSet<ZxDElt> = k5.iter().map(|e| phi(&embed_k(e))).collect();
    s.check(images.len() == k5.len(), || "phi not injective on K".into());
    s.finish()
}

fn index_two_suite() -> SuiteResult {
    let mut s = Suite::new("maps.index_two");
    let d2 = GElt::from_d(VFour::D2);
    s.check(!in_h(&d2), || "d2 in H".into());
    for g in GElt::ball_elements(1, 1) {
        let moved = d2.mul(&g).expect("small ball");
        s.check(in_h(&g) != in_h(&moved), || {
            format!("coset cover fails at {g}")
        });
        s.check(in_h(&g) == crate::maps::in_fibred_product(&phi(&g)), || {
            format!("in_h closed form at {g}")
        });
    }
    s.finish()
}

fn retraction_suite(pairs: usize) -> SuiteResult {
    let mut s = Suite::new("maps.retraction");
    let mut r = rng();
    let h_ball: Vec<GElt> = GElt::ball_elements(2, 2).into_iter().filter(in_h).collect();
    for _ in 0..pairs {
        let g = *h_ball.choose(&mut r).expect("nonempty");
        let h = *h_ball.choose(&mut r).expect("nonempty");
        let lhs = g.mul(&h).and_then(|gh| rho_retract(&gh));
        let rhs = rho_retract(&g).and_then(|x| x.mul(&rho_retract(&h)?));
        s.check(lhs.is_ok() && lhs == rhs, || {
            format!("rho not multiplicative at ({g}, {h})")
        });
    }
    for g in &h_ball {
        let once = rho_retract(g);
        let twice = once.clone().and_then(|x| rho_retract(&embed_k(&x)));
        s.check(once.is_ok() && once == twice, || {
            format!("rho not idempotent at {g}")
        });
        s.check(
            once.as_ref()
                .is_ok_and(|x| phi_inv_on_k(&phi(g)).as_ref() == Ok(x)),
            || format!("rho != phi^-1 phi at {g}"),
        );
    }
    for e in KleinElt::ball_elements(5, 5) {
        s.check(rho_retract(&embed_k(&e)) == Ok(e), || {
            format!("rho(embed({e})) != {e}")
        });
    }
    s.finish()
}

fn perm_suite(pairs: usize) -> SuiteResult {
    let mut s = Suite::new("maps.index_permutations");
    let mut r = rng();
    let ball = GElt::ball_elements(1, 2);
    for p in IndexPerm::all() {
        for _ in 0..pairs / 6 {
            let g = *ball.choose(&mut r).expect("nonempty");
            let h = *ball.choose(&mut r).expect("nonempty");
            let lhs = g.mul(&h).map(|gh| perm_aut(&p, &gh));
            let rhs = perm_aut(&p, &g).mul(&perm_aut(&p, &h));
            s.check(lhs.is_ok() && lhs == rhs, || {
                format!("{p} not multiplicative at ({g}, {h})")
            });
        }
        for e in KleinElt::ball_elements(3, 3) {
            let x = embed_k(&e);
            s.check(perm_aut(&p, &x) == x, || format!("{p} moves {e}"));
        }
    }
    s.finish()
}

// ---------------------------------------------------------------------------
// closure

fn transfer_suite(max_len: usize) -> SuiteResult {
    let mut s = Suite::new("closure.transfer_soundness");
    match probe_verbal_closedness(&ProbeConfig::exhaustive(max_len, (1, 1), (4, 8))) {
        Ok(report) => {
            s.checks += report.in_k * 3;
            s.check(report.passed(), || {
                let mut all = report.transfer_failures.clone();
                all.extend(report.oracle_failures.iter().cloned());
                all.extend(report.bookkeeping_failures.iter().cloned());
                all.join("; ")
            });
        }
        Err(e) => s.check(false, || format!("probe aborted: {e}")),
    }
    s.finish()
}

fn dihedral_targets() -> Vec<DihedralElt> {
    vec![
        DihedralElt::identity(),
        DihedralElt::B,
        DihedralElt::new(true, 1),
        DihedralElt::new(false, 1),
        DihedralElt::new(false, -1),
        DihedralElt::new(false, 2),
        DihedralElt::new(false, -2),
    ]
}

fn dihedral_suite(kmax: i64) -> SuiteResult {
    let mut s = Suite::new("closure.dihedral_cases");
    let ball = Ball::new(GroupId::D, 0, kmax);
    let elements = DihedralElt::ball_elements(0, kmax);
    for w in enumerate_reduced_words(2, 4) {
        for h in dihedral_targets() {
            let eq = Equation::new(w.clone(), h.into_element());
            let brute = brute_force_solve_typed(&w, &h, &elements, w.arity());
            let cases = dihedral_solve(&eq, &ball);
            match (brute, cases) {
                (Ok(b), Ok(c)) => {
                    s.check(b.is_none() || c.is_some(), || {
                        format!("{w} = {h}: cases missed a solution")
                    });
                    if let Some(sol) = &c {
                        let v = crate::groups::evaluate_word(&w, &sol.tuple);
                        s.check(v == Ok(h), || {
                            format!("{w} = {h}: bad tuple {:?}", sol.tuple)
                        });
                        // an involution is reachable only if some exponent sum is odd
                        if h.is_identity() || h.is_involution() {
                            s.check(
                                !matches!(sol.method, crate::closure::DihedralMethod::Search),
                                || format!("{w} = {h} needed search"),
                            );
                        }
                    }
                }
                (b, c) => s.check(false, || format!("{w} = {h}: {b:?} / {c:?}")),
            }
        }
    }
    s.finish()
}

fn no_retraction_suite() -> SuiteResult {
    let mut s = Suite::new("closure.no_retraction");
    let cert = no_retraction_certificate();
    for step in &cert.steps {
        s.check(step.pass, || {
            format!("certificate step failed: {}", step.claim)
        });
    }
    s.check(cert.verify(), || "certificate does not verify".into());
    s.check(
        involutions_in_k_ball(10) == vec![KleinElt::identity()],
        || "nontrivial involution in K".into(),
    );
    s.finish()
}

fn laws_suite() -> SuiteResult {
    let mut s = Suite::new("closure.square_law_and_b2");
    s.check(check_square_law(&GElt::ball_elements(1, 1)), || {
        "square law fails in G".into()
    });
    s.check(check_square_law(&KleinElt::ball_elements(3, 3)), || {
        "square law fails in K".into()
    });
    s.check(check_square_law(&DihedralElt::ball_elements(0, 5)), || {
        "square law fails in D".into()
    });
    let r = b2_closure_check(&GElt::ball_elements(2, 1));
    s.check(r.passed, || format!("b^2 closure check: {r:?}"));
    s.finish()
}

// ---------------------------------------------------------------------------
// parse

fn round_trip_suite(n_words: usize) -> SuiteResult {
    let mut s = Suite::new("parse.round_trip");
    for e in KleinElt::ball_elements(3, 3) {
        s.check(parse_k(&e.to_string()) == Ok(e), || format!("K: {e}"));
    }
    for e in DihedralElt::ball_elements(0, 3) {
        s.check(parse_d(&e.to_string()) == Ok(e), || format!("D: {e}"));
    }
    for e in GElt::ball_elements(1, 1) {
        s.check(parse_g(&e.to_string()) == Ok(e), || format!("G: {e}"));
    }
    for e in ZxDElt::ball_elements(2, 2) {
        s.check(parse_zd(&e.to_string()) == Ok(e), || format!("ZD: {e}"));
    }
    let mut r = rng();
    for _ in 0..n_words {
        let arity = r.gen_range(1..=4);
        let w = random_word(&mut r, arity, 12);
        s.check(
            parse_word(&w.to_string(), Some(arity)) == Ok(w.clone()),
            || format!("word: {w}"),
        );
    }
    s.finish()
}

/// Run every suite at the given profile.
pub fn run_selfcheck(profile: Profile) -> Vec<SuiteResult> {
    let random = profile.pick(2_000, 10_000);
    vec![
        nielsen_suite(random),
        gcd_invariance_suite(random),
        reduce_idempotent_suite(random),
        group_axioms("groups.axioms.K", &KleinElt::ball_elements(6, 6), random),
        group_axioms("groups.axioms.D", &DihedralElt::ball_elements(0, 6), random),
        group_axioms("groups.axioms.G", &GElt::ball_elements(2, 2), random),
        group_axioms("groups.axioms.ZD", &ZxDElt::ball_elements(3, 3), random),
        pow_agreement("groups.pow.K", &KleinElt::ball_elements(3, 3), 6),
        pow_agreement("groups.pow.D", &DihedralElt::ball_elements(0, 3), 6),
        pow_agreement("groups.pow.G", &GElt::ball_elements(1, 1), 6),
        pow_agreement("groups.pow.ZD", &ZxDElt::ball_elements(1, 2), 6),
        square_law("groups.square_law.G", &GElt::ball_elements(1, 1)),
        square_law("groups.square_law.K", &KleinElt::ball_elements(3, 3)),
        structure_suite(),
        squares_suite(profile.pick(10, 20)),
        homomorphism_suite(),
        index_two_suite(),
        retraction_suite(random),
        perm_suite(random),
        transfer_suite(profile.pick(3, 4)),
        dihedral_suite(profile.pick(3, 5)),
        no_retraction_suite(),
        laws_suite(),
        round_trip_suite(random),
    ]
}
