//! Desk-scale check of verbal closedness of K in G: every equation whose
//! G-solution lies in a ball and whose value lies in K gets transferred to
//! K, and an independent ball search in K must agree that it is solvable.

use rayon::prelude::*;
use serde::Serialize;

use super::solve::{for_each_tuple, solution_table};
use super::transfer::Transfer;
use crate::error::Result;
use crate::freewords::{enumerate_reduced_words, FreeWord};
use crate::groups::{evaluate_word, GElt, Group, KleinElt};
use crate::maps::decompose_k;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeConfig {
    pub words: Vec<FreeWord>,
    /// `(lmax, kmax)` of the G-ball the solutions range over.
    pub g_ball: (i64, i64),
    /// `(lmax, kmax)` of the K-ball used by the brute-force oracle.
    pub k_ball: (i64, i64),
}

impl ProbeConfig {
    /// All reduced words of length `<= max_len` in two variables.
    pub fn exhaustive(max_len: usize, g_ball: (i64, i64), k_ball: (i64, i64)) -> Self {
        ProbeConfig {
            words: enumerate_reduced_words(2, max_len),
            g_ball,
            k_ball,
        }
    }
}

/// First transferred case for a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeWitness {
    pub word: FreeWord,
    pub g_solution: Vec<GElt>,
    pub h: KleinElt,
    pub k_solution: Vec<KleinElt>,
    pub oracle_solution: Option<Vec<KleinElt>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub words: usize,
    pub evaluations: u64,
    pub in_k: u64,
    pub transfers_verified: u64,
    pub transfer_failures: Vec<String>,
    pub oracle_failures: Vec<String>,
    pub bookkeeping_failures: Vec<String>,
    pub witnesses: Vec<ProbeWitness>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.transfer_failures.is_empty()
            && self.oracle_failures.is_empty()
            && self.bookkeeping_failures.is_empty()
            && self.transfers_verified == self.in_k
    }

    fn absorb(&mut self, other: ProbeReport) {
        self.words += other.words;
        self.evaluations += other.evaluations;
        self.in_k += other.in_k;
        self.transfers_verified += other.transfers_verified;
        self.transfer_failures.extend(other.transfer_failures);
        self.oracle_failures.extend(other.oracle_failures);
        self.bookkeeping_failures.extend(other.bookkeeping_failures);
        self.witnesses.extend(other.witnesses);
    }
}

/// Failure lists are capped per word so a broken build still reports quickly.
const MAX_FAILURES_PER_WORD: usize = 5;

fn push_capped(list: &mut Vec<String>, msg: impl FnOnce() -> String) {
    if list.len() < MAX_FAILURES_PER_WORD {
        list.push(msg());
    }
}

fn format_tuple<T: std::fmt::Display>(t: &[T]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn probe_word(
    word: &FreeWord,
    g_elements: &[GElt],
    k_elements: &[KleinElt],
) -> Result<ProbeReport> {
    let nvars = word.max_var().max(1);
    let word = word.with_arity(nvars)?;
    let transfer = Transfer::new(&word)?;
    let oracle = solution_table(&word, k_elements, nvars)?;

    let mut report = ProbeReport {
        words: 1,
        ..Default::default()
    };
    let mut error = None;
    for_each_tuple(g_elements, nvars, |tuple| {
        report.evaluations += 1;
        let value = match evaluate_word(&word, tuple) {
            Ok(v) => v,
            Err(e) => {
                error = Some(e);
                return false;
            }
        };
        let Some(h) = decompose_k(&value) else {
            return true;
        };
        report.in_k += 1;
        let oracle_hit = oracle.get(&h);
        if oracle_hit.is_none() {
            push_capped(&mut report.oracle_failures, || {
                format!("{word} = {h}: no solution in the K-ball")
            });
        }
        match transfer.run(tuple) {
            Ok(r) => {
                report.transfers_verified += 1;
                if !(r.first_coordinate_matches && r.degree_matches) {
                    push_capped(&mut report.bookkeeping_failures, || {
                        format!("{word} at {}", format_tuple(tuple))
                    });
                }
                if report.witnesses.is_empty() {
                    report.witnesses.push(ProbeWitness {
                        word: word.clone(),
                        g_solution: tuple.to_vec(),
                        h,
                        k_solution: r.k_solution,
                        oracle_solution: oracle_hit.cloned(),
                    });
                }
            }
            Err(e) => push_capped(&mut report.transfer_failures, || {
                format!("{word} at {}: {e}", format_tuple(tuple))
            }),
        }
        true
    });
    match error {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

/// Run the probe. Words are processed in parallel and merged in input
/// order, so the report is deterministic.
pub fn probe_verbal_closedness(config: &ProbeConfig) -> Result<ProbeReport> {
    let g_elements = GElt::ball_elements(config.g_ball.0, config.g_ball.1);
    let k_elements = KleinElt::ball_elements(config.k_ball.0, config.k_ball.1);
    let parts = config
        .words
        .par_iter()
        .map(|w| probe_word(w, &g_elements, &k_elements))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ProbeReport::default();
    for p in parts {
        report.absorb(p);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_set() {
        let cfg = ProbeConfig {
            words: Vec::new(),
            g_ball: (1, 1),
            k_ball: (4, 8),
        };
        let r = probe_verbal_closedness(&cfg).unwrap();
        assert_eq!(r, ProbeReport::default());
        assert!(r.passed());
    }

    #[test]
    fn x_squared_witness_family() {
        let cfg = ProbeConfig {
            words: vec![FreeWord::from_pairs(&[(1, 2)], 1).unwrap()],
            g_ball: (1, 2),
            k_ball: (4, 8),
        };
        let r = probe_verbal_closedness(&cfg).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.evaluations, 4 * 3 * 125);
        let w = &r.witnesses[0];
        assert_eq!(evaluate_word(&w.word, &w.k_solution).unwrap(), w.h);
    }

    #[test]
    fn short_words_pass() {
        let r = probe_verbal_closedness(&ProbeConfig::exhaustive(2, (1, 1), (4, 8))).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.words, 1 + 4 + 12);
        assert!(r.in_k > 0);
    }
}
