use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freewords::{exponent_sums, FreeWord};
use crate::groups::{
    evaluate_word, Ball, DihedralElt, Element, GElt, Group, GroupId, KleinElt, ZxDElt,
};

/// `w(x1, ..., xn) = target` over the carrier of `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub word: FreeWord,
    pub target: Element,
}

impl Equation {
    pub fn new(word: FreeWord, target: Element) -> Self {
        Equation { word, target }
    }

    pub fn group(&self) -> GroupId {
        self.target.group()
    }
}

/// Visit every `n`-tuple over `elements` in lexicographic order (first
/// coordinate most significant). Stops early when `visit` returns `false`.
pub fn for_each_tuple<T: Copy>(elements: &[T], n: usize, mut visit: impl FnMut(&[T]) -> bool) {
    if n == 0 {
        visit(&[]);
        return;
    }
    if elements.is_empty() {
        return;
    }
    let mut idx = vec![0usize; n];
    let mut buf: Vec<T> = vec![elements[0]; n];
    loop {
        if !visit(&buf) {
            return;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elements.len() {
                buf[pos] = elements[idx[pos]];
                break;
            }
            idx[pos] = 0;
            buf[pos] = elements[0];
        }
    }
}

/// First tuple over `elements` (in [`for_each_tuple`] order) solving
/// `word = target`. `None` only means nothing in the ball works.
pub fn brute_force_solve_typed<T: Group>(
    word: &FreeWord,
    target: &T,
    elements: &[T],
    nvars: usize,
) -> Result<Option<Vec<T>>> {
    if nvars < word.arity() {
        return Err(Error::ArityMismatch {
            expected: word.arity(),
            found: nvars,
        });
    }
    let mut found = None;
    let mut failure = None;
    for_each_tuple(elements, nvars, |t| match evaluate_word(word, t) {
        Ok(v) if v == *target => {
            found = Some(t.to_vec());
            false
        }
        Ok(_) => true,
        Err(e) => {
            failure = Some(e);
            false
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

pub fn brute_force_solve(eq: &Equation, ball: &Ball, nvars: usize) -> Result<Option<Vec<Element>>> {
    fn go<T: Group>(eq: &Equation, ball: &Ball, nvars: usize) -> Result<Option<Vec<Element>>> {
        let target: T = eq.target.as_typed()?;
        let elements = ball.elements::<T>()?;
        Ok(
            brute_force_solve_typed(&eq.word, &target, &elements, nvars)?
                .map(|t| t.into_iter().map(Group::into_element).collect()),
        )
    }
    if ball.group != eq.group() {
        return Err(Error::CarrierMismatch {
            expected: eq.group(),
            found: ball.group,
        });
    }
    match eq.group() {
        GroupId::K => go::<KleinElt>(eq, ball, nvars),
        GroupId::D => go::<DihedralElt>(eq, ball, nvars),
        GroupId::G => go::<GElt>(eq, ball, nvars),
        GroupId::ZD => go::<ZxDElt>(eq, ball, nvars),
    }
}

/// Every value `word` takes on ball tuples, with the first tuple reaching it.
pub fn solution_table<T: Group>(
    word: &FreeWord,
    elements: &[T],
    nvars: usize,
) -> Result<HashMap<T, Vec<T>>> {
    let mut table = HashMap::new();
    let mut failure = None;
    for_each_tuple(elements, nvars, |t| match evaluate_word(word, t) {
        Ok(v) => {
            table.entry(v).or_insert_with(|| t.to_vec());
            true
        }
        Err(e) => {
            failure = Some(e);
            false
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(table),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum DihedralMethod {
    /// Target is the identity: all-identity tuple.
    Trivial,
    /// Target is an involution and variable `var` has odd exponent sum.
    OddExponent { var: usize },
    /// Ball search.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DihedralSolution {
    pub tuple: Vec<DihedralElt>,
    pub method: DihedralMethod,
}

/// Solve an equation over D by the case analysis of the dihedral quotient:
/// closed forms for the identity and for involutions hit by an odd
/// exponent sum, ball search otherwise.
pub fn dihedral_solve(eq: &Equation, ball: &Ball) -> Result<Option<DihedralSolution>> {
    let target: DihedralElt = eq.target.as_typed()?;
    let n = eq.word.arity();
    if target.is_identity() {
        return Ok(Some(DihedralSolution {
            tuple: vec![DihedralElt::identity(); n],
            method: DihedralMethod::Trivial,
        }));
    }
    if target.is_involution() {
        let sums = exponent_sums(&eq.word)?;
        if let Some(j) = sums.iter().position(|s| s & 1 == 1) {
            // the word collapses to x_j^(odd) and target is an involution
            let mut tuple = vec![DihedralElt::identity(); n];
            tuple[j] = target;
            return Ok(Some(DihedralSolution {
                tuple,
                method: DihedralMethod::OddExponent { var: j + 1 },
            }));
        }
    }
    let elements = ball.elements::<DihedralElt>()?;
    Ok(
        brute_force_solve_typed(&eq.word, &target, &elements, n)?.map(|tuple| DihedralSolution {
            tuple,
            method: DihedralMethod::Search,
        }),
    )
}
