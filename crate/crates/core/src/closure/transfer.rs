//! Turning a solution in G of an equation `w = h` with `h ∈ K` into a
//! solution in K.
//!
//! The pipeline: bring `w` to `x1^m u` by a Nielsen change of variables,
//! re-express the G-solution in the new variables, rename indices so the
//! first unknown has no `d2`/`d3` part, apply the hat substitution entrywise
//! and pull the result back through the change of variables. Elements of K
//! are determined by first coordinate and degree, and both survive every
//! step, so the result always verifies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freewords::{nielsen_normalize, FreeAut, FreeWord, NielsenForm};
use crate::groups::{evaluate_word, GElt, KleinElt, VFour};
use crate::maps::{decompose_k, deg_hom, f_hom, hat_subst, perm_aut, IndexPerm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub word: FreeWord,
    pub g_solution: Vec<GElt>,
    pub h: KleinElt,
    pub m: i64,
    pub u: FreeWord,
    pub alpha: FreeAut,
    /// Solution of `x1^m u = h` after re-expression and renaming.
    pub renamed: Vec<GElt>,
    pub perm: Option<IndexPerm>,
    pub hat: Vec<KleinElt>,
    pub k_solution: Vec<KleinElt>,
    /// `f(h)` equals `(x1^m u)` evaluated on `f(renamed)`.
    pub first_coordinate_matches: bool,
    /// `deg(h) = m * deg(renamed[0])`.
    pub degree_matches: bool,
    pub verified: bool,
}

/// Per-word precomputation, reusable across many G-tuples.
#[derive(Debug, Clone)]
pub struct Transfer {
    word: FreeWord,
    nielsen: NielsenForm,
    normalized: FreeWord,
    alpha_images: Vec<FreeWord>,
    alpha_inv_images: Vec<FreeWord>,
}

impl Transfer {
    pub fn new(word: &FreeWord) -> Result<Self> {
        let nielsen = nielsen_normalize(word)?;
        let alpha_images = nielsen.alpha.generator_images()?;
        let alpha_inv_images = nielsen.alpha.inverse()?.generator_images()?;
        let normalized = word.substitute(&alpha_images)?;
        Ok(Transfer {
            word: word.clone(),
            nielsen,
            normalized,
            alpha_images,
            alpha_inv_images,
        })
    }

    pub fn nielsen(&self) -> &NielsenForm {
        &self.nielsen
    }

    /// Run the pipeline on one G-tuple. Entries past the word's arity are
    /// carried through the hat substitution unchanged in role.
    pub fn run(&self, tuple: &[GElt]) -> Result<TransferReport> {
        let n = self.word.arity();
        if tuple.len() < n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: tuple.len(),
            });
        }
        let h_g = evaluate_word(&self.word, tuple)?;
        let h = decompose_k(&h_g).ok_or_else(|| Error::TargetNotInK(h_g.to_string()))?;
        let (used, extra) = tuple.split_at(n);

        // v'_j = alpha^-1(x_j)(x~), so that alpha(w)(v') = w(x~) = h
        let mut renamed = self
            .alpha_inv_images
            .iter()
            .map(|img| evaluate_word(img, used))
            .collect::<Result<Vec<_>>>()?;

        let m = self.nielsen.m;
        let perm = match renamed[0].d {
            VFour::D2 | VFour::D3 if m > 0 => IndexPerm::transposition(1, renamed[0].d.index()),
            _ => None,
        };
        if let Some(p) = perm {
            renamed = renamed.iter().map(|g| perm_aut(&p, g)).collect();
        }

        let first_coordinate_matches = {
            let images: Vec<_> = renamed.iter().map(f_hom).collect();
            evaluate_word(&self.normalized, &images)? == f_hom(&h_g)
        };
        let degree_matches = deg_hom(&h_g).checked_sub(
            m.checked_mul(deg_hom(&renamed[0]))
                .ok_or(Error::Overflow("degree"))?,
        ) == Some(0);

        let hat = renamed.iter().map(hat_subst).collect::<Result<Vec<_>>>()?;

        // t_j = alpha(x_j)(v^), so that w(t) = alpha(w)(v^)
        let mut k_solution = self
            .alpha_images
            .iter()
            .map(|img| evaluate_word(img, &hat))
            .collect::<Result<Vec<_>>>()?;
        for g in extra {
            k_solution.push(hat_subst(g)?);
        }

        let value = evaluate_word(&self.word, &k_solution)?;
        if value != h {
            return Err(Error::VerificationFailed(format!(
                "{} evaluates to {value}, expected {h}",
                self.word
            )));
        }

        Ok(TransferReport {
            word: self.word.clone(),
            g_solution: tuple.to_vec(),
            h,
            m,
            u: self.nielsen.u.clone(),
            alpha: self.nielsen.alpha.clone(),
            renamed,
            perm,
            hat,
            k_solution,
            first_coordinate_matches,
            degree_matches,
            verified: true,
        })
    }
}

/// Transfer a solution `tuple` of `w = h` (with `h` computed from the tuple)
/// from G to K.
pub fn transfer_solution(w: &FreeWord, tuple: &[GElt]) -> Result<TransferReport> {
    Transfer::new(w)?.run(tuple)
}
