use serde::Serialize;

use crate::groups::{Ball, DihedralElt, GElt, Group, GroupId, KleinElt, VFour, ZxDElt};
use crate::maps::decompose_k;

/// Whether `[g^2, h^2] = 1` for all pairs of `elements`.
pub fn check_square_law<T: Group>(elements: &[T]) -> bool {
    let squares: Vec<T> = match elements.iter().map(|g| g.pow(2)).collect() {
        Ok(s) => s,
        Err(_) => return false,
    };
    squares.iter().all(|s| {
        squares
            .iter()
            .all(|t| s.commutator(t).is_ok_and(|c| c.is_identity()))
    })
}

pub fn check_square_law_dyn(ball: &Ball) -> bool {
    match ball.group {
        GroupId::K => check_square_law(&KleinElt::ball_elements(ball.lmax, ball.kmax)),
        GroupId::D => check_square_law(&DihedralElt::ball_elements(ball.lmax, ball.kmax)),
        GroupId::G => check_square_law(&GElt::ball_elements(ball.lmax, ball.kmax)),
        GroupId::ZD => check_square_law(&ZxDElt::ball_elements(ball.lmax, ball.kmax)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct B2Report {
    pub elements: usize,
    pub commutation_failures: Vec<GElt>,
    /// Ball elements of `<b^2>` that lie in K, as K-elements.
    pub intersection: Vec<KleinElt>,
    pub expected: Vec<KleinElt>,
    pub passed: bool,
}

/// In the concrete G, `b^2` is central, so its normal closure is `<b^2>`,
/// and its intersection with K is the even powers of `b`.
pub fn b2_closure_check(elements: &[GElt]) -> B2Report {
    let b2 = GElt::new(VFour::E, 2, [0, 0, 0]);
    let commutation_failures: Vec<GElt> = elements
        .iter()
        .filter(|g| b2.mul(g).ok() != g.mul(&b2).ok())
        .copied()
        .collect();

    let in_b2 = |g: &GElt| g.d == VFour::E && g.l % 2 == 0 && g.k == [0, 0, 0];
    let intersection: Vec<KleinElt> = elements
        .iter()
        .filter(|g| in_b2(g))
        .filter_map(decompose_k)
        .collect();
    let expected: Vec<KleinElt> = elements
        .iter()
        .filter_map(decompose_k)
        .filter(|e| e.k == 0 && e.l % 2 == 0)
        .collect();
    let passed = commutation_failures.is_empty() && intersection == expected;
    B2Report {
        elements: elements.len(),
        commutation_failures,
        intersection,
        expected,
        passed,
    }
}

/// Elements `g` of the K-ball `|l|, |k| <= bound` with `g^2 = 1`.
pub fn involutions_in_k_ball(bound: i64) -> Vec<KleinElt> {
    KleinElt::ball_elements(bound, bound)
        .into_iter()
        .filter(|g| g.pow(2).is_ok_and(|s| s.is_identity()))
        .collect()
}
