use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::laws::involutions_in_k_ball;
use crate::groups::{square_roots_k, GElt, Group, KleinElt, Order, SquareRoots, VFour};
use crate::maps::embed_k;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertStep {
    pub claim: String,
    pub check: &'static str,
    pub pass: bool,
    /// Indices of earlier steps this one relies on.
    pub depends_on: Vec<usize>,
    pub witness: Value,
}

/// A chain of machine-checked claims.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Certificate {
    pub steps: Vec<CertStep>,
}

impl Certificate {
    fn push(
        &mut self,
        claim: &str,
        check: &'static str,
        pass: bool,
        depends_on: &[usize],
        witness: Value,
    ) {
        self.steps.push(CertStep {
            claim: claim.to_string(),
            check,
            pass,
            depends_on: depends_on.to_vec(),
            witness,
        });
    }

    /// Every step passed and only cites earlier steps.
    pub fn verify(&self) -> bool {
        self.steps
            .iter()
            .enumerate()
            .all(|(i, s)| s.pass && s.depends_on.iter().all(|&d| d < i))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            let deps: Vec<String> = s
                .depends_on
                .iter()
                .map(|d| format!("({})", d + 1))
                .collect();
            writeln!(
                f,
                "({}) [{}] {}{}",
                i + 1,
                if s.pass { "ok" } else { "FAIL" },
                s.claim,
                if deps.is_empty() {
                    String::new()
                } else {
                    format!("  [by {}]", deps.join(", "))
                }
            )?;
            writeln!(f, "    check: {}  witness: {}", s.check, s.witness)?;
        }
        Ok(())
    }
}

/// The argument that K is not a retract of G: a retraction kills torsion,
/// the `d_j` invert the `a_i`, so it kills every `a_i`, hence `a = a1 a2 a3`,
/// which K must fix.
pub fn no_retraction_certificate() -> Certificate {
    let mut cert = Certificate::default();
    let id = KleinElt::identity();

    let roots = square_roots_k(&id);
    let scan = involutions_in_k_ball(10);
    cert.push(
        "the only g in K with g^2 = 1 is the identity",
        "closed_form_square_roots",
        roots == SquareRoots::Unique { root: id } && scan == vec![id],
        &[],
        json!({
            "square_formula": "(b^l a^k)^2 = b^(2l) a^(k(1+(-1)^l))",
            "solutions": [id.to_string()],
            "ball_scan_bound": 10,
            "ball_scan_solutions": scan.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
    );

    let orders: Vec<(String, Order)> = (1..=3)
        .map(|i| (format!("d{i}"), GElt::from_d(VFour::d(i)).order()))
        .collect();
    cert.push(
        "each d_i has order 2 in G, so any homomorphism G -> K sends d_i to 1",
        "order_of",
        orders.iter().all(|(_, o)| *o == Order::Finite(2)),
        &[0],
        json!(orders
            .iter()
            .map(|(n, o)| json!({ "element": n, "order": o }))
            .collect::<Vec<_>>()),
    );

    let relations: Vec<(usize, usize, bool)> = (1..=3)
        .map(|i| {
            let j = i % 3 + 1;
            let ai = GElt::a(i);
            let holds = match (ai.conj(&GElt::from_d(VFour::d(j))), ai.inv()) {
                (Ok(c), Ok(inv)) => c == inv,
                _ => false,
            };
            (i, j, holds)
        })
        .collect();
    cert.push(
        "a_i^(d_j) = a_i^-1 in G, so rho(a_i) = rho(a_i)^-1, rho(a_i)^2 = 1 and rho(a_i) = 1",
        "conjugation_relation",
        relations.iter().all(|r| r.2),
        &[0, 1],
        json!(relations
            .iter()
            .map(|(i, j, ok)| json!({ "relation": format!("a{i}^d{j} = a{i}^-1"), "holds": ok }))
            .collect::<Vec<_>>()),
    );

    let a123 = GElt::a(1).mul(&GElt::a(2)).and_then(|x| x.mul(&GElt::a(3)));
    cert.push(
        "a = a1 a2 a3 in G, so rho(a) = 1",
        "embedding",
        a123 == Ok(embed_k(&KleinElt::A)),
        &[2],
        json!({ "embed(a)": embed_k(&KleinElt::A).to_string() }),
    );

    cert.push(
        "a != 1 in K, so rho does not fix K: no retraction G -> K exists",
        "inequality",
        KleinElt::A != id,
        &[3],
        json!({ "rho(a)": id.to_string(), "a": KleinElt::A.to_string(), "normal_forms": [[0, 0], [0, 1]] }),
    );

    cert
}
