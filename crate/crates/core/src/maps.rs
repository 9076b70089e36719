//! Homomorphisms and substitutions between the carriers.
//!
//! Everything here is a closed form on normal forms. The generator-image
//! definitions are kept alongside (`*_by_generators`) so tests can check the
//! two routes against each other.

use std::fmt;

use serde::Serialize;

use crate::error::{checked, Error, Result};
use crate::groups::{DihedralElt, GElt, Group, KleinElt, VFour, ZxDElt};

/// The first coordinate `f: G -> D`, with `a1 -> a'`, `a2, a3, d1 -> 1` and
/// `b, d2, d3 -> b'`.
pub fn f_hom(g: &GElt) -> DihedralElt {
    DihedralElt::new((g.l + g.d.delta()) & 1 == 1, g.k[0])
}

/// `f` evaluated through its generator images on the normal-form product.
pub fn f_hom_by_generators(g: &GElt) -> Result<DihedralElt> {
    let d_img = if g.d.delta() == 1 {
        DihedralElt::B
    } else {
        DihedralElt::identity()
    };
    d_img
        .mul(&DihedralElt::B.pow(g.l)?)?
        .mul(&DihedralElt::A.pow(g.k[0])?)
}

/// The degree `G -> Z`: exponent of `b`.
pub fn deg_hom(g: &GElt) -> i64 {
    g.l
}

/// `K -> G` with `a -> a1 a2 a3`, `b -> b`.
pub fn embed_k(e: &KleinElt) -> GElt {
    GElt::new(VFour::E, e.l, [e.k; 3])
}

/// Inverse of [`embed_k`] on its image; `None` outside K.
pub fn decompose_k(g: &GElt) -> Option<KleinElt> {
    (g.d == VFour::E && g.k[0] == g.k[1] && g.k[1] == g.k[2]).then(|| KleinElt::new(g.l, g.k[0]))
}

/// The substitution `a1 -> a`, `a2, a3, d1 -> 1`, `d2, d3 -> b`, `b -> b`
/// applied to the normal form. Not a homomorphism, but it preserves the
/// first coordinate.
pub fn hat_subst(g: &GElt) -> Result<KleinElt> {
    Ok(KleinElt::new(checked::add(g.l, g.d.delta())?, g.k[0]))
}

/// A permutation `p` of `{1, 2, 3}`, acting on G by `d_i -> d_p(i)`,
/// `a_i -> a_p(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexPerm([usize; 3]);

impl IndexPerm {
    pub const IDENTITY: IndexPerm = IndexPerm([1, 2, 3]);

    /// `images[i-1] = p(i)`; must be a bijection of `{1, 2, 3}`.
    pub fn new(images: [usize; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &x in &images {
            if !(1..=3).contains(&x) || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
        }
        Some(IndexPerm(images))
    }

    pub fn transposition(i: usize, j: usize) -> Option<Self> {
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return None;
        }
        let mut images = [1, 2, 3];
        images.swap(i - 1, j - 1);
        Some(IndexPerm(images))
    }

    pub fn all() -> [IndexPerm; 6] {
        [
            IndexPerm([1, 2, 3]),
            IndexPerm([1, 3, 2]),
            IndexPerm([2, 1, 3]),
            IndexPerm([2, 3, 1]),
            IndexPerm([3, 1, 2]),
            IndexPerm([3, 2, 1]),
        ]
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    fn apply_d(&self, d: VFour) -> VFour {
        match d {
            VFour::E => VFour::E,
            other => VFour::d(self.image(other.index())),
        }
    }
}

impl fmt::Display for IndexPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 2 3 -> {} {} {})", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for IndexPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Relabel the indices of `g`; an automorphism of G fixing K pointwise.
pub fn perm_aut(p: &IndexPerm, g: &GElt) -> GElt {
    let mut k = [0; 3];
    for i in 1..=3 {
        k[p.image(i) - 1] = g.k[i - 1];
    }
    GElt::new(p.apply_d(g.d), g.l, k)
}

/// `K -> K / <b^2> = D`.
pub fn pi_quotient(e: &KleinElt) -> DihedralElt {
    DihedralElt::new(e.l & 1 == 1, e.k)
}

/// `Φ(g) = (deg g, f g)`.
pub fn phi(g: &GElt) -> ZxDElt {
    ZxDElt::new(deg_hom(g), f_hom(g))
}

/// Membership in `Φ(K) = {(i, b'^e a'^k) : i ≡ e mod 2}`.
pub fn in_fibred_product(z: &ZxDElt) -> bool {
    (z.i & 1 == 1) == z.d.eps
}

/// `φ^-1` on the fibred product.
pub fn phi_inv_on_k(z: &ZxDElt) -> Result<KleinElt> {
    if !in_fibred_product(z) {
        return Err(Error::NotInImage(z.to_string()));
    }
    Ok(KleinElt::new(z.i, z.d.k))
}

/// Membership in the index-two subgroup `H = Φ^-1(Φ(K))`, i.e. `d ∈ {1, d1}`.
pub fn in_h(g: &GElt) -> bool {
    g.d.delta() == 0
}

/// The retraction `H -> K`, `φ^-1 ∘ Φ`.
pub fn rho_retract(g: &GElt) -> Result<KleinElt> {
    if !in_h(g) {
        return Err(Error::NotInSubgroup(g.to_string()));
    }
    phi_inv_on_k(&phi(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;

    fn g(d: VFour, l: i64, k: [i64; 3]) -> GElt {
        GElt::new(d, l, k)
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_hom(&GElt::a(1)), DihedralElt::new(false, 1));
        assert_eq!(f_hom(&g(VFour::D1, 0, [0, 5, 7])), DihedralElt::identity());
        assert_eq!(
            f_hom(&g(VFour::D2, 1, [2, 0, 1])),
            DihedralElt::new(false, 2)
        );
    }

    #[test]
    fn f_closed_form_matches_generators() {
        for x in GElt::ball_elements(2, 2) {
            assert_eq!(f_hom(&x), f_hom_by_generators(&x).unwrap());
        }
        // generator images as stated
        assert_eq!(f_hom(&GElt::a(2)), DihedralElt::identity());
        assert_eq!(f_hom(&GElt::a(3)), DihedralElt::identity());
        assert_eq!(f_hom(&GElt::from_d(VFour::D1)), DihedralElt::identity());
        assert_eq!(f_hom(&GElt::B), DihedralElt::B);
        assert_eq!(f_hom(&GElt::from_d(VFour::D2)), DihedralElt::B);
        assert_eq!(f_hom(&GElt::from_d(VFour::D3)), DihedralElt::B);
    }

    #[test]
    fn deg_and_embed() {
        assert_eq!(deg_hom(&GElt::B), 1);
        assert_eq!(deg_hom(&g(VFour::D3, -2, [9, 9, 9])), -2);
        assert_eq!(deg_hom(&GElt::identity()), 0);
        assert_eq!(embed_k(&KleinElt::A), g(VFour::E, 0, [1, 1, 1]));
        assert_eq!(embed_k(&KleinElt::identity()), GElt::identity());
        assert_eq!(embed_k(&KleinElt::new(2, 3)), g(VFour::E, 2, [3, 3, 3]));
        let a123 = GElt::a(1)
            .mul(&GElt::a(2))
            .unwrap()
            .mul(&GElt::a(3))
            .unwrap();
        assert_eq!(embed_k(&KleinElt::A), a123);
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose_k(&g(VFour::E, 2, [3, 3, 3])),
            Some(KleinElt::new(2, 3))
        );
        assert_eq!(decompose_k(&GElt::identity()), Some(KleinElt::identity()));
        assert_eq!(decompose_k(&GElt::from_d(VFour::D1)), None);
        assert_eq!(decompose_k(&g(VFour::E, 0, [1, 1, 2])), None);
    }

    #[test]
    fn hat_examples() {
        assert_eq!(
            hat_subst(&g(VFour::D1, 2, [3, 1, -1])).unwrap(),
            KleinElt::new(2, 3)
        );
        assert_eq!(hat_subst(&g(VFour::D2, 0, [0, 4, 0])).unwrap(), KleinElt::B);
        for e in KleinElt::ball_elements(3, 3) {
            assert_eq!(hat_subst(&embed_k(&e)).unwrap(), e);
        }
    }

    #[test]
    fn hat_is_not_a_homomorphism() {
        let d2 = GElt::from_d(VFour::D2);
        let lhs = hat_subst(&d2.mul(&d2).unwrap()).unwrap();
        let rhs = hat_subst(&d2)
            .unwrap()
            .mul(&hat_subst(&d2).unwrap())
            .unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn perm_examples() {
        let p = IndexPerm::transposition(1, 2).unwrap();
        assert_eq!(
            perm_aut(&p, &g(VFour::D2, 1, [2, 0, 1])),
            g(VFour::D1, 1, [0, 2, 1])
        );
        for q in IndexPerm::all() {
            let e = embed_k(&KleinElt::new(3, -2));
            assert_eq!(perm_aut(&q, &e), e);
        }
        let x = g(VFour::D3, -1, [1, 2, 3]);
        assert_eq!(perm_aut(&IndexPerm::IDENTITY, &x), x);
        assert!(IndexPerm::new([1, 1, 2]).is_none());
    }

    #[test]
    fn quotient_phi_retract_examples() {
        assert_eq!(pi_quotient(&KleinElt::new(3, 5)), DihedralElt::new(true, 5));
        assert_eq!(pi_quotient(&KleinElt::new(2, 0)), DihedralElt::identity());
        assert_eq!(pi_quotient(&KleinElt::A), DihedralElt::A);

        assert_eq!(
            phi(&embed_k(&KleinElt::new(1, 1))),
            ZxDElt::new(1, DihedralElt::new(true, 1))
        );
        assert_eq!(phi(&GElt::identity()), ZxDElt::identity());
        assert_eq!(
            phi(&GElt::from_d(VFour::D2)),
            ZxDElt::new(0, DihedralElt::B)
        );

        assert!(in_fibred_product(&ZxDElt::new(
            1,
            DihedralElt::new(true, 1)
        )));
        assert!(in_fibred_product(&ZxDElt::identity()));
        assert!(!in_fibred_product(&ZxDElt::new(0, DihedralElt::B)));

        assert_eq!(
            phi_inv_on_k(&ZxDElt::new(3, DihedralElt::new(true, 5))).unwrap(),
            KleinElt::new(3, 5)
        );
        assert_eq!(
            phi_inv_on_k(&ZxDElt::identity()).unwrap(),
            KleinElt::identity()
        );
        assert!(matches!(
            phi_inv_on_k(&ZxDElt::new(2, DihedralElt::new(true, 4))),
            Err(Error::NotInImage(_))
        ));

        assert!(in_h(&g(VFour::D1, 5, [1, 2, 3])));
        assert!(in_h(&embed_k(&KleinElt::new(-3, 8))));
        assert!(!in_h(&GElt::from_d(VFour::D2)));

        assert_eq!(
            rho_retract(&g(VFour::D1, 3, [5, -2, 7])).unwrap(),
            KleinElt::new(3, 5)
        );
        assert_eq!(
            rho_retract(&embed_k(&KleinElt::new(-4, 2))).unwrap(),
            KleinElt::new(-4, 2)
        );
        assert!(matches!(
            rho_retract(&g(VFour::D2, 1, [0, 0, 0])),
            Err(Error::NotInSubgroup(_))
        ));
    }
}
