//! Exact normal forms for the four carriers:
//!
//! * `K = <a, b | a^b = a^-1>`, elements `b^l a^k`;
//! * `D = <b'>_2 ⋉ <a'>_inf`, elements `b'^e a'^k`, `e ∈ {0, 1}`;
//! * `G = (V4 × <b>) ⋉ <a1, a2, a3>`, elements `d b^l a1^k1 a2^k2 a3^k3`,
//!   where `b` inverts every `a_i`, `d_i` fixes `a_i` and inverts the other two;
//! * `Z × D`, componentwise.
//!
//! All arithmetic is checked; overflow surfaces as [`Error::Overflow`].

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{checked, Error, Result};
use crate::freewords::FreeWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupId {
    K,
    D,
    G,
    ZD,
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupId::K => "K",
            GroupId::D => "D",
            GroupId::G => "G",
            GroupId::ZD => "ZD",
        })
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" => Ok(GroupId::K),
            "D" => Ok(GroupId::D),
            "G" => Ok(GroupId::G),
            "ZD" => Ok(GroupId::ZD),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown group `{s}` (expected K, D, G or ZD)"),
            }),
        }
    }
}

impl Serialize for GroupId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u64(*n),
            Order::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// A group carried by exact normal forms.
pub trait Group: Copy + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const ID: GroupId;

    fn identity() -> Self;
    fn mul(&self, rhs: &Self) -> Result<Self>;
    fn inv(&self) -> Result<Self>;
    fn order(&self) -> Order;

    /// Elements of the ball `|l| <= lmax`, `|k_i| <= kmax` in the documented
    /// lexicographic order.
    fn ball_elements(lmax: i64, kmax: i64) -> Vec<Self>;

    fn into_element(self) -> Element;
    fn from_element(e: &Element) -> Option<Self>;

    /// Square-and-multiply; carriers with a closed form override it.
    fn pow(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.inv()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `[g, h] = g^-1 h^-1 g h`.
    fn commutator(&self, h: &Self) -> Result<Self> {
        self.inv()?.mul(&h.inv()?)?.mul(self)?.mul(h)
    }

    /// `self^by = by^-1 self by`.
    fn conj(&self, by: &Self) -> Result<Self> {
        by.inv()?.mul(self)?.mul(by)
    }

    fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

#[inline]
fn odd(n: i64) -> bool {
    n & 1 == 1
}

fn range(bound: i64) -> impl Iterator<Item = i64> + Clone {
    -bound..=bound
}

// ---------------------------------------------------------------------------
// K

/// `b^l a^k` in the Klein bottle group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KleinElt {
    pub l: i64,
    pub k: i64,
}

impl KleinElt {
    pub const A: KleinElt = KleinElt { l: 0, k: 1 };
    pub const B: KleinElt = KleinElt { l: 1, k: 0 };

    pub const fn new(l: i64, k: i64) -> Self {
        KleinElt { l, k }
    }
}

impl Group for KleinElt {
    const ID: GroupId = GroupId::K;

    fn identity() -> Self {
        KleinElt::new(0, 0)
    }

    // b^l a^k b^l' a^k' = b^(l+l') a^(k (-1)^l' + k')
    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(KleinElt {
            l: checked::add(self.l, rhs.l)?,
            k: checked::add(checked::signed(self.k, !odd(rhs.l))?, rhs.k)?,
        })
    }

    fn inv(&self) -> Result<Self> {
        Ok(KleinElt {
            l: checked::neg(self.l)?,
            k: checked::signed(self.k, odd(self.l))?,
        })
    }

    // (l, k)^n = (nl, nk) for even l, and (nl, k or 0 by parity of n) for odd l;
    // the same formula covers negative n.
    fn pow(&self, n: i64) -> Result<Self> {
        let l = checked::mul(n, self.l)?;
        let k = if !odd(self.l) {
            checked::mul(n, self.k)?
        } else if odd(n) {
            self.k
        } else {
            0
        };
        Ok(KleinElt { l, k })
    }

    fn order(&self) -> Order {
        if self.is_identity() {
            Order::Finite(1)
        } else {
            Order::Infinite
        }
    }

    fn ball_elements(lmax: i64, kmax: i64) -> Vec<Self> {
        range(lmax)
            .flat_map(|l| range(kmax).map(move |k| KleinElt { l, k }))
            .collect()
    }

    fn into_element(self) -> Element {
        Element::K(self)
    }

    fn from_element(e: &Element) -> Option<Self> {
        match e {
            Element::K(x) => Some(*x),
            _ => None,
        }
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, first: &mut bool, name: &str, exp: i64) -> fmt::Result {
    if exp == 0 {
        return Ok(());
    }
    if !*first {
        f.write_str("*")?;
    }
    *first = false;
    f.write_str(name)?;
    if exp != 1 {
        write!(f, "^{exp}")?;
    }
    Ok(())
}

impl fmt::Display for KleinElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut first = true;
        write_power(f, &mut first, "b", self.l)?;
        write_power(f, &mut first, "a", self.k)
    }
}

/// Whether `g` is a square in K. The squares are exactly `<b^2> ∪ <a^2, b^4>`.
pub fn is_square_k(g: &KleinElt) -> bool {
    (g.k == 0 && !odd(g.l)) || (g.l.rem_euclid(4) == 0 && !odd(g.k))
}

/// The square root of `b^4m a^2k`, which is `b^2m a^k` and unique in K.
pub fn unique_sqrt_k(g: &KleinElt) -> Result<KleinElt> {
    if g.l.rem_euclid(4) == 0 && !odd(g.k) {
        Ok(KleinElt::new(g.l / 2, g.k / 2))
    } else {
        Err(Error::NotInDomain(g.to_string()))
    }
}

/// `g` commutes with every square iff its degree is even.
pub fn centralizes_squares_k(g: &KleinElt) -> bool {
    !odd(g.l)
}

/// Complete solution set of `r^2 = g` in K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SquareRoots {
    None,
    Unique {
        root: KleinElt,
    },
    /// `b^l a^j` for every integer `j`.
    Family {
        l: i64,
    },
}

/// Solve `r^2 = g` from `(l, k)^2 = (2l, k (1 + (-1)^l))`.
pub fn square_roots_k(g: &KleinElt) -> SquareRoots {
    if odd(g.l) {
        return SquareRoots::None;
    }
    let half = g.l / 2;
    if odd(half) {
        // odd root degree kills the a-part
        if g.k == 0 {
            SquareRoots::Family { l: half }
        } else {
            SquareRoots::None
        }
    } else if odd(g.k) {
        SquareRoots::None
    } else {
        SquareRoots::Unique {
            root: KleinElt::new(half, g.k / 2),
        }
    }
}

// ---------------------------------------------------------------------------
// D∞

/// `b'^e a'^k` in the infinite dihedral group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElt {
    pub eps: bool,
    pub k: i64,
}

impl DihedralElt {
    pub const A: DihedralElt = DihedralElt { eps: false, k: 1 };
    pub const B: DihedralElt = DihedralElt { eps: true, k: 0 };

    pub const fn new(eps: bool, k: i64) -> Self {
        DihedralElt { eps, k }
    }

    pub fn is_involution(&self) -> bool {
        self.eps
    }
}

impl Group for DihedralElt {
    const ID: GroupId = GroupId::D;

    fn identity() -> Self {
        DihedralElt::new(false, 0)
    }

    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(DihedralElt {
            eps: self.eps ^ rhs.eps,
            k: checked::add(checked::signed(self.k, !rhs.eps)?, rhs.k)?,
        })
    }

    fn inv(&self) -> Result<Self> {
        Ok(DihedralElt {
            eps: self.eps,
            k: checked::signed(self.k, self.eps)?,
        })
    }

    fn pow(&self, n: i64) -> Result<Self> {
        if self.eps {
            Ok(if odd(n) { *self } else { Self::identity() })
        } else {
            Ok(DihedralElt::new(false, checked::mul(n, self.k)?))
        }
    }

    fn order(&self) -> Order {
        if self.eps {
            Order::Finite(2)
        } else if self.k == 0 {
            Order::Finite(1)
        } else {
            Order::Infinite
        }
    }

    /// `lmax` is ignored; `e` always ranges over `{0, 1}`.
    fn ball_elements(_lmax: i64, kmax: i64) -> Vec<Self> {
        [false, true]
            .into_iter()
            .flat_map(|eps| range(kmax).map(move |k| DihedralElt { eps, k }))
            .collect()
    }

    fn into_element(self) -> Element {
        Element::D(self)
    }

    fn from_element(e: &Element) -> Option<Self> {
        match e {
            Element::D(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for DihedralElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut first = true;
        write_power(f, &mut first, "b", self.eps as i64)?;
        write_power(f, &mut first, "a", self.k)
    }
}

// ---------------------------------------------------------------------------
// V4 and G

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VFour {
    E,
    D1,
    D2,
    D3,
}

impl VFour {
    pub const ALL: [VFour; 4] = [VFour::E, VFour::D1, VFour::D2, VFour::D3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// `d_i` for `i` in 1..=3.
    pub fn d(i: usize) -> Self {
        assert!((1..=3).contains(&i), "V4 generator index {i}");
        Self::ALL[i]
    }

    /// Whether conjugation by `self` fixes `a_i` (otherwise it inverts it).
    pub fn fixes(self, i: usize) -> bool {
        self == VFour::E || self.index() == i
    }

    /// 1 for `d2`, `d3` (the elements sent to `b'` by the first coordinate).
    pub fn delta(self) -> i64 {
        matches!(self, VFour::D2 | VFour::D3) as i64
    }
}

impl fmt::Display for VFour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VFour::E => "1",
            VFour::D1 => "d1",
            VFour::D2 => "d2",
            VFour::D3 => "d3",
        })
    }
}

/// The Klein four-group law is XOR on indices.
impl std::ops::Mul for VFour {
    type Output = VFour;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: VFour) -> VFour {
        Self::ALL[self.index() ^ rhs.index()]
    }
}

/// `d b^l a1^k1 a2^k2 a3^k3` in G.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElt {
    pub d: VFour,
    pub l: i64,
    pub k: [i64; 3],
}

impl GElt {
    pub const B: GElt = GElt::new(VFour::E, 1, [0, 0, 0]);

    pub const fn new(d: VFour, l: i64, k: [i64; 3]) -> Self {
        GElt { d, l, k }
    }

    pub const fn from_d(d: VFour) -> Self {
        GElt::new(d, 0, [0, 0, 0])
    }

    /// `a_i` for `i` in 1..=3.
    pub fn a(i: usize) -> Self {
        let mut k = [0; 3];
        k[i - 1] = 1;
        GElt::new(VFour::E, 0, k)
    }
}

impl Group for GElt {
    const ID: GroupId = GroupId::G;

    fn identity() -> Self {
        GElt::new(VFour::E, 0, [0, 0, 0])
    }

    // Moving d' b^l' left past a^k conjugates each a_i by it.
    fn mul(&self, rhs: &Self) -> Result<Self> {
        let mut k = [0i64; 3];
        for (i, slot) in k.iter_mut().enumerate() {
            let keep = rhs.d.fixes(i + 1) != odd(rhs.l);
            *slot = checked::add(checked::signed(self.k[i], keep)?, rhs.k[i])?;
        }
        Ok(GElt {
            d: self.d * rhs.d,
            l: checked::add(self.l, rhs.l)?,
            k,
        })
    }

    fn inv(&self) -> Result<Self> {
        let mut k = [0i64; 3];
        for (i, slot) in k.iter_mut().enumerate() {
            let keep = self.d.fixes(i + 1) != odd(self.l);
            *slot = checked::signed(self.k[i], !keep)?;
        }
        Ok(GElt {
            d: self.d,
            l: checked::neg(self.l)?,
            k,
        })
    }

    // Nonzero degree means infinite order. In degree 0, g^2 = a^(2k) on the
    // coordinates fixed by d, so g is torsion iff those vanish.
    fn order(&self) -> Order {
        if self.l != 0 {
            return Order::Infinite;
        }
        if self.d == VFour::E {
            return if self.k == [0, 0, 0] {
                Order::Finite(1)
            } else {
                Order::Infinite
            };
        }
        if (0..3).all(|i| !self.d.fixes(i + 1) || self.k[i] == 0) {
            Order::Finite(2)
        } else {
            Order::Infinite
        }
    }

    fn ball_elements(lmax: i64, kmax: i64) -> Vec<Self> {
        let mut out = Vec::new();
        for d in VFour::ALL {
            for l in range(lmax) {
                for k1 in range(kmax) {
                    for k2 in range(kmax) {
                        for k3 in range(kmax) {
                            out.push(GElt::new(d, l, [k1, k2, k3]));
                        }
                    }
                }
            }
        }
        out
    }

    fn into_element(self) -> Element {
        Element::G(self)
    }

    fn from_element(e: &Element) -> Option<Self> {
        match e {
            Element::G(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for GElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut first = true;
        if self.d != VFour::E {
            write_power(f, &mut first, &self.d.to_string(), 1)?;
        }
        write_power(f, &mut first, "b", self.l)?;
        for (i, &k) in self.k.iter().enumerate() {
            write_power(f, &mut first, &format!("a{}", i + 1), k)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Z × D∞

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZxDElt {
    pub i: i64,
    pub d: DihedralElt,
}

impl ZxDElt {
    pub const fn new(i: i64, d: DihedralElt) -> Self {
        ZxDElt { i, d }
    }
}

impl Group for ZxDElt {
    const ID: GroupId = GroupId::ZD;

    fn identity() -> Self {
        ZxDElt::new(0, DihedralElt::identity())
    }

    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(ZxDElt::new(
            checked::add(self.i, rhs.i)?,
            self.d.mul(&rhs.d)?,
        ))
    }

    fn inv(&self) -> Result<Self> {
        Ok(ZxDElt::new(checked::neg(self.i)?, self.d.inv()?))
    }

    fn pow(&self, n: i64) -> Result<Self> {
        Ok(ZxDElt::new(checked::mul(n, self.i)?, self.d.pow(n)?))
    }

    fn order(&self) -> Order {
        if self.i != 0 {
            Order::Infinite
        } else {
            self.d.order()
        }
    }

    fn ball_elements(lmax: i64, kmax: i64) -> Vec<Self> {
        let ds = DihedralElt::ball_elements(0, kmax);
        range(lmax)
            .flat_map(|i| ds.iter().map(move |&d| ZxDElt::new(i, d)))
            .collect()
    }

    fn into_element(self) -> Element {
        Element::ZD(self)
    }

    fn from_element(e: &Element) -> Option<Self> {
        match e {
            Element::ZD(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for ZxDElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.i, self.d)
    }
}

macro_rules! serialize_via_display {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}

serialize_via_display!(KleinElt, DihedralElt, GElt, ZxDElt, VFour, Element);

// ---------------------------------------------------------------------------
// Dynamically typed elements

/// An element of one of the four carriers, for callers that only learn the
/// group at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Element {
    K(KleinElt),
    D(DihedralElt),
    G(GElt),
    ZD(ZxDElt),
}

macro_rules! dispatch {
    ($e:expr, $x:ident => $body:expr) => {
        match $e {
            Element::K($x) => $body,
            Element::D($x) => $body,
            Element::G($x) => $body,
            Element::ZD($x) => $body,
        }
    };
}

macro_rules! dispatch2 {
    ($a:expr, $b:expr, ($x:ident, $y:ident) => $body:expr) => {
        match ($a, $b) {
            (Element::K($x), Element::K($y)) => $body,
            (Element::D($x), Element::D($y)) => $body,
            (Element::G($x), Element::G($y)) => $body,
            (Element::ZD($x), Element::ZD($y)) => $body,
            (a, b) => Err(Error::CarrierMismatch {
                expected: a.group(),
                found: b.group(),
            }),
        }
    };
}

impl Element {
    pub fn group(&self) -> GroupId {
        match self {
            Element::K(_) => GroupId::K,
            Element::D(_) => GroupId::D,
            Element::G(_) => GroupId::G,
            Element::ZD(_) => GroupId::ZD,
        }
    }

    pub fn identity(group: GroupId) -> Element {
        match group {
            GroupId::K => Element::K(KleinElt::identity()),
            GroupId::D => Element::D(DihedralElt::identity()),
            GroupId::G => Element::G(GElt::identity()),
            GroupId::ZD => Element::ZD(ZxDElt::identity()),
        }
    }

    pub fn mul(&self, rhs: &Element) -> Result<Element> {
        dispatch2!(self, rhs, (x, y) => Ok(x.mul(y)?.into_element()))
    }

    pub fn commutator(&self, rhs: &Element) -> Result<Element> {
        dispatch2!(self, rhs, (x, y) => Ok(x.commutator(y)?.into_element()))
    }

    pub fn inv(&self) -> Result<Element> {
        dispatch!(self, x => Ok(x.inv()?.into_element()))
    }

    pub fn pow(&self, n: i64) -> Result<Element> {
        dispatch!(self, x => Ok(x.pow(n)?.into_element()))
    }

    pub fn order(&self) -> Order {
        dispatch!(self, x => x.order())
    }

    pub fn as_typed<T: Group>(&self) -> Result<T> {
        T::from_element(self).ok_or(Error::CarrierMismatch {
            expected: T::ID,
            found: self.group(),
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        dispatch!(self, x => fmt::Display::fmt(x, f))
    }
}

pub fn typed_tuple<T: Group>(tuple: &[Element]) -> Result<Vec<T>> {
    tuple.iter().map(Element::as_typed::<T>).collect()
}

// ---------------------------------------------------------------------------
// Word evaluation and balls

/// Image of `w` under `x_i -> tuple[i-1]`.
pub fn evaluate_word<T: Group>(w: &FreeWord, tuple: &[T]) -> Result<T> {
    if tuple.len() < w.arity() {
        return Err(Error::ArityMismatch {
            expected: w.arity(),
            found: tuple.len(),
        });
    }
    let mut acc = T::identity();
    for l in w.letters() {
        acc = acc.mul(&tuple[l.var - 1].pow(l.exp)?)?;
    }
    Ok(acc)
}

/// [`evaluate_word`] for a dynamically typed tuple over `group`.
pub fn evaluate_word_dyn(w: &FreeWord, group: GroupId, tuple: &[Element]) -> Result<Element> {
    fn go<T: Group>(w: &FreeWord, tuple: &[Element]) -> Result<Element> {
        Ok(evaluate_word(w, &typed_tuple::<T>(tuple)?)?.into_element())
    }
    match group {
        GroupId::K => go::<KleinElt>(w, tuple),
        GroupId::D => go::<DihedralElt>(w, tuple),
        GroupId::G => go::<GElt>(w, tuple),
        GroupId::ZD => go::<ZxDElt>(w, tuple),
    }
}

/// A finite enumeration domain: `|l| <= lmax` (or `|i|` in `Z × D`) and
/// `|k_i| <= kmax`; the whole of V4 and `e ∈ {0, 1}` where present.
/// Elements come out lexicographically ascending in `(d, l, k1, k2, k3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub group: GroupId,
    pub lmax: i64,
    pub kmax: i64,
}

impl Ball {
    pub fn new(group: GroupId, lmax: i64, kmax: i64) -> Self {
        assert!(lmax >= 0 && kmax >= 0, "ball bounds must be nonnegative");
        Ball { group, lmax, kmax }
    }

    pub fn elements<T: Group>(&self) -> Result<Vec<T>> {
        if self.group != T::ID {
            return Err(Error::CarrierMismatch {
                expected: self.group,
                found: T::ID,
            });
        }
        Ok(T::ball_elements(self.lmax, self.kmax))
    }

    pub fn elements_dyn(&self) -> Vec<Element> {
        fn go<T: Group>(b: &Ball) -> Vec<Element> {
            T::ball_elements(b.lmax, b.kmax)
                .into_iter()
                .map(Group::into_element)
                .collect()
        }
        match self.group {
            GroupId::K => go::<KleinElt>(self),
            GroupId::D => go::<DihedralElt>(self),
            GroupId::G => go::<GElt>(self),
            GroupId::ZD => go::<ZxDElt>(self),
        }
    }
}
