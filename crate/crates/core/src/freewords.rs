//! Words in a free group `F(x1, ..., xn)` and Nielsen changes of variables.
//!
//! A [`FreeWord`] is always freely reduced with adjacent syllables merged, so
//! structural equality is equality in the free group. [`nielsen_normalize`]
//! brings any word to the shape `x1^m * u` with `u` in the commutator
//! subgroup, recording the change of variables as a [`FreeAut`].

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{checked, Error, Result};

/// One syllable `x_var^exp` (1-based variable index, nonzero exponent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub var: usize,
    pub exp: i64,
}

impl Letter {
    pub fn new(var: usize, exp: i64) -> Self {
        Letter { var, exp }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
    arity: usize,
}

/// Freely reduce a raw product of syllables.
pub fn reduce(letters: &[Letter], arity: usize) -> Result<FreeWord> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if l.var == 0 || l.var > arity {
            return Err(Error::VarOutOfRange {
                index: l.var,
                arity,
            });
        }
        push_letter(&mut out, l)?;
    }
    Ok(FreeWord {
        letters: out,
        arity: arity.max(1),
    })
}

fn push_letter(out: &mut Vec<Letter>, l: Letter) -> Result<()> {
    if l.exp == 0 {
        return Ok(());
    }
    match out.last_mut() {
        Some(top) if top.var == l.var => {
            top.exp = checked::add(top.exp, l.exp)?;
            if top.exp == 0 {
                out.pop();
            }
        }
        _ => out.push(l),
    }
    Ok(())
}

impl FreeWord {
    pub fn identity(arity: usize) -> Self {
        FreeWord {
            letters: Vec::new(),
            arity: arity.max(1),
        }
    }

    /// The generator `x_i` (1-based).
    pub fn generator(i: usize, arity: usize) -> Result<Self> {
        reduce(&[Letter::new(i, 1)], arity)
    }

    pub fn from_pairs(pairs: &[(usize, i64)], arity: usize) -> Result<Self> {
        let letters: Vec<Letter> = pairs.iter().map(|&(v, e)| Letter::new(v, e)).collect();
        reduce(&letters, arity)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Length as a product of generators and their inverses.
    pub fn len(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Highest variable index that actually occurs (0 for the identity).
    pub fn max_var(&self) -> usize {
        self.letters.iter().map(|l| l.var).max().unwrap_or(0)
    }

    /// Same word viewed in a free group of a different rank.
    pub fn with_arity(&self, arity: usize) -> Result<Self> {
        if self.max_var() > arity {
            return Err(Error::VarOutOfRange {
                index: self.max_var(),
                arity,
            });
        }
        Ok(FreeWord {
            letters: self.letters.clone(),
            arity: arity.max(1),
        })
    }

    pub fn mul(&self, rhs: &FreeWord) -> Result<FreeWord> {
        if self.arity != rhs.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: rhs.arity,
            });
        }
        let mut out = self.letters.clone();
        for &l in &rhs.letters {
            push_letter(&mut out, l)?;
        }
        Ok(FreeWord {
            letters: out,
            arity: self.arity,
        })
    }

    pub fn inverse(&self) -> Result<FreeWord> {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Ok(Letter::new(l.var, checked::neg(l.exp)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeWord {
            letters,
            arity: self.arity,
        })
    }

    pub fn pow(&self, n: i64) -> Result<FreeWord> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = FreeWord::identity(self.arity);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &FreeWord, v: &FreeWord) -> Result<FreeWord> {
        u.inverse()?.mul(&v.inverse()?)?.mul(u)?.mul(v)
    }

    /// Substitute `images[i-1]` for `x_i` and reduce. All images must share
    /// one arity, which becomes the arity of the result.
    pub fn substitute(&self, images: &[FreeWord]) -> Result<FreeWord> {
        if images.len() < self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: images.len(),
            });
        }
        let target_arity = images.first().map_or(1, FreeWord::arity);
        let mut out: Vec<Letter> = Vec::new();
        for l in &self.letters {
            let img = &images[l.var - 1];
            if img.arity != target_arity {
                return Err(Error::ArityMismatch {
                    expected: target_arity,
                    found: img.arity,
                });
            }
            if let [single] = img.letters.as_slice() {
                push_letter(
                    &mut out,
                    Letter::new(single.var, checked::mul(single.exp, l.exp)?),
                )?;
                continue;
            }
            let (seq, reps): (Vec<Letter>, u64) = if l.exp > 0 {
                (img.letters.clone(), l.exp.unsigned_abs())
            } else {
                (img.inverse()?.letters, l.exp.unsigned_abs())
            };
            for _ in 0..reps {
                for &s in &seq {
                    push_letter(&mut out, s)?;
                }
            }
        }
        Ok(FreeWord {
            letters: out,
            arity: target_arity,
        })
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(&var_name(l.var))?;
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

impl Serialize for FreeWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Printed name of `x_i`: `x, y, z, t` for the first four, `x5`.. after.
pub fn var_name(i: usize) -> String {
    match i {
        1 => "x".into(),
        2 => "y".into(),
        3 => "z".into(),
        4 => "t".into(),
        _ => format!("x{i}"),
    }
}

pub fn exponent_sums(w: &FreeWord) -> Result<Vec<i64>> {
    let mut sums = vec![0i64; w.arity];
    for l in &w.letters {
        sums[l.var - 1] = checked::add(sums[l.var - 1], l.exp)?;
    }
    Ok(sums)
}

/// Membership in `[F, F]`: all exponent sums vanish.
pub fn in_commutator_subgroup(w: &FreeWord) -> Result<bool> {
    Ok(exponent_sums(w)?.iter().all(|&s| s == 0))
}

pub fn gcd_of(values: &[i64]) -> Result<i64> {
    let mut g: u64 = 0;
    for &v in values {
        let mut a = v.unsigned_abs();
        let mut b = g;
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        g = a;
    }
    i64::try_from(g).map_err(|_| Error::Overflow("gcd"))
}

/// An elementary Nielsen move, read as a substitution on generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum NielsenMove {
    /// `x_i <-> x_j`
    Swap { i: usize, j: usize },
    /// `x_i -> x_i^-1`
    Invert { i: usize },
    /// `x_target -> x_target * x_by^exp`; `exp` copies of the elementary
    /// right multiplication by `x_by^{±1}`.
    Transvect { target: usize, by: usize, exp: i64 },
}

impl NielsenMove {
    fn inverse(self) -> Result<Self> {
        Ok(match self {
            NielsenMove::Transvect { target, by, exp } => NielsenMove::Transvect {
                target,
                by,
                exp: checked::neg(exp)?,
            },
            m => m,
        })
    }

    fn check(self, arity: usize) -> Result<()> {
        let in_range = |i: usize| (1..=arity).contains(&i);
        let (ok, index) = match self {
            NielsenMove::Swap { i, j } => {
                (in_range(i) && in_range(j), if in_range(i) { j } else { i })
            }
            NielsenMove::Invert { i } => (in_range(i), i),
            // a generator cannot be multiplied by a power of itself
            NielsenMove::Transvect { target, by, .. } => (
                in_range(target) && in_range(by) && target != by,
                if in_range(target) { by } else { target },
            ),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::VarOutOfRange { index, arity })
        }
    }

    /// Images of all generators under this single move.
    fn images(self, arity: usize) -> Result<Vec<FreeWord>> {
        let mut imgs = (1..=arity)
            .map(|i| FreeWord::generator(i, arity))
            .collect::<Result<Vec<_>>>()?;
        match self {
            NielsenMove::Swap { i, j } => imgs.swap(i - 1, j - 1),
            NielsenMove::Invert { i } => imgs[i - 1] = imgs[i - 1].inverse()?,
            NielsenMove::Transvect { target, by, exp } => {
                imgs[target - 1] = FreeWord::from_pairs(&[(target, 1), (by, exp)], arity)?;
            }
        }
        Ok(imgs)
    }
}

/// A composite change of variables. Moves apply left to right: the word
/// image is `m_r(...m_2(m_1(w)))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeAut {
    arity: usize,
    moves: Vec<NielsenMove>,
}

impl FreeAut {
    pub fn identity(arity: usize) -> Self {
        FreeAut {
            arity: arity.max(1),
            moves: Vec::new(),
        }
    }

    pub fn from_moves(arity: usize, moves: Vec<NielsenMove>) -> Result<Self> {
        for m in &moves {
            m.check(arity)?;
        }
        Ok(FreeAut {
            arity: arity.max(1),
            moves,
        })
    }

    pub fn push(&mut self, m: NielsenMove) -> Result<()> {
        m.check(self.arity)?;
        self.moves.push(m);
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn moves(&self) -> &[NielsenMove] {
        &self.moves
    }

    pub fn is_identity_moves(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn inverse(&self) -> Result<FreeAut> {
        let moves = self
            .moves
            .iter()
            .rev()
            .map(|m| m.inverse())
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeAut {
            arity: self.arity,
            moves,
        })
    }

    /// `alpha(x_1), ..., alpha(x_n)`.
    pub fn generator_images(&self) -> Result<Vec<FreeWord>> {
        let mut imgs = (1..=self.arity)
            .map(|i| FreeWord::generator(i, self.arity))
            .collect::<Result<Vec<_>>>()?;
        for m in &self.moves {
            let step = m.images(self.arity)?;
            imgs = imgs
                .iter()
                .map(|w| w.substitute(&step))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(imgs)
    }

    pub fn generator_image(&self, i: usize) -> Result<FreeWord> {
        if i == 0 || i > self.arity {
            return Err(Error::VarOutOfRange {
                index: i,
                arity: self.arity,
            });
        }
        Ok(self.generator_images()?.swap_remove(i - 1))
    }

    pub fn apply(&self, w: &FreeWord) -> Result<FreeWord> {
        if w.arity != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: w.arity,
            });
        }
        w.substitute(&self.generator_images()?)
    }
}

/// Output of [`nielsen_normalize`]: `alpha(w) = x1^m * u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NielsenForm {
    pub m: i64,
    pub u: FreeWord,
    pub alpha: FreeAut,
}

/// Euclidean reduction of the exponent-sum vector by Nielsen moves.
///
/// Each round pivots on the smallest nonzero `|sum|` (ties to the lowest
/// index) and reduces every other nonzero sum modulo it. Once a single
/// nonzero sum remains it is swapped into position 1 and made positive.
pub fn nielsen_normalize(w: &FreeWord) -> Result<NielsenForm> {
    let n = w.arity;
    let mut sums = exponent_sums(w)?;
    let mut alpha = FreeAut::identity(n);

    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| sums[i] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero
            .iter()
            .min_by_key(|&&i| (sums[i].unsigned_abs(), i))
            .expect("nonempty");
        for &j in &nonzero {
            if j == p {
                continue;
            }
            let q = sums[j]
                .checked_div_euclid(sums[p])
                .ok_or(Error::Overflow("division"))?;
            if q == 0 {
                continue;
            }
            // x_p -> x_p x_j^{-q} shifts sum_j by -q * sum_p
            alpha.push(NielsenMove::Transvect {
                target: p + 1,
                by: j + 1,
                exp: checked::neg(q)?,
            })?;
            sums[j] = checked::sub(sums[j], checked::mul(q, sums[p])?)?;
        }
    }

    if let Some(p) = (0..n).find(|&i| sums[i] != 0) {
        if p != 0 {
            alpha.push(NielsenMove::Swap { i: 1, j: p + 1 })?;
            sums.swap(0, p);
        }
        if sums[0] < 0 {
            alpha.push(NielsenMove::Invert { i: 1 })?;
            sums[0] = checked::neg(sums[0])?;
        }
    }
    let m = sums[0];

    let image = alpha.apply(w)?;
    let u = FreeWord::from_pairs(&[(1, checked::neg(m)?)], n)?.mul(&image)?;
    Ok(NielsenForm { m, u, alpha })
}

/// All reduced words of length `<= max_len` over `x1..x_arity`, by length
/// and then lexicographically on the alphabet `x1, x1^-1, x2, x2^-1, ...`.
pub fn enumerate_reduced_words(arity: usize, max_len: usize) -> Vec<FreeWord> {
    let alphabet: Vec<Letter> = (1..=arity)
        .flat_map(|v| [Letter::new(v, 1), Letter::new(v, -1)])
        .collect();
    let mut out = vec![FreeWord::identity(arity)];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &layer {
            for &a in &alphabet {
                if let Some(last) = seq.last() {
                    if last.var == a.var && last.exp == -a.exp {
                        continue;
                    }
                }
                let mut s = seq.clone();
                s.push(a);
                next.push(s);
            }
        }
        for s in &next {
            out.push(reduce(s, arity).expect("alphabet within arity"));
        }
        layer = next;
    }
    out
}

/// A random word: up to `max_len` letters `x_i^{±1}`, then reduced.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, arity: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            let v = rng.gen_range(1..=arity);
            Letter::new(v, if rng.gen_bool(0.5) { 1 } else { -1 })
        })
        .collect();
    reduce(&letters, arity).expect("letters within arity")
}

/// A random composite of elementary moves.
pub fn random_aut<R: Rng + ?Sized>(rng: &mut R, arity: usize, moves: usize) -> FreeAut {
    let mut alpha = FreeAut::identity(arity);
    for _ in 0..moves {
        let i = rng.gen_range(1..=arity);
        let m = match rng.gen_range(0..3) {
            0 => NielsenMove::Invert { i },
            _ if arity == 1 => NielsenMove::Invert { i },
            1 => {
                let j = rng.gen_range(1..=arity);
                NielsenMove::Swap { i, j }
            }
            _ => {
                let mut j = rng.gen_range(1..arity);
                if j >= i {
                    j += 1;
                }
                NielsenMove::Transvect {
                    target: i,
                    by: j,
                    exp: if rng.gen_bool(0.5) { 1 } else { -1 },
                }
            }
        };
        alpha.push(m).expect("move within arity");
    }
    alpha
}
