//! Homomorphisms out of the pure braid groups and alphabet conversions.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::{FreeAut, FreeWord};
use crate::words::{Generator, Word};

/// An element of `(Z_2)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z2Vector(pub Vec<u8>);

impl Z2Vector {
    pub fn zero(n: usize) -> Self {
        Z2Vector(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[k] = 1;
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Z2Vector) -> Z2Vector {
        Z2Vector(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    fn flip(&mut self, k: usize, exp: i64) {
        self.0[k] ^= (exp.rem_euclid(2)) as u8;
    }
}

impl fmt::Display for Z2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An element of the quaternion group `{±1, ±i, ±j, ±k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuatElement {
    negative: bool,
    unit: QuatUnit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum QuatUnit {
    One,
    I,
    J,
    K,
}

impl QuatElement {
    pub const ONE: QuatElement = QuatElement {
        negative: false,
        unit: QuatUnit::One,
    };
    pub const MINUS_ONE: QuatElement = QuatElement {
        negative: true,
        unit: QuatUnit::One,
    };
    pub const I: QuatElement = QuatElement {
        negative: false,
        unit: QuatUnit::I,
    };
    pub const J: QuatElement = QuatElement {
        negative: false,
        unit: QuatUnit::J,
    };
    pub const K: QuatElement = QuatElement {
        negative: false,
        unit: QuatUnit::K,
    };

    pub fn all() -> [QuatElement; 8] {
        [
            Self::ONE,
            Self::MINUS_ONE,
            Self::I,
            -Self::I,
            Self::J,
            -Self::J,
            Self::K,
            -Self::K,
        ]
    }

    pub fn inverse(self) -> QuatElement {
        if self.unit == QuatUnit::One {
            self
        } else {
            -self
        }
    }

    pub fn pow(self, e: i64) -> QuatElement {
        let base = if e < 0 { self.inverse() } else { self };
        let mut acc = Self::ONE;
        for _ in 0..(e.unsigned_abs() % 4) {
            acc = acc * base;
        }
        acc
    }

    pub fn order(self) -> u32 {
        match (self.negative, self.unit) {
            (false, QuatUnit::One) => 1,
            (true, QuatUnit::One) => 2,
            _ => 4,
        }
    }
}

impl std::ops::Neg for QuatElement {
    type Output = QuatElement;
    fn neg(self) -> QuatElement {
        QuatElement {
            negative: !self.negative,
            unit: self.unit,
        }
    }
}

impl Mul for QuatElement {
    type Output = QuatElement;
    fn mul(self, rhs: QuatElement) -> QuatElement {
        use QuatUnit::*;
        let (sign, unit) = match (self.unit, rhs.unit) {
            (One, u) | (u, One) => (false, u),
            (I, I) | (J, J) | (K, K) => (true, One),
            (I, J) => (false, K),
            (J, I) => (true, K),
            (J, K) => (false, I),
            (K, J) => (true, I),
            (K, I) => (false, J),
            (I, K) => (true, J),
        };
        QuatElement {
            negative: self.negative ^ rhs.negative ^ sign,
            unit,
        }
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        let u = match self.unit {
            QuatUnit::One => "1",
            QuatUnit::I => "i",
            QuatUnit::J => "j",
            QuatUnit::K => "k",
        };
        write!(f, "{sign}{u}")
    }
}

impl Serialize for QuatElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for Z2Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn check_strand_bound(g: Generator, n: usize, context: &str) -> Result<()> {
    g.validate()?;
    if g.max_strand() > n {
        return Err(Error::OutOfRange {
            gen: g,
            context: context.to_string(),
        });
    }
    Ok(())
}

/// `iota#: P_n(RP^2) -> (Z_2)^n`. `A` letters vanish, `tau[k]` and `rho[k]`
/// map to `e_k`.
///
/// `s[i]` letters are accepted as long as the word is pure and every
/// `tau`/`rho` letter sits after a prefix whose permutation is trivial; they
/// contribute nothing.
pub fn iota_sharp(n: usize, w: &Word) -> Result<Z2Vector> {
    let context = format!("P_{n}(RP2)");
    let mut v = Z2Vector::zero(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perm_trivial = true;
    for l in w.letters() {
        check_strand_bound(l.gen, n, &context)?;
        match l.gen {
            Generator::A(..) => {}
            Generator::Tau(k) | Generator::Rho(k) => {
                if !perm_trivial {
                    return Err(Error::NonPure(format!(
                        "{} follows a non-pure prefix",
                        l.gen
                    )));
                }
                v.flip(k - 1, l.exp);
            }
            Generator::Sigma(i) => {
                if l.exp % 2 != 0 {
                    perm.swap(i - 1, i);
                }
                perm_trivial = perm.iter().enumerate().all(|(a, &b)| a == b);
            }
        }
    }
    if !perm_trivial {
        return Err(Error::NonPure(format!(
            "{w} induces a nontrivial permutation"
        )));
    }
    Ok(v)
}

/// `iota-hat_m: Gamma_{m,2}(RP^2) -> (Z_2)^m`, `rho[j] -> e_{j-2}`.
pub fn iota_hat(m: usize, w: &Word) -> Result<Z2Vector> {
    let mut v = Z2Vector::zero(m);
    for l in w.letters() {
        check_gamma_letter(m, l.gen)?;
        if let Generator::Rho(j) = l.gen {
            v.flip(j - 3, l.exp);
        }
    }
    Ok(v)
}

/// Checks that `g` belongs to the alphabet of `Gamma_{m,2}(RP^2)`.
pub(crate) fn check_gamma_letter(m: usize, g: Generator) -> Result<()> {
    g.validate()?;
    let ok = match g {
        Generator::A(_, j) | Generator::Rho(j) => (3..=m + 2).contains(&j),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch {
            gen: g,
            context: format!("Gamma_{{{m},2}}(RP2)"),
        })
    }
}

/// `q2#: P_n(RP^2) -> P_2(RP^2) = Q_8`, with `tau[1] -> i`, `tau[2] -> j`.
pub fn q2_sharp(n: usize, w: &Word) -> Result<QuatElement> {
    if n < 2 {
        return Err(Error::Parameter("q2# needs n >= 2".into()));
    }
    let context = format!("P_{n}(RP2)");
    let mut acc = QuatElement::ONE;
    for l in w.letters() {
        check_strand_bound(l.gen, n, &context)?;
        let image = match l.gen {
            Generator::A(1, 2) => QuatElement::MINUS_ONE,
            Generator::A(..) => QuatElement::ONE,
            Generator::Tau(1) => QuatElement::I,
            Generator::Tau(2) => QuatElement::J,
            // rho_1 = A12 tau_1^-1 and rho_2 = tau_2^-1 after forgetting.
            Generator::Rho(1) => QuatElement::I,
            Generator::Rho(2) => -QuatElement::J,
            Generator::Tau(_) | Generator::Rho(_) => QuatElement::ONE,
            Generator::Sigma(_) => {
                return Err(Error::NonPure(format!("{} is not a pure generator", l.gen)))
            }
        };
        acc = acc * image.pow(l.exp);
    }
    Ok(acc)
}

/// `tau[k] = rho[k]^-1 A[k,k+1] ... A[k,n]`.
pub fn tau_from_rho(k: usize, n: usize) -> Result<Word> {
    if k < 1 || k > n {
        return Err(Error::Parameter(format!(
            "tau_from_rho needs 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut w = Word::gen(Generator::Rho(k), -1);
    for l in k + 1..=n {
        w.push(Generator::A(k, l), 1);
    }
    Ok(w)
}

/// `rho[k] = A[k,k+1] ... A[k,n] tau[k]^-1`.
pub fn rho_from_tau(k: usize, n: usize) -> Result<Word> {
    if k < 1 || k > n {
        return Err(Error::Parameter(format!(
            "rho_from_tau needs 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut w = Word::new();
    for l in k + 1..=n {
        w.push(Generator::A(k, l), 1);
    }
    w.push(Generator::Tau(k), -1);
    Ok(w)
}

/// Rewrites every `tau` letter of a word on `n` strands in the `rho`/`A`
/// alphabet.
pub fn taus_to_rhos(n: usize, w: &Word) -> Result<Word> {
    w.try_substitute(|g| match g {
        Generator::Tau(k) => tau_from_rho(k, n),
        other => Ok(other.into()),
    })
}

/// `A[i,j] = s[j-1] ... s[i+1] s[i]^2 s[i+1]^-1 ... s[j-1]^-1`.
pub fn aij_from_sigma(i: usize, j: usize) -> Result<Word> {
    Generator::a(i, j)?;
    let mut w = Word::new();
    for k in (i + 1..j).rev() {
        w.push(Generator::Sigma(k), 1);
    }
    w.push(Generator::Sigma(i), 2);
    for k in i + 1..j {
        w.push(Generator::Sigma(k), -1);
    }
    Ok(w)
}

/// The full twist `(A[1,2])(A[1,3] A[2,3]) ... (A[1,n] ... A[n-1,n])`.
pub fn full_twist_pure(n: usize) -> Word {
    let mut w = Word::new();
    for j in 2..=n {
        for i in 1..j {
            w.push(Generator::A(i, j), 1);
        }
    }
    w
}

/// The full twist `(s[1] ... s[n-1])^n`.
pub fn full_twist_sigma(n: usize) -> Word {
    let mut w = Word::new();
    for _ in 0..n {
        for i in 1..n {
            w.push(Generator::Sigma(i), 1);
        }
    }
    w
}

/// Deletes every letter that mentions a strand above `to`, after rewriting
/// `tau` letters in the `rho`/`A` alphabet of the source group on `from`
/// strands.
pub fn forget_strands(w: &Word, from: usize, to: usize) -> Result<Word> {
    if to >= from {
        return Err(Error::Parameter(format!(
            "forget_strands needs to < from, got {from} -> {to}"
        )));
    }
    let context = format!("a pure braid group on {from} strands");
    for g in w.generators() {
        check_strand_bound(g, from, &context)?;
        if matches!(g, Generator::Sigma(_)) {
            return Err(Error::AlphabetMismatch { gen: g, context });
        }
    }
    let w = taus_to_rhos(from, w)?;
    Ok(w.substitute(|g| {
        if g.max_strand() > to {
            Word::new()
        } else {
            g.into()
        }
    }))
}

/// The Artin representation `B_n -> Aut(F_n)`, `s[i]: x_i -> x_i x_{i+1} x_i^-1,
/// x_{i+1} -> x_i`. Faithful, so it decides equality of `s`/`A` words in the
/// braid group of the disc.
pub fn artin_representation(n: usize, w: &Word) -> Result<FreeAut> {
    let mut acc = FreeAut::identity(n);
    for l in w.letters() {
        let sigma_word = match l.gen {
            Generator::Sigma(_) => Word::from(l.gen),
            Generator::A(i, j) => aij_from_sigma(i, j)?,
            g => {
                return Err(Error::AlphabetMismatch {
                    gen: g,
                    context: format!("B_{n}"),
                })
            }
        };
        for (g, e) in sigma_word.pow(l.exp).unit_letters() {
            let Generator::Sigma(i) = g else {
                unreachable!()
            };
            if i + 1 > n {
                return Err(Error::OutOfRange {
                    gen: g,
                    context: format!("B_{n}"),
                });
            }
            let x = |k: usize| k as i32 + 1;
            let mut images: Vec<FreeWord> = (0..n).map(FreeWord::basis).collect();
            if e > 0 {
                images[i - 1] = FreeWord::from_letters([x(i - 1), x(i), -x(i - 1)]);
                images[i] = FreeWord::basis(i - 1);
            } else {
                images[i - 1] = FreeWord::basis(i);
                images[i] = FreeWord::from_letters([-x(i), x(i - 1), x(i)]);
            }
            // Right action convention: apply letters left to right.
            acc = FreeAut::from_images(images).compose(&acc);
        }
    }
    Ok(acc)
}
