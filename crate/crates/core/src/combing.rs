//! Artin combing for `Gamma_{m,2}(RP^2)` and the `L_n` / `K_n` word problems.
//!
//! The group `Gamma_{m,2}` splits as `Omega_{m+1} ⋊ Gamma_{m-1,2}` where
//! `Omega_l` is free on `[A[1,l+1], ..., A[l-1,l+1], rho[l+1]]` and the
//! section is the explicit one below. Every element is then uniquely
//! `omega_{m+1} s(omega_m s(... omega_2))`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::{FreeAut, FreeWord};
use crate::homs::{self, check_gamma_letter};
use crate::presentations::{artin_conj, c_word, rho_conj_a, rho_conj_rho, Surface};
use crate::words::{Generator, Word};

/// Free basis of the kernel of forgetting strand `top`, in the punctured
/// surface with all lower strands fixed.
///
/// RP2: `[A[1,top], ..., A[top-2,top], rho[top]]`. S2: `[A[1,top], ...,
/// A[top-2,top]]`. In both cases `A[top-1,top]` is eliminated through the
/// surface relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub surface: Surface,
    pub top: usize,
}

/// The basis of `Omega_l`.
pub type OmegaBasis = KernelBasis;

impl KernelBasis {
    pub fn new(surface: Surface, top: usize) -> Result<Self> {
        let min = match surface {
            Surface::RP2 => 3,
            Surface::S2 => 3,
        };
        if top < min {
            return Err(Error::Parameter(format!(
                "kernel basis needs top strand >= {min}, got {top}"
            )));
        }
        Ok(KernelBasis { surface, top })
    }

    /// `Omega_l`, the kernel at strand `l + 1`.
    pub fn omega(level: usize) -> Result<Self> {
        if level < 2 {
            return Err(Error::Parameter(format!(
                "Omega_l needs l >= 2, got {level}"
            )));
        }
        Self::new(Surface::RP2, level + 1)
    }

    pub fn rank(&self) -> usize {
        match self.surface {
            Surface::RP2 => self.top - 1,
            Surface::S2 => self.top - 2,
        }
    }

    pub fn elements(&self) -> Vec<Generator> {
        let mut v: Vec<Generator> = (1..=self.top - 2)
            .map(|i| Generator::A(i, self.top))
            .collect();
        if self.surface == Surface::RP2 {
            v.push(Generator::Rho(self.top));
        }
        v
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        match g {
            Generator::A(i, j) if j == self.top && i <= self.top - 2 => Some(i - 1),
            Generator::Rho(j) if j == self.top && self.surface == Surface::RP2 => {
                Some(self.top - 2)
            }
            _ => None,
        }
    }

    pub fn eliminated(&self) -> Generator {
        Generator::A(self.top - 1, self.top)
    }

    /// `A[top-1,top]` in the basis.
    pub fn elimination(&self) -> FreeWord {
        let mut w = FreeWord::new();
        for i in (1..=self.top - 2).rev() {
            w.push(-(i as i32));
        }
        if self.surface == Surface::RP2 {
            let rho = self.top as i32 - 1;
            w.push(-rho);
            w.push(-rho);
        }
        w
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.index_of(g).is_some() || g == self.eliminated()
    }

    /// Rewrites a word in `A[., top]` and `rho[top]` in the basis.
    pub fn to_free(&self, w: &Word) -> Result<FreeWord> {
        let mut out = FreeWord::new();
        let elim = self.elimination();
        for (g, e) in w.unit_letters() {
            if let Some(k) = self.index_of(g) {
                out.push(if e > 0 { k as i32 + 1 } else { -(k as i32) - 1 });
            } else if g == self.eliminated() {
                if e > 0 {
                    out.push_word(&elim);
                } else {
                    out.push_inverse(&elim);
                }
            } else {
                return Err(Error::AlphabetMismatch {
                    gen: g,
                    context: self.to_string(),
                });
            }
        }
        Ok(out)
    }

    pub fn to_word(&self, w: &FreeWord) -> Word {
        let elems = self.elements();
        Word::from_letters(
            w.letters()
                .iter()
                .map(|&l| (elems[(l.unsigned_abs() - 1) as usize], l.signum() as i64)),
        )
    }

    /// The conjugate `x b x^-1` of the basis element `b` by a lower letter
    /// `x`, read off the presentation relations.
    pub fn raw_conjugate(&self, x: Generator, b: Generator) -> Result<FreeWord> {
        let t = self.top;
        let word = match (x, b) {
            (Generator::A(r, s), Generator::A(i, _)) if s < t => artin_conj(r, s, i, t),
            (Generator::A(_, s), Generator::Rho(_)) if s < t => b.into(),
            (Generator::Rho(k), Generator::A(i, _)) if k < t && self.surface == Surface::RP2 => {
                rho_conj_a(k, i, t)
            }
            (Generator::Rho(k), Generator::Rho(_)) if k < t && self.surface == Surface::RP2 => {
                rho_conj_rho(k, t)
            }
            _ => {
                return Err(Error::AlphabetMismatch {
                    gen: x,
                    context: format!("letters acting on {self}"),
                })
            }
        };
        self.to_free(&word)
    }

    /// Conjugation by the lower letter `x` as an automorphism of the kernel.
    pub fn raw_action(&self, x: Generator) -> Result<FreeAut> {
        let images = self
            .elements()
            .into_iter()
            .map(|b| self.raw_conjugate(x, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeAut::from_images(images))
    }
}

impl fmt::Display for KernelBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "the {} kernel basis at strand {}",
            self.surface, self.top
        )
    }
}

/// `C[i,j]` with `A[top-1,top]` eliminated when `j = top`.
pub fn expand_c(i: usize, j: usize, top: usize) -> Result<Word> {
    if !(1 <= i && i < j && j <= top) || top < 3 {
        return Err(Error::BadIndices(format!("C[{i},{j}] with top {top}")));
    }
    let c = c_word(i, j);
    if j < top {
        return Ok(c);
    }
    let basis = KernelBasis::new(Surface::RP2, top)?;
    Ok(basis.to_word(&basis.to_free(&c)?))
}

/// The lower letters `A[i,j]`, `rho[j]` with `3 <= j <= level`.
fn lower_letters(level: usize) -> Vec<Generator> {
    let mut v = Vec::new();
    for j in 3..=level {
        for i in 1..j {
            v.push(Generator::A(i, j));
        }
        v.push(Generator::Rho(j));
    }
    v.sort();
    v
}

/// The section applied to one lower letter, landing at strand `top`.
fn section_letter(top: usize, x: Generator) -> Word {
    let up = |j: usize, e: i64| Word::gen(Generator::A(j, top), e);
    let xw: Word = x.into();
    match x {
        Generator::Rho(j) => xw.concat(&up(j, -1)),
        Generator::A(1, j) => up(j, 1).concat(&xw).concat(&up(j, -1)),
        Generator::A(2, j) => up(j, 1).concat(&xw),
        _ => xw,
    }
}

/// `s_{m+1}`: the section of forgetting the last strand of
/// `Gamma_{m,2}(RP^2)`, applied letterwise to a word over the alphabet of
/// `Gamma_{m-1,2}(RP^2)`.
pub fn section_s(m: usize, w: &Word) -> Result<Word> {
    if m < 1 {
        return Err(Error::Parameter("section_s needs m >= 1".into()));
    }
    let top = m + 2;
    w.try_substitute(|g| {
        g.validate()?;
        match g {
            Generator::A(_, j) | Generator::Rho(j) if (3..top).contains(&j) => {
                Ok(section_letter(top, g))
            }
            _ => Err(Error::AlphabetMismatch {
                gen: g,
                context: format!("Gamma_{{{},2}}(RP2)", m - 1),
            }),
        }
    })
}

/// Conjugation data for one level of the tower.
///
/// For every lower letter `x` the table stores the raw conjugation `c_x`
/// (by `x` itself) and the twisted action `phi_x` (by the section image
/// `s(x) = omega_x x`), together with their inverses. It also stores
/// `kappa_{x^±1}` with `x^±1 = kappa * s(x^±1)`.
#[derive(Clone, Debug)]
pub struct ActionTable {
    basis: KernelBasis,
    letters: Vec<Generator>,
    raw: Vec<[FreeAut; 2]>,
    twisted: Vec<[FreeAut; 2]>,
    kappa: Vec<[FreeWord; 2]>,
    elimination: FreeWord,
}

fn sign_slot(e: i64) -> usize {
    usize::from(e < 0)
}

impl ActionTable {
    /// The table for `Omega_level` acted on by `Gamma_{level-2,2}`.
    pub fn build(level: usize) -> Result<Self> {
        let basis = KernelBasis::omega(level)?;
        let letters = lower_letters(level);
        let mut raw = Vec::with_capacity(letters.len());
        let mut twisted = Vec::with_capacity(letters.len());
        let mut kappa = Vec::with_capacity(letters.len());
        for &x in &letters {
            let c = basis.raw_action(x)?;
            let c_inv = c.inverse()?;
            // Split s(x) = u x v with u, v over the kernel; then
            // s(x) = u c_x(v) x, so omega_x = u c_x(v).
            let sx = section_letter(basis.top, x);
            let pos = sx
                .letters()
                .iter()
                .position(|l| l.gen == x)
                .expect("section keeps the letter");
            let u = Word::from_letters(sx.letters()[..pos].iter().map(|l| (l.gen, l.exp)));
            let v = Word::from_letters(sx.letters()[pos + 1..].iter().map(|l| (l.gen, l.exp)));
            let omega = basis.to_free(&u)?.concat(&c.apply(&basis.to_free(&v)?));
            let phi = FreeAut::from_images(
                c.images()
                    .iter()
                    .map(|img| omega.concat(img).concat(&omega.inverse()))
                    .collect(),
            );
            let phi_inv = phi.inverse()?;
            let k_plus = omega.inverse();
            let k_minus = phi_inv.apply(&omega);
            raw.push([c, c_inv]);
            twisted.push([phi, phi_inv]);
            kappa.push([k_plus, k_minus]);
        }
        Ok(ActionTable {
            elimination: basis.elimination(),
            basis,
            letters,
            raw,
            twisted,
            kappa,
        })
    }

    pub fn level(&self) -> usize {
        self.basis.top - 1
    }

    pub fn basis(&self) -> &KernelBasis {
        &self.basis
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    fn slot(&self, x: Generator) -> Option<usize> {
        self.letters.binary_search(&x).ok()
    }

    /// Conjugation by `x^sign` in the basis.
    pub fn raw_row(&self, x: Generator, sign: i64) -> Option<&FreeAut> {
        self.slot(x).map(|k| &self.raw[k][sign_slot(sign)])
    }

    /// Conjugation by `s(x)^sign` in the basis.
    pub fn twisted_row(&self, x: Generator, sign: i64) -> Option<&FreeAut> {
        self.slot(x).map(|k| &self.twisted[k][sign_slot(sign)])
    }

    /// The kernel part of `x^sign` relative to the section.
    pub fn kappa(&self, x: Generator, sign: i64) -> Option<&FreeWord> {
        self.slot(x).map(|k| &self.kappa[k][sign_slot(sign)])
    }

    /// Every `(x, x^-1)` row pair composes to the identity in both orders.
    pub fn round_trip_ok(&self) -> bool {
        self.raw
            .iter()
            .chain(&self.twisted)
            .all(|[f, g]| f.compose(g).is_identity() && g.compose(f).is_identity())
    }

    /// Forward twisted rows, one automorphism per lower letter.
    pub fn forward_twisted(&self) -> impl Iterator<Item = &FreeAut> {
        self.twisted.iter().map(|[f, _]| f)
    }

    /// Applies conjugation by `s(h)` for a lower word `h`.
    pub fn act(&self, h: &Word, w: &FreeWord) -> Result<FreeWord> {
        let mut out = w.clone();
        for (g, e) in h.unit_letters().collect::<Vec<_>>().into_iter().rev() {
            let row = self
                .twisted_row(g, e)
                .ok_or_else(|| Error::AlphabetMismatch {
                    gen: g,
                    context: format!("Gamma_{{{},2}}(RP2)", self.level() - 2),
                })?;
            out = row.apply(&out);
        }
        Ok(out)
    }

    /// Damages the elimination word and one twisted row. Negative control
    /// for the verification suites.
    fn corrupt(&mut self) {
        self.elimination = FreeWord::from_letters(self.elimination.letters()[1..].iter().copied());
        if let Some([phi, phi_inv]) = self.twisted.first_mut() {
            let rank = phi.rank();
            let mut images = phi.images().to_vec();
            // Nielsen move on the first image: still an automorphism, but wrong.
            let b_last = FreeWord::basis(rank - 1);
            images[0] = images[0].concat(&b_last);
            *phi = FreeAut::from_images(images);
            *phi_inv = phi.inverse().expect("Nielsen move is invertible");
        }
    }
}

/// The combing normal form `(omega_{m+1}, ..., omega_2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombedForm {
    pub m: usize,
    /// Top level first.
    pub components: Vec<Word>,
}

impl CombedForm {
    pub fn is_identity(&self) -> bool {
        self.components.iter().all(Word::is_empty)
    }

    pub fn component(&self, level: usize) -> &Word {
        &self.components[self.m + 1 - level]
    }

    /// Reassembles the element as a word `omega_{m+1} s(omega_m s(...))`.
    pub fn to_word(&self) -> Result<Word> {
        let mut acc = Word::new();
        for level in 2..=self.m + 1 {
            let w = self.component(level);
            acc = if level == 2 {
                w.clone()
            } else {
                w.concat(&section_s(level - 1, &acc)?)
            };
        }
        Ok(acc)
    }
}

impl Serialize for CombedForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.components.iter().map(|w| w.to_string()))
    }
}

impl fmt::Display for CombedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|w| format!("\"{w}\"")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Action tables for every level of `Gamma_{m,2}(RP^2)`.
#[derive(Clone, Debug)]
pub struct Comber {
    m: usize,
    /// Index `l - 2` holds the table of level `l`.
    tables: Vec<ActionTable>,
}

impl Comber {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::Parameter("combing needs m >= 1".into()));
        }
        let tables = (2..=m + 1)
            .map(ActionTable::build)
            .collect::<Result<Vec<_>>>()?;
        Ok(Comber { m, tables })
    }

    /// A process-wide cached instance.
    pub fn shared(m: usize) -> Result<Arc<Comber>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Comber>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(&m) {
            return Ok(c.clone());
        }
        let c = Arc::new(Comber::new(m)?);
        cache.lock().unwrap().insert(m, c.clone());
        Ok(c)
    }

    /// A comber whose top-level table is deliberately wrong.
    pub fn with_fault(m: usize) -> Result<Self> {
        let mut c = Comber::new(m)?;
        c.tables.last_mut().unwrap().corrupt();
        Ok(c)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self, level: usize) -> &ActionTable {
        &self.tables[level - 2]
    }

    pub fn tables(&self) -> &[ActionTable] {
        &self.tables
    }

    pub fn comb(&self, w: &Word) -> Result<CombedForm> {
        self.comb_bounded(w, usize::MAX)
    }

    /// Like [`Comber::comb`], but gives up once a kernel word grows past
    /// `limit` letters. Component lengths can grow exponentially in the
    /// length of `w`.
    pub fn comb_bounded(&self, w: &Word, limit: usize) -> Result<CombedForm> {
        for g in w.generators() {
            check_gamma_letter(self.m, g)?;
        }
        let mut components = Vec::with_capacity(self.m);
        let mut current = w.clone();
        for level in (2..=self.m + 1).rev() {
            let (kappa, rest) = self.split(level, &current, limit)?;
            components.push(self.table(level).basis.to_word(&kappa));
            current = rest;
        }
        debug_assert!(current.is_empty());
        Ok(CombedForm {
            m: self.m,
            components,
        })
    }

    /// Writes `w = kappa * s(h)` at one level. Letters are consumed right
    /// to left: with the suffix already written as `kappa' s(h')`, a letter
    /// `g = kappa_g s(r)` gives `kappa = kappa_g phi_r(kappa')`.
    fn split(&self, level: usize, w: &Word, limit: usize) -> Result<(FreeWord, Word)> {
        let table = self.table(level);
        let basis = &table.basis;
        let elim = &table.elimination;
        // Track kappa^-1 so that prepending becomes appending.
        let mut kinv = FreeWord::new();
        let mut lower: Vec<(Generator, i64)> = Vec::new();
        let letters: Vec<(Generator, i64)> = w.unit_letters().collect();
        for &(g, e) in letters.iter().rev() {
            if let Some(k) = basis.index_of(g) {
                let l = k as i32 + 1;
                kinv.push(if e > 0 { -l } else { l });
            } else if g == basis.eliminated() {
                if e > 0 {
                    kinv.push_inverse(elim);
                } else {
                    kinv.push_word(elim);
                }
            } else {
                let slot = table.slot(g).ok_or_else(|| Error::AlphabetMismatch {
                    gen: g,
                    context: format!("Gamma_{{{},2}}(RP2)", level - 1),
                })?;
                let s = sign_slot(e);
                let mut next = table.twisted[slot][s].apply(&kinv);
                next.push_inverse(&table.kappa[slot][s]);
                kinv = next;
                lower.push((g, e));
            }
            if kinv.len() > limit {
                return Err(Error::TooLarge { limit });
            }
        }
        lower.reverse();
        Ok((kinv.inverse(), Word::from_letters(lower)))
    }
}

/// `comb(m, w)` with a cached table.
pub fn comb(m: usize, w: &Word) -> Result<CombedForm> {
    Comber::shared(m)?.comb(w)
}

pub fn is_trivial_gamma(m: usize, w: &Word) -> Result<bool> {
    Ok(comb(m, w)?.is_identity())
}

fn gamma_m_for(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::Parameter(format!("L_n needs n >= 3, got {n}")));
    }
    Ok(n - 2)
}

/// `w` lies in `L_n = ker iota-hat_{n-2}`.
pub fn ln_membership(n: usize, w: &Word) -> Result<bool> {
    Ok(homs::iota_hat(gamma_m_for(n)?, w)?.is_zero())
}

/// Decides whether a member of `L_n` is trivial.
pub fn ln_word_problem(n: usize, w: &Word) -> Result<bool> {
    let m = gamma_m_for(n)?;
    let image = homs::iota_hat(m, w)?;
    if !image.is_zero() {
        return Err(Error::NotInLn {
            n,
            image: image.to_string(),
        });
    }
    is_trivial_gamma(m, w)
}

/// `K_n = ker iota#`.
pub fn kn_membership(n: usize, w: &Word) -> Result<bool> {
    Ok(homs::iota_sharp(n, w)?.is_zero())
}

/// The element `u * full_twist^eps` of `K_n = L_n ⊕ <full twist>` in
/// coordinates.
pub fn kn_decompose(n: usize, u: &Word, eps: u8) -> Result<(CombedForm, u8)> {
    if eps > 1 {
        return Err(Error::Parameter(format!("eps must be 0 or 1, got {eps}")));
    }
    let m = gamma_m_for(n)?;
    let image = homs::iota_hat(m, u)?;
    if !image.is_zero() {
        return Err(Error::NotInLn {
            n,
            image: image.to_string(),
        });
    }
    Ok((comb(m, u)?, eps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Three-valued triviality test in `P_n(RP^2)`.
pub fn pn_triviality(n: usize, w: &Word) -> Result<Verdict> {
    for g in w.generators() {
        if matches!(g, Generator::Sigma(_)) {
            return Err(Error::NonPure(format!("{g} is not a pure generator")));
        }
    }
    if !homs::iota_sharp(n, w)?.is_zero() {
        return Ok(Verdict::Nontrivial);
    }
    if w.is_empty() {
        return Ok(Verdict::Trivial);
    }
    if n >= 2 && homs::q2_sharp(n, w)? != homs::QuatElement::ONE {
        return Ok(Verdict::Nontrivial);
    }
    // P_1 = Z_2 and P_2 = Q_8 are detected exactly by iota# and q2#.
    if n <= 2 {
        return Ok(Verdict::Trivial);
    }
    let converted = homs::taus_to_rhos(n, w)?;
    let in_gamma = converted
        .generators()
        .all(|g| check_gamma_letter(n - 2, g).is_ok());
    if in_gamma {
        return Ok(if is_trivial_gamma(n - 2, &converted)? {
            Verdict::Trivial
        } else {
            Verdict::Nontrivial
        });
    }
    Ok(Verdict::Unknown)
}

/// Basis of `ker(iota-hat | Omega_l)`: `A[k,l+1]`, `rho A[k,l+1] rho^-1`
/// for `k < l`, then `rho^2`, with `rho = rho[l+1]`.
pub fn keromega_basis(l: usize) -> Result<Vec<Word>> {
    if l < 2 {
        return Err(Error::Parameter(format!(
            "keromega_basis needs l >= 2, got {l}"
        )));
    }
    let t = l + 1;
    let rho: Word = Generator::Rho(t).into();
    let mut v: Vec<Word> = (1..l).map(|k| Generator::A(k, t).into()).collect();
    v.extend((1..l).map(|k| rho.conjugate(&Generator::A(k, t).into())));
    v.push(rho.pow(2));
    Ok(v)
}

/// Generators of `L_n`, grouped by strand.
pub fn ln_generators(n: usize) -> Result<Vec<Word>> {
    gamma_m_for(n)?;
    let mut v = Vec::new();
    for j in 3..=n {
        v.extend(keromega_basis(j - 1)?);
    }
    Ok(v)
}

/// Ranks of the free factors of `Gamma_{n-2,2}`, top first.
pub fn gamma_tower_ranks(n: usize) -> Result<Vec<usize>> {
    gamma_m_for(n)?;
    (2..n)
        .rev()
        .map(|l| Ok(KernelBasis::omega(l)?.rank()))
        .collect()
}

/// Ranks of the free factors of `L_n`, top first.
pub fn ln_tower_ranks(n: usize) -> Result<Vec<usize>> {
    gamma_m_for(n)?;
    (2..n).rev().map(|l| Ok(keromega_basis(l)?.len())).collect()
}

/// Rewrites an element of `ker(iota-hat | Omega_l)` in the basis of
/// [`keromega_basis`] (Reidemeister-Schreier with transversal `{1, rho}`).
pub fn rewrite_keromega(l: usize, w: &FreeWord) -> Result<FreeWord> {
    let rho = l as i32; // 1-based index of rho in Omega_l
    let mut out = FreeWord::new();
    let mut odd = false;
    for &x in w.letters() {
        if x.abs() == rho {
            match (odd, x > 0) {
                (false, true) | (true, false) => {}
                (true, true) => out.push(2 * l as i32 - 1),
                (false, false) => out.push(-(2 * l as i32 - 1)),
            }
            odd = !odd;
        } else {
            let k = x.abs();
            let letter = if odd { k + l as i32 - 1 } else { k };
            out.push(letter * x.signum());
        }
    }
    if odd {
        return Err(Error::NotInLn {
            n: l + 1,
            image: "odd rho exponent".into(),
        });
    }
    Ok(out)
}
