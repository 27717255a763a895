//! The three group presentations as data, plus the shared relation formulas.
//!
//! Every relation `lhs = rhs` is stored as the single relator `lhs * rhs^-1`,
//! freely reduced.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Generator, Word};

/// Which surface a family of braid groups lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Surface {
    S2,
    RP2,
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::S2 => "S2",
            Surface::RP2 => "RP2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `P_n(RP^2)` in the `A`/`tau` generators.
    PnRP2,
    /// `P_m(RP^2 \ {x_1..x_p})` in the `A`/`rho` generators.
    GammaRP2,
    /// `P_n(S^2 \ {x_1..x_m})` in the `A` generators.
    GammaS2,
}

/// A relator together with the relation instance it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub label: String,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub family: Family,
    pub params: BTreeMap<&'static str, usize>,
    pub generators: Vec<Generator>,
    pub relators: Vec<Relator>,
}

#[derive(Serialize)]
struct PresentationJson<'a> {
    family: Family,
    params: &'a BTreeMap<&'static str, usize>,
    generators: Vec<String>,
    relators: Vec<String>,
}

impl Presentation {
    pub fn param(&self, key: &str) -> usize {
        self.params[key]
    }

    pub fn relator_words(&self) -> impl Iterator<Item = &Word> {
        self.relators.iter().map(|r| &r.word)
    }

    pub fn contains_generator(&self, g: Generator) -> bool {
        self.generators.binary_search(&g).is_ok()
    }

    /// The JSON export `{family, params, generators, relators}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PresentationJson {
            family: self.family,
            params: &self.params,
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            relators: self.relators.iter().map(|r| r.word.to_string()).collect(),
        })
        .expect("presentation serializes")
    }

    fn new(
        family: Family,
        params: &[(&'static str, usize)],
        mut generators: Vec<Generator>,
    ) -> Self {
        generators.sort();
        Presentation {
            family,
            params: params.iter().copied().collect(),
            generators,
            relators: Vec::new(),
        }
    }

    fn relation(&mut self, label: String, lhs: Word, rhs: &Word) {
        let word = lhs.concat(&rhs.inverse());
        debug_assert!(
            word.generators().all(|g| self.contains_generator(g)),
            "{label}: {word}"
        );
        if !word.is_empty() {
            self.relators.push(Relator { label, word });
        }
    }

    /// Artin relations among every pair of `A` generators present.
    fn artin_relations(&mut self) {
        let a_gens: Vec<(usize, usize)> = self
            .generators
            .iter()
            .filter_map(|g| match *g {
                Generator::A(i, j) => Some((i, j)),
                _ => None,
            })
            .collect();
        for &(r, s) in &a_gens {
            for &(i, j) in &a_gens {
                if s < j {
                    let lhs = a(r, s).concat(&a(i, j)).concat(&a_inv(r, s));
                    self.relation(
                        format!("artin r={r} s={s} i={i} j={j}"),
                        lhs,
                        &artin_conj(r, s, i, j),
                    );
                }
            }
        }
    }
}

pub(crate) fn a(i: usize, j: usize) -> Word {
    Word::gen(Generator::A(i, j), 1)
}

pub(crate) fn a_inv(i: usize, j: usize) -> Word {
    Word::gen(Generator::A(i, j), -1)
}

fn gen_word(letters: &[(Generator, i64)]) -> Word {
    Word::from_letters(letters.iter().copied())
}

/// The conjugate `A[r,s] A[i,j] A[r,s]^-1` rewritten by the Artin relations.
/// Requires `r < s < j` and `i < j`.
pub fn artin_conj(r: usize, s: usize, i: usize, j: usize) -> Word {
    assert!(r < s && s < j && i < j, "artin_conj({r},{s},{i},{j})");
    use Generator::A;
    if i < r || s < i {
        a(i, j)
    } else if i == s {
        gen_word(&[
            (A(i, j), -1),
            (A(r, j), -1),
            (A(i, j), 1),
            (A(r, j), 1),
            (A(i, j), 1),
        ])
    } else if i == r {
        gen_word(&[(A(s, j), -1), (A(i, j), 1), (A(s, j), 1)])
    } else {
        gen_word(&[
            (A(s, j), -1),
            (A(r, j), -1),
            (A(s, j), 1),
            (A(r, j), 1),
            (A(i, j), 1),
            (A(r, j), -1),
            (A(s, j), -1),
            (A(r, j), 1),
            (A(s, j), 1),
        ])
    }
}

/// `C[i,j] = A[j-1,j]^-1 ... A[i+1,j]^-1 A[i,j] A[i+1,j] ... A[j-1,j]`.
pub fn c_word(i: usize, j: usize) -> Word {
    assert!(i < j);
    let mut w = Word::new();
    for k in (i + 1..j).rev() {
        w.push(Generator::A(k, j), -1);
    }
    w.push(Generator::A(i, j), 1);
    for k in i + 1..j {
        w.push(Generator::A(k, j), 1);
    }
    w
}

/// Presentation of `P_n(RP^2)` with generators `A[i,j]` and `tau[k]`.
pub fn build_pn_rp2(n: usize) -> Result<Presentation> {
    if n < 1 {
        return Err(Error::Parameter("P_n(RP2) needs n >= 1".into()));
    }
    use Generator::{Tau, A};
    let mut gens = Vec::new();
    for j in 1..=n {
        for i in 1..j {
            gens.push(A(i, j));
        }
        gens.push(Tau(j));
    }
    let mut p = Presentation::new(Family::PnRP2, &[("n", n)], gens);
    p.artin_relations();
    let tau = |k: usize, e: i64| Word::gen(Tau(k), e);
    // tau_i tau_j tau_i^-1 = tau_j^-1 A[i,j]^-1 tau_j^2
    for j in 1..=n {
        for i in 1..j {
            let lhs = tau(i, 1).concat(&tau(j, 1)).concat(&tau(i, -1));
            let rhs = tau(j, -1).concat(&a_inv(i, j)).concat(&tau(j, 2));
            p.relation(format!("(b) i={i} j={j}"), lhs, &rhs);
        }
    }
    // tau_i^2 = A[1,i] ... A[i-1,i] A[i,i+1] ... A[i,n]
    for i in 1..=n {
        let mut rhs = Word::new();
        for k in 1..i {
            rhs.push(A(k, i), 1);
        }
        for k in i + 1..=n {
            rhs.push(A(i, k), 1);
        }
        p.relation(format!("(c) i={i}"), tau(i, 2), &rhs);
    }
    // tau_k A[i,j] tau_k^-1
    for j in 1..=n {
        for i in 1..j {
            for k in 1..=n {
                if k == j {
                    continue;
                }
                let rhs = if j < k || k < i {
                    a(i, j)
                } else if k == i {
                    tau(j, -1).concat(&a_inv(i, j)).concat(&tau(j, 1))
                } else {
                    gen_word(&[
                        (Tau(j), -1),
                        (A(k, j), -1),
                        (Tau(j), 1),
                        (A(k, j), -1),
                        (A(i, j), 1),
                        (A(k, j), 1),
                        (Tau(j), -1),
                        (A(k, j), 1),
                        (Tau(j), 1),
                    ])
                };
                let lhs = tau(k, 1).concat(&a(i, j)).concat(&tau(k, -1));
                p.relation(format!("(d) k={k} i={i} j={j}"), lhs, &rhs);
            }
        }
    }
    Ok(p)
}

/// The conjugate `rho[k] A[i,j] rho[k]^-1` for `k < j`, with `C` expanded.
pub fn rho_conj_a(k: usize, i: usize, j: usize) -> Word {
    assert!(k < j && i < j);
    let rho = |e: i64| Word::gen(Generator::Rho(j), e);
    if k < i {
        a(i, j)
    } else if k == i {
        rho(-1).concat(&c_word(i, j).inverse()).concat(&rho(1))
    } else {
        let c = c_word(k, j);
        rho(-1)
            .concat(&c.inverse())
            .concat(&rho(1))
            .concat(&a(i, j))
            .concat(&rho(-1))
            .concat(&c)
            .concat(&rho(1))
    }
}

/// The conjugate `rho[k] rho[j] rho[k]^-1 = C[k,j] rho[j]` for `k < j`.
pub fn rho_conj_rho(k: usize, j: usize) -> Word {
    assert!(k < j);
    c_word(k, j).concat(&Word::gen(Generator::Rho(j), 1))
}

/// Presentation of `P_m(RP^2 \ {x_1..x_p})` with generators `A[i,j]`,
/// `rho[j]` for `p+1 <= j <= m+p`.
pub fn build_gamma_rp2(m: usize, p: usize) -> Result<Presentation> {
    if m < 1 || p < 1 {
        return Err(Error::Parameter("Gamma_{m,p}(RP2) needs m, p >= 1".into()));
    }
    use Generator::{Rho, A};
    let top = m + p;
    let mut gens = Vec::new();
    for j in p + 1..=top {
        for i in 1..j {
            gens.push(A(i, j));
        }
        gens.push(Rho(j));
    }
    let mut pr = Presentation::new(Family::GammaRP2, &[("m", m), ("p", p)], gens);
    pr.artin_relations();
    let rho = |k: usize, e: i64| Word::gen(Rho(k), e);
    // (II) A[i,j] rho[k] A[i,j]^-1 = rho[k], j < k
    for j in p + 1..=top {
        for k in j + 1..=top {
            for i in 1..j {
                let lhs = a(i, j).concat(&rho(k, 1)).concat(&a_inv(i, j));
                pr.relation(format!("(II) i={i} j={j} k={k}"), lhs, &rho(k, 1));
            }
        }
    }
    // (III) rho[k] A[i,j] rho[k]^-1, k < j
    for j in p + 1..=top {
        for k in p + 1..j {
            for i in 1..j {
                let lhs = rho(k, 1).concat(&a(i, j)).concat(&rho(k, -1));
                pr.relation(
                    format!("(III) k={k} i={i} j={j}"),
                    lhs,
                    &rho_conj_a(k, i, j),
                );
            }
        }
    }
    // (IV) rho[k] rho[j] rho[k]^-1 = C[k,j] rho[j]
    for j in p + 1..=top {
        for k in p + 1..j {
            let lhs = rho(k, 1).concat(&rho(j, 1)).concat(&rho(k, -1));
            pr.relation(format!("(IV) k={k} j={j}"), lhs, &rho_conj_rho(k, j));
        }
    }
    // (V) rho[j] (prod_i A[i,j]) rho[j] = prod_{l>j} A[j,l]
    for j in p + 1..=top {
        let mut lhs = rho(j, 1);
        for i in 1..j {
            lhs.push(A(i, j), 1);
        }
        lhs.push(Rho(j), 1);
        let mut rhs = Word::new();
        for l in j + 1..=top {
            rhs.push(A(j, l), 1);
        }
        pr.relation(format!("(V) j={j}"), lhs, &rhs);
    }
    Ok(pr)
}

/// Presentation of `P_n(S^2 \ {x_1..x_m})` with generators `A[i,j]` for
/// `m+1 <= j <= m+n`.
pub fn build_gamma_s2(n: usize, m: usize) -> Result<Presentation> {
    if n < 1 || m < 1 {
        return Err(Error::Parameter("Gamma_{n,m}(S2) needs n, m >= 1".into()));
    }
    let top = m + n;
    let mut gens = Vec::new();
    for j in m + 1..=top {
        for i in 1..j {
            gens.push(Generator::A(i, j));
        }
    }
    let mut pr = Presentation::new(Family::GammaS2, &[("m", m), ("n", n)], gens);
    pr.artin_relations();
    for j in m + 1..=top {
        let mut lhs = Word::new();
        for i in 1..j {
            lhs.push(Generator::A(i, j), 1);
        }
        for k in j + 1..=top {
            lhs.push(Generator::A(j, k), 1);
        }
        pr.relation(format!("(ii) j={j}"), lhs, &Word::new());
    }
    Ok(pr)
}

/// A homomorphism (or normal form) that relators can be pushed through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HomTarget {
    /// `iota#` into `(Z_2)^n`; for `Gamma_{m,2}` via the inclusion into `P_{m+2}`.
    IotaSharp,
    /// `iota-hat_m` on `Gamma_{m,2}`.
    IotaHat,
    /// `q2#` into `Q_8`.
    Q2Sharp,
    /// The combing normal form of `Gamma_{m,2}`.
    Combing,
    /// Forgetting the last strand of `Gamma_{m,2}`, then combing in `Gamma_{m-1,2}`.
    ForgetStrand,
    /// The abelianization of the presented group itself.
    Abelianization,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorImage {
    pub label: String,
    pub relator: String,
    pub image: String,
    pub trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorReport {
    pub target: HomTarget,
    pub images: Vec<RelatorImage>,
}

impl RelatorReport {
    pub fn passed(&self) -> bool {
        self.images.iter().all(|i| i.trivial)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelatorImage> {
        self.images.iter().filter(|i| !i.trivial)
    }
}

type ImageFn<'a> = dyn Fn(&Word) -> Result<(String, bool)> + 'a;

/// Pushes every relator of `p` through `target`.
pub fn verify_relators(p: &Presentation, target: HomTarget) -> Result<RelatorReport> {
    use crate::{abelian, combing, homs};
    let unsupported = || Error::Parameter(format!("{target:?} is not defined on {:?}", p.family));
    let gamma2 = p.family == Family::GammaRP2 && p.param("p") == 2;
    let eval: Box<ImageFn<'_>> = match (target, p.family) {
        (HomTarget::IotaSharp, Family::PnRP2) => {
            let n = p.param("n");
            Box::new(move |r| homs::iota_sharp(n, r).map(|v| (v.to_string(), v.is_zero())))
        }
        (HomTarget::IotaSharp, Family::GammaRP2) if gamma2 => {
            let n = p.param("m") + 2;
            Box::new(move |r| homs::iota_sharp(n, r).map(|v| (v.to_string(), v.is_zero())))
        }
        (HomTarget::IotaHat, Family::GammaRP2) if gamma2 => {
            let m = p.param("m");
            Box::new(move |r| homs::iota_hat(m, r).map(|v| (v.to_string(), v.is_zero())))
        }
        (HomTarget::Q2Sharp, Family::PnRP2) if p.param("n") >= 2 => {
            let n = p.param("n");
            Box::new(move |r| {
                homs::q2_sharp(n, r).map(|q| (q.to_string(), q == homs::QuatElement::ONE))
            })
        }
        (HomTarget::Combing, Family::GammaRP2) if gamma2 => {
            let comber = combing::Comber::shared(p.param("m"))?;
            Box::new(move |r| comber.comb(r).map(|c| (c.to_string(), c.is_identity())))
        }
        (HomTarget::ForgetStrand, Family::GammaRP2) if gamma2 => {
            let m = p.param("m");
            let comber = if m >= 2 {
                Some(combing::Comber::shared(m - 1)?)
            } else {
                None
            };
            Box::new(move |r| {
                let image = homs::forget_strands(r, m + 2, m + 1)?;
                match &comber {
                    Some(c) => c.comb(&image).map(|c| (c.to_string(), c.is_identity())),
                    None => Ok((image.to_string(), image.is_empty())),
                }
            })
        }
        (HomTarget::Abelianization, _) => Box::new(move |r| {
            abelian::abelian_image_trivial(p, r)
                .map(|t| (if t { "0".into() } else { "nonzero".into() }, t))
        }),
        _ => return Err(unsupported()),
    };
    let mut images = Vec::with_capacity(p.relators.len());
    for r in &p.relators {
        let (image, trivial) = eval(&r.word)?;
        images.push(RelatorImage {
            label: r.label.clone(),
            relator: r.word.to_string(),
            image,
            trivial,
        });
    }
    Ok(RelatorReport { target, images })
}
