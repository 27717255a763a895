//! Bundled verification suites: each case compares a computed value with
//! the expected one.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{
    abelianize_presentation, delta_ker, delta_omega, fn_kernel_coinvariants, gamma_tower, ln_tower,
    subgroup_count_exponent, tower_abelianization, vcd_report,
};
use crate::combing::{gamma_tower_ranks, ln_generators, ln_tower_ranks, section_s, Comber};
use crate::error::{Error, Result};
use crate::homs::{self, QuatElement, Z2Vector};
use crate::presentations::{
    build_gamma_rp2, build_gamma_s2, build_pn_rp2, verify_relators, HomTarget, Surface,
};
use crate::words::{Generator, Word};

/// Largest `max_n` the suites accept.
pub const MAX_N_BOUND: usize = 8;
pub const DEFAULT_MAX_N: usize = 6;

/// Normal-form components grow exponentially with word length, so the
/// randomized checks that comb arbitrary products use short factors.
pub const SHORT_LEN: usize = 8;
/// Kernel-word size at which the suites give up on a single normal form.
pub const COMB_LIMIT: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Presentations,
    Combing,
    Abelianizations,
    Towers,
    Counts,
    Vcd,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 6] = [
        Suite::Presentations,
        Suite::Combing,
        Suite::Abelianizations,
        Suite::Towers,
        Suite::Counts,
        Suite::Vcd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Presentations => "presentations",
            Suite::Combing => "combing",
            Suite::Abelianizations => "abelianizations",
            Suite::Towers => "towers",
            Suite::Counts => "counts",
            Suite::Vcd => "vcd",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::PARTS
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub id: String,
    pub description: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub seed: u64,
    /// Random words per `m` for the randomized combing checks.
    pub samples: usize,
    /// Run the combing suite against a deliberately corrupted table.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: DEFAULT_MAX_N,
            seed: 0,
            samples: 200,
            inject_fault: false,
        }
    }
}

struct Cases {
    suite: &'static str,
    cases: Vec<Case>,
}

impl Cases {
    fn push(
        &mut self,
        id: String,
        description: String,
        expected: impl ToString,
        got: impl ToString,
    ) {
        let (expected, got) = (expected.to_string(), got.to_string());
        let pass = expected == got;
        self.cases.push(Case {
            id: format!("{}/{id}", self.suite),
            description,
            expected,
            got,
            pass,
        });
    }

    /// Records `Err` as a failing case instead of aborting the suite.
    fn check<T: ToString>(
        &mut self,
        id: String,
        description: String,
        expected: impl ToString,
        got: Result<T>,
    ) {
        match got {
            Ok(v) => self.push(id, description, expected, v),
            Err(e) => self.push(id, description, expected, format!("error: {e}")),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(3..=MAX_N_BOUND).contains(&cfg.max_n) {
        return Err(Error::Parameter(format!(
            "max-n must lie in 3..={MAX_N_BOUND}, got {}",
            cfg.max_n
        )));
    }
    let parts: Vec<Suite> = if suite == Suite::All {
        Suite::PARTS.to_vec()
    } else {
        vec![suite]
    };
    let mut cases = Vec::new();
    for part in parts {
        let mut c = Cases {
            suite: part.name(),
            cases: Vec::new(),
        };
        match part {
            Suite::Presentations => presentations(&mut c, cfg),
            Suite::Combing => combing(&mut c, cfg)?,
            Suite::Abelianizations => abelianizations(&mut c, cfg),
            Suite::Towers => towers(&mut c, cfg),
            Suite::Counts => counts(&mut c, cfg),
            Suite::Vcd => vcd(&mut c, cfg),
            Suite::All => unreachable!(),
        }
        cases.extend(c.cases);
    }
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    let pass = cases.iter().all(|c| c.pass);
    Ok(VerificationReport {
        suite: suite.name().to_string(),
        cases,
        pass,
    })
}

fn relator_case(
    c: &mut Cases,
    id: String,
    description: String,
    report: Result<crate::presentations::RelatorReport>,
) {
    let got = report.map(|r| match r.failures().next() {
        None => "all trivial".to_string(),
        Some(f) => format!("{} -> {}", f.label, f.image),
    });
    c.check(id, description, "all trivial", got);
}

fn presentations(c: &mut Cases, cfg: &VerifyConfig) {
    for n in 1..=cfg.max_n {
        let p = build_pn_rp2(n).expect("n >= 1");
        c.push(
            format!("pn-rp2/n={n:02}/generators"),
            format!("P_{n}(RP2) generator count"),
            n * (n - 1) / 2 + n,
            p.generators.len(),
        );
        relator_case(
            c,
            format!("pn-rp2/n={n:02}/iota"),
            format!("P_{n}(RP2) relators under iota#"),
            verify_relators(&p, HomTarget::IotaSharp),
        );
        relator_case(
            c,
            format!("pn-rp2/n={n:02}/abelian"),
            format!("P_{n}(RP2) relators in the abelianization"),
            verify_relators(&p, HomTarget::Abelianization),
        );
        if n >= 2 {
            relator_case(
                c,
                format!("pn-rp2/n={n:02}/q2"),
                format!("P_{n}(RP2) relators under q2#"),
                verify_relators(&p, HomTarget::Q2Sharp),
            );
        }
        if n >= 3 {
            // Relators that live in Gamma_{n-2,2} after tau -> rho must comb trivially.
            let comber = Comber::shared(n - 2).expect("m >= 1");
            let mut bad = Vec::new();
            let mut count = 0;
            for r in &p.relators {
                let Ok(w) = homs::taus_to_rhos(n, &r.word) else {
                    continue;
                };
                if w.generators()
                    .all(|g| homs::check_gamma_letter(n - 2, g).is_ok())
                {
                    count += 1;
                    if !comber.comb(&w).map(|f| f.is_identity()).unwrap_or(false) {
                        bad.push(r.label.clone());
                    }
                }
            }
            c.push(
                format!("pn-rp2/n={n:02}/gamma-relators"),
                format!(
                    "P_{n}(RP2) relators inside Gamma_{{{},2}} comb trivially ({count} relators)",
                    n - 2
                ),
                "[]",
                format!("{bad:?}"),
            );
        }
    }
    for m in 1..=cfg.max_n - 2 {
        let p = build_gamma_rp2(m, 2).expect("m >= 1");
        for (t, name) in [
            (HomTarget::IotaSharp, "iota"),
            (HomTarget::IotaHat, "iota-hat"),
            (HomTarget::Combing, "combing"),
            (HomTarget::ForgetStrand, "forget"),
            (HomTarget::Abelianization, "abelian"),
        ] {
            relator_case(
                c,
                format!("gamma-rp2/m={m:02}/{name}"),
                format!("Gamma_{{{m},2}}(RP2) relators under {t:?}"),
                verify_relators(&p, t),
            );
        }
    }
    for n in 1..cfg.max_n {
        for m in 1..=cfg.max_n - n {
            let p = build_gamma_s2(n, m).expect("n, m >= 1");
            relator_case(
                c,
                format!("gamma-s2/n={n:02},m={m:02}/abelian"),
                format!("Gamma_{{{n},{m}}}(S2) relators in the abelianization"),
                verify_relators(&p, HomTarget::Abelianization),
            );
        }
    }
}

/// A uniformly random word in the alphabet of `Gamma_{m,2}(RP^2)` with unit
/// exponents and length at most `max_len`.
pub fn random_gamma_word<R: Rng>(rng: &mut R, m: usize, max_len: usize) -> Word {
    random_word(rng, &gamma_alphabet(m), max_len)
}

pub fn gamma_alphabet(m: usize) -> Vec<Generator> {
    let mut v = Vec::new();
    for j in 3..=m + 2 {
        for i in 1..j {
            v.push(Generator::A(i, j));
        }
        v.push(Generator::Rho(j));
    }
    v
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet: &[Generator], max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| {
        (
            *alphabet.choose(rng).unwrap(),
            if rng.gen_bool(0.5) { 1 } else { -1 },
        )
    }))
}

fn combing(c: &mut Cases, cfg: &VerifyConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for m in 1..=cfg.max_n - 2 {
        let comber = if cfg.inject_fault {
            std::sync::Arc::new(Comber::with_fault(m)?)
        } else {
            Comber::shared(m)?
        };
        let p = build_gamma_rp2(m, 2)?;
        let bad: Vec<&str> = p
            .relators
            .iter()
            .filter(|r| {
                !comber
                    .comb(&r.word)
                    .map(|f| f.is_identity())
                    .unwrap_or(false)
            })
            .map(|r| r.label.as_str())
            .collect();
        c.push(
            format!("m={m:02}/relators"),
            format!("every relator of Gamma_{{{m},2}}(RP2) combs to the identity"),
            0,
            bad.len(),
        );

        let round_trips = comber.tables().iter().all(|t| t.round_trip_ok());
        c.push(
            format!("m={m:02}/round-trip"),
            format!("action rows for x and x^-1 are mutually inverse, m={m}"),
            true,
            round_trips,
        );

        if m >= 2 {
            let bad = gamma_alphabet(m - 1)
                .into_iter()
                .filter(|&g| {
                    let w: Word = g.into();
                    let up = section_s(m, &w).and_then(|s| homs::forget_strands(&s, m + 2, m + 1));
                    up.map(|x| x != w).unwrap_or(true)
                })
                .count();
            c.push(
                format!("m={m:02}/section"),
                format!("forgetting the last strand undoes the section, m={m}"),
                0,
                bad,
            );
        }

        let alphabet = gamma_alphabet(m);
        let mut inverse_failures = 0;
        for _ in 0..cfg.samples {
            let w = random_word(&mut rng, &alphabet, 40);
            if !comber
                .comb_bounded(&w.concat(&w.inverse()), COMB_LIMIT)
                .map(|f| f.is_identity())
                .unwrap_or(false)
            {
                inverse_failures += 1;
            }
        }
        c.push(
            format!("m={m:02}/inverse"),
            format!(
                "{} random w w^-1 (length <= 40) comb to the identity, m={m}",
                cfg.samples
            ),
            0,
            inverse_failures,
        );

        // Rebuilding the element from its normal form and cancelling it
        // against the original word.
        let mut reassembly_failures = 0;
        for _ in 0..cfg.samples / 4 {
            let w = random_word(&mut rng, &alphabet, SHORT_LEN);
            let ok = (|| -> Result<bool> {
                let back = comber.comb_bounded(&w, COMB_LIMIT)?.to_word()?;
                Ok(comber
                    .comb_bounded(&back.concat(&w.inverse()), COMB_LIMIT)?
                    .is_identity())
            })();
            if !ok.unwrap_or(false) {
                reassembly_failures += 1;
            }
        }
        c.push(
            format!("m={m:02}/reassembly"),
            format!(
                "{} random words are recovered from their normal form, m={m}",
                cfg.samples / 4
            ),
            0,
            reassembly_failures,
        );

        let mut insertion_failures = 0;
        for _ in 0..cfg.samples / 2 {
            let u = random_word(&mut rng, &alphabet, SHORT_LEN);
            let v = random_word(&mut rng, &alphabet, SHORT_LEN);
            let r = &p.relators.choose(&mut rng).unwrap().word;
            let lhs = comber.comb_bounded(&u.concat(r).concat(&v), COMB_LIMIT);
            let rhs = comber.comb_bounded(&u.concat(&v), COMB_LIMIT);
            if !matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b) {
                insertion_failures += 1;
            }
        }
        c.push(
            format!("m={m:02}/insertion"),
            format!("{} random u R v comb like u v, m={m}", cfg.samples / 2),
            0,
            insertion_failures,
        );

        if m >= 2 {
            let lower = gamma_alphabet(m - 1);
            let mut failures = 0;
            for _ in 0..cfg.samples / 4 {
                let u = random_word(&mut rng, &lower, SHORT_LEN);
                let v = random_word(&mut rng, &lower, SHORT_LEN);
                let ok = (|| -> Result<bool> {
                    let lhs = comber
                        .comb_bounded(&section_s(m, &u)?.concat(&section_s(m, &v)?), COMB_LIMIT)?;
                    Ok(lhs == comber.comb_bounded(&section_s(m, &u.concat(&v))?, COMB_LIMIT)?)
                })();
                if !ok.unwrap_or(false) {
                    failures += 1;
                }
            }
            c.push(
                format!("m={m:02}/section-hom"),
                format!("the section is multiplicative on random pairs, m={m}"),
                0,
                failures,
            );
        }
    }
    Ok(())
}

fn free_rank(r: usize) -> String {
    crate::AbelianInvariants::free(r).to_string()
}

fn abelianizations(c: &mut Cases, cfg: &VerifyConfig) {
    for n in 1..=cfg.max_n {
        let expected = crate::AbelianInvariants {
            free_rank: 0,
            torsion: vec![2.into(); n],
        };
        c.push(
            format!("pn-rp2/n={n:02}"),
            format!("P_{n}(RP2)^Ab"),
            expected,
            abelianize_presentation(&build_pn_rp2(n).unwrap()),
        );
    }
    for m in 1..=cfg.max_n - 2 {
        let pres = abelianize_presentation(&build_gamma_rp2(m, 2).unwrap());
        c.push(
            format!("gamma/m={m:02}/presentation"),
            format!("Gamma_{{{m},2}}(RP2)^Ab from the presentation"),
            free_rank(2 * m),
            &pres,
        );
        c.check(
            format!("gamma/m={m:02}/tower"),
            format!("Gamma_{{{m},2}}(RP2)^Ab from the tower"),
            &pres,
            gamma_tower(m).and_then(|t| tower_abelianization(&t)),
        );
    }
    for n in 3..=cfg.max_n {
        c.check(
            format!("ln/n={n:02}"),
            format!("L_{n}^Ab from the tower"),
            free_rank(n * (n - 2)),
            ln_tower(n).and_then(|t| tower_abelianization(&t)),
        );
        c.check(
            format!("delta-omega/n={n:02}"),
            format!("Delta(Omega_{n})"),
            free_rank(2),
            delta_omega(n),
        );
        c.check(
            format!("delta-ker/n={n:02}"),
            format!("Delta(ker iota-hat on Omega_{n})"),
            free_rank(2 * n - 1),
            delta_ker(n),
        );
    }
    for m in 1..=cfg.max_n - 2 {
        for l in 2..=cfg.max_n - m {
            c.check(
                format!("fn-rp2/m={m:02},l={l:02}"),
                format!("RP2 kernel coinvariants m={m} l={l}"),
                free_rank(l),
                fn_kernel_coinvariants(Surface::RP2, m, l),
            );
            if l >= 3 {
                c.check(
                    format!("fn-s2/m={m:02},l={l:02}"),
                    format!("S2 kernel coinvariants m={m} l={l}"),
                    free_rank(m + l - 1),
                    fn_kernel_coinvariants(Surface::S2, m, l),
                );
            }
        }
    }
}

fn towers(c: &mut Cases, cfg: &VerifyConfig) {
    for n in 3..=cfg.max_n {
        let gamma: Vec<usize> = (2..n).rev().collect();
        let ln: Vec<usize> = (2..n).rev().map(|l| 2 * l - 1).collect();
        c.check(
            format!("ranks/n={n:02}/gamma"),
            format!("Gamma_{{{},2}} tower ranks", n - 2),
            format!("{gamma:?}"),
            gamma_tower_ranks(n).map(|v| format!("{v:?}")),
        );
        c.check(
            format!("ranks/n={n:02}/ln"),
            format!("L_{n} tower ranks"),
            format!("{ln:?}"),
            ln_tower_ranks(n).map(|v| format!("{v:?}")),
        );

        let m = n - 2;
        let killed = ln_generators(n).and_then(|gens| {
            gens.iter()
                .map(|g| homs::iota_hat(m, g).map(|v| v.is_zero()))
                .collect::<Result<Vec<_>>>()
        });
        c.check(
            format!("index/n={n:02}/kills"),
            format!("iota-hat vanishes on the generators of L_{n}"),
            true,
            killed.map(|v| v.iter().all(|&b| b)),
        );
        let hits: Result<Vec<Z2Vector>> = (3..=n)
            .map(|j| homs::iota_hat(m, &Generator::Rho(j).into()))
            .collect();
        let spans = hits.map(|h| (0..m).all(|k| h.contains(&Z2Vector::unit(m, k))));
        c.check(
            format!("index/n={n:02}/spans"),
            format!("iota-hat hits every basis vector of (Z_2)^{m}, index 2^{m}"),
            true,
            spans,
        );
    }
    for n in 2..=cfg.max_n {
        let all: Word = Word::from_letters((1..=n).rev().map(|k| (Generator::Rho(k), 1)));
        let short: Word = Word::from_letters((1..n).rev().map(|k| (Generator::Rho(k), 1)));
        let mut ones = vec![1u8; n];
        c.check(
            format!("torsion/n={n:02}/a"),
            format!("iota# of rho_{n} ... rho_1"),
            Z2Vector(ones.clone()),
            homs::iota_sharp(n, &all),
        );
        ones[n - 1] = 0;
        c.check(
            format!("torsion/n={n:02}/b"),
            format!("iota# of rho_{} ... rho_1", n - 1),
            Z2Vector(ones),
            homs::iota_sharp(n, &short),
        );
        c.check(
            format!("torsion/n={n:02}/twist"),
            format!("q2# of the full twist on {n} strands"),
            QuatElement::MINUS_ONE,
            homs::q2_sharp(n, &homs::full_twist_pure(n)),
        );
    }
}

fn counts(c: &mut Cases, cfg: &VerifyConfig) {
    for n in 3..=cfg.max_n {
        let e = n * (n - 2);
        let got = subgroup_count_exponent(n).map(|x| format!("exponent {x}, count {}", 1u128 << x));
        c.check(
            format!("n={n:02}"),
            format!("n={n}: exponent {e}, count {}", 1u128 << e),
            format!("exponent {e}, count {}", 1u128 << e),
            got,
        );
    }
}

fn vcd(c: &mut Cases, cfg: &VerifyConfig) {
    for n in 3..=cfg.max_n {
        c.check(
            format!("rp2/n={n:02}"),
            format!("RP2 n={n} → {}", n - 2),
            n - 2,
            vcd_report(Surface::RP2, n),
        );
    }
    for n in 4..=cfg.max_n {
        c.check(
            format!("s2/n={n:02}"),
            format!("S2 n={n} → {}", n - 3),
            n - 3,
            vcd_report(Surface::S2, n),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::PARTS.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let cfg = VerifyConfig {
            max_n: 4,
            samples: 20,
            ..Default::default()
        };
        for s in Suite::PARTS {
            let r = run_suite(s, &cfg).unwrap();
            let failed: Vec<_> = r.cases.iter().filter(|c| !c.pass).collect();
            assert!(r.pass, "{s}: {failed:?}");
        }
    }

    #[test]
    fn fault_injection_fails() {
        let cfg = VerifyConfig {
            max_n: 3,
            samples: 10,
            inject_fault: true,
            ..Default::default()
        };
        assert!(!run_suite(Suite::Combing, &cfg).unwrap().pass);
    }

    #[test]
    fn cases_are_sorted() {
        let r = run_suite(
            Suite::Vcd,
            &VerifyConfig {
                max_n: 5,
                ..Default::default()
            },
        )
        .unwrap();
        let ids: Vec<_> = r.cases.iter().map(|c| c.id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert!(r.cases.iter().any(|c| c.description == "RP2 n=5 → 3"));
        assert!(r.cases.iter().any(|c| c.description == "S2 n=5 → 2"));
    }

    #[test]
    fn bad_max_n() {
        assert!(run_suite(
            Suite::Vcd,
            &VerifyConfig {
                max_n: 2,
                ..Default::default()
            }
        )
        .is_err());
        assert!(run_suite(
            Suite::Vcd,
            &VerifyConfig {
                max_n: 9,
                ..Default::default()
            }
        )
        .is_err());
    }
}
