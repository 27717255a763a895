//! `sbk`: command-line front end for surface-braids.
//!
//! Results are JSON on stdout, diagnostics go to stderr. Exit status is 0 on
//! success, 1 when a verification suite fails and 2 on bad input.

mod spec;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spec::GroupSpec;
use surface_braids::abelian::{self, abelianize_presentation};
use surface_braids::combing::{self, Comber};
use surface_braids::homs;
use surface_braids::presentations::{build_gamma_rp2, build_gamma_s2, build_pn_rp2};
use surface_braids::verify::{self, Suite, VerifyConfig};
use surface_braids::{Error, Generator, Word};

#[derive(Parser)]
#[command(
    name = "sbk",
    version,
    about = "Pure braid groups of the sphere and the projective plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Combing normal form of a word in Gamma_{m,2}(RP2).
    Nf {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Evaluate a homomorphism on a word over n strands.
    Eval {
        #[arg(long)]
        hom: Hom,
        /// Number of strands; iota-hat acts on Gamma_{n-2,2}(RP2).
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Target strand count for `forget` (default n-1).
        #[arg(long)]
        to: Option<usize>,
    },
    /// Abelian invariants of a group.
    Abelianize {
        #[arg(long)]
        group: String,
    },
    /// Generators, relator counts and tower data of a group.
    Info {
        #[arg(long)]
        group: String,
    },
    /// Run a bundled verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = verify::DEFAULT_MAX_N)]
        max_n: usize,
        /// Random samples per m in the combing suite.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Hom {
    Iota,
    IotaHat,
    Q2,
    Forget,
    Abelianize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Presentations,
    Combing,
    Abelianizations,
    Towers,
    Counts,
    Vcd,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Presentations => Suite::Presentations,
            SuiteArg::Combing => Suite::Combing,
            SuiteArg::Abelianizations => Suite::Abelianizations,
            SuiteArg::Towers => Suite::Towers,
            SuiteArg::Counts => Suite::Counts,
            SuiteArg::Vcd => Suite::Vcd,
            SuiteArg::All => Suite::All,
        }
    }
}

enum Failure {
    Input(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn parse(word: &str) -> Result<Word, Failure> {
    Ok(word.parse::<Word>()?)
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.command {
        Command::Nf { m, word } => {
            let w = parse(&word)?;
            let form = Comber::shared(m)?.comb(&w)?;
            Ok(
                json!({ "m": m, "word": w.to_string(), "normal_form": form, "trivial": form.is_identity() }),
            )
        }
        Command::Eval { hom, n, word, to } => eval(hom, n, &parse(&word)?, to),
        Command::Abelianize { group } => abelianize(group.parse()?, &group),
        Command::Info { group } => info(group.parse()?, &group),
        Command::Verify {
            suite,
            max_n,
            samples,
            inject_fault,
        } => {
            let seed = match std::env::var("SBK_SEED") {
                Ok(s) => s.trim().parse::<u64>().map_err(|_| {
                    Failure::Input(format!("SBK_SEED must be an integer, got {s:?}"))
                })?,
                Err(_) => 0,
            };
            let cfg = VerifyConfig {
                max_n,
                seed,
                samples,
                inject_fault,
            };
            eprintln!(
                "sbk: running suite {} with max-n {max_n}, seed {seed}",
                Suite::from(suite)
            );
            let report = verify::run_suite(suite.into(), &cfg)?;
            for c in report.cases.iter().filter(|c| !c.pass) {
                eprintln!("sbk: FAIL {}: expected {}, got {}", c.id, c.expected, c.got);
            }
            let value = serde_json::to_value(&report).expect("report serializes");
            if report.pass {
                Ok(value)
            } else {
                Err(Failure::Verification(value))
            }
        }
    }
}

fn eval(hom: Hom, n: usize, w: &Word, to: Option<usize>) -> Result<Value, Failure> {
    let (name, value) = match hom {
        Hom::Iota => ("iota", json!(homs::iota_sharp(n, w)?)),
        Hom::IotaHat => {
            if n < 3 {
                return Err(Failure::Input("iota-hat needs n >= 3".into()));
            }
            ("iota-hat", json!(homs::iota_hat(n - 2, w)?))
        }
        Hom::Q2 => ("q2", json!(homs::q2_sharp(n, w)?)),
        Hom::Forget => {
            let to = to.unwrap_or(n.saturating_sub(1));
            ("forget", json!(homs::forget_strands(w, n, to)?.to_string()))
        }
        Hom::Abelianize => {
            // The class in P_n(RP2)^Ab = (Z_2)^n, cross-checked against the
            // relation lattice of the presentation.
            let v = homs::iota_sharp(n, w)?;
            let tau_form = w.try_substitute(|g| match g {
                Generator::Rho(k) => homs::rho_from_tau(k, n),
                g => Ok(g.into()),
            })?;
            let p = build_pn_rp2(n)?;
            let trivial = abelian::abelian_image_trivial(&p, &tau_form)?;
            if trivial != v.is_zero() {
                return Err(Failure::Input(format!(
                    "inconsistent abelian image for {w}"
                )));
            }
            ("abelianize", json!(v))
        }
    };
    Ok(json!({ "hom": name, "n": n, "word": w.to_string(), "value": value }))
}

fn invariants_json(inv: &surface_braids::AbelianInvariants) -> Value {
    let mut v = serde_json::to_value(inv).expect("invariants serialize");
    v["invariants"] = json!(inv.to_string());
    v
}

fn abelianize(spec: GroupSpec, text: &str) -> Result<Value, Failure> {
    let inv = match spec {
        GroupSpec::PnRp2 { n } => abelianize_presentation(&build_pn_rp2(n)?),
        GroupSpec::GammaRp2 { m, p } => abelianize_presentation(&build_gamma_rp2(m, p)?),
        GroupSpec::GammaS2 { n, m } => abelianize_presentation(&build_gamma_s2(n, m)?),
        GroupSpec::Ln { n } => abelian::tower_abelianization(&abelian::ln_tower(n)?)?,
    };
    let mut v = invariants_json(&inv);
    v["group"] = json!(text);
    Ok(v)
}

fn info(spec: GroupSpec, text: &str) -> Result<Value, Failure> {
    let mut v = match spec {
        GroupSpec::PnRp2 { n } => presentation_info(build_pn_rp2(n)?),
        GroupSpec::GammaRp2 { m, p } => {
            let mut v = presentation_info(build_gamma_rp2(m, p)?);
            if p == 2 {
                v["tower_ranks"] = json!(combing::gamma_tower_ranks(m + 2)?);
            }
            v
        }
        GroupSpec::GammaS2 { n, m } => presentation_info(build_gamma_s2(n, m)?),
        GroupSpec::Ln { n } => {
            let gens: Vec<String> = combing::ln_generators(n)?
                .iter()
                .map(Word::to_string)
                .collect();
            json!({
                "ambient": format!("gamma-rp2:m={},p=2", n - 2),
                "generator_count": gens.len(),
                "generators": gens,
                "index": 1u64 << (n - 2),
                "tower_ranks": combing::ln_tower_ranks(n)?,
            })
        }
    };
    v["group"] = json!(text);
    Ok(v)
}

fn presentation_info(p: surface_braids::Presentation) -> Value {
    let mut v = p.to_json();
    v["generator_count"] = json!(p.generators.len());
    v["relator_count"] = json!(p.relators.len());
    v
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            println!("{}", json!({ "error": e.kind().to_string() }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            println!("{v}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("sbk: {msg}");
            println!("{}", json!({ "error": msg }));
            ExitCode::from(2)
        }
    }
}
