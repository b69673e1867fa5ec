use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use balltheory::catalog::{catalog, generators, Family, GroupSpec};
use balltheory::gpt::mform_solve;
use balltheory::irreps::{enumerate_irreps, verify_lemma, Series};
use balltheory::linalg::{commutator, MatrixJson};
use balltheory::nogo::{construct, quantum_positive_check, refute, Construction, Outcome, Tolerances};
use balltheory::par::Execution;
use balltheory::sampling::{gaussian_matrix, stream};
use balltheory::suite::{local_constraints, run_all, SuiteConfig};
use balltheory::transitivity::{commutant, monte_carlo_twirl, transitivity_certificate, Constraint, Twirl};
use balltheory::Error;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "balltheory", version)]
#[command(about = "Seeded numerical checks for bipartite dynamics of ball state spaces")]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, env = "BALLTHEORY_SEED", default_value_t = 0)]
    seed: u64,

    /// Sampled tuples per suite (transitivity uses it as the number of random points).
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Residuals at or below this are consistent.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Violations above this refute.
    #[arg(long = "tol-refute", global = true, default_value_t = 1e-6)]
    tol_refute: f64,

    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Emit a human summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Run the data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct GroupArgs {
    #[arg(long)]
    family: String,
    /// Defaults to the smallest admissible dimension.
    #[arg(long)]
    d: Option<usize>,
}

impl GroupArgs {
    fn spec(&self) -> balltheory::Result<GroupSpec> {
        let family: Family = self.family.parse()?;
        match self.d {
            Some(d) => GroupSpec::new(family, d),
            None => Ok(GroupSpec::smallest(family)),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConstructArg {
    Interacting,
    Local,
    Bracket,
    Random,
}

impl From<ConstructArg> for Construction {
    fn from(c: ConstructArg) -> Self {
        match c {
            ConstructArg::Interacting => Construction::Interacting,
            ConstructArg::Local => Construction::Local,
            ConstructArg::Bracket => Construction::Bracket,
            ConstructArg::Random => Construction::Random,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Refuted,
    Consistent,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every group of the classification with d <= cap.
    Catalog {
        #[arg(long, default_value_t = 16)]
        cap: usize,
    },
    /// Tangent-span certificate at e1 and at random points.
    Transitivity(GroupArgs),
    /// Commutant dimensions and the admissible M forms.
    Commutant(GroupArgs),
    /// Exact twirl of a random matrix against a Monte-Carlo average.
    TwirlDemo(GroupArgs),
    /// First- and second-order constraint suite on local generators.
    Constraints(GroupArgs),
    /// Run the family's refutation on a constructed or supplied generator.
    Refute {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "interacting", conflicts_with = "input")]
        construct: ConstructArg,
        /// JSON matrix `{"rows", "cols", "entries"}` in (1, b, a, c) order.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Expected outcome; defaults to consistent for local generators and
        /// supplied matrices, refuted otherwise.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Constraint suite for the adjoint SU(4) dynamics of two qubits.
    Quantum,
    /// Weyl-dimension enumeration and the uniqueness lemmas.
    Irreps {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lemma: bool,
        #[arg(long = "max-dim", default_value_t = 64)]
        max_dim: u64,
    },
    /// Every acceptance section in one deterministic report.
    All,
}

struct VerbOutput {
    report: Value,
    text: String,
    ok: bool,
}

fn summary(report: Value, text: String, ok: bool) -> VerbOutput {
    VerbOutput { report, text, ok }
}

fn run(cli: &Cli) -> anyhow::Result<VerbOutput> {
    let tol = Tolerances::new(cli.tol, cli.tol_refute)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let seed = cli.seed;
    if cli.samples == Some(0) {
        return Err(Error::Precondition("--samples must be at least 1".into()).into());
    }
    let samples = cli.samples.unwrap_or(10_000);
    Ok(match &cli.command {
        Command::Catalog { cap } => {
            let entries = catalog(*cap);
            let text = entries
                .iter()
                .map(|e| format!("{:<8} d={:<3} dim={}", e.family.name(), e.d, e.algebra_dim))
                .collect::<Vec<_>>()
                .join("\n");
            summary(json!({ "cap": cap, "groups": entries }), text, true)
        }
        Command::Transitivity(g) => {
            let spec = g.spec()?;
            let trials = cli.samples.unwrap_or(10);
            let r = transitivity_certificate(&spec, trials, seed)?;
            let text = format!(
                "{spec}: {} points, span dims {:?} -> {}",
                r.checks.len(),
                r.checks.iter().map(|c| c.span_dim).collect::<Vec<_>>(),
                if r.pass { "transitive" } else { "NOT transitive" }
            );
            let ok = r.pass;
            summary(json!({ "seed": seed, "report": r }), text, ok)
        }
        Command::Commutant(g) => {
            let spec = g.spec()?;
            let h = generators(&spec)?;
            let dims: Vec<(Constraint, usize)> =
                [Constraint::All, Constraint::Symmetric, Constraint::Antisymmetric]
                    .into_iter()
                    .map(|c| (c, commutant(&h, c).dim()))
                    .collect();
            let sol = mform_solve(&h)?;
            let text = format!(
                "{spec}: commutant all/sym/antisym = {}/{}/{}; pair symmetric dim {}",
                dims[0].1, dims[1].1, dims[2].1, sol.pair_symmetric_dim
            );
            summary(
                json!({
                    "group": spec,
                    "all": dims[0].1,
                    "symmetric": dims[1].1,
                    "antisymmetric": dims[2].1,
                    "mform": sol,
                }),
                text,
                true,
            )
        }
        Command::TwirlDemo(g) => {
            let spec = g.spec()?;
            let h = generators(&spec)?;
            let z = gaussian_matrix(&mut stream(seed, 0), spec.d, spec.d);
            let tw = Twirl::new(&h)?;
            let t = tw.apply(&z)?;
            let idem = (tw.apply(&t)? - &t).norm();
            let inv = h
                .generators
                .iter()
                .map(|x| commutator(x, &t).norm())
                .fold(0.0, f64::max);
            let mc_samples = cli.samples.unwrap_or(10_000);
            let mc = monte_carlo_twirl(&z, &h, mc_samples, seed, exec);
            let mc_diff = (&mc - &t).norm();
            let ok = idem <= tol.consistent && inv <= tol.consistent;
            let text = format!(
                "{spec}: idempotence {idem:e}, invariance {inv:e}, Monte-Carlo ({mc_samples}) distance {mc_diff:.3e}"
            );
            summary(
                json!({
                    "group": spec,
                    "seed": seed,
                    "commutant_dim": tw.commutant.dim(),
                    "input": MatrixJson::from(&z),
                    "twirl": MatrixJson::from(&t),
                    "idempotence_residual": idem,
                    "invariance_residual": inv,
                    "monte_carlo_samples": mc_samples,
                    "monte_carlo_distance": mc_diff,
                    "pass": ok,
                }),
                text,
                ok,
            )
        }
        Command::Constraints(g) => {
            let spec = g.spec()?;
            let reports = local_constraints(&spec, samples, seed, exec)?;
            let ok = reports.iter().all(|r| r.pass);
            let text = reports
                .iter()
                .map(|r| {
                    format!(
                        "{}: max residual {:e} -> {}",
                        r.check,
                        r.max_residual,
                        pass_word(r.pass)
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            summary(json!({ "group": spec, "reports": reports }), text, ok)
        }
        Command::Refute {
            group,
            construct: kind,
            input,
            expect,
        } => {
            let spec = group.spec()?;
            let (w, source, default_expect) = match input {
                Some(path) => {
                    let raw = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let m: MatrixJson = serde_json::from_str(&raw).map_err(Error::from)?;
                    (
                        m.to_matrix()?,
                        format!("file:{}", path.display()),
                        Expect::Consistent,
                    )
                }
                None => {
                    let c = Construction::from(*kind);
                    let e = if c == Construction::Local {
                        Expect::Consistent
                    } else {
                        Expect::Refuted
                    };
                    (construct(&spec, c, seed)?, format!("{c:?}").to_lowercase(), e)
                }
            };
            let expect = expect.unwrap_or(default_expect);
            let r = refute(&spec, &w, tol)?;
            let got = if r.outcome == Outcome::Refuted {
                Expect::Refuted
            } else {
                Expect::Consistent
            };
            let ok = got == expect;
            let text = match &r.witness {
                Some(wit) => format!(
                    "{spec} [{source}]: refuted at {} (target {:?}, axis {}) with violation {:e}",
                    wit.step.label(),
                    wit.target,
                    wit.axis,
                    wit.violation
                ),
                None => format!("{spec} [{source}]: consistent, residual {:e}", r.residual),
            };
            summary(
                json!({
                    "source": source,
                    "seed": seed,
                    "expected": if expect == Expect::Refuted { "refuted" } else { "consistent" },
                    "report": r,
                }),
                text,
                ok,
            )
        }
        Command::Quantum => {
            let r = quantum_positive_check(samples, seed, exec)?;
            let text = format!(
                "{}: max residual {:e} -> {}",
                r.check,
                r.max_residual,
                pass_word(r.pass)
            );
            let ok = r.pass;
            summary(serde_json::to_value(r)?, text, ok)
        }
        Command::Irreps {
            family,
            n,
            lemma,
            max_dim,
        } => {
            let series: Series = family.parse()?;
            if *lemma {
                let reports = verify_lemma(series, *n)?;
                let text = reports
                    .iter()
                    .map(|r| r.statement.clone())
                    .collect::<Vec<_>>()
                    .join("\n");
                summary(json!({ "series": series, "n": n, "lemmas": reports }), text, true)
            } else {
                let entries = enumerate_irreps(series, *n, *max_dim)?;
                let text = entries
                    .iter()
                    .map(|e| format!("{:>8}  {}", e.dim, e.weight))
                    .collect::<Vec<_>>()
                    .join("\n");
                summary(
                    json!({ "series": series, "n": n, "max_dim": max_dim, "irreps": entries }),
                    text,
                    true,
                )
            }
        }
        Command::All => {
            let r = run_all(&SuiteConfig {
                seed,
                samples,
                tol,
                exec,
            })?;
            let text = r
                .sections
                .iter()
                .map(|s| {
                    format!(
                        "[{}] {:<20} {}  {}",
                        s.criterion,
                        s.name,
                        pass_word(s.pass),
                        s.summary
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let ok = r.pass;
            summary(serde_json::to_value(r)?, text, ok)
        }
    })
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Writes through a sibling temp file so readers never see a partial report.
fn write_atomic(path: &Path, body: &str) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, body).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn exit_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Inconclusive { .. }) => EXIT_INCONCLUSIVE,
        Some(
            Error::InvalidGroup { .. }
            | Error::InvalidAxis { .. }
            | Error::Precondition(_)
            | Error::DimensionMismatch(_)
            | Error::NotAntisymmetric(_)
            | Error::Json(_),
        ) => EXIT_USAGE,
        _ => EXIT_VIOLATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(err) => {
            eprintln!("balltheory: {err:#}");
            return ExitCode::from(exit_for(&err));
        }
    };
    let body = if cli.text {
        format!("{}\n", out.text)
    } else {
        match serde_json::to_string_pretty(&out.report) {
            Ok(s) => format!("{s}\n"),
            Err(e) => {
                eprintln!("balltheory: {e}");
                return ExitCode::from(EXIT_VIOLATION);
            }
        }
    };
    let written = match &cli.out {
        Some(path) => write_atomic(path, &body),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("balltheory: {e:#}");
        return ExitCode::from(EXIT_VIOLATION);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}
