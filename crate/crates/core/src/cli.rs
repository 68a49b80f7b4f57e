//! Command-line front end. [`run`] returns the exit status and the text to
//! print so the binary stays a thin wrapper.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{cofinal_compact_check, pseudoprop_check};
use crate::catalog::{random_automorphism_group, random_single_generator, rng};
use crate::congruence::congruence_lattice;
use crate::eon::{con_eon_isomorphism, eon_lattice, eon_rule_check, equational_elements, EonMode};
use crate::error::{Error, Result};
use crate::fixtures::{fixture, Fixture, FIXTURE_NAMES};
use crate::instance::{Instance, INPUT_GRAMMAR};
use crate::lattice::FiniteLattice;
use crate::model::{reduction_check, verify_combined, verify_pseudo_lemma, verify_second};
use crate::presentation::{
    present_combined, present_dual_near_leaf, present_first, present_second, reduce_to_one_variable, Presentation,
    PRESENTATION_GRAMMAR,
};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "conlat",
    version,
    about = "Congruence lattices of finite semilattices with operators",
    after_help = INPUT_GRAMMAR
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Bounds and seed shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Seed for randomized sweeps; echoed in every report header.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum size of a generated operator monoid.
    #[arg(long, global = true, default_value_t = crate::monoid::DEFAULT_CLOSURE_BOUND, value_parser = clap::value_parser!(usize))]
    pub closure_bound: usize,
    /// Largest carrier for exhaustive eon enumeration.
    #[arg(long, global = true, default_value_t = crate::eon::DEFAULT_EXHAUSTIVE_BOUND)]
    pub eon_bound: usize,
    /// Largest model carrier for semantic reduction checks.
    #[arg(long, global = true, default_value_t = 4)]
    pub model_size: usize,
    /// Truncation of the `k > 0` schemata of the near-leaf presentation.
    #[arg(long, global = true, default_value_t = crate::presentation::DEFAULT_SCHEMA_BOUND)]
    pub schema_bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Edges,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Semilattice input file.
    pub input: Option<PathBuf>,
    /// Built-in fixture instead of a file.
    #[arg(long, conflicts_with = "input")]
    pub fixture: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Congruence lattice.
    #[command(after_help = "example:\n  conlat con --fixture s22-swap\n  conlat con fixtures/s22_swap.slat --format edges")]
    Con {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Lattice of eon relations.
    #[command(after_help = "example:\n  conlat eon --fixture chain3 --format dot")]
    Eon {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Lattice properties; for an instance also pseudo-one and cofinality reports.
    #[command(after_help = "example:\n  conlat analyze --fixture dual-leaf\n  conlat analyze --fixture omega-4")]
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Ideals as member lists.
    #[command(after_help = "example:\n  conlat ideals --fixture s22-trivial")]
    Ideals {
        #[command(flatten)]
        source: Source,
    },
    /// Emit a quasivariety presentation.
    #[command(after_help = "example:\n  conlat present combined --fixture s22-swap\n  conlat present dual-near-leaf --schema-bound 2")]
    Present {
        style: PresentStyle,
        #[command(flatten)]
        source: Source,
    },
    /// Run a verification suite; prints CHECK lines, exit 1 on any failure.
    #[command(after_help = "example:\n  conlat verify combined --fixture s22-swap\n  conlat verify reduce ctx.pres laws.txt")]
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Randomized checks over seeded instances.
    #[command(after_help = "example:\n  conlat sweep --count 20 --seed 7")]
    Sweep {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
    /// Hasse diagram of the congruence or eon lattice as DOT.
    #[command(after_help = "example:\n  conlat export-dot --fixture s22-swap --lattice eon")]
    ExportDot {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Which::Con)]
        lattice: Which,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    JoinClosure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Con,
    Eon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresentStyle {
    First,
    Second,
    Combined,
    DualNearLeaf,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Combined free-structure pipeline ending in Con(T,Ê) ≅ Con(S,M).
    #[command(after_help = "example:\n  conlat verify combined --fixture s22-swap")]
    Combined(Source),
    /// Second-representation pipeline: Con(T,Ê) ≅ Eon(S).
    #[command(after_help = "example:\n  conlat verify second --fixture chain3")]
    Second(Source),
    /// Con ≅ Eon via θ ↦ θ∩≤, and equational elements.
    #[command(after_help = "example:\n  conlat verify lemma1 --fixture s22-swap")]
    Lemma1(Source),
    /// Principal-eon ordering and join rules (trivial monoid only).
    #[command(name = "eon-rules", after_help = "example:\n  conlat verify eon-rules --fixture s22-trivial")]
    EonRules(Source),
    /// ε̂(θ) ∨ Υ = θ ∨ Υ and Υ = ⋁ ε̂(con(x,w)).
    #[command(name = "pseudo-lemma", after_help = "example:\n  conlat verify pseudo-lemma --fixture s22-swap")]
    PseudoLemma(Source),
    /// One-variable reduction of each law, model-checked against the context.
    #[command(after_help = "example:\n  conlat present combined --fixture s22-swap > ctx.pres\n  conlat verify reduce ctx.pres laws.txt")]
    Reduce { presentation: PathBuf, laws: PathBuf },
}

/// Exit status with captured output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

enum Loaded {
    Instance(Instance),
    Lattice(FiniteLattice),
    Presentation,
}

fn load(source: &Source, cfg: &RunConfig) -> Result<Loaded> {
    match (&source.input, &source.fixture) {
        (Some(path), None) => Ok(Loaded::Instance(Instance::parse(&read(path)?, cfg.closure_bound)?)),
        (None, Some(name)) => Ok(match fixture(name)? {
            Fixture::Instance(i) => Loaded::Instance(i),
            Fixture::Lattice(l) => Loaded::Lattice(l),
            Fixture::Presentation(_) => Loaded::Presentation,
        }),
        _ => Err(Error::Parse {
            line: 0,
            column: 0,
            message: format!("give an input file or --fixture <{}>", FIXTURE_NAMES.join("|")),
        }),
    }
}

fn load_instance(source: &Source, cfg: &RunConfig) -> Result<Instance> {
    match load(source, cfg)? {
        Loaded::Instance(i) => Ok(i),
        _ => Err(Error::Parse {
            line: 0,
            column: 0,
            message: "this command needs a semilattice instance, not a lattice or presentation fixture".into(),
        }),
    }
}

fn render_lattice(l: &FiniteLattice, format: Format, name: &str) -> String {
    match format {
        Format::Text => l.render_elements(),
        Format::Edges => l.render_covers(),
        Format::Dot => l.to_dot(name),
    }
}

fn eon_mode(m: ModeArg) -> EonMode {
    match m {
        ModeArg::Auto => EonMode::Auto,
        ModeArg::Exhaustive => EonMode::Exhaustive,
        ModeArg::JoinClosure => EonMode::JoinClosure,
    }
}

/// Output body and whether every check passed.
fn dispatch(command: &Command, cfg: &RunConfig) -> Result<(String, bool)> {
    let mut out = String::new();
    match command {
        Command::Con { source, format } => {
            let i = load_instance(source, cfg)?;
            let con = congruence_lattice(&i.semilattice, &i.monoid);
            out = render_lattice(&con.lattice, *format, "con");
        }
        Command::Eon { source, format, mode } => {
            let i = load_instance(source, cfg)?;
            let eon = eon_lattice(&i.semilattice, &i.monoid, eon_mode(*mode), cfg.eon_bound)?;
            out = render_lattice(&eon.lattice, *format, "eon");
        }
        Command::Analyze { source, format } => match load(source, cfg)? {
            Loaded::Lattice(l) if *format == Format::Dot => out = l.to_dot("lattice"),
            Loaded::Lattice(l) => out.push_str(&l.properties().render()),
            Loaded::Instance(i) => {
                let (s, m) = (&i.semilattice, &i.monoid);
                let con = congruence_lattice(s, m);
                if *format == Format::Dot {
                    out = con.lattice.to_dot("con");
                } else {
                    let f = m.flags();
                    let _ = writeln!(
                        out,
                        "semilattice_size={}\nmonoid_size={}\nreductive={}\nright_cancellative={}\nis_group={}\nfixes_top={}\ncongruences={}",
                        s.size(),
                        m.len(),
                        f.reductive,
                        f.right_cancellative,
                        f.is_group,
                        f.fixes_top,
                        con.len()
                    );
                    out.push_str(&con.lattice.properties().render());
                    out.push_str(&pseudoprop_check(s, m).render(m));
                    out.push_str(&cofinal_compact_check(s, m).render());
                }
            }
            Loaded::Presentation => {
                return Err(Error::Parse {
                    line: 0,
                    column: 0,
                    message: "analyze takes a lattice or instance".into(),
                })
            }
        },
        Command::Ideals { source } => {
            let i = load_instance(source, cfg)?;
            for ideal in i.semilattice.ideals() {
                let xs: Vec<String> = ideal.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "ideal {{{}}}", xs.join(","));
            }
        }
        Command::Present { style, source } => {
            let p = match style {
                PresentStyle::DualNearLeaf => present_dual_near_leaf(cfg.schema_bound),
                PresentStyle::First => present_first(&load_instance(source, cfg)?.semilattice),
                PresentStyle::Second => present_second(&load_instance(source, cfg)?.semilattice),
                PresentStyle::Combined => {
                    let i = load_instance(source, cfg)?;
                    present_combined(&i.semilattice, &i.monoid)?
                }
            };
            out = p.render();
        }
        Command::Verify { suite } => return verify(suite, cfg),
        Command::Sweep { count, max_size } => return sweep(*count, *max_size, cfg),
        Command::ExportDot { source, lattice } => {
            let i = load_instance(source, cfg)?;
            out = match lattice {
                Which::Con => congruence_lattice(&i.semilattice, &i.monoid).lattice.to_dot("con"),
                Which::Eon => eon_lattice(&i.semilattice, &i.monoid, EonMode::Auto, cfg.eon_bound)?
                    .lattice
                    .to_dot("eon"),
            };
        }
    }
    Ok((out, true))
}

fn lemma1_report(i: &Instance, cfg: &RunConfig) -> Result<Report> {
    let (s, m) = (&i.semilattice, &i.monoid);
    let con = congruence_lattice(s, m);
    let eon = eon_lattice(s, m, EonMode::Auto, cfg.eon_bound)?;
    let mut r = Report::new();
    r.check(
        "lemma1",
        con_eon_isomorphism(s, &con, &eon)
            .err()
            .map(|e| format!("{e} con={} eon={}", con.len(), eon.len())),
    );
    r.check("equational", equational_elements(s, m, &eon).err().map(|e| e.to_string()));
    Ok(r)
}

fn verify(suite: &Suite, cfg: &RunConfig) -> Result<(String, bool)> {
    let report = match suite {
        Suite::Combined(src) => {
            let i = load_instance(src, cfg)?;
            verify_combined(&i.semilattice, &i.monoid)?
        }
        Suite::Second(src) => verify_second(&load_instance(src, cfg)?.semilattice)?,
        Suite::Lemma1(src) => lemma1_report(&load_instance(src, cfg)?, cfg)?,
        Suite::EonRules(src) => {
            let i = load_instance(src, cfg)?;
            let rep = eon_rule_check(&i.semilattice, &i.monoid)?;
            let mut r = Report::new();
            r.check(
                "eon-rules",
                rep.first_failure.clone().map(|w| w.replace('\n', " ")),
            );
            let mut out = format!(
                "membership_checked={}\npairs_checked={}\nfamilies_checked={}\n",
                rep.membership_checked, rep.pairs_checked, rep.families_checked
            );
            out.push_str(&r.render());
            return Ok((out, r.passed()));
        }
        Suite::PseudoLemma(src) => {
            let i = load_instance(src, cfg)?;
            verify_pseudo_lemma(&i.semilattice, &i.monoid)?
        }
        Suite::Reduce { presentation, laws } => {
            let ctx = Presentation::parse(&read(presentation)?)?;
            let laws = ctx.parse_laws(&read(laws)?)?;
            let mut out = String::new();
            for q in &laws {
                let reduced = reduce_to_one_variable(q, &ctx)?;
                let shown: Vec<String> = reduced.iter().map(|l| l.to_string()).collect();
                let _ = writeln!(out, "law {q}\n  => {}", if shown.is_empty() { "(follows from context)".into() } else { shown.join(" ; ") });
            }
            let rep = reduction_check(&ctx, &laws, cfg.model_size)?;
            let _ = writeln!(out, "models={} laws={}", rep.models, rep.laws);
            let mut r = Report::new();
            r.check("reduce", rep.mismatches.first().cloned());
            out.push_str(&r.render());
            return Ok((out, r.passed()));
        }
    };
    Ok((report.render(), report.passed()))
}

fn sweep(count: usize, max_size: usize, cfg: &RunConfig) -> Result<(String, bool)> {
    if max_size == 0 || max_size > 6 {
        return Err(Error::CarrierTooLarge { size: max_size, bound: 6 });
    }
    let mut r = rng(cfg.seed);
    let mut all = Report::new();
    for k in 0..count {
        let single = random_single_generator(&mut r, max_size);
        let rep = lemma1_report(&single, cfg)?;
        all.check(&format!("lemma1-{k}"), rep.checks.iter().find_map(|c| c.witness.clone()));
        let group = random_automorphism_group(&mut r, max_size, 3);
        let mut rep = verify_combined(&group.semilattice, &group.monoid)?;
        rep.extend(verify_pseudo_lemma(&group.semilattice, &group.monoid)?);
        all.check(
            &format!("combined-{k}"),
            rep.checks.iter().find(|c| !c.passed).map(|c| format!("{} {}", c.name, c.witness.clone().unwrap_or_default())),
        );
    }
    Ok((all.render(), all.passed()))
}

fn header(command: &Command, cfg: &RunConfig) -> String {
    let name = match command {
        Command::Con { .. } => "con",
        Command::Eon { .. } => "eon",
        Command::Analyze { .. } => "analyze",
        Command::Ideals { .. } => "ideals",
        Command::Present { .. } => "present",
        Command::Verify { .. } => "verify",
        Command::Sweep { .. } => "sweep",
        Command::ExportDot { .. } => "export-dot",
    };
    let dot = matches!(
        command,
        Command::ExportDot { .. }
            | Command::Con { format: Format::Dot, .. }
            | Command::Eon { format: Format::Dot, .. }
            | Command::Analyze { format: Format::Dot, .. }
    );
    format!("{} conlat {name} seed={}\n", if dot { "//" } else { "#" }, cfg.seed)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("{text}\n{INPUT_GRAMMAR}\n"),
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli.command, &cli.config) {
        Ok((body, passed)) => Outcome {
            code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
            stdout: header(&cli.command, &cli.config) + &body,
            stderr: String::new(),
        },
        Err(e) => {
            let grammar = match &cli.command {
                Command::Verify { suite: Suite::Reduce { .. } } => PRESENTATION_GRAMMAR,
                _ => INPUT_GRAMMAR,
            };
            Outcome {
                code: EXIT_INPUT_ERROR,
                stdout: String::new(),
                stderr: format!("error: {e}\n{grammar}\n"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("conlat").chain(args.iter().copied()))
    }

    #[test]
    fn con_fixture() {
        let o = go(&["con", "--fixture", "s22-swap"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout.lines().filter(|l| l.starts_with("element")).count(), 3);
        assert!(o.stdout.starts_with("# conlat con seed=0\n"));
    }

    #[test]
    fn analyze_dual_leaf() {
        let o = go(&["analyze", "--fixture", "dual-leaf"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("sd_meet=true"));
        assert!(o.stdout.contains("upper_bounded=false"));
    }

    #[test]
    fn bad_input_exits_two() {
        let o = go(&["con", "--fixture", "nope"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("semilattice <n>"));
        assert_eq!(go(&["frobnicate"]).code, 2);
    }

    #[test]
    fn eon_rules_refuse_operators() {
        assert_eq!(go(&["verify", "eon-rules", "--fixture", "s22-swap"]).code, 2);
        assert_eq!(go(&["verify", "eon-rules", "--fixture", "chain3"]).code, 0);
    }
}
