//! Command-line front end.
//!
//! Exit codes: 0 when every requested verdict holds, 1 when a check fails,
//! 2 on input errors (unknown target, malformed file, bad flags, a structure
//! that fails validation).

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use curvlab_core::chart::{sample, SampleSet};
use curvlab_core::constructions::{check_submersion_lift, lookup, Target, TARGETS};
use curvlab_core::identities::{
    self, check_c_alpha, check_contact, check_hermitian, consequence_suite, default_samples, ContactKind, Gray,
    Identity,
};
use curvlab_core::structures::{
    check_kappa_mu, classify, hermitian_evaluations, validate, validate_hermitian, AlmostContactStructure,
    AlmostHermitianStructure,
};

use crate::manifold::parse_manifold;
use crate::report::{Check, Report};

#[derive(Debug, Parser)]
#[command(name = "curvlab", version, about = "Curvature identities of almost contact and almost Hermitian structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in targets.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Validate the structure and run the contact-geometry tests.
    Classify(RunArgs),
    /// Sweep curvature identities.
    Identities {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated subset of g1,g2,g3,k1,k2,k3,c(a),classify,consequences,kappa-mu(k,m).
        #[arg(long)]
        which: Option<String>,
    },
    /// Everything applicable to the target.
    Report(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Registry name (see `list`) or path to a manifold file.
    pub target: String,
    /// Sample points for chart carriers.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, env = "CURVLAB_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-7, value_parser = positive)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

/// One entry of `--which`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Request {
    Contact(ContactKind),
    Gray(Gray),
    CAlpha(f64),
    Classify,
    Consequences,
    KappaMu(f64, f64),
}

fn numbers(args: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v = args
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| anyhow!("bad number {a:?} in {what}")))
        .collect::<Result<Vec<f64>>>()?;
    if v.len() != n {
        bail!("{what} takes {n} argument(s)");
    }
    Ok(v)
}

impl Request {
    pub fn parse(item: &str) -> Result<Request> {
        let item = item.trim();
        let call = |name: &str| item.strip_prefix(name).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
        Ok(match item {
            "g1" => Request::Contact(ContactKind::G1),
            "g2" => Request::Contact(ContactKind::G2),
            "g3" => Request::Contact(ContactKind::G3),
            "k1" => Request::Gray(Gray::K1),
            "k2" => Request::Gray(Gray::K2),
            "k3" => Request::Gray(Gray::K3),
            "classify" => Request::Classify,
            "consequences" => Request::Consequences,
            _ => {
                if let Some(a) = call("c") {
                    Request::CAlpha(numbers(a, 1, "c(alpha)")?[0])
                } else if let Some(a) = call("kappa-mu") {
                    let v = numbers(a, 2, "kappa-mu(kappa,mu)")?;
                    Request::KappaMu(v[0], v[1])
                } else {
                    bail!("unknown check {item:?}");
                }
            }
        })
    }

    /// Splits a `--which` list on the commas outside parentheses.
    pub fn parse_list(list: &str) -> Result<Vec<Request>> {
        let mut out = Vec::new();
        let (mut depth, mut start) = (0usize, 0);
        for (i, c) in list.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.checked_sub(1).ok_or_else(|| anyhow!("unbalanced ')' in {list:?}"))?,
                ',' if depth == 0 => {
                    out.push(Request::parse(&list[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            bail!("unbalanced '(' in {list:?}");
        }
        out.push(Request::parse(&list[start..])?);
        Ok(out)
    }
}

/// Everything a run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub target: String,
    pub checks: Vec<Request>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

/// A registry name or a manifold file path.
pub fn resolve(target: &str) -> Result<Target> {
    let path = Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {target}"))?;
        return parse_manifold(&text).with_context(|| format!("malformed manifold file {target}"));
    }
    Ok(lookup(target)?)
}

enum Carrier {
    Contact(AlmostContactStructure),
    Hermitian(AlmostHermitianStructure),
}

fn carrier(t: &Target) -> Carrier {
    match t {
        Target::Hermitian(h) => Carrier::Hermitian(h.clone()),
        other => Carrier::Contact(other.contact().expect("contact-carrying target")),
    }
}

fn default_checks(t: &Target) -> Vec<Request> {
    match t {
        Target::Hermitian(_) => vec![Request::Gray(Gray::K1), Request::Gray(Gray::K2), Request::Gray(Gray::K3)],
        _ => ContactKind::ALL.iter().map(|&k| Request::Contact(k)).collect(),
    }
}

struct Runner {
    carrier: Carrier,
    samples: SampleSet,
    tol: f64,
}

impl Runner {
    fn new(t: &Target, cfg: &RunConfig) -> Result<Runner> {
        let carrier = carrier(t);
        let samples = match &carrier {
            Carrier::Contact(s) => default_samples(s, cfg.samples, cfg.seed)?,
            Carrier::Hermitian(h) => sample(&h.chart, cfg.samples, 20, cfg.seed)?,
        };
        Ok(Runner { carrier, samples, tol: cfg.tolerance })
    }

    fn validation(&self) -> Result<Vec<Check>> {
        let rep = match &self.carrier {
            Carrier::Contact(s) => validate(s, &self.samples, self.tol)?,
            Carrier::Hermitian(h) => validate_hermitian(h, &self.samples, self.tol)?,
        };
        if let Some(bad) = rep.entries.iter().find(|e| !e.verdict) {
            bail!("structure fails validation: {} residual {:e}", bad.tag, bad.residual);
        }
        Ok(rep.entries.iter().map(Check::from).collect())
    }

    fn contact(&self, what: &str) -> Result<&AlmostContactStructure> {
        match &self.carrier {
            Carrier::Contact(s) => Ok(s),
            Carrier::Hermitian(_) => bail!("{what} needs an almost contact target"),
        }
    }

    fn run(&self, req: Request, checks: &mut Vec<Check>, notes: &mut Vec<String>) -> Result<()> {
        let tol = self.tol;
        match req {
            Request::Contact(k) => {
                let s = self.contact(&format!("{k:?}").to_lowercase())?;
                checks.push((&check_contact(s, k, &self.samples, tol)?).into());
            }
            Request::Gray(g) => {
                let Carrier::Hermitian(h) = &self.carrier else {
                    bail!("{} needs an almost Hermitian target", format!("{g:?}").to_lowercase());
                };
                checks.push((&check_hermitian(h, g, &self.samples, tol)?).into());
            }
            Request::CAlpha(a) => {
                let s = self.contact("c(alpha)")?;
                checks.push((&check_c_alpha(s, a, &self.samples, tol)?).into());
            }
            Request::KappaMu(k, m) => {
                let s = self.contact("kappa-mu")?;
                checks.push((&check_kappa_mu(s, k, m, &self.samples, tol)?).into());
            }
            Request::Consequences => {
                let s = self.contact("consequences")?;
                for kind in ContactKind::ALL {
                    for r in consequence_suite(s, kind, &self.samples, tol)? {
                        if !checks.iter().any(|c| c.tag == r.tag) {
                            checks.push((&r).into());
                        }
                    }
                }
            }
            Request::Classify => match &self.carrier {
                Carrier::Contact(s) => {
                    let c = classify(s, &self.samples, tol)?;
                    checks.extend(c.checks().iter().map(|r| Check::from(*r)));
                    let mut ric = Check::plain("ric_xi_xi_2n", c.ric_xi_xi_deviation, c.ric_matches_2n());
                    ric.exact = c.ric_xi_xi_exact.map(|r| (r - curvlab_core::scalar::ratio(c.two_n as i128, 1)).to_string());
                    checks.push(ric);
                    let ric_value = match c.ric_xi_xi_exact {
                        Some(r) => r.to_string(),
                        None => format!("{:.6}", c.ric_xi_xi),
                    };
                    notes.push(format!("contact form: {}", c.is_contact_form()));
                    notes.push(format!("contact metric: {}", c.is_contact_metric()));
                    notes.push(format!("K-contact: {}", c.is_k_contact()));
                    notes.push(format!("Sasakian: {}", c.is_sasakian()));
                    notes.push(format!("Ric(xi, xi) = {ric_value} (2n = {})", c.two_n));
                }
                Carrier::Hermitian(h) => {
                    let set = hermitian_evaluations(h, &self.samples)?;
                    let mut r = identities::run(&set, &Identity::ParallelPhi, tol)?;
                    r.tag = "kaehler".into();
                    notes.push(format!("Kaehler: {}", r.verdict));
                    checks.push((&r).into());
                }
            },
        }
        Ok(())
    }
}

/// Runs `requests` against `target` after validating it.
pub fn run_checks(t: &Target, cfg: &RunConfig, include_validation: bool) -> Result<Report> {
    let runner = Runner::new(t, cfg)?;
    let validation = runner.validation()?;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    if include_validation {
        checks.extend(validation);
    }
    for req in &cfg.checks {
        runner.run(*req, &mut checks, &mut notes)?;
    }
    Ok(Report { target: cfg.target.clone(), seed: cfg.seed, tolerance: cfg.tolerance, checks, notes })
}

fn config(args: &RunArgs, checks: Vec<Request>) -> RunConfig {
    RunConfig {
        target: args.target.clone(),
        checks,
        samples: args.samples as usize,
        seed: args.seed,
        tolerance: args.tol,
    }
}

fn emit(out: &mut dyn Write, rep: &Report, json: bool) -> Result<()> {
    let text = if json { rep.to_json() } else { rep.to_table() };
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Runs a parsed command line; returns the process exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::List { json } => {
            if json {
                let items: Vec<_> = TARGETS
                    .iter()
                    .map(|(n, d)| serde_json::json!({ "name": n, "description": d }))
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&items)?)?;
            } else {
                let w = TARGETS.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
                for (n, d) in TARGETS {
                    writeln!(out, "{n:<w$}  {d}")?;
                }
            }
            Ok(0)
        }
        Command::Classify(args) => {
            let t = resolve(&args.target)?;
            let rep = run_checks(&t, &config(&args, vec![Request::Classify]), true)?;
            emit(out, &rep, args.json)?;
            Ok(0)
        }
        Command::Identities { run, which } => {
            let t = resolve(&run.target)?;
            let checks = match which {
                Some(w) => Request::parse_list(&w)?,
                None => default_checks(&t),
            };
            let rep = run_checks(&t, &config(&run, checks), false)?;
            emit(out, &rep, run.json)?;
            Ok(if rep.all_pass() { 0 } else { 1 })
        }
        Command::Report(args) => {
            let t = resolve(&args.target)?;
            let mut checks = vec![Request::Classify];
            checks.extend(default_checks(&t));
            if !matches!(t, Target::Hermitian(_)) {
                checks.push(Request::Consequences);
            }
            let cfg = config(&args, checks);
            let mut rep = run_checks(&t, &cfg, true)?;
            if let Target::Submersion(sp) = &t {
                let samples = default_samples(&sp.contact(), cfg.samples, cfg.seed)?;
                let lift = check_submersion_lift(sp, &samples, cfg.tolerance)?;
                for (name, v) in lift.entries() {
                    rep.checks.push(Check::plain(format!("lift_{name}"), v, v <= lift.tolerance));
                }
            }
            emit(out, &rep, args.json)?;
            Ok(0)
        }
    }
}

/// Parses `args` and runs; errors go to stderr with exit code 2.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
