//! The `profound` command line: every engine on JSON inputs, one JSON report out.
//!
//! Exit codes: 0 when every verdict passes, 1 when some verdict fails, 2 on
//! malformed input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::degen::{self, DegenerationFixture};
use crate::error::{Error, Result};
use crate::k3::{self, BilinearLattice};
use crate::lefschetz::{self, Direction, TwistWord};
use crate::linalg::{image, kernel, Filtration, Matrix};
use crate::mwf::{mwf_violation, weight_filtration, NilpotentEndo};
use crate::pw::{self, PwFixture};
use crate::snc::{self, SncFixture};

#[derive(Debug, Parser)]
#[command(name = "profound", version, about = "Weight filtrations, profound tori and P = W checks in exact arithmetic")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monodromy weight filtration of a nilpotent matrix.
    Mwf {
        /// JSON matrix, or {"matrix": .., "center": ..}.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<i64>,
    },
    /// Strata, profound tori, connectivity condition and weight table of an snc fixture.
    Snc {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Duality, torus-kernel and torus-span statements for a degeneration fixture.
    Degen {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// The operator N_{β,ρ} on a lattice and the P = W check.
    K3(K3Args),
    /// Twist word operations.
    Lefschetz {
        #[arg(value_enum)]
        op: WordOp,
        /// JSON array of 2x2 matrices or {"s":..,"t":..} pairs, or a path to one.
        #[arg(long)]
        word: String,
        /// 1-based position of the first letter moved (hurwitz).
        #[arg(long, default_value_t = 1)]
        position: usize,
        #[arg(long, value_enum, default_value_t = DirArg::Right)]
        direction: DirArg,
    },
    /// Perverse filtration of a fibered surface against a weight filtration.
    Pw {
        #[arg(long)]
        fixture: PathBuf,
        /// Snc fixture whose weight table supplies W in a weight-adapted basis.
        #[arg(long)]
        snc: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct K3Args {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: String,
    /// Search for β orthogonal to α when --beta is absent.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub bound: u32,
    /// K3, U, U<m>, E8-, or a path to a JSON Gram matrix.
    #[arg(long, default_value = "K3")]
    pub lattice: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WordOp {
    Product,
    Hurwitz,
    Invert,
    Complete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirArg {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Verdict {
    fn new(check: impl Into<String>, pass: bool, witness: impl Serialize) -> Self {
        let witness = (!pass).then(|| serde_json::to_value(witness).expect("serializable witness"));
        Verdict { check: check.into(), pass, witness }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inputs {
    pub sources: Vec<String>,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Inputs,
    pub verdicts: Vec<Verdict>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Collects input bytes for the digest and attaches locations to errors.
#[derive(Default)]
struct InputLog {
    sources: Vec<String>,
    hasher: Sha256,
}

impl InputLog {
    fn value(&mut self, name: &str, v: &str) {
        self.sources.push(format!("{name}={v}"));
        self.hasher.update(name.as_bytes());
        self.hasher.update([0]);
        self.hasher.update(v.as_bytes());
        self.hasher.update([0]);
    }

    fn file(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        self.sources.push(path.display().to_string());
        self.hasher.update(path.display().to_string().as_bytes());
        self.hasher.update([0]);
        self.hasher.update(text.as_bytes());
        self.hasher.update([0]);
        Ok(text)
    }

    fn json<T: for<'de> Deserialize<'de>>(&mut self, path: &Path) -> Result<T> {
        let text = self.file(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    fn finish(self) -> Inputs {
        let digest = self.hasher.finalize();
        Inputs { sources: self.sources, sha256: digest.iter().map(|b| format!("{b:02x}")).collect() }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Mwf { .. } => "mwf".into(),
        Command::Snc { .. } => "snc".into(),
        Command::Degen { .. } => "degen".into(),
        Command::K3(_) => "k3".into(),
        Command::Lefschetz { op, .. } => format!("lefschetz {}", op.to_possible_value().expect("named").get_name()),
        Command::Pw { .. } => "pw".into(),
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Report {
    let mut log = InputLog::default();
    let outcome = dispatch(&cli.command, &mut log);
    let command = command_name(&cli.command);
    let inputs = log.finish();
    match outcome {
        Ok((verdicts, result)) => {
            let exit_code = if verdicts.iter().all(|v| v.pass) { 0 } else { 1 };
            Report { command, inputs, verdicts, result, error: None, exit_code }
        }
        Err(e) => Report { command, inputs, verdicts: Vec::new(), result: Value::Null, error: Some(e.to_string()), exit_code: 2 },
    }
}

/// Parses `argv` (program name first) and runs it. Usage errors give exit code 2
/// with clap's message in `error`; `--help` and `--version` are usage errors here too.
pub fn run<I, T>(argv: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(&cli),
        Err(e) => Report {
            command: String::new(),
            inputs: InputLog::default().finish(),
            verdicts: Vec::new(),
            result: Value::Null,
            error: Some(e.to_string()),
            exit_code: 2,
        },
    }
}

type Outcome = Result<(Vec<Verdict>, Value)>;

fn dispatch(c: &Command, log: &mut InputLog) -> Outcome {
    match c {
        Command::Mwf { matrix, center } => run_mwf(matrix, *center, log),
        Command::Snc { fixture } => run_snc(fixture, log),
        Command::Degen { fixture } => run_degen(fixture, log),
        Command::K3(args) => run_k3(args, log),
        Command::Lefschetz { op, word, position, direction } => run_lefschetz(*op, word, *position, *direction, log),
        Command::Pw { fixture, snc } => run_pw(fixture, snc.as_deref(), log),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Bare(Matrix),
    Tagged { matrix: Matrix, center: Option<i64> },
}

fn endpoint_verdict(n: &NilpotentEndo, m: &Filtration) -> Verdict {
    let k = n.center();
    let l = n.nilpotency_index().saturating_sub(1);
    let nl = n.power(l);
    let li = i64::from(l);
    let low_ok = m.get(k - li) == &image(&nl);
    let high_ok = m.get(k + li - 1) == &kernel(&nl);
    Verdict::new(
        "monfilt_endpoints",
        low_ok && high_ok,
        json!({"l": l, "low_holds": low_ok, "high_holds": high_ok}),
    )
}

fn run_mwf(path: &Path, center: Option<i64>, log: &mut InputLog) -> Outcome {
    let input: MatrixInput = log.json(path)?;
    let (matrix, file_center) = match input {
        MatrixInput::Bare(m) => (m, None),
        MatrixInput::Tagged { matrix, center } => (matrix, center),
    };
    if let Some(c) = center {
        log.value("center", &c.to_string());
    }
    let center = center
        .or(file_center)
        .ok_or_else(|| Error::Parse(format!("{}: no center given (use --center)", path.display())))?;
    let n = NilpotentEndo::new(matrix, center)?;
    let m = weight_filtration(&n);
    let violation = mwf_violation(&n, &m)?;
    let verdicts = vec![Verdict::new("mwf_axioms", violation.is_none(), &violation), endpoint_verdict(&n, &m)];
    let result = json!({
        "center": center,
        "nilpotency_index": n.nilpotency_index(),
        "filtration": m,
    });
    Ok((verdicts, result))
}

fn run_snc(path: &Path, log: &mut InputLog) -> Outcome {
    let fixture: SncFixture = log.json(path)?;
    let pair = fixture.pair()?;
    let strat = snc::stratify(pair.nerve());
    let star = snc::check_star_condition(&pair);
    let mut verdicts = vec![Verdict::new("star_condition", star.holds, &star)];
    let mut result = json!({
        "minimal_strata": strat.minimal_strata,
        "profound_tori": strat.profound_tori,
        "delta": strat.delta,
        "log_cy": pair.is_log_cy(),
    });
    if let Some(coh) = fixture.cohomology(pair.nerve())? {
        let ss = snc::weight_spectral_sequence(&pair, &coh)?;
        let table = ss.weight_table();
        let euler_ok = ss.e1_euler_characteristic() == table.euler_characteristic();
        verdicts.push(Verdict::new("euler_characteristic", euler_ok, json!({
            "e1": ss.e1_euler_characteristic(),
            "e2": table.euler_characteristic(),
        })));
        verdicts.push(Verdict::new("weights_in_range", table.weights_in_range(), table));
        if pair.is_log_cy() || star.holds {
            let bound = snc::bound_report(table, strat.delta);
            verdicts.push(Verdict::new("weight_bound", bound.holds, &bound));
        }
        result["weight_table"] = serde_json::to_value(table).expect("serializable");
    }
    Ok((verdicts, result))
}

fn run_degen(path: &Path, log: &mut InputLog) -> Outcome {
    let fixture: DegenerationFixture = log.json(path)?;
    let deg = fixture.degeneration()?;
    let d = deg.relative_dim();
    let mut verdicts = Vec::new();
    let mut filtrations = BTreeMap::new();
    for k in 0..=2 * d {
        if let Ok(m) = deg.limit_filtration(k) {
            filtrations.insert(k.to_string(), m.graded_dims().into_iter().map(|(j, n)| (j.to_string(), n)).collect::<BTreeMap<_, _>>());
        }
    }
    for k in 0..=d {
        match degen::duality_report(&deg, k) {
            Ok(r) => verdicts.push(Verdict::new(format!("duality_{k}"), r.holds, &r)),
            Err(Error::MissingData(_)) => {}
            Err(e) => return Err(e),
        }
    }
    for k in 0..=2 * d {
        if deg.restriction(k).is_ok() {
            let r = degen::maincy_report(&deg, k)?;
            verdicts.push(Verdict::new(format!("torus_kernel_{k}"), r.holds, &r));
        }
    }
    for k in 0..=2 * d {
        let Ok(s) = deg.homology_log(k) else { continue };
        if let Some(classes) = fixture.torus_classes(k, s.rows()) {
            let r = degen::torus_span_report(&deg, k, &classes?)?;
            verdicts.push(Verdict::new(format!("torus_span_{k}"), r.holds, &r));
        }
    }
    let result = json!({
        "d": d,
        "delta": deg.delta(),
        "limit_graded_dims": filtrations,
    });
    Ok((verdicts, result))
}

fn lattice_from_arg(name: &str, log: &mut InputLog) -> Result<BilinearLattice> {
    match BilinearLattice::named(name) {
        Ok(l) => {
            log.value("lattice", name);
            Ok(l)
        }
        Err(_) if Path::new(name).exists() => BilinearLattice::from_gram(log.json(Path::new(name))?),
        Err(e) => Err(e),
    }
}

fn run_k3(args: &K3Args, log: &mut InputLog) -> Outcome {
    let l = lattice_from_arg(&args.lattice, log)?;
    log.value("rho", &args.rho);
    let rho = l.parse_vector(&args.rho)?;
    let mut result = json!({});
    let beta = match (&args.beta, &args.alpha) {
        (Some(b), _) => {
            log.value("beta", b);
            l.parse_vector(b)?
        }
        (None, Some(a)) => {
            log.value("alpha", a);
            log.value("bound", &args.bound.to_string());
            let alpha = l.parse_vector(a)?;
            let found = k3::find_isotropic_orthogonal(&l, &alpha, args.bound)?;
            found.ok_or_else(|| {
                Error::PreconditionViolated(format!("no isotropic β ⊥ α with coordinates bounded by {}", args.bound))
            })?
        }
        (None, None) => return Err(Error::Parse("one of --beta or --alpha is required".into())),
    };
    let n = k3::n_beta_rho(&l, &beta, &rho)?;
    let mwf = weight_filtration(&NilpotentEndo::new(n.clone(), 2)?);
    let report = k3::k3_pw_report(&l, &beta, &rho)?;
    let cube_zero = n.pow(3)?.is_zero();
    let verdicts = vec![
        Verdict::new("n_cubed_zero", cube_zero, json!(null)),
        Verdict::new("mprime_is_weight_filtration", mwf == report.mprime, json!({"weight_filtration": mwf})),
        Verdict::new("perverse_equals_weight", report.holds, &report),
        Verdict::new("perverse_self_dual", report.perverse_self_dual, &report.perverse),
    ];
    result["beta"] = json!(l.format_vector(&beta));
    result["rho"] = json!(l.format_vector(&rho));
    result["mprime_graded_dims"] = json!(report.mprime.graded_dims_between(0, 4));
    result["mprime"] = serde_json::to_value(&report.mprime).expect("serializable");
    Ok((verdicts, result))
}

fn read_word(arg: &str, log: &mut InputLog) -> Result<TwistWord> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') {
        log.value("word", arg);
        lefschetz::parse_word(arg)
    } else {
        let text = log.file(Path::new(arg))?;
        lefschetz::parse_word(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    }
}

fn word_json(w: &TwistWord) -> Value {
    json!({
        "length": w.len(),
        "letters": w,
        "params": w.params().iter().map(|(s, t)| json!({"s": s.to_string(), "t": t.to_string()})).collect::<Vec<_>>(),
        "product": lefschetz::total_monodromy(w),
    })
}

fn run_lefschetz(op: WordOp, word: &str, position: usize, dir: DirArg, log: &mut InputLog) -> Outcome {
    let w = read_word(word, log)?;
    let product = lefschetz::total_monodromy(&w);
    match op {
        WordOp::Product => Ok((Vec::new(), json!({"word": word_json(&w)}))),
        WordOp::Hurwitz => {
            log.value("position", &position.to_string());
            let direction = match dir {
                DirArg::Left => Direction::Left,
                DirArg::Right => Direction::Right,
            };
            log.value("direction", if direction == Direction::Left { "left" } else { "right" });
            if position == 0 {
                return Err(Error::PositionOutOfRange { pos: 0, len: w.len() });
            }
            let moved = lefschetz::hurwitz_move(&w, position - 1, direction)?;
            let after = lefschetz::total_monodromy(&moved);
            let verdicts = vec![Verdict::new("monodromy_preserved", after == product, json!({"before": product, "after": after}))];
            Ok((verdicts, json!({"word": word_json(&moved)})))
        }
        WordOp::Invert => {
            let mut out = TwistWord::empty();
            for m in w.letters().iter().rev() {
                out = out.concat(&lefschetz::factor_inverse_twist(m)?);
            }
            let got = lefschetz::total_monodromy(&out);
            let verdicts =
                vec![Verdict::new("product_is_inverse", got == product.inverse(), json!({"expected": product.inverse(), "got": got}))];
            Ok((verdicts, json!({"word": word_json(&out)})))
        }
        WordOp::Complete => {
            let out = lefschetz::complete_to_sphere(&w)?;
            let got = lefschetz::total_monodromy(&out);
            let verdicts = vec![
                Verdict::new("product_identity", got.is_identity(), json!({"product": got})),
                Verdict::new("length_multiple_of_12", out.len() % 12 == 0, json!({"length": out.len()})),
            ];
            Ok((verdicts, json!({"word": word_json(&out)})))
        }
    }
}

fn run_pw(path: &Path, snc_path: Option<&Path>, log: &mut InputLog) -> Outcome {
    let fixture: PwFixture = log.json(path)?;
    let data = fixture.data()?;
    let p = pw::perverse_filtration_surface(&data)?;
    let w = match snc_path {
        Some(sp) => {
            let snc_fixture: SncFixture = log.json(sp)?;
            let (pair, coh) = snc_fixture.pair_with_cohomology()?;
            let table = snc::weight_ss(&pair, &coh)?;
            let mut w = BTreeMap::new();
            for k in p.keys() {
                let f = table.adapted_filtration(*k as i64);
                w.insert(*k, f);
            }
            w
        }
        None => fixture.weight_filtrations()?,
    };
    let report = pw::pw_report(&p, &w)?;
    let verdicts = vec![
        Verdict::new("perverse_equals_weight", report.holds, &report.witness),
        Verdict::new("graded_dims_agree", report.graded_dims_agree, json!(null)),
    ];
    let result = json!({
        "perverse": p.iter().map(|(k, f)| (k.to_string(), f)).collect::<BTreeMap<_, _>>(),
        "weight": w.iter().map(|(k, f)| (k.to_string(), f)).collect::<BTreeMap<_, _>>(),
    });
    Ok((verdicts, result))
}
