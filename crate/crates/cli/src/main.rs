//! `purecorr`: command-line front end for E_p, dense-coding and audit runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use purecorr::audit::{AuditRecord, Verdict};
use purecorr::dense_coding::{self, DcConfig, DcResult};
use purecorr::ep::{self, AncillaMode, EpConfig, EpResult, GradientKind};
use purecorr::info::Partition;
use purecorr::lab::{self, FigFamily, MonogamyMeasure, SweepTable};
use purecorr::states::{Family, StateDescriptor};
use purecorr::tol::{self, Tolerances};
use purecorr::{io, DensityMatrix, Error};

const MAX_DIM_ENV: &str = "PURECORR_MAX_DIM";

#[derive(Parser)]
#[command(name = "purecorr", version, about = "Entanglement of purification and dense-coding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate E_p across a cut, with its certified bracket.
    Ep(RunArgs),
    /// Estimate the dense-coding advantage Δ(sender⟩receiver).
    Dc(RunArgs),
    /// Audit one registered claim.
    Audit {
        claim: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Tabulate the lower-bound gap over a figure family grid.
    Sweep {
        #[arg(value_enum, id = "figure", value_name = "FIGURE")]
        figure: SweepFamily,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Load a state and report its validity and spectrum.
    Validate(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFamily {
    Fig1,
    Fig2,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Gradient {
    Analytic,
    CentralDifference,
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// State family, e.g. bell, werner, ghz, w, fig1, ghz-mixture.
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated family parameters.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    params: Vec<f64>,
    /// Parameters of the second state in additivity audits.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    params2: Vec<f64>,
    /// Number of parties for the GHZ and W families.
    #[arg(long)]
    n: Option<usize>,
    /// Subsystem dimensions for the random families.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Density-matrix JSON file used instead of a family.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Cut in letter notation, e.g. A:BC; sender first for dc.
    #[arg(long)]
    cut: Option<String>,
    /// Grid step counts, e.g. 51x51.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Audit tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// rank, terhal, or explicit dimensions `dA',dB'`.
    #[arg(long)]
    ancilla: Option<String>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, value_enum)]
    gradient: Option<Gradient>,
    /// Environment dimension of the dense-coding channel.
    #[arg(long)]
    d_env: Option<usize>,
    /// Measure for monogamy-score: mutual-info, ep-estimate, ep-lower, dc.
    #[arg(long)]
    measure: Option<String>,
    /// Distinguished party for the polygamy and vanishing audits.
    #[arg(long)]
    node: Option<usize>,
    /// Party discarded by prop4-polygamy.
    #[arg(long)]
    omit: Option<usize>,
    /// Attach optimizer estimates to thm1-polygamy-pure.
    #[arg(long)]
    estimate: bool,
    /// JSON file with `ep` and `tolerances` sections.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    ep: EpConfig,
    tolerances: Option<Tolerances>,
}

/// Everything a run depends on, echoed into the output.
#[derive(Serialize)]
struct RunConfig {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    claim: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cut: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    node: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omit: Option<usize>,
    estimate: bool,
    ep: EpConfig,
    dc: DcConfig,
    format: Format,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    seed: u64,
    tolerances: &'a Tolerances,
    state: &'a Value,
    result: &'a Value,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    inconclusive: bool,
    timestamp: u64,
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::DimensionCap { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

/// Result of one command before serialization.
struct Outcome {
    state: Value,
    result: Value,
    table: Table,
    violated: bool,
    inconclusive: bool,
}

struct Context {
    args: RunArgs,
    ep: EpConfig,
    dc: DcConfig,
    tolerances: Tolerances,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn parse_ancilla(s: &str) -> CliResult<AncillaMode> {
    match s {
        "rank" => Ok(AncillaMode::RankDefault),
        "terhal" => Ok(AncillaMode::TerhalFull),
        _ => {
            let parts: Vec<&str> = s.split(',').collect();
            let dims: Option<Vec<usize>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
            match dims.as_deref() {
                Some(&[a, b]) => Ok(AncillaMode::Explicit {
                    d_aprime: a,
                    d_bprime: b,
                }),
                _ => usage(format!("--ancilla `{s}`: expected rank, terhal or `dA',dB'`")),
            }
        }
    }
}

fn max_dim_from_env() -> CliResult<Option<usize>> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(d) if d > 0 => Ok(Some(d)),
            _ => usage(format!("{MAX_DIM_ENV} = `{v}` is not a positive integer")),
        },
        Err(_) => Ok(None),
    }
}

impl Context {
    fn new(args: RunArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(Error::from)?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let mut ep = file.ep;
        if let Some(r) = args.restarts {
            ep.restarts = r;
        }
        if let Some(s) = args.seed {
            ep.seed = s;
        }
        if let Some(m) = args.max_iter {
            ep.max_iterations = m;
        }
        if let Some(a) = &args.ancilla {
            ep.ancilla_mode = parse_ancilla(a)?;
        }
        if let Some(g) = args.gradient {
            ep.gradient = match g {
                Gradient::Analytic => GradientKind::Analytic,
                Gradient::CentralDifference => GradientKind::CentralDifference,
            };
        }
        if let Some(d) = max_dim_from_env()? {
            ep.max_dim = d;
        }
        ep.validate()?;
        let mut dc = DcConfig::from_ep(&ep);
        dc.d_env = args.d_env;
        Ok(Self {
            args,
            ep,
            dc,
            tolerances: file.tolerances.unwrap_or_default(),
        })
    }

    fn run_config(&self, command: &str, claim: Option<&str>) -> RunConfig {
        let a = &self.args;
        RunConfig {
            command: command.to_string(),
            claim: claim.map(str::to_string),
            cut: a.cut.clone(),
            grid: a.grid.clone(),
            audit_tolerance: a.tol,
            measure: a.measure.clone(),
            node: a.node,
            omit: a.omit,
            estimate: a.estimate,
            ep: self.ep.clone(),
            dc: self.dc.clone(),
            format: a.format,
        }
    }

    fn descriptor(&self, family: Family, params: Vec<f64>) -> CliResult<StateDescriptor> {
        let dims = (!self.args.dims.is_empty()).then(|| self.args.dims.clone());
        let seed = matches!(family, Family::RandomMixed | Family::RandomPure | Family::SsaEquality)
            .then_some(self.ep.seed);
        Ok(StateDescriptor::new(family, params, self.args.n, dims, seed)?)
    }

    /// The input file if given, else the family flags, else `default`.
    fn state(&self, default: Option<Family>) -> CliResult<(DensityMatrix, StateDescriptor)> {
        if let Some(path) = &self.args.input {
            let rho = io::load_density_matrix(path, &self.tolerances)?;
            let mut d = StateDescriptor::opaque(Family::File, &rho);
            d.source = Some(path.display().to_string());
            return Ok((rho, d));
        }
        let family = match (&self.args.family, default) {
            (Some(f), _) => Family::parse(f)?,
            (None, Some(f)) => f,
            (None, None) => return usage("a state is required: pass --family or --input"),
        };
        if matches!(family, Family::File | Family::Custom | Family::TensorProduct) {
            return usage(format!("family `{}` is not available from flags", family.name()));
        }
        let d = self.descriptor(family, self.args.params.clone())?;
        Ok((d.build()?, d))
    }

    /// Second factor of an additivity audit: the first state again unless
    /// `--params2` is given.
    fn second_state(
        &self,
        rho: &DensityMatrix,
        first: &StateDescriptor,
    ) -> CliResult<(DensityMatrix, StateDescriptor)> {
        if self.args.params2.is_empty() {
            return Ok((rho.clone(), first.clone()));
        }
        if first.family == Family::File {
            return usage("--params2 needs a family, not --input");
        }
        let d = self.descriptor(first.family, self.args.params2.clone())?;
        Ok((d.build()?, d))
    }

    fn cut(&self, rho: &DensityMatrix) -> CliResult<Partition> {
        let cut = match &self.args.cut {
            Some(c) => Partition::parse(c)?,
            None if rho.n_parties() == 2 => Partition::bipartite(vec![0], vec![1])?,
            None => Partition::first_vs_rest(rho.n_parties())?,
        };
        cut.validate_for(rho)?;
        Ok(cut)
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(v).map_err(Error::from)?)
}

fn ep_outcome(ctx: &Context) -> CliResult<Outcome> {
    let (rho, desc) = ctx.state(None)?;
    let cut = ctx.cut(&rho)?;
    let r: EpResult = ep::ep_optimize(&rho, &cut, &ctx.ep)?;
    let mut table = Table::new(&[
        "cut", "estimate", "lower", "lower_source", "upper", "upper_source", "gap",
        "certificate", "certificate_value", "converged", "d_aprime", "d_bprime", "rank",
    ]);
    let b = &r.bracket;
    let (cert, cert_value) = match &r.exactness_certificate {
        Some(c) => (to_value(&c.kind)?.as_str().unwrap_or("").to_string(), num(c.value)),
        None => (String::new(), String::new()),
    };
    table.rows.push(vec![
        String::from(r.cut.clone()),
        num(r.estimate),
        num(b.lower),
        to_value(&b.lower_source)?.as_str().unwrap_or("").to_string(),
        num(b.upper),
        to_value(&b.upper_source)?.as_str().unwrap_or("").to_string(),
        num(b.gap),
        cert,
        cert_value,
        r.converged.to_string(),
        r.d_aprime.to_string(),
        r.d_bprime.to_string(),
        r.rank.to_string(),
    ]);
    Ok(Outcome {
        state: to_value(&desc)?,
        result: to_value(&r)?,
        table,
        violated: false,
        inconclusive: false,
    })
}

fn dc_outcome(ctx: &Context) -> CliResult<Outcome> {
    let (rho, desc) = ctx.state(None)?;
    let cut = ctx.cut(&rho)?;
    if cut.len() != 2 {
        return usage("dc needs a two-group cut, sender first");
    }
    let r: DcResult = dense_coding::dc_advantage(&rho, &cut, &ctx.dc)?;
    let mut table = Table::new(&[
        "cut", "estimate", "identity_baseline", "upper", "min_output_entropy", "converged", "d_env",
    ]);
    table.rows.push(vec![
        String::from(r.cut.clone()),
        num(r.estimate),
        num(r.identity_baseline),
        num(r.upper),
        num(r.min_output_entropy),
        r.converged.to_string(),
        r.d_env.to_string(),
    ]);
    Ok(Outcome {
        state: to_value(&desc)?,
        result: to_value(&r)?,
        table,
        violated: false,
        inconclusive: false,
    })
}

fn claim_list() -> String {
    lab::CLAIM_IDS.join(", ")
}

/// Records for one claim, each paired with the descriptor of its state.
fn run_claim(ctx: &Context, claim: &str) -> CliResult<Vec<AuditRecord>> {
    let a = &ctx.args;
    let node = a.node.unwrap_or(0);
    let with_state = |mut r: AuditRecord, d: &StateDescriptor| {
        r.state = d.clone();
        r
    };
    let records = match claim {
        "thm1-polygamy-pure" => {
            let (rho, d) = ctx.state(Some(Family::W))?;
            let cfg = a.estimate.then_some(&ctx.ep);
            vec![with_state(lab::thm1_polygamy_pure_audit(&rho, cfg)?, &d)]
        }
        "fig1-gap" | "fig2-gap" => {
            let fam = if claim == "fig1-gap" { FigFamily::Fig1 } else { FigFamily::Fig2 };
            let grid = match &a.grid {
                Some(g) => fam.parse_grid(g)?,
                None => fam.default_grid(),
            };
            let table = lab::fig_sweep(fam, &grid)?;
            vec![table.audit(lab::FIG_GAP_TOL)]
        }
        "prop1-discarding" => {
            let (rho, d) = ctx.state(Some(Family::W))?;
            vec![with_state(lab::prop1_discarding_audit(&rho, &ctx.ep)?, &d)]
        }
        "prop3-polygamy" => {
            let (rho, d) = ctx.state(Some(Family::W))?;
            vec![with_state(lab::prop3_audit(&rho, node)?, &d)]
        }
        "prop4-polygamy" => {
            let (rho, d) = ctx.state(Some(Family::W))?;
            let n = rho.n_parties();
            let omit = a.omit.unwrap_or(if node == n - 1 { 0 } else { n - 1 });
            let subset: Vec<usize> = (0..n).filter(|&p| p != omit).collect();
            vec![with_state(lab::prop4_audit(&rho, node, &subset)?, &d)]
        }
        "weak-monogamy" => {
            let (rho, d) = ctx.state(Some(Family::W))?;
            vec![with_state(lab::weak_monogamy_audit(&rho, &ctx.ep)?, &d)]
        }
        "w-closed-form" => {
            let ns: Vec<usize> = match a.n {
                Some(n) => vec![n],
                None => (3..=8).collect(),
            };
            ns.into_iter().map(lab::w_closed_form_check).collect::<purecorr::Result<_>>()?
        }
        "dc-monogamy" => {
            let (rho, d) = ctx.state(Some(Family::Ghz))?;
            let tol = a.tol.unwrap_or(tol::STACKED);
            vec![with_state(dense_coding::dc_monogamy_audit(&rho, &ctx.ep, &ctx.dc, tol)?, &d)]
        }
        "dc-superadditivity" | "ep-subadditivity" => {
            let (rho, d) = match (&a.family, &a.input) {
                (None, None) => {
                    let d = ctx.descriptor(Family::Werner, vec![0.8])?;
                    (d.build()?, d)
                }
                _ => ctx.state(None)?,
            };
            let (sigma, d2) = ctx.second_state(&rho, &d)?;
            let (c1, c2) = (ctx.cut(&rho)?, ctx.cut(&sigma)?);
            let r = if claim == "ep-subadditivity" {
                ep::ep_subadditivity_certified(&rho, &c1, &sigma, &c2, &ctx.ep)?
            } else {
                let tol = a.tol.unwrap_or(lab::SUPERADDITIVITY_TOL);
                dense_coding::dc_superadditivity_audit(&rho, &c1, &sigma, &c2, &ctx.dc, tol)?
            };
            let mut r = with_state(r, &d);
            if d2 != d {
                r = r.note(format!("second state: {}", serde_json::to_string(&d2).map_err(Error::from)?));
            }
            vec![r]
        }
        "dc-vanishing" => {
            let (rho, d) = ctx.state(Some(Family::SsaEquality))?;
            vec![with_state(lab::dc_vanishing_audit(&rho, node, &ctx.dc)?, &d)]
        }
        "monogamy-score" => {
            let (rho, d) = ctx.state(Some(Family::W))?;
            let m = MonogamyMeasure::parse(a.measure.as_deref().unwrap_or("mutual-info"))?;
            vec![with_state(lab::monogamy_score(m, &rho, &ctx.ep)?, &d)]
        }
        other => {
            return usage(format!("unknown claim `{other}`; valid claims: {}", claim_list()));
        }
    };
    Ok(match a.tol {
        Some(t) if !matches!(claim, "dc-monogamy" | "dc-superadditivity") => {
            records.into_iter().map(|r| r.with_tolerance(t)).collect()
        }
        _ => records,
    })
}

fn audit_outcome(ctx: &Context, claim: &str) -> CliResult<Outcome> {
    let records = run_claim(ctx, claim)?;
    let mut table = Table::new(&[
        "claim_id", "family", "params", "n_parties", "lhs", "rhs", "relation", "margin",
        "tolerance", "verdict", "certification", "seed", "extras", "notes",
    ]);
    for r in &records {
        let extras: Vec<String> = r.extras.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
        table.rows.push(vec![
            r.claim_id.clone(),
            r.state.family.name(),
            r.state.params.iter().map(|p| num(*p)).collect::<Vec<_>>().join(";"),
            r.state.n_parties.to_string(),
            num(r.lhs),
            num(r.rhs),
            to_value(&r.relation)?.as_str().unwrap_or("").to_string(),
            num(r.margin),
            num(r.tolerance),
            r.verdict.to_string(),
            r.certification.as_str().to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            extras.join(";"),
            r.notes.join("; "),
        ]);
    }
    let states: Vec<&StateDescriptor> = records.iter().map(|r| &r.state).collect();
    let state = if states.len() == 1 { to_value(states[0])? } else { to_value(&states)? };
    Ok(Outcome {
        state,
        violated: records.iter().any(|r| r.verdict.is_violated()),
        inconclusive: records.iter().any(|r| r.verdict == Verdict::Inconclusive),
        result: to_value(&records)?,
        table,
    })
}

fn sweep_outcome(ctx: &Context, family: SweepFamily) -> CliResult<Outcome> {
    let fam = match family {
        SweepFamily::Fig1 => FigFamily::Fig1,
        SweepFamily::Fig2 => FigFamily::Fig2,
    };
    let grid = match &ctx.args.grid {
        Some(g) => fam.parse_grid(g)?,
        None => fam.default_grid(),
    };
    let t: SweepTable = lab::fig_sweep(fam, &grid)?;
    let mut header: Vec<&str> = grid.axes.iter().map(|a| a.name.as_str()).collect();
    header.extend(["i_ab", "i_ac", "i_a_bc", "delta_lb"]);
    let mut table = Table::new(&header);
    for r in &t.rows {
        let mut row: Vec<String> = r.params.iter().map(|p| num(*p)).collect();
        row.extend([num(r.i_ab), num(r.i_ac), num(r.i_a_bc), num(r.delta_lb)]);
        table.rows.push(row);
    }
    let state = serde_json::json!({
        "family": to_value(&fam)?,
        "params": grid.axes.iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
        "n_parties": 3,
    });
    Ok(Outcome {
        state,
        result: to_value(&t)?,
        table,
        violated: false,
        inconclusive: false,
    })
}

fn validate_outcome(ctx: &Context) -> CliResult<Outcome> {
    let (rho, desc) = ctx.state(None)?;
    let spectrum = rho.spectrum();
    let entropy = purecorr::info::entropy(&rho);
    let result = serde_json::json!({
        "valid": true,
        "dims": rho.dims().factors(),
        "trace": rho.op().trace().re,
        "hermiticity_error": rho.op().hermiticity_error(),
        "min_eigenvalue": spectrum.iter().copied().fold(f64::INFINITY, f64::min),
        "rank": rho.rank(),
        "purity": rho.purity(),
        "entropy": entropy,
        "spectrum": spectrum,
    });
    let mut table = Table::new(&["dims", "trace", "rank", "purity", "entropy"]);
    table.rows.push(vec![
        rho.dims().factors().iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x"),
        num(rho.op().trace().re),
        rho.rank().to_string(),
        num(rho.purity()),
        num(entropy),
    ]);
    Ok(Outcome {
        state: to_value(&desc)?,
        result,
        table,
        violated: false,
        inconclusive: false,
    })
}

fn render(ctx: &Context, command: &str, claim: Option<&str>, o: &Outcome) -> CliResult<String> {
    let config = ctx.run_config(command, claim);
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let env = Envelope {
        tool: "purecorr",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config: &config,
        seed: ctx.ep.seed,
        tolerances: &ctx.tolerances,
        state: &o.state,
        result: &o.result,
        inconclusive: o.inconclusive,
        timestamp,
    };
    match ctx.args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&env).map_err(Error::from)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# tool=purecorr version={}", env.version);
            let _ = writeln!(s, "# command={command}");
            let _ = writeln!(s, "# config={}", j(&config));
            let _ = writeln!(s, "# seed={}", ctx.ep.seed);
            let _ = writeln!(s, "# tolerances={}", j(&ctx.tolerances));
            let _ = writeln!(s, "# state={}", o.state);
            if o.inconclusive {
                let _ = writeln!(s, "# inconclusive=true");
            }
            let _ = writeln!(s, "# timestamp={timestamp}");
            let line = |cells: &[String]| cells.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
            let _ = writeln!(s, "{}", line(&o.table.header));
            for row in &o.table.rows {
                let _ = writeln!(s, "{}", line(row));
            }
            Ok(s)
        }
    }
}

fn j<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => Ok(io::write_atomic(path, text.as_bytes())?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let (name, claim, args) = match &cli.command {
        Command::Ep(a) => ("ep", None, a),
        Command::Dc(a) => ("dc", None, a),
        Command::Audit { claim, args } => ("audit", Some(claim.as_str()), args),
        Command::Sweep { args, .. } => ("sweep", None, args),
        Command::Validate(a) => ("validate", None, a),
    };
    if let Some(c) = claim {
        if !lab::CLAIM_IDS.contains(&c) {
            return usage(format!("unknown claim `{c}`; valid claims: {}", claim_list()));
        }
    }
    let ctx = Context::new(args.clone())?;
    let outcome = match &cli.command {
        Command::Ep(_) => ep_outcome(&ctx)?,
        Command::Dc(_) => dc_outcome(&ctx)?,
        Command::Audit { claim, .. } => audit_outcome(&ctx, claim)?,
        Command::Sweep { figure, .. } => sweep_outcome(&ctx, *figure)?,
        Command::Validate(_) => validate_outcome(&ctx)?,
    };
    let text = render(&ctx, name, claim, &outcome)?;
    emit(ctx.args.out.as_deref(), &text)?;
    if outcome.inconclusive {
        eprintln!("note: at least one verdict is inconclusive");
    }
    Ok(if outcome.violated { 1 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ancilla_flag_forms() {
        assert_eq!(parse_ancilla("rank").unwrap(), AncillaMode::RankDefault);
        assert_eq!(parse_ancilla("terhal").unwrap(), AncillaMode::TerhalFull);
        assert_eq!(
            parse_ancilla("2,3").unwrap(),
            AncillaMode::Explicit { d_aprime: 2, d_bprime: 3 }
        );
        assert!(parse_ancilla("2").is_err());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(num(0.1), "1.0000000000000001e-1");
    }
}
