mod cache;
mod selftest;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use asf_core::asf_engine::{auto_window, fundamental_domain_record, widen, CountRecord, Springer};
use asf_core::fq::is_prime;
use asf_core::gm_calculus::{generic_directions, lattice_count_formula, OrthogonalSet, Verdict};
use asf_core::rational::{fmt_q, parse_q, q, Q};
use asf_core::series::{data_box, fit_rational, interpolate_q, to_csv, FitVerdict, SeriesData};
use asf_core::transition::{build_instance, Report};
use asf_core::typea_roots::Levi;
use asf_core::valuation::{default_precision, make_gamma_variant};
use asf_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use cache::Cache;

#[derive(Parser)]
#[command(name = "asf-lab", version, about = "Point counts, weighted orbital integrals and (G,M)-families for GL_{d+1}")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Cache directory (default: $ASF_CACHE_DIR, else $HOME/.cache/asf-lab).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fundamental-domain counts |F_γ(F_q)|, interpolated in q.
    Count(CountArgs),
    /// Weighted orbital integrals J_M(γ, 1_k).
    Orbital(OrbitalArgs),
    /// Transition identities between counts and orbital integrals.
    Transition {
        #[command(subcommand)]
        cmd: TransitionCmd,
    },
    /// Grid of counts or orbital integrals and an exact rational fit of its series.
    Series(SeriesArgs),
    /// Orthogonal-set calculator.
    Gm {
        #[command(subcommand)]
        cmd: GmCmd,
    },
    /// Runs the invariant suites.
    Selftest,
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Rank parameter: the group is GL_{d+1}.
    #[arg(long)]
    d: usize,
    /// Root valuation datum, comma separated, d entries.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
    /// Primes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u32>,
    /// Index of the γ variant realising the datum.
    #[arg(long, default_value_t = 0)]
    variant: usize,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Starting window (default Σn + 2); the count is taken at the first saturated window.
    #[arg(long)]
    window: Option<i64>,
}

#[derive(Args)]
struct OrbitalArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Levi key such as "12|3" (default: the diagonal torus).
    #[arg(long)]
    levi: Option<String>,
}

#[derive(Subcommand)]
enum TransitionCmd {
    /// Checks both transition formulas and the round trip.
    Verify(DataArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum SeriesKind {
    Count,
    Orbital,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    d: usize,
    /// Largest entry of the datum box [0, max]^d.
    #[arg(long)]
    max: u32,
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value_t = SeriesKind::Count)]
    kind: SeriesKind,
    /// Number of top total-degree layers held out for validation.
    #[arg(long, default_value_t = 2)]
    holdout: u32,
    #[arg(long, default_value_t = 4)]
    max_den: usize,
    #[arg(long, default_value_t = 4)]
    max_num: usize,
}

#[derive(Subcommand)]
enum GmCmd {
    /// Positivity verdict for an orthogonal set.
    Validate(SetArg),
    /// Volume of the hull of a positive set.
    Volume(SetArg),
    /// Lattice points of the hull, by formula and by enumeration.
    Count(SetArg),
}

#[derive(Args)]
struct SetArg {
    /// JSON file {"n", "levi", "outer"?, "points"}.
    #[arg(long)]
    set: PathBuf,
}

/// Exit status classes: 1 usage, 2 computation, 3 invariant.
#[derive(Debug)]
enum Fail {
    Usage(String),
    Compute(String),
    Invariant(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Invalid(_) => Fail::Usage(e.to_string()),
            Error::Invariant(_) => Fail::Invariant(e.to_string()),
            Error::Compute(_) | Error::Io(_) => Fail::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Compute(e.to_string())
    }
}

struct Ctx {
    cache: Cache,
    format: Format,
    out: Option<PathBuf>,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<(), Fail> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| Fail::Usage(format!("cannot write {}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, v: &T) -> Result<(), Fail> {
        self.emit(&serde_json::to_string_pretty(v).expect("serializable output"))
    }
}

fn check_data(a: &DataArgs) -> Result<(), Fail> {
    if a.n.len() != a.d {
        return Err(Fail::Usage(format!("--n has {} entries, --d is {}", a.n.len(), a.d)));
    }
    if a.d == 0 {
        return Err(Fail::Usage("--d must be at least 1".into()));
    }
    if let Some(p) = a.q.iter().find(|&&p| !is_prime(p)) {
        return Err(Fail::Usage(format!("{p} is not prime")));
    }
    Ok(())
}

fn count_record(ctx: &Ctx, n: &[u32], p: u32, variant: usize, window: Option<i64>) -> Result<CountRecord, Fail> {
    ctx.cache.fetch("count", &(n, p, variant, window), || {
        eprintln!("counting n={n:?} q={p} variant {variant}");
        let g = make_gamma_variant(n, p, default_precision(n), variant)?;
        Ok::<_, Fail>(fundamental_domain_record(&g, n, variant, window)?)
    })
}

#[derive(Serialize, Deserialize)]
struct OrbitalRecord {
    n: Vec<u32>,
    q: u32,
    variant: usize,
    levi: String,
    value: String,
}

fn orbital_record(ctx: &Ctx, n: &[u32], p: u32, variant: usize, levi: &Levi) -> Result<OrbitalRecord, Fail> {
    let key = levi.key();
    ctx.cache.fetch("orbital", &(n, p, variant, &key), || {
        eprintln!("weighted orbital integral n={n:?} q={p} M={key}");
        let g = make_gamma_variant(n, p, default_precision(n), variant)?;
        let w = auto_window(&g)?;
        let j = Springer::new(&widen(&g, w)?, w)?.weighted_orbital(levi)?;
        Ok::<_, Fail>(OrbitalRecord { n: n.to_vec(), q: p, variant, levi: key.clone(), value: fmt_q(&j) })
    })
}

fn cmd_count(ctx: &Ctx, a: &CountArgs) -> Result<(), Fail> {
    check_data(&a.data)?;
    let d = &a.data;
    let records: Vec<CountRecord> =
        d.q.iter().map(|&p| count_record(ctx, &d.n, p, d.variant, a.window)).collect::<Result<_, _>>()?;
    let pts: Vec<(u32, Q)> = records.iter().map(|r| (r.q, q(r.count as i64))).collect();
    let interp = if pts.len() >= 2 { Some(interpolate_q(&pts, pts.len() - 2)) } else { None };
    #[derive(Serialize)]
    struct Out<'a> {
        d: usize,
        n: &'a [u32],
        records: &'a [CountRecord],
        polynomial: Option<String>,
        consistency_primes: Vec<u32>,
        interpolation_error: Option<String>,
    }
    let (polynomial, consistency_primes, interpolation_error) = match &interp {
        Some(Ok(f)) => (Some(f.poly.to_string()), f.consistency.clone(), None),
        Some(Err(e)) => (None, Vec::new(), Some(e.to_string())),
        None => (None, Vec::new(), None),
    };
    match ctx.format {
        Format::Json => ctx.emit_json(&Out {
            d: d.d,
            n: &d.n,
            records: &records,
            polynomial,
            consistency_primes,
            interpolation_error,
        }),
        Format::Csv => {
            let rows: Vec<(Vec<u32>, u32, Q)> = pts.iter().map(|(p, c)| (d.n.clone(), *p, c.clone())).collect();
            let mut text = to_csv(d.d, &rows);
            if let Some(p) = polynomial {
                text.push_str(&format!("# F(q) = {p}\n"));
            }
            ctx.emit(&text)
        }
    }
}

fn cmd_orbital(ctx: &Ctx, a: &OrbitalArgs) -> Result<(), Fail> {
    check_data(&a.data)?;
    let d = &a.data;
    let levi = match &a.levi {
        Some(k) => Levi::parse(d.d + 1, k)?,
        None => Levi::torus(d.d + 1),
    };
    let recs: Vec<OrbitalRecord> =
        d.q.iter().map(|&p| orbital_record(ctx, &d.n, p, d.variant, &levi)).collect::<Result<_, _>>()?;
    match ctx.format {
        Format::Json => ctx.emit_json(&recs),
        Format::Csv => {
            let rows: Vec<(Vec<u32>, u32, Q)> =
                recs.iter().map(|r| (r.n.clone(), r.q, parse_q(&r.value).expect("stored rational"))).collect();
            ctx.emit(&to_csv(d.d, &rows))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TransitionOut {
    n: Vec<u32>,
    q: u32,
    x0: String,
    count_formula: ReportOut,
    orbital_formula: ReportOut,
    orbital_formula_incidence: ReportOut,
    round_trip: bool,
    round_trip_incidence: bool,
}

#[derive(Serialize, Deserialize)]
struct ReportOut {
    lhs: String,
    rhs: String,
    holds: bool,
    summands: Vec<(String, String, String)>,
}

impl From<Report> for ReportOut {
    fn from(r: Report) -> Self {
        ReportOut {
            lhs: r.lhs,
            rhs: r.rhs,
            holds: r.holds,
            summands: r.summands.into_iter().map(|s| (s.m, s.l, s.value)).collect(),
        }
    }
}

fn cmd_transition(ctx: &Ctx, a: &DataArgs) -> Result<(), Fail> {
    check_data(a)?;
    let mut outs = Vec::new();
    for &p in &a.q {
        let out: TransitionOut = ctx.cache.fetch("transition", &(&a.n, p, a.variant), || {
            eprintln!("transition n={:?} q={p}", a.n);
            let g = make_gamma_variant(&a.n, p, default_precision(&a.n), a.variant)?;
            let inst = build_instance(&g)?;
            Ok::<_, Fail>(TransitionOut {
                n: a.n.clone(),
                q: p,
                x0: inst.x0.clone(),
                count_formula: inst.predict_count().into(),
                orbital_formula: inst.orbitals_from_counts().into(),
                orbital_formula_incidence: inst.orbitals_from_counts_incidence().into(),
                round_trip: inst.round_trip(),
                round_trip_incidence: inst.round_trip_incidence(),
            })
        })?;
        outs.push(out);
    }
    ctx.emit_json(&outs)?;
    let bad: Vec<String> = outs
        .iter()
        .filter(|o| !(o.count_formula.holds && o.orbital_formula.holds && o.round_trip))
        .map(|o| format!("q={}", o.q))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Fail::Invariant(format!("transition identities fail at {}", bad.join(", "))))
    }
}

fn cmd_series(ctx: &Ctx, a: &SeriesArgs) -> Result<(), Fail> {
    if a.d == 0 {
        return Err(Fail::Usage("--d must be at least 1".into()));
    }
    if !is_prime(a.q) {
        return Err(Fail::Usage(format!("{} is not prime", a.q)));
    }
    let points = data_box(a.d, a.max);
    let top = a.max * a.d as u32;
    if a.holdout == 0 || a.holdout > top {
        return Err(Fail::Usage(format!("--holdout must be between 1 and {top}")));
    }
    let cut = top + 1 - a.holdout;
    let mut data = SeriesData::new();
    for n in &points {
        let v = match a.kind {
            SeriesKind::Count => q(count_record(ctx, n, a.q, 0, None)?.count as i64),
            SeriesKind::Orbital => {
                let r = orbital_record(ctx, n, a.q, 0, &Levi::torus(a.d + 1))?;
                parse_q(&r.value).expect("stored rational")
            }
        };
        data.insert(n.clone(), v);
    }
    let degree = |m: &Vec<u32>| m.iter().sum::<u32>();
    let train: Vec<Vec<u32>> = points.iter().filter(|m| degree(m) < cut).cloned().collect();
    let validate: Vec<Vec<u32>> = points.iter().filter(|m| degree(m) >= cut).cloned().collect();
    let fit = fit_rational(&data, &train, &validate, a.max_den, a.max_num)?;
    match ctx.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                d: usize,
                q: u32,
                kind: SeriesKind,
                grid: Vec<(Vec<u32>, String)>,
                fit: serde_json::Value,
            }
            ctx.emit_json(&Out {
                d: a.d,
                q: a.q,
                kind: a.kind,
                grid: data.iter().map(|(k, v)| (k.clone(), fmt_q(v))).collect(),
                fit: serde_json::from_str(&fit.to_json()).expect("certificate is JSON"),
            })?;
        }
        Format::Csv => {
            let rows: Vec<(Vec<u32>, u32, Q)> = data.iter().map(|(k, v)| (k.clone(), a.q, v.clone())).collect();
            ctx.emit(&to_csv(a.d, &rows))?;
        }
    }
    match &fit.verdict {
        FitVerdict::Certified => Ok(()),
        FitVerdict::Inconclusive { reason } => {
            eprintln!("inconclusive: {reason}");
            Ok(())
        }
        FitVerdict::ValidationFailed { at, predicted, actual } => Err(Fail::Invariant(format!(
            "fit predicts {predicted} at {at:?}, grid has {actual}"
        ))),
    }
}

fn read_set(p: &PathBuf) -> Result<OrthogonalSet, Fail> {
    let text = fs::read_to_string(p).map_err(|e| Fail::Usage(format!("cannot read {}: {e}", p.display())))?;
    Ok(OrthogonalSet::parse_json(&text)?)
}

fn cmd_gm(ctx: &Ctx, cmd: &GmCmd) -> Result<(), Fail> {
    match cmd {
        GmCmd::Validate(a) => {
            let h = read_set(&a.set)?;
            let (verdict, detail) = match h.validate() {
                Verdict::Positive => ("positive", String::new()),
                Verdict::OrthogonalNotPositive { p, p2, c } => {
                    ("orthogonal_not_positive", format!("{p} -> {p2}: coefficient {}", fmt_q(&c)))
                }
                Verdict::Invalid(s) => ("invalid", s),
            };
            ctx.emit_json(&serde_json::json!({ "verdict": verdict, "detail": detail, "integral": h.is_integral() }))
        }
        GmCmd::Volume(a) => {
            let h = read_set(&a.set)?;
            if h.validate() != Verdict::Positive {
                return Err(Fail::Usage("the set is not positive".into()));
            }
            let v = h.hull_volume()?;
            ctx.emit_json(&serde_json::json!({
                "dim": h.dim(),
                "lattice_volume": fmt_q(&v.rational),
                "covolume_sq": fmt_q(&v.norm_sq),
            }))
        }
        GmCmd::Count(a) => {
            let h = read_set(&a.set)?;
            if h.validate() != Verdict::Positive || !h.is_integral() {
                return Err(Fail::Usage("lattice counts need a positive integral set".into()));
            }
            let enumerated = h.lattice_count_enumerated()?;
            for mu in generic_directions(h.levi().n(), 3, 0x9e37) {
                let f = lattice_count_formula(&h, &mu)?;
                if f != q(enumerated as i64) {
                    return Err(Fail::Invariant(format!(
                        "formula gives {} along {mu:?}, enumeration {enumerated}",
                        fmt_q(&f)
                    )));
                }
            }
            match ctx.format {
                Format::Json => ctx.emit_json(&serde_json::json!({ "count": enumerated })),
                Format::Csv => ctx.emit(&format!("count\n{enumerated}")),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    let cache = if cli.global.no_cache {
        Cache::disabled()
    } else {
        Cache::new(cli.global.cache_dir.clone().or_else(cache::default_dir))
    };
    let ctx = Ctx { cache, format: cli.global.format, out: cli.global.out.clone() };
    match &cli.cmd {
        Cmd::Count(a) => cmd_count(&ctx, a),
        Cmd::Orbital(a) => cmd_orbital(&ctx, a),
        Cmd::Transition { cmd: TransitionCmd::Verify(a) } => cmd_transition(&ctx, a),
        Cmd::Series(a) => cmd_series(&ctx, a),
        Cmd::Gm { cmd } => cmd_gm(&ctx, cmd),
        Cmd::Selftest => {
            let summary = selftest::run();
            ctx.emit_json(&summary)?;
            if summary.iter().all(|s| s.pass) {
                Ok(())
            } else {
                Err(Fail::Invariant("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Invariant(m)) => {
            eprintln!("invariant failure: {m}");
            ExitCode::from(3)
        }
    }
}
