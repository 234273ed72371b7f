use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ndsid::distance::{self, FreqGrid, NumericNds, SimConfig};
use ndsid::ident::{self, Method, MethodChoice};
use ndsid::model::circuit::{circuit_subsystem, CircuitParams};
use ndsid::model::{NdsModel, Scm};
use ndsid::pencil::kcf;
use ndsid::polymat::{smith_mcmillan, QMatrix};
use ndsid::ratpoly::{parse_rat, Rat};
use ndsid::{Error, Result};
use ndsid_cli::modelfile::{self, ModelFile, FORMAT_VERSION};
use ndsid_cli::report;
use serde_json::{json, Value};

/// Identifiability certificates and distance estimates for networked
/// dynamic systems.
#[derive(Parser)]
#[command(name = "ndsid", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Auto,
    Thm2,
    Thm5,
    Cor2,
    Chain,
}

#[derive(Clone, Copy, ValueEnum)]
enum TfmArg {
    Yv,
    Zu,
    Zv,
    Yu,
}

#[derive(Clone, Copy, ValueEnum)]
enum PencilArg {
    /// State rows of the chain after fixing the output to zero.
    Chain,
    /// The full subsystem pencil.
    M,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide identifiability of the interconnection. Exit code 0:
    /// identifiable, 1: unidentifiable, 2: inconclusive, 3: error.
    Check {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Smith-McMillan form of one subsystem transfer matrix.
    Smith {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = TfmArg::Yv)]
        tfm: TfmArg,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        /// Re-multiply the factors and compare with the transfer matrix.
        #[arg(long)]
        self_test: bool,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Kronecker form of a subsystem pencil.
    Kcf {
        model: PathBuf,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        /// Use the transposed subsystem (decides the row rank of G_zu).
        #[arg(long)]
        dual: bool,
        #[arg(long, value_enum, default_value_t = PencilArg::Chain)]
        pencil: PencilArg,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Monte-Carlo distance estimates, for one model or a gain sweep of the
    /// reference circuit.
    Distance {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Gains for the sweep: `start:step:stop` or a comma list.
        #[arg(long, default_value = "0.05:0.05:0.95")]
        k1: String,
        #[arg(long, default_value_t = 200)]
        n1: usize,
        #[arg(long, default_value_t = 400)]
        n2: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Per-frequency gap of the minimizing pair (model mode only).
        #[arg(long)]
        response: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Out::Text)]
        out: Out,
    },
    /// Write the two-subsystem circuit as a model file.
    Example {
        #[arg(long = "T", default_value = "1")]
        t: String,
        /// First gain of each subsystem: one value, or two comma-separated.
        #[arg(long, default_value = "0.4")]
        k1: String,
        /// Second gain of each subsystem.
        #[arg(long, default_value = "0.4,0.9")]
        k2: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

fn emit(out: Out, value: &Value, text: impl Fn(&Value) -> String) -> Result<()> {
    match out {
        Out::Json => write_out(None, &format!("{}\n", serde_json::to_string_pretty(value).expect("serializable"))),
        Out::Text => write_out(None, &text(value)),
    }
}

fn subsystem_of(m: &NdsModel, i: usize) -> Result<()> {
    if i >= m.subsystems.len() {
        return Err(Error::InvalidIndex(format!("subsystem {i} of {}", m.subsystems.len())));
    }
    Ok(())
}

fn cmd_check(path: &Path, method: MethodArg, out: Out) -> Result<i32> {
    let file = modelfile::load(path)?;
    let choice = match method {
        MethodArg::Auto => MethodChoice::Auto,
        MethodArg::Thm2 => MethodChoice::Fixed(Method::Sufficient),
        MethodArg::Thm5 => MethodChoice::Fixed(Method::CoefficientStack),
        MethodArg::Cor2 => MethodChoice::Fixed(Method::Factored),
        MethodArg::Chain => MethodChoice::Fixed(Method::PencilChain),
    };
    let start = Instant::now();
    let v = ident::check(&file.model, choice, file.factorization.as_ref())?;
    let r = report::check_json(&v, choice, start.elapsed().as_secs_f64() * 1e3);
    emit(out, &r, report::check_text)?;
    Ok(report::exit_code(v.status))
}

fn cmd_smith(path: &Path, tfm: TfmArg, i: usize, self_test: bool, out: Out) -> Result<i32> {
    let file = modelfile::load(path)?;
    subsystem_of(&file.model, i)?;
    let t = file.model.subsystem_tfms()?.swap_remove(i);
    let (name, g) = match tfm {
        TfmArg::Yv => ("yv", t.g_yv),
        TfmArg::Zu => ("zu", t.g_zu),
        TfmArg::Zv => ("zv", t.g_zv),
        TfmArg::Yu => ("yu", t.g_yu),
    };
    let sm = smith_mcmillan(&g);
    let ok = self_test.then(|| sm.reassemble() == g);
    emit(out, &report::smith_json(name, i, &sm, ok), report::smith_text)?;
    Ok(if ok == Some(false) { 3 } else { 0 })
}

fn cmd_kcf(path: &Path, i: usize, dual: bool, pencil: PencilArg, out: Out) -> Result<i32> {
    let file = modelfile::load(path)?;
    subsystem_of(&file.model, i)?;
    let s = &file.model.subsystems[i];
    let s = if dual { s.dual() } else { s.clone() };
    let (name, form, fncr) = match pencil {
        PencilArg::Chain => {
            let c = ident::pencil_chain(&s)?;
            let f = c.fncr();
            ("chain", c.kcf, Some(f))
        }
        PencilArg::M => ("M", kcf(&ident::pencil_m(&s))?, None),
    };
    emit(out, &report::kcf_json(i, dual, name, &form, fncr), report::kcf_text)?;
    Ok(0)
}

/// `start:step:stop` (inclusive, exact) or `a,b,c`.
fn parse_gains(spec: &str) -> Result<Vec<Rat>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let (a, h, b) = (parse_rat(parts[0])?, parse_rat(parts[1])?, parse_rat(parts[2])?);
        if h <= Rat::from_integer(0.into()) {
            return Err(Error::InvalidParam("gain step must be positive".into()));
        }
        let mut out = Vec::new();
        let mut k = a;
        while k <= b {
            out.push(k.clone());
            k += &h;
        }
        return Ok(out);
    }
    spec.split(',').map(|s| parse_rat(s.trim())).collect()
}

fn csv_text(header: &str, rows: &[String]) -> String {
    let mut s = format!("# format_version={FORMAT_VERSION}\n{header}\n");
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

fn matrix_f64(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| json!(m.row(i).iter().collect::<Vec<_>>())).collect())
}

struct DistanceArgs {
    model: Option<PathBuf>,
    k1: String,
    n1: usize,
    n2: usize,
    seed: u64,
    csv: Option<PathBuf>,
    response: Option<PathBuf>,
    out: Out,
}

fn cmd_distance(a: DistanceArgs) -> Result<i32> {
    let start = Instant::now();
    if let Some(path) = &a.model {
        let file = modelfile::load(path)?;
        let num = NumericNds::from_model(&file.model)?;
        let grid = FreqGrid::default();
        let f = distance::dsid_freq(&num, a.n1, a.n2, a.seed, &grid)?;
        let t = distance::dsid_time(&num, &f.phi1, &f.phi2, &SimConfig::new(a.seed))?;
        if let Some(csv) = &a.csv {
            let row = format!("{:.10e},{:.10e},{:.10e}", f.d_scm, f.value, t.value);
            write_out(Some(csv), &csv_text("d_scm,d_sid_F,d_sid_T", &[row]))?;
        }
        if let Some(resp) = &a.response {
            let rows: Vec<String> = distance::pair_response(&num, &f.phi1, &f.phi2, &grid)?
                .into_iter()
                .map(|(w, g)| format!("{w:.10e},{g:.10e}"))
                .collect();
            write_out(Some(resp), &csv_text("omega,gap", &rows))?;
        }
        let r = json!({
            "format_version": FORMAT_VERSION,
            "command": "distance",
            "n1": a.n1, "n2": a.n2, "seed": a.seed,
            "d_scm": f.d_scm, "d_sid_F": f.value, "d_sid_T": t.value,
            "omega": f.omega,
            "period": t.period, "samples": t.samples, "rho_max": t.rho_max, "rho_min": t.rho_min,
            "phi1": matrix_f64(&f.phi1), "phi2": matrix_f64(&f.phi2),
            "elapsed_ms": start.elapsed().as_secs_f64() * 1e3,
        });
        emit(a.out, &r, |r| {
            format!(
                "d_scm = {:.6e}\nd_sid_F = {:.6e} (at omega = {:.6e} rad/s)\nd_sid_T = {:.6e} (period {:.6e} s, {} samples)\n",
                r["d_scm"].as_f64().unwrap_or(f64::NAN),
                r["d_sid_F"].as_f64().unwrap_or(f64::NAN),
                r["omega"].as_f64().unwrap_or(f64::NAN),
                r["d_sid_T"].as_f64().unwrap_or(f64::NAN),
                r["period"].as_f64().unwrap_or(f64::NAN),
                r["samples"]
            )
        })?;
        return Ok(0);
    }
    let gains = parse_gains(&a.k1)?;
    let rows = distance::sweep(&gains, a.n1, a.n2, a.seed)?;
    let lines: Vec<String> =
        rows.iter().map(|r| format!("{:.4},{:.10e},{:.10e},{:.10e}", r.k1, r.d_scm, r.d_freq, r.d_time)).collect();
    if let Some(csv) = &a.csv {
        write_out(Some(csv), &csv_text("k1,d_scm,d_sid_F,d_sid_T", &lines))?;
    }
    let r = json!({
        "format_version": FORMAT_VERSION,
        "command": "distance",
        "n1": a.n1, "n2": a.n2, "seed": a.seed,
        "rows": rows.iter().map(|r| json!({"k1": r.k1, "d_scm": r.d_scm, "d_sid_F": r.d_freq, "d_sid_T": r.d_time})).collect::<Vec<_>>(),
        "elapsed_ms": start.elapsed().as_secs_f64() * 1e3,
    });
    emit(a.out, &r, |r| {
        let mut s = String::from("    k1        d_scm      d_sid_F      d_sid_T\n");
        for row in r["rows"].as_array().into_iter().flatten() {
            let g = |k: &str| row[k].as_f64().unwrap_or(f64::NAN);
            s.push_str(&format!("{:.4}  {:.4e}  {:.4e}  {:.4e}\n", g("k1"), g("d_scm"), g("d_sid_F"), g("d_sid_T")));
        }
        s
    })?;
    Ok(0)
}

fn pair_of(spec: &str) -> Result<[Rat; 2]> {
    let v = spec.split(',').map(|s| parse_rat(s.trim())).collect::<Result<Vec<_>>>()?;
    match v.as_slice() {
        [a] => Ok([a.clone(), a.clone()]),
        [a, b] => Ok([a.clone(), b.clone()]),
        _ => Err(Error::InvalidParam(format!("expected one or two gains, got {spec:?}"))),
    }
}

fn cmd_example(t: &str, k1: &str, k2: &str, out: Option<&Path>) -> Result<i32> {
    let t = parse_rat(t)?;
    let (k1, k2) = (pair_of(k1)?, pair_of(k2)?);
    let subs = (0..2)
        .map(|i| circuit_subsystem(&CircuitParams { t: t.clone(), k1: k1[i].clone(), k2: k2[i].clone() }))
        .collect::<Result<Vec<_>>>()?;
    let model = NdsModel::new(subs, Scm::new(QMatrix::zeros(2, 4)))?;
    let fmt = |x: &Rat| ndsid::ratpoly::format_rat(x);
    let metadata = json!({
        "name": "two-stage RC circuit",
        "T": fmt(&t),
        "k1": k1.iter().map(fmt).collect::<Vec<_>>(),
        "k2": k2.iter().map(fmt).collect::<Vec<_>>(),
    });
    let text = modelfile::to_string(&ModelFile { model, metadata, factorization: None });
    write_out(out, &format!("{text}\n"))?;
    Ok(0)
}

fn configure_threads() {
    if let Some(n) = std::env::var("NDSID_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    configure_threads();
    let res = match cli.cmd {
        Cmd::Check { model, method, out } => cmd_check(&model, method, out),
        Cmd::Smith { model, tfm, subsystem, self_test, out } => cmd_smith(&model, tfm, subsystem, self_test, out),
        Cmd::Kcf { model, subsystem, dual, pencil, out } => cmd_kcf(&model, subsystem, dual, pencil, out),
        Cmd::Distance { model, k1, n1, n2, seed, csv, response, out } => {
            cmd_distance(DistanceArgs { model, k1, n1, n2, seed, csv, response, out })
        }
        Cmd::Example { t, k1, k2, out } => cmd_example(&t, &k1, &k2, out.as_deref()),
    };
    match res {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
