//! Experiment commands behind the `pirac` binary. Every command is a plain
//! function that renders its output deterministically from its arguments, so
//! identical invocations produce byte-identical files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use pirac::bounds::{
    curve_samples, memory_sharing_tuple, ratio_to_f64, round_half_up, tajeddine_table,
    tajeddine_tuple, TableRow,
};
use pirac::covercode::{
    build_code, extended_hamming_parity, hamming_parity, max_tau_coset_weight, random_search,
    sum_augmented_identity, CoveringCode,
};
use pirac::gf2::BitMatrix;
use pirac::pirsim::{
    access_report, draw_randomness, enumerate_randomness, mds_query_shape, privacy_audit,
    randomness_space, run_scheme, Backend, Database, RestrictedDesign, SchemeId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Randomness spaces up to this size are run exhaustively and audited.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pirac::Error),
    #[error("{0}")]
    Param(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for work-bound refusals, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_feasibility() => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn param(msg: impl Into<String>) -> CliError {
    CliError::Param(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(param(format!(
                "unknown format {s:?} (expected csv or json)"
            ))),
        }
    }
}

/// Writes `content` to `path`, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// CSV with a header row, or a pretty-printed JSON array.
pub fn render_records<T: Serialize>(records: &[T], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r)?;
            }
            Ok(String::from_utf8(
                w.into_inner()
                    .map_err(|e| csv::Error::from(e.into_error()))?,
            )
            .expect("csv is utf-8"))
        }
        Format::Json => Ok(serde_json::to_string_pretty(records)? + "\n"),
    }
}

fn fixed3(x: f64) -> String {
    format!("{:.3}", round_half_up(x, 3))
}

// ---------------------------------------------------------------- tables

/// One output row of a rate/access table; numbers rounded half-up to 3 decimals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableLine {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "Omega")]
    pub omega: String,
    #[serde(rename = "Delta")]
    pub delta: String,
    #[serde(rename = "DeltaPrime")]
    pub delta_prime: String,
    #[serde(rename = "Note")]
    pub note: String,
}

/// The three-server, two-data-server example at unit storage is also quoted
/// with a per-query tally that disagrees with the closed form.
const N3K2_NOTE: &str = "closed form 3f(2); per-query tally of 0.22ML over 6 queries gives 1.320";

fn table_lines(n: usize, eps: f64, rows: &[TableRow]) -> Vec<TableLine> {
    rows.iter()
        .map(|row| TableLine {
            k: row.k,
            omega: fixed3(ratio_to_f64(&row.rate)),
            delta: fixed3(row.access),
            delta_prime: fixed3(ratio_to_f64(&row.access_uncoded)),
            note: if n == 3 && row.k == 2 && eps == 1.0 {
                N3K2_NOTE.into()
            } else {
                String::new()
            },
        })
        .collect()
}

/// Both tables: every `K` with the plain split, and the rows where the
/// gcd-refined split improves access (`gcd(K, N-K) > 1`).
pub fn render_tables(n: usize, eps: f64, format: Format) -> Result<[(String, String); 2]> {
    if n < 2 {
        return Err(param(format!("need N >= 2, got {n}")));
    }
    if eps.is_nan() || eps < 1.0 || eps.is_infinite() {
        return Err(param(format!("need eps >= 1, got {eps}")));
    }
    let plain = tajeddine_table(n, eps, false)?;
    let refined: Vec<TableRow> = tajeddine_table(n, eps, true)?
        .into_iter()
        .filter(|row| row.gcd > 1)
        .collect();
    let ext = format.extension();
    Ok([
        (
            format!("table1.{ext}"),
            render_records(&table_lines(n, eps, &plain), format)?,
        ),
        (
            format!("table2.{ext}"),
            render_records(&table_lines(n, eps, &refined), format)?,
        ),
    ])
}

/// Writes `table1` and `table2` into `out_dir`, returning the paths.
pub fn cmd_tables(n: usize, eps: f64, out_dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let files = render_tables(n, eps, format)?;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        write_output(Some(&path), &content)?;
        paths.push(path);
    }
    Ok(paths)
}

// ---------------------------------------------------------------- tuple

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TupleLine {
    pub construction: &'static str,
    #[serde(rename = "N")]
    pub n: usize,
    pub eps: f64,
    pub rate: String,
    #[serde(rename = "Omega")]
    pub omega: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
}

/// An achievable point from either the MDS-coded construction (`k`) or
/// memory sharing between replicated schemes (`p/q`). Full precision.
pub fn render_tuple(
    n: usize,
    k: Option<usize>,
    pq: Option<(usize, usize)>,
    eps: f64,
    format: Format,
) -> Result<String> {
    let (construction, t) = match (k, pq) {
        (Some(k), None) => ("mds-coded", tajeddine_tuple(n, k, eps)?),
        (None, Some((p, q))) => ("memory-sharing", memory_sharing_tuple(n, p, q, eps)?),
        _ => return Err(param("give either --k or both --p and --q")),
    };
    render_records(
        &[TupleLine {
            construction,
            n,
            eps,
            rate: t.rate.to_string(),
            omega: t.rate_f64(),
            delta: t.access,
        }],
        format,
    )
}

// ---------------------------------------------------------------- curve

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct CurvePoint {
    beta: f64,
    alpha: f64,
}

/// Samples of `alpha = f(beta)` at full precision.
pub fn render_curve(beta_min: f64, beta_max: f64, steps: usize, format: Format) -> Result<String> {
    let points: Vec<CurvePoint> = curve_samples(beta_min, beta_max, steps)?
        .into_iter()
        .map(|(beta, alpha)| CurvePoint { beta, alpha })
        .collect();
    render_records(&points, format)
}

pub fn cmd_curve(
    beta_min: f64,
    beta_max: f64,
    steps: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<()> {
    write_output(out, &render_curve(beta_min, beta_max, steps, format)?)
}

// ---------------------------------------------------------------- codes

fn spec_arg(spec: &str, name: &str) -> Option<Result<usize>> {
    let rest = spec.strip_prefix(name)?;
    let rest = rest.strip_prefix([':', '=', ' '])?;
    Some(
        rest.trim()
            .parse()
            .map_err(|_| param(format!("bad number in code spec {spec:?}"))),
    )
}

/// A parity-check matrix from `hamming:m`, `ext-hamming:m`,
/// `sum-augmented:r`, `identity:r`, or a file holding either a bare matrix or
/// an exported code (whose radius header is then verified).
pub fn parse_matrix_spec(spec: &str) -> Result<BitMatrix> {
    if let Some(m) = spec_arg(spec, "hamming") {
        return Ok(hamming_parity(m?)?);
    }
    if let Some(m) = spec_arg(spec, "ext-hamming") {
        return Ok(extended_hamming_parity(m?)?);
    }
    if let Some(r) = spec_arg(spec, "sum-augmented") {
        return Ok(sum_augmented_identity(r?)?);
    }
    if let Some(r) = spec_arg(spec, "identity") {
        return Ok(BitMatrix::identity(r?));
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let has_header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.contains(char::is_whitespace));
    if has_header {
        Ok(CoveringCode::from_text(&text)?.parity_check().clone())
    } else {
        Ok(BitMatrix::parse_text(&text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CosetWeightLine {
    pub tau: usize,
    #[serde(rename = "R_tau")]
    pub r_tau: usize,
    /// Redundancy `n - k`, an upper bound on every `R_tau`.
    pub n_minus_k: usize,
}

pub fn coset_weight_table(spec: &str, tau_max: usize) -> Result<Vec<CosetWeightLine>> {
    if tau_max == 0 {
        return Err(param("need tau_max >= 1"));
    }
    let h = parse_matrix_spec(spec)?;
    if h.rank() != h.rows() {
        return Err(param(format!(
            "parity-check matrix has rank {} < {} rows",
            h.rank(),
            h.rows()
        )));
    }
    (1..=tau_max)
        .map(|tau| {
            Ok(CosetWeightLine {
                tau,
                r_tau: max_tau_coset_weight(&h, tau)?,
                n_minus_k: h.rows(),
            })
        })
        .collect()
}

pub fn cmd_coset_weights(
    spec: &str,
    tau_max: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<()> {
    write_output(
        out,
        &render_records(&coset_weight_table(spec, tau_max)?, format)?,
    )
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// Uniform random files from a ChaCha8 stream with this seed.
    Random(u64),
    /// Raw bytes, files laid out back to back, MSB first.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub scheme: SchemeId,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub trials: usize,
    pub backend: String,
    pub seed: u64,
    pub data: DataSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateSummary {
    pub scheme: SchemeId,
    #[serde(rename = "N")]
    pub servers: usize,
    #[serde(rename = "M")]
    pub files: usize,
    #[serde(rename = "L")]
    pub file_bits: usize,
    pub backend: String,
    /// `exhaustive` (every file under every randomness value) or `sampled`.
    pub mode: &'static str,
    pub runs: usize,
    pub correct: usize,
    pub rate: String,
    pub rate_value: f64,
    pub delta_sum_worst: f64,
    pub delta_sum_mean: f64,
    pub delta_union_worst: f64,
    pub delta_union_mean: f64,
    /// Most symbols any one server read in a run, counting repeats / once.
    pub server_sum_worst: usize,
    pub server_union_worst: usize,
    /// Most symbols read for a single query.
    pub query_worst: usize,
    /// Largest total-variation distance between per-file query
    /// distributions; only computed for exhaustive runs.
    pub privacy_tv: Option<f64>,
}

/// Resolves a backend name for `symbols` independent substrings per server.
pub fn parse_backend(name: &str, scheme: SchemeId, n: usize, m: usize) -> Result<Backend> {
    let r = scheme.symbols_per_server(n, m);
    let backend = match name {
        "identity" => return Ok(Backend::Identity),
        "sum-augmented" => Backend::sum_augmented(r)?,
        "restricted-example3" => {
            if (scheme, n, m) != (SchemeId::Bep, 3, 3) {
                return Err(param(
                    "restricted-example3 stores 3 files in 2 parts: use --scheme bep --n 3 --m 3",
                ));
            }
            return Ok(Backend::Restricted(Arc::new(RestrictedDesign::example3())));
        }
        spec => Backend::Coded(Arc::new(build_code(&parse_matrix_spec(spec)?)?)),
    };
    if let Backend::Coded(code) = &backend {
        if code.redundancy() != r {
            return Err(param(format!(
                "{scheme} with N={n}, M={m} needs redundancy {r}, backend {name:?} has {}",
                code.redundancy()
            )));
        }
    }
    Ok(backend)
}

fn load_database(cfg: &SimulateConfig) -> Result<Database> {
    match &cfg.data {
        DataSource::Random(seed) => Ok(Database::random(cfg.m, cfg.l, *seed)?),
        DataSource::File(path) => {
            let bytes = fs::read(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(Database::from_bytes(&bytes, cfg.m, cfg.l)?)
        }
    }
}

pub fn simulate(cfg: &SimulateConfig) -> Result<SimulateSummary> {
    let SimulateConfig { scheme, m, l, .. } = *cfg;
    let n = scheme.server_count(cfg.n);
    if n < 2 || m == 0 || l == 0 {
        return Err(param(format!(
            "need N >= 2, M >= 1, L >= 1; got N={n}, M={m}, L={l}"
        )));
    }
    let parts = scheme.parts(n);
    if l % parts != 0 {
        return Err(param(format!(
            "{scheme} with N={n} needs L divisible by {parts}, got L={l}"
        )));
    }
    let backend = parse_backend(&cfg.backend, scheme, n, m)?;
    let db = load_database(cfg)?;

    let space = randomness_space(scheme, n, m);
    let exhaustive = space.is_some_and(|s| s <= EXHAUSTIVE_LIMIT);
    let jobs: Vec<(usize, pirac::pirsim::Randomness)> = if exhaustive {
        let draws = enumerate_randomness(scheme, n, m, EXHAUSTIVE_LIMIT)?;
        (1..=m)
            .flat_map(|f| draws.iter().map(move |r| (f, r.clone())))
            .collect()
    } else {
        if cfg.trials == 0 {
            return Err(param("sampled runs need --trials >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.trials)
            .map(|_| {
                let f = rng.random_range(1..=m);
                (f, draw_randomness(scheme, n, m, &mut rng))
            })
            .collect()
    };

    let mut s = SimulateSummary {
        scheme,
        servers: n,
        files: m,
        file_bits: l,
        backend: backend.describe(),
        mode: if exhaustive { "exhaustive" } else { "sampled" },
        runs: jobs.len(),
        correct: 0,
        rate: String::new(),
        rate_value: 0.0,
        delta_sum_worst: 0.0,
        delta_sum_mean: 0.0,
        delta_union_worst: 0.0,
        delta_union_mean: 0.0,
        server_sum_worst: 0,
        server_union_worst: 0,
        query_worst: 0,
        privacy_tv: None,
    };
    let mut rate = None;
    for (f, r) in &jobs {
        let t = run_scheme(scheme, n, &db, *f, r, &backend)?;
        s.correct += t.is_correct(&db) as usize;
        let report = access_report(&t);
        let (ds, du) = (report.delta_sum_f64(), report.delta_union_f64());
        s.delta_sum_worst = s.delta_sum_worst.max(ds);
        s.delta_union_worst = s.delta_union_worst.max(du);
        s.delta_sum_mean += ds;
        s.delta_union_mean += du;
        for (server, acc) in t.servers.iter().zip(&report.per_server) {
            s.server_sum_worst = s.server_sum_worst.max(acc.sum_symbols);
            s.server_union_worst = s.server_union_worst.max(acc.union_symbols);
            let q = server
                .access
                .per_query
                .iter()
                .map(Vec::len)
                .max()
                .unwrap_or(0);
            s.query_worst = s.query_worst.max(q);
        }
        let this = t.rate();
        if rate.is_some_and(|prev| prev != this) {
            return Err(param(format!("rate changed between runs of {scheme}")));
        }
        rate = Some(this);
    }
    let runs = jobs.len().max(1) as f64;
    s.delta_sum_mean /= runs;
    s.delta_union_mean /= runs;
    if let Some(rate) = rate {
        s.rate = rate.to_string();
        s.rate_value = ratio_to_f64(&rate);
    }
    if exhaustive {
        s.privacy_tv = Some(privacy_audit(scheme, n, m)?);
    }
    Ok(s)
}

pub fn cmd_simulate(
    cfg: &SimulateConfig,
    out: Option<&Path>,
    format: Format,
) -> Result<SimulateSummary> {
    let summary = simulate(cfg)?;
    write_output(
        out,
        &render_records(std::slice::from_ref(&summary), format)?,
    )?;
    Ok(summary)
}

// ---------------------------------------------------------------- query shape

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeLine {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub r: usize,
    pub length: usize,
    pub radius: usize,
    pub trials: usize,
    pub delta_sum_worst: f64,
    pub delta_sum_mean: f64,
    pub delta_union_worst: f64,
    pub delta_union_mean: f64,
    /// `N * radius / r`: every one of the `NK` queries reads at most
    /// `radius` substrings of `L / (K (N - K))` bits.
    pub delta_bound: f64,
}

/// Access of `K` random queries per server over a code with redundancy
/// `M (N - K)`; `backend` is `identity`, `sum-augmented` or a code spec.
pub fn query_shape(
    n: usize,
    k: usize,
    m: usize,
    backend: &str,
    trials: usize,
    seed: u64,
) -> Result<ShapeLine> {
    if k == 0 || k >= n || m == 0 {
        return Err(param(format!(
            "need 1 <= K < N and M >= 1, got N={n}, K={k}, M={m}"
        )));
    }
    let r = m * (n - k);
    let h = match backend {
        "identity" => BitMatrix::identity(r),
        "sum-augmented" => sum_augmented_identity(r)?,
        spec => parse_matrix_spec(spec)?,
    };
    if h.rows() != r {
        return Err(param(format!(
            "need redundancy M(N-K) = {r}, code has {}",
            h.rows()
        )));
    }
    let code = build_code(&h)?;
    let stats = mds_query_shape(n, k, &code, trials, seed)?;
    Ok(ShapeLine {
        n,
        k,
        m,
        r,
        length: code.length(),
        radius: code.radius(),
        trials,
        delta_sum_worst: stats.worst_sum,
        delta_sum_mean: stats.mean_sum,
        delta_union_worst: stats.worst_union,
        delta_union_mean: stats.mean_union,
        delta_bound: n as f64 * code.radius() as f64 / r as f64,
    })
}

// ---------------------------------------------------------------- search

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub length: usize,
    pub r: usize,
    pub radius: usize,
    pub budget: u64,
    pub seed: u64,
    pub found: bool,
    pub attempts: u64,
    /// The sphere-covering bound already rules the parameters out.
    pub impossible: bool,
}

/// Runs the randomized search. On success `out` receives the code in the
/// importable text format; otherwise it receives the report.
pub fn cmd_search(
    length: usize,
    r: usize,
    radius: usize,
    budget: u64,
    seed: u64,
    out: Option<&Path>,
    format: Format,
) -> Result<SearchReport> {
    let outcome = random_search(length, r, radius, budget, seed)?;
    let report = SearchReport {
        length,
        r,
        radius,
        budget,
        seed,
        found: outcome.code.is_some(),
        attempts: outcome.attempts,
        impossible: outcome.impossible,
    };
    let content = match &outcome.code {
        Some(code) => format!(
            "# random search: length {length}, r {r}, radius <= {radius}, seed {seed}, attempt {}\n{}",
            outcome.attempts,
            code.to_text()
        ),
        None => render_records(std::slice::from_ref(&report), format)?,
    };
    write_output(out, &content)?;
    Ok(report)
}
