//! Instance file I/O, result records, and the benchmark runner behind the
//! `drinfeld` binary.
//!
//! The instance format is line-oriented text, coefficients little-endian:
//!
//! ```text
//! q 5
//! f 2 4 4 0 1
//! gamma 0 1 0 0
//! g 1 0 0 0
//! delta 1 0 0 0
//! ```
//!
//! `f` is the monic irreducible field modulus of degree n (n+1 entries);
//! the other three lines carry at most n residue coefficients each.

use std::fmt::Write as _;
use std::time::Instant;

use drinfeld::drinfeld::{random_instance, DrinfeldModule};
use drinfeld::solver::{solve, Algorithm, CharPolyResult};
use drinfeld::{ExtFieldCtx, Fq, FqPoly};

/// Syntactically validated instance data; field semantics (primality,
/// irreducibility, nonzero delta) are checked when the module is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawInstance {
    pub q: u64,
    pub f: Vec<u64>,
    pub gamma: Vec<u64>,
    pub g: Vec<u64>,
    pub delta: Vec<u64>,
}

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(w, "{}", self.message)
        } else {
            write!(w, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<RawInstance, ParseError> {
    let mut q: Option<u64> = None;
    let mut fields: [Option<(Vec<u64>, usize)>; 4] = [None, None, None, None];
    const NAMES: [&str; 4] = ["f", "gamma", "g", "delta"];
    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().expect("nonempty line");
        let values: Vec<&str> = parts.collect();
        if key == "q" {
            if q.is_some() {
                return Err(err(lineno, "duplicate q line"));
            }
            if values.len() != 1 {
                return Err(err(lineno, "expected exactly one value after q"));
            }
            q = Some(
                values[0]
                    .parse::<u64>()
                    .map_err(|e| err(lineno, format!("bad modulus {:?}: {e}", values[0])))?,
            );
            continue;
        }
        let Some(slot) = NAMES.iter().position(|&n| n == key) else {
            return Err(err(lineno, format!("unknown key {key:?}")));
        };
        if fields[slot].is_some() {
            return Err(err(lineno, format!("duplicate {key} line")));
        }
        if values.is_empty() {
            return Err(err(lineno, format!("{key} needs at least one coefficient")));
        }
        let mut coeffs = Vec::with_capacity(values.len());
        for v in values {
            coeffs.push(
                v.parse::<u64>()
                    .map_err(|e| err(lineno, format!("bad coefficient {v:?}: {e}")))?,
            );
        }
        fields[slot] = Some((coeffs, lineno));
    }
    let q = q.ok_or_else(|| err(0, "missing q line"))?;
    let [f, gamma, g, delta] = fields;
    let f = f.ok_or_else(|| err(0, "missing f line"))?;
    let gamma = gamma.ok_or_else(|| err(0, "missing gamma line"))?;
    let g = g.ok_or_else(|| err(0, "missing g line"))?;
    let delta = delta.ok_or_else(|| err(0, "missing delta line"))?;
    if f.0.len() < 2 {
        return Err(err(f.1, "f must have degree at least 1"));
    }
    if f.0.last() != Some(&1) {
        return Err(err(f.1, "f must be monic"));
    }
    let n = f.0.len() - 1;
    for (name, &(ref coeffs, lineno)) in
        [("f", &f), ("gamma", &gamma), ("g", &g), ("delta", &delta)]
    {
        if name != "f" && coeffs.len() > n {
            return Err(err(
                lineno,
                format!("{name} has more than n = {n} coefficients"),
            ));
        }
        if let Some(bad) = coeffs.iter().find(|&&c| c >= q) {
            return Err(err(
                lineno,
                format!("{name} coefficient {bad} is not reduced mod q = {q}"),
            ));
        }
    }
    Ok(RawInstance {
        q,
        f: f.0,
        gamma: gamma.0,
        g: g.0,
        delta: delta.0,
    })
}

pub fn format_instance(dm: &DrinfeldModule) -> String {
    let n = dm.n();
    let mut out = String::new();
    writeln!(out, "q {}", dm.fq().modulus()).unwrap();
    let f_coeffs: Vec<String> = (0..=n)
        .map(|i| dm.ctx().modulus().coeff(i).to_string())
        .collect();
    writeln!(out, "f {}", f_coeffs.join(" ")).unwrap();
    for (name, elem) in [
        ("gamma", dm.gamma_x()),
        ("g", dm.g()),
        ("delta", dm.delta()),
    ] {
        let coeffs: Vec<String> = (0..n).map(|i| elem.coeff(i).to_string()).collect();
        writeln!(out, "{name} {}", coeffs.join(" ")).unwrap();
    }
    out
}

/// Semantic validation; everything the text format cannot express
/// (primality, irreducibility) is enforced here, ahead of timing.
pub fn validate_instance(raw: &RawInstance) -> Result<(Fq, FqPoly), String> {
    let fq = Fq::new(raw.q).map_err(|e| e.to_string())?;
    let modulus = FqPoly::new(fq, &raw.f);
    if !drinfeld::moduli::irreducible_test(&modulus) {
        return Err("f: polynomial is not irreducible".into());
    }
    Ok((fq, modulus))
}

fn assemble(raw: &RawInstance, fq: Fq, modulus: FqPoly) -> Result<DrinfeldModule, String> {
    let ctx = ExtFieldCtx::new_unchecked(fq, modulus, Default::default());
    let gamma = ctx.elem(&raw.gamma);
    let g = ctx.elem(&raw.g);
    let delta = ctx.elem(&raw.delta);
    DrinfeldModule::new(ctx, gamma, g, delta).map_err(|e| e.to_string())
}

pub fn build_module(raw: &RawInstance) -> Result<DrinfeldModule, String> {
    let (fq, modulus) = validate_instance(raw)?;
    assemble(raw, fq, modulus)
}

/// One CSV row of the result schema `q,n,m,alg,seconds,retries,nu,A,B`,
/// little-endian coefficients semicolon-joined.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub alg: Algorithm,
    pub seconds: f64,
    pub retries: u32,
    pub nu: Option<usize>,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

pub const CSV_HEADER: &str = "q,n,m,alg,seconds,retries,nu,A,B";

impl ResultRecord {
    pub fn from_result(dm: &DrinfeldModule, res: &CharPolyResult, seconds: f64) -> Self {
        ResultRecord {
            q: dm.fq().modulus(),
            n: dm.n(),
            m: dm.m(),
            alg: res.algorithm,
            seconds,
            retries: res.retries,
            nu: res.nu,
            a: res.a.coeffs().to_vec(),
            b: res.b.coeffs().to_vec(),
        }
    }

    pub fn to_csv_line(&self) -> String {
        let join = |v: &[u64]| {
            v.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(";")
        };
        format!(
            "{},{},{},{},{:.6},{},{},{},{}",
            self.q,
            self.n,
            self.m,
            self.alg,
            self.seconds,
            self.retries,
            self.nu.map(|v| v.to_string()).unwrap_or_default(),
            join(&self.a),
            join(&self.b),
        )
    }

    pub fn parse_csv_line(line: &str) -> Result<Self, String> {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 9 {
            return Err(format!("expected 9 columns, found {}", cols.len()));
        }
        let ints = |s: &str| -> Result<Vec<u64>, String> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(';')
                .map(|v| v.parse::<u64>().map_err(|e| e.to_string()))
                .collect()
        };
        Ok(ResultRecord {
            q: cols[0].parse().map_err(|e| format!("q: {e}"))?,
            n: cols[1].parse().map_err(|e| format!("n: {e}"))?,
            m: cols[2].parse().map_err(|e| format!("m: {e}"))?,
            alg: cols[3].parse()?,
            seconds: cols[4].parse().map_err(|e| format!("seconds: {e}"))?,
            retries: cols[5].parse().map_err(|e| format!("retries: {e}"))?,
            nu: if cols[6].is_empty() {
                None
            } else {
                Some(cols[6].parse().map_err(|e| format!("nu: {e}"))?)
            },
            a: ints(cols[7])?,
            b: ints(cols[8])?,
        })
    }
}

/// Deterministic seed fan-out so each component draws from its own stream.
pub fn child_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = master ^ 0x9e37_79b9_7f4a_7c15;
    for &t in tags {
        state = state.wrapping_add(t).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}

/// Validates the raw instance, then runs one solver with the clock started
/// before the field context is built: the one-time `x^q` precomputation and
/// the characteristic derivation count toward every algorithm, input
/// validation does not.
pub fn timed_solve(
    raw: &RawInstance,
    alg: Algorithm,
    seed: u64,
) -> Result<(DrinfeldModule, CharPolyResult, f64), String> {
    let (fq, modulus) = validate_instance(raw)?;
    let start = Instant::now();
    let dm = assemble(raw, fq, modulus)?;
    let res = solve(&dm, alg, seed).map_err(|e| format!("{alg}: {e}"))?;
    let seconds = start.elapsed().as_secs_f64();
    Ok((dm, res, seconds))
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub qs: Vec<u64>,
    pub ns: Vec<usize>,
    pub ms: Vec<usize>,
    pub algs: Vec<Algorithm>,
    pub reps: u32,
    pub seed: u64,
    pub workers: usize,
}

pub struct BenchOutput {
    pub records: Vec<ResultRecord>,
    pub skipped: Vec<String>,
    /// `(algorithm, fitted log-log slope over n)`, when the sweep has at
    /// least two distinct n values.
    pub slopes: Vec<(Algorithm, f64)>,
}

/// Runs the grid. Instance generation is excluded from the timings; context
/// construction and solving are included. Cells are evaluated by a small
/// worker pool (`DRINFELD_THREADS` caps it) and emitted in grid order.
pub fn run_bench(cfg: &BenchConfig) -> BenchOutput {
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for &q in &cfg.qs {
        for &n in &cfg.ns {
            for &m in &cfg.ms {
                if m == 0 || n % m != 0 {
                    skipped.push(format!("skipping q={q} n={n} m={m}: m does not divide n"));
                    continue;
                }
                for rep in 0..cfg.reps {
                    cells.push((q, n, m, rep));
                }
            }
        }
    }
    let slots: Vec<std::sync::Mutex<Option<Vec<ResultRecord>>>> =
        (0..cells.len()).map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = cfg.workers.max(1).min(cells.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= cells.len() {
                    break;
                }
                let (q, n, m, rep) = cells[idx];
                let gen_seed = child_seed(cfg.seed, &[q, n as u64, m as u64, rep as u64]);
                let dm = random_instance(q, n, m, gen_seed).expect("valid grid cell");
                let raw = RawInstance {
                    q,
                    f: (0..=n).map(|i| dm.ctx().modulus().coeff(i)).collect(),
                    gamma: (0..n).map(|i| dm.gamma_x().coeff(i)).collect(),
                    g: (0..n).map(|i| dm.g().coeff(i)).collect(),
                    delta: (0..n).map(|i| dm.delta().coeff(i)).collect(),
                };
                drop(dm);
                let mut rows = Vec::with_capacity(cfg.algs.len());
                for &alg in &cfg.algs {
                    let solve_seed = child_seed(gen_seed, &[alg as u64 + 1]);
                    let (dm, res, seconds) =
                        timed_solve(&raw, alg, solve_seed).expect("bench solve");
                    rows.push(ResultRecord::from_result(&dm, &res, seconds));
                }
                *slots[idx].lock().expect("poisoned") = Some(rows);
            });
        }
    });
    let records: Vec<ResultRecord> = slots
        .into_iter()
        .flat_map(|s| s.into_inner().expect("poisoned").expect("all cells filled"))
        .collect();
    let slopes = fit_slopes(&records);
    BenchOutput {
        records,
        skipped,
        slopes,
    }
}

/// Least-squares slope of `ln(mean seconds)` against `ln n`, per algorithm.
pub fn fit_slopes(records: &[ResultRecord]) -> Vec<(Algorithm, f64)> {
    let mut out = Vec::new();
    for &alg in &Algorithm::ALL {
        let mut by_n: std::collections::BTreeMap<usize, (f64, u32)> =
            std::collections::BTreeMap::new();
        for r in records.iter().filter(|r| r.alg == alg) {
            let e = by_n.entry(r.n).or_insert((0.0, 0));
            e.0 += r.seconds;
            e.1 += 1;
        }
        if by_n.len() < 2 {
            continue;
        }
        let points: Vec<(f64, f64)> = by_n
            .iter()
            .map(|(&n, &(total, count))| ((n as f64).ln(), (total / count as f64).ln()))
            .collect();
        let len = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let slope = (len * sxy - sx * sy) / (len * sxx - sx * sx);
        out.push((alg, slope));
    }
    out
}

pub fn render_csv(records: &[ResultRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}
