//! The `ppm` command-line tool.
//!
//! Exit status: 0 contained (or a positive count), 3 not contained, 1 usage or
//! parse error, 2 a configured limit was exceeded, 4 a verification sweep found
//! a disagreement.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::count::MatchCount;
use crate::evenodd::{evenodd_contains_with, evenodd_count_with, Pruning};
use crate::families::{detect_2_monotone, gen_grid_two_track, gen_three_track, TrackGraph};
use crate::hardness::{count_colorful, parse_edge_file, psi_to_pppm, PppmInstance, PsiInstance};
use crate::perm::{incidence_graph, lis_lds, parse_permutation, Permutation};
use crate::solver::{Algorithm, Solver};
use crate::tdsolver::{
    solve_count_with_stats, solve_decision_with_stats, solve_strips_with_stats, StripCount,
};
use crate::treewidth::{exact_treewidth, min_fill_decomposition};
use crate::csp::build_csp;
use crate::oracle::{brute_contains, brute_count};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

/// Largest graph handed to the exact treewidth solver by `analyze`.
const EXACT_TW_VERTICES: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "ppm", version, about = "Exact permutation pattern matching")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the pattern occurs in the text.
    Solve(SolveArgs),
    /// Count occurrences of the pattern in the text.
    Count(CountArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Report structural properties of a permutation.
    Analyze(AnalyzeArgs),
    /// Cross-check every solver against brute force.
    Verify(VerifyArgs),
    /// Time the solvers on generated instances and print a table.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    #[arg(long, value_name = "FILE")]
    pub pattern: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub text: Option<PathBuf>,
    #[arg(long, default_value = "auto")]
    pub algo: Algorithm,
    /// Strip count for the strips algorithm.
    #[arg(long)]
    pub strips: Option<usize>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub max_k: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Count occurrences using every color once, on a colored instance file.
    #[arg(long)]
    pub colorful: bool,
    #[arg(long, value_name = "FILE")]
    pub instance: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// 2-increasing permutation containing a k × 2k grid.
    Grid {
        #[arg(long)]
        k: usize,
    },
    /// 3-increasing host for the split sequence of a permutation.
    ThreeTrack {
        #[arg(long, value_name = "FILE")]
        perm: PathBuf,
    },
    /// Colored instance from a partitioned subgraph isomorphism instance.
    Psi {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "FILE")]
        h: PathBuf,
        /// Class sizes, comma separated, one per vertex of H.
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<usize>,
    },
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long, value_name = "FILE")]
    pub perm: PathBuf,
    /// Write the tree decomposition used for the width report.
    #[arg(long, value_name = "FILE")]
    pub dump_td: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Exhaustive sweep over all texts up to this length.
    #[arg(long, default_value_t = 7)]
    pub max_n: usize,
    #[arg(long, default_value_t = 4)]
    pub max_k: usize,
    /// Additional random instances.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 12)]
    pub random_max_n: usize,
    #[arg(long, default_value_t = 6)]
    pub random_max_k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Families among random, grid, three-track.
    #[arg(long, value_delimiter = ',', default_value = "random,grid,three-track")]
    pub families: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "12,16")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "brute,treedp,evenodd")]
    pub algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rows of an algorithm after it first exceeds this many milliseconds are skipped.
    #[arg(long)]
    pub budget_ms: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

/// Solver-specific counters; absent fields do not apply to the algorithm used.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0_tried: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bags: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guesses: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub algorithm: String,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contains: Option<bool>,
    /// Decimal, as a string so that no consumer truncates it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    pub elapsed_ns: u64,
    pub stats: Stats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub n: usize,
    pub lis: usize,
    pub lds: usize,
    pub incidence_edges: usize,
    pub tracks: usize,
    pub two_monotone: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub increasing_part: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decreasing_part: Option<Vec<usize>>,
    pub min_fill_width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub treewidth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub solver: String,
    pub text: String,
    pub pattern: String,
    pub expected_contains: bool,
    pub got_contains: bool,
    pub expected_count: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub got_count: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub instances: usize,
    pub solvers: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disagreement: Option<Disagreement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub algo: String,
    pub contains: String,
    pub count: String,
    pub width: usize,
    pub elapsed_ns: u64,
    pub width_lower_bound: String,
}

pub const BENCH_HEADER: &str = "family,n,k,algo,contains,count,width,elapsed_ns,width_lower_bound";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.family,
            self.n,
            self.k,
            self.algo,
            self.contains,
            self.count,
            self.width,
            self.elapsed_ns,
            self.width_lower_bound
        )
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn limit(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_LIMIT,
            message: message.into(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the tool with `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    configure_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_FOUND };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a.input, out),
        Command::Count(a) => cmd_count(&a, out),
        Command::Gen(g) => cmd_gen(&g, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Honors `PPM_THREADS` for the global worker pool; later calls are no-ops.
fn configure_threads() {
    if let Some(n) = std::env::var("PPM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_perm(path: &Path) -> Result<Permutation, Failure> {
    parse_permutation(&read_file(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, Failure> {
    p.as_deref().ok_or_else(|| Failure::usage(format!("missing --{flag}")))
}

fn load_pair(input: &InputArgs) -> Result<(Permutation, Permutation), Failure> {
    let pattern = read_perm(required(&input.pattern, "pattern")?)?;
    let text = read_perm(required(&input.text, "text")?)?;
    check_limits(input, text.len(), pattern.len())?;
    Ok((text, pattern))
}

fn check_limits(input: &InputArgs, n: usize, k: usize) -> Result<(), Failure> {
    if let Some(max) = input.max_n.filter(|&m| n > m) {
        return Err(Failure::limit(format!("text length {n} exceeds --max-n {max}")));
    }
    if let Some(max) = input.max_k.filter(|&m| k > m) {
        return Err(Failure::limit(format!("pattern length {k} exceeds --max-k {max}")));
    }
    Ok(())
}

fn chosen_algorithm(input: &InputArgs, n: usize, k: usize) -> Algorithm {
    match (input.algo.resolve(n, k), input.strips) {
        (Algorithm::Strips(_), Some(s)) => Algorithm::Strips(StripCount::Fixed(s)),
        (a, _) => a,
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        let _ = writeln!(out, "{}", serde_json::to_string(value).expect("reports serialize"));
    } else {
        let _ = writeln!(out, "{}", text());
    }
}

fn report_text(r: &Report) -> String {
    let mut s = String::new();
    if let Some(c) = r.contains {
        s.push_str(&format!("contains: {c}\n"));
    }
    if let Some(c) = &r.count {
        s.push_str(&format!("count: {c}\n"));
    }
    s.push_str(&format!("algorithm: {}\nn: {}\nk: {}\nelapsed_ns: {}", r.algorithm, r.n, r.k, r.elapsed_ns));
    let st = &r.stats;
    for (name, v) in [
        ("g0_tried", st.g0_tried.map(|v| v as usize)),
        ("bags", st.bags),
        ("width", st.width),
        ("guesses", st.guesses),
    ] {
        if let Some(v) = v {
            s.push_str(&format!("\n{name}: {v}"));
        }
    }
    s
}

fn decide(text: &Permutation, pattern: &Permutation, algo: Algorithm) -> (bool, Stats) {
    let mut stats = Stats::default();
    let found = match algo {
        Algorithm::TreeDp if pattern.len() <= text.len() => {
            let inst = build_csp(text, pattern);
            let td = min_fill_decomposition(&inst.constraint_graph());
            let (b, s) = solve_decision_with_stats(&inst, &td).expect("min-fill decompositions are valid");
            stats.bags = Some(s.nice_nodes);
            stats.width = Some(s.width);
            b
        }
        Algorithm::Strips(s) => {
            let (b, st) = solve_strips_with_stats(text, pattern, s);
            stats.guesses = Some(st.guesses);
            stats.width = Some(st.max_width);
            b
        }
        Algorithm::EvenOdd => {
            let (b, st) = evenodd_contains_with(text, pattern, Pruning::ALL);
            stats.g0_tried = Some(st.yielded);
            b
        }
        other => other.contains(text, pattern),
    };
    (found, stats)
}

fn tally(text: &Permutation, pattern: &Permutation, algo: Algorithm) -> Result<(MatchCount, Stats), Failure> {
    let mut stats = Stats::default();
    let c = match algo {
        Algorithm::TreeDp if pattern.len() <= text.len() => {
            let inst = build_csp(text, pattern);
            let td = min_fill_decomposition(&inst.constraint_graph());
            let (c, s) = solve_count_with_stats(&inst, &td).expect("min-fill decompositions are valid");
            stats.bags = Some(s.nice_nodes);
            stats.width = Some(s.width);
            c
        }
        Algorithm::EvenOdd => {
            let (c, st) = evenodd_count_with(text, pattern, Pruning::ALL);
            stats.g0_tried = Some(st.yielded);
            c
        }
        Algorithm::Strips(_) => return Err(Failure::usage("the strips algorithm only decides; pick another for counting")),
        other => other.count(text, pattern).expect("counting solver"),
    };
    Ok((c, stats))
}

fn cmd_solve(input: &InputArgs, out: &mut dyn Write) -> CmdResult {
    let (text, pattern) = load_pair(input)?;
    let algo = chosen_algorithm(input, text.len(), pattern.len());
    let start = Instant::now();
    let (found, stats) = decide(&text, &pattern, algo);
    let report = Report {
        command: "solve".into(),
        algorithm: algo.to_string(),
        n: text.len(),
        k: pattern.len(),
        contains: Some(found),
        count: None,
        elapsed_ns: start.elapsed().as_nanos() as u64,
        stats,
    };
    emit(out, input.json, &report, || report_text(&report));
    Ok(if found { EXIT_FOUND } else { EXIT_NOT_FOUND })
}

fn cmd_count(args: &CountArgs, out: &mut dyn Write) -> CmdResult {
    let input = &args.input;
    let start = Instant::now();
    let (n, k, algo, count, stats, command) = if args.colorful {
        let path = required(&args.instance, "instance")?;
        let inst: PppmInstance = read_file(path)?
            .parse()
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let (n, k) = (inst.text().len(), inst.pattern().len());
        check_limits(input, n, k)?;
        if k > 24 {
            return Err(Failure::limit(format!("{k} colors means 2^{k} backend calls")));
        }
        let algo = input.algo;
        if matches!(algo.resolve(n, k), Algorithm::Strips(_)) {
            return Err(Failure::usage("the strips algorithm only decides; pick another backend"));
        }
        let c = count_colorful(&inst, |t, p| algo.count(t, p).expect("counting backend"));
        (n, k, algo, c, Stats::default(), "count-colorful")
    } else {
        let (text, pattern) = load_pair(input)?;
        let algo = chosen_algorithm(input, text.len(), pattern.len());
        let (c, stats) = tally(&text, &pattern, algo)?;
        (text.len(), pattern.len(), algo, c, stats, "count")
    };
    let report = Report {
        command: command.into(),
        algorithm: algo.to_string(),
        n,
        k,
        contains: None,
        count: Some(count.to_string()),
        elapsed_ns: start.elapsed().as_nanos() as u64,
        stats,
    };
    emit(out, input.json, &report, || report_text(&report));
    Ok(if count.is_zero() { EXIT_NOT_FOUND } else { EXIT_FOUND })
}

fn cmd_gen(cmd: &GenCommand, out: &mut dyn Write) -> CmdResult {
    match cmd {
        GenCommand::Grid { k } => {
            let (host, cert) = gen_grid_two_track(*k).map_err(|e| Failure::usage(e.to_string()))?;
            cert.verify().expect("grid certificate");
            let _ = writeln!(out, "{host}");
        }
        GenCommand::ThreeTrack { perm } => {
            let pi = read_perm(perm)?;
            let tt = gen_three_track(&pi);
            tt.certificate.verify().expect("three-track certificate");
            let _ = writeln!(out, "{}", tt.host);
        }
        GenCommand::Psi { g, h, classes } => {
            let parse = |p: &Path| {
                parse_edge_file(&read_file(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
            };
            let psi = PsiInstance::new(parse(g)?, parse(h)?, classes).map_err(|e| Failure::usage(e.to_string()))?;
            let inst = psi_to_pppm(&psi).map_err(|e| Failure::usage(e.to_string()))?;
            let _ = write!(out, "{inst}");
        }
    }
    Ok(EXIT_FOUND)
}

pub fn analyze(sigma: &Permutation) -> (AnalyzeReport, crate::treewidth::TreeDecomposition) {
    let (lis, lds) = lis_lds(sigma);
    let ig = incidence_graph(sigma);
    let heuristic = min_fill_decomposition(ig.graph());
    let exact = (sigma.len() <= EXACT_TW_VERTICES)
        .then(|| exact_treewidth(ig.graph(), EXACT_TW_VERTICES).ok())
        .flatten();
    let parts = detect_2_monotone(sigma);
    let report = AnalyzeReport {
        n: sigma.len(),
        lis,
        lds,
        incidence_edges: ig.graph().edge_count(),
        tracks: TrackGraph::new(sigma).track_count(),
        two_monotone: parts.is_some(),
        increasing_part: parts.as_ref().map(|p| p.0.clone()),
        decreasing_part: parts.map(|p| p.1),
        min_fill_width: heuristic.width(),
        treewidth: exact.as_ref().map(|td| td.width()),
    };
    (report, exact.unwrap_or(heuristic))
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> CmdResult {
    let sigma = read_perm(&args.perm)?;
    let (report, td) = analyze(&sigma);
    if let Some(path) = &args.dump_td {
        std::fs::write(path, td.to_dump()).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    emit(out, args.json, &report, || {
        let mut s = format!(
            "n: {}\nlis: {}\nlds: {}\n{}-increasing, {}-decreasing\nincidence_edges: {}\ntracks: {}\ntwo_monotone: {}\nmin_fill_width: {}",
            report.n,
            report.lis,
            report.lds,
            report.lds,
            report.lis,
            report.incidence_edges,
            report.tracks,
            report.two_monotone,
            report.min_fill_width
        );
        if let Some(tw) = report.treewidth {
            s.push_str(&format!("\ntreewidth: {tw}"));
        }
        s
    });
    Ok(EXIT_FOUND)
}

/// Random `(text, pattern)` pairs, a pure function of the arguments.
pub fn random_instances(seed: u64, count: usize, max_n: usize, max_k: usize) -> Vec<(Permutation, Permutation)> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n.max(1));
            let k = rng.gen_range(1..=max_k.clamp(1, n));
            (Permutation::random(n, &mut rng), Permutation::random(k, &mut rng))
        })
        .collect()
}

fn check_one(solvers: &[&dyn Solver], text: &Permutation, pattern: &Permutation) -> Option<Disagreement> {
    let want_count = brute_count(text, pattern);
    let want = brute_contains(text, pattern);
    for s in solvers {
        let got = s.contains(text, pattern);
        let got_count = s.count(text, pattern);
        if got != want || got_count.as_ref().is_some_and(|c| *c != want_count) {
            return Some(Disagreement {
                solver: s.name(),
                text: text.to_string(),
                pattern: pattern.to_string(),
                expected_contains: want,
                got_contains: got,
                expected_count: want_count.to_string(),
                got_count: got_count.map(|c| c.to_string()),
            });
        }
    }
    None
}

/// Compares every solver with brute force, exhaustively over lengths in
/// increasing `(n, k)` order and then on seeded random instances. The first
/// disagreement found is a smallest one.
pub fn verify_sweep(solvers: &[&dyn Solver], cfg: &VerifyArgs) -> VerifySummary {
    let mut instances = 0;
    let names = solvers.iter().map(|s| s.name()).collect();
    let done = |instances, disagreement| VerifySummary {
        instances,
        solvers: names,
        disagreement,
    };
    for n in 1..=cfg.max_n {
        let texts: Vec<Permutation> = Permutation::all(n).collect();
        for k in 1..=cfg.max_k.min(n) {
            let patterns: Vec<Permutation> = Permutation::all(k).collect();
            let bad = texts
                .par_iter()
                .flat_map_iter(|t| patterns.iter().map(move |p| (t, p)))
                .find_map_first(|(t, p)| check_one(solvers, t, p));
            instances += texts.len() * patterns.len();
            if bad.is_some() {
                return done(instances, bad);
            }
        }
    }
    let random = random_instances(cfg.seed, cfg.random, cfg.random_max_n, cfg.random_max_k);
    let bad = random.par_iter().find_map_first(|(t, p)| check_one(solvers, t, p));
    instances += random.len();
    done(instances, bad)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let solvers: Vec<Algorithm> = vec![
        Algorithm::TreeDp,
        Algorithm::EvenOdd,
        Algorithm::Strips(StripCount::Fixed(1)),
        Algorithm::Strips(StripCount::Fixed(2)),
    ];
    let refs: Vec<&dyn Solver> = solvers.iter().map(|s| s as &dyn Solver).collect();
    let summary = verify_sweep(&refs, args);
    emit(out, args.json, &summary, || match &summary.disagreement {
        None => format!("ok: {} instances, solvers {}", summary.instances, summary.solvers.join(",")),
        Some(d) => format!(
            "DISAGREEMENT solver={} text=\"{}\" pattern=\"{}\" expected contains={} count={} got contains={} count={}",
            d.solver,
            d.text,
            d.pattern,
            d.expected_contains,
            d.expected_count,
            d.got_contains,
            d.got_count.as_deref().unwrap_or("-")
        ),
    });
    Ok(if summary.disagreement.is_some() { EXIT_DISAGREE } else { EXIT_FOUND })
}

/// A random text of length `n` with `pattern` planted at random positions and values.
fn plant<R: rand::Rng>(pattern: &Permutation, n: usize, rng: &mut R) -> Permutation {
    use rand::seq::index::sample;
    let k = pattern.len();
    let mut positions = sample(rng, n, k).into_vec();
    let mut values = sample(rng, n, k).into_vec();
    positions.sort_unstable();
    values.sort_unstable();
    let mut slots = vec![0usize; n];
    let mut used = vec![false; n];
    for (j, &pos) in positions.iter().enumerate() {
        let v = values[pattern.value(j + 1) - 1];
        slots[pos] = v + 1;
        used[v] = true;
    }
    let mut rest: Vec<usize> = (0..n).filter(|&v| !used[v]).map(|v| v + 1).collect();
    use rand::seq::SliceRandom;
    rest.shuffle(rng);
    let mut rest = rest.into_iter();
    for s in slots.iter_mut().filter(|s| **s == 0) {
        *s = rest.next().unwrap();
    }
    Permutation::new(slots).expect("planted permutation")
}

/// Rows of the benchmark table, in generation order.
pub fn bench_rows(args: &BenchArgs) -> Result<Vec<BenchRow>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::new();
    let mut over_budget: Vec<(String, Algorithm)> = Vec::new();
    for family in args.families.iter().filter(|f| !f.is_empty()) {
        for &n in &args.n {
            for &k in &args.k {
                let (pattern, lower) = match family.as_str() {
                    "random" => (Permutation::random(k.max(1), &mut rng), String::new()),
                    "grid" => match gen_grid_two_track(k) {
                        Ok((host, _)) => (host, k.to_string()),
                        Err(_) => continue,
                    },
                    "three-track" => {
                        let base = Permutation::random(k.max(1), &mut rng);
                        (gen_three_track(&base).host, String::new())
                    }
                    other => return Err(format!("unknown family {other:?}")),
                };
                let text = if family == "random" || pattern.len() > n {
                    Permutation::random(n.max(1), &mut rng)
                } else {
                    plant(&pattern, n, &mut rng)
                };
                let width = min_fill_decomposition(incidence_graph(&pattern).graph()).width();
                for &algo in &args.algos {
                    let key = (family.clone(), algo);
                    let mut row = BenchRow {
                        family: family.clone(),
                        n: text.len(),
                        k,
                        algo: algo.to_string(),
                        contains: "skipped".into(),
                        count: "skipped".into(),
                        width,
                        elapsed_ns: 0,
                        width_lower_bound: lower.clone(),
                    };
                    if !over_budget.contains(&key) {
                        let start = Instant::now();
                        let resolved = algo.resolve(text.len(), pattern.len());
                        row.contains = resolved.contains(&text, &pattern).to_string();
                        row.count = resolved
                            .count(&text, &pattern)
                            .map_or_else(|| "-".to_string(), |c| c.to_string());
                        row.elapsed_ns = start.elapsed().as_nanos() as u64;
                        if args.budget_ms.is_some_and(|b| row.elapsed_ns > b * 1_000_000) {
                            over_budget.push(key);
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let rows = bench_rows(args).map_err(Failure::usage)?;
    if args.json {
        let _ = writeln!(out, "{}", serde_json::to_string(&rows).expect("rows serialize"));
    } else {
        let _ = writeln!(out, "{BENCH_HEADER}");
        for r in &rows {
            let _ = writeln!(out, "{}", r.to_csv());
        }
    }
    Ok(EXIT_FOUND)
}
