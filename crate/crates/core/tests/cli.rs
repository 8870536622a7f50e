use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use ppm_core::cli::{bench_rows, random_instances, verify_sweep, BenchArgs, Report, VerifyArgs};
use ppm_core::oracle::brute_count;
use ppm_core::perm::incidence_graph;
use ppm_core::treewidth::{validate_decomposition, TreeDecomposition};
use ppm_core::{Algorithm, MatchCount, Permutation, Solver};

fn ppm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppm")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let text = write(&dir, "text", "1 5 4 6 3 7 8 2\n");
    let yes = write(&dir, "yes", "2 3 1");
    let no = write(&dir, "no", "3 1 2");
    let long = write(&dir, "long", "1 2 3 4 5 6 7 8 9");
    for algo in ["auto", "brute", "treedp", "strips", "strips:2", "evenodd"] {
        let o = ppm(&["solve", "--pattern", s(&yes), "--text", s(&text), "--algo", algo]);
        assert_eq!(code(&o), 0, "{algo}");
        assert!(stdout(&o).contains("contains: true"));
        assert_eq!(code(&ppm(&["solve", "--pattern", s(&no), "--text", s(&text), "--algo", algo])), 3);
    }
    assert_eq!(code(&ppm(&["solve", "--pattern", s(&long), "--text", s(&text)])), 3);
}

#[test]
fn usage_and_limit_errors() {
    let dir = TempDir::new().unwrap();
    let text = write(&dir, "text", "1 5 4 6 3 7 8 2");
    let bad = write(&dir, "bad", "1 1 2");
    let pat = write(&dir, "pat", "2 1");
    let o = ppm(&["solve", "--pattern", s(&bad), "--text", s(&text)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad"));
    assert_eq!(code(&ppm(&["solve", "--pattern", "/nonexistent", "--text", s(&text)])), 1);
    assert_eq!(code(&ppm(&["solve", "--text", s(&text)])), 1);
    assert_eq!(code(&ppm(&["solve", "--pattern", s(&pat), "--text", s(&text), "--algo", "quick"])), 1);
    assert_eq!(code(&ppm(&["frobnicate"])), 1);
    assert_eq!(code(&ppm(&["solve", "--pattern", s(&pat), "--text", s(&text), "--max-n", "4"])), 2);
    assert_eq!(code(&ppm(&["count", "--pattern", s(&pat), "--text", s(&text), "--max-k", "1"])), 2);
    assert_eq!(code(&ppm(&["count", "--pattern", s(&pat), "--text", s(&text), "--algo", "strips"])), 1);
}

#[test]
fn count_examples() {
    let dir = TempDir::new().unwrap();
    let text = write(&dir, "text", "1 5 4 6 3 7 8 2");
    let one = write(&dir, "one", "1");
    let up = write(&dir, "up", "1 2");
    let id3 = write(&dir, "id3", "1 2 3");
    let id6 = write(&dir, "id6", "1 2 3 4 5 6");
    for algo in ["brute", "treedp", "evenodd"] {
        let count = |p: &Path, t: &Path| stdout(&ppm(&["count", "--pattern", s(p), "--text", s(t), "--algo", algo]));
        assert!(count(&one, &text).starts_with("count: 8\n"), "{algo}");
        assert!(count(&up, &text).starts_with("count: 18\n"), "{algo}");
        assert!(count(&id3, &id6).starts_with("count: 20\n"), "{algo}");
    }
}

#[test]
fn json_reports_round_trip() {
    let dir = TempDir::new().unwrap();
    let text = write(&dir, "text", "1 5 4 6 3 7 8 2");
    let pat = write(&dir, "pat", "2 3 1");
    let want = brute_count(&"1 5 4 6 3 7 8 2".parse().unwrap(), &"2 3 1".parse().unwrap()).to_string();
    for (cmd, algo) in [("solve", "evenodd"), ("solve", "treedp"), ("solve", "strips"), ("count", "treedp"), ("count", "auto")] {
        let o = ppm(&[cmd, "--pattern", s(&pat), "--text", s(&text), "--algo", algo, "--json"]);
        let line = stdout(&o);
        let report: Report = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(serde_json::to_string(&report).unwrap(), line.trim());
        assert_eq!(report.n, 8);
        if cmd == "count" {
            assert_eq!(report.count.as_deref(), Some(want.as_str()));
        }
    }
}

#[test]
fn generators() {
    let o = ppm(&["gen", "grid", "--k", "4"]);
    assert_eq!(code(&o), 0);
    let host: Permutation = stdout(&o).trim().parse().unwrap();
    assert_eq!(host.len(), 32);
    assert_eq!(code(&ppm(&["gen", "grid", "--k", "3"])), 1);

    let dir = TempDir::new().unwrap();
    let pi = write(&dir, "pi", "4 3 5 2 1");
    let o = ppm(&["gen", "three-track", "--perm", s(&pi)]);
    assert_eq!(stdout(&o).split_whitespace().count(), 35);

    let g = write(&dir, "g", "# triangle\n3\n1 2\n2 3\n1 3\n");
    let h = write(&dir, "h", "2\n1 2\n");
    let o = ppm(&["gen", "psi", "--g", s(&g), "--h", s(&h), "--classes", "2,1"]);
    assert_eq!(code(&o), 0);
    let inst = write(&dir, "inst", &stdout(&o));
    let o = ppm(&["count", "--colorful", "--instance", s(&inst), "--algo", "treedp"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("count: 2\n"), "{}", stdout(&o));
}

#[test]
fn analyze_dumps_a_valid_decomposition() {
    let dir = TempDir::new().unwrap();
    let sigma = "6 3 8 5 4 2 1 7";
    let perm = write(&dir, "perm", sigma);
    let dump = dir.path().join("td");
    let o = ppm(&["analyze", "--perm", s(&perm), "--dump-td", s(&dump), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["n"], 8);
    let td = TreeDecomposition::from_dump(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    let g = incidence_graph(&sigma.parse().unwrap());
    assert!(validate_decomposition(g.graph(), &td));
    assert_eq!(Some(td.width() as u64), v["treewidth"].as_u64());
}

#[test]
fn verify_passes_and_is_deterministic() {
    let o = ppm(&["verify", "--max-n", "5", "--max-k", "3", "--random", "50", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("ok: "));
    assert_eq!(random_instances(3, 50, 12, 6), random_instances(3, 50, 12, 6));
    assert_ne!(random_instances(3, 50, 12, 6), random_instances(4, 50, 12, 6));
}

/// Tree DP with a planted fault on one shape of input.
struct Faulty;

impl Solver for Faulty {
    fn name(&self) -> String {
        "faulty".into()
    }

    fn contains(&self, text: &Permutation, pattern: &Permutation) -> bool {
        Algorithm::TreeDp.contains(text, pattern)
    }

    fn count(&self, text: &Permutation, pattern: &Permutation) -> Option<MatchCount> {
        let c = Algorithm::TreeDp.count(text, pattern)?;
        if text.len() >= 4 && pattern.to_string() == "2 1" && text.value(1) == 4 {
            return Some(MatchCount::from(c.to_u64().unwrap() + 1));
        }
        Some(c)
    }
}

#[test]
fn injected_fault_is_reported_minimally() {
    let cfg = VerifyArgs {
        max_n: 6,
        max_k: 3,
        random: 0,
        random_max_n: 0,
        random_max_k: 0,
        seed: 0,
        json: true,
    };
    let summary = verify_sweep(&[&Algorithm::EvenOdd, &Faulty], &cfg);
    let d = summary.disagreement.expect("fault found");
    assert_eq!(d.solver, "faulty");
    assert_eq!(d.pattern, "2 1");
    let text: Permutation = d.text.parse().unwrap();
    assert_eq!(text.len(), 4);
    assert_eq!(d.expected_count, brute_count(&text, &"2 1".parse().unwrap()).to_string());
    assert_ne!(d.got_count.as_deref(), Some(d.expected_count.as_str()));
}

#[test]
fn bench_rows_cross_check() {
    let args = BenchArgs {
        families: vec!["random".into(), "grid".into(), "three-track".into()],
        n: vec![12, 20],
        k: vec![2, 4],
        algos: vec![Algorithm::Brute, Algorithm::EvenOdd, Algorithm::TreeDp],
        seed: 1,
        budget_ms: None,
        json: false,
    };
    let rows = bench_rows(&args).unwrap();
    assert!(!rows.is_empty());
    for r in rows.iter().filter(|r| r.family == "grid") {
        assert_eq!(r.width_lower_bound, r.k.to_string());
        assert!(r.width >= r.k);
    }
    for chunk in rows.chunks(3) {
        assert_eq!(chunk[0].contains, chunk[1].contains, "{chunk:?}");
        assert_eq!(chunk[0].count, chunk[2].count, "{chunk:?}");
    }
    assert_eq!(bench_rows(&args).unwrap().len(), rows.len());
}

#[test]
fn bench_command_output() {
    let o = ppm(&["bench", "--families", "", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "[]");
    let o = ppm(&["bench", "--families", "grid", "--n", "10", "--k", "2", "--algos", "brute,evenodd"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "family,n,k,algo,contains,count,width,elapsed_ns,width_lower_bound");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("grid,10,2,brute,true,"));
    assert!(lines[1].ends_with(",2"));
    assert_eq!(code(&ppm(&["bench", "--families", "spiral"])), 1);
}

#[test]
fn thread_cap_is_honored() {
    let o = Command::new(env!("CARGO_BIN_EXE_ppm"))
        .args(["verify", "--max-n", "4", "--max-k", "2"])
        .env("PPM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}
