//! The `tensorlab` command line, in-process and as a spawned binary.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use tensorlab::cli::{run, Outcome};
use tensorlab::f2::oracle_ranks;

fn tl(args: &[&str]) -> Outcome {
    run(std::iter::once("tensorlab").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

/// `[X_1 | X_2]` of a `2 x 2 x 2` tensor in the text format.
fn tensor_222(x1: [[f64; 2]; 2], x2: [[f64; 2]; 2]) -> String {
    let mut s = String::from("2 2 2\n");
    for i in 0..2 {
        for j in 0..2 {
            s.push_str(&format!("{} {}\n", x1[i][j], x2[i][j]));
        }
    }
    s
}

fn field<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no `{key}` in {stdout:?}"))
}

#[test]
fn census_222_matches_oracle_and_cache_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c222.bin");
    let cache = cache.to_str().unwrap();
    let args = ["--dims", "2", "2", "2", "--cache", cache, "--format", "tsv", "census"];

    let cold = tl(&args);
    assert_eq!(cold.code, 0, "{}", cold.stderr);
    assert!(cold.stdout.starts_with("small="));
    assert!(cold.stdout.contains("max_rank=3"));
    assert!(cold.stderr.contains("computed"));

    let oracle = oracle_ranks([2, 2, 2]).unwrap();
    let mut want = [0u64; 4];
    for r in &oracle {
        want[*r as usize] += 1;
    }
    let counts: Vec<u64> = field(&cold.stdout, "# tensors")
        .split('\t')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(counts, want);
    assert_eq!(counts.iter().sum::<u64>(), 256);

    let warm = tl(&args);
    assert_eq!(warm.code, 0);
    assert_eq!(warm.stdout, cold.stdout);
    assert!(warm.stderr.contains("loaded"));

    let t1 = tl(&["--dims", "2", "2", "2", "--cache", cache, "table"]);
    let t2 = tl(&["--dims", "2", "2", "2", "--cache", cache, "table"]);
    assert_eq!(t1.code, 0);
    assert_eq!(t1.stdout, t2.stdout);

    for code in [1u32, 0x81, 0x96, 255] {
        let o = tl(&["--dims", "2", "2", "2", "--cache", cache, "rank-f2", &code.to_string()]);
        assert_eq!(o.code, 0);
        assert_eq!(field(&o.stdout, "rank"), oracle[code as usize].to_string(), "code {code}");
    }
}

#[test]
fn census_threads_and_low_memory_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (n, extra) in [&[][..], &["--threads", "3"], &["--low-memory"]].iter().enumerate() {
        let cache = dir.path().join(format!("c{n}.bin"));
        let mut args = vec!["--dims", "2", "2", "3", "--cache", cache.to_str().unwrap(), "census"];
        args.extend_from_slice(extra);
        let o = tl(&args);
        assert_eq!(o.code, 0, "{}", o.stderr);
        outputs.push((o.stdout, std::fs::read(&cache).unwrap()));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn table_without_cache_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("missing.bin");
    let o = tl(&["--cache", cache.to_str().unwrap(), "table"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("census"));
}

#[test]
fn orbit_of_a_simple_tensor() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.bin");
    let o = tl(&["--dims", "2", "2", "2", "--cache", cache.to_str().unwrap(), "orbit-f2", "0x80", "--list"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    // Nonzero vectors of F2^2 come in 3 kinds, so 27 simple tensors.
    assert!(o.stdout.contains("small_orbit 1 size 27"));
    let listed: Vec<u32> = o.stdout.lines().skip(4).map(|l| l.parse().unwrap()).collect();
    assert_eq!(listed.len(), 27);
    assert!(listed.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn f2_code_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.bin");
    let f = write(dir.path(), "t.txt", "2 2 2\n1 0 0 0\n0 0 0 1\n");
    let o = tl(&["--dims", "2", "2", "2", "--cache", cache.to_str().unwrap(), "rank-f2", &f]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "code"), "129");
    assert_eq!(field(&o.stdout, "rank"), "2");
}

#[test]
fn hyperdeterminant_of_the_deformed_family() {
    let dir = tempfile::tempdir().unwrap();
    for a in [0.5f64, 1.0, 2.0] {
        // det(X_2 - t X_1) = t^2 - a^2, discriminant 4 a^2.
        let f = write(dir.path(), "y.txt", &tensor_222([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [a * a, 0.0]]));
        let o = tl(&["hyperdet", &f]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let delta: f64 = field(&o.stdout, "hyperdeterminant").parse().unwrap();
        assert!((delta - 4.0 * a * a).abs() <= 1e-12);
        assert_eq!(field(&tl(&["rank222", &f]).stdout, "rank"), "2");
    }
}

#[test]
fn decompose_prints_terms_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.txt", &tensor_222([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]]));
    let o = tl(&["decompose", &x]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "terms"), "3");
    assert_eq!(field(&tl(&["rank222", &x]).stdout, "rank"), "3");

    let d = write(dir.path(), "x.dec", &o.stdout);
    let v = tl(&["verify", &x, &d]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    assert!(v.stdout.ends_with("ok\n"));

    // Dropping a term breaks the sum.
    let mut lines: Vec<&str> = o.stdout.lines().collect();
    lines.remove(2);
    lines[1] = "terms 2";
    let bad = write(dir.path(), "bad.dec", &lines.join("\n"));
    let v = tl(&["verify", &x, &bad]);
    assert_eq!(v.code, 1);
    assert!(v.stdout.contains("exceeds"));
}

#[test]
fn decompose_diagonal_pencil_332() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("3 3 2\n");
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = if i == j { (1.0, [2.0, -1.0, 0.5][i]) } else { (0.0, 0.0) };
            body.push_str(&format!("{a} {b}\n"));
        }
    }
    let f = write(dir.path(), "d.txt", &body);
    let o = tl(&["decompose", &f]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "terms"), "3");
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.txt", "2 2 2\n1 0\n0 1+\n0 0\n1 0\n");
    let o = tl(&["decompose", &f]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("line 3, column 3"), "{}", o.stderr);
}

#[test]
fn dims_flag_must_match_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.txt", &tensor_222([[1.0, 0.0], [0.0, 1.0]], [[0.0; 2]; 2]));
    assert_eq!(tl(&["--dims", "3", "3", "3", "decompose", &f]).code, 1);
    assert_eq!(tl(&["--dims", "2", "2", "2", "decompose", &f]).code, 0);
}

#[test]
fn binary_reads_stdin_and_sets_exit_status() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tensorlab"))
        .args(["decompose", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"1 1 1\n2-3i\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().nth(1), Some("terms 1"));

    let out = Command::new(env!("CARGO_BIN_EXE_tensorlab"))
        .args(["--dims", "9", "9", "9", "census"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
