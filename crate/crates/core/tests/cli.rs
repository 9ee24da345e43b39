use std::path::Path;

use quiver_expanders::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("quiver-expanders")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_quiver(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn k3(dir: &Path) -> String {
    write_quiver(dir, "k3.quiver", "vertices: 1 2\narrow: 1 2 x3\n")
}

#[test]
fn classify_reports_class_and_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["classify", &k3(dir.path())]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "Wild; \u{3bb}1=-1, \u{3bb}2=5");
    assert!(out.contains("input-sha256="));
}

#[test]
fn epsilon_example() {
    let dir = tempfile::tempdir().unwrap();
    let q = k3(dir.path());
    let (code, out, err) = run(&[
        "epsilon", "--which", "eff", "--d", "1", "1", "--from-d", "--delta", "1/2", &q,
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().next().unwrap(), "3 witness (0,1)");
    let (_, opt, _) = run(&[
        "epsilon", &q, "--which", "opt", "--d", "1,1", "--from-d", "--delta", "1/4",
    ]);
    assert_eq!(opt.lines().next().unwrap(), "Unconstrained");
}

#[test]
fn appendix_example() {
    let (code, out, _) = run(&[
        "verify-appendix",
        "--n",
        "4",
        "--trials",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    let first = out.lines().next().unwrap();
    assert!(
        first.starts_with("1000/1000 pass; worst margin "),
        "{first}"
    );
    let margin: f64 = first.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(margin > 0.0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let q = k3(dir.path());
    let args = [
        "sample",
        &q,
        "--d",
        "2",
        "3",
        "--samples",
        "3",
        "--seed",
        "5",
        "--format",
        "json",
    ];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["meta"]["seed"], 5);
    assert_eq!(v["report"]["label"], "empirical");
    assert_eq!(v["meta"]["label"], "empirical");
    assert_eq!(v["meta"]["budget"]["lattice_points"], 10_000_000);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cyclic = write_quiver(
        dir.path(),
        "c.quiver",
        "vertices: 1 2\narrow: 1 2\narrow: 2 1\n",
    );
    let (code, _, err) = run(&["classify", &cyclic]);
    assert_eq!(code, 1);
    assert!(err.starts_with("CyclicQuiver"), "{err}");
    let q = k3(dir.path());
    let (code, _, err) = run(&["subreps", &q, "--d", "50", "50", "--budget", "100"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("BudgetExceeded"), "{err}");
    let (code, _, _) = run(&["embeds", &q, "--e", "3", "0", "--d", "2", "3"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&[
        "epsilon",
        &q,
        "--d",
        "1",
        "1",
        "--delta",
        "1/2",
        "--unknown",
    ]);
    assert_eq!(code, 1);
    let (code, _, err) = run(&[
        "certify",
        &write_quiver(dir.path(), "k2.quiver", "vertices: 1 2\narrow: 1 2 x2\n"),
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("NotWild"), "{err}");
}

#[test]
fn csv_reports_have_fixed_headers() {
    let dir = tempfile::tempdir().unwrap();
    let q = k3(dir.path());
    let body = |out: &str| {
        out.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let (_, out, _) = run(&[
        "scan", &q, "--d", "1", "1", "--from-d", "--delta", "1/2", "--kmax", "3", "--format", "csv",
    ]);
    assert!(body(&out).starts_with("k,delta,epsilon,witness,running_min\n1,1/2,3,\"(0,1)\",3"));
    let (_, out, _) = run(&[
        "coxeter", &q, "--orbit", "--vertex", "2", "--nmax", "2", "--format", "csv",
    ]);
    assert_eq!(body(&out), "k,dim\n0,\"(0,1)\"\n1,\"(3,8)\"\n2,\"(21,55)\"");
    let (_, out, _) = run(&[
        "kronecker",
        "--m",
        "3",
        "--d",
        "1",
        "1",
        "--translate",
        "--delta",
        "1/2",
        "--eps",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(
        body(&out),
        "delta,epsilon,delta_slope,epsilon_slope\n1/2,1,3/4,1/3"
    );
    let (_, out, _) = run(&[
        "kronecker",
        "--m",
        "3",
        "--d",
        "1",
        "1",
        "--curve",
        "--delta",
        "1/2",
        "--format",
        "csv",
    ]);
    assert!(body(&out).starts_with("delta,zeta,epsilon_bound\n1/2,0.38196601125,0.160357456591"));
}

#[test]
fn remaining_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let q = k3(dir.path());
    let (_, out, _) = run(&["form", &q, "--d", "1", "1", "--e", "0", "1"]);
    assert_eq!(out.lines().next().unwrap(), "euler=-2 sym=-1 antisym=-3");
    let (_, out, _) = run(&["embeds", &q, "--e", "1", "2", "--d", "2", "3"]);
    assert_eq!(out.lines().next().unwrap(), "true");
    let (_, out, _) = run(&["subreps", &q, "--d", "2", "3"]);
    let subs: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        subs,
        ["(0,0)", "(0,1)", "(0,2)", "(0,3)", "(1,2)", "(1,3)", "(2,3)"]
    );
    let (_, out, _) = run(&[
        "exists", &q, "--d", "1", "1", "--from-d", "--delta", "1/2", "--eps", "7/2",
    ]);
    assert_eq!(
        out.lines().next().unwrap(),
        "does not exist; violating (0,1)"
    );
    let (code, out, _) = run(&["certify", &q, "--d", "1", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["certificate"]["c_constant"], 1.0);
    assert_eq!(v["report"]["bounds"].as_array().unwrap().len(), 9);
    let (code, out, _) = run(&[
        "coxeter", &q, "--slopes", "--d", "1", "1", "--from-d", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 14);
    let (code, out, _) = run(&[
        "sample",
        &q,
        "--d",
        "1",
        "1",
        "--samples",
        "2",
        "--check",
        "--from-d",
        "--delta",
        "1/2",
        "--eps",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("seed=0 pass") && out.contains("(empirical verdicts)"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let q = k3(dir.path());
    let target = dir.path().join("report.json");
    let (code, out, _) = run(&[
        "classify",
        &q,
        "--format",
        "json",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["report"]["class"], "Wild");
}
