use std::path::Path;
use std::process::{Command, Output};

use duality_cli::output::{quantize_record, read_fringe_csv, read_sweep_csv, read_sweep_json};
use duality_cli::sweep::compute_sweep;
use duality_cli::SweepConfig;

fn duality(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn default_sweep_golden_rows() {
    let text = stdout(&duality(&["sweep"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 22);
    assert_eq!(lines[0], "phi,V,D_geo,D_lik,E,duality_sum");
    assert_eq!(lines[1], "0,1,0,0,0,1");
    let mid: Vec<f64> = lines[9].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(lines[9].split(',').next(), Some("1.57079633"));
    assert!(mid[1].abs() < 1e-12);
    assert_eq!(&mid[2..], &[1.0, 1.0, 1.0, 1.0]);
    assert_eq!(
        lines[5],
        "0.785398163,0.707106781,0.707106781,0.707106781,0.600876037,1"
    );
}

#[test]
fn sweep_file_reparses_to_quantized_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    stdout(&duality(&[
        "sweep",
        "--out",
        path_arg(&out),
        "--workers",
        "2",
    ]));
    let back = read_sweep_csv(std::fs::File::open(&out).unwrap()).unwrap();
    let want: Vec<_> = compute_sweep(&SweepConfig::default())
        .unwrap()
        .iter()
        .map(quantize_record)
        .collect();
    assert_eq!(back, want);

    let json = dir.path().join("sweep.json");
    stdout(&duality(&[
        "sweep",
        "--format",
        "json",
        "--out",
        path_arg(&json),
    ]));
    assert_eq!(
        read_sweep_json(std::fs::File::open(&json).unwrap()).unwrap(),
        want
    );
}

#[test]
fn seeded_noisy_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        stdout(&duality(&[
            "sweep",
            "--noise-miscal",
            "0.05",
            "--seed",
            seed,
            "--shots",
            "4000",
            "--phi-end",
            "pi",
            "--out",
            path_arg(&p),
        ]));
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv", "3");
    assert_eq!(a, run("b.csv", "3"));
    assert_ne!(a, run("c.csv", "4"));
}

#[test]
fn invalid_config_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    for args in [
        vec!["sweep", "--phi-step", "0"],
        vec!["sweep", "--phase-points", "4"],
        vec!["sweep", "--noise-miscal", "0.5"],
        vec!["sweep", "--noise-miscal", "0.05", "--t2b", "-1"],
        vec!["sweep", "--shots", "0"],
        vec!["sweep", "--phi-end", "pi/"],
    ] {
        let mut args = args.clone();
        args.extend(["--out", path_arg(&out)]);
        let res = duality(&args);
        assert!(!res.status.success(), "{args:?} should fail");
        assert!(!out.exists(), "{args:?} left a file behind");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    let err = String::from_utf8(duality(&["sweep", "--phi-step", "0"]).stderr).unwrap();
    assert!(err.contains("step must be positive"), "{err}");
}

#[test]
fn fringe_reports_visibility() {
    let dir = tempfile::tempdir().unwrap();
    for (phi, want) in [("0", 1.0), ("pi/2", 0.0), ("pi/3", 0.5)] {
        let out = dir.path().join("fringe.csv");
        stdout(&duality(&["fringe", "--phi", phi, "--out", path_arg(&out)]));
        let f = read_fringe_csv(std::fs::File::open(&out).unwrap()).unwrap();
        assert_eq!(f.samples.len(), 32);
        assert!(
            (f.visibility - want).abs() < 1e-6,
            "φ = {phi}: V = {}",
            f.visibility
        );
    }
}

#[test]
fn compile_scores_programs() {
    let dir = tempfile::tempdir().unwrap();
    let u2 = dir.path().join("u2.pulse");
    std::fs::write(&u2, "# phase gate\nXB(-theta1) YB(theta2) XB(-theta1)\n").unwrap();
    let text = stdout(&duality(&[
        "compile",
        path_arg(&u2),
        "--param",
        "phase=pi/3",
        "--reference",
        "u2",
    ]));
    assert!(text.ends_with("score 1.000000000000\n"), "{text}");

    let bsp = dir.path().join("marker.pulse");
    std::fs::write(
        &bsp,
        "YA(phi_p + phi_m) XA(pi/2) JAB(phi_m - phi_p) XA(-pi/2) XB(pi) YB(pi/2)",
    )
    .unwrap();
    let text = stdout(&duality(&[
        "compile",
        path_arg(&bsp),
        "--param",
        "phi_p=pi/2",
        "--param",
        "phi_m=3*pi/4",
        "--reference",
        "marked",
    ]));
    assert!(text.ends_with("score 1.000000000000\n"), "{text}");

    let empty = dir.path().join("empty.pulse");
    std::fs::write(&empty, "").unwrap();
    let text = stdout(&duality(&[
        "compile",
        path_arg(&empty),
        "--reference",
        "identity",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(
        rows[0],
        "+1.000000+0.000000i  +0.000000+0.000000i  +0.000000+0.000000i  +0.000000+0.000000i"
    );
    assert_eq!(rows[4], "score 1.000000000000");
}

#[test]
fn compile_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pulse");
    std::fs::write(&bad, "XA(pi/2)\nQB(1)").unwrap();
    let res = duality(&["compile", path_arg(&bad)]);
    assert!(!res.status.success());
    let err = String::from_utf8(res.stderr).unwrap();
    assert!(err.contains("2:"), "{err}");

    let unbound = dir.path().join("unbound.pulse");
    std::fs::write(&unbound, "XA(theta)").unwrap();
    assert!(!duality(&["compile", path_arg(&unbound)]).status.success());
    assert!(
        !duality(&["compile", path_arg(&dir.path().join("missing.pulse"))])
            .status
            .success()
    );
    let twice = duality(&[
        "compile",
        path_arg(&unbound),
        "--param",
        "theta=1",
        "--param",
        "theta=2",
    ]);
    assert!(!twice.status.success());
}
