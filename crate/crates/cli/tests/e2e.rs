//! End-to-end tests of the `cstar` binary: every exit code path, the worked
//! command examples, batch mode, and byte-determinism of the pipelines.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cstar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

const DIAGONAL: &str = r#"{"case":"hyperbolic","curve":"affine_line","dplus":[],
    "dminus":[{"point":"1","coeff":"-1"},{"point":"-1","coeff":"-1"}]}"#;
const QUADRIC: &str = r#"{"case":"hyperbolic","curve":"affine_line",
    "dplus":[{"point":"0","coeff":"1/2"}],
    "dminus":[{"point":"0","coeff":"-1/2"},{"point":"1","coeff":"-1"}]}"#;
const INVALID: &str = r#"{"case":"hyperbolic","curve":"affine_line",
    "dplus":[{"point":"0","coeff":"1/4"}],
    "dminus":[{"point":"0","coeff":"1/4"}]}"#;

#[test]
fn classify_worked_examples() {
    let dir = tempdir();
    let a = dir.join("diagonal.json");
    write(&a, DIAGONAL);
    let out = cstar(&["classify", a.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"verdict\": \"P1xP1MinusDiagonal\""));

    let b = dir.join("quadric.json");
    write(&b, QUADRIC);
    let out = cstar(&["classify", b.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"verdict\": \"P2MinusQuadric\""));
    assert!(text.contains("\"multiplicity\": 2"));
}

#[test]
fn exit_code_paths() {
    let dir = tempdir();
    // 0: success
    let a = dir.join("ok.json");
    write(&a, DIAGONAL);
    assert_eq!(cstar(&["classify", a.to_str().unwrap()]).status.code(), Some(0));
    // 1: malformed JSON
    let b = dir.join("broken.json");
    write(&b, "{ this is not json");
    assert_eq!(cstar(&["classify", b.to_str().unwrap()]).status.code(), Some(1));
    // 1: missing file
    assert_eq!(
        cstar(&["classify", dir.join("absent.json").to_str().unwrap()]).status.code(),
        Some(1)
    );
    // 2: invalid presentation, violation reported on stdout
    let c = dir.join("invalid.json");
    write(&c, INVALID);
    let out = cstar(&["classify", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("D_+ + D_- <= 0"));
    // 2: bad (d, e)
    assert_eq!(cstar(&["toric", "basis", "V4,2"]).status.code(), Some(2));
    // 2: elliptic data of non-positive degree
    let d = dir.join("flat.json");
    write(
        &d,
        r#"{"case":"elliptic","curve":"projective_line","divisor":[]}"#,
    );
    let out = cstar(&["classify", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("positive degree"));
    // 1: bad derivation syntax
    assert_eq!(cstar(&["deriv", "lnd", "x dq"]).status.code(), Some(1));
    // 2: exp of a non-nilpotent derivation
    assert_eq!(cstar(&["deriv", "exp", "x dx"]).status.code(), Some(2));
    // 3: normalization guard failure (top component not locally nilpotent)
    let out = cstar(&["deriv", "normalize", "x dx + x^2y dy", "--weights", "1,-1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn toric_commands() {
    assert_eq!(stdout(&cstar(&["toric", "isom", "V5,2", "V5,3"])), "true");
    assert_eq!(stdout(&cstar(&["toric", "isom", "V8,3", "V8,5"])), "false");
    assert_eq!(stdout(&cstar(&["toric", "basis", "V2,1"])), "x^2, xy, y^2");
    let out = stdout(&cstar(&["toric", "extract", "V1,0", "--weights", "1,-1"]));
    assert!(out.contains("\"coeff\": \"-1\""));
    // extraction output feeds straight back into recognition
    let dir = tempdir();
    let f = dir.join("extracted.json");
    write(&f, &out);
    assert_eq!(stdout(&cstar(&["toric", "recognize", f.to_str().unwrap()])), "V1,0");
    // non-toric input recognizes as none
    let g = dir.join("diagonal.json");
    write(&g, DIAGONAL);
    assert_eq!(stdout(&cstar(&["toric", "recognize", g.to_str().unwrap()])), "none");
}

#[test]
fn deriv_commands() {
    assert_eq!(
        stdout(&cstar(&["deriv", "conj", "x dx - y dy", "x^2 dy"])),
        "x dx + (-y + 3x^2) dy"
    );
    assert_eq!(stdout(&cstar(&["deriv", "lnd", "x^2 dy"])), "Nilpotent(2)");
    assert_eq!(
        stdout(&cstar(&["deriv", "bracket", "x dx - y dy", "x^2 dy"])),
        "3x^2 dy"
    );
    assert_eq!(
        stdout(&cstar(&["deriv", "exp", "x^2 dy"])),
        "x -> x, y -> y + x^2"
    );
    let out = stdout(&cstar(&[
        "deriv",
        "normalize",
        "x dx + (-y + 3x^2) dy",
        "--weights",
        "1,-1",
    ]));
    assert!(out.contains("c = 1"));
    assert!(out.contains("residual = x dx - y dy"));
}

#[test]
fn equiv_command() {
    let dir = tempdir();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    // the same surface presented at shifted points
    write(&a, DIAGONAL);
    write(
        &b,
        r#"{"case":"hyperbolic","curve":"affine_line","dplus":[],
            "dminus":[{"point":"0","coeff":"-1"},{"point":"2","coeff":"-1"}]}"#,
    );
    let out = cstar(&["equiv", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"outcome\": \"equivalent\""));
    // toric pair comparison
    let c = dir.join("c.json");
    let d = dir.join("d.json");
    write(
        &c,
        r#"{"case":"hyperbolic","curve":"affine_line","dplus":[],
            "dminus":[{"point":"0","coeff":"-2"}]}"#,
    );
    write(
        &d,
        r#"{"case":"hyperbolic","curve":"affine_line","dplus":[],
            "dminus":[{"point":"0","coeff":"-3"}]}"#,
    );
    let out = cstar(&["equiv", c.to_str().unwrap(), d.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"outcome\": \"toric\""));
    assert!(text.contains("\"isomorphic\": false"));
}

#[test]
fn batch_mode_isolates_failures() {
    let dir = tempdir();
    write(&dir.join("a_good.json"), DIAGONAL);
    write(&dir.join("b_bad.json"), "not json at all");
    write(&dir.join("c_invalid.json"), INVALID);
    write(&dir.join("ignored.txt"), "not a presentation");
    let out = cstar(&["classify", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].contains("\"file\":\"a_good.json\"") && lines[0].contains("\"ok\":true"));
    assert!(lines[1].contains("\"ok\":false") && lines[1].contains("\"exit_class\":1"));
    assert!(lines[2].contains("\"ok\":false") && lines[2].contains("\"exit_class\":2"));
}

#[test]
fn output_is_byte_deterministic() {
    let dir = tempdir();
    let a = dir.join("quadric.json");
    write(&a, QUADRIC);
    for args in [
        vec!["classify", a.to_str().unwrap()],
        vec!["toric", "extract", "V5,2", "--weights", "2,-1"],
        vec!["deriv", "normalize", "x dx + (-y + 3x^2) dy", "--weights", "1,-1"],
    ] {
        let first = cstar(&args);
        let second = cstar(&args);
        assert_eq!(first.stdout, second.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempdir();
    let a = dir.join("in.json");
    write(&a, DIAGONAL);
    let target = dir.join("report.json");
    let out = cstar(&["classify", a.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = fs::read_to_string(&target).unwrap();
    assert!(written.contains("P1xP1MinusDiagonal"));
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "cstar-e2e-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}
