use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn bblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bblab"))
        .args(args)
        .output()
        .expect("run bblab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build_a3k(dir: &Path, k: &str, input: &str) -> PathBuf {
    let out = dir.join(format!("a3k_{k}_{input}.bf"));
    let o = bblab(&[
        "build", "a3k",
        "--mi", s(&fixture("lastbit0.tm")),
        "--mj", s(&fixture("lastbit1.tm")),
        "--k", k, "--input", input, "--out", s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn machines() -> [String; 4] {
    [
        "--mi".into(),
        s(&fixture("lastbit0.tm")).into(),
        "--mj".into(),
        s(&fixture("lastbit1.tm")).into(),
    ]
}

#[test]
fn backbone_of_and_not() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("and-not.bf");
    fs::write(&f, "(and (var x1) (not (var x2)))\n").unwrap();
    for method in ["brute", "sat"] {
        let o = bblab(&["backbone", "--formula", s(&f), "--method", method]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), "SAT\nfrozen x1 1\nfrozen x2 0\n");
    }
    let o = bblab(&["backbone", "--formula", s(&f), "--json"]);
    assert!(stdout(&o).contains("\"satisfiable\": true"));
}

#[test]
fn reduce_then_invert() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.bf");
    let o = bblab(&[
        "reduce", "--machine", s(&fixture("lastbit0.tm")), "--input", "101", "--out", s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let tag = stdout(&o).lines().next().unwrap().strip_prefix("tag ").unwrap().to_string();
    let meta = fs::read_to_string(dir.path().join("r.bf.meta.json")).unwrap();
    assert!(meta.contains(&tag) && meta.contains("\"101\""));
    let o = bblab(&["invert", "--formula", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), format!("tag {tag}\ninput 101\n"));

    let junk = dir.path().join("junk.bf");
    fs::write(&junk, "(and (var x1) (not (var x2)))").unwrap();
    assert_eq!(stdout(&bblab(&["invert", "--formula", s(&junk)])), "JUNK\n");
}

#[test]
fn member_and_corrupted_member() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_a3k(dir.path(), "2", "10");
    let mut args = vec!["member".to_string(), "--formula".into(), s(&g).into()];
    args.extend(machines());
    args.extend(["--k".into(), "2".into()]);
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = bblab(&argv);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "MEMBER\n"));

    // Flip the first negative literal of the embedded reduction.
    let text = fs::read_to_string(&g).unwrap();
    let at = text.find("(not (var x[").unwrap();
    let close = at + text[at..].find("))").unwrap();
    let corrupted = format!(
        "{}{}){}",
        &text[..at],
        &text[at + 5..close],
        &text[close + 2..]
    );
    assert_ne!(corrupted, text);
    fs::write(&g, corrupted).unwrap();
    let o = bblab(&argv);
    assert_eq!((code(&o), stdout(&o).as_str()), (4, "NONMEMBER\n"));
}

#[test]
fn build_backbone_value_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_a3k(dir.path(), "1", "11");
    let report = dir.path().join("report.txt");
    let o = bblab(&["backbone", "--formula", s(&g), "--out", s(&report)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("frozen z.1 0\n"));

    let value = dir.path().join("value.txt");
    let o = bblab(&[
        "backbone-value", "--formula", s(&g), "--vars-from", s(&report), "--out", s(&value),
    ]);
    assert_eq!(code(&o), 0);
    let o = bblab(&["verify", "--formula", s(&g), "--assignment", s(&value)]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "BACKBONE\n"));

    let o = bblab(&["backbone-value", "--formula", s(&g), "--vars", "z.1"]);
    assert_eq!(stdout(&o), "value 0\nassign z.1 0\n");
    let o = bblab(&["verify", "--formula", s(&g), "--vars", "z.1", "--values", "0"]);
    assert_eq!(code(&o), 0);
    let o = bblab(&["verify", "--formula", s(&g), "--vars", "z.1", "--values", "1"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (4, "NOT A BACKBONE\n"));
}

#[test]
fn not_a_backbone_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("or-not.bf");
    fs::write(&f, "(or (var x1) (not (var x2)))").unwrap();
    let o = bblab(&["backbone-value", "--formula", s(&f), "--vars", "x1"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (4, "NOT A BACKBONE\n"));
    let o = bblab(&["backbone-value", "--formula", s(&f), "--vars", ""]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "value ε\n"));
}

#[test]
fn build_thm3_and_member() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.bf");
    let mut args: Vec<String> = vec!["build".into(), "thm3".into()];
    args.extend(machines());
    args.extend(["--epsilon", "1", "--input", "0", "--out", s(&out)].map(String::from));
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = bblab(&argv);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("family thm3\n"));
    let meta = fs::read_to_string(dir.path().join("t.bf.meta.json")).unwrap();
    assert!(meta.contains("\"epsilon\": \"1\""));

    let mut args = vec!["member".to_string(), "--formula".into(), s(&out).into()];
    args.extend(machines());
    args.extend(["--epsilon".into(), "1".into()]);
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(code(&bblab(&argv)), 0);
}

#[test]
fn freq_report() {
    let mut args: Vec<String> = vec!["freq".into()];
    args.extend(machines());
    args.extend(["--k", "1", "--max-n", "3", "--heuristic", "all-true"].map(String::from));
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = bblab(&argv);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("n\tcount_A\tmax_len\terrors_A\terrors_B_induced\n"));
    assert!(out.contains("# inequality_holds\ttrue\n"));
    // 7 of the 14 inputs up to length 3 end in 1.
    let row3 = out.lines().find(|l| l.starts_with("3\t")).unwrap();
    let cols: Vec<&str> = row3.split('\t').collect();
    assert_eq!((cols[1], cols[3], cols[4]), ("14", "7", "7"));
    assert_eq!(stdout(&bblab(&argv)), out);

    let bad: Vec<&str> = argv
        .iter()
        .map(|a| if *a == "all-true" { "bogus" } else { a })
        .collect();
    assert_eq!(code(&bblab(&bad)), 1);
}

#[test]
fn export_dimacs_writes_map() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.bf");
    fs::write(&f, "(and (var x1) (not (var x2)))").unwrap();
    let cnf = dir.path().join("f.cnf");
    let o = bblab(&["export-dimacs", "--formula", s(&f), "--out", s(&cnf)]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(&cnf).unwrap().starts_with("p cnf "));
    assert_eq!(
        fs::read_to_string(dir.path().join("f.cnf.map")).unwrap(),
        "1\tx1\n2\tx2\n"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(code(&bblab(&[])), 1);
    assert_eq!(code(&bblab(&["frobnicate"])), 1);
    assert_eq!(code(&bblab(&["--help"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.bf");
    fs::write(&f, "(or (var x1))").unwrap();
    assert_eq!(code(&bblab(&["backbone", "--formula", s(&f)])), 2);
    assert_eq!(code(&bblab(&["backbone", "--formula", s(&dir.path().join("missing.bf"))])), 2);
    let o = bblab(&[
        "reduce", "--machine", s(&fixture("lastbit0.tm")), "--input", "1111",
        "--out", s(&dir.path().join("r.bf")), "--max-steps", "3",
    ]);
    assert_eq!(code(&o), 3);
    let o = bblab(&[
        "reduce", "--machine", s(&fixture("lastbit0.tm")), "--input", "12",
        "--out", s(&dir.path().join("r.bf")),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn build_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let fa = build_a3k(a.path(), "3", "0110");
    let fb = build_a3k(b.path(), "3", "0110");
    assert_eq!(fs::read(fa).unwrap(), fs::read(fb).unwrap());
}

#[test]
fn selfcheck_with_seed() {
    let o = bblab(&["--seed", "42", "selfcheck", "--count", "50"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "checked 50 formulas, 0 mismatches\n");
}
