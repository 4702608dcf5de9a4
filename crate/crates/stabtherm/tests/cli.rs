use std::path::Path;
use std::process::{Command, Output};

fn stabtherm(args: &[&str], threads: Option<&str>, dir: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stabtherm"));
    cmd.args(args).current_dir(dir);
    match threads {
        Some(t) => cmd.env("STABTHERM_THREADS", t),
        None => cmd.env_remove("STABTHERM_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn thermo_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let o = stabtherm(
        &["thermo", "--model", "haah", "--L", "3", "--beta", "0.1:2.0:50", "--out", "h.csv"],
        None,
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("h.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "beta,logZ,f,u,c,flags");
    assert_eq!(lines.len(), 51);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 6);
        for f in &fields[..5] {
            f.parse::<f64>().unwrap();
        }
        assert_eq!(fields[5], "-");
    }
}

#[test]
fn duality_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = stabtherm(&["duality", "--check", "4dtc-ising", "--L", "2", "--out", "d.csv"], None, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("matched         true"), "{text}");
    assert!(text.contains("cutoff          8"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert!(csv.starts_with("weight,lhs,rhs\n0,1,1\n"));
}

#[test]
fn report_sections_have_fixed_order() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&stabtherm(&["duality", "--check", "homology", "--L", "2"], None, dir.path()));
    let order: Vec<usize> = ["[claim]", "[result]", "[totals]", "[timing]"]
        .iter()
        .map(|s| text.find(s).unwrap_or_else(|| panic!("{s} missing in {text}")))
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn gsd_of_haah_at_fifteen() {
    let dir = tempfile::tempdir().unwrap();
    let o = stabtherm(&["gsd", "--model", "haah", "--L", "15"], None, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let gsd_line = text.lines().find(|l| l.starts_with("gsd ")).unwrap();
    assert_ne!(gsd_line.split_whitespace().nth(1), Some("4"));
    assert!(text.contains("rank_a"));
    assert!(text.contains("rank_b"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| stabtherm(args, None, dir.path()).status.code();
    assert_eq!(code(&["thermo", "--model", "nonsense"]), Some(2));
    assert_eq!(code(&["thermo", "--beta", "0:1:5"]), Some(2));
    assert_eq!(code(&["thermo", "--beta", "2:1:5"]), Some(2));
    assert_eq!(code(&["gsd", "--L", "1"]), Some(2));
    assert_eq!(code(&["duality"]), Some(2));
    assert_eq!(code(&[]), Some(2));
    let refused = stabtherm(&["duality", "--check", "4dtc-ising", "--L", "3"], None, dir.path());
    assert_eq!(refused.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&refused.stderr);
    assert!(msg.contains("81") && msg.contains("24"), "{msg}");
    assert_eq!(code(&["oracle-compare", "--model", "toric2d", "--L", "3"]), Some(3));
    assert_eq!(code(&["enumerate", "--model", "toric4d", "--L", "2", "--cap", "10"]), Some(3));
    // At even L Haah's code has more constraints than a chain.
    assert_eq!(code(&["duality", "--check", "haah-chains", "--L", "4"]), Some(4));
}

#[test]
fn csv_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for t in ["1", "2", "4"] {
        let name = format!("e{t}.csv");
        let o = stabtherm(
            &["enumerate", "--model", "toric4d", "--L", "2", "--side", "b", "--out", &name],
            Some(t),
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0));
        outputs.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 1 + 65);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["thermo", "--model", "toric2d", "--L", "3", "--beta", "0.2:3:17", "--spacing", "log", "--out", out];
    stabtherm(&args("a.csv"), Some("3"), dir.path());
    stabtherm(&args("b.csv"), Some("1"), dir.path());
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "command = \"thermo\"\nmodel = \"haah\"\nL = 3\nbeta = \"0.1:1.0:10\"\nout = \"file.csv\"\n",
    )
    .unwrap();
    let o = stabtherm(&["--config", "run.toml", "--beta", "0.1:1.0:4"], None, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("file.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    std::fs::write(dir.path().join("bad.toml"), "command = \"gsd\"\nmodle = \"haah\"\n").unwrap();
    let o = stabtherm(&["--config", "bad.toml"], None, dir.path());
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("line 2") && msg.contains("modle"), "{msg}");
}

#[test]
fn logicals_and_bath_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["logicals", "--model", "toric4d", "--L", "2"][..],
        &["logicals", "--model", "haah", "--L", "3"][..],
        &["duality", "--check", "bath-vx", "--L", "3"][..],
        &["duality", "--check", "bath-vy", "--L", "4"][..],
        &["duality", "--check", "ab-identity", "--L", "2"][..],
        &["duality", "--check", "bound", "--L", "2"][..],
        &["duality", "--check", "3dtc-stars", "--L", "2"][..],
        &["duality", "--check", "3dtc-plaquettes", "--L", "2"][..],
        &["duality", "--check", "haah-chains", "--L", "3"][..],
        &["oracle-compare", "--model", "ising", "--dim", "2", "--L", "3", "--beta", "0.1:1:5"][..],
    ] {
        let o = stabtherm(args, None, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}
