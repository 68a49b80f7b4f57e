use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn conlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conlat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn con_on_file_matches_fixture() {
    let path = fixture_path("s22_swap.slat");
    let file = conlat(&["con", path.to_str().unwrap()]);
    let named = conlat(&["con", "--fixture", "s22-swap"]);
    assert_eq!(file.status.code(), Some(0));
    assert_eq!(stdout(&file), stdout(&named));
    assert!(stdout(&file).starts_with("# conlat con seed=0"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["sweep", "--count", "5", "--max-size", "4", "--seed", "9"][..],
        &["verify", "combined", "--fixture", "s22-swap"],
        &["analyze", "--fixture", "omega-5"],
    ] {
        let a = conlat(args);
        let b = conlat(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
    }
}

#[test]
fn seed_is_echoed() {
    let o = conlat(&["sweep", "--count", "2", "--seed", "31"]);
    assert!(stdout(&o).starts_with("# conlat sweep seed=31"));
}

#[test]
fn malformed_input_exits_two_with_grammar() {
    let dir = std::env::temp_dir().join(format!("conlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.slat");
    std::fs::write(&bad, "semilattice 2\njoin 0 1 1\nzero 0\nend\n").unwrap();
    let o = conlat(&["con", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("semilattice <n>"), "{err}");
    let o = conlat(&["con", dir.join("missing.slat").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_fixture_exits_two() {
    assert_eq!(conlat(&["con", "--fixture", "nope"]).status.code(), Some(2));
}

#[test]
fn help_shows_examples() {
    for sub in ["con", "eon", "analyze", "ideals", "present", "verify", "sweep", "export-dot"] {
        let o = conlat(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("example:"), "{sub}");
    }
}

#[test]
fn present_then_reduce() {
    let dir = std::env::temp_dir().join(format!("conlat-reduce-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ctx = dir.join("ctx.pres");
    let swap = fixture_path("s22_swap.slat");
    let o = conlat(&["present", "combined", swap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&ctx, &o.stdout).unwrap();
    let laws = fixture_path("swap_laws.txt");
    let o = conlat(&["verify", "reduce", ctx.to_str().unwrap(), laws.to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("=> P_1(x) -> x = w"), "{out}");
    assert!(out.contains("CHECK reduce PASS"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn combined_refuses_missing_properties() {
    let o = conlat(&["present", "combined", "--fixture", "omega-3"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn export_dot_is_dot() {
    let o = conlat(&["export-dot", "--fixture", "chain3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("//"));
    assert!(out.contains("digraph"));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "combined", "--fixture", "chain3"][..],
        &["verify", "second", "--fixture", "chain3"],
        &["verify", "pseudo-lemma", "--fixture", "s22-swap"],
        &["verify", "lemma1", "--fixture", "s22-swap"],
    ] {
        let o = conlat(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}
