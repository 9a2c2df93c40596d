use std::process::Command;

fn chronon(args: &[&str], out: &std::path::Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_chronon"))
        .args(args)
        .arg("--output-dir")
        .arg(out)
        .env_remove("CHRONON_OUTPUT_DIR")
        .output()
        .unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned())
}

#[test]
fn verify_algebra_passes_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = chronon(&["verify-algebra"], dir.path());
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("spin spectrum Lz: {−ℏ/2 ×2, +ℏ/2 ×2}: PASS"));
    assert!(stdout.contains("Compton deformation factor: 2.000000: PASS"));
    for f in ["report.txt", "manifest.txt"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
}

#[test]
fn undeformed_limit_skips_spin_checks() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = chronon(&["verify-algebra", "--a", "0"], dir.path());
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("spin spectrum: undeformed limit: SKIP"));
    assert!(stdout.contains("deformation factor (undeformed limit): 1.000000: PASS"));
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let (code, first) = chronon(&["verify-algebra", "--seed", "7", "--momenta", "5"], dir.path());
    assert_eq!(code, 0);
    let manifest = dir.path().join("manifest.txt");
    let again = tempfile::tempdir().unwrap();
    let (code, second) = chronon(&["--config", manifest.to_str().unwrap()], again.path());
    assert_eq!(code, 0);
    assert_eq!(first, second);
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(chronon(&[], dir.path()).0, 2);
    assert_eq!(chronon(&["verify-algebra", "--nope", "1"], dir.path()).0, 2);
    assert_eq!(chronon(&["zitterbewegung", "--mass", "-1"], dir.path()).0, 2);
    // One sample spacing of the default series is 50/4095.
    assert_eq!(chronon(&["averaging", "--window", "0.0244"], dir.path()).0, 2);
    assert_eq!(chronon(&["zitterbewegung", "--n-samples", "64"], dir.path()).0, 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    assert_eq!(chronon(&["verify-algebra"], &blocker.join("sub")).0, 3);
}
