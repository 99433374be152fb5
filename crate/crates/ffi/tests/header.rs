use std::path::Path;
use std::process::Command;

fn header() -> (std::path::PathBuf, String) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("gaussclone.h");
    let text = std::fs::read_to_string(&path).expect("header is generated by the build script");
    (path, text)
}

#[test]
fn header_declares_the_api() {
    let (_, text) = header();
    for symbol in [
        "typedef struct GcState GcState;",
        "GC_STATUS_OK = 0",
        "GC_STATUS_BUDGET",
        "gc_last_error_message",
        "gc_state_vacuum",
        "gc_state_coherent",
        "gc_state_squeezed",
        "gc_state_squeezed_thermal",
        "gc_state_from_moments",
        "gc_state_free",
        "gc_state_mean",
        "gc_state_cov",
        "gc_state_to_json",
        "gc_string_free",
        "gc_run_averaged",
        "gc_run_single_shot",
        "gc_gain_select",
        "gc_gaussian_fidelity",
        "gc_symmetric_cloning_fidelity",
        "gc_optimal_ancilla_squeezing",
        "gc_enhancement",
        "gc_average_error_probability",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}

#[test]
fn header_compiles_as_c() {
    let (path, _) = header();
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-include"])
        .arg(&path)
        .args(["-x", "c", "/dev/null"])
        .status()
    else {
        eprintln!("no C compiler available; skipping");
        return;
    };
    assert!(status.success());
}
