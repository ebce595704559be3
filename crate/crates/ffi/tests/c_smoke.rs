//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is on the PATH.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // tests run from target/<profile>/deps
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libnoma_uav_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("noma_smoke");
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).contains("bogus"));
}
