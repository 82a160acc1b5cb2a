use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/loqc_qec.h")
}

fn compiler() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| {
            Command::new(c)
                .arg("--version")
                .output()
                .is_ok_and(|o| o.status.success())
        })
        .map(String::from)
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).expect("header generated by build.rs");
    for name in [
        "LQ_STATUS_OK",
        "LQ_STATUS_PANIC",
        "LQ_WIRING_AD_BC",
        "typedef struct LqConfig LqConfig",
        "typedef struct LqSweep LqSweep",
        "lq_config_new",
        "lq_config_set_overlap",
        "lq_config_set_thetas",
        "lq_run_sweep",
        "lq_sweep_row",
        "lq_sweep_summary",
        "lq_hom_scan",
        "lq_fit_malus",
        "lq_last_error",
        "lq_version",
    ] {
        assert!(text.contains(name), "{name}");
    }
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "loqc_qec.h"

int main(void) {
    LqConfig *cfg = lq_config_new();
    if (lq_config_set_overlap(cfg, 0.922) != LQ_STATUS_OK) return 1;
    LqSweep *sweep = NULL;
    if (lq_run_analytic(cfg, &sweep) != LQ_STATUS_OK) return 2;
    LqSummary s;
    if (lq_sweep_summary(sweep, &s) != LQ_STATUS_OK) return 3;
    printf("%.6f\n", s.d1_d3.fit.visibility);
    lq_sweep_free(sweep);
    if (lq_config_set_overlap(cfg, 2.0) != LQ_STATUS_OK) return 4;
    if (lq_run_analytic(cfg, &sweep) != LQ_STATUS_VALIDATION) return 5;
    if (lq_last_error() == NULL) return 6;
    lq_config_free(cfg);
    return 0;
}
"#;

/// Compiles and runs a C program against the header and the static library
/// when a C compiler and the archive are available.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    let exe_dir = std::env::current_exe().unwrap();
    let profile_dir = exe_dir.parent().and_then(Path::parent).unwrap();
    let archive = profile_dir.join("libloqc_qec_ffi.a");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = header().parent().unwrap().to_owned();
    let syntax = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(
        syntax.status.success(),
        "{}",
        String::from_utf8_lossy(&syntax.stderr)
    );
    if !archive.exists() {
        eprintln!("{} not built; link step skipped", archive.display());
        return;
    }
    let exe = dir.path().join("smoke");
    let build = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "0.922000");
}
