use std::path::{Path, PathBuf};
use std::process::Command;

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header_dir().join("syzrep.h")).unwrap();
    for name in [
        "syzrep_system_from_json",
        "syzrep_system_free",
        "syzrep_analyze",
        "syzrep_matrix",
        "syzrep_implicitize",
        "syzrep_appendix",
        "syzrep_last_error",
        "syzrep_string_free",
        "typedef struct SyzrepSystem SyzrepSystem",
        "SYZREP_STATUS_NULL_ARGUMENT = 4",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "syzrep.h"

int main(void) {
    const char *json = "{\"field\": {\"p\": 101}, \"variables\": [\"X1\", \"X2\"],"
                       " \"forms\": [\"X1^2\", \"X1*X2\", \"X2^2\"]}";
    SyzrepSystem *sys = NULL;
    if (syzrep_system_from_json(json, &sys) != SYZREP_STATUS_OK) return 10;
    char *out = NULL;
    if (syzrep_analyze(sys, &out) != SYZREP_STATUS_OK) return 11;
    if (strstr(out, "\"mu0\"") == NULL) return 12;
    syzrep_string_free(out);
    if (syzrep_implicitize(sys, SYZREP_MU_AUTO, 0, &out) != SYZREP_STATUS_OK) return 13;
    puts(out);
    syzrep_string_free(out);
    if (syzrep_system_from_json("[]", &sys) != SYZREP_STATUS_INVALID) return 14;
    if (syzrep_last_error() == NULL) return 15;
    syzrep_system_free(sys);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = lib_dir.join("libsyzrep_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let st = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(header_dir())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(st.success(), "C compile failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke program exited with {:?}", run.status.code());
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.contains("\"implicit\":\"T0*T2 - T1^2\"") && text.contains("\"verified\":true"), "{text}");
}
