//! Compiles a small C program against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "katflow.h"

int main(void) {
    size_t edges[] = {0, 1, 1, 2, 2, 3, 3, 0};
    KatflowGraph *g = NULL;
    KatflowPacking *p = NULL;
    size_t bad = 99;
    if (katflow_graph_new(4, edges, 4, &g) != KATFLOW_STATUS_OK) return 10;
    if (katflow_solve(g, false, 0, &p) != KATFLOW_STATUS_OK) return 11;
    if (katflow_verify(p, g, 1e-6, &bad) != KATFLOW_STATUS_OK || bad != 0) return 12;
    char *json = NULL;
    if (katflow_packing_to_json(p, 1e-6, &json) != KATFLOW_STATUS_OK) return 13;
    printf("%zu disks\n", katflow_packing_len(p));
    katflow_string_free(json);
    katflow_packing_free(p);
    katflow_graph_free(g);
    return 0;
}
"#;

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("libkatflow_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_and_links() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("katflow.h").exists(), "header was not generated");
    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; skipping link step");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let dir = std::env::temp_dir().join(format!("katflow-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let bin = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "4 disks\n");
    let _ = std::fs::remove_dir_all(&dir);
}
