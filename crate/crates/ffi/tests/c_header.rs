//! Compiles a C program against the generated header and, when the static
//! library is present next to the test binary, links and runs it.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "scramble.h"

int main(void) {
    ScrambleGraph *g = NULL;
    size_t v = 0, x = 0, y = 0;
    double occ = 0.0;
    if (scramble_graph_binary_tree(3, &g) != ScrambleStatus_Ok) return 1;
    if (scramble_graph_num_vertices(g, &v) != ScrambleStatus_Ok || v != 15) return 2;
    if (scramble_graph_farthest_pair(g, &x, &y) != ScrambleStatus_Ok || x != 7 || y != 11) return 3;
    if (scramble_equilibrium_occupancy(2, 2, &occ) != ScrambleStatus_Ok || occ < 0.79 || occ > 0.81) return 4;
    if (scramble_graph_dumbbell(1, NULL) != ScrambleStatus_NullPointer) return 5;
    if (strlen(scramble_last_error()) == 0) return 6;
    scramble_graph_release(&g);
    if (g != NULL) return 7;
    printf("ok %s\n", scramble_version());
    return 0;
}
"#;

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn cc() -> Option<String> {
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
fn header_compiles_and_links() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    fs::write(&src, PROGRAM).unwrap();

    let syntax = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(include_dir())
        .arg(&src)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    // target/<profile>/deps/<test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(Path::parent).map(|p| p.join("libscramble_ffi.a"));
    let Some(lib) = lib.filter(|l| l.exists()) else {
        eprintln!("static library not found next to the test binary; link step skipped");
        return;
    };
    let bin = dir.path().join("main");
    let link = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
