use std::path::Path;
use std::process::Command;

const NAMES: [&str; 17] = [
    "bouquet_last_error",
    "bouquet_model_exp",
    "bouquet_model_sine",
    "bouquet_model_free",
    "bouquet_model_is_disjoint",
    "bouquet_model_eval",
    "bouquet_model_inverse",
    "bouquet_model_classify",
    "bouquet_address_parse",
    "bouquet_address_free",
    "bouquet_address_to_string",
    "bouquet_address_compare",
    "bouquet_address_ordinate",
    "bouquet_trace",
    "bouquet_trace_many",
    "bouquet_endpoint",
    "bouquet_brush_json",
];

fn header() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/bouquet.h")
}

#[test]
fn header_declares_every_entry_point() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in NAMES.iter().chain(&["bouquet_string_free"]) {
        assert!(text.contains(&format!("{name}(")), "{name}");
    }
    assert!(text.contains("typedef struct BouquetModel BouquetModel;"));
    assert!(text.contains("BOUQUET_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        r#"#include "bouquet.h"
int main(void) {
    BouquetModel *m = 0;
    BouquetComplex lambda = { 0.25, 0.0 };
    BouquetStatus s = bouquet_model_exp(lambda, 1.0, &m);
    bouquet_model_free(m);
    return s == BOUQUET_STATUS_OK ? 0 : 1;
}
"#,
    )
    .unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(include)
        .arg(&src)
        .output()
        .expect("a C compiler named cc");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
