//! Regenerate the shipped catalog file from the builder.
//!
//! Usage: `catalog-gen [output-path]` (defaults to `data/catalog.json`
//! relative to the crate root).

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| format!("{}/data/catalog.json", env!("CARGO_MANIFEST_DIR")));
    let cat = logdp::catalog::build::build_catalog();
    let json = serde_json::to_string_pretty(&cat).expect("serializable catalog");
    std::fs::write(&out, json + "\n").expect("write catalog");
    eprintln!(
        "wrote {} records ({} families) to {}",
        cat.records.len(),
        56,
        out
    );
}
