fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR is set");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/tcds.h"));
        }
        // A committed include/tcds.h ships with the crate, so a failed
        // regeneration degrades to a stale header rather than a broken build.
        Err(err) => println!("cargo:warning=skipping header regeneration: {err}"),
    }
}
