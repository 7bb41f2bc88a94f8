use std::env;
use std::path::PathBuf;

use cbindgen::{Config, EnumConfig, Language};

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let config = Config {
        language: Language::C,
        include_guard: Some("APOFAMILY_H".into()),
        documentation: true,
        cpp_compat: true,
        enumeration: EnumConfig { prefix_with_name: true, ..EnumConfig::default() },
        ..Config::default()
    };
    println!("cargo:rerun-if-changed=src/lib.rs");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("unable to generate bindings")
        .write_to_file(crate_dir.join("include/apofamily.h"));
}
