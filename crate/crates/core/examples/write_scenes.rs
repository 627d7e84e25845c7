//! Regenerates the bundled scene files.
use std::path::PathBuf;

fn main() -> envlie::error::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("crates/core/scenes"));
    for p in envlie::scene::write_bundled(&dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
