//! Simulating driver paths and storing them as CSV or binary bundles.
//!
//! cargo run --example path_io -- [dir]

use std::path::PathBuf;

use itolog::numeric::{simulate, DriverSpec, Grid, PathBundle, PathSeed};

fn main() -> itolog::Result<()> {
    let dir: PathBuf = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    let grid = Grid::uniform(1.0, 1000)?;
    let specs: Vec<DriverSpec> = ["brownian:0.5", "poisson:4", "drift:2"]
        .iter()
        .map(|s| s.parse())
        .collect::<itolog::Result<_>>()?;
    let paths = specs
        .iter()
        .enumerate()
        .map(|(k, s)| simulate(s, &grid, PathSeed::new(7, 0, k as u64)))
        .collect::<itolog::Result<Vec<_>>>()?;
    let names = specs.iter().map(ToString::to_string).collect();
    let bundle = PathBundle::new(names, paths)?;

    for name in ["paths.csv", "paths.bin"] {
        let file = dir.join(name);
        bundle.save(&file)?;
        let back = PathBundle::load(&file)?;
        let size = std::fs::metadata(&file)?.len();
        println!("{}: {size} bytes, round trip exact: {}", file.display(), back.paths == bundle.paths);
    }
    for (name, p) in bundle.names.iter().zip(&bundle.paths) {
        println!("{name}: terminal value {:.6}", p.terminal());
    }
    Ok(())
}
