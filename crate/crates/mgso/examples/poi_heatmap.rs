//! Render the improvement-probability landscape of a surrogate fitted to 40
//! Rastrigin samples: a CSV lattice dump plus an SVG heat map.
//!
//! ```text
//! cargo run --release --example poi_heatmap
//! ```

use mgso::bench::BenchmarkFunction;
use mgso::harness::{emit_poi_map, PoiMapArgs};

fn main() {
    let args = PoiMapArgs {
        function: BenchmarkFunction::Rastrigin,
        n_training: 40,
        grid: 50,
        seed: 42,
    };
    let prefix = std::env::temp_dir().join("poi_map");
    let map = emit_poi_map(&args, &prefix).expect("map");

    let max = map.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = map.values.iter().sum::<f64>() / map.values.len() as f64;
    println!(
        "threshold {:.3}; improvement probability: mean {mean:.4}, max {max:.4}",
        map.threshold
    );
    println!(
        "wrote {} and {}",
        prefix.with_extension("csv").display(),
        prefix.with_extension("svg").display()
    );
}
