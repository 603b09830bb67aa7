//! Improvement-probability landscape maps: fit a GP to a handful of samples
//! of a 2D benchmark, evaluate the improvement probability on a lattice, and
//! dump it as CSV plus an SVG heat map.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bench::{BenchmarkFunction, BenchmarkInstance};
use crate::fit::{build_posterior_with_jitter, fit_hyperparams, FitConfig};
use crate::gp::Dataset;
use crate::poi::poi;
use crate::solver::{initial_sample, ScalingTransform};

use super::records::format_float;
use super::HarnessError;

#[derive(Debug, Clone)]
pub struct PoiMapArgs {
    pub function: BenchmarkFunction,
    /// Training samples drawn uniformly over the box.
    pub n_training: usize,
    /// Lattice resolution per axis.
    pub grid: usize,
    pub seed: u64,
}

impl Default for PoiMapArgs {
    fn default() -> Self {
        PoiMapArgs {
            function: BenchmarkFunction::Rastrigin,
            n_training: 40,
            grid: 50,
            seed: 42,
        }
    }
}

/// A computed map: lattice coordinates (original units), the improvement
/// probability per lattice point (row-major, `x2` outer), and the training
/// set that produced it.
#[derive(Debug, Clone)]
pub struct PoiMap {
    pub grid: usize,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub values: Vec<f64>,
    pub training_points: Vec<Vec<f64>>,
    pub training_values: Vec<f64>,
    pub threshold: f64,
}

impl PoiMap {
    pub fn value_at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid + i]
    }
}

/// Fits a model to `n_training` uniform samples of the (unshifted) function
/// over `[−5, 5]²` and evaluates the improvement probability at threshold
/// `y_min` on a `grid × grid` lattice.
pub fn compute_poi_map(args: &PoiMapArgs) -> Result<PoiMap, HarnessError> {
    if args.grid < 2 {
        return Err(HarnessError::Config("grid must be at least 2".into()));
    }
    if args.n_training < 2 {
        return Err(HarnessError::Config("need at least 2 training samples".into()));
    }
    let instance =
        BenchmarkInstance::with_parameters(args.function, 2, vec![0.0, 0.0], 0.0);
    let bounds = instance.bounds();
    let transform = ScalingTransform::from_bounds(&bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let training_points = initial_sample(&bounds, args.n_training, &mut rng);
    let training_values: Vec<f64> =
        training_points.iter().map(|p| instance.evaluate(p)).collect();

    let scaled_rows: Vec<Vec<f64>> =
        training_points.iter().map(|p| transform.forward(p)).collect();
    let dataset = Dataset::from_rows(&scaled_rows, &training_values);

    let hp = fit_hyperparams(&dataset, &FitConfig::default(), &mut rng)
        .map_err(|e| HarnessError::Runtime(format!("model fit failed: {e}")))?;
    let posterior = build_posterior_with_jitter(&dataset, &hp)
        .map_err(|e| HarnessError::Runtime(format!("model build failed: {e}")))?;

    let threshold = training_values.iter().cloned().fold(f64::INFINITY, f64::min);

    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        (0..args.grid)
            .map(|i| lo + (hi - lo) * i as f64 / (args.grid - 1) as f64)
            .collect()
    };
    let x1 = axis(bounds.lower()[0], bounds.upper()[0]);
    let x2 = axis(bounds.lower()[1], bounds.upper()[1]);

    let mut values = Vec::with_capacity(args.grid * args.grid);
    for &b in &x2 {
        for &a in &x1 {
            let z = transform.forward(&[a, b]);
            values.push(poi(&posterior, &z, threshold));
        }
    }

    Ok(PoiMap {
        grid: args.grid,
        x1,
        x2,
        values,
        training_points,
        training_values,
        threshold,
    })
}

/// CSV dump: header `x1,x2,poi`, one row per lattice point.
pub fn write_poi_map_csv(map: &PoiMap, path: &Path) -> Result<(), HarnessError> {
    let mut out = String::from("x1,x2,poi\n");
    for (j, &b) in map.x2.iter().enumerate() {
        for (i, &a) in map.x1.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                format_float(a),
                format_float(b),
                format_float(map.value_at(i, j))
            ));
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Simple two-stop color ramp (dark blue → yellow) over [0, 1].
fn heat_color(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let r = (20.0 + 235.0 * v).round() as u8;
    let g = (25.0 + 195.0 * v).round() as u8;
    let b = (80.0 + (40.0 - 80.0) * v).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

pub fn write_poi_map_svg(map: &PoiMap, path: &Path) -> Result<(), HarnessError> {
    let cell = 8.0;
    let size = map.grid as f64 * cell;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" \
         viewBox=\"0 0 {size} {size}\">\n"
    ));
    for j in 0..map.grid {
        for i in 0..map.grid {
            let v = map.value_at(i, j);
            // SVG y grows downward; flip so larger x2 sits on top.
            let y = (map.grid - 1 - j) as f64 * cell;
            svg.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{y:.1}\" width=\"{cell}\" height=\"{cell}\" fill=\"{}\"/>\n",
                i as f64 * cell,
                heat_color(v)
            ));
        }
    }
    // Training points overlaid as circles.
    let lo = map.x1[0];
    let hi = *map.x1.last().unwrap();
    for p in &map.training_points {
        let px = (p[0] - lo) / (hi - lo) * (size - cell) + cell / 2.0;
        let py = (1.0 - (p[1] - lo) / (hi - lo)) * (size - cell) + cell / 2.0;
        svg.push_str(&format!(
            "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"2.2\" fill=\"none\" stroke=\"white\" stroke-width=\"0.8\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    let mut file = std::fs::File::create(path)?;
    file.write_all(svg.as_bytes())?;
    Ok(())
}

/// Computes the map and writes `<prefix>.csv` and `<prefix>.svg`. Returns
/// the map so callers can inspect it.
pub fn emit_poi_map(args: &PoiMapArgs, out_prefix: &Path) -> Result<PoiMap, HarnessError> {
    let map = compute_poi_map(args)?;
    let mut csv_path = PathBuf::from(out_prefix);
    csv_path.set_extension("csv");
    let mut svg_path = PathBuf::from(out_prefix);
    svg_path.set_extension("svg");
    write_poi_map_csv(&map, &csv_path)?;
    write_poi_map_svg(&map, &svg_path)?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_values_live_in_unit_interval() {
        let args = PoiMapArgs { grid: 12, n_training: 15, ..Default::default() };
        let map = compute_poi_map(&args).unwrap();
        assert_eq!(map.values.len(), 144);
        assert!(map.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn map_is_deterministic_under_seed() {
        let args = PoiMapArgs { grid: 8, n_training: 12, seed: 5, ..Default::default() };
        let a = compute_poi_map(&args).unwrap();
        let b = compute_poi_map(&args).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.threshold, b.threshold);
    }

    #[test]
    fn csv_has_grid_squared_rows() {
        let dir = tempfile::tempdir().unwrap();
        let args = PoiMapArgs { grid: 10, n_training: 12, ..Default::default() };
        let map = emit_poi_map(&args, &dir.path().join("map")).unwrap();
        let text = std::fs::read_to_string(dir.path().join("map.csv")).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[0], "x1,x2,poi");
        assert_eq!(rows.len() - 1, 100);
        assert!(dir.path().join("map.svg").exists());
        assert_eq!(map.grid, 10);
    }
}
