//! Benchmark report assembly: one row per ladder size, with the load and
//! transform intervals kept strictly separate, emitted as an aligned table
//! and as CSV.

use std::fmt::Write;
use std::time::Duration;

/// Optimization class recorded with every row: the reduction uses a
/// hand-implemented worklist scheduler rather than a generic fixpoint scan.
pub const OPT_CLASS: &str = "M";

/// Median and minimum over the recorded repetitions, in milliseconds.
#[derive(Debug, Clone, Copy, Default)]
pub struct Timing {
    pub median_ms: f64,
    pub min_ms: f64,
}

impl Timing {
    pub fn from_samples(samples: &mut [Duration]) -> Timing {
        if samples.is_empty() {
            return Timing::default();
        }
        samples.sort_unstable();
        Timing {
            median_ms: samples[samples.len() / 2].as_secs_f64() * 1e3,
            min_ms: samples[0].as_secs_f64() * 1e3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub label: String,
    pub target: usize,
    pub elements: usize,
    pub load: Timing,
    pub transform: Timing,
    pub outcome: String,
    pub applications: usize,
}

impl BenchRow {
    pub fn empty(label: String, target: usize) -> BenchRow {
        BenchRow {
            label,
            target,
            elements: 0,
            load: Timing::default(),
            transform: Timing::default(),
            outcome: "pending".to_string(),
            applications: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub seed: u64,
    pub reps: usize,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Human-readable table; medians shown, minima in parentheses.
    pub fn table(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<10} {:>9} {:>22} {:>22} {:>9} {:>7} {:>6}",
            "size", "elements", "load ms (min)", "transform ms (min)", "outcome", "rules", "class"
        )
        .unwrap();
        for row in &self.rows {
            writeln!(
                out,
                "{:<10} {:>9} {:>13.3} ({:>6.3}) {:>13.3} ({:>6.3}) {:>9} {:>7} {:>6}",
                row.label,
                row.elements,
                row.load.median_ms,
                row.load.min_ms,
                row.transform.median_ms,
                row.transform.min_ms,
                row.outcome,
                row.applications,
                OPT_CLASS
            )
            .unwrap();
        }
        writeln!(
            out,
            "seed {}, {} repetitions, medians over all",
            self.seed, self.reps
        )
        .unwrap();
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "label,target,elements,seed,reps,load_median_ms,load_min_ms,\
             transform_median_ms,transform_min_ms,outcome,applications,opt_class\n",
        );
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{:.3},{:.3},{:.3},{:.3},{},{},{}",
                row.label,
                row.target,
                row.elements,
                self.seed,
                self.reps,
                row.load.median_ms,
                row.load.min_ms,
                row.transform.median_ms,
                row.transform.min_ms,
                row.outcome,
                row.applications,
                OPT_CLASS
            )
            .unwrap();
        }
        out
    }
}
