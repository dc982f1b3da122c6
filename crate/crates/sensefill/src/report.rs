//! Results CSV schema and the sweep engine.
//!
//! One row per solved point. Columns, in order:
//!
//! ```text
//! seed,snr_db,n,l,method,capacity_nats,capacity_bits,lambda,selected_bitmask_hex,iterations,certified_optimal,wall_ms
//! ```
//!
//! Floats use Rust's shortest round-trip formatting, so a parsed row
//! reproduces the record exactly. `wall_ms` is wall-clock solve time and is
//! the only nondeterministic column; stable-output mode pins it to zero so
//! runs can be diffed byte for byte.

use std::time::Instant;

use sensefill_core::{
    coarse_optimize, exhaustive_search_capped, fine_optimize, generate_instance, Instance, Method,
    OptResult,
};

use crate::io::Error;

/// Parse a method name as used on the command line and in CSV rows.
pub fn parse_method(name: &str) -> Option<Method> {
    match name {
        "coarse" => Some(Method::Coarse),
        "fine" => Some(Method::Fine),
        "exhaustive" => Some(Method::Exhaustive),
        _ => None,
    }
}

/// Solve one instance with the given method (`fine` runs its coarse stage
/// internally; `exhaustive` honors the enumeration cap).
pub fn solve_with(inst: &Instance, method: Method, cap: u64) -> Result<OptResult, Error> {
    let result = match method {
        Method::Coarse => coarse_optimize(inst)?,
        Method::Fine => {
            let coarse = coarse_optimize(inst)?;
            fine_optimize(inst, &coarse)?
        }
        Method::Exhaustive => exhaustive_search_capped(inst, cap)?,
    };
    Ok(result)
}

/// One CSV row of the results schema.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub seed: u64,
    pub snr_db: f64,
    pub n: usize,
    pub l: usize,
    pub method: Method,
    pub capacity_nats: f64,
    pub capacity_bits: f64,
    pub lambda: f64,
    pub selected_bitmask_hex: String,
    pub iterations: usize,
    pub certified_optimal: bool,
    pub wall_ms: f64,
}

impl ResultRow {
    pub const HEADER: &'static str = "seed,snr_db,n,l,method,capacity_nats,capacity_bits,\
                                      lambda,selected_bitmask_hex,iterations,certified_optimal,wall_ms";

    pub fn from_result(
        seed: u64,
        snr_db: f64,
        inst: &Instance,
        result: &OptResult,
        wall_ms: f64,
    ) -> Self {
        Self {
            seed,
            snr_db,
            n: inst.n(),
            l: inst.sensing_budget,
            method: result.method,
            capacity_nats: result.alloc.capacity_nats,
            capacity_bits: result.alloc.capacity_nats / std::f64::consts::LN_2,
            lambda: result.alloc.water_level,
            selected_bitmask_hex: result.sensing.bitmask_hex(),
            iterations: result.iterations(),
            certified_optimal: result.certified_optimal,
            wall_ms,
        }
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.snr_db,
            self.n,
            self.l,
            self.method.name(),
            self.capacity_nats,
            self.capacity_bits,
            self.lambda,
            self.selected_bitmask_hex,
            self.iterations,
            self.certified_optimal,
            self.wall_ms
        )
    }

    /// Parse a line previously produced by [`ResultRow::to_csv_line`].
    pub fn parse_csv_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 12 {
            return Err(format!("expected 12 fields, got {}", fields.len()));
        }
        let num = |i: usize| -> Result<f64, String> {
            fields[i].parse().map_err(|e| format!("field {i} ({}): {e}", fields[i]))
        };
        Ok(Self {
            seed: fields[0].parse().map_err(|e| format!("seed: {e}"))?,
            snr_db: num(1)?,
            n: fields[2].parse().map_err(|e| format!("n: {e}"))?,
            l: fields[3].parse().map_err(|e| format!("l: {e}"))?,
            method: parse_method(fields[4]).ok_or_else(|| format!("method: {}", fields[4]))?,
            capacity_nats: num(5)?,
            capacity_bits: num(6)?,
            lambda: num(7)?,
            selected_bitmask_hex: fields[8].to_string(),
            iterations: fields[9].parse().map_err(|e| format!("iterations: {e}"))?,
            certified_optimal: fields[10].parse().map_err(|e| format!("certified: {e}"))?,
            wall_ms: num(11)?,
        })
    }
}

/// Everything a sweep needs: the instance family and the run grid.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub n: usize,
    pub l: usize,
    pub taps: usize,
    pub snrs_db: Vec<f64>,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
    pub cap: u64,
    /// Write `wall_ms` as zero so output is byte-reproducible.
    pub stable_output: bool,
    /// Worker threads; `None` picks the available parallelism.
    pub threads: Option<usize>,
}

/// Run the full seed × SNR × method grid and return rows sorted by
/// `(seed, snr_db, method)` regardless of how work was split across threads.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>, Error> {
    let threads = spec
        .threads
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
        })
        .max(1)
        .min(spec.seeds.len().max(1));

    let chunk_size = spec.seeds.len().div_ceil(threads.max(1)).max(1);
    let chunks: Vec<&[u64]> = spec.seeds.chunks(chunk_size).collect();

    let mut rows: Vec<ResultRow> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| scope.spawn(move || sweep_chunk(spec, chunk)))
            .collect();
        let mut all = Vec::new();
        let mut first_err = None;
        for handle in handles {
            match handle.join().expect("sweep worker panicked") {
                Ok(mut rows) => all.append(&mut rows),
                Err(e) => first_err = first_err.or(Some(e)),
            }
        }
        match first_err {
            Some(e) => Err(e),
            None => Ok(all),
        }
    })?;

    rows.sort_by(|a, b| {
        a.seed
            .cmp(&b.seed)
            .then(a.snr_db.total_cmp(&b.snr_db))
            .then(method_order(a.method).cmp(&method_order(b.method)))
    });
    Ok(rows)
}

fn method_order(m: Method) -> u8 {
    match m {
        Method::Coarse => 0,
        Method::Fine => 1,
        Method::Exhaustive => 2,
    }
}

fn sweep_chunk(spec: &SweepSpec, seeds: &[u64]) -> Result<Vec<ResultRow>, Error> {
    let mut rows = Vec::with_capacity(seeds.len() * spec.snrs_db.len() * spec.methods.len());
    for &seed in seeds {
        for &snr_db in &spec.snrs_db {
            let inst = generate_instance(seed, spec.n, spec.l, snr_db, spec.taps)?;
            for &method in &spec.methods {
                let start = Instant::now();
                let result = solve_with(&inst, method, spec.cap)?;
                let wall_ms = if spec.stable_output {
                    0.0
                } else {
                    start.elapsed().as_secs_f64() * 1e3
                };
                rows.push(ResultRow::from_result(seed, snr_db, &inst, &result, wall_ms));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_line_round_trips() {
        let inst = generate_instance(5, 8, 3, 12.0, 4).unwrap();
        let result = solve_with(&inst, Method::Fine, 1 << 20).unwrap();
        let row = ResultRow::from_result(5, 12.0, &inst, &result, 1.25);
        let parsed = ResultRow::parse_csv_line(&row.to_csv_line()).unwrap();
        assert_eq!(row, parsed);
    }

    #[test]
    fn header_has_twelve_columns() {
        assert_eq!(ResultRow::HEADER.split(',').count(), 12);
    }

    #[test]
    fn sweep_grid_shape_and_order() {
        let spec = SweepSpec {
            n: 6,
            l: 3,
            taps: 2,
            snrs_db: vec![-5.0, 5.0],
            seeds: vec![2, 1],
            methods: vec![Method::Coarse, Method::Fine, Method::Exhaustive],
            cap: 1 << 20,
            stable_output: true,
            threads: Some(2),
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        // Sorted by seed, then snr, then method, whatever the thread split.
        let key = |r: &ResultRow| (r.seed, r.snr_db as i64, method_order(r.method));
        let mut sorted = rows.clone();
        sorted.sort_by_key(key);
        assert_eq!(rows, sorted);
        assert_eq!(rows[0].seed, 1);
        assert!(rows.iter().all(|r| r.wall_ms == 0.0));
    }

    #[test]
    fn sweep_is_thread_count_invariant() {
        let base = SweepSpec {
            n: 7,
            l: 3,
            taps: 3,
            snrs_db: vec![0.0, 10.0],
            seeds: (1..=6).collect(),
            methods: vec![Method::Coarse, Method::Fine],
            cap: 1 << 20,
            stable_output: true,
            threads: Some(1),
        };
        let serial = run_sweep(&base).unwrap();
        for threads in [2, 3, 5] {
            let spec = SweepSpec { threads: Some(threads), ..base.clone() };
            assert_eq!(run_sweep(&spec).unwrap(), serial, "threads = {threads}");
        }
    }

    #[test]
    fn fine_rows_dominate_coarse_rows() {
        let spec = SweepSpec {
            n: 8,
            l: 4,
            taps: 4,
            snrs_db: vec![-10.0, 0.0, 10.0, 20.0],
            seeds: (1..=10).collect(),
            methods: vec![Method::Coarse, Method::Fine, Method::Exhaustive],
            cap: 1 << 20,
            stable_output: true,
            threads: None,
        };
        let rows = run_sweep(&spec).unwrap();
        for cell in rows.chunks(3) {
            let (coarse, fine, exhaustive) = (&cell[0], &cell[1], &cell[2]);
            assert_eq!(coarse.method, Method::Coarse);
            assert!(fine.capacity_nats >= coarse.capacity_nats - 1e-12);
            assert!(exhaustive.capacity_nats >= fine.capacity_nats - 1e-12);
        }
    }

    #[test]
    fn unknown_method_rejected() {
        assert!(parse_method("joint").is_none());
        assert!(parse_method("").is_none());
        assert_eq!(parse_method("exhaustive"), Some(Method::Exhaustive));
    }
}
