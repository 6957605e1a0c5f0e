//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! printed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use blochcover::sampling::{chunk_rng, uniform_points};
use blochcover::tradeoff::{binary_entropy, linear_grid};
use blochcover::{
    berry_grid, build_table, covering_radius, covering_radius_sampled, ebits, platonic, simulate, spiral_points,
    voronoi, CoverTable, Generator, PointSet, Solid,
};

const EXE: &str = env!("CARGO_BIN_EXE_blochcover");

// Pinned tolerances.
const TABLE_TOL: f64 = 1e-4;
const SMALL_N_TOL: f64 = 1e-6;
const TABLE_TIME: Duration = Duration::from_secs(60);
const ORACLE_SAMPLES: usize = 2_000_000;
const ORACLE_GAP: f64 = 2e-3;
/// Rounding slack for "sampled ≤ exact"; both are computed in f64.
const ORACLE_ORDER_SLACK: f64 = 1e-12;
const VORONOI_EPS: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const MONOTONE_TOL: f64 = 1e-12;
/// Bits of slack for the area bound, covering the 1e-12 inclusive lookup.
const AREA_TOL_BITS: f64 = 1e-9;
const SIM_TRIALS: usize = 100_000;
const RECONSTRUCTION_TOL: f64 = 1e-9;
const CAP_TOL: f64 = 1e-9;
const SIM_TIME: Duration = Duration::from_secs(30);
const ENTROPY_ONE_TOL: f64 = 1e-12;
const ENTROPY_QUARTER_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(EXE).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn spiral_table() -> Result<(CoverTable, Duration), String> {
    let t0 = Instant::now();
    let t = build_table(Generator::Spiral, 2, 1024).map_err(|e| e.to_string())?;
    Ok((t, t0.elapsed()))
}

fn c1_table(table: &CoverTable, elapsed: Duration) -> Outcome {
    let expected = [
        (8, 0.259739),
        (16, 0.120679),
        (32, 0.054644),
        (64, 0.026443),
        (128, 0.013054),
        (256, 0.006607),
        (512, 0.003326),
        (1024, 0.001669),
    ];
    let mut worst: f64 = 0.0;
    for (n, want) in expected {
        let got = table.get(n).ok_or(format!("no entry for n={n}"))?.rho_f;
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= TABLE_TOL, || format!("n={n}: {got} vs {want}"))?;
    }
    for n in [2, 4] {
        let got = covering_radius(&spiral_points(n).unwrap()).unwrap().rho_f;
        ensure((got - 0.5).abs() <= SMALL_N_TOL, || format!("n={n}: {got} vs 0.5"))?;
    }
    ensure(elapsed <= TABLE_TIME, || format!("table 2..=1024 took {elapsed:?}"))?;
    Ok(format!("max deviation {worst:.2e}; n=2..=1024 table in {:.2}s", elapsed.as_secs_f64()))
}

fn c2_berry_count() -> Outcome {
    let n = berry_grid(4, true).unwrap().len();
    ensure(n == 28, || format!("{n} points"))?;
    Ok("berry_grid(4, dedup) has 28 points".into())
}

fn random_set(seed: u64, n: usize) -> PointSet {
    PointSet::new(format!("random(seed={seed})"), uniform_points(n, seed))
}

fn c3_oracle() -> Outcome {
    let mut rng = chunk_rng(0xACCE_0003, 0);
    let mut worst: f64 = 0.0;
    for trial in 0..20u64 {
        let n = rng.random_range(4..=100);
        let ps = random_set(1000 + trial, n);
        let exact = covering_radius(&ps).map_err(|e| e.to_string())?.rho_f;
        let sampled = covering_radius_sampled(&ps, ORACLE_SAMPLES, 2000 + trial).unwrap().rho_f;
        ensure(sampled <= exact + ORACLE_ORDER_SLACK, || {
            format!("trial {trial} (n={n}): sampled {sampled} > exact {exact}")
        })?;
        ensure(exact - sampled <= ORACLE_GAP, || format!("trial {trial} (n={n}): gap {}", exact - sampled))?;
        worst = worst.max(exact - sampled);
    }
    Ok(format!("20 random sets, max exact-sampled gap {worst:.2e}"))
}

fn c4_voronoi() -> Outcome {
    let mut sets: Vec<PointSet> = [8, 64, 256].iter().map(|&n| spiral_points(n).unwrap()).collect();
    sets.extend(Solid::ALL.iter().map(|&s| platonic(s)));
    let mut merged = Vec::new();
    for ps in &sets {
        let d = voronoi(ps).map_err(|e| format!("{}: {e}", ps.label))?;
        d.verify(VORONOI_EPS).map_err(|e| format!("{}: {e}", ps.label))?;
        let n = ps.len();
        ensure(d.triangles.len() == 2 * n - 4, || format!("{}: {} triangles", ps.label, d.triangles.len()))?;
        if d.merged() {
            merged.push(ps.label.clone());
        } else {
            ensure(d.vertices.len() == 2 * n - 4, || format!("{}: {} vertices", ps.label, d.vertices.len()))?;
        }
    }
    Ok(format!("{} sets verified; cocircular merges in {}", sets.len(), merged.join(" ")))
}

fn c5_duals() -> Outcome {
    let cases = [
        (Solid::Tetrahedron, 1.0 / 3.0),
        (Solid::Octahedron, (1.0 - 1.0 / 3f64.sqrt()) / 2.0),
        (Solid::Cube, (1.0 - 1.0 / 3f64.sqrt()) / 2.0),
    ];
    for (s, want) in cases {
        let got = covering_radius(&platonic(s)).unwrap().rho_f;
        ensure((got - want).abs() <= DUAL_TOL, || format!("{s}: {got} vs {want}"))?;
    }
    Ok("tetrahedron 1/3, octahedron and cube (1-1/sqrt3)/2".into())
}

fn c6_monotone() -> Outcome {
    let mut rng = chunk_rng(0xACCE_0006, 0);
    for trial in 0..100u64 {
        let n = rng.random_range(4..=80);
        let ps = random_set(5000 + trial, n);
        let before = covering_radius(&ps).map_err(|e| e.to_string())?.rho_f;
        let extra = uniform_points(1, 9000 + trial)[0];
        let after = covering_radius(&ps.with_point(extra)).map_err(|e| e.to_string())?.rho_f;
        ensure(after <= before + MONOTONE_TOL, || format!("trial {trial}: {before} -> {after}"))?;
    }
    Ok("100 insertions never increased the covering radius".into())
}

struct Row {
    r2: f64,
    cbits: f64,
    baseline: f64,
    status: String,
    baseline_status: String,
}

fn tradeoff_rows() -> Result<Vec<Row>, String> {
    let csv = String::from_utf8(cli(&["tradeoff", "--compare"])?).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().ok_or("empty output")?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).ok_or(format!("missing column {name}"));
    let (r2c, cc, bc, sc, bsc) =
        (col("r_squared")?, col("cbits_step3")?, col("baseline_cbits_step3")?, col("status")?, col("baseline_status")?);
    let parse = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
    Ok(lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            Row {
                r2: parse(f[r2c]),
                cbits: parse(f[cc]),
                baseline: parse(f[bc]),
                status: f[sc].to_string(),
                baseline_status: f[bsc].to_string(),
            }
        })
        .collect())
}

fn c7_area(table: &CoverTable, rows: &[Row]) -> Outcome {
    for e in table.entries() {
        ensure(e.rho_f >= 1.0 / e.n as f64, || format!("n={}: rho_f {} < 1/n", e.n, e.rho_f))?;
    }
    for r in rows {
        ensure(r.status == "ok", || format!("r2={}: {}", r.r2, r.status))?;
        let bound = (1.0 / r.r2).log2();
        ensure(r.cbits >= bound - AREA_TOL_BITS, || format!("r2={}: {} < {bound}", r.r2, r.cbits))?;
    }
    Ok(format!("{} table entries and {} trade-off rows", table.len(), rows.len()))
}

fn c8_dominance(rows: &[Row]) -> Outcome {
    ensure(rows.len() == 200, || format!("{} rows", rows.len()))?;
    for (k, r) in rows.iter().enumerate() {
        let want = 0.5 * (k + 1) as f64 / 200.0;
        ensure((r.r2 - want).abs() <= 1e-9, || format!("row {k}: r2 {} vs {want}", r.r2))?;
        ensure(r.baseline_status == "ok", || format!("r2={}: baseline {}", r.r2, r.baseline_status))?;
        ensure(r.cbits <= r.baseline, || format!("r2={}: spiral {} > baseline {}", r.r2, r.cbits, r.baseline))?;
    }
    let gap = rows.iter().map(|r| r.baseline - r.cbits).fold(f64::NEG_INFINITY, f64::max);
    ensure(gap > 0.0, || "no strictly positive gap".into())?;
    Ok(format!("spiral never above baseline; max gap {gap:.3} bits"))
}

fn c9_protocol() -> Outcome {
    let t0 = Instant::now();
    let mut worst_err: f64 = 0.0;
    for n in [16, 64, 256] {
        let r = simulate(&spiral_points(n).unwrap(), SIM_TRIALS, n as u64).map_err(|e| e.to_string())?;
        ensure(r.all_within_cap, || format!("n={n}: cap violated"))?;
        ensure(r.max_infidelity_to_site <= r.rho_f_used + CAP_TOL, || format!("n={n}: {r:?}"))?;
        ensure(r.reconstruction_max_error <= RECONSTRUCTION_TOL, || {
            format!("n={n}: error {}", r.reconstruction_max_error)
        })?;
        worst_err = worst_err.max(r.reconstruction_max_error);
    }
    let elapsed = t0.elapsed();
    ensure(elapsed <= SIM_TIME, || format!("took {elapsed:?}"))?;
    Ok(format!("max reconstruction error {worst_err:.2e}; {:.2}s", elapsed.as_secs_f64()))
}

fn c10_entropy() -> Outcome {
    let one = ebits(0.5).unwrap();
    ensure((one - 1.0).abs() <= ENTROPY_ONE_TOL, || format!("ebits(0.5) = {one}"))?;
    let q = ebits(0.25).unwrap();
    // Direct evaluation of -p log2 p - (1-p) log2 (1-p).
    let direct = -0.25 * 0.25f64.log2() - 0.75 * 0.75f64.log2();
    ensure((q - 0.811278).abs() <= ENTROPY_QUARTER_TOL, || format!("ebits(0.25) = {q}"))?;
    ensure((q - direct).abs() <= 1e-15, || format!("ebits(0.25) = {q} vs {direct}"))?;
    let grid = linear_grid(0.5 / 1000.0, 0.5, 1000);
    let vals: Vec<f64> = grid.iter().map(|&p| binary_entropy(p)).collect();
    ensure(vals.windows(2).all(|w| w[0] < w[1]), || "not strictly increasing".into())?;
    Ok(format!("ebits(0.5) = {one}, ebits(0.25) = {q:.9}"))
}

fn c11_determinism() -> Outcome {
    let runs: [&[&str]; 3] = [
        &["table", "--algo", "spiral", "--n-min", "2", "--n-max", "1024"],
        &["table", "--algo", "berry-grid", "--d-min", "2", "--d-max", "12"],
        &["simulate", "--algo", "spiral", "--n", "64", "--trials", "100000", "--seed", "1"],
    ];
    for args in runs {
        let a = cli(args)?;
        let b = cli(args)?;
        ensure(!a.is_empty() && a == b, || format!("{args:?} differs between runs"))?;
    }
    Ok("table and simulate reruns byte-identical".into())
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    match spiral_table() {
        Ok((table, elapsed)) => {
            results.push((1, "spiral covering table", c1_table(&table, elapsed)));
            results.push((2, "box-grid point count", c2_berry_count()));
            results.push((3, "sampling oracle equivalence", c3_oracle()));
            results.push((4, "voronoi invariants", c4_voronoi()));
            results.push((5, "platonic closed forms", c5_duals()));
            results.push((6, "insertion monotonicity", c6_monotone()));
            match tradeoff_rows() {
                Ok(rows) => {
                    results.push((7, "area bound", c7_area(&table, &rows)));
                    results.push((8, "spiral dominates baseline", c8_dominance(&rows)));
                }
                Err(e) => {
                    results.push((7, "area bound", Err(e.clone())));
                    results.push((8, "spiral dominates baseline", Err(e)));
                }
            }
        }
        Err(e) => results.push((1, "spiral covering table", Err(e))),
    }
    results.push((9, "protocol exactness", c9_protocol()));
    results.push((10, "entropy", c10_entropy()));
    results.push((11, "determinism", c11_determinism()));

    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 && results.len() == 11 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
