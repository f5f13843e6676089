//! Acceptance checks: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use beltrami_cli::run::{plan, run_plan};
use beltrami_cli::scenarios::registry;
use beltrami_cli::table::Table;

type Check = Result<String, String>;

/// Name, runtime limit in seconds and check of one criterion.
type Criterion = (&'static str, f64, fn() -> Check);

/// Runs the single scenario described by `toml` and returns its tables.
fn run(toml: &str) -> Result<BTreeMap<&'static str, Table>, String> {
    let mut p = plan(toml).map_err(|e| e.to_string())?;
    let (_, _, job) = p.jobs.pop().ok_or("no scenario")?;
    let tables = job().map_err(|e| e.to_string())?;
    Ok(tables.into_iter().map(|t| (t.spec.name, t)).collect())
}

fn text(t: &Table, row: usize, col: &str) -> String {
    t.cell(row, col).and_then(|c| c.as_str()).unwrap_or("").to_string()
}

fn flag(t: &Table, row: usize, col: &str) -> bool {
    t.cell(row, col).and_then(|c| c.as_bool()).unwrap_or(false)
}

fn num(t: &Table, row: usize, col: &str) -> f64 {
    t.cell(row, col).and_then(|c| c.as_f64()).unwrap_or(f64::NAN)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn annulus() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "annulus-modulus"
        resolution = 512
        radii = [0.25, 1.0]
    "#)?;
    let m = &t["modulus"];
    let (value, exact) = (num(m, 0, "modulus"), TAU / 4f64.ln());
    let err = (value - exact).abs() / exact;
    ensure(err < 0.03, format!("modulus {value:.4} vs {exact:.4}"))?;
    Ok(format!("modulus {value:.4} vs 2π/log 4 = {exact:.4}, error {:.2}%", 100.0 * err))
}

fn weighted_min() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "weighted-min"
        trials = 200
        samples = 64
    "#)?;
    let s = &t["summary"];
    let (err, mass) = (num(s, 0, "max_relative_error"), num(s, 0, "max_mass_defect"));
    ensure(num(s, 0, "trials") == 200.0, "wrong trial count")?;
    ensure(err < 1e-6, format!("closed form off by {err:e}"))?;
    ensure(mass < 1e-10, format!("α₀ admissibility defect {mass:e}"))?;
    Ok(format!("200 trials, max error {err:.1e}, max mass defect {mass:.1e}"))
}

fn ring_extremality() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "ring-bound"
        functions = ["one", "one-plus-r2"]
        trials = 100
    "#)?;
    let p = &t["profiles"];
    let mut worst_random = f64::INFINITY;
    let mut worst_extremal: f64 = 0.0;
    for r in 0..p.rows.len() {
        let excess = num(p, r, "excess");
        match text(p, r, "kind").as_str() {
            "extremal" => worst_extremal = worst_extremal.max(excess.abs()),
            _ => worst_random = worst_random.min(excess),
        }
    }
    ensure(p.rows.len() == 202, format!("{} profiles", p.rows.len()))?;
    ensure(worst_random >= -1e-8, format!("random profile below I⁻¹ by {worst_random:e}"))?;
    ensure(worst_extremal <= 1e-8, format!("η₀ misses I⁻¹ by {worst_extremal:e}"))?;
    Ok(format!("min random excess {worst_random:.3}, |η₀ excess| {worst_extremal:.1e}"))
}

fn modulus_inequality() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "modulus-inequality"
        functions = ["identity", "affine", "stretch"]
        resolutions = [256, 512]
        points = [[0.0, 0.0], [0.2, 0.1]]
        ladder = [0.2, 0.1]
        outer = 0.6
    "#)?;
    let c = &t["checks"];
    ensure(c.rows.len() == 24, format!("{} checks", c.rows.len()))?;
    let mut worst = f64::INFINITY;
    for r in 0..c.rows.len() {
        let margin = num(c, r, "weighted_margin");
        worst = worst.min(margin);
        ensure(
            margin >= -0.03 && text(c, r, "weighted_verdict") == "holds",
            format!("{} at {}²: margin {margin:.4}", text(c, r, "map"), num(c, r, "resolution")),
        )?;
    }
    Ok(format!("24 checks, smallest margin {:.2}%", 100.0 * worst))
}

fn schwarz() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "schwarz-trace"
        nodes = 2048
        outer = 0.9
    "#)?;
    let p = &t["powers"];
    ensure(p.rows.len() == 8, "expected n = 1..8")?;
    let worst = p
        .numbers("series_error")
        .into_iter()
        .chain(p.numbers("trapezoid_error"))
        .fold(0.0, f64::max);
    ensure(worst < 1e-8, format!("max error {worst:e}"))?;
    Ok(format!("zⁿ, n = 1..8, max error {worst:.1e} on |z| ≤ 0.9"))
}

fn beltrami_oracle() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "beltrami-disk"
        resolution = 1024
        mu = { kind = "constant", re = 0.3, im = 0.0 }
        outer = 0.9
    "#)?;
    let s = &t["summary"];
    let err = num(s, 0, "max_relative_error");
    let (it, bound) = (num(s, 0, "iterations"), num(s, 0, "contraction_bound"));
    ensure(flag(s, 0, "converged"), "solver did not converge")?;
    ensure(err < 0.01, format!("relative error {err:.4}"))?;
    ensure(it <= bound, format!("{it} iterations exceed the bound {bound}"))?;
    Ok(format!("error {:.2}%, {it} iterations ≤ bound {bound}", 100.0 * err))
}

fn phi_chain() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "phi-catalog"
    "#)?;
    let s = &t["summary"];
    ensure(s.rows.len() == 6, format!("{} catalog functions", s.rows.len()))?;
    for r in 0..s.rows.len() {
        ensure(flag(s, r, "agreement"), format!("{} integrals disagree", text(s, r, "function")))?;
    }
    let class = |f: &str| (0..s.rows.len()).find(|&r| text(s, r, "function") == f).map(|r| text(s, r, "class"));
    ensure(class("exp").as_deref() == Some("divergent"), "e^t not divergent")?;
    ensure(class("t").as_deref() == Some("convergent"), "t not convergent")?;
    ensure(class("t2").as_deref() == Some("convergent"), "t² not convergent")?;
    Ok("6 functions agree; e^t divergent, t and t² convergent".into())
}

fn fmo() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "fmo-catalog"
        functions = ["constant", "re-z", "log-inverse", "inverse-square"]
    "#)?;
    let v = &t["verdicts"];
    let verdict = |f: &str| (0..v.rows.len()).find(|&r| text(v, r, "function") == f).map(|r| text(v, r, "verdict"));
    for f in ["constant", "re-z", "log-inverse"] {
        ensure(verdict(f).as_deref() == Some("holds"), format!("{f} does not hold"))?;
    }
    ensure(verdict("inverse-square").as_deref() == Some("fails"), "1/|z|² does not fail")?;
    let ladder = t["ladder"].filter("function", "log-inverse");
    let (eps, means) = (ladder.numbers("eps"), ladder.numbers("mean"));
    // the disc mean of log(1/|z|) over |z| < ε is log(1/ε) + 1/2
    let off = eps.iter().zip(&means).map(|(e, m)| (m - (0.5 - e.ln())).abs()).fold(0.0, f64::max);
    ensure(means.len() >= 6 && off < 1e-3, format!("log(1/|z|) means off log(1/ε) + 1/2 by {off:e}"))?;
    Ok(format!(
        "bounded fields hold, log(1/|z|) holds with means {:.2} → {:.2} (= log(1/ε) + 1/2), 1/|z|² fails",
        means[0],
        means[means.len() - 1]
    ))
}

fn weak_flatness() -> Check {
    let t = run(r#"
        [[scenario]]
        name = "weak-flatness"
        functions = ["disk", "slit"]
    "#)?;
    let g = &t["growth"];
    let growth = |c: &str| (0..g.rows.len()).find(|&r| text(g, r, "configuration") == c).map(|r| num(g, r, "growth"));
    let (disk, slit) = (growth("disk").unwrap_or(f64::NAN), growth("slit").unwrap_or(f64::NAN));
    ensure(num(g, 0, "shrink") >= 16.0, "ladder shrinks less than 16×")?;
    ensure(disk >= 3.0, format!("disk growth {disk:.3}"))?;
    ensure((1.0 / 1.5..=1.5).contains(&slit), format!("slit growth {slit:.3}"))?;
    Ok(format!("growth over 16× shrink: disk {disk:.2}, slit {slit:.2}"))
}

fn dirichlet() -> Check {
    let zero = run(r#"
        [[scenario]]
        name = "dirichlet-disk-mu0-cos"
    "#)?;
    let s = &zero["summary"];
    let exact = num(s, 0, "exact_error");
    ensure(exact < 1e-6, format!("μ ≡ 0: |f - z| up to {exact:e}"))?;
    let gauge0 = num(s, 0, "gauge_defect");
    let constant = run(r#"
        [[scenario]]
        name = "dirichlet-disk-const-mu"
        mu = { kind = "constant", re = 0.3, im = 0.0 }
    "#)?;
    let s = &constant["summary"];
    let residual = num(s, 0, "residual");
    ensure(residual < 1e-3, format!("residual {residual:e}"))?;
    ensure(flag(s, 0, "trace_decreasing"), "trace profile not decreasing")?;
    let gauge = gauge0.max(num(s, 0, "gauge_defect"));
    ensure(gauge < 1e-9, format!("gauge defect {gauge:e}"))?;
    Ok(format!("|f - z| {exact:.1e}, residual {residual:.1e}, gauge defect {gauge:.1e}"))
}

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).into_iter().flatten().flatten() {
        let path = entry.path();
        if path.is_dir() {
            out.extend(csv_files(&path));
        } else if path.extension().is_some_and(|e| e == "csv" || e == "svg") {
            let key = path.strip_prefix(dir.parent().unwrap_or(dir)).unwrap().display().to_string();
            out.insert(key, fs::read(&path).unwrap_or_default());
        }
    }
    out
}

fn determinism() -> Check {
    let mut config = String::from("[run]\noutput = \"repeat\"\nseed = 11\nsvg = true\n");
    for e in registry() {
        config.push_str(&format!("[[scenario]]\nname = \"{}\"\n", e.name));
    }
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let report = run_plan(plan(&config).map_err(|e| e.to_string())?, dir.path(), false).map_err(|e| e.to_string())?;
        if let Some(e) = report.error() {
            return Err(e.to_string());
        }
        outputs.push(csv_files(&dir.path().join("repeat")));
    }
    let csvs = outputs[0].keys().filter(|k| k.ends_with(".csv")).count();
    ensure(csvs > 0, "no CSV written")?;
    ensure(outputs[0].keys().eq(outputs[1].keys()), "different file sets")?;
    for (name, bytes) in &outputs[0] {
        ensure(outputs[1][name] == *bytes, format!("{name} differs between runs"))?;
    }
    Ok(format!("{} scenarios, {csvs} CSV files byte-identical", registry().len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("annulus modulus", 60.0, annulus),
        ("weighted minimum closed form", 10.0, weighted_min),
        ("ring extremality", 30.0, ring_extremality),
        ("modulus inequality", 300.0, modulus_inequality),
        ("Schwarz integral", 5.0, schwarz),
        ("Beltrami solver oracle", 120.0, beltrami_oracle),
        ("Φ-equivalence chain", 10.0, phi_chain),
        ("FMO catalog", 30.0, fmo),
        ("weak-flatness contrast", 180.0, weak_flatness),
        ("end-to-end Dirichlet", 180.0, dirichlet),
        ("determinism", f64::INFINITY, determinism),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(detail) if secs >= limit => Err(format!("{detail}; took {secs:.1} s, limit {limit} s")),
            other => other,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} {:>2} {name:<30} {secs:>7.2} s  {detail}", k + 1);
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
