//! The Beltrami solver against its closed-form disk oracle.

use beltrami_core::field::MuGenerator;
use beltrami_core::geometry::{make_grid, BBox, DomainSpec, C64};
use beltrami_core::solver::{contraction_bound, homeo_check, mrm_solve, SolverOptions};

use super::{Entry, Job};
use crate::config::{MuConfig, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::row;
use crate::table::{col, Plot, Table, TableSpec};

pub(super) static ENTRIES: &[&Entry] = &[&DISK];

static SUMMARY: TableSpec = TableSpec {
    name: "summary",
    description: "solver run for μ supported on the unit disk",
    columns: &[
        col("resolution", "nodes", "grid nodes per side on [-2, 2]²"),
        col("mu_sup", "1", "sup |μ|"),
        col("iterations", "count", "fixed-point iterations"),
        col("contraction_bound", "count", "⌈log tol / log sup|μ|⌉ + 5"),
        col("converged", "flag", "update fell below tol"),
        col("residual", "1", "L² norm of f_z̄ - μ f_z from the spectral derivative fields"),
        col("compare_radius", "length", "errors are taken over |z| ≤ compare_radius"),
        col("max_relative_error", "1", "max |f - F| / max(|F|, 0.1) against F = z + c z̄ (|z| ≤ 1), z + c/z (|z| > 1); NaN unless μ is constant"),
        col("positive_jacobian_fraction", "1", "fraction of masked nodes with J_f > 0"),
        col("homeomorphic", "flag", "positive Jacobian, no reversed or overlapping sampled cells"),
    ],
    plot: None,
};

static HISTORY: TableSpec = TableSpec {
    name: "history",
    description: "L² size of each fixed-point update",
    columns: &[
        col("iteration", "index", "iteration number"),
        col("update", "1", "L² norm of the update"),
    ],
    plot: Some(Plot::Lines {
        x: "iteration",
        y: &["update"],
        group: None,
        log_x: false,
        log_y: true,
    }),
};

static DISK: Entry = Entry {
    name: "beltrami-disk",
    description: "solver for μ = c on the unit disk against the piecewise closed form",
    tags: &["solver"],
    keys: &[
        ("mu", "coefficient on the unit disk (constant 0.3)"),
        ("resolution", "grid nodes per side (1024)"),
        ("tol", "update tolerance (1e-10)"),
        ("outer", "comparison radius (0.9)"),
    ],
    tables: &[&SUMMARY, &HISTORY],
    build: disk_job,
};

fn disk_job(cfg: &ScenarioConfig, seed: u64) -> CliResult<Job> {
    let gen = cfg.mu.clone().unwrap_or(MuConfig::Constant { re: 0.3, im: 0.0 }).generator()?;
    let n = cfg.resolution_or(1024)?;
    let tol = cfg.tol_or(1e-10)?;
    let radius = cfg.outer_or(0.9)?;
    if matches!(gen, MuGenerator::LogarithmicBlowup { .. }) {
        return Err(CliError::config("the solver needs a bounded coefficient"));
    }
    Ok(Box::new(move || {
        let grid = make_grid(BBox::square(C64::new(0.0, 0.0), 2.0), n)?;
        let mu = gen.sample(grid, &DomainSpec::UnitDisk)?;
        let opts = SolverOptions {
            tol,
            ..SolverOptions::default()
        };
        let b = mrm_solve(&mu, &opts)?;
        let err = match gen {
            MuGenerator::Constant(c) => b
                .f
                .values
                .iter()
                .enumerate()
                .filter(|(k, _)| grid.point_at(*k).norm() <= radius)
                .map(|(k, v)| {
                    let z = grid.point_at(k);
                    let want = if z.norm() <= 1.0 { z + c * z.conj() } else { z + c / z };
                    (v - want).norm() / want.norm().max(0.1)
                })
                .fold(0.0, f64::max),
            _ => f64::NAN,
        };
        let h = homeo_check(&b, seed);
        let mut s = Table::new(&SUMMARY);
        s.push(row![
            n,
            b.provenance.mu_sup,
            b.provenance.iterations,
            contraction_bound(b.provenance.mu_sup, tol),
            b.provenance.converged,
            b.residual,
            radius,
            err,
            h.positive_fraction,
            h.consistent,
        ]);
        let mut hist = Table::new(&HISTORY);
        for (k, u) in b.provenance.updates.iter().enumerate() {
            hist.push(row![k + 1, *u]);
        }
        Ok(vec![s, hist])
    }))
}
