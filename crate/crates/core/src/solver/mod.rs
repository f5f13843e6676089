//! Homeomorphic solutions of `f_z̄ = μ f_z` for elliptic coefficients by
//! the Neumann series `ω = μ S ω + μ`, `f = z + C ω`, together with
//! finite-difference residual and Jacobian checks for any sampled map.

mod homeo;
mod spectral;

use std::io::Write;

pub use homeo::{homeo_check, HomeoReport, INJECTIVITY_SAMPLES};
pub use spectral::{beurling_transform, cauchy_transform, check_support, Spectral};

use crate::error::{Error, Result};
use crate::field::{ComplexField, RealField};
use crate::geometry::{PlaneMap, C64};

/// Wirtinger derivatives `(f_z, f_z̄)` with `f_z = (f_x - i f_y)/2` and
/// `f_z̄ = (f_x + i f_y)/2`; centred differences inside, second-order
/// one-sided differences on the box edges.
pub fn wirtinger(f: &ComplexField) -> (ComplexField, ComplexField) {
    let g = f.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let v = &f.values;
    let diff = |a: C64, b: C64, c: C64, at: usize, n: usize, h: f64| -> C64 {
        // a, b, c are the samples at at-1, at, at+1 (or the one-sided
        // triple at the edges).
        if at == 0 {
            (-3.0 * a + 4.0 * b - c) / (2.0 * h)
        } else if at == n - 1 {
            (3.0 * c - 4.0 * b + a) / (2.0 * h)
        } else {
            (c - a) / (2.0 * h)
        }
    };
    let mut fz = Vec::with_capacity(g.len());
    let mut fzb = Vec::with_capacity(g.len());
    for j in 0..ny {
        for i in 0..nx {
            let (i0, i1, i2) = match i {
                0 => (0, 1, 2),
                _ if i == nx - 1 => (nx - 3, nx - 2, nx - 1),
                _ => (i - 1, i, i + 1),
            };
            let (j0, j1, j2) = match j {
                0 => (0, 1, 2),
                _ if j == ny - 1 => (ny - 3, ny - 2, ny - 1),
                _ => (j - 1, j, j + 1),
            };
            let fx = diff(v[g.index(i0, j)], v[g.index(i1, j)], v[g.index(i2, j)], i, nx, g.dx());
            let fy = diff(v[g.index(i, j0)], v[g.index(i, j1)], v[g.index(i, j2)], j, ny, g.dy());
            let ify = C64::new(-fy.im, fy.re);
            fz.push((fx - ify) * 0.5);
            fzb.push((fx + ify) * 0.5);
        }
    }
    (
        ComplexField {
            grid: g,
            values: fz,
            mask: f.mask.clone(),
        },
        ComplexField {
            grid: g,
            values: fzb,
            mask: f.mask.clone(),
        },
    )
}

/// `J_f = |f_z|² - |f_z̄|²`.
pub fn jacobian_of(fz: &ComplexField, fzb: &ComplexField) -> RealField {
    RealField {
        grid: fz.grid,
        values: fz
            .values
            .iter()
            .zip(&fzb.values)
            .map(|(a, b)| a.norm_sqr() - b.norm_sqr())
            .collect(),
        mask: fz.mask.clone(),
    }
}

fn same_grid(a: &ComplexField, b: &ComplexField) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::invalid("fields live on different grids"));
    }
    Ok(())
}

/// `L²` norm over the mask of `μ` of `f_z̄ - μ f_z`.
fn residual_of(fz: &ComplexField, fzb: &ComplexField, mu: &ComplexField) -> f64 {
    let sum: f64 = fz
        .values
        .iter()
        .zip(&fzb.values)
        .zip(&mu.values)
        .zip(&mu.mask)
        .filter(|(_, &m)| m)
        .map(|(((a, b), m), _)| (b - m * a).norm_sqr())
        .sum();
    (sum * mu.grid.cell_area()).sqrt()
}

/// `L²` norm over the mask of `μ` of `f_z̄ - μ f_z`, with [`wirtinger`]
/// derivatives of the samples `f`.
pub fn beltrami_residual(f: &ComplexField, mu: &ComplexField) -> Result<f64> {
    same_grid(f, mu)?;
    let (fz, fzb) = wirtinger(f);
    Ok(residual_of(&fz, &fzb, mu))
}

/// How the additive constant of a solution was fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    /// Constant subtracted so that `f - z` has zero mean over the four
    /// corners of the bounding box.
    pub corner_shift: C64,
}

/// Inputs and iteration history behind a bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// `mrm` for solver output, `samples` for maps given by their samples.
    pub source: &'static str,
    pub mu_sup: f64,
    /// Dilatation cap applied to `μ` before solving, if any.
    pub truncation: Option<f64>,
    pub tol: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `L²` size of each fixed-point update; the residual of iterate `n` is
    /// update `n + 1`.
    pub updates: Vec<f64>,
}

/// A sampled map with its derivative fields, Jacobian and residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBundle {
    pub f: ComplexField,
    pub f_z: ComplexField,
    pub f_zbar: ComplexField,
    pub mu: ComplexField,
    pub jacobian: RealField,
    pub residual: f64,
    pub normalization: Normalization,
    pub provenance: Provenance,
}

impl SolutionBundle {
    fn assemble(
        f: ComplexField,
        f_z: ComplexField,
        f_zbar: ComplexField,
        mu: ComplexField,
        normalization: Normalization,
        provenance: Provenance,
    ) -> Self {
        let jacobian = jacobian_of(&f_z, &f_zbar);
        let residual = residual_of(&f_z, &f_zbar, &mu);
        Self {
            f,
            f_z,
            f_zbar,
            mu,
            jacobian,
            residual,
            normalization,
            provenance,
        }
    }

    /// Bundle of a map given by its samples, derivatives by [`wirtinger`].
    pub fn from_samples(f: ComplexField, mu: ComplexField) -> Result<Self> {
        same_grid(&f, &mu)?;
        let (fz, fzb) = wirtinger(&f);
        let provenance = Provenance {
            source: "samples",
            mu_sup: mu.sup_norm(),
            truncation: None,
            tol: 0.0,
            iterations: 0,
            converged: true,
            updates: Vec::new(),
        };
        let normalization = Normalization {
            corner_shift: C64::new(0.0, 0.0),
        };
        Ok(Self::assemble(f, fz, fzb, mu, normalization, provenance))
    }

    /// Residual recomputed from the stored derivative fields.
    pub fn residual_norm(&self) -> f64 {
        residual_of(&self.f_z, &self.f_zbar, &self.mu)
    }

    /// Jacobian recomputed from the stored derivative fields.
    pub fn recompute_jacobian(&self) -> RealField {
        jacobian_of(&self.f_z, &self.f_zbar)
    }

    /// Converts an unconverged bundle into the no-convergence error.
    pub fn check(self) -> Result<Self> {
        if self.provenance.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                iterations: self.provenance.iterations,
                residual: self.provenance.updates.last().copied().unwrap_or(f64::NAN),
            })
        }
    }

    /// `i,j,x,y,re_f,im_f,jacobian` rows for every node.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let g = self.f.grid;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "x", "y", "re_f", "im_f", "jacobian"])?;
        for (k, v) in self.f.values.iter().enumerate() {
            let (i, j) = g.coords(k);
            let z = g.point(i, j);
            w.write_record([
                i.to_string(),
                j.to_string(),
                z.re.to_string(),
                z.im.to_string(),
                v.re.to_string(),
                v.im.to_string(),
                self.jacobian.values[k].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl PlaneMap for SolutionBundle {
    fn apply(&self, z: C64) -> Option<C64> {
        self.f.sample(z)
    }
}

/// Settings of [`mrm_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once the `L²` size of a fixed-point update drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

/// Iteration bound `⌈log tol / log k⌉ + 5` for `‖μ‖_∞ = k`.
pub fn contraction_bound(k: f64, tol: f64) -> usize {
    if k <= 0.0 {
        return 6;
    }
    (tol.ln() / k.ln()).ceil().max(0.0) as usize + 5
}

/// Runs the fixed-point iteration `ω ← μ S ω + μ` from `ω = 0` with `μ`
/// extended by zero off its mask and returns the bundle whether or not it
/// converged (see [`SolutionBundle::check`]). `f = z + C ω`, `f_z = 1 + S ω`,
/// `f_z̄ = ω`.
pub fn mrm_iterate(mu: &ComplexField, opts: &SolverOptions) -> Result<SolutionBundle> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) || opts.max_iter == 0 {
        return Err(Error::invalid("tolerance must be positive and max_iter at least 1"));
    }
    let g = mu.grid;
    let zero = C64::new(0.0, 0.0);
    let m: Vec<C64> = mu
        .values
        .iter()
        .zip(&mu.mask)
        .map(|(&v, &inside)| if inside { v } else { zero })
        .collect();
    for (k, v) in m.iter().enumerate() {
        if !(v.norm() < 1.0) {
            let (i, j) = g.coords(k);
            return Err(Error::EllipticityViolation { i, j, modulus: v.norm() });
        }
    }
    check_support(&g, &m)?;
    let spectral = Spectral::new(g);
    let da = g.cell_area();

    let mut omega = vec![zero; g.len()];
    let mut updates = Vec::new();
    let mut converged = false;
    while updates.len() < opts.max_iter {
        let s = spectral.beurling(&omega);
        let mut change = 0.0;
        for k in 0..omega.len() {
            let next = m[k] * (s[k] + 1.0);
            change += (next - omega[k]).norm_sqr();
            omega[k] = next;
        }
        let change = (change * da).sqrt();
        updates.push(change);
        if change < opts.tol {
            converged = true;
            break;
        }
    }

    let s = spectral.beurling(&omega);
    let mut f = spectral.cauchy(&omega);
    for (k, v) in f.iter_mut().enumerate() {
        *v += g.point_at(k);
    }
    let corner_shift = spectral::corner_mean(&g, &f, |z| z);
    f.iter_mut().for_each(|v| *v -= corner_shift);

    let field = |values: Vec<C64>| ComplexField {
        grid: g,
        values,
        mask: mu.mask.clone(),
    };
    let mu_eff = field(m);
    let provenance = Provenance {
        source: "mrm",
        mu_sup: mu_eff.sup_norm(),
        truncation: None,
        tol: opts.tol,
        iterations: updates.len(),
        converged,
        updates,
    };
    Ok(SolutionBundle::assemble(
        field(f),
        field(s.iter().map(|v| v + 1.0).collect()),
        field(omega),
        mu_eff,
        Normalization { corner_shift },
        provenance,
    ))
}

/// [`mrm_iterate`] that fails with no-convergence when `max_iter` is hit.
pub fn mrm_solve(mu: &ComplexField, opts: &SolverOptions) -> Result<SolutionBundle> {
    mrm_iterate(mu, opts)?.check()
}

/// Solves with `μ` truncated to dilatation at most `n`, recording `n`.
pub fn mrm_solve_truncated(mu: &ComplexField, n: f64, opts: &SolverOptions) -> Result<SolutionBundle> {
    let mut b = mrm_solve(&crate::field::truncate_mu(mu, n)?, opts)?;
    b.provenance.truncation = Some(n);
    Ok(b)
}

#[cfg(test)]
mod tests;
