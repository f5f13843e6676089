//! Periodic spectral operators on a grid: 2-D FFT, the Beurling transform
//! and the inverse of `∂̄`.

use std::f64::consts::TAU;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::geometry::{Grid, C64};

/// FFT plans and frequencies `ξ = ξ₁ + iξ₂` of a grid, extended
/// periodically with periods `nx·dx` and `ny·dy`.
pub struct Spectral {
    grid: Grid,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    xi: Vec<C64>,
}

fn wavenumbers(n: usize, d: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            TAU * kk / (n as f64 * d)
        })
        .collect()
}

impl Spectral {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        let (nx, ny) = (grid.nx(), grid.ny());
        let kx = wavenumbers(nx, grid.dx());
        let ky = wavenumbers(ny, grid.dy());
        let mut xi = Vec::with_capacity(nx * ny);
        for &b in &ky {
            for &a in &kx {
                xi.push(C64::new(a, b));
            }
        }
        Self {
            grid,
            row_fwd: planner.plan_fft_forward(nx),
            row_inv: planner.plan_fft_inverse(nx),
            col_fwd: planner.plan_fft_forward(ny),
            col_inv: planner.plan_fft_inverse(ny),
            xi,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Area of one period cell.
    pub fn period_area(&self) -> f64 {
        self.grid.nx() as f64 * self.grid.dx() * self.grid.ny() as f64 * self.grid.dy()
    }

    fn transform(&self, data: &mut [C64], row: &Arc<dyn Fft<f64>>, col: &Arc<dyn Fft<f64>>) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        for r in data.chunks_exact_mut(nx) {
            row.process(r);
        }
        let mut t = vec![C64::new(0.0, 0.0); nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                t[i * ny + j] = data[j * nx + i];
            }
        }
        for c in t.chunks_exact_mut(ny) {
            col.process(c);
        }
        for j in 0..ny {
            for i in 0..nx {
                data[j * nx + i] = t[i * ny + j];
            }
        }
    }

    pub fn forward(&self, data: &mut [C64]) {
        self.transform(data, &self.row_fwd, &self.col_fwd);
    }

    /// Inverse transform including the `1/(nx ny)` factor.
    pub fn inverse(&self, data: &mut [C64]) {
        self.transform(data, &self.row_inv, &self.col_inv);
        let s = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|v| *v *= s);
    }

    /// Applies the Fourier multiplier `m(ξ)`.
    pub fn apply(&self, values: &[C64], m: impl Fn(C64) -> C64) -> Vec<C64> {
        let mut data = values.to_vec();
        self.forward(&mut data);
        for (v, &xi) in data.iter_mut().zip(&self.xi) {
            *v *= m(xi);
        }
        self.inverse(&mut data);
        data
    }

    /// `S ω` with multiplier `conj(ξ)/ξ`, zero at `ξ = 0`.
    pub fn beurling(&self, values: &[C64]) -> Vec<C64> {
        self.apply(values, |xi| if xi.norm_sqr() > 0.0 { xi.conj() / xi } else { C64::new(0.0, 0.0) })
    }

    /// Zero-mean periodic `u` with `∂̄u = ω - mean(ω)`: multiplier `-2i/ξ`.
    pub fn inverse_dbar(&self, values: &[C64]) -> Vec<C64> {
        self.apply(values, |xi| {
            if xi.norm_sqr() > 0.0 {
                C64::new(0.0, -2.0) / xi
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Solution of `∂̄u = ω` with `ω` supported in the period cell: the
    /// zero-mean periodic part plus `(z̄ ∫ω - ∫ w̄ ω(w) dm) / A`.
    pub fn cauchy(&self, values: &[C64]) -> Vec<C64> {
        let mut u = self.inverse_dbar(values);
        let da = self.grid.cell_area();
        let total: C64 = values.iter().sum::<C64>() * da;
        let moment: C64 = values
            .iter()
            .enumerate()
            .map(|(k, v)| self.grid.point_at(k).conj() * v)
            .sum::<C64>()
            * da;
        let a = self.period_area();
        for (k, v) in u.iter_mut().enumerate() {
            *v += (self.grid.point_at(k).conj() * total - moment) / a;
        }
        u
    }
}

/// Nonzero values must lie in the central half of the bounding box.
pub fn check_support(grid: &Grid, values: &[C64]) -> Result<()> {
    let b = grid.bbox();
    let c = b.center();
    let (hx, hy) = (0.25 * b.width(), 0.25 * b.height());
    let slack = 1e-9 * grid.spacing();
    for (k, v) in values.iter().enumerate() {
        if v.norm_sqr() == 0.0 {
            continue;
        }
        let z = grid.point_at(k);
        if (z.re - c.re).abs() > hx + slack || (z.im - c.im).abs() > hy + slack {
            let (i, j) = grid.coords(k);
            return Err(Error::SupportViolation { i, j });
        }
    }
    Ok(())
}

/// Beurling transform of a compactly supported field. The mask is kept for
/// the output but every node of `ω` enters the transform.
pub fn beurling_transform(omega: &ComplexField) -> Result<ComplexField> {
    check_support(&omega.grid, &omega.values)?;
    let values = Spectral::new(omega.grid).beurling(&omega.values);
    Ok(ComplexField {
        grid: omega.grid,
        values,
        mask: omega.mask.clone(),
    })
}

/// Cauchy transform `C ω` (a solution of `∂̄u = ω`), normalized so that its
/// mean over the four bounding-box corners vanishes.
pub fn cauchy_transform(omega: &ComplexField) -> Result<ComplexField> {
    check_support(&omega.grid, &omega.values)?;
    let mut values = Spectral::new(omega.grid).cauchy(&omega.values);
    let shift = corner_mean(&omega.grid, &values, |_| C64::new(0.0, 0.0));
    values.iter_mut().for_each(|v| *v -= shift);
    Ok(ComplexField {
        grid: omega.grid,
        values,
        mask: omega.mask.clone(),
    })
}

/// Mean of `values - reference(z)` over the four corner nodes.
pub(crate) fn corner_mean(grid: &Grid, values: &[C64], reference: impl Fn(C64) -> C64) -> C64 {
    let (nx, ny) = (grid.nx(), grid.ny());
    [(0, 0), (nx - 1, 0), (0, ny - 1), (nx - 1, ny - 1)]
        .iter()
        .map(|&(i, j)| values[grid.index(i, j)] - reference(grid.point(i, j)))
        .sum::<C64>()
        / 4.0
}
