//! Sphere integrals of the interaction kernels `|x - y|^(-e)` for radial
//! arguments, `A(r, rho) = int_{S^{d-1}} |r w0 - rho w|^(-e) dw`.
//!
//! In three dimensions closed forms are used; other dimensions integrate
//! over the polar angle numerically. All entry points accept the gap
//! `|r - rho|` separately so callers can supply it without cancellation.

use std::f64::consts::PI;

use thiserror::Error;

use crate::quadrature::{neumaier_sum, GaussRule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("NonIntegrableDiagonal: kernel exponent {e} >= d - 1 = {dm1} at r = rho")]
    NonIntegrableDiagonal { e: f64, dm1: f64 },
    #[error("DiagonalSingularity: the fractional kernel is infinite at r = rho")]
    DiagonalSingularity,
    #[error("invalid kernel arguments: {0}")]
    InvalidArgs(String),
}

/// Area of the unit sphere `S^n` in `R^(n+1)`.
pub fn sphere_area(n: u32) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 1.0) * sphere_area(n - 2),
    }
}

/// `((a + 2m)^c - a^c) / c` for `a > 0`, without cancellation; `ln(1 + 2m/a)` at `c = 0`.
fn power_gap(a: f64, m: f64, c: f64) -> f64 {
    let l = (2.0 * m / a).ln_1p();
    if c == 0.0 {
        l
    } else {
        a.powf(c) * (c * l).exp_m1() / c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularKernel {
    pub d: u32,
    pub e: f64,
    rule: GaussRule,
}

/// Smallest polar angle resolved by panels before the analytic remainder.
const THETA_FLOOR: f64 = 1e-9;
const ANGULAR_ORDER: usize = 24;

impl AngularKernel {
    pub fn new(d: u32, e: f64) -> Result<Self, KernelError> {
        if d < 2 {
            return Err(KernelError::InvalidArgs(format!("dimension {d} < 2")));
        }
        if !e.is_finite() {
            return Err(KernelError::InvalidArgs(format!("exponent {e}")));
        }
        Ok(Self { d, e, rule: GaussRule::legendre(ANGULAR_ORDER) })
    }

    pub fn riesz(d: u32, alpha: f64) -> Result<Self, KernelError> {
        Self::new(d, d as f64 - alpha)
    }

    pub fn fractional(d: u32, s: f64, p: f64) -> Result<Self, KernelError> {
        Self::new(d, d as f64 + s * p)
    }

    /// `e - (d - 1)`: the rate at which `A` blows up as `rho -> r`
    /// (logarithmic when zero, bounded when negative).
    pub fn diagonal_rate(&self) -> f64 {
        self.e - (self.d as f64 - 1.0)
    }

    pub fn value(&self, r: f64, rho: f64) -> Result<f64, KernelError> {
        self.value_with_gap(r, rho, (r - rho).abs())
    }

    pub fn value_with_gap(&self, r: f64, rho: f64, gap: f64) -> Result<f64, KernelError> {
        if self.d == 3 {
            self.closed_form(r, rho, gap)
        } else {
            self.numeric(r, rho, gap)
        }
    }

    /// Three-dimensional closed form with `c = 2 - e`:
    /// `A = 2 pi / (r rho c) * ((r + rho)^c - |r - rho|^c)`.
    pub fn closed_form(&self, r: f64, rho: f64, gap: f64) -> Result<f64, KernelError> {
        check_radii(r, rho)?;
        if self.d != 3 {
            return Err(KernelError::InvalidArgs("closed form only in d = 3".into()));
        }
        let c = 2.0 - self.e;
        let m = r.min(rho);
        if gap == 0.0 {
            if c <= 0.0 {
                return Err(self.diagonal_error());
            }
            return Ok(2.0 * PI / (r * rho * c) * (2.0 * m).powf(c));
        }
        Ok(2.0 * PI / (r * rho) * power_gap(gap, m, c))
    }

    /// `sigma_{d-2} int_0^pi (gap^2 + 4 r rho sin^2(theta/2))^(-e/2) sin^(d-2)(theta) dtheta`
    /// on panels graded geometrically toward `theta = 0`.
    pub fn numeric(&self, r: f64, rho: f64, gap: f64) -> Result<f64, KernelError> {
        check_radii(r, rho)?;
        let d = self.d as f64;
        let rr = r * rho;
        let integrand = |theta: f64| {
            let h = (0.5 * theta).sin();
            let dist2 = gap * gap + 4.0 * rr * h * h;
            dist2.powf(-0.5 * self.e) * theta.sin().powf(d - 2.0)
        };
        // Angular scale at which the gap stops dominating.
        let theta_c = gap / rr.sqrt();
        let floor = if gap > 0.0 { (1e-3 * theta_c).min(THETA_FLOOR) } else { THETA_FLOOR };
        let mut parts = Vec::new();
        let mut hi = PI;
        while hi > floor {
            let lo = (0.5 * hi).max(floor);
            let lo = if lo < 2.0 * floor { floor } else { lo };
            parts.push(self.rule.integrate(lo, hi, integrand));
            hi = lo;
        }
        if gap > 0.0 {
            // Below the floor the integrand is smooth on the scale theta_c.
            parts.push(self.rule.integrate(0.0, floor, integrand));
        } else {
            // Leading term (r rho)^(-e/2) theta^(d-2-e) of the integrand.
            let k = d - 1.0 - self.e;
            if k <= 0.0 {
                return Err(self.diagonal_error());
            }
            parts.push(rr.powf(-0.5 * self.e) * floor.powf(k) / k);
        }
        Ok(sphere_area(self.d - 2) * neumaier_sum(parts))
    }

    fn diagonal_error(&self) -> KernelError {
        KernelError::NonIntegrableDiagonal { e: self.e, dm1: self.d as f64 - 1.0 }
    }
}

fn check_radii(r: f64, rho: f64) -> Result<(), KernelError> {
    if r > 0.0 && rho > 0.0 && r.is_finite() && rho.is_finite() {
        Ok(())
    } else {
        Err(KernelError::InvalidArgs(format!("radii must be positive: r = {r}, rho = {rho}")))
    }
}

/// Sphere integral of `|x - y|^(-(d - alpha))`.
pub fn riesz_angular(r: f64, rho: f64, d: u32, alpha: f64) -> Result<f64, KernelError> {
    if !(alpha > 0.0 && alpha < d as f64) {
        return Err(KernelError::InvalidArgs(format!("alpha = {alpha} outside (0, {d})")));
    }
    AngularKernel::riesz(d, alpha)?.value(r, rho)
}

/// Sphere integral of `|x - y|^(-(d + sp))`; `gap` is `|r - rho|`.
pub fn frac_angular(r: f64, rho: f64, gap: f64, d: u32, s: f64, p: f64) -> Result<f64, KernelError> {
    if gap == 0.0 {
        return Err(KernelError::DiagonalSingularity);
    }
    AngularKernel::fractional(d, s, p)?.value_with_gap(r, rho, gap)
}

/// `M(r) = int_O rho^(d-1) A(r, rho) drho` for a union `O` of radial
/// intervals not containing `r`, with `A` the fractional kernel.
///
/// `pieces` are `(lo, hi)` with `hi = f64::INFINITY` allowed; the distances
/// `r - hi` (pieces below `r`) or `lo - r` (above) are passed separately as
/// `near_gap` to avoid cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellPiece {
    pub lo: f64,
    pub hi: f64,
    /// Distance from `r` to the nearer end of the piece.
    pub near_gap: f64,
    /// Distance from `r` to the farther end (`INFINITY` for unbounded pieces).
    pub far_gap: f64,
}

/// `P_m(x) - P_m(x + dx)` with `P_m(x) = x^m / m` (`ln x` at `m = 0`).
fn pdiff(m: f64, x: f64, dx: f64) -> f64 {
    if x == 0.0 {
        return if m > 0.0 { -dx.powf(m) / m } else { f64::NEG_INFINITY };
    }
    -power_gap(x, 0.5 * dx, m)
}

fn pm(m: f64, x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    if m == 0.0 {
        x.ln()
    } else {
        x.powf(m) / m
    }
}

/// Fractional-kernel shell moments in three dimensions, in closed form.
fn shell_moment_d3(r: f64, k: f64, pieces: &[ShellPiece]) -> f64 {
    // rho^2 A = (2 pi / (k r)) rho (|r - rho|^-k - (r + rho)^-k)
    let above = |v: f64| {
        // antiderivative in v = rho - r, vanishing at infinity
        if v.is_infinite() {
            0.0
        } else {
            pdiff(2.0 - k, v, 2.0 * r) + r * (pm(1.0 - k, v) + pm(1.0 - k, v + 2.0 * r))
        }
    };
    let below = |v: f64, rho: f64| {
        // antiderivative in rho with v = r - rho, vanishing at rho = 0
        pdiff(2.0 - k, v, 2.0 * rho) - r * pdiff(1.0 - k, v, 2.0 * rho)
    };
    let parts = pieces.iter().map(|pc| {
        if pc.lo >= r {
            above(pc.far_gap) - above(pc.near_gap)
        } else {
            below(pc.near_gap, pc.hi) - below(pc.far_gap, pc.lo)
        }
    });
    2.0 * PI / (k * r) * neumaier_sum(parts)
}

/// Shell moment of the fractional kernel over `pieces` at radius `r`.
pub fn shell_moment(kernel: &AngularKernel, r: f64, pieces: &[ShellPiece]) -> Result<f64, KernelError> {
    if kernel.d == 3 {
        return Ok(shell_moment_d3(r, kernel.diagonal_rate(), pieces));
    }
    shell_moment_numeric(kernel, r, pieces)
}

/// Numerical shell moment; also the oracle for the closed form.
pub fn shell_moment_numeric(
    kernel: &AngularKernel,
    r: f64,
    pieces: &[ShellPiece],
) -> Result<f64, KernelError> {
    let d = kernel.d as f64;
    let rule = GaussRule::legendre(20);
    let mut parts = Vec::new();
    for pc in pieces {
        let above = pc.lo >= r;
        let f = |v: f64| -> Result<f64, KernelError> {
            let rho = if above { r + v } else { r - v };
            Ok(rho.powf(d - 1.0) * kernel.value_with_gap(r, rho, v)?)
        };
        // Geometric panels in the distance v from r, outward from near_gap.
        let far = if pc.far_gap.is_finite() { pc.far_gap } else { (1e5 * r).max(2.0 * pc.near_gap) };
        let mut a = pc.near_gap;
        while a < far {
            let b = if a > 0.0 { (2.0 * a).min(far) } else { far };
            let b = if far - b < 0.25 * (b - a) { far } else { b };
            let mut acc = Vec::with_capacity(rule.nodes.len());
            for (v, w) in rule.on(a, b) {
                acc.push(w * f(v)?);
            }
            parts.push(neumaier_sum(acc));
            a = b;
        }
        if !pc.far_gap.is_finite() {
            // rho^(d-1) A ~ sigma_{d-1} rho^(-1-sp) for rho >> r.
            let sp = kernel.e - d;
            parts.push(sphere_area(kernel.d - 1) * (r + far).powf(-sp) / sp);
        }
    }
    Ok(neumaier_sum(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent oracle: the polar-angle integral on a uniform fine grid
    /// with high-order Gauss panels, no grading, for well-separated radii.
    fn theta_oracle(d: u32, e: f64, r: f64, rho: f64) -> f64 {
        let rule = GaussRule::legendre(40);
        let n = 200;
        let h = PI / n as f64;
        let f = |t: f64| (r * r + rho * rho - 2.0 * r * rho * t.cos()).powf(-0.5 * e) * t.sin().powf(d as f64 - 2.0);
        sphere_area(d - 2) * neumaier_sum((0..n).map(|i| rule.integrate(h * i as f64, h * (i + 1) as f64, f)))
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area(2), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area(3), 2.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area(4), 8.0 * PI * PI / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn riesz_examples() {
        assert_relative_eq!(riesz_angular(1.0, 1.0, 3, 2.0).unwrap(), 4.0 * PI, max_relative = 1e-14);
        let closed = riesz_angular(1.0, 2.0, 3, 1.5).unwrap();
        assert_relative_eq!(closed, theta_oracle(3, 1.5, 1.0, 2.0), max_relative = 1e-10);
        assert_relative_eq!(riesz_angular(2.0, 1.0, 3, 1.5).unwrap(), closed, max_relative = 1e-15);
        // alpha = 1: 2 pi / (r rho) ln((r + rho)/|r - rho|)
        let log_case = riesz_angular(1.0, 3.0, 3, 1.0).unwrap();
        assert_relative_eq!(log_case, 2.0 * PI / 3.0 * 2f64.ln(), max_relative = 1e-14);
        assert!(matches!(
            riesz_angular(1.0, 1.0, 3, 0.5),
            Err(KernelError::NonIntegrableDiagonal { .. })
        ));
        assert!(matches!(
            riesz_angular(1.0, 1.0, 3, 1.0),
            Err(KernelError::NonIntegrableDiagonal { .. })
        ));
    }

    #[test]
    fn fractional_example() {
        // (2 pi / (1 * 2 * 2)) * (1 - 3^-2) = 4 pi / 9
        let v = frac_angular(1.0, 2.0, 1.0, 3, 0.5, 2.0).unwrap();
        assert_relative_eq!(v, 4.0 * PI / 9.0, max_relative = 1e-14);
        assert_relative_eq!(v, theta_oracle(3, 4.0, 1.0, 2.0), max_relative = 1e-10);
        assert_eq!(frac_angular(1.0, 1.0, 0.0, 3, 0.5, 2.0), Err(KernelError::DiagonalSingularity));
    }

    #[test]
    fn homogeneity_and_symmetry() {
        for d in [2, 3, 4, 5] {
            let k = AngularKernel::fractional(d, 0.5, 2.0).unwrap();
            let (r, rho) = (1.3, 2.9);
            let a = k.value(r, rho).unwrap();
            assert_relative_eq!(k.value(rho, r).unwrap(), a, max_relative = 1e-13);
            let c: f64 = 2.0;
            let scaled = k.value(c * r, c * rho).unwrap();
            assert_relative_eq!(scaled, c.powf(-k.e) * a, max_relative = 1e-12);
        }
    }

    #[test]
    fn numeric_matches_oracle_in_other_dimensions() {
        for d in [2, 4, 5] {
            for (e, r, rho) in [(1.5, 1.0, 2.0), (d as f64 + 0.5, 0.7, 3.0), (0.5, 5.0, 1.0)] {
                let k = AngularKernel::new(d, e).unwrap();
                assert_relative_eq!(k.value(r, rho).unwrap(), theta_oracle(d, e, r, rho), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn numeric_agrees_with_closed_form_near_diagonal() {
        for e in [1.0, 1.5, 2.5, 3.5, 4.0] {
            let k = AngularKernel::new(3, e).unwrap();
            for gap in [1e-1, 1e-3, 1e-6, 1e-9] {
                let (r, rho) = (1.0, 1.0 + gap);
                let closed = k.closed_form(r, rho, gap).unwrap();
                let numeric = k.numeric(r, rho, gap).unwrap();
                assert_relative_eq!(numeric, closed, max_relative = 1e-10);
            }
        }
        let k = AngularKernel::new(3, 1.0).unwrap();
        assert_relative_eq!(k.numeric(2.0, 2.0, 0.0).unwrap(), k.closed_form(2.0, 2.0, 0.0).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn fractional_kernel_decreases_away_from_diagonal() {
        let k = AngularKernel::fractional(3, 0.5, 2.0).unwrap();
        let r = 5.0;
        let mut last = f64::INFINITY;
        for rho in [5.01, 5.1, 5.5, 7.0, 10.0, 30.0] {
            let v = k.value(r, rho).unwrap();
            assert!(v < last);
            last = v;
        }
        let mut last = f64::INFINITY;
        for rho in [4.99, 4.9, 4.0, 2.0, 0.5] {
            let v = k.value(r, rho).unwrap();
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn shell_moment_closed_form_matches_numeric() {
        for (s, p) in [(0.5, 2.0), (0.25, 3.0), (0.75, 2.0)] {
            let k = AngularKernel::fractional(3, s, p).unwrap();
            let r = 10.4;
            let pieces = [
                ShellPiece { lo: 0.0, hi: 9.0, near_gap: 1.4, far_gap: 10.4 },
                ShellPiece { lo: 11.0, hi: 20.0, near_gap: 0.6, far_gap: 9.6 },
                ShellPiece { lo: 25.0, hi: f64::INFINITY, near_gap: 14.6, far_gap: f64::INFINITY },
            ];
            let closed = shell_moment(&k, r, &pieces).unwrap();
            let numeric = shell_moment_numeric(&k, r, &pieces).unwrap();
            assert_relative_eq!(closed, numeric, max_relative = 1e-8);
        }
    }
}
