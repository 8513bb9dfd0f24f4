//! Composite Gauss-Legendre quadrature over bump supports, with a rotated,
//! geometrically graded scheme for double integrals that are singular on
//! the diagonal `r = rho`.
//!
//! Every integration variable is a local coordinate `t` on an [`Interval`]
//! with `r = center + width * t`, so differences of nearby radii are formed
//! from local coordinates and never from large absolute radii.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
    #[error("NonIntegrable: diagonal exponent {0} <= -1")]
    NonIntegrable(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadConfig {
    pub gauss_order: usize,
    pub panels_per_bump: usize,
    pub diagonal_refinement_levels: usize,
    pub target_rel_tol: f64,
    /// Pairs of intervals closer than this many (smaller) widths get
    /// geometric grading toward their facing ends.
    pub far_pair_cutoff: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            gauss_order: 16,
            panels_per_bump: 8,
            diagonal_refinement_levels: 12,
            target_rel_tol: 1e-7,
            far_pair_cutoff: 4.0,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        let bad = |m: &str| Err(QuadError::InvalidConfig(m.to_string()));
        if self.gauss_order < 4 {
            return bad("gauss_order must be at least 4");
        }
        if self.panels_per_bump == 0 {
            return bad("panels_per_bump must be positive");
        }
        if !(self.target_rel_tol > 0.0) {
            return bad("target_rel_tol must be positive");
        }
        if !(self.far_pair_cutoff >= 0.0) {
            return bad("far_pair_cutoff must be nonnegative");
        }
        Ok(())
    }

    /// Same config with every resolution knob doubled.
    pub fn refined(&self) -> Self {
        Self {
            gauss_order: self.gauss_order * 2,
            panels_per_bump: self.panels_per_bump * 2,
            diagonal_refinement_levels: self.diagonal_refinement_levels * 2,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub est_rel_error: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn exact(value: f64) -> Self {
        Self { value, est_rel_error: 0.0, converged: true }
    }

    /// Result from a coarse and a fine evaluation; the fine one is kept.
    pub fn from_pair(coarse: f64, fine: f64, tol: f64) -> Self {
        Self::from_abs_error(fine, (fine - coarse).abs(), tol)
    }

    pub fn from_abs_error(value: f64, abs_err: f64, tol: f64) -> Self {
        let est_rel_error = if value != 0.0 {
            abs_err / value.abs()
        } else if abs_err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let est_rel_error = if est_rel_error.is_nan() { f64::INFINITY } else { est_rel_error };
        Self { value, est_rel_error, converged: est_rel_error <= tol && value.is_finite() }
    }

    /// Sum of parts in the given order; absolute error estimates add.
    pub fn sum(parts: &[QuadResult], tol: f64) -> Self {
        let mut value = Neumaier::default();
        let mut err = Neumaier::default();
        for p in parts {
            value.add(p.value);
            err.add(p.est_rel_error * p.value.abs());
        }
        Self::from_abs_error(value.total(), err.total(), tol)
    }
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    for x in xs {
        acc.add(x);
    }
    acc.total()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1, "Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        neumaier_sum(self.on(a, b).map(|(x, w)| w * f(x)))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Piece `[t0, t1]` of the local coordinate of a segment `r = center + width * t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub seg: usize,
    pub center: f64,
    pub width: f64,
    pub t0: f64,
    pub t1: f64,
}

impl Interval {
    /// The whole support `[-1, 1]` of bump `seg`.
    pub fn bump(seg: usize, center: f64, width: f64) -> Self {
        Self { seg, center, width, t0: -1.0, t1: 1.0 }
    }

    /// A plain interval `[a, b]` as its own segment.
    pub fn plain(seg: usize, a: f64, b: f64) -> Self {
        Self { seg, center: 0.5 * (a + b), width: 0.5 * (b - a), t0: -1.0, t1: 1.0 }
    }

    pub fn radius(&self, t: f64) -> f64 {
        self.center + self.width * t
    }

    pub fn lo(&self) -> f64 {
        self.radius(self.t0)
    }

    pub fn hi(&self) -> f64 {
        self.radius(self.t1)
    }

    pub fn local(&self, r: f64) -> f64 {
        (r - self.center) / self.width
    }

    /// Restriction to `r >= r0` (`above`) or `r <= r0`; `None` if empty.
    pub fn clip(&self, r0: f64, above: bool) -> Option<Self> {
        let t = self.local(r0).clamp(self.t0, self.t1);
        let out = if above { Self { t0: t, ..*self } } else { Self { t1: t, ..*self } };
        (out.t1 > out.t0).then_some(out)
    }

    fn node(&self, t: f64) -> Node {
        Node { r: self.radius(t), t, seg: self.seg }
    }

    fn same_piece(&self, other: &Self) -> bool {
        self.seg == other.seg && self.t0 == other.t0 && self.t1 == other.t1
    }
}

/// A quadrature point: radius plus its exact local coordinate on segment `seg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub r: f64,
    pub t: f64,
    pub seg: usize,
}

/// `|r - rho|` for two points given by local coordinates.
pub fn gap(a: &Interval, ta: f64, b: &Interval, tb: f64) -> f64 {
    if a.seg == b.seg && a.center == b.center && a.width == b.width {
        a.width * (ta - tb).abs()
    } else {
        ((a.center - b.center) + (a.width * ta - b.width * tb)).abs()
    }
}

fn uniform_breaks(t0: f64, t1: f64, panels: usize) -> Vec<f64> {
    let h = (t1 - t0) / panels as f64;
    let mut b: Vec<f64> = (0..panels).map(|i| t0 + h * i as f64).collect();
    b.push(t1);
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Toward {
    Lo,
    Hi,
}

fn graded_breaks(iv: &Interval, panels: usize, toward: Option<Toward>, levels: usize) -> Vec<f64> {
    let mut b = uniform_breaks(iv.t0, iv.t1, panels);
    let h = (iv.t1 - iv.t0) / panels as f64;
    match toward {
        Some(Toward::Hi) => {
            b.pop();
            b.extend((1..=levels).map(|i| iv.t1 - h * 0.5f64.powi(i as i32)));
            b.push(iv.t1);
        }
        Some(Toward::Lo) => {
            let mut head = vec![iv.t0];
            head.extend((1..=levels).rev().map(|i| iv.t0 + h * 0.5f64.powi(i as i32)));
            head.extend_from_slice(&b[1..]);
            b = head;
        }
        None => {}
    }
    b
}

fn points(iv: &Interval, breaks: &[f64], rule: &GaussRule) -> Vec<(Node, f64)> {
    breaks
        .windows(2)
        .flat_map(|w| rule.on(w[0], w[1]).map(|(t, wt)| (iv.node(t), wt * iv.width)))
        .collect()
}

/// `int f(r) dr` over a list of intervals.
pub fn integrate_1d<F>(intervals: &[Interval], f: F, cfg: &QuadConfig) -> QuadResult
where
    F: Fn(&Node) -> f64 + Sync,
{
    if intervals.is_empty() {
        return QuadResult::exact(0.0);
    }
    let eval = |rule: &GaussRule| {
        neumaier_sum(intervals.iter().flat_map(|iv| {
            let breaks = uniform_breaks(iv.t0, iv.t1, cfg.panels_per_bump);
            points(iv, &breaks, rule).into_iter().map(|(n, w)| w * f(&n))
        }))
    };
    let coarse = eval(&GaussRule::legendre(cfg.gauss_order));
    let fine = eval(&GaussRule::legendre(2 * cfg.gauss_order));
    QuadResult::from_pair(coarse, fine, cfg.target_rel_tol)
}

/// How the integrand behaves at `r = rho` on a diagonal (self) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagonal {
    /// Signed power of `|r - rho|` in the kernel after angular reduction.
    pub kernel_exponent: f64,
    /// Order to which the non-kernel factor vanishes at the diagonal.
    pub vanishing_order: f64,
    /// The kernel has a `log |r - rho|` singularity instead of a power.
    pub logarithmic: bool,
    /// `F(x, y) = F(y, x)`, so only half the square is evaluated.
    pub symmetric: bool,
}

impl Diagonal {
    fn substitution_power(&self) -> Result<f64, QuadError> {
        if self.logarithmic {
            return Ok(3.0);
        }
        let kappa = self.kernel_exponent + self.vanishing_order;
        if kappa <= -1.0 {
            return Err(QuadError::NonIntegrable(kappa));
        }
        Ok(if kappa < 0.0 { 1.0 / (kappa + 1.0) } else { 3.0 })
    }
}

/// `int int F(r, rho, |r - rho|) dr drho` over all pairs of `xs` and `ys`.
///
/// Pairs that are the same piece of the same segment use the rotated scheme
/// when `diag` is given; all other pairs use tensor rules.
pub fn integrate_2d_offdiag<F>(
    xs: &[Interval],
    ys: &[Interval],
    f: F,
    diag: Option<Diagonal>,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError>
where
    F: Fn(&Node, &Node, f64) -> f64 + Sync,
{
    let pairs: Vec<(usize, usize)> =
        (0..xs.len()).flat_map(|i| (0..ys.len()).map(move |j| (i, j))).collect();
    let parts: Vec<Result<QuadResult, QuadError>> = pairs
        .par_iter()
        .map(|&(i, j)| integrate_pair(&xs[i], &ys[j], &f, diag, cfg))
        .collect();
    let parts: Vec<QuadResult> = parts.into_iter().collect::<Result<_, _>>()?;
    Ok(QuadResult::sum(&parts, cfg.target_rel_tol))
}

/// One rectangle `x x y` of a double integral.
pub fn integrate_pair<F>(
    x: &Interval,
    y: &Interval,
    f: &F,
    diag: Option<Diagonal>,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError>
where
    F: Fn(&Node, &Node, f64) -> f64 + Sync,
{
    let n = cfg.gauss_order;
    let (coarse, fine) = match diag {
        Some(d) if x.same_piece(y) => {
            let m = d.substitution_power()?;
            (rotated(x, f, d, m, n, cfg), rotated(x, f, d, m, 2 * n, cfg))
        }
        _ => (tensor(x, y, f, n, cfg), tensor(x, y, f, 2 * n, cfg)),
    };
    Ok(QuadResult::from_pair(coarse, fine, cfg.target_rel_tol))
}

fn tensor<F>(x: &Interval, y: &Interval, f: &F, order: usize, cfg: &QuadConfig) -> f64
where
    F: Fn(&Node, &Node, f64) -> f64 + Sync,
{
    let rule = GaussRule::legendre(order);
    let (toward_x, toward_y) = facing(x, y, cfg);
    let levels = cfg.diagonal_refinement_levels;
    let px = points(x, &graded_breaks(x, cfg.panels_per_bump, toward_x, levels), &rule);
    let py = points(y, &graded_breaks(y, cfg.panels_per_bump, toward_y, levels), &rule);
    let rows: Vec<f64> = px
        .par_iter()
        .map(|(nx, wx)| {
            let row = neumaier_sum(py.iter().map(|(ny, wy)| wy * f(nx, ny, gap(x, nx.t, y, ny.t))));
            wx * row
        })
        .collect();
    neumaier_sum(rows)
}

/// Ends of `x` and `y` that face each other when the pair is close.
fn facing(x: &Interval, y: &Interval, cfg: &QuadConfig) -> (Option<Toward>, Option<Toward>) {
    let min_width = (x.hi() - x.lo()).min(y.hi() - y.lo());
    if x.hi() <= y.lo() {
        if y.lo() - x.hi() < cfg.far_pair_cutoff * min_width {
            return (Some(Toward::Hi), Some(Toward::Lo));
        }
    } else if y.hi() <= x.lo() && x.lo() - y.hi() < cfg.far_pair_cutoff * min_width {
        return (Some(Toward::Lo), Some(Toward::Hi));
    }
    (None, None)
}

/// Self pair in coordinates `u = t - tau`, `v = t + tau`.
fn rotated<F>(iv: &Interval, f: &F, d: Diagonal, m: f64, order: usize, cfg: &QuadConfig) -> f64
where
    F: Fn(&Node, &Node, f64) -> f64 + Sync,
{
    let rule = GaussRule::legendre(order);
    let len = iv.t1 - iv.t0;
    let vmid = iv.t0 + iv.t1;
    let levels = cfg.diagonal_refinement_levels;
    let u_inner = len * 0.5f64.powi(levels as i32);

    // (u, weight) nodes: innermost panel through u = u_inner * w^m, then
    // geometric panels [u_inner 2^k, u_inner 2^(k+1)].
    let mut unodes: Vec<(f64, f64)> = rule
        .on(0.0, 1.0)
        .map(|(w, wt)| (u_inner * w.powf(m), wt * m * u_inner * w.powf(m - 1.0)))
        .collect();
    for k in 0..levels {
        let a = u_inner * 2f64.powi(k as i32);
        unodes.extend(rule.on(a, 2.0 * a));
    }

    // dr drho = width^2 dt dtau = width^2 / 2 du dv
    let jac = 0.5 * iv.width * iv.width;
    let panels = cfg.panels_per_bump;
    let rows: Vec<f64> = unodes
        .par_iter()
        .map(|&(u, wu)| {
            let g = iv.width * u;
            let mut acc = Neumaier::default();
            for (va, vb) in [(2.0 * iv.t0 + u, vmid), (vmid, 2.0 * iv.t1 - u)] {
                if vb <= va {
                    continue;
                }
                let breaks = uniform_breaks(va, vb, panels);
                for w in breaks.windows(2) {
                    for (v, wv) in rule.on(w[0], w[1]) {
                        let nt = iv.node(0.5 * (v + u));
                        let ntau = iv.node(0.5 * (v - u));
                        let val = if d.symmetric {
                            2.0 * f(&nt, &ntau, g)
                        } else {
                            f(&nt, &ntau, g) + f(&ntau, &nt, g)
                        };
                        acc.add(wv * val);
                    }
                }
            }
            wu * acc.total()
        })
        .collect();
    jac * neumaier_sum(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_rule_exact_for_polynomials() {
        for n in [4, 7, 16, 32, 64] {
            let rule = GaussRule::legendre(n);
            assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
            for k in 0..(2 * n) {
                let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                let got = rule.integrate(-1.0, 1.0, |x| x.powi(k as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn integrate_1d_polynomial_and_empty() {
        let cfg = QuadConfig::default();
        let res = integrate_1d(&[Interval::plain(0, 0.0, 1.0)], |n| n.r * n.r, &cfg);
        assert!((res.value - 1.0 / 3.0).abs() < 1e-12);
        assert!(res.converged);
        let empty = integrate_1d(&[], |_| 1.0, &cfg);
        assert_eq!(empty, QuadResult::exact(0.0));
    }

    #[test]
    fn integrate_1d_bump_integral() {
        use crate::profiles::MotherBump;
        let cfg = QuadConfig::default();
        let (center, width) = (1.0e4, 3.0);
        let res = integrate_1d(
            &[Interval::bump(0, center, width)],
            |n| MotherBump::value(n.t),
            &cfg,
        );
        let reference = {
            let rule = GaussRule::legendre(64);
            let breaks = uniform_breaks(-1.0, 1.0, 64);
            neumaier_sum(breaks.windows(2).map(|w| rule.integrate(w[0], w[1], MotherBump::value)))
        };
        assert_relative_eq!(reference, crate::profiles::MotherBump::INTEGRAL, max_relative = 1e-14);
        assert_relative_eq!(res.value, width * reference, max_relative = 1e-12);
        assert!(res.converged);
    }

    #[test]
    fn tensor_constant_integrand() {
        let cfg = QuadConfig::default();
        let res = integrate_2d_offdiag(
            &[Interval::plain(0, 1.0, 2.0)],
            &[Interval::plain(1, 3.0, 4.0)],
            |_, _, _| 1.0,
            None,
            &cfg,
        )
        .unwrap();
        assert!((res.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_gap_uses_local_coordinates() {
        let cfg = QuadConfig::default();
        let x = Interval::plain(0, 1.0, 2.0);
        let y = Interval::plain(1, 3.0, 4.0);
        // int_1^2 int_3^4 (rho - r) = 2
        let res = integrate_2d_offdiag(&[x], &[y], |_, _, g| g, None, &cfg).unwrap();
        assert_relative_eq!(res.value, 2.0, max_relative = 1e-13);
    }

    fn diag(kernel_exponent: f64, vanishing_order: f64) -> Diagonal {
        Diagonal { kernel_exponent, vanishing_order, logarithmic: false, symmetric: true }
    }

    #[test]
    fn rotated_scheme_on_integrable_power_singularity() {
        // int_0^1 int_0^1 |x - y|^(-1/2) = 8/3
        let cfg = QuadConfig::default();
        let iv = Interval::plain(0, 0.0, 1.0);
        let res = integrate_2d_offdiag(&[iv], &[iv], |_, _, g| g.powf(-0.5), Some(diag(-0.5, 0.0)), &cfg)
            .unwrap();
        assert_relative_eq!(res.value, 8.0 / 3.0, max_relative = 1e-12);
        assert!(res.converged);
    }

    #[test]
    fn rotated_scheme_on_log_singularity() {
        // int_0^1 int_0^1 ln|x - y| = -3/2
        let cfg = QuadConfig::default();
        let iv = Interval::plain(0, 0.0, 1.0);
        let d = Diagonal { kernel_exponent: 0.0, vanishing_order: 0.0, logarithmic: true, symmetric: true };
        let res = integrate_2d_offdiag(&[iv], &[iv], |_, _, g| g.ln(), Some(d), &cfg).unwrap();
        assert_relative_eq!(res.value, -1.5, max_relative = 1e-12);
    }

    #[test]
    fn rotated_scheme_nonsymmetric() {
        // int_0^1 int_0^1 x |x - y|^(-1/2) = 4/3 by symmetry of the kernel
        let cfg = QuadConfig::default();
        let iv = Interval::plain(0, 0.0, 1.0);
        let d = Diagonal { symmetric: false, ..diag(-0.5, 0.0) };
        let res = integrate_2d_offdiag(&[iv], &[iv], |a, _, g| a.r * g.powf(-0.5), Some(d), &cfg)
            .unwrap();
        assert_relative_eq!(res.value, 4.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn nonintegrable_diagonal_is_rejected() {
        let cfg = QuadConfig::default();
        let iv = Interval::plain(0, 0.0, 1.0);
        let err = integrate_2d_offdiag(&[iv], &[iv], |_, _, g| 1.0 / g, Some(diag(-1.0, 0.0)), &cfg);
        assert!(matches!(err, Err(QuadError::NonIntegrable(_))));
    }

    #[test]
    fn refinement_helps_on_singular_diagonal() {
        // Vanishing factor (x - y)^2 against |x - y|^(-2.5), like a seminorm
        // with s = 1/2 in the wrong dimension count: integrand |x-y|^(-1/2).
        let iv = Interval::plain(0, 0.0, 1.0);
        let exact = 8.0 / 3.0;
        let f = |_: &Node, _: &Node, g: f64| g * g * g.powf(-2.5);
        let graded = integrate_2d_offdiag(&[iv], &[iv], f, Some(diag(-2.5, 2.0)), &QuadConfig::default())
            .unwrap();
        let raw = {
            // Plain tensor Gauss; orders 16 and 15 so no node sits on the diagonal.
            let breaks = uniform_breaks(-1.0, 1.0, 8);
            let px = points(&iv, &breaks, &GaussRule::legendre(16));
            let py = points(&iv, &breaks, &GaussRule::legendre(15));
            neumaier_sum(px.iter().flat_map(|(a, wa)| {
                py.iter().map(move |(b, wb)| {
                    let g = (a.r - b.r).abs();
                    wa * wb * f(a, b, g)
                })
            }))
        };
        let graded_err = (graded.value - exact).abs() / exact;
        let raw_err = (raw - exact).abs() / exact;
        assert!(graded_err < 1e-10, "graded error {graded_err}");
        assert!(raw_err > 1e3 * graded_err, "raw {raw_err} vs graded {graded_err}");
    }

    #[test]
    fn clip_restricts_local_range() {
        let iv = Interval::bump(0, 10.0, 2.0);
        let above = iv.clip(11.0, true).unwrap();
        assert_eq!(above.t0, 0.5);
        assert_eq!(above.t1, 1.0);
        assert!(iv.clip(12.5, true).is_none());
        assert_eq!(iv.clip(5.0, true).unwrap(), iv);
        assert!(iv.clip(8.0, false).is_none());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(xs), 2.0);
    }
}
