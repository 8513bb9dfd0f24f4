//! The three functionals of the inequality for radial profiles and the
//! scale-invariant quotient
//! `Q = |g|_{L^gamma} / (|g|_{W^{s,p}}^{beta1 p} E(g)^{beta2})`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactparams::{derive, to_f64, DerivedParams, ParamError, ParamTuple};
use crate::kernels::{shell_moment, sphere_area, AngularKernel, KernelError, ShellPiece};
use crate::profiles::RadialProfile;
use crate::quadrature::{
    gap, integrate_1d, integrate_2d_offdiag, Diagonal, Interval, Node, QuadConfig, QuadError,
    QuadResult,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalError {
    #[error("TrivialProfile: the profile vanishes identically")]
    TrivialProfile,
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Params(#[from] ParamError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    InsideR,
    OutsideR,
}

fn intervals(profile: &RadialProfile) -> Vec<Interval> {
    profile
        .bumps()
        .iter()
        .enumerate()
        .map(|(i, b)| Interval::bump(i, b.center, b.width))
        .collect()
}

fn value(profile: &RadialProfile, n: &Node) -> f64 {
    profile.eval_local(n.seg, n.t)
}

/// `sigma_{d-1} int |g|^gamma r^(d-1) dr`.
pub fn lgamma_integral(
    profile: &RadialProfile,
    gamma: f64,
    d: u32,
    cfg: &QuadConfig,
) -> QuadResult {
    let dm1 = d as f64 - 1.0;
    let res = integrate_1d(&intervals(profile), |n| value(profile, n).powf(gamma) * n.r.powf(dm1), cfg);
    scale(res, sphere_area(d - 1), cfg)
}

/// `|g|_{L^gamma(R^d)}`.
pub fn lgamma_norm(
    profile: &RadialProfile,
    gamma: f64,
    d: u32,
    cfg: &QuadConfig,
) -> Result<QuadResult, FunctionalError> {
    if !(gamma > 0.0) {
        return Err(FunctionalError::InvalidArgs(format!("gamma = {gamma}")));
    }
    Ok(root(lgamma_integral(profile, gamma, d, cfg), gamma, cfg))
}

fn scale(res: QuadResult, c: f64, cfg: &QuadConfig) -> QuadResult {
    QuadResult::from_abs_error(c * res.value, c * res.value.abs() * res.est_rel_error, cfg.target_rel_tol)
}

fn root(res: QuadResult, k: f64, cfg: &QuadConfig) -> QuadResult {
    QuadResult::from_abs_error(
        res.value.powf(1.0 / k),
        res.value.powf(1.0 / k) * res.est_rel_error / k,
        cfg.target_rel_tol,
    )
}

/// The seminorm raised to the power `p`:
/// the Gagliardo double integral for `s < 1`, `int |grad g|^p` for `s = 1`.
pub fn seminorm_integral(
    profile: &RadialProfile,
    s: f64,
    p: f64,
    d: u32,
    cfg: &QuadConfig,
) -> Result<QuadResult, FunctionalError> {
    if !(s > 0.0 && s <= 1.0 && p >= 1.0) {
        return Err(FunctionalError::InvalidArgs(format!("s = {s}, p = {p}")));
    }
    let dm1 = d as f64 - 1.0;
    let sigma = sphere_area(d - 1);
    let ivs = intervals(profile);
    if s == 1.0 {
        let res = integrate_1d(
            &ivs,
            |n| profile.eval_derivative_local(n.seg, n.t).abs().powf(p) * n.r.powf(dm1),
            cfg,
        );
        return Ok(scale(res, sigma, cfg));
    }

    let kernel = AngularKernel::fractional(d, s, p)?;
    let diag = Diagonal {
        kernel_exponent: -kernel.diagonal_rate(),
        vanishing_order: p,
        logarithmic: false,
        symmetric: true,
    };
    // Kernel failures cannot happen off the diagonal with positive radii;
    // they would surface as NaN and fail convergence.
    let pair = integrate_2d_offdiag(
        &ivs,
        &ivs,
        |a, b, g| {
            let diff = (value(profile, a) - value(profile, b)).abs().powf(p);
            if diff == 0.0 {
                return 0.0;
            }
            let k = kernel.value_with_gap(a.r, b.r, g).unwrap_or(f64::NAN);
            diff * (a.r * b.r).powf(dm1) * k
        },
        Some(diag),
        cfg,
    )?;

    // Rectangles where rho lies outside every support: |g(r)|^p against
    // the kernel's shell moment over the complement.
    let complement = integrate_1d(
        &ivs,
        |n| {
            let gp = value(profile, n).powf(p);
            if gp == 0.0 {
                return 0.0;
            }
            let pieces = complement_pieces(&ivs, n);
            gp * n.r.powf(dm1) * shell_moment(&kernel, n.r, &pieces).unwrap_or(f64::NAN)
        },
        cfg,
    );
    let total = QuadResult::sum(&[pair, scale(complement, 2.0, cfg)], cfg.target_rel_tol);
    Ok(scale(total, sigma, cfg))
}

/// The gaps of `[0, inf)` between the supports, seen from node `n`.
fn complement_pieces(ivs: &[Interval], n: &Node) -> Vec<ShellPiece> {
    let here = &ivs[n.seg];
    let dist = |iv: &Interval, t: f64| gap(here, n.t, iv, t);
    let mut pieces = Vec::with_capacity(ivs.len() + 1);
    let mut prev: Option<&Interval> = None;
    for iv in ivs {
        let (lo, lo_gap) = match prev {
            Some(p) => (p.hi(), dist(p, p.t1)),
            None => (0.0, n.r),
        };
        let hi = iv.lo();
        let hi_gap = dist(iv, iv.t0);
        if hi > lo {
            pieces.push(if iv.seg <= n.seg {
                ShellPiece { lo, hi, near_gap: hi_gap, far_gap: lo_gap }
            } else {
                ShellPiece { lo, hi, near_gap: lo_gap, far_gap: hi_gap }
            });
        }
        prev = Some(iv);
    }
    if let Some(last) = prev {
        pieces.push(ShellPiece {
            lo: last.hi(),
            hi: f64::INFINITY,
            near_gap: dist(last, last.t1),
            far_gap: f64::INFINITY,
        });
    }
    pieces
}

/// `|g|_{W^{s,p}}`.
pub fn sobolev_seminorm(
    profile: &RadialProfile,
    s: f64,
    p: f64,
    d: u32,
    cfg: &QuadConfig,
) -> Result<QuadResult, FunctionalError> {
    Ok(root(seminorm_integral(profile, s, p, d, cfg)?, p, cfg))
}

/// `int int |g(x)|^q |g(y)|^q |x - y|^(alpha - d) dx dy`, not rooted.
pub fn coulomb_energy(
    profile: &RadialProfile,
    q: f64,
    alpha: f64,
    d: u32,
    cfg: &QuadConfig,
) -> Result<QuadResult, FunctionalError> {
    if !(alpha > 0.0 && alpha < d as f64) {
        return Err(FunctionalError::InvalidArgs(format!("alpha = {alpha} outside (0, {d})")));
    }
    let dm1 = d as f64 - 1.0;
    let kernel = AngularKernel::riesz(d, alpha)?;
    let rate = kernel.diagonal_rate();
    let diag = Diagonal {
        kernel_exponent: -rate,
        vanishing_order: 0.0,
        logarithmic: rate == 0.0,
        symmetric: true,
    };
    let res = integrate_2d_offdiag(
        &intervals(profile),
        &intervals(profile),
        |a, b, g| {
            let gq = (value(profile, a) * value(profile, b)).powf(q);
            if gq == 0.0 {
                return 0.0;
            }
            gq * (a.r * b.r).powf(dm1) * kernel.value_with_gap(a.r, b.r, g).unwrap_or(f64::NAN)
        },
        Some(diag),
        cfg,
    )?;
    Ok(scale(res, sphere_area(d - 1), cfg))
}

/// `sigma_{d-1} int_region |g|^q r^(-w) r^(d-1) dr` with the region
/// `r < r0` or `r > r0`.
pub fn weighted_lq(
    profile: &RadialProfile,
    q: f64,
    w: f64,
    region: Region,
    r0: f64,
    d: u32,
    cfg: &QuadConfig,
) -> QuadResult {
    let clipped: Vec<Interval> = intervals(profile)
        .iter()
        .filter_map(|iv| iv.clip(r0, region == Region::OutsideR))
        .collect();
    let dm1 = d as f64 - 1.0;
    let res = integrate_1d(&clipped, |n| value(profile, n).powf(q) * n.r.powf(dm1 - w), cfg);
    scale(res, sphere_area(d - 1), cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadDiagnostics {
    pub lgamma: QuadResult,
    pub seminorm: QuadResult,
    pub coulomb: QuadResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub lgamma_norm: f64,
    pub seminorm: f64,
    pub coulomb_energy: f64,
    pub quotient: f64,
    pub quad_diagnostics: QuadDiagnostics,
}

impl FunctionalReport {
    pub fn converged(&self) -> bool {
        let d = &self.quad_diagnostics;
        d.lgamma.converged && d.seminorm.converged && d.coulomb.converged
    }
}

/// All three functionals and the quotient for `params`.
pub fn quotient(
    profile: &RadialProfile,
    params: &ParamTuple,
    cfg: &QuadConfig,
) -> Result<FunctionalReport, FunctionalError> {
    let derived = derive(params)?;
    quotient_with(profile, params, &derived, cfg)
}

pub fn quotient_with(
    profile: &RadialProfile,
    params: &ParamTuple,
    derived: &DerivedParams,
    cfg: &QuadConfig,
) -> Result<FunctionalReport, FunctionalError> {
    cfg.validate()?;
    let f = params.as_f64();
    let lgamma = lgamma_norm(profile, f.gamma, f.d, cfg)?;
    let seminorm = sobolev_seminorm(profile, f.s, f.p, f.d, cfg)?;
    let coulomb = coulomb_energy(profile, f.q, f.alpha, f.d, cfg)?;
    if lgamma.value == 0.0 || seminorm.value == 0.0 || coulomb.value == 0.0 {
        return Err(FunctionalError::TrivialProfile);
    }
    let (b1, b2) = (to_f64(&derived.beta1), to_f64(&derived.beta2));
    // In logarithms: the three factors can be far outside the f64 range
    // of their product.
    let log_q = lgamma.value.ln() - b1 * f.p * seminorm.value.ln() - b2 * coulomb.value.ln();
    Ok(FunctionalReport {
        lgamma_norm: lgamma.value,
        seminorm: seminorm.value,
        coulomb_energy: coulomb.value,
        quotient: log_q.exp(),
        quad_diagnostics: QuadDiagnostics { lgamma, seminorm, coulomb },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactparams::Preset;
    use crate::profiles::BumpSpec;
    use crate::quadrature::{neumaier_sum, GaussRule};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn bump(lambda: f64, r: f64, s: f64) -> RadialProfile {
        RadialProfile::single(lambda, r, s).unwrap()
    }

    /// High-order composite Gauss on [a, b] with many panels.
    fn oracle_1d(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let rule = GaussRule::legendre(48);
        let n = 400;
        let h = (b - a) / n as f64;
        neumaier_sum((0..n).map(|i| rule.integrate(a + h * i as f64, a + h * (i + 1) as f64, &f)))
    }

    #[test]
    fn lgamma_homogeneity_and_dilation() {
        let g = bump(1.0, 10.0, 1.0);
        let base = lgamma_norm(&g, 3.0, 3, &cfg()).unwrap();
        let doubled = lgamma_norm(&g.scale_amplitude(2.0).unwrap(), 3.0, 3, &cfg()).unwrap();
        assert_relative_eq!(doubled.value, 2.0 * base.value, max_relative = 1e-13);
        let dil = lgamma_norm(&g.dilate(2.0).unwrap(), 3.0, 3, &cfg()).unwrap();
        assert_relative_eq!(dil.value, 2f64.powf(1.0) * base.value, max_relative = 1e-8);
        let direct = oracle_1d(9.0, 11.0, |r| g.eval(r).powi(3) * r * r) * 4.0 * PI;
        assert_relative_eq!(base.value.powi(3), direct, max_relative = 1e-10);
    }

    #[test]
    fn gradient_seminorm_matches_oracle() {
        let g = bump(1.3, 20.0, 2.0);
        let res = seminorm_integral(&g, 1.0, 2.0, 3, &cfg()).unwrap();
        let direct = 4.0 * PI * oracle_1d(18.0, 22.0, |r| g.eval_derivative(r).powi(2) * r * r);
        assert_relative_eq!(res.value, direct, max_relative = 1e-9);
        assert!(res.converged);
    }

    #[test]
    fn fractional_seminorm_dilation() {
        let g = bump(1.0, 10.0, 1.0);
        let (s, p, d) = (0.5, 2.0, 3);
        let base = seminorm_integral(&g, s, p, d, &cfg()).unwrap();
        assert!(base.converged, "{base:?}");
        for c in [0.5, 2.0, 4.0] {
            let dil = seminorm_integral(&g.dilate(c).unwrap(), s, p, d, &cfg()).unwrap();
            assert_relative_eq!(dil.value, c.powf(d as f64 - s * p) * base.value, max_relative = 1e-8);
        }
    }

    #[test]
    fn fractional_seminorm_refinement_stable() {
        let g = bump(1.0, 10.0, 1.0);
        let base = seminorm_integral(&g, 0.5, 2.0, 3, &cfg()).unwrap();
        let mut doubled = cfg();
        doubled.diagonal_refinement_levels *= 2;
        let fine = seminorm_integral(&g, 0.5, 2.0, 3, &doubled).unwrap();
        assert!((fine.value - base.value).abs() / base.value < cfg().target_rel_tol);
        let refined = seminorm_integral(&g, 0.5, 2.0, 3, &cfg().refined()).unwrap();
        assert_relative_eq!(refined.value, base.value, max_relative = 1e-8);
    }

    #[test]
    fn complement_pieces_cover_the_gaps() {
        let g = RadialProfile::new(vec![BumpSpec::new(1.0, 5.0, 1.0), BumpSpec::new(1.0, 20.0, 2.0)])
            .unwrap();
        let ivs = intervals(&g);
        let n = Node { r: 5.5, t: 0.5, seg: 0 };
        let pieces = complement_pieces(&ivs, &n);
        assert_eq!(pieces.len(), 3);
        assert_eq!((pieces[0].lo, pieces[0].hi), (0.0, 4.0));
        assert_relative_eq!(pieces[0].near_gap, 1.5);
        assert_relative_eq!(pieces[0].far_gap, 5.5);
        assert_eq!((pieces[1].lo, pieces[1].hi), (6.0, 18.0));
        assert_relative_eq!(pieces[1].near_gap, 0.5);
        assert_relative_eq!(pieces[1].far_gap, 12.5);
        assert_eq!(pieces[2].far_gap, f64::INFINITY);
        let n2 = Node { r: 19.0, t: -0.5, seg: 1 };
        let p2 = complement_pieces(&ivs, &n2);
        assert_relative_eq!(p2[1].near_gap, 1.0);
        assert_relative_eq!(p2[1].far_gap, 13.0);
    }

    #[test]
    fn seminorm_other_dimension_dilation() {
        let g = bump(1.0, 6.0, 1.0);
        let c = QuadConfig { gauss_order: 8, panels_per_bump: 4, diagonal_refinement_levels: 6, ..cfg() };
        let base = seminorm_integral(&g, 0.5, 2.0, 2, &c).unwrap();
        let dil = seminorm_integral(&g.dilate(2.0).unwrap(), 0.5, 2.0, 2, &c).unwrap();
        assert_relative_eq!(dil.value, 2f64.powf(1.0) * base.value, max_relative = 1e-6);
    }

    #[test]
    fn coulomb_homogeneity_and_superadditivity() {
        let g = bump(1.0, 10.0, 1.0);
        let (q, alpha) = (2.0, 2.0);
        let e = coulomb_energy(&g, q, alpha, 3, &cfg()).unwrap();
        assert!(e.converged);
        let e2 = coulomb_energy(&g.scale_amplitude(2.0).unwrap(), q, alpha, 3, &cfg()).unwrap();
        assert_relative_eq!(e2.value, 16.0 * e.value, max_relative = 1e-12);
        let dil = coulomb_energy(&g.dilate(2.0).unwrap(), q, alpha, 3, &cfg()).unwrap();
        assert_relative_eq!(dil.value, 2f64.powf(5.0) * e.value, max_relative = 1e-8);

        let a = BumpSpec::new(1.0, 10.0, 1.0);
        let b = BumpSpec::new(0.5, 30.0, 3.0);
        let both = RadialProfile::new(vec![a, b]).unwrap();
        let ea = coulomb_energy(&RadialProfile::new(vec![a]).unwrap(), q, alpha, 3, &cfg()).unwrap();
        let eb = coulomb_energy(&RadialProfile::new(vec![b]).unwrap(), q, alpha, 3, &cfg()).unwrap();
        let eab = coulomb_energy(&both, q, alpha, 3, &cfg()).unwrap();
        assert!(eab.value > ea.value + eb.value);
    }

    #[test]
    fn coulomb_self_convergence() {
        for alpha in [0.5, 1.0, 2.0] {
            let g = bump(1.0, 10.0, 1.0);
            let base = coulomb_energy(&g, 2.0, alpha, 3, &cfg()).unwrap();
            let fine = coulomb_energy(&g, 2.0, alpha, 3, &cfg().refined()).unwrap();
            assert_relative_eq!(base.value, fine.value, max_relative = 1e-8);
        }
    }

    #[test]
    fn weighted_lq_regions() {
        let g = bump(1.0, 10.0, 1.0);
        let outside = weighted_lq(&g, 3.0, 0.0, Region::OutsideR, 1.0, 3, &cfg());
        let norm = lgamma_norm(&g, 3.0, 3, &cfg()).unwrap();
        assert_relative_eq!(outside.value, norm.value.powi(3), max_relative = 1e-12);
        let inside = weighted_lq(&g, 3.0, 0.0, Region::InsideR, 1.0, 3, &cfg());
        assert_eq!(inside.value, 0.0);
        let split_in = weighted_lq(&g, 2.0, 0.6, Region::InsideR, 10.3, 3, &cfg());
        let split_out = weighted_lq(&g, 2.0, 0.6, Region::OutsideR, 10.3, 3, &cfg());
        let whole = weighted_lq(&g, 2.0, 0.6, Region::OutsideR, 1.0, 3, &cfg());
        assert!(split_in.value > 0.0 && split_out.value > 0.0);
        assert_relative_eq!(split_in.value + split_out.value, whole.value, max_relative = 1e-9);
    }

    #[test]
    fn quotient_invariances_lions() {
        let params = Preset::Lions.params();
        let g = bump(1.0, 10.0, 1.0);
        let q0 = quotient(&g, &params, &cfg()).unwrap();
        assert!(q0.quotient.is_finite() && q0.quotient > 0.0);
        assert!(q0.converged(), "{q0:?}");
        for c in [0.25, 4.0] {
            let qa = quotient(&g.scale_amplitude(c).unwrap(), &params, &cfg()).unwrap();
            assert_relative_eq!(qa.quotient, q0.quotient, max_relative = 1e-6);
        }
        for c in [0.5, 2.0, 4.0] {
            let qd = quotient(&g.dilate(c).unwrap(), &params, &cfg()).unwrap();
            assert_relative_eq!(qd.quotient, q0.quotient, max_relative = 1e-6);
        }
        let fine = quotient(&g, &params, &cfg().refined()).unwrap();
        assert_relative_eq!(fine.quotient, q0.quotient, max_relative = 1e-6);
    }

    #[test]
    fn quotient_invariance_fractional() {
        let params = Preset::Case1.params();
        let g = bump(1.0, 10.0, 1.0);
        let q0 = quotient(&g, &params, &cfg()).unwrap();
        let qa = quotient(&g.scale_amplitude(4.0).unwrap(), &params, &cfg()).unwrap();
        let qd = quotient(&g.dilate(2.0).unwrap(), &params, &cfg()).unwrap();
        assert_relative_eq!(qa.quotient, q0.quotient, max_relative = 1e-6);
        assert_relative_eq!(qd.quotient, q0.quotient, max_relative = 1e-6);
    }
}
