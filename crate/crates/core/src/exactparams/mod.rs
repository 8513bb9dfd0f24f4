//! Exact rational parameter algebra.
//!
//! Everything here is polynomial in the six inequality parameters, so all
//! formulas are evaluated over `BigRational` and every identity is checked by
//! exact equality.

mod identities;
mod rational;
mod sampling;

pub use identities::{identity_suite, IdentityCheck, IdentityReport, IdentityStatus};
pub use rational::{fmt_rational, int, parse_rational, rat, serde_rational, sign, to_f64, Rational};
pub use sampling::{random_admissible_tuple, TupleSampler};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("DegenerateD: p(d+alpha) - 2q(d-sp) = 0, the exponents beta1, beta2 are not determined")]
    DegenerateD,
    #[error("InadmissibleBetas: beta1 = {beta1}, beta2 = {beta2} (both must be positive)")]
    InadmissibleBetas { beta1: String, beta2: String },
    #[error("EpsilonTooLarge: eps = {eps} must lie in (0, {bound})")]
    EpsilonTooLarge { eps: String, bound: String },
    #[error("DegenerateFamily: q(sp-1)+p = 0, the multi-bump exponents are undefined")]
    DegenerateFamily,
    #[error("NotApplicable: {0}")]
    NotApplicable(String),
}

/// The six parameters `(d, s, p, q, alpha, gamma)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamTuple {
    pub d: u32,
    #[serde(with = "serde_rational")]
    pub s: Rational,
    #[serde(with = "serde_rational")]
    pub p: Rational,
    #[serde(with = "serde_rational")]
    pub q: Rational,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
}

impl ParamTuple {
    pub fn new(
        d: u32,
        s: Rational,
        p: Rational,
        q: Rational,
        alpha: Rational,
        gamma: Rational,
    ) -> Result<Self, ParamError> {
        let tuple = Self { d, s, p, q, alpha, gamma };
        tuple.validate()?;
        Ok(tuple)
    }

    pub fn parse(
        d: &str,
        s: &str,
        p: &str,
        q: &str,
        alpha: &str,
        gamma: &str,
    ) -> Result<Self, ParamError> {
        let d: u32 = d
            .trim()
            .parse()
            .map_err(|_| ParamError::Parse(format!("dimension must be an integer: {d:?}")))?;
        Self::new(
            d,
            parse_rational(s)?,
            parse_rational(p)?,
            parse_rational(q)?,
            parse_rational(alpha)?,
            parse_rational(gamma)?,
        )
    }

    fn validate(&self) -> Result<(), ParamError> {
        let fail = |msg: &str| Err(ParamError::InvalidParams(msg.to_string()));
        if self.d < 2 {
            return fail("d must be at least 2");
        }
        if !self.s.is_positive() || self.s > Rational::one() {
            return fail("s must satisfy 0 < s <= 1");
        }
        if self.p < Rational::one() || self.q < Rational::one() {
            return fail("p and q must be at least 1");
        }
        if !self.alpha.is_positive() || self.alpha >= self.dim() {
            return fail("alpha must satisfy 0 < alpha < d");
        }
        if self.gamma <= Rational::one() {
            return fail("gamma must exceed 1");
        }
        Ok(())
    }

    /// Same tuple with a different `gamma`.
    pub fn with_gamma(&self, gamma: Rational) -> Result<Self, ParamError> {
        Self::new(self.d, self.s.clone(), self.p.clone(), self.q.clone(), self.alpha.clone(), gamma)
    }

    pub fn dim(&self) -> Rational {
        int(self.d as i64)
    }

    pub fn sp(&self) -> Rational {
        &self.s * &self.p
    }

    /// `p(d+alpha) - 2q(d-sp)`.
    pub fn discriminant(&self) -> Rational {
        let d = self.dim();
        &self.p * (&d + &self.alpha) - int(2) * &self.q * (&d - self.sp())
    }

    /// `sp(d+alpha-2) + (d-alpha)`, positive for every valid tuple.
    pub fn radial_denominator(&self) -> Rational {
        let d = self.dim();
        self.sp() * (&d + &self.alpha - int(2)) + (&d - &self.alpha)
    }

    /// `q(sp-1) + p`.
    pub fn family_factor(&self) -> Rational {
        &self.q * (self.sp() - int(1)) + &self.p
    }

    pub fn gamma_rad(&self) -> Rational {
        let d = self.dim();
        (int(2) * &self.q * self.sp() * (&d - int(1)) + &self.p * (&d - &self.alpha))
            / self.radial_denominator()
    }

    pub fn gamma_cs(&self) -> Rational {
        &self.p * (&self.alpha + int(2) * &self.q * &self.s) / (&self.alpha + self.sp())
    }

    /// `pd/(d-sp)`, or `None` when `sp >= d`.
    pub fn sobolev_exponent(&self) -> Option<Rational> {
        let d = self.dim();
        let gap = &d - self.sp();
        gap.is_positive().then(|| &self.p * &d / gap)
    }

    /// `(beta1, beta2)` at an arbitrary `gamma`; requires `D != 0`.
    pub fn betas_at(&self, gamma: &Rational) -> Result<(Rational, Rational), ParamError> {
        let dd = self.discriminant();
        if dd.is_zero() {
            return Err(ParamError::DegenerateD);
        }
        let d = self.dim();
        let denom = gamma * &dd;
        let beta1 = (gamma * (&d + &self.alpha) - int(2) * &self.q * &d) / &denom;
        let beta2 = (&self.p * &d - gamma * (&d - self.sp())) / &denom;
        Ok((beta1, beta2))
    }

    pub fn as_f64(&self) -> ParamsF64 {
        ParamsF64 {
            d: self.d,
            s: to_f64(&self.s),
            p: to_f64(&self.p),
            q: to_f64(&self.q),
            alpha: to_f64(&self.alpha),
            gamma: to_f64(&self.gamma),
        }
    }
}

/// Floating-point view of a tuple for the numerical modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsF64 {
    pub d: u32,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub gamma: f64,
}

/// Named tuples shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Lions,
    Case1,
    Case2,
    Thm15,
    RangeB,
    RangeC,
}

impl Preset {
    pub const ALL: [Preset; 6] =
        [Preset::Lions, Preset::Case1, Preset::Case2, Preset::Thm15, Preset::RangeB, Preset::RangeC];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Lions => "lions",
            Preset::Case1 => "case1",
            Preset::Case2 => "case2",
            Preset::Thm15 => "thm15",
            Preset::RangeB => "rangeb",
            Preset::RangeC => "rangec",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name.trim().to_ascii_lowercase())
    }

    pub fn params(self) -> ParamTuple {
        let (d, s, p, q, alpha, gamma) = match self {
            Preset::Lions => (3, int(1), int(2), int(2), int(2), int(3)),
            Preset::Case1 => (3, rat(1, 2), int(2), int(4), int(2), rat(47, 10)),
            Preset::Case2 => (3, int(1), int(2), int(2), int(2), rat(18, 7)),
            Preset::Thm15 => (3, rat(1, 2), int(2), int(2), rat(1, 2), rat(17, 5)),
            Preset::RangeB => (3, rat(1, 2), int(2), int(4), int(2), int(4)),
            Preset::RangeC => (3, rat(1, 4), int(2), int(4), int(2), int(4)),
        };
        ParamTuple::new(d, s, p, q, alpha, gamma).expect("preset tuples are valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    #[serde(rename = "D", with = "serde_rational")]
    pub discriminant: Rational,
    #[serde(with = "serde_rational")]
    pub beta1: Rational,
    #[serde(with = "serde_rational")]
    pub beta2: Rational,
    #[serde(with = "serde_rational")]
    pub gamma_rad: Rational,
    #[serde(with = "serde_rational")]
    pub gamma_cs: Rational,
}

impl DerivedParams {
    /// `beta1*gamma + beta2*gamma`.
    pub fn beta_sum_gamma(&self, params: &ParamTuple) -> Rational {
        (&self.beta1 + &self.beta2) * &params.gamma
    }

    /// `beta1*gamma + (d+alpha-2)/(d-1) * beta2*gamma`.
    pub fn radial_index(&self, params: &ParamTuple) -> Rational {
        let d = params.dim();
        let weight = (&d + &params.alpha - int(2)) / (&d - int(1));
        (&self.beta1 + weight * &self.beta2) * &params.gamma
    }

    pub fn betas_positive(&self) -> bool {
        self.beta1.is_positive() && self.beta2.is_positive()
    }
}

pub fn derive(params: &ParamTuple) -> Result<DerivedParams, ParamError> {
    let (beta1, beta2) = params.betas_at(&params.gamma)?;
    Ok(DerivedParams {
        discriminant: params.discriminant(),
        beta1,
        beta2,
        gamma_rad: params.gamma_rad(),
        gamma_cs: params.gamma_cs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RangeClass {
    RangeA,
    RangeB,
    RangeC,
    AdmissibleNonRadialOnly,
    Inadmissible,
}

fn riesz_above_one(params: &ParamTuple) -> bool {
    params.alpha > Rational::one()
}

pub fn classify(params: &ParamTuple) -> Result<RangeClass, ParamError> {
    let derived = derive(params)?;
    if !derived.betas_positive() {
        return Ok(RangeClass::Inadmissible);
    }
    // The radial ranges are only defined for 1 < alpha < d.
    if !riesz_above_one(params) {
        return Ok(RangeClass::AdmissibleNonRadialOnly);
    }
    let gamma = &params.gamma;
    let gamma_rad = &derived.gamma_rad;
    let dd = &derived.discriminant;
    let one_minus_sp = int(1) - params.sp();
    if gamma == gamma_rad && &params.q * &one_minus_sp == params.p {
        return Ok(RangeClass::RangeC);
    }
    let range = match params.sobolev_exponent() {
        Some(upper) if dd.is_positive() && gamma_rad < gamma && gamma <= &upper => RangeClass::RangeA,
        Some(lower) if dd.is_negative() && &lower <= gamma && gamma < gamma_rad => RangeClass::RangeB,
        None if gamma > gamma_rad => RangeClass::RangeA,
        _ => RangeClass::AdmissibleNonRadialOnly,
    };
    Ok(range)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Thm13Verdict {
    HoldsStrict,
    HoldsEquality,
    NotSatisfied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Thm14Verdict {
    FailsStrict,
    FailsEqualityMismatch,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Thm15Verdict {
    Fails,
    NotApplicable,
}

/// Which of the three radial theorems a tuple falls under.
///
/// `thm13`: radial inequality holds; `thm14`: it fails for `1 < alpha < d`;
/// `thm15`: it fails for `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub thm13: Thm13Verdict,
    pub thm14: Thm14Verdict,
    pub thm15: Thm15Verdict,
}

pub fn theorem_verdicts(params: &ParamTuple) -> Result<TheoremVerdict, ParamError> {
    let derived = derive(params)?;
    if !derived.betas_positive() {
        return Err(ParamError::InadmissibleBetas {
            beta1: fmt_rational(&derived.beta1),
            beta2: fmt_rational(&derived.beta2),
        });
    }
    let one = Rational::one();
    if riesz_above_one(params) {
        let index = derived.radial_index(params);
        let balanced = &params.q * (int(1) - params.sp()) == params.p;
        let thm13 = if index > one {
            Thm13Verdict::HoldsStrict
        } else if index == one && balanced {
            Thm13Verdict::HoldsEquality
        } else {
            Thm13Verdict::NotSatisfied
        };
        let thm14 = if index < one {
            Thm14Verdict::FailsStrict
        } else if index == one && !balanced {
            Thm14Verdict::FailsEqualityMismatch
        } else {
            Thm14Verdict::NotApplicable
        };
        Ok(TheoremVerdict { thm13, thm14, thm15: Thm15Verdict::NotApplicable })
    } else {
        let thm15 = if derived.beta_sum_gamma(params) < one {
            Thm15Verdict::Fails
        } else {
            Thm15Verdict::NotApplicable
        };
        Ok(TheoremVerdict {
            thm13: Thm13Verdict::NotSatisfied,
            thm14: Thm14Verdict::NotApplicable,
            thm15,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `D > 0`, the family with `+2 eps` in `d - alpha + 2 eps`.
    PlusD,
    /// `D < 0`, the family with `-2 eps`.
    MinusD,
}

impl Branch {
    fn of(discriminant: &Rational) -> Result<Self, ParamError> {
        match sign(discriminant) {
            1 => Ok(Branch::PlusD),
            -1 => Ok(Branch::MinusD),
            _ => Err(ParamError::DegenerateD),
        }
    }

    /// The shift `t` with `d - alpha + 2t` in the family formulas.
    pub fn shift(self, eps: &Rational) -> Rational {
        match self {
            Branch::PlusD => eps.clone(),
            Branch::MinusD => -eps.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonFamily {
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    pub sign: Branch,
    #[serde(with = "serde_rational")]
    pub gamma_eps: Rational,
    #[serde(with = "serde_rational")]
    pub a_eps: Rational,
}

/// Upper end of the admissible `eps` window for the branch selected by `D`.
///
/// `PlusD`: `eps < min(D/(2p), (d+alpha-2)/2)`.
/// `MinusD`: `eps < min(-D/(2p), (d-alpha)/2)`.
pub fn epsilon_window(params: &ParamTuple) -> Result<(Branch, Rational), ParamError> {
    let dd = params.discriminant();
    let branch = Branch::of(&dd)?;
    let d = params.dim();
    let two = int(2);
    let bound = match branch {
        Branch::PlusD => {
            let a = &dd / (&two * &params.p);
            let b = (&d + &params.alpha - &two) / &two;
            a.min(b)
        }
        Branch::MinusD => {
            let a = -&dd / (&two * &params.p);
            let b = (&d - &params.alpha) / &two;
            a.min(b)
        }
    };
    Ok((branch, bound))
}

/// `gamma_t` for a signed shift `t` (`t = eps` on `PlusD`, `-eps` on `MinusD`).
pub(crate) fn shifted_gamma(params: &ParamTuple, t: &Rational) -> Rational {
    let d = params.dim();
    let two = int(2);
    let sp = params.sp();
    let den = &sp * (&d + &params.alpha - &two * t - &two) + (&d - &params.alpha + &two * t);
    &params.q + params.family_factor() * (&d - &params.alpha + &two * t) / den
}

/// `a_t = p(gamma_t(d+alpha-2t) - 2qd) / (gamma_t(p(d+alpha-2t) - 2q(d-sp)))`.
pub(crate) fn shifted_weight(params: &ParamTuple, t: &Rational, gamma_t: &Rational) -> Rational {
    let d = params.dim();
    let two = int(2);
    let shifted = &d + &params.alpha - &two * t;
    let num = &params.p * (gamma_t * &shifted - &two * &params.q * &d);
    let den = gamma_t * (&params.p * &shifted - &two * &params.q * (&d - params.sp()));
    num / den
}

pub fn epsilon_family(params: &ParamTuple, eps: &Rational) -> Result<EpsilonFamily, ParamError> {
    let (branch, bound) = epsilon_window(params)?;
    if !eps.is_positive() || eps >= &bound {
        return Err(ParamError::EpsilonTooLarge { eps: fmt_rational(eps), bound: fmt_rational(&bound) });
    }
    let t = branch.shift(eps);
    let gamma_eps = shifted_gamma(params, &t);
    let a_eps = shifted_weight(params, &t, &gamma_eps);
    if !(a_eps.is_positive() && a_eps < Rational::one()) {
        return Err(ParamError::EpsilonTooLarge { eps: fmt_rational(eps), bound: fmt_rational(&bound) });
    }
    Ok(EpsilonFamily { eps: eps.clone(), sign: branch, gamma_eps, a_eps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiBumpExponents {
    #[serde(with = "serde_rational")]
    pub xi1: Rational,
    #[serde(with = "serde_rational")]
    pub xi2: Rational,
}

pub fn multibump_exponents(params: &ParamTuple) -> Result<MultiBumpExponents, ParamError> {
    let factor = params.family_factor();
    if factor.is_zero() {
        return Err(ParamError::DegenerateFamily);
    }
    let d = params.dim();
    let two = int(2);
    let den = &two * &factor;
    let xi1 = (&two * &params.q * (&d - int(1)) - &params.p * (&d + &params.alpha - &two)) / &den;
    let xi2 = -params.radial_denominator() / &den;
    Ok(MultiBumpExponents { xi1, xi2 })
}

/// Weighted-norm parameters of the CKN-type estimate used with the
/// `eps` families: `sigma = (gamma_w - (1-a) beta_w) / a` with `gamma_w = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CknCheckTuple {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    #[serde(with = "serde_rational")]
    pub beta_w: Rational,
    #[serde(with = "serde_rational")]
    pub sigma: Rational,
    #[serde(with = "serde_rational")]
    pub alpha_tilde: Rational,
}

impl CknCheckTuple {
    pub fn for_family(params: &ParamTuple, family: &EpsilonFamily) -> Self {
        let t = family.sign.shift(&family.eps);
        let a = family.a_eps.clone();
        let beta_w = -(params.dim() - &params.alpha + int(2) * &t) / (int(2) * &params.q);
        let sigma = (Rational::zero() - (int(1) - &a) * &beta_w) / &a;
        Self { a, tau: family.gamma_eps.clone(), beta_w, sigma, alpha_tilde: Rational::zero() }
    }
}
