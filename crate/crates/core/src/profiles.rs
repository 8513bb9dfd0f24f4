//! Radial profiles built from annular bumps `lambda * eta((r - R) / S)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("OverlappingSupports: bumps {i} and {j} have intersecting supports")]
    OverlappingSupports { i: usize, j: usize },
    #[error("invalid bump {index}: {reason}")]
    InvalidBump { index: usize, reason: String },
    #[error("profile has no bumps")]
    Empty,
}

/// The mother bump `eta(t) = exp(1/(t^2 - 1))` on `(-1, 1)`, zero elsewhere.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MotherBump;

impl MotherBump {
    /// `int_{-1}^{1} eta(t) dt`.
    pub const INTEGRAL: f64 = 0.443_993_816_168_079_4;

    pub fn value(t: f64) -> f64 {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        // (1-t)(1+t) keeps full relative precision near the endpoints.
        let w = (1.0 - t) * (1.0 + t);
        (-1.0 / w).exp()
    }

    pub fn derivative(t: f64) -> f64 {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let w = (1.0 - t) * (1.0 + t);
        (-1.0 / w).exp() * (-2.0 * t / (w * w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub lambda: f64,
    #[serde(rename = "R")]
    pub center: f64,
    #[serde(rename = "S")]
    pub width: f64,
}

impl BumpSpec {
    pub fn new(lambda: f64, center: f64, width: f64) -> Self {
        Self { lambda, center, width }
    }

    fn validate(&self, index: usize) -> Result<(), ProfileError> {
        let bad = |reason: &str| Err(ProfileError::InvalidBump { index, reason: reason.into() });
        if !(self.lambda.is_finite() && self.center.is_finite() && self.width.is_finite()) {
            return bad("parameters must be finite");
        }
        if self.lambda <= 0.0 {
            return bad("lambda must be positive");
        }
        if !(self.center > self.width && self.width > 0.0) {
            return bad("need R > S > 0");
        }
        Ok(())
    }

    pub fn inner(&self) -> f64 {
        self.center - self.width
    }

    pub fn outer(&self) -> f64 {
        self.center + self.width
    }

    pub fn local(&self, r: f64) -> f64 {
        (r - self.center) / self.width
    }

    pub fn radius(&self, t: f64) -> f64 {
        self.center + self.width * t
    }

    pub fn value_at_local(&self, t: f64) -> f64 {
        self.lambda * MotherBump::value(t)
    }

    /// `d/dr` of the bump, written in the local coordinate.
    pub fn derivative_at_local(&self, t: f64) -> f64 {
        self.lambda / self.width * MotherBump::derivative(t)
    }
}

/// A radial function `g(r) = sum_k lambda_k eta((r - R_k) / S_k)` with
/// pairwise disjoint supports, stored in increasing order of `R_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    bumps: Vec<BumpSpec>,
}

#[derive(Deserialize)]
struct RawProfile {
    bumps: Vec<BumpSpec>,
}

impl<'de> Deserialize<'de> for RadialProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawProfile::deserialize(d)?;
        RadialProfile::new(raw.bumps).map_err(serde::de::Error::custom)
    }
}

impl RadialProfile {
    /// Validates each bump and pairwise disjointness; indices in errors
    /// refer to the input order.
    pub fn new(bumps: Vec<BumpSpec>) -> Result<Self, ProfileError> {
        if bumps.is_empty() {
            return Err(ProfileError::Empty);
        }
        for (i, b) in bumps.iter().enumerate() {
            b.validate(i)?;
        }
        let mut order: Vec<usize> = (0..bumps.len()).collect();
        order.sort_by(|&a, &b| bumps[a].center.total_cmp(&bumps[b].center));
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            // Closed supports may not touch either.
            if bumps[a].outer() >= bumps[b].inner() {
                return Err(ProfileError::OverlappingSupports { i: a.min(b), j: a.max(b) });
            }
        }
        Ok(Self { bumps: order.into_iter().map(|i| bumps[i]).collect() })
    }

    pub fn single(lambda: f64, center: f64, width: f64) -> Result<Self, ProfileError> {
        Self::new(vec![BumpSpec::new(lambda, center, width)])
    }

    pub fn bumps(&self) -> &[BumpSpec] {
        &self.bumps
    }

    pub fn len(&self) -> usize {
        self.bumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bumps.is_empty()
    }

    fn containing(&self, r: f64) -> Option<&BumpSpec> {
        let idx = self.bumps.partition_point(|b| b.outer() <= r);
        self.bumps.get(idx).filter(|b| b.inner() < r)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.containing(r).map_or(0.0, |b| b.value_at_local(b.local(r)))
    }

    pub fn eval_derivative(&self, r: f64) -> f64 {
        self.containing(r).map_or(0.0, |b| b.derivative_at_local(b.local(r)))
    }

    /// Value on bump `seg` at local coordinate `t`.
    pub fn eval_local(&self, seg: usize, t: f64) -> f64 {
        self.bumps[seg].value_at_local(t)
    }

    pub fn eval_derivative_local(&self, seg: usize, t: f64) -> f64 {
        self.bumps[seg].derivative_at_local(t)
    }

    /// Support intervals `[R_k - S_k, R_k + S_k]` in increasing order.
    pub fn supports(&self) -> Vec<(f64, f64)> {
        self.bumps.iter().map(|b| (b.inner(), b.outer())).collect()
    }

    /// The profile `r -> g(r / c)`: every center and width scaled by `c`.
    pub fn dilate(&self, c: f64) -> Result<Self, ProfileError> {
        Self::new(
            self.bumps.iter().map(|b| BumpSpec::new(b.lambda, b.center * c, b.width * c)).collect(),
        )
    }

    /// Every amplitude multiplied by `c`.
    pub fn scale_amplitude(&self, c: f64) -> Result<Self, ProfileError> {
        Self::new(
            self.bumps.iter().map(|b| BumpSpec::new(b.lambda * c, b.center, b.width)).collect(),
        )
    }
}

/// `g_{m,R} = sum_{k=1}^m R^{k xi2} eta((r - R^k) / R^{k xi1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiBumpSpec {
    pub m: usize,
    #[serde(rename = "R")]
    pub base: f64,
    pub xi1: f64,
    pub xi2: f64,
}

pub fn expand_multibump(spec: &MultiBumpSpec) -> Result<RadialProfile, ProfileError> {
    if spec.m == 0 {
        return Err(ProfileError::Empty);
    }
    let bumps = (1..=spec.m)
        .map(|k| {
            let k = k as f64;
            BumpSpec::new(spec.base.powf(k * spec.xi2), spec.base.powf(k), spec.base.powf(k * spec.xi1))
        })
        .collect();
    RadialProfile::new(bumps)
}
