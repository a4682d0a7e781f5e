//! Resonances reachable by Rayleigh-damped networks with fixed `(α, β)`.
//!
//! Every resonance is a root of `λ² + (ασ + β)λ + σ` for some `σ > 0`. The
//! loci below are exact: the real-axis pieces are the open intervals where
//! `σ = −λ(λ + β)/(1 + αλ)` is positive.

use serde::Serialize;

use crate::network::RayleighParams;
use crate::scalar::{cabs, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusCase {
    /// α = β = 0: the imaginary axis.
    Undamped,
    /// α = 0, β > 0.
    NodeDampingOnly,
    /// α > 0, β = 0.
    DashpotOnly,
    /// α, β > 0 with αβ < 1.
    UnderdampedMixed,
    /// α, β > 0 with αβ ≥ 1.
    OverdampedMixed,
}

impl LocusCase {
    pub fn classify<T: Real>(r: &RayleighParams<T>) -> Self {
        let zero = T::zero();
        match (r.alpha == zero, r.beta == zero) {
            (true, true) => Self::Undamped,
            (true, false) => Self::NodeDampingOnly,
            (false, true) => Self::DashpotOnly,
            (false, false) if r.alpha * r.beta < T::one() => Self::UnderdampedMixed,
            (false, false) => Self::OverdampedMixed,
        }
    }
}

/// One piece of a locus in the complex plane. The origin never belongs to a
/// locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusPiece<T> {
    /// Open real interval `(start, end)`.
    Segment { start: T, end: T },
    /// Open real half-line `(−∞, end)`.
    Ray { end: T },
    /// Vertical line `Re λ = re`.
    Line { re: T },
    /// Circle `|λ − center| = radius` with a real center.
    Circle { center: T, radius: T },
}

impl<T: Real> LocusPiece<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Segment { .. } => "segment",
            Self::Ray { .. } => "ray",
            Self::Line { .. } => "line",
            Self::Circle { .. } => "circle",
        }
    }

    pub fn distance(&self, z: Cx<T>) -> T {
        match *self {
            Self::Segment { start, end } => real_interval_distance(z, Some(start), end),
            Self::Ray { end } => real_interval_distance(z, None, end),
            Self::Line { re } => (z.re - re).abs(),
            Self::Circle { center, radius } => (cabs(z - Cx::new(center, T::zero())) - radius).abs(),
        }
    }
}

fn real_interval_distance<T: Real>(z: Cx<T>, start: Option<T>, end: T) -> T {
    let x = if z.re > end {
        end
    } else if let Some(s) = start.filter(|&s| z.re < s) {
        s
    } else {
        z.re
    };
    cabs(z - Cx::new(x, T::zero()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusDescription<T> {
    pub case: LocusCase,
    pub pieces: Vec<LocusPiece<T>>,
}

impl<T: Real> LocusDescription<T> {
    pub fn distance(&self, z: Cx<T>) -> T {
        self.pieces
            .iter()
            .map(|p| p.distance(z))
            .fold(T::max_value().unwrap(), |a, b| a.min(b))
    }

    pub fn nearest_piece(&self, z: Cx<T>) -> Option<&LocusPiece<T>> {
        self.pieces.iter().min_by(|a, b| {
            a.distance(z)
                .partial_cmp(&b.distance(z))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

/// Both roots of `λ² + (ασ + β)λ + σ`, `(λ₊, λ₋)`.
///
/// Real roots: `λ₋` is the larger-magnitude root and `λ₊ = σ/λ₋`. Complex
/// roots: `λ₊` has positive imaginary part.
pub fn resonances_of<T: Real>(sigma: T, r: &RayleighParams<T>) -> (Cx<T>, Cx<T>) {
    let two = T::lit(2.0);
    let b = r.alpha * sigma + r.beta;
    let disc = b * b - T::lit(4.0) * sigma;
    if disc >= T::zero() {
        let q = -(b + disc.sqrt()) / two;
        if q == T::zero() {
            return (Cx::new(T::zero(), T::zero()), Cx::new(T::zero(), T::zero()));
        }
        (Cx::new(sigma / q, T::zero()), Cx::new(q, T::zero()))
    } else {
        let im = (-disc).sqrt() / two;
        let re = -b / two;
        (Cx::new(re, im), Cx::new(re, -im))
    }
}

pub fn locus<T: Real>(r: &RayleighParams<T>) -> LocusDescription<T> {
    let case = LocusCase::classify(r);
    let (alpha, beta) = (r.alpha, r.beta);
    let zero = T::zero();
    let pieces = match case {
        LocusCase::Undamped => vec![LocusPiece::Line { re: zero }],
        LocusCase::NodeDampingOnly => vec![
            LocusPiece::Segment { start: -beta, end: zero },
            LocusPiece::Line { re: -beta / T::lit(2.0) },
        ],
        LocusCase::DashpotOnly => vec![
            LocusPiece::Ray { end: -T::one() / alpha },
            LocusPiece::Circle {
                center: -T::one() / alpha,
                radius: T::one() / alpha,
            },
        ],
        LocusCase::UnderdampedMixed => vec![
            LocusPiece::Ray { end: -T::one() / alpha },
            LocusPiece::Segment { start: -beta, end: zero },
            LocusPiece::Circle {
                center: -T::one() / alpha,
                radius: (T::one() - alpha * beta).sqrt() / alpha,
            },
        ],
        LocusCase::OverdampedMixed => {
            let near = -T::one() / alpha;
            if near == -beta {
                vec![LocusPiece::Ray { end: zero }]
            } else {
                vec![
                    LocusPiece::Ray { end: -beta },
                    LocusPiece::Segment { start: near, end: zero },
                ]
            }
        }
    };
    LocusDescription { case, pieces }
}

/// `Some(σ)` when `λ` is a root of `λ² + (ασ + β)λ + σ` for some `σ > 0`,
/// confirmed by recomputing the roots to within `tol · max(1, |λ|)`.
pub fn contains<T: Real>(r: &RayleighParams<T>, lambda: Cx<T>, tol: T) -> Option<T> {
    let mag = cabs(lambda);
    if mag <= tol {
        return None;
    }
    let scale = tol * mag.max(T::one());
    let mut candidates = vec![lambda.norm_sqr()];
    if lambda.im.abs() <= scale {
        let x = lambda.re;
        let denom = T::one() + r.alpha * x;
        if denom.abs() > T::default_epsilon() {
            candidates.push(-x * (x + r.beta) / denom);
        } else {
            candidates.push(x * x);
        }
    }
    candidates.into_iter().find(|&sigma| {
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return false;
        }
        let (p, m) = resonances_of(sigma, r);
        cabs(p - lambda).min(cabs(m - lambda)) <= scale
    })
}

/// A sampled point of a locus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusPoint<T> {
    pub lambda: Cx<T>,
    pub sigma: T,
    pub piece: &'static str,
}

pub const SAMPLE_SIGMA_RANGE: (f64, f64) = (1e-3, 1e3);

/// `n_points` resonances from a log-spaced sweep of `σ`, both roots per `σ`.
pub fn sample_locus<T: Real>(r: &RayleighParams<T>, n_points: usize) -> Vec<LocusPoint<T>> {
    let desc = locus(r);
    let n_sigma = n_points.div_ceil(2).max(1);
    let (lo, hi) = (SAMPLE_SIGMA_RANGE.0.ln(), SAMPLE_SIGMA_RANGE.1.ln());
    let mut out = Vec::with_capacity(n_points);
    for k in 0..n_sigma {
        let t = if n_sigma == 1 {
            0.5
        } else {
            k as f64 / (n_sigma - 1) as f64
        };
        let sigma = T::lit((lo + t * (hi - lo)).exp());
        let (p, m) = resonances_of(sigma, r);
        for lambda in [p, m] {
            if out.len() == n_points {
                break;
            }
            let piece = desc.nearest_piece(lambda).map_or("none", |p| p.label());
            out.push(LocusPoint { lambda, sigma, piece });
        }
    }
    out
}
