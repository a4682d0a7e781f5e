//! Random evaluation points away from known resonances.

use rand::Rng;

use crate::scalar::{Cx, Real};

/// Minimum distance between a sample and any avoided point.
pub const RESONANCE_CLEARANCE: f64 = 1e-3;

const MAX_DRAWS: usize = 100_000;

/// `n` complex points with `|λ|` log-uniform in `[0.1, 10]` and uniform
/// argument, each at least [`RESONANCE_CLEARANCE`] away from `avoid`.
pub fn sample_lambdas<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, avoid: &[Cx<T>]) -> Vec<Cx<T>> {
    let avoid: Vec<(f64, f64)> = avoid.iter().map(|z| (z.re.as_f64(), z.im.as_f64())).collect();
    let mut out = Vec::with_capacity(n);
    let mut draws = 0;
    while out.len() < n {
        draws += 1;
        assert!(draws < MAX_DRAWS, "could not draw non-resonant points");
        let r = 10f64.powf(rng.random_range(-1.0..=1.0));
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let (re, im) = (r * theta.cos(), r * theta.sin());
        let clear = avoid
            .iter()
            .all(|&(ar, ai)| ((re - ar).powi(2) + (im - ai).powi(2)).sqrt() >= RESONANCE_CLEARANCE);
        if clear {
            out.push(Cx::new(T::lit(re), T::lit(im)));
        }
    }
    out
}
