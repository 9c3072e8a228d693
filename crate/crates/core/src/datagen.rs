//! Synthetic VRS instances with a controlled share of extreme-efficient DMUs.
//!
//! Frontier points lie on the positive-orthant part of a sphere in translated
//! space, so almost all of them are extreme. Interior points are convex
//! combinations of frontier points pulled toward a dominated anchor.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dea::Dataset;
use crate::error::{DeaError, Result};

pub const RADIUS: f64 = 1000.0;
const MARGIN: f64 = 0.1 * RADIUS;
const JITTER: f64 = 1e-4 * RADIUS;
const ANCHOR_OFFSET: f64 = 0.05 * RADIUS;
const INJECTION_STEP: f64 = 0.01 * RADIUS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub density: f64,
    pub seed: u64,
    /// Weakly efficient, nonextreme DMUs that replace interior ones.
    #[serde(default)]
    pub inject_boundary: usize,
}

impl GenSpec {
    pub fn new(n: usize, m1: usize, m2: usize, density: f64, seed: u64) -> Self {
        Self {
            n,
            m1,
            m2,
            density,
            seed,
            inject_boundary: 0,
        }
    }

    pub fn m(&self) -> usize {
        self.m1 + self.m2
    }

    /// `{m}by{n}at{dd}` with `m` and the density percentage zero-padded to two digits.
    pub fn name(&self) -> String {
        format!(
            "{:02}by{}at{:02}",
            self.m(),
            self.n,
            (self.density * 100.0).round() as u64
        )
    }

    pub fn frontier_count(&self) -> usize {
        ((self.density * self.n as f64).round() as usize).clamp(1, self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(DeaError::Domain("n must be ≥ 1".into()));
        }
        if self.m1 == 0 || self.m2 == 0 {
            return Err(DeaError::Domain("m1 and m2 must be ≥ 1".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(DeaError::Domain(format!(
                "density {} outside (0, 1]",
                self.density
            )));
        }
        if self.inject_boundary > self.n - self.frontier_count() {
            return Err(DeaError::Domain(
                "not enough interior DMUs to replace with boundary points".into(),
            ));
        }
        Ok(())
    }
}

fn sphere_point(rng: &mut ChaCha8Rng, center: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = Vec::with_capacity(center.len());
    loop {
        u.clear();
        u.extend(
            center
                .iter()
                .map(|_| StandardNormal.sample(rng))
                .map(|g: f64| g.abs()),
        );
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            u.iter_mut().for_each(|v| *v /= norm);
            break;
        }
    }
    center
        .iter()
        .zip(&u)
        .map(|(c, ui)| c + RADIUS * ui + rng.random_range(-JITTER..=JITTER))
        .collect()
}

pub fn generate(spec: &GenSpec) -> Result<Dataset> {
    spec.validate()?;
    let (m1, m) = (spec.m1, spec.m());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let center: Vec<f64> = (0..m)
        .map(|k| if k < m1 { -(RADIUS + MARGIN) } else { MARGIN })
        .collect();
    let anchor: Vec<f64> = center.iter().map(|c| c - ANCHOR_OFFSET).collect();

    let k = spec.frontier_count();
    let frontier: Vec<Vec<f64>> = (0..k).map(|_| sphere_point(&mut rng, &center)).collect();
    let mut points = frontier.clone();

    for j in 0..spec.inject_boundary {
        let axis = j % m;
        let f = frontier
            .iter()
            .max_by(|a, b| a[axis].total_cmp(&b[axis]))
            .expect("frontier is non-empty");
        let mut p = f.clone();
        p[(axis + 1) % m] -= INJECTION_STEP * (1 + j / m) as f64;
        points.push(p);
    }

    let interior = spec.n - k - spec.inject_boundary;
    for _ in 0..interior {
        let count = rng.random_range(2..=m + 1).min(k);
        let chosen = index::sample(&mut rng, k, count);
        let weights: Vec<f64> = (0..count).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = weights.iter().sum();
        let mut c = vec![0.0; m];
        for (idx, w) in chosen.iter().zip(&weights) {
            for (ci, fi) in c.iter_mut().zip(&frontier[idx]) {
                *ci += w / total * fi;
            }
        }
        let u: f64 = rng.random_range(0.05..0.95);
        points.push(
            c.iter()
                .zip(&anchor)
                .map(|(ci, zi)| ci + u * (zi - ci))
                .collect(),
        );
    }

    points.shuffle(&mut rng);
    let inputs: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p[..m1].iter().map(|v| -v).collect())
        .collect();
    let outputs: Vec<Vec<f64>> = points.iter().map(|p| p[m1..].to_vec()).collect();
    Dataset::new(spec.name(), &inputs, &outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(GenSpec::new(25_000, 3, 2, 0.01, 0).name(), "05by25000at01");
        assert_eq!(
            GenSpec::new(100_000, 5, 5, 0.10, 0).name(),
            "10by100000at10"
        );
        assert_eq!(GenSpec::new(100, 2, 1, 0.25, 0).name(), "03by100at25");
    }

    #[test]
    fn deterministic_and_positive() {
        let spec = GenSpec::new(300, 2, 2, 0.1, 11);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        let c = generate(&GenSpec { seed: 12, ..spec }).unwrap();
        assert_ne!(a, c);
        assert_eq!(a.n(), 300);
        for i in 0..a.n() {
            assert!(a.row(i).iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn single_dmu() {
        let ds = generate(&GenSpec::new(1, 2, 2, 1.0, 3)).unwrap();
        assert_eq!(ds.n(), 1);
    }

    #[test]
    fn bad_specs() {
        assert!(generate(&GenSpec::new(0, 1, 1, 0.5, 0)).is_err());
        assert!(generate(&GenSpec::new(10, 0, 1, 0.5, 0)).is_err());
        assert!(generate(&GenSpec::new(10, 1, 1, 0.0, 0)).is_err());
        assert!(generate(&GenSpec::new(10, 1, 1, 1.5, 0)).is_err());
        assert!(generate(&GenSpec {
            inject_boundary: 20,
            ..GenSpec::new(10, 1, 1, 0.5, 0)
        })
        .is_err());
    }
}
