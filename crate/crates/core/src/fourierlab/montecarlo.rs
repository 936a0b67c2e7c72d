//! Monte Carlo estimates of transforms of thickened configuration measures.
//!
//! The thickened measure is `(2ε)^{-1} 1{|constraint| < ε}` times the
//! ambient measure (sphere surface measure or Lebesgue measure on a ball).
//! Instead of drawing ambient samples and discarding most of them, each
//! sample is drawn conditionally inside the band `{|constraint| < ε}` and
//! carries the band's probability as its weight. The estimator has the same
//! expectation as the indicator-weighted one and every sample contributes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::sphere::{gauss_legendre, sphere_area};
use super::{FourierError, FrequencyPoint, MeasureSpec};
use crate::pointgen::rng_for;

/// Number of independent RNG streams; fixed so that results do not depend
/// on the thread count.
pub const MC_STREAMS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub value: Complex64,
    pub stderr: f64,
    pub samples: usize,
    /// Samples with nonzero weight.
    pub accepted: usize,
}

/// Weighted configurations drawn once and reusable at any frequency
/// (common random numbers across frequencies).
#[derive(Clone, Debug)]
pub struct McSample {
    block_dims: Vec<usize>,
    dim: usize,
    /// Per stream: flattened configurations and weights.
    chunks: Vec<(Vec<f64>, Vec<f64>)>,
    samples: usize,
    accepted: usize,
}

fn unit_vector(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            n2 += *x * *x;
        }
        if n2 > 1e-300 {
            let inv = 1.0 / n2.sqrt();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

/// Random unit vector orthogonal to the unit vector `a`.
fn orthogonal_unit(rng: &mut ChaCha8Rng, a: &[f64], out: &mut [f64]) {
    loop {
        unit_vector(rng, out);
        let p: f64 = out.iter().zip(a).map(|(x, y)| x * y).sum();
        let mut n2 = 0.0;
        for (x, y) in out.iter_mut().zip(a) {
            *x -= p * y;
            n2 += *x * *x;
        }
        if n2 > 1e-12 {
            let inv = 1.0 / n2.sqrt();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

fn uniform_in_ball(rng: &mut ChaCha8Rng, radius: f64, out: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for x in out.iter_mut() {
            *x = rng.random_range(-radius..radius);
            n2 += *x * *x;
        }
        if n2 <= radius * radius {
            return;
        }
    }
}

/// Band of `u = cos∠(x, y)` where `| |x - y| - t | < ε`, with the
/// probability of the band under the law of `u` for uniform directions.
#[derive(Clone, Copy, Debug)]
struct ChainBand {
    d: usize,
    r1: f64,
    r2: f64,
    lo: f64,
    hi: f64,
    prob: f64,
    envelope: f64,
}

impl ChainBand {
    fn new(d: usize, r1: f64, r2: f64, t: f64, eps: f64) -> Self {
        let u_of = |dist: f64| (r1 * r1 + r2 * r2 - dist * dist) / (2.0 * r1 * r2);
        let lo = u_of(t + eps).clamp(-1.0, 1.0);
        let hi = u_of((t - eps).max(0.0)).clamp(-1.0, 1.0);
        let power = (d as f64 - 3.0) / 2.0;
        let prob = match d {
            2 => (lo.acos() - hi.acos()) / PI,
            3 => (hi - lo) / 2.0,
            _ => {
                let (x, w) = gauss_legendre(200);
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let integral: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(x, w)| {
                        let u = mid + half * x;
                        w * (1.0 - u * u).max(0.0).powf(power)
                    })
                    .sum::<f64>()
                    * half;
                sphere_area(d - 1) / sphere_area(d) * integral
            }
        };
        let closest = if lo <= 0.0 && hi >= 0.0 { 0.0 } else { lo.abs().min(hi.abs()) };
        let envelope = (1.0 - closest * closest).max(0.0).powf(power);
        Self { d, r1, r2, lo, hi, prob, envelope }
    }

    fn sample_u(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self.d {
            2 => {
                let phi = rng.random_range(self.hi.acos()..=self.lo.acos());
                phi.cos()
            }
            3 => rng.random_range(self.lo..=self.hi),
            _ => {
                let power = (self.d as f64 - 3.0) / 2.0;
                loop {
                    let u = rng.random_range(self.lo..=self.hi);
                    let accept = (1.0 - u * u).max(0.0).powf(power) / self.envelope;
                    if rng.random::<f64>() < accept {
                        return u;
                    }
                }
            }
        }
    }

    /// Writes `(x, y)` into `out` (length `2d`).
    fn draw(&self, rng: &mut ChaCha8Rng, scratch: &mut [f64], out: &mut [f64]) {
        let d = self.d;
        let (x, y) = out.split_at_mut(d);
        unit_vector(rng, x);
        let u = self.sample_u(rng);
        orthogonal_unit(rng, x, scratch);
        let s = (1.0 - u * u).max(0.0).sqrt();
        for i in 0..d {
            y[i] = self.r2 * (u * x[i] + s * scratch[i]);
        }
        x.iter_mut().for_each(|v| *v *= self.r1);
    }
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// One sample of the thickened determinant variety in `(B_R)^3`; returns
/// its weight (zero when the slab misses the ball).
fn draw_determinant(rng: &mut ChaCha8Rng, t: f64, radius: f64, eps: f64, out: &mut [f64]) -> f64 {
    let r2 = radius * radius;
    let ball = 4.0 / 3.0 * PI * radius.powi(3);
    let (u1, rest) = out.split_at_mut(3);
    let (u2, u3) = rest.split_at_mut(3);
    uniform_in_ball(rng, radius, u1);
    uniform_in_ball(rng, radius, u2);
    let n = cross(u1, u2);
    let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if nn < 1e-300 {
        u3.fill(0.0);
        return 0.0;
    }
    let nhat = [n[0] / nn, n[1] / nn, n[2] / nn];
    let lo = ((t - eps) / nn).max(-radius);
    let hi = ((t + eps) / nn).min(radius);
    if lo >= hi {
        u3.fill(0.0);
        return 0.0;
    }
    let prim = |a: f64| r2 * a - a * a * a / 3.0;
    let slab = PI * (prim(hi) - prim(lo));
    let closest = if lo <= 0.0 && hi >= 0.0 { 0.0 } else { lo.abs().min(hi.abs()) };
    let top = r2 - closest * closest;
    let a = loop {
        let a = rng.random_range(lo..=hi);
        if rng.random::<f64>() * top <= r2 - a * a {
            break a;
        }
    };
    let mut e1 = [0.0; 3];
    orthogonal_unit(rng, &nhat, &mut e1);
    let e2 = cross(&nhat, &e1);
    let rho = (r2 - a * a).max(0.0).sqrt() * rng.random::<f64>().sqrt();
    let theta = rng.random_range(0.0..2.0 * PI);
    let (s, c) = theta.sin_cos();
    for i in 0..3 {
        u3[i] = a * nhat[i] + rho * (c * e1[i] + s * e2[i]);
    }
    ball * ball * slab / (2.0 * eps)
}

impl McSample {
    pub fn draw(
        spec: &MeasureSpec,
        epsilon: f64,
        samples: usize,
        seed: u64,
    ) -> Result<Self, FourierError> {
        spec.validate()?;
        if !(epsilon > 0.0 && epsilon <= 0.2) {
            return Err(FourierError::InvalidEpsilon(epsilon));
        }
        if samples < 10_000 {
            return Err(FourierError::TooFewSamples(samples));
        }
        let block_dims = spec.block_dims();
        let dim: usize = block_dims.iter().sum();
        let band = match *spec {
            MeasureSpec::ChainSpheres { d, r1, r2, t } => Some(ChainBand::new(d, r1, r2, t, epsilon)),
            MeasureSpec::Triangle2d => Some(ChainBand::new(2, 1.0, 1.0, 1.0, epsilon)),
            _ => None,
        };
        if let Some(b) = &band {
            if !(b.prob > 0.0) {
                return Err(FourierError::Infeasible);
            }
        }
        let chunks: Vec<(Vec<f64>, Vec<f64>)> = (0..MC_STREAMS)
            .into_par_iter()
            .map(|stream| {
                let s = MC_STREAMS as usize;
                let i = stream as usize;
                let count = samples * (i + 1) / s - samples * i / s;
                let mut rng = rng_for(seed);
                rng.set_stream(stream);
                let mut pts = vec![0.0; count * dim];
                let mut weights = vec![0.0; count];
                let mut scratch = vec![0.0; dim];
                for (z, w) in pts.chunks_exact_mut(dim).zip(weights.iter_mut()) {
                    *w = match *spec {
                        MeasureSpec::Sphere { d } => {
                            unit_vector(&mut rng, z);
                            sphere_area(d)
                        }
                        MeasureSpec::ChainSpheres { d, r1, r2, .. } => {
                            let b = band.as_ref().expect("band built above");
                            b.draw(&mut rng, &mut scratch[..d], z);
                            let sd = sphere_area(d);
                            let e = (d - 1) as i32;
                            sd * sd * r1.powi(e) * r2.powi(e) * b.prob / (2.0 * epsilon)
                        }
                        MeasureSpec::Triangle2d => {
                            let b = band.as_ref().expect("band built above");
                            b.draw(&mut rng, &mut scratch[..2], z);
                            let sd = 2.0 * PI;
                            0.5 * 3f64.sqrt() * sd * sd * b.prob / (2.0 * epsilon)
                        }
                        MeasureSpec::DeterminantVariety { t, radius, .. } => {
                            draw_determinant(&mut rng, t, radius, epsilon, z)
                        }
                    };
                }
                (pts, weights)
            })
            .collect();
        let accepted = chunks
            .iter()
            .map(|(_, w)| w.iter().filter(|&&w| w != 0.0).count())
            .sum();
        if accepted == 0 {
            return Err(FourierError::Infeasible);
        }
        Ok(Self {
            block_dims,
            dim,
            chunks,
            samples,
            accepted,
        })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn accepted(&self) -> usize {
        self.accepted
    }

    /// Sample mean of `w exp(-2πi Ξ·z)` with its standard error.
    pub fn evaluate(&self, xi: &FrequencyPoint) -> Result<McEstimate, FourierError> {
        xi.check(&self.block_dims)?;
        let f = xi.flat();
        let partial: Vec<[f64; 4]> = self
            .chunks
            .par_iter()
            .map(|(pts, weights)| {
                let mut acc = [0.0; 4];
                for (z, &w) in pts.chunks_exact(self.dim).zip(weights) {
                    let phase: f64 = z.iter().zip(&f).map(|(a, b)| a * b).sum::<f64>();
                    let (s, c) = (-2.0 * PI * phase).sin_cos();
                    let (re, im) = (w * c, w * s);
                    acc[0] += re;
                    acc[1] += im;
                    acc[2] += re * re;
                    acc[3] += im * im;
                }
                acc
            })
            .collect();
        let mut tot = [0.0; 4];
        for p in &partial {
            for i in 0..4 {
                tot[i] += p[i];
            }
        }
        let n = self.samples as f64;
        let (mre, mim) = (tot[0] / n, tot[1] / n);
        let var_re = ((tot[2] - n * mre * mre) / (n - 1.0)).max(0.0);
        let var_im = ((tot[3] - n * mim * mim) / (n - 1.0)).max(0.0);
        Ok(McEstimate {
            value: Complex64::new(mre, mim),
            stderr: ((var_re + var_im) / n).sqrt(),
            samples: self.samples,
            accepted: self.accepted,
        })
    }
}

/// One-shot estimate of the transform of the thickened measure at `xi`.
pub fn ft_montecarlo(
    spec: &MeasureSpec,
    xi: &FrequencyPoint,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate, FourierError> {
    xi.check(&spec.block_dims())?;
    McSample::draw(spec, epsilon, samples, seed)?.evaluate(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourierlab::{ft_sphere, ft_triangle};

    fn fp(blocks: &[&[f64]]) -> FrequencyPoint {
        FrequencyPoint::new(blocks.iter().map(|b| b.to_vec()).collect())
    }

    #[test]
    fn triangle_matches_closed_form() {
        let sample = McSample::draw(&MeasureSpec::Triangle2d, 1e-3, 200_000, 3).unwrap();
        for (xi, eta) in [([0.0, 0.0], [0.0, 0.0]), ([0.4, -0.2], [0.1, 0.3]), ([1.0, 0.5], [-0.7, 0.2])] {
            let est = sample.evaluate(&fp(&[&xi, &eta])).unwrap();
            let exact = ft_triangle(xi, eta);
            // Thickening bias is O(ε²) relative to the mass.
            let tol = 3.0 * est.stderr + 1e-5 * 4.0 * PI;
            assert!((est.value - exact).norm() <= tol,
                "{xi:?} {eta:?}: {} vs {exact} (stderr {})", est.value, est.stderr);
        }
    }

    #[test]
    fn sphere_matches_closed_form() {
        let sample = McSample::draw(&MeasureSpec::Sphere { d: 3 }, 0.1, 100_000, 1).unwrap();
        let xi = [0.3, -0.4, 0.2];
        let est = sample.evaluate(&FrequencyPoint::single(&xi)).unwrap();
        assert!((est.value - ft_sphere(3, &xi)).norm() < 3.0 * est.stderr);
    }

    #[test]
    fn chain_mass_and_epsilon_consistency() {
        let spec = MeasureSpec::ChainSpheres { d: 3, r1: 1.0, r2: 1.0, t: 1.0 };
        let mass = spec.total_mass().unwrap();
        let zero = FrequencyPoint::zeros(&[3, 3]);
        let mut prev: Option<McEstimate> = None;
        for eps in [0.04, 0.02, 0.01] {
            let est = ft_montecarlo(&spec, &zero, eps, 20_000, 8).unwrap();
            assert!(est.value.re > 0.0);
            assert!((est.value.re - mass).abs() < 1e-9 * mass);
            if let Some(p) = prev {
                assert!((p.value - est.value).norm() <= 3.0 * (p.stderr + est.stderr) + 1e-9 * mass);
            }
            prev = Some(est);
        }
    }

    #[test]
    fn chain_mass_four_dimensions() {
        let spec = MeasureSpec::ChainSpheres { d: 4, r1: 1.0, r2: 0.8, t: 0.9 };
        let est = ft_montecarlo(&spec, &FrequencyPoint::zeros(&[4, 4]), 1e-3, 10_000, 2).unwrap();
        let mass = spec.total_mass().unwrap();
        assert!((est.value.re / mass - 1.0).abs() < 1e-3, "{} vs {mass}", est.value.re);
    }

    #[test]
    fn chain_samples_satisfy_constraints() {
        let spec = MeasureSpec::ChainSpheres { d: 3, r1: 1.0, r2: 0.7, t: 1.2 };
        let s = McSample::draw(&spec, 0.01, 10_000, 4).unwrap();
        for (pts, _) in &s.chunks {
            for z in pts.chunks_exact(6) {
                let (x, y) = z.split_at(3);
                let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let dxy = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                assert!((nx - 1.0).abs() < 1e-12 && (ny - 0.7).abs() < 1e-12);
                assert!((dxy - 1.2).abs() < 0.01 + 1e-12);
            }
        }
    }

    #[test]
    fn determinant_samples_lie_in_band() {
        let spec = MeasureSpec::DeterminantVariety { d: 3, t: 0.5, radius: 2.0 };
        let s = McSample::draw(&spec, 0.01, 10_000, 6).unwrap();
        assert!(s.accepted() > 0);
        for (pts, w) in &s.chunks {
            for (z, &w) in pts.chunks_exact(9).zip(w) {
                if w == 0.0 {
                    continue;
                }
                let det = z[6] * (z[1] * z[5] - z[2] * z[4]) - z[7] * (z[0] * z[5] - z[2] * z[3])
                    + z[8] * (z[0] * z[4] - z[1] * z[3]);
                assert!((det - 0.5).abs() < 0.01 + 1e-9, "det {det}");
                assert!(z[6..].iter().map(|v| v * v).sum::<f64>() <= 4.0 + 1e-9);
            }
        }
        let est = s.evaluate(&FrequencyPoint::zeros(&[3, 3, 3])).unwrap();
        assert!(est.value.re > 0.0 && est.stderr > 0.0);
    }

    #[test]
    fn reproducible_and_hermitian() {
        let spec = MeasureSpec::Triangle2d;
        let xi = fp(&[&[0.3, 0.1], &[-0.2, 0.5]]);
        let a = ft_montecarlo(&spec, &xi, 0.01, 20_000, 77).unwrap();
        let b = ft_montecarlo(&spec, &xi, 0.01, 20_000, 77).unwrap();
        assert_eq!(a, b);
        let c = ft_montecarlo(&spec, &xi.negated(), 0.01, 20_000, 77).unwrap();
        assert!((a.value - c.value.conj()).norm() < 1e-9);
    }

    #[test]
    fn preconditions() {
        let spec = MeasureSpec::Sphere { d: 2 };
        let xi = FrequencyPoint::single(&[0.0, 0.0]);
        assert_eq!(ft_montecarlo(&spec, &xi, 0.3, 10_000, 0), Err(FourierError::InvalidEpsilon(0.3)));
        assert_eq!(ft_montecarlo(&spec, &xi, 0.1, 10, 0), Err(FourierError::TooFewSamples(10)));
    }
}
