//! Deterministic, counter-based random streams for instance generation.
//!
//! Every stream is a pure function of `(kind, dims, seed, attempt)`, so
//! generated instances are bit-reproducible across runs. Standard normals
//! come from the Marsaglia polar transform over ChaCha uniforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct DetRng {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl DetRng {
    /// Stream keyed by the generator kind, instance dimensions, seed, and a
    /// resample attempt counter.
    pub fn new(kind: u8, dims: &[usize], seed: u64, attempt: u32) -> Self {
        let mut bytes = [0u8; 32];
        bytes[0] = kind;
        bytes[1..5].copy_from_slice(&attempt.to_le_bytes());
        bytes[8..16].copy_from_slice(&seed.to_le_bytes());
        for (i, d) in dims.iter().take(2).enumerate() {
            bytes[16 + 8 * i..24 + 8 * i].copy_from_slice(&(*d as u64).to_le_bytes());
        }
        if let Some(d) = dims.get(2) {
            bytes[5..8].copy_from_slice(&(*d as u32).to_le_bytes()[..3]);
        }
        DetRng { inner: ChaCha8Rng::from_seed(bytes), spare_normal: None }
    }

    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Standard normal via the polar method.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(v) = self.spare_normal.take() {
            return v;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let scale = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * scale);
                return u * scale;
            }
        }
    }

    pub fn normal(&mut self, std: f64) -> f64 {
        std * self.standard_normal()
    }

    pub fn normal_vec(&mut self, n: usize, std: f64) -> Vec<f64> {
        (0..n).map(|_| self.normal(std)).collect()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }
}
