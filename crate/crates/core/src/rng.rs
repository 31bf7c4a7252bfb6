//! Seeded normal variates.
//!
//! Uniforms come from ChaCha8 (portable, stable stream for a given seed);
//! normals are produced in pairs by the Box–Muller transform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math;
use crate::matrix::{CMat, C64};

#[derive(Clone, Debug)]
pub struct Gaussian {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Gaussian {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `(0, 1]`, 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = math::sqrt(-2.0 * math::ln(u1));
        let theta = core::f64::consts::TAU * u2;
        self.spare = Some(r * math::sin(theta));
        r * math::cos(theta)
    }

    /// `randn + i·randn`: independent standard normal real and imaginary parts.
    pub fn complex_normal(&mut self) -> C64 {
        let re = self.normal();
        let im = self.normal();
        C64::new(re, im)
    }

    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn complex_vector(&mut self, len: usize) -> alloc::vec::Vec<C64> {
        (0..len).map(|_| self.complex_normal()).collect()
    }
}
