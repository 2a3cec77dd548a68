use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded generator used by everything that draws randomness. ChaCha8 gives
/// the same stream on every platform, and normals come from Box-Muller rather
/// than a distribution crate so the exact variates are pinned down by this
/// file alone.
pub struct SeedRng {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl SeedRng {
    pub fn new(seed: u64) -> Self {
        SeedRng { inner: ChaCha8Rng::seed_from_u64(seed), spare_normal: None }
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform on [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Standard normal via Box-Muller; the second variate of each pair is
    /// cached so consecutive calls consume one uniform pair per two normals.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u keeps the log argument in (0, 1].
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}
