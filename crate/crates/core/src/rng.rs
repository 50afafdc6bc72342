//! Seeded splittable pseudo-random generator (splitmix64) for reproducible
//! sample points. Same seed, same platform, same bytes.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A fresh independent stream.
    pub fn split(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Small rational p/q with |p| ≤ bound, 1 ≤ q ≤ 8 (for exact tests).
    pub fn small_rational(&mut self, bound: u64) -> (i64, i64) {
        let p = (self.next_u64() % (2 * bound + 1)) as i64 - bound as i64;
        let q = (self.next_u64() % 8) as i64 + 1;
        (p, q)
    }
}

/// `n` points in the box [lo, hi]^7.
pub fn sample_points(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<[f64; 7]> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| std::array::from_fn(|_| rng.uniform(lo, hi)))
        .collect()
}
