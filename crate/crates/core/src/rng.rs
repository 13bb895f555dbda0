//! Counter-based deterministic random streams.
//!
//! Every draw is a pure function of a 64-bit key and a counter. Keys are
//! derived by hashing tuples such as `(master_seed, trial, i, j)`, so any
//! entry of any trial can be generated independently, in any order, on any
//! number of workers, with bit-identical results.

use crate::scalar::{cast, Scalar};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer; full-avalanche 64-bit mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A deterministic counter-based generator state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream {
            key: mix64(seed ^ GOLDEN),
            counter: 0,
        }
    }

    /// Derive a stream from a tuple of key parts (seed, trial, row, column, ...).
    /// The fold is order-sensitive, so `(a, b)` and `(b, a)` give unrelated keys.
    pub fn keyed(parts: &[u64]) -> Self {
        let mut key = GOLDEN;
        for (i, &p) in parts.iter().enumerate() {
            key = mix64(key.wrapping_add(mix64(p ^ (i as u64).wrapping_mul(GOLDEN))));
        }
        Stream { key, counter: 0 }
    }

    /// A child stream tagged by `tag`, independent of this stream's counter.
    pub fn substream(&self, tag: u64) -> Stream {
        Stream::keyed(&[self.key, tag])
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in `[0, 1)`.
    #[inline]
    pub fn uniform<F: Scalar>(&mut self) -> F {
        cast::<F>((self.next_u64() >> 11) as f64 * 1.1102230246251565e-16)
    }

    /// Uniform draw in `(0, 1]`; safe as a logarithm argument.
    #[inline]
    pub fn open01<F: Scalar>(&mut self) -> F {
        cast::<F>(((self.next_u64() >> 11) + 1) as f64 * 1.1102230246251565e-16)
    }

    /// Standard normal via Box-Muller (two uniforms per draw).
    pub fn standard_normal<F: Scalar>(&mut self) -> F {
        let u1: F = self.open01();
        let u2: F = self.uniform();
        let two = cast::<F>(2.0);
        let r = (-two * u1.ln()).sqrt();
        let theta = two * cast::<F>(std::f64::consts::PI) * u2;
        r * theta.cos()
    }

    /// Uniform point on the unit sphere of dimension `n`.
    pub fn unit_vector<F: Scalar>(&mut self, n: usize) -> Vec<F> {
        assert!(n >= 1, "unit vector needs n >= 1");
        loop {
            let v: Vec<F> = (0..n).map(|_| self.standard_normal()).collect();
            let norm = v.iter().map(|&x| x * x).fold(F::zero(), |a, b| a + b).sqrt();
            if norm > cast(1e-6) {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }
}
