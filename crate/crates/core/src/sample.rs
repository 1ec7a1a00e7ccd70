use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{rat_frac, Point, Rat};

/// Fixed-seed rational sampler used by every probabilistic check.
///
/// Values are `n/d` with `n` in `[-97, 97]` nonzero and `d` in `[1, 97]`;
/// the ChaCha8 stream is stable across platforms, so identical seeds give
/// identical runs. Seeds are recorded in reports.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    /// A nonzero rational with numerator and denominator bounded by 97.
    pub fn rat_nonzero(&mut self) -> Rat {
        let n = loop {
            let n = self.rng.gen_range(-97i64..=97);
            if n != 0 {
                break n;
            }
        };
        let d = self.rng.gen_range(1i64..=97);
        rat_frac(n, d)
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        self.rng.gen_range(0..den) < num
    }

    /// A point assigning every listed variable: zeros on `zeroed`,
    /// seeded nonzero rationals elsewhere.
    pub fn point<'a, I>(&mut self, vars: I, zeroed: &std::collections::BTreeSet<String>) -> Point
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut pt = Point::new();
        for v in vars {
            let val = if zeroed.contains(v) {
                Rat::from_integer(0.into())
            } else {
                self.rat_nonzero()
            };
            pt.insert(v.to_owned(), val);
        }
        pt
    }
}

/// The first `count` primes, used for generic structural-matrix
/// coefficients.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut n = 2u64;
    while primes.len() < count {
        if primes.iter().all(|p| n % p != 0) {
            primes.push(n);
        }
        n += 1;
    }
    primes
}
