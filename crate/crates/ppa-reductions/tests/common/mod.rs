#![allow(dead_code)]

pub mod gates;

use ppa_reductions::mobius::{SimplexPoint, TransformedPoint};
use ppa_reductions::rational::{q, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform multiple of `1/den` in `[lo, hi]` (both given as multiples of `1/den`).
pub fn rat_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    q(rng.gen_range(lo..=hi), den)
}

/// `τ` uniform on `[0, 1]`, each `|α_i| ≤ radius`.
pub fn near_axis(rng: &mut ChaCha8Rng, n: usize, radius: &Rational) -> TransformedPoint {
    let den = 1_000_003i64;
    let tau = rat_in(rng, 0, den, den);
    let alphas = (2..=n).map(|_| radius * rat_in(rng, -den, den, den)).collect();
    TransformedPoint { tau, alphas }
}

/// Simplex point with strictly positive coordinates.
pub fn positive_simplex(rng: &mut ChaCha8Rng, len: usize) -> SimplexPoint {
    let w: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=1000)).collect();
    let s: i64 = w.iter().sum();
    SimplexPoint::new(w.iter().map(|&x| q(x, s)).collect()).unwrap()
}

/// Simplex point that may touch the boundary.
pub fn any_simplex(rng: &mut ChaCha8Rng, len: usize) -> SimplexPoint {
    loop {
        let w: Vec<i64> = (0..len).map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..=50) }).collect();
        let s: i64 = w.iter().sum();
        if s > 0 {
            return SimplexPoint::new(w.iter().map(|&x| q(x, s)).collect()).unwrap();
        }
    }
}
