#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempex_core::models::random_catalog;
use tempex_core::Model;

pub fn catalog(n: usize, count: usize, seed: u64) -> Model {
    random_catalog(n, count, &mut ChaCha8Rng::seed_from_u64(seed))
}
