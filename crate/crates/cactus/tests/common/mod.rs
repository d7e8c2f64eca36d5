#![allow(dead_code)]

use cactus::combinat::enumerate_noncrossing;
use cactus::network::grow;
use cactus::{CactusNetwork, NoncrossingPartition, RationalMatrix, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> CactusNetwork {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    cactus::cli::parse_network(&text).unwrap()
}

pub const FIXTURES: [&str; 5] = ["y123.net", "delta-1-half-third.net", "cactus6.net", "shorted.net", "disconnected.net"];

pub fn fixtures() -> Vec<(&'static str, CactusNetwork)> {
    FIXTURES.iter().map(|&f| (f, fixture(f))).collect()
}

/// A random network on `n` labels with at most `max_steps` edges.  Half the
/// shapes are all singletons.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, max_steps: usize) -> CactusNetwork {
    let shapes = enumerate_noncrossing(n);
    let shape = if rng.gen_bool(0.5) {
        NoncrossingPartition::singletons(n)
    } else {
        shapes[rng.gen_range(0..shapes.len())].clone()
    };
    let steps = rng.gen_range(0..=max_steps);
    grow(&shape, steps, &mut |k| rng.gen_range(0..k))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` random networks with `n` cycling through `ns`.
pub fn random_networks(seed: u64, count: usize, ns: &[usize], max_steps: usize) -> Vec<CactusNetwork> {
    let mut r = rng(seed);
    (0..count).map(|i| random_network(&mut r, ns[i % ns.len()], max_steps)).collect()
}

/// Random symmetric matrix with zero row sums and nonnegative off-diagonal
/// entries drawn from small rationals.
pub fn random_response_like(rng: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
    let mut l = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = if rng.gen_bool(0.2) {
                Q::from_integer(0.into())
            } else {
                Q::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=4).into())
            };
            l[(i, j)] = x.clone();
            l[(j, i)] = x;
        }
    }
    for i in 0..n {
        let off: Q = (0..n).filter(|&j| j != i).map(|j| l[(i, j)].clone()).sum();
        l[(i, i)] = -off;
    }
    l
}
