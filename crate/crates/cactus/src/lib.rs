//! Exact electrical invariants of planar and cactus networks, and their
//! coordinates in the isotropic Grassmannian.
//!
//! Everything is computed over the rationals: grove measurements, response
//! and resistance matrices, Plücker vectors, charts, duals and Y-Δ moves.

pub mod cli;
pub mod combinat;
pub mod electrical;
pub mod error;
pub mod grassmann;
pub mod groves;
pub mod network;

pub use combinat::NoncrossingPartition;
pub use electrical::linalg::{RationalMatrix, Q};
pub use error::{Error, Result};
pub use network::CactusNetwork;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::combinat::enumerate_noncrossing;
    use crate::network::{grow, CactusNetwork};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// A random valid network with `1..=max_n` boundary labels and roughly
    /// `max_steps` growth moves.
    pub fn random_network(seed: u64, max_n: usize, max_steps: usize) -> CactusNetwork {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=max_n);
        let shapes = enumerate_noncrossing(n);
        let shape = if rng.gen_bool(0.5) {
            shapes.iter().find(|s| s.is_singletons()).unwrap().clone()
        } else {
            shapes[rng.gen_range(0..shapes.len())].clone()
        };
        let steps = rng.gen_range(0..=max_steps);
        grow(&shape, steps, &mut |k| rng.gen_range(0..k))
    }
}
