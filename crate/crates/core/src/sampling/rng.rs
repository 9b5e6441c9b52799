use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;

/// Bits of resolution for uniform draws converted to rationals.
pub const DYADIC_BITS: u32 = 30;

/// A reproducible random stream identified by `(master_seed, stream_index)`.
///
/// Streams with different indices are independent ChaCha streams under the
/// same key, so parallel trials can each own one without coordination.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> RngStream {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        RngStream {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform integer in `[0, 2^DYADIC_BITS)`.
    pub fn dyadic_mantissa(&mut self) -> i64 {
        self.rng.gen_range(0..1i64 << DYADIC_BITS)
    }

    /// Uniform rational in `[0, 1)` on the grid `2^-DYADIC_BITS`.
    pub fn unit_rational(&mut self) -> Rational {
        Rational::dyadic(self.dyadic_mantissa(), DYADIC_BITS)
    }

    /// Uniform rational in `(0, 1]` on the grid `2^-DYADIC_BITS`.
    pub fn positive_unit_rational(&mut self) -> Rational {
        Rational::dyadic(self.dyadic_mantissa() + 1, DYADIC_BITS)
    }

    /// Uniform rational in `(−1, 1)` on the grid `2^-DYADIC_BITS`.
    pub fn symmetric_unit_rational(&mut self) -> Rational {
        let m = self.rng.gen_range(-(1i64 << DYADIC_BITS) + 1..1i64 << DYADIC_BITS);
        Rational::dyadic(m, DYADIC_BITS)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
