//! Deterministic per-sample seeds and uniform dyadic sampling on a family's domain.

use crate::cf::Family;
use crate::ring::LambdaRational;
use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name of the seed derivation recorded in run manifests.
pub const SEED_MIXER: &str = "splitmix64(splitmix64(master) ^ index) -> ChaCha8";

/// Bits of randomness per orbit step in sampled seeds.
pub const BITS_PER_STEP: u64 = 6;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sample `index` under master seed `master`.
pub fn sample_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

/// Dyadic resolution for expansions of `n_max` steps: 128 + 6·n_max bits.
pub fn seed_bits(n_max: usize) -> u64 {
    128 + BITS_PER_STEP * n_max as u64
}

/// Uniform integer in [0, 2^bits).
pub fn random_bits(rng: &mut ChaCha8Rng, bits: u64) -> BigInt {
    let nbytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; nbytes];
    rng.fill_bytes(&mut buf);
    let extra = nbytes as u64 * 8 - bits;
    if extra > 0 {
        let last = nbytes - 1;
        buf[last] &= 0xffu8 >> extra;
    }
    BigInt::from(BigUint::from_bytes_le(&buf))
}

/// Uniform point of the family's domain on the grid of mesh (domain length)·2^{−bits}.
pub fn uniform_point(family: &Family, rng: &mut ChaCha8Rng, bits: u64) -> LambdaRational {
    let m = random_bits(rng, bits);
    let r = family.ring();
    let two_b = BigInt::from(1) << bits;
    match family {
        Family::Rosen(_) => {
            let num = r.lambda().mul_int(&(m * 2 - &two_b));
            LambdaRational::new(num, r.from_bigint(two_b << 1u32)).unwrap()
        }
        Family::Alpha { num, den, .. } => {
            let (an, ad) = (BigInt::from(*num), BigInt::from(*den));
            let top = (an - &ad) * &two_b + &ad * m;
            LambdaRational::from_ratio(r, top, ad * two_b).unwrap()
        }
    }
}

/// Seed point number `index` of a run.
pub fn sample_point(family: &Family, master: u64, index: u64, bits: u64) -> LambdaRational {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(master, index));
    uniform_point(family, &mut rng, bits)
}
