use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Rational;

/// Deterministic generator for task `index` under `seed`; parallel and
/// serial runs draw identical streams.
pub fn sub_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `p / q` with `p, q` uniform in `[−97, 97] ∖ {0}`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let p = nonzero(rng);
    let q = nonzero(rng);
    Rational::new(p.into(), q.into())
}

fn nonzero<R: Rng>(rng: &mut R) -> i64 {
    let x = rng.gen_range(1..=194i64);
    if x <= 97 {
        x - 98
    } else {
        x - 97
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn samples_are_nonzero_and_bounded() {
        let mut rng = sub_rng(7, 0);
        for _ in 0..2000 {
            let r = random_rational(&mut rng);
            assert!(!r.is_zero());
            assert!(r.numer().magnitude() <= &97u32.into());
        }
        let a: Vec<Rational> = (0..5)
            .map(|_| random_rational(&mut sub_rng(1, 3)))
            .collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }
}
