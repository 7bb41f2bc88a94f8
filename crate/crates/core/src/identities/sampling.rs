//! Deterministic parameter sampling. Every `(theorem, trial)` pair draws
//! from its own ChaCha stream, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::families::FamilyParams;
use crate::rational::Rational;

use super::{stream_id, Sample, TheoremId};

fn rng_for(theorem: TheoremId, seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(theorem, trial));
    rng
}

/// `p / q` with `|p| <= 5`, `1 <= q <= 5`.
fn small(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=5))
}

fn nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = small(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn positive(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..=5), rng.gen_range(1..=5))
}

/// `lambda` with `0 < |lambda| <= 1/2`.
fn small_lambda(rng: &mut ChaCha8Rng, allow_zero: bool) -> Rational {
    loop {
        let den = rng.gen_range(2..=5i64);
        let num = rng.gen_range(-(den / 2)..=den / 2);
        if allow_zero || num != 0 {
            return Rational::new(num, den);
        }
    }
}

struct Draw<'a> {
    rng: &'a mut ChaCha8Rng,
}

impl Draw<'_> {
    fn family(&mut self, alpha: std::ops::RangeInclusive<i64>, allow_equal: bool, allow_zero_b: bool) -> FamilyParams {
        let rng = &mut *self.rng;
        let a = nonzero(rng);
        let b = loop {
            let b = if allow_equal && rng.gen_ratio(1, 5) { a.clone() } else { small(rng) };
            if (allow_zero_b || !b.is_zero()) && (allow_equal || b != a) {
                break b;
            }
        };
        let alpha = rng.gen_range(alpha);
        let min_k = if a == b { 1 } else { 0 };
        FamilyParams { k: rng.gen_range(min_k..=2), a, b, alpha, m: rng.gen_range(1..=3), r: rng.gen_range(1..=3) }
    }

    /// `|B/A| <= 1/2`.
    fn convergent_family(&mut self, alpha: std::ops::RangeInclusive<i64>, allow_zero_b: bool) -> FamilyParams {
        let rng = &mut *self.rng;
        let a = nonzero(rng);
        let lambda = small_lambda(rng, allow_zero_b);
        FamilyParams {
            k: rng.gen_range(0..=2),
            b: &lambda * &a,
            a,
            alpha: rng.gen_range(alpha),
            m: rng.gen_range(1..=3),
            r: rng.gen_range(1..=3),
        }
    }
}

/// The parameter set for `trial` of `theorem` under `seed`.
pub fn sample(theorem: TheoremId, seed: u64, trial: u32) -> Sample {
    let mut rng = rng_for(theorem, seed, trial);
    let mut d = Draw { rng: &mut rng };
    use TheoremId::*;
    let mut s = match theorem {
        Expansion => Sample::new(d.family(-1..=3, true, true)),
        T3_1 | T3_2 => Sample::new(d.family(1..=3, true, true)),
        T3_3 => {
            let mut s = Sample::new(d.convergent_family(1..=2, true));
            s.x0 = Some(positive(d.rng));
            s
        }
        T3_4 => {
            let fam = d.family(0..=3, true, true);
            let mut s = Sample::new(fam);
            s.gamma = Some(d.rng.gen_range(0..=s.family.alpha));
            s
        }
        T4_1Odd => {
            let mut s = Sample::new(d.family(0..=2, true, true));
            s.s = Some(if d.rng.gen_bool(0.5) { 1 } else { 3 });
            s
        }
        T4_1Even => {
            let mut s = Sample::new(d.family(1..=2, true, true));
            s.s = Some(if d.rng.gen_bool(0.5) { 2 } else { 4 });
            s
        }
        T5_1 => {
            let mut s = Sample::new(d.family(1..=2, true, true));
            s.l = Some(d.rng.gen_range(1..=3));
            s.q = Some(d.rng.gen_range(1..=3));
            s
        }
        T5_2 | T5_3 => Sample::new(d.family(1..=2, true, true)),
        T5_4 | T5_5 => Sample::new(d.family(1..=2, true, false)),
        T5_6 => {
            let mut s = Sample::new(d.convergent_family(1..=2, false));
            s.x0 = Some(positive(d.rng));
            s
        }
    };
    if matches!(theorem, T5_2 | T5_3 | T5_4 | T5_5 | T5_6) {
        s.c = Some(rng.gen_range(1..=3));
        s.d = Some(rng.gen_range(1..=3));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        for t in TheoremId::ALL {
            for trial in 0..5 {
                assert_eq!(sample(t, 42, trial), sample(t, 42, trial));
            }
        }
        assert_ne!(sample(TheoremId::T3_1, 1, 0), sample(TheoremId::T3_1, 2, 0));
    }

    #[test]
    fn samples_respect_domains() {
        for trial in 0..50 {
            let s = sample(TheoremId::T3_3, 7, trial);
            assert!(s.family.lambda().abs() <= Rational::new(1, 2));
            let s = sample(TheoremId::T5_6, 7, trial);
            assert!(!s.family.b.is_zero());
            let s = sample(TheoremId::T3_4, 7, trial);
            assert!(s.gamma.unwrap() <= s.family.alpha);
            let s = sample(TheoremId::T5_1, 7, trial);
            if s.family.a == s.family.b {
                assert!(s.family.k >= 1);
            }
        }
    }
}
