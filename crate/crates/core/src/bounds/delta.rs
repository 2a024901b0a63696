//! `Δ(t) = t − log(1 + t)` and the elementary lower bounds it satisfies.

use crate::error::{Error, Result};
use crate::special::delta_unchecked;
use alloc::format;

/// `1 − log 2`, the constant in the two-sided comparison of `Δ` with
/// `min{t, t²}`.
pub const C0: f64 = 1.0 - core::f64::consts::LN_2;

/// `Δ(t)` for `t > −1`.
pub fn delta(t: f64) -> Result<f64> {
    if !(t > -1.0) || t.is_nan() {
        return Err(Error::Domain(t));
    }
    if t == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(delta_unchecked(t))
}

/// `min(c, c²) Δ(t)`, a lower bound for `Δ(ct)` when `c, t ≥ 0`.
pub fn delta_scale(c: f64, t: f64) -> Result<f64> {
    if !(c >= 0.0 && t >= 0.0) {
        return Err(Error::arg(format!("scaling bound needs c, t >= 0, got c = {c}, t = {t}")));
    }
    Ok(c.min(c * c) * delta(t)?)
}

/// `(1 − log 2) min{t, t²}`, a lower bound for `Δ(t)` when `t ≥ 0`.
pub fn delta_lower_min(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::arg(format!("min-form bound needs t >= 0, got {t}")));
    }
    Ok(C0 * t.min(t * t))
}

/// `t²/2`, a lower bound for `Δ(t)` on `(−1, 0]`.
pub fn delta_lower_negative(t: f64) -> Result<f64> {
    if !(t > -1.0 && t <= 0.0) {
        return Err(Error::arg(format!("negative-side bound needs -1 < t <= 0, got {t}")));
    }
    Ok(0.5 * t * t)
}

/// `(Δ(a)/a²) t²`, a lower bound for `Δ(t)` on `[0, a]`.
pub fn delta_lower_quadratic(a: f64, t: f64) -> Result<f64> {
    if !(a > 0.0) || !(0.0..=a).contains(&t) {
        return Err(Error::arg(format!("quadratic bound needs 0 <= t <= a, a > 0, got a = {a}, t = {t}")));
    }
    Ok(delta(a)? / (a * a) * t * t)
}

/// For a discrete `ξ ≥ 0` given as `(value, mass)` atoms, returns
/// `((1 − log 2) min{Eξ, (Eξ)²}, EΔ(ξ), Eξ)`, which must be increasing.
pub fn delta_expectation_bounds(atoms: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if atoms.iter().any(|(x, m)| !(*x >= 0.0) || !(*m >= 0.0)) {
        return Err(Error::arg("atoms must have non-negative values and masses"));
    }
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::MassMismatch(format!("atoms carry total mass {total}")));
    }
    let mean: f64 = atoms.iter().map(|(x, m)| x * m).sum();
    let mut ed = 0.0;
    for (x, m) in atoms {
        ed += m * delta(*x)?;
    }
    Ok((delta_lower_min(mean)?, ed, mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::LN_2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const N: usize = 10_000;

    fn grid(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
        (0..N).map(move |k| lo + (hi - lo) * k as f64 / (N - 1) as f64)
    }

    #[test]
    fn worked_values() {
        assert_eq!(delta(0.0).unwrap(), 0.0);
        assert!((delta(3.0).unwrap() - (3.0 - 2.0 * LN_2)).abs() < 1e-14);
        assert!((delta(3.0).unwrap() - 1.613_705_6).abs() < 1e-7);
        assert!((delta(-0.75).unwrap() - 0.636_294_4).abs() < 1e-7);
    }

    #[test]
    fn domain() {
        assert_eq!(delta(-1.0), Err(Error::Domain(-1.0)));
        assert!(delta(-2.0).is_err());
        assert!(delta(f64::NAN).is_err());
        assert!(delta(-0.999_999).unwrap() > 0.0);
    }

    #[test]
    fn scaling_bound() {
        // 100 x 100 = 10⁴ pairs
        let cs: std::vec::Vec<f64> = (0..100).map(|k| 10.0 * k as f64 / 99.0).collect();
        let mut bad = 0;
        for &c in &cs {
            for &t in &cs {
                if delta(c * t).unwrap() < delta_scale(c, t).unwrap() * (1.0 - 1e-12) - 1e-300 {
                    bad += 1;
                }
            }
        }
        assert_eq!(bad, 0);
    }

    #[test]
    fn negative_side_bound() {
        let bad = grid(-1.0 + 1e-9, 0.0).filter(|&t| delta(t).unwrap() < delta_lower_negative(t).unwrap()).count();
        assert_eq!(bad, 0);
    }

    #[test]
    fn quadratic_bound() {
        for a in [1.0, 4.0, 10.0] {
            let bad = grid(0.0, a)
                .filter(|&t| delta(t).unwrap() < delta_lower_quadratic(a, t).unwrap() * (1.0 - 1e-12))
                .count();
            assert_eq!(bad, 0, "a = {a}");
        }
        // the constant is attained at the endpoint
        assert!((delta_lower_quadratic(4.0, 4.0).unwrap() - delta(4.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn min_form_sandwich() {
        let bad = grid(0.0, 10.0)
            .filter(|&t| {
                let d = delta(t).unwrap();
                d < delta_lower_min(t).unwrap() * (1.0 - 1e-12) || d > t
            })
            .count();
        assert_eq!(bad, 0);
        // equality at t = 1
        assert!((delta(1.0).unwrap() - C0).abs() < 1e-15);
    }

    #[test]
    fn jensen_form_on_random_atoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut bad = 0;
        for _ in 0..N {
            let k = rng.gen_range(1..=5);
            let mut w: std::vec::Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|m| *m /= s);
            let atoms: std::vec::Vec<(f64, f64)> = w.iter().map(|m| (rng.gen::<f64>() * 10.0, *m)).collect();
            let (lo, mid, hi) = delta_expectation_bounds(&atoms).unwrap();
            if lo > mid * (1.0 + 1e-12) || mid > hi * (1.0 + 1e-12) {
                bad += 1;
            }
        }
        assert_eq!(bad, 0);
    }

    #[test]
    fn convex_and_nonnegative() {
        let ts: std::vec::Vec<f64> = grid(-0.99, 10.0).collect();
        for w in ts.windows(3) {
            let (a, b, c) = (delta(w[0]).unwrap(), delta(w[1]).unwrap(), delta(w[2]).unwrap());
            assert!(b >= 0.0);
            assert!(a - 2.0 * b + c >= -1e-12);
        }
    }
}
