//! Admissible fixed-point counts for prime-order automorphisms and the
//! orbit-length distribution equations for a cyclic group of order p·q.
//!
//! All bound comparisons are exact integer arithmetic. The second
//! fixed-point bound f ≤ λv/(k−√(k−λ)) involves a square root; it is
//! evaluated by comparing (fk−λv)² against f²(k−λ), so equality detection
//! is exact even when k−λ is not a perfect square.

use alloc::vec::Vec;
use core::fmt;

use crate::design::DesignParams;

/// Admissible fixed-point counts for automorphisms of prime order `prime`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FixedPointProfile {
    prime: usize,
    admissible: Vec<usize>,
}

impl FixedPointProfile {
    pub fn prime(&self) -> usize {
        self.prime
    }

    /// Sorted ascending.
    pub fn admissible(&self) -> &[usize] {
        &self.admissible
    }

    pub fn contains(&self, f: usize) -> bool {
        self.admissible.binary_search(&f).is_ok()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FeasibilityError {
    NotPrime(usize),
}

impl fmt::Display for FeasibilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FeasibilityError::NotPrime(r) => write!(f, "{r} is not prime"),
        }
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Result of an exact comparison of f against λv/(k−√(k−λ)).
fn sqrt_bound(f: usize, params: &DesignParams) -> (bool, bool) {
    // f ≤ λv/(k−√n)  ⟺  f·k − λ·v ≤ f·√n      (k > √n for nontrivial designs)
    let n = params.order() as i128;
    let lhs = f as i128 * params.k() as i128 - params.lambda() as i128 * params.v() as i128;
    if lhs < 0 {
        return (true, false);
    }
    let s = isqrt(n as u64) as i128;
    if s * s == n {
        // rational bound, direct comparison
        (lhs <= f as i128 * s, lhs == f as i128 * s)
    } else {
        // irrational bound, equality impossible
        (lhs * lhs <= f as i128 * f as i128 * n, false)
    }
}

/// All fixed-point counts f admissible for an automorphism of prime order
/// `r` acting on a symmetric design with the given parameters.
///
/// Applied constraints: f ≡ v (mod r) (non-fixed points fall in r-cycles);
/// f ≤ v − 2(k−λ) and f ≤ λv/(k−√(k−λ)); for r > 2 equality in either
/// upper bound is excluded (it would force an involution); for r = 2 and
/// f ≠ 0, f ≥ 1 + k/λ when k and λ are both even, else f ≥ 1 + (k−1)/λ.
pub fn admissible_fixed_points(
    params: &DesignParams,
    r: usize,
) -> Result<FixedPointProfile, FeasibilityError> {
    if !is_prime(r) {
        return Err(FeasibilityError::NotPrime(r));
    }
    let (v, k, lambda) = (params.v(), params.k(), params.lambda());
    let bound1 = v - 2 * params.order();
    let mut admissible = Vec::new();
    for f in 0..=v {
        if (v - f) % r != 0 {
            continue;
        }
        let eq1 = f == bound1;
        if f > bound1 {
            continue;
        }
        let (ok2, eq2) = sqrt_bound(f, params);
        if !ok2 {
            continue;
        }
        if r > 2 && (eq1 || eq2) {
            continue;
        }
        if r == 2 && f != 0 {
            let min_num = if k % 2 == 0 && lambda % 2 == 0 {
                lambda + k
            } else {
                lambda + k - 1
            };
            if f * lambda < min_num {
                continue;
            }
        }
        admissible.push(f);
    }
    Ok(FixedPointProfile { prime: r, admissible })
}

/// Orbit counts by length for a Z_{p·q} action: `d1` orbits of length 1,
/// `dp` of length p, `dq` of length q, `dpq` of length p·q.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OrbitDistribution {
    pub d1: usize,
    pub dp: usize,
    pub dq: usize,
    pub dpq: usize,
}

impl OrbitDistribution {
    /// Orbit sizes in ascending order (fixed orbits first).
    pub fn orbit_sizes(&self, p: usize, q: usize) -> Vec<u32> {
        let mut sizes = Vec::with_capacity(self.d1 + self.dp + self.dq + self.dpq);
        sizes.extend(core::iter::repeat(1u32).take(self.d1));
        sizes.extend(core::iter::repeat(p as u32).take(self.dp));
        sizes.extend(core::iter::repeat(q as u32).take(self.dq));
        sizes.extend(core::iter::repeat((p * q) as u32).take(self.dpq));
        sizes
    }

    pub fn total_points(&self, p: usize, q: usize) -> usize {
        self.d1 + p * self.dp + q * self.dq + p * q * self.dpq
    }

    /// Re-substitutes the distribution into the three defining equations.
    pub fn satisfies(&self, v: usize, p: usize, q: usize, f_p: usize, f_q: usize) -> bool {
        self.d1 + p * self.dp == f_q
            && self.d1 + q * self.dq == f_p
            && self.total_points(p, q) == v
    }

    /// True iff an element acting with these orbit lengths has order p·q.
    pub fn has_full_order(&self) -> bool {
        self.dpq > 0 || (self.dp > 0 && self.dq > 0)
    }
}

/// All nonnegative integer solutions of
/// d1 + p·dp = f_q,  d1 + q·dq = f_p,  d1 + p·dp + q·dq + pq·dpq = v,
/// sorted lexicographically. An empty list means no distribution exists.
pub fn orbit_distributions(
    params: &DesignParams,
    p: usize,
    q: usize,
    f_p: usize,
    f_q: usize,
) -> Vec<OrbitDistribution> {
    debug_assert!(is_prime(p) && is_prime(q) && p != q);
    let v = params.v();
    let mut out = Vec::new();
    for d1 in 0..=f_p.min(f_q) {
        if (f_q - d1) % p != 0 || (f_p - d1) % q != 0 {
            continue;
        }
        let dp = (f_q - d1) / p;
        let dq = (f_p - d1) / q;
        let used = d1 + p * dp + q * dq;
        if used > v || (v - used) % (p * q) != 0 {
            continue;
        }
        let dist = OrbitDistribution {
            d1,
            dp,
            dq,
            dpq: (v - used) / (p * q),
        };
        debug_assert!(dist.satisfies(v, p, q, f_p, f_q));
        out.push(dist);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn params70() -> DesignParams {
        DesignParams::new(70, 24, 8).unwrap()
    }

    #[test]
    fn admissible_f2_for_70_24_8() {
        let profile = admissible_fixed_points(&params70(), 2).unwrap();
        let expected: Vec<usize> = core::iter::once(0).chain((2..=14).map(|i| 2 * i)).collect();
        assert_eq!(profile.admissible(), &expected[..]);
    }

    #[test]
    fn admissible_f3_for_70_24_8() {
        let profile = admissible_fixed_points(&params70(), 3).unwrap();
        let expected: Vec<usize> = (0..9).map(|i| 1 + 3 * i).collect();
        assert_eq!(profile.admissible(), &expected[..]);
    }

    #[test]
    fn admissible_for_fano_under_z7() {
        // Bound evaluation by hand: f ≤ 7−4 = 3 and f ≡ 0 (mod 7) leave {0}.
        let params = DesignParams::new(7, 3, 1).unwrap();
        let profile = admissible_fixed_points(&params, 7).unwrap();
        assert_eq!(profile.admissible(), &[0]);
        // Brute force: the Singer action x -> x+1 fixes nothing.
        let rho = crate::design::Permutation::new((0..7u16).map(|x| (x + 1) % 7).collect())
            .unwrap();
        assert_eq!(rho.fixed_point_count(), 0);
    }

    #[test]
    fn congruence_closure() {
        for r in [2usize, 3, 5, 7] {
            let profile = admissible_fixed_points(&params70(), r).unwrap();
            for &f in profile.admissible() {
                assert_eq!((70 - f) % r, 0);
            }
        }
    }

    #[test]
    fn rejects_composite_order() {
        assert_eq!(
            admissible_fixed_points(&params70(), 6),
            Err(FeasibilityError::NotPrime(6))
        );
    }

    #[test]
    fn unique_distribution_for_f2_14_f3_4() {
        let dists = orbit_distributions(&params70(), 2, 3, 14, 4);
        assert_eq!(
            dists,
            alloc::vec![OrbitDistribution { d1: 2, dp: 1, dq: 4, dpq: 9 }]
        );
    }

    #[test]
    fn no_distribution_for_f2_20_f3_1() {
        // d1 ∈ {0,1}: d1 = 1 forces 3·dq = 19, impossible; d1 = 0 fails parity.
        assert!(orbit_distributions(&params70(), 2, 3, 20, 1).is_empty());
    }

    #[test]
    fn degenerate_full_fixing() {
        let dists = orbit_distributions(&params70(), 2, 3, 70, 70);
        assert_eq!(
            dists,
            alloc::vec![OrbitDistribution { d1: 70, dp: 0, dq: 0, dpq: 0 }]
        );
        assert!(!dists[0].has_full_order());
    }

    #[test]
    fn every_solution_satisfies_equations() {
        let params = params70();
        let f2 = admissible_fixed_points(&params, 2).unwrap();
        let f3 = admissible_fixed_points(&params, 3).unwrap();
        for &fp in f2.admissible() {
            for &fq in f3.admissible() {
                for d in orbit_distributions(&params, 2, 3, fp, fq) {
                    assert!(d.satisfies(70, 2, 3, fp, fq));
                }
            }
        }
    }

    #[test]
    fn structurally_dashed_cell_has_no_distribution() {
        // (f2, f3) = (0, 1): an order-3 fixed point forces d1 = 1, but
        // f2 = 0 forces d1 = 0.
        assert!(orbit_distributions(&params70(), 2, 3, 0, 1).is_empty());
    }
}
