//! Polynomial zeros as eigenvalues of the companion matrix.
//!
//! The companion matrix of a monic polynomial is already upper Hessenberg,
//! so the eigenvalues come straight out of a single-shift complex QR
//! iteration with Wilkinson shifts and deflation. Roots are then polished
//! with a few Newton steps on the original coefficients.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

const MAX_SWEEPS_PER_ROOT: usize = 60;
const NEWTON_STEPS: usize = 3;

/// Zeros of `p(z) = coeffs[0] + coeffs[1] z + ... + coeffs[n] z^n`.
///
/// Trailing coefficients that are negligible relative to the largest one
/// are dropped first, so the returned length is the effective degree.
/// A constant polynomial has no zeros.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut degree = coeffs.len() - 1;
    while degree > 0 && coeffs[degree].norm() <= 1e-14 * scale {
        degree -= 1;
    }
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let mut h = companion(&coeffs[..=degree], lead);
    let mut roots = hessenberg_eigenvalues(&mut h);
    for root in &mut roots {
        *root = polish(&coeffs[..=degree], *root);
    }
    roots
}

/// Smallest modulus among the zeros, `None` for a constant polynomial.
pub fn min_root_modulus(coeffs: &[Complex64]) -> Option<f64> {
    polynomial_roots(coeffs)
        .into_iter()
        .map(|r| r.norm())
        .reduce(f64::min)
}

fn companion(coeffs: &[Complex64], lead: Complex64) -> Vec<Vec<Complex64>> {
    // first row -a_{n-1}, ..., -a_0 of the monic polynomial, ones below the diagonal
    let n = coeffs.len() - 1;
    let mut h = vec![vec![ZERO; n]; n];
    for (j, entry) in h[0].iter_mut().enumerate() {
        *entry = -coeffs[n - 1 - j] / lead;
    }
    for i in 1..n {
        h[i][i - 1] = ONE;
    }
    h
}

fn hessenberg_eigenvalues(h: &mut [Vec<Complex64>]) -> Vec<Complex64> {
    let n = h.len();
    let mut eig = vec![ZERO; n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut rotations: Vec<(Complex64, Complex64)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let off = h[lo][lo - 1].norm();
            let diag = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if off <= f64::EPSILON * diag.max(f64::MIN_POSITIVE) {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi || iter >= MAX_SWEEPS_PER_ROOT {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;

        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[hi][hi] + Complex64::new(0.75 * h[hi][hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };

        for (k, row) in h.iter_mut().enumerate().take(hi + 1).skip(lo) {
            row[k] -= mu;
        }
        rotations.clear();
        for k in lo..hi {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = Float::sqrt(x.norm_sqr() + y.norm_sqr());
            let (c, s) = if r == 0.0 {
                (ONE, ZERO)
            } else {
                (x / r, y / r)
            };
            let (upper, lower) = h.split_at_mut(k + 1);
            for (a, b) in upper[k][k..=hi].iter_mut().zip(&mut lower[0][k..=hi]) {
                (*a, *b) = (c.conj() * *a + s.conj() * *b, -s * *a + c * *b);
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
                let a = row[k];
                let b = row[k + 1];
                row[k] = a * c + b * s;
                row[k + 1] = -a * s.conj() + b * c.conj();
            }
        }
        for (k, row) in h.iter_mut().enumerate().take(hi + 1).skip(lo) {
            row[k] += mu;
        }
    }
    eig
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let eval = |z: Complex64| {
        coeffs
            .iter()
            .rev()
            .fold((ZERO, ZERO), |(p, dp), &c| (p * z + c, dp * z + p))
    };
    let (mut p, mut dp) = eval(z);
    for _ in 0..NEWTON_STEPS {
        if dp.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let (cp, cdp) = eval(candidate);
        // stop unless strictly better; NaN counts as worse
        if cp.norm().partial_cmp(&p.norm()) != Some(core::cmp::Ordering::Less) {
            break;
        }
        z = candidate;
        p = cp;
        dp = cdp;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![ONE];
        for &r in roots {
            let mut next = vec![ZERO; p.len() + 1];
            for (k, &c) in p.iter().enumerate() {
                next[k] -= c * r;
                next[k + 1] += c;
            }
            p = next;
        }
        p
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn quadratic_with_real_roots() {
        // 1 - 3z + z^2/2 has zeros 3 -+ sqrt(7)
        let p = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.5, 0.0),
        ];
        let roots = sorted(polynomial_roots(&p));
        assert!((roots[0].re - (3.0 - 7f64.sqrt())).abs() < 1e-14);
        assert!((roots[1].re - (3.0 + 7f64.sqrt())).abs() < 1e-13);
        assert!((min_root_modulus(&p).unwrap() - 0.354_248_688_935_409).abs() < 1e-12);
    }

    #[test]
    fn constant_and_degenerate() {
        assert!(polynomial_roots(&[ONE]).is_empty());
        assert!(polynomial_roots(&[ONE, ZERO, ZERO]).is_empty());
        assert!(polynomial_roots(&[]).is_empty());
        assert_eq!(min_root_modulus(&[ONE]), None);
        let linear = polynomial_roots(&[Complex64::new(2.0, 0.0), Complex64::new(-4.0, 0.0)]);
        assert_eq!(linear.len(), 1);
        assert!((linear[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn double_root_on_the_circle() {
        // (1 - z)^2: the conditioning limit is about sqrt(eps)
        let p = [ONE, Complex64::new(-2.0, 0.0), ONE];
        for r in polynomial_roots(&p) {
            assert!((r - ONE).norm() < 1e-7, "{r}");
        }
    }

    #[test]
    fn recovers_complex_roots() {
        let expected = [
            Complex64::new(0.3, -1.2),
            Complex64::new(-2.0, 0.5),
            Complex64::new(1.1, 1.1),
            Complex64::new(0.0, 3.0),
            Complex64::new(-0.7, -0.7),
            Complex64::new(4.0, 0.0),
        ];
        let p = poly_from_roots(&expected);
        let mut found = polynomial_roots(&p);
        assert_eq!(found.len(), expected.len());
        for e in expected {
            let (idx, dist) = found
                .iter()
                .enumerate()
                .map(|(i, r)| (i, (r - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist < 1e-10, "root {e} missed by {dist}");
            found.swap_remove(idx);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn complex() -> impl Strategy<Value = Complex64> {
            (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Complex64::new(re, im))
        }

        proptest! {
            #[test]
            fn residuals_vanish(coeffs in proptest::collection::vec(complex(), 2..8)) {
                let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
                for r in polynomial_roots(&coeffs) {
                    let value = coeffs.iter().rev().fold(ZERO, |acc, &c| acc * r + c);
                    let magnitude: f64 = coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
                        .sum();
                    prop_assert!(value.norm() <= 1e-9 * magnitude.max(scale), "root {} residual {}", r, value);
                }
            }
        }
    }
}
