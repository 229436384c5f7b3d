//! Simultaneous complex root finding (Aberth-Ehrlich), generic over the
//! floating-point scalar.

use num_complex::Complex;
use num_traits::Float;

/// Iteration cap; convergence is cubic for simple roots so this is generous.
const MAX_ITERATIONS: usize = 500;

fn horner<F: Float>(coeffs: &[F], z: Complex<F>) -> (Complex<F>, Complex<F>) {
    // value and derivative together
    let mut p = Complex::new(F::zero(), F::zero());
    let mut dp = Complex::new(F::zero(), F::zero());
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(c, F::zero());
    }
    (p, dp)
}

/// All complex roots of a polynomial with little-endian real coefficients
/// (leading coefficient nonzero). Works best on squarefree input.
pub fn aberth_roots<F: Float>(coeffs: &[F]) -> Vec<Complex<F>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<F> = coeffs.iter().map(|&c| c / lead).collect();
    // initial guesses on a circle of the Fujiwara-style radius
    let radius = monic[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs().powf(F::one() / F::from(n - i).unwrap()))
        .fold(F::zero(), F::max)
        .max(F::epsilon());
    let two_pi = F::from(std::f64::consts::TAU).unwrap();
    let offset = F::from(0.4).unwrap();
    let mut z: Vec<Complex<F>> = (0..n)
        .map(|k| {
            let theta = two_pi * F::from(k).unwrap() / F::from(n).unwrap() + offset;
            Complex::from_polar(radius, theta)
        })
        .collect();
    let tol = F::epsilon() * F::from(4.0).unwrap();
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = F::zero();
        for i in 0..n {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == F::zero() {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex::new(F::zero(), F::zero());
            for j in 0..n {
                if i != j {
                    let d = z[i] - z[j];
                    if d.norm() > F::zero() {
                        repulsion = repulsion + d.inv();
                    }
                }
            }
            let step = ratio / (Complex::new(F::one(), F::zero()) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = z[i] - step;
                let rel = step.norm() / z[i].norm().max(F::epsilon());
                max_step = max_step.max(rel);
            }
        }
        if max_step <= tol {
            break;
        }
    }
    // one Newton polish per root
    for zi in z.iter_mut() {
        let (p, dp) = horner(&monic, *zi);
        if dp.norm() > F::zero() {
            let step = p / dp;
            if step.re.is_finite() && step.im.is_finite() {
                *zi = *zi - step;
            }
        }
    }
    z
}
