//! Galois group of an irreducible monic integer quartic via the resolvent
//! cubic (Kappe-Warren).

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::zfactor::{factor_monic_squarefree, is_square};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuarticGroup {
    S4,
    A4,
    D4,
    C4,
    V4,
}

impl fmt::Display for QuarticGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `R(y) = y^3 - b y^2 + (ac - 4d) y - (a^2 d - 4bd + c^2)` for
/// `T^4 + a T^3 + b T^2 + c T + d`.
pub fn resolvent_cubic(h: &IntPoly) -> IntPoly {
    let (a, b, c, d) = (h.coeff(3), h.coeff(2), h.coeff(1), h.coeff(0));
    let four = BigInt::from(4);
    IntPoly::new(vec![
        -(&a * &a * &d - &four * &b * &d + &c * &c),
        &a * &c - &four * &d,
        -b,
        BigInt::from(1),
    ])
}

/// `x` is a square in `Q(sqrt(disc))`.
fn square_over(x: &BigInt, disc: &BigInt) -> bool {
    is_square(x) || is_square(&(x * disc))
}

pub fn quartic_galois_oracle(h: &IntPoly) -> Result<QuarticGroup> {
    if h.degree() != 4 || h.is_zero() {
        return Err(Error::NotQuartic);
    }
    if !h.is_monic() {
        return Err(Error::InvalidArgument(format!("{h} is not monic")));
    }
    if !h.is_squarefree() || factor_monic_squarefree(h).len() != 1 {
        return Err(Error::NotIrreducible);
    }
    let disc = h.discriminant();
    let resolvent = resolvent_cubic(h);
    let roots = resolvent.integer_roots();
    Ok(match roots.len() {
        0 => {
            if is_square(&disc) {
                QuarticGroup::A4
            } else {
                QuarticGroup::S4
            }
        }
        1 => {
            let r = &roots[0];
            let (a, b, d) = (h.coeff(3), h.coeff(2), h.coeff(0));
            let first = r * r - BigInt::from(4) * &d;
            let second = &a * &a - BigInt::from(4) * (&b - r);
            if square_over(&first, &disc) && square_over(&second, &disc) {
                QuarticGroup::C4
            } else {
                QuarticGroup::D4
            }
        }
        _ => QuarticGroup::V4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn classical_examples() {
        assert_eq!(quartic_galois_oracle(&p(&[1, 1, 1, 1, 1])).unwrap(), QuarticGroup::C4);
        assert_eq!(quartic_galois_oracle(&p(&[1, 0, 0, 0, 1])).unwrap(), QuarticGroup::V4);
        assert_eq!(quartic_galois_oracle(&p(&[-2, 0, 0, 0, 1])).unwrap(), QuarticGroup::D4);
        // x^4 + x + 1: generic
        assert_eq!(quartic_galois_oracle(&p(&[1, 1, 0, 0, 1])).unwrap(), QuarticGroup::S4);
        // x^4 + 8x + 12: the textbook A4 example
        assert_eq!(quartic_galois_oracle(&p(&[12, 8, 0, 0, 1])).unwrap(), QuarticGroup::A4);
        // x^4 - 10x^2 + 1 = minimal polynomial of sqrt2 + sqrt3
        assert_eq!(quartic_galois_oracle(&p(&[1, 0, -10, 0, 1])).unwrap(), QuarticGroup::V4);
        // x^4 - 4x^2 + 2: Q(sqrt(2 + sqrt2)) is cyclic
        assert_eq!(quartic_galois_oracle(&p(&[2, 0, -4, 0, 1])).unwrap(), QuarticGroup::C4);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(quartic_galois_oracle(&p(&[1, 0, 1])).unwrap_err(), Error::NotQuartic);
        let red = p(&[1, 0, 1]).mul(&p(&[2, 0, 1]));
        assert_eq!(quartic_galois_oracle(&red).unwrap_err(), Error::NotIrreducible);
    }
}
