//! Common unitaries.

use crate::linalg::{c, ComplexMatrix, I, ONE, ZERO};

pub fn x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]])
}

pub fn z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]])
}

/// Weyl operator `X^a Z^b` with `X|j⟩ = |j+1⟩` and `Z|j⟩ = ω^j |j⟩`.
pub fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    ComplexMatrix::from_fn(d, d, |r, s| {
        if r == (s + a) % d {
            let phase = omega * ((b * s) % d) as f64;
            c(phase.cos(), phase.sin())
        } else {
            ZERO
        }
    })
}

/// Controlled NOT with the first factor as control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
}

/// Controlled NOT with the second factor as control and the first as target.
pub fn cnot_reversed() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
    ])
}

/// Exchange of two `d`-dimensional factors.
pub fn swap(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, s| {
        if r / d == s % d && r % d == s / d {
            ONE
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tensor_product;

    #[test]
    fn weyl_operators_reduce_to_paulis() {
        assert!(weyl(2, 1, 0).max_abs_diff(&x()) < 1e-15);
        assert!(weyl(2, 0, 1).max_abs_diff(&z()) < 1e-15);
    }

    #[test]
    fn swap_exchanges_factors() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 5.0]]);
        let s = swap(2);
        assert!(
            s.sandwich(&tensor_product(&a, &b))
                .max_abs_diff(&tensor_product(&b, &a))
                < 1e-15
        );
    }

    #[test]
    fn reversed_cnot_is_swap_conjugated_cnot() {
        let s = swap(2);
        assert!(s.sandwich(&cnot()).max_abs_diff(&cnot_reversed()) < 1e-15);
    }
}
