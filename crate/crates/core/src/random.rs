//! Seedable random states, unitaries, channels, dilations and control
//! operations for property tests and benchmarks.
//!
//! Every generator takes the caller's [`Rng`], so a seeded generator gives
//! reproducible ensembles.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::Dilation;
use crate::linalg::{c, inv_sqrtm, orthonormalize_against, tensor_product, ComplexMatrix, C64};
use crate::maps::QuantumMap;
use crate::superchannel::{ControlOperation, TraceClass};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-random unitary from Gram–Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let g = ginibre(d, d, rng);
        let mut cols: Vec<ComplexMatrix> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = g.column_at(j);
            if !orthonormalize_against(&mut v, &cols) {
                break;
            }
            cols.push(v);
        }
        if cols.len() == d {
            let mut u = ComplexMatrix::zeros(d, d);
            for (j, v) in cols.iter().enumerate() {
                u.set_column(j, v);
            }
            return u;
        }
    }
}

/// Random density operator of the given rank (`G G† / tr`).
pub fn state_with_rank<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, rank.max(1), rng);
    let rho = g.matmul(&g.adjoint());
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitian_part()
}

/// Random full-rank density operator.
pub fn state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    state_with_rank(d, d, rng)
}

pub fn pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    state_with_rank(d, 1, rng)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(d, d, rng).hermitian_part()
}

/// Random Kraus operators normalized to `Σ K†K = 1` through `K ↦ K S^{-1/2}`
/// with `S = Σ K†K`. At least `⌈d_in / d_out⌉` operators are drawn so that `S`
/// has full rank.
pub fn cptp_kraus<R: Rng + ?Sized>(
    d_in: usize,
    d_out: usize,
    n_kraus: usize,
    rng: &mut R,
) -> Vec<ComplexMatrix> {
    let n = n_kraus.max(d_in.div_ceil(d_out));
    let raw: Vec<ComplexMatrix> = (0..n).map(|_| ginibre(d_out, d_in, rng)).collect();
    let mut s = ComplexMatrix::zeros(d_in, d_in);
    for k in &raw {
        s += &k.adjoint().matmul(k);
    }
    let norm = inv_sqrtm(&s.hermitian_part()).expect("Σ K†K is positive");
    raw.iter().map(|k| k.matmul(&norm)).collect()
}

/// Random CPTP map in Kraus form with a random number of Kraus operators
/// between 1 and `d_in · d_out`.
pub fn cptp<R: Rng + ?Sized>(d_in: usize, d_out: usize, rng: &mut R) -> QuantumMap {
    let n = rng.gen_range(d_in.div_ceil(d_out)..=d_in * d_out);
    QuantumMap::from_kraus(cptp_kraus(d_in, d_out, n, rng)).expect("shapes are consistent")
}

/// Random `k`-step dilation; `product` selects an uncorrelated initial state.
pub fn dilation<R: Rng + ?Sized>(
    d_s: usize,
    d_e: usize,
    k: usize,
    product: bool,
    rng: &mut R,
) -> Dilation {
    let initial = if product {
        tensor_product(&state(d_s, rng), &state(d_e, rng))
    } else {
        state(d_s * d_e, rng)
    };
    let unitaries = (0..k.max(1)).map(|_| unitary(d_s * d_e, rng)).collect();
    Dilation::new(d_s, d_e, initial, unitaries).expect("random dilation is valid")
}

/// Random CP operation on a `d`-dimensional system. Trace non-increasing
/// operations are a random CPTP map with Kraus operators scaled by a common
/// factor in `(0, 1]`.
pub fn operation<R: Rng + ?Sized>(d: usize, class: TraceClass, rng: &mut R) -> ControlOperation {
    let n = rng.gen_range(1..=d * d);
    let mut kraus = cptp_kraus(d, d, n, rng);
    if class == TraceClass::NonIncreasing {
        let s: f64 = rng.gen_range(0.1..1.0);
        kraus = kraus.into_iter().map(|k| k.scale_real(s.sqrt())).collect();
    }
    let map = QuantumMap::from_kraus(kraus).expect("shapes are consistent");
    ControlOperation::new(map.to_bform().into_matrix(), class).expect("random operation is valid")
}

/// Random complex scalar with standard Gaussian parts.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}
