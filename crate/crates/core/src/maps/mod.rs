//! Linear maps on operator space and their four representations.
//!
//! A [`QuantumMap`] `𝓔: B(H_in) → B(H_out)` is held in exactly one of
//!
//! * the tomographic form: outputs `ρ′_i = 𝓔[ρ_i]` on a basis `{ρ_i}` together
//!   with the dual set `{D_i}`,
//! * the operator-sum form `𝓔[ρ] = Σ_α L_α ρ R_α†`,
//! * the A form, acting on row-major vectorized states,
//! * the B form (Choi matrix) with leg order `out ⊗ in` and the unnormalized
//!   maximally entangled vector `|I⟩ = Σ_k |kk⟩`.
//!
//! Every representation converts to every other; see [`QuantumMap::convert`].

mod basis;
mod checks;
mod envelope;

pub use basis::{check_basis, dual_basis, duality_residual, gell_mann_basis, paulis, state_basis};
pub use checks::{check_cp, check_hp, check_tp, kraus_rank, same_map, CpCheck, ResidualCheck};
pub use envelope::MapEnvelope;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, reshuffle, tensor_product, unvec, vec, ComplexMatrix, ZERO};
use crate::tol;

/// Outputs of a map on a linearly independent input basis, with the duals of
/// that basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TomographicRep {
    inputs: Vec<ComplexMatrix>,
    duals: Vec<ComplexMatrix>,
    outputs: Vec<ComplexMatrix>,
}

impl TomographicRep {
    /// Builds the representation, computing the duals of `inputs`.
    pub fn new(inputs: Vec<ComplexMatrix>, outputs: Vec<ComplexMatrix>) -> Result<Self> {
        let duals = dual_basis(&inputs)?;
        Self::with_duals(inputs, duals, outputs)
    }

    /// Builds the representation from explicitly supplied duals, which must
    /// satisfy `tr(D_i† ρ_j) = δ_ij`.
    pub fn with_duals(
        inputs: Vec<ComplexMatrix>,
        duals: Vec<ComplexMatrix>,
        outputs: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        let d = check_basis(&inputs)?;
        if duals.len() != inputs.len() || duals.iter().any(|m| m.shape() != (d, d)) {
            return Err(Error::dims(
                "duals must match the input basis element for element",
            ));
        }
        let d_out = outputs.first().map(|m| m.rows()).unwrap_or(0);
        if outputs.len() != inputs.len() || outputs.iter().any(|m| m.shape() != (d_out, d_out)) {
            return Err(Error::dims(format!(
                "expected {} square outputs of equal size",
                inputs.len()
            )));
        }
        let residual = duality_residual(&inputs, &duals);
        if residual > tol::DUALITY {
            return Err(Error::invariant(format!("duality residual {residual:.3e}")));
        }
        Ok(TomographicRep {
            inputs,
            duals,
            outputs,
        })
    }

    pub fn inputs(&self) -> &[ComplexMatrix] {
        &self.inputs
    }

    pub fn duals(&self) -> &[ComplexMatrix] {
        &self.duals
    }

    pub fn outputs(&self) -> &[ComplexMatrix] {
        &self.outputs
    }

    pub fn d_in(&self) -> usize {
        self.inputs[0].rows()
    }

    pub fn d_out(&self) -> usize {
        self.outputs[0].rows()
    }
}

/// Pairs `(L_α, R_α)` of the operator sum `Σ_α L_α ρ R_α†`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSumRep {
    left: Vec<ComplexMatrix>,
    right: Vec<ComplexMatrix>,
}

impl OperatorSumRep {
    pub fn new(left: Vec<ComplexMatrix>, right: Vec<ComplexMatrix>) -> Result<Self> {
        let first = left
            .first()
            .ok_or_else(|| Error::dims("operator sum needs at least one pair"))?;
        let shape = first.shape();
        if right.len() != left.len() {
            return Err(Error::dims(format!(
                "{} left operators but {} right operators",
                left.len(),
                right.len()
            )));
        }
        if left.iter().chain(&right).any(|m| m.shape() != shape) {
            return Err(Error::dims(
                "all operators in an operator sum must share one shape",
            ));
        }
        Ok(OperatorSumRep { left, right })
    }

    /// CP operator sum with `L_α = R_α = K_α`.
    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(ops.clone(), ops)
    }

    pub fn left(&self) -> &[ComplexMatrix] {
        &self.left
    }

    pub fn right(&self) -> &[ComplexMatrix] {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// True when every pair has `L_α = R_α` exactly.
    pub fn is_kraus(&self) -> bool {
        self.left == self.right
    }

    pub fn d_out(&self) -> usize {
        self.left[0].rows()
    }

    pub fn d_in(&self) -> usize {
        self.left[0].cols()
    }

    /// Operators `K_α` when the pairs are in Kraus form.
    pub fn kraus_ops(&self) -> Option<&[ComplexMatrix]> {
        self.is_kraus().then_some(&self.left[..])
    }
}

/// Matrix acting on row-major vectorized states, `vec(𝓔[ρ]) = A · vec(ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AForm {
    matrix: ComplexMatrix,
    d_out: usize,
    d_in: usize,
}

/// Choi matrix with leg order `out ⊗ in`.
#[derive(Clone, Debug, PartialEq)]
pub struct BForm {
    matrix: ComplexMatrix,
    d_out: usize,
    d_in: usize,
}

impl AForm {
    pub fn new(matrix: ComplexMatrix, d_out: usize, d_in: usize) -> Result<Self> {
        if d_out == 0 || d_in == 0 || matrix.shape() != (d_out * d_out, d_in * d_in) {
            return Err(Error::dims(format!(
                "A form of a map {d_in} -> {d_out} must be {}x{}, got {:?}",
                d_out * d_out,
                d_in * d_in,
                matrix.shape()
            )));
        }
        Ok(AForm {
            matrix,
            d_out,
            d_in,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn to_bform(&self) -> BForm {
        let m =
            reshuffle(&self.matrix, self.d_out, self.d_in).expect("shape checked on construction");
        BForm {
            matrix: m,
            d_out: self.d_out,
            d_in: self.d_in,
        }
    }
}

impl BForm {
    pub fn new(matrix: ComplexMatrix, d_out: usize, d_in: usize) -> Result<Self> {
        let n = d_out * d_in;
        if n == 0 || matrix.shape() != (n, n) {
            return Err(Error::dims(format!(
                "B form of a map {d_in} -> {d_out} must be {n}x{n}, got {:?}",
                matrix.shape()
            )));
        }
        Ok(BForm {
            matrix,
            d_out,
            d_in,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn to_aform(&self) -> AForm {
        let m =
            reshuffle(&self.matrix, self.d_out, self.d_in).expect("shape checked on construction");
        AForm {
            matrix: m,
            d_out: self.d_out,
            d_in: self.d_in,
        }
    }

    /// `E[ρ]_{ac} = Σ_{bd} B[(a b),(c d)] ρ_{bd}`, i.e. `tr_in[(1 ⊗ ρᵀ) B]`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (d_out, d_in) = (self.d_out, self.d_in);
        check_input(rho, d_in)?;
        let b = &self.matrix;
        Ok(ComplexMatrix::from_fn(d_out, d_out, |a, c| {
            let mut acc = ZERO;
            for bi in 0..d_in {
                for di in 0..d_in {
                    acc += b[(a * d_in + bi, c * d_in + di)] * rho[(bi, di)];
                }
            }
            acc
        }))
    }
}

fn check_input(rho: &ComplexMatrix, d_in: usize) -> Result<()> {
    if rho.shape() != (d_in, d_in) {
        return Err(Error::dims(format!(
            "map expects a {d_in}x{d_in} input, got {:?}",
            rho.shape()
        )));
    }
    Ok(())
}

/// The representation a [`QuantumMap`] is currently held in.
#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Tomographic(TomographicRep),
    OperatorSum(OperatorSumRep),
    AForm(AForm),
    BForm(BForm),
}

/// Names of the four representations, as used in the JSON envelope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepresentationKind {
    Tomographic,
    Kraus,
    AForm,
    BForm,
}

impl RepresentationKind {
    pub const ALL: [RepresentationKind; 4] = [
        RepresentationKind::Tomographic,
        RepresentationKind::Kraus,
        RepresentationKind::AForm,
        RepresentationKind::BForm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RepresentationKind::Tomographic => "tomographic",
            RepresentationKind::Kraus => "kraus",
            RepresentationKind::AForm => "aform",
            RepresentationKind::BForm => "bform",
        }
    }
}

impl fmt::Display for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepresentationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RepresentationKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown representation {s:?}")))
    }
}

/// A linear map `B(H_in) → B(H_out)` in one of its four representations.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumMap {
    d_in: usize,
    d_out: usize,
    repr: Representation,
}

impl From<TomographicRep> for QuantumMap {
    fn from(rep: TomographicRep) -> Self {
        QuantumMap {
            d_in: rep.d_in(),
            d_out: rep.d_out(),
            repr: Representation::Tomographic(rep),
        }
    }
}

impl From<OperatorSumRep> for QuantumMap {
    fn from(rep: OperatorSumRep) -> Self {
        QuantumMap {
            d_in: rep.d_in(),
            d_out: rep.d_out(),
            repr: Representation::OperatorSum(rep),
        }
    }
}

impl From<AForm> for QuantumMap {
    fn from(rep: AForm) -> Self {
        QuantumMap {
            d_in: rep.d_in,
            d_out: rep.d_out,
            repr: Representation::AForm(rep),
        }
    }
}

impl From<BForm> for QuantumMap {
    fn from(rep: BForm) -> Self {
        QuantumMap {
            d_in: rep.d_in,
            d_out: rep.d_out,
            repr: Representation::BForm(rep),
        }
    }
}

impl QuantumMap {
    /// CP map `ρ ↦ Σ K ρ K†`.
    pub fn from_kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Ok(OperatorSumRep::kraus(ops)?.into())
    }

    pub fn from_operator_sum(left: Vec<ComplexMatrix>, right: Vec<ComplexMatrix>) -> Result<Self> {
        Ok(OperatorSumRep::new(left, right)?.into())
    }

    pub fn from_aform(matrix: ComplexMatrix, d_out: usize, d_in: usize) -> Result<Self> {
        Ok(AForm::new(matrix, d_out, d_in)?.into())
    }

    pub fn from_bform(matrix: ComplexMatrix, d_out: usize, d_in: usize) -> Result<Self> {
        Ok(BForm::new(matrix, d_out, d_in)?.into())
    }

    pub fn identity(d: usize) -> Self {
        OperatorSumRep::kraus(vec![ComplexMatrix::identity(d)])
            .expect("identity is a valid operator")
            .into()
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn kind(&self) -> RepresentationKind {
        match self.repr {
            Representation::Tomographic(_) => RepresentationKind::Tomographic,
            Representation::OperatorSum(_) => RepresentationKind::Kraus,
            Representation::AForm(_) => RepresentationKind::AForm,
            Representation::BForm(_) => RepresentationKind::BForm,
        }
    }

    /// `𝓔[ρ]`, evaluated with the formula native to the stored representation.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_input(rho, self.d_in)?;
        match &self.repr {
            Representation::Tomographic(t) => {
                let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
                for (dual, output) in t.duals.iter().zip(&t.outputs) {
                    let coeff = dual.hs_inner(rho);
                    if coeff != ZERO {
                        out += &output.scale(coeff);
                    }
                }
                Ok(out)
            }
            Representation::OperatorSum(o) => {
                let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
                for (l, r) in o.left.iter().zip(&o.right) {
                    out += &l.matmul(rho).matmul(&r.adjoint());
                }
                Ok(out)
            }
            Representation::AForm(a) => unvec(&a.matrix.matmul(&vec(rho)), self.d_out, self.d_out),
            Representation::BForm(b) => b.apply(rho),
        }
    }

    /// B form computed from the stored representation.
    pub fn to_bform(&self) -> BForm {
        let matrix = match &self.repr {
            Representation::Tomographic(t) => {
                let mut acc = ComplexMatrix::zeros(self.d_out * self.d_in, self.d_out * self.d_in);
                for (dual, output) in t.duals.iter().zip(&t.outputs) {
                    acc += &tensor_product(output, &dual.conj());
                }
                acc
            }
            Representation::OperatorSum(o) => {
                let mut acc = ComplexMatrix::zeros(self.d_out * self.d_in, self.d_out * self.d_in);
                for (l, r) in o.left.iter().zip(&o.right) {
                    acc += &ComplexMatrix::outer(&vec(l), &vec(r));
                }
                acc
            }
            Representation::AForm(a) => return a.to_bform(),
            Representation::BForm(b) => return b.clone(),
        };
        BForm {
            matrix,
            d_out: self.d_out,
            d_in: self.d_in,
        }
    }

    /// B form built through the Choi–Jamiołkowski isomorphism,
    /// `Υ = Σ_{kl} 𝓔[|k⟩⟨l|] ⊗ |k⟩⟨l|`, using only [`QuantumMap::apply`].
    pub fn choi(&self) -> BForm {
        let (d_out, d_in) = (self.d_out, self.d_in);
        let mut acc = ComplexMatrix::zeros(d_out * d_in, d_out * d_in);
        for k in 0..d_in {
            for l in 0..d_in {
                let e = ComplexMatrix::unit(d_in, d_in, k, l);
                let image = self
                    .apply(&e)
                    .expect("input built with the declared dimension");
                acc += &tensor_product(&image, &e);
            }
        }
        BForm {
            matrix: acc,
            d_out,
            d_in,
        }
    }

    /// A form computed from the stored representation.
    pub fn to_aform(&self) -> AForm {
        let matrix = match &self.repr {
            Representation::Tomographic(t) => {
                let mut acc = ComplexMatrix::zeros(self.d_out * self.d_out, self.d_in * self.d_in);
                for (dual, output) in t.duals.iter().zip(&t.outputs) {
                    acc += &ComplexMatrix::outer(&vec(output), &vec(dual));
                }
                acc
            }
            Representation::OperatorSum(o) => {
                let mut acc = ComplexMatrix::zeros(self.d_out * self.d_out, self.d_in * self.d_in);
                for (l, r) in o.left.iter().zip(&o.right) {
                    acc += &tensor_product(l, &r.conj());
                }
                acc
            }
            Representation::AForm(a) => return a.clone(),
            Representation::BForm(b) => return b.to_aform(),
        };
        AForm {
            matrix,
            d_out: self.d_out,
            d_in: self.d_in,
        }
    }

    /// Operator-sum pairs obtained by decomposing the B form.
    ///
    /// A positive B form yields the canonical Kraus decomposition with
    /// `tr(K_α K_β†) = λ_α δ_αβ`. A Hermitian but indefinite B form yields
    /// signed pairs `R_α = ±L_α`. Any other B form is split through the
    /// eigenvectors `v_i` of `Υ†Υ` as `Υ = Σ_i (Υ v_i) v_i†`.
    pub fn to_operator_sum(&self) -> OperatorSumRep {
        if let Representation::OperatorSum(o) = &self.repr {
            return o.clone();
        }
        let (d_out, d_in) = (self.d_out, self.d_in);
        let b = self.to_bform().matrix;
        let zero_map = || {
            let z = ComplexMatrix::zeros(d_out, d_in);
            OperatorSumRep {
                left: vec![z.clone()],
                right: vec![z],
            }
        };
        let shape =
            |v: &ComplexMatrix| unvec(v, d_out, d_in).expect("column length is d_out * d_in");

        if b.hermiticity_defect() <= tol::HERMITIAN_INPUT {
            let e = herm_eig(&b).expect("Hermiticity checked above");
            let positive = e.min_eigenvalue() >= -tol::VERDICT;
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (k, &lambda) in e.eigenvalues.iter().enumerate() {
                if lambda.abs() <= tol::SUPPORT || (positive && lambda < 0.0) {
                    continue;
                }
                let l = shape(&e.eigenvectors.column_at(k)).scale_real(lambda.abs().sqrt());
                let r = if lambda < 0.0 { -&l } else { l.clone() };
                left.push(l);
                right.push(r);
            }
            if left.is_empty() {
                return zero_map();
            }
            return OperatorSumRep { left, right };
        }

        let gram = b.adjoint().matmul(&b);
        let e = herm_eig(&gram).expect("Υ†Υ is Hermitian");
        let scale = b.frobenius_norm();
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for k in 0..e.eigenvalues.len() {
            let v = e.eigenvectors.column_at(k);
            let w = b.matmul(&v);
            if w.frobenius_norm() <= 1e-14 * scale {
                continue;
            }
            left.push(shape(&w));
            right.push(shape(&v));
        }
        if left.is_empty() {
            return zero_map();
        }
        OperatorSumRep { left, right }
    }

    /// Outputs of the map on `basis` together with the dual set.
    pub fn to_tomographic(&self, basis: &[ComplexMatrix]) -> Result<TomographicRep> {
        if let Some(first) = basis.first() {
            if first.shape() != (self.d_in, self.d_in) {
                return Err(Error::dims(format!(
                    "basis lives on {:?}, map input is {}x{}",
                    first.shape(),
                    self.d_in,
                    self.d_in
                )));
            }
        }
        let outputs = basis
            .iter()
            .map(|rho| self.apply(rho))
            .collect::<Result<Vec<_>>>()?;
        TomographicRep::new(basis.to_vec(), outputs)
    }

    /// Re-expresses the map in the requested representation. The tomographic
    /// target uses `basis` when given and [`state_basis`] otherwise.
    pub fn convert(
        &self,
        target: RepresentationKind,
        basis: Option<&[ComplexMatrix]>,
    ) -> Result<QuantumMap> {
        Ok(match target {
            RepresentationKind::Tomographic => {
                let rep = match basis {
                    Some(b) => self.to_tomographic(b)?,
                    None => self.to_tomographic(&state_basis(self.d_in)?)?,
                };
                rep.into()
            }
            RepresentationKind::Kraus => self.to_operator_sum().into(),
            RepresentationKind::AForm => self.to_aform().into(),
            RepresentationKind::BForm => self.to_bform().into(),
        })
    }
}
