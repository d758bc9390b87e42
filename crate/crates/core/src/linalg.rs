//! Minimal dense complex linear algebra.
//!
//! Qubit `i` of a register is bit `i` of the basis-state index, so `|q2 q1 q0>`
//! read as a binary number is the index into a [`StateVector`].

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Tolerance for the unit-norm and unitarity invariants.
pub const INVARIANT_TOL: f64 = 1e-9;

const ZERO: Amplitude = Amplitude::new(0.0, 0.0);
const ONE: Amplitude = Amplitude::new(1.0, 0.0);

/// A normalized vector of amplitudes.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, checking finiteness and unit norm.
    pub fn new(amps: Vec<Amplitude>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFiniteParameter("state vector"));
        }
        let state = Self { amps };
        let dev = (state.norm_sqr() - 1.0).abs();
        if dev > INVARIANT_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(state)
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Amplitude::new(v, 0.0)).collect())
    }

    /// The computational basis vector `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range {dim}");
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Self {
        Self::basis(1 << n_qubits, 0)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probabilities `|a_j|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amps.iter()).finish()
    }
}

/// Dense square complex matrix, row-major, satisfying `U U† = I`.
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl UnitaryMatrix {
    /// Checked constructor; rejects non-square data and non-unitary matrices.
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFiniteParameter("matrix"));
        }
        let m = Self { dim, entries };
        let deviation = m.unitarity_deviation();
        if deviation > INVARIANT_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| Amplitude::new(v, 0.0)))
            .collect();
        Self::new(dim, entries)
    }

    /// Skips the unitarity check. Callers must construct from known unitaries.
    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<Amplitude>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        Self { dim: n, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    entries[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..exp {
            acc = acc.matmul(self).expect("same dimension");
        }
        acc
    }

    /// Frobenius norm of `U U† - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.matmul(&self.adjoint()).expect("square");
        frobenius_distance(&prod, &Self::identity(self.dim))
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim + other.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..self.dim {
            for c in 0..self.dim {
                entries[r * n + c] = self.get(r, c);
            }
        }
        for r in 0..other.dim {
            for c in 0..other.dim {
                entries[(r + self.dim) * n + c + self.dim] = other.get(r, c);
            }
        }
        Self { dim: n, entries }
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "UnitaryMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let a = self.get(r, c);
                    format!("{:+.4}{:+.4}i", a.re, a.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;

    fn mul(self, rhs: Self) -> UnitaryMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

/// `U · v`.
pub fn mat_vec(u: &UnitaryMatrix, v: &StateVector) -> Result<StateVector> {
    if u.dim != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim,
            actual: v.dim(),
        });
    }
    let n = u.dim;
    let amps = (0..n)
        .map(|r| {
            u.entries[r * n..(r + 1) * n]
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    Ok(StateVector { amps })
}

/// Kronecker product `A ⊗ B`; `A` acts on the more significant index bits.
pub fn kron(a: &UnitaryMatrix, b: &UnitaryMatrix) -> UnitaryMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut entries = vec![ZERO; n * n];
    for ar in 0..na {
        for ac in 0..na {
            let x = a.get(ar, ac);
            for br in 0..nb {
                for bc in 0..nb {
                    entries[(ar * nb + br) * n + ac * nb + bc] = x * b.get(br, bc);
                }
            }
        }
    }
    UnitaryMatrix { dim: n, entries }
}

pub fn frobenius_distance(a: &UnitaryMatrix, b: &UnitaryMatrix) -> f64 {
    assert_eq!(a.dim, b.dim, "dimension mismatch");
    a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Deviation of `A† B` from `c·I` for the best unit-modulus `c`.
///
/// Returns the largest of: any off-diagonal modulus, any diagonal entry's
/// distance from the first diagonal entry, and `||c| - 1|`. Zero means the
/// matrices agree up to a global phase.
pub fn global_phase_deviation(a: &UnitaryMatrix, b: &UnitaryMatrix) -> f64 {
    assert_eq!(a.dim, b.dim, "dimension mismatch");
    let prod = a.adjoint().matmul(b).expect("same dimension");
    let c = prod.get(0, 0);
    let mut dev = (c.norm() - 1.0).abs();
    for r in 0..prod.dim {
        for col in 0..prod.dim {
            let x = prod.get(r, col);
            let d = if r == col { (x - c).norm() } else { x.norm() };
            dev = dev.max(d);
        }
    }
    dev
}

pub fn equal_up_to_global_phase(a: &UnitaryMatrix, b: &UnitaryMatrix, tol: f64) -> bool {
    global_phase_deviation(a, b) < tol
}

/// Applies a `2^k x 2^k` matrix to `targets` (bit `i` of the local index is
/// `targets[i]`) on every basis block whose `control_mask` bits are all set.
pub(crate) fn apply_matrix_in_place(
    amps: &mut [Amplitude],
    matrix: &[Amplitude],
    targets: &[usize],
    control_mask: usize,
) {
    if let [t] = *targets {
        let bit = 1usize << t;
        let [m00, m01, m10, m11] = [matrix[0], matrix[1], matrix[2], matrix[3]];
        for base in 0..amps.len() {
            if base & bit != 0 || base & control_mask != control_mask {
                continue;
            }
            let (a, b) = (amps[base], amps[base | bit]);
            amps[base] = m00 * a + m01 * b;
            amps[base | bit] = m10 * a + m11 * b;
        }
        return;
    }

    let k = targets.len();
    let local = 1usize << k;
    debug_assert_eq!(matrix.len(), local * local);
    let target_mask: usize = targets.iter().map(|&t| 1usize << t).sum();

    // offsets[j] = global index offset for local basis index j
    let offsets: Vec<usize> = (0..local)
        .map(|j| {
            targets
                .iter()
                .enumerate()
                .filter(|(bit, _)| j >> bit & 1 == 1)
                .map(|(_, &t)| 1usize << t)
                .sum()
        })
        .collect();

    let mut scratch = vec![ZERO; local];
    for base in 0..amps.len() {
        if base & target_mask != 0 || base & control_mask != control_mask {
            continue;
        }
        for (j, off) in offsets.iter().enumerate() {
            scratch[j] = amps[base + off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &matrix[r * local..(r + 1) * local];
            amps[base + off] = row.iter().zip(&scratch).map(|(m, s)| m * s).sum();
        }
    }
}

/// Fixed single-qubit matrices, row-major `[m00, m01, m10, m11]`.
pub mod gates {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::{Amplitude, UnitaryMatrix};

    pub type Mat2 = [Amplitude; 4];

    const fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    pub const I: Mat2 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    pub const X: Mat2 = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
    pub const Y: Mat2 = [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
    pub const Z: Mat2 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
    pub const H: Mat2 = [
        c(FRAC_1_SQRT_2, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
        c(-FRAC_1_SQRT_2, 0.0),
    ];
    /// Square root of X: `((1+i)/2, (1-i)/2; (1-i)/2, (1+i)/2)`.
    pub const SX: Mat2 = [c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)];

    /// `Ry(θ) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn ry(theta: f64) -> Mat2 {
        let (s, co) = (theta / 2.0).sin_cos();
        [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
    }

    /// `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})`.
    pub fn rz(theta: f64) -> Mat2 {
        let h = theta / 2.0;
        [
            Amplitude::from_polar(1.0, -h),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Amplitude::from_polar(1.0, h),
        ]
    }

    pub fn u1(lambda: f64) -> Mat2 {
        [
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Amplitude::from_polar(1.0, lambda),
        ]
    }

    pub fn u2(phi: f64, lambda: f64) -> Mat2 {
        u3(std::f64::consts::FRAC_PI_2, phi, lambda)
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
        let (s, co) = (theta / 2.0).sin_cos();
        [
            c(co, 0.0),
            -Amplitude::from_polar(s, lambda),
            Amplitude::from_polar(s, phi),
            Amplitude::from_polar(co, phi + lambda),
        ]
    }

    /// Real counter-clockwise rotation of the plane by `angle`.
    pub fn rotation(angle: f64) -> Mat2 {
        let (s, co) = angle.sin_cos();
        [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
    }

    pub fn to_unitary(m: &Mat2) -> UnitaryMatrix {
        UnitaryMatrix::from_entries_unchecked(2, m.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::gates::*;
    use super::*;

    fn close(a: Amplitude, re: f64, im: f64, tol: f64) -> bool {
        (a - Amplitude::new(re, im)).norm() < tol
    }

    #[test]
    fn identity_mat_vec() {
        let v = StateVector::basis(2, 0);
        let out = mat_vec(&UnitaryMatrix::identity(2), &v).unwrap();
        assert_eq!(out, v);
    }

    #[test]
    fn quarter_turn() {
        let r = to_unitary(&rotation(2.0 * PI / 4.0));
        let out = mat_vec(&r, &StateVector::basis(2, 0)).unwrap();
        assert!(close(out.amplitudes()[0], 0.0, 0.0, 1e-12));
        assert!(close(out.amplitudes()[1], 1.0, 0.0, 1e-12));
    }

    #[test]
    fn seventh_turn() {
        let r = to_unitary(&rotation(2.0 * PI / 7.0));
        let out = mat_vec(&r, &StateVector::basis(2, 0)).unwrap();
        assert!(close(out.amplitudes()[0], 0.62349, 0.0, 1e-5));
        assert!(close(out.amplitudes()[1], 0.78183, 0.0, 1e-5));
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let err = mat_vec(&UnitaryMatrix::identity(4), &StateVector::basis(2, 0)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 4,
                actual: 2
            }
        );
    }

    #[test]
    fn kron_examples() {
        let i2 = UnitaryMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), UnitaryMatrix::identity(4));

        // X on the high bit (q1) maps |00> to |10>
        let xi = kron(&to_unitary(&X), &i2);
        let out = mat_vec(&xi, &StateVector::basis(4, 0)).unwrap();
        assert!(out.max_deviation(&StateVector::basis(4, 0b10)) < 1e-15);

        let hh = kron(&to_unitary(&H), &to_unitary(&H));
        let out = mat_vec(&hh, &StateVector::basis(4, 0)).unwrap();
        for a in out.amplitudes() {
            assert!(close(*a, 0.5, 0.0, 1e-12));
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let err = UnitaryMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
    }

    #[test]
    fn rejects_unnormalized_state() {
        assert!(StateVector::from_real(&[1.0, 1.0]).is_err());
        assert!(StateVector::from_real(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn named_gates_are_unitary() {
        for m in [
            I,
            X,
            Y,
            Z,
            H,
            SX,
            ry(0.3),
            rz(-1.2),
            u1(0.4),
            u2(0.1, 0.2),
            u3(1.0, 2.0, 3.0),
        ] {
            assert!(to_unitary(&m).unitarity_deviation() < 1e-12);
        }
        let sx = to_unitary(&SX);
        assert!(frobenius_distance(&(&sx * &sx), &to_unitary(&X)) < 1e-12);
    }

    #[test]
    fn phase_comparison() {
        let h = to_unitary(&H);
        let mut shifted = h.clone();
        for e in shifted.entries.iter_mut() {
            *e *= Amplitude::from_polar(1.0, 0.7);
        }
        assert!(equal_up_to_global_phase(&h, &shifted, 1e-12));
        assert!(!equal_up_to_global_phase(&h, &to_unitary(&X), 1e-3));
    }

    #[test]
    fn direct_sum_blocks() {
        let x = to_unitary(&X);
        let s = x.direct_sum(&UnitaryMatrix::identity(1));
        assert_eq!(s.dim(), 3);
        assert!(s.unitarity_deviation() < 1e-15);
        assert_eq!(s.get(2, 2), Amplitude::new(1.0, 0.0));
        assert_eq!(s.get(0, 1), Amplitude::new(1.0, 0.0));
    }
}
