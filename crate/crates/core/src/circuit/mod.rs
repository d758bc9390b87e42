//! Gate-level circuit IR and an exact statevector simulator.

mod builders;
pub mod qasm;

use std::fmt;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::linalg::{self, gates, Amplitude, StateVector, UnitaryMatrix};

pub use builders::{
    build, build_naive, build_optimized, build_parallel, build_single, ry_parameter, BuildSpec,
    NaiveVariant, Variant, NAIVE_CONTROL_HIGH, NAIVE_CONTROL_LOW, NAIVE_TARGET,
};

/// `circuit_unitary` materializes a `2^n x 2^n` matrix; keep `n` small.
pub const MAX_UNITARY_QUBITS: usize = 12;
/// Statevector simulation limit.
pub const MAX_SIM_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    /// Square root of X.
    SX,
    Rz(f64),
    Ry(f64),
    U1(f64),
    U2(f64, f64),
    U3(f64, f64, f64),
    /// Relative-phase Toffoli on `[control_a, control_b, target]`.
    Margolus,
}

impl GateKind {
    pub fn base_name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::SX => "sx",
            GateKind::Rz(_) => "rz",
            GateKind::Ry(_) => "ry",
            GateKind::U1(_) => "u1",
            GateKind::U2(..) => "u2",
            GateKind::U3(..) => "u3",
            GateKind::Margolus => "margolus",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Rz(a) | GateKind::Ry(a) | GateKind::U1(a) => vec![a],
            GateKind::U2(a, b) => vec![a, b],
            GateKind::U3(a, b, c) => vec![a, b, c],
            _ => Vec::new(),
        }
    }

    /// Number of target qubits the kind acts on.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Margolus => 3,
            _ => 1,
        }
    }

    /// The 2x2 matrix of a single-target kind.
    pub fn matrix(&self) -> Option<gates::Mat2> {
        Some(match *self {
            GateKind::H => gates::H,
            GateKind::X => gates::X,
            GateKind::SX => gates::SX,
            GateKind::Rz(t) => gates::rz(t),
            GateKind::Ry(t) => gates::ry(t),
            GateKind::U1(l) => gates::u1(l),
            GateKind::U2(p, l) => gates::u2(p, l),
            GateKind::U3(t, p, l) => gates::u3(t, p, l),
            GateKind::Margolus => return None,
        })
    }
}

/// Most qubit indices a gate may touch, controls included.
pub const MAX_GATE_QUBITS: usize = 4;

/// Qubit indices stored inline.
pub type Qubits = ArrayVec<usize, MAX_GATE_QUBITS>;

fn qubits<const N: usize>(qs: [usize; N]) -> Qubits {
    qs.into_iter().collect()
}

/// One gate application. `controls` must all read `|1>` for the gate to act.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Qubits,
    pub controls: Qubits,
}

impl Gate {
    pub fn new(
        kind: GateKind,
        targets: impl AsRef<[usize]>,
        controls: impl AsRef<[usize]>,
    ) -> Result<Self> {
        let (targets, controls) = (targets.as_ref(), controls.as_ref());
        if targets.len() + controls.len() > MAX_GATE_QUBITS {
            return Err(Error::GateTooWide {
                limit: MAX_GATE_QUBITS,
            });
        }
        let g = Self {
            kind,
            targets: targets.iter().copied().collect(),
            controls: controls.iter().copied().collect(),
        };
        g.validate()?;
        Ok(g)
    }

    fn single(kind: GateKind, q: usize) -> Self {
        Self {
            kind,
            targets: qubits([q]),
            controls: Qubits::new(),
        }
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }

    pub fn sx(q: usize) -> Self {
        Self::single(GateKind::SX, q)
    }

    pub fn rz(theta: f64, q: usize) -> Self {
        Self::single(GateKind::Rz(theta), q)
    }

    pub fn ry(theta: f64, q: usize) -> Self {
        Self::single(GateKind::Ry(theta), q)
    }

    pub fn u1(lambda: f64, q: usize) -> Self {
        Self::single(GateKind::U1(lambda), q)
    }

    pub fn u2(phi: f64, lambda: f64, q: usize) -> Self {
        Self::single(GateKind::U2(phi, lambda), q)
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::single(GateKind::U3(theta, phi, lambda), q)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::X,
            targets: qubits([target]),
            controls: qubits([control]),
        }
    }

    pub fn ccx(c1: usize, c2: usize, target: usize) -> Self {
        Self {
            kind: GateKind::X,
            targets: qubits([target]),
            controls: qubits([c1, c2]),
        }
    }

    pub fn cry(theta: f64, control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Ry(theta),
            targets: qubits([target]),
            controls: qubits([control]),
        }
    }

    pub fn ccry(theta: f64, c1: usize, c2: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Ry(theta),
            targets: qubits([target]),
            controls: qubits([c1, c2]),
        }
    }

    pub fn margolus(c1: usize, c2: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Margolus,
            targets: qubits([c1, c2, target]),
            controls: Qubits::new(),
        }
    }

    /// Arity, finiteness and disjointness checks.
    pub fn validate(&self) -> Result<()> {
        let name = self.kind.base_name();
        if self.num_qubits() > MAX_GATE_QUBITS {
            return Err(Error::GateTooWide {
                limit: MAX_GATE_QUBITS,
            });
        }
        if self.targets.len() != self.kind.arity() {
            return Err(Error::GateArity {
                gate: name,
                expected: self.kind.arity(),
                actual: self.targets.len(),
            });
        }
        let finite = match self.kind {
            GateKind::Rz(a) | GateKind::Ry(a) | GateKind::U1(a) => a.is_finite(),
            GateKind::U2(a, b) => a.is_finite() && b.is_finite(),
            GateKind::U3(a, b, c) => a.is_finite() && b.is_finite() && c.is_finite(),
            _ => true,
        };
        if !finite {
            return Err(Error::NonFiniteParameter(name));
        }
        let mut all = [0usize; 2 * MAX_GATE_QUBITS];
        let n = self.num_qubits();
        all[..self.controls.len()].copy_from_slice(&self.controls);
        all[self.controls.len()..n].copy_from_slice(&self.targets);
        for i in 1..n {
            if all[..i].contains(&all[i]) {
                return Err(Error::OverlappingQubits(all[i]));
            }
        }
        Ok(())
    }

    /// Controls followed by targets.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(&self.targets).copied()
    }

    pub fn num_qubits(&self) -> usize {
        self.controls.len() + self.targets.len()
    }

    /// Conventional lowercase name: `x`, `cx`, `ccx`, `ry`, `cry`, `ccry`, ...
    pub fn name(&self) -> String {
        format!(
            "{}{}",
            "c".repeat(self.controls.len()),
            self.kind.base_name()
        )
    }

    pub fn is_controlled(&self) -> bool {
        !self.controls.is_empty()
    }
}

/// The relative-phase Toffoli as a 3-CX sequence on `(a, b, t)`.
///
/// Acts as `Y` on the target when both controls are set and as `Z` when
/// only `a` is set; it equals CCX up to that relative phase.
pub fn margolus_decomposition(a: usize, b: usize, t: usize) -> [Gate; 9] {
    use std::f64::consts::{FRAC_PI_4, PI};
    [
        Gate::u2(0.0, PI, t),
        Gate::u1(FRAC_PI_4, t),
        Gate::cx(b, t),
        Gate::u1(-FRAC_PI_4, t),
        Gate::cx(a, t),
        Gate::u1(FRAC_PI_4, t),
        Gate::cx(b, t),
        Gate::u1(-FRAC_PI_4, t),
        Gate::u2(0.0, PI, t),
    ]
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        let params = self.kind.params();
        if !params.is_empty() {
            let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", ps.join(","))?;
        }
        let qs: Vec<String> = self.qubits().map(|q| format!("q{q}")).collect();
        write!(f, " {}", qs.join(","))
    }
}

/// Ordered gate list over `n_qubits`, measured once at the end.
///
/// `measured[j]` is the qubit read into classical bit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    measured: Vec<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "a circuit needs at least one qubit");
        Self {
            n_qubits,
            gates: Vec::new(),
            measured: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn check_range(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate()?;
        if let Some(&q) = gate
            .controls
            .iter()
            .chain(&gate.targets)
            .find(|&&q| q >= self.n_qubits)
        {
            self.check_range(q)?;
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<&mut Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    /// Measures `qubit` into the next classical bit.
    pub fn measure(&mut self, qubit: usize) -> Result<&mut Self> {
        self.check_range(qubit)?;
        if self.measured.contains(&qubit) {
            return Err(Error::OverlappingQubits(qubit));
        }
        self.measured.push(qubit);
        Ok(self)
    }

    /// Measures every qubit, qubit `i` into classical bit `i`.
    pub fn measure_all(&mut self) -> &mut Self {
        self.measured = (0..self.n_qubits).collect();
        self
    }

    /// Same register and measurements, different gates.
    pub fn with_gates(&self, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self {
            n_qubits: self.n_qubits,
            gates: Vec::with_capacity(gates.len()),
            measured: self.measured.clone(),
        };
        c.extend(gates)?;
        Ok(c)
    }

    /// Widens the register, keeping gates and measurements.
    pub fn widened(&self, n_qubits: usize) -> Self {
        assert!(n_qubits >= self.n_qubits);
        Self {
            n_qubits,
            ..self.clone()
        }
    }

    /// Runs the gates on `|0...0>`.
    pub fn final_state(&self) -> Result<StateVector> {
        guard(self.n_qubits, MAX_SIM_QUBITS)?;
        let mut state = StateVector::zero_state(self.n_qubits);
        for g in &self.gates {
            apply_in_place(&mut state, g);
        }
        Ok(state)
    }
}

fn guard(n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits > limit {
        return Err(Error::TooManyQubits { n_qubits, limit });
    }
    Ok(())
}

/// Applies a validated, in-range gate.
pub(crate) fn apply_in_place(state: &mut StateVector, gate: &Gate) {
    let control_mask: usize = gate.controls.iter().map(|&c| 1usize << c).sum();
    match gate.kind.matrix() {
        Some(m) => {
            linalg::apply_matrix_in_place(state.amplitudes_mut(), &m, &gate.targets, control_mask)
        }
        None => {
            let [a, b, t] = [gate.targets[0], gate.targets[1], gate.targets[2]];
            for mut g in margolus_decomposition(a, b, t) {
                for &c in &gate.controls {
                    g.controls.push(c);
                }
                apply_in_place(state, &g);
            }
        }
    }
}

/// Applies `gate` to `state`; the gate acts only where every control is `|1>`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate()?;
    let dim = state.dim();
    if !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two(),
            actual: dim,
        });
    }
    let n_qubits = dim.trailing_zeros() as usize;
    if let Some(q) = gate.qubits().find(|&q| q >= n_qubits) {
        return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
    }
    let mut out = state.clone();
    apply_in_place(&mut out, gate);
    Ok(out)
}

/// Product of the gate unitaries in application order.
pub fn circuit_unitary(c: &Circuit) -> Result<UnitaryMatrix> {
    guard(c.n_qubits, MAX_UNITARY_QUBITS)?;
    let dim = 1usize << c.n_qubits;
    let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut v = StateVector::basis(dim, col);
        for g in &c.gates {
            apply_in_place(&mut v, g);
        }
        for (row, a) in v.amplitudes().iter().enumerate() {
            entries[row * dim + col] = *a;
        }
    }
    Ok(UnitaryMatrix::from_entries_unchecked(dim, entries))
}

/// Exact outcome distribution over the measured classical bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n_bits: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub(crate) fn from_state(state: &StateVector, measured: &[usize]) -> Self {
        let mut probs = vec![0.0; 1 << measured.len()];
        for (idx, p) in state.probabilities().into_iter().enumerate() {
            probs[outcome_of(idx, measured)] += p;
        }
        Self {
            n_bits: measured.len(),
            probs,
        }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// Indexed by outcome; bit `j` of the index is classical bit `j`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    /// Probability of reading all zeros, the acceptance probability.
    pub fn all_zeros(&self) -> f64 {
        self.probs[0]
    }

    /// Outcome label with classical bit `n-1` first, as hardware reports it.
    pub fn bitstring(&self, outcome: usize) -> String {
        bitstring(outcome, self.n_bits)
    }
}

/// Classical outcome for basis index `idx` given the measured qubits.
pub(crate) fn outcome_of(idx: usize, measured: &[usize]) -> usize {
    measured
        .iter()
        .enumerate()
        .map(|(bit, &q)| (idx >> q & 1) << bit)
        .sum()
}

pub fn bitstring(outcome: usize, n_bits: usize) -> String {
    (0..n_bits)
        .rev()
        .map(|b| if outcome >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Born probabilities of the measured bits at the end of `c`.
pub fn simulate(c: &Circuit) -> Result<Distribution> {
    let state = c.final_state()?;
    Ok(Distribution::from_state(&state, &c.measured))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::*;

    #[test]
    fn hadamard_on_zero() {
        let out = apply_gate(&StateVector::zero_state(1), &Gate::h(0)).unwrap();
        for a in out.amplitudes() {
            assert!((a - Amplitude::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn doubly_controlled_ry() {
        let theta = 0.9;
        let g = Gate::ccry(theta, 2, 1, 0);
        let out = apply_gate(&StateVector::basis(8, 0b110), &g).unwrap();
        let (s, c) = (theta / 2.0).sin_cos();
        assert!((out.amplitudes()[0b110] - Amplitude::new(c, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[0b111] - Amplitude::new(s, 0.0)).norm() < 1e-15);

        // q2=0, q1=1: controls not satisfied
        let start = StateVector::basis(8, 0b010);
        assert_eq!(apply_gate(&start, &g).unwrap(), start);
    }

    #[test]
    fn gate_errors() {
        let s = StateVector::zero_state(2);
        assert_eq!(
            apply_gate(&s, &Gate::cx(1, 1)).unwrap_err(),
            Error::OverlappingQubits(1)
        );
        assert!(matches!(
            apply_gate(&s, &Gate::h(2)).unwrap_err(),
            Error::QubitOutOfRange { qubit: 2, .. }
        ));
        assert!(matches!(
            Gate::new(GateKind::Margolus, vec![0], vec![]),
            Err(Error::GateArity { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::Ry(f64::NAN), vec![0], vec![]),
            Err(Error::NonFiniteParameter("ry"))
        ));
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::cx(0, 3)).is_err());
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = circuit_unitary(&Circuit::new(2)).unwrap();
        assert_eq!(u, UnitaryMatrix::identity(4));
    }

    #[test]
    fn x_embedding() {
        let mut c = Circuit::new(2);
        c.push(Gate::x(0)).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let want = linalg::kron(&UnitaryMatrix::identity(2), &gates::to_unitary(&gates::X));
        assert!(linalg::frobenius_distance(&u, &want) < 1e-15);
    }

    #[test]
    fn unitary_guard() {
        let c = Circuit::new(MAX_UNITARY_QUBITS + 1);
        assert_eq!(
            circuit_unitary(&c).unwrap_err(),
            Error::TooManyQubits {
                n_qubits: 13,
                limit: 12
            }
        );
        assert!(simulate(&Circuit::new(MAX_SIM_QUBITS + 1)).is_err());
    }

    #[test]
    fn simulate_hadamard() {
        let mut c = Circuit::new(1);
        c.push(Gate::h(0)).unwrap().measure_all();
        let d = simulate(&c).unwrap();
        assert!((d.probability(0) - 0.5).abs() < 1e-15);
        assert!((d.probability(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_measurement_marginalizes() {
        let mut c = Circuit::new(3);
        c.push(Gate::x(2)).unwrap().push(Gate::h(0)).unwrap();
        c.measure(2).unwrap();
        let d = simulate(&c).unwrap();
        assert_eq!(d.n_bits(), 1);
        assert!((d.probability(1) - 1.0).abs() < 1e-15);
        assert_eq!(d.bitstring(1), "1");
        assert_eq!(bitstring(0b011, 3), "011");
    }

    #[test]
    fn margolus_matrix() {
        let mut c = Circuit::new(3);
        c.push(Gate::margolus(2, 1, 0)).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let i = Amplitude::new(0.0, 1.0);
        // identity where q2 = 0
        for idx in [0b000, 0b001, 0b010, 0b011] {
            assert!((u.get(idx, idx) - 1.0).norm() < 1e-12);
        }
        // q2=1,q1=0: Z on q0
        assert!((u.get(0b100, 0b100) - 1.0).norm() < 1e-12);
        assert!((u.get(0b101, 0b101) + 1.0).norm() < 1e-12);
        // q2=q1=1: Y on q0
        assert!((u.get(0b110, 0b111) + i).norm() < 1e-12);
        assert!((u.get(0b111, 0b110) - i).norm() < 1e-12);
        assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn names() {
        assert_eq!(Gate::ccx(0, 1, 2).name(), "ccx");
        assert_eq!(Gate::cry(0.1, 0, 1).name(), "cry");
        assert_eq!(Gate::margolus(0, 1, 2).name(), "margolus");
        assert_eq!(Gate::ry(0.5, 3).to_string(), "ry(0.5) q3");
    }
}
