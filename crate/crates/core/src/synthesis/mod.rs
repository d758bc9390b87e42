//! Controlled-rotation decompositions, basis transpilation, gate counting
//! and Ry-run fusion.

mod count;
mod fuse;
mod transpile;

use std::fmt;
use std::str::FromStr;

use crate::circuit::{circuit_unitary, Circuit, Gate, GateKind};
use crate::error::{Error, Result};

pub use count::{count_gates, GateCount, COUNT_CSV_HEADER};
pub use fuse::{fuse_ry_runs, fused_ry_run};
pub use transpile::{cancel_adjacent_x, transpile, BasisSet};

/// How a doubly controlled `Ry` is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecompositionStyle {
    /// Toffoli onto a fresh ancilla, singly controlled Ry, Toffoli back.
    AncillaToffoli,
    /// `Ry(θ/2)`, CCX, `Ry(-θ/2)`, CCX on the target; exact.
    Barenco,
    /// Barenco with each CCX replaced by the Margolus gate. Fires on the
    /// control pattern with the second control flipped.
    Margolus,
}

impl DecompositionStyle {
    pub const ALL: [DecompositionStyle; 3] = [
        DecompositionStyle::AncillaToffoli,
        DecompositionStyle::Barenco,
        DecompositionStyle::Margolus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DecompositionStyle::AncillaToffoli => "ancilla_toffoli",
            DecompositionStyle::Barenco => "barenco",
            DecompositionStyle::Margolus => "margolus",
        }
    }

    /// Extra qubits the style needs.
    pub fn ancillas(self) -> usize {
        match self {
            DecompositionStyle::AncillaToffoli => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for DecompositionStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecompositionStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecompositionStyle::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "decomposition style",
                value: s.to_string(),
            })
    }
}

/// Gate sequence for `Ry(θ)` on `target` controlled by `c1` and `c2`.
///
/// `ancilla` is required for [`DecompositionStyle::AncillaToffoli`] and must
/// start (and is returned) in `|0>`.
pub fn ccry_gates(
    theta: f64,
    c1: usize,
    c2: usize,
    target: usize,
    style: DecompositionStyle,
    ancilla: Option<usize>,
) -> Vec<Gate> {
    match style {
        DecompositionStyle::AncillaToffoli => {
            let a = ancilla.expect("ancilla_toffoli needs an ancilla qubit");
            vec![
                Gate::ccx(c1, c2, a),
                Gate::cry(theta, a, target),
                Gate::ccx(c1, c2, a),
            ]
        }
        DecompositionStyle::Barenco => vec![
            Gate::ry(theta / 2.0, target),
            Gate::ccx(c1, c2, target),
            Gate::ry(-theta / 2.0, target),
            Gate::ccx(c1, c2, target),
        ],
        DecompositionStyle::Margolus => vec![
            Gate::ry(theta / 2.0, target),
            Gate::margolus(c1, c2, target),
            Gate::ry(-theta / 2.0, target),
            Gate::margolus(c1, c2, target),
        ],
    }
}

/// Stand-alone fragment: controls q2, q1, target q0, ancilla q3 if needed.
pub fn expand_ccry(theta: f64, style: DecompositionStyle) -> Result<Circuit> {
    if !theta.is_finite() {
        return Err(Error::NonFiniteParameter("ccry"));
    }
    let ancilla = (style.ancillas() > 0).then_some(3);
    let mut c = Circuit::new(3 + style.ancillas());
    c.extend(ccry_gates(theta, 2, 1, 0, style, ancilla))?;
    Ok(c)
}

/// Frobenius distance between the `style` fragment and a direct `CC-Ry(θ)`,
/// restricted to the ancilla-`|0>` block when the style uses one.
pub fn ccry_deviation(theta: f64, style: DecompositionStyle) -> Result<f64> {
    let frag = circuit_unitary(&expand_ccry(theta, style)?)?;
    let mut direct = Circuit::new(3);
    direct.push(Gate::ccry(theta, 2, 1, 0))?;
    let want = circuit_unitary(&direct)?;
    let sum: f64 = (0..8)
        .flat_map(|i| (0..8).map(move |j| (i, j)))
        .map(|(i, j)| (frag.get(i, j) - want.get(i, j)).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// Rewrites every doubly controlled `Ry` with `style`.
///
/// The ancilla style appends one qubit, shared by all rotations, which is
/// also measured (as the highest classical bit) when the input measures
/// anything.
pub fn lower_controlled(c: &Circuit, style: DecompositionStyle) -> Result<Circuit> {
    let needs = c
        .gates()
        .iter()
        .any(|g| matches!(g.kind, GateKind::Ry(_)) && g.controls.len() == 2);
    let ancilla = (needs && style.ancillas() > 0).then_some(c.n_qubits());

    let mut gates = Vec::with_capacity(c.len());
    for g in c.gates() {
        match (g.kind, &*g.controls) {
            (GateKind::Ry(theta), &[c1, c2]) => {
                gates.extend(ccry_gates(theta, c1, c2, g.targets[0], style, ancilla))
            }
            _ => gates.push(g.clone()),
        }
    }
    match ancilla {
        Some(a) => {
            let mut wide = c.widened(a + 1).with_gates(gates)?;
            if !c.measured().is_empty() {
                wide.measure(a)?;
            }
            Ok(wide)
        }
        None => c.with_gates(gates),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::circuit::circuit_unitary;
    use crate::linalg::{frobenius_distance, UnitaryMatrix};

    #[test]
    fn zero_angle_is_identity() {
        let u = circuit_unitary(&expand_ccry(0.0, DecompositionStyle::Barenco).unwrap()).unwrap();
        assert!(frobenius_distance(&u, &UnitaryMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn exact_styles() {
        for theta in [0.4, -2.0, 5.5] {
            assert!(ccry_deviation(theta, DecompositionStyle::Barenco).unwrap() < 1e-12);
            assert!(ccry_deviation(theta, DecompositionStyle::AncillaToffoli).unwrap() < 1e-12);
            assert!(ccry_deviation(theta, DecompositionStyle::Margolus).unwrap() > 1e-3);
        }
    }

    #[test]
    fn ancilla_fragment_shape() {
        let c = expand_ccry(PI / 3.0, DecompositionStyle::AncillaToffoli).unwrap();
        assert_eq!(c.n_qubits(), 4);
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn style_names() {
        for s in DecompositionStyle::ALL {
            assert_eq!(s.as_str().parse::<DecompositionStyle>().unwrap(), s);
        }
        assert!(matches!(
            "gray_code".parse::<DecompositionStyle>(),
            Err(Error::UnknownName { .. })
        ));
        assert!(expand_ccry(f64::INFINITY, DecompositionStyle::Barenco).is_err());
    }

    #[test]
    fn lowering_adds_one_shared_ancilla() {
        let mut c = Circuit::new(3);
        c.extend([Gate::ccry(0.3, 2, 1, 0), Gate::ccry(0.5, 2, 1, 0)])
            .unwrap()
            .measure_all();
        let low = lower_controlled(&c, DecompositionStyle::AncillaToffoli).unwrap();
        assert_eq!(low.n_qubits(), 4);
        assert_eq!(low.measured(), [0, 1, 2, 3]);
        assert_eq!(low.len(), 6);

        let low = lower_controlled(&c, DecompositionStyle::Barenco).unwrap();
        assert_eq!(low.n_qubits(), 3);
        assert_eq!(low.len(), 8);
    }
}
