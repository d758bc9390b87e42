use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::circuit::{margolus_decomposition, Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// Hardware-native gate sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisSet {
    /// `{U1, U2, U3, CX}`.
    Legacy,
    /// `{CX, I, Rz, SX, X}`.
    Modern,
}

impl BasisSet {
    pub const ALL: [BasisSet; 2] = [BasisSet::Legacy, BasisSet::Modern];

    pub fn as_str(self) -> &'static str {
        match self {
            BasisSet::Legacy => "legacy",
            BasisSet::Modern => "modern",
        }
    }

    pub fn is_native(self, g: &Gate) -> bool {
        matches!(
            (self, g.kind, g.controls.len()),
            (_, GateKind::X, 1)
                | (
                    BasisSet::Legacy,
                    GateKind::U1(_) | GateKind::U2(..) | GateKind::U3(..),
                    0
                )
                | (
                    BasisSet::Modern,
                    GateKind::Rz(_) | GateKind::SX | GateKind::X,
                    0
                )
        )
    }
}

impl fmt::Display for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "legacy" => Ok(BasisSet::Legacy),
            "modern" => Ok(BasisSet::Modern),
            other => Err(Error::UnknownName {
                kind: "basis",
                value: other.to_string(),
            }),
        }
    }
}

/// Toffoli with 6 CX; exact (no phase).
fn toffoli(a: usize, b: usize, c: usize) -> Vec<Gate> {
    let t = |q| Gate::u1(FRAC_PI_4, q);
    let tdg = |q| Gate::u1(-FRAC_PI_4, q);
    vec![
        Gate::h(c),
        Gate::cx(b, c),
        tdg(c),
        Gate::cx(a, c),
        t(c),
        Gate::cx(b, c),
        tdg(c),
        Gate::cx(a, c),
        t(b),
        t(c),
        Gate::h(c),
        Gate::cx(a, b),
        t(a),
        tdg(b),
        Gate::cx(a, b),
    ]
}

/// One rewrite step. Single-qubit rules hold up to global phase; multi-qubit
/// rules are exact, so phases never leak into a controlled context.
fn rule(g: &Gate, basis: BasisSet) -> Result<Vec<Gate>> {
    let no_rule = || Error::NoRule {
        gate: g.name(),
        basis: basis.as_str(),
    };
    let t = g.targets[0];
    let out = match (g.kind, &*g.controls) {
        (GateKind::X, &[c1, c2]) => toffoli(c1, c2, t),
        (GateKind::Ry(theta), &[c]) => vec![
            Gate::ry(theta / 2.0, t),
            Gate::cx(c, t),
            Gate::ry(-theta / 2.0, t),
            Gate::cx(c, t),
        ],
        (GateKind::Margolus, []) => {
            margolus_decomposition(g.targets[0], g.targets[1], g.targets[2]).to_vec()
        }
        (_, [_, ..]) => return Err(no_rule()),
        (kind, []) => match basis {
            BasisSet::Legacy => vec![match kind {
                GateKind::H => Gate::u2(0.0, PI, t),
                GateKind::X => Gate::u3(PI, 0.0, PI, t),
                GateKind::SX => Gate::u3(FRAC_PI_2, -FRAC_PI_2, FRAC_PI_2, t),
                GateKind::Rz(a) => Gate::u1(a, t),
                GateKind::Ry(a) => Gate::u3(a, 0.0, 0.0, t),
                _ => return Err(no_rule()),
            }],
            BasisSet::Modern => match kind {
                GateKind::H => vec![Gate::rz(FRAC_PI_2, t), Gate::sx(t), Gate::rz(FRAC_PI_2, t)],
                GateKind::Ry(a) => vec![
                    Gate::sx(t),
                    Gate::rz(a + PI, t),
                    Gate::sx(t),
                    Gate::rz(PI, t),
                ],
                GateKind::U1(l) => vec![Gate::rz(l, t)],
                GateKind::U2(p, l) => u3_modern(FRAC_PI_2, p, l, t),
                GateKind::U3(th, p, l) => u3_modern(th, p, l, t),
                _ => return Err(no_rule()),
            },
        },
    };
    Ok(out)
}

fn u3_modern(theta: f64, phi: f64, lambda: f64, t: usize) -> Vec<Gate> {
    vec![
        Gate::rz(lambda, t),
        Gate::sx(t),
        Gate::rz(theta + PI, t),
        Gate::sx(t),
        Gate::rz(phi + PI, t),
    ]
}

fn rewrite(g: &Gate, basis: BasisSet, out: &mut Vec<Gate>) -> Result<()> {
    if basis.is_native(g) {
        out.push(g.clone());
        return Ok(());
    }
    for sub in rule(g, basis)? {
        rewrite(&sub, basis, out)?;
    }
    Ok(())
}

/// Rewrites `c` into `basis` with the fixed rule table. The result equals the
/// input up to a global phase.
///
/// Doubly controlled rotations have no rule; lower them first with
/// [`super::lower_controlled`].
pub fn transpile(c: &Circuit, basis: BasisSet) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(c.len() * 4);
    for g in c.gates() {
        rewrite(g, basis, &mut gates)?;
    }
    c.with_gates(gates)
}

fn is_bare_x(g: &Gate) -> bool {
    g.kind == GateKind::X && g.controls.is_empty()
}

/// Removes pairs of uncontrolled X gates that meet on a wire with nothing in
/// between on that wire.
pub fn cancel_adjacent_x(c: &Circuit) -> Result<Circuit> {
    let mut kept: Vec<Option<Gate>> = Vec::with_capacity(c.len());
    let mut wire: Vec<Vec<usize>> = vec![Vec::new(); c.n_qubits()];
    for g in c.gates() {
        if is_bare_x(g) {
            let q = g.targets[0];
            if let Some(&prev) = wire[q].last() {
                if kept[prev].as_ref().is_some_and(is_bare_x) {
                    kept[prev] = None;
                    wire[q].pop();
                    continue;
                }
            }
        }
        let idx = kept.len();
        for q in g.qubits() {
            wire[q].push(idx);
        }
        kept.push(Some(g.clone()));
    }
    c.with_gates(kept.into_iter().flatten().collect())
}
