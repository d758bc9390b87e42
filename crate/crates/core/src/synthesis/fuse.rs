use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::Result;

/// `SX, Rz(θ)×n, SX, X` in application order; equals `Ry(θ)^n` up to a
/// global phase.
pub fn fused_ry_run(theta: f64, n: usize, q: usize) -> Vec<Gate> {
    let mut out = Vec::with_capacity(n + 3);
    out.push(Gate::sx(q));
    out.extend((0..n).map(|_| Gate::rz(theta, q)));
    out.push(Gate::sx(q));
    out.push(Gate::x(q));
    out
}

fn bare_ry(g: &Gate) -> Option<f64> {
    match g.kind {
        GateKind::Ry(theta) if g.controls.is_empty() => Some(theta),
        _ => None,
    }
}

/// Replaces every maximal run of equal uncontrolled `Ry(θ)` gates on a wire
/// (gates on other wires do not break a run) with [`fused_ry_run`].
///
/// The fused block is placed at the first gate of its run.
pub fn fuse_ry_runs(c: &Circuit) -> Result<Circuit> {
    // run_len[i] = Some(n) at the head of a run, Some(0) for absorbed members
    let mut run_len: Vec<Option<usize>> = vec![None; c.len()];
    // per wire: (index of run head, θ, length) of the run still open
    let mut open: Vec<Option<(usize, f64, usize)>> = vec![None; c.n_qubits()];

    for (i, g) in c.gates().iter().enumerate() {
        match bare_ry(g) {
            Some(theta) => {
                let q = g.targets[0];
                match open[q] {
                    Some((head, t, n)) if t == theta => {
                        open[q] = Some((head, t, n + 1));
                        run_len[i] = Some(0);
                    }
                    prev => {
                        if let Some((head, _, n)) = prev {
                            run_len[head] = Some(n);
                        }
                        open[q] = Some((i, theta, 1));
                    }
                }
            }
            None => {
                for q in g.qubits() {
                    if let Some((head, _, n)) = open[q].take() {
                        run_len[head] = Some(n);
                    }
                }
            }
        }
    }
    for (head, _, n) in open.into_iter().flatten() {
        run_len[head] = Some(n);
    }

    let mut gates = Vec::with_capacity(c.len());
    for (g, len) in c.gates().iter().zip(run_len) {
        match len {
            Some(0) => {}
            Some(n) => gates.extend(fused_ry_run(bare_ry(g).expect("run head"), n, g.targets[0])),
            None => gates.push(g.clone()),
        }
    }
    c.with_gates(gates)
}
