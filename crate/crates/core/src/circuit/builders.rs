use std::fmt;
use std::str::FromStr;

use super::{Circuit, Gate};
use crate::automaton::{rotation_angle, validate_k_set};
use crate::error::{Error, Result};
use crate::synthesis::{self, DecompositionStyle};

/// Target qubit of the 3-qubit circuits.
pub const NAIVE_TARGET: usize = 0;
/// Low control bit; selects sub-automata 1 vs 2 and 3 vs 4.
pub const NAIVE_CONTROL_LOW: usize = 1;
/// High control bit.
pub const NAIVE_CONTROL_HIGH: usize = 2;

/// Ry gate parameter for a logical rotation by `2πk/p`.
///
/// Ry(θ) rotates the `|0>`-`|1>` plane by θ/2, so the parameter is `4πk/p`.
pub fn ry_parameter(p: u64, k: u64) -> f64 {
    2.0 * rotation_angle(p, k, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NaiveVariant {
    /// Six X gates per symbol, toggles restored every symbol.
    Plain,
    /// Four X gates per symbol.
    Improved,
    /// Two block orderings alternate; three X gates per symbol plus one
    /// closing X when the word length is odd.
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Single,
    Naive(NaiveVariant),
    Optimized,
    Parallel,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Single,
        Variant::Naive(NaiveVariant::Plain),
        Variant::Naive(NaiveVariant::Improved),
        Variant::Naive(NaiveVariant::Alternating),
        Variant::Optimized,
        Variant::Parallel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Single => "single",
            Variant::Naive(NaiveVariant::Plain) => "naive_plain",
            Variant::Naive(NaiveVariant::Improved) => "naive_improved",
            Variant::Naive(NaiveVariant::Alternating) => "naive_alternating",
            Variant::Optimized => "optimized",
            Variant::Parallel => "parallel",
        }
    }

    /// Required `|K|`, or `None` when any nonempty set works.
    pub fn arity(self) -> Option<usize> {
        match self {
            Variant::Single => Some(1),
            Variant::Naive(_) => Some(4),
            Variant::Optimized => Some(3),
            Variant::Parallel => None,
        }
    }

    /// A k-set of the right size used when none is given: the powers of two
    /// when they all fit below `p`, otherwise `1, 2, ...`.
    pub fn default_k(self, p: u64) -> Vec<u64> {
        let canonical: &[u64] = match self {
            Variant::Single => &[1],
            Variant::Naive(_) => &[1, 2, 4, 8],
            Variant::Optimized => &[2, 4, 8],
            Variant::Parallel => &[1, 2, 4],
        };
        if canonical.iter().all(|&k| k < p) {
            canonical.to_vec()
        } else {
            (1..=canonical.len() as u64).collect()
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "variant",
                value: s.to_string(),
            })
    }
}

/// Everything needed to build one circuit deterministically.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildSpec {
    pub p: u64,
    pub ks: Vec<u64>,
    /// Word length.
    pub m: usize,
    pub variant: Variant,
    /// Lowering for controlled rotations; `None` keeps them abstract.
    pub decomposition: Option<DecompositionStyle>,
}

impl BuildSpec {
    pub fn new(p: u64, ks: impl Into<Vec<u64>>, m: usize, variant: Variant) -> Self {
        Self {
            p,
            ks: ks.into(),
            m,
            variant,
            decomposition: None,
        }
    }

    pub fn with_decomposition(mut self, style: DecompositionStyle) -> Self {
        self.decomposition = Some(style);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(expected) = self.variant.arity() {
            if self.ks.len() != expected {
                return Err(Error::Arity {
                    variant: self.variant.as_str(),
                    expected,
                    actual: self.ks.len(),
                });
            }
        }
        validate_k_set(self.p, &self.ks)
    }
}

pub fn build(spec: &BuildSpec) -> Result<Circuit> {
    spec.validate()?;
    let (p, ks, m) = (spec.p, spec.ks.as_slice(), spec.m);
    let circuit = match spec.variant {
        Variant::Single => build_single(p, ks[0], m)?,
        Variant::Naive(v) => build_naive(p, ks, m, v)?,
        Variant::Optimized => build_optimized(p, ks, m)?,
        Variant::Parallel => build_parallel(p, ks, m)?,
    };
    match spec.decomposition {
        Some(style) => synthesis::lower_controlled(&circuit, style),
        None => Ok(circuit),
    }
}

/// One qubit, `m` rotations by `Ry(4πk/p)`, one measurement.
pub fn build_single(p: u64, k: u64, m: usize) -> Result<Circuit> {
    validate_k_set(p, &[k])?;
    let theta = ry_parameter(p, k);
    let mut c = Circuit::new(1);
    c.extend((0..m).map(|_| Gate::ry(theta, 0)))?;
    c.measure_all();
    Ok(c)
}

fn check_arity(variant: &'static str, ks: &[u64], expected: usize) -> Result<()> {
    if ks.len() != expected {
        return Err(Error::Arity {
            variant,
            expected,
            actual: ks.len(),
        });
    }
    Ok(())
}

fn hadamard_pair(c: &mut Circuit) -> Result<()> {
    c.push(Gate::h(NAIVE_CONTROL_HIGH))?;
    c.push(Gate::h(NAIVE_CONTROL_LOW))?;
    Ok(())
}

/// Current X toggles on the two control qubits.
///
/// A doubly controlled gate fires on the control pattern `!toggles`, so
/// sub-automaton `j` (pattern `j` over `q2 q1`) needs toggles `j ^ 0b11`.
#[derive(Debug, Clone, Copy, Default)]
struct Toggles(u8);

impl Toggles {
    fn move_to(&mut self, want: u8, c: &mut Circuit) -> Result<()> {
        let diff = self.0 ^ want;
        if diff & 0b10 != 0 {
            c.push(Gate::x(NAIVE_CONTROL_HIGH))?;
        }
        if diff & 0b01 != 0 {
            c.push(Gate::x(NAIVE_CONTROL_LOW))?;
        }
        self.0 = want;
        Ok(())
    }
}

const PLAIN_ORDER: [usize; 4] = [0, 1, 2, 3];
const FIRST_BLOCK_ORDER: [usize; 4] = [3, 2, 0, 1];
const SECOND_BLOCK_ORDER: [usize; 4] = [1, 0, 2, 3];

/// Three-qubit circuit realizing the block-diagonal `U_a` with four doubly
/// controlled rotations per symbol.
///
/// Controls are `(q2, q1)` and sub-automaton `j` lives on pattern `j`. X
/// gates on the controls select which pattern each rotation fires on.
pub fn build_naive(p: u64, ks: &[u64], m: usize, variant: NaiveVariant) -> Result<Circuit> {
    check_arity("naive", ks, 4)?;
    validate_k_set(p, ks)?;
    let thetas: Vec<f64> = ks.iter().map(|&k| ry_parameter(p, k)).collect();

    let mut c = Circuit::new(3);
    hadamard_pair(&mut c)?;
    let mut toggles = Toggles::default();
    for step in 0..m {
        let order = match variant {
            NaiveVariant::Plain => PLAIN_ORDER,
            NaiveVariant::Improved => FIRST_BLOCK_ORDER,
            NaiveVariant::Alternating if step % 2 == 0 => FIRST_BLOCK_ORDER,
            NaiveVariant::Alternating => SECOND_BLOCK_ORDER,
        };
        for j in order {
            toggles.move_to(j as u8 ^ 0b11, &mut c)?;
            c.push(Gate::ccry(
                thetas[j],
                NAIVE_CONTROL_HIGH,
                NAIVE_CONTROL_LOW,
                NAIVE_TARGET,
            ))?;
        }
        if variant != NaiveVariant::Alternating {
            toggles.move_to(0, &mut c)?;
        }
    }
    toggles.move_to(0, &mut c)?;
    hadamard_pair(&mut c)?;
    c.measure_all();
    Ok(c)
}

/// Per symbol: `Ry(θ1)` on q0, `Ry(θ2)` controlled by q1, `Ry(θ3)`
/// controlled by q2. Branch `q2 q1` then rotates by the multiplier sums
/// `k1`, `k1+k2`, `k1+k3`, `k1+k2+k3`.
pub fn build_optimized(p: u64, ks: &[u64], m: usize) -> Result<Circuit> {
    check_arity("optimized", ks, 3)?;
    validate_k_set(p, ks)?;
    let [t1, t2, t3] = [0, 1, 2].map(|i| ry_parameter(p, ks[i]));

    let mut c = Circuit::new(3);
    hadamard_pair(&mut c)?;
    for _ in 0..m {
        c.push(Gate::ry(t1, NAIVE_TARGET))?;
        c.push(Gate::cry(t2, NAIVE_CONTROL_LOW, NAIVE_TARGET))?;
        c.push(Gate::cry(t3, NAIVE_CONTROL_HIGH, NAIVE_TARGET))?;
    }
    hadamard_pair(&mut c)?;
    c.measure_all();
    Ok(c)
}

/// One independent qubit per multiplier; `ks[0]` on the highest qubit.
pub fn build_parallel(p: u64, ks: &[u64], m: usize) -> Result<Circuit> {
    validate_k_set(p, ks)?;
    let n = ks.len();
    let thetas: Vec<f64> = ks.iter().map(|&k| ry_parameter(p, k)).collect();
    let mut c = Circuit::new(n);
    for _ in 0..m {
        for (j, &theta) in thetas.iter().enumerate() {
            c.push(Gate::ry(theta, n - 1 - j))?;
        }
    }
    c.measure_all();
    Ok(c)
}
