//! Moore-Crutchfield quantum finite automata and the MOD_p constructions.
//!
//! A machine reads `¢ w $`, applying one unitary per symbol to the state
//! vector, and is measured once at the end. Acceptance is the total weight on
//! the accepting states.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, gates, Amplitude, StateVector, UnitaryMatrix};

pub const LEFT_END_MARKER: char = '¢';
pub const RIGHT_END_MARKER: char = '$';

/// The unary input symbol used by every MOD_p machine.
pub const UNARY_SYMBOL: char = 'a';

/// Input word over a machine's alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<char>);

impl Word {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Self {
        Self(symbols.into_iter().collect())
    }

    /// `a^m`.
    pub fn unary(m: usize) -> Self {
        Self(vec![UNARY_SYMBOL; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Self::new(s.chars())
    }
}

#[derive(Debug, Clone)]
pub struct Mcqfa {
    transitions: BTreeMap<char, UnitaryMatrix>,
    left: UnitaryMatrix,
    right: UnitaryMatrix,
    start: usize,
    accepting: Vec<usize>,
}

impl Mcqfa {
    /// Assembles a machine from its per-symbol unitaries.
    ///
    /// All operators must share one dimension `d`, `start < d`, and the
    /// accepting set must be a nonempty subset of `0..d`. The end markers are
    /// reserved and may not appear in the alphabet.
    pub fn new(
        transitions: impl IntoIterator<Item = (char, UnitaryMatrix)>,
        left: UnitaryMatrix,
        right: UnitaryMatrix,
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let transitions: BTreeMap<_, _> = transitions.into_iter().collect();
        let d = left.dim();
        for (sym, u) in &transitions {
            if *sym == LEFT_END_MARKER || *sym == RIGHT_END_MARKER {
                return Err(Error::InvalidAutomaton(format!(
                    "end marker {sym:?} used as an input symbol"
                )));
            }
            if u.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: u.dim(),
                });
            }
        }
        if right.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: right.dim(),
            });
        }
        for u in transitions.values().chain([&left, &right]) {
            let deviation = u.unitarity_deviation();
            if deviation > linalg::INVARIANT_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        if start >= d {
            return Err(Error::InvalidAutomaton(format!(
                "start state {start} outside 0..{d}"
            )));
        }
        let mut accepting: Vec<usize> = accepting.into_iter().collect();
        accepting.sort_unstable();
        accepting.dedup();
        if accepting.is_empty() {
            return Err(Error::InvalidAutomaton("accepting set is empty".into()));
        }
        if let Some(&q) = accepting.iter().find(|&&q| q >= d) {
            return Err(Error::InvalidAutomaton(format!(
                "accepting state {q} outside 0..{d}"
            )));
        }
        Ok(Self {
            transitions,
            left,
            right,
            start,
            accepting,
        })
    }

    /// Number of classical states `d`.
    pub fn states(&self) -> usize {
        self.left.dim()
    }

    pub fn alphabet(&self) -> impl Iterator<Item = char> + '_ {
        self.transitions.keys().copied()
    }

    pub fn operator(&self, symbol: char) -> Option<&UnitaryMatrix> {
        match symbol {
            LEFT_END_MARKER => Some(&self.left),
            RIGHT_END_MARKER => Some(&self.right),
            s => self.transitions.get(&s),
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    /// `U_$ U_{w_n} ... U_{w_1} U_¢ |q_s>`.
    pub fn final_state(&self, word: &Word) -> Result<StateVector> {
        let ops = word
            .symbols()
            .iter()
            .map(|&s| self.transitions.get(&s).ok_or(Error::UnknownSymbol(s)))
            .collect::<Result<Vec<_>>>()?;
        let mut v = linalg::mat_vec(&self.left, &StateVector::basis(self.states(), self.start))?;
        for u in ops {
            v = linalg::mat_vec(u, &v)?;
        }
        linalg::mat_vec(&self.right, &v)
    }

    /// Probability of observing an accepting state after reading `¢ w $`.
    pub fn run(&self, word: &Word) -> Result<f64> {
        let v = self.final_state(word)?;
        let amps = v.amplitudes();
        Ok(self.accepting.iter().map(|&q| amps[q].norm_sqr()).sum())
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Checks `p` prime and every multiplier in `1..p`.
pub fn validate_k_set(p: u64, ks: &[u64]) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if ks.is_empty() {
        return Err(Error::EmptyKSet);
    }
    match ks.iter().find(|&&k| k == 0 || k >= p) {
        Some(&k) => Err(Error::KOutOfRange { p, k }),
        None => Ok(()),
    }
}

/// Logical rotation angle `2π·(k·m mod p)/p`, reduced before scaling.
pub fn rotation_angle(p: u64, k: u64, m: u64) -> f64 {
    let r = (k as u128 * m as u128 % p as u128) as f64;
    2.0 * PI * r / p as f64
}

fn real_rotation(angle: f64) -> UnitaryMatrix {
    gates::to_unitary(&gates::rotation(angle))
}

/// The 2-state machine `M_p^k`: start state `q1` is the only accepting state
/// and each `a` rotates the plane by `2πk/p`. End markers act as identity.
pub fn make_mod_p_2state(p: u64, k: u64) -> Result<Mcqfa> {
    validate_k_set(p, &[k])?;
    Mcqfa::new(
        [(UNARY_SYMBOL, real_rotation(rotation_angle(p, k, 1)))],
        UnitaryMatrix::identity(2),
        UnitaryMatrix::identity(2),
        0,
        [0],
    )
}

/// Real orthogonal `d x d` matrix whose first column is the uniform vector,
/// completed by Gram-Schmidt over `e_1, ..., e_{d-1}`.
fn uniform_completion(d: usize) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    cols.push(vec![1.0 / (d as f64).sqrt(); d]);
    for i in 1..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        for c in &cols {
            let dot: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (vj, cj) in v.iter_mut().zip(c) {
                *vj -= dot * cj;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    cols
}

/// The `2d`-state machine `M_p^K` running `d` rotation sub-automata in
/// equal superposition.
///
/// State `2j` is `q_1` of sub-automaton `j`, state `2j+1` its `q_2`. `U_¢`
/// spreads `|q_1^1>` uniformly over the `q_1^j` states (Gram-Schmidt
/// completion on the even indices, identity on the odd ones), `U_a` is the
/// block-diagonal sum of the rotations and `U_$ = U_¢^{-1}`.
pub fn make_mod_p_direct_sum(p: u64, ks: &[u64]) -> Result<Mcqfa> {
    validate_k_set(p, ks)?;
    let d = ks.len();
    let n = 2 * d;

    let cols = uniform_completion(d);
    let mut entries = vec![Amplitude::new(0.0, 0.0); n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            entries[(2 * i) * n + 2 * j] = Amplitude::new(v, 0.0);
        }
    }
    for i in 0..d {
        entries[(2 * i + 1) * n + 2 * i + 1] = Amplitude::new(1.0, 0.0);
    }
    let left = UnitaryMatrix::new(n, entries)?;
    let right = left.adjoint();

    let step = ks
        .iter()
        .map(|&k| real_rotation(rotation_angle(p, k, 1)))
        .reduce(|acc, r| acc.direct_sum(&r))
        .expect("nonempty");

    Mcqfa::new([(UNARY_SYMBOL, step)], left, right, 0, [0])
}

/// How several rotation sub-automata are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// One register in equal superposition of the sub-automata.
    DirectSum,
    /// One qubit per sub-automaton, accepted when every qubit reads 0.
    Parallel,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::DirectSum => "direct_sum",
            Scheme::Parallel => "parallel",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct_sum" | "direct-sum" => Ok(Scheme::DirectSum),
            "parallel" => Ok(Scheme::Parallel),
            other => Err(Error::UnknownName {
                kind: "scheme",
                value: other.to_string(),
            }),
        }
    }
}

/// Exact acceptance of `a^m`.
///
/// * direct sum: `((1/d) Σ_j cos(2π k_j m / p))²`
/// * parallel: `Π_j cos²(2π k_j m / p)`
///
/// Multipliers are not range-checked here, so derived sets such as
/// `k1 + k2` may exceed `p`.
pub fn closed_form_acceptance(p: u64, ks: &[u64], m: u64, scheme: Scheme) -> f64 {
    assert!(!ks.is_empty(), "empty k-set");
    let cosines = ks.iter().map(|&k| rotation_angle(p, k, m).cos());
    match scheme {
        Scheme::DirectSum => {
            let mean = cosines.sum::<f64>() / ks.len() as f64;
            mean * mean
        }
        Scheme::Parallel => cosines.map(|c| c * c).product(),
    }
}
