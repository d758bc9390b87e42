//! Exhaustive search for multiplier sets that minimize the worst-case
//! acceptance of a non-member word.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::automaton::{closed_form_acceptance, is_prime, Scheme};
use crate::error::{Error, Result};

/// Header of the sweep report.
pub const SWEEP_CSV_HEADER: &str = "scheme,p,d,min,max,mean,std,best_K";

/// Acceptance model a k-set is scored under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchScheme {
    DirectSum,
    Parallel,
    /// Three rotation parameters feeding a direct sum over
    /// `{k1, k1+k2, k1+k3, k1+k2+k3}`.
    Optimized,
}

impl SearchScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchScheme::DirectSum => "direct_sum",
            SearchScheme::Parallel => "parallel",
            SearchScheme::Optimized => "optimized",
        }
    }

    fn acceptance_scheme(self) -> Scheme {
        match self {
            SearchScheme::Parallel => Scheme::Parallel,
            _ => Scheme::DirectSum,
        }
    }
}

impl fmt::Display for SearchScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimized" => Ok(SearchScheme::Optimized),
            other => other.parse::<Scheme>().map(Into::into),
        }
    }
}

impl From<Scheme> for SearchScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::DirectSum => SearchScheme::DirectSum,
            Scheme::Parallel => SearchScheme::Parallel,
        }
    }
}

/// Which d-element candidates a sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Enumeration {
    /// Strictly increasing tuples of distinct values.
    #[default]
    Distinct,
    /// Non-decreasing tuples; repeated values allowed.
    Multiset,
}

/// The multipliers actually seen by the acceptance formula, reduced mod `p`.
pub fn effective_set(p: u64, ks: &[u64], scheme: SearchScheme) -> Result<Vec<u64>> {
    match scheme {
        SearchScheme::Optimized => match *ks {
            [k1, k2, k3] => Ok([k1, k1 + k2, k1 + k3, k1 + k2 + k3].map(|k| k % p).to_vec()),
            _ => Err(Error::Arity {
                variant: "optimized",
                expected: 3,
                actual: ks.len(),
            }),
        },
        _ => Ok(ks.to_vec()),
    }
}

fn check(p: u64, ks: &[u64]) -> Result<()> {
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

/// Highest acceptance over the non-members `a^1 .. a^(p-1)`.
pub fn max_error(p: u64, ks: &[u64], scheme: SearchScheme) -> Result<f64> {
    check(p, ks)?;
    let eff = effective_set(p, ks, scheme)?;
    Ok(max_error_unchecked(p, &eff, scheme.acceptance_scheme()))
}

fn max_error_unchecked(p: u64, eff: &[u64], scheme: Scheme) -> f64 {
    (1..p)
        .map(|m| closed_form_acceptance(p, eff, m, scheme))
        .fold(0.0, f64::max)
}

/// Summary of `max_error` over every candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct KSweepStats {
    pub scheme: SearchScheme,
    pub p: u64,
    pub d: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub best_k: Vec<u64>,
    pub population: usize,
}

impl KSweepStats {
    /// Row matching [`SWEEP_CSV_HEADER`]; `best_K` is space separated.
    pub fn csv_row(&self) -> String {
        let best: Vec<String> = self.best_k.iter().map(u64::to_string).collect();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.scheme,
            self.p,
            self.d,
            self.min,
            self.max,
            self.mean,
            self.std,
            best.join(" ")
        )
    }
}

/// All `d`-tuples over `1..p` in lexicographic order.
pub fn candidates(p: u64, d: usize, enumeration: Enumeration) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(lo: u64, p: u64, d: usize, e: Enumeration, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for k in lo..p {
            cur.push(k);
            let next = match e {
                Enumeration::Distinct => k + 1,
                Enumeration::Multiset => k,
            };
            rec(next, p, d, e, cur, out);
            cur.pop();
        }
    }
    rec(1, p, d, enumeration, &mut cur, &mut out);
    out
}

/// [`sweep_with`] over distinct sets.
pub fn sweep(p: u64, d: usize, scheme: SearchScheme) -> Result<KSweepStats> {
    sweep_with(p, d, scheme, Enumeration::Distinct)
}

pub fn sweep_with(
    p: u64,
    d: usize,
    scheme: SearchScheme,
    enumeration: Enumeration,
) -> Result<KSweepStats> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 {
        return Err(Error::EmptyKSet);
    }
    let available = (p - 1) as usize;
    if enumeration == Enumeration::Distinct && d > available {
        return Err(Error::SetTooLarge { d, available });
    }
    if scheme == SearchScheme::Optimized && d != 3 {
        return Err(Error::Arity {
            variant: "optimized",
            expected: 3,
            actual: d,
        });
    }

    let sets = candidates(p, d, enumeration);
    let acc = scheme.acceptance_scheme();
    let errors: Vec<f64> = sets
        .par_iter()
        .map(|ks| {
            let eff = effective_set(p, ks, scheme).expect("arity checked");
            max_error_unchecked(p, &eff, acc)
        })
        .collect();

    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
    let (best, min) =
        errors
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) },
            );
    Ok(KSweepStats {
        scheme,
        p,
        d,
        min,
        max: errors.iter().copied().fold(0.0, f64::max),
        mean,
        std: var.sqrt(),
        best_k: sets[best].clone(),
        population: sets.len(),
    })
}

/// Arg-min of `max_error`, smallest set first on ties.
pub fn best_k(p: u64, d: usize, scheme: SearchScheme) -> Result<Vec<u64>> {
    Ok(sweep(p, d, scheme)?.best_k)
}
