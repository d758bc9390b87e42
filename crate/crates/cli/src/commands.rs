//! One function per subcommand. Each returns the text it would print.

use anyhow::{Context, Result};
use modp_qfa::circuit::{
    self, qasm, ry_parameter, BuildSpec, Circuit, GateKind, NaiveVariant, Variant,
};
use modp_qfa::ksearch::{sweep_with, SWEEP_CSV_HEADER};
use modp_qfa::sampling::{acceptance_from_counts, sample, ShotResult};
use modp_qfa::synthesis::{
    cancel_adjacent_x, ccry_deviation, count_gates, expand_ccry, fuse_ry_runs, lower_controlled,
    transpile, BasisSet, DecompositionStyle, COUNT_CSV_HEADER,
};

use crate::config::ExperimentConfig;

pub const RUN_CSV_HEADER: &str = "word_length,exact_acceptance,sampled_acceptance";
pub const DECOMP_CSV_HEADER: &str = "style,theta,qubits,cx,fragment_distance,acceptance_delta";

fn has_ccry(c: &Circuit) -> bool {
    c.gates()
        .iter()
        .any(|g| matches!(g.kind, GateKind::Ry(_)) && g.controls.len() == 2)
}

/// Builds the circuit for `(variant, k, a^m)` and applies the configured
/// lowering, fusion and basis rewrite.
pub fn prepare(
    cfg: &ExperimentConfig,
    variant: Variant,
    k: &[u64],
    m: usize,
    basis: Option<BasisSet>,
) -> Result<Circuit> {
    let mut c = circuit::build(&cfg.spec(variant, k, m)?)?;
    if basis.is_some() && has_ccry(&c) {
        c = lower_controlled(&c, DecompositionStyle::Barenco)?;
    }
    if cfg.fuse {
        c = fuse_ry_runs(&c)?;
    }
    if let Some(basis) = basis {
        c = transpile(&cancel_adjacent_x(&c)?, basis)?;
    }
    Ok(c)
}

fn row_seed(seed: u64, m: usize) -> u64 {
    seed ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub struct RunOutput {
    pub csv: String,
    pub shots: Vec<(usize, ShotResult)>,
}

/// Exact and sampled acceptance for every word length `0..=m_max`.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut csv = format!("{RUN_CSV_HEADER}\n");
    let mut shots = Vec::with_capacity(cfg.m_max + 1);
    for m in 0..=cfg.m_max {
        let c = prepare(cfg, cfg.variant, &cfg.k, m, cfg.basis)?;
        let exact = circuit::simulate(&c)?.all_zeros();
        let r = sample(&c, cfg.shots, &cfg.noise, row_seed(cfg.seed, m))?;
        csv.push_str(&format!("{m},{exact},{}\n", acceptance_from_counts(&r)));
        shots.push((m, r));
    }
    Ok(RunOutput { csv, shots })
}

/// OpenQASM 2.0 text of the configured circuit at word length `m`.
pub fn cmd_export_qasm(cfg: &ExperimentConfig) -> Result<String> {
    let c = prepare(cfg, cfg.variant, &cfg.k, cfg.m, cfg.basis)?;
    Ok(qasm::to_qasm(&c)?)
}

pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<String> {
    let stats = sweep_with(cfg.p, cfg.d, cfg.scheme, cfg.enumeration)
        .with_context(|| format!("sweep p={} d={} scheme={}", cfg.p, cfg.d, cfg.scheme))?;
    Ok(format!("{SWEEP_CSV_HEADER}\n{}\n", stats.csv_row()))
}

/// Gate counts at word length `m`, one row per (variant, basis). Without an
/// explicit variant every variant is listed with its default multipliers.
pub fn cmd_counts(cfg: &ExperimentConfig) -> Result<String> {
    let variants: Vec<(Variant, Vec<u64>)> = if cfg.variant_set {
        vec![(cfg.variant, cfg.k.clone())]
    } else {
        Variant::ALL
            .iter()
            .map(|&v| (v, v.default_k(cfg.p)))
            .collect()
    };
    let bases: Vec<BasisSet> = match cfg.basis {
        Some(b) => vec![b],
        None => BasisSet::ALL.to_vec(),
    };
    let mut csv = format!("{COUNT_CSV_HEADER}\n");
    for (variant, k) in &variants {
        for &basis in &bases {
            let c = prepare(cfg, *variant, k, cfg.m, Some(basis))?;
            csv.push_str(&count_gates(&c).csv_row(variant.as_str(), basis.as_str()));
            csv.push('\n');
        }
    }
    Ok(csv)
}

/// Compares the three CC-Ry decompositions: fragment distance to the direct
/// gate, legacy CX cost, and the largest change in acceptance they cause in
/// the improved naive circuit over `0..=m_max`.
pub fn cmd_decomp_check(cfg: &ExperimentConfig) -> Result<String> {
    let naive = Variant::Naive(NaiveVariant::Improved);
    let k: Vec<u64> = if cfg.k.len() == 4 {
        cfg.k.clone()
    } else {
        naive.default_k(cfg.p)
    };
    cfg.spec(naive, &k, 0)?;
    let theta = ry_parameter(cfg.p, k[0]);
    let acceptance = |spec: BuildSpec| -> Result<f64> {
        Ok(circuit::simulate(&circuit::build(&spec)?)?.all_zeros())
    };
    let reference: Vec<f64> = (0..=cfg.m_max)
        .map(|m| acceptance(BuildSpec::new(cfg.p, k.clone(), m, naive)))
        .collect::<Result<_>>()?;

    let mut csv = format!("{DECOMP_CSV_HEADER}\n");
    for style in DecompositionStyle::ALL {
        let frag = expand_ccry(theta, style)?;
        let cx = count_gates(&transpile(&frag, BasisSet::Legacy)?).get("cx");
        let mut delta: f64 = 0.0;
        for (m, want) in reference.iter().enumerate() {
            let got =
                acceptance(BuildSpec::new(cfg.p, k.clone(), m, naive).with_decomposition(style))?;
            delta = delta.max((got - want).abs());
        }
        csv.push_str(&format!(
            "{style},{theta},{},{cx},{},{delta}\n",
            frag.n_qubits(),
            ccry_deviation(theta, style)?
        ));
    }
    Ok(csv)
}
