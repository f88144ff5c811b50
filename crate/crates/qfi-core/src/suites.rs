//! Named verification suites: seeded randomized certification of the
//! chain rule, the amortization collapse, the sequential converse, the
//! SDP/closed-form agreement, the classical reduction, and RLD/SLD
//! dominance. The CLI `verify` command and the acceptance tests both drive
//! these.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    amortized_gain, chain_rule_matrix_gap, chain_rule_slack, sequential_fi_prefix_values,
    SequentialProtocol,
};
use crate::error::{Error, Result};
use crate::families::{StateFamilyPoint, WeightMatrix};
use crate::gadc::{gadc_channel_point, GadcParams};
use crate::linalg::ComplexMatrix;
use crate::random::{
    random_channel_family, random_parameter_free_channel, random_pure_probe, random_state_family,
    random_weight, DEFAULT_DERIV_MAGNITUDE,
};
use crate::rld::{rld_matrix_state, rld_value_channel, rld_value_state};
use crate::sdp::cross_check_channel;
use crate::sld::sld_matrix;
use crate::DEFAULT_RANK_TOL;

pub const SUITE_NAMES: [&str; 6] = [
    "chain-rule",
    "amortization",
    "sequential",
    "sdp-crosscheck",
    "classical-reduction",
    "rld-vs-sld",
];

/// One seeded instance: `metric` is the suite's slack or deviation, with
/// the pass direction given by the suite.
#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub seed: u64,
    pub metric: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: String,
    pub instances: Vec<InstanceResult>,
    pub passed: bool,
    /// min slack or max deviation over the instances, as appropriate.
    pub summary: String,
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn instance_seed(root: u64, index: usize) -> u64 {
    splitmix64(root ^ splitmix64(index as u64 + 1))
}

fn outcome(name: &str, instances: Vec<InstanceResult>, summary: String) -> SuiteOutcome {
    let passed = instances.iter().all(|i| i.passed);
    SuiteOutcome {
        name: name.to_string(),
        instances,
        passed,
        summary,
    }
}

/// Î(N) + Î(ρ) ≥ Î(N(ρ)) on random qubit channel/state pairs (D = 2), both
/// in scalar form and as a D×D matrix inequality.
pub fn chain_rule_suite(root_seed: u64, count: usize) -> SuiteOutcome {
    let mut instances = Vec::with_capacity(count);
    let mut min_slack = f64::INFINITY;
    for i in 0..count {
        let seed = instance_seed(root_seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let channel = random_channel_family(&mut rng, 2, 2, DEFAULT_DERIV_MAGNITUDE);
        let state = random_state_family(&mut rng, 4, 2, DEFAULT_DERIV_MAGNITUDE);
        let w = random_weight(&mut rng, 2);
        let (metric, passed, detail) = match (
            chain_rule_slack(&channel, &state, &w, DEFAULT_RANK_TOL),
            chain_rule_matrix_gap(&channel, &state, DEFAULT_RANK_TOL),
        ) {
            (Ok(slack), Ok(gap)) => {
                let min_eig = gap.min_eig_hermitian().unwrap_or(f64::NEG_INFINITY);
                let ok = slack >= -1e-8 && min_eig >= -1e-7;
                (
                    slack,
                    ok,
                    format!("slack {slack:.3e}, matrix min eig {min_eig:.3e}"),
                )
            }
            (Err(e), _) | (_, Err(e)) => (f64::NEG_INFINITY, false, format!("error: {e}")),
        };
        min_slack = min_slack.min(metric);
        instances.push(InstanceResult {
            seed,
            metric,
            passed,
            detail,
        });
    }
    outcome(
        "chain-rule",
        instances,
        format!("min slack {min_slack:.3e}"),
    )
}

/// Amortized gain Î(N(ρ)) − Î(ρ) never exceeds Î(N) (collapse).
pub fn amortization_suite(root_seed: u64, count: usize) -> SuiteOutcome {
    let mut instances = Vec::with_capacity(count);
    let mut min_slack = f64::INFINITY;
    for i in 0..count {
        let seed = instance_seed(root_seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let channel = random_channel_family(&mut rng, 2, 2, DEFAULT_DERIV_MAGNITUDE);
        let state = random_state_family(&mut rng, 4, 2, DEFAULT_DERIV_MAGNITUDE);
        let w = random_weight(&mut rng, 2);
        let (metric, passed, detail) = match (
            amortized_gain(&channel, &state, &w, DEFAULT_RANK_TOL),
            rld_value_channel(&channel, &w, DEFAULT_RANK_TOL).finite(),
        ) {
            (Ok(gain), Some(v)) => {
                let slack = v - gain;
                (slack, slack >= -1e-8, format!("gain {gain:.6}, Î(N) {v:.6}"))
            }
            (Err(e), _) => (f64::NEG_INFINITY, false, format!("error: {e}")),
            (_, None) => (f64::NEG_INFINITY, false, "channel value infinite".into()),
        };
        min_slack = min_slack.min(metric);
        instances.push(InstanceResult {
            seed,
            metric,
            passed,
            detail,
        });
    }
    outcome(
        "amortization",
        instances,
        format!("min slack {min_slack:.3e}"),
    )
}

/// n-use protocols with random parameter-free interleavers: every prefix
/// value stays below k·Î(N).
pub fn sequential_suite(root_seed: u64, count: usize) -> SuiteOutcome {
    let mut instances = Vec::with_capacity(count);
    let mut min_slack = f64::INFINITY;
    for i in 0..count {
        let seed = instance_seed(root_seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (i % 3);
        let channel = random_channel_family(&mut rng, 2, 2, DEFAULT_DERIV_MAGNITUDE);
        let w = random_weight(&mut rng, 2);
        let probe = random_pure_probe(&mut rng, 4, 2);
        let interleavers: Vec<_> = (0..n - 1)
            .map(|_| random_parameter_free_channel(&mut rng, 4, 4, 2))
            .collect();
        let (metric, passed, detail) = (|| -> Result<(f64, bool, String)> {
            let channel_value = rld_value_channel(&channel, &w, DEFAULT_RANK_TOL)
                .finite()
                .ok_or(Error::Infinite("channel value"))?;
            let protocol = SequentialProtocol::new(n, probe.clone(), interleavers.clone())?;
            let values = sequential_fi_prefix_values(&protocol, &channel, &w, DEFAULT_RANK_TOL)?;
            let mut slack = f64::INFINITY;
            for (k, v) in values.iter().enumerate() {
                let v = v.finite().ok_or(Error::Infinite("prefix value"))?;
                slack = slack.min((k + 1) as f64 * channel_value - v);
            }
            Ok((
                slack,
                slack >= -1e-8,
                format!("n = {n}, min telescoping slack {slack:.3e}"),
            ))
        })()
        .unwrap_or_else(|e| (f64::NEG_INFINITY, false, format!("error: {e}")));
        min_slack = min_slack.min(metric);
        instances.push(InstanceResult {
            seed,
            metric,
            passed,
            detail,
        });
    }
    outcome(
        "sequential",
        instances,
        format!("min slack {min_slack:.3e}"),
    )
}

/// Proposition-1 closed form vs. primal and dual SDPs on random GADC
/// points with random unit-trace weights.
pub fn sdp_crosscheck_suite(root_seed: u64, count: usize) -> SuiteOutcome {
    let mut instances = Vec::with_capacity(count);
    let mut max_dev = 0.0f64;
    for i in 0..count {
        let seed = instance_seed(root_seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = 0.1 + 0.8 * rand::Rng::gen_range(&mut rng, 0.0..1.0);
        let n_noise = 0.1 + 0.8 * rand::Rng::gen_range(&mut rng, 0.0..1.0);
        let w = random_weight(&mut rng, 2);
        let (metric, passed, detail) = (|| -> Result<(f64, bool, String)> {
            let params = GadcParams::new(gamma, n_noise)?;
            let channel = gadc_channel_point(params);
            let report = cross_check_channel(&channel, &w, 1e-5)?;
            let dev = report.max_rel_deviation.unwrap_or(f64::INFINITY);
            let gap = report.duality_gap.unwrap_or(f64::INFINITY);
            let closed = report
                .closed_form
                .finite()
                .ok_or(Error::Infinite("closed form"))?;
            let gap_ok = gap <= 1e-7 * (1.0 + closed.abs());
            Ok((
                dev,
                report.passed && gap_ok,
                format!("γ={gamma:.3}, N={n_noise:.3}, rel dev {dev:.3e}, gap {gap:.3e}"),
            ))
        })()
        .unwrap_or_else(|e| (f64::INFINITY, false, format!("error: {e}")));
        max_dev = max_dev.max(metric);
        instances.push(InstanceResult {
            seed,
            metric,
            passed,
            detail,
        });
    }
    outcome(
        "sdp-crosscheck",
        instances,
        format!("max relative deviation {max_dev:.3e}"),
    )
}

/// Diagonal (commuting) families reproduce the classical Fisher matrix on
/// both the RLD and SLD paths.
pub fn classical_reduction_suite(root_seed: u64, count: usize) -> SuiteOutcome {
    let mut instances = Vec::with_capacity(count);
    let mut max_dev = 0.0f64;
    for i in 0..count {
        let seed = instance_seed(root_seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // random interior multinomial on 3 outcomes (trinomial, D = 2);
        // every 3rd instance uses a Bernoulli (D = 1) family
        let (state, classical): (StateFamilyPoint, ComplexMatrix) = if i % 3 == 0 {
            let theta = rand::Rng::gen_range(&mut rng, 0.1..0.9);
            let state = StateFamilyPoint::new(
                ComplexMatrix::diag_real(&[theta, 1.0 - theta]),
                vec![ComplexMatrix::diag_real(&[1.0, -1.0])],
            )
            .expect("valid Bernoulli family");
            let fi = ComplexMatrix::diag_real(&[1.0 / (theta * (1.0 - theta))]);
            (state, fi)
        } else {
            let t1 = rand::Rng::gen_range(&mut rng, 0.1..0.4);
            let t2 = rand::Rng::gen_range(&mut rng, 0.1..0.4);
            let t3 = 1.0 - t1 - t2;
            let state = StateFamilyPoint::new(
                ComplexMatrix::diag_real(&[t1, t2, t3]),
                vec![
                    ComplexMatrix::diag_real(&[1.0, 0.0, -1.0]),
                    ComplexMatrix::diag_real(&[0.0, 1.0, -1.0]),
                ],
            )
            .expect("valid trinomial family");
            let fi = ComplexMatrix::from_real(
                2,
                &[1.0 / t1 + 1.0 / t3, 1.0 / t3, 1.0 / t3, 1.0 / t2 + 1.0 / t3],
            )
            .expect("2×2");
            (state, fi)
        };
        let rld = rld_matrix_state(&state, DEFAULT_RANK_TOL);
        let sld = sld_matrix(&state, DEFAULT_RANK_TOL);
        let dev_rld = rld.entries.sub(&classical).max_abs();
        let dev_sld = sld.entries.sub(&classical).max_abs();
        let dev = dev_rld.max(dev_sld);
        let passed = rld.finite && dev <= 1e-10;
        max_dev = max_dev.max(dev);
        instances.push(InstanceResult {
            seed,
            metric: dev,
            passed,
            detail: format!("RLD dev {dev_rld:.3e}, SLD dev {dev_sld:.3e}"),
        });
    }
    outcome(
        "classical-reduction",
        instances,
        format!("max deviation {max_dev:.3e}"),
    )
}

/// Single-parameter RLD dominates SLD on random full-rank qubit families.
pub fn rld_vs_sld_suite(root_seed: u64, count: usize) -> SuiteOutcome {
    let mut instances = Vec::with_capacity(count);
    let mut min_slack = f64::INFINITY;
    let w = WeightMatrix::scalar(1.0).expect("scalar weight");
    for i in 0..count {
        let seed = instance_seed(root_seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_state_family(&mut rng, 2, 1, DEFAULT_DERIV_MAGNITUDE);
        let (metric, passed, detail) = match rld_value_state(&state, &w, DEFAULT_RANK_TOL).finite()
        {
            Some(rld) => {
                let sld = sld_matrix(&state, DEFAULT_RANK_TOL).entries.at(0, 0).re;
                let slack = rld - sld;
                (
                    slack,
                    slack >= -1e-8,
                    format!("RLD {rld:.6}, SLD {sld:.6}"),
                )
            }
            None => (f64::NEG_INFINITY, false, "RLD value infinite".into()),
        };
        min_slack = min_slack.min(metric);
        instances.push(InstanceResult {
            seed,
            metric,
            passed,
            detail,
        });
    }
    outcome(
        "rld-vs-sld",
        instances,
        format!("min (RLD − SLD) {min_slack:.3e}"),
    )
}

/// Dispatch by suite name.
pub fn run_suite(name: &str, root_seed: u64, count: usize) -> Result<SuiteOutcome> {
    match name {
        "chain-rule" => Ok(chain_rule_suite(root_seed, count)),
        "amortization" => Ok(amortization_suite(root_seed, count)),
        "sequential" => Ok(sequential_suite(root_seed, count)),
        "sdp-crosscheck" => Ok(sdp_crosscheck_suite(root_seed, count)),
        "classical-reduction" => Ok(classical_reduction_suite(root_seed, count)),
        "rld-vs-sld" => Ok(rld_vs_sld_suite(root_seed, count)),
        _ => Err(Error::InvalidParam(format!(
            "unknown suite '{name}'; expected one of {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}
