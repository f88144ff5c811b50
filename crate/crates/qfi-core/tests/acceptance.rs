//! Acceptance suite: every release criterion, each printing one PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines on success.

use std::time::Instant;

use qfi_core::bounds::{heisenberg_verdict, HeisenbergVerdict};
use qfi_core::families::{
    finite_diff_point, ChannelFamilyPoint, ParamVector, StateFamilyPoint, WeightMatrix,
};
use qfi_core::gadc::{
    self, default_gamma_grid, figure2_weight, gadc_channel_point, gadc_derivatives,
    gadc_traced_blocks, GadcParams, SweepStatus,
};
use qfi_core::linalg::ComplexMatrix;
use qfi_core::rld;
use qfi_core::sld::sld_matrix;
use qfi_core::suites;
use qfi_core::{C64, DEFAULT_RANK_TOL};

fn report(index: usize, name: &str, passed: bool, detail: &str) {
    println!(
        "ACCEPTANCE {index} {name}: {} ({detail})",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {index} {name} failed: {detail}");
}

/// Rank-1 Choi family of e^{−iθσ_Z} at θ = 0; its derivative leaves the
/// Choi support.
fn unitary_phase_family() -> ChannelFamilyPoint {
    let v = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    ];
    let dv = [
        C64::new(0.0, -1.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 1.0),
    ];
    let choi = ComplexMatrix::outer(&v);
    let dchoi = ComplexMatrix::from_fn(4, |i, j| dv[i] * v[j].conj() + v[i] * dv[j].conj());
    ChannelFamilyPoint::new(choi, 2, 2, vec![dchoi]).unwrap()
}

#[test]
fn criterion_1_figure2_envelope() {
    let start = Instant::now();
    let w = figure2_weight();
    let rows = gadc::figure2_sweep(0.2, &default_gamma_grid(), &w, 201);
    let elapsed = start.elapsed().as_secs_f64();

    let mut ok = rows.len() == 19;
    let mut worst_low = f64::INFINITY;
    let mut worst_high = f64::NEG_INFINITY;
    for row in &rows {
        if row.status != SweepStatus::Ok || !row.rld_value.is_finite() || !row.sld_value.is_finite()
        {
            ok = false;
            continue;
        }
        let sep = row.log10_rld_value - row.log10_sld_value;
        worst_low = worst_low.min(sep);
        worst_high = worst_high.max(sep);
        if !(0.0..=2.0).contains(&sep) {
            ok = false;
        }
    }
    ok &= elapsed < 10.0;
    report(
        1,
        "figure2-envelope",
        ok,
        &format!(
            "19 points, log10 separation in [{worst_low:.3}, {worst_high:.3}], {elapsed:.2}s"
        ),
    );
}

#[test]
fn criterion_2_closed_form_sdp_equivalence() {
    let start = Instant::now();
    let outcome = suites::sdp_crosscheck_suite(20260810, 25);
    let elapsed = start.elapsed().as_secs_f64();
    let ok = outcome.passed && elapsed < 60.0;
    report(
        2,
        "closed-form-sdp-equivalence",
        ok,
        &format!("25 instances, {}, {elapsed:.2}s", outcome.summary),
    );
}

#[test]
fn criterion_3_traced_blocks_exact() {
    let mut max_generic_dev = 0.0f64;
    let mut max_nn_dev = 0.0f64;
    for gi in 1..=9 {
        for ni in 1..=9 {
            let gamma = gi as f64 * 0.1;
            let n_noise = ni as f64 * 0.1;
            let p = GadcParams::new(gamma, n_noise).unwrap();
            let blocks = gadc_traced_blocks(p);
            let channel = gadc_channel_point(p);
            for a in 0..2 {
                for b in 0..2 {
                    let generic = rld::traced_block(&channel, a, b, DEFAULT_RANK_TOL).unwrap();
                    max_generic_dev = max_generic_dev.max(generic.sub(&blocks[a][b]).max_abs());
                }
            }
            let nn_exact = ComplexMatrix::identity(2).scaled(1.0 / (n_noise * (1.0 - n_noise)));
            max_nn_dev = max_nn_dev.max(blocks[1][1].sub(&nn_exact).max_abs());
        }
    }
    let ok = max_generic_dev <= 1e-10 && max_nn_dev <= 1e-12;
    report(
        3,
        "appendix-blocks-exact",
        ok,
        &format!("generic dev {max_generic_dev:.3e}, (N,N) dev {max_nn_dev:.3e}"),
    );
}

#[test]
fn criterion_4_chain_rule() {
    let outcome = suites::chain_rule_suite(20260810, 200);
    report(
        4,
        "chain-rule",
        outcome.passed,
        &format!("200 instances, {}", outcome.summary),
    );
}

#[test]
fn criterion_5_amortization_collapse_and_sequential() {
    let amort = suites::amortization_suite(20260810, 200);
    let seq = suites::sequential_suite(20260810, 60);
    let n_covered = {
        let mut seen = [false; 3];
        for (i, _) in seq.instances.iter().enumerate() {
            seen[i % 3] = true;
        }
        seen.iter().all(|s| *s)
    };
    let ok = amort.passed && seq.passed && n_covered;
    report(
        5,
        "amortization-collapse",
        ok,
        &format!("amortization: {}; sequential: {}", amort.summary, seq.summary),
    );
}

#[test]
fn criterion_6_classical_reduction() {
    // fixed Bernoulli and trinomial cases with analytic classical matrices
    let bernoulli = StateFamilyPoint::new(
        ComplexMatrix::diag_real(&[0.5, 0.5]),
        vec![ComplexMatrix::diag_real(&[1.0, -1.0])],
    )
    .unwrap();
    let trinomial = StateFamilyPoint::new(
        ComplexMatrix::diag_real(&[0.2, 0.3, 0.5]),
        vec![
            ComplexMatrix::diag_real(&[1.0, 0.0, -1.0]),
            ComplexMatrix::diag_real(&[0.0, 1.0, -1.0]),
        ],
    )
    .unwrap();
    let bern_fi = ComplexMatrix::diag_real(&[4.0]);
    let tri_fi =
        ComplexMatrix::from_real(2, &[7.0, 2.0, 2.0, 16.0 / 3.0]).unwrap();

    let mut max_dev = 0.0f64;
    for (state, classical) in [(&bernoulli, &bern_fi), (&trinomial, &tri_fi)] {
        let rld_m = rld::rld_matrix_state(state, DEFAULT_RANK_TOL);
        let sld_m = sld_matrix(state, DEFAULT_RANK_TOL);
        max_dev = max_dev
            .max(rld_m.entries.sub(classical).max_abs())
            .max(sld_m.entries.sub(classical).max_abs());
    }
    // plus the seeded randomized version
    let outcome = suites::classical_reduction_suite(20260810, 30);
    let ok = max_dev <= 1e-10 && outcome.passed;
    report(
        6,
        "classical-reduction",
        ok,
        &format!("fixed-case dev {max_dev:.3e}; {}", outcome.summary),
    );
}

#[test]
fn criterion_7_derivative_fidelity() {
    let p = GadcParams::new(0.5, 0.2).unwrap();
    let (dg, dn) = gadc_derivatives(p);
    let theta = ParamVector::new(vec![0.5, 0.2]).unwrap();
    let eval = |t: &[f64]| Ok(gadc::gadc_choi(GadcParams::new(t[0], t[1])?));

    let residual_at = |h: f64| {
        let fd = finite_diff_point(eval, &theta, h).unwrap();
        fd[0].sub(&dg).max_abs().max(fd[1].sub(&dn).max_abs())
    };
    let r_h = residual_at(1e-5);
    // order-2 convergence checked at steps where truncation still dominates
    // roundoff
    let r_coarse = residual_at(1e-3);
    let r_half = residual_at(5e-4);
    let ok = r_h <= 1e-8 && r_coarse / r_half >= 3.0;
    report(
        7,
        "derivative-fidelity",
        ok,
        &format!("residual(1e-5) {r_h:.3e}, ratio {:.2}", r_coarse / r_half),
    );
}

#[test]
fn criterion_8_single_parameter_dominance() {
    let outcome = suites::rld_vs_sld_suite(20260810, 100);
    report(
        8,
        "rld-dominates-sld",
        outcome.passed,
        &format!("100 instances, {}", outcome.summary),
    );
}

#[test]
fn criterion_9_heisenberg_verdicts() {
    let w = figure2_weight();
    let mut ok = true;
    for (gamma, n_noise) in [(0.1, 0.1), (0.5, 0.2), (0.9, 0.9), (0.3, 0.7)] {
        let channel = gadc_channel_point(GadcParams::new(gamma, n_noise).unwrap());
        ok &= heisenberg_verdict(&channel, &w, DEFAULT_RANK_TOL)
            == HeisenbergVerdict::ShotNoiseLimited;
    }
    let unitary = unitary_phase_family();
    let w1 = WeightMatrix::scalar(1.0).unwrap();
    ok &= heisenberg_verdict(&unitary, &w1, DEFAULT_RANK_TOL) == HeisenbergVerdict::Inconclusive;
    report(
        9,
        "heisenberg-verdicts",
        ok,
        "GADC interior ShotNoiseLimited, unitary phase Inconclusive",
    );
}
