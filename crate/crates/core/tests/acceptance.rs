//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured figure of merit (run with `--nocapture` to see them).
//!
//! Criterion 10's scattering half is expected to fail: the closed-form
//! scattering matrix is not the n -> infinity limit of the single-step
//! scattering channel (diagonal mixing 2e^(-Gamma t) - 1 versus
//! e^(-2 Gamma t)), so no iteration count can bring them within 1e-3 on a
//! state with unequal within-pair populations. The failure message carries
//! the measured deviations.

use duality_core::channels::{
    evolve_closed_form, evolve_iterated, trajectory, ChannelModel, EvolutionMethod,
    EvolutionSpec,
};
use duality_core::duality::{
    distinguishability, distinguishability_oracle, fringe_visibility_numeric,
    path_probabilities, visibility, PathLengths, ScanSpec, ScreenGeometry,
};
use duality_core::linspace;
use duality_core::state::{
    from_pure, psi1, psi2, psi_mixed, random_mixed, random_pure, werner,
    CoherencePolarizationMatrix,
};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn probe() -> CoherencePolarizationMatrix {
    from_pure(&psi_mixed()).unwrap()
}

fn d_and_v(rho: &CoherencePolarizationMatrix) -> (f64, f64) {
    (distinguishability(rho).unwrap(), visibility(rho))
}

/// 100k states split evenly over the Ginibre ranks 1..4.
fn mixed_ensemble() -> impl Iterator<Item = CoherencePolarizationMatrix> {
    (0..100_000u64).map(|i| random_mixed(i, (i % 4 + 1) as usize).unwrap())
}

#[test]
fn criterion_01_pure_state_saturation() {
    let mut worst = 0.0f64;
    for seed in 0..100_000u64 {
        let rho = from_pure(&random_pure(seed)).unwrap();
        let (d, v) = d_and_v(&rho);
        worst = worst.max((d * d + v * v - 1.0).abs());
    }
    assert!(
        worst < 1e-9,
        "criterion 1 FAIL: max |D^2+V^2-1| = {worst:e} over 1e5 Haar states"
    );
    println!("ACCEPTANCE 01 pure-state saturation: PASS (max |D^2+V^2-1| = {worst:.2e})");
}

#[test]
fn criterion_02_mixed_state_bound() {
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for rho in mixed_ensemble() {
        let (d, v) = d_and_v(&rho);
        let s = d * d + v * v;
        worst = worst.max(s);
        if s > 1.0 + 1e-9 {
            violations += 1;
        }
    }
    assert_eq!(
        violations, 0,
        "criterion 2 FAIL: {violations} states exceed D^2+V^2 <= 1+1e-9 (worst = {worst})"
    );
    println!("ACCEPTANCE 02 mixed-state bound: PASS (max D^2+V^2 = {worst:.12} over 1e5 Ginibre states)");
}

#[test]
fn criterion_03_psi1_sweep_closed_forms() {
    let mut worst = 0.0f64;
    for &a in &linspace(0.0, 1.0, 201) {
        let rho = from_pure(&psi1(a).unwrap()).unwrap();
        let (d, v) = d_and_v(&rho);
        worst = worst.max((v - 2.0 * a * (1.0 - a * a).sqrt()).abs());
        worst = worst.max((d - (2.0 * a * a - 1.0).abs()).abs());
    }
    assert!(worst < 1e-12, "criterion 3 FAIL: worst closed-form gap {worst:e}");

    for a in [0.0, 1.0] {
        let (d, v) = d_and_v(&from_pure(&psi1(a).unwrap()).unwrap());
        assert!((d - 1.0).abs() < 1e-12 && v.abs() < 1e-12, "endpoint a = {a}");
    }
    let (d, v) = d_and_v(&from_pure(&psi1(FRAC_1_SQRT_2).unwrap()).unwrap());
    assert!(d.abs() < 1e-12 && (v - 1.0).abs() < 1e-12, "a = 1/sqrt2");
    println!("ACCEPTANCE 03 psi1 closed forms: PASS (worst gap {worst:.2e} at 201 points)");
}

#[test]
fn criterion_04_psi2_anchor_and_orthogonal_column() {
    let rho = from_pure(&psi2(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap()).unwrap();
    let (d, v) = d_and_v(&rho);
    assert!(
        (d - FRAC_1_SQRT_2).abs() < 1e-12 && (v - FRAC_1_SQRT_2).abs() < 1e-12,
        "criterion 4 FAIL: anchor gives D = {d}, V = {v}"
    );
    let mut worst = 0.0f64;
    for &a in &linspace(0.0, 1.0, 201) {
        let rho = from_pure(&psi2(a, 0.0).unwrap()).unwrap();
        let (d, v) = d_and_v(&rho);
        worst = worst.max((d - 1.0).abs()).max(v.abs());
    }
    assert!(worst < 1e-12, "criterion 4 FAIL: b=0 column worst gap {worst:e}");
    println!("ACCEPTANCE 04 psi2 anchor D=V=1/sqrt2 and b=0 column: PASS (worst gap {worst:.2e})");
}

#[test]
fn criterion_05_werner_sweep() {
    let mut worst = 0.0f64;
    for &eta in &linspace(0.0, 1.0, 201) {
        let rho = werner(eta).unwrap();
        let (d, v) = d_and_v(&rho);
        assert_eq!(v, 0.0, "criterion 5 FAIL: V != 0 at eta = {eta}");
        worst = worst.max((d - eta).abs());
    }
    assert!(worst < 1e-12, "criterion 5 FAIL: worst |D-eta| = {worst:e}");
    println!("ACCEPTANCE 05 werner sweep V=0, D=eta: PASS (worst |D-eta| = {worst:.2e})");
}

#[test]
fn criterion_06_dephasing_trajectory() {
    let spec = EvolutionSpec {
        model: ChannelModel::Dephasing,
        gamma_rate: 1.0,
        t_grid: linspace(0.0, 5.0, 200),
        method: EvolutionMethod::ClosedForm,
        n_steps: 0,
    };
    let traj = trajectory(&probe(), &spec, 1e-9).unwrap();
    assert_eq!(traj.len(), 200);
    let mut worst_d = 0.0f64;
    let mut worst_v = 0.0f64;
    for (t, rep) in &traj {
        worst_d = worst_d.max((rep.distinguishability - FRAC_1_SQRT_2).abs());
        worst_v = worst_v.max((rep.visibility - (-t).exp() * FRAC_1_SQRT_2).abs());
    }
    assert!(
        worst_d < 1e-12 && worst_v < 1e-12,
        "criterion 6 FAIL: worst |D-1/sqrt2| = {worst_d:e}, worst V gap = {worst_v:e}"
    );
    println!(
        "ACCEPTANCE 06 dephasing trajectory: PASS (D constant to {worst_d:.2e}, V decay to {worst_v:.2e})"
    );
}

#[test]
fn criterion_07_scattering_trajectory() {
    let spec = EvolutionSpec {
        model: ChannelModel::Scattering,
        gamma_rate: 1.0,
        t_grid: linspace(0.0, 5.0, 200),
        method: EvolutionMethod::ClosedForm,
        n_steps: 0,
    };
    let traj = trajectory(&probe(), &spec, 1e-9).unwrap();
    let mut worst_d = 0.0f64;
    let mut worst_v = 0.0f64;
    for (t, rep) in &traj {
        let g = (-t).exp();
        let expect_d = 0.5 * (g * g + (2.0 * g - 1.0) * (2.0 * g - 1.0)).sqrt();
        worst_d = worst_d.max((rep.distinguishability - expect_d).abs());
        worst_v = worst_v.max((rep.visibility - g * FRAC_1_SQRT_2).abs());
    }
    assert!(
        worst_d < 1e-12 && worst_v < 1e-12,
        "criterion 7 FAIL: worst D gap {worst_d:e}, worst V gap {worst_v:e}"
    );

    let late = evolve_closed_form(&probe(), ChannelModel::Scattering, 1.0, 40.0).unwrap();
    let d_late = distinguishability(&late).unwrap();
    assert!(
        (d_late - 0.5).abs() < 1e-9,
        "criterion 7 FAIL: D at gamma*t = 40 is {d_late}"
    );

    let (t_min, d_min) = traj
        .iter()
        .map(|(t, r)| (*t, r.distinguishability))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    assert!(
        (d_min - 0.22361).abs() < 1e-4,
        "criterion 7 FAIL: grid minimum D = {d_min}"
    );
    let spacing = 5.0 / 199.0;
    assert!(
        (t_min - 0.9163).abs() <= spacing,
        "criterion 7 FAIL: minimum at t = {t_min}, expected near 0.9163"
    );
    println!(
        "ACCEPTANCE 07 scattering trajectory: PASS (min D = {d_min:.5} at t = {t_min:.4}, D(40) = {d_late:.9})"
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let mut worst = 0.0f64;
    for seed in 0..50_000u64 {
        let rho = from_pure(&random_pure(seed)).unwrap();
        worst = worst.max((distinguishability(&rho).unwrap() - distinguishability_oracle(&rho)).abs());
    }
    for seed in 0..50_000u64 {
        let rho = random_mixed(seed, (seed % 4 + 1) as usize).unwrap();
        worst = worst.max((distinguishability(&rho).unwrap() - distinguishability_oracle(&rho)).abs());
    }
    assert!(
        worst < 1e-12,
        "criterion 8 FAIL: worst |formula - eigensolver| = {worst:e}"
    );
    println!("ACCEPTANCE 08 oracle equivalence: PASS (worst gap {worst:.2e} over 1e5 states)");
}

#[test]
fn criterion_09_channel_soundness() {
    let mut worst_defect = 0.0f64;
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        for model in [ChannelModel::Dephasing, ChannelModel::Scattering] {
            worst_defect = worst_defect.max(model.channel(p).unwrap().completeness_defect());
        }
    }
    assert!(
        worst_defect < 1e-12,
        "criterion 9 FAIL: completeness defect {worst_defect:e}"
    );

    let mut worst_trace = 0.0f64;
    let mut worst_herm = 0.0f64;
    let mut worst_eig = 0.0f64;
    for seed in 0..10_000u64 {
        let rho = random_mixed(seed, (seed % 4 + 1) as usize).unwrap();
        let p = (seed as f64 + 0.5) / 10_000.0;
        let model = if seed % 2 == 0 {
            ChannelModel::Dephasing
        } else {
            ChannelModel::Scattering
        };
        let out = duality_core::channels::apply(&rho, &model.channel(p).unwrap()).unwrap();
        worst_trace = worst_trace.max((out.matrix().trace().re - 1.0).abs());
        worst_herm = worst_herm.max(out.matrix().hermiticity_defect());
        worst_eig = worst_eig.min(out.matrix().eigenvalues_hermitian()[0]);
    }
    assert!(
        worst_trace < 1e-12 && worst_herm < 1e-12 && worst_eig >= -1e-9,
        "criterion 9 FAIL: trace {worst_trace:e}, herm {worst_herm:e}, min eig {worst_eig:e}"
    );
    println!(
        "ACCEPTANCE 09 channel soundness: PASS (defect {worst_defect:.2e}, trace drift {worst_trace:.2e}, min eig {worst_eig:.2e})"
    );
}

#[test]
fn criterion_10_markovian_limit() {
    let rho = probe();
    let ns: Vec<usize> = (4..=12).map(|k| 1usize << k).collect();

    let mut summary = String::new();
    let mut failures = String::new();
    for model in [ChannelModel::Dephasing, ChannelModel::Scattering] {
        let closed = evolve_closed_form(&rho, model, 1.0, 1.0).unwrap();
        let errs: Vec<(usize, f64)> = ns
            .iter()
            .map(|&n| {
                let it = evolve_iterated(&rho, model, 1.0, 1.0, n).unwrap();
                (n, it.matrix().max_abs_diff(closed.matrix()))
            })
            .collect();
        let err_1024 = errs.iter().find(|(n, _)| *n == 1024).unwrap().1;
        let decreasing = errs.windows(2).all(|w| w[1].1 < w[0].1);
        summary.push_str(&format!(
            "  {model}: err(1024) = {err_1024:.3e}, decreasing over n in 16..4096: {decreasing}\n"
        ));
        if err_1024 >= 1e-3 || !decreasing {
            failures.push_str(&format!("  {model}: {errs:?}\n"));
        }
    }
    print!("ACCEPTANCE 10 Markovian limit:\n{summary}");
    assert!(
        failures.is_empty(),
        "criterion 10 FAIL: iterated evolution does not match the closed form\n{failures}\
         The closed-form scattering matrix mixes the diagonal with 2e^(-gamma t) - 1, but \
         n-fold application of the scattering channel converges to e^(-2 gamma t); \
         the gap (~5e-2 on the probe state at gamma*t = 1) cannot shrink with n."
    );
    println!("ACCEPTANCE 10 Markovian limit: PASS");
}

#[test]
fn criterion_11_predictability_bound() {
    let mut worst = f64::INFINITY;
    let mut check = |rho: &CoherencePolarizationMatrix| {
        let (i1, i2) = path_probabilities(rho);
        let d = distinguishability(rho).unwrap();
        worst = worst.min(d - (i1 - i2).abs());
    };
    for seed in 0..100_000u64 {
        check(&from_pure(&random_pure(seed)).unwrap());
    }
    for rho in mixed_ensemble() {
        check(&rho);
    }
    assert!(
        worst >= -1e-12,
        "criterion 11 FAIL: D - |I1-I2| dips to {worst:e}"
    );
    println!("ACCEPTANCE 11 predictability bound: PASS (min D - |I1-I2| = {worst:.2e})");
}

#[test]
fn criterion_12_farfield_visibility_consistency() {
    let d = 1e-3;
    let l = 1.0;
    let wavelength = 6.7e-6;
    let k = 2.0 * std::f64::consts::PI / wavelength;
    let fringe = wavelength * l / d;
    let template = ScreenGeometry {
        wavenumber: k,
        paths: PathLengths::FarField {
            slit_separation: d,
            screen_distance: l,
            screen_coordinate: 0.0,
        },
    };
    let scan = ScanSpec {
        x_min: -1.5 * fringe,
        x_max: 1.5 * fringe,
        samples: 10_000,
    };

    let cases = [
        ("psi1(1/sqrt2)", from_pure(&psi1(FRAC_1_SQRT_2).unwrap()).unwrap()),
        ("psi-mixed", probe()),
        ("werner(0.5)", werner(0.5).unwrap()),
    ];
    let mut worst = 0.0f64;
    for (name, rho) in &cases {
        let numeric = fringe_visibility_numeric(rho, &template, &scan).unwrap();
        let analytic = visibility(rho);
        let err = (numeric - analytic).abs();
        assert!(
            err < 1e-3,
            "criterion 12 FAIL: {name} numeric {numeric} vs analytic {analytic}"
        );
        worst = worst.max(err);
    }
    println!("ACCEPTANCE 12 far-field visibility consistency: PASS (worst gap {worst:.2e})");
}
