//! Operator-sum (Kraus) machinery for the two environment models: pure
//! dephasing by refractive particles and polarization-preserving path
//! scattering by birefringent particles.
//!
//! Each model exposes three faces that the tests play against each other:
//! the single-step channel at interaction probability p, the n-fold iterated
//! Markovian evolution at p = gamma*t/n, and the closed-form time-evolved
//! matrix with gamma = exp(-Gamma t).

use crate::duality::{report, DualityReport};
use crate::error::{check_non_negative, check_unit_interval, Error, Result};
use crate::linalg::{c, Mat4};
use crate::state::{CoherencePolarizationMatrix, DEFAULT_VALIDATE_TOL};

/// The two environment models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelModel {
    /// Random path-dependent phase kicks; cross-path coherences decay, all
    /// other entries are left alone.
    Dephasing,
    /// Polarization-preserving hops between the paths; off-diagonals decay
    /// and the path populations mix pairwise.
    Scattering,
}

impl ChannelModel {
    pub fn name(self) -> &'static str {
        match self {
            ChannelModel::Dephasing => "dephasing",
            ChannelModel::Scattering => "scattering",
        }
    }

    /// Build this model's channel at interaction probability p.
    pub fn channel(self, p: f64) -> Result<KrausChannel> {
        match self {
            ChannelModel::Dephasing => dephasing_channel(p),
            ChannelModel::Scattering => scattering_channel(p),
        }
    }
}

impl std::fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered set of 4x4 Kraus operators with its family name and the
/// interaction probability it was built at.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Mat4>,
    label: &'static str,
    p: f64,
}

impl KrausChannel {
    pub fn operators(&self) -> &[Mat4] {
        &self.operators
    }

    pub fn label(&self) -> &'static str {
        self.label
    }

    pub fn interaction_probability(&self) -> f64 {
        self.p
    }

    /// Largest entry of | sum_i K_i^dagger K_i - identity |.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = Mat4::zeros();
        for k in &self.operators {
            sum = sum + k.adjoint() * *k;
        }
        sum.max_abs_diff(&Mat4::identity())
    }
}

fn projector(indices: &[usize]) -> Mat4 {
    let mut m = Mat4::zeros();
    for &i in indices {
        m.e[i][i] = c(1.0, 0.0);
    }
    m
}

/// |to><from| scaled by amp.
fn hop(to: usize, from: usize, amp: f64) -> Mat4 {
    let mut m = Mat4::zeros();
    m.e[to][from] = c(amp, 0.0);
    m
}

/// Dephasing channel: with probability p the environment learns the path and
/// nothing else.
///
/// K0 = sqrt(1-p) I, K1 = sqrt(p) (|H,1><H,1| + |V,1><V,1|),
/// K2 = sqrt(p) (|H,2><H,2| + |V,2><V,2|).
pub fn dephasing_channel(p: f64) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    let stay = (1.0 - p).sqrt();
    let kick = p.sqrt();
    Ok(KrausChannel {
        operators: vec![
            Mat4::identity().scale(stay),
            projector(&[0, 2]).scale(kick),
            projector(&[1, 3]).scale(kick),
        ],
        label: "dephasing",
        p,
    })
}

/// Scattering channel: with probability p the photon hops to the opposite
/// path, keeping its polarization, and the environment records which hop.
///
/// K0 = sqrt(1-p) I, K1 = sqrt(p) |H,2><H,1|, K2 = sqrt(p) |H,1><H,2|,
/// K3 = sqrt(p) |V,2><V,1|, K4 = sqrt(p) |V,1><V,2|.
pub fn scattering_channel(p: f64) -> Result<KrausChannel> {
    check_unit_interval("p", p)?;
    let stay = (1.0 - p).sqrt();
    let kick = p.sqrt();
    Ok(KrausChannel {
        operators: vec![
            Mat4::identity().scale(stay),
            hop(1, 0, kick),
            hop(0, 1, kick),
            hop(3, 2, kick),
            hop(2, 3, kick),
        ],
        label: "scattering",
        p,
    })
}

/// Operator-sum action: rho -> sum_i K_i rho K_i^dagger.
pub fn apply(
    rho: &CoherencePolarizationMatrix,
    channel: &KrausChannel,
) -> Result<CoherencePolarizationMatrix> {
    let defect = channel.completeness_defect();
    if defect > DEFAULT_VALIDATE_TOL {
        return Err(Error::IncompleteChannel {
            defect,
            tol: DEFAULT_VALIDATE_TOL,
        });
    }
    let mut out = Mat4::zeros();
    for k in channel.operators() {
        out = out + *k * *rho.matrix() * k.adjoint();
    }
    Ok(CoherencePolarizationMatrix::from_matrix(out))
}

/// Closed-form evolved state at time t with gamma = exp(-Gamma t).
///
/// Dephasing: the four cross-path coherences (and conjugates) are scaled by
/// gamma, everything else is untouched. Scattering: every off-diagonal is
/// scaled by gamma and the diagonal mixes pairwise within each polarization,
/// rho_11 -> gamma rho_11 + (1-gamma) rho_22 and so on.
pub fn evolve_closed_form(
    rho0: &CoherencePolarizationMatrix,
    model: ChannelModel,
    gamma_rate: f64,
    t: f64,
) -> Result<CoherencePolarizationMatrix> {
    check_non_negative("gamma", gamma_rate)?;
    check_non_negative("t", t)?;
    let g = (-gamma_rate * t).exp();
    let e = 1.0 - g;
    let m0 = rho0.matrix();
    let mut m = *m0;
    match model {
        ChannelModel::Dephasing => {
            // paths of the basis states H1, H2, V1, V2
            const PATH: [u8; 4] = [1, 2, 1, 2];
            for (i, &path_i) in PATH.iter().enumerate() {
                for (j, &path_j) in PATH.iter().enumerate() {
                    if path_i != path_j {
                        m.e[i][j] *= g;
                    }
                }
            }
        }
        ChannelModel::Scattering => {
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        m.e[i][j] *= g;
                    }
                }
            }
            m.e[0][0] = m0.e[0][0] * g + m0.e[1][1] * e;
            m.e[1][1] = m0.e[1][1] * g + m0.e[0][0] * e;
            m.e[2][2] = m0.e[2][2] * g + m0.e[3][3] * e;
            m.e[3][3] = m0.e[3][3] * g + m0.e[2][2] * e;
        }
    }
    Ok(CoherencePolarizationMatrix::from_matrix(m))
}

/// Markovian evolution by n successive applications of the model's channel at
/// per-step probability p = gamma*t/n.
///
/// p must stay in [0, 0.5]; beyond that the n-step reading of the map loses
/// its meaning as a short-time interaction probability.
pub fn evolve_iterated(
    rho0: &CoherencePolarizationMatrix,
    model: ChannelModel,
    gamma_rate: f64,
    t: f64,
    n: usize,
) -> Result<CoherencePolarizationMatrix> {
    check_non_negative("gamma", gamma_rate)?;
    check_non_negative("t", t)?;
    if n == 0 {
        return Err(Error::InvalidEvolutionSpec("n must be at least 1".into()));
    }
    let p = gamma_rate * t / n as f64;
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::StepProbabilityOutOfRange { p });
    }
    let channel = model.channel(p)?;
    let mut rho = *rho0;
    for _ in 0..n {
        rho = apply(&rho, &channel)?;
    }
    Ok(rho)
}

/// How a trajectory evolves each grid point from the initial state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvolutionMethod {
    ClosedForm,
    Iterated,
}

impl EvolutionMethod {
    pub fn name(self) -> &'static str {
        match self {
            EvolutionMethod::ClosedForm => "closed",
            EvolutionMethod::Iterated => "iterated",
        }
    }
}

impl std::fmt::Display for EvolutionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A full evolution request: model, rate, time grid and method.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionSpec {
    pub model: ChannelModel,
    /// Interaction rate Gamma (inverse time).
    pub gamma_rate: f64,
    /// Non-decreasing grid of times >= 0.
    pub t_grid: Vec<f64>,
    pub method: EvolutionMethod,
    /// Number of channel applications per grid point (iterated method only).
    pub n_steps: usize,
}

impl EvolutionSpec {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("gamma", self.gamma_rate)?;
        if self.t_grid.is_empty() {
            return Err(Error::InvalidEvolutionSpec("time grid is empty".into()));
        }
        let mut prev = 0.0f64;
        for &t in &self.t_grid {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidEvolutionSpec(format!(
                    "time {t} is not a finite non-negative number"
                )));
            }
            if t < prev {
                return Err(Error::InvalidEvolutionSpec(
                    "time grid is not non-decreasing".into(),
                ));
            }
            prev = t;
        }
        if self.method == EvolutionMethod::Iterated {
            if self.n_steps == 0 {
                return Err(Error::InvalidEvolutionSpec(
                    "iterated method needs n_steps >= 1".into(),
                ));
            }
            let t_max = *self.t_grid.last().unwrap();
            let p = self.gamma_rate * t_max / self.n_steps as f64;
            if !(0.0..=0.5).contains(&p) {
                return Err(Error::StepProbabilityOutOfRange { p });
            }
        }
        Ok(())
    }
}

/// Evolve the initial state to every grid time and report the duality
/// observables there. Each grid point is evolved independently from rho0, so
/// any point of the output is exactly reproducible on its own.
pub fn trajectory(
    rho0: &CoherencePolarizationMatrix,
    spec: &EvolutionSpec,
    tol: f64,
) -> Result<Vec<(f64, DualityReport)>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.t_grid.len());
    for &t in &spec.t_grid {
        let evolved = match spec.method {
            EvolutionMethod::ClosedForm => {
                evolve_closed_form(rho0, spec.model, spec.gamma_rate, t)?
            }
            EvolutionMethod::Iterated => {
                evolve_iterated(rho0, spec.model, spec.gamma_rate, t, spec.n_steps)?
            }
        };
        out.push((t, report(&evolved, tol)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{distinguishability, visibility};
    use crate::state::{from_pure, psi_mixed, validate, werner};
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-12;

    fn probe() -> CoherencePolarizationMatrix {
        from_pure(&psi_mixed()).unwrap()
    }

    #[test]
    fn channels_are_complete_at_any_p() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            assert!(dephasing_channel(p).unwrap().completeness_defect() < 1e-12);
            assert!(scattering_channel(p).unwrap().completeness_defect() < 1e-12);
        }
        assert!(dephasing_channel(-0.1).is_err());
        assert!(scattering_channel(1.01).is_err());
    }

    #[test]
    fn channel_metadata() {
        let ch = dephasing_channel(0.3).unwrap();
        assert_eq!(ch.label(), "dephasing");
        assert_eq!(ch.interaction_probability(), 0.3);
        assert_eq!(ch.operators().len(), 3);
        let ch = scattering_channel(0.7).unwrap();
        assert_eq!(ch.label(), "scattering");
        assert_eq!(ch.operators().len(), 5);
    }

    #[test]
    fn p_zero_is_the_identity_map() {
        let rho = probe();
        for model in [ChannelModel::Dephasing, ChannelModel::Scattering] {
            let out = apply(&rho, &model.channel(0.0).unwrap()).unwrap();
            assert!(out.matrix().max_abs_diff(rho.matrix()) < TOL);
        }
    }

    #[test]
    fn full_dephasing_kills_cross_path_coherence_only() {
        let rho = probe();
        let out = apply(&rho, &dephasing_channel(1.0).unwrap()).unwrap();
        for (i, j) in [(0, 1), (0, 3), (1, 2), (2, 3)] {
            assert_eq!(out.entry(i, j).norm(), 0.0);
            assert_eq!(out.entry(j, i).norm(), 0.0);
        }
        for (i, j) in [(0, 0), (1, 1), (2, 2), (3, 3), (0, 2), (1, 3)] {
            assert_abs_diff_eq!(
                (out.entry(i, j) - rho.entry(i, j)).norm(),
                0.0,
                epsilon = TOL
            );
        }
    }

    #[test]
    fn partial_dephasing_scales_cross_coherence() {
        let rho = probe();
        let p = 0.37;
        let out = apply(&rho, &dephasing_channel(p).unwrap()).unwrap();
        assert_abs_diff_eq!(
            out.entry(0, 1).re,
            (1.0 - p) * rho.entry(0, 1).re,
            epsilon = TOL
        );
        assert_abs_diff_eq!(out.entry(0, 0).re, rho.entry(0, 0).re, epsilon = TOL);
        assert_abs_diff_eq!(out.entry(1, 3).re, rho.entry(1, 3).re, epsilon = TOL);
    }

    #[test]
    fn full_scattering_swaps_populations() {
        let rho = probe();
        let out = apply(&rho, &scattering_channel(1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(out.entry(0, 0).re, rho.entry(1, 1).re, epsilon = TOL);
        assert_abs_diff_eq!(out.entry(1, 1).re, rho.entry(0, 0).re, epsilon = TOL);
        assert_abs_diff_eq!(out.entry(2, 2).re, rho.entry(3, 3).re, epsilon = TOL);
        assert_abs_diff_eq!(out.entry(3, 3).re, rho.entry(2, 2).re, epsilon = TOL);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(out.entry(i, j).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn scattering_moves_single_path_population() {
        let h1 = from_pure(&crate::state::psi1(1.0).unwrap()).unwrap();
        let p = 0.25;
        let out = apply(&h1, &scattering_channel(p).unwrap()).unwrap();
        assert_abs_diff_eq!(out.entry(0, 0).re, 1.0 - p, epsilon = TOL);
        assert_abs_diff_eq!(out.entry(1, 1).re, p, epsilon = TOL);
        assert_abs_diff_eq!(out.matrix().trace().re, 1.0, epsilon = TOL);
    }

    #[test]
    fn apply_preserves_density_matrix_axioms() {
        for seed in 0..50u64 {
            let rho = crate::state::random_mixed(seed, (seed % 4 + 1) as usize).unwrap();
            let p = (seed as f64 * 0.019) % 1.0;
            for model in [ChannelModel::Dephasing, ChannelModel::Scattering] {
                let out = apply(&rho, &model.channel(p).unwrap()).unwrap();
                let rep = validate(&out, 1e-9).unwrap();
                assert!(rep.is_valid, "model {model}, seed {seed}: {rep:?}");
                assert_abs_diff_eq!(out.matrix().trace().re, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_at_t_zero_is_identity() {
        let rho = probe();
        for model in [ChannelModel::Dephasing, ChannelModel::Scattering] {
            let out = evolve_closed_form(&rho, model, 1.0, 0.0).unwrap();
            assert_eq!(out, rho);
        }
        assert!(evolve_closed_form(&rho, ChannelModel::Dephasing, -1.0, 1.0).is_err());
        assert!(evolve_closed_form(&rho, ChannelModel::Dephasing, 1.0, -1.0).is_err());
    }

    #[test]
    fn dephasing_closed_form_trajectory_values() {
        let rho = probe();
        let gt = 1.0;
        let out = evolve_closed_form(&rho, ChannelModel::Dephasing, 1.0, gt).unwrap();
        let v = visibility(&out);
        let d = distinguishability(&out).unwrap();
        assert_abs_diff_eq!(
            v,
            (-gt).exp() * std::f64::consts::FRAC_1_SQRT_2,
            epsilon = TOL
        );
        assert_abs_diff_eq!(d, std::f64::consts::FRAC_1_SQRT_2, epsilon = TOL);
    }

    #[test]
    fn scattering_closed_form_long_time_limit() {
        // gamma*t = 40 puts exp(-gamma t) below 1e-17: numerically the fixed
        // point, where V -> 0 and D -> 1/2
        let out = evolve_closed_form(&probe(), ChannelModel::Scattering, 1.0, 40.0).unwrap();
        assert!(visibility(&out) < 1e-17);
        assert_abs_diff_eq!(distinguishability(&out).unwrap(), 0.5, epsilon = 1e-9);
        // the long-time state: unpolarized path 1, H-polarized path 2
        assert_abs_diff_eq!(out.entry(0, 0).re, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(out.entry(1, 1).re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(out.entry(2, 2).re, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(out.entry(3, 3).re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn iterated_with_zero_probability_is_identity() {
        let rho = probe();
        let out = evolve_iterated(&rho, ChannelModel::Dephasing, 1.0, 0.0, 1).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < TOL);
    }

    #[test]
    fn iterated_rejects_large_step_probability() {
        let rho = probe();
        assert!(matches!(
            evolve_iterated(&rho, ChannelModel::Dephasing, 1.0, 5.0, 5),
            Err(Error::StepProbabilityOutOfRange { .. })
        ));
        assert!(evolve_iterated(&rho, ChannelModel::Dephasing, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn dephasing_iterated_converges_to_closed_form() {
        let rho = probe();
        let closed = evolve_closed_form(&rho, ChannelModel::Dephasing, 1.0, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for n in [10usize, 100, 1000] {
            let it = evolve_iterated(&rho, ChannelModel::Dephasing, 1.0, 1.0, n).unwrap();
            let err = it.matrix().max_abs_diff(closed.matrix());
            assert!(err < last, "error not decreasing at n = {n}");
            last = err;
        }
        assert!(last < 5e-4, "n = 1000 deviation {last}");
    }

    #[test]
    fn dephasing_leaves_distinguishability_invariant() {
        for seed in 0..30u64 {
            let rho = crate::state::random_mixed(seed, 4).unwrap();
            let d0 = distinguishability(&rho).unwrap();
            for t in [0.1, 1.0, 7.0] {
                let out = evolve_closed_form(&rho, ChannelModel::Dephasing, 1.0, t).unwrap();
                assert_abs_diff_eq!(distinguishability(&out).unwrap(), d0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn trajectory_orders_and_reports() {
        let spec = EvolutionSpec {
            model: ChannelModel::Dephasing,
            gamma_rate: 1.0,
            t_grid: (0..50).map(|i| i as f64 * 0.1).collect(),
            method: EvolutionMethod::ClosedForm,
            n_steps: 0,
        };
        let traj = trajectory(&probe(), &spec, 1e-9).unwrap();
        assert_eq!(traj.len(), 50);
        for (t, rep) in &traj {
            assert_abs_diff_eq!(
                rep.visibility,
                (-t).exp() * std::f64::consts::FRAC_1_SQRT_2,
                epsilon = TOL
            );
            assert_abs_diff_eq!(
                rep.distinguishability,
                std::f64::consts::FRAC_1_SQRT_2,
                epsilon = TOL
            );
        }
    }

    #[test]
    fn scattering_trajectory_dips_and_recovers() {
        let grid: Vec<f64> = (0..200).map(|i| i as f64 * (5.0 / 199.0)).collect();
        let spec = EvolutionSpec {
            model: ChannelModel::Scattering,
            gamma_rate: 1.0,
            t_grid: grid,
            method: EvolutionMethod::ClosedForm,
            n_steps: 0,
        };
        let traj = trajectory(&probe(), &spec, 1e-9).unwrap();
        for (t, rep) in &traj {
            let g = (-t).exp();
            let expect_d = 0.5 * (g * g + (2.0 * g - 1.0) * (2.0 * g - 1.0)).sqrt();
            assert_abs_diff_eq!(rep.distinguishability, expect_d, epsilon = TOL);
            assert_abs_diff_eq!(
                rep.visibility,
                g * std::f64::consts::FRAC_1_SQRT_2,
                epsilon = TOL
            );
        }
        let (t_min, min_d) = traj
            .iter()
            .map(|(t, r)| (*t, r.distinguishability))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert!((min_d - 0.5 * 0.2f64.sqrt()).abs() < 1e-4, "min D = {min_d}");
        assert!((t_min - 0.916_290_731_874_155).abs() < 5.0 / 199.0, "argmin {t_min}");
        let last = traj.last().unwrap().1.distinguishability;
        assert!(last > 0.49, "recovery D = {last}");
    }

    #[test]
    fn trajectory_rejects_bad_grids() {
        let rho = probe();
        let base = EvolutionSpec {
            model: ChannelModel::Dephasing,
            gamma_rate: 1.0,
            t_grid: vec![0.0, 1.0],
            method: EvolutionMethod::ClosedForm,
            n_steps: 0,
        };
        let mut s = base.clone();
        s.t_grid = vec![];
        assert!(trajectory(&rho, &s, 1e-9).is_err());
        let mut s = base.clone();
        s.t_grid = vec![1.0, 0.5];
        assert!(trajectory(&rho, &s, 1e-9).is_err());
        let mut s = base.clone();
        s.t_grid = vec![-0.1, 0.5];
        assert!(trajectory(&rho, &s, 1e-9).is_err());
        let mut s = base;
        s.method = EvolutionMethod::Iterated;
        s.n_steps = 1;
        // p = 1.0 > 0.5
        assert!(matches!(
            trajectory(&rho, &s, 1e-9),
            Err(Error::StepProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn dephasing_decays_werner_singlet_coherence_but_not_d() {
        // the singlet coherence rho_23 couples H2 to V1, which are on
        // opposite paths, so it decays; D depends only on entries the map
        // leaves alone and stays at eta
        let eta = 0.6;
        let rho = werner(eta).unwrap();
        let t = 3.0;
        let out = evolve_closed_form(&rho, ChannelModel::Dephasing, 1.0, t).unwrap();
        assert_abs_diff_eq!(
            out.entry(1, 2).re,
            -(eta / 2.0) * (-t).exp(),
            epsilon = TOL
        );
        for i in 0..4 {
            assert_abs_diff_eq!(out.entry(i, i).re, rho.entry(i, i).re, epsilon = TOL);
        }
        assert_abs_diff_eq!(distinguishability(&out).unwrap(), eta, epsilon = TOL);
    }
}
