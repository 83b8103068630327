//! Aerial LOS probability models, path gains and fading laws.

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::{AerialEnvironment, LosModel, SystemParams};

/// Line-of-sight state of an aerial link. Selects which
/// `(eta, alpha, m)` triple applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LosState {
    Los,
    Nlos,
}

impl LosState {
    pub fn eta(self, p: &SystemParams) -> f64 {
        match self {
            LosState::Los => p.eta_los,
            LosState::Nlos => p.eta_nlos,
        }
    }

    pub fn alpha(self, p: &SystemParams) -> f64 {
        match self {
            LosState::Los => p.alpha_los,
            LosState::Nlos => p.alpha_nlos,
        }
    }

    pub fn nakagami_m(self, p: &SystemParams) -> u32 {
        match self {
            LosState::Los => p.m_los,
            LosState::Nlos => p.m_nlos,
        }
    }
}

/// LOS probability of an aerial link from the ABS at height `h` to a ground
/// node at 3-D distance `z`, under the given environment.
///
/// Model 1: `1 / (1 + C exp(-B [elev_deg - C]))`.
/// Model 2: `C (elev_deg - 15)^B`, clamped into `[0, 1]` (the fit is only
/// valid above 15 degrees of elevation; below it the link is treated as
/// NLOS).
pub fn p_los(env: &AerialEnvironment, h: f64, z: f64) -> Result<f64> {
    if !(h > 0.0) || z < h {
        return Err(Error::DomainError {
            op: "p_los",
            reason: format!("need 0 < h <= z, got h = {h}, z = {z}"),
        });
    }
    let elev_deg = (h / z).min(1.0).asin().to_degrees();
    Ok(match env.model {
        LosModel::Model1 => 1.0 / (1.0 + env.c * (-env.b * (elev_deg - env.c)).exp()),
        LosModel::Model2 => {
            let base = elev_deg - 15.0;
            if base <= 0.0 {
                0.0
            } else {
                (env.c * base.powf(env.b)).clamp(0.0, 1.0)
            }
        }
    })
}

/// NLOS probability, `1 - p_los`.
pub fn p_nlos(env: &AerialEnvironment, h: f64, z: f64) -> Result<f64> {
    Ok(1.0 - p_los(env, h, z)?)
}

/// Aerial path gain `eta_k z^(-alpha_k)` for the given LOS state.
pub fn aerial_path_gain(state: LosState, z: f64, p: &SystemParams) -> f64 {
    state.eta(p) * z.powf(-state.alpha(p))
}

/// Which fading law a link experiences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingChannel {
    /// Rayleigh fading: unit-mean exponential power gain.
    Terrestrial,
    /// Nakagami-m fading: unit-mean gamma power gain with the shape of the
    /// link's LOS state.
    Aerial(LosState),
}

/// Unit-mean exponential draw.
pub(crate) fn sample_exp(rng: &mut impl Rng) -> f64 {
    // 1 - u is in (0, 1], so the log never sees zero.
    -(1.0 - rng.random::<f64>()).ln()
}

/// Unit-mean gamma draw with integer shape `m` (mean of `m` unit
/// exponentials). Integer shapes are guaranteed by parameter validation.
pub(crate) fn sample_unit_gamma(m: u32, rng: &mut impl Rng) -> f64 {
    let mut acc = 0.0;
    for _ in 0..m {
        acc += sample_exp(rng);
    }
    acc / m as f64
}

/// Samples a fading power gain. Every law here has mean exactly 1, so the
/// average received power is path gain times transmit power, as the
/// channel-inversion power control presumes.
pub fn sample_fading(channel: FadingChannel, p: &SystemParams, rng: &mut impl Rng) -> f64 {
    match channel {
        FadingChannel::Terrestrial => sample_exp(rng),
        FadingChannel::Aerial(state) => sample_unit_gamma(state.nakagami_m(p), rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn model1_urban_at_zenith() {
        let env = AerialEnvironment::preset(LosModel::Model1, "urban").unwrap();
        let v = p_los(&env, 300.0, 300.0).unwrap();
        assert_relative_eq!(v, 0.9999709484341894, max_relative = 1e-10);
        assert_relative_eq!(v + p_nlos(&env, 300.0, 300.0).unwrap(), 1.0);
    }

    #[test]
    fn model2_urban_at_zenith_and_low_elevation() {
        let env = AerialEnvironment::preset(LosModel::Model2, "urban").unwrap();
        let v = p_los(&env, 300.0, 300.0).unwrap();
        assert_relative_eq!(v, 0.9647348991637159, max_relative = 1e-10);
        // elevation below 15 degrees clamps to pure NLOS
        let z = 300.0 / (15f64.to_radians().sin()) + 100.0;
        assert_eq!(p_los(&env, 300.0, z).unwrap(), 0.0);
    }

    #[test]
    fn p_los_rejects_h_above_z() {
        let env = AerialEnvironment::preset(LosModel::Model1, "urban").unwrap();
        assert!(p_los(&env, 300.0, 200.0).is_err());
    }

    #[test]
    fn p_los_nondecreasing_in_elevation() {
        for (model, name) in [(LosModel::Model1, "urban"), (LosModel::Model2, "urban")] {
            let env = AerialEnvironment::preset(model, name).unwrap();
            let h = 300.0;
            let mut prev = 0.0;
            // decreasing z means increasing elevation
            for i in 0..200 {
                let z = 3000.0 - i as f64 * (2700.0 / 199.0);
                let v = p_los(&env, h, z).unwrap();
                assert!(v >= prev - 1e-12, "model {model:?} not monotone at z = {z}");
                prev = v;
            }
        }
    }

    #[test]
    fn path_gain_examples() {
        let p = SystemParams::default();
        assert_relative_eq!(aerial_path_gain(LosState::Los, 1.0, &p), p.eta_los);
        assert_relative_eq!(
            aerial_path_gain(LosState::Nlos, 100.0, &p),
            1e-10,
            max_relative = 1e-12
        );
        // LOS beats NLOS beyond 1 m and both decay with distance
        for z in [2.0, 10.0, 300.0, 1000.0] {
            assert!(aerial_path_gain(LosState::Los, z, &p) > aerial_path_gain(LosState::Nlos, z, &p));
            assert!(
                aerial_path_gain(LosState::Los, z, &p) > aerial_path_gain(LosState::Los, z + 1.0, &p)
            );
        }
    }

    #[test]
    fn fading_moments() {
        let p = SystemParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let g = sample_fading(FadingChannel::Aerial(LosState::Los), &p, &mut rng);
            sum += g;
            sumsq += g * g;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!((mean - 1.0).abs() < 0.005, "mean {mean}");
        assert!((var - 1.0 / p.m_los as f64).abs() < 0.02 / p.m_los as f64, "var {var}");

        let mut sum_t = 0.0;
        for _ in 0..n {
            sum_t += sample_fading(FadingChannel::Terrestrial, &p, &mut rng);
        }
        assert!((sum_t / n as f64 - 1.0).abs() < 0.005);
    }

    #[test]
    fn m_equal_one_is_exponential() {
        // shape-1 gamma and the terrestrial exponential are the same law;
        // with the same stream they are the same draw.
        let p = {
            let mut p = SystemParams::default();
            p.m_los = 1;
            p
        };
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = sample_fading(FadingChannel::Aerial(LosState::Los), &p, &mut a);
            let y = sample_fading(FadingChannel::Terrestrial, &p, &mut b);
            assert_eq!(x, y);
        }
    }
}
