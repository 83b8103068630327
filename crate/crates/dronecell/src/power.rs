//! AsD uplink power control and the height-regime classifier.
//!
//! An AsD inverts the aerial path loss so that the ABS receives `rho_d` on
//! average, but never transmits above `p_max`. Pointwise that is simply
//! `min(p_max, (rho_d/eta_k) z^alpha_k)`; the piecewise coverage formulas
//! need to know where on the distance support the minimum switches, which is
//! what [`power_segments`] and [`classify_regime`] provide.

use std::fmt;

use crate::channel::LosState;
use crate::params::{regime_boundaries, SystemParams};

/// The height regime of the piecewise uplink formulas. Each variant names
/// the condition(s) it covers; conditions that share an integral structure
/// share a variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerRegime {
    /// ABS so high that every AsD transmits at `p_max` in either state.
    Cond1L,
    /// LOS split between inversion and cap; NLOS always capped.
    Cond4Or8,
    /// Both states split between inversion and cap.
    Cond5,
    /// LOS always inverting; NLOS always capped.
    Cond6,
    /// LOS always inverting; NLOS split.
    Cond7Or9,
    /// ABS low enough that both states stay under full inversion.
    Cond3N,
}

impl fmt::Display for PowerRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PowerRegime::Cond1L => "1L",
            PowerRegime::Cond4Or8 => "4or8",
            PowerRegime::Cond5 => "5",
            PowerRegime::Cond6 => "6",
            PowerRegime::Cond7Or9 => "7or9",
            PowerRegime::Cond3N => "3N",
        };
        f.write_str(s)
    }
}

/// Which branch of the power law applies on a distance segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerLaw {
    /// `(rho_d / eta_k) z^alpha_k`
    Inversion,
    /// `p_max`
    MaxPower,
}

/// One piece of the AsD distance support with a single power-law branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSegment {
    pub z_lo: f64,
    pub z_hi: f64,
    pub law: PowerLaw,
}

/// Instantaneous AsD transmit power at link distance `z` in the given LOS
/// state: the pointwise minimum of the inversion power and the cap.
pub fn asd_tx_power(state: LosState, z: f64, p: &SystemParams) -> f64 {
    let inv = (p.rho_d / state.eta(p)) * z.powf(state.alpha(p));
    inv.min(p.p_max)
}

/// Splits the AsD distance support `[h, sqrt(h^2 + r2^2)]` into the segments
/// where the state's power law is pure inversion or pure cap. The split
/// point, when interior, is `zmax_k = (p_max eta_k / rho_d)^(1/alpha_k)`.
pub fn power_segments(state: LosState, p: &SystemParams) -> Vec<PowerSegment> {
    let b = regime_boundaries(p);
    let zmax = match state {
        LosState::Los => b.zmax_los,
        LosState::Nlos => b.zmax_nlos,
    };
    let lo = p.h;
    let hi = p.asd_support_top();
    if lo >= zmax {
        vec![PowerSegment { z_lo: lo, z_hi: hi, law: PowerLaw::MaxPower }]
    } else if hi <= zmax {
        vec![PowerSegment { z_lo: lo, z_hi: hi, law: PowerLaw::Inversion }]
    } else {
        vec![
            PowerSegment { z_lo: lo, z_hi: zmax, law: PowerLaw::Inversion },
            PowerSegment { z_lo: zmax, z_hi: hi, law: PowerLaw::MaxPower },
        ]
    }
}

/// Maps the ABS height to the unique regime of the piecewise formulas.
///
/// Boundary ties follow the inclusive/exclusive marks of the published
/// conditions: `h >= zmax_los` is the full-cap regime, `h = zmax_nlos`
/// belongs to the regime whose NLOS branch is capped, and `h = hcrit_k`
/// counts as full inversion for state `k`.
pub fn classify_regime(p: &SystemParams) -> PowerRegime {
    let b = regime_boundaries(p);
    let h = p.h;
    if h >= b.zmax_los {
        return PowerRegime::Cond1L;
    }
    // cond 4: hcrit_L < zmax_N < h < zmax_L ; cond 8: zmax_N < hcrit_L <= h < zmax_L
    if (b.hcrit_los < b.zmax_nlos && b.zmax_nlos < h)
        || (b.zmax_nlos < b.hcrit_los && b.hcrit_los <= h)
    {
        return PowerRegime::Cond4Or8;
    }
    // cond 5: hcrit_L < h <= zmax_N
    if b.hcrit_los < h && h <= b.zmax_nlos {
        return PowerRegime::Cond5;
    }
    // cond 6: zmax_N <= h < hcrit_L
    if b.zmax_nlos <= h && h < b.hcrit_los {
        return PowerRegime::Cond6;
    }
    // cond 7: hcrit_N < h <= hcrit_L < zmax_N ; cond 9: hcrit_N < h < zmax_N < hcrit_L
    if b.hcrit_nlos < h && (h <= b.hcrit_los || h < b.zmax_nlos) {
        return PowerRegime::Cond7Or9;
    }
    PowerRegime::Cond3N
}
