//! Distance and angle distributions between the ABS and uniformly placed
//! ground nodes, plus the position samplers used by the simulator.
//!
//! Coordinate frame: the stadium center is the origin and the TBS sits at
//! `(d, 0)`. All angles (`theta` for AsDs, `omega` for TsUEs) are measured
//! at the stadium center between the node's ground projection and the TBS
//! direction.

use rand::Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// A point on the ground plane, in the stadium-centered frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPoint {
    pub x: f64,
    pub y: f64,
}

impl GroundPoint {
    /// AsD position; must lie inside the stadium disk.
    pub fn new_asd(x: f64, y: f64, p: &SystemParams) -> Result<Self> {
        if x * x + y * y > p.r2 * p.r2 {
            return Err(Error::DomainError {
                op: "GroundPoint::new_asd",
                reason: format!("({x}, {y}) lies outside the stadium"),
            });
        }
        Ok(GroundPoint { x, y })
    }

    /// TsUE position; must lie inside the cell but outside the stadium.
    pub fn new_tsue(x: f64, y: f64, p: &SystemParams) -> Result<Self> {
        let dx = x - p.d;
        if x * x + y * y < p.r2 * p.r2 || dx * dx + y * y > p.r1 * p.r1 {
            return Err(Error::DomainError {
                op: "GroundPoint::new_tsue",
                reason: format!("({x}, {y}) is not in the cell-minus-stadium region"),
            });
        }
        Ok(GroundPoint { x, y })
    }

    /// Ground distance to the stadium center.
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Ground distance to the TBS at `(d, 0)`.
    pub fn distance_to_tbs(&self, d: f64) -> f64 {
        (self.x - d).hypot(self.y)
    }

    /// 3-D distance to the ABS hovering `h` above the origin.
    pub fn slant_distance(&self, h: f64) -> f64 {
        self.radius().hypot(h)
    }

    /// Angle at the stadium center between this point and the TBS direction.
    pub fn angle_from_tbs(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Half-angle of the circle of ground radius `r` (centered at the stadium
/// center) that lies inside the cell of radius `r1` centered `d` away.
///
/// Total on `r >= 0`: `pi` when the circle is entirely inside the cell, `0`
/// when entirely outside, otherwise the arc half-angle from the cosine rule.
pub fn half_angle_in_cell(r: f64, r1: f64, d: f64) -> f64 {
    if d == 0.0 {
        return if r <= r1 { PI } else { 0.0 };
    }
    if r == 0.0 {
        return if d <= r1 { PI } else { 0.0 };
    }
    let arg = (d * d + r * r - r1 * r1) / (2.0 * d * r);
    if arg >= 1.0 {
        0.0
    } else if arg <= -1.0 {
        PI
    } else {
        arg.acos()
    }
}

/// Area of the intersection of two disks with radii `ra`, `rb` and center
/// separation `d`.
fn lens_area(ra: f64, rb: f64, d: f64) -> f64 {
    let (small, big) = if ra < rb { (ra, rb) } else { (rb, ra) };
    if d + small <= big {
        return PI * small * small;
    }
    if d >= small + big {
        return 0.0;
    }
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    let a2 = small * small;
    let b2 = big * big;
    let d2 = d * d;
    let alpha = clamp((d2 + a2 - b2) / (2.0 * d * small)).acos();
    let beta = clamp((d2 + b2 - a2) / (2.0 * d * big)).acos();
    a2 * (alpha - alpha.sin() * alpha.cos()) + b2 * (beta - beta.sin() * beta.cos())
}

/// Area of the TsUE region (cell minus stadium).
///
/// Equals `pi (r1^2 - r2^2)` whenever the stadium is contained in the cell;
/// for relaxed geometries the overlap is computed exactly so the distance
/// pdf stays normalized.
pub fn tsue_region_area(p: &SystemParams) -> f64 {
    PI * p.r1 * p.r1 - lens_area(p.r1, p.r2, p.d)
}

/// pdf of the 3-D distance between the ABS and a uniform AsD:
/// `2z/r2^2` on `[h, sqrt(h^2 + r2^2)]`.
pub fn pdf_zd(z: f64, p: &SystemParams) -> f64 {
    if z < p.h || z > p.asd_support_top() {
        0.0
    } else {
        2.0 * z / (p.r2 * p.r2)
    }
}

/// pdf of the ground projection distance of a uniform TsUE.
fn pdf_tsue_radius(r: f64, p: &SystemParams) -> f64 {
    if r < p.r2 {
        return 0.0;
    }
    2.0 * r * half_angle_in_cell(r, p.r1, p.d) / tsue_region_area(p)
}

/// pdf of the 3-D distance between the ABS and a uniform TsUE.
///
/// Two branches: `2z/(r1^2 - r2^2)` while the ground circle stays inside
/// the cell, then `2 z omega_hat / (pi (r1^2 - r2^2))` on the arc branch up
/// to `sqrt((r1 + d)^2 + h^2)`.
pub fn pdf_zc(z: f64, p: &SystemParams) -> f64 {
    let r2 = z * z - p.h * p.h;
    if r2 <= 0.0 {
        return 0.0;
    }
    let r = r2.sqrt();
    pdf_tsue_radius(r, p) * z / r
}

/// Half-angle of the arc of ground radius `sqrt(z^2 - h^2)` inside the cell,
/// on the arc branch of the TsUE distance distribution.
///
/// Computed as `arccos((d^2 + r^2 - r1^2) / (2 d r))`; the secant form of the
/// same angle is used as a cross-check in the tests.
pub fn omega_hat(z: f64, p: &SystemParams) -> Result<f64> {
    if p.d <= 0.0 {
        return Err(Error::DomainError {
            op: "omega_hat",
            reason: "arc branch requires d > 0".into(),
        });
    }
    let lo = ((p.r1 - p.d).powi(2) + p.h * p.h).sqrt();
    let hi = ((p.r1 + p.d).powi(2) + p.h * p.h).sqrt();
    if !(z > lo && z <= hi) {
        return Err(Error::DomainError {
            op: "omega_hat",
            reason: format!("z = {z} outside the arc branch ({lo}, {hi}]"),
        });
    }
    Ok(half_angle_in_cell((z * z - p.h * p.h).sqrt(), p.r1, p.d))
}

/// Conditional pdf of the angle between a TsUE's ground projection and the
/// TBS direction, given its slant distance `z`: `1/(2 pi)` on the ring
/// branch, `1/(2 omega_hat)` on `[-omega_hat, omega_hat]` on the arc branch.
pub fn pdf_omega(omega: f64, z: f64, p: &SystemParams) -> Result<f64> {
    let lo = (p.r2 * p.r2 + p.h * p.h).sqrt();
    let mid = ((p.r1 - p.d).powi(2) + p.h * p.h).sqrt();
    let hi = ((p.r1 + p.d).powi(2) + p.h * p.h).sqrt();
    if !(z >= lo && z <= hi) {
        return Err(Error::DomainError {
            op: "pdf_omega",
            reason: format!("z = {z} outside the TsUE distance support [{lo}, {hi}]"),
        });
    }
    if z <= mid {
        Ok(1.0 / (2.0 * PI))
    } else {
        let w = omega_hat(z, p)?;
        if omega.abs() <= w {
            Ok(1.0 / (2.0 * w))
        } else {
            Ok(0.0)
        }
    }
}

/// Ground distance from a node at slant distance `z` and center angle
/// `angle` to the TBS, by the cosine rule:
/// `sqrt(z^2 - h^2 + d^2 - 2 sqrt(z^2 - h^2) d cos(angle))`.
pub fn ground_distance_to_tbs(z: f64, angle: f64, p: &SystemParams) -> f64 {
    let r2 = (z * z - p.h * p.h).max(0.0);
    let r = r2.sqrt();
    (r2 + p.d * p.d - 2.0 * r * p.d * angle.cos()).max(0.0).sqrt()
}

/// Uniform sample inside the stadium disk (polar inversion).
pub fn sample_asd_position(rng: &mut impl Rng, p: &SystemParams) -> GroundPoint {
    let r = p.r2 * rng.random::<f64>().sqrt();
    let phi = 2.0 * PI * rng.random::<f64>();
    GroundPoint {
        x: r * phi.cos(),
        y: r * phi.sin(),
    }
}

/// Uniform sample over the cell minus the stadium, by rejection from the
/// cell disk (expected acceptance `(r1^2 - r2^2)/r1^2`).
pub fn sample_tsue_position(rng: &mut impl Rng, p: &SystemParams) -> GroundPoint {
    loop {
        let r = p.r1 * rng.random::<f64>().sqrt();
        let phi = 2.0 * PI * rng.random::<f64>();
        let x = p.d + r * phi.cos();
        let y = r * phi.sin();
        if x * x + y * y >= p.r2 * p.r2 {
            return GroundPoint { x, y };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadratureSpec};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn pdf_zd_endpoints_and_normalization() {
        let p = p();
        assert_relative_eq!(pdf_zd(p.h, &p), 2.0 * p.h / (p.r2 * p.r2));
        assert_eq!(pdf_zd(p.h - 1.0, &p), 0.0);
        assert_eq!(pdf_zd(p.asd_support_top() + 1.0, &p), 0.0);
        let (mass, _) = integrate(
            |z| pdf_zd(z, &p),
            p.h,
            p.asd_support_top(),
            &[],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_relative_eq!(mass, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn pdf_zc_normalizes_and_is_continuous_at_branch_point() {
        for d in [0.0, 120.0, 200.0, 380.0] {
            let p = SystemParams::default().with_distance(d);
            let lo = (p.r2 * p.r2 + p.h * p.h).sqrt();
            let mid = ((p.r1 - p.d).powi(2) + p.h * p.h).sqrt();
            let hi = ((p.r1 + p.d).powi(2) + p.h * p.h).sqrt();
            let (mass, _) = integrate(
                |z| pdf_zc(z, &p),
                lo,
                hi,
                &[mid],
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert_relative_eq!(mass, 1.0, epsilon = 1e-8);
            if d > 0.0 {
                let below = pdf_zc(mid - 1e-9, &p);
                let above = pdf_zc(mid + 1e-9, &p);
                assert_relative_eq!(below, above, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn pdf_zc_single_branch_when_concentric() {
        let p = SystemParams::default().with_distance(0.0);
        let z = 300.0;
        assert_relative_eq!(pdf_zc(z, &p), 2.0 * z / (p.r1 * p.r1 - p.r2 * p.r2));
        assert_eq!(pdf_zc((p.r1 * p.r1 + p.h * p.h).sqrt() + 1.0, &p), 0.0);
    }

    #[test]
    fn omega_hat_matches_secant_form_and_endpoints() {
        let p = SystemParams::default().with_height(300.0);
        // arcsec(x) = arccos(1/x) on the arc branch
        let z = 700.0;
        let w = omega_hat(z, &p).unwrap();
        let r2 = z * z - p.h * p.h;
        let sec_arg = 2.0 * p.d * r2.sqrt() / (p.d * p.d + r2 - p.r1 * p.r1);
        assert_relative_eq!(w, (1.0 / sec_arg).acos(), epsilon = 1e-12);

        let hi = ((p.r1 + p.d).powi(2) + p.h * p.h).sqrt();
        assert_relative_eq!(omega_hat(hi, &p).unwrap(), 0.0, epsilon = 1e-6);
        let lo = ((p.r1 - p.d).powi(2) + p.h * p.h).sqrt();
        assert_relative_eq!(omega_hat(lo + 1e-9, &p).unwrap(), PI, epsilon = 1e-3);
        assert!(omega_hat(lo - 1.0, &p).is_err());
    }

    #[test]
    fn pdf_omega_branches() {
        let p = p();
        let ring_z = (p.r2 * p.r2 + p.h * p.h).sqrt() + 10.0;
        assert_relative_eq!(pdf_omega(1.0, ring_z, &p).unwrap(), 1.0 / (2.0 * PI));
        let arc_z = ((p.r1 - p.d).powi(2) + p.h * p.h).sqrt() + 50.0;
        let w = omega_hat(arc_z, &p).unwrap();
        let f = pdf_omega(0.0, arc_z, &p).unwrap();
        assert_relative_eq!(f * 2.0 * w, 1.0, epsilon = 1e-12);
        assert_eq!(pdf_omega(w + 0.1, arc_z, &p).unwrap(), 0.0);
        assert!(pdf_omega(0.0, 1e9, &p).is_err());
    }

    #[test]
    fn cosine_rule_distance_examples() {
        let p = p();
        assert_relative_eq!(ground_distance_to_tbs(p.h, 0.0, &p), p.d);
        // node whose ground projection sits exactly at the TBS foot
        let z = (p.h * p.h + p.d * p.d).sqrt();
        assert_relative_eq!(ground_distance_to_tbs(z, 0.0, &p), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn region_area_matches_annulus_in_contract() {
        let p = p();
        assert_relative_eq!(
            tsue_region_area(&p),
            PI * (p.r1 * p.r1 - p.r2 * p.r2),
            max_relative = 1e-14
        );
        // disjoint disks: no hole at all
        let far = SystemParams::default().with_distance(5000.0);
        assert_relative_eq!(tsue_region_area(&far), PI * far.r1 * far.r1, max_relative = 1e-14);
    }

    #[test]
    fn samplers_respect_regions() {
        let p = p();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let a = sample_asd_position(&mut rng, &p);
            assert!(a.radius() <= p.r2 + 1e-9);
            let t = sample_tsue_position(&mut rng, &p);
            assert!(t.radius() >= p.r2);
            assert!(t.distance_to_tbs(p.d) <= p.r1 + 1e-9);
        }
    }

    proptest! {
        #[test]
        fn omega_hat_strictly_decreasing(seed in 0u64..1000) {
            let p = SystemParams::default().with_height(250.0);
            let lo = ((p.r1 - p.d).powi(2) + p.h * p.h).sqrt();
            let hi = ((p.r1 + p.d).powi(2) + p.h * p.h).sqrt();
            let t = (seed as f64 + 0.5) / 1000.0;
            let z1 = lo + t * (hi - lo) * 0.9 + 1e-6;
            let z2 = z1 + (hi - z1) * 0.5;
            prop_assert!(omega_hat(z1, &p).unwrap() > omega_hat(z2, &p).unwrap());
        }

        #[test]
        fn cosine_rule_matches_coordinates(r in 0.0f64..100.0, ang in -PI..PI) {
            let p = SystemParams::default();
            let z = (r * r + p.h * p.h).sqrt();
            let direct = GroundPoint { x: r * ang.cos(), y: r * ang.sin() }.distance_to_tbs(p.d);
            let by_rule = ground_distance_to_tbs(z, ang, &p);
            prop_assert!((direct - by_rule).abs() <= 1e-9 * direct.max(1.0));
            // triangle inequality
            prop_assert!(by_rule <= r + p.d + 1e-9);
        }
    }
}
