//! Globally adaptive Gauss–Kronrod quadrature with explicit breakpoints and
//! shared-evaluation vector integrands.
//!
//! The coverage integrands are smooth per power-law branch, so a 7/15-point
//! Kronrod pair with bisection of the worst panel converges fast as long as
//! branch boundaries are seeded as panel edges. Vector integrands let one
//! pass produce every Laplace-transform derivative order needed by the
//! Nakagami coverage sums, with per-component error control.

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Values carried per quadrature evaluation; inline up to eight components
/// (one per derivative order), heap beyond.
pub type Components = SmallVec<[f64; 8]>;

/// Tolerances and subdivision limit for one adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on each component of the integral.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum bisection depth of any panel.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-6,
            abs_tol: 1e-9,
            max_depth: 30,
        }
    }
}

impl QuadratureSpec {
    /// Spec for an integral nested inside one using `self`: one order
    /// tighter, so inner error stays below the outer error budget.
    pub fn inner(&self) -> Self {
        QuadratureSpec {
            rel_tol: (self.rel_tol / 10.0).max(1e-13),
            abs_tol: (self.abs_tol / 10.0).max(1e-16),
            max_depth: self.max_depth,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_depth >= 1) {
            return Err(Error::invalid(
                "quadrature",
                "tolerances must be positive and max_depth >= 1",
            ));
        }
        Ok(())
    }
}

// 15-point Kronrod abscissae (positive half), the interleaved 7-point Gauss
// weights, and the Kronrod weights. QUADPACK values.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    value: Components,
    err: Components,
}

/// One Gauss–Kronrod pass over `[a, b]`; `f` writes its components into the
/// scratch slice. Returns the Kronrod estimate and `|K15 - G7|` per
/// component.
fn gk15<F>(f: &F, a: f64, b: f64, n: usize) -> Result<(Components, Components)>
where
    F: Fn(f64, &mut [f64]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron: Components = smallvec::smallvec![0.0; n];
    let mut gauss: Components = smallvec::smallvec![0.0; n];
    let mut scratch: Components = smallvec::smallvec![0.0; n];

    let mut eval = |x: f64, scratch: &mut [f64]| -> Result<()> {
        f(x, scratch);
        for v in scratch.iter() {
            if !v.is_finite() {
                return Err(Error::PrecisionLoss {
                    op: "quadrature",
                    reason: format!("integrand returned {v} at x = {x}"),
                });
            }
        }
        Ok(())
    };

    eval(center, &mut scratch)?;
    for i in 0..n {
        kron[i] += WGK[7] * scratch[i];
        gauss[i] += WG[3] * scratch[i];
    }
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let off = half * x;
        let mut sum: Components = smallvec::smallvec![0.0; n];
        eval(center - off, &mut scratch)?;
        for i in 0..n {
            sum[i] += scratch[i];
        }
        eval(center + off, &mut scratch)?;
        for i in 0..n {
            sum[i] += scratch[i];
        }
        for i in 0..n {
            kron[i] += WGK[j] * sum[i];
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * sum[i];
            }
        }
    }
    let mut err: Components = smallvec::smallvec![0.0; n];
    for i in 0..n {
        kron[i] *= half;
        err[i] = (kron[i] - gauss[i] * half).abs();
    }
    Ok((kron, err))
}

/// Integral and error bound of a vector-valued integrand over `[a, b]`.
///
/// `breakpoints` are seeded as initial panel edges so the adaptive rule
/// never straddles a known kink; points outside `(a, b)` are ignored. The
/// returned error is the summed per-component Kronrod bound; it satisfies
/// `err_i <= max(abs_tol, rel_tol |I_i|)` on success.
pub fn integrate_multi<F>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    n: usize,
    spec: &QuadratureSpec,
) -> Result<(Components, Components)>
where
    F: Fn(f64, &mut [f64]),
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::invalid("quadrature", format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok((smallvec::smallvec![0.0; n], smallvec::smallvec![0.0; n]));
    }

    let mut edges: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > a && *x < b)
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges.insert(0, a);
    edges.push(b);

    let mut panels: Vec<Panel> = Vec::with_capacity(edges.len() + 16);
    for w in edges.windows(2) {
        let (value, err) = gk15(&f, w[0], w[1], n)?;
        panels.push(Panel { a: w[0], b: w[1], depth: 0, value, err });
    }

    const MAX_PANELS: usize = 4096;
    loop {
        let mut total: Components = smallvec::smallvec![0.0; n];
        let mut toterr: Components = smallvec::smallvec![0.0; n];
        for p in &panels {
            for i in 0..n {
                total[i] += p.value[i];
                toterr[i] += p.err[i];
            }
        }
        let tol = |i: usize, total: &Components| spec.abs_tol.max(spec.rel_tol * total[i].abs());
        let converged = (0..n).all(|i| toterr[i] <= tol(i, &total));
        if converged {
            return Ok((total, toterr));
        }

        // split the panel with the worst normalized error
        let (worst_idx, _) = panels
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                let sev = (0..n)
                    .map(|i| p.err[i] / tol(i, &total))
                    .fold(0.0f64, f64::max);
                (idx, sev)
            })
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("at least one panel");

        let worst = &panels[worst_idx];
        let max_err = worst.err.iter().copied().fold(0.0f64, f64::max);
        if worst.depth >= spec.max_depth || panels.len() >= MAX_PANELS {
            let worst_tol = (0..n)
                .map(|i| tol(i, &total))
                .fold(f64::INFINITY, f64::min);
            return Err(Error::QuadratureFailure {
                err: toterr.iter().copied().fold(0.0f64, f64::max).max(max_err),
                tol: worst_tol,
            });
        }

        let mid = 0.5 * (worst.a + worst.b);
        let (a0, b0, depth) = (worst.a, worst.b, worst.depth + 1);
        let (v1, e1) = gk15(&f, a0, mid, n)?;
        let (v2, e2) = gk15(&f, mid, b0, n)?;
        panels[worst_idx] = Panel { a: a0, b: mid, depth, value: v1, err: e1 };
        panels.push(Panel { a: mid, b: b0, depth, value: v2, err: e2 });
    }
}

/// Scalar adaptive integral; see [`integrate_multi`].
pub fn integrate<F>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let (v, e) = integrate_multi(|x, out| out[0] = f(x), a, b, breakpoints, 1, spec)?;
    Ok((v[0], e[0]))
}
