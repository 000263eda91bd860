//! Acoustic and contact fields of the Lagrangian system in `(p, u, T)` and
//! `(α, u, T)` coordinates, genuine nonlinearity and the inflection locus.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::positive;
use crate::numerics::{find_root_with, Bracket, RootOptions};
use crate::thermo::{coef_a, coef_b, state_from_pt, GasModel, Ionization, ThermoState};
use crate::{Error, Result};

/// Positive root of `x³ - 51x² - 180x - 705`, rounded up. Above this value
/// of `Ti/T` no bound on α alone certifies genuine nonlinearity.
pub const GN_TAU_THRESHOLD: f64 = 54.5375;

/// Left-branch asymptotic coefficient: `α ~ 60 (T/Ti)³`.
pub const LEFT_BRANCH_COEFFICIENT: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coords {
    PT,
    AlphaT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Minus,
    Plus,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::Minus => -1.0,
            Family::Plus => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition {
    pub lambda_minus: f64,
    pub lambda_zero: f64,
    pub lambda_plus: f64,
    pub r_minus: [f64; 3],
    pub r_zero: [f64; 3],
    pub r_plus: [f64; 3],
    pub coords: Coords,
}

pub(crate) fn lambda_from_parts(g: &GasModel, ion: &Ionization, t: f64, p: f64) -> f64 {
    let phi = 0.5 * ion.spread();
    let tau = g.ti / t;
    let a = coef_a(phi, 2.5 + tau);
    let b = coef_b(phi, tau);
    p * (a / (g.a2 * t * (1.0 + ion.alpha()) * b)).sqrt()
}

/// Lagrangian sound speed `λ = sqrt(-η_T / (v_p η_T - v_T η_p))`.
pub fn lagrangian_sound_speed(g: &GasModel, p: f64, t: f64) -> Result<f64> {
    Ok(state_from_pt(g, p, t)?.lambda)
}

/// Eulerian characteristic speeds `(u - λ, u, u + λ)`.
pub fn eulerian_speeds(state: &ThermoState, u: f64) -> [f64; 3] {
    [u - state.lambda, u, u + state.lambda]
}

/// `-η_p/η_T = T(1 + φq)/(pA)`, the temperature change per unit pressure
/// along an isentrope.
fn isentropic_dt_dp(s: &ThermoState) -> f64 {
    s.t * (1.0 + s.phi() * s.q()) / (s.p * s.coef_a())
}

pub fn eigen(s: &ThermoState, coords: Coords) -> EigenDecomposition {
    let lambda = s.lambda;
    let (r_minus, r_zero, r_plus) = match coords {
        Coords::PT => {
            let w = isentropic_dt_dp(s);
            (
                [-1.0, 1.0 / lambda, -w],
                [0.0, 0.0, 1.0],
                [1.0, 1.0 / lambda, w],
            )
        }
        Coords::AlphaT => {
            let ion = s.ionization();
            // α(1 - α²)/2
            let half_a1 = 0.5 * ion.spread() * (1.0 + s.alpha);
            let a = s.coef_a();
            let da = half_a1 * s.tau() / a;
            let dt = (1.0 + s.phi() * s.q()) * s.t / a;
            let du = s.p / lambda;
            ([-da, du, -dt], [half_a1 * s.q(), 0.0, s.t], [da, du, dt])
        }
    };
    EigenDecomposition {
        lambda_minus: -lambda,
        lambda_zero: 0.0,
        lambda_plus: lambda,
        r_minus,
        r_zero,
        r_plus,
        coords,
    }
}

pub(crate) fn gnl_parts(spread: f64, alpha: f64, tau: f64) -> f64 {
    let phi = 0.5 * spread;
    let q = 2.5 + tau;
    let a = coef_a(phi, q);
    let b = coef_b(phi, tau);
    let pq = 1.0 + phi * q;
    1.0 + 0.5 * phi * (q * q - q + 1.25)
        + phi / (2.0 * a * b) * tau * tau * (pq * pq - 0.5 * (1.0 + alpha) * (0.5 - alpha) * tau)
}

/// The inflection function `f(α, T)`. Its sign is the sign of `R±∇λ±`.
pub fn gnl_indicator(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    Ok(gnl_parts(ion.spread(), alpha, g.ti / t))
}

/// `R₊∇ log λ₊ = 2f/(pA)` in `(p, u, T)` coordinates.
pub fn gnl_derivative(s: &ThermoState) -> f64 {
    let f = gnl_parts(s.ionization().spread(), s.alpha, s.tau());
    2.0 * f / (s.p * s.coef_a())
}

/// Sufficient condition for genuine nonlinearity of both acoustic fields.
pub fn is_gn_sufficient(g: &GasModel, alpha: f64, t: f64) -> bool {
    let r = t / g.ti;
    alpha <= LEFT_BRANCH_COEFFICIENT * r * r * r || g.ti / t <= GN_TAU_THRESHOLD
}

/// Lowest temperature covered by the `Ti/T` part of the certificate.
pub fn gn_guarantee_temperature(g: &GasModel) -> f64 {
    g.ti / GN_TAU_THRESHOLD
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `α ~ 60 (T/Ti)³`
    Left,
    /// `α ~ (T/Ti)^{3/2}`
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InflectionCurve {
    pub branch: Branch,
    /// `(α, T)` with `T` increasing.
    pub samples: Vec<(f64, f64)>,
}

/// Seeding of the sign-change search in `ln α` at each temperature.
#[derive(Debug, Clone, Copy)]
pub struct LocusScan {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub seeds: usize,
}

impl Default for LocusScan {
    fn default() -> Self {
        LocusScan {
            alpha_min: 1e-12,
            alpha_max: 0.5,
            seeds: 200,
        }
    }
}

pub fn trace_inflection_locus(
    g: &GasModel,
    t_range: (f64, f64),
    n: usize,
) -> Result<(InflectionCurve, InflectionCurve)> {
    trace_inflection_locus_with(g, t_range, n, &LocusScan::default())
}

/// Zeros of `α ↦ f(α, T)` at `n` log-spaced temperatures, split into the two
/// branches by comparison with the geometric mean of their asymptotes.
pub fn trace_inflection_locus_with(
    g: &GasModel,
    t_range: (f64, f64),
    n: usize,
    scan: &LocusScan,
) -> Result<(InflectionCurve, InflectionCurve)> {
    let (t_lo, t_hi) = t_range;
    positive("temperature", t_lo)?;
    if !(t_hi >= t_lo) || !t_hi.is_finite() {
        return Err(Error::OutOfRange {
            what: "temperature range",
            value: t_hi,
        });
    }
    if !(scan.alpha_min > 0.0 && scan.alpha_min < scan.alpha_max && scan.alpha_max < 1.0)
        || scan.seeds < 2
    {
        return Err(Error::OutOfRange {
            what: "locus scan",
            value: scan.alpha_min,
        });
    }
    let mut left = InflectionCurve {
        branch: Branch::Left,
        samples: Vec::new(),
    };
    let mut right = InflectionCurve {
        branch: Branch::Right,
        samples: Vec::new(),
    };
    let opts = RootOptions {
        rel_tol: 1e-15,
        abs_tol: 1e-14,
        max_iter: 200,
    };
    let (la, lb) = (scan.alpha_min.ln(), scan.alpha_max.ln());
    for i in 0..n {
        let frac = if n > 1 {
            i as f64 / (n - 1) as f64
        } else {
            0.0
        };
        let t = (t_lo.ln() + frac * (t_hi / t_lo).ln()).exp();
        let tau = g.ti / t;
        let f = |y: f64| {
            let ion = Ionization::from_ln_alpha(y).expect("scan stays inside (0, 1)");
            gnl_parts(ion.spread(), ion.alpha(), tau)
        };
        let split = (LEFT_BRANCH_COEFFICIENT * tau.powi(-3) * tau.powf(-1.5)).sqrt();
        let step = (lb - la) / (scan.seeds - 1) as f64;
        let mut y0 = la;
        let mut f0 = f(y0);
        for k in 1..scan.seeds {
            let y1 = if k + 1 == scan.seeds {
                lb
            } else {
                la + k as f64 * step
            };
            let f1 = f(y1);
            if f0.signum() != f1.signum() {
                let y = find_root_with(f, Bracket::new(y0, y1)?, &opts)?;
                let alpha = y.exp();
                if alpha < split {
                    left.samples.push((alpha, t));
                } else {
                    right.samples.push((alpha, t));
                }
            }
            y0 = y1;
            f0 = f1;
        }
    }
    Ok((left, right))
}
