//! Integral curves of the acoustic fields.
//!
//! Their projections on the `(α, T)` plane are the isentropes
//! `η(α, T) = η0`, solved in closed form as `T = (1+α)Ti/d(α)` with
//! `d(α) = 2 ln((1-α)/α) - (5/2)(1+α) + η0`. `d` vanishes at `α∞`, where
//! the temperature blows up. Entropies use the `(α, T)` form.
//!
//! Integration runs in the chart `s = ln α - ln(α∞ - α)`, which maps
//! `(0, α∞)` onto the real line and resolves both ends.

use alloc::vec::Vec;

use num_traits::Float;

use crate::characteristics::{gnl_parts, is_gn_sufficient, Family};
use crate::error::positive;
use crate::hugoniot::RefState;
use crate::numerics::{
    find_root_with, integrate_ode_through, log1p_exp, Bracket, OdeOptions, RootOptions,
};
use crate::thermo::{coef_a, coef_b, entropy_ionization_t, ln_pressure, GasModel, Ionization};
use crate::{Error, Result};

/// Closest approach to `α∞` accepted by the integrators, relative to `α∞`.
pub const BLOWUP_GUARD: f64 = 1e-12;

const ODE_TOL: f64 = 1e-12;

/// ODE options whose absolute floor is `ODE_TOL` times the velocity scale,
/// since `u` may start at zero.
fn ode_options(g: &GasModel, t_scale: f64) -> OdeOptions {
    OdeOptions {
        abs_tol: ODE_TOL * g.a() * t_scale.sqrt(),
        ..OdeOptions::new(ODE_TOL)
    }
}

/// `2 ln((1-α)/α) - (5/2)(1+α) + η0`, the denominator of the isentrope.
fn denominator(ion: &Ionization, eta0: f64) -> f64 {
    -2.0 * ion.logit() - 2.5 * (1.0 + ion.alpha()) + eta0
}

/// The blow-up degree `α∞(η0)`, returned as an [`Ionization`] so that both
/// `α∞` and `1 - α∞` keep full precision.
pub fn alpha_infinity_ion(eta0: f64) -> Result<Ionization> {
    if !eta0.is_finite() {
        return Err(Error::OutOfRange {
            what: "entropy",
            value: eta0,
        });
    }
    // In z = logit α the residual is -2z - (5/2)(1+α) + η0, strictly
    // decreasing, and 5/2 < (5/2)(1+α) < 5 brackets the root.
    let f = |z: f64| -2.0 * z - 2.5 * (1.0 + (-log1p_exp(-z)).exp()) + eta0;
    let b = Bracket::new(0.5 * (eta0 - 5.0) - 1e-3, 0.5 * (eta0 - 2.5) + 1e-3)?;
    let opts = RootOptions {
        rel_tol: 1e-15,
        abs_tol: 1e-16,
        max_iter: 200,
    };
    Ionization::from_logit(find_root_with(f, b, &opts)?)
}

pub fn alpha_infinity(eta0: f64) -> Result<f64> {
    Ok(alpha_infinity_ion(eta0)?.alpha())
}

/// Residual of the blow-up equation at `alpha`.
pub fn alpha_infinity_residual(alpha: f64, eta0: f64) -> Result<f64> {
    Ok(denominator(&Ionization::new(alpha)?, eta0))
}

/// An isentrope `η = η0` with its blow-up point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsentropeLevel {
    pub eta0: f64,
    alpha_inf: Ionization,
}

impl IsentropeLevel {
    pub fn new(eta0: f64) -> Result<Self> {
        Ok(IsentropeLevel {
            eta0,
            alpha_inf: alpha_infinity_ion(eta0)?,
        })
    }

    /// The level through `(α, T)`.
    pub fn through(g: &GasModel, ion: &Ionization, t: f64) -> Result<Self> {
        Self::new(entropy_ionization_t(g, ion, t)?)
    }

    pub fn alpha_inf(&self) -> f64 {
        self.alpha_inf.alpha()
    }

    pub fn alpha_inf_ionization(&self) -> Ionization {
        self.alpha_inf
    }

    /// `s = ln α - ln(α∞ - α)`.
    pub fn chart(&self, alpha: f64) -> Result<f64> {
        let ai = self.alpha_inf();
        if !(alpha > 0.0 && alpha < ai) {
            return Err(Error::OutOfRange {
                what: "alpha on the physical branch",
                value: alpha,
            });
        }
        Ok(alpha.ln() - (ai - alpha).ln())
    }

    /// `(α, α∞ - α)` at chart coordinate `s`.
    pub fn from_chart(&self, s: f64) -> (f64, f64) {
        let ai = self.alpha_inf();
        (ai / (1.0 + (-s).exp()), ai / (1.0 + s.exp()))
    }

    /// `d(α)` from `δ = α∞ - α`, exact for any `0 < δ < α∞` and free of
    /// cancellation as `δ → 0`.
    fn denominator_delta(&self, delta: f64) -> f64 {
        let ai = self.alpha_inf();
        2.0 * (delta / self.alpha_inf.one_minus()).ln_1p() - 2.0 * (-delta / ai).ln_1p()
            + 2.5 * delta
    }

    /// Temperature at `α = α∞ - δ`.
    pub fn temperature_delta(&self, g: &GasModel, delta: f64) -> Result<f64> {
        let ai = self.alpha_inf();
        if !(delta > 0.0 && delta < ai) {
            return Err(Error::OutOfRange {
                what: "distance to blow-up",
                value: delta,
            });
        }
        let alpha = ai - delta;
        let d = if delta < 0.5 * ai.min(self.alpha_inf.one_minus()) {
            self.denominator_delta(delta)
        } else {
            denominator(&Ionization::new(alpha)?, self.eta0)
        };
        Ok((1.0 + alpha) * g.ti / d)
    }

    /// Temperature at chart coordinate `s`, evaluated from whichever of
    /// `α` and `α∞ - α` is accurate there.
    pub fn temperature_chart(&self, g: &GasModel, s: f64) -> Result<f64> {
        let (alpha, delta) = self.from_chart(s);
        if s > 0.0 {
            self.temperature_delta(g, delta)
        } else {
            let ion = Ionization::from_ln_alpha(self.alpha_inf.ln_alpha() - log1p_exp(-s))?;
            Ok((1.0 + alpha) * g.ti / denominator(&ion, self.eta0))
        }
    }

    /// Temperature on the isentrope, for `α` given by its logs.
    pub fn temperature_ion(&self, g: &GasModel, ion: &Ionization) -> Result<f64> {
        let ai = self.alpha_inf();
        let alpha = ion.alpha();
        if !(alpha < ai) || ion.logit() >= self.alpha_inf.logit() {
            return Err(Error::OutOfRange {
                what: "alpha beyond blow-up",
                value: alpha,
            });
        }
        if ai - alpha < 0.5 * ai.min(self.alpha_inf.one_minus()) {
            return self.temperature_delta(g, ai - alpha);
        }
        Ok((1.0 + alpha) * g.ti / denominator(ion, self.eta0))
    }
}

/// Closed-form isentrope temperature `(1+α)Ti/d(α)` for `α < α∞(η0)`.
pub fn isentrope_t(g: &GasModel, alpha: f64, eta0: f64) -> Result<f64> {
    IsentropeLevel::new(eta0)?.temperature_ion(g, &Ionization::new(alpha)?)
}

/// `dT/dα` along an isentrope, `2(1 + φq)T²/(α(1-α²)Ti)`.
pub fn isentrope_slope(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    let phi = 0.5 * ion.spread();
    let q = 2.5 + g.ti / t;
    Ok(2.0 * (1.0 + phi * q) * t * t / (ion.spread() * (1.0 + alpha) * g.ti))
}

/// `d²T/dα²` along an isentrope through `(α, T)`, from the second partials
/// of `η(α, T)`.
pub fn isentrope_curvature(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    let spread = ion.spread();
    let ti = g.ti;
    let e_a = 2.0 / spread + 2.5 + ti / t;
    let e_t = -ti * (1.0 + alpha) / (t * t);
    let e_aa = 2.0 * (2.0 * alpha - 1.0) / (spread * spread);
    let e_at = -ti / (t * t);
    let e_tt = 2.0 * ti * (1.0 + alpha) / (t * t * t);
    let num = e_aa * e_t * e_t - 2.0 * e_at * e_a * e_t + e_tt * e_a * e_a;
    Ok(-num / (e_t * e_t * e_t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Convex,
    Concave,
    Straight,
}

/// Convexity of the isentrope `η = η0` at `α`.
pub fn isentrope_convexity(g: &GasModel, alpha: f64, eta0: f64) -> Result<Curvature> {
    let t = isentrope_t(g, alpha, eta0)?;
    let c = isentrope_curvature(g, alpha, t)?;
    Ok(if c > 0.0 {
        Curvature::Convex
    } else if c < 0.0 {
        Curvature::Concave
    } else {
        Curvature::Straight
    })
}

/// `p/λ = a·sqrt(T(1+α)·B/A)`; depends on `(α, T)` only.
pub fn p_over_lambda(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    Ok(p_over_lambda_ion(g, &ion, t))
}

fn p_over_lambda_ion(g: &GasModel, ion: &Ionization, t: f64) -> f64 {
    let phi = 0.5 * ion.spread();
    let tau = g.ti / t;
    let a = coef_a(phi, 2.5 + tau);
    let b = coef_b(phi, tau);
    g.a() * (t * (1.0 + ion.alpha()) * b / a).sqrt()
}

/// `Λ = A/(α(1-α²)τ/2) · p/λ`, so that `du/dα = ∓Λ` on the `±` curves.
pub fn du_dalpha(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    let phi = 0.5 * ion.spread();
    let tau = g.ti / t;
    let a = coef_a(phi, 2.5 + tau);
    Ok(a / (0.5 * ion.spread() * (1.0 + alpha) * tau) * p_over_lambda_ion(g, &ion, t))
}

/// `Λ·dα/ds` at chart point `s`: `2A·T·(p/λ)·δ/((1-α²)·Ti·α∞)`.
fn lambda_chart(g: &GasModel, level: &IsentropeLevel, s: f64) -> Result<(f64, f64)> {
    let (alpha, delta) = level.from_chart(s);
    let t = level.temperature_chart(g, s)?;
    let ion = Ionization::new(alpha)?;
    let phi = 0.5 * ion.spread();
    let a = coef_a(phi, 2.5 + g.ti / t);
    let pl = p_over_lambda_ion(g, &ion, t);
    let rate =
        2.0 * a * t * pl * delta / ((1.0 - alpha) * (1.0 + alpha) * g.ti * level.alpha_inf());
    Ok((rate, t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RarefactionSample {
    pub alpha: f64,
    pub t: f64,
    pub p: f64,
    pub u: f64,
    /// Entropy recomputed at `(α, T)`.
    pub eta: f64,
    pub lambda: f64,
    /// Value of the inflection function.
    pub gnl: f64,
    pub gn_certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RarefactionCurve {
    pub family: Family,
    pub eta0: f64,
    pub alpha_inf: f64,
    /// Ordered from the reference towards the target.
    pub samples: Vec<RarefactionSample>,
}

impl RarefactionCurve {
    /// Largest `|η - η0|/|η0|` over the samples (absolute when `η0 = 0`).
    pub fn eta_drift(&self) -> f64 {
        let scale = self.eta0.abs().max(1.0);
        self.samples
            .iter()
            .map(|s| (s.eta - self.eta0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

fn make_sample(g: &GasModel, alpha: f64, t: f64, u: f64) -> Result<RarefactionSample> {
    let ion = Ionization::new(alpha)?;
    let state = crate::thermo::state_from_ionization_t(g, ion, t)?;
    Ok(RarefactionSample {
        alpha,
        t,
        p: state.p,
        u,
        eta: state.eta_alpha_t(),
        lambda: state.lambda,
        gnl: gnl_parts(ion.spread(), alpha, g.ti / t),
        gn_certified: is_gn_sufficient(g, alpha, t),
    })
}

fn check_target(level: &IsentropeLevel, alpha0: f64, family: Family, target: f64) -> Result<()> {
    let ai = level.alpha_inf();
    let ok = match family {
        Family::Minus => target > 0.0 && target <= alpha0,
        Family::Plus => target >= alpha0 && target < ai,
    };
    if !ok {
        return Err(Error::OutOfRange {
            what: "target outside the rarefaction branch",
            value: target,
        });
    }
    if ai - target < BLOWUP_GUARD * ai {
        return Err(Error::OutOfRange {
            what: "target too close to the temperature blow-up",
            value: target,
        });
    }
    Ok(())
}

fn chart_grid(s0: f64, s1: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            if i + 1 == n {
                s1
            } else {
                s0 + (s1 - s0) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// The rarefaction branch of family `family` through `r`, from `α0` to
/// `alpha_target` with `n` samples uniform in the chart. `T` is taken from
/// the closed-form isentrope and `du/dα = ∓Λ` is integrated.
pub fn integrate_rarefaction(
    g: &GasModel,
    r: &RefState,
    family: Family,
    alpha_target: f64,
    n: usize,
) -> Result<RarefactionCurve> {
    let level = IsentropeLevel::through(g, &r.ionization(), r.t0)?;
    check_target(&level, r.alpha0, family, alpha_target)?;
    let s0 = level.chart(r.alpha0)?;
    let s1 = level.chart(alpha_target)?;
    let grid = chart_grid(s0, s1, n);
    let sign = -family.sign();
    let mut failure = None;
    let rhs = |s: f64, _y: &[f64], dy: &mut [f64]| {
        dy[0] = match lambda_chart(g, &level, s) {
            Ok((rate, _)) => sign * rate,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
    };
    let out = integrate_ode_through(rhs, &[r.u0], s0, &grid[1..], &ode_options(g, r.t0));
    if let Some(e) = failure {
        return Err(e);
    }
    let out = out?.into_completed()?;
    let mut samples = Vec::with_capacity(out.samples.len());
    for (s, y) in &out.samples {
        let (alpha, _) = level.from_chart(*s);
        let t = if *s == s0 {
            r.t0
        } else {
            level.temperature_chart(g, *s)?
        };
        samples.push(make_sample(g, alpha, t, y[0])?);
    }
    Ok(RarefactionCurve {
        family,
        eta0: level.eta0,
        alpha_inf: level.alpha_inf(),
        samples,
    })
}

/// The same curve obtained by integrating the full characteristic system
/// `(ln T, u)` in the chart, without using the closed-form isentrope.
/// The entropy drift of the result measures the integration error.
pub fn integrate_integral_curve(
    g: &GasModel,
    r: &RefState,
    family: Family,
    alpha_target: f64,
    n: usize,
) -> Result<RarefactionCurve> {
    let level = IsentropeLevel::through(g, &r.ionization(), r.t0)?;
    check_target(&level, r.alpha0, family, alpha_target)?;
    let s0 = level.chart(r.alpha0)?;
    let s1 = level.chart(alpha_target)?;
    let grid = chart_grid(s0, s1, n);
    let sign = -family.sign();
    let ai = level.alpha_inf();
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let (alpha, delta) = level.from_chart(s);
        let t = y[0].exp();
        let spread = alpha * (1.0 - alpha);
        let phi = 0.5 * spread;
        let q = 2.5 + g.ti / t;
        let one_minus_sq = (1.0 - alpha) * (1.0 + alpha);
        dy[0] = 2.0 * (1.0 + phi * q) * t * delta / (one_minus_sq * g.ti * ai);
        let a = coef_a(phi, q);
        let b = coef_b(phi, g.ti / t);
        let pl = g.a() * (t * (1.0 + alpha) * b / a).sqrt();
        dy[1] = sign * 2.0 * a * t * pl * delta / (one_minus_sq * g.ti * ai);
    };
    let out = integrate_ode_through(
        rhs,
        &[r.t0.ln(), r.u0],
        s0,
        &grid[1..],
        &ode_options(g, r.t0),
    )?
    .into_completed()?;
    let mut samples = Vec::with_capacity(out.samples.len());
    for (s, y) in &out.samples {
        let (alpha, _) = level.from_chart(*s);
        samples.push(make_sample(g, alpha, y[0].exp(), y[1])?);
    }
    Ok(RarefactionCurve {
        family,
        eta0: level.eta0,
        alpha_inf: ai,
        samples,
    })
}

/// Samples of an isentrope on `[alpha_lo, alpha_hi] ⊂ (0, α∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isentrope {
    pub eta0: f64,
    pub alpha_inf: f64,
    pub samples: Vec<IsentropeSample>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsentropeSample {
    pub alpha: f64,
    pub t: f64,
    pub p: f64,
    /// Velocity on the `+` curve, zero at the first sample.
    pub u_plus: f64,
    /// Velocity on the `-` curve, zero at the first sample.
    pub u_minus: f64,
    pub eta: f64,
}

/// `n` samples uniform in the chart between `alpha_lo` and `alpha_hi`.
pub fn sample_isentrope(
    g: &GasModel,
    eta0: f64,
    alpha_lo: f64,
    alpha_hi: f64,
    n: usize,
) -> Result<Isentrope> {
    let level = IsentropeLevel::new(eta0)?;
    let ai = level.alpha_inf();
    if !(alpha_lo < alpha_hi) || ai - alpha_hi < BLOWUP_GUARD * ai {
        return Err(Error::OutOfRange {
            what: "alpha range on the isentrope",
            value: alpha_hi,
        });
    }
    let s0 = level.chart(alpha_lo)?;
    let s1 = level.chart(alpha_hi)?;
    let grid = chart_grid(s0, s1, n);
    let opts = ode_options(g, level.temperature_ion(g, &Ionization::new(alpha_lo)?)?);
    let mut failure = None;
    let rhs = |s: f64, _y: &[f64], dy: &mut [f64]| {
        dy[0] = match lambda_chart(g, &level, s) {
            Ok((rate, _)) => rate,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
    };
    let out = integrate_ode_through(rhs, &[0.0], s0, &grid[1..], &opts);
    if let Some(e) = failure {
        return Err(e);
    }
    let out = out?.into_completed()?;
    let mut samples = Vec::with_capacity(out.samples.len());
    for (s, y) in &out.samples {
        let (alpha, _) = level.from_chart(*s);
        let t = level.temperature_chart(g, *s)?;
        let ion = Ionization::new(alpha)?;
        samples.push(IsentropeSample {
            alpha,
            t,
            p: ln_pressure(g, &ion, t).exp(),
            u_plus: -y[0],
            u_minus: y[0],
            eta: entropy_ionization_t(g, &ion, t)?,
        });
    }
    Ok(Isentrope {
        eta0,
        alpha_inf: ai,
        samples,
    })
}
