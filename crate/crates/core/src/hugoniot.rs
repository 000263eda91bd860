//! Hugoniot locus of a reference state.
//!
//! The reference sits on the minus side of the discontinuity and the front
//! state on the plus side, so `[x] = x - x0`. The thermodynamic part is the
//! zero set of
//!
//! `F = T(1+α)(4 + p0/p) + 2·Ti·α - T0(1+α0)(4 + p/p0) - 2·Ti·α0`,
//!
//! a strictly increasing curve `T(α)`. The kinetic part is the zero set of
//!
//! `G = p/p0 + v/v0 - T(1+α)/(T0(1+α0)) - 1 - (u-u0)²/(a²T0(1+α0))`.
//!
//! Pressure ratios are always formed from differences of `ln p`.

use alloc::vec::Vec;
use core::cell::Cell;

use num_traits::Float;

use crate::error::positive;
use crate::numerics::{find_root_with, Bracket, RootOptions};
use crate::thermo::{
    ionization_from_pt, ln_pressure, state_from_ionization_t, state_from_pt,
    temperature_from_p_eta, GasModel, Ionization, ThermoState,
};
use crate::{Error, Result};

const ROOT: RootOptions = RootOptions {
    rel_tol: 1e-15,
    abs_tol: 0.0,
    max_iter: 200,
};

const MAX_HALVINGS: usize = 12;

/// Relative step of the isentropic second difference in the weak-shock
/// entropy estimate.
pub const BETHE_STEP: f64 = 1e-4;

/// The state ahead of which the locus is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefState {
    pub alpha0: f64,
    pub t0: f64,
    pub u0: f64,
    pub p0: f64,
    pub v0: f64,
    state: ThermoState,
}

impl RefState {
    pub fn new(g: &GasModel, alpha0: f64, t0: f64, u0: f64) -> Result<Self> {
        Self::from_ionization(g, Ionization::new(alpha0)?, t0, u0)
    }

    pub fn from_ionization(g: &GasModel, ion: Ionization, t0: f64, u0: f64) -> Result<Self> {
        Self::from_state(state_from_ionization_t(g, ion, t0)?, u0)
    }

    pub fn from_pt(g: &GasModel, p0: f64, t0: f64, u0: f64) -> Result<Self> {
        Self::from_state(state_from_pt(g, p0, t0)?, u0)
    }

    pub fn from_state(state: ThermoState, u0: f64) -> Result<Self> {
        if !u0.is_finite() {
            return Err(Error::OutOfRange {
                what: "velocity",
                value: u0,
            });
        }
        Ok(RefState {
            alpha0: state.alpha,
            t0: state.t,
            u0,
            p0: state.p,
            v0: state.v,
            state,
        })
    }

    pub fn state(&self) -> &ThermoState {
        &self.state
    }

    pub fn ionization(&self) -> Ionization {
        self.state.ionization()
    }

    /// `T0(4(1+α0) + 2·Ti·α0/T0)`, the magnitude of the terms of `F`.
    pub fn residual_scale(&self, g: &GasModel) -> f64 {
        self.t0 * (4.0 * (1.0 + self.alpha0) + 2.0 * g.ti * self.alpha0 / self.t0)
    }

    fn enthalpy_side(&self, g: &GasModel, ratio: f64) -> f64 {
        self.t0 * (1.0 + self.alpha0) * (4.0 + ratio) + 2.0 * g.ti * self.alpha0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HugoniotSample {
    pub state: ThermoState,
    /// `F` at the sample, unnormalized.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HugoniotCurve {
    pub reference: RefState,
    /// Ordered by increasing α.
    pub samples: Vec<HugoniotSample>,
}

pub fn thermo_residual(g: &GasModel, r: &RefState, ion: &Ionization, t: f64) -> f64 {
    let alpha = ion.alpha();
    let lr = ln_pressure(g, ion, t) - r.state.ln_p();
    t * (1.0 + alpha) * (4.0 + (-lr).exp()) + 2.0 * g.ti * alpha - r.enthalpy_side(g, lr.exp())
}

/// Magnitude of the terms of `F` at `(α, T)`, never below the reference
/// scale. Residual tolerances are relative to this.
pub fn residual_scale_at(g: &GasModel, r: &RefState, ion: &Ionization, t: f64) -> f64 {
    let alpha = ion.alpha();
    let lr = ln_pressure(g, ion, t) - r.state.ln_p();
    let lhs = t * (1.0 + alpha) * (4.0 + (-lr).exp()) + 2.0 * g.ti * alpha;
    lhs.max(r.enthalpy_side(g, lr.exp()))
        .max(r.residual_scale(g))
}

pub fn thermo_residual_f(g: &GasModel, alpha: f64, t: f64, r: &RefState) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    Ok(thermo_residual(g, r, &ion, t))
}

/// `Φ = -F_T / (4(1+α))`; positive everywhere on the locus.
pub fn slope_denominator(g: &GasModel, r: &RefState, ion: &Ionization, t: f64) -> f64 {
    let alpha = ion.alpha();
    let lr = ln_pressure(g, ion, t) - r.state.ln_p();
    let tau = g.ti / t;
    let theta = r.t0 * (1.0 + r.alpha0) / (t * (1.0 + alpha));
    0.25 * (-lr).exp() * (1.5 + tau) + 0.25 * lr.exp() * theta * (2.5 + tau) - 1.0
}

/// `d ln T / d logit(α)` along the locus through `(α, T)`.
pub fn thermo_slope_log(g: &GasModel, r: &RefState, ion: &Ionization, t: f64) -> Result<f64> {
    let alpha = ion.alpha();
    let phi = slope_denominator(g, r, ion, t);
    if !(phi > 0.0) {
        return Err(Error::VanishingDenominator { alpha, t });
    }
    let lr = ln_pressure(g, ion, t) - r.state.ln_p();
    let tau = g.ti / t;
    let theta = r.t0 * (1.0 + r.alpha0) / (t * (1.0 + alpha));
    let num = ion.spread() * (4.0 + 2.0 * tau)
        + (-lr).exp() * (1.0 + alpha) * (2.0 - alpha)
        + 2.0 * lr.exp() * theta;
    Ok(num / (4.0 * (1.0 + alpha) * phi))
}

/// `dT/dα` along the locus.
pub fn thermo_slope_dt_dalpha(g: &GasModel, alpha: f64, t: f64, r: &RefState) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    Ok(thermo_slope_log(g, r, &ion, t)? * t / ion.spread())
}

/// Searches from `t_seed` in direction `dir` (in `ln T`) for a sign change of
/// `f`, then refines it.
fn cross_in_log_t<F: FnMut(f64) -> f64>(
    mut f: F,
    t_seed: f64,
    dir: f64,
    step: f64,
    what: &'static str,
) -> Result<f64> {
    let f0 = f(t_seed);
    if f0 == 0.0 {
        return Ok(t_seed);
    }
    let y0 = t_seed.ln();
    let mut prev = t_seed;
    let mut h = step;
    for _ in 0..80 {
        let t = (y0 + dir * h).exp();
        if !(t > 0.0 && t.is_finite()) {
            break;
        }
        let ft = f(t);
        if ft.is_nan() {
            return Err(Error::NonFinite { what });
        }
        if ft == 0.0 {
            return Ok(t);
        }
        if ft.signum() != f0.signum() {
            let b = if dir > 0.0 {
                Bracket::new(prev, t)?
            } else {
                Bracket::new(t, prev)?
            };
            return find_root_with(f, b, &ROOT);
        }
        prev = t;
        h *= 2.0;
    }
    Err(Error::BracketExpansion { what })
}

/// The temperature of the locus point with ionization `ion`.
pub fn locus_temperature(g: &GasModel, r: &RefState, ion: &Ionization, t_hint: f64) -> Result<f64> {
    locus_temperature_step(g, r, ion, t_hint, 0.05)
}

fn locus_temperature_step(
    g: &GasModel,
    r: &RefState,
    ion: &Ionization,
    t_hint: f64,
    step: f64,
) -> Result<f64> {
    positive("temperature", t_hint)?;
    let f = |t: f64| thermo_residual(g, r, ion, t);
    // F decreases through its unique zero in T.
    let dir = if f(t_hint) > 0.0 { 1.0 } else { -1.0 };
    cross_in_log_t(f, t_hint, dir, step, "Hugoniot temperature")
}

/// The locus point at pressure `p`, found from the enthalpy form
/// `T(1+α)(4 + p0/p) + 2·Ti·α = T0(1+α0)(4 + p/p0) + 2·Ti·α0` with `α = α(p, T)`.
pub fn state_at_pressure(g: &GasModel, r: &RefState, p: f64) -> Result<ThermoState> {
    positive("pressure", p)?;
    let ratio = p / r.p0;
    let rhs = r.enthalpy_side(g, ratio);
    let lhs_coef = 4.0 + 1.0 / ratio;
    let f = |t: f64| {
        let alpha = ionization_from_pt(g, p, t)
            .map(|i| i.alpha())
            .unwrap_or(f64::NAN);
        rhs - (t * (1.0 + alpha) * lhs_coef + 2.0 * g.ti * alpha)
    };
    let seed = r.t0 * (4.0 + ratio) / lhs_coef;
    let dir = if f(seed) > 0.0 { 1.0 } else { -1.0 };
    let t = cross_in_log_t(f, seed, dir, 0.05, "Hugoniot temperature at pressure")?;
    state_from_pt(g, p, t)
}

/// Predictor–corrector continuation of the locus, with samples uniform in
/// `logit α` over `[z_lo, z_hi]`, which must contain the reference.
pub fn trace_thermo_locus_logit(
    g: &GasModel,
    r: &RefState,
    z_range: (f64, f64),
    n: usize,
) -> Result<HugoniotCurve> {
    let (z_lo, z_hi) = z_range;
    let z0 = r.ionization().logit();
    if !(z_lo <= z0 && z0 <= z_hi) || !z_lo.is_finite() || !z_hi.is_finite() {
        return Err(Error::OutOfRange {
            what: "logit range must contain the reference",
            value: z0,
        });
    }
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "sample count",
            value: n as f64,
        });
    }
    let dz = (z_hi - z_lo) / (n - 1) as f64;
    let grid = |i: usize| {
        if i + 1 == n {
            z_hi
        } else {
            z_lo + i as f64 * dz
        }
    };
    let mut below = Vec::new();
    let mut above = Vec::new();
    let start = (z0, r.t0.ln());
    let mut cur = start;
    for i in (0..n).rev().filter(|&i| grid(i) < z0) {
        cur = march(g, r, cur, grid(i))?;
        below.push(sample_at(g, r, cur)?);
    }
    cur = start;
    for i in (0..n).filter(|&i| grid(i) >= z0) {
        cur = march(g, r, cur, grid(i))?;
        above.push(sample_at(g, r, cur)?);
    }
    below.reverse();
    below.extend(above);
    Ok(HugoniotCurve {
        reference: *r,
        samples: below,
    })
}

/// As [`trace_thermo_locus_logit`] with the range given in α.
pub fn trace_thermo_locus(
    g: &GasModel,
    r: &RefState,
    alpha_range: (f64, f64),
    n: usize,
) -> Result<HugoniotCurve> {
    let lo = Ionization::new(alpha_range.0)?.logit();
    let hi = Ionization::new(alpha_range.1)?.logit();
    trace_thermo_locus_logit(g, r, (lo, hi), n)
}

fn sample_at(g: &GasModel, r: &RefState, (z, y): (f64, f64)) -> Result<HugoniotSample> {
    let ion = Ionization::from_logit(z)?;
    let t = y.exp();
    Ok(HugoniotSample {
        state: state_from_ionization_t(g, ion, t)?,
        residual: thermo_residual(g, r, &ion, t),
    })
}

/// Moves along the locus from `(z, ln T)` to logit `target`, halving the
/// step when the corrector fails.
fn march(g: &GasModel, r: &RefState, from: (f64, f64), target: f64) -> Result<(f64, f64)> {
    let (mut z, mut y) = from;
    let mut h = target - z;
    let mut halvings = 0;
    while z != target {
        let step = if (target - z).abs() < h.abs() {
            target - z
        } else {
            h
        };
        match corrector(g, r, z, y, step) {
            Ok(next) => {
                (z, y) = next;
                if z + step == target || z == target {
                    z = target;
                }
            }
            Err(e @ Error::VanishingDenominator { .. }) => return Err(e),
            Err(_) if halvings < MAX_HALVINGS => {
                halvings += 1;
                h *= 0.5;
            }
            Err(_) => {
                return Err(Error::CorrectorFailure {
                    last_alpha: Ionization::from_logit(z)?.alpha(),
                    last_t: y.exp(),
                })
            }
        }
    }
    Ok((z, y))
}

fn corrector(g: &GasModel, r: &RefState, z: f64, y: f64, step: f64) -> Result<(f64, f64)> {
    let ion = Ionization::from_logit(z)?;
    let slope = thermo_slope_log(g, r, &ion, y.exp())?;
    let z_new = z + step;
    let y_pred = y + slope * step;
    let next = Ionization::from_logit(z_new)?;
    let bracket_step = (1e-3 * (slope * step).abs()).max(1e-12);
    let t = locus_temperature_step(g, r, &next, y_pred.exp(), bracket_step)?;
    let resid = thermo_residual(g, r, &next, t);
    if !(resid.abs() <= 1e-9 * residual_scale_at(g, r, &next, t)) {
        return Err(Error::NonFinite {
            what: "Hugoniot residual",
        });
    }
    if !(slope_denominator(g, r, &next, t) > 0.0) {
        return Err(Error::VanishingDenominator {
            alpha: next.alpha(),
            t,
        });
    }
    Ok((z_new, t.ln()))
}

/// The normalized velocity jump `(u-u0)²/(a²T0(1+α0))`.
fn velocity_term(g: &GasModel, r: &RefState, u: f64) -> f64 {
    let du = u - r.u0;
    du * du / (g.a2 * r.t0 * (1.0 + r.alpha0))
}

pub fn kinetic_residual(g: &GasModel, r: &RefState, ion: &Ionization, u: f64, t: f64) -> f64 {
    let lr = ln_pressure(g, ion, t) - r.state.ln_p();
    let theta_inv = t * (1.0 + ion.alpha()) / (r.t0 * (1.0 + r.alpha0));
    lr.exp() + (theta_inv.ln() - lr).exp() - theta_inv - 1.0 - velocity_term(g, r, u)
}

pub fn kinetic_residual_g(g: &GasModel, alpha: f64, u: f64, t: f64, r: &RefState) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    Ok(kinetic_residual(g, r, &ion, u, t))
}

/// Temperature at which the state with ionization `ion` has pressure `p0`.
pub fn pressure_matching_temperature(g: &GasModel, r: &RefState, ion: &Ionization) -> Result<f64> {
    let f = |t: f64| r.state.ln_p() - ln_pressure(g, ion, t);
    let dir = if f(r.t0) > 0.0 { 1.0 } else { -1.0 };
    cross_in_log_t(f, r.t0, dir, 0.05, "pressure-matching temperature")
}

/// The two zeros `T₋ < T* < T₊` of `T ↦ G(α, u, T)`.
pub fn kinetic_roots(g: &GasModel, alpha: f64, u: f64, r: &RefState) -> Result<(f64, f64)> {
    kinetic_roots_ion(g, &Ionization::new(alpha)?, u, r)
}

pub fn kinetic_roots_ion(
    g: &GasModel,
    ion: &Ionization,
    u: f64,
    r: &RefState,
) -> Result<(f64, f64)> {
    if u == r.u0 {
        return Err(Error::Contact);
    }
    let t_star = pressure_matching_temperature(g, r, ion)?;
    let f = |t: f64| kinetic_residual(g, r, ion, u, t);
    let lo = cross_in_log_t(f, t_star, -1.0, 0.01, "lower kinetic root")?;
    let hi = cross_in_log_t(f, t_star, 1.0, 0.01, "upper kinetic root")?;
    Ok((lo, hi))
}

/// A solved shock: the reference behind, the front state ahead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSolution {
    pub front: ThermoState,
    pub u: f64,
    pub back: RefState,
    /// Lagrangian mass flux `m = -[u]/[v]`.
    pub m: f64,
    /// Eulerian shock speed `[ρu]/[ρ]`.
    pub s: f64,
    /// `S₊ - S₋` (J kg⁻¹ K⁻¹).
    pub ds: f64,
    /// Weak-shock estimate of `ds`.
    pub bethe_estimate: f64,
    /// `-m[S]`, the entropy production rate per unit area.
    pub production: f64,
}

impl ShockSolution {
    pub fn assemble(g: &GasModel, back: RefState, front: ThermoState, u: f64) -> Result<Self> {
        let (m, s) = shock_speeds(&front, u, &back)?;
        let mut sol = ShockSolution {
            front,
            u,
            back,
            m,
            s,
            ds: 0.0,
            bethe_estimate: 0.0,
            production: 0.0,
        };
        let (ds, bethe, production) = entropy_jump(g, &sol)?;
        sol.ds = ds;
        sol.bethe_estimate = bethe;
        sol.production = production;
        Ok(sol)
    }

    /// Relative residuals of the mass, momentum and energy jump conditions.
    pub fn rankine_hugoniot_residuals(&self) -> [f64; 3] {
        let (f, b) = (&self.front, self.back.state());
        let (u, u0) = (self.u, self.back.u0);
        let en = f.e + 0.5 * u * u;
        let en0 = b.e + 0.5 * u0 * u0;
        let rel = |terms: [f64; 4]| {
            let scale = terms.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            (terms[0] - terms[1] - terms[2] + terms[3]).abs() / scale
        };
        let s = self.s;
        [
            rel([s * f.rho, s * b.rho, f.rho * u, b.rho * u0]),
            rel([
                s * f.rho * u,
                s * b.rho * u0,
                f.rho * u * u + f.p,
                b.rho * u0 * u0 + b.p,
            ]),
            rel([
                s * f.rho * en,
                s * b.rho * en0,
                f.rho * u * en + f.p * u,
                b.rho * u0 * en0 + b.p * u0,
            ]),
        ]
    }
}

/// `(m, s)` across the jump from `back` to `(front, u)`.
pub fn shock_speeds(front: &ThermoState, u: f64, back: &RefState) -> Result<(f64, f64)> {
    let drho = front.rho - back.state().rho;
    if drho == 0.0 {
        return Err(Error::Contact);
    }
    let m = -(u - back.u0) / (front.v - back.v0);
    let s = (front.rho * u - back.state().rho * back.u0) / drho;
    Ok((m, s))
}

/// `(∂²v/∂p²)` along the isentrope through `s`, by central differences with
/// step `h`.
pub fn isentropic_v_pp(g: &GasModel, s: &ThermoState, h: f64) -> Result<f64> {
    let v_at = |p: f64| -> Result<f64> {
        let t = temperature_from_p_eta(g, p, s.eta)?;
        Ok(state_from_pt(g, p, t)?.v)
    };
    let (vm, vc, vp) = (v_at(s.p - h)?, v_at(s.p)?, v_at(s.p + h)?);
    Ok((vp - 2.0 * vc + vm) / (h * h))
}

/// `v_pp·Δp³/(12 T₋)` anchored at the back state.
pub fn bethe_estimate(g: &GasModel, back: &ThermoState, dp: f64) -> Result<f64> {
    let v_pp = isentropic_v_pp(g, back, BETHE_STEP * back.p)?;
    Ok(v_pp * dp * dp * dp / (12.0 * back.t))
}

/// `(ΔS, Bethe estimate of ΔS, -m·ΔS)`.
pub fn entropy_jump(g: &GasModel, sol: &ShockSolution) -> Result<(f64, f64, f64)> {
    let back = sol.back.state();
    let ds = g.a2 * (sol.front.eta - back.eta);
    let bethe = bethe_estimate(g, back, sol.front.p - back.p)?;
    Ok((ds, bethe, -sol.m * ds))
}

/// The unique front state with `α > α0` reached from `r` by a shock with
/// downstream velocity `u`.
pub fn solve_shock_state(g: &GasModel, r: &RefState, u: f64) -> Result<ShockSolution> {
    if u == r.u0 {
        return Err(Error::Contact);
    }
    if !u.is_finite() {
        return Err(Error::OutOfRange {
            what: "velocity",
            value: u,
        });
    }
    let z0 = r.ionization().logit();
    let hint = Cell::new(r.t0);
    let eval = |z: f64| -> Result<(f64, f64)> {
        let ion = Ionization::from_logit(z)?;
        let t = locus_temperature(g, r, &ion, hint.get())?;
        hint.set(t);
        Ok((kinetic_residual(g, r, &ion, u, t), t))
    };
    let mut lo = z0;
    let mut h = 0.25;
    let mut hi = None;
    for _ in 0..60 {
        let z = z0 + h;
        if eval(z)?.0 > 0.0 {
            hi = Some(z);
            break;
        }
        lo = z;
        h *= 2.0;
    }
    let hi = hi.ok_or(Error::BracketExpansion {
        what: "shock state",
    })?;
    let opts = RootOptions {
        rel_tol: 1e-15,
        abs_tol: 1e-15,
        max_iter: 200,
    };
    let mut failure = None;
    let z = find_root_with(
        |z| match eval(z) {
            Ok((gv, _)) => gv,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        Bracket::new(lo, hi)?,
        &opts,
    )
    .map_err(|e| failure.take().unwrap_or(e))?;
    let ion = Ionization::from_logit(z)?;
    let t = locus_temperature(g, r, &ion, hint.get())?;
    let front = state_from_ionization_t(g, ion, t)?;
    ShockSolution::assemble(g, *r, front, u)
}

/// Intersections of the kinetic and thermodynamic parts with `α < α0`,
/// from a scan of `n` points in `logit α` over `[z0 - depth, z0)`. Unlike the
/// upper branch these need not exist or be unique.
pub fn lower_branch_states(
    g: &GasModel,
    r: &RefState,
    u: f64,
    depth: f64,
    n: usize,
) -> Result<Vec<ThermoState>> {
    if u == r.u0 {
        return Err(Error::Contact);
    }
    let z0 = r.ionization().logit();
    let hint = Cell::new(r.t0);
    let eval = |z: f64| -> Result<f64> {
        let ion = Ionization::from_logit(z)?;
        let t = locus_temperature(g, r, &ion, hint.get())?;
        hint.set(t);
        Ok(kinetic_residual(g, r, &ion, u, t))
    };
    let mut out = Vec::new();
    let mut z_prev = z0;
    let mut g_prev = -velocity_term(g, r, u);
    for k in 1..=n.max(1) {
        let z = z0 - depth * k as f64 / n.max(1) as f64;
        let gz = eval(z)?;
        if gz.signum() != g_prev.signum() {
            let root = find_root_with(
                |x| eval(x).unwrap_or(f64::NAN),
                Bracket::new(z, z_prev)?,
                &ROOT,
            )?;
            let ion = Ionization::from_logit(root)?;
            let t = locus_temperature(g, r, &ion, hint.get())?;
            out.push(state_from_ionization_t(g, ion, t)?);
        }
        z_prev = z;
        g_prev = gz;
    }
    Ok(out)
}

/// The contact state at temperature `t`: pressure and velocity unchanged.
pub fn contact_state(g: &GasModel, r: &RefState, t: f64) -> Result<ThermoState> {
    state_from_pt(g, r.p0, t)
}
