//! High-temperature limit of the Saha closure.
//!
//! The Boltzmann factor `e^{-Ti/T}` is dropped from Saha's law and the
//! ionization energy from the internal energy, so that
//!
//! `α = (1 + κ p T^{-5/2})^{-1/2}`, `e = (3/2)a²(1+α)T`,
//!
//! and the entropy depends on `α` alone. Both acoustic fields are genuinely
//! nonlinear and their integral curves are the lines `α = const`.
//!
//! Velocities along integral curves follow the sign convention of the
//! rarefaction module: `u₊` decreases as `p` grows.

use alloc::vec::Vec;

use num_traits::Float;

use crate::characteristics::{Coords, EigenDecomposition, Family};
use crate::error::positive;
use crate::numerics::{expand_bracket, find_root_with, log_add_exp, RootOptions};
use crate::thermo::{ionization_from_ln_beta, GasModel, Ionization};
use crate::{Error, Result};

const ROOT: RootOptions = RootOptions {
    rel_tol: 1e-15,
    abs_tol: 1e-15,
    max_iter: 200,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtlState {
    pub alpha: f64,
    pub t: f64,
    pub p: f64,
    pub v: f64,
    pub e: f64,
    pub h: f64,
    /// `2 ln(α/(1-α)) + (5/2)α`.
    pub eta: f64,
    /// `(2/5) ln α + (3/10) ln(1+α) - (1/5) ln(1-α)`.
    pub pseudo_entropy: f64,
    /// Lagrangian sound speed.
    pub lambda: f64,
    ion: Ionization,
    ln_p: f64,
}

impl HtlState {
    pub fn ionization(&self) -> Ionization {
        self.ion
    }

    pub fn ln_p(&self) -> f64 {
        self.ln_p
    }
}

pub fn htl_ionization_from_pt(g: &GasModel, p: f64, t: f64) -> Result<Ionization> {
    positive("pressure", p)?;
    positive("temperature", t)?;
    Ok(ionization_from_ln_beta(
        g.kappa.ln() + p.ln() - 2.5 * t.ln(),
    ))
}

pub fn htl_alpha_from_pt(g: &GasModel, p: f64, t: f64) -> Result<f64> {
    Ok(htl_ionization_from_pt(g, p, t)?.alpha())
}

/// `ln p = ln((1-α²)/(κα²)) + (5/2) ln T`.
pub fn htl_ln_pressure(g: &GasModel, ion: &Ionization, t: f64) -> f64 {
    ion.ln_one_minus_sq() - g.kappa.ln() - 2.0 * ion.ln_alpha() + 2.5 * t.ln()
}

pub fn htl_pressure(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    positive("temperature", t)?;
    Ok(htl_ln_pressure(g, &Ionization::new(alpha)?, t).exp())
}

pub fn htl_entropy(alpha: f64) -> Result<f64> {
    Ok(entropy_of(&Ionization::new(alpha)?))
}

fn entropy_of(ion: &Ionization) -> f64 {
    2.0 * ion.logit() + 2.5 * ion.alpha()
}

pub fn htl_pseudo_entropy(alpha: f64) -> Result<f64> {
    Ok(pseudo_entropy_of(&Ionization::new(alpha)?))
}

fn pseudo_entropy_of(ion: &Ionization) -> f64 {
    0.4 * ion.ln_alpha() + 0.3 * ion.ln_one_plus() - 0.2 * ion.ln_one_minus()
}

pub fn htl_state_from_ionization_t(g: &GasModel, ion: Ionization, t: f64) -> Result<HtlState> {
    positive("temperature", t)?;
    let ln_p = htl_ln_pressure(g, &ion, t);
    let p = ln_p.exp();
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::NonFinite { what: "pressure" });
    }
    let alpha = ion.alpha();
    let rt = g.a2 * (1.0 + alpha) * t;
    Ok(HtlState {
        alpha,
        t,
        p,
        v: rt / p,
        e: 1.5 * rt,
        h: 2.5 * rt,
        eta: entropy_of(&ion),
        pseudo_entropy: pseudo_entropy_of(&ion),
        lambda: p * (5.0 / (3.0 * rt)).sqrt(),
        ion,
        ln_p,
    })
}

pub fn htl_state_from_alpha_t(g: &GasModel, alpha: f64, t: f64) -> Result<HtlState> {
    htl_state_from_ionization_t(g, Ionization::new(alpha)?, t)
}

pub fn htl_state_from_pt(g: &GasModel, p: f64, t: f64) -> Result<HtlState> {
    htl_state_from_ionization_t(g, htl_ionization_from_pt(g, p, t)?, t)
}

/// `(∂α/∂p, ∂α/∂T) = (-α(1-α²)/(2p), (5/4)α(1-α²)/T)`.
pub fn htl_alpha_gradient(s: &HtlState) -> (f64, f64) {
    let w = s.ion.spread() * (1.0 + s.alpha);
    (-0.5 * w / s.p, 1.25 * w / s.t)
}

/// Eigenvalues and eigenvectors, normalised as in the exact model.
pub fn htl_eigen(s: &HtlState, coords: Coords) -> EigenDecomposition {
    let lambda = s.lambda;
    let (r_minus, r_zero, r_plus) = match coords {
        Coords::PT => {
            let w = 0.4 * s.t / s.p;
            (
                [-1.0, 1.0 / lambda, -w],
                [0.0, 0.0, 1.0],
                [1.0, 1.0 / lambda, w],
            )
        }
        Coords::AlphaT => {
            let dt = 0.4 * s.t;
            let du = s.p / lambda;
            let r0 = 1.25 * s.ion.spread() * (1.0 + s.alpha);
            ([0.0, du, -dt], [r0, 0.0, s.t], [0.0, du, dt])
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

/// `R±∇ log|λ±|` assembled from the gradient of `ln λ` in `(p, T)`.
pub fn htl_gnl(s: &HtlState, family: Family) -> f64 {
    let (a_p, a_t) = htl_alpha_gradient(s);
    let d_p = 1.0 / s.p - 0.5 * a_p / (1.0 + s.alpha);
    let d_t = -0.5 / s.t - 0.5 * a_t / (1.0 + s.alpha);
    let e = htl_eigen(s, Coords::PT);
    let r = match family {
        Family::Minus => e.r_minus,
        Family::Plus => e.r_plus,
    };
    r[0] * d_p + r[2] * d_t
}

/// Reference state of an HTL Hugoniot locus or integral curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtlRef {
    pub alpha0: f64,
    pub t0: f64,
    pub u0: f64,
    pub p0: f64,
    pub v0: f64,
    state: HtlState,
}

impl HtlRef {
    pub fn new(g: &GasModel, alpha0: f64, t0: f64, u0: f64) -> Result<Self> {
        Self::from_state(htl_state_from_alpha_t(g, alpha0, t0)?, u0)
    }

    pub fn from_pt(g: &GasModel, p0: f64, t0: f64, u0: f64) -> Result<Self> {
        Self::from_state(htl_state_from_pt(g, p0, t0)?, u0)
    }

    pub fn from_state(state: HtlState, u0: f64) -> Result<Self> {
        if !u0.is_finite() {
            return Err(Error::OutOfRange {
                what: "velocity",
                value: u0,
            });
        }
        Ok(HtlRef {
            alpha0: state.alpha,
            t0: state.t,
            u0,
            p0: state.p,
            v0: state.v,
            state,
        })
    }

    pub fn state(&self) -> &HtlState {
        &self.state
    }
}

/// `√(15(1+α0))·a·(κα0²/(1-α0²))^{1/5}`, the coefficient of `p^{1/5}` on
/// the integral curves through the reference.
pub fn htl_integral_coefficient(g: &GasModel, r: &HtlRef) -> f64 {
    let ion = r.state.ion;
    let ln_k = g.kappa.ln() + 2.0 * ion.ln_alpha() - ion.ln_one_minus_sq();
    (15.0 * (1.0 + r.alpha0)).sqrt() * g.a() * (0.2 * ln_k).exp()
}

/// Velocity at pressure `p` on the integral curve of `family` through `r`.
pub fn htl_integral_curve(g: &GasModel, r: &HtlRef, family: Family, p: f64) -> Result<f64> {
    positive("pressure", p)?;
    let c = htl_integral_coefficient(g, r);
    Ok(r.u0 - family.sign() * c * (p.powf(0.2) - r.p0.powf(0.2)))
}

/// Temperature at pressure `p` on the integral curves through `r`.
pub fn htl_integral_temperature(r: &HtlRef, p: f64) -> Result<f64> {
    positive("pressure", p)?;
    Ok(r.t0 * (p / r.p0).powf(0.4))
}

/// Thermodynamic jump condition in logarithmic form,
/// `ln(T(1+α)/(T0(1+α0))) + ln(4 + p0/p) - ln(4 + p/p0)`.
///
/// Strictly increasing in `α` at fixed `T`, so each temperature carries
/// exactly one point of the locus.
pub fn htl_thermo_residual(g: &GasModel, alpha: f64, t: f64, r: &HtlRef) -> Result<f64> {
    positive("temperature", t)?;
    Ok(residual_ion(g, &Ionization::new(alpha)?, t, r))
}

fn residual_ion(g: &GasModel, ion: &Ionization, t: f64, r: &HtlRef) -> f64 {
    let ln_ratio = htl_ln_pressure(g, ion, t) - r.state.ln_p;
    let ln4 = 4f64.ln();
    (t / r.t0).ln() + ion.ln_one_plus() - r.state.ion.ln_one_plus() + log_add_exp(ln4, -ln_ratio)
        - log_add_exp(ln4, ln_ratio)
}

/// The point of the thermodynamic locus at temperature `t`, found in the
/// logit of `α`.
pub fn htl_locus_ionization(g: &GasModel, r: &HtlRef, t: f64) -> Result<Ionization> {
    positive("temperature", t)?;
    let f = |z: f64| match Ionization::from_logit(z) {
        Ok(ion) => residual_ion(g, &ion, t, r),
        Err(_) => f64::NAN,
    };
    let z0 = r.state.ion.logit();
    let b = expand_bracket(f, z0, 0.5, 60)?;
    Ionization::from_logit(find_root_with(f, b, &ROOT)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtlLocusSample {
    pub state: HtlState,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HtlLocus {
    pub reference: HtlRef,
    /// Ordered by increasing temperature.
    pub samples: Vec<HtlLocusSample>,
}

/// Thermodynamic part of the locus at `n` log-spaced temperatures.
/// Tracing is by temperature since `dα/dT` vanishes at the reference.
pub fn htl_trace_thermo_locus(
    g: &GasModel,
    r: &HtlRef,
    (t_lo, t_hi): (f64, f64),
    n: usize,
) -> Result<HtlLocus> {
    positive("temperature", t_lo)?;
    if !(t_hi > t_lo) || !t_hi.is_finite() {
        return Err(Error::OutOfRange {
            what: "temperature range",
            value: t_hi,
        });
    }
    let n = n.max(2);
    let step = (t_hi / t_lo).ln() / (n - 1) as f64;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let t = if i + 1 == n {
            t_hi
        } else {
            t_lo * (step * i as f64).exp()
        };
        let ion = htl_locus_ionization(g, r, t)?;
        samples.push(HtlLocusSample {
            state: htl_state_from_ionization_t(g, ion, t)?,
            residual: residual_ion(g, &ion, t, r),
        });
    }
    Ok(HtlLocus {
        reference: *r,
        samples,
    })
}

/// `(u - u0)² = 3a²T0(1+α0)(p-p0)²/(p0(4p + p0))`.
pub fn htl_kinetic(g: &GasModel, r: &HtlRef, p: f64) -> Result<f64> {
    positive("pressure", p)?;
    let dp = p - r.p0;
    Ok(3.0 * g.a2 * r.t0 * (1.0 + r.alpha0) * dp * dp / (r.p0 * (4.0 * p + r.p0)))
}

/// Sample-to-sample monotonicity of `p` and `v` along the compressive part
/// `α ≥ α0` of a traced locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HtlMonotonicity {
    pub samples: usize,
    pub p_increasing: bool,
    pub v_increasing: bool,
    pub v_decreasing: bool,
}

pub fn htl_hugoniot_p_v_monotone(curve: &HtlLocus) -> HtlMonotonicity {
    let a0 = curve.reference.alpha0;
    let branch: Vec<&HtlState> = curve
        .samples
        .iter()
        .map(|s| &s.state)
        .filter(|s| s.alpha >= a0)
        .collect();
    let pairs = || branch.windows(2);
    HtlMonotonicity {
        samples: branch.len(),
        p_increasing: pairs().all(|w| w[1].p > w[0].p),
        v_increasing: pairs().all(|w| w[1].v > w[0].v),
        v_decreasing: pairs().all(|w| w[1].v < w[0].v),
    }
}
