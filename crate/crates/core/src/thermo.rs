//! Equation of state of a monatomic gas with one ionization level in Saha
//! equilibrium.
//!
//! Conventions: `a2 = R/m` is the specific gas constant, `tau = Ti/T`,
//! `q = 5/2 + tau` and `phi = alpha(1 - alpha)/2`. Entropies are
//! dimensionless (`eta = S/a2`) with the additive constant set to zero.

use num_traits::Float;

use crate::error::positive;
use crate::numerics::{expand_bracket, find_root_with, log1m_exp, log1p_exp, RootOptions};
use crate::{characteristics, Error, Result};

const LN_2: f64 = core::f64::consts::LN_2;

/// Physical constants of the gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    /// Specific gas constant `R/m` of the neutral gas (J kg⁻¹ K⁻¹).
    pub a2: f64,
    /// Saha constant: `kappa·p·T^{-5/2}·e^{Ti/T}` is dimensionless in SI units.
    pub kappa: f64,
    /// Ionization temperature (K).
    pub ti: f64,
}

impl GasModel {
    pub const HYDROGEN: GasModel = GasModel {
        a2: 8314.0,
        kappa: 29.9774,
        ti: 1.578e5,
    };

    pub fn new(a2: f64, kappa: f64, ti: f64) -> Result<Self> {
        positive("a2", a2)?;
        positive("kappa", kappa)?;
        positive("Ti", ti)?;
        Ok(GasModel { a2, kappa, ti })
    }

    /// `a = sqrt(R/m)`.
    pub fn a(&self) -> f64 {
        self.a2.sqrt()
    }

    /// Density-form Saha constant `m/(R·kappa)`.
    pub fn kappa_bar(&self) -> f64 {
        1.0 / (self.a2 * self.kappa)
    }
}

/// Degree of ionization held as `(ln α, ln(1-α))` so that both tails are
/// representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ionization {
    ln_alpha: f64,
    ln_one_minus: f64,
}

impl Ionization {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::OutOfRange {
                what: "alpha",
                value: alpha,
            });
        }
        Ok(Ionization {
            ln_alpha: alpha.ln(),
            ln_one_minus: (-alpha).ln_1p(),
        })
    }

    pub fn from_ln_alpha(ln_alpha: f64) -> Result<Self> {
        if !(ln_alpha < 0.0 && ln_alpha.is_finite()) {
            return Err(Error::OutOfRange {
                what: "ln alpha",
                value: ln_alpha,
            });
        }
        Ok(Ionization {
            ln_alpha,
            ln_one_minus: log1m_exp(ln_alpha),
        })
    }

    pub fn from_ln_one_minus(ln_one_minus: f64) -> Result<Self> {
        if !(ln_one_minus < 0.0 && ln_one_minus.is_finite()) {
            return Err(Error::OutOfRange {
                what: "ln(1 - alpha)",
                value: ln_one_minus,
            });
        }
        Ok(Ionization {
            ln_alpha: log1m_exp(ln_one_minus),
            ln_one_minus,
        })
    }

    /// From `z = ln(α/(1-α))`, which resolves both ends of (0,1).
    pub fn from_logit(z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::OutOfRange {
                what: "logit alpha",
                value: z,
            });
        }
        Ok(Ionization {
            ln_alpha: -log1p_exp(-z),
            ln_one_minus: -log1p_exp(z),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.ln_alpha.exp()
    }

    /// `1 - α`, accurate when α is close to one.
    pub fn one_minus(&self) -> f64 {
        self.ln_one_minus.exp()
    }

    pub fn ln_alpha(&self) -> f64 {
        self.ln_alpha
    }

    pub fn ln_one_minus(&self) -> f64 {
        self.ln_one_minus
    }

    pub fn logit(&self) -> f64 {
        self.ln_alpha - self.ln_one_minus
    }

    pub fn ln_one_plus(&self) -> f64 {
        self.alpha().ln_1p()
    }

    /// `ln(1 - α²)`.
    pub fn ln_one_minus_sq(&self) -> f64 {
        self.ln_one_minus + self.ln_one_plus()
    }

    /// `α(1 - α)`.
    pub fn spread(&self) -> f64 {
        (self.ln_alpha + self.ln_one_minus).exp()
    }
}

/// Coefficient `A = 5/2 + phi q²`.
pub(crate) fn coef_a(phi: f64, q: f64) -> f64 {
    2.5 + phi * q * q
}

/// Coefficient `B = 3/2 + phi (tau² + 3 tau + 15/4)`.
pub(crate) fn coef_b(phi: f64, tau: f64) -> f64 {
    1.5 + phi * (tau * tau + 3.0 * tau + 3.75)
}

/// One thermodynamic point with every state function filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    pub alpha: f64,
    pub t: f64,
    pub p: f64,
    pub rho: f64,
    pub v: f64,
    pub e: f64,
    pub h: f64,
    /// Entropy in the `(p, T)` form.
    pub eta: f64,
    /// Lagrangian sound speed.
    pub lambda: f64,
    ion: Ionization,
    ln_p: f64,
    tau: f64,
}

impl ThermoState {
    pub fn ionization(&self) -> Ionization {
        self.ion
    }

    pub fn ln_p(&self) -> f64 {
        self.ln_p
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn q(&self) -> f64 {
        2.5 + self.tau
    }

    pub fn phi(&self) -> f64 {
        0.5 * self.ion.spread()
    }

    pub fn coef_a(&self) -> f64 {
        coef_a(self.phi(), self.q())
    }

    pub fn coef_b(&self) -> f64 {
        coef_b(self.phi(), self.tau)
    }

    /// Entropy in the `(α, T)` form; differs from `eta` by
    /// [`entropy_form_offset`].
    pub fn eta_alpha_t(&self) -> f64 {
        entropy_ionization_t_parts(&self.ion, self.tau)
    }
}

/// First partial derivatives of the state functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialsBundle {
    /// `(∂α/∂p)_T`
    pub dalpha_dp: f64,
    /// `(∂α/∂T)_p`
    pub dalpha_dt: f64,
    /// `(∂p/∂ρ)_T`
    pub p_rho: f64,
    /// `(∂p/∂T)_ρ`
    pub p_t: f64,
    /// `(∂e/∂T)_ρ`
    pub e_t: f64,
    /// `(∂η/∂p)_T`
    pub eta_p: f64,
    /// `(∂η/∂T)_p`
    pub eta_t: f64,
    /// `(∂v/∂p)_T`
    pub v_p: f64,
    /// `(∂v/∂T)_p`
    pub v_t: f64,
}

/// `ln β = ln κ + ln p - (5/2) ln T + Ti/T`.
pub fn log_saha_beta(g: &GasModel, p: f64, t: f64) -> Result<f64> {
    positive("pressure", p)?;
    positive("temperature", t)?;
    Ok(g.kappa.ln() + p.ln() - 2.5 * t.ln() + g.ti / t)
}

pub fn ionization_from_pt(g: &GasModel, p: f64, t: f64) -> Result<Ionization> {
    Ok(ionization_from_ln_beta(log_saha_beta(g, p, t)?))
}

/// `α = (1 + β)^{-1/2}` from `ln β`.
pub(crate) fn ionization_from_ln_beta(ln_beta: f64) -> Ionization {
    let l = log1p_exp(ln_beta);
    if ln_beta > 0.0 {
        let ln_alpha = -0.5 * l;
        Ionization {
            ln_alpha,
            ln_one_minus: log1m_exp(ln_alpha),
        }
    } else {
        // 1 - α = β/2 (1 + O(β)); the direct form is exact to rounding there.
        let ln_one_minus = if ln_beta < -40.0 {
            ln_beta - LN_2
        } else {
            log1m_exp(-0.5 * l)
        };
        Ionization {
            ln_alpha: log1m_exp(ln_one_minus),
            ln_one_minus,
        }
    }
}

pub fn alpha_from_pt(g: &GasModel, p: f64, t: f64) -> Result<f64> {
    Ok(ionization_from_pt(g, p, t)?.alpha())
}

pub fn ionization_from_rho_t(g: &GasModel, rho: f64, t: f64) -> Result<Ionization> {
    positive("density", rho)?;
    positive("temperature", t)?;
    let ln_k = g.kappa_bar().ln() - rho.ln() + 1.5 * t.ln() - g.ti / t;
    Ok(ionization_from_ln_k(ln_k))
}

/// Root of `α²/(1-α) = K`, i.e. `α = 2/(1 + sqrt(1 + 4/K))`, from `ln K`.
pub(crate) fn ionization_from_ln_k(ln_k: f64) -> Ionization {
    let x = 4.0f64.ln() - ln_k;
    // ln(1 + sqrt(1 + 4/K))
    let l = log1p_exp(0.5 * log1p_exp(x));
    if x > 0.0 {
        let ln_alpha = LN_2 - l;
        Ionization {
            ln_alpha,
            ln_one_minus: log1m_exp(ln_alpha),
        }
    } else {
        // 1 - α = (4/K) / (1 + sqrt(1 + 4/K))²
        let ln_one_minus = x - 2.0 * l;
        Ionization {
            ln_alpha: log1m_exp(ln_one_minus),
            ln_one_minus,
        }
    }
}

pub fn alpha_from_rho_t(g: &GasModel, rho: f64, t: f64) -> Result<f64> {
    Ok(ionization_from_rho_t(g, rho, t)?.alpha())
}

/// `ln p` with `p = (1/κ)((1-α²)/α²) T^{5/2} e^{-Ti/T}`.
pub fn ln_pressure(g: &GasModel, ion: &Ionization, t: f64) -> f64 {
    -g.kappa.ln() + ion.ln_one_minus_sq() - 2.0 * ion.ln_alpha() + 2.5 * t.ln() - g.ti / t
}

pub fn pressure_from_alpha_t(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    positive("temperature", t)?;
    finite_pressure(ln_pressure(g, &ion, t))
}

fn finite_pressure(ln_p: f64) -> Result<f64> {
    let p = ln_p.exp();
    if p > 0.0 && p.is_finite() {
        Ok(p)
    } else {
        Err(Error::NonFinite { what: "pressure" })
    }
}

pub fn state_from_pt(g: &GasModel, p: f64, t: f64) -> Result<ThermoState> {
    let ion = ionization_from_pt(g, p, t)?;
    Ok(assemble(g, ion, t, p.ln(), p))
}

pub fn state_from_rho_t(g: &GasModel, rho: f64, t: f64) -> Result<ThermoState> {
    let ion = ionization_from_rho_t(g, rho, t)?;
    state_from_ionization_t(g, ion, t)
}

pub fn state_from_alpha_t(g: &GasModel, alpha: f64, t: f64) -> Result<ThermoState> {
    state_from_ionization_t(g, Ionization::new(alpha)?, t)
}

pub fn state_from_ionization_t(g: &GasModel, ion: Ionization, t: f64) -> Result<ThermoState> {
    positive("temperature", t)?;
    let ln_p = ln_pressure(g, &ion, t);
    let p = finite_pressure(ln_p)?;
    Ok(assemble(g, ion, t, ln_p, p))
}

fn assemble(g: &GasModel, ion: Ionization, t: f64, ln_p: f64, p: f64) -> ThermoState {
    let alpha = ion.alpha();
    let tau = g.ti / t;
    let pv = (1.0 + alpha) * g.a2 * t;
    let v = pv / p;
    let e = 1.5 * pv + g.a2 * g.ti * alpha;
    let eta = entropy_from_parts(&ion, ln_p, t, tau);
    let lambda = characteristics::lambda_from_parts(g, &ion, t, p);
    ThermoState {
        alpha,
        t,
        p,
        rho: 1.0 / v,
        v,
        e,
        h: e + pv,
        eta,
        lambda,
        ion,
        ln_p,
        tau,
    }
}

fn entropy_from_parts(ion: &Ionization, ln_p: f64, t: f64, tau: f64) -> f64 {
    let two_atanh = ion.ln_one_plus() - ion.ln_one_minus();
    -ln_p + two_atanh + (2.5 + tau) * ion.alpha() + 2.5 * t.ln()
}

fn entropy_ionization_t_parts(ion: &Ionization, tau: f64) -> f64 {
    -2.0 * (ion.ln_one_minus() - ion.ln_alpha()) + (1.0 + ion.alpha()) * (2.5 + tau)
}

/// `η(p,T) = -ln p + 2 artanh α + (5/2 + Ti/T) α + (5/2) ln T`.
pub fn entropy_pt(g: &GasModel, p: f64, t: f64) -> Result<f64> {
    let ion = ionization_from_pt(g, p, t)?;
    Ok(entropy_from_parts(&ion, p.ln(), t, g.ti / t))
}

/// `η(α,T) = -2 ln((1-α)/α) + (1+α)(5/2 + Ti/T)`.
pub fn entropy_alpha_t(g: &GasModel, alpha: f64, t: f64) -> Result<f64> {
    let ion = Ionization::new(alpha)?;
    entropy_ionization_t(g, &ion, t)
}

pub fn entropy_ionization_t(g: &GasModel, ion: &Ionization, t: f64) -> Result<f64> {
    positive("temperature", t)?;
    Ok(entropy_ionization_t_parts(ion, g.ti / t))
}

/// `η(α,T) - η(p,T)` at the same state; equals `5/2 - ln κ`.
pub fn entropy_form_offset(g: &GasModel) -> f64 {
    2.5 - g.kappa.ln()
}

pub fn partials(g: &GasModel, p: f64, t: f64) -> Result<PartialsBundle> {
    Ok(partials_of(g, &state_from_pt(g, p, t)?))
}

pub fn partials_of(g: &GasModel, s: &ThermoState) -> PartialsBundle {
    let alpha = s.alpha;
    let spread = s.ion.spread();
    let phi = 0.5 * spread;
    let q = s.q();
    let (p, t) = (s.p, s.t);
    // α(1 - α²)
    let a1 = spread * (1.0 + alpha);
    let pq = 1.0 + phi * q;
    PartialsBundle {
        dalpha_dp: -a1 / (2.0 * p),
        dalpha_dt: a1 * q / (2.0 * t),
        p_rho: 2.0 / (2.0 - alpha) * g.a2 * t,
        p_t: 2.0 / (2.0 - alpha) * pq * g.a2 * s.rho,
        e_t: g.a2 * (3.0 + spread * (q * q - 2.0 * q + 2.5)) / (2.0 - alpha),
        eta_p: -(1.0 + alpha) / p * pq,
        eta_t: (1.0 + alpha) / t * (2.5 + phi * q * q),
        v_p: -g.a2 * t / (p * p) * (1.0 + alpha) * (1.0 + phi),
        v_t: g.a2 / p * (1.0 + alpha) * pq,
    }
}

/// Slope `dT/dp` of an isentrope in the `(p, T)` plane.
pub fn isentrope_slope_dt_dp(g: &GasModel, p: f64, t: f64) -> Result<f64> {
    let s = state_from_pt(g, p, t)?;
    let phi = s.phi();
    let q = s.q();
    Ok(t / p * (1.0 + phi * q) / (2.5 + phi * q * q))
}

/// The temperature at which `entropy_pt(p, T) = eta`.
pub fn temperature_from_p_eta(g: &GasModel, p: f64, eta: f64) -> Result<f64> {
    positive("pressure", p)?;
    if !eta.is_finite() {
        return Err(Error::OutOfRange {
            what: "entropy",
            value: eta,
        });
    }
    let ln_p = p.ln();
    let residual = |y: f64| {
        let t = y.exp();
        let ion = ionization_from_ln_beta(g.kappa.ln() + ln_p - 2.5 * y + g.ti / t);
        entropy_from_parts(&ion, ln_p, t, g.ti / t) - eta
    };
    let seed = 0.4 * (eta + ln_p);
    let b = expand_bracket(residual, seed, 0.25, 12).map_err(|_| Error::BracketExpansion {
        what: "temperature at given entropy",
    })?;
    let opts = RootOptions {
        rel_tol: 1e-15,
        abs_tol: 1e-15,
        max_iter: 200,
    };
    let y = find_root_with(residual, b, &opts)?;
    let t = y.exp();
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::NonFinite {
            what: "temperature",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::central_diff;

    const H: GasModel = GasModel::HYDROGEN;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn saha_anchor_values() {
        let a750 = alpha_from_pt(&H, 1466.3, 750.0).unwrap();
        let a300 = alpha_from_pt(&H, 1466.3, 300.0).unwrap();
        assert!(rel(a750, 3.8418e-45) < 1e-3, "{a750}");
        assert!(rel(a300, 3.5929e-114) < 1e-3, "{a300}");
    }

    #[test]
    fn log_beta_matches_anchor_oracle() {
        // β = α⁻² - 1 with the tabulated ionization degrees.
        let oracle = |alpha: f64| -2.0 * alpha.ln() + (-alpha * alpha).ln_1p();
        let b750 = log_saha_beta(&H, 1466.3, 750.0).unwrap();
        let b300 = log_saha_beta(&H, 1466.3, 300.0).unwrap();
        assert!((b750 - oracle(3.8418e-45)).abs() < 0.01);
        assert!((b750 - 204.54).abs() < 0.01);
        assert!((b300 - oracle(3.5929e-114)).abs() < 0.1);
        assert!((b300 - 522.43).abs() < 0.01);
    }

    #[test]
    fn log_beta_vanishes_on_unit_saha_factor() {
        let t = 2.0e4;
        let p = t.powf(2.5) * (-H.ti / t).exp() / H.kappa;
        assert!(log_saha_beta(&H, p, t).unwrap().abs() < 1e-12);
    }

    #[test]
    fn beta_three_gives_half() {
        let t = 1.0e4;
        let p = 3.0 * t.powf(2.5) * (-H.ti / t).exp() / H.kappa;
        assert!((alpha_from_pt(&H, p, t).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(matches!(
            alpha_from_pt(&H, -1.0, 300.0),
            Err(Error::NonPositive { .. })
        ));
        assert!(alpha_from_rho_t(&H, 1.0, 0.0).is_err());
        assert!(pressure_from_alpha_t(&H, 1.0, 300.0).is_err());
        assert!(pressure_from_alpha_t(&H, 0.0, 300.0).is_err());
        assert!(GasModel::new(8314.0, -1.0, 1e5).is_err());
    }

    #[test]
    fn density_root_closed_cases() {
        let half = ionization_from_ln_k((0.5f64).ln());
        assert!((half.alpha() - 0.5).abs() < 1e-15);
        assert!((half.one_minus() - 0.5).abs() < 1e-15);
        let k = 1e-20f64;
        let small = ionization_from_ln_k(k.ln());
        assert!(rel(small.alpha() / k.sqrt(), 1.0) < 1e-9);
        // Large K: 1 - α ≈ 1/K.
        let big = ionization_from_ln_k(80.0);
        assert!(rel(big.one_minus(), (-80.0f64).exp()) < 1e-12);
        assert!(big.ln_alpha() < 0.0);
    }

    #[test]
    fn density_and_pressure_forms_agree() {
        for &(p, t) in &[(1466.3, 750.0), (1466.3, 300.0), (1e5, 1e4), (10.0, 3e4)] {
            let s = state_from_pt(&H, p, t).unwrap();
            let ion = ionization_from_rho_t(&H, s.rho, t).unwrap();
            let a = s.ionization().ln_alpha();
            assert!((ion.ln_alpha() - a).abs() <= 1e-10 * a.abs());
        }
    }

    #[test]
    fn pressure_closed_case_and_round_trip() {
        // T^{5/2} e^{-Ti/T} = κ at α = 1/2 gives p = 3.
        let t = crate::numerics::find_root(
            |t: f64| 2.5 * t.ln() - H.ti / t - H.kappa.ln(),
            crate::numerics::Bracket::new(1e3, 1e5).unwrap(),
            1e-15,
        )
        .unwrap();
        assert!(rel(pressure_from_alpha_t(&H, 0.5, t).unwrap(), 3.0) < 1e-13);
        for &alpha in &[1e-30, 1e-3, 0.5, 0.99] {
            for &t in &[500.0, 5000.0, 5e4] {
                let p = pressure_from_alpha_t(&H, alpha, t).unwrap();
                let back = ionization_from_pt(&H, p, t).unwrap();
                assert!((back.ln_alpha() - alpha.ln()).abs() <= 1e-12 * alpha.ln().abs().max(1.0));
            }
        }
        let p = pressure_from_alpha_t(&H, 3.8418e-45, 750.0).unwrap();
        assert!(rel(p, 1466.3) < 5e-3);
    }

    #[test]
    fn state_identities() {
        let s = state_from_pt(&H, 1466.3, 750.0).unwrap();
        assert!(rel(s.e, 1.5 * 8314.0 * 750.0) < 1e-12);
        assert!(rel(s.e, 9.353e6) < 1e-6 * 1e3);
        assert!(rel(s.h - s.e, s.p * s.v) < 1e-13);
        for &(p, t) in &[(1e3, 2e4), (1e5, 1.5e4), (50.0, 8e3)] {
            let s = state_from_pt(&H, p, t).unwrap();
            assert!(rel(s.h - s.e, H.a2 * t * (1.0 + s.alpha)) < 1e-13);
            assert!(rel(s.p * s.v, H.a2 * t * (1.0 + s.alpha)) < 1e-13);
            assert!(rel(s.rho * s.v, 1.0) < 1e-15);
            let lb = log_saha_beta(&H, p, t).unwrap();
            let from_alpha = -2.0 * s.ionization().ln_alpha() + s.ionization().ln_one_minus_sq();
            assert!((lb - from_alpha).abs() < 1e-10 * lb.abs().max(1.0));
        }
    }

    #[test]
    fn energy_at_hydrogen_anchor_state() {
        let s = state_from_pt(&H, 1466.3, 750.0).unwrap();
        assert!(rel(s.e, 9.35325e6) < 1e-6);
    }

    #[test]
    fn ideal_gas_entropy_limit() {
        let (p, t) = (1466.3, 300.0);
        let eta = entropy_pt(&H, p, t).unwrap();
        assert!((eta - (2.5 * t.ln() - p.ln())).abs() < 1e-12);
    }

    #[test]
    fn entropy_decreases_with_pressure() {
        for &(p, t) in &[(1466.3, 750.0), (1e4, 1.2e4), (10.0, 3e4)] {
            let d = central_diff(|x| entropy_pt(&H, x, t).unwrap(), p, 1e-4 * p);
            assert!(d <= -1.0 / p * (1.0 - 1e-6));
        }
    }

    #[test]
    fn entropy_forms_differ_by_constant() {
        let offset = entropy_form_offset(&H);
        for &(p, t) in &[
            (1466.3, 750.0),
            (1466.3, 5000.0),
            (1e5, 1e4),
            (1e3, 1.5e4),
            (10.0, 2e4),
            (1.0, 5e4),
            (1e7, 3e4),
            (0.1, 8e3),
            (1e2, 1e5),
            (3e3, 2.5e3),
        ] {
            let s = state_from_pt(&H, p, t).unwrap();
            let d = entropy_ionization_t(&H, &s.ionization(), t).unwrap() - s.eta;
            assert!((d - offset).abs() < 1e-10, "{p} {t} {d} {offset}");
        }
    }

    fn fd_check(closed: f64, fd: f64) {
        assert!(rel(fd, closed) < 1e-6, "closed {closed} fd {fd}");
    }

    fn check_partials(p: f64, t: f64) {
        let s = state_from_pt(&H, p, t).unwrap();
        let d = partials_of(&H, &s);
        let hp = 1e-5 * p;
        let ht = 1e-5 * t;
        let hr = 1e-5 * s.rho;
        // α is compared through ln α, whose derivative is smooth at tiny α.
        fd_check(
            d.dalpha_dp / s.alpha,
            central_diff(|x| ionization_from_pt(&H, x, t).unwrap().ln_alpha(), p, hp),
        );
        fd_check(
            d.dalpha_dt / s.alpha,
            central_diff(|x| ionization_from_pt(&H, p, x).unwrap().ln_alpha(), t, ht),
        );
        fd_check(
            d.p_rho,
            central_diff(|x| state_from_rho_t(&H, x, t).unwrap().p, s.rho, hr),
        );
        fd_check(
            d.p_t,
            central_diff(|x| state_from_rho_t(&H, s.rho, x).unwrap().p, t, ht),
        );
        fd_check(
            d.e_t,
            central_diff(|x| state_from_rho_t(&H, s.rho, x).unwrap().e, t, ht),
        );
        fd_check(
            d.eta_p,
            central_diff(|x| entropy_pt(&H, x, t).unwrap(), p, hp),
        );
        fd_check(
            d.eta_t,
            central_diff(|x| entropy_pt(&H, p, x).unwrap(), t, ht),
        );
        fd_check(
            d.v_p,
            central_diff(|x| state_from_pt(&H, x, t).unwrap().v, p, hp),
        );
        fd_check(
            d.v_t,
            central_diff(|x| state_from_pt(&H, p, x).unwrap().v, t, ht),
        );
    }

    #[test]
    fn partials_match_finite_differences() {
        check_partials(1466.3, 5000.0);
        check_partials(1466.3, 1.2e4);
        check_partials(1e5, 2e4);
        check_partials(10.0, 3e4);
    }

    #[test]
    fn partials_signs_and_identity() {
        for &(p, t) in &[(1466.3, 5000.0), (1e3, 1.5e4), (1.0, 4e4)] {
            let s = state_from_pt(&H, p, t).unwrap();
            let d = partials_of(&H, &s);
            assert!(d.p_rho > 0.0 && d.p_t > 0.0 && d.e_t > 0.0);
            assert!(d.eta_p < 0.0 && d.eta_t > 0.0);
            let lhs = -(t / p) * d.dalpha_dt;
            let rhs = s.q() * d.dalpha_dp;
            assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs());
        }
    }

    #[test]
    fn neutral_limit_of_partials() {
        let s = state_from_pt(&H, 1466.3, 300.0).unwrap();
        let d = partials_of(&H, &s);
        assert!(rel(d.p_rho, H.a2 * 300.0) < 1e-10);
        assert!(rel(d.e_t, 1.5 * H.a2) < 1e-10);
    }

    #[test]
    fn temperature_inversion_round_trip() {
        let mut seed = 12345u64;
        for _ in 0..20 {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let u1 = (seed >> 11) as f64 / (1u64 << 53) as f64;
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let u2 = (seed >> 11) as f64 / (1u64 << 53) as f64;
            let p = 10f64.powf(-1.0 + 7.0 * u1);
            let t = 10f64.powf(2.5 + 2.0 * u2);
            let eta = entropy_pt(&H, p, t).unwrap();
            let back = temperature_from_p_eta(&H, p, eta).unwrap();
            assert!(rel(back, t) < 1e-10, "{p} {t} {back}");
        }
    }

    #[test]
    fn neutral_isentrope_is_polytropic() {
        let (p, t) = (1466.3, 300.0);
        let eta = entropy_pt(&H, p, t).unwrap();
        let slope = central_diff(
            |lp: f64| temperature_from_p_eta(&H, lp.exp(), eta).unwrap().ln(),
            p.ln(),
            1e-3,
        );
        assert!((slope - 0.4).abs() < 1e-6);
    }

    #[test]
    fn isentrope_slope_matches_inversion() {
        for &(p, t) in &[(1466.3, 5000.0), (1e3, 1.5e4), (1e5, 2e4)] {
            let eta = entropy_pt(&H, p, t).unwrap();
            let fd = central_diff(|x| temperature_from_p_eta(&H, x, eta).unwrap(), p, 1e-4 * p);
            let closed = isentrope_slope_dt_dp(&H, p, t).unwrap();
            assert!(closed > 0.0);
            assert!(rel(fd, closed) < 1e-6);
        }
    }

    #[test]
    fn ionization_charts_agree() {
        let a = Ionization::new(0.3).unwrap();
        let b = Ionization::from_logit(a.logit()).unwrap();
        let c = Ionization::from_ln_alpha(a.ln_alpha()).unwrap();
        let d = Ionization::from_ln_one_minus(a.ln_one_minus()).unwrap();
        for x in [b, c, d] {
            assert!((x.ln_alpha() - a.ln_alpha()).abs() < 1e-15);
            assert!((x.ln_one_minus() - a.ln_one_minus()).abs() < 1e-15);
        }
        let near_one = Ionization::from_logit(60.0).unwrap();
        assert!(rel(near_one.one_minus(), (-60.0f64).exp()) < 1e-14);
        assert!(Ionization::from_ln_alpha(0.0).is_err());
    }
}
