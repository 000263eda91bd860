use std::io::Write;

use saha_core::characteristics::{gnl_indicator, is_gn_sufficient, trace_inflection_locus, Family};
use saha_core::htl::{
    htl_entropy, htl_integral_curve, htl_integral_temperature, htl_state_from_alpha_t,
    htl_state_from_ionization_t, htl_state_from_pt, htl_trace_thermo_locus, HtlRef, HtlState,
};
use saha_core::hugoniot::{
    kinetic_residual, solve_shock_state, trace_thermo_locus_logit, RefState,
};
use saha_core::rarefaction::{sample_isentrope, IsentropeLevel};
use saha_core::thermo::{state_from_alpha_t, state_from_pt, state_from_rho_t};
use saha_core::{Error, GasModel, Ionization, ThermoState};

use crate::args::{Cli, Command, HugoniotArgs, InflectionArgs, IsentropeArgs, Model, StateArgs};
use crate::error::{usage, CliError};
use crate::gas::{self, GasOverrides};
use crate::output::{self, Cell, Section};

/// Largest α used as the default upper end of a Hugoniot trace.
const ALPHA_CEILING: f64 = 1.0 - 1e-6;
/// Isentrope samples stop this fraction short of `α∞`.
const BLOWUP_MARGIN: f64 = 1e-9;
/// Isentrope samples start at this fraction of `α∞`.
const ISENTROPE_FLOOR: f64 = 1e-9;

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let g = &cli.global;
    let overrides = GasOverrides {
        a2: g.a2,
        kappa: g.kappa,
        ti: g.ti,
    };
    let gas = gas::resolve(&g.gas, g.config.as_deref(), &overrides)?;
    let sections = match (&cli.command, g.model) {
        (Command::State(a), Model::Exact) => vec![state_exact(&gas, a)?],
        (Command::State(a), Model::Htl) => vec![state_htl(&gas, a)?],
        (Command::Inflection(a), Model::Exact) => vec![inflection(&gas, a)?],
        (Command::Inflection(_), Model::Htl) => {
            return Err(usage("the high-temperature limit has no inflection locus"))
        }
        (Command::Hugoniot(a), Model::Exact) => hugoniot_exact(&gas, a)?,
        (Command::Hugoniot(a), Model::Htl) => vec![hugoniot_htl(&gas, a)?],
        (Command::Isentrope(a), Model::Exact) => vec![isentrope_exact(&gas, a)?],
        (Command::Isentrope(a), Model::Htl) => vec![isentrope_htl(&gas, a)?],
    };
    output::write(out, g.format, &sections)
}

fn state_exact(g: &GasModel, a: &StateArgs) -> Result<Section, CliError> {
    let s: ThermoState = match (a.p, a.rho, a.alpha) {
        (Some(p), None, None) => state_from_pt(g, p, a.t)?,
        (None, Some(rho), None) => state_from_rho_t(g, rho, a.t)?,
        (None, None, Some(alpha)) => state_from_alpha_t(g, alpha, a.t)?,
        _ => return Err(usage("give exactly one of --p, --rho, --alpha with --T")),
    };
    let mut sec = Section::new(
        "state",
        &[
            "alpha",
            "ln_alpha",
            "T",
            "p",
            "rho",
            "v",
            "e",
            "h",
            "eta",
            "lambda",
            "gn_certified",
            "f",
        ],
    );
    sec.push(vec![
        s.alpha.into(),
        s.ionization().ln_alpha().into(),
        s.t.into(),
        s.p.into(),
        s.rho.into(),
        s.v.into(),
        s.e.into(),
        s.h.into(),
        s.eta.into(),
        s.lambda.into(),
        is_gn_sufficient(g, s.alpha, s.t).into(),
        gnl_indicator(g, s.alpha, s.t)?.into(),
    ]);
    Ok(sec)
}

/// HTL ionization at given density: `κ a² ρ T^{-3/2} α² + α - 1 = 0`,
/// with `1 - α = 4c/(1 + √(1+4c))²` kept separately for the ionized side.
fn htl_ionization_from_rho_t(g: &GasModel, rho: f64, t: f64) -> Result<Ionization, Error> {
    for (what, value) in [("density", rho), ("temperature", t)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositive { what, value });
        }
    }
    let ln_c = (g.kappa * g.a2 * rho).ln() - 1.5 * t.ln();
    let s = (1.0 + 4.0 * ln_c.exp()).sqrt();
    let ln_one_minus = core::f64::consts::LN_2 * 2.0 + ln_c - 2.0 * (1.0 + s).ln();
    if ln_one_minus < -core::f64::consts::LN_2 {
        Ionization::from_ln_one_minus(ln_one_minus)
    } else {
        Ionization::new(2.0 / (1.0 + s))
    }
}

fn state_htl(g: &GasModel, a: &StateArgs) -> Result<Section, CliError> {
    let s: HtlState = match (a.p, a.rho, a.alpha) {
        (Some(p), None, None) => htl_state_from_pt(g, p, a.t)?,
        (None, Some(rho), None) => {
            htl_state_from_ionization_t(g, htl_ionization_from_rho_t(g, rho, a.t)?, a.t)?
        }
        (None, None, Some(alpha)) => htl_state_from_alpha_t(g, alpha, a.t)?,
        _ => return Err(usage("give exactly one of --p, --rho, --alpha with --T")),
    };
    let mut sec = Section::new(
        "state",
        &[
            "alpha",
            "ln_alpha",
            "T",
            "p",
            "rho",
            "v",
            "e",
            "h",
            "eta",
            "pseudo_entropy",
            "lambda",
            "gn_certified",
        ],
    );
    sec.push(vec![
        s.alpha.into(),
        s.ionization().ln_alpha().into(),
        s.t.into(),
        s.p.into(),
        (1.0 / s.v).into(),
        s.v.into(),
        s.e.into(),
        s.h.into(),
        s.eta.into(),
        s.pseudo_entropy.into(),
        s.lambda.into(),
        true.into(),
    ]);
    Ok(sec)
}

fn inflection(g: &GasModel, a: &InflectionArgs) -> Result<Section, CliError> {
    if !(a.tmin > 0.0 && a.tmin < a.tmax && a.tmax.is_finite()) {
        return Err(usage("need 0 < --tmin < --tmax"));
    }
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let mut sec = Section::new(
        "inflection",
        &["T", "alpha_left", "alpha_right", "f_residual"],
    );
    let step = (a.tmax / a.tmin).ln() / (a.samples - 1) as f64;
    for i in 0..a.samples {
        let t = if i + 1 == a.samples {
            a.tmax
        } else {
            a.tmin * (step * i as f64).exp()
        };
        let (left, right) = trace_inflection_locus(g, (t, t), 1)?;
        let l = left.samples.first().map(|s| s.0);
        let r = right.samples.first().map(|s| s.0);
        let residual = l
            .into_iter()
            .chain(r)
            .map(|alpha| gnl_indicator(g, alpha, t).map(f64::abs))
            .try_fold(None::<f64>, |acc, f| {
                f.map(|f| Some(acc.map_or(f, |m| m.max(f))))
            })?;
        sec.push(vec![t.into(), l.into(), r.into(), residual.into()]);
    }
    Ok(sec)
}

fn exact_reference(g: &GasModel, a: &HugoniotArgs) -> Result<RefState, CliError> {
    Ok(match (a.alpha0, a.p0) {
        (Some(alpha0), None) => RefState::new(g, alpha0, a.t0, a.u0)?,
        (None, Some(p0)) => RefState::from_pt(g, p0, a.t0, a.u0)?,
        _ => return Err(usage("give exactly one of --alpha0, --p0 with --T0")),
    })
}

fn hugoniot_exact(g: &GasModel, a: &HugoniotArgs) -> Result<Vec<Section>, CliError> {
    let r = exact_reference(g, a)?;
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let z0 = r.ionization().logit();
    let logit = |alpha: f64| Ionization::new(alpha).map(|i| i.logit());
    let z_lo = a.alpha_min.map(logit).transpose()?.unwrap_or(z0);
    let z_hi = match a.alpha_max {
        Some(alpha) => logit(alpha)?,
        None => logit(ALPHA_CEILING)?.max(z0 + 1.0),
    };
    if !(z_lo <= z0 && z0 <= z_hi) {
        return Err(usage(
            "--alpha-min and --alpha-max must bracket the reference α",
        ));
    }
    let curve = trace_thermo_locus_logit(g, &r, (z_lo, z_hi), a.samples)?;

    let mut columns = vec!["alpha", "T", "p", "v", "F_residual"];
    if a.u.is_some() {
        columns.push("G_residual");
    }
    let mut locus = Section::new("locus", &columns);
    for s in &curve.samples {
        let st = &s.state;
        let mut row: Vec<Cell> = vec![
            st.alpha.into(),
            st.t.into(),
            st.p.into(),
            st.v.into(),
            s.residual.into(),
        ];
        if let Some(u) = a.u {
            row.push(kinetic_residual(g, &r, &st.ionization(), u, st.t).into());
        }
        locus.push(row);
    }
    let mut sections = vec![locus];

    if let Some(u) = a.u {
        let mut x = Section::new("intersection", &["kind", "alpha", "T", "u", "m", "s", "dS"]);
        match solve_shock_state(g, &r, u) {
            Ok(sol) => x.push(vec![
                "shock".into(),
                sol.front.alpha.into(),
                sol.front.t.into(),
                sol.u.into(),
                sol.m.into(),
                sol.s.into(),
                sol.ds.into(),
            ]),
            Err(Error::Contact) => x.push(vec![
                "contact".into(),
                r.alpha0.into(),
                r.t0.into(),
                r.u0.into(),
                0.0.into(),
                r.u0.into(),
                0.0.into(),
            ]),
            Err(e) => return Err(e.into()),
        }
        sections.push(x);
    }
    Ok(sections)
}

fn hugoniot_htl(g: &GasModel, a: &HugoniotArgs) -> Result<Section, CliError> {
    if a.u.is_some() {
        return Err(usage(
            "the shock solve is available for the exact model only",
        ));
    }
    let r = match (a.alpha0, a.p0) {
        (Some(alpha0), None) => HtlRef::new(g, alpha0, a.t0, a.u0)?,
        (None, Some(p0)) => HtlRef::from_pt(g, p0, a.t0, a.u0)?,
        _ => return Err(usage("give exactly one of --alpha0, --p0 with --T0")),
    };
    let range = (a.tmin.unwrap_or(a.t0), a.tmax.unwrap_or(1e3 * a.t0));
    let curve = htl_trace_thermo_locus(g, &r, range, a.samples)?;
    let mut sec = Section::new("locus", &["alpha", "T", "p", "v", "F_residual"]);
    for s in &curve.samples {
        let st = &s.state;
        sec.push(vec![
            st.alpha.into(),
            st.t.into(),
            st.p.into(),
            st.v.into(),
            s.residual.into(),
        ]);
    }
    Ok(sec)
}

const ISENTROPE_COLUMNS: [&str; 8] = [
    "eta0",
    "alpha_inf",
    "alpha",
    "T",
    "p",
    "u_plus",
    "u_minus",
    "eta_drift",
];

fn isentrope_exact(g: &GasModel, a: &IsentropeArgs) -> Result<Section, CliError> {
    let levels: Vec<f64> = match (a.alpha0, a.t0) {
        (Some(alpha0), Some(t0)) if a.eta0.is_empty() => {
            vec![IsentropeLevel::through(g, &Ionization::new(alpha0)?, t0)?.eta0]
        }
        (None, None) => a.eta0.clone(),
        _ => return Err(usage("give --eta0, or --alpha0 with --T0")),
    };
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let mut sec = Section::new("isentrope", &ISENTROPE_COLUMNS);
    for eta0 in levels {
        let ai = IsentropeLevel::new(eta0)?.alpha_inf();
        let curve = sample_isentrope(
            g,
            eta0,
            ISENTROPE_FLOOR * ai,
            (1.0 - BLOWUP_MARGIN) * ai,
            a.samples,
        )?;
        for s in &curve.samples {
            sec.push(vec![
                eta0.into(),
                curve.alpha_inf.into(),
                s.alpha.into(),
                s.t.into(),
                s.p.into(),
                s.u_plus.into(),
                s.u_minus.into(),
                (s.eta - eta0).into(),
            ]);
        }
    }
    Ok(sec)
}

/// HTL isentropes keep α fixed; sampled over two decades of pressure either
/// side of the anchor.
fn isentrope_htl(g: &GasModel, a: &IsentropeArgs) -> Result<Section, CliError> {
    let (Some(alpha0), Some(t0), true) = (a.alpha0, a.t0, a.eta0.is_empty()) else {
        return Err(usage("the high-temperature limit needs --alpha0 with --T0"));
    };
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let r = HtlRef::new(g, alpha0, t0, 0.0)?;
    let eta0 = htl_entropy(alpha0)?;
    let mut sec = Section::new("isentrope", &ISENTROPE_COLUMNS);
    let step = 1e4f64.ln() / (a.samples - 1) as f64;
    for i in 0..a.samples {
        let p = r.p0 * 1e-2 * (step * i as f64).exp();
        let t = htl_integral_temperature(&r, p)?;
        let s = htl_state_from_pt(g, p, t)?;
        sec.push(vec![
            eta0.into(),
            Cell::Empty,
            s.alpha.into(),
            t.into(),
            p.into(),
            htl_integral_curve(g, &r, Family::Plus, p)?.into(),
            htl_integral_curve(g, &r, Family::Minus, p)?.into(),
            (htl_entropy(s.alpha)? - eta0).into(),
        ]);
    }
    Ok(sec)
}
