use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeStatus {
    Completed,
    /// The step size collapsed at the last stored sample, typically because
    /// the right-hand side blows up there.
    Truncated,
}

#[derive(Debug, Clone)]
pub struct OdeResult {
    pub samples: Vec<(f64, Vec<f64>)>,
    pub status: OdeStatus,
}

impl OdeResult {
    /// Last stored sample.
    pub fn last(&self) -> (f64, &[f64]) {
        let (s, y) = self.samples.last().expect("at least the initial sample");
        (*s, y)
    }

    /// Converts a truncated run into [`Error::StepUnderflow`].
    pub fn into_completed(self) -> Result<Self> {
        match self.status {
            OdeStatus::Completed => Ok(self),
            OdeStatus::Truncated => Err(Error::StepUnderflow { s: self.last().0 }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step magnitude; unbounded when `None`.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn new(rel_tol: f64) -> Self {
        OdeOptions {
            rel_tol,
            abs_tol: f64::MIN_POSITIVE,
            max_step: None,
            max_steps: 1_000_000,
        }
    }
}

/// Integrates `y' = rhs(s, y)` over `span`, storing every accepted step.
///
/// Dormand–Prince 5(4) with error-per-unit-step control: a step of length
/// `h` is accepted when its local error estimate is below
/// `rel_tol·|y|·h/|span|`, so every step also meets `rel_tol·|y|`.
pub fn integrate_ode<F>(rhs: F, y0: &[f64], span: (f64, f64), rel_tol: f64) -> Result<OdeResult>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    integrate_ode_with(rhs, y0, span, &OdeOptions::new(rel_tol))
}

pub fn integrate_ode_with<F>(
    rhs: F,
    y0: &[f64],
    span: (f64, f64),
    opts: &OdeOptions,
) -> Result<OdeResult>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut st = Stepper::new(rhs, span.0, y0, span.1, opts)?;
    let mut samples = vec![(span.0, y0.to_vec())];
    let status = st.advance(span.1, &mut samples, true);
    Ok(OdeResult { samples, status })
}

/// Integrates from `s0` and stores the solution exactly at each of
/// `outputs`, which must be strictly monotone and ordered away from `s0`.
pub fn integrate_ode_through<F>(
    rhs: F,
    y0: &[f64],
    s0: f64,
    outputs: &[f64],
    opts: &OdeOptions,
) -> Result<OdeResult>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut samples = vec![(s0, y0.to_vec())];
    let Some(&end) = outputs.last() else {
        return Ok(OdeResult {
            samples,
            status: OdeStatus::Completed,
        });
    };
    let dir = (end - s0).signum();
    let mut prev = s0;
    for &s in outputs {
        if !((s - prev) * dir > 0.0) {
            return Err(Error::OutOfRange {
                what: "output points",
                value: s,
            });
        }
        prev = s;
    }
    let mut st = Stepper::new(rhs, s0, y0, end, opts)?;
    for &s in outputs {
        if st.advance(s, &mut samples, false) == OdeStatus::Truncated {
            return Ok(OdeResult {
                samples,
                status: OdeStatus::Truncated,
            });
        }
        samples.push((s, st.y.clone()));
    }
    Ok(OdeResult {
        samples,
        status: OdeStatus::Completed,
    })
}

struct Stepper<'o, F> {
    rhs: F,
    opts: &'o OdeOptions,
    s: f64,
    y: Vec<f64>,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    h: f64,
    steps: usize,
    span: f64,
}

impl<'o, F> Stepper<'o, F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    fn new(mut rhs: F, s0: f64, y0: &[f64], s1: f64, opts: &'o OdeOptions) -> Result<Self> {
        if !(opts.rel_tol >= 1e-13) {
            return Err(Error::OutOfRange {
                what: "rel_tol",
                value: opts.rel_tol,
            });
        }
        let n = y0.len();
        let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| vec![0.0; n]);
        rhs(s0, y0, &mut k[0]);
        if k[0].iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "ode right-hand side at the initial point",
            });
        }
        let mut st = Stepper {
            rhs,
            opts,
            s: s0,
            y: y0.to_vec(),
            k,
            tmp: vec![0.0; n],
            h: 0.0,
            steps: 0,
            span: (s1 - s0).abs(),
        };
        st.h = st.initial_step(s1);
        Ok(st)
    }

    fn scale(&self, y: f64) -> f64 {
        self.opts.abs_tol + self.opts.rel_tol * y.abs()
    }

    fn initial_step(&mut self, s1: f64) -> f64 {
        let n = self.y.len();
        let mut d0 = 0.0f64;
        let mut d1 = 0.0f64;
        for i in 0..n {
            let sc = self.scale(self.y[i]);
            d0 = d0.max(self.y[i].abs() / sc);
            d1 = d1.max(self.k[0][i].abs() / sc);
        }
        let dir = (s1 - self.s).signum();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6 * self.span
        } else {
            (0.01 * d0 / d1).min(self.span)
        };
        for i in 0..n {
            self.tmp[i] = self.y[i] + dir * h0 * self.k[0][i];
        }
        let mut f1 = vec![0.0; n];
        (self.rhs)(self.s + dir * h0, &self.tmp, &mut f1);
        let mut d2 = 0.0f64;
        for i in 0..n {
            d2 = d2.max((f1[i] - self.k[0][i]).abs() / self.scale(self.y[i]));
        }
        d2 /= h0;
        let h1 = if !d2.is_finite() {
            h0 * 1e-3
        } else if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6 * self.span)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        let mut h = (100.0 * h0).min(h1).min(self.span);
        if let Some(m) = self.opts.max_step {
            h = h.min(m);
        }
        h.max(f64::MIN_POSITIVE)
    }

    /// Advances to `target`. Returns `Truncated` if the step size underflows.
    fn advance(&mut self, target: f64, out: &mut Vec<(f64, Vec<f64>)>, record: bool) -> OdeStatus {
        let n = self.y.len();
        let dir = (target - self.s).signum();
        let mut ynew = vec![0.0; n];
        let mut err = vec![0.0; n];
        while (target - self.s) * dir > 0.0 {
            if self.steps >= self.opts.max_steps {
                return OdeStatus::Truncated;
            }
            let h_min = 64.0 * f64::EPSILON * self.s.abs().max(self.span);
            let remaining = (target - self.s).abs();
            let mut h = self.h.min(remaining);
            if let Some(m) = self.opts.max_step {
                h = h.min(m);
            }
            let last = remaining - h <= h_min;
            if last {
                h = remaining;
            }
            let hs = dir * h;
            let ok = self.try_step(hs, &mut ynew, &mut err);
            let ratio = if ok {
                let mut r = 0.0f64;
                for i in 0..n {
                    let sc =
                        self.opts.abs_tol + self.opts.rel_tol * self.y[i].abs().max(ynew[i].abs());
                    r = r.max(err[i].abs() / sc);
                }
                // Error per unit step: the tolerance is shared out along the span.
                r * self.span / h
            } else {
                f64::INFINITY
            };
            if ratio <= 1.0 {
                self.steps += 1;
                self.s = if last { target } else { self.s + hs };
                core::mem::swap(&mut self.y, &mut ynew);
                self.k.swap(0, 6);
                if record {
                    out.push((self.s, self.y.clone()));
                }
                let grow = if ratio == 0.0 {
                    MAX_SCALE
                } else {
                    (SAFETY * ratio.powf(-0.25)).clamp(MIN_SCALE, MAX_SCALE)
                };
                self.h = h * grow;
            } else {
                let shrink = if ratio.is_finite() {
                    (SAFETY * ratio.powf(-0.25)).max(MIN_SCALE)
                } else {
                    0.25
                };
                self.h = h * shrink;
                if self.h < h_min {
                    return OdeStatus::Truncated;
                }
            }
        }
        OdeStatus::Completed
    }

    /// One Dormand–Prince step of signed size `h`; `k[0]` holds the slope at
    /// the current point and `k[6]` receives the slope at the new point.
    fn try_step(&mut self, h: f64, ynew: &mut [f64], err: &mut [f64]) -> bool {
        let n = self.y.len();
        let s = self.s;
        let y = &self.y;
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        let tmp = &mut self.tmp;
        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        (self.rhs)(s + C2 * h, tmp, k2);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        (self.rhs)(s + C3 * h, tmp, k3);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        (self.rhs)(s + C4 * h, tmp, k4);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        (self.rhs)(s + C5 * h, tmp, k5);
        for i in 0..n {
            tmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        (self.rhs)(s + h, tmp, k6);
        for i in 0..n {
            ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        (self.rhs)(s + h, ynew, k7);
        for i in 0..n {
            err[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        ynew.iter()
            .chain(err.iter())
            .chain(k7.iter())
            .all(|v| v.is_finite())
    }
}
