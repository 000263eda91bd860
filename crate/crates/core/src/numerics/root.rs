use crate::{Error, Result};

/// Closed interval `[lo, hi]` expected to contain a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::OutOfRange {
                what: "bracket",
                value: hi - lo,
            });
        }
        Ok(Bracket { lo, hi })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Target bracket width relative to the root.
    pub rel_tol: f64,
    /// Absolute floor on the bracket width, for roots at or near zero.
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl RootOptions {
    pub fn new(rel_tol: f64) -> Self {
        RootOptions {
            rel_tol,
            abs_tol: 0.0,
            max_iter: 200,
        }
    }
}

/// Brent's method with the default iteration cap of 200.
pub fn find_root<F: FnMut(f64) -> f64>(f: F, b: Bracket, rel_tol: f64) -> Result<f64> {
    find_root_with(f, b, &RootOptions::new(rel_tol))
}

/// Bracketed root finding mixing inverse interpolation with bisection.
///
/// The returned point lies in a bracket of width at most
/// `rel_tol * |x| + abs_tol`. Infinite function values are accepted and only
/// contribute their sign; such steps fall back to bisection.
pub fn find_root_with<F: FnMut(f64) -> f64>(
    mut f: F,
    b: Bracket,
    opts: &RootOptions,
) -> Result<f64> {
    if !(opts.rel_tol >= 1e-15) {
        return Err(Error::OutOfRange {
            what: "rel_tol",
            value: opts.rel_tol,
        });
    }
    let (mut a, mut x) = (b.lo, b.hi);
    let mut fa = f(a);
    let mut fx = f(x);
    if fa == 0.0 {
        return Ok(a);
    }
    if fx == 0.0 {
        return Ok(x);
    }
    if fa.is_nan() || fx.is_nan() || fa.signum() == fx.signum() {
        return Err(Error::NoSignChange { lo: b.lo, hi: b.hi });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = x - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if fx.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = x - a;
            e = d;
        }
        if fc.abs() < fx.abs() {
            a = x;
            x = c;
            c = a;
            fa = fx;
            fx = fc;
            fc = fa;
        }
        let tol = 0.5 * (opts.rel_tol * x.abs() + opts.abs_tol) + f64::MIN_POSITIVE;
        let m = 0.5 * (c - x);
        if m.abs() <= tol || fx == 0.0 {
            return Ok(x);
        }
        let finite = fa.is_finite() && fx.is_finite() && fc.is_finite();
        if finite && e.abs() >= tol && fa.abs() > fx.abs() {
            let s = fx / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fx / fc;
                p = s * (2.0 * m * qa * (qa - r) - (x - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = x;
        fa = fx;
        x += if d.abs() > tol { d } else { tol.copysign(m) };
        fx = f(x);
        if fx.is_nan() {
            return Err(Error::NonFinite {
                what: "root-finder residual",
            });
        }
    }
    Err(Error::MaxIterations {
        iterations: opts.max_iter,
    })
}

/// Searches outward from `x0` in steps `step, 2·step, 4·step, …` on both
/// sides until `f` differs in sign from `f(x0)`.
pub fn expand_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    x0: f64,
    step: f64,
    max_doublings: usize,
) -> Result<Bracket> {
    let f0 = f(x0);
    if f0.is_nan() {
        return Err(Error::NonFinite {
            what: "bracket seed",
        });
    }
    let (mut inner_lo, mut inner_hi) = (x0, x0);
    let mut h = step.abs();
    for _ in 0..max_doublings {
        let up = x0 + h;
        let fu = f(up);
        if fu.is_nan() {
            return Err(Error::NonFinite {
                what: "bracket expansion",
            });
        }
        if fu == 0.0 || fu.signum() != f0.signum() {
            return Bracket::new(inner_hi, up);
        }
        inner_hi = up;
        let down = x0 - h;
        let fd = f(down);
        if fd.is_nan() {
            return Err(Error::NonFinite {
                what: "bracket expansion",
            });
        }
        if fd == 0.0 || fd.signum() != f0.signum() {
            return Bracket::new(down, inner_lo);
        }
        inner_lo = down;
        h *= 2.0;
    }
    Err(Error::BracketExpansion { what: "root" })
}
