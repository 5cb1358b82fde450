//! Independent reference values: Maclaurin series summed in double-double
//! arithmetic, plus real bisection and complex Newton on top of them.

#![allow(dead_code)]

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;
use twofloat::TwoFloat;

const C1: (f64, f64) = (0.3550280538878172, 2.05233632436212e-17);
const C2: (f64, f64) = (0.2588194037928068, -2.522243111610832e-17);
const SQRT3: (f64, f64) = (1.7320508075688772, 1.0035084221806903e-16);
const EULER: f64 = 0.5772156649015329;

/// `x / d` to double-double accuracy (the crate's division stops at
/// double precision): one remainder correction of the leading quotient.
fn div(x: TwoFloat, d: TwoFloat) -> TwoFloat {
    let q1 = x.hi() / d.hi();
    let r = x - d * q1;
    let q2 = r.hi() / d.hi();
    let q = TwoFloat::new_add(q1, q2);
    let r = x - d * q;
    q + r.hi() / d.hi()
}

fn dd(p: (f64, f64)) -> TwoFloat {
    TwoFloat::new_add(p.0, p.1)
}

/// Complex double-double.
#[derive(Clone, Copy, Debug)]
pub struct Cdd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Cdd {
    fn zero() -> Self {
        Cdd::from(C64::new(0.0, 0.0))
    }

    fn scale(self, s: TwoFloat) -> Self {
        Cdd {
            re: self.re * s,
            im: self.im * s,
        }
    }

    fn div_real(self, s: TwoFloat) -> Self {
        Cdd {
            re: div(self.re, s),
            im: div(self.im, s),
        }
    }

    fn norm_hi(self) -> f64 {
        self.re.hi().hypot(self.im.hi())
    }
}

impl From<C64> for Cdd {
    fn from(z: C64) -> Self {
        Cdd {
            re: TwoFloat::from(z.re),
            im: TwoFloat::from(z.im),
        }
    }
}

impl From<Cdd> for C64 {
    fn from(z: Cdd) -> Self {
        C64::new(f64::from(z.re), f64::from(z.im))
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

fn small(term: Cdd, sum: Cdd) -> bool {
    term.norm_hi() <= 1e-34 * sum.norm_hi().max(1e-300)
}

/// `(Ai, Ai′, Bi, Bi′)` from the Maclaurin series. Good to near double
/// precision for `|z| ≲ 15`.
pub fn airy(z: C64) -> (C64, C64, C64, C64) {
    let zz = Cdd::from(z);
    let z3 = zz * zz * zz;
    // f = Σ 3^k (1/3)_k z^{3k}/(3k)!, g = Σ 3^k (2/3)_k z^{3k+1}/(3k+1)!.
    let (mut f, mut g) = (Cdd::from(C64::new(1.0, 0.0)), zz);
    let (mut tf, mut tg) = (f, g);
    // z·f′ and z·g′ accumulate the exponent-weighted terms.
    let (mut zdf, mut zdg) = (Cdd::zero(), zz);
    for k in 0..400 {
        let k = k as f64;
        tf = (tf * z3).div_real(TwoFloat::from((3.0 * k + 2.0) * (3.0 * k + 3.0)));
        tg = (tg * z3).div_real(TwoFloat::from((3.0 * k + 3.0) * (3.0 * k + 4.0)));
        f = f + tf;
        g = g + tg;
        zdf = zdf + tf.scale(TwoFloat::from(3.0 * k + 3.0));
        zdg = zdg + tg.scale(TwoFloat::from(3.0 * k + 4.0));
        if small(tf, f) && small(tg, g) && k > 3.0 {
            break;
        }
    }
    let (c1, c2, s3) = (dd(C1), dd(C2), dd(SQRT3));
    let ai = f.scale(c1) - g.scale(c2);
    let bi = (f.scale(c1) + g.scale(c2)).scale(s3);
    let (df, dg) = if z == C64::new(0.0, 0.0) {
        (C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    } else {
        (C64::from(zdf) / z, C64::from(zdg) / z)
    };
    let (c1f, c2f, s3f) = (C1.0, C2.0, SQRT3.0);
    let aip = c1f * df - c2f * dg;
    let bip = s3f * (c1f * df + c2f * dg);
    (C64::from(ai), aip, C64::from(bi), bip)
}

/// `J_ν(z)` and `J_ν′(z)` for any real order that is not a negative
/// integer, principal branch of `(z/2)^ν`.
pub fn bessel_j(nu: f64, z: C64) -> (C64, C64) {
    let zz = Cdd::from(z);
    let q = (zz * zz).scale(TwoFloat::from(-0.25));
    let nu_dd = TwoFloat::from(nu);
    let mut s = Cdd::from(C64::new(1.0, 0.0));
    let mut t = s;
    let mut zds = Cdd::zero();
    for k in 0..400 {
        let k1 = (k + 1) as f64;
        t = (t * q).div_real(TwoFloat::from(k1) * (nu_dd + k1));
        s = s + t;
        zds = zds + t.scale(TwoFloat::from(2.0 * k1));
        if small(t, s) && k > 3 {
            break;
        }
    }
    let pre = (z / 2.0).powf(nu) / libm::tgamma(nu + 1.0);
    let s = C64::from(s);
    let f = pre * s;
    let df = pre * (nu * s + C64::from(zds)) / z;
    (f, df)
}

/// `Y_ν(z)` and `Y_ν′(z)` for `ν = 0` or non-integer `ν`.
pub fn bessel_y(nu: f64, z: C64) -> (C64, C64) {
    if nu == 0.0 {
        return bessel_y0(z);
    }
    assert!(
        nu.fract() != 0.0,
        "integer orders other than 0 are not covered"
    );
    let (jp, djp) = bessel_j(nu, z);
    let (jm, djm) = bessel_j(-nu, z);
    let (c, s) = (
        (nu * std::f64::consts::PI).cos(),
        (nu * std::f64::consts::PI).sin(),
    );
    ((jp * c - jm) / s, (djp * c - djm) / s)
}

fn bessel_y0(z: C64) -> (C64, C64) {
    // Y₀ = (2/π)[(log(z/2) + γ) J₀ + Σ_{k≥1} (−1)^{k+1} H_k (z²/4)^k/(k!)²].
    let zz = Cdd::from(z);
    let q = (zz * zz).scale(TwoFloat::from(-0.25));
    let mut t = Cdd::from(C64::new(1.0, 0.0));
    let mut s = Cdd::zero();
    let mut zds = Cdd::zero();
    let mut h = TwoFloat::from(0.0);
    for k in 1..400 {
        let k = k as f64;
        t = (t * q).div_real(TwoFloat::from(k * k));
        h += div(TwoFloat::from(1.0), TwoFloat::from(k));
        let term = t.scale(-h);
        s = s + term;
        zds = zds + term.scale(TwoFloat::from(2.0 * k));
        if small(term, s) && k > 3.0 {
            break;
        }
    }
    let (j0, dj0) = bessel_j(0.0, z);
    let l = (z / 2.0).ln() + EULER;
    let two_pi = 2.0 / std::f64::consts::PI;
    let f = two_pi * (l * j0 + C64::from(s));
    let df = two_pi * (j0 / z + l * dj0 + C64::from(zds) / z);
    (f, df)
}

/// Sign changes of `f` on `[a, b]` sampled at `n` points, each refined by
/// bisection to adjacent doubles.
pub fn real_zeros(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let h = (b - a) / n as f64;
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=n {
        let x1 = a + h * i as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm * flo < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Newton iteration on a function returning `(f, f′)`.
pub fn newton(f: impl Fn(C64) -> (C64, C64), z0: C64) -> C64 {
    let mut z = z0;
    for _ in 0..100 {
        let (v, d) = f(z);
        let step = v / d;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Real zeros of `Ai` on `[a, 0]`, ascending in modulus.
pub fn ai_real_zeros(a: f64) -> Vec<f64> {
    let mut z = real_zeros(|x| airy(C64::new(x, 0.0)).0.re, a, 0.0, 4000);
    z.reverse();
    z
}

pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Convergence order `p` of a map from the least-squares slope of
/// `log e₁` against `log e₀` over single steps (`e₁ ≈ C e₀^p`); pairs with
/// `e₁` below `floor` are dropped as rounding noise.
pub fn fitted_order(pairs: &[(f64, f64)], floor: f64) -> f64 {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|p| p.1 > floor)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    assert!(pts.len() >= 3, "not enough points above {floor}: {pairs:?}");
    let n = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / n,
        pts.iter().map(|p| p.1).sum::<f64>() / n,
    );
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
