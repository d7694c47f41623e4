//! Oracles shared by the integration tests. Nothing here calls the library's
//! quadrature or permittivity code.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite Gauss–Legendre over consecutive breakpoints.
pub fn composite<T>(f: impl Fn(f64) -> T, breaks: &[f64], order: usize) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    let (x, w) = gauss_legendre(order);
    let mut acc = T::default();
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in x.iter().zip(&w) {
            acc = acc + f(m + h * xi) * (wi * h);
        }
    }
    acc
}

pub const C: f64 = 299_792_458.0;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const KB: f64 = 1.380_649e-23;
pub const ALPHA: f64 = 7.297_352_5693e-3;
pub const VF: f64 = C / 300.0;

/// ε_L − 1 and ω²(ε_Tr − 1) from the above-cone expressions written for a
/// complex frequency, SI units, principal square roots throughout.
/// Meaningful where the radicands avoid the negative real axis, e.g. ω = iξ.
pub fn above_cone_complex(q: f64, omega: Complex64, t: f64) -> (Complex64, Complex64) {
    let vq = VF * q;
    let s = (vq * vq - omega * omega).sqrt();
    let d = HBAR * s / (2.0 * KB * t);
    let pre = 4.0 * ALPHA * C / (VF * VF * q) * s;
    let w2 = omega * omega;
    let bracket = |w: f64| -> (Complex64, Complex64) {
        let mut l = Complex64::new(1.0, 0.0);
        let mut tr = w2;
        for lambda in [1.0, -1.0] {
            let g = (1.0 - w * w - 2.0 * lambda * omega * w / s).sqrt();
            l -= 0.5 * g;
            tr -= 0.5 * (s * w + lambda * omega).powi(2) / g;
        }
        let f = 1.0 / ((d * w).exp() + 1.0);
        (l * f, tr * f)
    };
    let breaks = mesh(d, omega, s);
    let mut il = Complex64::new(0.0, 0.0);
    let mut it = Complex64::new(0.0, 0.0);
    let (x, wts) = gauss_legendre(24);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in x.iter().zip(&wts) {
            let (l, tr) = bracket(m + h * xi);
            il += l * (wi * h);
            it += tr * (wi * h);
        }
    }
    let zero_l = PI * ALPHA * C * q / (2.0 * s);
    let zero_tr = -PI * ALPHA * q * C * s / 2.0;
    (zero_l + pre * il, zero_tr - pre * it)
}

/// Breakpoints for the w integral: graded towards the near-singular point
/// w ≈ 1 (distance set by |ω/s|), then uniform on the Fermi scale.
fn mesh(d: Complex64, omega: Complex64, s: Complex64) -> Vec<f64> {
    let dr = d.re;
    let top = 70.0 / dr;
    let gap = (omega / s).norm().max(1e-6);
    let mut b = vec![0.0, top];
    let mut h = gap * 1e-2;
    while h < 0.5 {
        for x in [1.0 - h, 1.0 + h] {
            b.push(x);
        }
        h *= 1.5;
    }
    b.push(1.0);
    let step = (1.0 / dr).min(0.25);
    let mut x = 0.0;
    while x < top {
        b.push(x);
        x += step;
    }
    b.retain(|&x| x >= 0.0 && x <= top);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// One-sided Richardson extrapolation of f(δ) = f₀ + c₁√δ + c₂δ + …
/// from δ, δ/4, δ/16, … (h = √δ halves each step).
pub fn richardson_sqrt(f: impl Fn(f64) -> Complex64, delta: f64, levels: usize) -> Complex64 {
    let mut t: Vec<Complex64> = (0..levels).map(|k| f(delta / 4f64.powi(k as i32))).collect();
    for j in 1..levels {
        let fac = 2f64.powi(j as i32);
        for i in (j..levels).rev() {
            t[i] = (fac * t[i] - t[i - 1]) / (fac - 1.0);
        }
    }
    t[levels - 1]
}

/// An analytic integral ∫_lo^hi f with declared singular abscissae.
pub struct Fixture {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub lo: f64,
    pub hi: f64,
    pub inverse_sqrt: &'static [f64],
    pub log_like: &'static [f64],
    pub breaks: &'static [f64],
    pub exact: f64,
}

const NONE: &[f64] = &[];

pub fn fixtures() -> Vec<Fixture> {
    let fx = |name, f, lo, hi, exact| Fixture {
        name,
        f,
        lo,
        hi,
        inverse_sqrt: NONE,
        log_like: NONE,
        breaks: NONE,
        exact,
    };
    let inf = f64::INFINITY;
    vec![
        fx("x^5", |x| x.powi(5), 0.0, 1.0, 1.0 / 6.0),
        fx("sin", f64::sin, 0.0, PI, 2.0),
        fx("exp", f64::exp, 0.0, 1.0, std::f64::consts::E - 1.0),
        Fixture { inverse_sqrt: &[0.0], ..fx("1/sqrt(x)", |x| 1.0 / x.sqrt(), 0.0, 1.0, 2.0) },
        fx("exp(-x) on [0,inf)", |x| (-x).exp(), 0.0, inf, 1.0),
        Fixture { log_like: &[0.0], ..fx("ln x", f64::ln, 0.0, 1.0, -1.0) },
        fx("1/(1+x^2) on [0,inf)", |x| 1.0 / (1.0 + x * x), 0.0, inf, PI / 2.0),
        Fixture {
            inverse_sqrt: &[-1.0, 1.0],
            ..fx("sqrt(1-x^2)", |x| ((1.0 - x) * (1.0 + x)).max(0.0).sqrt(), -1.0, 1.0, PI / 2.0)
        },
        Fixture {
            inverse_sqrt: &[1.0],
            ..fx("1/sqrt(1-x^2)", |x| 1.0 / ((1.0 - x) * (1.0 + x)).sqrt(), 0.0, 1.0, PI / 2.0)
        },
        fx("x exp(-x^2)", |x| x * (-x * x).exp(), 0.0, inf, 0.5),
        fx("Bose x^3", |x| x.powi(3) / x.exp_m1(), 0.0, inf, PI.powi(4) / 15.0),
        fx("Fermi x", |x| x / (x.exp() + 1.0), 0.0, inf, PI * PI / 12.0),
        fx("cos^2(5x)", |x| (5.0 * x).cos().powi(2), 0.0, 2.0 * PI, PI),
        Fixture { log_like: &[0.0], ..fx("-ln(x)/sqrt(x)", |x| -x.ln() / x.sqrt(), 0.0, 1.0, 4.0) },
        fx("Runge", |x| 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0, 0.4 * 5f64.atan()),
        Fixture { inverse_sqrt: &[0.0], ..fx("sqrt(x)", f64::sqrt, 0.0, 1.0, 2.0 / 3.0) },
        fx("exp(-x)cos(x)", |x| (-x).exp() * x.cos(), 0.0, inf, 0.5),
        Fixture {
            log_like: &[0.0, PI],
            ..fx("ln(sin x)", |x| x.sin().ln(), 0.0, PI, -PI * 2f64.ln())
        },
        Fixture { breaks: &[1.0 / 3.0], ..fx("|x-1/3|", |x| (x - 1.0 / 3.0).abs(), 0.0, 1.0, 5.0 / 18.0) },
        Fixture {
            inverse_sqrt: &[0.0],
            ..fx("exp(-x)/sqrt(x)", |x| (-x).exp() / x.sqrt(), 0.0, inf, PI.sqrt())
        },
    ]
}

/// True and reported absolute error of one fixture at the given tolerance.
pub fn run_fixture(fx: &Fixture, rel_tol: f64) -> (f64, f64) {
    use graphene_casimir::quadrature::{IntegrationProblem, Singularity};
    let sings = fx
        .inverse_sqrt
        .iter()
        .map(|&x| Singularity::inverse_sqrt(x))
        .chain(fx.log_like.iter().map(|&x| Singularity::log_like(x)))
        .chain(fx.breaks.iter().map(|&x| Singularity::breakpoint(x)));
    let r = IntegrationProblem::new(fx.f, fx.lo, fx.hi)
        .rel_tol(rel_tol)
        .singularities(sings)
        .integrate()
        .unwrap();
    assert!(r.converged, "{} did not converge", fx.name);
    ((r.value - fx.exact).abs(), r.error_estimate)
}

/// ∫₀^{u⁻} B(2cu − ω) du: (q 1/m, ω rad/s, value m/s·s). The values were
/// computed once at 60 significant digits and agree with the closed form
/// (ω√(ω² − b²) + b² ln((ω + √(ω² − b²))/b))/(4c), b = v_F q.
pub const SINGULAR_KERNEL: [(f64, f64, f64); 3] = [
    (1.5e9, 2e15, 3.700518079992325872536818e21),
    (2e7, 3e13, 8.806085397770758995996758e17),
    (9e8, 1e15, 6.807374395198251378609854e20),
];
