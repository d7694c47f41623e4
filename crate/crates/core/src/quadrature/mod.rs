//! Numerical engine: adaptive Gauss–Kronrod quadrature with singularity
//! substitutions, bracketing root location, sequence acceleration and
//! compensated summation.
//!
//! The rule family is fixed: a 21-point Kronrod extension of the 10-point
//! Gauss–Legendre rule, applied globally adaptively (the cell with the largest
//! error estimate is bisected next). Complex and vector integrands share the
//! mesh across components.

mod accel;
mod adaptive;
mod kronrod;
mod roots;
mod sum;

pub use accel::{accelerate, levin_u, Extrapolation};
pub use adaptive::{integrate, IntegrationProblem, IntegrationResult, Singularity, SingularityKind};
pub use kronrod::{gauss_kronrod_21, CellEstimate};
pub use roots::{find_roots, find_roots_with_density, DEFAULT_SCAN_POINTS};
pub use sum::{neumaier_sum, CompensatedSum};

use num_complex::Complex64;

/// Values that can be integrated: real, complex, or fixed-size vectors of either.
pub trait QuadValue: Copy + std::fmt::Debug {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    /// Largest absolute component (real and imaginary parts count separately).
    fn norm(&self) -> f64;
    /// One Neumaier compensated-summation step applied componentwise.
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self);
    fn is_finite(&self) -> bool;
}

#[inline]
fn neumaier_step(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier_step(sum, comp, x);
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        neumaier_step(&mut sum.re, &mut comp.re, x.re);
        neumaier_step(&mut sum.im, &mut comp.im, x.im);
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: QuadValue, const N: usize> QuadValue for [T; N] {
    fn zero() -> Self {
        [T::zero(); N]
    }
    fn add(self, other: Self) -> Self {
        let mut out = self;
        for (o, b) in out.iter_mut().zip(other) {
            *o = o.add(b);
        }
        out
    }
    fn sub(self, other: Self) -> Self {
        let mut out = self;
        for (o, b) in out.iter_mut().zip(other) {
            *o = o.sub(b);
        }
        out
    }
    fn scale(self, s: f64) -> Self {
        self.map(|v| v.scale(s))
    }
    fn norm(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
    fn compensated_add(sum: &mut Self, comp: &mut Self, x: Self) {
        for i in 0..N {
            T::compensated_add(&mut sum[i], &mut comp[i], x[i]);
        }
    }
    fn is_finite(&self) -> bool {
        self.iter().all(QuadValue::is_finite)
    }
}
