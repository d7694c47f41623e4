use super::kronrod::gauss_kronrod_21;
use super::{CompensatedSum, QuadValue};
use crate::error::{Error, Result};

/// Kind of a known non-smooth point of an integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    /// Behaves like |x − x₀|^(−1/2) or |x − x₀|^(1/2); removed by x = x₀ ± s².
    InverseSqrt,
    /// Logarithmic; softened by the same quadratic substitution.
    LogLike,
    /// Only used as a breakpoint.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub at: f64,
    pub kind: SingularityKind,
}

impl Singularity {
    pub fn inverse_sqrt(at: f64) -> Self {
        Self {
            at,
            kind: SingularityKind::InverseSqrt,
        }
    }

    pub fn log_like(at: f64) -> Self {
        Self {
            at,
            kind: SingularityKind::LogLike,
        }
    }

    pub fn breakpoint(at: f64) -> Self {
        Self {
            at,
            kind: SingularityKind::Unknown,
        }
    }
}

/// A one-dimensional integral over `[lo, hi]`, `hi` possibly `+∞`.
pub struct IntegrationProblem<'a, T> {
    integrand: Box<dyn Fn(f64) -> T + 'a>,
    pub lo: f64,
    pub hi: f64,
    pub singularities: Vec<Singularity>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any one initial segment.
    pub max_depth: u32,
    /// Hard cap on the number of live cells.
    pub max_cells: usize,
}

impl<'a, T: QuadValue> IntegrationProblem<'a, T> {
    pub fn new(integrand: impl Fn(f64) -> T + 'a, lo: f64, hi: f64) -> Self {
        Self {
            integrand: Box::new(integrand),
            lo,
            hi,
            singularities: Vec::new(),
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_depth: 50,
            max_cells: 4000,
        }
    }

    pub fn rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn max_depth(mut self, depth: u32) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn max_cells(mut self, cells: usize) -> Self {
        self.max_cells = cells;
        self
    }

    pub fn singularity(mut self, s: Singularity) -> Self {
        self.singularities.push(s);
        self
    }

    pub fn singularities(mut self, s: impl IntoIterator<Item = Singularity>) -> Self {
        self.singularities.extend(s);
        self
    }

    pub fn integrate(&self) -> Result<IntegrationResult<T>> {
        integrate(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Cell (in the original variable) that carried the largest error at exit.
    pub worst_cell: (f64, f64),
}

impl<T: QuadValue> IntegrationResult<T> {
    /// Turns a non-converged result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                value: self.value.norm(),
                error: self.error_estimate,
                lo: self.worst_cell.0,
                hi: self.worst_cell.1,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Linear,
    /// x = origin + s²
    SqrtLeft(f64),
    /// x = origin − s²
    SqrtRight(f64),
    /// x = origin + t/(1 − t)
    Tail(f64),
}

impl Map {
    #[inline]
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Linear => (t, 1.0),
            Map::SqrtLeft(o) => (o + t * t, 2.0 * t),
            Map::SqrtRight(o) => (o - t * t, 2.0 * t),
            Map::Tail(o) => {
                let d = 1.0 - t;
                (o + t / d, 1.0 / (d * d))
            }
        }
    }

    fn to_x(self, t: f64) -> f64 {
        if let Map::Tail(_) = self {
            if t >= 1.0 {
                return f64::INFINITY;
            }
        }
        self.apply(t).0
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell<T> {
    map: Map,
    a: f64,
    b: f64,
    value: T,
    error: f64,
    depth: u32,
    frozen: bool,
}

fn is_singular(kind: Option<SingularityKind>) -> bool {
    matches!(
        kind,
        Some(SingularityKind::InverseSqrt) | Some(SingularityKind::LogLike)
    )
}

/// Splits the domain at declared singularities and assigns substitutions.
fn segments(lo: f64, hi: f64, sing: &[Singularity]) -> Vec<(Map, f64, f64)> {
    let kind_at = |x: f64| {
        sing.iter()
            .filter(|s| s.at == x)
            .map(|s| s.kind)
            .fold(None, |acc: Option<SingularityKind>, k| match (acc, k) {
                (Some(SingularityKind::InverseSqrt), _) => acc,
                (_, SingularityKind::Unknown) if acc.is_some() => acc,
                _ => Some(k),
            })
    };

    let mut pts: Vec<f64> = sing
        .iter()
        .map(|s| s.at)
        .filter(|&x| x > lo && x < hi)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.insert(0, lo);
    pts.push(hi);

    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (p, r) = (w[0], w[1]);
        let left = is_singular(kind_at(p));
        if r.is_infinite() {
            if left {
                let m = p + p.abs().max(1.0);
                out.push((Map::SqrtLeft(p), 0.0, (m - p).sqrt()));
                out.push((Map::Tail(m), 0.0, 1.0));
            } else {
                out.push((Map::Tail(p), 0.0, 1.0));
            }
            continue;
        }
        let right = is_singular(kind_at(r));
        match (left, right) {
            (true, true) => {
                let m = 0.5 * (p + r);
                out.push((Map::SqrtLeft(p), 0.0, (m - p).sqrt()));
                out.push((Map::SqrtRight(r), 0.0, (r - m).sqrt()));
            }
            (true, false) => out.push((Map::SqrtLeft(p), 0.0, (r - p).sqrt())),
            (false, true) => out.push((Map::SqrtRight(r), 0.0, (r - p).sqrt())),
            (false, false) => out.push((Map::Linear, p, r)),
        }
    }
    out
}

fn eval_cell<T: QuadValue>(
    f: &(dyn Fn(f64) -> T + '_),
    map: Map,
    a: f64,
    b: f64,
    depth: u32,
) -> (Cell<T>, usize) {
    let g = |t: f64| {
        let (x, j) = map.apply(t);
        if j == 0.0 {
            T::zero()
        } else {
            f(x).scale(j)
        }
    };
    let est = gauss_kronrod_21(&g, a, b);
    (
        Cell {
            map,
            a,
            b,
            value: est.value,
            error: est.error,
            depth,
            frozen: false,
        },
        est.evaluations,
    )
}

/// Globally adaptive integration.
///
/// Cells are refined in a fixed order (largest error first, lowest index on
/// ties) and reduced with compensated summation, so identical inputs give
/// bit-identical results.
pub fn integrate<T: QuadValue>(p: &IntegrationProblem<'_, T>) -> Result<IntegrationResult<T>> {
    if !(p.lo.is_finite() && !p.hi.is_nan() && p.hi > p.lo) {
        return Err(Error::InvalidParameter(format!(
            "integration domain must satisfy finite lo < hi, got [{}, {}]",
            p.lo, p.hi
        )));
    }
    if !(p.rel_tol > 0.0 || p.abs_tol > 0.0) || p.rel_tol < 0.0 || p.abs_tol < 0.0 {
        return Err(Error::InvalidParameter(
            "tolerances must be non-negative and not both zero".into(),
        ));
    }
    if let Some(s) = p.singularities.iter().find(|s| s.at < p.lo || s.at > p.hi) {
        return Err(Error::InvalidParameter(format!(
            "singularity at {} outside [{}, {}]",
            s.at, p.lo, p.hi
        )));
    }

    let f: &(dyn Fn(f64) -> T + '_) = &*p.integrand;
    let mut evaluations = 0;
    let mut cells: Vec<Cell<T>> = Vec::new();
    for (map, a, b) in segments(p.lo, p.hi, &p.singularities) {
        if b > a {
            let (c, n) = eval_cell(f, map, a, b, 0);
            evaluations += n;
            cells.push(c);
        }
    }

    let total = |cells: &[Cell<T>]| {
        let mut s = CompensatedSum::<T>::new();
        let mut e = CompensatedSum::<f64>::new();
        for c in cells {
            s.add(c.value);
            e.add(c.error);
        }
        (s.value(), e.value())
    };

    let (mut value, mut error) = total(&cells);
    loop {
        if !value.is_finite() {
            break;
        }
        if error <= (p.rel_tol * value.norm()).max(p.abs_tol) {
            let worst = worst_cell(&cells);
            return Ok(IntegrationResult {
                value,
                error_estimate: error,
                evaluations,
                converged: true,
                worst_cell: worst,
            });
        }
        if cells.len() >= p.max_cells {
            break;
        }
        let Some(idx) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.frozen)
            .fold(None, |best: Option<(usize, f64)>, (i, c)| match best {
                Some((_, e)) if e >= c.error => best,
                _ => Some((i, c.error)),
            })
            .map(|(i, _)| i)
        else {
            break;
        };
        let c = cells[idx];
        let mid = 0.5 * (c.a + c.b);
        let too_deep = c.depth >= p.max_depth;
        let too_narrow = !(mid > c.a && mid < c.b)
            || (c.b - c.a) <= 4.0 * f64::EPSILON * c.a.abs().max(c.b.abs());
        if too_deep || too_narrow {
            cells[idx].frozen = true;
            if cells.iter().all(|c| c.frozen) {
                break;
            }
            continue;
        }
        let (left, n1) = eval_cell(f, c.map, c.a, mid, c.depth + 1);
        let (right, n2) = eval_cell(f, c.map, mid, c.b, c.depth + 1);
        evaluations += n1 + n2;
        cells[idx] = left;
        cells.insert(idx + 1, right);
        (value, error) = total(&cells);
    }

    let worst = worst_cell(&cells);
    Ok(IntegrationResult {
        value,
        error_estimate: error,
        evaluations,
        converged: false,
        worst_cell: worst,
    })
}

fn worst_cell<T: QuadValue>(cells: &[Cell<T>]) -> (f64, f64) {
    cells
        .iter()
        .fold(None, |best: Option<&Cell<T>>, c| match best {
            Some(b) if b.error >= c.error => Some(b),
            _ => Some(c),
        })
        .map(|c| {
            let (x0, x1) = (c.map.to_x(c.a), c.map.to_x(c.b));
            (x0.min(x1), x0.max(x1))
        })
        .unwrap_or((f64::NAN, f64::NAN))
}
