/// Scan density used by [`find_roots`].
pub const DEFAULT_SCAN_POINTS: usize = 256;

/// Sign changes of `f` on `[lo, hi]`, each refined by bisection to a
/// relative width `rel_tol`.
///
/// Roots closer together than the scan spacing can be missed; callers that
/// know better pass a denser scan via [`find_roots_with_density`].
pub fn find_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> Vec<f64> {
    find_roots_with_density(f, lo, hi, rel_tol, DEFAULT_SCAN_POINTS)
}

pub fn find_roots_with_density(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    scan_points: usize,
) -> Vec<f64> {
    let n = scan_points.max(2);
    let mut roots = Vec::new();
    let xs: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let mut prev = f(xs[0]);
    if prev == 0.0 {
        roots.push(xs[0]);
    }
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let fb = f(b);
        if fb == 0.0 {
            roots.push(b);
        } else if prev != 0.0 && prev.signum() != fb.signum() {
            roots.push(bisect(&f, a, b, prev, rel_tol));
        }
        prev = fb;
    }
    roots
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, rel_tol: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if !(m > a && m < b) || (b - a) <= rel_tol * m.abs().max(f64::MIN_POSITIVE) {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
