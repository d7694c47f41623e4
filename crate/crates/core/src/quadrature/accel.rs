use crate::error::{Error, Result};

/// Limit estimate of a slowly converging (or Abel-summable) sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub error: f64,
}

/// Best even-column element of Wynn's ε table built on `s`.
fn wynn_last(s: &[f64]) -> f64 {
    let n = s.len();
    // prev holds column k−1, cur column k; each column is one shorter.
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = s[n - 1];
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 {
                // the column already sits on its limit
                return cur[i + 1];
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            match cur.last() {
                Some(v) if v.is_finite() => best = *v,
                _ => break,
            }
        }
    }
    best
}

fn check_input(partial_sums: &[f64]) -> Result<()> {
    if partial_sums.len() < 4 {
        return Err(Error::Acceleration(format!(
            "need at least 4 partial sums, got {}",
            partial_sums.len()
        )));
    }
    if partial_sums.iter().any(|x| !x.is_finite()) {
        return Err(Error::Acceleration("non-finite partial sum".into()));
    }
    let terms: Vec<f64> = partial_sums.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &terms[terms.len() / 2..];
    let alternating = tail.windows(2).any(|w| w[0].signum() != w[1].signum());
    let growing = tail.windows(2).all(|w| w[1].abs() >= w[0].abs() && w[1] != 0.0);
    if !alternating && growing {
        return Err(Error::Acceleration(
            "terms neither alternate nor decay; sequence diverges".into(),
        ));
    }
    Ok(())
}

/// Wynn ε-algorithm applied to partial sums.
///
/// The error is the spread between the estimates built from the full sequence
/// and from the sequence with its last one and two elements dropped.
pub fn accelerate(partial_sums: &[f64]) -> Result<Extrapolation> {
    check_input(partial_sums)?;
    let n = partial_sums.len();
    let e0 = wynn_last(partial_sums);
    let e1 = wynn_last(&partial_sums[..n - 1]);
    let e2 = wynn_last(&partial_sums[..n - 2]);
    let error = (e0 - e1).abs().max((e0 - e2).abs()) + 4.0 * f64::EPSILON * e0.abs();
    Ok(Extrapolation { value: e0, error })
}

fn levin_u_estimate(s: &[f64], beta: f64) -> Option<f64> {
    let n = s.len();
    if n < 2 {
        return None;
    }
    let k = n - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let a_j = if j == 0 { s[0] } else { s[j] - s[j - 1] };
        if a_j == 0.0 {
            return Some(s[j]);
        }
        let omega = (beta + j as f64) * a_j;
        let ratio = ((beta + j as f64) / (beta + k as f64)).powi(k as i32 - 1);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binom * ratio / omega;
        num += c * s[j];
        den += c;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    let v = num / den;
    v.is_finite().then_some(v)
}

/// Levin u-transform of partial sums (β = 1), which also sums alternating
/// sequences whose terms grow polynomially to their Abel limit.
pub fn levin_u(partial_sums: &[f64]) -> Result<Extrapolation> {
    check_input(partial_sums)?;
    let n = partial_sums.len();
    let fail = || Error::Acceleration("Levin transform produced a non-finite value".into());
    let e0 = levin_u_estimate(partial_sums, 1.0).ok_or_else(fail)?;
    let e1 = levin_u_estimate(&partial_sums[..n - 1], 1.0).ok_or_else(fail)?;
    let e2 = levin_u_estimate(&partial_sums[..n - 2], 1.0).ok_or_else(fail)?;
    let error = (e0 - e1).abs().max((e0 - e2).abs()) + 4.0 * f64::EPSILON * e0.abs();
    Ok(Extrapolation { value: e0, error })
}
