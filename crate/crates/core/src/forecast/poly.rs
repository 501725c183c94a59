//! Polynomials in the back-shift operator, stored lowest power first.

/// Product of two polynomials.
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(1 - B)^d`.
pub fn difference_operator(d: usize) -> Vec<f64> {
    (0..d).fold(vec![1.0], |acc, _| mul(&acc, &[1.0, -1.0]))
}

/// Reflection coefficients of a polynomial with leading coefficient 1,
/// from the Schur-Cohn step-down recursion. `None` if the recursion breaks
/// down (some coefficient has magnitude 1 or more).
pub fn reflection_coefficients(poly: &[f64]) -> Option<Vec<f64>> {
    let mut a: Vec<f64> = poly.to_vec();
    while a.len() > 1 && a[a.len() - 1] == 0.0 {
        a.pop();
    }
    let mut ks = Vec::with_capacity(a.len().saturating_sub(1));
    while a.len() > 1 {
        let n = a.len() - 1;
        let k = a[n];
        if !k.is_finite() || k.abs() >= 1.0 {
            return None;
        }
        let denom = 1.0 - k * k;
        let next: Vec<f64> = (0..n).map(|i| (a[i] - k * a[n - i]) / denom).collect();
        ks.push(k);
        a = next;
    }
    ks.reverse();
    Some(ks)
}

/// Whether `1 + c_1 B + ... + c_q B^q` has every root outside the unit circle.
pub fn is_invertible(coeffs: &[f64]) -> bool {
    let mut poly = Vec::with_capacity(coeffs.len() + 1);
    poly.push(1.0);
    poly.extend_from_slice(coeffs);
    reflection_coefficients(&poly).is_some()
}

/// Builds `1 + c_1 B + ... + c_n B^n` from reflection coefficients by the
/// step-up recursion. With every `|k| < 1` the result is invertible.
pub fn from_reflection(ks: &[f64]) -> Vec<f64> {
    let mut a = vec![1.0];
    for &k in ks {
        let m = a.len();
        let mut next = a.clone();
        next.push(0.0);
        for i in 1..m {
            next[i] += k * a[m - i];
        }
        next[m] = k;
        a = next;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        assert_eq!(mul(&[1.0, 1.0], &[1.0, -1.0]), vec![1.0, 0.0, -1.0]);
        assert_eq!(difference_operator(2), vec![1.0, -2.0, 1.0]);
        assert_eq!(difference_operator(0), vec![1.0]);
    }

    #[test]
    fn invertibility() {
        assert!(is_invertible(&[]));
        assert!(is_invertible(&[0.5]));
        assert!(!is_invertible(&[1.5]));
        assert!(!is_invertible(&[-1.0]));
        // 1 - 1.5B + 0.56B^2 = (1 - 0.7B)(1 - 0.8B)
        assert!(is_invertible(&[-1.5, 0.56]));
        // (1 - 0.5B)(1 - 2B) has a root inside
        assert!(!is_invertible(&[-2.5, 1.0]));
        // the published MA part is not invertible under either sign
        assert!(!is_invertible(&[-1.323, -0.718, 0.324]));
        assert!(!is_invertible(&[1.323, 0.718, -0.324]));
    }

    #[test]
    fn step_up_inverts_step_down() {
        let ks = [0.3, -0.6, 0.85, -0.2];
        let poly = from_reflection(&ks);
        let back = reflection_coefficients(&poly).unwrap();
        for (a, b) in ks.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(is_invertible(&poly[1..]));
    }
}
