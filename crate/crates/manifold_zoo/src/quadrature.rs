//! Gauss–Hermite quadrature for the weight `exp(−t²)`.

/// Nodes and weights of the `n`-point rule, computed by Newton iteration on
/// the orthonormal Hermite recurrence. Nodes are returned in decreasing order.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-0.16667),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = (j + 1) as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Expectation of `f(Z)` for a standard normal `Z` with the `n`-point rule.
pub fn standard_normal_expectation(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (t, w) = gauss_hermite(n);
    let norm = std::f64::consts::PI.sqrt();
    t.iter()
        .zip(&w)
        .map(|(t, w)| w / norm * f(std::f64::consts::SQRT_2 * t))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sqrt_pi() {
        let (_, w) = gauss_hermite(64);
        let total: f64 = w.iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn normal_moments() {
        let moments = [(2, 1.0), (4, 3.0), (6, 15.0), (8, 105.0)];
        for (k, expected) in moments {
            let got = standard_normal_expectation(64, |z| z.powi(k));
            assert!(
                (got - expected).abs() < 1e-11 * expected,
                "moment {k}: {got}"
            );
        }
        assert!(standard_normal_expectation(64, |z| z.powi(3)).abs() < 1e-13);
    }

    #[test]
    fn rule_sizes_agree_on_low_degree() {
        for k in [2, 4, 6] {
            let a = standard_normal_expectation(32, |z| z.powi(k));
            let b = standard_normal_expectation(64, |z| z.powi(k));
            assert!((a - b).abs() < 1e-12 * b);
        }
    }
}
