use crate::point::{ChartPoint, Domain};

const PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Default fraction of each side kept clear of sample points, so that
/// finite-difference stencils stay inside the box.
pub const DEFAULT_MARGIN: f64 = 0.05;

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base as u64) as f64 * inv;
        index /= base as u64;
        inv /= b;
    }
    out
}

/// `count` Halton points inside `domain`, starting at sequence index
/// `start + 1` and mapped into the box shrunk by `margin` on every face.
pub fn halton_points(domain: &Domain, count: usize, start: u64, margin: f64) -> Vec<ChartPoint> {
    let n = domain.dim();
    (0..count as u64)
        .map(|k| {
            let unit: Vec<f64> = (0..n)
                .map(|a| radical_inverse(start + k + 1, PRIMES[a]))
                .collect();
            ChartPoint::new(domain.from_unit(&unit, margin)).expect("domain points are finite")
        })
        .collect()
}
