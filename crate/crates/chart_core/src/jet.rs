//! Truncated multivariate Taylor jets.
//!
//! A [`Jet2`] carries a value together with its exact gradient and Hessian
//! with respect to up to [`MAX_DIM`] chart coordinates. Base fields (metric,
//! cubic tensor, volume density) are written once as closures over `Jet2`
//! coordinates, which yields their first and second coordinate derivatives
//! without any finite-difference error. A [`Jet1`] keeps only the value and
//! gradient and is what derived quantities such as connection coefficients
//! are carried in.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Largest supported chart dimension.
pub const MAX_DIM: usize = 4;

/// Value plus exact gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    pub v: f64,
    pub d: [f64; MAX_DIM],
}

/// Value plus exact gradient and Hessian (the Hessian is kept symmetric).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d: [f64; MAX_DIM],
    pub h: [[f64; MAX_DIM]; MAX_DIM],
}

impl Jet1 {
    pub const ZERO: Jet1 = Jet1 {
        v: 0.0,
        d: [0.0; MAX_DIM],
    };

    pub fn constant(v: f64) -> Self {
        Jet1 {
            v,
            d: [0.0; MAX_DIM],
        }
    }

    pub fn variable(v: f64, axis: usize) -> Self {
        let mut d = [0.0; MAX_DIM];
        d[axis] = 1.0;
        Jet1 { v, d }
    }

    pub fn scale(self, s: f64) -> Self {
        let mut d = self.d;
        d.iter_mut().for_each(|x| *x *= s);
        Jet1 { v: self.v * s, d }
    }

    fn chain(self, f: f64, df: f64) -> Self {
        let mut d = self.d;
        d.iter_mut().for_each(|x| *x *= df);
        Jet1 { v: f, d }
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r)
    }

    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s)
    }
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2 {
        v: 0.0,
        d: [0.0; MAX_DIM],
        h: [[0.0; MAX_DIM]; MAX_DIM],
    };

    pub fn constant(v: f64) -> Self {
        Jet2 { v, ..Jet2::ZERO }
    }

    /// The coordinate function `x^axis` evaluated at `v`.
    pub fn variable(v: f64, axis: usize) -> Self {
        let mut j = Jet2::constant(v);
        j.d[axis] = 1.0;
        j
    }

    /// Seeds one variable jet per coordinate.
    pub fn seed(coords: &[f64]) -> Vec<Jet2> {
        coords
            .iter()
            .enumerate()
            .map(|(a, &x)| Jet2::variable(x, a))
            .collect()
    }

    /// Drops the Hessian.
    pub fn to_jet1(self) -> Jet1 {
        Jet1 {
            v: self.v,
            d: self.d,
        }
    }

    /// The partial derivative along `axis`, itself carried as a first-order jet.
    pub fn partial(self, axis: usize) -> Jet1 {
        Jet1 {
            v: self.d[axis],
            d: self.h[axis],
        }
    }

    pub fn scale(self, s: f64) -> Self {
        let mut out = self;
        out.v *= s;
        for a in 0..MAX_DIM {
            out.d[a] *= s;
            for b in 0..MAX_DIM {
                out.h[a][b] *= s;
            }
        }
        out
    }

    /// Applies a scalar function with first derivative `df` and second `ddf`.
    fn chain(self, f: f64, df: f64, ddf: f64) -> Self {
        let mut out = Jet2::constant(f);
        for a in 0..MAX_DIM {
            out.d[a] = df * self.d[a];
            for b in 0..MAX_DIM {
                out.h[a][b] = df * self.h[a][b] + ddf * self.d[a] * self.d[b];
            }
        }
        out
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(self.v.ln(), r, -r * r)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet2::constant(1.0),
            1 => self,
            _ => {
                let nf = n as f64;
                let f = self.v.powi(n);
                let df = nf * self.v.powi(n - 1);
                let ddf = nf * (nf - 1.0) * self.v.powi(n - 2);
                self.chain(f, df, ddf)
            }
        }
    }

    pub fn powf(self, e: f64) -> Self {
        let f = self.v.powf(e);
        let df = e * self.v.powf(e - 1.0);
        let ddf = e * (e - 1.0) * self.v.powf(e - 2.0);
        self.chain(f, df, ddf)
    }
}

macro_rules! impl_linear_ops {
    ($t:ident) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                let mut out = self;
                out += rhs;
                out
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                let mut out = self;
                out -= rhs;
                out
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.scale(-1.0)
            }
        }
        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, rhs: f64) -> $t {
                self.scale(rhs)
            }
        }
        impl Mul<$t> for f64 {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                rhs.scale(self)
            }
        }
        impl Add<f64> for $t {
            type Output = $t;
            fn add(self, rhs: f64) -> $t {
                let mut out = self;
                out.v += rhs;
                out
            }
        }
        impl Sub<f64> for $t {
            type Output = $t;
            fn sub(self, rhs: f64) -> $t {
                let mut out = self;
                out.v -= rhs;
                out
            }
        }
        impl Div for $t {
            type Output = $t;
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn div(self, rhs: $t) -> $t {
                self * rhs.recip()
            }
        }
        impl Div<f64> for $t {
            type Output = $t;
            fn div(self, rhs: f64) -> $t {
                self.scale(1.0 / rhs)
            }
        }
        impl MulAssign for $t {
            fn mul_assign(&mut self, rhs: $t) {
                *self = *self * rhs;
            }
        }
        impl std::iter::Sum for $t {
            fn sum<I: Iterator<Item = $t>>(iter: I) -> $t {
                iter.fold($t::ZERO, |acc, x| acc + x)
            }
        }
    };
}

impl_linear_ops!(Jet1);
impl_linear_ops!(Jet2);

impl AddAssign for Jet1 {
    fn add_assign(&mut self, rhs: Jet1) {
        self.v += rhs.v;
        for a in 0..MAX_DIM {
            self.d[a] += rhs.d[a];
        }
    }
}

impl SubAssign for Jet1 {
    fn sub_assign(&mut self, rhs: Jet1) {
        self.v -= rhs.v;
        for a in 0..MAX_DIM {
            self.d[a] -= rhs.d[a];
        }
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Jet1) -> Jet1 {
        let d = std::array::from_fn(|a| self.d[a] * rhs.v + self.v * rhs.d[a]);
        Jet1 {
            v: self.v * rhs.v,
            d,
        }
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        self.v += rhs.v;
        for a in 0..MAX_DIM {
            self.d[a] += rhs.d[a];
            for b in 0..MAX_DIM {
                self.h[a][b] += rhs.h[a][b];
            }
        }
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        self.v -= rhs.v;
        for a in 0..MAX_DIM {
            self.d[a] -= rhs.d[a];
            for b in 0..MAX_DIM {
                self.h[a][b] -= rhs.h[a][b];
            }
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let mut out = Jet2::constant(self.v * rhs.v);
        for a in 0..MAX_DIM {
            out.d[a] = self.d[a] * rhs.v + self.v * rhs.d[a];
            for b in 0..MAX_DIM {
                out.h[a][b] = self.h[a][b] * rhs.v
                    + self.v * rhs.h[a][b]
                    + self.d[a] * rhs.d[b]
                    + self.d[b] * rhs.d[a];
            }
        }
        out
    }
}

/// Arithmetic shared by `f64`, [`Jet1`] and [`Jet2`], enough for pivoted
/// elimination written once for all three.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn value(&self) -> f64;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
}

impl Scalar for Jet1 {
    fn from_f64(x: f64) -> Self {
        Jet1::constant(x)
    }
    fn value(&self) -> f64 {
        self.v
    }
}

impl Scalar for Jet2 {
    fn from_f64(x: f64) -> Self {
        Jet2::constant(x)
    }
    fn value(&self) -> f64 {
        self.v
    }
}

/// Determinant and inverse of a dense row-major `n × n` matrix by
/// Gauss–Jordan elimination with partial pivoting on the values.
///
/// Returns `None` when a pivot is exactly zero.
pub fn invert_with_det<S: Scalar>(m: &[S], n: usize) -> Option<(Vec<S>, S)> {
    let mut a = m.to_vec();
    let mut inv: Vec<S> = (0..n * n)
        .map(|k| S::from_f64(if k / n == k % n { 1.0 } else { 0.0 }))
        .collect();
    let mut det = S::from_f64(1.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| {
            a[r * n + col]
                .value()
                .abs()
                .total_cmp(&a[s * n + col].value().abs())
        })?;
        if a[pivot * n + col].value() == 0.0 {
            return None;
        }
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
                inv.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det = det * p;
        for c in 0..n {
            a[col * n + c] = a[col * n + c] / p;
            inv[col * n + c] = inv[col * n + c] / p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            for c in 0..n {
                a[r * n + c] = a[r * n + c] - f * a[col * n + c];
                inv[r * n + c] = inv[r * n + c] - f * inv[col * n + c];
            }
        }
    }
    Some((inv, det))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_in_hessian() {
        let x = Jet2::variable(1.5, 0);
        let y = Jet2::variable(-0.5, 1);
        let f = x * x * y;
        assert_eq!(f.v, 1.5 * 1.5 * -0.5);
        assert_eq!(f.d[0], 2.0 * 1.5 * -0.5);
        assert_eq!(f.d[1], 1.5 * 1.5);
        assert_eq!(f.h[0][0], 2.0 * -0.5);
        assert_eq!(f.h[0][1], 2.0 * 1.5);
        assert_eq!(f.h[1][0], 2.0 * 1.5);
        assert_eq!(f.h[1][1], 0.0);
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let x = Jet2::variable(0.7, 0);
        let s = x.sin();
        assert!((s.d[0] - 0.7f64.cos()).abs() < 1e-15);
        assert!((s.h[0][0] + 0.7f64.sin()).abs() < 1e-15);
        let l = x.ln();
        assert!((l.h[0][0] + 1.0 / 0.49).abs() < 1e-13);
        let r = x.sqrt();
        assert!((r.h[0][0] + 0.25 * 0.7f64.powf(-1.5)).abs() < 1e-14);
        let p = x.powf(3.0);
        assert!((p.h[0][0] - 6.0 * 0.7).abs() < 1e-14);
        let q = x.powi(3);
        assert!((q.h[0][0] - 6.0 * 0.7).abs() < 1e-14);
    }

    #[test]
    fn partial_promotes_hessian_row() {
        let x = Jet2::variable(2.0, 0);
        let y = Jet2::variable(3.0, 1);
        let f = x * y * y;
        let fy = f.partial(1);
        assert_eq!(fy.v, 2.0 * 2.0 * 3.0);
        assert_eq!(fy.d[0], 6.0);
        assert_eq!(fy.d[1], 4.0);
    }

    #[test]
    fn inverse_of_jet_matrix_differentiates_correctly() {
        let x = Jet2::variable(0.3, 0);
        let m = vec![x + 2.0, x * x, Jet2::constant(0.5), Jet2::constant(3.0) - x];
        let (inv, det) = invert_with_det(&m, 2).unwrap();
        let expected_det = (0.3 + 2.0) * (3.0 - 0.3) - 0.3 * 0.3 * 0.5;
        assert!((det.v - expected_det).abs() < 1e-14);
        // d det / dx = (3 - x) - (x + 2) - x
        assert!((det.d[0] - ((3.0 - 0.3) - (0.3 + 2.0) - 0.3)).abs() < 1e-14);
        assert!((inv[0].v - (3.0 - 0.3) / expected_det).abs() < 1e-14);
    }
}
