use chart_core::Jet2;
use rand::Rng;

/// Sparse polynomial in the chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Polynomial {
            terms: vec![(vec![0; dim], c)],
        }
    }

    pub fn eval(&self, x: &[Jet2]) -> Jet2 {
        let mut acc = Jet2::ZERO;
        for (exps, c) in &self.terms {
            let mut term = Jet2::constant(*c);
            for (xi, &e) in x.iter().zip(exps) {
                if e > 0 {
                    term *= xi.powi(e as i32);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, c)| {
                c * x
                    .iter()
                    .zip(exps)
                    .map(|(xi, &e)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// All monomials of total degree at most `degree`, in a fixed order.
    pub fn monomials(dim: usize, degree: u32) -> Vec<Vec<u32>> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == dim {
                out.push(prefix.clone());
                return;
            }
            for e in 0..=left {
                prefix.push(e);
                rec(dim, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(dim, degree, &mut Vec::new(), &mut out);
        out.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
        out
    }

    /// Dense random polynomial of the given degree with coefficients
    /// uniform in `[-range, range]`.
    pub fn random<R: Rng>(dim: usize, degree: u32, range: f64, rng: &mut R) -> Self {
        let terms = Polynomial::monomials(dim, degree)
            .into_iter()
            .map(|m| (m, rng.gen_range(-range..=range)))
            .collect();
        Polynomial { terms }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Polynomial { terms }
    }
}
