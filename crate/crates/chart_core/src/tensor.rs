use crate::error::ChartError;

/// Position of one tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Upper,
    Lower,
}

/// Dense row-major components of a tensor of rank 0 to 4 in a chart of
/// dimension `dim`. The flat offset of `[i0, i1, ...]` is
/// `((i0 * dim + i1) * dim + ...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorComponents {
    dim: usize,
    variance: Vec<Variance>,
    data: Vec<f64>,
}

impl TensorComponents {
    pub fn zeros(dim: usize, variance: Vec<Variance>) -> Self {
        let len = dim.pow(variance.len() as u32);
        TensorComponents {
            dim,
            variance,
            data: vec![0.0; len],
        }
    }

    pub fn from_vec(
        dim: usize,
        variance: Vec<Variance>,
        data: Vec<f64>,
    ) -> Result<Self, ChartError> {
        if variance.len() > 4 {
            return Err(ChartError::VarianceMismatch(format!(
                "rank {} exceeds 4",
                variance.len()
            )));
        }
        let len = dim.pow(variance.len() as u32);
        if data.len() != len {
            return Err(ChartError::DimensionMismatch {
                expected: len,
                found: data.len(),
            });
        }
        Ok(TensorComponents {
            dim,
            variance,
            data,
        })
    }

    pub fn scalar(value: f64) -> Self {
        TensorComponents {
            dim: 1,
            variance: Vec::new(),
            data: vec![value],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.rank());
        index.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let o = self.offset(index);
        self.data[o] = value;
    }

    /// Multi-index of a flat offset.
    pub fn index_of(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank()];
        for slot in (0..self.rank()).rev() {
            idx[slot] = offset % self.dim;
            offset /= self.dim;
        }
        idx
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    fn check_shape(&self, other: &TensorComponents) -> Result<(), ChartError> {
        if self.dim != other.dim || self.variance != other.variance {
            return Err(ChartError::VarianceMismatch(format!(
                "shapes differ: dim {} {:?} vs dim {} {:?}",
                self.dim, self.variance, other.dim, other.variance
            )));
        }
        Ok(())
    }

    /// `a * self + b * other`.
    pub fn combine(
        &self,
        a: f64,
        other: &TensorComponents,
        b: f64,
    ) -> Result<TensorComponents, ChartError> {
        self.check_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(TensorComponents {
            dim: self.dim,
            variance: self.variance.clone(),
            data,
        })
    }

    pub fn scaled(&self, s: f64) -> TensorComponents {
        TensorComponents {
            dim: self.dim,
            variance: self.variance.clone(),
            data: self.data.iter().map(|x| s * x).collect(),
        }
    }
}
