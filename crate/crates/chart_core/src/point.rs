use crate::error::ChartError;

/// Coordinates of a point in a single chart of dimension 2 to 4.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, ChartError> {
        if !(2..=crate::MAX_DIM).contains(&coords.len()) {
            return Err(ChartError::UnsupportedDimension(coords.len()));
        }
        if let Some(slot) = coords.iter().position(|x| !x.is_finite()) {
            return Err(ChartError::NonFiniteCoordinate { slot });
        }
        Ok(ChartPoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The point shifted by `step` along `axis`.
    pub fn shifted(&self, axis: usize, step: f64) -> ChartPoint {
        let mut coords = self.coords.clone();
        coords[axis] += step;
        ChartPoint { coords }
    }
}

/// Closed axis-aligned coordinate box on which a chart is defined.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, ChartError> {
        if lo.len() != hi.len() {
            return Err(ChartError::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if !(2..=crate::MAX_DIM).contains(&lo.len()) {
            return Err(ChartError::UnsupportedDimension(lo.len()));
        }
        for (slot, (a, b)) in lo.iter().zip(&hi).enumerate() {
            if !a.is_finite() || !b.is_finite() || a >= b {
                return Err(ChartError::NonFiniteCoordinate { slot });
            }
        }
        Ok(Domain { lo, hi })
    }

    /// The box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self, ChartError> {
        Domain::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (a, b))| v >= a && v <= b)
    }

    /// Maps a point of the unit cube affinely into the box shrunk by
    /// `margin` (a fraction of each side length) on every face.
    pub fn from_unit(&self, unit: &[f64], margin: f64) -> Vec<f64> {
        unit.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(u, (a, b))| {
                let w = b - a;
                a + margin * w + u * (1.0 - 2.0 * margin) * w
            })
            .collect()
    }
}
