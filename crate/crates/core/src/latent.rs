use crate::error::{Error, Result};

/// Shape of the latent space a model lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatentSpace {
    Continuous { dim: usize },
    Discrete { dim: usize, num_categories: usize },
}

impl LatentSpace {
    pub fn continuous(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("latent dimension must be >= 1".into()));
        }
        Ok(Self::Continuous { dim })
    }

    pub fn discrete(dim: usize, num_categories: usize) -> Result<Self> {
        if dim == 0 || num_categories < 2 {
            return Err(Error::InvalidConfig(format!(
                "discrete latent space needs dim >= 1 and >= 2 categories (got {dim}, {num_categories})"
            )));
        }
        Ok(Self::Discrete { dim, num_categories })
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Continuous { dim } | Self::Discrete { dim, .. } => dim,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete { .. })
    }

    pub fn num_categories(&self) -> Option<usize> {
        match *self {
            Self::Discrete { num_categories, .. } => Some(num_categories),
            Self::Continuous { .. } => None,
        }
    }

    /// Checks that `x` has the right kind, length and category range.
    pub fn validate(&self, x: &LatentPoint) -> Result<()> {
        match (self, x) {
            (Self::Continuous { dim }, LatentPoint::Real(v)) if v.len() == *dim => Ok(()),
            (Self::Discrete { dim, num_categories }, LatentPoint::Discrete(v)) if v.len() == *dim => {
                match v.iter().position(|&c| c >= *num_categories) {
                    Some(i) => Err(Error::LatentMismatch(format!(
                        "site {i} has category {} >= {num_categories}",
                        v[i]
                    ))),
                    None => Ok(()),
                }
            }
            _ => Err(Error::LatentMismatch(format!("{x:?} does not fit {self:?}"))),
        }
    }
}

/// A single latent configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum LatentPoint {
    Real(Vec<f64>),
    Discrete(Vec<usize>),
}

impl LatentPoint {
    pub fn len(&self) -> usize {
        match self {
            Self::Real(v) => v.len(),
            Self::Discrete(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Panics on a discrete point; models only call it on their own space.
    pub fn real(&self) -> &[f64] {
        match self {
            Self::Real(v) => v,
            Self::Discrete(_) => panic!("expected a continuous latent point"),
        }
    }

    pub fn labels(&self) -> &[usize] {
        match self {
            Self::Discrete(v) => v,
            Self::Real(_) => panic!("expected a discrete latent point"),
        }
    }

    /// Coordinate `i` as a real number (category index for discrete points).
    pub fn coord(&self, i: usize) -> f64 {
        match self {
            Self::Real(v) => v[i],
            Self::Discrete(v) => v[i] as f64,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Self::Real(v) => v.iter().all(|x| x.is_finite()),
            Self::Discrete(_) => true,
        }
    }
}
