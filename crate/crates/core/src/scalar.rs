use num_traits::{Float, FromPrimitive};
use rand::distributions::uniform::SampleUniform;
use std::fmt::{Debug, Display, LowerExp};

/// Scalar type for positions and distances.
///
/// Implemented for `f32` and `f64`. Probabilities and analytic bounds are
/// always computed in `f64`; this trait only parameterizes the geometry.
pub trait Scalar:
    Float + FromPrimitive + SampleUniform + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Conversion from `f64`, for derived radii and thresholds.
    fn from_real(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 must convert")
    }

    /// Lossy conversion to `f64`, for statistics and output.
    fn to_real(self) -> f64 {
        self.to_f64().expect("scalar must convert to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
