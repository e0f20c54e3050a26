//! Scalar abstraction: all numerical kernels are generic over the floating
//! point type through this trait.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by every kernel in this crate.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant (tolerance, parameter default) into `Self`.
    fn cst(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in scalar type")
    }

    /// Lossy view as `f64`, used for error reporting and CSV output.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
