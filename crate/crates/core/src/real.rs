//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`) the chain computations run on.
///
/// Everything except the symmetric eigendecomposition is expressed through
/// `num-traits`; the eigendecomposition is dispatched per concrete type so
/// that nalgebra's `RealField` never shares a bound with `Float`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Machine epsilon, also used to scale breakdown checks.
    const EPS: Self;

    /// Eigen-decomposition of a real symmetric `dim x dim` matrix stored
    /// column-major. Eigenvalues come back ascending, with eigenvector `i`
    /// stored in column `i` of the returned column-major buffer.
    fn symmetric_eigen(dim: usize, data: &[Self]) -> (Vec<Self>, Vec<Self>);

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            const EPS: Self = <$t>::EPSILON;

            fn symmetric_eigen(dim: usize, data: &[Self]) -> (Vec<Self>, Vec<Self>) {
                assert_eq!(data.len(), dim * dim, "matrix buffer must be dim x dim");
                let matrix = DMatrix::<$t>::from_column_slice(dim, dim, data);
                let eig = SymmetricEigen::new(matrix);
                let mut order: Vec<usize> = (0..dim).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
                let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
                let mut vectors = Vec::with_capacity(dim * dim);
                for &i in &order {
                    vectors.extend(eig.eigenvectors.column(i).iter().copied());
                }
                (values, vectors)
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);
