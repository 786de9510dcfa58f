//! Arbitrary-precision scalars, dense complex matrices, and the eigenvalue,
//! determinant and least-squares kernels the inversion needs.

mod complex;
mod context;
mod det;
mod jacobi;
mod lsq;
mod matrix;
mod qr;
mod real;

pub use complex::Complex;
pub use context::PrecisionContext;
pub use det::{det_mp, principal_minor_sum};
pub use jacobi::{hermitian_eig, HermitianEig, MAX_SWEEPS};
pub use lsq::{lsq_solve, LeastSquares};
pub use matrix::Matrix;
pub use qr::{balance, general_eigvals, hessenberg};
pub use real::Real;
