//! Bessel and Hankel functions and the Helmholtz kernel.

mod bessel;
mod dd;
pub mod kernel;

pub use bessel::{
    bessel, bessel_jn, bessel_yn, hankel01, hankel1, j0, j1, jy01, table_values, BesselKind, EULER_GAMMA,
    TABLE_MAX,
};
pub use kernel::{kernel_normal_derivative, kernel_phi, split_kernel, KernelSplit, Operator};
