//! Frequency-domain boundary integral equations: the CFIE on closed curves
//! and the single-layer equation on open arcs with cosine changes of
//! variables, plus layer-potential evaluation.

mod closed;
mod open_arc;
mod plan;

pub use closed::ClosedCurveDiscretization;
pub use open_arc::{cov_theta, ArcNode, CovSelector, OpenArcDiscretization, OpenArcParams, Panel};
pub use plan::{EvalPlan, Target};

use crate::error::{Error, Result};
use crate::linalg::{gmres, CMatrix, GmresConfig, Lu};
use num_complex::Complex64 as C64;

/// Which quantity a [`DensitySolution`] stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// CFIE density on a closed curve at the Nyström nodes.
    Closed,
    /// ψ̃ = Ψ(θ(s)) θ′(s): CoV-weighted single-layer density on an open arc.
    CovWeighted,
}

#[derive(Debug, Clone)]
pub struct DensitySolution {
    pub omega: f64,
    pub values: Vec<C64>,
    pub representation: Representation,
}

/// Linear solver selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearMethod {
    Direct,
    Iterative(GmresConfig),
}

/// Unknown count below which [`LinearMethod::auto`] picks the dense direct solver.
pub const DIRECT_LIMIT: usize = 2000;

impl LinearMethod {
    pub fn auto(n: usize, cfg: GmresConfig) -> Self {
        if n < DIRECT_LIMIT {
            LinearMethod::Direct
        } else {
            LinearMethod::Iterative(cfg)
        }
    }
}

/// A factored or iterative system ready for several right-hand sides.
pub enum PreparedSystem {
    Direct(Lu),
    Iterative(CMatrix, GmresConfig),
}

impl PreparedSystem {
    pub fn new(matrix: CMatrix, method: LinearMethod) -> Result<Self> {
        Ok(match method {
            LinearMethod::Direct => PreparedSystem::Direct(Lu::factor(matrix)?),
            LinearMethod::Iterative(cfg) => PreparedSystem::Iterative(matrix, cfg),
        })
    }

    /// Solves in place and returns the iteration count (0 for direct).
    pub fn solve(&self, rhs: &mut [C64]) -> Result<usize> {
        match self {
            PreparedSystem::Direct(lu) => {
                lu.solve_in_place(rhs);
                Ok(0)
            }
            PreparedSystem::Iterative(a, cfg) => {
                let r = gmres(|v, w| a.matvec(v, w), rhs, *cfg)?;
                rhs.copy_from_slice(&r.x);
                Ok(r.iterations)
            }
        }
    }
}

/// Solves `matrix · x = rhs`; returns the solution and the iteration count.
pub fn linear_solve(matrix: &CMatrix, rhs: &[C64], method: LinearMethod) -> Result<(Vec<C64>, usize)> {
    if matrix.rows != matrix.cols || matrix.rows != rhs.len() {
        return Err(Error::Shape(format!(
            "system {}x{} with rhs of length {}",
            matrix.rows,
            matrix.cols,
            rhs.len()
        )));
    }
    let mut x = rhs.to_vec();
    let it = PreparedSystem::new(matrix.clone(), method)?.solve(&mut x)?;
    Ok((x, it))
}

/// Common interface of the closed-curve and open-arc discretizations.
pub trait Discretization: Send + Sync {
    fn unknowns(&self) -> usize;
    /// Collocation points (where boundary data must be sampled) with parent parameters.
    fn collocation(&self) -> Vec<Target>;
    /// System matrix at angular frequency ω (negative ω gives the conjugate).
    fn system(&self, omega: f64, c: f64) -> Result<CMatrix>;
    /// Precomputed geometry for evaluating the field at `targets`.
    fn plan(&self, targets: &[Target]) -> Result<EvalPlan>;
    fn representation(&self) -> Representation;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let mut a = CMatrix::zeros(5, 5);
        for i in 0..5 {
            a.set(i, i, C64::new(1.0, 0.0));
        }
        let b: Vec<C64> = (0..5).map(|i| C64::new(i as f64, 1.0)).collect();
        let (x, it) = linear_solve(&a, &b, LinearMethod::Direct).unwrap();
        assert_eq!(x, b);
        assert_eq!(it, 0);
        let (x, it) = linear_solve(&a, &b, LinearMethod::Iterative(GmresConfig::default())).unwrap();
        assert!(it <= 1);
        for (p, q) in x.iter().zip(&b) {
            assert!((p - q).norm() < 1e-14);
        }
    }
}
