//! Per-(patch, frequency) maps from boundary data to field values at the
//! patch's targets. The system at a given (j, ω) is the same in every
//! generation, so the product P_j(ω) A_j(ω)⁻¹ is kept while a memory budget
//! allows and recomputed otherwise.

use super::layout::Layout;
use crate::bie::LinearMethod;
use crate::error::{Error, Result};
use crate::linalg::{gemm, gmres, CMatrix, Lu};
use num_complex::Complex64 as C64;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

pub struct TransferSet<'a> {
    layout: &'a Layout,
    freqs: Vec<f64>,
    c: f64,
    method: LinearMethod,
    /// None marks an entry that did not fit the budget.
    cache: Vec<Vec<OnceLock<Option<Arc<CMatrix>>>>>,
    remaining: AtomicUsize,
    iterations: AtomicUsize,
    max_iterations: AtomicUsize,
}

impl<'a> TransferSet<'a> {
    pub fn new(layout: &'a Layout, freqs: &[f64], c: f64, method: LinearMethod, budget_bytes: usize) -> Self {
        let cache = (0..layout.len()).map(|_| (0..freqs.len()).map(|_| OnceLock::new()).collect()).collect();
        TransferSet {
            layout,
            freqs: freqs.to_vec(),
            c,
            method,
            cache,
            remaining: AtomicUsize::new(budget_bytes),
            iterations: AtomicUsize::new(0),
            max_iterations: AtomicUsize::new(0),
        }
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.iter().flatten().filter(|c| matches!(c.get(), Some(Some(_)))).count()
    }

    /// Total and largest GMRES iteration counts so far.
    pub fn iteration_counts(&self) -> (usize, usize) {
        (self.iterations.load(Ordering::Relaxed), self.max_iterations.load(Ordering::Relaxed))
    }

    fn reserve(&self, bytes: usize) -> bool {
        self.remaining
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |r| r.checked_sub(bytes))
            .is_ok()
    }

    /// Field at patch k's targets for the data columns `g` (unknowns × m,
    /// row-major) at frequency index f; returns targets × m.
    pub fn apply(&self, k: usize, f: usize, g: &[C64], m: usize) -> Result<Vec<C64>> {
        let rows = self.layout.targets[k].len();
        let mut out = vec![C64::new(0.0, 0.0); rows * m];
        let cell = &self.cache[k][f];
        if let Some(Some(t)) = cell.get() {
            gemm(t.rows, t.cols, m, &t.data, g, &mut out, false);
            return Ok(out);
        }
        let omega = self.freqs[f];
        let annotate = |e: Error| e.in_stage(format!("patch {k}, omega {omega}"));
        let (a, p) = self.layout.matrices(k, omega, self.c).map_err(annotate)?;
        let n = a.rows;
        let mut x = g.to_vec();
        match self.method {
            LinearMethod::Direct => {
                let lu = Lu::factor(a).map_err(annotate)?;
                if cell.get().is_none() && self.reserve(rows * n * std::mem::size_of::<C64>()) {
                    let t = p.matmul(&lu.inverse())?;
                    gemm(rows, n, m, &t.data, g, &mut out, false);
                    let _ = cell.set(Some(Arc::new(t)));
                    return Ok(out);
                }
                let _ = cell.set(None);
                let mut col = vec![C64::new(0.0, 0.0); n];
                for j in 0..m {
                    for i in 0..n {
                        col[i] = g[i * m + j];
                    }
                    lu.solve_in_place(&mut col);
                    for i in 0..n {
                        x[i * m + j] = col[i];
                    }
                }
            }
            LinearMethod::Iterative(cfg) => {
                let mut col = vec![C64::new(0.0, 0.0); n];
                for j in 0..m {
                    for i in 0..n {
                        col[i] = g[i * m + j];
                    }
                    let r = gmres(|v, w| a.matvec(v, w), &col, cfg).map_err(annotate)?;
                    self.iterations.fetch_add(r.iterations, Ordering::Relaxed);
                    self.max_iterations.fetch_max(r.iterations, Ordering::Relaxed);
                    if !r.converged {
                        return Err(annotate(Error::NotConverged {
                            iterations: r.iterations,
                            residual: r.residual,
                            best: r.x,
                        }));
                    }
                    for i in 0..n {
                        x[i * m + j] = r.x[i];
                    }
                }
            }
        }
        gemm(rows, n, m, &p.data, &x, &mut out, false);
        Ok(out)
    }
}
