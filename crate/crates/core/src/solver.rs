//! Conjugate gradient for symmetric positive definite operators.

use crate::error::{check_len, Error, Result};
use crate::operators::LinearOperator;

#[derive(Debug, Clone, PartialEq)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True residual norm `||b - A x||_2` at exit.
    pub residual: f64,
}

/// Solves `A x = b` from a zero start until the true residual norm drops
/// to `tol`.
pub fn conjugate_gradient<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<CgSolution> {
    conjugate_gradient_from(op, b, vec![0.0; b.len()], tol, max_iter)
}

/// Conjugate gradient started from `x0`.
///
/// The recursively updated residual drifts from the true one in floating
/// point, so convergence is confirmed against `b - A x` and the iteration
/// restarts from the current iterate when they disagree.
pub fn conjugate_gradient_from<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    x0: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<CgSolution> {
    let n = op.dim();
    check_len(n, b.len())?;
    check_len(n, x0.len())?;
    let mut x = x0;
    let mut ax = vec![0.0; n];
    let mut iterations = 0;
    // Target for the recursive residual, below tol to leave room for drift.
    let inner_tol = 0.1 * tol;
    loop {
        op.apply_into(&x, &mut ax);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let true_res = norm(&r);
        if true_res <= tol {
            return Ok(CgSolution {
                x,
                iterations,
                residual: true_res,
            });
        }
        if iterations >= max_iter {
            return Err(Error::Numeric(format!(
                "conjugate gradient did not converge in {max_iter} iterations (residual {true_res:e})"
            )));
        }
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        let mut ap = vec![0.0; n];
        while iterations < max_iter {
            op.apply_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(Error::Numeric(
                    "operator is not positive definite along the search direction".into(),
                ));
            }
            let alpha = rr / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            iterations += 1;
            let rr_new = dot(&r, &r);
            if rr_new.sqrt() <= inner_tol {
                break;
            }
            let beta = rr_new / rr;
            for i in 0..n {
                p[i] = r[i] + beta * p[i];
            }
            rr = rr_new;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
