//! Gauss rules by Golub-Welsch: nodes are eigenvalues of the Jacobi matrix
//! built from the family's own recurrence coefficients, weights are the
//! Christoffel numbers `1 / sum_j p_j(x_k)^2`.

use super::PolynomialFamily;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`), by implicit QL.
/// Returned in ascending order.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 < n {
        return Err(Error::Domain(format!(
            "off-diagonal has {} entries, need {}",
            off.len(),
            n - 1
        )));
    }
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.iter().take(n - 1).copied().collect();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Accuracy(format!(
                    "tridiagonal QL did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// `order`-point Gauss rule for the weight of `family`.
pub fn gauss_rule(family: &PolynomialFamily, order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::invalid("order", "quadrature order must be positive"));
    }
    if let Some(top) = family.max_degree() {
        if order > top + 1 {
            return Err(Error::Domain(format!(
                "{family} supports at most {} Gauss points",
                top + 1
            )));
        }
    }
    let c = family.coefficients();
    let r = c.r();
    // x p_n = (fbar_{n+1}/r) p_{n+1} - (s_n/r) p_n + (fbar_n/r) p_{n-1}
    let diag: Vec<f64> = (0..order).map(|n| -c.s(n) / r).collect();
    let off: Vec<f64> = (1..order).map(|n| c.fbar(n) / r.abs()).collect();
    let nodes = tridiagonal_eigenvalues(&diag, &off)?;
    let weights = nodes
        .iter()
        .map(|&x| {
            let p = family.two_sided_sequence(x, order - 1);
            1.0 / p.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    Ok(QuadratureRule { nodes, weights })
}
