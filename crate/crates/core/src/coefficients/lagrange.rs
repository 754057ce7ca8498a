//! Lagrange cardinal polynomials: evaluation and exact integration.

use super::{CoeffError, CoeffScalar};

fn check_distinct<T: CoeffScalar>(nodes: &[T]) -> Result<(), CoeffError> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(CoeffError::DuplicateNodes);
            }
        }
    }
    Ok(())
}

/// Value of the j-th Lagrange cardinal polynomial on `nodes` at `t`.
///
/// Satisfies the cardinal property `l_j(nodes[i]) = delta_ij` and the
/// partition of unity `sum_j l_j(t) = 1`.
pub fn lagrange_eval<T: CoeffScalar>(t: &T, nodes: &[T], j: usize) -> Result<T, CoeffError> {
    assert!(j < nodes.len(), "cardinal index out of range");
    check_distinct(nodes)?;
    let mut value = T::one();
    for (i, node) in nodes.iter().enumerate() {
        if i == j {
            continue;
        }
        value = value * (t.clone() - node.clone()) / (nodes[j].clone() - node.clone());
    }
    Ok(value)
}

/// Coefficients of `prod_{i != j} (x - nodes[i])` in ascending powers of x.
fn numerator_monomials<T: CoeffScalar>(nodes: &[T], j: usize) -> Vec<T> {
    let mut coeffs = vec![T::one()];
    for (i, node) in nodes.iter().enumerate() {
        if i == j {
            continue;
        }
        let mut next = vec![T::zero(); coeffs.len() + 1];
        for (m, c) in coeffs.iter().enumerate() {
            next[m + 1] = next[m + 1].clone() + c.clone();
            next[m] = next[m].clone() - c.clone() * node.clone();
        }
        coeffs = next;
    }
    coeffs
}

/// Integral of the j-th Lagrange cardinal polynomial over `[a, b]`,
/// computed by expanding into monomials and integrating termwise.
///
/// With a rational scalar the result is exact.
pub fn lagrange_integral<T: CoeffScalar>(
    a: &T,
    b: &T,
    nodes: &[T],
    j: usize,
) -> Result<T, CoeffError> {
    assert!(j < nodes.len(), "cardinal index out of range");
    check_distinct(nodes)?;
    let numerator = numerator_monomials(nodes, j);
    let mut denominator = T::one();
    for (i, node) in nodes.iter().enumerate() {
        if i != j {
            denominator = denominator * (nodes[j].clone() - node.clone());
        }
    }
    let mut integral = T::zero();
    let mut a_pow = a.clone(); // a^(m+1)
    let mut b_pow = b.clone();
    for (m, c) in numerator.iter().enumerate() {
        integral =
            integral + c.clone() * (b_pow.clone() - a_pow.clone()) / T::from_int(m as i64 + 1);
        a_pow = a_pow * a.clone();
        b_pow = b_pow * b.clone();
    }
    Ok(integral / denominator)
}
