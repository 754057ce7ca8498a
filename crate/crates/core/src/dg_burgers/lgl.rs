//! Legendre-Gauss-Lobatto nodes, weights, and the nodal differentiation
//! matrix on the reference element [-1, 1].

/// Legendre polynomial value and first derivative at `x` for degree `n`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for m in 1..n {
        let next = ((2 * m + 1) as f64 * x * p - m as f64 * p_prev) / (m + 1) as f64;
        p_prev = p;
        p = next;
    }
    let dp = if x.abs() == 1.0 {
        // limit value: n(n+1)/2 * sign(x)^(n+1)
        let s: f64 = if x > 0.0 { 1.0 } else { -1.0 };
        s.powi(n as i32 + 1) * (n * (n + 1)) as f64 / 2.0
    } else {
        n as f64 * (p_prev - x * p) / (1.0 - x * x)
    };
    (p, dp)
}

/// Nodes and weights of the p-point Legendre-Gauss-Lobatto rule.
///
/// The nodes are -1, +1 and the roots of the derivative of the Legendre
/// polynomial of degree p-1, found by Newton iteration from Chebyshev
/// estimates (tolerance 1e-15, at most 100 iterations).  The rule is exact
/// for polynomials of degree up to 2p-3.
pub fn lgl_nodes_weights(p: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(p >= 2, "at least two nodes required");
    let n = p - 1;
    let mut nodes = vec![0.0; p];
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    for i in 1..n {
        let mut x = -(std::f64::consts::PI * i as f64 / n as f64).cos();
        for _ in 0..100 {
            let (pn, dpn) = legendre(n, x);
            // second derivative from the Legendre equation
            let ddpn = (2.0 * x * dpn - (n * (n + 1)) as f64 * pn) / (1.0 - x * x);
            let dx = dpn / ddpn;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
    }
    // enforce exact symmetry
    for i in 0..p / 2 {
        let a = 0.5 * (nodes[p - 1 - i] - nodes[i]);
        nodes[i] = -a;
        nodes[p - 1 - i] = a;
    }
    if p % 2 == 1 {
        nodes[p / 2] = 0.0;
    }
    let scale = (n * (n + 1)) as f64;
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (pn, _) = legendre(n, x);
            2.0 / (scale * pn * pn)
        })
        .collect();
    (nodes, weights)
}

/// Nodal differentiation matrix: entry (i, j) is the derivative of the j-th
/// Lagrange cardinal polynomial at node i.  Diagonal entries use the
/// negative row-sum so rows sum to zero exactly.
pub fn diff_matrix(nodes: &[f64]) -> Vec<Vec<f64>> {
    let p = nodes.len();
    for i in 0..p {
        for j in i + 1..p {
            assert!(nodes[i] != nodes[j], "nodes must be distinct");
        }
    }
    let bary: Vec<f64> = (0..p)
        .map(|j| {
            let mut w = 1.0;
            for i in 0..p {
                if i != j {
                    w *= nodes[j] - nodes[i];
                }
            }
            1.0 / w
        })
        .collect();
    let mut d = vec![vec![0.0; p]; p];
    for i in 0..p {
        let mut diag = 0.0;
        for j in 0..p {
            if i != j {
                d[i][j] = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                diag -= d[i][j];
            }
        }
        d[i][i] = diag;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule() {
        let (x, w) = lgl_nodes_weights(2);
        assert_eq!(x, vec![-1.0, 1.0]);
        assert_eq!(w, vec![1.0, 1.0]);
    }

    #[test]
    fn three_point_rule() {
        let (x, w) = lgl_nodes_weights(3);
        assert!((x[0] + 1.0).abs() < 1e-15 && x[1] == 0.0 && (x[2] - 1.0).abs() < 1e-15);
        assert!((w[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((w[1] - 4.0 / 3.0).abs() < 1e-15);
        assert!((w[2] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn symmetry_and_weight_sum_up_to_sixteen_nodes() {
        for p in 2..=16 {
            let (x, w) = lgl_nodes_weights(p);
            let sum: f64 = w.iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "p={p} weight sum {sum}");
            for i in 0..p {
                assert_eq!(x[i], -x[p - 1 - i], "p={p} node symmetry");
                assert_eq!(w[i], w[p - 1 - i], "p={p} weight symmetry");
                assert!(w[i] > 0.0);
            }
            for i in 1..p {
                assert!(x[i] > x[i - 1]);
            }
        }
    }

    #[test]
    fn quadrature_exact_to_degree_2p_minus_3() {
        for p in 3..=12 {
            let (x, w) = lgl_nodes_weights(p);
            for deg in 0..=(2 * p - 3) {
                let quad: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(&xi, &wi)| wi * xi.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 0 {
                    2.0 / (deg as f64 + 1.0)
                } else {
                    0.0
                };
                assert!(
                    (quad - exact).abs() < 2e-13,
                    "p={p} deg={deg}: {quad} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn diff_matrix_rows_sum_to_zero_and_differentiates_linears() {
        for p in 2..=12 {
            let (x, _) = lgl_nodes_weights(p);
            let d = diff_matrix(&x);
            for row in &d {
                let s: f64 = row.iter().sum();
                assert!(s.abs() < 1e-12);
            }
            for i in 0..p {
                let dx: f64 = (0..p).map(|j| d[i][j] * x[j]).sum();
                assert!((dx - 1.0).abs() < 1e-12, "p={p} node {i}: {dx}");
            }
        }
    }

    #[test]
    fn diff_matrix_differentiates_top_degree() {
        // x^(p-1) maps to (p-1) x^(p-2)
        for p in 3..=10 {
            let (x, _) = lgl_nodes_weights(p);
            let d = diff_matrix(&x);
            for i in 0..p {
                let got: f64 = (0..p).map(|j| d[i][j] * x[j].powi(p as i32 - 1)).sum();
                let want = (p - 1) as f64 * x[i].powi(p as i32 - 2);
                assert!(
                    (got - want).abs() < 1e-10 * (p * p) as f64,
                    "p={p}: {got} vs {want}"
                );
            }
        }
    }
}
