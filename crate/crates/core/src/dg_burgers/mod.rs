//! 1D nodal discontinuous Galerkin discretization of the Burgers equation.
//!
//! Strong-form collocation on Legendre-Gauss-Lobatto nodes with a diagonal
//! (lumped) mass matrix, coupled through HLL interface fluxes.  The
//! element-local part of the derivative and the face-local coupling are
//! kept separate so each element can serve as one degree-of-freedom set of
//! the local time-stepper.

mod exact;
mod flux;
mod lgl;

pub use exact::{bump_solution, shock_time, wave_initial};
pub use flux::{hll_flux, physical_flux};
pub use lgl::{diff_matrix, lgl_nodes_weights};

use crate::integrator::CoupledSystem;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DgError {
    #[error("reference solution undefined at (t, x) = ({t}, {x})")]
    OutOfDomain { t: f64, x: f64 },
}

/// Nodal values per element.
pub type FieldState = Vec<Vec<f64>>;

/// A 1D element partition with reference LGL operators.
#[derive(Clone, Debug)]
pub struct DgMesh {
    boundaries: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    diff: Vec<Vec<f64>>,
    jacobians: Vec<f64>,
    periodic: bool,
}

impl DgMesh {
    pub fn new(boundaries: Vec<f64>, nodes_per_element: usize, periodic: bool) -> Self {
        assert!(boundaries.len() >= 2, "need at least one element");
        assert!(
            boundaries.windows(2).all(|w| w[0] < w[1]),
            "element boundaries must increase"
        );
        let (nodes, weights) = lgl_nodes_weights(nodes_per_element);
        let diff = diff_matrix(&nodes);
        let jacobians = boundaries.windows(2).map(|w| 0.5 * (w[1] - w[0])).collect();
        DgMesh {
            boundaries,
            nodes,
            weights,
            diff,
            jacobians,
            periodic,
        }
    }

    /// Equal-size elements spanning [lo, hi].
    pub fn uniform(
        lo: f64,
        hi: f64,
        elements: usize,
        nodes_per_element: usize,
        periodic: bool,
    ) -> Self {
        assert!(elements >= 1 && hi > lo);
        let boundaries = (0..=elements)
            .map(|i| lo + (hi - lo) * i as f64 / elements as f64)
            .collect();
        Self::new(boundaries, nodes_per_element, periodic)
    }

    pub fn num_elements(&self) -> usize {
        self.jacobians.len()
    }

    pub fn nodes_per_element(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn reference_nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn reference_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn jacobian(&self, element: usize) -> f64 {
        self.jacobians[element]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.boundaries[0], *self.boundaries.last().unwrap())
    }

    /// Physical coordinate of one node.
    pub fn node_x(&self, element: usize, node: usize) -> f64 {
        let lo = self.boundaries[element];
        let hi = self.boundaries[element + 1];
        0.5 * (lo + hi) + 0.5 * (hi - lo) * self.nodes[node]
    }

    /// Element-local derivative: out = -(1/J) D (u^2/2).
    pub fn volume_rhs(&self, element: usize, u: &[f64], out: &mut [f64]) {
        let p = self.nodes.len();
        debug_assert_eq!(u.len(), p);
        let inv_j = 1.0 / self.jacobians[element];
        for i in 0..p {
            let mut acc = 0.0;
            for j in 0..p {
                acc += self.diff[i][j] * physical_flux(u[j]);
            }
            out[i] = -inv_j * acc;
        }
    }

    /// Face lift contributions of the interface between `left` and `right`
    /// elements, given the two traces: the value added to the left
    /// element's last node and to the right element's first node.
    pub fn face_lift(&self, left: usize, right: usize, u_left: f64, u_right: f64) -> (f64, f64) {
        let p = self.nodes.len();
        let star = hll_flux(u_left, u_right);
        let l = -(star - physical_flux(u_left)) / (self.jacobians[left] * self.weights[p - 1]);
        let r = (star - physical_flux(u_right)) / (self.jacobians[right] * self.weights[0]);
        (l, r)
    }

    /// Quadrature-weighted integral of the field over the domain.
    pub fn conserved_integral(&self, states: &[Vec<f64>]) -> f64 {
        let p = self.nodes.len();
        let mut total = 0.0;
        for (e, u) in states.iter().enumerate() {
            let mut elem = 0.0;
            for i in 0..p {
                elem += self.weights[i] * u[i];
            }
            total += self.jacobians[e] * elem;
        }
        total
    }

    /// Sample a function at every node.
    pub fn project(&self, f: impl Fn(f64) -> f64) -> FieldState {
        (0..self.num_elements())
            .map(|e| {
                (0..self.nodes.len())
                    .map(|i| f(self.node_x(e, i)))
                    .collect()
            })
            .collect()
    }
}

/// Which reference problem drives initial and boundary data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BurgersProblem {
    /// Periodic wave on identified endpoints; conservation test.
    PeriodicWave,
    /// Smooth bump with analytic inflow/outflow traces; convergence test.
    Bump,
}

/// The Burgers equation on a DG mesh as a coupled-set system: one set per
/// element, one face per interior (or periodic) interface.
pub struct BurgersDg {
    pub mesh: DgMesh,
    pub problem: BurgersProblem,
    /// Maximum allowed |u| * dt fed to the step controller.
    pub cfl_threshold: f64,
}

impl BurgersDg {
    pub fn new(mesh: DgMesh, problem: BurgersProblem, cfl_threshold: f64) -> Self {
        match problem {
            BurgersProblem::PeriodicWave => assert!(mesh.is_periodic()),
            BurgersProblem::Bump => assert!(!mesh.is_periodic()),
        }
        BurgersDg {
            mesh,
            problem,
            cfl_threshold,
        }
    }

    /// Nodal samples of the problem's solution at time `t` (initial data,
    /// or the reference for error measurement).
    pub fn exact_state(&self, t: f64) -> Result<FieldState, DgError> {
        let mut out = Vec::with_capacity(self.mesh.num_elements());
        for e in 0..self.mesh.num_elements() {
            let mut u = Vec::with_capacity(self.mesh.nodes_per_element());
            for i in 0..self.mesh.nodes_per_element() {
                let x = self.mesh.node_x(e, i);
                u.push(match self.problem {
                    BurgersProblem::PeriodicWave => {
                        assert_eq!(t, 0.0, "periodic wave has no closed form after t = 0");
                        wave_initial(x)
                    }
                    BurgersProblem::Bump => bump_solution(t, x)?,
                });
            }
            out.push(u);
        }
        Ok(out)
    }

    /// Largest pointwise deviation from the exact bump solution.  A
    /// non-finite state reports as infinite error.
    pub fn linf_error(&self, states: &[&[f64]], t: f64) -> Result<f64, DgError> {
        let mut worst = 0.0f64;
        for (e, u) in states.iter().enumerate() {
            for i in 0..self.mesh.nodes_per_element() {
                if !u[i].is_finite() {
                    return Ok(f64::INFINITY);
                }
                let x = self.mesh.node_x(e, i);
                let exact = bump_solution(t, x)?;
                worst = worst.max((u[i] - exact).abs());
            }
        }
        Ok(worst)
    }
}

impl CoupledSystem for BurgersDg {
    fn num_sets(&self) -> usize {
        self.mesh.num_elements()
    }

    fn state_len(&self, _set: usize) -> usize {
        self.mesh.nodes_per_element()
    }

    fn volume(&self, set: usize, t: f64, y: &[f64], out: &mut [f64]) {
        self.mesh.volume_rhs(set, y, out);
        if self.problem == BurgersProblem::Bump {
            // domain boundaries carry the analytic exterior trace; they are
            // element-local data, so they belong to the volume part
            let p = self.mesh.nodes_per_element();
            let e_last = self.mesh.num_elements() - 1;
            let (lo, hi) = self.mesh.domain();
            if set == 0 {
                let ext = bump_solution(t, lo).expect("trace inside the bump domain");
                let star = hll_flux(ext, y[0]);
                out[0] += (star - physical_flux(y[0]))
                    / (self.mesh.jacobian(0) * self.mesh.reference_weights()[0]);
            }
            if set == e_last {
                let ext = bump_solution(t, hi).expect("trace inside the bump domain");
                let star = hll_flux(y[p - 1], ext);
                out[p - 1] -= (star - physical_flux(y[p - 1]))
                    / (self.mesh.jacobian(e_last) * self.mesh.reference_weights()[p - 1]);
            }
        }
    }

    fn num_faces(&self) -> usize {
        let interior = self.mesh.num_elements() - 1;
        if self.mesh.is_periodic() {
            interior + 1
        } else {
            interior
        }
    }

    fn face_sets(&self, face: usize) -> (usize, usize) {
        (face, (face + 1) % self.mesh.num_elements())
    }

    fn face_coupling(
        &self,
        face: usize,
        y_left: &[f64],
        y_right: &[f64],
        out_left: &mut [f64],
        out_right: &mut [f64],
    ) {
        let p = self.mesh.nodes_per_element();
        let (l, r) = self.face_sets(face);
        let (lift_l, lift_r) = self.mesh.face_lift(l, r, y_left[p - 1], y_right[0]);
        for v in out_left.iter_mut() {
            *v = 0.0;
        }
        for v in out_right.iter_mut() {
            *v = 0.0;
        }
        out_left[p - 1] = lift_l;
        out_right[0] = lift_r;
    }

    fn max_stable_step(&self, _set: usize, y: &[f64]) -> f64 {
        let speed = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if speed == 0.0 {
            f64::INFINITY
        } else {
            self.cfl_threshold / speed
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_rhs_on_constants_and_linears() {
        let mesh = DgMesh::uniform(-1.0, 1.0, 1, 8, false);
        let p = mesh.nodes_per_element();
        let mut out = vec![0.0; p];
        mesh.volume_rhs(0, &vec![3.0; p], &mut out);
        for v in &out {
            assert!(v.abs() < 1e-13);
        }
        // u(x) = x on the reference element: -(d/dx)(x^2/2) = -x
        let u: Vec<f64> = mesh.reference_nodes().to_vec();
        mesh.volume_rhs(0, &u, &mut out);
        for (v, x) in out.iter().zip(mesh.reference_nodes()) {
            assert!((v + x).abs() < 1e-12, "{v} vs {}", -x);
        }
    }

    #[test]
    fn volume_rhs_on_the_initial_bump() {
        // u = 1 - x^2: -(d/dx)(u^2/2) = -u u' = (1 - x^2) * 2x
        let mesh = DgMesh::uniform(-1.0, 1.0, 1, 6, false);
        let u: Vec<f64> = mesh
            .reference_nodes()
            .iter()
            .map(|&x| 1.0 - x * x)
            .collect();
        let mut out = vec![0.0; 6];
        mesh.volume_rhs(0, &u, &mut out);
        for (v, x) in out.iter().zip(mesh.reference_nodes()) {
            let want = 2.0 * x * (1.0 - x * x);
            assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        }
    }

    #[test]
    fn conserved_integral_of_one_is_the_domain_length() {
        let mesh = DgMesh::uniform(-9.0 / 8.0, 1.0 / 8.0, 16, 10, true);
        let states = mesh.project(|_| 1.0);
        assert!((mesh.conserved_integral(&states) - 1.25).abs() < 1e-14);
    }

    #[test]
    fn conserved_integral_of_the_bump_matches_the_antiderivative() {
        // integral of 1 - x^2 over [-9/8, 1/8] is 595/768
        let mesh = DgMesh::uniform(-9.0 / 8.0, 1.0 / 8.0, 16, 10, false);
        let states = mesh.project(|x| 1.0 - x * x);
        let exact = 595.0 / 768.0;
        assert!((mesh.conserved_integral(&states) - exact).abs() < 1e-14);
    }

    #[test]
    fn discrete_conservation_for_arbitrary_states() {
        // quadrature-weighted sum of volume + coupling vanishes on a
        // periodic mesh regardless of the state
        use rand::{Rng, SeedableRng};
        let mesh = DgMesh::uniform(-9.0 / 8.0, 1.0 / 8.0, 16, 10, true);
        let sys = BurgersDg::new(mesh, BurgersProblem::PeriodicWave, 1.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let states: Vec<Vec<f64>> = (0..sys.num_sets())
                .map(|_| (0..10).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let mut total = 0.0;
            let mut scale = 0.0f64;
            for (e, u) in states.iter().enumerate() {
                let mut v = vec![0.0; 10];
                sys.volume(e, 0.0, u, &mut v);
                for i in 0..10 {
                    let c = sys.mesh.jacobian(e) * sys.mesh.reference_weights()[i];
                    total += c * v[i];
                    scale += (c * v[i]).abs();
                }
            }
            for f in 0..sys.num_faces() {
                let (l, r) = sys.face_sets(f);
                let mut ol = vec![0.0; 10];
                let mut or_ = vec![0.0; 10];
                sys.face_coupling(f, &states[l], &states[r], &mut ol, &mut or_);
                for i in 0..10 {
                    let cl = sys.mesh.jacobian(l) * sys.mesh.reference_weights()[i];
                    let cr = sys.mesh.jacobian(r) * sys.mesh.reference_weights()[i];
                    total += cl * ol[i] + cr * or_[i];
                    scale += (cl * ol[i]).abs() + (cr * or_[i]).abs();
                }
            }
            assert!(
                total.abs() < 1e-13 * scale.max(1.0),
                "conservation defect {total}"
            );
        }
    }

    #[test]
    fn free_stream_is_preserved() {
        let mesh = DgMesh::uniform(0.0, 2.0, 4, 6, true);
        let sys = BurgersDg::new(mesh, BurgersProblem::PeriodicWave, 1.0);
        let states: Vec<Vec<f64>> = (0..4).map(|_| vec![0.8; 6]).collect();
        for e in 0..4 {
            let mut v = vec![0.0; 6];
            sys.volume(e, 0.0, &states[e], &mut v);
            for f in 0..sys.num_faces() {
                let (l, r) = sys.face_sets(f);
                let mut ol = vec![0.0; 6];
                let mut or_ = vec![0.0; 6];
                sys.face_coupling(f, &states[l], &states[r], &mut ol, &mut or_);
                if l == e {
                    for i in 0..6 {
                        v[i] += ol[i];
                    }
                }
                if r == e {
                    for i in 0..6 {
                        v[i] += or_[i];
                    }
                }
            }
            for vi in &v {
                assert!(vi.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn piecewise_constant_two_element_face_contributions() {
        let mesh = DgMesh::uniform(0.0, 2.0, 2, 4, true);
        let sys = BurgersDg::new(mesh, BurgersProblem::PeriodicWave, 1.0);
        let states = [vec![1.0; 4], vec![2.0; 4]];
        // face 0 joins element 0 (trace 1) to element 1 (trace 2): both
        // speeds positive, upwind flux f(1) = 1/2, so the left correction
        // vanishes and the right is (f* - f(2)) / (J w0)
        let mut ol = vec![0.0; 4];
        let mut or_ = vec![0.0; 4];
        sys.face_coupling(0, &states[0], &states[1], &mut ol, &mut or_);
        assert_eq!(ol, vec![0.0; 4]);
        let j = sys.mesh.jacobian(1);
        let w0 = sys.mesh.reference_weights()[0];
        assert!((or_[0] - (0.5 - 2.0) / (j * w0)).abs() < 1e-14);
        // weighted domain sum of all contributions vanishes
        let mut total = 0.0;
        for f in 0..2 {
            let (l, r) = sys.face_sets(f);
            let mut a = vec![0.0; 4];
            let mut b = vec![0.0; 4];
            sys.face_coupling(f, &states[l], &states[r], &mut a, &mut b);
            for i in 0..4 {
                total += sys.mesh.jacobian(l) * sys.mesh.reference_weights()[i] * a[i];
                total += sys.mesh.jacobian(r) * sys.mesh.reference_weights()[i] * b[i];
            }
            let mut v = vec![0.0; 4];
            sys.volume(l, 0.0, &states[l], &mut v);
            for i in 0..4 {
                total += sys.mesh.jacobian(l) * sys.mesh.reference_weights()[i] * v[i];
            }
        }
        assert!(total.abs() < 1e-13, "domain sum {total}");
    }

    #[test]
    fn single_element_periodic_constant_state_is_steady() {
        // one element couples to itself through the periodic face
        let mesh = DgMesh::uniform(0.0, 1.0, 1, 5, true);
        let sys = BurgersDg::new(mesh, BurgersProblem::PeriodicWave, 1.0);
        assert_eq!(sys.num_faces(), 1);
        assert_eq!(sys.face_sets(0), (0, 0));
        let u = vec![1.3; 5];
        let mut v = vec![0.0; 5];
        sys.volume(0, 0.0, &u, &mut v);
        let mut ol = vec![0.0; 5];
        let mut or_ = vec![0.0; 5];
        sys.face_coupling(0, &u, &u, &mut ol, &mut or_);
        for i in 0..5 {
            assert!((v[i] + ol[i] + or_[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn cfl_bound_uses_the_element_speed() {
        let mesh = DgMesh::uniform(0.0, 1.0, 2, 4, true);
        let sys = BurgersDg::new(mesh, BurgersProblem::PeriodicWave, 0.01);
        assert_eq!(sys.max_stable_step(0, &[0.5, -2.0, 1.0, 0.0]), 0.005);
        assert_eq!(sys.max_stable_step(0, &[0.0; 4]), f64::INFINITY);
    }
}
