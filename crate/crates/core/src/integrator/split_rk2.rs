//! Midpoint Runge-Kutta in element-split form.
//!
//! Any explicit single-rate integrator can be run in the split framework by
//! renumbering its stages as half steps and evaluating the volume and
//! coupling terms separately.  For the second-order midpoint method the two
//! half updates are
//!
//! ```text
//! u'  - u  =          (dt/2) (V(u)  + B(u,  v))
//! u'' - u' = -(u'-u) + dt    (V(u') + B(u', v'))
//! ```
//!
//! with the coupling evaluated at synchronized neighbor values.  Composing
//! both halves reproduces the classic midpoint step on the full derivative.

use super::CoupledSystem;

/// Increments of the two half steps of one composite midpoint step starting
/// from synchronized `states` at time `t` with full step `dt`.
///
/// Returns `(first, second)` where applying `first` then `second` to the
/// input states advances the whole system by `dt`.
pub fn split_midpoint_step<S: CoupledSystem>(
    system: &S,
    t: f64,
    dt: f64,
    states: &[Vec<f64>],
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let nsets = system.num_sets();
    assert_eq!(states.len(), nsets);
    let derivs = |t: f64, states: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let mut d: Vec<Vec<f64>> = states
            .iter()
            .enumerate()
            .map(|(s, y)| {
                let mut out = vec![0.0; y.len()];
                system.volume(s, t, y, &mut out);
                out
            })
            .collect();
        for f in 0..system.num_faces() {
            let (l, r) = system.face_sets(f);
            let mut out_l = vec![0.0; states[l].len()];
            let mut out_r = vec![0.0; states[r].len()];
            system.face_coupling(f, &states[l], &states[r], &mut out_l, &mut out_r);
            for (di, vi) in d[l].iter_mut().zip(&out_l) {
                *di += vi;
            }
            for (di, vi) in d[r].iter_mut().zip(&out_r) {
                *di += vi;
            }
        }
        d
    };

    let half = 0.5 * dt;
    let d0 = derivs(t, states);
    let first: Vec<Vec<f64>> = d0
        .iter()
        .map(|d| d.iter().map(|v| half * v).collect())
        .collect();
    let mid: Vec<Vec<f64>> = states
        .iter()
        .zip(&first)
        .map(|(y, inc)| y.iter().zip(inc).map(|(a, b)| a + b).collect())
        .collect();
    let d1 = derivs(t + half, &mid);
    let second: Vec<Vec<f64>> = first
        .iter()
        .zip(&d1)
        .map(|(inc, d)| inc.iter().zip(d).map(|(f, di)| -f + dt * di).collect())
        .collect();
    (first, second)
}
