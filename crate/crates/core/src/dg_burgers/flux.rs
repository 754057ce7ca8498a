//! Interface fluxes for the Burgers equation, f(u) = u^2 / 2.

pub fn physical_flux(u: f64) -> f64 {
    0.5 * u * u
}

/// Two-wave approximate Riemann flux with wave-speed estimates
/// `S_L = min(uL, uR)`, `S_R = max(uL, uR)`.
///
/// When both traces share a sign this reduces to the upwind flux.
pub fn hll_flux(u_left: f64, u_right: f64) -> f64 {
    let s_left = u_left.min(u_right);
    let s_right = u_left.max(u_right);
    if s_left >= 0.0 {
        physical_flux(u_left)
    } else if s_right <= 0.0 {
        physical_flux(u_right)
    } else {
        (s_right * physical_flux(u_left) - s_left * physical_flux(u_right)
            + s_left * s_right * (u_right - u_left))
            / (s_right - s_left)
    }
}
