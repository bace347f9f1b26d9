//! Gaussian-beam vector potential: position-space exponential components
//! (transverse and epsilon-order longitudinal, with Gouy phase) and their
//! momentum-space tables used as interaction vertices.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::dirac::Polarization;
use crate::error::GridError;
use crate::grid::{dft_forward, ComplexField2D, GridSpec, MomentumOffset};

type C64 = Complex64;

/// Laser field parameters in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    /// Coupling g0 = q A0, units m c^2.
    pub g0: f64,
    /// Laser wave number, m c/hbar.
    pub k_l: f64,
    /// Diffraction angle epsilon = 1/(k_L w0).
    pub eps: f64,
    /// Beam waist, hbar/(m c).
    pub w0: f64,
    /// Rayleigh length x_R = k_L w0^2 / 2.
    pub x_r: f64,
    /// Angular frequency; vacuum dispersion omega = c k_L.
    pub omega: f64,
    /// Pulse duration, hbar/(m c^2).
    pub t_pulse: f64,
    /// Envelope frequency Omega = pi / T.
    pub big_omega: f64,
    /// Whether the longitudinal (A_x) component is kept.
    pub include_longitudinal: bool,
}

impl BeamParams {
    pub fn new(g0: f64, k_l: f64, eps: f64, t_pulse: f64, include_longitudinal: bool) -> Self {
        let w0 = 1.0 / (k_l * eps);
        BeamParams {
            g0,
            k_l,
            eps,
            w0,
            x_r: k_l * w0 * w0 / 2.0,
            omega: k_l,
            t_pulse,
            big_omega: PI / t_pulse,
            include_longitudinal,
        }
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.k_l
    }
}

/// x-dependent beam waist `w(x) = w0 sqrt(1 + x^2/x_R^2)`.
pub fn waist(x: f64, params: &BeamParams) -> f64 {
    params.w0 * (1.0 + (x / params.x_r).powi(2)).sqrt()
}

/// Beam phase `phi_G = omega t - d k_L x + atan(d x/x_R) - d x y^2/(x_R w^2)`.
pub fn phase_g(x: f64, y: f64, t: f64, d: i32, params: &BeamParams) -> f64 {
    debug_assert!(d == 1 || d == -1);
    let d = d as f64;
    let w = waist(x, params);
    params.omega * t - d * params.k_l * x + (d * x / params.x_r).atan()
        - d * x * y * y / (params.x_r * w * w)
}

/// Longitudinal-component phase, one extra Gouy increment.
pub fn phase_g1(x: f64, y: f64, t: f64, d: i32, params: &BeamParams) -> f64 {
    phase_g(x, y, t, d, params) + (d as f64 * x / params.x_r).atan()
}

/// sin^2 temporal envelope on [0, T], zero outside.
pub fn envelope(t: f64, params: &BeamParams) -> f64 {
    if !(0.0..=params.t_pulse).contains(&t) {
        0.0
    } else {
        (params.big_omega * t).sin().powi(2)
    }
}

/// One exponential component `A_{j,d,o}` of the beam at `(x, y)`, t = 0.
///
/// With `unit_envelope` set the envelope factor is forced to 1, the form
/// used for the interaction vertices and the field illustrations; otherwise
/// eta(0) = 0 applies and the value vanishes.
pub fn potential_exponential(
    j: Polarization,
    d: i32,
    o: i32,
    x: f64,
    y: f64,
    params: &BeamParams,
    unit_envelope: bool,
) -> C64 {
    debug_assert!(d == 1 || d == -1);
    debug_assert!(o == 1 || o == -1);
    let eta = if unit_envelope {
        1.0
    } else {
        envelope(0.0, params)
    };
    let w = waist(x, params);
    let transverse = (params.w0 / w) * (-y * y / (w * w)).exp();
    match j {
        Polarization::X => {
            let amp = -(d as f64) * params.g0 * params.eps * (y / w) * transverse * eta;
            amp * C64::from_polar(1.0, o as f64 * phase_g1(x, y, 0.0, d, params))
        }
        Polarization::Y => {
            let amp = C64::new(0.0, o as f64) * (params.g0 / 2.0) * transverse * eta;
            amp * C64::from_polar(1.0, o as f64 * phase_g(x, y, 0.0, d, params))
        }
    }
}

/// Index of the admissible (d, o) pair for a given absorption/emission
/// index o; the standing-wave vertex keeps only `o d = -1`.
pub fn pair_for_absorption(o: i32) -> usize {
    debug_assert!(o == 1 || o == -1);
    if o == -1 {
        0
    } else {
        1
    }
}

pub const VERTEX_PAIRS: [(i32, i32); 2] = [(1, -1), (-1, 1)]; // (d, o)

/// Momentum-space vector-potential tables for the two admissible (d, o)
/// pairs and both polarizations, on the peak-centered offset grid.
#[derive(Debug, Clone)]
pub struct VertexFields {
    /// Indexed `[pair][j]` with pair as in [`VERTEX_PAIRS`].
    pub tables: [[ComplexField2D; 2]; 2],
    /// Grid offset K = (-k_xw/2 + k_L, -k_yw/2).
    pub offset: MomentumOffset,
}

impl VertexFields {
    pub fn table(&self, o: i32, j: Polarization) -> &ComplexField2D {
        &self.tables[pair_for_absorption(o)][j.index()]
    }
}

/// Evaluate the vertex exponentials on the position grid (t = 0, unit
/// envelope) and transform them with the peak-centered momentum offset.
pub fn build_vertex_fields(spec: GridSpec, params: &BeamParams) -> Result<VertexFields, GridError> {
    let offset = MomentumOffset::new(
        -spec.momentum_width_x() / 2.0 + params.k_l,
        -spec.momentum_width_y() / 2.0,
    );
    let mut tables: Vec<[ComplexField2D; 2]> = Vec::with_capacity(2);
    for (d, o) in VERTEX_PAIRS {
        let mut per_j: Vec<ComplexField2D> = Vec::with_capacity(2);
        for j in Polarization::BOTH {
            let table = if j == Polarization::X && !params.include_longitudinal {
                ComplexField2D::zeros(spec, crate::grid::Domain::Momentum(offset))
            } else {
                let position = ComplexField2D::from_position_fn(spec, |x, y| {
                    potential_exponential(j, d, o, x, y, params, true)
                });
                dft_forward(&position, offset)?
            };
            per_j.push(table);
        }
        let [ax, ay]: [ComplexField2D; 2] = per_j.try_into().unwrap();
        tables.push([ax, ay]);
    }
    let [p0, p1]: [[ComplexField2D; 2]; 2] = tables.try_into().unwrap();
    Ok(VertexFields {
        tables: [p0, p1],
        offset,
    })
}
