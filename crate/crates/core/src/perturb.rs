//! Second-order perturbative amplitude accumulation: every two-vertex
//! channel (intermediate momentum bin, energy signs, spins, photon index,
//! polarizations) contributes one product of vertex tables, spinor
//! sandwiches and the double time integral to the final momentum grid.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::beam::{BeamParams, VertexFields};
use crate::dirac::{
    alpha_apply, bispinor, energy, initial_x_polarized, BiSpinor, EnergySign, Polarization, Spin,
};
use crate::grid::{GridSpec, MomentumOffset};
use crate::xi::{xi_quadrature, EtaBCoefficients, XiInputs};

type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// One scattering setup: grids, beam, the three momentum-grid offsets and
/// the initial electron state.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub spec: GridSpec,
    pub beam: BeamParams,
    /// Initial electron momentum (also the zeroth-order grid offset).
    pub kappa: MomentumOffset,
    /// Intermediate-grid offset, centered after one vertex.
    pub kappa_p: MomentumOffset,
    /// Final-grid offset, centered after two vertices.
    pub kappa_pp: MomentumOffset,
    pub k0: f64,
    /// Initial spin coefficients in the z-quantization basis.
    pub initial: (C64, C64),
    /// Also accumulate the gamma'' = -1 final amplitudes.
    pub compute_negative_final: bool,
}

impl Scenario {
    pub fn new(spec: GridSpec, beam: BeamParams, k0: f64, compute_negative_final: bool) -> Self {
        let kxw = spec.momentum_width_x();
        let kyw = spec.momentum_width_y();
        let kappa = MomentumOffset::new(-beam.k_l, k0);
        let kappa_p = MomentumOffset::new(-kxw / 2.0, -kyw / 2.0 + k0);
        let kappa_pp = MomentumOffset::new(-kxw + beam.k_l, -kyw + k0);
        let s = Scenario {
            spec,
            beam,
            kappa,
            kappa_p,
            kappa_pp,
            k0,
            initial: initial_x_polarized(),
            compute_negative_final,
        };
        // each vertex shifts the offset by the same photon recoil K
        let k = s.vertex_offset();
        debug_assert!((s.kappa_p.kappa_x - s.kappa.kappa_x - k.kappa_x).abs() < 1e-12);
        debug_assert!((s.kappa_p.kappa_y - s.kappa.kappa_y - k.kappa_y).abs() < 1e-12);
        debug_assert!((s.kappa_pp.kappa_x - s.kappa_p.kappa_x - k.kappa_x).abs() < 1e-12);
        debug_assert!((s.kappa_pp.kappa_y - s.kappa_p.kappa_y - k.kappa_y).abs() < 1e-12);
        s
    }

    /// Momentum offset of the vertex tables, K = (-k_xw/2 + k_L, -k_yw/2).
    pub fn vertex_offset(&self) -> MomentumOffset {
        MomentumOffset::new(
            -self.spec.momentum_width_x() / 2.0 + self.beam.k_l,
            -self.spec.momentum_width_y() / 2.0,
        )
    }
}

/// Indices identifying one channel; the final bin is `(a1+a2, b1+b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelKey {
    pub a1: usize,
    pub b1: usize,
    pub a2: usize,
    pub b2: usize,
    pub j1: Polarization,
    pub j2: Polarization,
    pub gamma_p: EnergySign,
    pub s_p: Spin,
    /// Photon index of the first vertex; the second uses -o.
    pub o: i32,
}

/// Detunings of one channel for a given final energy sign.
pub fn detunings(key: &ChannelKey, gamma_pp: EnergySign, scenario: &Scenario) -> XiInputs {
    let spec = &scenario.spec;
    let om = scenario.beam.omega;
    let e_in = energy(scenario.kappa.kappa_x, scenario.kappa.kappa_y);
    let kpx = scenario.kappa_p.k_x_at(spec, key.a1);
    let kpy = scenario.kappa_p.k_y_at(spec, key.b1);
    let e_p = energy(kpx, kpy);
    let kppx = scenario.kappa_pp.kappa_x + (key.a1 + key.a2) as f64 * spec.dkx;
    let kppy = scenario.kappa_pp.kappa_y + (key.b1 + key.b2) as f64 * spec.dky;
    let e_pp = energy(kppx, kppy);
    let o = key.o as f64;
    let eta_b = key.gamma_p.value() * e_p - e_in + o * om;
    let eta_a = gamma_pp.value() * e_pp - key.gamma_p.value() * e_p - o * om;
    XiInputs::new(eta_a, eta_b, scenario.beam.t_pulse)
}

/// Final amplitudes on the doubled grid, indexed by (gamma'', s'', a'', b'')
/// with s'' in the z-quantization basis.
#[derive(Debug, Clone)]
pub struct AmplitudeGrid {
    pub n_a: usize,
    pub n_b: usize,
    pub dkx: f64,
    pub dky: f64,
    pub offset: MomentumOffset,
    values: Vec<C64>,
}

impl AmplitudeGrid {
    fn zeros(scenario: &Scenario) -> Self {
        let n_a = 2 * scenario.spec.n_x - 1;
        let n_b = 2 * scenario.spec.n_y - 1;
        AmplitudeGrid {
            n_a,
            n_b,
            dkx: scenario.spec.dkx,
            dky: scenario.spec.dky,
            offset: scenario.kappa_pp,
            values: vec![ZERO; 4 * n_a * n_b],
        }
    }

    fn idx(&self, gamma: usize, s: usize, a: usize, b: usize) -> usize {
        ((gamma * 2 + s) * self.n_a + a) * self.n_b + b
    }

    pub fn get(&self, gamma: EnergySign, s: Spin, a: usize, b: usize) -> C64 {
        self.values[self.idx(gamma.index(), s.index(), a, b)]
    }

    /// Both z-basis spin amplitudes of one bin.
    pub fn pair(&self, gamma: EnergySign, a: usize, b: usize) -> (C64, C64) {
        (
            self.get(gamma, Spin::Up, a, b),
            self.get(gamma, Spin::Down, a, b),
        )
    }

    pub fn k_x_at(&self, a: usize) -> f64 {
        self.offset.kappa_x + a as f64 * self.dkx
    }

    pub fn k_y_at(&self, b: usize) -> f64 {
        self.offset.kappa_y + b as f64 * self.dky
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }
}

/// How to distribute rows of the intermediate grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel { workers: usize },
}

/// Which evaluation of the double time integral to use; quadrature
/// everywhere is the slow oracle path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiMode {
    ClosedForm,
    Quadrature,
}

#[derive(Debug)]
pub struct EngineOutput {
    pub amplitudes: AmplitudeGrid,
    /// Incoherent |term|^2 totals split by intermediate energy sign.
    pub gamma_pos_total: f64,
    pub gamma_neg_total: f64,
    /// Closed-form denominator underflows that fell back to quadrature.
    pub guard_activations: u64,
    /// Iterated channel count (all index combinations, folded sums included).
    pub contributions: u64,
}

struct RowOut {
    vals: Vec<C64>,
    pos: f64,
    neg: f64,
    guards: u64,
    contributions: u64,
}

const O_VALUES: [i32; 2] = [-1, 1];

fn row_partial(
    a1: usize,
    sc: &Scenario,
    fields: &VertexFields,
    xi_mode: XiMode,
    alpha_u_init: &[[BiSpinor; 2]; 2],
) -> RowOut {
    let spec = sc.spec;
    let (n_x, n_y) = (spec.n_x, spec.n_y);
    let n_a = 2 * n_x - 1;
    let n_b = 2 * n_y - 1;
    let pref = -1.0 / ((n_x * n_y) as f64);
    let e_in = energy(sc.kappa.kappa_x, sc.kappa.kappa_y);
    let om = sc.beam.omega;
    let t = sc.beam.t_pulse;
    let big_om = sc.beam.big_omega;
    let finals: &[EnergySign] = if sc.compute_negative_final {
        &EnergySign::BOTH
    } else {
        &EnergySign::BOTH[..1]
    };

    let mut out = RowOut {
        vals: vec![ZERO; 4 * n_a * n_b],
        pos: 0.0,
        neg: 0.0,
        guards: 0,
        contributions: 0,
    };
    let zero_spinor = BiSpinor([ZERO; 4]);

    for b1 in 0..n_y {
        let kpx = sc.kappa_p.k_x_at(&spec, a1);
        let kpy = sc.kappa_p.k_y_at(&spec, b1);
        let e_p = energy(kpx, kpy);

        // per (gamma', s'): alpha_j-applied intermediate spinors for the
        // second vertex, and the first-vertex factor with the s and j1
        // sums folded in (per o).
        let mut alpha_up = [[[zero_spinor; 2]; 2]; 2];
        let mut c1 = [[[ZERO; 2]; 2]; 2];
        for gp in EnergySign::BOTH {
            for sp in Spin::BOTH {
                let up = bispinor(kpx, kpy, gp, sp);
                for j in Polarization::BOTH {
                    alpha_up[gp.index()][sp.index()][j.index()] = alpha_apply(j, &up);
                }
                for (oi, o) in O_VALUES.into_iter().enumerate() {
                    let mut acc = ZERO;
                    for j1 in Polarization::BOTH {
                        let a1v = fields.table(o, j1).values[[a1, b1]];
                        let v1 = up.dot(&alpha_u_init[j1.index()][0]) * sc.initial.0
                            + up.dot(&alpha_u_init[j1.index()][1]) * sc.initial.1;
                        acc += a1v * v1;
                    }
                    c1[gp.index()][sp.index()][oi] = pref * acc;
                }
            }
        }

        // detuning eta_B and closed-form coefficients, reused across (a2, b2)
        let mut eta_b = [[0.0f64; 2]; 2];
        let mut coeffs: [[Option<EtaBCoefficients>; 2]; 2] = [[None; 2]; 2];
        for gp in EnergySign::BOTH {
            for (oi, o) in O_VALUES.into_iter().enumerate() {
                let eb = gp.value() * e_p - e_in + o as f64 * om;
                eta_b[gp.index()][oi] = eb;
                if xi_mode == XiMode::ClosedForm {
                    coeffs[gp.index()][oi] = EtaBCoefficients::new(eb, big_om).ok();
                }
            }
        }

        for a2 in 0..n_x {
            let a_pp = a1 + a2;
            let kppx = sc.kappa_pp.kappa_x + a_pp as f64 * spec.dkx;
            for b2 in 0..n_y {
                let b_pp = b1 + b2;
                let kppy = sc.kappa_pp.kappa_y + b_pp as f64 * spec.dky;
                let e_pp = energy(kppx, kppy);

                for &gpp in finals {
                    let mut xi_v = [[ZERO; 2]; 2];
                    for gp in EnergySign::BOTH {
                        for (oi, o) in O_VALUES.into_iter().enumerate() {
                            let eb = eta_b[gp.index()][oi];
                            let ea = gpp.value() * e_pp - gp.value() * e_p - o as f64 * om;
                            xi_v[gp.index()][oi] = match (xi_mode, coeffs[gp.index()][oi]) {
                                (XiMode::ClosedForm, Some(c)) => c.eval(ea, eb, t, big_om),
                                (XiMode::ClosedForm, None) => {
                                    out.guards += 1;
                                    xi_quadrature(&XiInputs::new(ea, eb, t))
                                }
                                (XiMode::Quadrature, _) => xi_quadrature(&XiInputs::new(ea, eb, t)),
                            };
                        }
                    }

                    for spp in Spin::BOTH {
                        let upp = bispinor(kppx, kppy, gpp, spp);
                        let bin = ((gpp.index() * 2 + spp.index()) * n_a + a_pp) * n_b + b_pp;
                        for gp in EnergySign::BOTH {
                            for sp in Spin::BOTH {
                                for (oi, o) in O_VALUES.into_iter().enumerate() {
                                    let c1v = c1[gp.index()][sp.index()][oi];
                                    let xi = xi_v[gp.index()][oi];
                                    for j2 in Polarization::BOTH {
                                        // second vertex uses the opposite
                                        // photon index -o
                                        let a2v = fields.table(-o, j2).values[[a2, b2]];
                                        let v2 =
                                            upp.dot(&alpha_up[gp.index()][sp.index()][j2.index()]);
                                        let term = c1v * a2v * xi * v2;
                                        out.vals[bin] += term;
                                        let w = term.norm_sqr();
                                        match gp {
                                            EnergySign::Positive => out.pos += w,
                                            EnergySign::Negative => out.neg += w,
                                        }
                                        // s and j1 were folded into c1
                                        out.contributions += 4;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Accumulate all second-order channels onto the final momentum grid.
///
/// Rows of the intermediate grid are computed independently and folded in
/// ascending row order, so the result is bitwise identical for both
/// execution modes and any worker count.
pub fn accumulate(
    scenario: &Scenario,
    fields: &VertexFields,
    exec: ExecMode,
    xi_mode: XiMode,
) -> EngineOutput {
    assert_eq!(fields.offset, scenario.vertex_offset());
    let mut alpha_u_init = [[BiSpinor([ZERO; 4]); 2]; 2];
    for j in Polarization::BOTH {
        for s in Spin::BOTH {
            let u = bispinor(
                scenario.kappa.kappa_x,
                scenario.kappa.kappa_y,
                EnergySign::Positive,
                s,
            );
            alpha_u_init[j.index()][s.index()] = alpha_apply(j, &u);
        }
    }

    let mut amplitudes = AmplitudeGrid::zeros(scenario);
    let mut output = EngineOutput {
        amplitudes: AmplitudeGrid::zeros(scenario),
        gamma_pos_total: 0.0,
        gamma_neg_total: 0.0,
        guard_activations: 0,
        contributions: 0,
    };

    let rows: Vec<usize> = (0..scenario.spec.n_x).collect();
    // bounded batches keep the per-row partial grids from piling up
    const BATCH: usize = 16;
    let pool = match exec {
        ExecMode::Sequential => None,
        ExecMode::Parallel { workers } => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .expect("worker pool"),
        ),
    };
    for batch in rows.chunks(BATCH) {
        let parts: Vec<RowOut> = match &pool {
            None => batch
                .iter()
                .map(|&a1| row_partial(a1, scenario, fields, xi_mode, &alpha_u_init))
                .collect(),
            Some(pool) => pool.install(|| {
                batch
                    .par_iter()
                    .map(|&a1| row_partial(a1, scenario, fields, xi_mode, &alpha_u_init))
                    .collect()
            }),
        };
        for part in parts {
            for (acc, v) in amplitudes.values.iter_mut().zip(part.vals.iter()) {
                *acc += v;
            }
            output.gamma_pos_total += part.pos;
            output.gamma_neg_total += part.neg;
            output.guard_activations += part.guards;
            output.contributions += part.contributions;
        }
    }
    output.amplitudes = amplitudes;
    output
}
