//! Free-Dirac-equation energy eigensolutions, alpha-matrix sandwiches and
//! x-basis spin projections, in natural units (hbar = m = c = 1) with the
//! third momentum component fixed to zero.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

type C64 = Complex64;

/// Energy sign gamma of a Dirac eigensolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub const BOTH: [EnergySign; 2] = [EnergySign::Positive, EnergySign::Negative];

    pub fn value(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            EnergySign::Positive => 0,
            EnergySign::Negative => 1,
        }
    }
}

/// Spin index s: 0 maps to the basis spinor (1,0), 1 to (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Combined (gamma, s) label of a bi-spinor solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinLabel {
    pub gamma: EnergySign,
    pub spin: Spin,
}

/// Vector-potential polarization index; only x and y exist in 2D (A_3 = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    X,
    Y,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::X, Polarization::Y];

    pub fn index(self) -> usize {
        match self {
            Polarization::X => 0,
            Polarization::Y => 1,
        }
    }
}

/// Four-component eigensolution of the free Dirac Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiSpinor(pub [C64; 4]);

impl BiSpinor {
    /// Hermitian inner product `self^dagger other`.
    pub fn dot(&self, other: &BiSpinor) -> C64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Dirac alpha and beta matrices in Dirac representation:
/// alpha_i has sigma_i in the off-diagonal blocks, beta = diag(1,1,-1,-1).
pub struct DiracMatrices {
    pub alpha: [[[C64; 4]; 4]; 3],
    pub beta: [[C64; 4]; 4],
}

impl DiracMatrices {
    pub fn standard() -> Self {
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let alpha1 = [
            [o, o, o, one],
            [o, o, one, o],
            [o, one, o, o],
            [one, o, o, o],
        ];
        let alpha2 = [[o, o, o, -i], [o, o, i, o], [o, -i, o, o], [i, o, o, o]];
        let alpha3 = [
            [o, o, one, o],
            [o, o, o, -one],
            [one, o, o, o],
            [o, -one, o, o],
        ];
        let beta = [
            [one, o, o, o],
            [o, one, o, o],
            [o, o, -one, o],
            [o, o, o, -one],
        ];
        DiracMatrices {
            alpha: [alpha1, alpha2, alpha3],
            beta,
        }
    }

    pub fn apply(m: &[[C64; 4]; 4], u: &BiSpinor) -> BiSpinor {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (row, slot) in m.iter().zip(out.iter_mut()) {
            *slot = row.iter().zip(u.0.iter()).map(|(a, b)| a * b).sum();
        }
        BiSpinor(out)
    }
}

/// Relativistic energy `E = sqrt(1 + kx^2 + ky^2)` in units of m c^2.
pub fn energy(kx: f64, ky: f64) -> f64 {
    (1.0 + kx * kx + ky * ky).sqrt()
}

/// Unit-norm energy eigensolution at wave vector `(kx, ky)` with k_3 = 0.
pub fn bispinor(kx: f64, ky: f64, gamma: EnergySign, s: Spin) -> BiSpinor {
    let e = energy(kx, ky);
    let norm = ((e + 1.0) / (2.0 * e)).sqrt();
    // sigma . k applied to the basis spinor chi^s, with k3 = 0:
    // (sigma.k) (1,0) = (0, kx + i ky); (sigma.k) (0,1) = (kx - i ky, 0).
    let (chi, sk_chi) = match s {
        Spin::Up => (
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(kx, ky)],
        ),
        Spin::Down => (
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(kx, -ky), C64::new(0.0, 0.0)],
        ),
    };
    let scale = 1.0 / (e + 1.0);
    match gamma {
        EnergySign::Positive => BiSpinor([
            norm * chi[0],
            norm * chi[1],
            norm * scale * sk_chi[0],
            norm * scale * sk_chi[1],
        ]),
        EnergySign::Negative => BiSpinor([
            -norm * scale * sk_chi[0],
            -norm * scale * sk_chi[1],
            norm * chi[0],
            norm * chi[1],
        ]),
    }
}

/// Apply alpha_x or alpha_y to a bi-spinor without building the 4x4 matrix.
pub fn alpha_apply(j: Polarization, u: &BiSpinor) -> BiSpinor {
    let [u0, u1, u2, u3] = u.0;
    match j {
        // alpha_1 swaps blocks through sigma_1
        Polarization::X => BiSpinor([u3, u2, u1, u0]),
        // alpha_2 swaps blocks through sigma_2
        Polarization::Y => {
            let i = C64::new(0.0, 1.0);
            BiSpinor([-i * u3, i * u2, -i * u1, i * u0])
        }
    }
}

/// Interaction vertex factor `u_out^dagger alpha_j u_in`.
#[allow(clippy::too_many_arguments)]
pub fn sandwich(
    k_out: (f64, f64),
    gamma_out: EnergySign,
    s_out: Spin,
    j: Polarization,
    k_in: (f64, f64),
    gamma_in: EnergySign,
    s_in: Spin,
) -> C64 {
    let u_out = bispinor(k_out.0, k_out.1, gamma_out, s_out);
    let u_in = bispinor(k_in.0, k_in.1, gamma_in, s_in);
    u_out.dot(&alpha_apply(j, &u_in))
}

/// Expansion coefficients of the x-polarized initial spin state in the
/// z-quantization basis: `(1/sqrt 2, 1/sqrt 2)`.
pub fn initial_x_polarized() -> (C64, C64) {
    (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0))
}

/// Project a z-basis coefficient pair onto the x-quantization axis.
pub fn project_x(c_up: C64, c_down: C64) -> (C64, C64) {
    (
        (c_up + c_down) * FRAC_1_SQRT_2,
        (c_up - c_down) * FRAC_1_SQRT_2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_k(rng: &mut ChaCha8Rng) -> (f64, f64) {
        loop {
            let kx: f64 = rng.gen_range(-2.0..2.0);
            let ky: f64 = rng.gen_range(-2.0..2.0);
            if (kx * kx + ky * ky).sqrt() <= 2.0 {
                return (kx, ky);
            }
        }
    }

    /// H_0(k) u computed with the explicit 4x4 matrices, the oracle for the
    /// closed-form spinors.
    fn h0_apply(kx: f64, ky: f64, u: &BiSpinor) -> BiSpinor {
        let m = DiracMatrices::standard();
        let ax = DiracMatrices::apply(&m.alpha[0], u);
        let ay = DiracMatrices::apply(&m.alpha[1], u);
        let bu = DiracMatrices::apply(&m.beta, u);
        let mut out = [C64::new(0.0, 0.0); 4];
        for idx in 0..4 {
            out[idx] = kx * ax.0[idx] + ky * ay.0[idx] + bu.0[idx];
        }
        BiSpinor(out)
    }

    #[test]
    fn matrix_algebra_relations() {
        let m = DiracMatrices::standard();
        let mats = [&m.alpha[0], &m.alpha[1], &m.alpha[2], &m.beta];
        // squares are the identity
        for mat in mats {
            for r in 0..4 {
                for c in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..4 {
                        acc += mat[r][k] * mat[k][c];
                    }
                    let expect = if r == c { 1.0 } else { 0.0 };
                    assert!((acc - expect).norm() < 1e-15);
                }
            }
        }
        // anticommutators vanish between distinct matrices
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                if i == j {
                    continue;
                }
                for r in 0..4 {
                    for c in 0..4 {
                        let mut acc = C64::new(0.0, 0.0);
                        for k in 0..4 {
                            acc += a[r][k] * b[k][c] + b[r][k] * a[k][c];
                        }
                        assert!(acc.norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(0.0, 0.0), 1.0);
        let e = energy(-0.1, 1.0);
        assert!((e - 2.01f64.sqrt()).abs() < 1e-15);
        assert_eq!(energy(0.1, 1.0), energy(-0.1, 1.0));
    }

    #[test]
    fn rest_frame_spinors() {
        let u = bispinor(0.0, 0.0, EnergySign::Positive, Spin::Up);
        assert!((u.0[0] - 1.0).norm() < 1e-15);
        assert!(u.0[1].norm() + u.0[2].norm() + u.0[3].norm() < 1e-15);
        let v = bispinor(0.0, 0.0, EnergySign::Negative, Spin::Down);
        assert!((v.0[3] - 1.0).norm() < 1e-15);
        assert!(v.0[0].norm() + v.0[1].norm() + v.0[2].norm() < 1e-15);
    }

    #[test]
    fn eigenrelation_orthonormality_completeness() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let (kx, ky) = random_k(&mut rng);
            let e = energy(kx, ky);
            let mut spinors = Vec::new();
            for gamma in EnergySign::BOTH {
                for s in Spin::BOTH {
                    let u = bispinor(kx, ky, gamma, s);
                    assert!((u.norm_sqr() - 1.0).abs() < 1e-12);
                    let hu = h0_apply(kx, ky, &u);
                    let mut residual = 0.0f64;
                    for idx in 0..4 {
                        residual += (hu.0[idx] - gamma.value() * e * u.0[idx]).norm_sqr();
                    }
                    assert!(residual.sqrt() < 1e-12);
                    spinors.push(u);
                }
            }
            // orthonormality
            for (i, a) in spinors.iter().enumerate() {
                for (j, b) in spinors.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((a.dot(b) - expect).norm() < 1e-12);
                }
            }
            // completeness: sum_u u u^dagger = identity
            for r in 0..4 {
                for c in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for u in &spinors {
                        acc += u.0[r] * u.0[c].conj();
                    }
                    let expect = if r == c { 1.0 } else { 0.0 };
                    assert!((acc - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rest_frame_sandwiches() {
        let zero = (0.0, 0.0);
        let same = sandwich(
            zero,
            EnergySign::Positive,
            Spin::Up,
            Polarization::X,
            zero,
            EnergySign::Positive,
            Spin::Up,
        );
        assert!(same.norm() < 1e-15);
        let cross = sandwich(
            zero,
            EnergySign::Negative,
            Spin::Down,
            Polarization::X,
            zero,
            EnergySign::Positive,
            Spin::Up,
        );
        assert!((cross - 1.0).norm() < 1e-15);
    }

    #[test]
    fn sandwich_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let ka = random_k(&mut rng);
            let kb = random_k(&mut rng);
            for j in Polarization::BOTH {
                let fwd = sandwich(
                    kb,
                    EnergySign::Negative,
                    Spin::Up,
                    j,
                    ka,
                    EnergySign::Positive,
                    Spin::Down,
                );
                let bwd = sandwich(
                    ka,
                    EnergySign::Positive,
                    Spin::Down,
                    j,
                    kb,
                    EnergySign::Negative,
                    Spin::Up,
                );
                assert!((fwd - bwd.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn x_polarized_initial_state() {
        let (c0, c1) = initial_x_polarized();
        assert!((c0.re - FRAC_1_SQRT_2).abs() < 1e-15 && c0.im == 0.0);
        assert!((c1.re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((c0.norm_sqr() + c1.norm_sqr() - 1.0).abs() < 1e-15);
        let (px, pd) = project_x(c0, c1);
        assert!((px - 1.0).norm() < 1e-15);
        assert!(pd.norm() < 1e-15);
    }

    #[test]
    fn projection_examples_and_involution() {
        let (a, b) = project_x(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((b.re - FRAC_1_SQRT_2).abs() < 1e-15);

        let z = C64::new(0.3, -0.8);
        let (eq, diff) = project_x(z, z);
        assert!((eq - z * 2.0f64.sqrt()).norm() < 1e-15);
        assert!(diff.norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let u = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let d = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (a, b) = project_x(u, d);
            // unitary
            assert!((a.norm_sqr() + b.norm_sqr() - (u.norm_sqr() + d.norm_sqr())).abs() < 1e-15);
            // involution
            let (u2, d2) = project_x(a, b);
            assert!((u2 - u).norm() < 1e-15 && (d2 - d).norm() < 1e-15);
        }
    }
}
