//! Shifted position- and momentum-space grids and the offset discrete
//! Fourier transform connecting them.
//!
//! Grids are endpoint-inclusive: `dx = width / (n - 1)`, and the momentum
//! spacing is fixed by `n * dx * dk = 2 pi`, which makes the basis
//! exponentials `exp(i x_mn . k_ab)` orthonormal on the grid. All transforms
//! carry an explicit momentum offset so peaks of interest can be centered
//! at low resolution.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::GridError;

/// Geometry of one rectangular grid: counts, spacings and origins in both
/// position and momentum space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_x: usize,
    pub n_y: usize,
    /// Position origin, units hbar/(m c).
    pub x_min: f64,
    pub y_min: f64,
    /// Position spacing, units hbar/(m c).
    pub dx: f64,
    pub dy: f64,
    /// Momentum spacing, units m c/hbar.
    pub dkx: f64,
    pub dky: f64,
}

impl GridSpec {
    /// Endpoint-inclusive grid: `dx = x_width / (n_x - 1)`, with the
    /// momentum spacing implied by `n dx dk = 2 pi`. Counts must be odd.
    pub fn new(
        n_x: usize,
        n_y: usize,
        x_min: f64,
        y_min: f64,
        x_width: f64,
        y_width: f64,
    ) -> Result<Self, GridError> {
        if n_x % 2 == 0 || n_y % 2 == 0 {
            return Err(GridError::EvenCount { n_x, n_y });
        }
        Self::new_any_parity(n_x, n_y, x_min, y_min, x_width, y_width)
    }

    /// Same construction without the odd-count rule. Display dumps use even
    /// counts (1024 x 128); physics runs go through [`GridSpec::new`].
    pub fn new_any_parity(
        n_x: usize,
        n_y: usize,
        x_min: f64,
        y_min: f64,
        x_width: f64,
        y_width: f64,
    ) -> Result<Self, GridError> {
        if n_x < 3 || n_y < 3 {
            return Err(GridError::TooSmall { n_x, n_y });
        }
        if x_width <= 0.0 || y_width <= 0.0 {
            return Err(GridError::NonPositiveWidth { x_width, y_width });
        }
        let dx = x_width / (n_x - 1) as f64;
        let dy = y_width / (n_y - 1) as f64;
        let dkx = TAU / (n_x as f64 * dx);
        let dky = TAU / (n_y as f64 * dy);
        Ok(GridSpec {
            n_x,
            n_y,
            x_min,
            y_min,
            dx,
            dy,
            dkx,
            dky,
        })
    }

    pub fn x_at(&self, m: usize) -> f64 {
        self.x_min + m as f64 * self.dx
    }

    pub fn y_at(&self, n: usize) -> f64 {
        self.y_min + n as f64 * self.dy
    }

    /// Momentum box width `k_w = dk (n - 1)` along x.
    pub fn momentum_width_x(&self) -> f64 {
        self.dkx * (self.n_x - 1) as f64
    }

    pub fn momentum_width_y(&self) -> f64 {
        self.dky * (self.n_y - 1) as f64
    }

    /// Row-major table of grid positions `(x_m, y_n)`.
    pub fn position_points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.n_x * self.n_y);
        for m in 0..self.n_x {
            for n in 0..self.n_y {
                pts.push((self.x_at(m), self.y_at(n)));
            }
        }
        pts
    }

    /// Row-major table of momentum points `kappa + (a dkx, b dky)`.
    pub fn momentum_points(&self, offset: MomentumOffset) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.n_x * self.n_y);
        for a in 0..self.n_x {
            for b in 0..self.n_y {
                pts.push((offset.k_x_at(self, a), offset.k_y_at(self, b)));
            }
        }
        pts
    }
}

/// Momentum-space grid origin (the kappa shift of the transform),
/// units m c/hbar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumOffset {
    pub kappa_x: f64,
    pub kappa_y: f64,
}

impl MomentumOffset {
    pub fn new(kappa_x: f64, kappa_y: f64) -> Self {
        assert!(kappa_x.is_finite() && kappa_y.is_finite());
        MomentumOffset { kappa_x, kappa_y }
    }

    pub fn k_x_at(&self, spec: &GridSpec, a: usize) -> f64 {
        self.kappa_x + a as f64 * spec.dkx
    }

    pub fn k_y_at(&self, spec: &GridSpec, b: usize) -> f64 {
        self.kappa_y + b as f64 * spec.dky
    }
}

/// Which space a field table lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Position,
    Momentum(MomentumOffset),
}

/// Complex table over one grid, tagged with its space.
#[derive(Debug, Clone)]
pub struct ComplexField2D {
    pub spec: GridSpec,
    pub domain: Domain,
    /// Shape `n_x x n_y`, indexed `[m, n]` (or `[a, b]` in momentum space).
    pub values: Array2<Complex64>,
}

impl ComplexField2D {
    pub fn new(
        spec: GridSpec,
        domain: Domain,
        values: Array2<Complex64>,
    ) -> Result<Self, GridError> {
        let (rows, cols) = values.dim();
        if rows != spec.n_x || cols != spec.n_y {
            return Err(GridError::ShapeMismatch {
                rows,
                cols,
                n_x: spec.n_x,
                n_y: spec.n_y,
            });
        }
        Ok(ComplexField2D {
            spec,
            domain,
            values,
        })
    }

    pub fn zeros(spec: GridSpec, domain: Domain) -> Self {
        ComplexField2D {
            spec,
            domain,
            values: Array2::zeros((spec.n_x, spec.n_y)),
        }
    }

    /// Fill a position-space field from a pointwise function of `(x, y)`.
    pub fn from_position_fn(spec: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values =
            Array2::from_shape_fn((spec.n_x, spec.n_y), |(m, n)| f(spec.x_at(m), spec.y_at(n)));
        ComplexField2D {
            spec,
            domain: Domain::Position,
            values,
        }
    }
}

fn phase_table(n: usize, origin: f64, step: f64, k_origin: f64, k_step: f64) -> Array2<Complex64> {
    // p[a][m] = exp(-i x_m k_a) / sqrt(n)
    let norm = 1.0 / (n as f64).sqrt();
    Array2::from_shape_fn((n, n), |(a, m)| {
        let x = origin + m as f64 * step;
        let k = k_origin + a as f64 * k_step;
        Complex64::from_polar(norm, -x * k)
    })
}

/// Offset discrete Fourier transform, position to momentum space:
/// `A'(k_ab) = (Nx Ny)^(-1/2) sum_mn A(x_mn) exp(-i x_mn . k_ab^K)`.
///
/// Computed as separable row/column sums, O(Nx Ny (Nx + Ny)).
pub fn dft_forward(
    field: &ComplexField2D,
    offset: MomentumOffset,
) -> Result<ComplexField2D, GridError> {
    if field.domain != Domain::Position {
        return Err(GridError::WrongDomain {
            expected: "position",
        });
    }
    let spec = field.spec;
    let px = phase_table(spec.n_x, spec.x_min, spec.dx, offset.kappa_x, spec.dkx);
    let py = phase_table(spec.n_y, spec.y_min, spec.dy, offset.kappa_y, spec.dky);
    // out = px . values . py^T
    let tmp = field.values.dot(&py.t());
    let out = px.dot(&tmp);
    Ok(ComplexField2D {
        spec,
        domain: Domain::Momentum(offset),
        values: out,
    })
}

/// Inverse of [`dft_forward`]; recovers the position-space table from a
/// momentum-space one using the offset recorded in its domain tag.
pub fn dft_inverse(field: &ComplexField2D) -> Result<ComplexField2D, GridError> {
    let offset = match field.domain {
        Domain::Momentum(k) => k,
        Domain::Position => {
            return Err(GridError::WrongDomain {
                expected: "momentum",
            })
        }
    };
    let spec = field.spec;
    // Conjugate transpose of the forward phase tables.
    let px =
        phase_table(spec.n_x, spec.x_min, spec.dx, offset.kappa_x, spec.dkx).mapv(|z| z.conj());
    let py =
        phase_table(spec.n_y, spec.y_min, spec.dy, offset.kappa_y, spec.dky).mapv(|z| z.conj());
    let tmp = field.values.dot(&py);
    let out = px.t().dot(&tmp);
    Ok(ComplexField2D {
        spec,
        domain: Domain::Position,
        values: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const LAMBDA: f64 = TAU / 0.1; // k_L = 0.1

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_field(spec: GridSpec, seed: u64) -> ComplexField2D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = Array2::from_shape_fn((spec.n_x, spec.n_y), |_| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        ComplexField2D::new(spec, Domain::Position, values).unwrap()
    }

    /// Naive full double-sum transform, the oracle for the separable one.
    fn dft_naive(field: &ComplexField2D, offset: MomentumOffset) -> Array2<Complex64> {
        let spec = field.spec;
        let norm = 1.0 / ((spec.n_x * spec.n_y) as f64).sqrt();
        Array2::from_shape_fn((spec.n_x, spec.n_y), |(a, b)| {
            let kx = offset.k_x_at(&spec, a);
            let ky = offset.k_y_at(&spec, b);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..spec.n_x {
                for n in 0..spec.n_y {
                    let phase = -(spec.x_at(m) * kx + spec.y_at(n) * ky);
                    acc += field.values[[m, n]] * Complex64::from_polar(1.0, phase);
                }
            }
            acc * norm
        })
    }

    #[test]
    fn spacing_follows_endpoint_convention() {
        // n_x = 15, width 40 lambda
        let spec = GridSpec::new(
            15,
            15,
            -20.0 * LAMBDA,
            -20.0 * LAMBDA,
            40.0 * LAMBDA,
            40.0 * LAMBDA,
        )
        .unwrap();
        let expected = 40.0 * 20.0 * PI / 14.0;
        assert!((spec.dx - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn fourier_condition_holds_by_construction() {
        let spec = GridSpec::new(3, 3, 0.0, 0.0, 2.0, 2.0).unwrap();
        assert!((spec.dx - 1.0).abs() < 1e-15);
        assert!((spec.dkx - TAU / 3.0).abs() < 1e-15);
        assert!((spec.n_x as f64 * spec.dx * spec.dkx - TAU).abs() < 1e-12);
        assert!((spec.n_y as f64 * spec.dy * spec.dky - TAU).abs() < 1e-12);
    }

    #[test]
    fn momentum_box_width_baseline() {
        let spec = GridSpec::new(
            15,
            15,
            -10.0 * LAMBDA,
            -10.0 * LAMBDA,
            20.0 * LAMBDA,
            20.0 * LAMBDA,
        )
        .unwrap();
        // 14 * 2 pi / (15 * dx) with dx = 20 lambda / 14
        assert!((spec.momentum_width_x() - 0.065333333333333).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_counts_and_widths() {
        assert!(matches!(
            GridSpec::new(14, 15, 0.0, 0.0, 1.0, 1.0),
            Err(GridError::EvenCount { .. })
        ));
        assert!(matches!(
            GridSpec::new(1, 15, 0.0, 0.0, 1.0, 1.0),
            Err(GridError::TooSmall { .. })
        ));
        assert!(matches!(
            GridSpec::new(15, 15, 0.0, 0.0, -1.0, 1.0),
            Err(GridError::NonPositiveWidth { .. })
        ));
        // even counts are allowed for display grids
        assert!(GridSpec::new_any_parity(1024, 128, 0.0, 0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn position_points_endpoints_and_center() {
        let spec = GridSpec::new(
            15,
            15,
            -10.0 * LAMBDA,
            -10.0 * LAMBDA,
            20.0 * LAMBDA,
            20.0 * LAMBDA,
        )
        .unwrap();
        assert_eq!(spec.x_at(0), -10.0 * LAMBDA);
        assert!((spec.x_at(14) - 10.0 * LAMBDA).abs() < 1e-9);
        assert!(spec.x_at(7).abs() < 1e-9); // odd grid center at the origin
    }

    #[test]
    fn momentum_points_offsets() {
        let spec = GridSpec::new(
            15,
            15,
            -10.0 * LAMBDA,
            -10.0 * LAMBDA,
            20.0 * LAMBDA,
            20.0 * LAMBDA,
        )
        .unwrap();
        let k_l = 0.1;
        let off = MomentumOffset::new(
            -spec.momentum_width_x() / 2.0 + k_l,
            -spec.momentum_width_y() / 2.0,
        );
        assert_eq!(off.k_x_at(&spec, 0), off.kappa_x);
        let top = off.k_x_at(&spec, 14);
        assert!((top - (off.kappa_x + spec.momentum_width_x())).abs() < 1e-15);
    }

    #[test]
    fn basis_exponential_maps_to_single_bin() {
        let spec = GridSpec::new(7, 5, -3.0, -2.0, 6.0, 4.0).unwrap();
        let off = MomentumOffset::new(0.3, -0.7);
        let (a0, b0) = (2usize, 4usize);
        let kx = off.k_x_at(&spec, a0);
        let ky = off.k_y_at(&spec, b0);
        let field = ComplexField2D::from_position_fn(spec, |x, y| {
            Complex64::from_polar(1.0, x * kx + y * ky)
        });
        let out = dft_forward(&field, off).unwrap();
        let norm = ((spec.n_x * spec.n_y) as f64).sqrt();
        for a in 0..spec.n_x {
            for b in 0..spec.n_y {
                let expect = if (a, b) == (a0, b0) { norm } else { 0.0 };
                assert!((out.values[[a, b]] - expect).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn zero_field_transforms_to_zero() {
        let spec = GridSpec::new(5, 5, 0.0, 0.0, 1.0, 1.0).unwrap();
        let field = ComplexField2D::zeros(spec, Domain::Position);
        let out = dft_forward(&field, MomentumOffset::new(0.0, 0.0)).unwrap();
        assert!(out.values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn round_trip_recovers_input() {
        let spec = GridSpec::new(15, 15, -4.0, 2.0, 11.0, 7.0).unwrap();
        let field = random_field(spec, 7);
        let off = MomentumOffset::new(-1.2, 0.4);
        let back = dft_inverse(&dft_forward(&field, off).unwrap()).unwrap();
        for (z, w) in field.values.iter().zip(back.values.iter()) {
            assert!((z - w).norm() < 1e-12);
        }
    }

    #[test]
    fn separable_matches_naive_double_sum() {
        let spec = GridSpec::new(15, 15, -4.0, 2.0, 11.0, 7.0).unwrap();
        let field = random_field(spec, 21);
        let off = MomentumOffset::new(0.9, -0.3);
        let fast = dft_forward(&field, off).unwrap();
        let slow = dft_naive(&field, off);
        for (z, w) in fast.values.iter().zip(slow.iter()) {
            assert!((z - w).norm() < 1e-12);
        }
    }

    #[test]
    fn orthonormality_of_basis_exponentials() {
        let spec = GridSpec::new(9, 7, -1.5, 0.5, 3.0, 2.5).unwrap();
        for a in 0..spec.n_x {
            for b in 0..spec.n_y {
                for a2 in 0..spec.n_x {
                    for b2 in 0..spec.n_y {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for m in 0..spec.n_x {
                            for n in 0..spec.n_y {
                                let dk_x = (a as f64 - a2 as f64) * spec.dkx;
                                let dk_y = (b as f64 - b2 as f64) * spec.dky;
                                let phase = -(spec.x_at(m) * dk_x + spec.y_at(n) * dk_y);
                                acc += Complex64::from_polar(1.0, phase);
                            }
                        }
                        acc /= (spec.n_x * spec.n_y) as f64;
                        let expect = if a == a2 && b == b2 { 1.0 } else { 0.0 };
                        assert!(
                            (acc - expect).norm() < 1e-12,
                            "({a},{b}) vs ({a2},{b2}): {acc}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parseval_identity() {
        let spec = GridSpec::new(15, 13, -4.0, 2.0, 11.0, 7.0).unwrap();
        let field = random_field(spec, 3);
        let out = dft_forward(&field, MomentumOffset::new(-0.4, 1.3)).unwrap();
        let pos: f64 = field.values.iter().map(|z| z.norm_sqr()).sum();
        let mom: f64 = out.values.iter().map(|z| z.norm_sqr()).sum();
        assert!((pos - mom).abs() / pos < 1e-12);
    }

    #[test]
    fn origin_shift_is_a_global_phase() {
        let spec = GridSpec::new(9, 9, -2.0, -2.0, 4.0, 4.0).unwrap();
        let delta = 0.37;
        let shifted = GridSpec {
            x_min: spec.x_min + delta,
            ..spec
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let values = Array2::from_shape_fn((9, 9), |_| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let off = MomentumOffset::new(0.8, -0.2);
        let f1 = ComplexField2D::new(spec, Domain::Position, values.clone()).unwrap();
        let f2 = ComplexField2D::new(shifted, Domain::Position, values).unwrap();
        let o1 = dft_forward(&f1, off).unwrap();
        let o2 = dft_forward(&f2, off).unwrap();
        for a in 0..9 {
            let kx = off.k_x_at(&spec, a);
            let phase = Complex64::from_polar(1.0, -delta * kx);
            for b in 0..9 {
                assert!((o2.values[[a, b]] - o1.values[[a, b]] * phase).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let spec = GridSpec::new(5, 5, 0.0, 0.0, 1.0, 1.0).unwrap();
        let bad = Array2::zeros((4, 5));
        assert!(matches!(
            ComplexField2D::new(spec, Domain::Position, bad),
            Err(GridError::ShapeMismatch { .. })
        ));
        let field = ComplexField2D::zeros(spec, Domain::Position);
        assert!(dft_inverse(&field).is_err());
    }
}
