//! Decomposition of symmetric 2x2 matrices over the three directions
//! `f1 = (4,3)`, `f2 = (4,-3)`, `f3 = (0,5)`.
//!
//! Every symmetric `K` splits as `K = sum_i c_i(K) (Id - fh_i x fh_i)` with
//! coefficients linear in `K`; near the identity all three coefficients are
//! positive, so their square roots are smooth weights.

use crate::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

/// The three lattice directions and their projectors `Id - fh x fh`.
#[derive(Debug, Clone)]
pub struct DirectionSet {
    pub dirs: [[f64; 2]; 3],
}

impl Default for DirectionSet {
    fn default() -> Self {
        Self { dirs: [[4.0, 3.0], [4.0, -3.0], [0.0, 5.0]] }
    }
}

impl DirectionSet {
    pub fn direction(&self, i: usize) -> [f64; 2] {
        self.dirs[i]
    }

    /// `Id - fh_i x fh_i`, an orthogonal projector of rank 1.
    pub fn projector(&self, i: usize) -> Mat2 {
        let f = self.dirs[i];
        let n2 = f[0] * f[0] + f[1] * f[1];
        [
            [1.0 - f[0] * f[0] / n2, -f[0] * f[1] / n2],
            [-f[0] * f[1] / n2, 1.0 - f[1] * f[1] / n2],
        ]
    }
}

/// Coefficients of `K` over the three projectors.
#[derive(Debug, Clone, Copy)]
pub struct Decomposition {
    pub coeffs: [f64; 3],
}

impl Decomposition {
    /// Reassembles `sum_i c_i P_i`.
    pub fn reconstruct(&self, dirs: &DirectionSet) -> Mat2 {
        let mut out = [[0.0; 2]; 2];
        for i in 0..3 {
            let p = dirs.projector(i);
            for r in 0..2 {
                for cidx in 0..2 {
                    out[r][cidx] += self.coeffs[i] * p[r][cidx];
                }
            }
        }
        out
    }
}

pub fn max_entry_norm(m: &Mat2) -> f64 {
    m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
}

pub fn mat_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]]
}

fn check_symmetric(k: &Mat2) -> Result<()> {
    let asym = (k[0][1] - k[1][0]).abs();
    let scale = max_entry_norm(k).max(1.0);
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Linear coefficients of the three-direction split:
/// `c1 = 25/32 K22 - 25/24 K12`, `c2 = 25/32 K22 + 25/24 K12`,
/// `c3 = K11 - 9/16 K22`.
pub fn decompose(k: &Mat2) -> Result<Decomposition> {
    check_symmetric(k)?;
    let k12 = 0.5 * (k[0][1] + k[1][0]);
    let c1 = 25.0 / 32.0 * k[1][1] - 25.0 / 24.0 * k12;
    let c2 = 25.0 / 32.0 * k[1][1] + 25.0 / 24.0 * k12;
    let c3 = k[0][0] - 9.0 / 16.0 * k[1][1];
    Ok(Decomposition { coeffs: [c1, c2, c3] })
}

/// Radius of the ball around the identity on which all coefficients stay
/// positive: `min(1/100, |sigma*|)`.
pub fn ball_radius(sigma_star: f64) -> f64 {
    (1.0 / 100.0f64).min(sigma_star.abs())
}

/// Square-root weights `Gamma_i = sqrt(c_i(K))` for `K` near the identity.
///
/// Refuses matrices outside the ball `|K - Id|_max <= c0` and reports the
/// measured distance.
pub fn gamma(k: &Mat2, sigma_star: f64) -> Result<[f64; 3]> {
    let c0 = ball_radius(sigma_star);
    let dist = max_entry_norm(&mat_sub(k, &IDENTITY));
    if dist > c0 {
        return Err(Error::OutsideBall { dist, c0 });
    }
    let d = decompose(k)?;
    for (i, c) in d.coeffs.iter().enumerate() {
        // cannot happen on the ball; guards against misuse with a raw call
        if *c <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coefficient {i} nonpositive ({c:.3e}) inside the ball"
            )));
        }
    }
    Ok([d.coeffs[0].sqrt(), d.coeffs[1].sqrt(), d.coeffs[2].sqrt()])
}

/// The `i`-th component map `K -> c_i(K) P_i` (zero-based `i`).
pub fn component_map(k: &Mat2, i: usize, dirs: &DirectionSet) -> Result<Mat2> {
    let d = decompose(k)?;
    let p = dirs.projector(i);
    let mut out = [[0.0; 2]; 2];
    for r in 0..2 {
        for cidx in 0..2 {
            out[r][cidx] = d.coeffs[i] * p[r][cidx];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_coefficients_match_proof() {
        let d = decompose(&IDENTITY).unwrap();
        assert_eq!(d.coeffs[0], 25.0 / 32.0);
        assert_eq!(d.coeffs[1], 25.0 / 32.0);
        assert_eq!(d.coeffs[2], 7.0 / 16.0);
        let g = gamma(&IDENTITY, -3.0).unwrap();
        assert_eq!(g[0], (25.0f64 / 32.0).sqrt());
        assert_eq!(g[1], (25.0f64 / 32.0).sqrt());
        assert_eq!(g[2], (7.0f64 / 16.0).sqrt());
    }

    #[test]
    fn zero_matrix_decomposes_to_zero() {
        let d = decompose(&[[0.0; 2]; 2]).unwrap();
        assert_eq!(d.coeffs, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn random_reconstruction_machine_precision() {
        let dirs = DirectionSet::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a: f64 = rng.gen_range(-2.0..2.0);
            let b: f64 = rng.gen_range(-2.0..2.0);
            let c: f64 = rng.gen_range(-2.0..2.0);
            let k = [[a, b], [b, c]];
            let d = decompose(&k).unwrap();
            let r = d.reconstruct(&dirs);
            assert!(max_entry_norm(&mat_sub(&k, &r)) <= 1e-14);
        }
    }

    #[test]
    fn decompose_is_linear() {
        let k1 = [[0.3, -0.1], [-0.1, 0.7]];
        let k2 = [[-1.2, 0.4], [0.4, 0.2]];
        let (a, b) = (1.75, -0.5);
        let mix = [
            [a * k1[0][0] + b * k2[0][0], a * k1[0][1] + b * k2[0][1]],
            [a * k1[1][0] + b * k2[1][0], a * k1[1][1] + b * k2[1][1]],
        ];
        let dm = decompose(&mix).unwrap();
        let d1 = decompose(&k1).unwrap();
        let d2 = decompose(&k2).unwrap();
        for i in 0..3 {
            let want = a * d1.coeffs[i] + b * d2.coeffs[i];
            assert!((dm.coeffs[i] - want).abs() <= 1e-14 * want.abs().max(1.0));
        }
    }

    #[test]
    fn asymmetric_input_rejected() {
        let k = [[1.0, 0.2], [-0.2, 1.0]];
        assert!(matches!(decompose(&k), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn gamma_positive_near_identity_negative_far() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let e: f64 = rng.gen_range(-0.01..0.01);
            let f: f64 = rng.gen_range(-0.01..0.01);
            let g: f64 = rng.gen_range(-0.01..0.01);
            let k = [[1.0 + e, f], [f, 1.0 + g]];
            let d = decompose(&k).unwrap();
            for c in d.coeffs {
                assert!(c >= 7.0 / 16.0 - 3.0 / 100.0);
            }
        }
        let far = [[1.5, 0.0], [0.0, 1.0]];
        assert!(matches!(gamma(&far, -3.0), Err(Error::OutsideBall { .. })));
    }

    #[test]
    fn small_offdiagonal_shifts_first_coefficient() {
        let k = [[1.0, 0.005], [0.005, 1.0]];
        let d = decompose(&k).unwrap();
        let want = 25.0 / 32.0 - 25.0 / 24.0 * 0.005;
        assert!((d.coeffs[0] - want).abs() < 1e-15);
        assert!(d.coeffs.iter().all(|c| *c > 0.0));
    }

    #[test]
    fn component_maps_are_idempotent_and_sum_to_identity() {
        let dirs = DirectionSet::default();
        let k1 = component_map(&IDENTITY, 0, &dirs).unwrap();
        let k11 = component_map(&k1, 0, &dirs).unwrap();
        assert!(max_entry_norm(&mat_sub(&k1, &k11)) <= 1e-14);
        let k12 = component_map(&k1, 1, &dirs).unwrap();
        assert!(max_entry_norm(&k12) <= 1e-14);
        let mut total = [[0.0; 2]; 2];
        for i in 0..3 {
            let ki = component_map(&IDENTITY, i, &dirs).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    total[r][c] += ki[r][c];
                }
            }
        }
        assert!(max_entry_norm(&mat_sub(&total, &IDENTITY)) <= 1e-14);
    }

    #[test]
    fn projectors_are_rank_one_idempotents() {
        let dirs = DirectionSet::default();
        for i in 0..3 {
            let p = dirs.projector(i);
            assert!((p[0][1] - p[1][0]).abs() < 1e-15);
            let tr = p[0][0] + p[1][1];
            assert!((tr - 1.0).abs() < 1e-14);
            // P^2 = P
            for r in 0..2 {
                for c in 0..2 {
                    let pp = p[r][0] * p[0][c] + p[r][1] * p[1][c];
                    assert!((pp - p[r][c]).abs() < 1e-14);
                }
            }
            let f = dirs.direction(i);
            assert!((f[0] * f[0] + f[1] * f[1] - 25.0).abs() < 1e-12);
        }
    }
}
