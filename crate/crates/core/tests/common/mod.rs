//! Reference computations shared by the integration tests.
//!
//! Everything here is written independently of the library formulas: the
//! Holevo bound is obtained by numerically diagonalizing the covariance
//! matrix, and the maximum gain by bisecting the feasibility predicate.

#![allow(dead_code)]

use cvqkd_nla::gaussian::build_covariance;
use cvqkd_nla::nla::effective_params;
use cvqkd_nla::{ChannelParams, ProtocolParams, PsucModel, TwoModeCovariance};
use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue `nu`.
pub fn thermal_entropy(nu: f64) -> f64 {
    let n = 0.5 * (nu - 1.0);
    if n <= 0.0 {
        return 0.0;
    }
    (n + 1.0) * (n + 1.0).log2() - n * n.log2()
}

fn omega4() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Symplectic eigenvalues of a two-mode covariance matrix, ascending.
///
/// `√γ·Ω·√γ` is antisymmetric with eigenvalues `±iν`, so the eigenvalues of
/// its Gram matrix are `ν²`, each twice.
pub fn symplectic_spectrum(gamma: &Matrix4<f64>) -> [f64; 2] {
    let eig = SymmetricEigen::new(*gamma);
    let sqrt_diag = Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let m = root * omega4() * root;
    let gram = m.transpose() * m;
    let mut nu2: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
    nu2.sort_by(|a, b| a.partial_cmp(b).unwrap());
    [nu2[0].max(0.0).sqrt(), nu2[3].max(0.0).sqrt()]
}

/// Alice's covariance after Bob measures `x_B` (pseudo-inverse Schur complement).
pub fn conditional_on_homodyne(gamma: &Matrix4<f64>) -> Matrix2<f64> {
    let gamma_a = gamma.fixed_view::<2, 2>(0, 0).into_owned();
    let sigma = gamma.fixed_view::<2, 2>(0, 2).into_owned();
    let bx = gamma[(2, 2)];
    let pinv = Matrix2::new(1.0 / bx, 0.0, 0.0, 0.0);
    gamma_a - sigma * pinv * sigma.transpose()
}

pub fn to_nalgebra(cov: &TwoModeCovariance) -> Matrix4<f64> {
    let m = cov.to_matrix();
    Matrix4::from_fn(|i, j| m[i][j])
}

/// `S(AB) − S(A|x_B)` from a numerically diagonalized covariance matrix.
pub fn spectral_holevo(cov: &TwoModeCovariance) -> f64 {
    let gamma = to_nalgebra(cov);
    let [nu_minus, nu_plus] = symplectic_spectrum(&gamma);
    let cond = conditional_on_homodyne(&gamma);
    let nu_cond = cond.determinant().max(0.0).sqrt();
    thermal_entropy(nu_plus) + thermal_entropy(nu_minus) - thermal_entropy(nu_cond)
}

pub fn spectral_holevo_for(lambda: f64, t: f64, eps: f64) -> f64 {
    let p = ProtocolParams::without_nla(lambda, 1.0).unwrap();
    let ch = ChannelParams::new(t, eps).unwrap();
    spectral_holevo(&build_covariance(&p, &ch))
}

/// Whether every physicality constraint holds at gain `g` in the `λ → 0` limit.
pub fn feasible_at_vanishing_lambda(channel: &ChannelParams, gain: f64) -> bool {
    let p = ProtocolParams::new(0.0, 1.0, gain, PsucModel::UpperBound).unwrap();
    match effective_params(&p, channel) {
        Ok(e) => e.feasible && cvqkd_nla::nla::nla_auxiliaries(&p, channel).is_ok(),
        Err(_) => false,
    }
}

/// Largest feasible gain located by doubling then bisecting on the predicate.
pub fn g_max_by_bisection(channel: &ChannelParams, tol: f64) -> f64 {
    let mut lo = 1.0;
    let mut hi = 2.0;
    while feasible_at_vanishing_lambda(channel, hi) {
        lo = hi;
        hi *= 2.0;
        assert!(hi < 1e9, "feasible region unbounded");
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible_at_vanishing_lambda(channel, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
