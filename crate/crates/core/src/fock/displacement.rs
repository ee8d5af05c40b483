use alloc::vec;
use alloc::vec::Vec;

/// Matrix elements `⟨m|D(r)|n⟩` of the displacement operator for real `r ≥ 0`,
/// row-major `dim × dim`.
///
/// For `m ≥ n`: `√(n!/m!)·r^{m−n}·e^{−r²/2}·L_n^{(m−n)}(r²)`; the upper
/// triangle follows from `D_nm = (−1)^{m−n} D_mn`.
pub fn displacement_matrix(r: f64, dim: usize) -> Vec<f64> {
    let mut d = vec![0.0; dim * dim];
    if r == 0.0 {
        for n in 0..dim {
            d[n * dim + n] = 1.0;
        }
        return d;
    }
    let x = r * r;
    let ln_r = libm::log(r);
    let ln_fact: Vec<f64> = (0..dim).map(|n| libm::lgamma(n as f64 + 1.0)).collect();
    for k in 0..dim {
        let kf = k as f64;
        let mut prev = 0.0;
        let mut cur = 1.0;
        for n in 0..dim - k {
            if n > 0 {
                let nf = (n - 1) as f64;
                let next = if n == 1 {
                    1.0 + kf - x
                } else {
                    ((2.0 * nf + 1.0 + kf - x) * cur - (nf + kf) * prev) / (nf + 1.0)
                };
                prev = cur;
                cur = next;
            }
            let m = n + k;
            let log_scale = -0.5 * x + 0.5 * (ln_fact[n] - ln_fact[m]) + kf * ln_r;
            let v = cur * libm::exp(log_scale);
            d[m * dim + n] = v;
            if k > 0 {
                d[n * dim + m] = if k % 2 == 0 { v } else { -v };
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_amplitudes;
    use num_complex::Complex64;

    #[test]
    fn first_column_is_coherent_state() {
        let r = 1.3;
        let dim = 40;
        let d = displacement_matrix(r, dim);
        let amps = coherent_amplitudes(Complex64::new(r, 0.0), dim);
        for m in 0..dim {
            assert!((d[m * dim] - amps[m].re).abs() < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn nearly_orthogonal_for_low_rows() {
        let dim = 80;
        let d = displacement_matrix(0.8, dim);
        for i in 0..10 {
            for j in 0..10 {
                let dot: f64 = (0..dim).map(|k| d[i * dim + k] * d[j * dim + k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12, "({i}, {j})");
            }
        }
    }
}
