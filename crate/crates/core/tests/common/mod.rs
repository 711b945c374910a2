#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, spread: f64) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(n, n, c(0.0));
    for i in 0..n {
        m[(i, i)] = c(rng.gen_range(-spread..spread));
        for j in i + 1..n {
            let z = Complex64::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
/// Returns eigenvalues and the column eigenvector matrix.
pub fn jacobi_eigen(mut a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = cs * akp - sn * akq;
                    a[(k, q)] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = cs * apk - sn * aqk;
                    a[(q, k)] = sn * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)]).collect(), v)
}

/// `e^{−iHt}v` through the real embedding `M = [[A, −B], [B, A]]` of
/// `H = A + iB`: with `u = (Re v, Im v)`, the result embeds as
/// `cos(Mt)u − J sin(Mt)u`, `J = [[0, −1], [1, 0]]`.
pub fn jacobi_expm_apply(h: &DMatrix<Complex64>, t: f64, v: &[Complex64]) -> Vec<Complex64> {
    let n = h.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    let (lambda, q) = jacobi_eigen(m);
    let u: Vec<f64> = v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect();
    let mut cos_u = vec![0.0; 2 * n];
    let mut sin_u = vec![0.0; 2 * n];
    for k in 0..2 * n {
        let coef: f64 = (0..2 * n).map(|r| q[(r, k)] * u[r]).sum();
        let (s, co) = (lambda[k] * t).sin_cos();
        for r in 0..2 * n {
            cos_u[r] += q[(r, k)] * co * coef;
            sin_u[r] += q[(r, k)] * s * coef;
        }
    }
    // −J·x = (x_im, −x_re)
    (0..n)
        .map(|i| Complex64::new(cos_u[i] + sin_u[i + n], cos_u[i + n] - sin_u[i]))
        .collect()
}

/// `e^{−iHt}` by Taylor series with scaling and squaring.
pub fn taylor_expm(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let n = h.nrows();
    let a = h.map(|z| -I * z * t);
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale /= 2.0;
        squarings += 1;
    }
    let a = a.map(|z| z * scale);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &a / c(k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Survival under `H = Ωσx + g|1⟩⟨1|` starting from `|0⟩`.
pub fn rabi_survival(omega: f64, g: f64, t: f64) -> f64 {
    let w2 = omega * omega + g * g / 4.0;
    1.0 - omega * omega / w2 * (w2.sqrt() * t).sin().powi(2)
}

/// Brute-force solution of the closed memory equation for the atom amplitude
///
/// `Ċ = −iωC − ∫₀ᵗ K(t − τ) C(τ) dτ`,  `K(τ) = g0²(d − cτ)²` for `cτ < d`,
///
/// which follows from eliminating `F` for the constant kernel. Implicit
/// trapezoid in time. Returns `|C|²` on the grid `0, dt, 2dt, …`.
pub fn volterra_survival(g0: f64, d: f64, c_speed: f64, omega: f64, dt: f64, steps: usize) -> Vec<f64> {
    let kernel = |tau: f64| {
        let r = d - c_speed * tau;
        if r > 0.0 {
            g0 * g0 * r * r
        } else {
            0.0
        }
    };
    let kv: Vec<f64> = (0..=steps).map(|m| kernel(m as f64 * dt)).collect();
    let mut cs = vec![c(1.0)];
    let mut f_prev = -I * omega * cs[0];
    for n in 0..steps {
        // memory part of I_{n+1} that does not involve C_{n+1}
        let mut known = 0.5 * kv[n + 1] * cs[0];
        for m in 1..=n {
            known += kv[n + 1 - m] * cs[m];
        }
        known *= dt;
        let self_w = 0.5 * dt * kv[0];
        // C = C_n + dt/2 (f_n − iωC − known − self_w C)
        let rhs = cs[n] + 0.5 * dt * (f_prev - known);
        let denom = c(1.0) + 0.5 * dt * (I * omega + self_w);
        let c_next = rhs / denom;
        f_prev = -I * omega * c_next - known - self_w * c_next;
        cs.push(c_next);
    }
    cs.into_iter().map(|z| z.norm_sqr()).collect()
}
