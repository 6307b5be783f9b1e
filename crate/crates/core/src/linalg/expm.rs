//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Follows Higham, "The scaling and squaring method for the matrix exponential
//! revisited" (2005): pick the smallest Padé order m ∈ {3, 5, 7, 9, 13} whose
//! backward-error bound θ_m covers ‖A‖₁; if ‖A‖₁ > θ₁₃, scale by 2^{-s} first
//! and square the result s times.

use ndarray::Array2;
use num_complex::Complex64;

use super::lu::Lu;
use super::{check_square_finite, one_norm, CMat};
use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const THETA_3: f64 = 1.495585217958292e-2;
#[allow(clippy::excessive_precision)]
const THETA_5: f64 = 2.539398330063230e-1;
#[allow(clippy::excessive_precision)]
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn scaled_eye(n: usize, b: f64) -> CMat {
    Array2::eye(n).mapv(|z: Complex64| z * b)
}

/// Evaluate the order-m diagonal Padé approximant r_m(A) = (V-U)^{-1}(V+U)
/// where U collects the odd and V the even powers of A.
fn pade(a: &CMat, powers: &[CMat], coeffs: &[f64]) -> Result<CMat> {
    let n = a.nrows();
    // powers[k] = A^{2(k+1)}; U = A * (sum of odd coeffs), V = sum of even coeffs.
    let mut u_inner = scaled_eye(n, coeffs[1]);
    let mut v = scaled_eye(n, coeffs[0]);
    for (k, p) in powers.iter().enumerate() {
        u_inner = u_inner + p.mapv(|z| z * coeffs[2 * k + 3]);
        v = v + p.mapv(|z| z * coeffs[2 * k + 2]);
    }
    let u = a.dot(&u_inner);
    let num = &v + &u;
    let den = &v - &u;
    let f = Lu::factor(&den)?.solve_mat(&num);
    if !all_finite(&f) {
        return Err(Error::Overflow);
    }
    Ok(f)
}

/// Order-13 evaluation uses the factored form from Higham (2005), Eq. (2.5).
fn pade13(a: &CMat, a2: &CMat, a4: &CMat, a6: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let b = &B13;
    let u_hi = a6.mapv(|z| z * b[13]) + a4.mapv(|z| z * b[11]) + a2.mapv(|z| z * b[9]);
    let u_lo = a6.mapv(|z| z * b[7])
        + a4.mapv(|z| z * b[5])
        + a2.mapv(|z| z * b[3])
        + scaled_eye(n, b[1]);
    let u = a.dot(&(a6.dot(&u_hi) + u_lo));
    let v_hi = a6.mapv(|z| z * b[12]) + a4.mapv(|z| z * b[10]) + a2.mapv(|z| z * b[8]);
    let v = a6.dot(&v_hi)
        + a6.mapv(|z| z * b[6])
        + a4.mapv(|z| z * b[4])
        + a2.mapv(|z| z * b[2])
        + scaled_eye(n, b[0]);
    let num = &v + &u;
    let den = &v - &u;
    let f = Lu::factor(&den)?.solve_mat(&num);
    if !all_finite(&f) {
        return Err(Error::Overflow);
    }
    Ok(f)
}

/// Matrix exponential e^A.
///
/// Accurate to relative error ~1e-10 for ‖A‖ up to ~1e2; callers should keep
/// the spectral norm below ~1e3. Signals [`Error::Overflow`] if intermediate
/// magnitudes leave the representable range.
pub fn expm(a: &CMat) -> Result<CMat> {
    check_square_finite(a)?;
    let norm = one_norm(a);
    if norm == 0.0 {
        return Ok(Array2::eye(a.nrows()));
    }

    if norm <= THETA_9 {
        let a2 = a.dot(a);
        if norm <= THETA_3 {
            return pade(a, &[a2], &B3);
        }
        let a4 = a2.dot(&a2);
        if norm <= THETA_5 {
            return pade(a, &[a2, a4], &B5);
        }
        let a6 = a4.dot(&a2);
        if norm <= THETA_7 {
            return pade(a, &[a2, a4, a6], &B7);
        }
        let a8 = a6.dot(&a2);
        return pade(a, &[a2, a4, a6, a8], &B9);
    }

    // Scale so that ‖A/2^s‖ <= θ13, apply Padé-13, then square s times.
    let s = ((norm / THETA_13).log2().ceil()).max(0.0) as u32;
    let scale = Complex64::new(0.5f64.powi(s as i32), 0.0);
    let a_scaled = a.mapv(|z| z * scale);
    let a2 = a_scaled.dot(&a_scaled);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let mut f = pade13(&a_scaled, &a2, &a4, &a6)?;
    for _ in 0..s {
        f = f.dot(&f);
        if !all_finite(&f) {
            return Err(Error::Overflow);
        }
    }
    Ok(f)
}
