//! Arbitrary-precision multivariate Newton iteration over a square polynomial
//! system: symbolic Jacobian, trial-step convergence test, precision-driven
//! stopping and a deterministic multi-start search.

use crate::dyadic::Dyadic;
use crate::multipoly::MultiPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NewtonError {
    #[error("system is not square")]
    NonSquareSystem,
    #[error("Jacobian is singular at the iterate")]
    SingularJacobian,
    #[error("did not converge within {0} iterations")]
    DidNotConverge(u32),
    #[error("all starting points failed")]
    AllStartsFailed,
}

/// Bits of precision the reconstruction step needs for degree bound `d` and
/// height bound `h`: d^2 + 2*d*ceil(log2(h+1)) + 64.
pub fn required_precision_bits(d: u32, h: &BigInt) -> u32 {
    let hp1 = h + BigInt::one();
    let bits = hp1.bits() as u32; // floor(log2(h+1)) + 1
    let is_pow2 = (&hp1 & (&hp1 - BigInt::one())).is_zero();
    let ceil_log2 = if is_pow2 { bits - 1 } else { bits };
    d * d + 2 * d * ceil_log2 + 64
}

/// Symbolic Jacobian: entry (r, c) = d f_r / d x_c.
pub fn jacobian(system: &[MultiPoly]) -> Result<Vec<Vec<MultiPoly>>, NewtonError> {
    if system.is_empty() || system.len() != system[0].num_vars() {
        return Err(NewtonError::NonSquareSystem);
    }
    let n = system.len();
    Ok(system
        .iter()
        .map(|f| (0..n).map(|c| f.derivative(c)).collect())
        .collect())
}

fn eval_vector(system: &[MultiPoly], x: &[BigRational]) -> Vec<BigRational> {
    system.iter().map(|f| f.eval_rational(x)).collect()
}

fn eval_matrix(jac: &[Vec<MultiPoly>], x: &[BigRational]) -> Vec<Vec<BigRational>> {
    jac.iter()
        .map(|row| row.iter().map(|e| e.eval_rational(x)).collect())
        .collect()
}

/// Exact linear solve by Gaussian elimination; None when singular.
pub fn solve_linear(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()))?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &factor * &b[col];
            b[r] -= sub;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in (r + 1)..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

fn norm_sq(v: &[BigRational]) -> BigRational {
    v.iter().map(|c| c * c).sum()
}

fn max_abs(v: &[BigRational]) -> BigRational {
    v.iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Newton step J(x)^-1 f(x) at a rational point; None if the Jacobian is
/// singular there.
fn newton_step(
    system: &[MultiPoly],
    jac: &[Vec<MultiPoly>],
    x: &[BigRational],
) -> Option<Vec<BigRational>> {
    let fx = eval_vector(system, x);
    let jx = eval_matrix(jac, x);
    solve_linear(jx, fx)
}

/// Contraction test for the iteration. The one-variable case is the classical
/// inequality |f(x) * f''(x)| < f'(x)^2; with more variables a trial step is
/// taken and the step norms must shrink.
pub fn convergence_check(system: &[MultiPoly], point: &[BigRational]) -> Result<bool, NewtonError> {
    if system.is_empty() || system.len() != system[0].num_vars() {
        return Err(NewtonError::NonSquareSystem);
    }
    if system.len() == 1 {
        let f = &system[0];
        let df = f.derivative(0);
        let ddf = df.derivative(0);
        let fx = f.eval_rational(point);
        let dfx = df.eval_rational(point);
        let ddfx = ddf.eval_rational(point);
        if dfx.is_zero() {
            return Ok(false);
        }
        return Ok((&fx * &ddfx).abs() < &dfx * &dfx);
    }
    let jac = jacobian(system)?;
    let Some(step1) = newton_step(system, &jac, point) else {
        return Ok(false);
    };
    if step1.iter().all(|c| c.is_zero()) {
        return Ok(true);
    }
    let next: Vec<BigRational> = point.iter().zip(&step1).map(|(x, d)| x - d).collect();
    let Some(step2) = newton_step(system, &jac, &next) else {
        return Ok(false);
    };
    Ok(norm_sq(&step2) < norm_sq(&step1))
}

/// Newton iteration from `start` until successive iterates agree to
/// `target_bits` fractional bits and the residual drops below
/// 2^-(target_bits/2). Steps leaving [-1, 2]^n are damped by halving.
pub fn newton_iterate(
    system: &[MultiPoly],
    start: &[Dyadic],
    target_bits: u32,
    max_iters: u32,
) -> Result<Vec<Dyadic>, NewtonError> {
    let jac = jacobian(system)?;
    let precision = target_bits + 32;
    let box_lo = BigRational::from_integer(BigInt::from(-1));
    let box_hi = BigRational::from_integer(BigInt::from(2));
    let step_tol = BigRational::new(BigInt::one(), BigInt::one() << target_bits);
    let resid_tol = BigRational::new(BigInt::one(), BigInt::one() << (target_bits / 2));

    let mut x: Vec<BigRational> = start.iter().map(|d| d.to_rational()).collect();
    for _ in 0..max_iters {
        let fx = eval_vector(system, &x);
        let jx = eval_matrix(&jac, &x);
        let delta = solve_linear(jx, fx).ok_or(NewtonError::SingularJacobian)?;
        let mut scale = BigRational::one();
        let mut next: Vec<BigRational>;
        let mut damp = 0;
        loop {
            next = x
                .iter()
                .zip(&delta)
                .map(|(xi, di)| xi - &scale * di)
                .collect();
            let inside = next.iter().all(|c| *c >= box_lo && *c <= box_hi);
            if inside || damp >= 20 {
                break;
            }
            scale /= BigInt::from(2);
            damp += 1;
        }
        // round to working precision to keep mantissas bounded
        let rounded: Vec<Dyadic> = next
            .iter()
            .map(|c| Dyadic::from_rational_round(c, precision as i64))
            .collect();
        let next_q: Vec<BigRational> = rounded.iter().map(|d| d.to_rational()).collect();
        let moved = max_abs(
            &x.iter()
                .zip(&next_q)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        x = next_q;
        if moved < step_tol {
            let resid = max_abs(&eval_vector(system, &x));
            if resid < resid_tol {
                return Ok(rounded);
            }
        }
    }
    Err(NewtonError::DidNotConverge(max_iters))
}

/// Fractional part of sqrt(p) to 32 bits, computed exactly.
fn sqrt_frac_bits(p: u64) -> BigInt {
    let scaled: BigInt = BigInt::from(p) << 64u32;
    let root = scaled.sqrt(); // floor(2^32 sqrt(p))
    let int_part = BigInt::from((p as f64).sqrt() as u64);
    &root - (int_part << 32)
}

/// Deterministic start list: all-(1/2), perturbed corners, then a
/// low-discrepancy additive sequence in (0,1)^n.
pub fn start_points(num_vars: usize, count: usize) -> Vec<Vec<Dyadic>> {
    let mut starts = Vec::with_capacity(count);
    let half = Dyadic::new(BigInt::one(), -1);
    let sixteenth = Dyadic::new(BigInt::one(), -4);
    starts.push(vec![half; num_vars]);
    starts.push(vec![sixteenth.clone(); num_vars]);
    starts.push(vec![
        &Dyadic::one() - &sixteenth;
        num_vars
    ]);
    const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let mask: BigInt = (BigInt::one() << 32u32) - BigInt::one();
    let mut k = 1u32;
    while starts.len() < count {
        let mut pt = Vec::with_capacity(num_vars);
        for v in 0..num_vars {
            let alpha = sqrt_frac_bits(PRIMES[v % PRIMES.len()]);
            let frac = (alpha * BigInt::from(k)) & mask.clone();
            let frac = if frac.is_zero() { BigInt::one() } else { frac };
            pt.push(Dyadic::new(frac, -32));
        }
        starts.push(pt);
        k += 1;
    }
    starts.truncate(count);
    starts
}

/// Runs Newton from the deterministic start list, skipping the first
/// `skip_starts` entries, and returns the first success.
pub fn multi_start(
    system: &[MultiPoly],
    target_bits: u32,
    max_iters: u32,
    num_starts: usize,
    skip_starts: usize,
) -> Result<Vec<Dyadic>, NewtonError> {
    if system.is_empty() || system.len() != system[0].num_vars() {
        return Err(NewtonError::NonSquareSystem);
    }
    let n = system[0].num_vars();
    for start in start_points(n, num_starts).into_iter().skip(skip_starts) {
        match newton_iterate(system, &start, target_bits, max_iters) {
            Ok(sol) => return Ok(sol),
            Err(_) => continue,
        }
    }
    Err(NewtonError::AllStartsFailed)
}
