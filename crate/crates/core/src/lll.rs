//! LLL lattice basis reduction over the integers and minimal-polynomial
//! reconstruction from a precise numerical approximation of an algebraic
//! number (degree and height bounded).

use crate::dyadic::Dyadic;
use crate::factor::factor_over_q;
use crate::unipoly::UniPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("basis rows are linearly dependent")]
    DependentRows,
    #[error("reconstruction failed within the degree/height retry budget")]
    ReconstructionFailed,
}

/// Row-major integer lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    pub basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vec<BigInt>>) -> Self {
        assert!(!basis.is_empty());
        let w = basis[0].len();
        assert!(basis.iter().all(|r| r.len() == w));
        IntegerLattice { basis }
    }

    pub fn rows(&self) -> usize {
        self.basis.len()
    }
}

/// Reconstruction parameters: degree bound, height bound and working
/// precision in bits.
#[derive(Clone, Debug)]
pub struct KllParams {
    pub degree_bound: usize,
    pub height_bound: BigInt,
    pub precision_bits: u32,
}

impl KllParams {
    pub fn new(degree_bound: usize, height_bound: BigInt) -> Self {
        let precision_bits =
            crate::newton::required_precision_bits(degree_bound as u32, &height_bound);
        KllParams {
            degree_bound,
            height_bound,
            precision_bits,
        }
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_int(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
        .sum()
}

/// Lovász-condition LLL reduction. All-integer bookkeeping: Gram
/// determinants d and scaled coefficients lambda[i][j] = mu[i][j] * d[j+1]
/// stay integral, so no rational normalization happens in the hot loop.
pub fn lll_reduce(lattice: &IntegerLattice, delta: &BigRational) -> Result<IntegerLattice, LatticeError> {
    assert!(
        *delta > BigRational::new(BigInt::one(), BigInt::from(4)) && *delta < BigRational::one(),
        "delta must lie in (1/4, 1)"
    );
    let delta_num = delta.numer().clone();
    let delta_den = delta.denom().clone();
    let mut b = lattice.basis.clone();
    let n = b.len();
    let mut lambda = vec![vec![BigInt::zero(); n]; n];
    let mut d = vec![BigInt::one(); n + 1];
    for i in 0..n {
        for j in 0..=i {
            let mut u: BigInt = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
            for l in 0..j {
                u = (&d[l + 1] * u - &lambda[i][l] * &lambda[j][l]) / &d[l];
            }
            if j < i {
                lambda[i][j] = u;
            } else {
                if u.is_zero() || u.is_negative() {
                    return Err(LatticeError::DependentRows);
                }
                d[i + 1] = u;
            }
        }
    }
    let mut k = 1usize;
    while k < n {
        // size-reduce row k against rows k-1..0
        for j in (0..k).rev() {
            let two_lambda: BigInt = &lambda[k][j] * BigInt::from(2);
            if two_lambda.abs() > d[j + 1] {
                let q = round_quotient(&lambda[k][j], &d[j + 1]);
                if !q.is_zero() {
                    for idx in 0..b[k].len() {
                        let sub = &q * &b[j][idx];
                        b[k][idx] -= sub;
                    }
                    for l in 0..j {
                        let sub = &q * &lambda[j][l];
                        lambda[k][l] -= sub;
                    }
                    let sub = &q * &d[j + 1];
                    lambda[k][j] -= sub;
                }
            }
        }
        // Lovász: swap when q*d[k+1]*d[k-1] < p*d[k]^2 - q*lambda^2
        let lam = lambda[k][k - 1].clone();
        let lhs = &delta_den * &d[k + 1] * &d[k - 1];
        let rhs = &delta_num * &d[k] * &d[k] - &delta_den * &lam * &lam;
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k - 1, k);
            for j in 0..k.saturating_sub(1) {
                let t = lambda[k - 1][j].clone();
                lambda[k - 1][j] = lambda[k][j].clone();
                lambda[k][j] = t;
            }
            // new d[k]; lambda[k][k-1] itself is unchanged
            let dk_new = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
            if dk_new.is_zero() {
                return Err(LatticeError::DependentRows);
            }
            for i in k + 1..n {
                let t = lambda[i][k].clone();
                lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
                lambda[i][k - 1] = (&dk_new * &t + &lam * &lambda[i][k]) / &d[k + 1];
            }
            d[k] = dk_new;
            k = k.max(2) - 1;
        }
    }
    Ok(IntegerLattice { basis: b })
}

/// round(num / den) for positive den, half away from zero.
fn round_quotient(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let doubled = num * &two + if num.is_negative() { -den } else { den.clone() };
    doubled / (den * &two)
}

fn round_rational(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let (num, den) = (q.numer(), q.denom());
    let doubled = num * &two + if num.is_negative() { -den } else { den.clone() };
    // truncating division rounds half away from zero here for either sign
    doubled / (den * &two)
}

/// Checks size reduction and the Lovász condition for a basis (test hook).
pub fn is_lll_reduced(lattice: &IntegerLattice, delta: &BigRational) -> bool {
    let b = &lattice.basis;
    let n = b.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bstar: Vec<Vec<BigRational>> = vec![vec![]; n];
    let mut norms = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut v: Vec<BigRational> = b[i]
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        for j in 0..i {
            if norms[j].is_zero() {
                return false;
            }
            mu[i][j] = dot_int(&b[i], &bstar[j]) / &norms[j];
            let mij = mu[i][j].clone();
            for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &mij * sk;
            }
        }
        norms[i] = dot(&v, &v);
        bstar[i] = v;
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
    }
    for k in 1..n {
        let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if norms[k] < rhs {
            return false;
        }
    }
    true
}

/// The default reduction parameter 3/4.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

/// Reconstructs the primitive irreducible integer polynomial vanishing at the
/// algebraic number approximated by `approx`.
///
/// `known_bits` states how many fractional bits of `approx` are trusted; the
/// lattice scaling never exceeds it. Verification requires the candidate to
/// nearly vanish at the approximation and to be irreducible; failures retry
/// with doubled height, then doubled degree.
pub fn minimal_polynomial(
    approx: &BigRational,
    known_bits: u32,
    params: &KllParams,
) -> Result<UniPoly, LatticeError> {
    let mut degree = params.degree_bound.max(1);
    for d_try in 0..2 {
        let mut height = params.height_bound.clone().max(BigInt::one());
        for _h_try in 0..6 {
            let precision = if d_try == 0 && height == params.height_bound {
                params.precision_bits
            } else {
                crate::newton::required_precision_bits(degree as u32, &height)
            };
            let p_eff = precision.min(known_bits).max(8);
            if let Some(found) = try_reconstruct(approx, degree, &height, p_eff) {
                return Ok(found);
            }
            height *= BigInt::from(2);
        }
        degree *= 2;
        let _ = d_try;
    }
    Err(LatticeError::ReconstructionFailed)
}

fn try_reconstruct(
    approx: &BigRational,
    degree: usize,
    height: &BigInt,
    p_eff: u32,
) -> Option<UniPoly> {
    // rows: [ e_i | round(2^p * approx^i) ]
    let scale = BigInt::one() << p_eff;
    let scale_q = BigRational::from_integer(scale.clone());
    let mut rows = Vec::with_capacity(degree + 1);
    let mut power = BigRational::one();
    for i in 0..=degree {
        let mut row = vec![BigInt::zero(); degree + 2];
        row[i] = BigInt::one();
        row[degree + 1] = round_rational(&(&power * &scale_q));
        rows.push(row);
        power *= approx;
    }
    let reduced = lll_reduce(&IntegerLattice::new(rows), &default_delta()).ok()?;

    // |cand(approx)| < 2^(-p/2) * (d+1) * H
    let bound = BigRational::new(
        (degree as i64 + 1) * height,
        BigInt::one() << (p_eff / 2),
    );
    for vector in &reduced.basis {
        let cand = UniPoly::new(vector[..=degree].to_vec());
        if cand.is_zero() || cand.degree() == 0 {
            continue;
        }
        let cand = cand.normalize();
        if cand.eval_rational(approx).abs() >= bound {
            continue;
        }
        // candidate must be irreducible; a reducible hit still pins the value
        // through the factor that vanishes at the approximation
        let factors = factor_over_q(&cand);
        if factors.len() == 1 && factors[0].1 == 1 {
            return Some(cand);
        }
        for (f, _) in &factors {
            if f.degree() >= 1 && f.eval_rational(approx).abs() < bound {
                return Some(f.clone());
            }
        }
    }
    None
}

/// Some(root) iff the reconstructed polynomial is linear: the approximated
/// value was rational.
pub fn is_rational_root(poly: &UniPoly) -> Option<BigRational> {
    if poly.degree() == 1 {
        Some(BigRational::new(-poly.coeff(0), poly.coeff(1)))
    } else {
        None
    }
}

/// Convenience: reconstruct from a dyadic approximation produced by the
/// Newton stage.
pub fn minimal_polynomial_dyadic(
    approx: &Dyadic,
    known_bits: u32,
    params: &KllParams,
) -> Result<UniPoly, LatticeError> {
    minimal_polynomial(&approx.to_rational(), known_bits, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::parse_decimal;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_already_reduced() {
        let l = IntegerLattice::new(vec![big(&[1, 0]), big(&[0, 1])]);
        let r = lll_reduce(&l, &default_delta()).unwrap();
        assert!(is_lll_reduced(&r, &default_delta()));
        assert_eq!(r, l);
    }

    #[test]
    fn size_reduction_shrinks() {
        let l = IntegerLattice::new(vec![big(&[1, 0]), big(&[1_000_000, 1])]);
        let r = lll_reduce(&l, &default_delta()).unwrap();
        assert!(is_lll_reduced(&r, &default_delta()));
        let shortest: BigInt = r.basis[0].iter().map(|c| c * c).sum();
        assert!(shortest <= BigInt::from(2));
    }

    #[test]
    fn two_dim_vs_exhaustive() {
        // oracle: exhaustive short-vector search on a fixed 2D lattice
        let rows = [big(&[201, 37]), big(&[1648, 297])];
        let l = IntegerLattice::new(rows.to_vec());
        let r = lll_reduce(&l, &default_delta()).unwrap();
        assert!(is_lll_reduced(&r, &default_delta()));
        let mut best: Option<BigInt> = None;
        for a in -60i64..=60 {
            for b in -60i64..=60 {
                if a == 0 && b == 0 {
                    continue;
                }
                let v0 = &rows[0][0] * a + &rows[1][0] * b;
                let v1 = &rows[0][1] * a + &rows[1][1] * b;
                let n = &v0 * &v0 + &v1 * &v1;
                if best.as_ref().map_or(true, |m| n < *m) {
                    best = Some(n);
                }
            }
        }
        let shortest_found: BigInt = r.basis[0].iter().map(|c| c * c).sum();
        // LLL guarantee in 2D at delta = 3/4: ||b1||^2 <= 2 * lambda1^2
        assert!(shortest_found <= best.unwrap() * BigInt::from(2));
    }

    #[test]
    fn dependent_rows_detected() {
        let l = IntegerLattice::new(vec![big(&[1, 2]), big(&[2, 4])]);
        assert_eq!(
            lll_reduce(&l, &default_delta()),
            Err(LatticeError::DependentRows)
        );
    }

    #[test]
    fn reconstruct_appendix_values() {
        let params = KllParams::new(2, BigInt::from(3));
        let cases = [
            ("0.7282202113", vec![9i64, -16, 5]),
            ("0.3588989435", vec![-3, 8, 1]),
            ("0.4717797888", vec![-3, 4, 5]),
        ];
        for (dec, coeffs) in cases {
            let (q, bits) = parse_decimal(dec).unwrap();
            let m = minimal_polynomial(&q, bits, &params).unwrap();
            assert_eq!(m, UniPoly::from_i64(&coeffs), "for {dec}");
        }
    }

    #[test]
    fn reconstruct_sqrt2() {
        let (q, bits) = parse_decimal("1.41421356237309504880168872420969808").unwrap();
        let m = minimal_polynomial(&q, bits, &KllParams::new(2, BigInt::from(2))).unwrap();
        assert_eq!(m, UniPoly::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn rational_input_gives_linear() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(2));
        let m = minimal_polynomial(&q, 64, &KllParams::new(2, BigInt::from(3))).unwrap();
        assert_eq!(m, UniPoly::from_i64(&[-1, 2]));
        assert_eq!(is_rational_root(&m), Some(q));
        let m4 = minimal_polynomial(
            &BigRational::new(BigInt::from(1), BigInt::from(2)),
            64,
            &KllParams::new(4, BigInt::from(3)),
        )
        .unwrap();
        assert_eq!(m4, UniPoly::from_i64(&[-1, 2]));
    }

    #[test]
    fn is_rational_root_cases() {
        assert_eq!(
            is_rational_root(&UniPoly::from_i64(&[-3, 1])),
            Some(BigRational::from_integer(BigInt::from(3)))
        );
        assert_eq!(is_rational_root(&UniPoly::from_i64(&[-3, 8, 1])), None);
    }
}
