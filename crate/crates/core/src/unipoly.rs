//! Exact univariate integer polynomials: arithmetic, gcd, square-free parts,
//! rational roots, Sturm sequences and real-root isolation.

use crate::dyadic::Dyadic;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("interval endpoint is a root")]
    EndpointIsRoot,
}

/// Dense integer polynomial, coefficients low-to-high. The zero polynomial is
/// the empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x - r for rational r, cleared to integers: den*x - num.
    pub fn linear_from_root(r: &BigRational) -> Self {
        UniPoly::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn monomial(coeff: BigInt, deg: usize) -> Self {
        let mut c = vec![BigInt::zero(); deg + 1];
        c[deg] = coeff;
        UniPoly::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient; the canonical form.
    pub fn normalize(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.leading().is_positive()
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        UniPoly::new(out)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact evaluation at a dyadic point (integer coefficients keep the
    /// result dyadic).
    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Dyadic::from_int(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        self.eval_dyadic(x).signum()
    }

    /// p(-x)
    pub fn reflect(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Composition p(a*x + b) for integer a, b.
    pub fn compose_linear(&self, a: &BigInt, b: &BigInt) -> UniPoly {
        let mut acc = UniPoly::zero();
        let lin = UniPoly::new(vec![b.clone(), a.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&UniPoly::new(vec![c.clone()]));
        }
        acc
    }

    /// Exact division; returns None if rhs does not divide self over Q
    /// (coefficient-wise rational division with zero remainder).
    pub fn div_exact(&self, rhs: &UniPoly) -> Option<UniPoly> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(UniPoly::zero());
        }
        if self.degree() < rhs.degree() {
            return None;
        }
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let lead = BigRational::from_integer(rhs.leading());
        let dq = self.degree() - rhs.degree();
        let mut quo = vec![BigRational::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let top = rem[k + rhs.degree()].clone();
            if top.is_zero() {
                continue;
            }
            let q = top / &lead;
            quo[k] = q.clone();
            for (i, c) in rhs.coeffs.iter().enumerate() {
                rem[k + i] -= &q * BigRational::from_integer(c.clone());
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        if quo.iter().any(|c| !c.denom().is_one()) {
            return None;
        }
        Some(UniPoly::new(quo.into_iter().map(|c| c.numer().clone()).collect()))
    }

    /// Remainder of self by rhs over Q, returned as an integer polynomial
    /// scaled by a positive rational (signs match the true remainder).
    fn signed_rem(&self, rhs: &UniPoly) -> UniPoly {
        debug_assert!(!rhs.is_zero());
        if self.degree() < rhs.degree() || self.is_zero() {
            return self.clone();
        }
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let lead = BigRational::from_integer(rhs.leading());
        let dq = self.degree() - rhs.degree();
        for k in (0..=dq).rev() {
            let top = rem[k + rhs.degree()].clone();
            if top.is_zero() {
                continue;
            }
            let q = top / &lead;
            for (i, c) in rhs.coeffs.iter().enumerate() {
                rem[k + i] -= &q * BigRational::from_integer(c.clone());
            }
        }
        rem.truncate(rhs.degree());
        let mut den = BigInt::one();
        for c in &rem {
            den = den.lcm(c.denom());
        }
        UniPoly::new(
            rem.iter()
                .map(|c| c.numer() * (&den / c.denom()))
                .collect(),
        )
    }

    /// Polynomial gcd over Z, primitive with positive leading coefficient.
    pub fn gcd_poly(&self, rhs: &UniPoly) -> UniPoly {
        let mut a = self.normalize();
        let mut b = rhs.normalize();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.signed_rem(&b).normalize();
            a = b;
            b = r;
        }
        a.normalize()
    }

    /// p / gcd(p, p'): same distinct roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        if self.degree() == 0 {
            return UniPoly::one();
        }
        let g = self.gcd_poly(&self.derivative());
        if g.degree() == 0 {
            return self.normalize();
        }
        self.normalize()
            .div_exact(&g)
            .expect("gcd divides")
            .normalize()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd_poly(&self.derivative()).degree() == 0
    }

    /// All rational roots (multiplicity stripped), by the rational-root
    /// theorem on the primitive part.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() {
            return vec![];
        }
        let mut p = self.normalize();
        let mut roots = Vec::new();
        // strip x^k
        let mut k = 0;
        while p.coeff(0).is_zero() {
            p = UniPoly::new(p.coeffs[1..].to_vec());
            k += 1;
        }
        if k > 0 {
            roots.push(BigRational::zero());
        }
        if p.degree() == 0 {
            return roots;
        }
        let a0 = p.coeff(0).abs();
        let an = p.leading().abs();
        let nums = divisors(&a0);
        let dens = divisors(&an);
        for num in &nums {
            for den in &dens {
                if num.gcd(den) != BigInt::one() {
                    continue;
                }
                for sign in [1i32, -1] {
                    let cand = BigRational::new(num * BigInt::from(sign), den.clone());
                    if p.eval_rational(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Power-of-two bound B with all real roots in (-B, B) (Cauchy bound).
    pub fn root_bound_pow2(&self) -> i64 {
        assert!(!self.is_zero());
        let lead = self.leading().abs();
        let mut max_ratio_log: i64 = 0;
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            if c.is_zero() {
                continue;
            }
            // ceil(log2(|c|/lead)) <= bits(|c|) - bits(lead) + 1
            let l = c.abs().bits() as i64 - lead.bits() as i64 + 1;
            max_ratio_log = max_ratio_log.max(l);
        }
        // 1 + max|c|/lead < 2^(max_ratio_log + 1) + 1 <= 2^(max_ratio_log + 2)
        max_ratio_log + 2
    }

    /// Sturm chain: primitive, sign-faithful.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.normalize(), self.derivative().normalize_signed()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() || chain[n - 1].degree() == 0 {
                break;
            }
            let r = chain[n - 2].signed_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().normalize_signed());
        }
        chain
    }

    fn normalize_signed(&self) -> UniPoly {
        // divide by positive content, keep sign
        if self.is_zero() {
            return UniPoly::zero();
        }
        let g = self.content();
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    fn sign_variations_at(chain: &[UniPoly], x: &Dyadic) -> usize {
        let mut count = 0;
        let mut last = 0i32;
        for p in chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of real roots in the open interval (lo, hi); requires p
    /// square-free and nonzero at both endpoints.
    pub fn sturm_count(&self, lo: &Dyadic, hi: &Dyadic) -> Result<usize, RootError> {
        if !self.is_squarefree() {
            return Err(RootError::NotSquareFree);
        }
        if self.sign_at(lo) == 0 || self.sign_at(hi) == 0 {
            return Err(RootError::EndpointIsRoot);
        }
        let chain = self.sturm_chain();
        let vl = Self::sign_variations_at(&chain, lo);
        let vh = Self::sign_variations_at(&chain, hi);
        Ok(vl.saturating_sub(vh))
    }

    /// Disjoint isolating intervals, one per real root, ascending.
    pub fn isolate_real_roots(&self) -> Result<Vec<IsolatingInterval>, RootError> {
        if !self.is_squarefree() {
            return Err(RootError::NotSquareFree);
        }
        if self.degree() == 0 {
            return Ok(vec![]);
        }
        let chain = self.sturm_chain();
        let b = self.root_bound_pow2();
        let lo = Dyadic::new(BigInt::from(-1), b);
        let hi = Dyadic::new(BigInt::from(1), b);
        // endpoints are outside the root bound, never roots
        debug_assert!(self.sign_at(&lo) != 0 && self.sign_at(&hi) != 0);
        let total = Self::sign_variations_at(&chain, &lo) - Self::sign_variations_at(&chain, &hi);
        let mut out = Vec::with_capacity(total);
        self.isolate_rec(&chain, &lo, &hi, total, &mut out);
        Ok(out)
    }

    fn isolate_rec(
        &self,
        chain: &[UniPoly],
        lo: &Dyadic,
        hi: &Dyadic,
        count: usize,
        out: &mut Vec<IsolatingInterval>,
    ) {
        if count == 0 {
            return;
        }
        if count == 1 {
            out.push(IsolatingInterval {
                lo: lo.clone(),
                hi: hi.clone(),
            });
            return;
        }
        let mid = Dyadic::midpoint(lo, hi);
        if self.sign_at(&mid) == 0 {
            // mid is itself a (simple) root; fence it off with a width that
            // keeps the neighbours outside.
            let mut k = 1i64;
            loop {
                let delta = &Dyadic::pow2(-k) * &(hi - lo);
                let l = &mid - &delta;
                let r = &mid + &delta;
                if self.sign_at(&l) != 0
                    && self.sign_at(&r) != 0
                    && Self::sign_variations_at(chain, &l) - Self::sign_variations_at(chain, &r) == 1
                {
                    let cl = Self::sign_variations_at(chain, lo)
                        .saturating_sub(Self::sign_variations_at(chain, &l));
                    let cr = count - cl - 1;
                    self.isolate_rec(chain, lo, &l, cl, out);
                    out.push(IsolatingInterval { lo: l, hi: r.clone() });
                    self.isolate_rec(chain, &r, hi, cr, out);
                    return;
                }
                k += 1;
            }
        }
        // mid could coincide with a root of a chain element but that does not
        // affect the variation count validity.
        let cl = Self::sign_variations_at(chain, lo) - Self::sign_variations_at(chain, &mid);
        let cr = count - cl;
        self.isolate_rec(chain, lo, &mid, cl, out);
        self.isolate_rec(chain, &mid, hi, cr, out);
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // trial division; inputs at desk scale are small
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let n = n.abs();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Open interval with dyadic endpoints containing exactly one real root of an
/// associated polynomial; neither endpoint is a root.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IsolatingInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl IsolatingInterval {
    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo < *x && *x < self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() < *q && *q < self.hi.to_rational()
    }

    pub fn overlaps(&self, other: &IsolatingInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

impl fmt::Debug for IsolatingInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.lo, self.hi)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64(c)
    }

    #[test]
    fn squarefree_examples() {
        // (x-1)^2 -> x-1
        assert_eq!(p(&[1, -2, 1]).squarefree_part(), p(&[-1, 1]));
        // y^4 + 7y^3 - 11y^2 + 3y is already square-free
        let q = p(&[0, 3, -11, 7, 1]);
        assert_eq!(q.squarefree_part(), q);
        assert_eq!(p(&[-2, 0, 1]).squarefree_part(), p(&[-2, 0, 1]));
    }

    #[test]
    fn rational_roots_examples() {
        let q = p(&[0, 3, -11, 7, 1]);
        let roots = q.rational_roots();
        assert_eq!(
            roots,
            vec![
                BigRational::zero(),
                BigRational::from_integer(BigInt::one())
            ]
        );
        assert!(p(&[-3, 8, 1]).rational_roots().is_empty());
        let r = p(&[-4, 0, 1]).rational_roots();
        assert_eq!(
            r,
            vec![
                BigRational::from_integer(BigInt::from(-2)),
                BigRational::from_integer(BigInt::from(2))
            ]
        );
    }

    #[test]
    fn sturm_count_examples() {
        let x2m2 = p(&[-2, 0, 1]);
        assert_eq!(
            x2m2.sturm_count(&Dyadic::zero(), &Dyadic::from_int(2)).unwrap(),
            1
        );
        let yq = p(&[-3, 8, 1]);
        assert_eq!(
            yq.sturm_count(&Dyadic::zero(), &Dyadic::one()).unwrap(),
            1
        );
        let x2p1 = p(&[1, 0, 1]);
        assert_eq!(
            x2p1.sturm_count(&Dyadic::from_int(-10), &Dyadic::from_int(10))
                .unwrap(),
            0
        );
    }

    #[test]
    fn endpoint_root_is_error() {
        let q = p(&[0, 1]); // x
        assert_eq!(
            q.sturm_count(&Dyadic::zero(), &Dyadic::one()),
            Err(RootError::EndpointIsRoot)
        );
        assert_eq!(
            p(&[1, -2, 1]).sturm_count(&Dyadic::zero(), &Dyadic::from_int(2)),
            Err(RootError::NotSquareFree)
        );
    }

    #[test]
    fn isolation_examples() {
        let yq = p(&[-3, 8, 1]); // roots -4 +- sqrt(19): -8.3589, 0.3589
        let ivs = yq.isolate_real_roots().unwrap();
        assert_eq!(ivs.len(), 2);
        let lo_root = Dyadic::from_rational_round(
            &BigRational::new(BigInt::from(-83589i64), BigInt::from(10000)),
            20,
        );
        let hi_root = Dyadic::from_rational_round(
            &BigRational::new(BigInt::from(35890i64), BigInt::from(100000)),
            20,
        );
        assert!(ivs[0].contains(&lo_root));
        assert!(ivs[1].contains(&hi_root));
        assert!(p(&[1, 0, 1]).isolate_real_roots().unwrap().is_empty());
        let sq2 = p(&[-2, 0, 1]).isolate_real_roots().unwrap();
        assert_eq!(sq2.len(), 2);
        for iv in &sq2 {
            assert_eq!(p(&[-2, 0, 1]).sturm_count(&iv.lo, &iv.hi).unwrap(), 1);
        }
    }

    #[test]
    fn isolation_hits_dyadic_root() {
        // roots at 1/2 and 3/4 force a midpoint collision somewhere
        let q = p(&[-1, 2]).mul(&p(&[-3, 4])).mul(&p(&[-1, 1]));
        let ivs = q.isolate_real_roots().unwrap();
        assert_eq!(ivs.len(), 3);
        for iv in &ivs {
            assert_eq!(q.sturm_count(&iv.lo, &iv.hi).unwrap(), 1);
        }
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[-1, 0, 1]); // x^2-1
        let b = p(&[-1, 1]); // x-1
        assert_eq!(a.div_exact(&b).unwrap(), p(&[1, 1]));
        assert_eq!(a.gcd_poly(&p(&[1, 1])), p(&[1, 1]));
        assert_eq!(a.gcd_poly(&p(&[-2, 0, 1])), UniPoly::one());
    }

    #[test]
    fn display_form() {
        assert_eq!(p(&[0, 3, -11, 7, 1]).to_string(), "x^4 + 7*x^3 - 11*x^2 + 3*x");
        assert_eq!(p(&[-2, 0, 1]).to_string(), "x^2 - 2");
        assert_eq!(p(&[9, -16, 5]).to_string(), "5*x^2 - 16*x + 9");
    }
}

