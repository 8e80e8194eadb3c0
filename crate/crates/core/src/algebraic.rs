//! Exact real algebraic numbers: isolating-interval representation over an
//! irreducible minimal polynomial, conjugate enumeration, exact sign
//! determination with separation bounds, interval-Newton certification of
//! solution boxes, and closed-form radicals for quadratics.

use crate::dyadic::Dyadic;
use crate::factor::{factor_over_q, is_irreducible};
use crate::multipoly::MultiPoly;
use crate::unipoly::{IsolatingInterval, UniPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraicError {
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("interval does not isolate exactly one root")]
    BadInterval,
    #[error("minimal polynomial degree exceeds 2; no radical form")]
    DegreeTooHigh,
    #[error("interval Jacobian stayed singular through refinement")]
    SingularOnBox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(q: &BigRational) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// A real algebraic number: irreducible primitive minimal polynomial with
/// positive leading coefficient, plus an isolating interval.
#[derive(Clone)]
pub struct AlgebraicNumber {
    minpoly: UniPoly,
    interval: IsolatingInterval,
}

impl AlgebraicNumber {
    /// Validated constructor: `minpoly` must be irreducible and the interval
    /// must isolate exactly one of its roots.
    pub fn new(minpoly: UniPoly, interval: IsolatingInterval) -> Result<Self, AlgebraicError> {
        let minpoly = minpoly.normalize();
        if !is_irreducible(&minpoly) {
            return Err(AlgebraicError::Reducible);
        }
        match minpoly.sturm_count(&interval.lo, &interval.hi) {
            Ok(1) => Ok(AlgebraicNumber { minpoly, interval }),
            _ => Err(AlgebraicError::BadInterval),
        }
    }

    /// Internal constructor for intervals already known to isolate.
    fn new_unchecked(minpoly: UniPoly, interval: IsolatingInterval) -> Self {
        AlgebraicNumber { minpoly, interval }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let minpoly = UniPoly::linear_from_root(q).normalize();
        let d = Dyadic::from_rational_round(q, 8);
        let eighth = Dyadic::new(BigInt::one(), -3);
        let interval = IsolatingInterval {
            lo: &d - &eighth,
            hi: &d + &eighth,
        };
        AlgebraicNumber { minpoly, interval }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.minpoly
    }

    pub fn interval(&self) -> &IsolatingInterval {
        &self.interval
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    /// Exact rational value when the degree is 1.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.minpoly.degree() == 1 {
            Some(BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.minpoly.degree() == 1
    }

    /// Same number, interval narrowed by at least `extra_bits` binary digits.
    pub fn refine(&self, extra_bits: u32) -> AlgebraicNumber {
        let mut lo = self.interval.lo.clone();
        let mut hi = self.interval.hi.clone();
        let target = {
            let w = &hi - &lo;
            &w * &Dyadic::pow2(-(extra_bits as i64))
        };
        let mut sign_lo = self.minpoly.sign_at(&lo);
        debug_assert!(sign_lo != 0);
        while (&hi - &lo) > target {
            let mid = Dyadic::midpoint(&lo, &hi);
            let s = self.minpoly.sign_at(&mid);
            if s == 0 {
                // dyadic root (possible only for linear minpoly)
                let w = &hi - &lo;
                let delta = &w * &Dyadic::pow2(-3);
                lo = &mid - &delta;
                hi = &mid + &delta;
                if (&hi - &lo) <= target {
                    break;
                }
                sign_lo = self.minpoly.sign_at(&lo);
                continue;
            }
            if s == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        AlgebraicNumber {
            minpoly: self.minpoly.clone(),
            interval: IsolatingInterval { lo, hi },
        }
    }

    /// Refines until the interval width is at most 2^-bits.
    pub fn refine_to_width(&self, bits: u32) -> AlgebraicNumber {
        let mut a = self.clone();
        let tol = Dyadic::pow2(-(bits as i64));
        while a.interval.width() > tol {
            a = a.refine(8);
        }
        a
    }

    pub fn approx(&self, bits: u32) -> BigRational {
        self.refine_to_width(bits).interval.midpoint().to_rational()
    }

    /// Bits needed to separate distinct roots of p (Mignotte-style bound).
    fn root_separation_bits(p: &UniPoly) -> u32 {
        let d = p.degree() as u32;
        if d <= 1 {
            return 4;
        }
        let norm_bits = p
            .coeffs()
            .iter()
            .map(|c| c.abs().bits())
            .max()
            .unwrap_or(1) as u32
            + (64 - (p.degree() as u64 + 1).leading_zeros());
        (d + 2) / 2 * (32 - d.leading_zeros()) + (d - 1) * norm_bits + 4
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(q);
        }
        // q is never a root of an irreducible minpoly of degree >= 2
        let mut a = self.clone();
        loop {
            if a.interval.hi.to_rational() <= *q {
                return Ordering::Less;
            }
            if a.interval.lo.to_rational() >= *q {
                return Ordering::Greater;
            }
            a = a.refine(16);
        }
    }

    pub fn cmp_alg(&self, other: &AlgebraicNumber) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(&b);
        }
        if let Some(b) = other.as_rational() {
            return self.cmp_rational(&b);
        }
        if let Some(a) = self.as_rational() {
            return other.cmp_rational(&a).reverse();
        }
        let same_poly = self.minpoly == other.minpoly;
        let sep = if same_poly {
            Self::root_separation_bits(&self.minpoly)
        } else {
            // distinct irreducible primitives share no root; separation of
            // the product bounds how far apart they must be
            Self::root_separation_bits(&self.minpoly.mul(&other.minpoly))
        };
        let mut x = self.clone();
        let mut y = other.clone();
        loop {
            if x.interval.hi <= y.interval.lo {
                return Ordering::Less;
            }
            if y.interval.hi <= x.interval.lo {
                return Ordering::Greater;
            }
            let narrow = Dyadic::pow2(-(sep as i64));
            if same_poly && x.interval.width() < narrow && y.interval.width() < narrow {
                // overlapping intervals below the separation bound: same root
                return Ordering::Equal;
            }
            x = x.refine(16);
            y = y.refine(16);
        }
    }

    pub fn sign(&self) -> Sign {
        match self.cmp_rational(&BigRational::zero()) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    /// The image q*self + r under a rational affine map.
    pub fn affine_image(&self, q: &BigRational, r: &BigRational) -> AlgebraicNumber {
        if q.is_zero() {
            return AlgebraicNumber::from_rational(r);
        }
        if let Some(v) = self.as_rational() {
            return AlgebraicNumber::from_rational(&(q * v + r));
        }
        // m_beta(y) = clear( m((y - r)/q) )
        let d = self.minpoly.degree();
        let mut acc: Vec<BigRational> = vec![BigRational::zero()];
        // Horner in x = (y - r)/q: acc = acc*(y-r)/q + c_k
        for c in self.minpoly.coeffs().iter().rev() {
            // multiply acc by (y - r)
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            for a in next.iter_mut() {
                *a /= q;
            }
            next[0] += BigRational::from_integer(c.clone());
            acc = next;
        }
        let mut den = BigInt::one();
        for c in &acc {
            den = den.lcm(c.denom());
        }
        let minpoly = UniPoly::new(
            acc.iter()
                .map(|c| c.numer() * (&den / c.denom()))
                .collect(),
        )
        .normalize();
        debug_assert_eq!(minpoly.degree(), d);
        // interval: image of the current interval, then snap to dyadics and
        // validate isolation
        let mut a = self.clone();
        loop {
            let lo_q = &a.interval.lo.to_rational() * q + r;
            let hi_q = &a.interval.hi.to_rational() * q + r;
            let (lo_q, hi_q) = if lo_q <= hi_q { (lo_q, hi_q) } else { (hi_q, lo_q) };
            let w = &hi_q - &lo_q;
            if !w.is_zero() {
                let bits = rational_width_bits(&w) + 8;
                let lo_d = dyadic_below(&lo_q, bits);
                let hi_d = dyadic_above(&hi_q, bits);
                if minpoly.sign_at(&lo_d) != 0 && minpoly.sign_at(&hi_d) != 0 {
                    if let Ok(1) = minpoly.sturm_count(&lo_d, &hi_d) {
                        return AlgebraicNumber::new_unchecked(
                            minpoly,
                            IsolatingInterval { lo: lo_d, hi: hi_d },
                        );
                    }
                }
            }
            a = a.refine(16);
        }
    }

    /// 1 - self; the complementary probability.
    pub fn one_minus(&self) -> AlgebraicNumber {
        self.affine_image(
            &BigRational::from_integer(BigInt::from(-1)),
            &BigRational::one(),
        )
    }
}

fn rational_width_bits(w: &BigRational) -> u32 {
    // ceil(-log2 w) for w < 1, else 1
    let num_bits = w.numer().abs().bits() as i64;
    let den_bits = w.denom().bits() as i64;
    (den_bits - num_bits + 2).max(1) as u32
}

fn dyadic_below(q: &BigRational, bits: u32) -> Dyadic {
    let d = Dyadic::from_rational_round(q, bits as i64);
    if d.to_rational() < *q {
        d
    } else {
        &d - &Dyadic::pow2(-(bits as i64))
    }
}

fn dyadic_above(q: &BigRational, bits: u32) -> Dyadic {
    let d = Dyadic::from_rational_round(q, bits as i64);
    if d.to_rational() > *q {
        d
    } else {
        &d + &Dyadic::pow2(-(bits as i64))
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_alg(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_alg(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_alg(other)
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            write!(f, "{q}")
        } else {
            write!(
                f,
                "root of {} in {:?}",
                self.minpoly, self.interval
            )
        }
    }
}

/// All real roots of an irreducible polynomial, ascending: the Galois orbit
/// realized as the root set.
#[derive(Clone, Debug)]
pub struct GaloisOrbit {
    pub minpoly: UniPoly,
    pub roots: Vec<AlgebraicNumber>,
    pub group_order_hint: Option<usize>,
}

pub fn conjugates(minpoly: &UniPoly) -> Result<GaloisOrbit, AlgebraicError> {
    let minpoly = minpoly.normalize();
    if !is_irreducible(&minpoly) {
        return Err(AlgebraicError::Reducible);
    }
    let roots = minpoly
        .isolate_real_roots()
        .expect("irreducible implies square-free")
        .into_iter()
        .map(|interval| AlgebraicNumber::new_unchecked(minpoly.clone(), interval))
        .collect();
    Ok(GaloisOrbit {
        minpoly,
        roots,
        group_order_hint: None,
    })
}

// ---------------------------------------------------------------------------
// Rational interval arithmetic
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(q: &BigRational) -> Self {
        RatInterval {
            lo: q.clone(),
            hi: q.clone(),
        }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn from_isolating(iv: &IsolatingInterval) -> Self {
        RatInterval {
            lo: iv.lo.to_rational(),
            hi: iv.hi.to_rational(),
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }

    pub fn sub(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        RatInterval {
            lo: products.iter().min().unwrap().clone(),
            hi: products.iter().max().unwrap().clone(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> RatInterval {
        if q.is_negative() {
            RatInterval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            RatInterval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    pub fn intersect(&self, rhs: &RatInterval) -> Option<RatInterval> {
        let lo = (&self.lo).max(&rhs.lo).clone();
        let hi = (&self.hi).min(&rhs.hi).clone();
        if lo <= hi {
            Some(RatInterval { lo, hi })
        } else {
            None
        }
    }

    /// Strict containment in the interior of rhs.
    pub fn strictly_inside(&self, rhs: &RatInterval) -> bool {
        self.lo > rhs.lo && self.hi < rhs.hi
    }

    pub fn pow(&self, e: u32) -> RatInterval {
        let mut acc = RatInterval::point(&BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Interval evaluation of a polynomial over box coordinates.
pub fn eval_interval(poly: &MultiPoly, coords: &[RatInterval]) -> RatInterval {
    let mut acc = RatInterval::point(&BigRational::zero());
    for (m, c) in poly.terms() {
        let mut t = RatInterval::point(&BigRational::one());
        for (v, &e) in m.iter().enumerate() {
            if e > 0 {
                t = t.mul(&coords[v].pow(e));
            }
        }
        acc = acc.add(&t.scale(c));
    }
    acc
}

// ---------------------------------------------------------------------------
// Exact multivariate sign determination
// ---------------------------------------------------------------------------

/// Conservative lower bound, in bits, on |f(alpha_1..alpha_n)| when that value
/// is nonzero: derived from the integer polynomial whose roots include every
/// conjugate combination of the evaluation.
fn separation_bits(coords: &[&AlgebraicNumber], poly: &MultiPoly) -> u64 {
    let mut cap_d: u64 = 1;
    for a in coords {
        cap_d = cap_d.saturating_mul(a.minpoly.degree() as u64).min(1 << 24);
    }
    let norm_bits = poly.integer_one_norm().max(BigInt::one()).bits();
    let mut sum_e_logh: u64 = 0;
    let mut v_bits: u64 = norm_bits;
    for (i, a) in coords.iter().enumerate() {
        let e = poly.degree_in(i) as u64;
        let h_bits = (a.minpoly.height() + BigInt::one()).bits();
        sum_e_logh = sum_e_logh.saturating_add(e.saturating_mul(cap_d).saturating_mul(h_bits));
        v_bits = v_bits.saturating_add(e.saturating_mul(h_bits));
    }
    sum_e_logh
        .saturating_add(cap_d.saturating_mul(1 + v_bits))
        .saturating_add(8)
}

/// Reduces the degree of `poly` in variable `v` below deg(m) by subtracting
/// multiples of m(x_v); the value at any root of m is unchanged.
fn reduce_mod_minpoly(poly: &MultiPoly, v: usize, m: &UniPoly) -> MultiPoly {
    let d = m.degree() as u32;
    if d == 0 {
        return poly.clone();
    }
    let n = poly.num_vars();
    let m_embedded = MultiPoly::from_unipoly(m, n, v);
    let lc_inv = BigRational::new(BigInt::one(), m.leading());
    let mut p = poly.clone();
    while p.degree_in(v) >= d {
        let k = p.degree_in(v);
        // top coefficient polynomial (terms with exponent k in v, v removed)
        let mut top = MultiPoly::zero(n);
        for (mono, c) in p.terms() {
            if mono[v] == k {
                let mut mm = mono.clone();
                mm[v] = 0;
                top = top.add(&MultiPoly::from_terms(n, vec![(mm, c.clone())]));
            }
        }
        let mut shift_mono = vec![0u32; n];
        shift_mono[v] = k - d;
        let correction = top
            .mul_term(&shift_mono, &lc_inv)
            .mul(&m_embedded);
        p = p.sub(&correction);
    }
    p
}

/// Exact sign of `poly` evaluated at an algebraic point.
pub fn sign_at(point: &[AlgebraicNumber], poly: &MultiPoly) -> Sign {
    assert_eq!(point.len(), poly.num_vars());
    // substitute exact rationals away
    let mut work = poly.clone();
    for (v, a) in point.iter().enumerate() {
        if let Some(q) = a.as_rational() {
            work = work.substitute_rational(v, &q);
        }
    }
    if work.is_zero() {
        return Sign::Zero;
    }
    if work.is_constant() {
        let (_, c) = work.terms().next().unwrap();
        return Sign::of_rational(c);
    }
    let cleared = work.primitive_integer_form();
    let algebraic: Vec<(usize, &AlgebraicNumber)> = point
        .iter()
        .enumerate()
        .filter(|(v, a)| !a.is_rational() && cleared.uses_var(*v))
        .map(|(v, a)| (v, a))
        .collect();
    // degree reduction: value-preserving at the point
    let mut reduced = cleared.clone();
    for (v, a) in &algebraic {
        reduced = reduce_mod_minpoly(&reduced, *v, a.minpoly());
    }
    if reduced.is_zero() {
        return Sign::Zero;
    }
    if reduced.is_constant() {
        let (_, c) = reduced.terms().next().unwrap();
        return Sign::of_rational(c);
    }
    let sep = separation_bits(
        &algebraic.iter().map(|(_, a)| *a).collect::<Vec<_>>(),
        &cleared,
    );
    let tol = BigRational::new(BigInt::one(), BigInt::one() << u32::try_from(sep.min(1 << 22)).unwrap());
    let mut coords: Vec<AlgebraicNumber> = point.to_vec();
    loop {
        let ivs: Vec<RatInterval> = coords
            .iter()
            .map(|a| {
                a.as_rational()
                    .map(|q| RatInterval::point(&q))
                    .unwrap_or_else(|| RatInterval::from_isolating(a.interval()))
            })
            .collect();
        let value = eval_interval(&reduced, &ivs);
        if value.lo.is_positive() {
            return Sign::Positive;
        }
        if value.hi.is_negative() {
            return Sign::Negative;
        }
        if value.width() < tol {
            return Sign::Zero;
        }
        coords = coords
            .iter()
            .map(|a| if a.is_rational() { a.clone() } else { a.refine(32) })
            .collect();
    }
}

// ---------------------------------------------------------------------------
// Box certification (interval Newton / Krawczyk)
// ---------------------------------------------------------------------------

/// Per-coordinate intervals forming a candidate solution box.
#[derive(Clone, Debug)]
pub struct CandidateBox {
    pub coords: Vec<IsolatingInterval>,
}

/// Krawczyk test: true iff the box provably contains a unique solution of the
/// square system. The box is contracted and retried a bounded number of
/// times before giving up.
pub fn certify_box(system: &[MultiPoly], boxed: &CandidateBox) -> Result<bool, AlgebraicError> {
    let n = system.len();
    assert!(n > 0 && system[0].num_vars() == n, "square system required");
    assert_eq!(boxed.coords.len(), n);
    let jac: Vec<Vec<MultiPoly>> = system
        .iter()
        .map(|f| (0..n).map(|c| f.derivative(c)).collect())
        .collect();
    let mut x: Vec<RatInterval> = boxed
        .coords
        .iter()
        .map(RatInterval::from_isolating)
        .collect();
    let mut singular_strikes = 0;
    for _ in 0..64 {
        // cheap rejection: some component's range excludes zero
        for f in system {
            let r = eval_interval(f, &x);
            if !r.contains_zero() {
                return Ok(false);
            }
        }
        let m: Vec<BigRational> = x.iter().map(|iv| iv.midpoint()).collect();
        let jm: Vec<Vec<BigRational>> = jac
            .iter()
            .map(|row| row.iter().map(|e| e.eval_rational(&m)).collect())
            .collect();
        let Some(y) = invert_matrix(&jm) else {
            singular_strikes += 1;
            if singular_strikes >= 4 {
                return Err(AlgebraicError::SingularOnBox);
            }
            // contract toward the midpoint and retry
            x = x
                .iter()
                .map(|iv| {
                    let mid = iv.midpoint();
                    let q = BigRational::new(BigInt::one(), BigInt::from(4));
                    RatInterval::new(
                        &mid - &(iv.width() * &q),
                        &mid + &(iv.width() * &q),
                    )
                })
                .collect();
            continue;
        };
        let fm: Vec<BigRational> = system.iter().map(|f| f.eval_rational(&m)).collect();
        // K = m - Y f(m) + (I - Y J(X)) (X - m)
        let jx: Vec<Vec<RatInterval>> = jac
            .iter()
            .map(|row| row.iter().map(|e| eval_interval(e, &x)).collect())
            .collect();
        let mut k = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = RatInterval::point(&m[i]);
            let mut yf = BigRational::zero();
            for j in 0..n {
                yf += &y[i][j] * &fm[j];
            }
            acc = acc.sub(&RatInterval::point(&yf));
            for j in 0..n {
                // R_ij = delta_ij - sum_l y_il jx_lj
                let mut r = RatInterval::point(&if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                for l in 0..n {
                    r = r.sub(&jx[l][j].scale(&y[i][l]));
                }
                let xm = x[j].sub(&RatInterval::point(&m[j]));
                acc = acc.add(&r.mul(&xm));
            }
            k.push(acc);
        }
        let inside = k.iter().zip(&x).all(|(ki, xi)| ki.strictly_inside(xi));
        if inside {
            return Ok(true);
        }
        let mut intersected = Vec::with_capacity(n);
        let mut changed = false;
        for (ki, xi) in k.iter().zip(&x) {
            match ki.intersect(xi) {
                None => return Ok(false),
                Some(v) => {
                    if v != *xi {
                        changed = true;
                    }
                    intersected.push(v);
                }
            }
        }
        if !changed {
            return Ok(false);
        }
        x = intersected;
    }
    Ok(false)
}

fn invert_matrix(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| aug[i][col].abs().cmp(&aug[j][col].abs()))?;
        if aug[pivot][col].is_zero() {
            return None;
        }
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for c in 0..2 * n {
            aug[col][c] = &aug[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &aug[col][c];
                    aug[r][c] -= sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Radical expressions for degrees 1 and 2
// ---------------------------------------------------------------------------

/// Closed form (p + s*sqrt(q))/r; rational values collapse to p/r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadicalExpr {
    Rational(BigRational),
    Quadratic {
        p: BigInt,
        s: i8,
        q: BigInt,
        r: BigInt,
    },
}

impl fmt::Display for RadicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadicalExpr::Rational(v) => write!(f, "{v}"),
            RadicalExpr::Quadratic { p, s, q, r } => {
                write!(f, "({p} + {s}*sqrt({q}))/{r}")
            }
        }
    }
}

impl RadicalExpr {
    /// 64-bit decimal approximation (for rendering checks).
    pub fn approx_rational(&self) -> BigRational {
        match self {
            RadicalExpr::Rational(v) => v.clone(),
            RadicalExpr::Quadratic { p, s, q, r } => {
                let scale = BigInt::one() << 64u32;
                let scaled: BigInt = q * (&scale * &scale);
                let sq = scaled.sqrt();
                let num = p * &scale + BigInt::from(*s) * sq;
                BigRational::new(num, r * scale)
            }
        }
    }
}

fn largest_square_divisor(n: &BigInt) -> (BigInt, BigInt) {
    // n = t^2 * q0 with q0 square-free (within the trial bound)
    let mut t = BigInt::one();
    let mut rest = n.clone();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &d * &d <= rest && d <= limit {
        let dd = &d * &d;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            t *= &d;
        }
        d += 1;
    }
    (t, rest)
}

/// Exact radical expression selecting the root inside `a.interval`.
pub fn to_radicals(a: &AlgebraicNumber) -> Result<RadicalExpr, AlgebraicError> {
    if let Some(q) = a.as_rational() {
        return Ok(RadicalExpr::Rational(q));
    }
    if a.degree() != 2 {
        return Err(AlgebraicError::DegreeTooHigh);
    }
    let c = a.minpoly().coeff(0);
    let b = a.minpoly().coeff(1);
    let aa = a.minpoly().coeff(2);
    let disc = &b * &b - BigInt::from(4) * &aa * &c;
    debug_assert!(disc.is_positive());
    let (t, q0) = largest_square_divisor(&disc);
    // roots: (-b +- t*sqrt(q0)) / (2a)
    let mut p = -&b;
    let mut tt = t;
    let mut r = BigInt::from(2) * &aa;
    let g = p.gcd(&tt).gcd(&r);
    if !g.is_zero() && !g.is_one() {
        p /= &g;
        tt /= &g;
        r /= &g;
    }
    let q = &tt * &tt * q0;
    // select sign: root+ lies above the vertex -b/(2a)
    let vertex = BigRational::new(-b, BigInt::from(2) * aa);
    let mut s: i8 = match a.cmp_rational(&vertex) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => unreachable!("irrational root equals rational vertex"),
    };
    if r.is_negative() {
        p = -p;
        r = -r;
        s = -s;
    }
    Ok(RadicalExpr::Quadratic { p, s, q, r })
}

// ---------------------------------------------------------------------------
// Evaluation of integer polynomials at algebraic arguments
// ---------------------------------------------------------------------------

/// h(alpha) as an exact algebraic number, via the characteristic polynomial
/// of the multiplication-by-h map on Q[x]/(minpoly).
pub fn eval_unipoly_at(h: &UniPoly, a: &AlgebraicNumber) -> AlgebraicNumber {
    if let Some(q) = a.as_rational() {
        return AlgebraicNumber::from_rational(&h.eval_rational(&q));
    }
    let m = a.minpoly();
    let d = m.degree();
    // multiplication matrix: column j = h * x^j mod m
    let mut columns: Vec<Vec<BigRational>> = Vec::with_capacity(d);
    let mut cur = rational_rem(h, m); // h mod m
    for _ in 0..d {
        let mut col = vec![BigRational::zero(); d];
        for (i, c) in cur.iter().enumerate() {
            col[i] = c.clone();
        }
        columns.push(col);
        cur = rational_mul_x_mod(&cur, m);
    }
    // char poly by interpolation at y = 0..d
    let mut ys = Vec::with_capacity(d + 1);
    let mut vals = Vec::with_capacity(d + 1);
    for y in 0..=d as i64 {
        let yq = BigRational::from_integer(BigInt::from(y));
        let mut mat = vec![vec![BigRational::zero(); d]; d];
        for (j, col) in columns.iter().enumerate() {
            for i in 0..d {
                mat[i][j] = -col[i].clone();
            }
        }
        for i in 0..d {
            mat[i][i] += &yq;
        }
        ys.push(yq);
        vals.push(determinant(mat));
    }
    let char_coeffs = lagrange_interpolate(&ys, &vals);
    let mut den = BigInt::one();
    for c in &char_coeffs {
        den = den.lcm(c.denom());
    }
    let char_poly = UniPoly::new(
        char_coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect(),
    )
    .normalize();
    // the value's minimal polynomial is the factor with a root in h(interval)
    let factors = factor_over_q(&char_poly);
    let mut arg = a.clone();
    loop {
        let window = eval_unipoly_interval(h, &RatInterval::from_isolating(arg.interval()));
        let mut hits: Vec<(UniPoly, IsolatingInterval)> = Vec::new();
        for (g, _) in &factors {
            if g.degree() == 0 {
                continue;
            }
            for iv in g.isolate_real_roots().expect("irreducible factors are square-free") {
                let as_rat = RatInterval::from_isolating(&iv);
                if as_rat.intersect(&window).is_some() {
                    hits.push((g.clone(), iv));
                }
            }
        }
        if hits.len() == 1 {
            let (g, iv) = hits.pop().map(|x| x).unwrap();
            if g.degree() == 1 {
                return AlgebraicNumber::from_rational(&BigRational::new(-g.coeff(0), g.coeff(1)));
            }
            return AlgebraicNumber::new_unchecked(g, iv);
        }
        // narrow the window; also shrink the candidate root intervals by
        // refining through AlgebraicNumber when needed
        arg = arg.refine(32);
    }
}

fn eval_unipoly_interval(h: &UniPoly, x: &RatInterval) -> RatInterval {
    let mut acc = RatInterval::point(&BigRational::zero());
    for (i, c) in h.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = x.pow(i as u32).scale(&BigRational::from_integer(c.clone()));
        acc = acc.add(&term);
    }
    acc
}

fn rational_rem(h: &UniPoly, m: &UniPoly) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = h
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let d = m.degree();
    let lead = BigRational::from_integer(m.leading());
    while r.len() > d {
        let top = r.last().unwrap().clone();
        let k = r.len() - 1;
        let q = top / &lead;
        for (i, c) in m.coeffs().iter().enumerate() {
            let idx = k - d + i;
            let sub = &q * BigRational::from_integer(c.clone());
            r[idx] -= sub;
        }
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        if r.len() <= d {
            break;
        }
    }
    r.resize(d, BigRational::zero());
    r
}

fn rational_mul_x_mod(v: &[BigRational], m: &UniPoly) -> Vec<BigRational> {
    let d = m.degree();
    let mut shifted = vec![BigRational::zero(); v.len() + 1];
    for (i, c) in v.iter().enumerate() {
        shifted[i + 1] = c.clone();
    }
    let lead = BigRational::from_integer(m.leading());
    if shifted.len() > d {
        let top = shifted[d].clone();
        let q = top / &lead;
        for (i, c) in m.coeffs().iter().enumerate() {
            let sub = &q * BigRational::from_integer(c.clone());
            shifted[i] -= sub;
        }
    }
    shifted.truncate(d);
    shifted
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(pivot) = pivot else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

fn lagrange_interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let w = &ys[i] / denom;
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &w;
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sqrt2() -> AlgebraicNumber {
        let m = UniPoly::from_i64(&[-2, 0, 1]);
        let orbit = conjugates(&m).unwrap();
        orbit.roots[1].clone()
    }

    fn root_in_unit(minpoly: &UniPoly) -> AlgebraicNumber {
        conjugates(minpoly)
            .unwrap()
            .roots
            .into_iter()
            .find(|r| {
                r.cmp_rational(&q(0)) == Ordering::Greater
                    && r.cmp_rational(&q(1)) == Ordering::Less
            })
            .unwrap()
    }

    #[test]
    fn refine_keeps_the_root() {
        let a = sqrt2();
        let before = a.interval().width();
        let r = a.refine(10);
        assert!(r.interval().width() <= &before * &Dyadic::pow2(-10));
        assert_eq!(
            r.minpoly().sturm_count(&r.interval().lo, &r.interval().hi),
            Ok(1)
        );
        // appendix value stays inside after 30 bits
        let y = root_in_unit(&UniPoly::from_i64(&[-3, 8, 1]));
        let y = y.refine(30);
        let approx = qr(3588989435, 10_000_000_000);
        assert!(y.interval().contains_rational(&approx));
        // rational encoded as 2x-1 collapses around 1/2
        let half = AlgebraicNumber::from_rational(&qr(1, 2));
        let refined = half.refine(20);
        assert!(refined.interval().contains_rational(&qr(1, 2)));
        assert!(refined.interval().width() < Dyadic::pow2(-18));
    }

    #[test]
    fn conjugate_orbits() {
        let orbit = conjugates(&UniPoly::from_i64(&[-3, 8, 1])).unwrap();
        assert_eq!(orbit.roots.len(), 2);
        assert!(orbit.roots[0].cmp_rational(&q(-8)) == Ordering::Less);
        assert!(orbit.roots[1].cmp_rational(&q(0)) == Ordering::Greater);
        let o2 = conjugates(&UniPoly::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(o2.roots.len(), 2);
        let single = conjugates(&UniPoly::from_i64(&[-1, 2])).unwrap();
        assert_eq!(single.roots.len(), 1);
        assert_eq!(single.roots[0].as_rational(), Some(qr(1, 2)));
        assert!(matches!(
            conjugates(&UniPoly::from_i64(&[0, 3, -11, 7, 1])),
            Err(AlgebraicError::Reducible)
        ));
    }

    #[test]
    fn sign_at_examples() {
        let a = sqrt2();
        // x^2 - 2 at sqrt2 -> zero
        let p = MultiPoly::from_unipoly(&UniPoly::from_i64(&[-2, 0, 1]), 1, 0);
        assert_eq!(sign_at(std::slice::from_ref(&a), &p), Sign::Zero);
        // x - 1 at sqrt2 -> positive
        let p2 = MultiPoly::from_unipoly(&UniPoly::from_i64(&[-1, 1]), 1, 0);
        assert_eq!(sign_at(std::slice::from_ref(&a), &p2), Sign::Positive);
        // x - 2 at sqrt2 -> negative
        let p3 = MultiPoly::from_unipoly(&UniPoly::from_i64(&[-2, 1]), 1, 0);
        assert_eq!(sign_at(std::slice::from_ref(&a), &p3), Sign::Negative);
        // x0 - x1 at (sqrt2, sqrt2): zero via two coordinates
        let diff = MultiPoly::var(2, 0).sub(&MultiPoly::var(2, 1));
        assert_eq!(sign_at(&[a.clone(), a.clone()], &diff), Sign::Zero);
        // x0*x1 - 2 at (sqrt2, sqrt2) -> zero; at (sqrt2, 1) -> negative
        let prod = MultiPoly::var(2, 0)
            .mul(&MultiPoly::var(2, 1))
            .sub(&MultiPoly::from_int(2, 2));
        assert_eq!(sign_at(&[a.clone(), a.clone()], &prod), Sign::Zero);
        assert_eq!(
            sign_at(&[a.clone(), AlgebraicNumber::from_int(1)], &prod),
            Sign::Negative
        );
    }

    #[test]
    fn ordering_and_equality() {
        let s2 = sqrt2();
        let neg = conjugates(&UniPoly::from_i64(&[-2, 0, 1])).unwrap().roots[0].clone();
        assert!(neg < s2);
        assert_eq!(s2, s2.refine(40));
        let s3 = conjugates(&UniPoly::from_i64(&[-3, 0, 1])).unwrap().roots[1].clone();
        assert!(s2 < s3);
        assert_ne!(s2, s3);
        assert_eq!(s2.cmp_rational(&qr(3, 2)), Ordering::Less);
        assert_eq!(s2.cmp_rational(&qr(7, 5)), Ordering::Greater);
    }

    #[test]
    fn affine_images() {
        let s2 = sqrt2();
        let one_minus = s2.one_minus(); // 1 - sqrt2 ~ -0.414
        assert_eq!(one_minus.minpoly(), &UniPoly::from_i64(&[-1, -2, 1]));
        assert!(one_minus.cmp_rational(&q(0)) == Ordering::Less);
        let x = root_in_unit(&UniPoly::from_i64(&[9, -16, 5]));
        // y = 4 - 5x has minpoly y^2 + 8y - 3
        let y = x.affine_image(&q(-5), &q(4));
        assert_eq!(y.minpoly(), &UniPoly::from_i64(&[-3, 8, 1]));
        assert!(y.cmp_rational(&q(0)) == Ordering::Greater);
    }

    #[test]
    fn radicals() {
        let x = root_in_unit(&UniPoly::from_i64(&[9, -16, 5]));
        let r = to_radicals(&x).unwrap();
        assert_eq!(
            r,
            RadicalExpr::Quadratic {
                p: BigInt::from(8),
                s: -1,
                q: BigInt::from(19),
                r: BigInt::from(5),
            }
        );
        assert_eq!(r.to_string(), "(8 + -1*sqrt(19))/5");
        let y = root_in_unit(&UniPoly::from_i64(&[-3, 8, 1]));
        let ry = to_radicals(&y).unwrap();
        assert_eq!(
            ry,
            RadicalExpr::Quadratic {
                p: BigInt::from(-4),
                s: 1,
                q: BigInt::from(19),
                r: BigInt::from(1),
            }
        );
        let half = AlgebraicNumber::from_rational(&qr(1, 2));
        assert_eq!(to_radicals(&half).unwrap(), RadicalExpr::Rational(qr(1, 2)));
        // numeric approximation falls inside the isolating interval
        let approx = r.approx_rational();
        assert!(x.interval().contains_rational(&approx) || {
            let refed = x.refine(10);
            refed.interval().contains_rational(&approx)
        });
    }

    #[test]
    fn certify_scalar_boxes() {
        let sys = vec![MultiPoly::from_unipoly(&UniPoly::from_i64(&[-2, 0, 1]), 1, 0)];
        let good = CandidateBox {
            coords: vec![IsolatingInterval {
                lo: Dyadic::new(BigInt::from(5), -2),  // 1.25
                hi: Dyadic::new(BigInt::from(3), -1),  // 1.5
            }],
        };
        assert_eq!(certify_box(&sys, &good), Ok(true));
        let bad = CandidateBox {
            coords: vec![IsolatingInterval {
                lo: Dyadic::new(BigInt::from(1), -3),   // 0.125... no root inside
                hi: Dyadic::new(BigInt::from(1), -2),
            }],
        };
        assert_eq!(certify_box(&sys, &bad), Ok(false));
    }

    #[test]
    fn certify_2d_box() {
        // x + y - 1 = 0, x - y = 0 at (1/2, 1/2)
        let sys = vec![
            MultiPoly::from_terms(
                2,
                vec![
                    (vec![1, 0], q(1)),
                    (vec![0, 1], q(1)),
                    (vec![0, 0], q(-1)),
                ],
            ),
            MultiPoly::from_terms(2, vec![(vec![1, 0], q(1)), (vec![0, 1], q(-1))]),
        ];
        let near_half = IsolatingInterval {
            lo: Dyadic::new(BigInt::from(3), -3), // 0.375
            hi: Dyadic::new(BigInt::from(5), -3), // 0.625
        };
        let b = CandidateBox {
            coords: vec![near_half.clone(), near_half],
        };
        assert_eq!(certify_box(&sys, &b), Ok(true));
    }

    #[test]
    fn eval_poly_at_algebraic() {
        let s2 = sqrt2();
        // h = x^2 -> 2
        let two = eval_unipoly_at(&UniPoly::from_i64(&[0, 0, 1]), &s2);
        assert_eq!(two.as_rational(), Some(q(2)));
        // h = x^3 - x = x(x^2 - 1) -> sqrt2
        let h = UniPoly::from_i64(&[0, -1, 0, 1]);
        let v = eval_unipoly_at(&h, &s2);
        assert_eq!(v.minpoly(), &UniPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(v, s2);
        // rational argument
        let r = eval_unipoly_at(&h, &AlgebraicNumber::from_rational(&qr(1, 2)));
        assert_eq!(r.as_rational(), Some(qr(-3, 8)));
    }

    #[test]
    fn sign_consistency_under_refinement() {
        let y = root_in_unit(&UniPoly::from_i64(&[-3, 8, 1]));
        let p = MultiPoly::from_unipoly(&UniPoly::from_i64(&[-1, 3]), 1, 0); // 3y - 1
        let s1 = sign_at(std::slice::from_ref(&y), &p);
        let s2 = sign_at(&[y.refine(64)], &p);
        assert_eq!(s1, s2);
        assert_eq!(s1, Sign::Positive); // y ~ 0.3589 > 1/3
    }
}
