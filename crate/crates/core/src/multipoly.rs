//! Sparse multivariate polynomials over Q with lexicographic monomial orders.
//!
//! Terms live in a BTreeMap from exponent vector to nonzero coefficient, so
//! structural equality is polynomial equality and printing is deterministic.

use crate::unipoly::UniPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

/// Lexicographic order given by a variable permutation, most significant
/// variable first. The univariate survivor of an elimination is the last
/// entry (the lowest variable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    perm: Vec<usize>,
}

impl MonomialOrder {
    pub fn lex(perm: Vec<usize>) -> Self {
        let mut seen = vec![false; perm.len()];
        for &v in &perm {
            assert!(v < perm.len() && !seen[v], "permutation must be a bijection");
            seen[v] = true;
        }
        MonomialOrder { perm }
    }

    /// Lex order with `lowest` last and the remaining variables in index
    /// order above it.
    pub fn lex_with_lowest(lowest: usize, num_vars: usize) -> Self {
        let mut perm: Vec<usize> = (0..num_vars).filter(|&v| v != lowest).collect();
        perm.push(lowest);
        MonomialOrder { perm }
    }

    pub fn num_vars(&self) -> usize {
        self.perm.len()
    }

    pub fn lowest(&self) -> usize {
        *self.perm.last().expect("nonempty order")
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        for &v in &self.perm {
            match a[v].cmp(&b[v]) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    pub fn from_int(num_vars: usize, c: i64) -> Self {
        MultiPoly::constant(num_vars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn one(num_vars: usize) -> Self {
        MultiPoly::from_int(num_vars, 1)
    }

    pub fn var(num_vars: usize, v: usize) -> Self {
        assert!(v < num_vars);
        let mut m = vec![0; num_vars];
        m[v] = 1;
        let mut p = MultiPoly::zero(num_vars);
        p.terms.insert(m, BigRational::one());
        p
    }

    pub fn from_terms(num_vars: usize, terms: Vec<(Monomial, BigRational)>) -> Self {
        let mut p = MultiPoly::zero(num_vars);
        for (m, c) in terms {
            assert_eq!(m.len(), num_vars);
            p.add_term(m, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = MultiPoly::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(mm, k)| {
                    (
                        mm.iter().zip(m).map(|(a, b)| a + b).collect(),
                        k * c,
                    )
                })
                .collect(),
        }
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &BigRational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp_monomials(a, b))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    /// Variables that occur with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_vars).filter(|&v| self.uses_var(v)).collect()
    }

    pub fn derivative(&self, v: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.num_vars);
        for (m, c) in &self.terms {
            if m[v] == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm[v] -= 1;
            out.add_term(mm, c * BigRational::from_integer(BigInt::from(m[v])));
        }
        out
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.num_vars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[v];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes variable `v` by polynomial `sub` (same variable space).
    pub fn substitute(&self, v: usize, sub: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, sub.num_vars);
        let mut out = MultiPoly::zero(self.num_vars);
        // group by exponent of v
        let mut by_exp: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m[v];
            let mut mm = m.clone();
            mm[v] = 0;
            by_exp
                .entry(e)
                .or_insert_with(|| MultiPoly::zero(self.num_vars))
                .add_term(mm, c.clone());
        }
        let mut pow = MultiPoly::one(self.num_vars);
        let mut cur_e = 0u32;
        for (e, part) in by_exp {
            while cur_e < e {
                pow = pow.mul(sub);
                cur_e += 1;
            }
            out = out.add(&part.mul(&pow));
        }
        out
    }

    /// Substitutes variable `v` by an exact rational.
    pub fn substitute_rational(&self, v: usize, value: &BigRational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.num_vars);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m[v] {
                t *= value;
            }
            let mut mm = m.clone();
            mm[v] = 0;
            out.add_term(mm, t);
        }
        out
    }

    /// Smallest positive integer multiplier clearing all denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        l
    }

    /// Integer-cleared copy: self * denominator_lcm, divided by the content.
    pub fn primitive_integer_form(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.denominator_lcm();
        let mut content = BigInt::zero();
        let scaled: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.numer() * (&l / c.denom())))
            .collect();
        for (_, c) in &scaled {
            content = content.gcd(c);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: scaled
                .into_iter()
                .map(|(m, c)| (m, BigRational::from_integer(c / &content)))
                .collect(),
        }
    }

    /// Height (max |coefficient|) of the integer-cleared form.
    pub fn integer_height(&self) -> BigInt {
        let l = self.denominator_lcm();
        self.terms
            .values()
            .map(|c| (c.numer() * (&l / c.denom())).abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// One-norm of the integer-cleared form.
    pub fn integer_one_norm(&self) -> BigInt {
        let l = self.denominator_lcm();
        self.terms
            .values()
            .map(|c| (c.numer() * (&l / c.denom())).abs())
            .sum()
    }

    /// Extracts the coefficients as a univariate polynomial when the support
    /// involves at most the single variable `v`; integer-cleared, normalized.
    pub fn to_unipoly_in(&self, v: usize) -> Option<UniPoly> {
        for m in self.terms.keys() {
            for (w, &e) in m.iter().enumerate() {
                if w != v && e > 0 {
                    return None;
                }
            }
        }
        let l = self.denominator_lcm();
        let deg = self.degree_in(v) as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m[v] as usize] = c.numer() * (&l / c.denom());
        }
        Some(UniPoly::new(coeffs).normalize())
    }

    /// Embeds a univariate polynomial as a multivariate one in variable `v`.
    pub fn from_unipoly(p: &UniPoly, num_vars: usize, v: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(num_vars);
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut m = vec![0; num_vars];
            m[v] = i as u32;
            out.add_term(m, BigRational::from_integer(c.clone()));
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // deterministic: descending in the default lex order
        let order = MonomialOrder::lex((0..self.num_vars).collect());
        let mut terms: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| order.cmp_monomials(b, a));
        let mut first = true;
        for (m, c) in terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const_mon = m.iter().all(|&e| e == 0);
            if !mag.is_one() || is_const_mon {
                write!(f, "{mag}")?;
                if !is_const_mon {
                    write!(f, "*")?;
                }
            }
            let mut sep = false;
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if sep {
                    write!(f, "*")?;
                }
                sep = true;
                if e == 1 {
                    write!(f, "x{v}")?;
                } else {
                    write!(f, "x{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
