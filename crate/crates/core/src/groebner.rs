//! Multivariate division, S-polynomials and Buchberger's algorithm with
//! lexicographic orders, plus elimination to univariate polynomials and
//! triangular substitution.

use crate::multipoly::{Monomial, MonomialOrder, MultiPoly};
use crate::unipoly::UniPoly;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("variable count mismatch")]
    VariableMismatch,
    #[error("no univariate polynomial in the requested variable; the ideal is positive-dimensional there")]
    NoUnivariate,
    #[error("value is not a root of the basis univariate")]
    NotARoot,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub generators: Vec<MultiPoly>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

fn monomial_divides(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn monomial_div(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn monomial_lcm(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn monomials_coprime(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Division with remainder by an ordered list of divisors: f = sum q_i d_i + r
/// with no monomial of r divisible by any divisor's leading monomial.
pub fn multivariate_divide(
    f: &MultiPoly,
    divisors: &[MultiPoly],
    order: &MonomialOrder,
) -> Result<(Vec<MultiPoly>, MultiPoly), GroebnerError> {
    let n = f.num_vars();
    if divisors.iter().any(|d| d.num_vars() != n) || order.num_vars() != n {
        return Err(GroebnerError::VariableMismatch);
    }
    assert!(divisors.iter().all(|d| !d.is_zero()), "divisors must be nonzero");
    let leads: Vec<(Monomial, BigRational)> = divisors
        .iter()
        .map(|d| {
            let (m, c) = d.leading_term(order).expect("nonzero divisor");
            (m.clone(), c.clone())
        })
        .collect();
    let mut quotients = vec![MultiPoly::zero(n); divisors.len()];
    let mut remainder = MultiPoly::zero(n);
    let mut work = f.clone();
    while let Some((lm, lc)) = work.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        let mut divided = false;
        for (i, (dm, dc)) in leads.iter().enumerate() {
            if monomial_divides(dm, &lm) {
                let qm = monomial_div(&lm, dm);
                let qc = &lc / dc;
                let t = MultiPoly::from_terms(n, vec![(qm, qc)]);
                quotients[i] = quotients[i].add(&t);
                work = work.sub(&t.mul(&divisors[i]));
                divided = true;
                break;
            }
        }
        if !divided {
            let t = MultiPoly::from_terms(n, vec![(lm, lc)]);
            remainder = remainder.add(&t);
            work = work.sub(&t);
        }
    }
    Ok((quotients, remainder))
}

/// S(f, g) = lcm/lt(f) * f - lcm/lt(g) * g.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly, order: &MonomialOrder) -> MultiPoly {
    assert!(!f.is_zero() && !g.is_zero());
    let (mf, cf) = f.leading_term(order).unwrap();
    let (mg, cg) = g.leading_term(order).unwrap();
    let l = monomial_lcm(mf, mg);
    let tf = (monomial_div(&l, mf), cf.recip());
    let tg = (monomial_div(&l, mg), cg.recip());
    f.mul_term(&tf.0, &tf.1).sub(&g.mul_term(&tg.0, &tg.1))
}

/// Buchberger's algorithm with first-criterion (coprime leads) and chain
/// pruning; returns the reduced basis with monic generators.
pub fn buchberger(gens: &[MultiPoly], order: &MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    let nonzero: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    assert!(!nonzero.is_empty(), "buchberger needs at least one nonzero generator");
    let n = nonzero[0].num_vars();
    if nonzero.iter().any(|g| g.num_vars() != n) || order.num_vars() != n {
        return Err(GroebnerError::VariableMismatch);
    }
    let mut basis = nonzero;
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push_back((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop_front() {
        let (mi, _) = basis[i].leading_term(order).unwrap();
        let (mj, _) = basis[j].leading_term(order).unwrap();
        if monomials_coprime(mi, mj) {
            continue;
        }
        let lcm_ij = monomial_lcm(mi, mj);
        // chain criterion: some k with lead(k) | lcm(i,j) and both (i,k),(k,j) handled
        let mut chained = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let (mk, _) = g.leading_term(order).unwrap();
            if monomial_divides(mk, &lcm_ij)
                && !pairs.contains(&key(i, k))
                && !pairs.contains(&key(k, j))
            {
                chained = true;
                break;
            }
        }
        if chained {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let (_, r) = multivariate_divide(&s, &basis, order)?;
        if !r.is_zero() {
            let idx = basis.len();
            basis.push(r);
            for t in 0..idx {
                pairs.push_back((t, idx));
            }
        }
    }
    Ok(GroebnerBasis {
        generators: reduce_basis(basis, order),
        order: order.clone(),
        reduced: true,
    })
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Minimal + inter-reduced + monic.
fn reduce_basis(mut basis: Vec<MultiPoly>, order: &MonomialOrder) -> Vec<MultiPoly> {
    // minimal: drop generators whose lead is divisible by another lead
    loop {
        let mut removed = false;
        'outer: for i in 0..basis.len() {
            let (mi, _) = basis[i].leading_term(order).unwrap();
            let mi = mi.clone();
            for (j, g) in basis.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (mj, _) = g.leading_term(order).unwrap();
                if monomial_divides(mj, &mi) {
                    basis.remove(i);
                    removed = true;
                    break 'outer;
                }
            }
        }
        if !removed {
            break;
        }
    }
    // inter-reduce tails
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            let others: Vec<MultiPoly> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            if others.is_empty() {
                break;
            }
            let (_, r) = multivariate_divide(&basis[i], &others, order).expect("arity ok");
            if r != basis[i] {
                changed = true;
                if r.is_zero() {
                    basis.remove(i);
                    break;
                }
                basis[i] = r;
            }
        }
    }
    // monic, deterministic order
    let mut out: Vec<MultiPoly> = basis
        .into_iter()
        .map(|g| {
            let (_, c) = g.leading_term(order).unwrap();
            let c = c.clone();
            g.scale(&c.recip())
        })
        .collect();
    out.sort_by(|a, b| {
        let (ma, _) = a.leading_term(order).unwrap();
        let (mb, _) = b.leading_term(order).unwrap();
        order.cmp_monomials(ma, mb)
    });
    out
}

impl GroebnerBasis {
    /// Every S-polynomial of generator pairs reduces to zero.
    pub fn is_groebner(&self) -> bool {
        for i in 0..self.generators.len() {
            for j in (i + 1)..self.generators.len() {
                let s = s_polynomial(&self.generators[i], &self.generators[j], &self.order);
                let (_, r) = multivariate_divide(&s, &self.generators, &self.order).unwrap();
                if !r.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let (_, r) = multivariate_divide(f, &self.generators, &self.order).expect("arity ok");
        r
    }

    pub fn contains_in_ideal(&self, f: &MultiPoly) -> bool {
        self.reduce(f).is_zero()
    }
}

/// The unique generator involving only `variable`, cleared to primitive
/// integer form with positive leading coefficient. Degree-zero (constant)
/// generators signal an inconsistent system and are returned as the unit
/// polynomial.
pub fn eliminate_to_univariate(
    basis: &GroebnerBasis,
    variable: usize,
) -> Result<UniPoly, GroebnerError> {
    let mut found: Option<UniPoly> = None;
    for g in &basis.generators {
        if g.is_constant() && !g.is_zero() {
            return Ok(UniPoly::one());
        }
        if let Some(u) = g.to_unipoly_in(variable) {
            if u.degree() >= 1 {
                match &found {
                    None => found = Some(u),
                    Some(prev) => {
                        // reduced basis: keep the lower-degree one (divides the other)
                        if u.degree() < prev.degree() {
                            found = Some(u);
                        }
                    }
                }
            }
        }
    }
    found.ok_or(GroebnerError::NoUnivariate)
}

/// Substitutes `variable := value` into every generator; `value` must be a
/// root of the basis univariate in `variable`. Returns the bound system
/// (nonzero substituted generators), recursively solvable.
pub fn triangular_substitute(
    basis: &GroebnerBasis,
    variable: usize,
    value: &BigRational,
) -> Result<Vec<MultiPoly>, GroebnerError> {
    let uni = eliminate_to_univariate(basis, variable)?;
    if !uni
        .eval_rational(value)
        .is_zero()
    {
        return Err(GroebnerError::NotARoot);
    }
    Ok(basis
        .generators
        .iter()
        .map(|g| g.substitute_rational(variable, value))
        .filter(|g| !g.is_zero())
        .collect())
}
