//! Univariate factorization over Q: square-free decomposition (Yun), modular
//! factorization (Berlekamp over a small prime), Hensel lifting and
//! Zassenhaus recombination.

use crate::unipoly::UniPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Irreducible factors of `p` over Q with multiplicities. Each factor is
/// primitive with positive leading coefficient; the product of the factors
/// (with multiplicity) times a rational constant reproduces `p`.
pub fn factor_over_q(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    assert!(!p.is_zero() && p.degree() >= 1, "factor_over_q needs a nonconstant input");
    let mut out: Vec<(UniPoly, usize)> = Vec::new();
    for (sf, mult) in yun_squarefree_decomposition(&p.normalize()) {
        for f in factor_squarefree(&sf) {
            merge(&mut out, f, mult);
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    out
}

pub fn is_irreducible(p: &UniPoly) -> bool {
    if p.is_zero() || p.degree() == 0 {
        return false;
    }
    let f = factor_over_q(p);
    f.len() == 1 && f[0].1 == 1 && f[0].0.degree() == p.degree()
}

fn merge(out: &mut Vec<(UniPoly, usize)>, f: UniPoly, mult: usize) {
    for (g, m) in out.iter_mut() {
        if *g == f {
            *m += mult;
            return;
        }
    }
    out.push((f, mult));
}

/// Yun's algorithm: p = prod_i a_i^i with each a_i square-free, pairwise
/// coprime. Returns the nontrivial (a_i, i).
fn yun_squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let g = p.gcd_poly(&dp);
    if g.degree() == 0 {
        out.push((p.normalize(), 1));
        return out;
    }
    let mut w = p.div_exact(&g).expect("gcd divides p").normalize();
    let mut y = dp.div_exact(&g).expect("gcd divides p'");
    let mut i = 1;
    loop {
        // z = y - w'
        let z = y.sub(&w.derivative());
        if z.is_zero() {
            if w.degree() >= 1 {
                out.push((w.normalize(), i));
            }
            break;
        }
        let a = w.gcd_poly(&z);
        if a.degree() >= 1 {
            out.push((a.clone(), i));
        }
        w = w.div_exact(&a).expect("a divides w").normalize();
        y = z.div_exact(&a).expect("a divides z");
        i += 1;
        if w.degree() == 0 {
            break;
        }
    }
    out
}

/// Factors a primitive square-free polynomial into irreducibles.
fn factor_squarefree(f: &UniPoly) -> Vec<UniPoly> {
    let f = f.normalize();
    if f.degree() <= 1 {
        return vec![f];
    }
    // Pull out rational roots first; cheap and it keeps the modular step small.
    let mut rest = f.clone();
    let mut out = Vec::new();
    for r in rest.clone().rational_roots() {
        let lin = UniPoly::linear_from_root(&r);
        while let Some(q) = rest.div_exact(&lin) {
            out.push(lin.normalize());
            rest = q.normalize();
            break; // square-free: each root once
        }
    }
    if rest.degree() == 0 {
        return out;
    }
    if rest.degree() <= 3 {
        // no rational root and degree <= 3 means irreducible
        out.push(rest.normalize());
        return out;
    }
    out.extend(zassenhaus(&rest));
    out
}

const SMALL_PRIMES: [u32; 20] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
];

fn zassenhaus(f: &UniPoly) -> Vec<UniPoly> {
    let n = f.degree();
    let lc = f.leading();
    // choose a prime where f stays square-free and lc is a unit; among a few
    // candidates prefer the one with fewest modular factors
    let mut best: Option<(u32, Vec<Vec<i64>>)> = None;
    let mut tried = 0;
    for &p in &SMALL_PRIMES {
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p as i64);
        let dfp = modp::derivative(&fp, p as i64);
        if modp::gcd(&fp, &dfp, p as i64).len() != 1 {
            continue; // not square-free mod p
        }
        let monic = modp::make_monic(&fp, p as i64);
        let factors = berlekamp(&monic, p as i64);
        let better = match &best {
            None => true,
            Some((_, cur)) => factors.len() < cur.len(),
        };
        if better {
            best = Some((p, factors));
        }
        tried += 1;
        if tried >= 3 {
            break;
        }
    }
    let (p, mod_factors) = best.expect("found a usable prime");
    if mod_factors.len() == 1 {
        return vec![f.normalize()];
    }

    // Landau-Mignotte style bound on factor coefficients, doubled for the
    // leading-coefficient correction.
    let norm2_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + 1;
    let bound: BigInt = (BigInt::one() << (n as u32 + 1)) * norm2 * lc.abs();
    let mut pk = BigInt::from(p);
    let mut k = 1u32;
    while pk <= &bound * 2 {
        pk *= BigInt::from(p);
        k += 1;
    }

    let lifted = hensel_lift_tree(f, &mod_factors, p as i64, k);
    recombine(f, lifted, &pk)
}

fn reduce_mod_p(f: &UniPoly, p: i64) -> Vec<i64> {
    let pb = BigInt::from(p);
    let mut out: Vec<i64> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pb);
            i64::try_from(&r).unwrap()
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Arithmetic on dense polynomials over F_p (coefficients in [0, p)).
mod modp {
    pub fn trim(mut a: Vec<i64>) -> Vec<i64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv(a: i64, p: i64) -> i64 {
        // extended euclid
        let (mut t, mut newt) = (0i64, 1i64);
        let (mut r, mut newr) = (p, a.rem_euclid(p));
        while newr != 0 {
            let q = r / newr;
            (t, newt) = (newt, t - q * newt);
            (r, newr) = (newr, r - q * newr);
        }
        assert!(r == 1, "not invertible");
        t.rem_euclid(p)
    }

    pub fn make_monic(a: &[i64], p: i64) -> Vec<i64> {
        if a.is_empty() {
            return vec![];
        }
        let inv_lc = inv(*a.last().unwrap(), p);
        a.iter().map(|&c| (c * inv_lc).rem_euclid(p)).collect()
    }

    pub fn add(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
        let n = a.len().max(b.len());
        let mut out = vec![0i64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
            out[i] = x.rem_euclid(p);
        }
        trim(out)
    }

    pub fn sub(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
        let n = a.len().max(b.len());
        let mut out = vec![0i64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0) - b.get(i).copied().unwrap_or(0);
            out[i] = x.rem_euclid(p);
        }
        trim(out)
    }

    pub fn mul(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y).rem_euclid(p);
            }
        }
        trim(out)
    }

    pub fn rem(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
        assert!(!b.is_empty());
        let mut r = a.to_vec();
        let inv_lc = inv(*b.last().unwrap(), p);
        while r.len() >= b.len() {
            let coef = (*r.last().unwrap() * inv_lc).rem_euclid(p);
            let shift = r.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] - coef * bc).rem_euclid(p);
            }
            r = trim(r);
            if r.len() < b.len() {
                break;
            }
        }
        trim(r)
    }

    pub fn derivative(a: &[i64], p: i64) -> Vec<i64> {
        if a.len() <= 1 {
            return vec![];
        }
        trim(
            a[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| (c * ((i as i64 + 1) % p)).rem_euclid(p))
                .collect(),
        )
    }

    pub fn gcd(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            make_monic(&a, p)
        }
    }

    /// x^e mod (f, p) by square and multiply.
    pub fn pow_x_mod(e: u64, f: &[i64], p: i64) -> Vec<i64> {
        let mut result = vec![1i64];
        let mut base = rem(&[0, 1], f, p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &base, p), f, p);
            }
            base = rem(&mul(&base, &base, p), f, p);
            e >>= 1;
        }
        result
    }
}

/// Berlekamp factorization of a monic square-free polynomial over F_p.
/// Deterministic: splits with gcd(f, v - s) over all s in F_p.
fn berlekamp(f: &[i64], p: i64) -> Vec<Vec<i64>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Q[i] = x^(i*p) mod f, as columns of the Frobenius matrix.
    let xp = modp::pow_x_mod(p as u64, f, p);
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut cur = vec![1i64];
    for _ in 0..n {
        let mut row = vec![0i64; n];
        for (j, &c) in cur.iter().enumerate() {
            row[j] = c;
        }
        rows.push(row);
        cur = modp::rem(&modp::mul(&cur, &xp, p), f, p);
    }
    // nullspace of (Q - I)^T ... we work with vectors v with v*Q = v i.e.
    // rows here are x^(ip) expressed in the monomial basis; we need the
    // kernel of (M - I) where M[i][j] = coeff of x^j in x^(ip).
    let mut m: Vec<Vec<i64>> = rows;
    for i in 0..n {
        m[i][i] = (m[i][i] - 1).rem_euclid(p);
    }
    let basis = left_nullspace_mod_p(&m, n, p);
    let r = basis.len();
    if r == 1 {
        return vec![f.to_vec()];
    }
    let mut factors: Vec<Vec<i64>> = vec![f.to_vec()];
    for v in &basis {
        if factors.len() == r {
            break;
        }
        let vp = modp::trim(v.clone());
        if vp.len() <= 1 {
            continue; // constant vector splits nothing
        }
        let mut next: Vec<Vec<i64>> = Vec::new();
        for u in &factors {
            if u.len() <= 2 {
                next.push(u.clone());
                continue;
            }
            let mut remaining = u.clone();
            for s in 0..p {
                if remaining.len() <= 1 {
                    break;
                }
                let shifted = modp::sub(&vp, &[s], p);
                let g = modp::gcd(&remaining, &shifted, p);
                if g.len() > 1 && g.len() < remaining.len() {
                    next.push(g.clone());
                    remaining = modp_div_exact(&remaining, &g, p);
                }
            }
            if remaining.len() > 1 {
                next.push(remaining);
            }
        }
        factors = next.into_iter().map(|f| modp::make_monic(&f, p)).collect();
    }
    factors
}

/// Basis of { v : v*M = 0 } over F_p.
fn left_nullspace_mod_p(m: &[Vec<i64>], n: usize, p: i64) -> Vec<Vec<i64>> {
    // transpose, then right kernel by gaussian elimination
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[j][i] = m[i][j].rem_euclid(p);
        }
    }
    let mut pivot_of_col = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let mut sel = None;
        for r in row..n {
            if a[r][col] != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        a.swap(row, sel);
        let inv = modp::inv(a[row][col], p);
        for c in 0..n {
            a[row][c] = (a[row][c] * inv).rem_euclid(p);
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let factor = a[r][col];
                for c in 0..n {
                    a[r][c] = (a[r][c] - factor * a[row][c]).rem_euclid(p);
                }
            }
        }
        pivot_of_col[col] = row;
        row += 1;
        if row == n {
            break;
        }
    }
    let mut basis = Vec::new();
    for col in 0..n {
        if pivot_of_col[col] != usize::MAX {
            continue;
        }
        let mut v = vec![0i64; n];
        v[col] = 1;
        for c in 0..n {
            let pr = pivot_of_col[c];
            if pr != usize::MAX {
                v[c] = (-a[pr][col]).rem_euclid(p);
            }
        }
        basis.push(v);
    }
    basis
}

fn modp_div_exact(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    // long division, remainder must be zero
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - b.len() + 1];
    let inv_lc = modp::inv(*b.last().unwrap(), p);
    while r.len() >= b.len() {
        let coef = (*r.last().unwrap() * inv_lc).rem_euclid(p);
        let shift = r.len() - b.len();
        q[shift] = coef;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] - coef * bc).rem_euclid(p);
        }
        r = modp::trim(r);
        if r.is_empty() {
            break;
        }
    }
    assert!(r.is_empty(), "division not exact");
    modp::trim(q)
}

/// Multifactor Hensel lifting via a factor tree: lifts the monic modular
/// factorization of f/lc(f) from p to p^k. Returns monic factors mod p^k.
fn hensel_lift_tree(f: &UniPoly, factors: &[Vec<i64>], p: i64, k: u32) -> Vec<Vec<BigInt>> {
    let pk = BigInt::from(p).pow(k);
    let lc_inv = mod_inverse(&f.leading(), &pk);
    let f_monic: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * &lc_inv).mod_floor(&pk))
        .collect();
    let mut result = Vec::new();
    lift_rec(&f_monic, factors, p, k, &mut result);
    result
}

fn lift_rec(fm: &[BigInt], factors: &[Vec<i64>], p: i64, k: u32, out: &mut Vec<Vec<BigInt>>) {
    if factors.len() == 1 {
        out.push(fm.to_vec());
        return;
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let g0 = product_mod_p(left, p);
    let h0 = product_mod_p(right, p);
    let (g, h) = hensel_lift_pair(fm, &g0, &h0, p, k);
    lift_rec(&g, left, p, k, out);
    lift_rec(&h, right, p, k, out);
}

fn product_mod_p(fs: &[Vec<i64>], p: i64) -> Vec<i64> {
    let mut acc = vec![1i64];
    for f in fs {
        acc = modp::mul(&acc, f, p);
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible mod m");
    e.x.mod_floor(m)
}

/// Linear Hensel lifting for a monic pair: fm = g*h (mod p), all monic,
/// lifted to fm = G*H (mod p^k). Corrections are computed mod p only.
fn hensel_lift_pair(
    fm: &[BigInt],
    g0: &[i64],
    h0: &[i64],
    p: i64,
    k: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let pb = BigInt::from(p);
    let (s, t) = bezout_mod_p(g0, h0, p);
    let mut g: Vec<BigInt> = g0.iter().map(|&c| BigInt::from(c)).collect();
    let mut h: Vec<BigInt> = h0.iter().map(|&c| BigInt::from(c)).collect();
    let mut pj = pb.clone();
    for _ in 1..k {
        // e = (fm - g*h) / p^j, reduced mod p
        let gh = bigint_mul(&g, &h);
        let e_int = bigint_sub(fm, &gh);
        let ebar: Vec<i64> = e_int
            .iter()
            .map(|c| {
                let (q, r) = c.div_mod_floor(&pj);
                debug_assert!(r.is_zero(), "lift invariant broken");
                let _ = r;
                i64::try_from(&q.mod_floor(&pb)).unwrap()
            })
            .collect();
        let ebar = modp::trim(ebar);
        // dg = t*e rem g0, dh = s*e + quo(t*e, g0)*h0  (all mod p)
        let te = modp::mul(&t, &ebar, p);
        let (q, dg) = modp_divmod(&te, g0, p);
        let se = modp::mul(&s, &ebar, p);
        let dh = modp::add(&se, &modp::mul(&q, h0, p), p);
        debug_assert!(dh.len() < h0.len());
        for (i, &c) in dg.iter().enumerate() {
            g[i] += &pj * BigInt::from(c);
        }
        for (i, &c) in dh.iter().enumerate() {
            h[i] += &pj * BigInt::from(c);
        }
        pj *= &pb;
        let next = &pj;
        for c in g.iter_mut().chain(h.iter_mut()) {
            *c = c.mod_floor(next);
        }
    }
    (g, h)
}

fn bezout_mod_p(g: &[i64], h: &[i64], p: i64) -> (Vec<i64>, Vec<i64>) {
    // extended euclid over F_p: s*g + t*h = 1
    let (mut r0, mut r1) = (g.to_vec(), h.to_vec());
    let (mut s0, mut s1) = (vec![1i64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1i64]);
    while !r1.is_empty() {
        let (q, r) = modp_divmod(&r0, &r1, p);
        let news = modp::sub(&s0, &modp::mul(&q, &s1, p), p);
        let newt = modp::sub(&t0, &modp::mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = news;
        t0 = t1;
        t1 = newt;
    }
    // r0 = gcd (a constant for coprime g,h); scale to 1
    assert!(r0.len() == 1, "factors not coprime mod p");
    let inv = modp::inv(r0[0], p);
    let s = s0.iter().map(|&c| (c * inv).rem_euclid(p)).collect();
    let t = t0.iter().map(|&c| (c * inv).rem_euclid(p)).collect();
    (s, t)
}

fn modp_divmod(a: &[i64], b: &[i64], p: i64) -> (Vec<i64>, Vec<i64>) {
    let mut r = a.to_vec();
    if a.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![0i64; a.len() - b.len() + 1];
    let inv_lc = modp::inv(*b.last().unwrap(), p);
    while r.len() >= b.len() && !r.is_empty() {
        let coef = (*r.last().unwrap() * inv_lc).rem_euclid(p);
        let shift = r.len() - b.len();
        q[shift] = coef;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] - coef * bc).rem_euclid(p);
        }
        r = modp::trim(r);
    }
    (modp::trim(q), r)
}

fn bigint_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn bigint_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigInt::zero)
                - b.get(i).cloned().unwrap_or_else(BigInt::zero)
        })
        .collect()
}

/// Symmetric representative in (-m/2, m/2].
fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Zassenhaus recombination: find subsets of lifted monic factors whose
/// product (times lc) drops to a true integer factor.
fn recombine(f: &UniPoly, lifted: Vec<Vec<BigInt>>, pk: &BigInt) -> Vec<UniPoly> {
    let mut out = Vec::new();
    let mut remaining = f.normalize();
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut size = 1usize;
    'outer: while 2 * size <= pool.len() {
        let indices: Vec<usize> = (0..pool.len()).collect();
        for subset in subsets_of_size(&indices, size) {
            let lc = remaining.leading();
            let mut prod: Vec<BigInt> = vec![lc.clone()];
            for &i in &subset {
                prod = bigint_mul(&prod, &pool[i]);
                for c in &mut prod {
                    *c = c.mod_floor(pk);
                }
            }
            let cand = UniPoly::new(prod.iter().map(|c| symmetric(c, pk)).collect()).normalize();
            if cand.degree() == 0 {
                continue;
            }
            if let Some(q) = remaining.div_exact(&cand) {
                out.push(cand);
                remaining = q.normalize();
                let mut newpool = Vec::new();
                for (i, fac) in pool.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        newpool.push(fac);
                    }
                }
                pool = newpool;
                continue 'outer;
            }
        }
        size += 1;
    }
    if remaining.degree() >= 1 {
        out.push(remaining);
    }
    out
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64(c)
    }

    fn expand(factors: &[(UniPoly, usize)]) -> UniPoly {
        let mut acc = UniPoly::one();
        for (f, m) in factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }

    #[test]
    fn appendix_quartic() {
        let q = p(&[0, 3, -11, 7, 1]);
        let f = factor_over_q(&q);
        assert_eq!(f.len(), 3);
        let polys: Vec<UniPoly> = f.iter().map(|(g, _)| g.clone()).collect();
        assert!(polys.contains(&p(&[0, 1]))); // y
        assert!(polys.contains(&p(&[-1, 1]))); // y - 1
        assert!(polys.contains(&p(&[-3, 8, 1]))); // y^2 + 8y - 3
        assert!(f.iter().all(|&(_, m)| m == 1));
        assert_eq!(expand(&f), q.normalize());
    }

    #[test]
    fn irreducibles() {
        assert!(is_irreducible(&p(&[-2, 0, 1])));
        assert!(is_irreducible(&p(&[-3, 8, 1])));
        assert!(is_irreducible(&p(&[9, -16, 5])));
        assert!(is_irreducible(&p(&[-3, 4, 5])));
        assert!(!is_irreducible(&p(&[-1, 0, 0, 0, 1])));
    }

    #[test]
    fn quartic_classic() {
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let f = factor_over_q(&p(&[-1, 0, 0, 0, 1]));
        let polys: Vec<UniPoly> = f.iter().map(|(g, _)| g.clone()).collect();
        assert_eq!(f.len(), 3);
        assert!(polys.contains(&p(&[-1, 1])));
        assert!(polys.contains(&p(&[1, 1])));
        assert!(polys.contains(&p(&[1, 0, 1])));
    }

    #[test]
    fn multiplicities() {
        // (x-1)^2 (x^2-2)^2 x
        let f = p(&[-1, 1]);
        let g = p(&[-2, 0, 1]);
        let input = f.mul(&f).mul(&g).mul(&g).mul(&p(&[0, 1]));
        let factors = factor_over_q(&input);
        assert_eq!(factors.len(), 3);
        for (poly, m) in &factors {
            if *poly == p(&[0, 1]) {
                assert_eq!(*m, 1);
            } else {
                assert_eq!(*m, 2);
            }
        }
        assert_eq!(expand(&factors), input.normalize());
    }

    #[test]
    fn higher_degree_needs_hensel() {
        // product of two irreducible quartics stays together correctly
        let a = p(&[1, 0, 0, 0, 1]); // x^4+1 irreducible
        let b = p(&[-2, 0, 0, 0, 1]); // x^4-2 irreducible (Eisenstein)
        let f = factor_over_q(&a.mul(&b));
        assert_eq!(f.len(), 2);
        let polys: Vec<UniPoly> = f.iter().map(|(g, _)| g.clone()).collect();
        assert!(polys.contains(&a));
        assert!(polys.contains(&b));
        assert!(is_irreducible(&a));
        assert!(is_irreducible(&b));
    }

    #[test]
    fn non_monic_content() {
        // 6x^2 - 5x + 1 = (2x-1)(3x-1)
        let f = factor_over_q(&p(&[1, -5, 6]));
        let polys: Vec<UniPoly> = f.iter().map(|(g, _)| g.clone()).collect();
        assert_eq!(f.len(), 2);
        assert!(polys.contains(&p(&[-1, 2])));
        assert!(polys.contains(&p(&[-1, 3])));
    }
}
