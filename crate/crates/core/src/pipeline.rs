//! End-to-end solving: sample solution via Newton plus lattice
//! reconstruction, conjugate (orbit) expansion with box certification,
//! equilibrium filtering, class-membership decision, and the independent
//! support-enumeration oracle.

use crate::algebraic::{
    certify_box, conjugates, eval_unipoly_at, sign_at, to_radicals, AlgebraicError,
    AlgebraicNumber, CandidateBox, RadicalExpr, Sign,
};
use crate::factor::{factor_over_q, is_irreducible};
use crate::game::{
    build_game_system, verify_equilibrium, Game, GameError, MixedProfile, ProfileCoord,
    SystemForm,
};
use crate::groebner::{
    buchberger, eliminate_to_univariate, multivariate_divide, GroebnerBasis, GroebnerError,
};
use crate::lll::{is_rational_root, minimal_polynomial_dyadic, KllParams, LatticeError};
use crate::multipoly::{MonomialOrder, MultiPoly};
use crate::newton::{multi_start, NewtonError};
use crate::unipoly::UniPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("the game is not in the class: no all-irrational solution tuple exists")]
    NotIpie,
    #[error("every elimination is positive-dimensional; the game has infinitely many candidate solutions")]
    NoUnivariate,
    #[error("game too large for exhaustive enumeration")]
    TooLarge,
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
}

/// Tunable knobs surfaced through the CLI.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub precision_bits: Option<u32>,
    pub degree_bound: Option<usize>,
    pub height_bound: Option<BigInt>,
    pub max_iters: u32,
    pub starts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            precision_bits: None,
            degree_bound: None,
            height_bound: None,
            max_iters: 256,
            starts: 32,
        }
    }
}

/// One all-irrational solution of the game system.
#[derive(Clone, Debug)]
pub struct SampleSolution {
    /// Free-variable coordinates; every minimal polynomial has degree >= 2.
    pub coords: Vec<AlgebraicNumber>,
    /// (variable, rational root) factors divided out along the way.
    pub deflated_factors: Vec<(usize, BigRational)>,
}

/// An equilibrium in free coordinates, with radical forms when every
/// coordinate is of degree at most 2.
#[derive(Clone, Debug)]
pub struct Equilibrium {
    pub coords: Vec<AlgebraicNumber>,
    pub radicals: Option<Vec<RadicalExpr>>,
}

/// Certified solution tuples and the equilibria among them.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub tuples: Vec<Vec<AlgebraicNumber>>,
    pub equilibria: Vec<Equilibrium>,
    pub candidates_examined: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NonMemberReason {
    NonIntegerPayoff,
    RationalEquilibrium(Vec<Vec<BigRational>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum MembershipVerdict {
    Member { shape_fast_path: bool },
    NonMember { reason: NonMemberReason },
}

// ---------------------------------------------------------------------------
// Sample solution (Newton + lattice reconstruction, with rational deflation)
// ---------------------------------------------------------------------------

fn default_kll_params(system: &[MultiPoly], opts: &SolveOptions) -> KllParams {
    let bezout: usize = system
        .iter()
        .map(|f| (f.total_degree() as usize).max(1))
        .product::<usize>()
        .min(24);
    let degree = opts.degree_bound.unwrap_or(bezout).max(1);
    let height = opts
        .height_bound
        .clone()
        .unwrap_or_else(|| {
            system
                .iter()
                .map(|f| f.integer_height())
                .max()
                .unwrap_or_else(BigInt::one)
        })
        .max(BigInt::one());
    let mut params = KllParams::new(degree, height);
    if let Some(p) = opts.precision_bits {
        params.precision_bits = p;
    }
    params
}

/// Picks the real root of `minpoly` nearest to the approximation.
fn algebraic_near(minpoly: &UniPoly, approx: &BigRational) -> Result<AlgebraicNumber, PipelineError> {
    let orbit = conjugates(minpoly)?;
    let best = orbit
        .roots
        .into_iter()
        .min_by(|a, b| {
            let da = (a.refine(16).interval().midpoint().to_rational() - approx).abs();
            let db = (b.refine(16).interval().midpoint().to_rational() - approx).abs();
            da.cmp(&db)
        })
        .expect("a real root exists near a real approximation");
    Ok(best)
}

/// Computes one all-irrational solution tuple of an arbitrary square system,
/// deflating cleanly divisible rational roots and restarting (bounded).
pub fn sample_solution_of_system(
    system: &[MultiPoly],
    opts: &SolveOptions,
) -> Result<SampleSolution, PipelineError> {
    let nvars = system.first().map(|f| f.num_vars()).unwrap_or(0);
    let mut polys: Vec<MultiPoly> = system.to_vec();
    let params = default_kll_params(system, opts);
    let mut deflated: Vec<(usize, BigRational)> = Vec::new();
    let max_rounds = 2 * params.degree_bound + 8;
    let mut skip_starts = 0usize;

    for _ in 0..max_rounds {
        let active: Vec<MultiPoly> = polys.iter().filter(|f| !f.is_zero()).cloned().collect();
        if active.iter().any(|f| f.is_constant()) {
            return Err(PipelineError::NotIpie);
        }
        if active.is_empty() || active.len() != nvars {
            return Err(PipelineError::NotIpie);
        }
        let approx = multi_start(
            &active,
            params.precision_bits,
            opts.max_iters,
            opts.starts,
            skip_starts,
        )?;
        let minpolys: Result<Vec<UniPoly>, LatticeError> = approx
            .iter()
            .map(|d| minimal_polynomial_dyadic(d, params.precision_bits, &params))
            .collect();
        let minpolys = minpolys?;
        let rational_hits: Vec<(usize, BigRational)> = minpolys
            .iter()
            .enumerate()
            .filter_map(|(v, m)| is_rational_root(m).map(|r| (v, r)))
            .collect();
        if rational_hits.is_empty() {
            let coords: Result<Vec<AlgebraicNumber>, PipelineError> = minpolys
                .iter()
                .zip(&approx)
                .map(|(m, d)| algebraic_near(m, &d.to_rational()))
                .collect();
            return Ok(SampleSolution {
                coords: coords?,
                deflated_factors: deflated,
            });
        }
        // divide the system by the linear factors of the rational coordinates
        let mut any_divided = false;
        for (v, r) in &rational_hits {
            let linear = MultiPoly::from_unipoly(&UniPoly::linear_from_root(r), nvars, *v);
            let order = MonomialOrder::lex_with_lowest(*v, nvars);
            let mut next = Vec::with_capacity(polys.len());
            for f in &polys {
                if f.is_zero() {
                    next.push(f.clone());
                    continue;
                }
                let (q, rem) = multivariate_divide(f, std::slice::from_ref(&linear), &order)?;
                if rem.is_zero() {
                    any_divided = true;
                    next.push(q.into_iter().next().unwrap());
                } else {
                    next.push(f.clone());
                }
            }
            if any_divided {
                deflated.push((*v, r.clone()));
                polys = next;
                break;
            }
        }
        if !any_divided {
            // the rational point is isolated and not a factor; search from
            // later starting points instead
            skip_starts += 1;
            if skip_starts >= opts.starts {
                return Err(PipelineError::NotIpie);
            }
        } else {
            skip_starts = 0;
        }
    }
    Err(PipelineError::NotIpie)
}

/// Computes a sample solution of the game's indifference system.
pub fn sample_solution(game: &Game, opts: &SolveOptions) -> Result<SampleSolution, PipelineError> {
    let system = build_game_system(game, SystemForm::Indifference);
    sample_solution_of_system(&system.polynomials, opts)
}

// ---------------------------------------------------------------------------
// Orbit expansion and equilibrium filtering
// ---------------------------------------------------------------------------

/// Expands a sample solution to all conjugate candidates via per-coordinate
/// Galois orbits, certifying each candidate box against the system.
pub fn orbit_expand(
    sample: &SampleSolution,
    system: &[MultiPoly],
) -> Result<SolutionSet, PipelineError> {
    let orbits: Result<Vec<_>, _> = sample
        .coords
        .iter()
        .map(|c| conjugates(c.minpoly()))
        .collect();
    let orbits = orbits?;
    let mut candidates: Vec<Vec<AlgebraicNumber>> = vec![vec![]];
    for orbit in &orbits {
        let mut next = Vec::with_capacity(candidates.len() * orbit.roots.len());
        for prefix in &candidates {
            for root in &orbit.roots {
                let mut c = prefix.clone();
                c.push(root.clone());
                next.push(c);
            }
        }
        candidates = next;
    }
    let candidates_examined = candidates.len();
    let mut tuples: Vec<Vec<AlgebraicNumber>> = Vec::new();
    for cand in candidates {
        let mut refined: Vec<AlgebraicNumber> =
            cand.iter().map(|a| a.refine_to_width(48)).collect();
        let mut certified = false;
        for _ in 0..3 {
            let boxed = CandidateBox {
                coords: refined.iter().map(|a| a.interval().clone()).collect(),
            };
            match certify_box(system, &boxed) {
                Ok(true) => {
                    certified = true;
                    break;
                }
                Ok(false) | Err(AlgebraicError::SingularOnBox) => {
                    refined = refined.iter().map(|a| a.refine(48)).collect();
                }
                Err(e) => return Err(e.into()),
            }
        }
        if certified && !tuples.iter().any(|t| t == &refined) {
            tuples.push(refined);
        }
    }
    Ok(SolutionSet {
        tuples,
        equilibria: Vec::new(),
        candidates_examined,
    })
}

/// Strict-interior test for a free-coordinate tuple: every probability,
/// including each player's implied last one, lies in (0, 1).
fn tuple_is_interior(game: &Game, coords: &[AlgebraicNumber]) -> bool {
    let zero = BigRational::zero();
    let one = BigRational::one();
    for c in coords {
        if c.cmp_rational(&zero) != std::cmp::Ordering::Greater
            || c.cmp_rational(&one) != std::cmp::Ordering::Less
        {
            return false;
        }
    }
    // per player: sum of free coords < 1
    let n = coords.len();
    let mut idx = 0usize;
    for &k in game.strategy_counts() {
        let mut sum = MultiPoly::from_int(n, -1);
        for j in 0..k - 1 {
            let _ = j;
            sum = sum.add(&MultiPoly::var(n, idx));
            idx += 1;
        }
        if sign_at(coords, &sum) != Sign::Negative {
            return false;
        }
    }
    true
}

/// All equilibria of the game: sample, expand, filter to the open box and to
/// profiles surviving exact equilibrium verification.
pub fn all_equilibria(game: &Game, opts: &SolveOptions) -> Result<SolutionSet, PipelineError> {
    let system = build_game_system(game, SystemForm::Indifference);
    let sample = sample_solution(game, opts)?;
    let mut set = orbit_expand(&sample, &system.polynomials)?;
    let gaps = crate::game::free_gap_polynomials(game);
    let mut equilibria = Vec::new();
    for tuple in &set.tuples {
        if !tuple_is_interior(game, tuple) {
            continue;
        }
        if gaps
            .iter()
            .any(|g| sign_at(tuple, g) == Sign::Negative)
        {
            continue;
        }
        let radicals = if tuple.iter().all(|c| c.degree() <= 2) {
            let r: Result<Vec<RadicalExpr>, AlgebraicError> =
                tuple.iter().map(to_radicals).collect();
            r.ok()
        } else {
            None
        };
        equilibria.push(Equilibrium {
            coords: tuple.clone(),
            radicals,
        });
    }
    set.equilibria = equilibria;
    Ok(set)
}

// ---------------------------------------------------------------------------
// Shape position
// ---------------------------------------------------------------------------

/// True iff the basis is {g(lowest), v - h_v(lowest) ...} with
/// 1 <= deg h_v < deg g for every other variable v, and g irreducible.
pub fn shape_position_check(basis: &GroebnerBasis) -> bool {
    let lowest = basis.order.lowest();
    let nvars = basis.order.num_vars();
    let mut univariate: Option<UniPoly> = None;
    let mut covered: Vec<bool> = vec![false; nvars];
    covered[lowest] = true;
    let mut relations: Vec<(usize, u32)> = Vec::new();
    for g in &basis.generators {
        let support = g.support();
        if support.iter().all(|&v| v == lowest) {
            if univariate.is_some() {
                return false;
            }
            match g.to_unipoly_in(lowest) {
                Some(u) if u.degree() >= 1 => univariate = Some(u),
                _ => return false,
            }
            continue;
        }
        // exactly one variable besides the lowest, linear and monic in it
        let others: Vec<usize> = support.iter().copied().filter(|&v| v != lowest).collect();
        if others.len() != 1 {
            return false;
        }
        let v = others[0];
        if covered[v] || g.degree_in(v) != 1 {
            return false;
        }
        // terms carrying v must be exactly the monomial v (coefficient 1 in
        // a reduced monic basis)
        let mut v_part_ok = true;
        let mut h_deg = 0u32;
        for (m, c) in g.terms() {
            if m[v] == 1 {
                if m.iter().enumerate().any(|(w, &e)| w != v && e > 0) || !c.is_one() {
                    v_part_ok = false;
                }
            } else {
                h_deg = h_deg.max(m[lowest]);
            }
        }
        if !v_part_ok || h_deg == 0 {
            return false;
        }
        covered[v] = true;
        relations.push((v, h_deg));
    }
    let Some(g) = univariate else { return false };
    if !covered.iter().all(|&c| c) {
        return false;
    }
    if relations
        .iter()
        .any(|&(_, d)| d as usize >= g.degree())
    {
        return false;
    }
    is_irreducible(&g)
}

// ---------------------------------------------------------------------------
// Rational tuple search (membership recursion)
// ---------------------------------------------------------------------------

/// Recursively binds variables of a polynomial system to rational roots of
/// successive eliminations. Emits only fully determined all-rational tuples;
/// underdetermined branches are skipped (and flagged).
fn rational_tuple_search(
    polys: &[MultiPoly],
    nvars: usize,
    bound: &mut BTreeMap<usize, BigRational>,
    out: &mut Vec<Vec<BigRational>>,
    skipped: &mut bool,
) {
    let active: Vec<MultiPoly> = polys.iter().filter(|f| !f.is_zero()).cloned().collect();
    if active.iter().any(|f| f.is_constant()) {
        return; // inconsistent branch
    }
    if bound.len() == nvars {
        let tuple: Vec<BigRational> = (0..nvars).map(|v| bound[&v].clone()).collect();
        if !out.contains(&tuple) {
            out.push(tuple);
        }
        return;
    }
    if active.is_empty() {
        *skipped = true; // free variables remain
        return;
    }
    // pick the first unbound variable whose elimination succeeds
    for w in 0..nvars {
        if bound.contains_key(&w) {
            continue;
        }
        let order = MonomialOrder::lex_with_lowest(w, nvars);
        let Ok(gb) = buchberger(&active, &order) else { continue };
        let Ok(u) = eliminate_to_univariate(&gb, w) else { continue };
        if u.degree() == 0 {
            return; // inconsistent
        }
        for root in u.rational_roots() {
            let next: Vec<MultiPoly> = active
                .iter()
                .map(|f| f.substitute_rational(w, &root))
                .collect();
            bound.insert(w, root);
            rational_tuple_search(&next, nvars, bound, out, skipped);
            bound.remove(&w);
        }
        if !u.rational_roots().is_empty() && u.degree() > u.rational_roots().len() {
            *skipped = true; // irrational branches not followed
        } else if u.rational_roots().is_empty() {
            *skipped = true;
        }
        return;
    }
    *skipped = true; // every elimination was positive-dimensional
}

// ---------------------------------------------------------------------------
// Membership decision
// ---------------------------------------------------------------------------

/// Declares membership from rational payoff data: non-integer payoffs are
/// rejected outright, integer games go through the indifference-system scan.
pub fn decide_membership_payoffs(
    strategy_counts: Vec<usize>,
    payoffs: &[Vec<BigRational>],
) -> Result<MembershipVerdict, PipelineError> {
    if payoffs
        .iter()
        .any(|row| row.iter().any(|c| !c.denom().is_one()))
    {
        return Ok(MembershipVerdict::NonMember {
            reason: NonMemberReason::NonIntegerPayoff,
        });
    }
    let game = Game::new(
        strategy_counts,
        payoffs
            .iter()
            .map(|row| row.iter().map(|c| c.numer().clone()).collect())
            .collect(),
    )?;
    decide_membership(&game)
}

/// Decides whether every totally mixed equilibrium of the game is irrational,
/// by per-variable Gröbner elimination of the indifference system, rational
/// root analysis and triangular substitution. The shape fast path declares
/// membership from a single irreducible elimination.
pub fn decide_membership(game: &Game) -> Result<MembershipVerdict, PipelineError> {
    let system = build_game_system(game, SystemForm::Indifference);
    let nvars = system.num_vars();
    let active: Vec<MultiPoly> = system
        .polynomials
        .iter()
        .filter(|f| !f.is_zero())
        .cloned()
        .collect();
    if active.is_empty() {
        return Err(PipelineError::NoUnivariate);
    }
    let mut any_univariate = false;
    let mut first_basis_seen = false;
    for v in 0..nvars {
        let order = MonomialOrder::lex_with_lowest(v, nvars);
        let gb = buchberger(&active, &order)?;
        let u = match eliminate_to_univariate(&gb, v) {
            Ok(u) => u,
            Err(GroebnerError::NoUnivariate) => continue,
            Err(e) => return Err(e.into()),
        };
        any_univariate = true;
        if !first_basis_seen {
            first_basis_seen = true;
            if shape_position_check(&gb) {
                return Ok(MembershipVerdict::Member {
                    shape_fast_path: true,
                });
            }
        }
        if u.degree() == 0 {
            continue; // inconsistent system: no candidates through this route
        }
        for root in u.rational_roots() {
            let substituted: Vec<MultiPoly> = active
                .iter()
                .map(|f| f.substitute_rational(v, &root))
                .collect();
            let mut bound = BTreeMap::new();
            bound.insert(v, root.clone());
            let mut tuples = Vec::new();
            let mut skipped = false;
            rational_tuple_search(&substituted, nvars, &mut bound, &mut tuples, &mut skipped);
            for tuple in tuples {
                let coords: Vec<ProfileCoord> = tuple
                    .iter()
                    .map(|q| ProfileCoord::Rational(q.clone()))
                    .collect();
                let Ok(profile) = MixedProfile::from_free_coords(game, &coords) else {
                    continue; // outside the probability box
                };
                if !profile.is_interior() {
                    continue; // only totally mixed tuples are class witnesses
                }
                if verify_equilibrium(game, &profile)? {
                    let witness = profile
                        .probs()
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| c.as_rational().expect("rational witness"))
                                .collect()
                        })
                        .collect();
                    return Ok(MembershipVerdict::NonMember {
                        reason: NonMemberReason::RationalEquilibrium(witness),
                    });
                }
            }
        }
    }
    if !any_univariate {
        return Err(PipelineError::NoUnivariate);
    }
    Ok(MembershipVerdict::Member {
        shape_fast_path: false,
    })
}

// ---------------------------------------------------------------------------
// Support-enumeration oracle
// ---------------------------------------------------------------------------

/// Oracle output: exact equilibrium profiles plus a count of support
/// combinations skipped as degenerate (underdetermined or non-triangular).
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub equilibria: Vec<MixedProfile>,
    pub degenerate_supports: usize,
}

fn profiles_equal(a: &MixedProfile, b: &MixedProfile) -> bool {
    let pa = a.probs();
    let pb = b.probs();
    if pa.len() != pb.len() {
        return false;
    }
    for (ra, rb) in pa.iter().zip(pb) {
        if ra.len() != rb.len() {
            return false;
        }
        for (ca, cb) in ra.iter().zip(rb) {
            if ca.to_algebraic() != cb.to_algebraic() {
                return false;
            }
        }
    }
    true
}

/// Ground-truth equilibrium enumeration by per-player support subsets and
/// exact solving of the restricted indifference systems.
pub fn enumerate_oracle(game: &Game) -> Result<OracleOutcome, PipelineError> {
    if game.k_star() > 64 {
        return Err(PipelineError::TooLarge);
    }
    // all nonempty supports per player
    let supports_per_player: Vec<Vec<Vec<usize>>> = game
        .strategy_counts()
        .iter()
        .map(|&k| {
            let mut subs = Vec::new();
            for mask in 1u32..(1 << k) {
                subs.push((0..k).filter(|j| mask & (1 << j) != 0).collect());
            }
            subs
        })
        .collect();
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for per in &supports_per_player {
        let mut next = Vec::with_capacity(combos.len() * per.len());
        for c in &combos {
            for s in 0..per.len() {
                let mut cc = c.clone();
                cc.push(s);
                next.push(cc);
            }
        }
        combos = next;
    }
    let mut equilibria: Vec<MixedProfile> = Vec::new();
    let mut degenerate = 0usize;
    for combo in combos {
        let supports: Vec<&Vec<usize>> = combo
            .iter()
            .enumerate()
            .map(|(i, &s)| &supports_per_player[i][s])
            .collect();
        match solve_support(game, &supports) {
            SupportOutcome::Profiles(ps) => {
                for p in ps {
                    if verify_equilibrium(game, &p)? && !equilibria.iter().any(|e| profiles_equal(e, &p)) {
                        equilibria.push(p);
                    }
                }
            }
            SupportOutcome::Degenerate => degenerate += 1,
            SupportOutcome::None => {}
        }
    }
    Ok(OracleOutcome {
        equilibria,
        degenerate_supports: degenerate,
    })
}

enum SupportOutcome {
    Profiles(Vec<MixedProfile>),
    Degenerate,
    None,
}

/// Unknown layout for a support combination: one variable per in-support
/// strategy except the last of each mixing player.
struct SupportVars {
    // (player, support position) for each unknown
    slots: Vec<(usize, usize)>,
}

fn solve_support(game: &Game, supports: &[&Vec<usize>]) -> SupportOutcome {
    let mut slots = Vec::new();
    for (i, s) in supports.iter().enumerate() {
        for pos in 0..s.len().saturating_sub(1) {
            slots.push((i, pos));
        }
    }
    let vars = SupportVars { slots };
    let u = vars.slots.len();
    if u == 0 {
        // pure profile
        let strategies: Vec<usize> = supports.iter().map(|s| s[0]).collect();
        return match MixedProfile::pure(game, &strategies) {
            Ok(p) => SupportOutcome::Profiles(vec![p]),
            Err(_) => SupportOutcome::None,
        };
    }
    // probability expression for (player, strategy) over the unknowns
    let expr = |player: usize, strat: usize| -> Option<MultiPoly> {
        let support = supports[player];
        let Some(pos) = support.iter().position(|&s| s == strat) else {
            return Some(MultiPoly::zero(u)); // off-support
        };
        if support.len() == 1 {
            return Some(MultiPoly::one(u));
        }
        if pos + 1 < support.len() {
            let v = vars
                .slots
                .iter()
                .position(|&(p, q)| p == player && q == pos)
                .unwrap();
            Some(MultiPoly::var(u, v))
        } else {
            // last in support: one minus the rest
            let mut acc = MultiPoly::one(u);
            for q in 0..support.len() - 1 {
                let v = vars
                    .slots
                    .iter()
                    .position(|&(p, qq)| p == player && qq == q)
                    .unwrap();
                acc = acc.sub(&MultiPoly::var(u, v));
            }
            Some(acc)
        }
    };
    // restricted indifference equations
    let mut polys = Vec::new();
    for (i, support) in supports.iter().enumerate() {
        if support.len() < 2 {
            continue;
        }
        // expected payoff for playing `strat`, over other players
        let pure_poly = |strat: usize| -> MultiPoly {
            let mut acc = MultiPoly::zero(u);
            for profile in game.pure_profiles() {
                if profile[i] != strat {
                    continue;
                }
                let mut term = MultiPoly::one(u);
                let mut nonzero = true;
                for (m, &jm) in profile.iter().enumerate() {
                    if m == i {
                        continue;
                    }
                    let e = expr(m, jm).unwrap();
                    if e.is_zero() {
                        nonzero = false;
                        break;
                    }
                    term = term.mul(&e);
                }
                if !nonzero {
                    continue;
                }
                acc = acc.add(&term.scale(&BigRational::from_integer(
                    game.payoff(i, &profile).clone(),
                )));
            }
            acc
        };
        let last = pure_poly(support[support.len() - 1]);
        for &s in &support[..support.len() - 1] {
            polys.push(pure_poly(s).sub(&last));
        }
    }
    debug_assert_eq!(polys.len(), u);
    let solutions = match solve_square_system(&polys, u) {
        Ok(s) => s,
        Err(SolveFailure::Degenerate) => return SupportOutcome::Degenerate,
        Err(SolveFailure::NoSolutions) => return SupportOutcome::None,
    };
    let mut profiles = Vec::new();
    'solutions: for sol in solutions {
        // positivity of in-support coordinates (free unknowns and implied
        // last coordinates alike)
        let mut rows: Vec<Vec<ProfileCoord>> = Vec::with_capacity(game.num_players());
        for (i, support) in supports.iter().enumerate() {
            let k = game.strategy_counts()[i];
            let mut row = vec![ProfileCoord::Rational(BigRational::zero()); k];
            if support.len() == 1 {
                row[support[0]] = ProfileCoord::Rational(BigRational::one());
            } else {
                let mut mine: Vec<ProfileCoord> = Vec::new();
                for pos in 0..support.len() - 1 {
                    let v = vars
                        .slots
                        .iter()
                        .position(|&(p, q)| p == i && q == pos)
                        .unwrap();
                    mine.push(sol[v].clone());
                }
                // last coordinate
                let all_rational = mine.iter().all(|c| c.as_rational().is_some());
                let last: ProfileCoord = if all_rational {
                    let sum: BigRational = mine.iter().map(|c| c.as_rational().unwrap()).sum();
                    ProfileCoord::Rational(BigRational::one() - sum)
                } else if support.len() == 2 {
                    ProfileCoord::Algebraic(mine[0].to_algebraic().one_minus())
                } else {
                    continue 'solutions; // unsupported algebraic arity
                };
                for (pos, &s) in support[..support.len() - 1].iter().enumerate() {
                    row[s] = mine[pos].clone();
                }
                row[support[support.len() - 1]] = last;
            }
            // strict positivity on the support
            for &s in support.iter() {
                let positive = match &row[s] {
                    ProfileCoord::Rational(q) => q.is_positive(),
                    ProfileCoord::Algebraic(a) => {
                        a.cmp_rational(&BigRational::zero()) == std::cmp::Ordering::Greater
                    }
                };
                if !positive {
                    continue 'solutions;
                }
            }
            rows.push(row);
        }
        match MixedProfile::new(game, rows) {
            Ok(p) => profiles.push(p),
            Err(_) => continue,
        }
    }
    SupportOutcome::Profiles(profiles)
}

enum SolveFailure {
    Degenerate,
    NoSolutions,
}

/// Exact solutions of a square zero-dimensional polynomial system, as
/// coordinate tuples of rationals/algebraics. Positive-dimensional or
/// non-triangular irrational structure reports Degenerate.
fn solve_square_system(
    polys: &[MultiPoly],
    nvars: usize,
) -> Result<Vec<Vec<ProfileCoord>>, SolveFailure> {
    let active: Vec<MultiPoly> = polys.iter().filter(|f| !f.is_zero()).cloned().collect();
    if active.iter().any(|f| f.is_constant()) {
        return Err(SolveFailure::NoSolutions);
    }
    if active.is_empty() {
        return Err(SolveFailure::Degenerate);
    }
    let lowest = nvars - 1;
    let order = MonomialOrder::lex_with_lowest(lowest, nvars);
    let Ok(gb) = buchberger(&active, &order) else {
        return Err(SolveFailure::Degenerate);
    };
    let u = match eliminate_to_univariate(&gb, lowest) {
        Ok(u) => u,
        Err(_) => return Err(SolveFailure::Degenerate),
    };
    if u.degree() == 0 {
        return Err(SolveFailure::NoSolutions);
    }
    // shape relations v -> h_v(lowest), when available
    let mut relations: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
    for g in &gb.generators {
        let support = g.support();
        let others: Vec<usize> = support.iter().copied().filter(|&v| v != lowest).collect();
        if others.len() != 1 || g.degree_in(others[0]) != 1 {
            continue;
        }
        let v = others[0];
        // g = v + tail(lowest)  =>  h_v = -tail
        let mut ok = true;
        let mut h = vec![BigRational::zero(); g.degree_in(lowest) as usize + 1];
        for (m, c) in g.terms() {
            if m[v] == 1 {
                if m.iter().enumerate().any(|(w, &e)| w != v && e > 0) || !c.is_one() {
                    ok = false;
                    break;
                }
            } else {
                h[m[lowest] as usize] = -c.clone();
            }
        }
        if ok {
            relations.insert(v, h);
        }
    }
    let mut out = Vec::new();
    for (factor, _) in factor_over_q(&u) {
        if factor.degree() == 0 {
            continue;
        }
        if factor.degree() == 1 {
            let root = BigRational::new(-factor.coeff(0), factor.coeff(1));
            // substitute and solve the rest exactly over the rationals
            let substituted: Vec<MultiPoly> = active
                .iter()
                .map(|f| f.substitute_rational(lowest, &root))
                .collect();
            let mut bound = BTreeMap::new();
            bound.insert(lowest, root);
            let mut tuples = Vec::new();
            let mut skipped = false;
            rational_tuple_search(&substituted, nvars, &mut bound, &mut tuples, &mut skipped);
            if skipped {
                return Err(SolveFailure::Degenerate);
            }
            for t in tuples {
                out.push(t.into_iter().map(ProfileCoord::Rational).collect());
            }
            continue;
        }
        // irrational roots need the shape relations for every other variable
        if (0..nvars).any(|v| v != lowest && !relations.contains_key(&v)) {
            return Err(SolveFailure::Degenerate);
        }
        let orbit = match conjugates(&factor) {
            Ok(o) => o,
            Err(_) => return Err(SolveFailure::Degenerate),
        };
        for root in orbit.roots {
            let mut coords = vec![ProfileCoord::Rational(BigRational::zero()); nvars];
            coords[lowest] = ProfileCoord::Algebraic(root.clone());
            for (v, h) in &relations {
                coords[*v] = ProfileCoord::Algebraic(eval_qpoly_at(h, &root));
            }
            out.push(coords);
        }
    }
    Ok(out)
}

/// Evaluates a rational-coefficient polynomial at an algebraic number.
fn eval_qpoly_at(h: &[BigRational], a: &AlgebraicNumber) -> AlgebraicNumber {
    let mut den = BigInt::one();
    for c in h {
        den = den.lcm(c.denom());
    }
    let int_poly = UniPoly::new(h.iter().map(|c| c.numer() * (&den / c.denom())).collect());
    let v = eval_unipoly_at(&int_poly, a);
    v.affine_image(&BigRational::new(BigInt::one(), den), &BigRational::zero())
}

// ---------------------------------------------------------------------------
// Isolated-solutions shape basis (reference fixture reconstruction)
// ---------------------------------------------------------------------------

/// Builds the lex shape basis of the ideal of the *isolated* complementarity
/// solutions of a 2-strategy game: every player is pure (0/1) or exactly
/// indifferent; solutions sitting on positive-dimensional components are
/// excluded. Requires the projection onto `lowest` to be injective.
pub fn isolated_solutions_shape_basis(
    game: &Game,
    lowest: usize,
) -> Result<GroebnerBasis, PipelineError> {
    if game.strategy_counts().iter().any(|&k| k != 2) {
        return Err(PipelineError::TooLarge);
    }
    let n = game.num_players();
    let system = build_game_system(game, SystemForm::Indifference);
    let d_polys = &system.polynomials; // D_i, one per player, own variable absent
    #[derive(Clone)]
    enum Piece {
        // rational point: all coordinates
        Point(Vec<BigRational>),
        // irreducible minpoly in `lowest` + residues for every other variable
        Component(UniPoly, BTreeMap<usize, Vec<BigRational>>),
    }
    let mut pieces: Vec<Piece> = Vec::new();
    // branch codes: 0 -> var = 0, 1 -> var = 1, 2 -> indifferent (mixing)
    let mut branch = vec![0u8; n];
    loop {
        let mixers: Vec<usize> = (0..n).filter(|&i| branch[i] == 2).collect();
        // substitute pure values
        let mut substituted: Vec<Option<MultiPoly>> = vec![None; n];
        for i in 0..n {
            if branch[i] == 2 {
                let mut f = d_polys[i].clone();
                for j in 0..n {
                    if branch[j] != 2 {
                        f = f.substitute_rational(
                            j,
                            &BigRational::from_integer(BigInt::from(branch[j] as i64)),
                        );
                    }
                }
                substituted[i] = Some(f);
            }
        }
        'branch_done: {
            if mixers.is_empty() {
                let point: Vec<BigRational> = branch
                    .iter()
                    .map(|&b| BigRational::from_integer(BigInt::from(b as i64)))
                    .collect();
                if point_is_isolated(d_polys, &point) {
                    pieces.push(Piece::Point(point));
                }
                break 'branch_done;
            }
            // mixing players' equations over the mixer unknowns
            let eqs: Vec<MultiPoly> = mixers
                .iter()
                .map(|&i| substituted[i].clone().unwrap())
                .collect();
            if eqs.iter().any(|f| f.is_constant() && !f.is_zero()) {
                break 'branch_done; // inconsistent
            }
            if eqs.iter().any(|f| f.is_zero()) {
                break 'branch_done; // underdetermined: positive-dimensional
            }
            // pick the elimination variable: prefer `lowest` when it mixes
            let w = if branch[lowest] == 2 {
                lowest
            } else {
                *mixers.last().unwrap()
            };
            let order = MonomialOrder::lex_with_lowest(w, n);
            let Ok(gb) = buchberger(&eqs, &order) else {
                break 'branch_done;
            };
            let Ok(u) = eliminate_to_univariate(&gb, w) else {
                break 'branch_done; // positive-dimensional
            };
            if u.degree() == 0 {
                break 'branch_done;
            }
            // shape relations for the other mixers
            let mut relations: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
            for g in &gb.generators {
                let support = g.support();
                let others: Vec<usize> =
                    support.iter().copied().filter(|&v| v != w).collect();
                if others.len() != 1 || g.degree_in(others[0]) != 1 {
                    continue;
                }
                let v = others[0];
                let mut ok = true;
                let mut h = vec![BigRational::zero(); g.degree_in(w) as usize + 1];
                for (m, c) in g.terms() {
                    if m[v] == 1 {
                        if m.iter().enumerate().any(|(x, &e)| x != v && e > 0) || !c.is_one() {
                            ok = false;
                            break;
                        }
                    } else {
                        h[m[w] as usize] = -c.clone();
                    }
                }
                if ok {
                    relations.insert(v, h);
                }
            }
            for (factor, _) in factor_over_q(&u) {
                if factor.degree() == 0 {
                    continue;
                }
                if factor.degree() == 1 {
                    let root = BigRational::new(-factor.coeff(0), factor.coeff(1));
                    if root.is_zero() || root == BigRational::one() {
                        continue; // coincides with a purer branch
                    }
                    let sub2: Vec<MultiPoly> = eqs
                        .iter()
                        .map(|f| f.substitute_rational(w, &root))
                        .collect();
                    let mut bound = BTreeMap::new();
                    bound.insert(w, root);
                    let mut tuples = Vec::new();
                    let mut skipped = false;
                    rational_tuple_search(&sub2, n, &mut bound, &mut tuples, &mut skipped);
                    let mut full_tuples: Vec<Vec<BigRational>> = Vec::new();
                    if skipped {
                        break 'branch_done;
                    }
                    for t in tuples {
                        let mut full = Vec::with_capacity(n);
                        for j in 0..n {
                            if branch[j] == 2 {
                                full.push(t[j].clone());
                            } else {
                                full.push(BigRational::from_integer(BigInt::from(
                                    branch[j] as i64,
                                )));
                            }
                        }
                        full_tuples.push(full);
                    }
                    for full in full_tuples {
                        if full
                            .iter()
                            .enumerate()
                            .any(|(j, q)| branch[j] == 2 && (q.is_zero() || *q == BigRational::one()))
                        {
                            continue; // purer-branch duplicate
                        }
                        if point_is_isolated(d_polys, &full) {
                            pieces.push(Piece::Point(full));
                        }
                    }
                    continue;
                }
                // irrational component: need relations for every other mixer
                if mixers.iter().any(|&v| v != w && !relations.contains_key(&v)) {
                    break 'branch_done;
                }
                // residues per variable: mixers via relations mod factor,
                // pure players as constants
                let mut residues: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
                for j in 0..n {
                    if j == w {
                        continue;
                    }
                    let res = if branch[j] == 2 {
                        qpoly_rem(&relations[&j], &factor)
                    } else {
                        vec![BigRational::from_integer(BigInt::from(branch[j] as i64))]
                    };
                    residues.insert(j, res);
                }
                // isolation: every pure player's D must be nonzero at the
                // component (a nonzero residue suffices: the factor is
                // irreducible)
                let mut isolated = true;
                for j in 0..n {
                    if branch[j] != 2 {
                        let mut f = d_polys[j].clone();
                        // substitute pure coords
                        for l in 0..n {
                            if branch[l] != 2 {
                                f = f.substitute_rational(
                                    l,
                                    &BigRational::from_integer(BigInt::from(branch[l] as i64)),
                                );
                            }
                        }
                        // substitute mixer residues symbolically in w
                        let res = multipoly_residue_in(&f, w, &relations, &factor, n);
                        if res.iter().all(|c| c.is_zero()) {
                            isolated = false;
                            break;
                        }
                    }
                }
                if !isolated {
                    continue;
                }
                if w == lowest {
                    pieces.push(Piece::Component(factor.clone(), residues));
                } else {
                    // component's lowest-coordinate is a pure constant:
                    // projection cannot be injective together with others
                    return Err(PipelineError::NoUnivariate);
                }
            }
        }
        // next branch
        let mut i = 0;
        loop {
            if i == n {
                // done
                return assemble_shape_basis(pieces_to_parts(pieces)?, lowest, n);
            }
            branch[i] += 1;
            if branch[i] <= 2 {
                break;
            }
            branch[i] = 0;
            i += 1;
        }
    }

    type Parts = (Vec<(UniPoly, BTreeMap<usize, Vec<BigRational>>)>,);

    fn pieces_to_parts(pieces: Vec<Piece>) -> Result<Parts, PipelineError> {
        let mut parts: Vec<(UniPoly, BTreeMap<usize, Vec<BigRational>>)> = Vec::new();
        for piece in pieces {
            match piece {
                Piece::Point(coords) => {
                    // represented lazily; converted by the caller
                    let mut residues = BTreeMap::new();
                    for (j, q) in coords.iter().enumerate() {
                        residues.insert(j, vec![q.clone()]);
                    }
                    // the factor is reconstructed by the caller from residue 0
                    parts.push((UniPoly::zero(), residues));
                }
                Piece::Component(m, residues) => parts.push((m, residues)),
            }
        }
        Ok((parts,))
    }

    fn assemble_shape_basis(
        parts: Parts,
        lowest: usize,
        n: usize,
    ) -> Result<GroebnerBasis, PipelineError> {
        let (raw,) = parts;
        // finalize factors: rational points get (y - value)
        let mut factors: Vec<(UniPoly, BTreeMap<usize, Vec<BigRational>>)> = Vec::new();
        for (m, residues) in raw {
            if m.is_zero() {
                let value = residues[&lowest][0].clone();
                let f = UniPoly::linear_from_root(&value).normalize();
                factors.push((f, residues));
            } else {
                factors.push((m, residues));
            }
        }
        // injectivity: pairwise distinct factors
        for i in 0..factors.len() {
            for j in (i + 1)..factors.len() {
                if factors[i].0 == factors[j].0 {
                    return Err(PipelineError::NoUnivariate);
                }
            }
        }
        // q = product of factors (monic over Q); CRT for each variable
        let mut q_poly = UniPoly::one();
        for (f, _) in &factors {
            q_poly = q_poly.mul(f);
        }
        let mut generators = vec![MultiPoly::from_unipoly(&q_poly.normalize(), n, lowest)
            .scale(&BigRational::new(
                BigInt::one(),
                q_poly.normalize().leading(),
            ))];
        for v in 0..n {
            if v == lowest {
                continue;
            }
            // h_v = CRT of residues modulo the factors
            let residues: Vec<(&UniPoly, Vec<BigRational>)> = factors
                .iter()
                .map(|(f, r)| (f, r[&v].clone()))
                .collect();
            let h = qpoly_crt(&residues);
            let mut g = MultiPoly::var(n, v);
            for (deg, c) in h.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut mono = vec![0u32; n];
                mono[lowest] = deg as u32;
                g = g.sub(&MultiPoly::from_terms(n, vec![(mono, c.clone())]));
            }
            generators.push(g);
        }
        Ok(GroebnerBasis {
            generators,
            order: MonomialOrder::lex_with_lowest(lowest, n),
            reduced: true,
        })
    }
}

/// A rational complementarity solution is isolated unless it sits on a line
/// {x_j free}: that needs player j indifferent there and every other
/// coordinate either pure or with an indifference identically flat in x_j.
fn point_is_isolated(d_polys: &[MultiPoly], point: &[BigRational]) -> bool {
    let n = point.len();
    let one = BigRational::one();
    for j in 0..n {
        let mut dj = d_polys[j].clone();
        for (l, q) in point.iter().enumerate() {
            dj = dj.substitute_rational(l, q);
        }
        if !dj.is_zero() {
            continue;
        }
        let mut line = true;
        for i in 0..n {
            if i == j {
                continue;
            }
            if point[i].is_zero() || point[i] == one {
                continue;
            }
            let mut di = d_polys[i].clone();
            for (l, q) in point.iter().enumerate() {
                if l != j {
                    di = di.substitute_rational(l, q);
                }
            }
            if !di.is_zero() {
                line = false;
                break;
            }
        }
        if line {
            return false;
        }
    }
    true
}

/// Residue of a multivariate polynomial along a component: substitute each
/// mixer variable by its relation polynomial in w, reduce modulo the factor.
fn multipoly_residue_in(
    f: &MultiPoly,
    w: usize,
    relations: &BTreeMap<usize, Vec<BigRational>>,
    factor: &UniPoly,
    n: usize,
) -> Vec<BigRational> {
    // convert f to a qpoly in w by substituting relations
    let mut acc: Vec<BigRational> = vec![BigRational::zero()];
    for (mono, c) in f.terms() {
        let mut term: Vec<BigRational> = vec![c.clone()];
        for v in 0..n {
            let e = mono[v];
            if e == 0 {
                continue;
            }
            let base: Vec<BigRational> = if v == w {
                vec![BigRational::zero(), BigRational::one()]
            } else if let Some(h) = relations.get(&v) {
                h.clone()
            } else {
                // pure variables were substituted before the call
                unreachable!("unexpected free variable in residue computation")
            };
            for _ in 0..e {
                term = qpoly_mul(&term, &base);
                term = qpoly_rem(&term, factor);
            }
        }
        acc = qpoly_add(&acc, &term);
    }
    qpoly_rem(&acc, factor)
}

// ---------------------------------------------------------------------------
// Rational-coefficient univariate helpers (for CRT interpolation)
// ---------------------------------------------------------------------------

fn qpoly_trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

fn qpoly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    qpoly_trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(BigRational::zero)
                    + b.get(i).cloned().unwrap_or_else(BigRational::zero)
            })
            .collect(),
    )
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qpoly_trim(out)
}

fn qpoly_scale(a: &[BigRational], k: &BigRational) -> Vec<BigRational> {
    qpoly_trim(a.iter().map(|c| c * k).collect())
}

/// Remainder of a rational polynomial by an integer polynomial.
fn qpoly_rem(a: &[BigRational], m: &UniPoly) -> Vec<BigRational> {
    let d = m.degree();
    let mut r = a.to_vec();
    let lead = BigRational::from_integer(m.leading());
    while qpoly_trim(r.clone()).len() > d {
        r = qpoly_trim(r);
        let k = r.len() - 1;
        let q = r[k].clone() / &lead;
        for (i, c) in m.coeffs().iter().enumerate() {
            let idx = k - d + i;
            let sub = &q * BigRational::from_integer(c.clone());
            r[idx] -= sub;
        }
    }
    qpoly_trim(r)
}

fn qpoly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = qpoly_trim(b.to_vec());
    assert!(!b.is_empty());
    let mut r = qpoly_trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() / b.last().unwrap();
        q[k] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let sub = &c * bc;
            r[k + i] -= sub;
        }
        r = qpoly_trim(r);
    }
    (qpoly_trim(q), r)
}

/// Extended gcd over Q[x]: returns (g, s, t) with s*a + t*b = g.
fn qpoly_extgcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (qpoly_trim(a.to_vec()), qpoly_trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![BigRational::one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = qpoly_divmod(&r0, &r1);
        let news = qpoly_add(&s0, &qpoly_scale(&qpoly_mul(&q, &s1), &-BigRational::one()));
        let newt = qpoly_add(&t0, &qpoly_scale(&qpoly_mul(&q, &t1), &-BigRational::one()));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = news;
        t0 = t1;
        t1 = newt;
    }
    (r0, s0, t0)
}

/// Substitutes a rational root into a basis and recursively solves the bound
/// system to complete all-rational solution tuples.
pub fn triangular_rational_solutions(
    basis: &GroebnerBasis,
    variable: usize,
    value: &BigRational,
) -> Result<Vec<Vec<BigRational>>, PipelineError> {
    let polys = crate::groebner::triangular_substitute(basis, variable, value)?;
    let nvars = basis.order.num_vars();
    let mut bound = BTreeMap::new();
    bound.insert(variable, value.clone());
    let mut out = Vec::new();
    let mut skipped = false;
    rational_tuple_search(&polys, nvars, &mut bound, &mut out, &mut skipped);
    Ok(out)
}

/// CRT over Q[x]: the unique polynomial congruent to each residue modulo the
/// given pairwise-coprime integer polynomials.
fn qpoly_crt(parts: &[(&UniPoly, Vec<BigRational>)]) -> Vec<BigRational> {
    let mut result: Vec<BigRational> = vec![];
    let mut modulus: Vec<BigRational> = vec![BigRational::one()];
    for (m, residue) in parts {
        let m_q: Vec<BigRational> = m
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        // solve result + modulus * t === residue (mod m)
        let current = qpoly_rem(&result, m);
        let mut delta = qpoly_add(residue, &qpoly_scale(&current, &-BigRational::one()));
        delta = qpoly_rem(&delta, m);
        let modulus_mod_m = qpoly_rem(&modulus, m);
        let (g, s, _) = qpoly_extgcd(&modulus_mod_m, &m_q);
        // g must be a nonzero constant for coprime moduli
        assert!(g.len() == 1 && !g[0].is_zero(), "moduli must be coprime");
        let inv = qpoly_scale(&s, &g[0].recip());
        let t = qpoly_rem(&qpoly_mul(&delta, &inv), m);
        result = qpoly_add(&result, &qpoly_mul(&modulus, &t));
        modulus = qpoly_mul(&modulus, &m_q);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn sample_solution_single_equation() {
        let sys = vec![MultiPoly::from_unipoly(
            &UniPoly::from_i64(&[-2, 0, 1]),
            1,
            0,
        )];
        let s = sample_solution_of_system(&sys, &opts()).unwrap();
        assert_eq!(s.coords.len(), 1);
        assert_eq!(s.coords[0].minpoly(), &UniPoly::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn sample_solution_table1() {
        let g = fixtures::table1_game();
        let s = sample_solution(&g, &opts()).unwrap();
        let polys: Vec<&UniPoly> = s.coords.iter().map(|c| c.minpoly()).collect();
        assert_eq!(polys[0], &UniPoly::from_i64(&[9, -16, 5]));
        assert_eq!(polys[1], &UniPoly::from_i64(&[-3, 8, 1]));
        assert_eq!(polys[2], &UniPoly::from_i64(&[-3, 4, 5]));
        assert!(s.deflated_factors.is_empty());
    }

    #[test]
    fn matching_pennies_is_not_in_class() {
        let g = fixtures::matching_pennies();
        match sample_solution(&g, &opts()) {
            Err(PipelineError::NotIpie) => {}
            other => panic!("expected NotIpie, got {other:?}"),
        }
    }

    #[test]
    fn orbit_expansion_scalar() {
        let sys = vec![MultiPoly::from_unipoly(
            &UniPoly::from_i64(&[-2, 0, 1]),
            1,
            0,
        )];
        let s = sample_solution_of_system(&sys, &opts()).unwrap();
        let set = orbit_expand(&s, &sys).unwrap();
        assert_eq!(set.candidates_examined, 2);
        assert_eq!(set.tuples.len(), 2);
    }

    #[test]
    fn table1_full_pipeline() {
        let g = fixtures::table1_game();
        let set = all_equilibria(&g, &opts()).unwrap();
        assert_eq!(set.candidates_examined, 8);
        assert_eq!(set.tuples.len(), 2);
        assert_eq!(set.equilibria.len(), 1);
        let eq = &set.equilibria[0];
        let radicals = eq.radicals.as_ref().unwrap();
        assert_eq!(radicals[0].to_string(), "(8 + -1*sqrt(19))/5");
        assert_eq!(radicals[1].to_string(), "(-4 + 1*sqrt(19))/1");
        assert_eq!(radicals[2].to_string(), "(-2 + 1*sqrt(19))/5");
    }

    #[test]
    fn membership_verdicts() {
        let g = fixtures::table1_game();
        assert_eq!(
            decide_membership(&g).unwrap(),
            MembershipVerdict::Member {
                shape_fast_path: true
            }
        );
        let mp = fixtures::matching_pennies();
        match decide_membership(&mp).unwrap() {
            MembershipVerdict::NonMember {
                reason: NonMemberReason::RationalEquilibrium(w),
            } => {
                assert_eq!(w, vec![vec![qr(1, 2), qr(1, 2)], vec![qr(1, 2), qr(1, 2)]]);
            }
            other => panic!("expected rational-equilibrium witness, got {other:?}"),
        }
        // non-integer payoffs
        let verdict = decide_membership_payoffs(
            vec![2, 2],
            &[
                vec![qr(3, 2), q(0), q(0), q(1)],
                vec![q(0), q(1), q(1), q(0)],
            ],
        )
        .unwrap();
        assert_eq!(
            verdict,
            MembershipVerdict::NonMember {
                reason: NonMemberReason::NonIntegerPayoff
            }
        );
    }

    #[test]
    fn shape_check_cases() {
        // {y^2 - 2, x - y} with y lowest: true
        let order = MonomialOrder::lex_with_lowest(1, 2);
        let gens = vec![
            MultiPoly::from_terms(2, vec![(vec![0, 2], q(1)), (vec![0, 0], q(-2))]),
            MultiPoly::from_terms(2, vec![(vec![1, 0], q(1)), (vec![0, 1], q(-1))]),
        ];
        let gb = buchberger(&gens, &order).unwrap();
        assert!(shape_position_check(&gb));
        // {y^2 - 1, x^2 - 1}: false (second generator quadratic in x)
        let gens2 = vec![
            MultiPoly::from_terms(2, vec![(vec![0, 2], q(1)), (vec![0, 0], q(-1))]),
            MultiPoly::from_terms(2, vec![(vec![2, 0], q(1)), (vec![0, 0], q(-1))]),
        ];
        let gb2 = buchberger(&gens2, &order).unwrap();
        assert!(!shape_position_check(&gb2));
        // Table 1 indifference basis, x lowest: true
        let g = fixtures::table1_game();
        let system = build_game_system(&g, SystemForm::Indifference);
        let orderx = MonomialOrder::lex_with_lowest(0, 3);
        let gbx = buchberger(&system.polynomials, &orderx).unwrap();
        assert!(shape_position_check(&gbx));
    }

    #[test]
    fn oracle_matching_pennies() {
        let g = fixtures::matching_pennies();
        let out = enumerate_oracle(&g).unwrap();
        assert_eq!(out.equilibria.len(), 1);
        let probs = out.equilibria[0].probs();
        for row in probs {
            for c in row {
                assert_eq!(c.as_rational(), Some(qr(1, 2)));
            }
        }
        assert_eq!(out.degenerate_supports, 0);
    }

    #[test]
    fn oracle_dominant_game() {
        let g = fixtures::dominant_game();
        let out = enumerate_oracle(&g).unwrap();
        assert_eq!(out.equilibria.len(), 1);
        let probs = out.equilibria[0].probs();
        assert_eq!(probs[0][0].as_rational(), Some(q(1)));
        assert_eq!(probs[1][0].as_rational(), Some(q(1)));
    }

    #[test]
    fn oracle_table1_matches_pipeline() {
        let g = fixtures::table1_game();
        let out = enumerate_oracle(&g).unwrap();
        // totally mixed irrational equilibria
        let tm: Vec<&MixedProfile> = out
            .equilibria
            .iter()
            .filter(|p| p.is_interior() && !p.is_rational())
            .collect();
        assert_eq!(tm.len(), 1);
        let set = all_equilibria(&g, &opts()).unwrap();
        assert_eq!(set.equilibria.len(), 1);
        // compare coordinates exactly
        let eq = &set.equilibria[0];
        let oracle_probs = tm[0].probs();
        for (i, coord) in eq.coords.iter().enumerate() {
            let oracle_coord = oracle_probs[i][0].to_algebraic();
            assert_eq!(coord, &oracle_coord);
        }
        // the pinned game also has two weak pure equilibria the appendix
        // narrative misses; the oracle finds them
        let pure: Vec<&MixedProfile> = out
            .equilibria
            .iter()
            .filter(|p| p.is_rational())
            .collect();
        assert_eq!(pure.len(), 2);
    }

    #[test]
    fn fixture_shape_basis_table1() {
        let g = fixtures::table1_game();
        let fb = isolated_solutions_shape_basis(&g, 1).unwrap();
        let u = eliminate_to_univariate(&fb, 1).unwrap();
        assert_eq!(u, UniPoly::from_i64(&[0, 3, -11, 7, 1]));
        assert!(fb.is_groebner());
        // substitution at the rational roots forces the diagonal tuples
        let s0 = crate::groebner::triangular_substitute(&fb, 1, &q(0)).unwrap();
        let mut bound = BTreeMap::new();
        let mut tuples = Vec::new();
        let mut skipped = false;
        bound.insert(1usize, q(0));
        rational_tuple_search(&s0, 3, &mut bound, &mut tuples, &mut skipped);
        assert_eq!(tuples, vec![vec![q(0), q(0), q(0)]]);
        let s1 = crate::groebner::triangular_substitute(&fb, 1, &q(1)).unwrap();
        bound.clear();
        bound.insert(1usize, q(1));
        tuples.clear();
        rational_tuple_search(&s1, 3, &mut bound, &mut tuples, &mut skipped);
        assert_eq!(tuples, vec![vec![q(1), q(1), q(1)]]);
    }
}


