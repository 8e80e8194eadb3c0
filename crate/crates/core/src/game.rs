//! Finite normal-form games with integer payoffs: the payoff tensor, mixed
//! profiles, the polynomial game system in complementarity or indifference
//! form, expected payoffs and exact equilibrium verification.

use crate::algebraic::{sign_at, AlgebraicNumber, Sign};
use crate::multipoly::MultiPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("every player needs at least 2 strategies")]
    BadStrategyCount,
    #[error("payoff tensor shape mismatch: expected {expected} entries per player, got {got}")]
    PayoffShape { expected: usize, got: usize },
    #[error("player index out of range")]
    PlayerIndex,
    #[error("profile arity mismatch")]
    ArityMismatch,
    #[error("probability outside [0, 1]")]
    ProbabilityRange,
    #[error("probabilities do not sum to 1")]
    ProbabilitySum,
    #[error("operation requires a rational profile")]
    IrrationalProfile,
    #[error("players with more than 2 strategies need rational coordinates")]
    UnsupportedAlgebraicArity,
}

/// Integer-payoff normal-form game. `payoffs[i]` is player i's tensor slice,
/// row-major over pure profiles (last player's strategy varies fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    strategy_counts: Vec<usize>,
    payoffs: Vec<Vec<BigInt>>,
}

impl Game {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<Vec<BigInt>>) -> Result<Self, GameError> {
        if strategy_counts.is_empty() || strategy_counts.iter().any(|&k| k < 2) {
            return Err(GameError::BadStrategyCount);
        }
        let k_star: usize = strategy_counts.iter().product();
        if payoffs.len() != strategy_counts.len() {
            return Err(GameError::PayoffShape {
                expected: strategy_counts.len() * k_star,
                got: payoffs.iter().map(|p| p.len()).sum(),
            });
        }
        for p in &payoffs {
            if p.len() != k_star {
                return Err(GameError::PayoffShape {
                    expected: k_star,
                    got: p.len(),
                });
            }
        }
        Ok(Game {
            strategy_counts,
            payoffs,
        })
    }

    pub fn from_i64(strategy_counts: Vec<usize>, payoffs: Vec<Vec<i64>>) -> Result<Self, GameError> {
        Game::new(
            strategy_counts,
            payoffs
                .into_iter()
                .map(|p| p.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn num_players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    /// Sum of strategy counts.
    pub fn k_plus(&self) -> usize {
        self.strategy_counts.iter().sum()
    }

    /// Product of strategy counts.
    pub fn k_star(&self) -> usize {
        self.strategy_counts.iter().product()
    }

    pub fn payoff_tensor(&self, player: usize) -> &[BigInt] {
        &self.payoffs[player]
    }

    fn flat_index(&self, profile: &[usize]) -> usize {
        let mut idx = 0;
        for (i, &j) in profile.iter().enumerate() {
            debug_assert!(j < self.strategy_counts[i]);
            idx = idx * self.strategy_counts[i] + j;
        }
        idx
    }

    /// Payoff to `player` at a pure profile (0-based strategies).
    pub fn payoff(&self, player: usize, profile: &[usize]) -> &BigInt {
        &self.payoffs[player][self.flat_index(profile)]
    }

    pub fn max_abs_payoff(&self) -> BigInt {
        self.payoffs
            .iter()
            .flat_map(|p| p.iter())
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Iterates all pure profiles in row-major order.
    pub fn pure_profiles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &k in &self.strategy_counts {
            let mut next = Vec::with_capacity(out.len() * k);
            for prefix in &out {
                for j in 0..k {
                    let mut p = prefix.clone();
                    p.push(j);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

/// One mixed-strategy coordinate: exact rational or exact algebraic.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileCoord {
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
}

impl ProfileCoord {
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            ProfileCoord::Rational(q) => Some(q.clone()),
            ProfileCoord::Algebraic(a) => a.as_rational(),
        }
    }

    pub fn to_algebraic(&self) -> AlgebraicNumber {
        match self {
            ProfileCoord::Rational(q) => AlgebraicNumber::from_rational(q),
            ProfileCoord::Algebraic(a) => a.clone(),
        }
    }

    pub fn in_unit_interval(&self, strict: bool) -> bool {
        let zero = BigRational::zero();
        let one = BigRational::one();
        match self {
            ProfileCoord::Rational(q) => {
                if strict {
                    *q > zero && *q < one
                } else {
                    *q >= zero && *q <= one
                }
            }
            ProfileCoord::Algebraic(a) => {
                let lo = a.cmp_rational(&zero);
                let hi = a.cmp_rational(&one);
                if strict {
                    lo == std::cmp::Ordering::Greater && hi == std::cmp::Ordering::Less
                } else {
                    lo != std::cmp::Ordering::Less && hi != std::cmp::Ordering::Greater
                }
            }
        }
    }
}

/// Mixed profile: per player, one probability per strategy, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedProfile {
    probs: Vec<Vec<ProfileCoord>>,
}

impl MixedProfile {
    pub fn new(game: &Game, probs: Vec<Vec<ProfileCoord>>) -> Result<Self, GameError> {
        if probs.len() != game.num_players() {
            return Err(GameError::ArityMismatch);
        }
        for (i, row) in probs.iter().enumerate() {
            if row.len() != game.strategy_counts[i] {
                return Err(GameError::ArityMismatch);
            }
            for c in row {
                if !c.in_unit_interval(false) {
                    return Err(GameError::ProbabilityRange);
                }
            }
            // exact sum-to-one
            if row.iter().all(|c| matches!(c, ProfileCoord::Rational(_))) {
                let sum: BigRational = row
                    .iter()
                    .map(|c| c.as_rational().unwrap())
                    .sum();
                if sum != BigRational::one() {
                    return Err(GameError::ProbabilitySum);
                }
            } else {
                let k = row.len();
                let mut poly = MultiPoly::from_int(k, -1);
                for v in 0..k {
                    poly = poly.add(&MultiPoly::var(k, v));
                }
                let point: Vec<AlgebraicNumber> = row.iter().map(|c| c.to_algebraic()).collect();
                if sign_at(&point, &poly) != Sign::Zero {
                    return Err(GameError::ProbabilitySum);
                }
            }
        }
        Ok(MixedProfile { probs })
    }

    pub fn pure(game: &Game, strategies: &[usize]) -> Result<Self, GameError> {
        if strategies.len() != game.num_players() {
            return Err(GameError::ArityMismatch);
        }
        let probs = strategies
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (0..game.strategy_counts[i])
                    .map(|s| {
                        ProfileCoord::Rational(if s == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        })
                    })
                    .collect()
            })
            .collect();
        MixedProfile::new(game, probs)
    }

    pub fn uniform(game: &Game) -> Self {
        let probs = game
            .strategy_counts
            .iter()
            .map(|&k| {
                (0..k)
                    .map(|_| {
                        ProfileCoord::Rational(BigRational::new(BigInt::one(), BigInt::from(k)))
                    })
                    .collect()
            })
            .collect();
        MixedProfile { probs }
    }

    /// Builds a profile from the free coordinates (each player's last
    /// probability is one minus the rest). Algebraic coordinates are only
    /// supported for 2-strategy players.
    pub fn from_free_coords(game: &Game, coords: &[ProfileCoord]) -> Result<Self, GameError> {
        let free: usize = game.strategy_counts.iter().map(|k| k - 1).sum();
        if coords.len() != free {
            return Err(GameError::ArityMismatch);
        }
        let mut probs = Vec::with_capacity(game.num_players());
        let mut idx = 0;
        for &k in &game.strategy_counts {
            let mine = &coords[idx..idx + (k - 1)];
            idx += k - 1;
            let all_rational = mine.iter().all(|c| c.as_rational().is_some());
            let row: Vec<ProfileCoord> = if all_rational {
                let sum: BigRational = mine.iter().map(|c| c.as_rational().unwrap()).sum();
                let mut r: Vec<ProfileCoord> = mine
                    .iter()
                    .map(|c| ProfileCoord::Rational(c.as_rational().unwrap()))
                    .collect();
                r.push(ProfileCoord::Rational(BigRational::one() - sum));
                r
            } else if k == 2 {
                let a = mine[0].to_algebraic();
                vec![mine[0].clone(), ProfileCoord::Algebraic(a.one_minus())]
            } else {
                return Err(GameError::UnsupportedAlgebraicArity);
            };
            probs.push(row);
        }
        MixedProfile::new(game, probs)
    }

    pub fn probs(&self) -> &[Vec<ProfileCoord>] {
        &self.probs
    }

    pub fn is_rational(&self) -> bool {
        self.probs
            .iter()
            .all(|row| row.iter().all(|c| c.as_rational().is_some()))
    }

    /// All coordinates strictly inside (0, 1): totally mixed.
    pub fn is_interior(&self) -> bool {
        self.probs
            .iter()
            .all(|row| row.iter().all(|c| c.in_unit_interval(true)))
    }

    pub fn has_rational_coord(&self) -> bool {
        self.probs
            .iter()
            .any(|row| row.iter().any(|c| c.as_rational().is_some()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemForm {
    Complementarity,
    Indifference,
}

/// Polynomial system whose solutions contain the game's equilibria.
#[derive(Clone, Debug)]
pub struct GameSystem {
    pub form: SystemForm,
    pub polynomials: Vec<MultiPoly>,
    /// (player, strategy) label for each variable.
    pub variables: Vec<(usize, usize)>,
}

impl GameSystem {
    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }
}

/// Variable index of (player, strategy) within the chosen variable layout.
fn var_layout(game: &Game, free_only: bool) -> Vec<(usize, usize)> {
    let mut vars = Vec::new();
    for (i, &k) in game.strategy_counts().iter().enumerate() {
        let hi = if free_only { k - 1 } else { k };
        for j in 0..hi {
            vars.push((i, j));
        }
    }
    vars
}

/// Per-player list of strategy-probability expressions over the system
/// variables; in the indifference layout the last probability is
/// 1 - (sum of the player's free variables).
fn prob_exprs(game: &Game, vars: &[(usize, usize)], free_only: bool) -> Vec<Vec<MultiPoly>> {
    let n = vars.len();
    let index_of = |player: usize, strat: usize| -> Option<usize> {
        vars.iter().position(|&(p, s)| p == player && s == strat)
    };
    game.strategy_counts()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            (0..k)
                .map(|j| {
                    if let Some(v) = index_of(i, j) {
                        MultiPoly::var(n, v)
                    } else {
                        debug_assert!(free_only && j == k - 1);
                        let mut p = MultiPoly::one(n);
                        for jj in 0..k - 1 {
                            let v = index_of(i, jj).unwrap();
                            p = p.sub(&MultiPoly::var(n, v));
                        }
                        p
                    }
                })
                .collect()
        })
        .collect()
}

/// Expected payoff to `player` for playing pure strategy `strat`, as a
/// polynomial over the system variables (product over the other players).
fn pure_payoff_poly(
    game: &Game,
    exprs: &[Vec<MultiPoly>],
    player: usize,
    strat: usize,
) -> MultiPoly {
    let n = exprs[0][0].num_vars();
    let others: Vec<usize> = (0..game.num_players()).filter(|&m| m != player).collect();
    let mut acc = MultiPoly::zero(n);
    let mut combo = vec![0usize; others.len()];
    loop {
        let mut profile = vec![0usize; game.num_players()];
        profile[player] = strat;
        let mut term = MultiPoly::one(n);
        for (oi, &m) in others.iter().enumerate() {
            profile[m] = combo[oi];
            term = term.mul(&exprs[m][combo[oi]]);
        }
        let a = game.payoff(player, &profile);
        acc = acc.add(&term.scale(&BigRational::from_integer(a.clone())));
        // next combo
        let mut carry = true;
        for (oi, &m) in others.iter().enumerate() {
            if !carry {
                break;
            }
            combo[oi] += 1;
            if combo[oi] < game.strategy_counts()[m] {
                carry = false;
            } else {
                combo[oi] = 0;
            }
        }
        if carry {
            break;
        }
    }
    acc
}

/// Builds the game system in the requested form.
///
/// Complementarity keeps every probability as a variable and emits
/// x_ij * (alpha_i - payoff_ij) for all pairs plus the sum-to-one relations.
/// Indifference eliminates each player's last probability and emits the
/// payoff-equality polynomials against the last strategy: a square system.
pub fn build_game_system(game: &Game, form: SystemForm) -> GameSystem {
    match form {
        SystemForm::Indifference => {
            let vars = var_layout(game, true);
            let exprs = prob_exprs(game, &vars, true);
            let mut polys = Vec::new();
            for (i, &k) in game.strategy_counts().iter().enumerate() {
                let last = pure_payoff_poly(game, &exprs, i, k - 1);
                for j in 0..k - 1 {
                    let pj = pure_payoff_poly(game, &exprs, i, j);
                    polys.push(pj.sub(&last));
                }
            }
            GameSystem {
                form,
                polynomials: polys,
                variables: vars,
            }
        }
        SystemForm::Complementarity => {
            let vars = var_layout(game, false);
            let exprs = prob_exprs(game, &vars, false);
            let n = vars.len();
            let mut polys = Vec::new();
            for (i, &k) in game.strategy_counts().iter().enumerate() {
                // alpha_i = sum_j x_ij * payoff_ij
                let mut alpha = MultiPoly::zero(n);
                for j in 0..k {
                    alpha = alpha.add(&exprs[i][j].mul(&pure_payoff_poly(game, &exprs, i, j)));
                }
                for j in 0..k {
                    let gap = alpha.sub(&pure_payoff_poly(game, &exprs, i, j));
                    polys.push(exprs[i][j].mul(&gap));
                }
            }
            for (i, &k) in game.strategy_counts().iter().enumerate() {
                let mut sum = MultiPoly::from_int(n, -1);
                for j in 0..k {
                    sum = sum.add(&exprs[i][j]);
                }
                let _ = i;
                polys.push(sum);
            }
            GameSystem {
                form,
                polynomials: polys,
                variables: vars,
            }
        }
    }
}

/// Exact expected payoff for a rational profile.
pub fn expected_payoff(
    game: &Game,
    profile: &MixedProfile,
    player: usize,
) -> Result<BigRational, GameError> {
    if player >= game.num_players() {
        return Err(GameError::PlayerIndex);
    }
    if profile.probs.len() != game.num_players() {
        return Err(GameError::ArityMismatch);
    }
    if !profile.is_rational() {
        return Err(GameError::IrrationalProfile);
    }
    let probs: Vec<Vec<BigRational>> = profile
        .probs
        .iter()
        .map(|row| row.iter().map(|c| c.as_rational().unwrap()).collect())
        .collect();
    let mut acc = BigRational::zero();
    for pure in game.pure_profiles() {
        let mut w = BigRational::one();
        for (i, &j) in pure.iter().enumerate() {
            w *= &probs[i][j];
        }
        if w.is_zero() {
            continue;
        }
        acc += BigRational::from_integer(game.payoff(player, &pure).clone()) * w;
    }
    Ok(acc)
}

/// Expected payoff to `player` when deviating to pure strategy `strat`,
/// other players following `profile` (rational coordinates).
fn deviation_payoff(
    game: &Game,
    probs: &[Vec<BigRational>],
    player: usize,
    strat: usize,
) -> BigRational {
    let mut acc = BigRational::zero();
    for pure in game.pure_profiles() {
        if pure[player] != strat {
            continue;
        }
        let mut w = BigRational::one();
        for (i, &j) in pure.iter().enumerate() {
            if i == player {
                continue;
            }
            w *= &probs[i][j];
        }
        if w.is_zero() {
            continue;
        }
        acc += BigRational::from_integer(game.payoff(player, &pure).clone()) * w;
    }
    acc
}

/// True iff no player gains by a unilateral pure deviation (weak
/// inequalities; a zero gap counts as satisfied).
pub fn verify_equilibrium(game: &Game, profile: &MixedProfile) -> Result<bool, GameError> {
    if profile.probs.len() != game.num_players() {
        return Err(GameError::ArityMismatch);
    }
    if profile.is_rational() {
        let probs: Vec<Vec<BigRational>> = profile
            .probs
            .iter()
            .map(|row| row.iter().map(|c| c.as_rational().unwrap()).collect())
            .collect();
        for i in 0..game.num_players() {
            let alpha = expected_payoff(game, profile, i)?;
            for j in 0..game.strategy_counts()[i] {
                if alpha < deviation_payoff(game, &probs, i, j) {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    // algebraic path: exact sign decisions on gap polynomials over the free
    // coordinates (each player's last probability eliminated), which keeps
    // the conjugate-product degree of the sign bound small
    let point: Vec<AlgebraicNumber> = profile
        .probs
        .iter()
        .flat_map(|row| row[..row.len() - 1].iter().map(|c| c.to_algebraic()))
        .collect();
    for gap in free_gap_polynomials(game) {
        if sign_at(&point, &gap) == Sign::Negative {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deviation-gap polynomials (expected payoff minus each pure deviation, all
/// players) over the free coordinates of the indifference layout.
pub fn free_gap_polynomials(game: &Game) -> Vec<MultiPoly> {
    let vars = var_layout(game, true);
    let exprs = prob_exprs(game, &vars, true);
    let n = vars.len();
    let mut gaps = Vec::new();
    for (i, &k) in game.strategy_counts().iter().enumerate() {
        let mut alpha = MultiPoly::zero(n);
        for j in 0..k {
            alpha = alpha.add(&exprs[i][j].mul(&pure_payoff_poly(game, &exprs, i, j)));
        }
        for j in 0..k {
            gaps.push(alpha.sub(&pure_payoff_poly(game, &exprs, i, j)));
        }
    }
    gaps
}
