//! Reference games and deterministic corpus generation.
//!
//! The three-player example game ships in a convention that had to be pinned
//! by search: the published table is ambiguous about which table axis belongs
//! to which player, and only one assignment reproduces the documented
//! univariate eliminations. `table1_orientation_search` performs that search;
//! `table1_game` returns the pinned result.

use crate::game::{build_game_system, Game, SystemForm};
use crate::groebner::{buchberger, eliminate_to_univariate};
use crate::multipoly::MonomialOrder;
use crate::unipoly::UniPoly;
use num_bigint::BigInt;

/// Payoff triples of the published 3-player 2-strategy table, indexed by
/// (row, column, block).
const TABLE1: [[[[i64; 3]; 2]; 2]; 2] = [
    // row a
    [
        // col A: block 1, block 2
        [[3, 0, 2], [1, 0, 0]],
        // col B
        [[0, 2, 0], [0, 1, 0]],
    ],
    // row b
    [
        [[0, 1, 0], [0, 3, 0]],
        [[1, 0, 0], [2, 0, 3]],
    ],
];

/// Builds the table-1 game under a given convention: `axis_to_player[axis]`
/// is the player owning that table axis (0 = rows, 1 = columns, 2 = blocks),
/// `pos_to_player[pos]` is the player receiving the payoff at that position
/// of each cell triple.
pub fn table1_with_orientation(axis_to_player: [usize; 3], pos_to_player: [usize; 3]) -> Game {
    let mut payoffs = vec![vec![BigInt::from(0); 8]; 3];
    for j0 in 0..2usize {
        for j1 in 0..2usize {
            for j2 in 0..2usize {
                let profile = [j0, j1, j2];
                let r = profile[axis_to_player[0]];
                let c = profile[axis_to_player[1]];
                let t = profile[axis_to_player[2]];
                let cell = &TABLE1[r][c][t];
                let flat = j0 * 4 + j1 * 2 + j2;
                for pos in 0..3 {
                    payoffs[pos_to_player[pos]][flat] = BigInt::from(cell[pos]);
                }
            }
        }
    }
    Game::new(vec![2, 2, 2], payoffs).expect("valid shape")
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// The per-variable minimal polynomials the pinned convention must reproduce
/// from its indifference system: 5x^2-16x+9, y^2+8y-3, 5z^2+4z-3.
pub fn table1_expected_minpolys() -> [UniPoly; 3] {
    [
        UniPoly::from_i64(&[9, -16, 5]),
        UniPoly::from_i64(&[-3, 8, 1]),
        UniPoly::from_i64(&[-3, 4, 5]),
    ]
}

/// Searches all 36 axis/position conventions for the one whose indifference
/// system eliminates to the documented per-variable quadratics. Returns the
/// matching convention and game.
pub fn table1_orientation_search() -> Option<([usize; 3], [usize; 3], Game)> {
    let targets = table1_expected_minpolys();
    for axis in PERMS {
        for pos in PERMS {
            let game = table1_with_orientation(axis, pos);
            let system = build_game_system(&game, SystemForm::Indifference);
            let mut ok = true;
            for v in 0..3 {
                let order = MonomialOrder::lex_with_lowest(v, 3);
                let Ok(gb) = buchberger(&system.polynomials, &order) else {
                    ok = false;
                    break;
                };
                match eliminate_to_univariate(&gb, v) {
                    Ok(u) if u == targets[v] => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Some((axis, pos, game));
            }
        }
    }
    None
}

/// The pinned table-1 game: rows belong to player 3, columns to player 2,
/// blocks to player 1; payoff positions are in player order.
pub fn table1_game() -> Game {
    table1_with_orientation([2, 1, 0], [0, 1, 2])
}

/// Matching pennies: the unique equilibrium is fully mixed and rational.
pub fn matching_pennies() -> Game {
    Game::from_i64(
        vec![2, 2],
        vec![vec![1, -1, -1, 1], vec![-1, 1, 1, -1]],
    )
    .expect("valid shape")
}

/// Both players have a strictly dominant first strategy.
pub fn dominant_game() -> Game {
    Game::from_i64(vec![2, 2], vec![vec![2, 2, 0, 0], vec![3, 1, 3, 1]]).expect("valid shape")
}

/// SplitMix64: tiny deterministic generator for seeded corpora.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi] inclusive.
    pub fn next_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

/// Seeded random integer game with the given strategy counts and payoff
/// magnitude bound.
pub fn random_game(rng: &mut SplitMix64, counts: &[usize], bound: i64) -> Game {
    let k_star: usize = counts.iter().product();
    let payoffs = (0..counts.len())
        .map(|_| (0..k_star).map(|_| rng.next_in(-bound, bound)).collect())
        .collect();
    Game::from_i64(counts.to_vec(), payoffs).expect("valid shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_search_pins_the_convention() {
        let (axis, pos, game) = table1_orientation_search().expect("a convention matches");
        assert_eq!(axis, [2, 1, 0]);
        assert_eq!(pos, [0, 1, 2]);
        assert_eq!(game, table1_game());
    }

    #[test]
    fn pinned_tensor_values() {
        let g = table1_game();
        // cell (a, A, 1) holds (3, 0, 2); it is profile (block1, colA, rowa)
        assert_eq!(g.payoff(0, &[0, 0, 0]), &BigInt::from(3));
        assert_eq!(g.payoff(1, &[0, 0, 0]), &BigInt::from(0));
        assert_eq!(g.payoff(2, &[0, 0, 0]), &BigInt::from(2));
        // player-3 payoffs sum to 5 over the table
        let sum: BigInt = g.payoff_tensor(2).iter().sum();
        assert_eq!(sum, BigInt::from(5));
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut r = SplitMix64::new(7);
        for _ in 0..1000 {
            let v = r.next_in(-3, 3);
            assert!((-3..=3).contains(&v));
        }
    }
}

