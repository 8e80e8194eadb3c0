use ipie_core::fixtures::{random_game, SplitMix64};
use ipie_core::pipeline::{decide_membership, enumerate_oracle, MembershipVerdict, NonMemberReason};

#[test]
#[ignore]
fn find_disagreement() {
    let mut rng = SplitMix64::new(20260808);
    let mut games = Vec::new();
    for _ in 0..200 {
        games.push(random_game(&mut rng, &[2, 2], 3));
    }
    for _ in 0..50 {
        games.push(random_game(&mut rng, &[2, 2, 2], 3));
    }
    for (idx, game) in games.iter().enumerate() {
        let oracle = enumerate_oracle(game).unwrap();
        let tm: Vec<_> = oracle.equilibria.iter().filter(|p| p.is_interior()).collect();
        let tm_rational = tm.iter().any(|p| p.has_rational_coord());
        let verdict = match decide_membership(game) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("=== game {idx} membership ERROR: {e}");
                for p in 0..game.num_players() {
                    eprintln!("payoffs[{p}] = {:?}", game.payoff_tensor(p));
                }
                eprintln!("oracle TM: {} (degenerate {})", tm.len(), oracle.degenerate_supports);
                for p in &tm {
                    eprintln!("  {:?}", p.probs());
                }
                continue;
            }
        };
        let mem_nonmember = matches!(
            &verdict,
            MembershipVerdict::NonMember { reason: NonMemberReason::RationalEquilibrium(_) }
        );
        if mem_nonmember != tm_rational {
            eprintln!("=== game {idx}: counts {:?}", game.strategy_counts());
            for p in 0..game.num_players() {
                eprintln!("payoffs[{p}] = {:?}", game.payoff_tensor(p));
            }
            eprintln!("verdict = {verdict:?}");
            eprintln!("oracle TM ({} total, {} degenerate supports):", tm.len(), oracle.degenerate_supports);
            for p in &tm {
                eprintln!("  {:?}", p.probs());
            }
            panic!("disagreement at game {idx}");
        }
    }
    eprintln!("no disagreement");
}

#[test]
#[ignore]
fn time_quadratic_slice() {
    use ipie_core::lll::{minimal_polynomial, KllParams};
    use ipie_core::unipoly::UniPoly;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let t = std::time::Instant::now();
    let mut n = 0u64;
    for a in 1i64..=5 {
        for b in -50i64..=50 {
            for c in -50i64..=50 {
                let disc = b * b - 4 * a * c;
                if disc <= 0 { continue; }
                let s = (disc as f64).sqrt() as i64;
                if (s - 1..=s + 1).any(|t| t * t == disc) { continue; }
                let g = { let mut x = a.abs(); let mut y = b.abs(); while y != 0 { let t = x % y; x = y; y = t; } let mut y2 = c.abs(); let mut x2 = x; while y2 != 0 { let t = x2 % y2; x2 = y2; y2 = t; } x2 };
                if g != 1 { continue; }
                let poly = UniPoly::from_i64(&[c, b, a]);
                let h = BigInt::from(a.abs().max(b.abs()).max(c.abs()));
                let params = KllParams::new(2, h);
                let p = params.precision_bits;
                let sqrt_disc = (BigInt::from(disc) << (2 * p)).sqrt();
                let approx = BigRational::new((BigInt::from(-b) << p) + sqrt_disc, BigInt::from(2 * a) << p);
                let got = minimal_polynomial(&approx, p, &params).unwrap();
                assert_eq!(got, poly);
                n += 1;
            }
        }
    }
    eprintln!("slice a=1..5: {n} cases in {:?} -> {:.1} us/case", t.elapsed(), t.elapsed().as_micros() as f64 / n as f64);
}
