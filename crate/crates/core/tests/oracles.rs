//! Computed values checked against independent closed forms and brute force.

use zlab_core::verify::{self, VerifyConfig};
use zlab_core::{epsilon, FiniteGroup, GroupWord, Quotient, Word};

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

/// Witt's necklace count: rank of the degree-`m` part of the free Lie algebra.
fn witt(k: u64, m: u64) -> u64 {
    let s: i64 = (1..=m).filter(|d| m.is_multiple_of(*d)).map(|d| mobius(d) * (k as i64).pow((m / d) as u32)).sum();
    (s / m as i64) as u64
}

/// dim S_n/S_{n+1} for the free group: the free restricted Lie algebra
/// in degree n, i.e. the sum of Witt counts over n/p^j.
fn layer_dim(k: u64, p: u64, n: u64) -> u64 {
    let mut total = 0;
    let mut q = 1;
    while n.is_multiple_of(q) {
        total += witt(k, n / q);
        q *= p;
    }
    total
}

#[test]
fn quotient_orders_match_restricted_lie_dimensions() {
    for (k, p, m) in [(1, 2, 4), (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 5), (2, 3, 3), (2, 3, 4), (3, 2, 3), (2, 5, 3)] {
        let q = Quotient::build(k, p, m).unwrap();
        let exp: u64 = (1..m as u64).map(|n| layer_dim(k as u64, p as u64, n)).sum();
        assert_eq!(q.order() as u64, (p as u64).pow(exp as u32), "k={k} p={p} m={m}");
        for n in 1..m {
            let tail: u64 = (n as u64..m as u64).map(|i| layer_dim(k as u64, p as u64, i)).sum();
            assert_eq!(q.filtration_image(n).unwrap().len() as u64, (p as u64).pow(tail as u32));
        }
    }
}

#[test]
fn filtration_quotient_dimensions_in_reports() {
    let cfg = VerifyConfig::default();
    for (k, p, n) in [(2, 2, 2), (2, 2, 3), (2, 3, 2)] {
        let r = verify::verify_theorem_b(k, p, n, &cfg).unwrap();
        assert_eq!(r.metrics["dim_filtration_quotient"], layer_dim(k as u64, p as u64, n as u64));
    }
}

/// eps_w(g) by summing over all ways of reading `w` off the letters of `g`:
/// letter `a^+1` contributes X_a^0 or X_a^1, letter `a^-1` contributes
/// (-1)^j X_a^j for any j.
fn epsilon_oracle(w: &[usize], letters: &[(usize, i64)], m: i64) -> i64 {
    match letters.split_first() {
        None => i64::from(w.is_empty()),
        Some((&(a, e), rest)) => {
            let mut total = epsilon_oracle(w, rest, m);
            let mut j = 0;
            while j < w.len() && w[j] == a {
                j += 1;
                if e == 1 && j > 1 {
                    break;
                }
                let sign = if e == 1 || j % 2 == 0 { 1 } else { -1 };
                total += sign * epsilon_oracle(&w[j..], rest, m);
            }
            total.rem_euclid(m)
        }
    }
}

fn unit_letters(g: &GroupWord) -> Vec<(usize, i64)> {
    g.syllables()
        .iter()
        .flat_map(|&(a, e)| std::iter::repeat_n((a, e.signum()), e.unsigned_abs() as usize))
        .collect()
}

#[test]
fn epsilon_matches_brute_force_expansion() {
    let words = ["a0^3*a1^-2", "[a0,a1]", "[[a0,a1],a0]", "a1^-1*a0^2*a1*a0^-3", "[a0^2,a1^-1]*a0"];
    for text in words {
        let g = GroupWord::parse(text).unwrap();
        let letters = unit_letters(&g);
        for m in [2u32, 3, 4, 5] {
            for len in 0..=4 {
                for w in Word::all_of_length(2, len) {
                    let expect = epsilon_oracle(w.letters(), &letters, m as i64) as u32;
                    assert_eq!(epsilon(&w, &g, m), expect, "{text} {w} mod {m}");
                }
            }
        }
    }
}

#[test]
fn small_anchor_values() {
    // (1 + X)^-1 = 1 - X + X^2 - ...
    let inv = GroupWord::parse("a0^-1").unwrap();
    assert_eq!(epsilon(&Word::new(vec![0, 0, 0]), &inv, 5), 4);
    // a^p = 1 + X^p mod p
    let cube = GroupWord::parse("a0^3").unwrap();
    assert_eq!(epsilon(&Word::new(vec![0]), &cube, 3), 0);
    assert_eq!(epsilon(&Word::new(vec![0, 0, 0]), &cube, 3), 1);
    // [a,b] = 1 + XY - YX + ...
    let c = GroupWord::parse("[a0,a1]").unwrap();
    assert_eq!(epsilon(&Word::new(vec![0, 1]), &c, 3), 1);
    assert_eq!(epsilon(&Word::new(vec![1, 0]), &c, 3), 2);
}
