use std::collections::BTreeMap;
use std::sync::Arc;

use wakimoto_core::characters::{fock_character, kk_character, verma_character, CharacterSeries, RootDatum};
use wakimoto_core::fock::{FockSpace, FreeFieldData, Mode};
use wakimoto_core::scalar::{q, qr};
use wakimoto_core::Level;

/// Creation operators as (α-shift, degree in units of 1/2, first degree).
fn creators(with_b: bool) -> Vec<(i64, i64)> {
    let mut parts = Vec::new();
    for n in 1..=3 {
        parts.push((1, 2 * n)); // a_(0,α)
        parts.push((-1, 2 * n)); // a*_(0,α)
        if with_b {
            parts.push((0, 2 * n)); // b_(0,1)
        }
    }
    for n in [1, 3, 5] {
        parts.extend([(1, n), (2, n), (-1, n), (-2, n)]); // a, a* of (1,α), (1,2α)
        if with_b {
            parts.push((0, n)); // b_(1,1)
        }
    }
    parts
}

/// Counts multisets of creators (plus a*_(0,α) zero modes) by weight.
fn brute_force(with_b: bool, max_halves: i64, depth: i64) -> BTreeMap<(i64, i64), u64> {
    let mut cur: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    // the zero mode lowers the shift at no cost in degree; other factors raise it by at most 2 per half
    for p in 0..=depth + 2 * max_halves {
        cur.insert((0, -p), 1);
    }
    for (s, h) in creators(with_b) {
        let mut next = BTreeMap::new();
        for (&(deg, sh), &n) in &cur {
            let mut e = 0;
            while deg + e * h <= max_halves {
                *next.entry((deg + e * h, sh + e * s)).or_insert(0) += n;
                e += 1;
            }
        }
        cur = next;
    }
    cur.into_iter().filter(|&((_, s), n)| s >= -depth && n > 0).collect()
}

fn check_against_brute(ch: &CharacterSeries, with_b: bool, depth: i64) {
    let bf = brute_force(with_b, 6, depth);
    for (&(h, s), &n) in &bf {
        assert_eq!(ch.coeff(s, Mode::new(h, 2)), n, "shift {s} degree {h}/2");
    }
    let total: u64 = ch.entries().iter().map(|e| e.dim).sum();
    assert_eq!(total, bf.values().sum::<u64>());
}

#[test]
fn wakimoto_character_equals_verma() {
    let data = Arc::new(FreeFieldData::a2_2());
    for (k, chi) in [(q(1), qr(2, 7)), (qr(7, 3), q(0)), (q(0), qr(-5, 2))] {
        let sp = FockSpace::wakimoto(data.clone(), Level::Value(k), vec![chi]).unwrap().truncated(Mode::int(3), 2);
        let ch = fock_character(&sp, Mode::int(3)).unwrap();
        let verma = verma_character(Mode::int(3), 2, &RootDatum::a2_2());
        assert!(ch.diff(&verma).is_empty(), "{:?}", ch.diff(&verma));
        check_against_brute(&ch, true, 2);
    }
}

#[test]
fn restricted_character_equals_real_root_product() {
    let sp = FockSpace::restricted(Arc::new(FreeFieldData::a2_2()), vec![qr(7, 5)]).unwrap().truncated(Mode::int(3), 2);
    let ch = fock_character(&sp, Mode::int(3)).unwrap();
    let kk = kk_character(Mode::int(3), 2, &RootDatum::a2_2());
    assert!(ch.diff(&kk).is_empty(), "{:?}", ch.diff(&kk));
    check_against_brute(&ch, false, 2);
    // the imaginary root δ/2 is absent
    let verma = verma_character(Mode::int(3), 2, &RootDatum::a2_2());
    assert_eq!(verma.coeff(0, Mode::new(1, 2)), ch.coeff(0, Mode::new(1, 2)) + 1);
}

#[test]
fn degree_zero_is_the_highest_weight_line() {
    let sp = FockSpace::restricted(Arc::new(FreeFieldData::a2_2()), vec![q(1)]).unwrap().truncated(Mode::ZERO, 0);
    let ch = fock_character(&sp, Mode::ZERO).unwrap();
    assert_eq!(ch.entries().len(), 1);
    assert_eq!(ch.coeff(0, Mode::ZERO), 1);
}
