use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wakimoto_core::fock::{adjoint_holds, basis_up_to_degree, random_word, Family, FockSpace, FockVector, FreeFieldData, Mode, ModeGenerator, OscillatorWord};

fn spaces() -> (FockSpace, FockSpace) {
    let d = Arc::new(FreeFieldData::a2_2());
    (FockSpace::dual(d.clone()).truncated(Mode::int(8), 10), FockSpace::beta_gamma(d).truncated(Mode::int(8), 10))
}

fn small_bases(d: Mode) -> (Vec<FockVector<wakimoto_core::Q>>, Vec<FockVector<wakimoto_core::Q>>) {
    let data = Arc::new(FreeFieldData::a2_2());
    let vs = basis_up_to_degree(&FockSpace::dual(data.clone()).truncated(d, 1), d);
    let ws = basis_up_to_degree(&FockSpace::beta_gamma(data).truncated(d, 1), d);
    (vs.into_iter().map(FockVector::monomial).collect(), ws.into_iter().map(FockVector::monomial).collect())
}

#[test]
fn single_oscillators_up_to_degree_two() {
    let (dv, mv) = spaces();
    let (vs, ws) = small_bases(Mode::int(2));
    let data = mv.data().clone();
    let mut checked = 0usize;
    for family in [Family::A, Family::AStar] {
        for label in 0..3u8 {
            for n in Mode::coset_range(data.lattice_offset(family, label), Mode::int(-2), Mode::int(2)) {
                let word = OscillatorWord::new(vec![ModeGenerator::new(family, label, n)]);
                for w in &ws {
                    for v in &vs {
                        assert!(adjoint_holds(&word, v, &dv, w, &mv).unwrap(), "{word:?}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn seeded_random_words() {
    let (dv, mv) = spaces();
    let (vs, ws) = small_bases(Mode::int(1));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let word = random_word(&mut rng, mv.data(), 4, Mode::new(3, 2));
        for w in &ws {
            for v in &vs {
                assert!(adjoint_holds(&word, v, &dv, w, &mv).unwrap(), "{word:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn random_words_are_adjoint(seed in any::<u64>(), wi in 0usize..64, vi in 0usize..64) {
        let (dv, mv) = spaces();
        let (vs, ws) = small_bases(Mode::int(1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word = random_word(&mut rng, mv.data(), 3, Mode::int(1));
        prop_assert!(adjoint_holds(&word, &vs[vi % vs.len()], &dv, &ws[wi % ws.len()], &mv).unwrap());
    }
}
