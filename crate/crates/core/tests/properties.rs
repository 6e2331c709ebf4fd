mod common;

use common::{random_category, random_graded_poset, rng};
use koszul_core::category::{opposite, validate};
use koszul_core::factorization::FactorizationIndex;
use koszul_core::homology::{check_semisimplicial, reduced_cohomology, Field};
use koszul_core::koszul::{ext_table, ext_table_oracle, is_koszul};
use koszul_core::poset::{is_locally_cm, poset_to_category, verify_interval_equals_factorization};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

proptest! {
    #![proptest_config(config(64, 0x5eed_0001))]

    #[test]
    fn random_categories_are_valid(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed));
        prop_assert!(validate(&c).is_valid());
    }

    #[test]
    fn reduced_euler_characteristic(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed));
        let index = FactorizationIndex::new(&c);
        for p in c.non_identities_by_length() {
            let s = index.space(p).unwrap();
            let b = reduced_cohomology(&s.set, Field::Rationals);
            let alt: i64 = b
                .reduced_betti
                .iter()
                .map(|(&j, &n)| if j.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
                .sum();
            prop_assert_eq!(alt, s.set.euler_characteristic() - 1);
        }
    }

    #[test]
    fn factorization_faces_satisfy_identities(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed));
        let index = FactorizationIndex::new(&c);
        for p in c.non_identities_by_length() {
            prop_assert!(check_semisimplicial(&index.space(p).unwrap().set).is_empty());
        }
    }

    #[test]
    fn cells_are_factor_sequences(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed));
        let index = FactorizationIndex::new(&c);
        for p in c.non_identities_by_length() {
            let s = index.space(p).unwrap();
            let seqs = index.sequences(p);
            for (d, cells) in s.cells.iter().enumerate() {
                let expected = seqs.iter().filter(|q| q.len() == d + 2).count();
                prop_assert_eq!(cells.len(), expected);
                prop_assert_eq!(s.set.num_cells(d), expected);
                for q in cells {
                    prop_assert!(q.iter().all(|&f| !c.is_identity(f)));
                    prop_assert_eq!(c.compose_chain(q), Some(p));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(48, 0x5eed_0002))]

    #[test]
    fn oracle_agrees(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed));
        prop_assert_eq!(ext_table(&c, Field::Rationals), ext_table_oracle(&c, Field::Rationals));
    }

    #[test]
    fn opposite_transposes_ext(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed));
        prop_assert_eq!(
            ext_table(&c, Field::Rationals),
            ext_table(&opposite(&c), Field::Rationals).transposed()
        );
    }

    #[test]
    fn posets_cm_iff_koszul(seed in any::<u64>()) {
        let p = random_graded_poset(&mut rng(seed), 7);
        let c = poset_to_category(&p).unwrap();
        prop_assert_eq!(
            is_locally_cm(&p, Field::Rationals).locally_cohen_macaulay,
            is_koszul(&c, Field::Rationals).koszul
        );
        for (x, y) in p.intervals() {
            if x != y {
                prop_assert!(verify_interval_equals_factorization(&p, x, y, Field::Rationals).unwrap());
            }
        }
    }

    #[test]
    fn characteristic_two_never_fewer_classes(seed in any::<u64>()) {
        // mod-p ranks are at most rational ranks, so Betti numbers can only grow
        let c = random_category(&mut rng(seed));
        let index = FactorizationIndex::new(&c);
        for p in c.non_identities_by_length() {
            let s = index.space(p).unwrap();
            let q = reduced_cohomology(&s.set, Field::Rationals);
            let t = reduced_cohomology(&s.set, Field::Prime(2));
            for (&j, &n) in &q.reduced_betti {
                prop_assert!(t.get(j) >= n);
            }
        }
    }
}
