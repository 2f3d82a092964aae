mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wkan_core::pshw::{enumerate_psh_stage, stage_equation, NaturalityStatus, PshForest};

proptest! {
    #![proptest_config(common::cases(32))]

    #[test]
    fn stages_are_closed_natural_and_graded(seed in any::<u64>(), shape in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_map(&mut rng, &shapes()[shape], 2);
        let cat = f.category().clone();
        let mut pf = PshForest::new(&f).unwrap();
        let st = enumerate_psh_stage(&mut pf, 3, &budget()).unwrap();
        for k in 0..3 {
            let iso = stage_equation(&pf, &st, k, &budget()).unwrap();
            prop_assert!(iso.sup.is_iso());
            // Stages grow.
            for (c, ws) in st.stages[k].trees.iter().enumerate() {
                for w in ws {
                    prop_assert!(st.stages[k + 1].trees[c].contains(w));
                }
            }
        }
        for (c, ws) in st.stages[3].trees.iter().enumerate() {
            for &w in ws {
                prop_assert!(pf.psh_rank(w) < 3);
                prop_assert_eq!(pf.naturality_status(w), NaturalityStatus::HereditarilyNatural);
                for &alpha in cat.incoming(c) {
                    let r = pf.restrict_tree(w, alpha).unwrap();
                    prop_assert!(st.stages[3].position(r).is_some());
                    prop_assert_eq!(pf.naturality_status(r), NaturalityStatus::HereditarilyNatural);
                    prop_assert!(pf.psh_rank(r) <= pf.psh_rank(w));
                }
            }
        }
    }
}

#[test]
fn running_example_grows_by_one_tree_per_stage() {
    let f = running_example();
    let mut pf = PshForest::new(&f).unwrap();
    let st = enumerate_psh_stage(&mut pf, 6, &budget()).unwrap();
    let c0 = f.category().object_index("C0").unwrap();
    let c1 = f.category().object_index("C1").unwrap();
    for k in 0..=6 {
        assert_eq!(st.stages[k].sizes()[c0], k);
        assert_eq!(st.stages[k].sizes()[c1], k.saturating_sub(1));
    }
    assert_eq!(st.stabilized_at, None);
}
