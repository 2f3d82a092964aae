mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use wkan_core::fincat::{coproduct, subpresheaf};
use wkan_core::reedy::{
    latching_mono_check, reedy_fib_cofib_check, Ambient, CheckSide, SimplicialDiagram,
    SimplicialDiagramMap, Variance,
};
use wkan_core::{Presheaf, PshMap, ReedyStructure, SimplexCategory};

/// The subpresheaf generated by the marked elements.
fn generated(x: &Arc<Presheaf>, seeds: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let cat = x.category();
    let mut keep = seeds.to_vec();
    for (c, marked) in seeds.iter().enumerate() {
        for (e, &seed) in marked.iter().enumerate() {
            if seed {
                for &m in cat.incoming(c) {
                    keep[cat.src(m)][x.restrict(m, e)] = true;
                }
            }
        }
    }
    keep
}

fn marks(x: &Presheaf, bits: &[bool]) -> Vec<Vec<bool>> {
    let mut it = bits.iter().cycle();
    (0..x.category().object_count())
        .map(|o| (0..x.size(o)).map(|_| *it.next().unwrap()).collect())
        .collect()
}

/// The inclusion between the subpresheaves generated by `small` and by
/// `small ∪ large`.
fn nested_inclusion(x: &Arc<Presheaf>, small: &[bool], large: &[bool]) -> PshMap {
    let a = generated(x, &marks(x, small));
    let b: Vec<Vec<bool>> = generated(x, &marks(x, large))
        .iter()
        .zip(&a)
        .map(|(p, q)| p.iter().zip(q).map(|(u, v)| *u || *v).collect())
        .collect();
    let (sa, _) = subpresheaf(x, &a).unwrap();
    let (sb, _) = subpresheaf(x, &b).unwrap();
    PshMap::from_fn(sa.clone(), sb.clone(), |o, e| {
        sb.at(o).index_of(sa.at(o).name(e)).unwrap()
    })
    .unwrap()
}

fn all_objects_hold(r: &ReedyStructure, m: &PshMap) -> Result<(), TestCaseError> {
    for o in 0..r.category().object_count() {
        let rep = latching_mono_check(r, m, o).unwrap();
        prop_assert!(rep.holds(), "{rep:?}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(common::cases(32))]

    #[test]
    fn monos_of_simplicial_sets_have_mono_latching_comparisons(
        small in prop::collection::vec(prop::bool::weighted(0.2), 14),
        large in prop::collection::vec(prop::bool::weighted(0.4), 14),
    ) {
        let sc = SimplexCategory::new(2).unwrap();
        let r = ReedyStructure::from_simplex(&sc).unwrap();
        let x = chaotic(&sc, 2);
        all_objects_hold(&r, &nested_inclusion(&x, &small, &large))?;
    }

    #[test]
    fn monos_of_finite_set_presheaves_have_mono_latching_comparisons(
        small in prop::collection::vec(prop::bool::weighted(0.2), 15),
        large in prop::collection::vec(prop::bool::weighted(0.4), 15),
    ) {
        let r = ReedyStructure::fin(3).unwrap();
        let x = Arc::new(Presheaf::representable(r.category().clone(), 2));
        all_objects_hold(&r, &nested_inclusion(&x, &small, &large))?;
    }
}

#[test]
fn ordinary_factorizations_are_unique() {
    for r in [
        ReedyStructure::delta(3).unwrap(),
        ReedyStructure::naturals(4).unwrap(),
    ] {
        let cat = r.category();
        for m in 0..cat.morphism_count() {
            let (lo, hi) = r.factorization(m);
            assert!(r.is_minus(lo) && r.is_plus(hi) && cat.comp(hi, lo) == m);
            let mut count = 0;
            for a in 0..cat.morphism_count() {
                for b in 0..cat.morphism_count() {
                    if r.is_minus(a) && r.is_plus(b) && cat.compose(b, a) == Some(m) {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, 1, "{}", cat.morphism_name(m));
        }
    }
}

/// A chain of Reedy fibrations between fibrant objects over `ℕ≤1`, and its
/// union, all pass the fibration check.
#[test]
fn unions_of_chains_of_reedy_fibrations() {
    let sc = SimplexCategory::new(3).unwrap();
    let base = ReedyStructure::naturals(1).unwrap();
    let b = budget();
    let constant = |space: &Arc<Presheaf>| {
        let cat = base.category();
        SimplicialDiagram::new(
            &base,
            Variance::Contravariant,
            vec![space.clone(); cat.object_count()],
            (0..cat.morphism_count())
                .map(|_| PshMap::identity(space.clone()))
                .collect(),
        )
        .unwrap()
    };
    let pt = Arc::new(sc.point());
    let mut x = discrete(&sc, 1);
    let mut chain = vec![x.clone()];
    for piece in [chaotic(&sc, 2), discrete(&sc, 2), chaotic(&sc, 3)] {
        x = coproduct(&x, &piece).unwrap().0;
        chain.push(x.clone());
    }
    for stage in &chain {
        let p = to_point(&sc, stage);
        let map =
            SimplicialDiagramMap::new(&base, constant(stage), constant(&pt), vec![p.clone(), p])
                .unwrap();
        let ambient = Ambient::TruncatedSSets {
            map: &map,
            sc: &sc,
            dim: 2,
        };
        let report = reedy_fib_cofib_check(
            &base,
            ambient,
            CheckSide::Fibration,
            Variance::Contravariant,
            &b,
        )
        .unwrap();
        assert!(report.holds, "{} vertices", stage.size(0));
    }
}
