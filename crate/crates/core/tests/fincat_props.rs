mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wkan_core::fincat::{finite_colimit, finite_limit, image_factorization, FinDiagram};
use wkan_core::{FinCategory, FinFn, FinSet, ReedyStructure};

fn associative(cat: &FinCategory) -> bool {
    let n = cat.morphism_count();
    (0..n).all(|h| {
        (0..n).all(|g| {
            (0..n).all(|f| match (cat.compose(h, g), cat.compose(g, f)) {
                (Some(hg), Some(gf)) => cat.compose(hg, f) == cat.compose(h, gf),
                _ => true,
            })
        })
    })
}

#[test]
fn generated_categories_are_associative() {
    let cats = [
        ReedyStructure::delta(3).unwrap().category().clone(),
        ReedyStructure::fin(3).unwrap().category().clone(),
        ReedyStructure::fin_pointed(2).unwrap().category().clone(),
        Arc::new(
            FinCategory::walking_arrow()
                .product(&FinCategory::walking_arrow())
                .unwrap(),
        ),
        Arc::new(ReedyStructure::delta(1).unwrap().category().opposite()),
    ];
    for cat in &cats {
        assert!(associative(cat), "{} morphisms", cat.morphism_count());
    }
}

/// A span `L ← M → R` or cospan with random functions between sets of size
/// at most 3.
fn diagram(seed: u64, cospan: bool) -> FinDiagram {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Arc::new(
        wkan_core::fincat::CategoryBuilder::new()
            .objects(["X", "Y", "Z"])
            .morphism(
                "f",
                if cospan { "X" } else { "Z" },
                if cospan { "Z" } else { "X" },
            )
            .morphism(
                "g",
                if cospan { "Y" } else { "Z" },
                if cospan { "Z" } else { "Y" },
            )
            .build()
            .unwrap(),
    );
    let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=3)).collect();
    let nodes = sizes.iter().map(|&n| FinSet::numbered("e", n)).collect();
    let edges = (0..shape.morphism_count())
        .map(|m| {
            let (s, t) = (sizes[shape.src(m)], sizes[shape.dst(m)]);
            if shape.is_identity(m) {
                FinFn::identity(s)
            } else {
                FinFn::new((0..s).map(|_| rng.gen_range(0..t)).collect(), t).unwrap()
            }
        })
        .collect();
    FinDiagram::new(shape, nodes, edges).unwrap()
}

fn cones_into(d: &FinDiagram, t: usize) -> Vec<Vec<Vec<usize>>> {
    let sizes: Vec<usize> = d.nodes().iter().map(FinSet::len).collect();
    let mut out = vec![vec![]];
    for &n in &sizes {
        let fs: Vec<Vec<usize>> = wkan_core::fincat::all_functions(t, n).collect();
        out = out
            .into_iter()
            .flat_map(|c| {
                fs.iter()
                    .map(move |f| [c.clone(), vec![f.clone()]].concat())
            })
            .collect();
    }
    let shape = d.shape();
    out.into_iter()
        .filter(|legs| {
            (0..shape.morphism_count()).all(|m| {
                (0..t).all(|x| d.edge(m).apply(legs[shape.src(m)][x]) == legs[shape.dst(m)][x])
            })
        })
        .collect()
}

proptest! {
    #![proptest_config(common::cases(48))]

    #[test]
    fn limits_are_universal(seed in any::<u64>(), t in 0usize..=2) {
        let d = diagram(seed, true);
        let cone = finite_limit(&d);
        for legs in cones_into(&d, t) {
            let mediating = wkan_core::fincat::all_functions(t, cone.apex.len())
                .filter(|h| legs.iter().enumerate().all(|(i, leg)| (0..t).all(|x| cone.legs[i].apply(h[x]) == leg[x])))
                .count();
            prop_assert_eq!(mediating, 1);
        }
    }

    #[test]
    fn colimits_are_universal(seed in any::<u64>(), t in 1usize..=2) {
        let d = diagram(seed, false);
        let co = finite_colimit(&d);
        let shape = d.shape().clone();
        let sizes: Vec<usize> = d.nodes().iter().map(FinSet::len).collect();
        // Test cocones into a set of size t, built from all leg choices.
        let mut cocones = vec![vec![]];
        for &n in &sizes {
            let fs: Vec<Vec<usize>> = wkan_core::fincat::all_functions(n, t).collect();
            cocones = cocones.into_iter().flat_map(|c: Vec<Vec<usize>>| fs.iter().map(move |f| [c.clone(), vec![f.clone()]].concat())).collect();
        }
        for legs in cocones {
            let compatible = (0..shape.morphism_count())
                .all(|m| (0..sizes[shape.src(m)]).all(|x| legs[shape.dst(m)][d.edge(m).apply(x)] == legs[shape.src(m)][x]));
            if !compatible {
                continue;
            }
            let mediating = wkan_core::fincat::all_functions(co.apex.len(), t)
                .filter(|h| legs.iter().enumerate().all(|(i, leg)| (0..sizes[i]).all(|x| h[co.legs[i].apply(x)] == leg[x])))
                .count();
            prop_assert_eq!(mediating, 1);
        }
    }

    #[test]
    fn image_factorization_splits_as_epi_then_mono(seed in any::<u64>(), shape in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_map(&mut rng, &shapes()[shape], 3);
        let (epi, mono) = image_factorization(&f);
        prop_assert!(epi.is_epi());
        prop_assert!(mono.is_mono());
        let composite = mono.after(&epi).unwrap();
        prop_assert_eq!(composite.components(), f.components());
    }
}
