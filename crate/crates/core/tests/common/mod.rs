//! Fixtures and generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wkan_core::fincat::{
    coproduct, product, CategoryBuilder, FinCategory, FinSet, HomSearch, Presheaf, PshMap,
};
use wkan_core::sset::{generate_cell, CellKind, LiftingProblem, SimplexCategory};
use wkan_core::{Budget, Result};

pub fn s(x: &str) -> String {
    x.to_string()
}

/// Over the walking arrow: `z` and `s` at C0, `s` at C1, one edge `b` over
/// `s` at C0.
pub fn running_example() -> PshMap {
    let cat = Arc::new(FinCategory::walking_arrow());
    let a = Arc::new(
        Presheaf::from_named(
            cat.clone(),
            &[(s("C1"), vec![s("s")]), (s("C0"), vec![s("z"), s("s")])],
            &[(s("u"), vec![(s("s"), s("s"))])],
        )
        .unwrap(),
    );
    let b = Arc::new(Presheaf::from_named(cat, &[(s("C0"), vec![s("b")])], &[]).unwrap());
    PshMap::from_named(b, a, &[(s("C0"), vec![(s("b"), s("s"))])]).unwrap()
}

/// Small categories without nontrivial composites, so that any choice of
/// restriction tables is functorial.
pub fn shapes() -> Vec<Arc<FinCategory>> {
    vec![
        Arc::new(FinCategory::terminal()),
        Arc::new(FinCategory::walking_arrow()),
        Arc::new(
            CategoryBuilder::new()
                .objects(["C", "D", "E"])
                .morphism("al", "D", "C")
                .morphism("be", "E", "C")
                .build()
                .unwrap(),
        ),
        Arc::new(
            CategoryBuilder::new()
                .objects(["P", "Q"])
                .morphism("m", "P", "Q")
                .morphism("n", "P", "Q")
                .build()
                .unwrap(),
        ),
    ]
}

pub fn random_presheaf(
    rng: &mut ChaCha8Rng,
    cat: &Arc<FinCategory>,
    lo: usize,
    hi: usize,
) -> Presheaf {
    let sizes: Vec<usize> = (0..cat.object_count())
        .map(|_| rng.gen_range(lo..=hi))
        .collect();
    // Nonidentity maps out of an empty target are impossible, so an empty
    // target forces an empty source.
    let mut sizes = sizes;
    loop {
        let mut changed = false;
        for m in 0..cat.morphism_count() {
            if sizes[cat.dst(m)] > 0 && sizes[cat.src(m)] == 0 {
                sizes[cat.src(m)] = 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let sets: Vec<FinSet> = sizes
        .iter()
        .enumerate()
        .map(|(o, &n)| FinSet::numbered(&format!("x{o}_"), n))
        .collect();
    let tables: Vec<Vec<usize>> = (0..cat.morphism_count())
        .map(|m| {
            if cat.is_identity(m) {
                (0..sizes[cat.dst(m)]).collect()
            } else {
                (0..sizes[cat.dst(m)])
                    .map(|_| rng.gen_range(0..sizes[cat.src(m)]))
                    .collect()
            }
        })
        .collect();
    Presheaf::new(cat.clone(), sets, tables).unwrap()
}

/// A random natural map between random presheaves.
pub fn random_map(rng: &mut ChaCha8Rng, cat: &Arc<FinCategory>, max: usize) -> PshMap {
    loop {
        let a = Arc::new(random_presheaf(rng, cat, 1, max));
        let b = Arc::new(random_presheaf(rng, cat, 0, max));
        let maps = HomSearch::new(&b, &a).all().unwrap();
        if maps.is_empty() {
            continue;
        }
        let pick = rng.gen_range(0..maps.len());
        return PshMap::new(b, a, maps[pick].clone()).unwrap();
    }
}

pub fn to_point(sc: &SimplexCategory, y: &Arc<Presheaf>) -> PshMap {
    PshMap::from_fn(y.clone(), Arc::new(sc.point()), |_, _| 0).unwrap()
}

pub fn discrete(sc: &SimplexCategory, n: usize) -> Arc<Presheaf> {
    Arc::new(sc.discrete(&FinSet::numbered("k", n)))
}

pub fn chaotic(sc: &SimplexCategory, n: usize) -> Arc<Presheaf> {
    Arc::new(sc.chaotic(&FinSet::numbered("e", n)).unwrap())
}

/// The map between simplicial sets whose simplices are determined by their
/// vertices (discrete and chaotic ones), induced by a function on vertices.
pub fn vertex_map(
    sc: &SimplexCategory,
    src: &Arc<Presheaf>,
    tgt: &Arc<Presheaf>,
    f: impl Fn(usize) -> usize,
) -> PshMap {
    let vertices = |x: &Presheaf, n: usize, e: usize| -> Vec<usize> {
        (0..=n)
            .map(|i| x.restrict(sc.morphism(&[i], n).unwrap(), e))
            .collect()
    };
    PshMap::from_fn(src.clone(), tgt.clone(), |n, e| {
        let want: Vec<usize> = vertices(src, n, e).into_iter().map(&f).collect();
        (0..tgt.size(n))
            .find(|&t| vertices(tgt, n, t) == want)
            .expect("vertex tuple is a simplex of the target")
    })
    .unwrap()
}

/// Every horn square `Λ^k[n] → Y`, `Δ[n] → X` against `p` with `n ≤ dim`.
pub fn horn_squares(
    sc: &SimplexCategory,
    p: &PshMap,
    dim: usize,
) -> Result<Vec<(LiftingProblem, PshMap)>> {
    let (y, x) = (p.source().clone(), p.target().clone());
    let mut out = Vec::new();
    for n in 1..=dim {
        for k in 0..=n {
            let cell = generate_cell(sc, CellKind::Horn(k), n)?;
            for top in HomSearch::new(&cell.space, &y).all()? {
                let top = PshMap::new(cell.space.clone(), y.clone(), top)?;
                for xs in 0..x.size(n) {
                    let bottom = sc.yoneda(&x, n, xs)?;
                    if let Ok(sq) =
                        LiftingProblem::new(cell.inclusion.clone(), p.clone(), top.clone(), bottom)
                    {
                        out.push((sq, cell.vertex.clone().unwrap()));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `A = Δ[0] ⊔ E{0,1}` and `B = E{0,1} × F` sitting over the second summand.
pub fn coproduct_of_projections(sc: &SimplexCategory, fiber: &Arc<Presheaf>) -> PshMap {
    let point = Arc::new(sc.point());
    let (_, _, right) = coproduct(&point, &chaotic(sc, 2)).unwrap();
    let prod = product(right.source(), fiber).unwrap();
    right.after(&prod.left).unwrap()
}

pub fn budget() -> Budget {
    Budget::new(50_000_000)
}

/// Proptest settings with a fixed default seed. `PROPTEST_RNG_SEED`
/// overrides it.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    use proptest::test_runner::{Config, RngSeed};
    let mut config = Config::with_cases(n);
    if matches!(config.rng_seed, RngSeed::Random) {
        config.rng_seed = RngSeed::Fixed(0x5eed);
    }
    config
}
