use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{pullback, HomSearch, Presheaf, PshMap, SearchOrder};
use crate::poly::{render, HatSignature, PshPolyElem};

/// `Π_f Z` together with its projection to `A`.
#[derive(Clone, Debug)]
pub struct DependentProduct {
    pub hat: HatSignature,
    pub presheaf: Arc<Presheaf>,
    pub map: PshMap,
    /// At each object, the label `(C, a)` and the flattened section.
    pub elems: Vec<Vec<PshPolyElem>>,
    index: Vec<HashMap<PshPolyElem, usize>>,
}

impl DependentProduct {
    pub fn position(&self, o: usize, elem: &PshPolyElem) -> Option<usize> {
        self.index[o].get(elem).copied()
    }
}

/// Sections of `z` over the fiber of `hat` at `label`, flattened.
fn sections(
    hat: &HatSignature,
    label: usize,
    z: &PshMap,
    zfib: &[Vec<Vec<usize>>],
    budget: &Budget,
) -> Result<Vec<Vec<usize>>> {
    let fiber = hat.fiber(label);
    let entries = &fiber.entries;
    let found = HomSearch::new(&fiber.presheaf, z.source())
        .order(SearchOrder::LargestOrbitFirst)
        .budget(budget)
        .candidates(|d, e| {
            let (_, _, b) = entries[fiber.offset(d) + e];
            zfib[d][b].clone()
        })
        .all()?;
    Ok(found.iter().map(|c| fiber.flatten(c)).collect())
}

/// The dependent product of `z: Z → B` along `f: B → A`.
///
/// Over `a ∈ A(C)` the elements are the natural sections of `z` over the
/// pullback of `f` along `a: Δ[C] → A`; restriction precomposes.
pub fn dependent_product(f: &PshMap, z: &PshMap, budget: &Budget) -> Result<DependentProduct> {
    if !Arc::ptr_eq(z.target(), f.source()) && **z.target() != **f.source() {
        return Err(Error::Invalid(
            "the family must live over the source of f".into(),
        ));
    }
    let hat = HatSignature::new(f)?;
    let cat = f.category().clone();
    let a = f.target();
    let zs = z.source();
    let zfib: Vec<Vec<Vec<usize>>> = (0..cat.object_count()).map(|o| z.fibers(o)).collect();
    let mut elems = Vec::with_capacity(cat.object_count());
    let mut index = Vec::with_capacity(cat.object_count());
    for c in 0..cat.object_count() {
        let mut here = Vec::new();
        for ax in 0..a.size(c) {
            let label = hat.label(c, ax);
            for values in sections(&hat, label, z, &zfib, budget)? {
                budget.charge(1)?;
                here.push(PshPolyElem { label, values });
            }
        }
        let total: u128 = here.len() as u128;
        budget.admit(total, || {
            format!("dependent product at {}", cat.object_name(c))
        })?;
        index.push(
            here.iter()
                .cloned()
                .enumerate()
                .map(|(i, e)| (e, i))
                .collect::<HashMap<_, _>>(),
        );
        elems.push(here);
    }
    let sets = elems
        .iter()
        .map(|es| {
            crate::fincat::FinSet::new(es.iter().map(|e| {
                let (c, ax) = hat.labels()[e.label];
                let fiber = hat.fiber(e.label);
                render(
                    a.at(c).name(ax),
                    e.values
                        .iter()
                        .zip(&fiber.entries)
                        .map(|(&v, &(d, _, _))| zs.at(d).name(v).to_string()),
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let restrict = (0..cat.morphism_count())
        .map(|gamma| {
            let (e, c) = (cat.src(gamma), cat.dst(gamma));
            elems[c]
                .iter()
                .map(|el: &PshPolyElem| {
                    let (label, positions) = hat.reindex(el.label, gamma);
                    let key = PshPolyElem {
                        label,
                        values: positions.iter().map(|&p| el.values[p]).collect(),
                    };
                    index[e][&key]
                })
                .collect()
        })
        .collect();
    let presheaf = Arc::new(Presheaf::new(cat, sets, restrict)?);
    let map = PshMap::from_fn(presheaf.clone(), a.clone(), |o, x| {
        hat.labels()[elems[o][x].label].1
    })?;
    Ok(DependentProduct {
        hat,
        presheaf,
        map,
        elems,
        index,
    })
}

/// Hom-set sizes on both sides of `f* ⊣ Π_f` for a test object `y: Y → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// Maps `Y → Π_f Z` over `A`.
    pub over_a: u64,
    /// Maps `f*Y → Z` over `B`.
    pub over_b: u64,
    /// Whether transposition is a bijection between the two hom-sets.
    pub bijective: bool,
}

/// Count both hom-sets of the adjunction at `y` and check that transposing
/// `φ ↦ ((y, b) ↦ φ(y)(id, b))` is a bijection.
pub fn check_adjunction(
    f: &PshMap,
    z: &PshMap,
    y: &PshMap,
    budget: &Budget,
) -> Result<AdjunctionReport> {
    let pi = dependent_product(f, z, budget)?;
    let cat = f.category().clone();
    let objects = cat.object_count();
    let pifib: Vec<Vec<Vec<usize>>> = (0..objects).map(|o| pi.map.fibers(o)).collect();
    let ymap = y.clone();
    let left = HomSearch::new(y.source(), &pi.presheaf)
        .budget(budget)
        .candidates(move |o, e| pifib[o][ymap.apply(o, e)].clone())
        .all()?;
    let pb = pullback(y, f)?;
    let zfib: Vec<Vec<Vec<usize>>> = (0..objects).map(|o| z.fibers(o)).collect();
    let right_leg = pb.right.clone();
    let right = HomSearch::new(&pb.apex, z.source())
        .budget(budget)
        .candidates(move |o, e| zfib[o][right_leg.apply(o, e)].clone())
        .all()?;
    let mut transposes = Vec::with_capacity(left.len());
    for phi in &left {
        let comps: Vec<Vec<usize>> = (0..objects)
            .map(|o| {
                pb.pairs[o]
                    .iter()
                    .map(|&(ye, b)| {
                        let el = &pi.elems[o][phi[o][ye]];
                        let fiber = pi.hat.fiber(el.label);
                        let pos = fiber
                            .position(cat.identity(o), b)
                            .expect("identity entry lies in the fiber");
                        el.values[pos]
                    })
                    .collect()
            })
            .collect();
        let psi = PshMap::new(pb.apex.clone(), z.source().clone(), comps)?;
        transposes.push(psi.components().to_vec());
    }
    transposes.sort();
    transposes.dedup();
    let mut right_sorted = right.clone();
    right_sorted.sort();
    let bijective = transposes.len() == left.len() && transposes == right_sorted;
    Ok(AdjunctionReport {
        over_a: left.len() as u64,
        over_b: right.len() as u64,
        bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{all_functions, coproduct, FinCategory, FinSet};
    use crate::sset::SimplexCategory;

    fn psh_map(
        src: &Arc<Presheaf>,
        tgt: &Arc<Presheaf>,
        f: impl Fn(usize, usize) -> usize,
    ) -> PshMap {
        PshMap::from_fn(src.clone(), tgt.clone(), f).unwrap()
    }

    #[test]
    fn along_identity_recovers_the_family() {
        let sc = SimplexCategory::new(2).unwrap();
        let b = Arc::new(sc.simplex(1).unwrap());
        let zs = Arc::new(sc.chaotic(&FinSet::numbered("z", 2)).unwrap());
        let (prod, _) = {
            let p = crate::fincat::product(&zs, &b).unwrap();
            (p.apex.clone(), p)
        };
        let z = crate::fincat::product(&zs, &b).unwrap().right;
        let pi = dependent_product(&PshMap::identity(b.clone()), &z, &Budget::default()).unwrap();
        for o in 0..3 {
            assert_eq!(pi.presheaf.size(o), prod.size(o));
        }
        let y = psh_map(&b, &b, |_, x| x);
        let r = check_adjunction(&PshMap::identity(b.clone()), &z, &y, &Budget::default()).unwrap();
        assert!(r.bijective);
        assert_eq!(r.over_a, r.over_b);
    }

    #[test]
    fn along_fold_is_fiberwise_product() {
        let sc = SimplexCategory::new(2).unwrap();
        let a = Arc::new(sc.simplex(1).unwrap());
        let (b, _, _) = coproduct(&a, &a).unwrap();
        let fold = psh_map(&b, &a, |o, x| x % a.size(o));
        // Z over B: a two-point chaotic fiber over the left copy and a
        // discrete three-point fiber over the right copy.
        let left = Arc::new(sc.chaotic(&FinSet::numbered("u", 2)).unwrap());
        let right = Arc::new(sc.discrete(&FinSet::numbered("v", 3)));
        let (zl, zr) = (
            crate::fincat::product(&left, &a).unwrap(),
            crate::fincat::product(&right, &a).unwrap(),
        );
        let (zs, inl, inr) = coproduct(&zl.apex, &zr.apex).unwrap();
        let z = psh_map(&zs, &b, |o, e| {
            let n = zl.apex.size(o);
            if e < n {
                zl.right.apply(o, e)
            } else {
                zr.right.apply(o, e - n) + a.size(o)
            }
        });
        let _ = (inl, inr);
        let pi = dependent_product(&fold, &z, &Budget::default()).unwrap();
        for o in 0..3 {
            for x in 0..a.size(o) {
                let over = pi.map.fibers(o)[x].len();
                assert_eq!(over, left.size(o) * right.size(o));
            }
        }
    }

    #[test]
    fn sections_match_brute_force_on_walking_arrow() {
        let cat = Arc::new(FinCategory::walking_arrow());
        let (c0, c1) = (
            cat.object_index("C0").unwrap(),
            cat.object_index("C1").unwrap(),
        );
        let b = Arc::new(
            Presheaf::from_fn(
                cat.clone(),
                {
                    let mut s = vec![FinSet::empty(); 2];
                    s[c0] = FinSet::numbered("b", 2);
                    s[c1] = FinSet::numbered("e", 1);
                    s
                },
                |m, x| if cat.is_identity(m) { x } else { 0 },
            )
            .unwrap(),
        );
        let a = Arc::new(Presheaf::terminal(cat.clone()));
        let f = psh_map(&b, &a, |_, _| 0);
        let zs = Arc::new(
            Presheaf::from_fn(
                cat.clone(),
                {
                    let mut s = vec![FinSet::empty(); 2];
                    s[c0] = FinSet::numbered("p", 3);
                    s[c1] = FinSet::numbered("q", 2);
                    s
                },
                |m, x| if cat.is_identity(m) { x } else { 2 * x },
            )
            .unwrap(),
        );
        let z = psh_map(&zs, &b, |o, x| if o == c0 { x % 2 } else { 0 });
        let pi = dependent_product(&f, &z, &Budget::default()).unwrap();
        for c in 0..2 {
            let fiber = pi.hat.fiber(pi.hat.label(c, 0));
            let fp = fiber.presheaf.clone();
            let mut brute = 0;
            let zfib: Vec<_> = (0..2).map(|o| z.fibers(o)).collect();
            for s0 in all_functions(fp.size(0), zs.size(0)) {
                for s1 in all_functions(fp.size(1), zs.size(1)) {
                    let comps = vec![s0.clone(), s1];
                    let over = (0..2).all(|d| {
                        (0..fp.size(d)).all(|e| {
                            let (_, _, bb) = fiber.entries[fiber.offset(d) + e];
                            zfib[d][bb].contains(&comps[d][e])
                        })
                    });
                    if over && PshMap::new(fp.clone(), zs.clone(), comps).is_ok() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(pi.presheaf.size(c), brute);
        }
        let y = psh_map(
            &Arc::new(Presheaf::representable(cat.clone(), c1)),
            &a,
            |_, _| 0,
        );
        let r = check_adjunction(&f, &z, &y, &Budget::default()).unwrap();
        assert!(r.bijective);
    }
}
