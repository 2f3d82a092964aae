//! Pointwise constructions on presheaves.

use std::sync::Arc;

use super::presheaf::{Presheaf, PshMap};
use super::set::FinSet;
use crate::error::{Error, Result};

/// A pullback square over `f: X → Z` and `g: Y → Z`: the apex with its two
/// projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub apex: Arc<Presheaf>,
    pub left: PshMap,
    pub right: PshMap,
    /// Pairs `(x, y)` making up the apex at each object.
    pub pairs: Vec<Vec<(usize, usize)>>,
}

impl Pullback {
    /// Position of `(x, y)` in the apex at `o`, if the pair is compatible.
    pub fn index(&self, o: usize, x: usize, y: usize) -> Option<usize> {
        self.pairs[o].binary_search(&(x, y)).ok()
    }
}

/// Pullback of `f` and `g`, with apex elements named `(x,y)`.
pub fn pullback(f: &PshMap, g: &PshMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::Invalid(
            "pullback of maps with different targets".into(),
        ));
    }
    let (x, y) = (f.source().clone(), g.source().clone());
    let cat = x.category().clone();
    let mut pairs = Vec::with_capacity(cat.object_count());
    let mut sets = Vec::with_capacity(cat.object_count());
    for o in 0..cat.object_count() {
        let mut by_value: Vec<Vec<usize>> = vec![Vec::new(); f.target().size(o)];
        for b in 0..y.size(o) {
            by_value[g.apply(o, b)].push(b);
        }
        let ps: Vec<(usize, usize)> = (0..x.size(o))
            .flat_map(|a| by_value[f.apply(o, a)].iter().map(move |&b| (a, b)))
            .collect();
        sets.push(FinSet::new(ps.iter().map(|&(a, b)| {
            format!("({},{})", x.at(o).name(a), y.at(o).name(b))
        }))?);
        pairs.push(ps);
    }
    let restrict: Vec<Vec<usize>> = (0..cat.morphism_count())
        .map(|m| {
            let (d, c) = (cat.src(m), cat.dst(m));
            pairs[c]
                .iter()
                .map(|&(a, b)| {
                    let target = (x.restrict(m, a), y.restrict(m, b));
                    pairs[d]
                        .binary_search(&target)
                        .expect("pullbacks are closed under restriction")
                })
                .collect()
        })
        .collect();
    let apex = Arc::new(Presheaf::new(cat, sets, restrict)?);
    let left = PshMap::from_parts_unchecked(
        apex.clone(),
        x,
        pairs
            .iter()
            .map(|ps| ps.iter().map(|p| p.0).collect())
            .collect(),
    );
    let right = PshMap::from_parts_unchecked(
        apex.clone(),
        y,
        pairs
            .iter()
            .map(|ps| ps.iter().map(|p| p.1).collect())
            .collect(),
    );
    Ok(Pullback {
        apex,
        left,
        right,
        pairs,
    })
}

/// Binary product, computed as the pullback over the terminal presheaf.
pub fn product(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<Pullback> {
    let one = Arc::new(Presheaf::terminal(x.category().clone()));
    let to_one = |p: &Arc<Presheaf>| {
        PshMap::from_parts_unchecked(
            p.clone(),
            one.clone(),
            p.sets().iter().map(|s| vec![0; s.len()]).collect(),
        )
    };
    pullback(&to_one(x), &to_one(y))
}

/// Binary coproduct with elements tagged `0:x` and `1:y`.
pub fn coproduct(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<(Arc<Presheaf>, PshMap, PshMap)> {
    if !x.same_category(y) {
        return Err(Error::Invalid(
            "coproduct of presheaves over different categories".into(),
        ));
    }
    let cat = x.category().clone();
    let sets = (0..cat.object_count())
        .map(|o| {
            FinSet::new(
                x.at(o)
                    .names()
                    .iter()
                    .map(|n| format!("0:{n}"))
                    .chain(y.at(o).names().iter().map(|n| format!("1:{n}"))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = Arc::new(Presheaf::from_fn(cat.clone(), sets, |m, e| {
        let (d, c) = (cat.src(m), cat.dst(m));
        let split = x.size(c);
        if e < split {
            x.restrict(m, e)
        } else {
            x.size(d) + y.restrict(m, e - split)
        }
    })?);
    let left = PshMap::from_parts_unchecked(
        x.clone(),
        sum.clone(),
        x.sets().iter().map(|s| (0..s.len()).collect()).collect(),
    );
    let right = PshMap::from_parts_unchecked(
        y.clone(),
        sum.clone(),
        (0..cat.object_count())
            .map(|o| (0..y.size(o)).map(|e| x.size(o) + e).collect())
            .collect(),
    );
    Ok((sum, left, right))
}

/// The subpresheaf on the marked elements, with its inclusion. Fails unless
/// the marked elements are closed under restriction.
pub fn subpresheaf(x: &Arc<Presheaf>, keep: &[Vec<bool>]) -> Result<(Arc<Presheaf>, PshMap)> {
    let cat = x.category().clone();
    let members: Vec<Vec<usize>> = keep
        .iter()
        .map(|k| k.iter().enumerate().filter(|p| *p.1).map(|p| p.0).collect())
        .collect();
    let mut position: Vec<Vec<usize>> = (0..cat.object_count())
        .map(|o| vec![usize::MAX; x.size(o)])
        .collect();
    for (o, ms) in members.iter().enumerate() {
        for (i, &e) in ms.iter().enumerate() {
            position[o][e] = i;
        }
    }
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (d, c) = (cat.src(m), cat.dst(m));
        let mut table = Vec::with_capacity(members[c].len());
        for &e in &members[c] {
            let r = position[d][x.restrict(m, e)];
            if r == usize::MAX {
                return Err(Error::Invalid(format!(
                    "{} restricted along {} leaves the subpresheaf",
                    x.at(c).name(e),
                    cat.morphism_name(m)
                )));
            }
            table.push(r);
        }
        restrict.push(table);
    }
    let sets = members
        .iter()
        .enumerate()
        .map(|(o, ms)| FinSet::new(ms.iter().map(|&e| x.at(o).name(e).to_string())))
        .collect::<Result<Vec<_>>>()?;
    let sub = Arc::new(Presheaf::new(cat, sets, restrict)?);
    let inclusion = PshMap::from_parts_unchecked(sub.clone(), x.clone(), members);
    Ok((sub, inclusion))
}

/// Factor `f` as a pointwise surjection onto its image followed by the
/// inclusion of the image.
pub fn image_factorization(f: &PshMap) -> (PshMap, PshMap) {
    let target = f.target();
    let keep: Vec<Vec<bool>> = (0..target.sets().len())
        .map(|o| {
            let mut k = vec![false; target.size(o)];
            for &y in f.component(o) {
                k[y] = true;
            }
            k
        })
        .collect();
    let (image, mono) = subpresheaf(target, &keep).expect("images are closed under restriction");
    let epi_components = (0..keep.len())
        .map(|o| {
            let ms = mono.component(o);
            f.component(o)
                .iter()
                .map(|y| ms.binary_search(y).expect("value lies in the image"))
                .collect()
        })
        .collect();
    let epi = PshMap::from_parts_unchecked(f.source().clone(), image, epi_components);
    (epi, mono)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::category::FinCategory;

    fn arrow_presheaf(top: &[&str], bottom: &[&str], u: &[usize]) -> Arc<Presheaf> {
        let cat = Arc::new(FinCategory::walking_arrow());
        let c0 = cat.object_index("C0").unwrap();
        let c1 = cat.object_index("C1").unwrap();
        let um = cat.morphism_index("u").unwrap();
        let mut sets = vec![FinSet::empty(); 2];
        sets[c1] = FinSet::new(top.iter().copied()).unwrap();
        sets[c0] = FinSet::new(bottom.iter().copied()).unwrap();
        Arc::new(Presheaf::from_fn(cat, sets, |m, x| if m == um { u[x] } else { x }).unwrap())
    }

    #[test]
    fn identity_factors_trivially() {
        let x = arrow_presheaf(&["a", "b"], &["p"], &[0, 0]);
        let (epi, mono) = image_factorization(&PshMap::identity(x.clone()));
        assert!(epi.is_iso() && mono.is_iso());
        assert_eq!(
            mono.after(&epi).unwrap().components(),
            PshMap::identity(x).components()
        );
    }

    #[test]
    fn constant_map_has_singleton_image() {
        let one = Arc::new(FinCategory::terminal());
        let x = Arc::new(Presheaf::constant(one.clone(), FinSet::numbered("x", 3)));
        let y = Arc::new(Presheaf::constant(one, FinSet::numbered("y", 2)));
        let f = PshMap::new(x, y, vec![vec![1, 1, 1]]).unwrap();
        let (epi, mono) = image_factorization(&f);
        assert_eq!(mono.source().total_size(), 1);
        assert!(epi.is_epi() && mono.is_mono());
        assert_eq!(mono.after(&epi).unwrap().components(), f.components());
    }

    #[test]
    fn pullback_and_coproduct_sizes() {
        let x = arrow_presheaf(&["a", "b"], &["p", "q"], &[0, 1]);
        let p = product(&x, &x).unwrap();
        assert_eq!(p.apex.total_size(), 8);
        let (s, l, r) = coproduct(&x, &x).unwrap();
        assert_eq!(s.total_size(), 8);
        assert!(l.is_mono() && r.is_mono());
    }

    #[test]
    fn subpresheaf_requires_closure() {
        let x = arrow_presheaf(&["a", "b"], &["p", "q"], &[0, 1]);
        let c0 = x.category().object_index("C0").unwrap();
        let mut keep = vec![vec![true, false]; 2];
        keep[c0] = vec![false, true];
        assert!(subpresheaf(&x, &keep).is_err());
    }
}
