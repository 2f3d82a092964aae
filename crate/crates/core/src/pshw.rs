//! W-types in presheaves: hereditarily natural trees over the hat signature.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{FinSet, Presheaf, PshMap};
use crate::poly::{natural_families, presheaf_poly, HatSignature, PshPolyElem};
use crate::wtree::{Forest, WTree};

/// The hat construction of `f`: labels `(C, a)` and fibers of pairs
/// `(α: D → C, b)` with `f(b) = a·α`.
pub fn hat_construction(f: &PshMap) -> Result<HatSignature> {
    HatSignature::new(f)
}

/// Trees for the hat signature of one map, with the presheaf action.
#[derive(Clone, Debug)]
pub struct PshForest {
    hat: Arc<HatSignature>,
    forest: Forest,
}

/// The four classes of trees, from weakest to strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NaturalityStatus {
    NotComposable,
    ComposableNotNatural,
    NaturalNotHereditarily,
    HereditarilyNatural,
}

impl NaturalityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NaturalityStatus::NotComposable => "not-composable",
            NaturalityStatus::ComposableNotNatural => "composable-not-natural",
            NaturalityStatus::NaturalNotHereditarily => "natural-not-hereditarily",
            NaturalityStatus::HereditarilyNatural => "hereditarily-natural",
        }
    }
}

impl PshForest {
    pub fn new(f: &PshMap) -> Result<Self> {
        let hat = hat_construction(f)?;
        let forest = Forest::new(hat.flat_signature()?);
        Ok(PshForest {
            hat: Arc::new(hat),
            forest,
        })
    }

    pub fn hat(&self) -> &HatSignature {
        &self.hat
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn forest_mut(&mut self) -> &mut Forest {
        &mut self.forest
    }

    /// The object `C` whose fiber the tree lives in.
    pub fn object(&self, w: WTree) -> usize {
        self.hat.labels()[self.forest.label(w)].0
    }

    /// `sup_{(C,a)}(t)` with `t` along the flat fiber order.
    pub fn sup(&mut self, c: usize, a: usize, children: Vec<WTree>) -> Result<WTree> {
        let label = self.hat.label(c, a);
        if children.len() != self.hat.fiber(label).len() {
            return Err(Error::FiberMismatch {
                label: self.forest.signature().labels().name(label).to_string(),
                detail: format!(
                    "expected {} children, got {}",
                    self.hat.fiber(label).len(),
                    children.len()
                ),
            });
        }
        Ok(self.forest.sup_args(label, children))
    }

    /// `sup_{(C,a)}(t)·α = sup_{(D,a·α)}(t·α)` with `(t·α)(β, b) = t(αβ, b)`.
    pub fn restrict_tree(&mut self, w: WTree, alpha: usize) -> Result<WTree> {
        let cat = self.hat.map().category().clone();
        let c = self.object(w);
        if cat.dst(alpha) != c {
            return Err(Error::TargetMismatch {
                morphism: cat.morphism_name(alpha).to_string(),
                object: cat.object_name(c).to_string(),
            });
        }
        if cat.is_identity(alpha) {
            return Ok(w);
        }
        let (label, positions) = self.hat.reindex(self.forest.label(w), alpha);
        let children = self.forest.children(w);
        let reindexed = positions.iter().map(|&p| children[p]).collect();
        Ok(self.forest.sup_args(label, reindexed))
    }

    pub fn psh_rank(&self, w: WTree) -> usize {
        self.forest.rank(w)
    }

    fn composable(&self, w: WTree) -> bool {
        let fiber = self.hat.fiber(self.forest.label(w));
        fiber
            .entries
            .iter()
            .zip(self.forest.children(w))
            .all(|(&(d, _, _), &child)| self.object(child) == d)
    }

    /// `t(αβ, b·β) = t(α, b)·β` for all entries and all `β` into `dom(α)`.
    /// Assumes the tree is composable.
    fn natural_root(&mut self, w: WTree) -> bool {
        let cat = self.hat.map().category().clone();
        let b = self.hat.map().source().clone();
        let label = self.forest.label(w);
        let hat = self.hat.clone();
        let fiber = hat.fiber(label);
        let children = self.forest.children(w).to_vec();
        for (i, &(d, alpha, y)) in fiber.entries.iter().enumerate() {
            for &beta in cat.incoming(d) {
                if cat.is_identity(beta) {
                    continue;
                }
                let j = fiber
                    .position(cat.comp(alpha, beta), b.restrict(beta, y))
                    .expect("fibers are closed under the action");
                let restricted = self
                    .restrict_tree(children[i], beta)
                    .expect("composable child");
                if children[j] != restricted {
                    return false;
                }
            }
        }
        true
    }

    fn natural(&mut self, w: WTree) -> bool {
        self.composable(w) && self.natural_root(w)
    }

    /// Classify by the root first, then by the subtrees.
    pub fn naturality_status(&mut self, w: WTree) -> NaturalityStatus {
        if !self.composable(w) {
            return NaturalityStatus::NotComposable;
        }
        if !self.natural_root(w) {
            return NaturalityStatus::ComposableNotNatural;
        }
        let mut seen = HashSet::new();
        let mut stack: Vec<WTree> = self.forest.children(w).to_vec();
        while let Some(t) = stack.pop() {
            if !seen.insert(t) {
                continue;
            }
            if !self.natural(t) {
                return NaturalityStatus::NaturalNotHereditarily;
            }
            stack.extend_from_slice(self.forest.children(t));
        }
        NaturalityStatus::HereditarilyNatural
    }

    /// `{"object", "label", "children": [{"morphism", "edge", "tree"}]}`.
    pub fn to_json(&self, w: WTree) -> Value {
        let cat = self.hat.map().category();
        let (a, b) = (self.hat.map().target(), self.hat.map().source());
        let label = self.forest.label(w);
        let (c, x) = self.hat.labels()[label];
        let fiber = self.hat.fiber(label);
        let children: Vec<Value> = fiber
            .entries
            .iter()
            .zip(self.forest.children(w))
            .map(|(&(d, alpha, y), &t)| {
                json!({
                    "morphism": cat.morphism_name(alpha),
                    "edge": b.at(d).name(y),
                    "tree": self.to_json(t),
                })
            })
            .collect();
        json!({"object": cat.object_name(c), "label": a.at(c).name(x), "children": children})
    }

    /// Term notation with `label@object` nodes.
    pub fn term(&self, w: WTree) -> String {
        self.forest.term(w)
    }
}

/// One stage `W(f)_{<k}` as a presheaf, with the tree behind every element.
#[derive(Clone, Debug)]
pub struct PshStage {
    pub presheaf: Arc<Presheaf>,
    pub trees: Vec<Vec<WTree>>,
    index: HashMap<WTree, usize>,
}

impl PshStage {
    /// Position of a tree at its object, if it belongs to the stage.
    pub fn position(&self, w: WTree) -> Option<usize> {
        self.index.get(&w).copied()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.trees.iter().map(Vec::len).collect()
    }

    /// The map `W(f)_{<k} → A` reading off the label at the root.
    pub fn root_map(&self, pf: &PshForest) -> Result<PshMap> {
        let hat = pf.hat();
        PshMap::from_fn(self.presheaf.clone(), hat.map().target().clone(), |o, i| {
            hat.labels()[pf.forest().label(self.trees[o][i])].1
        })
    }
}

#[derive(Clone, Debug)]
pub struct PshStages {
    pub stages: Vec<PshStage>,
    pub stabilized_at: Option<usize>,
}

fn stage_from_trees(pf: &mut PshForest, trees: Vec<Vec<WTree>>) -> Result<PshStage> {
    let cat = pf.hat.map().category().clone();
    let index: HashMap<WTree, usize> = trees
        .iter()
        .flat_map(|ts| ts.iter().enumerate().map(|(i, &t)| (t, i)))
        .collect();
    let sets = trees
        .iter()
        .map(|ts| FinSet::new(ts.iter().map(|t| format!("w{}", t.id()))))
        .collect::<Result<Vec<_>>>()?;
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let c = cat.dst(m);
        let mut table = Vec::with_capacity(trees[c].len());
        for &t in &trees[c] {
            let r = pf.restrict_tree(t, m)?;
            let i = *index.get(&r).ok_or_else(|| {
                Error::Invalid(format!(
                    "stage is not closed under restriction along {}",
                    cat.morphism_name(m)
                ))
            })?;
            table.push(i);
        }
        restrict.push(table);
    }
    let presheaf = Arc::new(Presheaf::new(cat, sets, restrict)?);
    Ok(PshStage {
        presheaf,
        trees,
        index,
    })
}

/// `W(f)_{<k+1}(C)` is the set of `sup_{(C,a)}(t)` with `t` a natural family
/// into `W(f)_{<k}`.
pub fn enumerate_psh_stage(pf: &mut PshForest, n: usize, budget: &Budget) -> Result<PshStages> {
    let objects = pf.hat.map().category().object_count();
    let mut stages = vec![stage_from_trees(pf, vec![Vec::new(); objects])?];
    let mut stabilized_at = None;
    for k in 0..n {
        if stabilized_at.is_some() {
            stages.push(stages[k].clone());
            continue;
        }
        let hat = pf.hat.clone();
        let prev = &stages[k];
        let mut next = vec![Vec::new(); objects];
        for (label, &(c, _)) in hat.labels().iter().enumerate() {
            let entries = &hat.fiber(label).entries;
            for values in natural_families(&hat, label, &prev.presheaf, budget)? {
                budget.charge(1)?;
                let children = values
                    .iter()
                    .zip(entries)
                    .map(|(&v, &(d, _, _))| prev.trees[d][v])
                    .collect();
                next[c].push(pf.forest.sup_args(label, children));
            }
        }
        let grown = next
            .iter()
            .zip(&prev.trees)
            .any(|(x, y)| x.len() != y.len());
        let stage = stage_from_trees(pf, next)?;
        if !grown {
            stabilized_at = Some(k);
        }
        stages.push(stage);
    }
    Ok(PshStages {
        stages,
        stabilized_at,
    })
}

/// The canonical maps between `P_f(W_{<k})` and `W_{<k+1}`: `sup` and its
/// decomposition, both checked natural and mutually inverse.
pub struct StageIso {
    pub sup: PshMap,
    pub decompose: PshMap,
}

pub fn stage_equation(
    pf: &PshForest,
    stages: &PshStages,
    k: usize,
    budget: &Budget,
) -> Result<StageIso> {
    let (prev, next) = (&stages.stages[k], &stages.stages[k + 1]);
    let hat = &pf.hat;
    let image = presheaf_poly(hat, &prev.presheaf, budget)?;
    let objects = hat.map().category().object_count();
    let mut sup = Vec::with_capacity(objects);
    for c in 0..objects {
        let mut row = Vec::with_capacity(image.elems[c].len());
        for e in &image.elems[c] {
            let entries = &hat.fiber(e.label).entries;
            let children: Vec<WTree> = e
                .values
                .iter()
                .zip(entries)
                .map(|(&v, &(d, _, _))| prev.trees[d][v])
                .collect();
            let w = pf
                .forest
                .find(e.label, &children)
                .and_then(|w| next.position(w).filter(|_| pf.object(w) == c))
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "sup of a natural family is missing from stage {}",
                        k + 1
                    ))
                })?;
            row.push(w);
        }
        sup.push(row);
    }
    let mut index: Vec<HashMap<&PshPolyElem, usize>> = Vec::with_capacity(objects);
    for es in &image.elems {
        index.push(es.iter().enumerate().map(|(i, e)| (e, i)).collect());
    }
    let mut decompose = Vec::with_capacity(objects);
    for (c, trees) in next.trees.iter().enumerate() {
        let mut row = Vec::with_capacity(trees.len());
        for &w in trees {
            let label = pf.forest.label(w);
            let values = pf
                .forest
                .children(w)
                .iter()
                .map(|&t| prev.position(t))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| Error::Invalid("a child lies outside the previous stage".into()))?;
            let key = PshPolyElem { label, values };
            let i = index[c]
                .get(&key)
                .ok_or_else(|| Error::Invalid(format!("tree w{} has no natural family", w.id())))?;
            row.push(*i);
        }
        decompose.push(row);
    }
    let sup = PshMap::new(image.presheaf.clone(), next.presheaf.clone(), sup)?;
    let decompose = PshMap::new(next.presheaf.clone(), image.presheaf.clone(), decompose)?;
    let round = decompose.after(&sup)?;
    let back = sup.after(&decompose)?;
    let is_identity = |m: &PshMap| {
        m.components()
            .iter()
            .all(|c| c.iter().enumerate().all(|(i, &v)| i == v))
    };
    if !is_identity(&round) || !is_identity(&back) {
        return Err(Error::Invalid(format!(
            "stage {} is not isomorphic to P_f of stage {k}",
            k + 1
        )));
    }
    Ok(StageIso { sup, decompose })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{CategoryBuilder, FinCategory};
    use crate::wtree::enumerate_stage;

    fn s(x: &str) -> String {
        x.to_string()
    }

    /// Over the walking arrow: `z` and `s` at C0, `s` at C1, one edge `b`
    /// over `s` at C0.
    fn running() -> PshMap {
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

    fn objects(f: &PshMap) -> (usize, usize, usize) {
        let cat = f.category();
        (
            cat.object_index("C0").unwrap(),
            cat.object_index("C1").unwrap(),
            cat.morphism_index("u").unwrap(),
        )
    }

    #[test]
    fn hat_over_terminal_arrow() {
        let cat = Arc::new(FinCategory::walking_arrow());
        let a = Arc::new(Presheaf::terminal(cat.clone()));
        let b = Arc::new(Presheaf::from_named(cat, &[(s("C0"), vec![s("b")])], &[]).unwrap());
        let f = PshMap::from_fn(b, a, |_, _| 0).unwrap();
        let (c0, c1, u) = objects(&f);
        let hat = hat_construction(&f).unwrap();
        assert_eq!(hat.fiber(hat.label(c1, 0)).entries, vec![(c0, u, 0)]);
        let id0 = f.category().identity(c0);
        assert_eq!(hat.fiber(hat.label(c0, 0)).entries, vec![(c0, id0, 0)]);
    }

    #[test]
    fn empty_edges_give_empty_fibers_and_leaves() {
        let cat = Arc::new(FinCategory::walking_arrow());
        let a = Arc::new(
            Presheaf::from_named(
                cat.clone(),
                &[(s("C1"), vec![s("p")]), (s("C0"), vec![s("q"), s("r")])],
                &[(s("u"), vec![(s("p"), s("r"))])],
            )
            .unwrap(),
        );
        let f = PshMap::from_fn(Arc::new(Presheaf::empty(cat)), a.clone(), |_, _| 0).unwrap();
        let mut pf = PshForest::new(&f).unwrap();
        assert!(pf
            .hat()
            .labels()
            .iter()
            .enumerate()
            .all(|(l, _)| pf.hat().fiber(l).is_empty()));
        let st = enumerate_psh_stage(&mut pf, 3, &Budget::default()).unwrap();
        assert_eq!(st.stabilized_at, Some(1));
        assert_eq!(st.stages[3].sizes(), vec![a.size(0), a.size(1)]);
    }

    #[test]
    fn running_example_stages() {
        let f = running();
        let (c0, c1, u) = objects(&f);
        let mut pf = PshForest::new(&f).unwrap();
        let st = enumerate_psh_stage(&mut pf, 5, &Budget::default()).unwrap();
        for k in 0..=5 {
            assert_eq!(st.stages[k].trees[c0].len(), k);
            assert_eq!(st.stages[k].trees[c1].len(), k.saturating_sub(1));
        }
        for k in 0..5 {
            stage_equation(&pf, &st, k, &Budget::default()).unwrap();
        }
        // w₂ = sup_{(C1,s)}((u,b) ↦ z) and its restriction along u.
        let z = pf.sup(c0, 0, vec![]).unwrap();
        let w2 = pf.sup(c1, 0, vec![z]).unwrap();
        let w2u = pf.restrict_tree(w2, u).unwrap();
        assert_eq!(w2u, pf.sup(c0, 1, vec![z]).unwrap());
        assert_eq!((pf.psh_rank(w2), pf.psh_rank(w2u)), (1, 1));
        assert_eq!(pf.restrict_tree(w2, f.category().identity(c1)).unwrap(), w2);
        assert!(matches!(
            pf.restrict_tree(z, u),
            Err(Error::TargetMismatch { .. })
        ));
    }

    #[test]
    fn classification() {
        let f = running();
        let (c0, c1, _) = objects(&f);
        let mut pf = PshForest::new(&f).unwrap();
        let z = pf.sup(c0, 0, vec![]).unwrap();
        assert_eq!(
            pf.naturality_status(z),
            NaturalityStatus::HereditarilyNatural
        );
        let w2 = pf.sup(c1, 0, vec![z]).unwrap();
        assert_eq!(
            pf.naturality_status(w2),
            NaturalityStatus::HereditarilyNatural
        );
        // A child over C1 at an edge whose morphism has domain C0.
        let bad = pf.sup(c1, 0, vec![w2]).unwrap();
        assert_eq!(pf.naturality_status(bad), NaturalityStatus::NotComposable);
        let below = pf.sup(c0, 1, vec![bad]).unwrap();
        assert_eq!(pf.naturality_status(below), NaturalityStatus::NotComposable);
    }

    /// Over the cospan `D → C ← E` a label at C may have all of its edges
    /// coming from E, and these vanish under restriction to D.
    fn cospan_example() -> (PshMap, usize) {
        let cat = Arc::new(
            CategoryBuilder::new()
                .objects(["C", "D", "E"])
                .morphism("al", "D", "C")
                .morphism("be", "E", "C")
                .build()
                .unwrap(),
        );
        let a = Arc::new(
            Presheaf::from_named(
                cat.clone(),
                &[
                    (s("C"), vec![s("a")]),
                    (s("D"), vec![s("x")]),
                    (s("E"), vec![s("y"), s("l")]),
                ],
                &[
                    (s("al"), vec![(s("a"), s("x"))]),
                    (s("be"), vec![(s("a"), s("y"))]),
                ],
            )
            .unwrap(),
        );
        let b =
            Arc::new(Presheaf::from_named(cat.clone(), &[(s("E"), vec![s("b")])], &[]).unwrap());
        let f = PshMap::from_named(b, a, &[(s("E"), vec![(s("b"), s("y"))])]).unwrap();
        (f, cat.morphism_index("al").unwrap())
    }

    #[test]
    fn restriction_can_lower_rank() {
        let (f, al) = cospan_example();
        let mut pf = PshForest::new(&f).unwrap();
        let st = enumerate_psh_stage(&mut pf, 4, &Budget::default()).unwrap();
        let c = f.category().object_index("C").unwrap();
        let strict = st.stages[4].trees[c].clone().into_iter().any(|w| {
            let r = pf.restrict_tree(w, al).unwrap();
            pf.psh_rank(r) < pf.psh_rank(w)
        });
        assert!(strict);
    }

    #[test]
    fn a_composable_tree_can_fail_naturality() {
        // Over the walking arrow with B(C1) = {c}, B(C0) = {d}, c·u = d, the
        // label p at C1 has edges (id, c) and (u, d); naturality forces the
        // child at (u, d) to be the restriction of the child at (id, c).
        let cat = Arc::new(FinCategory::walking_arrow());
        let a = Arc::new(
            Presheaf::from_named(
                cat.clone(),
                &[
                    (s("C1"), vec![s("p"), s("q")]),
                    (s("C0"), vec![s("p0"), s("q0"), s("r0")]),
                ],
                &[(s("u"), vec![(s("p"), s("p0")), (s("q"), s("q0"))])],
            )
            .unwrap(),
        );
        let b = Arc::new(
            Presheaf::from_named(
                cat.clone(),
                &[(s("C1"), vec![s("c")]), (s("C0"), vec![s("d")])],
                &[(s("u"), vec![(s("c"), s("d"))])],
            )
            .unwrap(),
        );
        let f = PshMap::from_named(
            b,
            a,
            &[
                (s("C1"), vec![(s("c"), s("p"))]),
                (s("C0"), vec![(s("d"), s("p0"))]),
            ],
        )
        .unwrap();
        let (c0, c1, _) = objects(&f);
        let mut pf = PshForest::new(&f).unwrap();
        let q = pf.sup(c1, 1, vec![]).unwrap();
        let r0 = pf.sup(c0, 2, vec![]).unwrap();
        let q0 = pf.sup(c0, 1, vec![]).unwrap();
        let order = |pf: &PshForest, at_c1: WTree, at_c0: WTree| {
            let fiber = pf.hat().fiber(pf.hat().label(c1, 0));
            fiber
                .entries
                .iter()
                .map(|&(d, _, _)| if d == c1 { at_c1 } else { at_c0 })
                .collect::<Vec<_>>()
        };
        let good = order(&pf, q, q0);
        let good = pf.sup(c1, 0, good).unwrap();
        assert_eq!(
            pf.naturality_status(good),
            NaturalityStatus::HereditarilyNatural
        );
        let kids = order(&pf, q, r0);
        let bad = pf.sup(c1, 0, kids).unwrap();
        assert_eq!(
            pf.naturality_status(bad),
            NaturalityStatus::ComposableNotNatural
        );
        // A natural root over a non-natural subtree.
        let u = f.category().morphism_index("u").unwrap();
        let bu = pf.restrict_tree(bad, u).unwrap();
        let top = order(&pf, bad, bu);
        let top = pf.sup(c1, 0, top).unwrap();
        assert_eq!(
            pf.naturality_status(top),
            NaturalityStatus::NaturalNotHereditarily
        );
    }

    #[test]
    fn stages_match_filtered_brute_force() {
        for f in [running(), cospan_example().0] {
            let mut pf = PshForest::new(&f).unwrap();
            let b = Budget::default();
            let st = enumerate_psh_stage(&mut pf, 3, &b).unwrap();
            let mut flat = pf.forest().clone();
            let all = enumerate_stage(&mut flat, 3, &b).unwrap();
            let mut shadow = PshForest {
                hat: pf.hat.clone(),
                forest: flat,
            };
            for k in 0..=3 {
                let mut want: Vec<Vec<String>> = vec![Vec::new(); f.category().object_count()];
                for &w in &all.stages[k] {
                    if shadow.naturality_status(w) == NaturalityStatus::HereditarilyNatural {
                        want[shadow.object(w)].push(shadow.term(w));
                    }
                }
                let mut got: Vec<Vec<String>> = st.stages[k]
                    .trees
                    .iter()
                    .map(|ts| ts.iter().map(|&w| pf.term(w)).collect())
                    .collect();
                for v in want.iter_mut().chain(got.iter_mut()) {
                    v.sort();
                }
                assert_eq!(got, want, "stage {k}");
            }
        }
    }

    #[test]
    fn over_terminal_agrees_with_set_stages() {
        let one = Arc::new(FinCategory::terminal());
        let sig = crate::poly::PolySignature::from_arities(&[("a", 0), ("b", 2)]).unwrap();
        let a = Arc::new(Presheaf::constant(one.clone(), sig.labels().clone()));
        let b = Arc::new(Presheaf::constant(one, sig.edges().clone()));
        let f = PshMap::new(b, a, vec![sig.map().table().to_vec()]).unwrap();
        let mut pf = PshForest::new(&f).unwrap();
        let st = enumerate_psh_stage(&mut pf, 4, &Budget::default()).unwrap();
        let mut forest = Forest::new(sig);
        let plain = enumerate_stage(&mut forest, 4, &Budget::default()).unwrap();
        assert_eq!(
            st.stages
                .iter()
                .map(|s| s.trees[0].len())
                .collect::<Vec<_>>(),
            plain.sizes()
        );
    }

    #[test]
    fn restriction_laws_on_running_example() {
        let f = running();
        let cat = f.category().clone();
        let mut pf = PshForest::new(&f).unwrap();
        let st = enumerate_psh_stage(&mut pf, 4, &Budget::default()).unwrap();
        for k in 0..=4 {
            for c in 0..cat.object_count() {
                for &w in &st.stages[k].trees[c] {
                    for &al in cat.incoming(c) {
                        let wa = pf.restrict_tree(w, al).unwrap();
                        assert!(st.stages[k].position(wa).is_some());
                        assert!(pf.psh_rank(wa) <= pf.psh_rank(w));
                        assert_eq!(
                            pf.naturality_status(wa),
                            NaturalityStatus::HereditarilyNatural
                        );
                        for &be in cat.incoming(cat.src(al)) {
                            let lhs = pf.restrict_tree(wa, be).unwrap();
                            let rhs = pf.restrict_tree(w, cat.comp(al, be)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }
}
