//! Pseudo-equivalence relations, their quotients, and the Aczel quotient of
//! W-trees by bisimilarity.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{
    image_factorization, product, pullback, FinFn, FinSet, HomSearch, Presheaf, PshMap, Pullback,
};
use crate::wtree::{enumerate_stage, Forest, WTree};

/// A relation `(s, t): R → Y × Y` with witnesses for reflexivity `ρ`,
/// symmetry `σ` and transitivity `τ: P → R`, where `P` is the pullback of
/// `t` against `s`.
#[derive(Clone, Debug)]
pub struct PseudoEqRel {
    pub s: PshMap,
    pub t: PshMap,
    pub rho: PshMap,
    pub sigma: PshMap,
    pub tau: PshMap,
    pub composable: Pullback,
}

/// Raw data for [`check_pseudo_eqrel`]. `tau` is indexed by the pairs of
/// the pullback `P`, as listed in [`Pullback::pairs`].
pub struct PseudoEqRelCandidate {
    pub s: PshMap,
    pub t: PshMap,
    pub rho: Vec<Vec<usize>>,
    pub sigma: Vec<Vec<usize>>,
    pub tau: Box<dyn Fn(usize, usize, usize) -> usize>,
}

fn composable_pairs(s: &PshMap, t: &PshMap) -> Result<Pullback> {
    pullback(t, s)
}

/// Check conditions (1) to (3) pointwise and package the witnesses.
pub fn check_pseudo_eqrel(c: PseudoEqRelCandidate) -> Result<PseudoEqRel> {
    let (s, t) = (c.s, c.t);
    if s.source() != t.source() || s.target() != t.target() {
        return Err(Error::Invalid(
            "s and t must share source and target".into(),
        ));
    }
    let r = s.source().clone();
    let y = s.target().clone();
    let cat = r.category().clone();
    let rho = PshMap::new(y.clone(), r.clone(), c.rho)?;
    let sigma = PshMap::new(r.clone(), r.clone(), c.sigma)?;
    let p = composable_pairs(&s, &t)?;
    let tau_components = p
        .pairs
        .iter()
        .enumerate()
        .map(|(o, ps)| ps.iter().map(|&(r1, r2)| (c.tau)(o, r1, r2)).collect())
        .collect();
    let tau = PshMap::new(p.apex.clone(), r.clone(), tau_components)?;
    for o in 0..cat.object_count() {
        for x in 0..y.size(o) {
            let w = rho.apply(o, x);
            if s.apply(o, w) != x || t.apply(o, w) != x {
                return Err(Error::ConditionFailed {
                    condition: 1,
                    witness: y.at(o).name(x).to_string(),
                });
            }
        }
        for e in 0..r.size(o) {
            let w = sigma.apply(o, e);
            if s.apply(o, w) != t.apply(o, e) || t.apply(o, w) != s.apply(o, e) {
                return Err(Error::ConditionFailed {
                    condition: 2,
                    witness: r.at(o).name(e).to_string(),
                });
            }
        }
        for (i, &(r1, r2)) in p.pairs[o].iter().enumerate() {
            let w = tau.apply(o, i);
            if s.apply(o, w) != s.apply(o, r1) || t.apply(o, w) != t.apply(o, r2) {
                return Err(Error::ConditionFailed {
                    condition: 3,
                    witness: p.apex.at(o).name(i).to_string(),
                });
            }
        }
    }
    Ok(PseudoEqRel {
        s,
        t,
        rho,
        sigma,
        tau,
        composable: p,
    })
}

/// Search for natural witnesses making `(s, t)` a pseudo-equivalence
/// relation, naming the first condition that has none.
pub fn find_witnesses(s: PshMap, t: PshMap, budget: &Budget) -> Result<PseudoEqRel> {
    let r = s.source().clone();
    let y = s.target().clone();
    let fail = |condition: u8| Error::ConditionFailed {
        condition,
        witness: "no natural witness exists".into(),
    };
    let (s1, t1) = (s.clone(), t.clone());
    let rho = HomSearch::new(&y, &r)
        .candidates(move |o, x| {
            (0..s1.source().size(o))
                .filter(|&e| s1.apply(o, e) == x && t1.apply(o, e) == x)
                .collect()
        })
        .budget(budget)
        .first()?
        .ok_or_else(|| fail(1))?;
    let (s1, t1) = (s.clone(), t.clone());
    let sigma = HomSearch::new(&r, &r)
        .candidates(move |o, e| {
            (0..s1.source().size(o))
                .filter(|&w| s1.apply(o, w) == t1.apply(o, e) && t1.apply(o, w) == s1.apply(o, e))
                .collect()
        })
        .budget(budget)
        .first()?
        .ok_or_else(|| fail(2))?;
    let p = composable_pairs(&s, &t)?;
    let (s1, t1, pairs) = (s.clone(), t.clone(), p.pairs.clone());
    let tau = HomSearch::new(&p.apex, &r)
        .candidates(move |o, i| {
            let (r1, r2) = pairs[o][i];
            (0..s1.source().size(o))
                .filter(|&w| s1.apply(o, w) == s1.apply(o, r1) && t1.apply(o, w) == t1.apply(o, r2))
                .collect()
        })
        .budget(budget)
        .first()?
        .ok_or_else(|| fail(3))?;
    let pairs = p.pairs.clone();
    let lookup: Vec<HashMap<(usize, usize), usize>> = pairs
        .iter()
        .zip(&tau)
        .map(|(ps, ts)| ps.iter().copied().zip(ts.iter().copied()).collect())
        .collect();
    check_pseudo_eqrel(PseudoEqRelCandidate {
        s,
        t,
        rho,
        sigma,
        tau: Box::new(move |o, r1, r2| lookup[o][&(r1, r2)]),
    })
}

/// A partition of a finite set with a canonical representative per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqClassMap {
    /// Classes named by their representatives.
    pub carrier: FinSet,
    pub class_of: FinFn,
    pub representatives: Vec<usize>,
}

impl EqClassMap {
    /// Build from arbitrary class labels, naming each class by its least
    /// member under `name` and ordering classes by those names.
    pub fn from_labels(labels: &[usize], name: impl Fn(usize) -> String) -> Self {
        let mut least: HashMap<usize, (String, usize)> = HashMap::new();
        for (x, &l) in labels.iter().enumerate() {
            let n = name(x);
            match least.get(&l) {
                Some((m, _)) if *m <= n => {}
                _ => {
                    least.insert(l, (n, x));
                }
            }
        }
        let mut classes: Vec<(usize, String, usize)> =
            least.into_iter().map(|(l, (n, x))| (l, n, x)).collect();
        classes.sort_by(|p, q| p.1.cmp(&q.1));
        let pos: HashMap<usize, usize> =
            classes.iter().enumerate().map(|(i, c)| (c.0, i)).collect();
        let carrier =
            FinSet::new(classes.iter().map(|c| c.1.clone())).expect("representatives are distinct");
        let class_of = FinFn::from_table(labels.iter().map(|l| pos[l]).collect(), classes.len());
        EqClassMap {
            carrier,
            class_of,
            representatives: classes.iter().map(|c| c.2).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        self.class_of.fibers()
    }
}

/// The quotient `Y → Y/R`, computed through the image `S ⊆ Y × Y`.
pub fn quotient_by_pseudo_eqrel(rel: &PseudoEqRel) -> Result<(Vec<EqClassMap>, PshMap)> {
    let y = rel.s.target().clone();
    let r = rel.s.source().clone();
    let cat = y.category().clone();
    let yy = product(&y, &y)?;
    let pairing = PshMap::new(
        r.clone(),
        yy.apex.clone(),
        (0..cat.object_count())
            .map(|o| {
                (0..r.size(o))
                    .map(|e| {
                        yy.index(o, rel.s.apply(o, e), rel.t.apply(o, e))
                            .expect("every pair is in the product")
                    })
                    .collect()
            })
            .collect(),
    )?;
    let (_, mono) = image_factorization(&pairing);
    let mut maps = Vec::with_capacity(cat.object_count());
    for o in 0..cat.object_count() {
        let n = y.size(o);
        let mut related = vec![vec![false; n]; n];
        for &p in mono.component(o) {
            let (a, b) = yy.pairs[o][p];
            related[a][b] = true;
        }
        let fail = |detail: String| Error::ImageNotEquivalence {
            object: cat.object_name(o).to_string(),
            detail,
        };
        for a in 0..n {
            if !related[a][a] {
                return Err(fail(format!(
                    "{} is not related to itself",
                    y.at(o).name(a)
                )));
            }
            for b in 0..n {
                if related[a][b] && !related[b][a] {
                    return Err(fail(format!(
                        "{} ~ {} is not symmetric",
                        y.at(o).name(a),
                        y.at(o).name(b)
                    )));
                }
                for c in 0..n {
                    if related[a][b] && related[b][c] && !related[a][c] {
                        return Err(fail(format!(
                            "{} ~ {} ~ {} is not transitive",
                            y.at(o).name(a),
                            y.at(o).name(b),
                            y.at(o).name(c)
                        )));
                    }
                }
            }
        }
        let labels: Vec<usize> = (0..n)
            .map(|a| related[a].iter().position(|&v| v).unwrap())
            .collect();
        maps.push(EqClassMap::from_labels(&labels, |a| {
            y.at(o).name(a).to_string()
        }));
    }
    let sets = maps.iter().map(|m| m.carrier.clone()).collect();
    let mut restrict = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (d, c) = (cat.src(m), cat.dst(m));
        let class = &maps[c].class_of;
        let table: Vec<usize> = maps[c]
            .representatives
            .iter()
            .map(|&rep| maps[d].class_of.apply(y.restrict(m, rep)))
            .collect();
        for a in 0..y.size(c) {
            if maps[d].class_of.apply(y.restrict(m, a)) != table[class.apply(a)] {
                return Err(Error::ImageNotEquivalence {
                    object: cat.object_name(c).to_string(),
                    detail: format!(
                        "restriction along {} does not descend",
                        cat.morphism_name(m)
                    ),
                });
            }
        }
        restrict.push(table);
    }
    let quotient = Arc::new(Presheaf::new(cat.clone(), sets, restrict)?);
    let q = PshMap::new(
        y,
        quotient,
        maps.iter().map(|m| m.class_of.table().to_vec()).collect(),
    )?;
    Ok((maps, q))
}

/// Memoized bisimilarity of W-trees in the sense of Aczel: every child on
/// each side matches some child on the other. Labels are not compared.
#[derive(Debug, Default)]
pub struct Aczel {
    memo: HashMap<(WTree, WTree), bool>,
}

impl Aczel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bisimilar(&mut self, forest: &Forest, w1: WTree, w2: WTree) -> bool {
        if w1 == w2 {
            return true;
        }
        let key = if w1 < w2 { (w1, w2) } else { (w2, w1) };
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (c1, c2) = (forest.children(w1).to_vec(), forest.children(w2).to_vec());
        let v = c1
            .iter()
            .all(|&e| c2.iter().any(|&e2| self.bisimilar(forest, e, e2)))
            && c2
                .iter()
                .all(|&e2| c1.iter().any(|&e| self.bisimilar(forest, e, e2)));
        self.memo.insert(key, v);
        v
    }
}

pub fn aczel_bisimilar(forest: &Forest, w1: WTree, w2: WTree) -> bool {
    Aczel::new().bisimilar(forest, w1, w2)
}

/// The stage `W_{<n}` with its extensional classes.
#[derive(Clone, Debug)]
pub struct AczelQuotient {
    pub trees: Vec<WTree>,
    pub classes: EqClassMap,
}

impl AczelQuotient {
    /// `{"classes": [[tree, ...], ...], "representatives": [...]}` with trees
    /// written as terms.
    pub fn to_json(&self, forest: &Forest) -> Value {
        let classes: Vec<Vec<String>> = self
            .classes
            .members()
            .iter()
            .map(|ms| ms.iter().map(|&i| forest.term(self.trees[i])).collect())
            .collect();
        json!({"classes": classes, "representatives": self.classes.carrier.names()})
    }
}

/// Classify `W_{<n}` by bisimilarity. Each tree's class is the interned set
/// of its children's classes, computed bottom-up; the representative of a
/// class is its least term.
pub fn extensional_quotient(
    forest: &mut Forest,
    n: usize,
    budget: &Budget,
) -> Result<AczelQuotient> {
    let stages = enumerate_stage(forest, n, budget)?;
    let trees = stages.stages[n].clone();
    let mut by_rank = trees.clone();
    by_rank.sort_by_key(|&t| forest.rank(t));
    let mut class: HashMap<WTree, usize> = HashMap::new();
    let mut interned: HashMap<Vec<usize>, usize> = HashMap::new();
    for &t in &by_rank {
        let mut set: Vec<usize> = forest.children(t).iter().map(|c| class[c]).collect();
        set.sort_unstable();
        set.dedup();
        let next = interned.len();
        class.insert(t, *interned.entry(set).or_insert(next));
    }
    let labels: Vec<usize> = trees.iter().map(|t| class[t]).collect();
    let terms: Vec<String> = trees.iter().map(|&t| forest.term(t)).collect();
    let classes = EqClassMap::from_labels(&labels, |i| terms[i].clone());
    Ok(AczelQuotient { trees, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use crate::poly::PolySignature;

    fn set_presheaf(n: usize) -> Arc<Presheaf> {
        Arc::new(Presheaf::constant(
            Arc::new(FinCategory::terminal()),
            FinSet::numbered("y", n),
        ))
    }

    /// A relation on a set of size `n` given by a list of pairs.
    fn relation(n: usize, pairs: &[(usize, usize)]) -> (PshMap, PshMap) {
        let y = set_presheaf(n);
        let r = Arc::new(Presheaf::constant(
            y.category().clone(),
            FinSet::numbered("r", pairs.len()),
        ));
        let s = PshMap::new(
            r.clone(),
            y.clone(),
            vec![pairs.iter().map(|p| p.0).collect()],
        )
        .unwrap();
        let t = PshMap::new(r, y, vec![pairs.iter().map(|p| p.1).collect()]).unwrap();
        (s, t)
    }

    #[test]
    fn diagonal_and_total_relations() {
        let (s, t) = relation(3, &[(0, 0), (1, 1), (2, 2)]);
        let rel = check_pseudo_eqrel(PseudoEqRelCandidate {
            s,
            t,
            rho: vec![vec![0, 1, 2]],
            sigma: vec![vec![0, 1, 2]],
            tau: Box::new(|_, r1, _| r1),
        })
        .unwrap();
        let (classes, q) = quotient_by_pseudo_eqrel(&rel).unwrap();
        assert_eq!(classes[0].len(), 3);
        assert!(q.is_iso());

        let all: Vec<(usize, usize)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        let (s, t) = relation(3, &all);
        let rel = find_witnesses(s, t, &Budget::default()).unwrap();
        let (classes, _) = quotient_by_pseudo_eqrel(&rel).unwrap();
        assert_eq!(classes[0].len(), 1);
    }

    #[test]
    fn missing_symmetry_is_reported() {
        let (s, t) = relation(2, &[(0, 0), (1, 1), (0, 1)]);
        let err = find_witnesses(s.clone(), t.clone(), &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::ConditionFailed { condition: 2, .. }));
        let err = check_pseudo_eqrel(PseudoEqRelCandidate {
            s,
            t,
            rho: vec![vec![0, 1]],
            sigma: vec![vec![0, 1, 2]],
            tau: Box::new(|_, r1, _| r1),
        })
        .unwrap_err();
        assert!(matches!(err, Error::ConditionFailed { condition: 2, .. }));
    }

    #[test]
    fn redundant_witnesses_give_two_classes() {
        // y0 ~ y1 witnessed twice, plus the diagonal twice at y2.
        let (s, t) = relation(3, &[(0, 0), (1, 1), (2, 2), (2, 2), (0, 1), (1, 0), (0, 1)]);
        let rel = find_witnesses(s, t, &Budget::default()).unwrap();
        let (classes, q) = quotient_by_pseudo_eqrel(&rel).unwrap();
        assert_eq!(classes[0].len(), 2);
        assert_eq!(
            classes[0].carrier.names(),
            &["y0".to_string(), "y2".to_string()]
        );
        // q coequalizes s and t.
        assert_eq!(
            q.after(&rel.s).unwrap().components(),
            q.after(&rel.t).unwrap().components()
        );
    }

    fn set_formers() -> Forest {
        Forest::new(PolySignature::from_arities(&[("e", 0), ("u", 1), ("p", 2)]).unwrap())
    }

    #[test]
    fn stage_three_has_four_sets() {
        let mut f = set_formers();
        let q = extensional_quotient(&mut f, 3, &Budget::default()).unwrap();
        assert_eq!(q.trees.len(), 13);
        assert_eq!(q.classes.len(), 4);
        // {}, {{}}, {{}, {{}}} and {{{}}}, each named by its least term.
        assert_eq!(
            q.classes.carrier.names(),
            &["e", "p(e,e)", "p(e,p(e,e))", "p(p(e,e),p(e,e))"]
        );
    }

    #[test]
    fn bisimilarity_ignores_arity_and_labels() {
        let mut f = set_formers();
        let e = f.sup_args(0, vec![]);
        let two = f.sup_args(2, vec![e, e]);
        let one = f.sup_args(1, vec![e]);
        assert!(aczel_bisimilar(&f, two, one));
        assert!(!aczel_bisimilar(&f, e, one));
        let mut leaves = Forest::new(PolySignature::from_arities(&[("a", 0), ("b", 0)]).unwrap());
        let q = extensional_quotient(&mut leaves, 2, &Budget::default()).unwrap();
        assert_eq!(q.classes.len(), 1);
        assert!(extensional_quotient(&mut leaves, 0, &Budget::default())
            .unwrap()
            .classes
            .is_empty());
    }

    #[test]
    fn pairwise_check_agrees_with_classes() {
        let mut f = set_formers();
        let q = extensional_quotient(&mut f, 3, &Budget::default()).unwrap();
        let mut az = Aczel::new();
        for (i, &x) in q.trees.iter().enumerate() {
            for (j, &y) in q.trees.iter().enumerate() {
                let same = q.classes.class_of.apply(i) == q.classes.class_of.apply(j);
                assert_eq!(az.bisimilar(&f, x, y), same);
            }
        }
    }
}
