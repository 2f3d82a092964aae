//! M-types presented by finite coalgebras.

use std::collections::HashMap;

use serde_json::{Map, Value};

use crate::error::{unknown, Error, Result};
use crate::fincat::{FinFn, FinSet};
use crate::poly::PolySignature;
use crate::wtree::{Forest, WTree};

/// A finite coalgebra `X → P_f(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    sig: PolySignature,
    states: FinSet,
    step: Vec<(usize, Vec<usize>)>,
}

impl Coalgebra {
    /// `step[x] = (a, u)` with `u` along the canonical fiber order of `a`.
    pub fn new(sig: PolySignature, states: FinSet, step: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        if step.len() != states.len() {
            return Err(Error::Invalid("one step per state is required".into()));
        }
        for (x, (a, u)) in step.iter().enumerate() {
            if *a >= sig.labels().len() {
                return Err(Error::Invalid(format!(
                    "state {} has an unknown label",
                    states.name(x)
                )));
            }
            if u.len() != sig.arity(*a) {
                return Err(Error::FiberMismatch {
                    label: sig.labels().name(*a).to_string(),
                    detail: format!("state {} lists {} children", states.name(x), u.len()),
                });
            }
            if u.iter().any(|&y| y >= states.len()) {
                return Err(Error::Invalid(format!(
                    "state {} steps outside the state set",
                    states.name(x)
                )));
            }
        }
        Ok(Coalgebra { sig, states, step })
    }

    pub fn signature(&self) -> &PolySignature {
        &self.sig
    }

    pub fn states(&self) -> &FinSet {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn label(&self, x: usize) -> usize {
        self.step[x].0
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.step[x].1
    }

    /// `{"states": [...], "step": {x: {"label": a, "children": {b: x'}}}}`.
    pub fn from_json(sig: PolySignature, v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("coalgebra: {what}"));
        let states = v
            .get("states")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("`states` must be a list"))?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| bad("state names must be strings"))
            })
            .collect::<Result<Vec<_>>>()?;
        let states = FinSet::new(states)?;
        let steps = v
            .get("step")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("`step` must be an object"))?;
        let mut step = Vec::with_capacity(states.len());
        for (x, name) in states.iter() {
            let entry = steps
                .get(name)
                .ok_or_else(|| bad(&format!("no step for {name}")))?;
            let label = entry
                .get("label")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("step needs a label"))?;
            let a = sig
                .labels()
                .index_of(label)
                .ok_or_else(|| unknown("label", label))?;
            let given = entry
                .get("children")
                .and_then(Value::as_object)
                .cloned()
                .unwrap_or_default();
            let mut u = Vec::with_capacity(sig.arity(a));
            for &b in sig.fiber(a) {
                let edge = sig.edges().name(b);
                let target = given.get(edge).and_then(Value::as_str).ok_or_else(|| {
                    Error::FiberMismatch {
                        label: label.to_string(),
                        detail: format!("state {} misses edge {edge}", states.name(x)),
                    }
                })?;
                u.push(
                    states
                        .index_of(target)
                        .ok_or_else(|| unknown("state", target))?,
                );
            }
            if given.len() != u.len() {
                return Err(Error::FiberMismatch {
                    label: label.to_string(),
                    detail: format!("state {} has extraneous edges", states.name(x)),
                });
            }
            step.push((a, u));
        }
        Coalgebra::new(sig, states, step)
    }

    pub fn to_json(&self) -> Value {
        let mut steps = Map::new();
        for (x, name) in self.states.iter() {
            let (a, u) = &self.step[x];
            let children: Map<String, Value> = self
                .sig
                .fiber(*a)
                .iter()
                .zip(u)
                .map(|(&b, &y)| {
                    (
                        self.sig.edges().name(b).to_string(),
                        Value::String(self.states.name(y).into()),
                    )
                })
                .collect();
            let mut entry = Map::new();
            entry.insert(
                "label".into(),
                Value::String(self.sig.labels().name(*a).into()),
            );
            entry.insert("children".into(), Value::Object(children));
            steps.insert(name.to_string(), Value::Object(entry));
        }
        let states = self
            .states
            .names()
            .iter()
            .cloned()
            .map(Value::String)
            .collect();
        let mut obj = Map::new();
        obj.insert("states".into(), Value::Array(states));
        obj.insert("step".into(), Value::Object(steps));
        Value::Object(obj)
    }

    /// A well-founded tree as a coalgebra on its distinct subtrees, each
    /// state named by its term. Also returns the state of the root.
    pub fn from_tree(forest: &Forest, w: WTree) -> (Coalgebra, usize) {
        let mut order = Vec::new();
        let mut seen = HashMap::new();
        fn visit(
            forest: &Forest,
            t: WTree,
            seen: &mut HashMap<WTree, usize>,
            order: &mut Vec<WTree>,
        ) {
            if seen.contains_key(&t) {
                return;
            }
            for &c in forest.children(t) {
                visit(forest, c, seen, order);
            }
            seen.insert(t, order.len());
            order.push(t);
        }
        visit(forest, w, &mut seen, &mut order);
        let states = FinSet::new(order.iter().map(|&t| forest.term(t)))
            .expect("distinct trees have distinct terms");
        let step = order
            .iter()
            .map(|&t| {
                (
                    forest.label(t),
                    forest.children(t).iter().map(|c| seen[c]).collect(),
                )
            })
            .collect();
        let c = Coalgebra::new(forest.signature().clone(), states, step)
            .expect("subtree coalgebra is well formed");
        (c, seen[&w])
    }
}

/// Handle to a truncated tree in a [`TruncForest`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncTree(u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum TruncNode {
    Cut,
    Node(usize, Box<[TruncTree]>),
}

/// Hash-consed elements of the finite iterates `P_f^n(1)`.
#[derive(Clone, Debug, Default)]
pub struct TruncForest {
    nodes: Vec<TruncNode>,
    index: HashMap<TruncNode, TruncTree>,
}

impl TruncForest {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: TruncNode) -> TruncTree {
        if let Some(&t) = self.index.get(&node) {
            return t;
        }
        let t = TruncTree(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, t);
        t
    }

    /// The unique element of `1`.
    pub fn cut(&mut self) -> TruncTree {
        self.intern(TruncNode::Cut)
    }

    pub fn node(&mut self, label: usize, children: Vec<TruncTree>) -> TruncTree {
        self.intern(TruncNode::Node(label, children.into_boxed_slice()))
    }

    pub fn is_cut(&self, t: TruncTree) -> bool {
        self.nodes[t.0 as usize] == TruncNode::Cut
    }

    /// `None` for the cut marker.
    pub fn label(&self, t: TruncTree) -> Option<usize> {
        match &self.nodes[t.0 as usize] {
            TruncNode::Cut => None,
            TruncNode::Node(a, _) => Some(*a),
        }
    }

    pub fn children(&self, t: TruncTree) -> &[TruncTree] {
        match &self.nodes[t.0 as usize] {
            TruncNode::Cut => &[],
            TruncNode::Node(_, c) => c,
        }
    }

    /// The chain map `P_f^{n+1}(1) → P_f^n(1)` applied to an element of
    /// depth `n + 1`: everything at depth `n` becomes a cut.
    pub fn project(&mut self, t: TruncTree, n: usize) -> TruncTree {
        if n == 0 {
            return self.cut();
        }
        match self.nodes[t.0 as usize].clone() {
            TruncNode::Cut => t,
            TruncNode::Node(a, children) => {
                let projected = children.iter().map(|&c| self.project(c, n - 1)).collect();
                self.node(a, projected)
            }
        }
    }

    /// Term notation with `_` for cuts.
    pub fn term(&self, sig: &PolySignature, t: TruncTree) -> String {
        match &self.nodes[t.0 as usize] {
            TruncNode::Cut => "_".into(),
            TruncNode::Node(a, children) if children.is_empty() => sig.labels().name(*a).into(),
            TruncNode::Node(a, children) => {
                let parts: Vec<String> = children.iter().map(|&c| self.term(sig, c)).collect();
                format!("{}({})", sig.labels().name(*a), parts.join(","))
            }
        }
    }
}

/// `tr_0 = !` and `tr_{n+1} = P_f(tr_n) ∘ step`.
pub fn truncate(coalg: &Coalgebra, x: usize, n: usize, trunc: &mut TruncForest) -> TruncTree {
    let mut memo = HashMap::new();
    truncate_memo(coalg, x, n, trunc, &mut memo)
}

fn truncate_memo(
    coalg: &Coalgebra,
    x: usize,
    n: usize,
    trunc: &mut TruncForest,
    memo: &mut HashMap<(usize, usize), TruncTree>,
) -> TruncTree {
    if n == 0 {
        return trunc.cut();
    }
    if let Some(&t) = memo.get(&(x, n)) {
        return t;
    }
    let (a, u) = &coalg.step[x];
    let children = u
        .iter()
        .map(|&y| truncate_memo(coalg, y, n - 1, trunc, memo))
        .collect();
    let t = trunc.node(*a, children);
    memo.insert((x, n), t);
    t
}

/// Coarsest stable partition of the disjoint union of two coalgebras for
/// the given signature function, by naive iteration.
fn refine(
    coalgs: &[&Coalgebra],
    initial: impl Fn(usize, usize) -> usize,
    key: impl Fn(usize, &[usize], &[usize]) -> Vec<usize>,
) -> Vec<Vec<usize>> {
    let mut offsets = Vec::new();
    let mut total = 0;
    for c in coalgs {
        offsets.push(total);
        total += c.len();
    }
    let locate = |g: usize| {
        let k = offsets.partition_point(|&o| o <= g) - 1;
        (k, g - offsets[k])
    };
    let mut block: Vec<usize> = (0..total)
        .map(|g| {
            let (k, x) = locate(g);
            initial(k, x)
        })
        .collect();
    let mut count = renumber(&mut block);
    loop {
        let keys: Vec<Vec<usize>> = (0..total)
            .map(|g| {
                let (k, x) = locate(g);
                let kids: Vec<usize> = coalgs[k]
                    .children(x)
                    .iter()
                    .map(|&y| block[offsets[k] + y])
                    .collect();
                key(block[g], &[coalgs[k].label(x)], &kids)
            })
            .collect();
        let mut ids: HashMap<&Vec<usize>, usize> = HashMap::new();
        let mut next: Vec<usize> = keys
            .iter()
            .map(|k| {
                let n = ids.len();
                *ids.entry(k).or_insert(n)
            })
            .collect();
        let new_count = renumber(&mut next);
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    coalgs
        .iter()
        .enumerate()
        .map(|(k, c)| block[offsets[k]..offsets[k] + c.len()].to_vec())
        .collect()
}

fn renumber(block: &mut [usize]) -> usize {
    let mut ids = HashMap::new();
    for b in block.iter_mut() {
        let n = ids.len();
        *b = *ids.entry(*b).or_insert(n);
    }
    ids.len()
}

fn structural_key(own: usize, label: &[usize], kids: &[usize]) -> Vec<usize> {
    let mut k = Vec::with_capacity(kids.len() + 2);
    k.push(own);
    k.extend_from_slice(label);
    k.extend_from_slice(kids);
    k
}

/// Bisimilarity classes of each state, jointly numbered across the inputs.
pub fn bisimulation_classes(coalgs: &[&Coalgebra]) -> Vec<Vec<usize>> {
    refine(coalgs, |k, x| coalgs[k].label(x), structural_key)
}

/// Whether two states denote the same element of the M-type.
pub fn bisimilar(c1: &Coalgebra, x1: usize, c2: &Coalgebra, x2: usize) -> bool {
    let blocks = bisimulation_classes(&[c1, c2]);
    blocks[0][x1] == blocks[1][x2]
}

/// The quotient by bisimilarity, with each class named by its least state.
pub fn minimize(coalg: &Coalgebra) -> (Coalgebra, FinFn) {
    let block = bisimulation_classes(&[coalg]).remove(0);
    quotient_by_blocks(coalg, &block)
}

fn quotient_by_blocks(coalg: &Coalgebra, block: &[usize]) -> (Coalgebra, FinFn) {
    let count = block.iter().max().map_or(0, |m| m + 1);
    let mut least: Vec<Option<usize>> = vec![None; count];
    for (x, &b) in block.iter().enumerate() {
        if least[b].is_none_or(|y| coalg.states.name(x) < coalg.states.name(y)) {
            least[b] = Some(x);
        }
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&p, &q| {
        coalg
            .states
            .name(least[p].unwrap())
            .cmp(coalg.states.name(least[q].unwrap()))
    });
    let mut pos = vec![0; count];
    for (i, &b) in order.iter().enumerate() {
        pos[b] = i;
    }
    let states = FinSet::new(
        order
            .iter()
            .map(|&b| coalg.states.name(least[b].unwrap()).to_string()),
    )
    .expect("representatives are distinct");
    let step = order
        .iter()
        .map(|&b| {
            let rep = least[b].unwrap();
            (
                coalg.label(rep),
                coalg.children(rep).iter().map(|&y| pos[block[y]]).collect(),
            )
        })
        .collect();
    let quotient = FinFn::from_table(block.iter().map(|&b| pos[b]).collect(), count);
    let min =
        Coalgebra::new(coalg.sig.clone(), states, step).expect("quotient coalgebra is well formed");
    (min, quotient)
}

/// Whether `h` is a coalgebra map `c1 → c2`.
pub fn is_coalgebra_morphism(c1: &Coalgebra, c2: &Coalgebra, h: &FinFn) -> bool {
    h.domain() == c1.len()
        && h.codomain() == c2.len()
        && (0..c1.len()).all(|x| {
            let y = h.apply(x);
            c1.label(x) == c2.label(y)
                && c1
                    .children(x)
                    .iter()
                    .zip(c2.children(y))
                    .all(|(&x1, &y1)| h.apply(x1) == y1)
        })
}

/// Experimental: the quotient of a coalgebra by the largest Aczel
/// bisimulation, which compares children as sets and ignores labels.
pub fn afa_quotient(coalg: &Coalgebra) -> (Coalgebra, FinFn) {
    let (min, to_min) = minimize(coalg);
    let block = refine(
        &[&min],
        |_, _| 0,
        |own, _label, kids| {
            let mut set = kids.to_vec();
            set.sort_unstable();
            set.dedup();
            let mut k = vec![own];
            k.extend(set);
            k
        },
    )
    .remove(0);
    let (afa, to_afa) = quotient_by_blocks(&min, &block);
    (afa, to_afa.after(&to_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::wtree::enumerate_stage;
    use proptest::prelude::*;

    fn unary() -> PolySignature {
        PolySignature::from_arities(&[("a", 1), ("z", 0)]).unwrap()
    }

    fn loops() -> (Coalgebra, Coalgebra) {
        let one = Coalgebra::new(unary(), FinSet::new(["x"]).unwrap(), vec![(0, vec![0])]).unwrap();
        let two = Coalgebra::new(
            unary(),
            FinSet::new(["y1", "y2"]).unwrap(),
            vec![(0, vec![1]), (0, vec![0])],
        )
        .unwrap();
        (one, two)
    }

    #[test]
    fn truncations() {
        let (one, _) = loops();
        let mut tf = TruncForest::new();
        let t0 = truncate(&one, 0, 0, &mut tf);
        assert!(tf.is_cut(t0));
        let t2 = truncate(&one, 0, 2, &mut tf);
        assert_eq!(tf.term(one.signature(), t2), "a(a(_))");
        let leaf = Coalgebra::new(unary(), FinSet::new(["q"]).unwrap(), vec![(1, vec![])]).unwrap();
        let t1 = truncate(&leaf, 0, 1, &mut tf);
        assert_eq!(truncate(&leaf, 0, 5, &mut tf), t1);
    }

    #[test]
    fn loops_are_bisimilar() {
        let (one, two) = loops();
        assert!(bisimilar(&one, 0, &one, 0));
        assert!(bisimilar(&one, 0, &two, 1));
        let leaf = Coalgebra::new(unary(), FinSet::new(["q"]).unwrap(), vec![(1, vec![])]).unwrap();
        assert!(!bisimilar(&one, 0, &leaf, 0));
        let (min, q) = minimize(&two);
        assert_eq!(min.len(), 1);
        assert_eq!(min.states().name(0), "y1");
        assert!(is_coalgebra_morphism(&two, &min, &q));
    }

    #[test]
    fn json_round_trip() {
        let (_, two) = loops();
        let v = two.to_json();
        assert_eq!(Coalgebra::from_json(unary(), &v).unwrap(), two);
        let mut broken = v.clone();
        broken["step"]["y1"]["children"] = serde_json::json!({});
        assert!(matches!(
            Coalgebra::from_json(unary(), &broken),
            Err(Error::FiberMismatch { .. })
        ));
    }

    #[test]
    fn tree_coalgebra_counts_subtrees() {
        let mut f = Forest::new(PolySignature::from_arities(&[("e", 0), ("p", 2)]).unwrap());
        let s = enumerate_stage(&mut f, 4, &Budget::default()).unwrap();
        for &w in &s.stages[4] {
            let (c, _) = Coalgebra::from_tree(&f, w);
            let (min, _) = minimize(&c);
            assert_eq!(min.len(), c.len());
        }
    }

    #[test]
    fn afa_identifies_loops_and_duplicates() {
        let sig = PolySignature::from_arities(&[("one", 1), ("two", 2)]).unwrap();
        // x = {x} and y = {y, y} are the same non-well-founded set.
        let c = Coalgebra::new(
            sig,
            FinSet::new(["x", "y"]).unwrap(),
            vec![(0, vec![0]), (1, vec![1, 1])],
        )
        .unwrap();
        assert!(!bisimilar(&c, 0, &c, 1));
        let (afa, _) = afa_quotient(&c);
        assert_eq!(afa.len(), 1);
    }

    fn coalgebra() -> impl Strategy<Value = Coalgebra> {
        (1usize..5).prop_flat_map(|n| {
            prop::collection::vec((0usize..3, prop::collection::vec(0..n, 2)), n).prop_map(
                move |raw| {
                    let sig = PolySignature::from_arities(&[("z", 0), ("s", 1), ("p", 2)]).unwrap();
                    let step = raw
                        .into_iter()
                        .map(|(a, kids)| (a, kids[..a].to_vec()))
                        .collect();
                    Coalgebra::new(sig, FinSet::numbered("x", n), step).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn truncation_coherence(c in coalgebra()) {
            let mut tf = TruncForest::new();
            for x in 0..c.len() {
                for n in 0..=5 {
                    let longer = truncate(&c, x, n + 1, &mut tf);
                    let shorter = truncate(&c, x, n, &mut tf);
                    prop_assert_eq!(tf.project(longer, n), shorter);
                }
            }
        }

        #[test]
        fn bisimilarity_is_truncation_equality(c1 in coalgebra(), c2 in coalgebra()) {
            let depth = c1.len() * c2.len() + 1;
            let mut tf = TruncForest::new();
            for x in 0..c1.len() {
                for y in 0..c2.len() {
                    let same = (0..=depth).all(|n| truncate(&c1, x, n, &mut tf) == truncate(&c2, y, n, &mut tf));
                    prop_assert_eq!(bisimilar(&c1, x, &c2, y), same);
                }
            }
        }

        #[test]
        fn minimize_is_minimal_and_idempotent(c in coalgebra()) {
            let (min, q) = minimize(&c);
            prop_assert!(is_coalgebra_morphism(&c, &min, &q));
            prop_assert!(q.is_surjective());
            let (again, q2) = minimize(&min);
            prop_assert_eq!(again.len(), min.len());
            prop_assert!(q2.is_injective());
        }
    }
}
