//! Well-founded labelled trees: the W-type of a signature in finite sets.

use std::collections::HashMap;

use serde_json::{Map, Value};

use crate::budget::Budget;
use crate::error::{unknown, Error, Result};
use crate::fincat::FinSet;
use crate::poly::{apply_poly, DepPolySignature, PolyElem, PolySet, PolySignature};

/// Handle to a tree in a [`Forest`]. Equal handles are equal trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WTree(u32);

impl WTree {
    pub fn id(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    label: usize,
    children: Box<[WTree]>,
}

/// Hash-consed storage for the trees of one signature.
///
/// Children are stored along the canonical fiber order, so structural
/// equality is handle equality.
#[derive(Clone, Debug)]
pub struct Forest {
    sig: PolySignature,
    nodes: Vec<Node>,
    ranks: Vec<u32>,
    index: HashMap<Node, WTree>,
}

impl Forest {
    pub fn new(sig: PolySignature) -> Self {
        Forest {
            sig,
            nodes: Vec::new(),
            ranks: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn signature(&self) -> &PolySignature {
        &self.sig
    }

    /// Number of distinct trees built so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sup_a(t)` with children given as `(edge, tree)` pairs in any order.
    pub fn sup(&mut self, a: usize, children: &[(usize, WTree)]) -> Result<WTree> {
        let fiber = self.sig.fiber(a);
        let label = || self.sig.labels().name(a).to_string();
        let mut ordered = vec![None; fiber.len()];
        for &(b, t) in children {
            let slot = fiber
                .iter()
                .position(|&e| e == b)
                .ok_or_else(|| Error::FiberMismatch {
                    label: label(),
                    detail: format!("extraneous edge {}", self.sig.edges().name(b)),
                })?;
            if ordered[slot].replace(t).is_some() {
                return Err(Error::FiberMismatch {
                    label: label(),
                    detail: format!("edge {} given twice", self.sig.edges().name(b)),
                });
            }
        }
        if let Some(slot) = ordered.iter().position(Option::is_none) {
            return Err(Error::FiberMismatch {
                label: label(),
                detail: format!("missing edge {}", self.sig.edges().name(fiber[slot])),
            });
        }
        Ok(self.sup_args(a, ordered.into_iter().map(Option::unwrap).collect()))
    }

    /// `sup_a(t)` with children along the canonical fiber order.
    ///
    /// # Panics
    ///
    /// If the number of children differs from the arity of `a`.
    pub fn sup_args(&mut self, a: usize, children: Vec<WTree>) -> WTree {
        assert_eq!(children.len(), self.sig.arity(a), "arity mismatch");
        let node = Node {
            label: a,
            children: children.into_boxed_slice(),
        };
        if let Some(&t) = self.index.get(&node) {
            return t;
        }
        let rank = node
            .children
            .iter()
            .map(|c| self.ranks[c.0 as usize] + 1)
            .max()
            .unwrap_or(0);
        let t = WTree(u32::try_from(self.nodes.len()).expect("forest exceeds u32 handles"));
        self.nodes.push(node.clone());
        self.ranks.push(rank);
        self.index.insert(node, t);
        t
    }

    /// The tree `sup_a(t)` if it has already been built.
    pub fn find(&self, a: usize, children: &[WTree]) -> Option<WTree> {
        let node = Node {
            label: a,
            children: children.into(),
        };
        self.index.get(&node).copied()
    }

    pub fn label(&self, t: WTree) -> usize {
        self.nodes[t.0 as usize].label
    }

    pub fn children(&self, t: WTree) -> &[WTree] {
        &self.nodes[t.0 as usize].children
    }

    /// Leaves have rank 0, `sup_a(t)` has rank `max_b rank(t(b)) + 1`.
    pub fn rank(&self, t: WTree) -> usize {
        self.ranks[t.0 as usize] as usize
    }

    /// Number of nodes in the unfolded tree.
    pub fn node_count(&self, t: WTree) -> u128 {
        fn go(f: &Forest, t: WTree, memo: &mut HashMap<WTree, u128>) -> u128 {
            if let Some(&n) = memo.get(&t) {
                return n;
            }
            let n = 1 + f.children(t).iter().map(|&c| go(f, c, memo)).sum::<u128>();
            memo.insert(t, n);
            n
        }
        go(self, t, &mut HashMap::new())
    }

    /// Term notation: `a` for a leaf, `a(t1,...,tn)` otherwise.
    pub fn term(&self, t: WTree) -> String {
        let mut out = String::new();
        self.write_term(t, &mut out);
        out
    }

    fn write_term(&self, t: WTree, out: &mut String) {
        out.push_str(self.sig.labels().name(self.label(t)));
        let children = self.children(t);
        if !children.is_empty() {
            out.push('(');
            for (i, &c) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                self.write_term(c, out);
            }
            out.push(')');
        }
    }

    /// `{"label": a, "children": {b: tree}}`.
    pub fn to_json(&self, t: WTree) -> Value {
        let a = self.label(t);
        let children: Map<String, Value> = self
            .sig
            .fiber(a)
            .iter()
            .zip(self.children(t))
            .map(|(&b, &c)| (self.sig.edges().name(b).to_string(), self.to_json(c)))
            .collect();
        let mut obj = Map::new();
        obj.insert(
            "label".into(),
            Value::String(self.sig.labels().name(a).to_string()),
        );
        obj.insert("children".into(), Value::Object(children));
        Value::Object(obj)
    }

    pub fn from_json(&mut self, v: &Value) -> Result<WTree> {
        let label = v
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Invalid("tree node needs a string label".into()))?;
        let a = self
            .sig
            .labels()
            .index_of(label)
            .ok_or_else(|| unknown("label", label))?;
        let mut children = Vec::new();
        if let Some(obj) = v.get("children") {
            let obj = obj
                .as_object()
                .ok_or_else(|| Error::Invalid("children must be an object".into()))?;
            for (edge, child) in obj {
                let b = self
                    .sig
                    .edges()
                    .index_of(edge)
                    .ok_or_else(|| unknown("edge", edge))?;
                let c = self.from_json(child)?;
                children.push((b, c));
            }
        }
        self.sup(a, &children)
    }
}

/// The chain `W_{<0} ⊆ W_{<1} ⊆ … ⊆ W_{<n}`.
#[derive(Clone, Debug)]
pub struct Stages {
    pub stages: Vec<Vec<WTree>>,
    /// The first `k` with `W_{<k} = W_{<k+1}`, in which case `W = W_{<k}`.
    pub stabilized_at: Option<usize>,
}

impl Stages {
    pub fn sizes(&self) -> Vec<usize> {
        self.stages.iter().map(Vec::len).collect()
    }
}

/// Iterate the odometer over `radices`, last position fastest.
pub(crate) fn odometer(
    radices: &[usize],
    mut visit: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if radices.contains(&0) {
        return Ok(());
    }
    let mut digits = vec![0; radices.len()];
    loop {
        visit(&digits)?;
        let mut i = radices.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn stage_size(counts: impl Iterator<Item = u128>) -> u128 {
    counts.fold(0u128, |acc, c| acc.saturating_add(c))
}

/// Enumerate `W_{<k+1} = sup(P_f(W_{<k}))` for `k < n`, stopping early when
/// the chain stabilizes. Stages past stabilization repeat the fixed point.
pub fn enumerate_stage(forest: &mut Forest, n: usize, budget: &Budget) -> Result<Stages> {
    let mut stages: Vec<Vec<WTree>> = vec![Vec::new()];
    let mut stabilized_at = None;
    for k in 0..n {
        if stabilized_at.is_some() {
            stages.push(stages[k].clone());
            continue;
        }
        let prev = &stages[k];
        let sig = forest.signature().clone();
        let needed = stage_size(
            (0..sig.labels().len())
                .map(|a| (prev.len() as u128).saturating_pow(sig.arity(a) as u32)),
        );
        budget.admit(needed, || format!("W stage {}", k + 1))?;
        let mut next = Vec::with_capacity(needed as usize);
        for a in 0..sig.labels().len() {
            odometer(&vec![prev.len(); sig.arity(a)], |digits| {
                budget.charge(1)?;
                next.push(forest.sup_args(a, digits.iter().map(|&d| prev[d]).collect()));
                Ok(())
            })?;
        }
        if next.len() == prev.len() {
            stabilized_at = Some(k);
        }
        stages.push(next);
    }
    if stabilized_at.is_none() && n > 0 && stages[n].len() == stages[n - 1].len() {
        stabilized_at = Some(n - 1);
    }
    Ok(Stages {
        stages,
        stabilized_at,
    })
}

/// A finite algebra `P_f(X) → X`.
#[derive(Clone, Debug)]
pub struct Algebra {
    carrier: FinSet,
    domain: PolySet,
    structure: Vec<usize>,
}

impl Algebra {
    /// `structure` is indexed like `apply_poly(sig, carrier)`.
    pub fn new(
        sig: &PolySignature,
        carrier: FinSet,
        structure: Vec<usize>,
        budget: &Budget,
    ) -> Result<Self> {
        let domain = apply_poly(sig, &carrier, budget)?;
        if structure.len() != domain.len() {
            return Err(Error::Invalid(format!(
                "algebra structure has {} entries, expected {}",
                structure.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = structure.iter().find(|&&x| x >= carrier.len()) {
            return Err(Error::Invalid(format!(
                "algebra structure value {bad} is outside the carrier"
            )));
        }
        Ok(Algebra {
            carrier,
            domain,
            structure,
        })
    }

    pub fn from_fn(
        sig: &PolySignature,
        carrier: FinSet,
        structure: impl Fn(&PolyElem) -> usize,
        budget: &Budget,
    ) -> Result<Self> {
        let domain = apply_poly(sig, &carrier, budget)?;
        let table = domain.iter().map(|e| structure(&e)).collect();
        Algebra::new(sig, carrier, table, budget)
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    /// The structure map at `(a, args)`.
    pub fn apply(&self, a: usize, args: &[usize]) -> usize {
        self.structure[self
            .domain
            .index(a, args)
            .expect("argument list matches the signature")]
    }
}

/// The unique algebra map out of the W-type, evaluated at `w`.
pub fn fold(forest: &Forest, alg: &Algebra, w: WTree) -> usize {
    fold_memo(forest, alg, w, &mut HashMap::new())
}

/// [`fold`] sharing a memo table across calls.
pub fn fold_memo(
    forest: &Forest,
    alg: &Algebra,
    w: WTree,
    memo: &mut HashMap<WTree, usize>,
) -> usize {
    if let Some(&x) = memo.get(&w) {
        return x;
    }
    let args: Vec<usize> = forest
        .children(w)
        .iter()
        .map(|&c| fold_memo(forest, alg, c, memo))
        .collect();
    let x = alg.apply(forest.label(w), &args);
    memo.insert(w, x);
    x
}

/// The stage chain of a dependent W-type, one list per sort at each stage.
#[derive(Clone, Debug)]
pub struct DepStages {
    pub stages: Vec<Vec<Vec<WTree>>>,
    pub stabilized_at: Option<usize>,
}

/// Stages of the initial algebra of `D_f`: a tree rooted at `a` lies over
/// `g(a)`, and its child at edge `b` must lie over `h(b)`.
pub fn enumerate_dep_stage(
    forest: &mut Forest,
    sig: &DepPolySignature,
    n: usize,
    budget: &Budget,
) -> Result<DepStages> {
    if forest.signature() != sig.base() {
        return Err(Error::Invalid(
            "forest was built for a different signature".into(),
        ));
    }
    let sorts = sig.sorts().len();
    let base = sig.base().clone();
    let mut stages = vec![vec![Vec::new(); sorts]];
    let mut stabilized_at = None;
    for k in 0..n {
        if stabilized_at.is_some() {
            stages.push(stages[k].clone());
            continue;
        }
        let prev: &Vec<Vec<WTree>> = &stages[k];
        let radices_of = |a: usize| -> Vec<usize> {
            base.fiber(a)
                .iter()
                .map(|&b| prev[sig.h().apply(b)].len())
                .collect()
        };
        let needed = stage_size((0..base.labels().len()).map(|a| {
            radices_of(a)
                .iter()
                .fold(1u128, |acc, &r| acc.saturating_mul(r as u128))
        }));
        budget.admit(needed, || format!("dependent W stage {}", k + 1))?;
        let mut next = vec![Vec::new(); sorts];
        for a in 0..base.labels().len() {
            let fiber = base.fiber(a);
            odometer(&radices_of(a), |digits| {
                budget.charge(1)?;
                let children = digits
                    .iter()
                    .zip(fiber)
                    .map(|(&d, &b)| prev[sig.h().apply(b)][d])
                    .collect();
                next[sig.g().apply(a)].push(forest.sup_args(a, children));
                Ok(())
            })?;
        }
        let same = next.iter().zip(prev).all(|(x, y)| x.len() == y.len());
        if same {
            stabilized_at = Some(k);
        }
        stages.push(next);
    }
    Ok(DepStages {
        stages,
        stabilized_at,
    })
}
