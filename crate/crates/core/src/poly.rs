//! Polynomial functors on finite sets, on families of sets, and on presheaves.

use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{FinFn, FinSet, HomSearch, Presheaf, PshMap, SearchOrder};

/// A map `f: B → A` read as a signature: labels `A`, edges `B`, and the
/// arity of `a` the fiber `B_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySignature {
    labels: FinSet,
    edges: FinSet,
    map: FinFn,
    fibers: Vec<Vec<usize>>,
}

impl PolySignature {
    pub fn new(labels: FinSet, edges: FinSet, map: FinFn) -> Result<Self> {
        if map.domain() != edges.len() || map.codomain() != labels.len() {
            return Err(Error::Invalid(
                "signature map must run from edges to labels".into(),
            ));
        }
        let mut fibers = map.fibers();
        for fiber in &mut fibers {
            fiber.sort_by(|&x, &y| edges.name(x).cmp(edges.name(y)));
        }
        Ok(PolySignature {
            labels,
            edges,
            map,
            fibers,
        })
    }

    /// Labels with the given arities. The edges of `a` are named `a.0`,
    /// `a.1`, and so on.
    pub fn from_arities<S: AsRef<str>>(arities: &[(S, usize)]) -> Result<Self> {
        let labels = FinSet::new(arities.iter().map(|(a, _)| a.as_ref().to_string()))?;
        let mut names = Vec::new();
        let mut table = Vec::new();
        for (i, (a, n)) in arities.iter().enumerate() {
            for k in 0..*n {
                names.push(format!("{}.{k}", a.as_ref()));
                table.push(i);
            }
        }
        let edges = FinSet::new(names)?;
        let map = FinFn::new(table, labels.len())?;
        PolySignature::new(labels, edges, map)
    }

    pub fn labels(&self) -> &FinSet {
        &self.labels
    }

    pub fn edges(&self) -> &FinSet {
        &self.edges
    }

    pub fn map(&self) -> &FinFn {
        &self.map
    }

    /// `B_a` in canonical order.
    pub fn fiber(&self, a: usize) -> &[usize] {
        &self.fibers[a]
    }

    pub fn arity(&self, a: usize) -> usize {
        self.fibers[a].len()
    }
}

/// `f: B → A` together with `h: B → C` and `g: A → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepPolySignature {
    base: PolySignature,
    sorts: FinSet,
    h: FinFn,
    g: FinFn,
}

impl DepPolySignature {
    pub fn new(base: PolySignature, sorts: FinSet, h: FinFn, g: FinFn) -> Result<Self> {
        if h.domain() != base.edges.len() || h.codomain() != sorts.len() {
            return Err(Error::Invalid("h must run from edges to sorts".into()));
        }
        if g.domain() != base.labels.len() || g.codomain() != sorts.len() {
            return Err(Error::Invalid("g must run from labels to sorts".into()));
        }
        Ok(DepPolySignature { base, sorts, h, g })
    }

    pub fn base(&self) -> &PolySignature {
        &self.base
    }

    pub fn sorts(&self) -> &FinSet {
        &self.sorts
    }

    pub fn h(&self) -> &FinFn {
        &self.h
    }

    pub fn g(&self) -> &FinFn {
        &self.g
    }
}

/// An element `(a, t)` of a polynomial functor: `t` lists the argument at
/// each edge of the fiber, in canonical fiber order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyElem {
    pub label: usize,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Block {
    label: usize,
    offset: usize,
    radices: Vec<usize>,
    size: usize,
}

/// The finite set `Σ_a Π_{b ∈ B_a} X_b`, indexed arithmetically.
///
/// Elements are ordered label-major, then as an odometer over the arguments
/// with the last edge running fastest.
#[derive(Clone, Debug)]
pub struct PolySet {
    blocks: Vec<Block>,
    block_of: Vec<Option<usize>>,
    len: usize,
    names: FinSet,
}

impl PolySet {
    fn build(
        label_count: usize,
        labels: impl Iterator<Item = (usize, Vec<usize>)>,
        budget: &Budget,
        name: impl Fn(&PolyElem) -> String,
    ) -> Result<PolySet> {
        let mut blocks = Vec::new();
        let mut block_of = vec![None; label_count];
        let mut total: u128 = 0;
        for (label, radices) in labels {
            let size = radices
                .iter()
                .fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
            total = total.saturating_add(size);
            block_of[label] = Some(blocks.len());
            blocks.push(Block {
                label,
                offset: 0,
                radices,
                size: 0,
            });
            budget.admit(total, || "polynomial functor application".into())?;
            blocks.last_mut().unwrap().size = size as usize;
        }
        let mut offset = 0;
        for b in &mut blocks {
            b.offset = offset;
            offset += b.size;
        }
        let mut set = PolySet {
            blocks,
            block_of,
            len: offset,
            names: FinSet::empty(),
        };
        set.names = FinSet::new((0..set.len).map(|i| name(&set.element(i))))?;
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn names(&self) -> &FinSet {
        &self.names
    }

    pub fn element(&self, i: usize) -> PolyElem {
        let k = self.blocks.partition_point(|b| b.offset + b.size <= i);
        let block = &self.blocks[k];
        let mut rest = i - block.offset;
        let mut args = vec![0; block.radices.len()];
        for (slot, &r) in args.iter_mut().zip(&block.radices).rev() {
            *slot = rest % r;
            rest /= r;
        }
        PolyElem {
            label: block.label,
            args,
        }
    }

    /// Position of `(label, args)`, if it is an element.
    pub fn index(&self, label: usize, args: &[usize]) -> Option<usize> {
        let block = &self.blocks[(*self.block_of.get(label)?)?];
        if args.len() != block.radices.len() {
            return None;
        }
        let mut i = 0;
        for (&x, &r) in args.iter().zip(&block.radices) {
            if x >= r {
                return None;
            }
            i = i * r + x;
        }
        Some(block.offset + i)
    }

    pub fn iter(&self) -> impl Iterator<Item = PolyElem> + '_ {
        (0..self.len).map(|i| self.element(i))
    }

    /// `(a, t) ↦ (a, u ∘ t)` into `target`, which must be the same functor
    /// applied to the codomain of `u`.
    pub fn map_to(&self, target: &PolySet, u: &FinFn) -> FinFn {
        let table = self
            .iter()
            .map(|e| {
                let args: Vec<usize> = e.args.iter().map(|&x| u.apply(x)).collect();
                target
                    .index(e.label, &args)
                    .expect("target is the image functor")
            })
            .collect();
        FinFn::from_table(table, target.len())
    }
}

pub(crate) fn render(label: &str, args: impl Iterator<Item = String>) -> String {
    let args: Vec<String> = args.collect();
    if args.is_empty() {
        label.to_string()
    } else {
        format!("{label}({})", args.join(","))
    }
}

/// `P_f(X) = Σ_a X^{B_a}`.
pub fn apply_poly(sig: &PolySignature, x: &FinSet, budget: &Budget) -> Result<PolySet> {
    PolySet::build(
        sig.labels.len(),
        (0..sig.labels.len()).map(|a| (a, vec![x.len(); sig.arity(a)])),
        budget,
        |e| {
            render(
                sig.labels.name(e.label),
                e.args.iter().map(|&v| x.name(v).to_string()),
            )
        },
    )
}

/// `P_f(u): P_f(X) → P_f(Y)`.
pub fn apply_poly_map(
    sig: &PolySignature,
    x: &FinSet,
    y: &FinSet,
    u: &FinFn,
    budget: &Budget,
) -> Result<FinFn> {
    if u.domain() != x.len() || u.codomain() != y.len() {
        return Err(Error::Invalid(
            "map does not run between the given sets".into(),
        ));
    }
    let px = apply_poly(sig, x, budget)?;
    let py = apply_poly(sig, y, budget)?;
    Ok(px.map_to(&py, u))
}

/// `D_f(X)_c = Σ_{a ∈ A_c} Π_{b ∈ B_a} X_{h(b)}`, one set per sort.
pub fn apply_dep_poly(
    sig: &DepPolySignature,
    xs: &[FinSet],
    budget: &Budget,
) -> Result<Vec<PolySet>> {
    if xs.len() != sig.sorts.len() {
        return Err(Error::Invalid("one set per sort is required".into()));
    }
    let base = &sig.base;
    (0..sig.sorts.len())
        .map(|c| {
            let labels = (0..base.labels.len())
                .filter(|&a| sig.g.apply(a) == c)
                .map(|a| {
                    (
                        a,
                        base.fiber(a)
                            .iter()
                            .map(|&b| xs[sig.h.apply(b)].len())
                            .collect(),
                    )
                });
            PolySet::build(base.labels.len(), labels, budget, |e| {
                let fiber = base.fiber(e.label);
                render(
                    base.labels.name(e.label),
                    e.args
                        .iter()
                        .zip(fiber)
                        .map(|(&v, &b)| xs[sig.h.apply(b)].name(v).to_string()),
                )
            })
        })
        .collect()
}

/// The fiber of the hat construction at a label `(C, a)`: the presheaf of
/// pairs `(α: D → C, b ∈ B(D))` with `f(b) = a·α`, acted on by
/// `(α, b)·β = (αβ, b·β)`.
#[derive(Clone, Debug)]
pub struct HatFiber {
    pub object: usize,
    pub label: usize,
    pub presheaf: Arc<Presheaf>,
    /// Entries `(D, α, b)` in the order they are flattened.
    pub entries: Vec<(usize, usize, usize)>,
    offsets: Vec<usize>,
    index: HashMap<(usize, usize), usize>,
}

impl HatFiber {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Flat position of `(α, b)`.
    pub fn position(&self, alpha: usize, b: usize) -> Option<usize> {
        self.index.get(&(alpha, b)).copied()
    }

    /// Offset of the entries at object `d` in the flat order.
    pub fn offset(&self, d: usize) -> usize {
        self.offsets[d]
    }

    /// Concatenate per-object components into flat order.
    pub fn flatten(&self, components: &[Vec<usize>]) -> Vec<usize> {
        components.iter().flatten().copied().collect()
    }
}

/// The Set-level signature `f̂: B̂ → Â` of a map of presheaves, with one
/// fiber presheaf per label.
#[derive(Clone, Debug)]
pub struct HatSignature {
    f: PshMap,
    labels: Vec<(usize, usize)>,
    label_index: Vec<Vec<usize>>,
    fibers: Vec<HatFiber>,
}

impl HatSignature {
    pub fn new(f: &PshMap) -> Result<Self> {
        let cat = f.category().clone();
        let (b, a) = (f.source(), f.target());
        let mut labels = Vec::new();
        let mut label_index = Vec::new();
        let mut fibers = Vec::new();
        for c in 0..cat.object_count() {
            let mut row = Vec::new();
            for x in 0..a.size(c) {
                row.push(labels.len());
                labels.push((c, x));
                let mut entries = Vec::new();
                let mut offsets = Vec::new();
                let mut sets = Vec::new();
                for d in 0..cat.object_count() {
                    offsets.push(entries.len());
                    let mut names = Vec::new();
                    for &alpha in cat.hom(d, c) {
                        let ax = a.restrict(alpha, x);
                        for y in 0..b.size(d) {
                            if f.apply(d, y) == ax {
                                entries.push((d, alpha, y));
                                names.push(format!(
                                    "{}|{}",
                                    cat.morphism_name(alpha),
                                    b.at(d).name(y)
                                ));
                            }
                        }
                    }
                    sets.push(FinSet::new(names)?);
                }
                let index: HashMap<(usize, usize), usize> = entries
                    .iter()
                    .enumerate()
                    .map(|(i, &(_, al, y))| ((al, y), i))
                    .collect();
                let restrict = (0..cat.morphism_count())
                    .map(|beta| {
                        let (e, d) = (cat.src(beta), cat.dst(beta));
                        entries[offsets[d]..offsets[d] + sets[d].len()]
                            .iter()
                            .map(|&(_, al, y)| {
                                index[&(cat.comp(al, beta), b.restrict(beta, y))] - offsets[e]
                            })
                            .collect()
                    })
                    .collect();
                let presheaf = Arc::new(Presheaf::new(cat.clone(), sets, restrict)?);
                fibers.push(HatFiber {
                    object: c,
                    label: x,
                    presheaf,
                    entries,
                    offsets,
                    index,
                });
            }
            label_index.push(row);
        }
        Ok(HatSignature {
            f: f.clone(),
            labels,
            label_index,
            fibers,
        })
    }

    pub fn map(&self) -> &PshMap {
        &self.f
    }

    /// `Â` as pairs `(C, a)`.
    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn label(&self, c: usize, a: usize) -> usize {
        self.label_index[c][a]
    }

    pub fn fiber(&self, label: usize) -> &HatFiber {
        &self.fibers[label]
    }

    /// Restrict a family over `label` along `γ: E → C`: the new label is
    /// `(E, a·γ)` and entry `(α', b)` takes the old value at `(γα', b)`.
    /// Returns the new label and, for each new entry, its source position.
    pub fn reindex(&self, label: usize, gamma: usize) -> (usize, Vec<usize>) {
        let cat = self.f.category();
        let (c, x) = self.labels[label];
        debug_assert_eq!(cat.dst(gamma), c);
        let e = cat.src(gamma);
        let new_label = self.label(e, self.f.target().restrict(gamma, x));
        let old = &self.fibers[label];
        let positions = self.fibers[new_label]
            .entries
            .iter()
            .map(|&(_, al, y)| {
                old.position(cat.comp(gamma, al), y)
                    .expect("reindexed entry lies in the fiber")
            })
            .collect();
        (new_label, positions)
    }

    /// The Set-level signature `f̂`, with `B̂` flattened label by label.
    pub fn flat_signature(&self) -> Result<PolySignature> {
        let cat = self.f.category();
        let a = self.f.target();
        let names = FinSet::new(
            self.labels
                .iter()
                .map(|&(c, x)| format!("{}@{}", a.at(c).name(x), cat.object_name(c))),
        )?;
        let mut edge_names = Vec::new();
        let mut table = Vec::new();
        for (l, fiber) in self.fibers.iter().enumerate() {
            for &(d, al, y) in &fiber.entries {
                edge_names.push(format!(
                    "{}/{}|{}",
                    names.name(l),
                    cat.morphism_name(al),
                    self.f.source().at(d).name(y)
                ));
                table.push(l);
            }
        }
        let edges = FinSet::new(edge_names)?;
        let map = FinFn::new(table, names.len())?;
        PolySignature::new(names, edges, map)
    }
}

/// An element `(a, t)` of the presheaf polynomial functor: `t` lists the
/// value at each flat entry of the fiber of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PshPolyElem {
    pub label: usize,
    pub values: Vec<usize>,
}

/// `P_f(X)` for a map of presheaves, with its elements.
#[derive(Clone, Debug)]
pub struct PshPolyImage {
    pub presheaf: Arc<Presheaf>,
    pub elems: Vec<Vec<PshPolyElem>>,
}

/// The natural families of the fiber of `label` into `x`, flattened.
pub(crate) fn natural_families(
    hat: &HatSignature,
    label: usize,
    x: &Presheaf,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>> {
    let fiber = hat.fiber(label);
    let found = HomSearch::new(&fiber.presheaf, x)
        .order(SearchOrder::LargestOrbitFirst)
        .budget(budget)
        .all()?;
    Ok(found.iter().map(|c| fiber.flatten(c)).collect())
}

/// The polynomial functor of a map of presheaves applied to `x`.
///
/// At `C` the elements are pairs `(a ∈ A(C), t)` where `t` is a natural
/// family over the fiber of `(C, a)`; restriction along `γ` sends `(a, t)`
/// to `(a·γ, (α', b) ↦ t(γα', b))`.
pub fn presheaf_poly(hat: &HatSignature, x: &Presheaf, budget: &Budget) -> Result<PshPolyImage> {
    let cat = hat.map().category().clone();
    let a = hat.map().target();
    if !Arc::ptr_eq(&cat, x.category()) && **x.category() != *cat {
        return Err(Error::Invalid(
            "presheaf lives over a different category".into(),
        ));
    }
    let mut elems: Vec<Vec<PshPolyElem>> = Vec::with_capacity(cat.object_count());
    let mut index: Vec<HashMap<PshPolyElem, usize>> = Vec::with_capacity(cat.object_count());
    for c in 0..cat.object_count() {
        let mut here = Vec::new();
        for ax in 0..a.size(c) {
            let label = hat.label(c, ax);
            for values in natural_families(hat, label, x, budget)? {
                budget.charge(1)?;
                here.push(PshPolyElem { label, values });
            }
        }
        index.push(
            here.iter()
                .cloned()
                .enumerate()
                .map(|(i, e)| (e, i))
                .collect(),
        );
        elems.push(here);
    }
    let sets = elems
        .iter()
        .map(|es| {
            FinSet::new(es.iter().map(|e| {
                let (c, ax) = hat.labels()[e.label];
                let fiber = hat.fiber(e.label);
                render(
                    a.at(c).name(ax),
                    e.values
                        .iter()
                        .zip(&fiber.entries)
                        .map(|(&v, &(d, _, _))| x.at(d).name(v).to_string()),
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let restrict = (0..cat.morphism_count())
        .map(|gamma| {
            let (e, c) = (cat.src(gamma), cat.dst(gamma));
            elems[c]
                .iter()
                .map(|el| {
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
    Ok(PshPolyImage { presheaf, elems })
}
