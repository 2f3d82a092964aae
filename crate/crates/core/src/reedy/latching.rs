use std::collections::HashMap;
use std::sync::Arc;

use super::ReedyStructure;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{graph_colimit, graph_limit, Classes, FinFn, FinSet, Presheaf, PshMap};
use crate::sset::{kan_check_upto, SimplexCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Matching,
    Latching,
}

/// Covariant functors on the base are presheaves on its opposite;
/// contravariant ones are presheaves on the base itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn as_str(self) -> &'static str {
        match self {
            Variance::Covariant => "covariant",
            Variance::Contravariant => "contravariant",
        }
    }
}

/// A set-valued functor in presheaf form: `table(t)` sends the set at one
/// end of `t` to the other, in the direction fixed by the variance.
trait SetFunctor {
    fn size(&self, o: usize) -> usize;
    fn table(&self, t: usize) -> &[usize];
    fn name(&self, o: usize, x: usize) -> &str;
}

impl SetFunctor for Presheaf {
    fn size(&self, o: usize) -> usize {
        Presheaf::size(self, o)
    }
    fn table(&self, t: usize) -> &[usize] {
        self.restriction(t)
    }
    fn name(&self, o: usize, x: usize) -> &str {
        self.at(o).name(x)
    }
}

/// The indexing diagram of a matching or latching object at `r`.
struct Shape {
    nodes: Vec<usize>,
    objects: Vec<usize>,
    /// `(from, to, t)`: the functor's action along `t` goes from node
    /// `from` to node `to`.
    edges: Vec<(usize, usize, usize)>,
}

impl Shape {
    fn new(r: &ReedyStructure, obj: usize, side: Side, variance: Variance) -> Shape {
        let cat = r.category();
        let coslice = matches!(
            (side, variance),
            (Side::Matching, Variance::Covariant) | (Side::Latching, Variance::Contravariant)
        );
        let nodes: Vec<usize> = if coslice {
            cat.out_of(obj)
                .iter()
                .copied()
                .filter(|&m| r.is_minus(m) && !r.is_trivial(m))
                .collect()
        } else {
            cat.incoming(obj)
                .iter()
                .copied()
                .filter(|&m| r.is_plus(m) && !r.is_trivial(m))
                .collect()
        };
        let objects: Vec<usize> = nodes
            .iter()
            .map(|&m| if coslice { cat.dst(m) } else { cat.src(m) })
            .collect();
        let mut edges = Vec::new();
        for (i, &a) in nodes.iter().enumerate() {
            for (j, &b) in nodes.iter().enumerate() {
                for &t in cat.hom(objects[i], objects[j]) {
                    if i == j && cat.is_identity(t) {
                        continue;
                    }
                    let over = if coslice {
                        r.is_minus(t) && cat.comp(t, a) == b
                    } else {
                        r.is_plus(t) && cat.comp(b, t) == a
                    };
                    if over {
                        edges.push(match variance {
                            Variance::Covariant => (i, j, t),
                            Variance::Contravariant => (j, i, t),
                        });
                    }
                }
            }
        }
        Shape {
            nodes,
            objects,
            edges,
        }
    }

    fn limit(&self, x: &dyn SetFunctor) -> Vec<Vec<usize>> {
        let sizes: Vec<usize> = self.objects.iter().map(|&o| x.size(o)).collect();
        let edges: Vec<(usize, usize, &[usize])> = self
            .edges
            .iter()
            .map(|&(i, j, t)| (i, j, x.table(t)))
            .collect();
        graph_limit(&sizes, &edges)
    }

    fn colimit(&self, x: &dyn SetFunctor) -> (Classes, Vec<String>) {
        let sizes: Vec<usize> = self.objects.iter().map(|&o| x.size(o)).collect();
        let edges: Vec<(usize, usize, &[usize])> = self
            .edges
            .iter()
            .map(|&(i, j, t)| (i, j, x.table(t)))
            .collect();
        let mut classes = graph_colimit(&sizes, &edges);
        let names = classes.representatives(|node, e| {
            format!("{}@{}", x.name(self.objects[node], e), self.nodes[node])
        });
        (classes, names)
    }
}

/// A matching or latching object at one object, with its comparison map:
/// `X_r → M_r(X)` for matching, `L_r(X) → X_r` for latching.
#[derive(Clone, Debug)]
pub struct MatchingLatching {
    pub side: Side,
    pub object: usize,
    /// The maps indexing the (co)limit and the objects at their other ends.
    pub nodes: Vec<usize>,
    pub objects: Vec<usize>,
    pub elements: FinSet,
    pub comparison: FinFn,
    /// For matching, the compatible family of each element.
    pub families: Vec<Vec<usize>>,
    /// For latching, the class of each element at each node.
    pub legs: Vec<FinFn>,
}

fn check_variance(r: &ReedyStructure, x: &Presheaf, variance: Variance) -> Result<()> {
    let expected = match variance {
        Variance::Contravariant => r.category(),
        Variance::Covariant => r.opposite(),
    };
    if Arc::ptr_eq(x.category(), expected) || **x.category() == **expected {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "a {} functor must be a presheaf on the {}",
            variance.as_str(),
            match variance {
                Variance::Contravariant => "base",
                Variance::Covariant => "opposite of the base",
            }
        )))
    }
}

fn compute(
    r: &ReedyStructure,
    x: &dyn SetFunctor,
    obj: usize,
    side: Side,
    variance: Variance,
) -> Result<MatchingLatching> {
    let shape = Shape::new(r, obj, side, variance);
    match side {
        Side::Matching => {
            let families = shape.limit(x);
            let index: HashMap<&[usize], usize> = families
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect();
            let table = (0..x.size(obj))
                .map(|e| {
                    let family: Vec<usize> = shape.nodes.iter().map(|&m| x.table(m)[e]).collect();
                    index[family.as_slice()]
                })
                .collect();
            let elements = FinSet::new(families.iter().map(|f| {
                let parts: Vec<&str> = f
                    .iter()
                    .zip(&shape.objects)
                    .map(|(&v, &o)| x.name(o, v))
                    .collect();
                format!("({})", parts.join(","))
            }))?;
            let comparison = FinFn::new(table, families.len())?;
            Ok(MatchingLatching {
                side,
                object: obj,
                nodes: shape.nodes,
                objects: shape.objects,
                elements,
                comparison,
                families,
                legs: Vec::new(),
            })
        }
        Side::Latching => {
            let (classes, names) = shape.colimit(x);
            let mut table = vec![None; names.len()];
            for (node, (&m, &o)) in shape.nodes.iter().zip(&shape.objects).enumerate() {
                for e in 0..x.size(o) {
                    let image = x.table(m)[e];
                    let slot = &mut table[classes.class(node, e)];
                    match *slot {
                        None => *slot = Some(image),
                        Some(v) if v != image => {
                            return Err(Error::Invalid(
                                "latching comparison is not well defined".into(),
                            ))
                        }
                        Some(_) => {}
                    }
                }
            }
            let table = table
                .into_iter()
                .map(|v| v.expect("classes are inhabited"))
                .collect();
            Ok(MatchingLatching {
                side,
                object: obj,
                nodes: shape.nodes,
                objects: shape.objects,
                elements: FinSet::new(names)?,
                comparison: FinFn::new(table, x.size(obj))?,
                families: Vec::new(),
                legs: classes.legs(),
            })
        }
    }
}

/// The matching or latching object of `x` at `obj`.
pub fn matching_latching(
    r: &ReedyStructure,
    x: &Presheaf,
    obj: usize,
    side: Side,
    variance: Variance,
) -> Result<MatchingLatching> {
    check_variance(r, x, variance)?;
    compute(r, x, obj, side, variance)
}

/// Induced map between matching objects `M_r(A) → M_r(B)`.
fn matching_map(
    a: &MatchingLatching,
    b: &MatchingLatching,
    f: &dyn Fn(usize, usize) -> usize,
) -> Vec<usize> {
    let index: HashMap<&[usize], usize> = b
        .families
        .iter()
        .enumerate()
        .map(|(i, fam)| (fam.as_slice(), i))
        .collect();
    a.families
        .iter()
        .map(|fam| {
            let image: Vec<usize> = fam.iter().zip(&a.objects).map(|(&v, &o)| f(o, v)).collect();
            index[image.as_slice()]
        })
        .collect()
}

/// Induced map between latching objects `L_r(A) → L_r(B)`.
fn latching_map(
    a: &MatchingLatching,
    b: &MatchingLatching,
    f: &dyn Fn(usize, usize) -> usize,
) -> Vec<usize> {
    let mut table = vec![0; a.elements.len()];
    for (node, leg) in a.legs.iter().enumerate() {
        for e in 0..leg.domain() {
            table[leg.apply(e)] = b.legs[node].apply(f(a.objects[node], e));
        }
    }
    table
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckSide {
    Fibration,
    Cofibration,
}

/// A functor into truncated simplicial sets, with one simplicial set per
/// object and one simplicial map per morphism (in the variance's direction).
#[derive(Clone, Debug)]
pub struct SimplicialDiagram {
    pub variance: Variance,
    pub spaces: Vec<Arc<Presheaf>>,
    pub maps: Vec<PshMap>,
}

impl SimplicialDiagram {
    pub fn new(
        r: &ReedyStructure,
        variance: Variance,
        spaces: Vec<Arc<Presheaf>>,
        maps: Vec<PshMap>,
    ) -> Result<Self> {
        let cat = r.category();
        if spaces.len() != cat.object_count() || maps.len() != cat.morphism_count() {
            return Err(Error::Invalid(
                "one space per object and one map per morphism are required".into(),
            ));
        }
        let ends = |t: usize| match variance {
            Variance::Covariant => (cat.src(t), cat.dst(t)),
            Variance::Contravariant => (cat.dst(t), cat.src(t)),
        };
        for (t, map) in maps.iter().enumerate() {
            let (from, to) = ends(t);
            if **map.source() != *spaces[from] || **map.target() != *spaces[to] {
                return Err(Error::Invalid(format!(
                    "map over {} has the wrong ends",
                    cat.morphism_name(t)
                )));
            }
            if cat.is_identity(t) && *map != PshMap::identity(spaces[from].clone()) {
                return Err(Error::Invalid(format!(
                    "{} does not act as the identity",
                    cat.morphism_name(t)
                )));
            }
        }
        for g in 0..cat.morphism_count() {
            for f in 0..cat.morphism_count() {
                if let Some(gf) = cat.compose(g, f) {
                    let composite = match variance {
                        Variance::Covariant => maps[g].after(&maps[f])?,
                        Variance::Contravariant => maps[f].after(&maps[g])?,
                    };
                    if composite.components() != maps[gf].components() {
                        return Err(Error::FunctorialityViolation {
                            object: cat.object_name(cat.src(f)).to_string(),
                            morphism: cat.morphism_name(gf).to_string(),
                            detail: "action does not respect composition".into(),
                        });
                    }
                }
            }
        }
        Ok(SimplicialDiagram {
            variance,
            spaces,
            maps,
        })
    }

    /// The objects the map over `t` goes from and to.
    fn ends(&self, r: &ReedyStructure, t: usize) -> (usize, usize) {
        let cat = r.category();
        match self.variance {
            Variance::Covariant => (cat.src(t), cat.dst(t)),
            Variance::Contravariant => (cat.dst(t), cat.src(t)),
        }
    }

    /// A contravariant set-valued functor with every set discrete.
    pub fn discrete(sc: &SimplexCategory, x: &Presheaf) -> Result<Self> {
        let cat = x.category();
        let spaces: Vec<Arc<Presheaf>> = (0..cat.object_count())
            .map(|o| Arc::new(sc.discrete(x.at(o))))
            .collect();
        let maps = (0..cat.morphism_count())
            .map(|t| {
                PshMap::from_fn(
                    spaces[cat.dst(t)].clone(),
                    spaces[cat.src(t)].clone(),
                    |_, e| x.restrict(t, e),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialDiagram {
            variance: Variance::Contravariant,
            spaces,
            maps,
        })
    }
}

/// The simplicial level-`n` part of a simplicial diagram.
struct Level<'a> {
    d: &'a SimplicialDiagram,
    n: usize,
}

impl SetFunctor for Level<'_> {
    fn size(&self, o: usize) -> usize {
        self.d.spaces[o].size(self.n)
    }
    fn table(&self, t: usize) -> &[usize] {
        self.d.maps[t].component(self.n)
    }
    fn name(&self, o: usize, x: usize) -> &str {
        self.d.spaces[o].at(self.n).name(x)
    }
}

/// A map of simplicial diagrams, one simplicial map per object.
#[derive(Clone, Debug)]
pub struct SimplicialDiagramMap {
    pub source: SimplicialDiagram,
    pub target: SimplicialDiagram,
    pub components: Vec<PshMap>,
}

impl SimplicialDiagramMap {
    pub fn new(
        r: &ReedyStructure,
        source: SimplicialDiagram,
        target: SimplicialDiagram,
        components: Vec<PshMap>,
    ) -> Result<Self> {
        let cat = r.category();
        if components.len() != cat.object_count()
            || source.variance != target.variance
            || source.spaces.len() != cat.object_count()
            || target.spaces.len() != cat.object_count()
        {
            return Err(Error::Invalid(
                "diagrams and components do not match the base".into(),
            ));
        }
        for t in 0..cat.morphism_count() {
            let (from, to) = source.ends(r, t);
            let lhs = target.maps[t].after(&components[from])?;
            let rhs = components[to].after(&source.maps[t])?;
            if lhs.components() != rhs.components() {
                return Err(Error::NaturalityViolation {
                    morphism: cat.morphism_name(t).to_string(),
                    element: "simplicial component".into(),
                });
            }
        }
        Ok(SimplicialDiagramMap {
            source,
            target,
            components,
        })
    }
}

/// Where the functors take values and which map is being checked.
pub enum Ambient<'a> {
    /// Fibrations are surjections and cofibrations injections.
    FiniteSets(&'a PshMap),
    /// Fibrations are Kan fibrations up to `dim`, cofibrations monomorphisms.
    TruncatedSSets {
        map: &'a SimplicialDiagramMap,
        sc: &'a SimplexCategory,
        dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectVerdict {
    pub object: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReedyCheckReport {
    pub side: CheckSide,
    pub holds: bool,
    pub verdicts: Vec<ObjectVerdict>,
}

/// `A_r → B_r ×_{M_r B} M_r A` at one level: the target as pairs
/// `(b, family)` in lexicographic order, and the comparison.
struct FibrationLevel {
    families: MatchingLatching,
    target: Vec<(usize, usize)>,
    comparison: Vec<usize>,
}

fn fibration_level(
    r: &ReedyStructure,
    a: &dyn SetFunctor,
    b: &dyn SetFunctor,
    f: &dyn Fn(usize, usize) -> usize,
    obj: usize,
    variance: Variance,
) -> Result<FibrationLevel> {
    let ma = compute(r, a, obj, Side::Matching, variance)?;
    let mb = compute(r, b, obj, Side::Matching, variance)?;
    let mf = matching_map(&ma, &mb, f);
    let mut target = Vec::new();
    for y in 0..b.size(obj) {
        for (m, &image) in mf.iter().enumerate() {
            if image == mb.comparison.apply(y) {
                target.push((y, m));
            }
        }
    }
    let comparison = (0..a.size(obj))
        .map(|x| {
            let pair = (f(obj, x), ma.comparison.apply(x));
            target
                .binary_search(&pair)
                .expect("comparison lands in the fiber product")
        })
        .collect();
    Ok(FibrationLevel {
        families: ma,
        target,
        comparison,
    })
}

/// `A_r ∪_{L_r A} L_r B → B_r` at one level; `Err(b)` names an element of
/// `B_r` hit twice.
fn cofibration_level(
    r: &ReedyStructure,
    a: &dyn SetFunctor,
    b: &dyn SetFunctor,
    f: &dyn Fn(usize, usize) -> usize,
    obj: usize,
    variance: Variance,
) -> Result<Option<String>> {
    let la = compute(r, a, obj, Side::Latching, variance)?;
    let lb = compute(r, b, obj, Side::Latching, variance)?;
    let lf = latching_map(&la, &lb, f);
    let sizes = [la.elements.len(), a.size(obj), lb.elements.len()];
    let edges: [(usize, usize, &[usize]); 2] = [(0, 1, la.comparison.table()), (0, 2, &lf)];
    let classes = graph_colimit(&sizes, &edges);
    let mut hit: HashMap<usize, usize> = HashMap::new();
    let points = (0..a.size(obj))
        .map(|x| (classes.class(1, x), f(obj, x)))
        .chain((0..lb.elements.len()).map(|l| (classes.class(2, l), lb.comparison.apply(l))));
    for (class, y) in points {
        if let Some(&other) = hit.get(&y) {
            if other != class {
                return Ok(Some(b.name(obj, y).to_string()));
            }
        }
        hit.insert(y, class);
    }
    Ok(None)
}

fn same_category(x: &Presheaf, cat: &Arc<crate::fincat::FinCategory>) -> bool {
    Arc::ptr_eq(x.category(), cat) || **x.category() == **cat
}

/// Check the Reedy fibration or cofibration condition object by object.
pub fn reedy_fib_cofib_check(
    r: &ReedyStructure,
    ambient: Ambient<'_>,
    side: CheckSide,
    variance: Variance,
    budget: &Budget,
) -> Result<ReedyCheckReport> {
    let cat = r.category();
    let mut verdicts = Vec::with_capacity(cat.object_count());
    match ambient {
        Ambient::FiniteSets(map) => {
            check_variance(r, map.source(), variance)?;
            let (a, b) = (map.source().as_ref(), map.target().as_ref());
            let f = |o: usize, x: usize| map.apply(o, x);
            for obj in 0..cat.object_count() {
                let witness = match side {
                    CheckSide::Fibration => {
                        let level = fibration_level(r, a, b, &f, obj, variance)?;
                        let mut hit = vec![false; level.target.len()];
                        for &t in &level.comparison {
                            hit[t] = true;
                        }
                        hit.iter().position(|&h| !h).map(|t| {
                            let (y, m) = level.target[t];
                            format!(
                                "({};{})",
                                b.at(obj).name(y),
                                level.families.elements.name(m)
                            )
                        })
                    }
                    CheckSide::Cofibration => cofibration_level(r, a, b, &f, obj, variance)?,
                };
                verdicts.push(ObjectVerdict {
                    object: cat.object_name(obj).to_string(),
                    holds: witness.is_none(),
                    witness,
                });
            }
        }
        Ambient::TruncatedSSets { map, sc, dim } => {
            if map.source.variance != variance {
                return Err(Error::Invalid(
                    "diagram variance does not match the check".into(),
                ));
            }
            let delta = sc.category();
            if !map
                .source
                .spaces
                .iter()
                .chain(&map.target.spaces)
                .all(|s| same_category(s, delta))
            {
                return Err(Error::Invalid(
                    "diagram spaces live over a different truncation".into(),
                ));
            }
            for obj in 0..cat.object_count() {
                let witness = match side {
                    CheckSide::Fibration => {
                        simplicial_fibration(r, map, sc, dim, obj, variance, budget)?
                    }
                    CheckSide::Cofibration => {
                        let mut witness = None;
                        for n in 0..=sc.top() {
                            let (a, b) = (Level { d: &map.source, n }, Level { d: &map.target, n });
                            let f = |o: usize, x: usize| map.components[o].apply(n, x);
                            if let Some(w) = cofibration_level(r, &a, &b, &f, obj, variance)? {
                                witness = Some(format!("{w} in degree {n}"));
                                break;
                            }
                        }
                        witness
                    }
                };
                verdicts.push(ObjectVerdict {
                    object: cat.object_name(obj).to_string(),
                    holds: witness.is_none(),
                    witness,
                });
            }
        }
    }
    Ok(ReedyCheckReport {
        side,
        holds: verdicts.iter().all(|v| v.holds),
        verdicts,
    })
}

/// Assemble `A_r → B_r ×_{M_r B} M_r A` as a simplicial map and check it
/// for horn fillers.
fn simplicial_fibration(
    r: &ReedyStructure,
    map: &SimplicialDiagramMap,
    sc: &SimplexCategory,
    dim: usize,
    obj: usize,
    variance: Variance,
    budget: &Budget,
) -> Result<Option<String>> {
    let delta = sc.category().clone();
    let levels = (0..=sc.top())
        .map(|n| {
            let (a, b) = (Level { d: &map.source, n }, Level { d: &map.target, n });
            let f = |o: usize, x: usize| map.components[o].apply(n, x);
            fibration_level(r, &a, &b, &f, obj, variance)
        })
        .collect::<Result<Vec<_>>>()?;
    let (sa, sb) = (&map.source.spaces, &map.target.spaces[obj]);
    let sets = levels
        .iter()
        .enumerate()
        .map(|(n, level)| {
            FinSet::new(level.target.iter().map(|&(y, m)| {
                format!("({};{})", sb.at(n).name(y), level.families.elements.name(m))
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let restrict = (0..delta.morphism_count())
        .map(|theta| {
            let (k, n) = (delta.src(theta), delta.dst(theta));
            let family_index: HashMap<&[usize], usize> = levels[k]
                .families
                .families
                .iter()
                .enumerate()
                .map(|(i, fam)| (fam.as_slice(), i))
                .collect();
            levels[n]
                .target
                .iter()
                .map(|&(y, m)| {
                    let family: Vec<usize> = levels[n].families.families[m]
                        .iter()
                        .zip(&levels[n].families.objects)
                        .map(|(&v, &o)| sa[o].restrict(theta, v))
                        .collect();
                    let pair = (sb.restrict(theta, y), family_index[family.as_slice()]);
                    levels[k]
                        .target
                        .binary_search(&pair)
                        .expect("fiber product is closed under restriction")
                })
                .collect()
        })
        .collect();
    let target = Arc::new(Presheaf::new(delta, sets, restrict)?);
    let comparison = PshMap::new(
        sa[obj].clone(),
        target,
        levels.into_iter().map(|l| l.comparison).collect(),
    )?;
    let report = kan_check_upto(sc, &comparison, dim, budget)?;
    Ok(report
        .counterexample
        .map(|cx| cx.to_json(&comparison).to_string()))
}

/// The three verdicts showing `L_r(Y) ∪_{L_r(X)} X_r → Y_r` is mono for a
/// pointwise mono `X → Y` of contravariant functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatchingMonoReport {
    pub object: String,
    pub input_mono: bool,
    /// `L_r(X) → X_r` and `L_r(Y) → Y_r` are injective.
    pub latching_mono: Option<String>,
    /// Naturality squares along `r → s` in `R⁻` are pullbacks.
    pub pullbacks: Option<String>,
    /// The pushout comparison is injective.
    pub comparison_mono: Option<String>,
}

impl LatchingMonoReport {
    pub fn holds(&self) -> bool {
        self.input_mono
            && self.latching_mono.is_none()
            && self.pullbacks.is_none()
            && self.comparison_mono.is_none()
    }
}

pub fn latching_mono_check(
    r: &ReedyStructure,
    m: &PshMap,
    obj: usize,
) -> Result<LatchingMonoReport> {
    let variance = Variance::Contravariant;
    check_variance(r, m.source(), variance)?;
    let cat = r.category();
    let (x, y) = (m.source().as_ref(), m.target().as_ref());
    let input_mono = m.is_mono();
    let mut latching_mono = None;
    for (z, label) in [(x, "source"), (y, "target")] {
        let l = compute(r, z, obj, Side::Latching, variance)?;
        if let Some((a, b)) = first_collision(&l.comparison) {
            latching_mono = Some(format!(
                "{label}: {} and {} both map to {}",
                l.elements.name(a),
                l.elements.name(b),
                z.at(obj).name(l.comparison.apply(a))
            ));
            break;
        }
    }
    let mut pullbacks = None;
    'squares: for &alpha in cat.out_of(obj) {
        if !r.is_minus(alpha) {
            continue;
        }
        let s = cat.dst(alpha);
        for xr in 0..x.size(obj) {
            for ys in 0..y.size(s) {
                if m.apply(obj, xr) != y.restrict(alpha, ys) {
                    continue;
                }
                let lifts = (0..x.size(s))
                    .filter(|&xs| m.apply(s, xs) == ys && x.restrict(alpha, xs) == xr)
                    .count();
                if lifts != 1 {
                    pullbacks = Some(format!(
                        "along {}: ({}, {}) has {lifts} lifts",
                        cat.morphism_name(alpha),
                        x.at(obj).name(xr),
                        y.at(s).name(ys)
                    ));
                    break 'squares;
                }
            }
        }
    }
    let f = |o: usize, e: usize| m.apply(o, e);
    let comparison_mono = cofibration_level(r, x, y, &f, obj, variance)?;
    Ok(LatchingMonoReport {
        object: cat.object_name(obj).to_string(),
        input_mono,
        latching_mono,
        pullbacks,
        comparison_mono,
    })
}

fn first_collision(f: &FinFn) -> Option<(usize, usize)> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for x in 0..f.domain() {
        if let Some(&other) = seen.get(&f.apply(x)) {
            return Some((other, x));
        }
        seen.insert(f.apply(x), x);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::coproduct;

    fn delta2() -> (ReedyStructure, SimplexCategory) {
        let sc = SimplexCategory::new(2).unwrap();
        (ReedyStructure::from_simplex(&sc).unwrap(), sc)
    }

    /// `Δ[1]` with its endpoints identified.
    fn circle(sc: &SimplexCategory) -> Presheaf {
        let d1 = sc.simplex(1).unwrap();
        let collapse = |s: String| {
            if s.chars().all(|c| c == '0') || s.chars().all(|c| c == '1') {
                "*".to_string()
            } else {
                s
            }
        };
        let sets: Vec<FinSet> = (0..=sc.top())
            .map(|n| {
                let mut names: Vec<String> =
                    d1.at(n).names().iter().cloned().map(collapse).collect();
                names.sort();
                names.dedup();
                FinSet::new(names).unwrap()
            })
            .collect();
        let cat = sc.category().clone();
        let names = sets.clone();
        Presheaf::from_fn(cat.clone(), sets, |m, x| {
            let (k, n) = (cat.src(m), cat.dst(m));
            let name = names[n].name(x);
            let image = if name == "*" {
                "*".to_string()
            } else {
                let chars: Vec<char> = name.chars().collect();
                collapse(sc.images(m).iter().map(|&i| chars[i]).collect())
            };
            names[k].index_of(&image).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn matching_of_the_interval_is_pairs_of_vertices() {
        let (r, sc) = delta2();
        let x = sc.simplex(1).unwrap();
        let m = matching_latching(&r, &x, 1, Side::Matching, Variance::Contravariant).unwrap();
        assert_eq!(m.elements.len(), 4);
        assert!(m.comparison.is_injective());
    }

    #[test]
    fn latching_of_the_point() {
        let (r, sc) = delta2();
        let x = sc.point();
        let l = matching_latching(&r, &x, 1, Side::Latching, Variance::Contravariant).unwrap();
        assert_eq!(l.elements.len(), 1);
        assert!(l.comparison.is_injective() && l.comparison.is_surjective());
        let l0 = matching_latching(&r, &x, 0, Side::Latching, Variance::Contravariant).unwrap();
        assert!(l0.elements.is_empty());
        // Covariant functors are presheaves on the opposite.
        assert!(matching_latching(&r, &x, 1, Side::Latching, Variance::Covariant).is_err());
    }

    #[test]
    fn identity_passes_both_checks() {
        let (r, sc) = delta2();
        let x = Arc::new(sc.simplex(1).unwrap());
        let id = PshMap::identity(x);
        for side in [CheckSide::Fibration, CheckSide::Cofibration] {
            let report = reedy_fib_cofib_check(
                &r,
                Ambient::FiniteSets(&id),
                side,
                Variance::Contravariant,
                &Budget::default(),
            )
            .unwrap();
            assert!(report.holds);
        }
    }

    #[test]
    fn cofibrations_from_empty_and_a_collapse() {
        let (r, sc) = delta2();
        let point = Arc::new(sc.point());
        let empty = Arc::new(Presheaf::empty(sc.category().clone()));
        let into = PshMap::from_fn(empty, point.clone(), |_, _| 0).unwrap();
        let report = reedy_fib_cofib_check(
            &r,
            Ambient::FiniteSets(&into),
            CheckSide::Cofibration,
            Variance::Contravariant,
            &Budget::default(),
        )
        .unwrap();
        assert!(report.holds);
        let s1 = Arc::new(circle(&sc));
        let collapse = PshMap::from_fn(s1, point, |_, _| 0).unwrap();
        assert!(!collapse.is_mono());
        let report = reedy_fib_cofib_check(
            &r,
            Ambient::FiniteSets(&collapse),
            CheckSide::Cofibration,
            Variance::Contravariant,
            &Budget::default(),
        )
        .unwrap();
        let failing: Vec<&str> = report
            .verdicts
            .iter()
            .filter(|v| !v.holds)
            .map(|v| v.object.as_str())
            .collect();
        assert_eq!(failing.first(), Some(&"[1]"));
    }

    #[test]
    fn latching_mono_fixtures() {
        let (r, sc) = delta2();
        let point = Arc::new(sc.point());
        let empty = Arc::new(Presheaf::empty(sc.category().clone()));
        let into = PshMap::from_fn(empty, point.clone(), |_, _| 0).unwrap();
        for o in 0..3 {
            assert!(latching_mono_check(&r, &into, o).unwrap().holds());
        }
        let d1 = Arc::new(sc.simplex(1).unwrap());
        let (ends, _, _) = coproduct(&point, &point).unwrap();
        let endpoints = PshMap::from_fn(ends.clone(), d1.clone(), |o, e| {
            let vertex = if ends.at(o).name(e).starts_with("0:") {
                '0'
            } else {
                '1'
            };
            d1.at(o)
                .index_of(&std::iter::repeat_n(vertex, o + 1).collect::<String>())
                .unwrap()
        })
        .unwrap();
        let report = latching_mono_check(&r, &endpoints, 1).unwrap();
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn simplicial_ambient_defers_to_kan_check() {
        let base = ReedyStructure::naturals(0).unwrap();
        let sc = SimplexCategory::new(3).unwrap();
        let build = |space: Presheaf| {
            let space = Arc::new(space);
            SimplicialDiagram::new(
                &base,
                Variance::Contravariant,
                vec![space.clone()],
                vec![PshMap::identity(space)],
            )
            .unwrap()
        };
        let (a, b) = (build(sc.simplex(1).unwrap()), build(sc.point()));
        let p = PshMap::from_fn(a.spaces[0].clone(), b.spaces[0].clone(), |_, _| 0).unwrap();
        let map = SimplicialDiagramMap::new(&base, a.clone(), b.clone(), vec![p]).unwrap();
        let ambient = || Ambient::TruncatedSSets {
            map: &map,
            sc: &sc,
            dim: 2,
        };
        let budget = Budget::default();
        let fib = reedy_fib_cofib_check(
            &base,
            ambient(),
            CheckSide::Fibration,
            Variance::Contravariant,
            &budget,
        )
        .unwrap();
        assert!(!fib.holds);
        let cof = reedy_fib_cofib_check(
            &base,
            ambient(),
            CheckSide::Cofibration,
            Variance::Contravariant,
            &budget,
        )
        .unwrap();
        assert!(!cof.holds);
        let id = SimplicialDiagramMap::new(
            &base,
            b.clone(),
            b.clone(),
            vec![PshMap::identity(b.spaces[0].clone())],
        )
        .unwrap();
        let ambient = Ambient::TruncatedSSets {
            map: &id,
            sc: &sc,
            dim: 2,
        };
        assert!(
            reedy_fib_cofib_check(
                &base,
                ambient,
                CheckSide::Fibration,
                Variance::Contravariant,
                &budget
            )
            .unwrap()
            .holds
        );
    }
}
