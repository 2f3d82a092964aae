use std::sync::Arc;

use super::category::FinCategory;
use super::set::{FinFn, FinSet};
use crate::error::{Error, Result};

/// A covariant functor from a finite shape category to finite sets.
#[derive(Clone, Debug)]
pub struct FinDiagram {
    shape: Arc<FinCategory>,
    nodes: Vec<FinSet>,
    edges: Vec<FinFn>,
}

/// A limit cone: the apex with one projection per node.
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: FinSet,
    pub legs: Vec<FinFn>,
}

/// A colimit cocone: the apex with one injection per node.
#[derive(Clone, Debug)]
pub struct Cocone {
    pub apex: FinSet,
    pub legs: Vec<FinFn>,
}

impl FinDiagram {
    pub fn new(shape: Arc<FinCategory>, nodes: Vec<FinSet>, edges: Vec<FinFn>) -> Result<Self> {
        let d = FinDiagram {
            shape,
            nodes,
            edges,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let shape = &*self.shape;
        if self.nodes.len() != shape.object_count() || self.edges.len() != shape.morphism_count() {
            return Err(Error::Invalid("diagram does not match its shape".into()));
        }
        let fail = |m: usize, detail: &str| Error::FunctorialityViolation {
            object: shape.object_name(shape.src(m)).to_string(),
            morphism: shape.morphism_name(m).to_string(),
            detail: detail.to_string(),
        };
        for m in 0..shape.morphism_count() {
            let e = &self.edges[m];
            if e.domain() != self.nodes[shape.src(m)].len()
                || e.codomain() != self.nodes[shape.dst(m)].len()
            {
                return Err(fail(m, "edge function has the wrong endpoints"));
            }
            if shape.is_identity(m) && *e != FinFn::identity(e.domain()) {
                return Err(fail(m, "identity is not sent to an identity"));
            }
        }
        for f in 0..shape.morphism_count() {
            for &g in shape.out_of(shape.dst(f)) {
                if self.edges[shape.comp(g, f)] != self.edges[g].after(&self.edges[f]) {
                    return Err(fail(shape.comp(g, f), "composite is not preserved"));
                }
            }
        }
        Ok(())
    }

    /// The diagram with no nodes.
    pub fn empty() -> Self {
        let shape = FinCategory::generate(Vec::new(), Vec::new(), Vec::new(), |_, _| 0)
            .expect("empty shape");
        FinDiagram {
            shape: Arc::new(shape),
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn nodes(&self) -> &[FinSet] {
        &self.nodes
    }

    pub fn edge(&self, m: usize) -> &FinFn {
        &self.edges[m]
    }

    fn graph(&self) -> Vec<(usize, usize, &[usize])> {
        (0..self.shape.morphism_count())
            .filter(|&m| !self.shape.is_identity(m))
            .map(|m| (self.shape.src(m), self.shape.dst(m), self.edges[m].table()))
            .collect()
    }
}

/// The set of compatible families, with projections.
pub fn finite_limit(diagram: &FinDiagram) -> Cone {
    let sizes: Vec<usize> = diagram.nodes.iter().map(FinSet::len).collect();
    let tuples = graph_limit(&sizes, &diagram.graph());
    let apex = FinSet::new(tuples.iter().map(|t| {
        let parts: Vec<&str> = t
            .iter()
            .enumerate()
            .map(|(i, &x)| diagram.nodes[i].name(x))
            .collect();
        format!("({})", parts.join(","))
    }))
    .expect("distinct tuples have distinct names");
    let legs = (0..sizes.len())
        .map(|i| FinFn::from_table(tuples.iter().map(|t| t[i]).collect(), sizes[i]))
        .collect();
    Cone { apex, legs }
}

/// The quotient of the disjoint union by the equivalence generated by the
/// edges. Each class is named by its least `node:element` identifier.
pub fn finite_colimit(diagram: &FinDiagram) -> Cocone {
    let sizes: Vec<usize> = diagram.nodes.iter().map(FinSet::len).collect();
    let mut classes = graph_colimit(&sizes, &diagram.graph());
    let name = |i: usize, x: usize| {
        format!(
            "{}:{}",
            diagram.shape.object_name(i),
            diagram.nodes[i].name(x)
        )
    };
    let reps = classes.representatives(name);
    Cocone {
        apex: FinSet::new(reps).expect("classes have distinct representatives"),
        legs: classes.legs(),
    }
}

/// Compatible families over a graph of functions `(from, to, table)`.
///
/// Families are produced in lexicographic order of their components.
pub(crate) fn graph_limit(sizes: &[usize], edges: &[(usize, usize, &[usize])]) -> Vec<Vec<usize>> {
    let n = sizes.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(i, j, _)) in edges.iter().enumerate() {
        incident[i].push(k);
        incident[j].push(k);
    }
    let mut out = Vec::new();
    let mut current = vec![usize::MAX; n];
    fn go(
        node: usize,
        sizes: &[usize],
        edges: &[(usize, usize, &[usize])],
        incident: &[Vec<usize>],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if node == sizes.len() {
            out.push(current.clone());
            return;
        }
        'cand: for x in 0..sizes[node] {
            current[node] = x;
            for &k in &incident[node] {
                let (i, j, t) = edges[k];
                if i <= node && j <= node && t[current[i]] != current[j] {
                    continue 'cand;
                }
            }
            go(node + 1, sizes, edges, incident, current, out);
        }
        current[node] = usize::MAX;
    }
    go(0, sizes, edges, &incident, &mut current, &mut out);
    out
}

/// Union-find classes of a disjoint union.
pub(crate) struct Classes {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    class_of: Vec<usize>,
    count: usize,
}

impl Classes {
    pub(crate) fn count(&self) -> usize {
        self.count
    }

    pub(crate) fn class(&self, node: usize, x: usize) -> usize {
        self.class_of[self.offsets[node] + x]
    }

    /// Name each class by its least member and renumber classes in the order
    /// of those names.
    pub(crate) fn representatives(&mut self, name: impl Fn(usize, usize) -> String) -> Vec<String> {
        let mut best: Vec<Option<String>> = vec![None; self.count];
        for (node, &size) in self.sizes.iter().enumerate() {
            for x in 0..size {
                let c = self.class(node, x);
                let candidate = name(node, x);
                if best[c].as_ref().is_none_or(|b| candidate < *b) {
                    best[c] = Some(candidate);
                }
            }
        }
        let best: Vec<String> = best
            .into_iter()
            .map(|b| b.expect("classes are inhabited"))
            .collect();
        let mut order: Vec<usize> = (0..self.count).collect();
        order.sort_by(|&a, &b| best[a].cmp(&best[b]));
        let mut renumber = vec![0; self.count];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        for c in &mut self.class_of {
            *c = renumber[*c];
        }
        order.into_iter().map(|c| best[c].clone()).collect()
    }

    pub(crate) fn legs(&self) -> Vec<FinFn> {
        (0..self.sizes.len())
            .map(|node| {
                FinFn::from_table(
                    (0..self.sizes[node]).map(|x| self.class(node, x)).collect(),
                    self.count,
                )
            })
            .collect()
    }
}

pub(crate) fn graph_colimit(sizes: &[usize], edges: &[(usize, usize, &[usize])]) -> Classes {
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &s in sizes {
        offsets.push(total);
        total += s;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j, t) in edges {
        for (x, &y) in t.iter().enumerate() {
            let (a, b) = (
                find(&mut parent, offsets[i] + x),
                find(&mut parent, offsets[j] + y),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut id = vec![usize::MAX; total];
    let mut class_of = vec![0; total];
    let mut count = 0;
    for (x, slot) in class_of.iter_mut().enumerate() {
        let r = find(&mut parent, x);
        if id[r] == usize::MAX {
            id[r] = count;
            count += 1;
        }
        *slot = id[r];
    }
    Classes {
        offsets,
        sizes: sizes.to_vec(),
        class_of,
        count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::category::CategoryBuilder;
    use crate::fincat::set::all_functions;

    fn cospan() -> Arc<FinCategory> {
        Arc::new(
            CategoryBuilder::new()
                .objects(["X", "Y", "Z"])
                .morphism("f", "X", "Z")
                .morphism("g", "Y", "Z")
                .build()
                .unwrap(),
        )
    }

    fn span() -> Arc<FinCategory> {
        Arc::new(
            CategoryBuilder::new()
                .objects(["M", "L", "R"])
                .morphism("l", "M", "L")
                .morphism("r", "M", "R")
                .build()
                .unwrap(),
        )
    }

    fn diagram(
        shape: Arc<FinCategory>,
        nodes: Vec<FinSet>,
        named: &[(&str, Vec<usize>)],
    ) -> FinDiagram {
        let mut edges: Vec<Option<FinFn>> = vec![None; shape.morphism_count()];
        for (m, t) in named {
            let mi = shape.morphism_index(m).unwrap();
            edges[mi] = Some(FinFn::new(t.clone(), nodes[shape.dst(mi)].len()).unwrap());
        }
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(m, e)| e.unwrap_or_else(|| FinFn::identity(nodes[shape.src(m)].len())))
            .collect();
        FinDiagram::new(shape, nodes, edges).unwrap()
    }

    /// Number of mediating maps from a test cone `(t, legs)` into the limit.
    fn mediating_into(cone: &Cone, t: usize, legs: &[Vec<usize>]) -> usize {
        all_functions(t, cone.apex.len())
            .filter(|h| {
                legs.iter()
                    .enumerate()
                    .all(|(i, leg)| (0..t).all(|x| cone.legs[i].apply(h[x]) == leg[x]))
            })
            .count()
    }

    #[test]
    fn empty_limit_and_colimit() {
        let d = FinDiagram::empty();
        assert_eq!(finite_limit(&d).apex.len(), 1);
        assert_eq!(finite_colimit(&d).apex.len(), 0);
    }

    #[test]
    fn pullback_of_two_functions() {
        let d = diagram(
            cospan(),
            vec![
                FinSet::new(["a", "b"]).unwrap(),
                FinSet::new(["c"]).unwrap(),
                FinSet::new(["0"]).unwrap(),
            ],
            &[("f", vec![0, 0]), ("g", vec![0])],
        );
        let cone = finite_limit(&d);
        assert_eq!(cone.apex.len(), 2);
        assert_eq!(cone.apex.name(0), "(a,c,0)");
        // Universal property against every cone from a 2-element set.
        for lx in all_functions(2, 2) {
            for ly in all_functions(2, 1) {
                let lz: Vec<usize> = lx.iter().map(|&x| d.edge(0).apply(x)).collect();
                let ok = (0..2).all(|t| d.edge(1).apply(ly[t]) == lz[t]);
                if ok {
                    assert_eq!(mediating_into(&cone, 2, &[lx.clone(), ly.clone(), lz]), 1);
                }
            }
        }
    }

    #[test]
    fn equalizer_of_distinct_constants_is_empty() {
        let shape = Arc::new(
            CategoryBuilder::new()
                .objects(["S", "T"])
                .morphism("p", "S", "T")
                .morphism("q", "S", "T")
                .build()
                .unwrap(),
        );
        let d = diagram(
            shape,
            vec![FinSet::numbered("s", 3), FinSet::numbered("t", 2)],
            &[("p", vec![0, 0, 0]), ("q", vec![1, 1, 1])],
        );
        assert_eq!(finite_limit(&d).apex.len(), 0);
    }

    #[test]
    fn pushout_of_point_span() {
        let d = diagram(
            span(),
            vec![
                FinSet::new(["m"]).unwrap(),
                FinSet::new(["0"]).unwrap(),
                FinSet::new(["1"]).unwrap(),
            ],
            &[("l", vec![0]), ("r", vec![0])],
        );
        let co = finite_colimit(&d);
        assert_eq!(co.apex.len(), 1);
        assert_eq!(co.apex.name(0), "L:0");
    }

    #[test]
    fn coproduct_is_disjoint_union() {
        let shape = Arc::new(CategoryBuilder::new().objects(["P", "Q"]).build().unwrap());
        let d = diagram(
            shape,
            vec![FinSet::numbered("p", 2), FinSet::numbered("q", 2)],
            &[],
        );
        let co = finite_colimit(&d);
        assert_eq!(co.apex.len(), 4);
        // Universal property: cocones into a 2-element set factor uniquely.
        for a in all_functions(2, 2) {
            for b in all_functions(2, 2) {
                let count = all_functions(4, 2)
                    .filter(|h| {
                        (0..2).all(|x| {
                            h[co.legs[0].apply(x)] == a[x] && h[co.legs[1].apply(x)] == b[x]
                        })
                    })
                    .count();
                assert_eq!(count, 1);
            }
        }
    }

    #[test]
    fn functoriality_is_checked() {
        let shape = span();
        let nodes = vec![
            FinSet::numbered("m", 1),
            FinSet::numbered("l", 1),
            FinSet::numbered("r", 1),
        ];
        let mut edges: Vec<FinFn> = (0..shape.morphism_count())
            .map(|m| FinFn::identity(nodes[shape.src(m)].len()))
            .collect();
        let id_m = shape.identity(0);
        edges[id_m] = FinFn::new(vec![0], 1).unwrap();
        assert!(FinDiagram::new(shape.clone(), nodes.clone(), edges).is_ok());
        let bad = vec![FinFn::identity(1); shape.morphism_count() - 1];
        assert!(FinDiagram::new(shape, nodes, bad).is_err());
    }
}
