use std::sync::Arc;

use super::category::FinCategory;
use super::set::{FinFn, FinSet};
use crate::error::{unknown, Error, Result};

/// A contravariant functor from a finite category to finite sets.
///
/// `restriction(m)` for `m: D -> C` is the table of `X(C) -> X(D)`.
#[derive(Clone, Debug)]
pub struct Presheaf {
    cat: Arc<FinCategory>,
    sets: Vec<FinSet>,
    restrict: Vec<Vec<usize>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.cat, &other.cat) || self.cat == other.cat)
            && self.sets == other.sets
            && self.restrict == other.restrict
    }
}

impl Eq for Presheaf {}

impl Presheaf {
    /// Validate and wrap raw restriction tables.
    pub fn new(
        cat: Arc<FinCategory>,
        sets: Vec<FinSet>,
        restrict: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let p = Presheaf {
            cat,
            sets,
            restrict,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from per-morphism closures `(m, x) -> x·m`.
    pub fn from_fn(
        cat: Arc<FinCategory>,
        sets: Vec<FinSet>,
        restrict: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        if sets.len() != cat.object_count() {
            return Err(Error::Invalid("one set per object is required".into()));
        }
        let tables = (0..cat.morphism_count())
            .map(|m| {
                (0..sets[cat.dst(m)].len())
                    .map(|x| restrict(m, x))
                    .collect()
            })
            .collect();
        Presheaf::new(cat, sets, tables)
    }

    /// Build from identifiers. Restrictions along identities may be omitted.
    pub fn from_named(
        cat: Arc<FinCategory>,
        at: &[(String, Vec<String>)],
        restrict: &[(String, Vec<(String, String)>)],
    ) -> Result<Self> {
        let mut sets = vec![None; cat.object_count()];
        for (o, elems) in at {
            let oi = cat.object_index(o)?;
            sets[oi] = Some(FinSet::new(elems.iter().cloned())?);
        }
        let sets: Vec<FinSet> = sets.into_iter().map(Option::unwrap_or_default).collect();
        let mut tables: Vec<Option<Vec<usize>>> = vec![None; cat.morphism_count()];
        for (m, pairs) in restrict {
            let mi = cat.morphism_index(m)?;
            let (src, dst) = (cat.src(mi), cat.dst(mi));
            let mut table = vec![usize::MAX; sets[dst].len()];
            for (x, y) in pairs {
                let xi = sets[dst].index_of(x).ok_or_else(|| unknown("element", x))?;
                let yi = sets[src].index_of(y).ok_or_else(|| unknown("element", y))?;
                table[xi] = yi;
            }
            if let Some(missing) = table.iter().position(|&v| v == usize::MAX) {
                return Err(Error::FunctorialityViolation {
                    object: cat.object_name(dst).to_string(),
                    morphism: m.clone(),
                    detail: format!("restriction undefined on {}", sets[dst].name(missing)),
                });
            }
            tables[mi] = Some(table);
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(m, t)| match t {
                Some(t) => Ok(t),
                None if cat.is_identity(m) => Ok((0..sets[cat.src(m)].len()).collect()),
                None if sets[cat.dst(m)].is_empty() => Ok(Vec::new()),
                None => Err(Error::FunctorialityViolation {
                    object: cat.object_name(cat.dst(m)).to_string(),
                    morphism: cat.morphism_name(m).to_string(),
                    detail: "restriction not given".into(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Presheaf::new(cat, sets, tables)
    }

    fn validate(&self) -> Result<()> {
        let cat = &*self.cat;
        let fail = |o: usize, m: usize, detail: String| Error::FunctorialityViolation {
            object: cat.object_name(o).to_string(),
            morphism: cat.morphism_name(m).to_string(),
            detail,
        };
        if self.sets.len() != cat.object_count() || self.restrict.len() != cat.morphism_count() {
            return Err(Error::Invalid(
                "presheaf tables do not match its category".into(),
            ));
        }
        for m in 0..cat.morphism_count() {
            let (s, d) = (cat.src(m), cat.dst(m));
            let t = &self.restrict[m];
            if t.len() != self.sets[d].len() {
                return Err(fail(d, m, "restriction table has the wrong length".into()));
            }
            if t.iter().any(|&y| y >= self.sets[s].len()) {
                return Err(fail(d, m, "restriction leaves the target set".into()));
            }
            if cat.is_identity(m) && t.iter().enumerate().any(|(x, &y)| x != y) {
                return Err(fail(
                    d,
                    m,
                    "restriction along an identity is not the identity".into(),
                ));
            }
        }
        // x·(g f) = (x·g)·f
        for f in 0..cat.morphism_count() {
            for &g in cat.out_of(cat.dst(f)) {
                let gf = cat.comp(g, f);
                let e = cat.dst(g);
                for x in 0..self.sets[e].len() {
                    if self.restrict[gf][x] != self.restrict[f][self.restrict[g][x]] {
                        return Err(fail(
                            e,
                            gf,
                            format!(
                                "restriction of {} along {} differs from restricting along {} then {}",
                                self.sets[e].name(x),
                                cat.morphism_name(gf),
                                cat.morphism_name(g),
                                cat.morphism_name(f)
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn terminal(cat: Arc<FinCategory>) -> Self {
        let sets = vec![FinSet::singleton("*"); cat.object_count()];
        Presheaf::from_fn(cat, sets, |_, _| 0).expect("terminal presheaf")
    }

    pub fn empty(cat: Arc<FinCategory>) -> Self {
        let sets = vec![FinSet::empty(); cat.object_count()];
        Presheaf::from_fn(cat, sets, |_, _| 0).expect("empty presheaf")
    }

    /// The same set at every object, all restrictions identities.
    pub fn constant(cat: Arc<FinCategory>, set: FinSet) -> Self {
        let sets = vec![set; cat.object_count()];
        Presheaf::from_fn(cat, sets, |_, x| x).expect("constant presheaf")
    }

    /// `y(C) = Hom(-, C)`, elements named by morphism.
    pub fn representable(cat: Arc<FinCategory>, c: usize) -> Self {
        let sets: Vec<FinSet> = (0..cat.object_count())
            .map(|d| {
                FinSet::new(
                    cat.hom(d, c)
                        .iter()
                        .map(|&m| cat.morphism_name(m).to_string()),
                )
                .expect("morphism names are distinct")
            })
            .collect();
        let c2 = cat.clone();
        let hom_pos = move |d: usize, m: usize| c2.hom(d, c).iter().position(|&k| k == m).unwrap();
        let c2 = cat.clone();
        Presheaf::from_fn(cat, sets, move |alpha, x| {
            let d = c2.dst(alpha);
            let theta = c2.hom(d, c)[x];
            hom_pos(c2.src(alpha), c2.comp(theta, alpha))
        })
        .expect("representable presheaf")
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn at(&self, o: usize) -> &FinSet {
        &self.sets[o]
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.sets
    }

    pub fn size(&self, o: usize) -> usize {
        self.sets[o].len()
    }

    pub fn total_size(&self) -> usize {
        self.sets.iter().map(FinSet::len).sum()
    }

    /// `x·m` for `x ∈ X(dst m)`.
    pub fn restrict(&self, m: usize, x: usize) -> usize {
        self.restrict[m][x]
    }

    pub fn restriction(&self, m: usize) -> &[usize] {
        &self.restrict[m]
    }

    pub fn restriction_fn(&self, m: usize) -> FinFn {
        FinFn::from_table(self.restrict[m].clone(), self.sets[self.cat.src(m)].len())
    }

    pub fn element(&self, o: usize, name: &str) -> Result<usize> {
        self.sets[o]
            .index_of(name)
            .ok_or_else(|| unknown("element", name))
    }

    /// Rename every element; `rename(o, i)` must be injective at each object.
    pub fn relabel(&self, rename: impl Fn(usize, usize) -> String) -> Result<Presheaf> {
        let sets = (0..self.sets.len())
            .map(|o| FinSet::new((0..self.sets[o].len()).map(|i| rename(o, i))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Presheaf {
            cat: self.cat.clone(),
            sets,
            restrict: self.restrict.clone(),
        })
    }

    pub(crate) fn same_category(&self, other: &Presheaf) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat) || self.cat == other.cat
    }
}

/// A natural transformation between presheaves over the same category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PshMap {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<Vec<usize>>,
}

impl PshMap {
    pub fn new(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let map = PshMap {
            source,
            target,
            components,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn from_fn(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        component: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let components = (0..source.sets.len())
            .map(|o| (0..source.size(o)).map(|x| component(o, x)).collect())
            .collect();
        PshMap::new(source, target, components)
    }

    pub fn from_named(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: &[(String, Vec<(String, String)>)],
    ) -> Result<Self> {
        let cat = source.category().clone();
        let mut tables: Vec<Vec<usize>> = (0..cat.object_count())
            .map(|o| vec![usize::MAX; source.size(o)])
            .collect();
        for (o, pairs) in components {
            let oi = cat.object_index(o)?;
            for (x, y) in pairs {
                let xi = source.element(oi, x)?;
                tables[oi][xi] = target.element(oi, y)?;
            }
        }
        for (o, t) in tables.iter().enumerate() {
            if let Some(x) = t.iter().position(|&v| v == usize::MAX) {
                return Err(Error::Invalid(format!(
                    "map component at {} undefined on {}",
                    cat.object_name(o),
                    source.at(o).name(x)
                )));
            }
        }
        PshMap::new(source, target, tables)
    }

    fn validate(&self) -> Result<()> {
        if !self.source.same_category(&self.target) {
            return Err(Error::Invalid(
                "map between presheaves over different categories".into(),
            ));
        }
        let cat = self.source.category();
        if self.components.len() != cat.object_count() {
            return Err(Error::Invalid(
                "one component per object is required".into(),
            ));
        }
        for (o, c) in self.components.iter().enumerate() {
            if c.len() != self.source.size(o) || c.iter().any(|&y| y >= self.target.size(o)) {
                return Err(Error::Invalid(format!(
                    "component at {} is not a function between the right sets",
                    cat.object_name(o)
                )));
            }
        }
        for m in 0..cat.morphism_count() {
            let (d, c) = (cat.src(m), cat.dst(m));
            for x in 0..self.source.size(c) {
                let left = self.components[d][self.source.restrict(m, x)];
                let right = self.target.restrict(m, self.components[c][x]);
                if left != right {
                    return Err(Error::NaturalityViolation {
                        morphism: cat.morphism_name(m).to_string(),
                        element: self.source.at(c).name(x).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: Arc<Presheaf>) -> Self {
        let components = x.sets.iter().map(|s| (0..s.len()).collect()).collect();
        PshMap {
            source: x.clone(),
            target: x,
            components,
        }
    }

    pub(crate) fn from_parts_unchecked(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<Vec<usize>>,
    ) -> Self {
        let map = PshMap {
            source,
            target,
            components,
        };
        debug_assert!(map.validate().is_ok());
        map
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        self.source.category()
    }

    pub fn apply(&self, o: usize, x: usize) -> usize {
        self.components[o][x]
    }

    pub fn component(&self, o: usize) -> &[usize] {
        &self.components[o]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// `self ∘ first`
    pub fn after(&self, first: &PshMap) -> Result<PshMap> {
        if *first.target != *self.source {
            return Err(Error::Invalid("maps are not composable".into()));
        }
        let components = first
            .components
            .iter()
            .enumerate()
            .map(|(o, c)| c.iter().map(|&y| self.components[o][y]).collect())
            .collect();
        Ok(PshMap::from_parts_unchecked(
            first.source.clone(),
            self.target.clone(),
            components,
        ))
    }

    pub fn is_mono(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(o, c)| FinFn::from_table(c.clone(), self.target.size(o)).is_injective())
    }

    pub fn is_epi(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(o, c)| FinFn::from_table(c.clone(), self.target.size(o)).is_surjective())
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Preimages of each target element, per object.
    pub fn fibers(&self, o: usize) -> Vec<Vec<usize>> {
        FinFn::from_table(self.components[o].clone(), self.target.size(o)).fibers()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Arc<FinCategory> {
        Arc::new(FinCategory::walking_arrow())
    }

    fn named(pairs: &[(&str, &[&str])]) -> Vec<(String, Vec<String>)> {
        pairs
            .iter()
            .map(|(o, es)| (o.to_string(), es.iter().map(|e| e.to_string()).collect()))
            .collect()
    }

    fn restr(m: &str, pairs: &[(&str, &str)]) -> (String, Vec<(String, String)>) {
        (
            m.to_string(),
            pairs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
    }

    #[test]
    fn single_restriction_presheaf() {
        let x = Presheaf::from_named(
            two(),
            &named(&[("C1", &["x"]), ("C0", &["y"])]),
            &[restr("u", &[("x", "y")])],
        )
        .unwrap();
        let u = x.category().morphism_index("u").unwrap();
        assert_eq!(x.restrict(u, 0), 0);
        let id = PshMap::identity(Arc::new(x));
        assert!(id.is_iso());
    }

    #[test]
    fn swapped_components_violate_naturality() {
        // X(C1) = {p, q}, X(C0) = {p0, q0}, restriction p -> p0, q -> q0.
        // A map that swaps at C1 but not at C0 is not natural.
        let x = Arc::new(
            Presheaf::from_named(
                two(),
                &named(&[("C1", &["p", "q"]), ("C0", &["p0", "q0"])]),
                &[restr("u", &[("p", "p0"), ("q", "q0")])],
            )
            .unwrap(),
        );
        let swap = vec![
            (
                "C1".to_string(),
                vec![("p".into(), "q".into()), ("q".into(), "p".into())],
            ),
            (
                "C0".to_string(),
                vec![("p0".into(), "p0".into()), ("q0".into(), "q0".into())],
            ),
        ];
        let err = PshMap::from_named(x.clone(), x.clone(), &swap).unwrap_err();
        assert!(matches!(err, Error::NaturalityViolation { ref morphism, .. } if morphism == "u"));
    }

    #[test]
    fn representable_is_functorial() {
        let cat = two();
        let y1 = Presheaf::representable(cat.clone(), 1);
        assert_eq!(y1.size(0), 1);
        assert_eq!(y1.size(1), 1);
        let y0 = Presheaf::representable(cat, 0);
        assert_eq!(y0.size(1), 0);
    }

    #[test]
    fn missing_restriction_is_rejected() {
        let err = Presheaf::from_named(two(), &named(&[("C1", &["x"]), ("C0", &["y"])]), &[])
            .unwrap_err();
        assert!(matches!(err, Error::FunctorialityViolation { .. }));
    }
}
