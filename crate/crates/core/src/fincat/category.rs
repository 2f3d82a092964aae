use std::collections::HashMap;

use super::set::FinSet;
use crate::error::{unknown, Error, Result};

const UNDEFINED: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category with a dense composition table.
///
/// Objects and morphisms are addressed by position. Every instance has been
/// validated exhaustively: the table is total on composable pairs, typed,
/// unital and associative.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: FinSet,
    morphisms: Vec<Morphism>,
    mor_index: HashMap<String, usize>,
    identity: Vec<usize>,
    compose: Vec<usize>,
    into: Vec<Vec<usize>>,
    out_of: Vec<Vec<usize>>,
    hom: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identity == other.identity
            && self.compose == other.compose
    }
}

impl Eq for FinCategory {}

/// Raw description of a category: named objects, named morphisms and a
/// partial composition table. Identities and unit compositions may be left
/// out; they are synthesized as `id_<object>`.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    compose: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: impl Into<String>) -> Self {
        self.objects.push(name.into());
        self
    }

    pub fn objects<I: IntoIterator<Item = S>, S: Into<String>>(mut self, names: I) -> Self {
        self.objects.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn morphism(
        mut self,
        name: impl Into<String>,
        src: impl Into<String>,
        dst: impl Into<String>,
    ) -> Self {
        self.morphisms.push((name.into(), src.into(), dst.into()));
        self
    }

    /// Declare `morphism` as the identity of `object`. It must also be
    /// declared with [`CategoryBuilder::morphism`].
    pub fn identity(mut self, object: impl Into<String>, morphism: impl Into<String>) -> Self {
        self.identities.push((object.into(), morphism.into()));
        self
    }

    /// Record `g ∘ f = gf`.
    pub fn compose(
        mut self,
        g: impl Into<String>,
        f: impl Into<String>,
        gf: impl Into<String>,
    ) -> Self {
        self.compose.push((g.into(), f.into(), gf.into()));
        self
    }

    pub fn build(self) -> Result<FinCategory> {
        let objects = FinSet::new(self.objects.iter().cloned())?;
        let obj = |name: &str| {
            objects
                .index_of(name)
                .ok_or_else(|| unknown("object", name))
        };

        let mut morphisms = Vec::new();
        let mut mor_index = HashMap::new();
        for (name, src, dst) in &self.morphisms {
            let m = Morphism {
                name: name.clone(),
                src: obj(src)?,
                dst: obj(dst)?,
            };
            if mor_index.insert(name.clone(), morphisms.len()).is_some() {
                return Err(Error::Duplicate {
                    kind: "morphism",
                    name: name.clone(),
                });
            }
            morphisms.push(m);
        }

        let mut identity = vec![UNDEFINED; objects.len()];
        for (o, m) in &self.identities {
            let o = obj(o)?;
            let mi = *mor_index.get(m).ok_or_else(|| unknown("morphism", m))?;
            if morphisms[mi].src != o || morphisms[mi].dst != o {
                return Err(Error::Invalid(format!(
                    "identity {m} is not an endomorphism of {}",
                    objects.name(o)
                )));
            }
            identity[o] = mi;
        }
        for (o, slot) in identity.iter_mut().enumerate() {
            if *slot == UNDEFINED {
                let name = format!("id_{}", objects.name(o));
                if mor_index.contains_key(&name) {
                    return Err(Error::Duplicate {
                        kind: "morphism",
                        name,
                    });
                }
                mor_index.insert(name.clone(), morphisms.len());
                *slot = morphisms.len();
                morphisms.push(Morphism {
                    name,
                    src: o,
                    dst: o,
                });
            }
        }

        let n = morphisms.len();
        let mut table = vec![UNDEFINED; n * n];
        let mor = |name: &str| {
            mor_index
                .get(name)
                .copied()
                .ok_or_else(|| unknown("morphism", name))
        };
        for (g, f, gf) in &self.compose {
            let (gi, fi, gfi) = (mor(g)?, mor(f)?, mor(gf)?);
            let ill = |detail: &str| Error::CompositionIllTyped {
                g: g.clone(),
                f: f.clone(),
                gf: gf.clone(),
                detail: detail.to_string(),
            };
            if morphisms[gi].src != morphisms[fi].dst {
                return Err(ill("target of f differs from source of g"));
            }
            if morphisms[gfi].src != morphisms[fi].src || morphisms[gfi].dst != morphisms[gi].dst {
                return Err(ill("composite must run from source(f) to target(g)"));
            }
            let slot = &mut table[gi * n + fi];
            if *slot != UNDEFINED && *slot != gfi {
                return Err(ill("conflicting duplicate entry"));
            }
            *slot = gfi;
        }
        // Unit laws: fill the missing entries, reject contradicting ones.
        for m in 0..n {
            let (s, d) = (morphisms[m].src, morphisms[m].dst);
            for (id, idx) in [
                (identity[d], identity[d] * n + m),
                (identity[s], m * n + identity[s]),
            ] {
                match table[idx] {
                    UNDEFINED => table[idx] = m,
                    v if v == m => {}
                    _ => {
                        return Err(Error::UnitViolation {
                            identity: morphisms[id].name.clone(),
                            morphism: morphisms[m].name.clone(),
                        })
                    }
                }
            }
        }
        FinCategory::assemble(objects, morphisms, mor_index, identity, table)
    }
}

impl FinCategory {
    /// Build a category whose composition is computed by a closure, then
    /// validate it like any other.
    ///
    /// `compose(g, f)` is only called on composable pairs.
    pub fn generate(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<FinCategory> {
        let objects = FinSet::new(objects)?;
        let mut mor_index = HashMap::new();
        let morphisms: Vec<Morphism> = morphisms
            .into_iter()
            .map(|(name, src, dst)| Morphism { name, src, dst })
            .collect();
        for (i, m) in morphisms.iter().enumerate() {
            if m.src >= objects.len() || m.dst >= objects.len() {
                return Err(Error::Invalid(format!(
                    "morphism {} has an unknown endpoint",
                    m.name
                )));
            }
            if mor_index.insert(m.name.clone(), i).is_some() {
                return Err(Error::Duplicate {
                    kind: "morphism",
                    name: m.name.clone(),
                });
            }
        }
        let n = morphisms.len();
        let mut table = vec![UNDEFINED; n * n];
        for g in 0..n {
            for f in 0..n {
                if morphisms[g].src == morphisms[f].dst {
                    table[g * n + f] = compose(g, f);
                }
            }
        }
        FinCategory::assemble(objects, morphisms, mor_index, identity, table)
    }

    fn assemble(
        objects: FinSet,
        morphisms: Vec<Morphism>,
        mor_index: HashMap<String, usize>,
        identity: Vec<usize>,
        compose: Vec<usize>,
    ) -> Result<FinCategory> {
        let k = objects.len();
        let mut into = vec![Vec::new(); k];
        let mut out_of = vec![Vec::new(); k];
        let mut hom = vec![vec![Vec::new(); k]; k];
        for (i, m) in morphisms.iter().enumerate() {
            into[m.dst].push(i);
            out_of[m.src].push(i);
            hom[m.src][m.dst].push(i);
        }
        let cat = FinCategory {
            objects,
            morphisms,
            mor_index,
            identity,
            compose,
            into,
            out_of,
            hom,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        let n = self.morphisms.len();
        if self.identity.len() != self.objects.len() {
            return Err(Error::Invalid("one identity per object is required".into()));
        }
        for (o, &id) in self.identity.iter().enumerate() {
            if id >= n || self.morphisms[id].src != o || self.morphisms[id].dst != o {
                return Err(Error::Invalid(format!(
                    "identity of {} is not an endomorphism",
                    self.objects.name(o)
                )));
            }
        }
        for g in 0..n {
            for f in 0..n {
                let composable = self.morphisms[g].src == self.morphisms[f].dst;
                let gf = self.compose[g * n + f];
                if !composable {
                    continue;
                }
                if gf == UNDEFINED {
                    return Err(Error::CompositionUndefined {
                        g: self.morphisms[g].name.clone(),
                        f: self.morphisms[f].name.clone(),
                    });
                }
                if gf >= n
                    || self.morphisms[gf].src != self.morphisms[f].src
                    || self.morphisms[gf].dst != self.morphisms[g].dst
                {
                    return Err(Error::CompositionIllTyped {
                        g: self.morphisms[g].name.clone(),
                        f: self.morphisms[f].name.clone(),
                        gf: self
                            .morphisms
                            .get(gf)
                            .map_or("?".into(), |m| m.name.clone()),
                        detail: "composite must run from source(f) to target(g)".into(),
                    });
                }
            }
        }
        for m in 0..n {
            let (s, d) = (self.morphisms[m].src, self.morphisms[m].dst);
            for (id, composite) in [
                (self.identity[d], self.compose[self.identity[d] * n + m]),
                (self.identity[s], self.compose[m * n + self.identity[s]]),
            ] {
                if composite != m {
                    return Err(Error::UnitViolation {
                        identity: self.morphisms[id].name.clone(),
                        morphism: self.morphisms[m].name.clone(),
                    });
                }
            }
        }
        // (h g) f = h (g f) over all composable triples.
        for f in 0..n {
            for &g in &self.out_of[self.morphisms[f].dst] {
                let gf = self.compose[g * n + f];
                for &h in &self.out_of[self.morphisms[g].dst] {
                    let hg = self.compose[h * n + g];
                    if self.compose[hg * n + f] != self.compose[h * n + gf] {
                        return Err(Error::AssociativityViolation {
                            h: self.morphisms[h].name.clone(),
                            g: self.morphisms[g].name.clone(),
                            f: self.morphisms[f].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// One object, one morphism.
    pub fn terminal() -> FinCategory {
        CategoryBuilder::new()
            .object("*")
            .build()
            .expect("terminal category")
    }

    /// The walking arrow `u: C0 -> C1`.
    pub fn walking_arrow() -> FinCategory {
        CategoryBuilder::new()
            .objects(["C0", "C1"])
            .morphism("u", "C0", "C1")
            .build()
            .expect("walking arrow")
    }

    /// A finite poset on `0..n` ordered by `leq`, with morphisms `i<=j`.
    pub fn poset(names: &[String], leq: impl Fn(usize, usize) -> bool) -> Result<FinCategory> {
        let n = names.len();
        let mut morphisms = Vec::new();
        let mut pos = vec![vec![UNDEFINED; n]; n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    pos[i][j] = morphisms.len();
                    morphisms.push((format!("{}<={}", names[i], names[j]), i, j));
                }
            }
        }
        let identity = (0..n)
            .map(|i| {
                if pos[i][i] == UNDEFINED {
                    Err(Error::Invalid(format!(
                        "order is not reflexive at {}",
                        names[i]
                    )))
                } else {
                    Ok(pos[i][i])
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.1, m.2)).collect();
        let bad = std::cell::Cell::new(None);
        let cat = FinCategory::generate(names.to_vec(), morphisms, identity, |g, f| {
            let (a, _) = ends[f];
            let (_, c) = ends[g];
            if pos[a][c] == UNDEFINED {
                bad.set(Some((a, c)));
                0
            } else {
                pos[a][c]
            }
        });
        if let Some((a, c)) = bad.get() {
            return Err(Error::Invalid(format!(
                "order is not transitive at {} <= {}",
                names[a], names[c]
            )));
        }
        cat
    }

    /// The product category, with objects `(a,b)` at index `a * |B| + b`
    /// and morphisms `(f,g)` at index `f * |Mor B| + g`.
    pub fn product(&self, other: &FinCategory) -> Result<FinCategory> {
        let (no, mo) = (other.object_count(), other.morphism_count());
        let mut objects = Vec::with_capacity(self.object_count() * no);
        for a in 0..self.object_count() {
            for b in 0..no {
                objects.push(format!(
                    "({},{})",
                    self.object_name(a),
                    other.object_name(b)
                ));
            }
        }
        let mut morphisms = Vec::with_capacity(self.morphism_count() * mo);
        for f in 0..self.morphism_count() {
            for g in 0..mo {
                morphisms.push((
                    format!("({},{})", self.morphism_name(f), other.morphism_name(g)),
                    self.src(f) * no + other.src(g),
                    self.dst(f) * no + other.dst(g),
                ));
            }
        }
        let identity = (0..self.object_count())
            .flat_map(|a| (0..no).map(move |b| (a, b)))
            .map(|(a, b)| self.identity(a) * mo + other.identity(b))
            .collect();
        FinCategory::generate(objects, morphisms, identity, |h, k| {
            self.comp(h / mo, k / mo) * mo + other.comp(h % mo, k % mo)
        })
    }

    /// The opposite category, with the same morphism names.
    pub fn opposite(&self) -> FinCategory {
        let n = self.morphisms.len();
        let morphisms: Vec<Morphism> = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                src: m.dst,
                dst: m.src,
            })
            .collect();
        let mut table = vec![UNDEFINED; n * n];
        for g in 0..n {
            for f in 0..n {
                table[g * n + f] = self.compose[f * n + g];
            }
        }
        let k = self.objects.len();
        let mut into = vec![Vec::new(); k];
        let mut out_of = vec![Vec::new(); k];
        let mut hom = vec![vec![Vec::new(); k]; k];
        for (i, m) in morphisms.iter().enumerate() {
            into[m.dst].push(i);
            out_of[m.src].push(i);
            hom[m.src][m.dst].push(i);
        }
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            mor_index: self.mor_index.clone(),
            identity: self.identity.clone(),
            compose: table,
            into,
            out_of,
            hom,
        }
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, o: usize) -> &str {
        self.objects.name(o)
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .index_of(name)
            .ok_or_else(|| unknown("object", name))
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_name(&self, m: usize) -> &str {
        &self.morphisms[m].name
    }

    pub fn morphism_index(&self, name: &str) -> Result<usize> {
        self.mor_index
            .get(name)
            .copied()
            .ok_or_else(|| unknown("morphism", name))
    }

    pub fn src(&self, m: usize) -> usize {
        self.morphisms[m].src
    }

    pub fn dst(&self, m: usize) -> usize {
        self.morphisms[m].dst
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity[self.morphisms[m].src] == m
    }

    /// `g ∘ f`, defined when `dst(f) == src(g)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let v = self.compose[g * self.morphisms.len() + f];
        (v != UNDEFINED).then_some(v)
    }

    /// `g ∘ f`, panicking on a non-composable pair.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "{} and {} are not composable",
                self.morphisms[g].name, self.morphisms[f].name
            )
        })
    }

    /// Morphisms ending at `o`.
    pub fn incoming(&self, o: usize) -> &[usize] {
        &self.into[o]
    }

    /// Morphisms starting at `o`.
    pub fn out_of(&self, o: usize) -> &[usize] {
        &self.out_of[o]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a][b]
    }

    /// A two-sided inverse of `m`, if any.
    pub fn inverse(&self, m: usize) -> Option<usize> {
        let (s, d) = (self.src(m), self.dst(m));
        self.hom(d, s)
            .iter()
            .copied()
            .find(|&k| self.comp(k, m) == self.identity[s] && self.comp(m, k) == self.identity[d])
    }

    pub fn is_iso(&self, m: usize) -> bool {
        self.inverse(m).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_and_walking_arrow() {
        let t = FinCategory::terminal();
        assert_eq!((t.object_count(), t.morphism_count()), (1, 1));
        let two = FinCategory::walking_arrow();
        assert_eq!(two.morphism_count(), 3);
        let u = two.morphism_index("u").unwrap();
        assert_eq!(two.comp(two.identity(1), u), u);
        assert!(!two.is_iso(u));
    }

    fn chain() -> CategoryBuilder {
        CategoryBuilder::new()
            .objects(["A", "B", "C"])
            .morphism("f", "A", "B")
            .morphism("g", "B", "C")
            .morphism("gf", "A", "C")
    }

    #[test]
    fn missing_composite_is_reported() {
        let err = chain().build().unwrap_err();
        assert_eq!(
            err,
            Error::CompositionUndefined {
                g: "g".into(),
                f: "f".into()
            }
        );
        assert!(chain().compose("g", "f", "gf").build().is_ok());
    }

    #[test]
    fn ill_typed_composite_is_reported() {
        let err = chain().compose("g", "f", "f").build().unwrap_err();
        assert!(matches!(err, Error::CompositionIllTyped { .. }));
    }

    #[test]
    fn unit_violation_is_reported() {
        let err = CategoryBuilder::new()
            .objects(["A", "B"])
            .morphism("f", "A", "B")
            .morphism("f2", "A", "B")
            .compose("id_B", "f", "f2")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::UnitViolation { .. }));
    }

    #[test]
    fn associativity_violation_is_reported() {
        // (e e) c = c c = e but e (e c) = e e = c.
        let err = CategoryBuilder::new()
            .object("M")
            .morphism("e", "M", "M")
            .morphism("c", "M", "M")
            .compose("e", "e", "c")
            .compose("e", "c", "e")
            .compose("c", "e", "e")
            .compose("c", "c", "e")
            .build()
            .unwrap_err();
        assert!(
            matches!(err, Error::AssociativityViolation { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn opposite_swaps_composition() {
        let c = chain().compose("g", "f", "gf").build().unwrap();
        let op = c.opposite();
        let (f, g) = (
            c.morphism_index("f").unwrap(),
            c.morphism_index("g").unwrap(),
        );
        assert_eq!(op.compose(f, g), c.compose(g, f));
        assert_eq!(op.src(f), c.dst(f));
    }

    #[test]
    fn poset_category() {
        let names: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let p = FinCategory::poset(&names, |i, j| i <= j).unwrap();
        assert_eq!(p.morphism_count(), 6);
        assert!(FinCategory::poset(&names, |i, j| i == j
            || (i, j) == (0, 1)
            || (i, j) == (1, 2))
        .is_err());
    }
}
