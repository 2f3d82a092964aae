//! Reedy and generalised Reedy structures on finite categories.

mod gset;
mod latching;
mod minus;

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{unknown, Error, Result};
use crate::fincat::FinCategory;
use crate::sset::SimplexCategory;

pub use gset::{gset_free_cofibration_check, FreeCofibration, GSet, Group};
pub use latching::{
    latching_mono_check, matching_latching, reedy_fib_cofib_check, Ambient, CheckSide,
    LatchingMonoReport, MatchingLatching, ObjectVerdict, ReedyCheckReport, Side, SimplicialDiagram,
    SimplicialDiagramMap, Variance,
};
pub use minus::{
    certify_absolute_pushout, minus_conditions, AbsoluteSquare, MinusReport, PushoutCertificate,
};

/// A degree function and classes `R⁺`, `R⁻` on a finite category, with
/// one chosen factorization per morphism.
#[derive(Clone, Debug)]
pub struct ReedyStructure {
    cat: Arc<FinCategory>,
    opposite: Arc<FinCategory>,
    degree: Vec<usize>,
    plus: Vec<bool>,
    minus: Vec<bool>,
    generalised: bool,
    factorization: Vec<(usize, usize)>,
}

fn membership(cat: &FinCategory, class: &[usize]) -> Vec<bool> {
    let mut out = vec![false; cat.morphism_count()];
    for &m in class {
        out[m] = true;
    }
    out
}

/// Validate a Reedy structure exhaustively.
///
/// Ordinary structures need every non-identity map of `R⁺` to raise degree,
/// every non-identity map of `R⁻` to lower it, and a unique
/// factorization `m = m⁺ ∘ m⁻`. Generalised ones relax identities to
/// isomorphisms (which must preserve degree) and uniqueness to uniqueness
/// up to a unique-enough isomorphism in the middle.
pub fn attach_reedy(
    cat: Arc<FinCategory>,
    degree: Vec<usize>,
    plus: &[usize],
    minus: &[usize],
    generalised: bool,
) -> Result<ReedyStructure> {
    if degree.len() != cat.object_count() {
        return Err(Error::Invalid("one degree per object is required".into()));
    }
    if let Some(&m) = plus
        .iter()
        .chain(minus)
        .find(|&&m| m >= cat.morphism_count())
    {
        return Err(Error::Invalid(format!(
            "morphism index {m} is out of range"
        )));
    }
    let (pl, mi) = (membership(&cat, plus), membership(&cat, minus));
    for (class, name) in [(&pl, "plus"), (&mi, "minus")] {
        for o in 0..cat.object_count() {
            if !class[cat.identity(o)] {
                return Err(Error::Invalid(format!(
                    "{name} class is missing the identity {}",
                    cat.morphism_name(cat.identity(o))
                )));
            }
        }
        for g in 0..cat.morphism_count() {
            for f in 0..cat.morphism_count() {
                if let Some(gf) = cat.compose(g, f) {
                    if class[g] && class[f] && !class[gf] {
                        return Err(Error::Invalid(format!(
                            "{name} class is not closed under {} . {}",
                            cat.morphism_name(g),
                            cat.morphism_name(f)
                        )));
                    }
                }
            }
        }
    }
    let exempt = |m: usize| {
        if generalised {
            cat.is_iso(m)
        } else {
            cat.is_identity(m)
        }
    };
    for m in 0..cat.morphism_count() {
        let (ds, dt) = (degree[cat.src(m)], degree[cat.dst(m)]);
        let name = cat.morphism_name(m);
        if generalised && cat.is_iso(m) && ds != dt {
            return Err(Error::DegreeViolation(format!(
                "isomorphism {name} changes degree"
            )));
        }
        if exempt(m) {
            continue;
        }
        if pl[m] && ds >= dt {
            return Err(Error::DegreeViolation(format!(
                "{name} is in R+ but does not raise degree"
            )));
        }
        if mi[m] && ds <= dt {
            return Err(Error::DegreeViolation(format!(
                "{name} is in R- but does not lower degree"
            )));
        }
    }
    let mut factorization = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (a, b) = (cat.src(m), cat.dst(m));
        let mut found: Vec<(usize, usize)> = Vec::new();
        for u in 0..cat.object_count() {
            for &q in cat.hom(a, u) {
                if !mi[q] {
                    continue;
                }
                for &p in cat.hom(u, b) {
                    if pl[p] && cat.comp(p, q) == m {
                        found.push((q, p));
                    }
                }
            }
        }
        let Some(&first) = found.first() else {
            return Err(Error::FactorizationMissing(
                cat.morphism_name(m).to_string(),
            ));
        };
        let render =
            |(q, p): (usize, usize)| format!("{} . {}", cat.morphism_name(p), cat.morphism_name(q));
        for &other in &found[1..] {
            let related = generalised && {
                let (u, v) = (cat.dst(first.0), cat.dst(other.0));
                cat.hom(u, v).iter().any(|&t| {
                    cat.is_iso(t)
                        && cat.comp(t, first.0) == other.0
                        && cat.comp(other.1, t) == first.1
                })
            };
            if !related {
                return Err(Error::FactorizationNotUnique {
                    morphism: cat.morphism_name(m).to_string(),
                    first: render(first),
                    second: render(other),
                });
            }
        }
        factorization.push(first);
    }
    let opposite = Arc::new(cat.opposite());
    Ok(ReedyStructure {
        cat,
        opposite,
        degree,
        plus: pl,
        minus: mi,
        generalised,
        factorization,
    })
}

impl ReedyStructure {
    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    /// The opposite of the base, the domain of covariant functors viewed as
    /// presheaves.
    pub fn opposite(&self) -> &Arc<FinCategory> {
        &self.opposite
    }

    pub fn degree(&self, o: usize) -> usize {
        self.degree[o]
    }

    pub fn is_plus(&self, m: usize) -> bool {
        self.plus[m]
    }

    pub fn is_minus(&self, m: usize) -> bool {
        self.minus[m]
    }

    pub fn is_generalised(&self) -> bool {
        self.generalised
    }

    /// Whether `m` is excluded from matching and latching diagrams.
    pub fn is_trivial(&self, m: usize) -> bool {
        if self.generalised {
            self.cat.is_iso(m)
        } else {
            self.cat.is_identity(m)
        }
    }

    /// The chosen factorization `(m⁻, m⁺)` with `m = m⁺ ∘ m⁻`.
    pub fn factorization(&self, m: usize) -> (usize, usize) {
        self.factorization[m]
    }

    pub fn minus_maps(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cat.morphism_count()).filter(|&m| self.minus[m])
    }

    pub fn to_json(&self) -> Value {
        let degree: Map<String, Value> = (0..self.cat.object_count())
            .map(|o| (self.cat.object_name(o).to_string(), json!(self.degree[o])))
            .collect();
        let class = |c: &[bool]| -> Vec<&str> {
            (0..self.cat.morphism_count())
                .filter(|&m| c[m])
                .map(|m| self.cat.morphism_name(m))
                .collect()
        };
        let mut out = json!({
            "degree": degree,
            "plus": class(&self.plus),
            "minus": class(&self.minus),
        });
        if self.generalised {
            out["generalised"] = json!(true);
        }
        out
    }

    /// Parse `{"degree": {obj: n}, "plus": [...], "minus": [...]}` against a
    /// category, with an optional `"generalised"` flag.
    pub fn from_json(cat: Arc<FinCategory>, value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("reedy structure: {what}"));
        let degrees = value
            .get("degree")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing degree map"))?;
        let mut degree = vec![None; cat.object_count()];
        for (name, d) in degrees {
            let o = cat.object_index(name)?;
            degree[o] = Some(d.as_u64().ok_or_else(|| bad("degrees are naturals"))? as usize);
        }
        let degree = degree
            .into_iter()
            .enumerate()
            .map(|(o, d)| d.ok_or_else(|| unknown("degree for object", cat.object_name(o))))
            .collect::<Result<Vec<_>>>()?;
        let class = |key: &str| -> Result<Vec<usize>> {
            value
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(&format!("missing {key} class")))?
                .iter()
                .map(|m| {
                    cat.morphism_index(
                        m.as_str()
                            .ok_or_else(|| bad("morphisms are named by strings"))?,
                    )
                })
                .collect()
        };
        let (plus, minus) = (class("plus")?, class("minus")?);
        let generalised = value
            .get("generalised")
            .and_then(Value::as_bool)
            .unwrap_or(false);
        attach_reedy(cat, degree, &plus, &minus, generalised)
    }

    /// `Δ≤n` with injections and surjections, `d([k]) = k`.
    pub fn delta(n: usize) -> Result<Self> {
        let sc = SimplexCategory::new(n)?;
        Self::from_simplex(&sc)
    }

    pub fn from_simplex(sc: &SimplexCategory) -> Result<Self> {
        let cat = sc.category().clone();
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for m in 0..cat.morphism_count() {
            let images = sc.images(m);
            if images.windows(2).all(|w| w[0] < w[1]) {
                plus.push(m);
            }
            let top = cat.dst(m);
            if images.first() == Some(&0)
                && images.last() == Some(&top)
                && images.windows(2).all(|w| w[1] <= w[0] + 1)
            {
                minus.push(m);
            }
        }
        let degree = (0..cat.object_count()).collect();
        attach_reedy(cat, degree, &plus, &minus, false)
    }

    /// The poset `0 ≤ 1 ≤ … ≤ m` with every map in `R⁺`.
    pub fn naturals(m: usize) -> Result<Self> {
        let names: Vec<String> = (0..=m).map(|i| i.to_string()).collect();
        let cat = Arc::new(FinCategory::poset(&names, |i, j| i <= j)?);
        let plus: Vec<usize> = (0..cat.morphism_count()).collect();
        let minus: Vec<usize> = (0..cat.object_count()).map(|o| cat.identity(o)).collect();
        attach_reedy(cat, (0..=m).collect(), &plus, &minus, false)
    }

    /// Finite sets `{0, …, n-1}` for `n ≤ k`, as a generalised Reedy
    /// category with injections, surjections and degree the cardinality.
    pub fn fin(k: usize) -> Result<Self> {
        Self::function_skeleton(k, false)
    }

    /// Finite pointed sets `{*, 1, …, n}` for `n ≤ k` and basepoint
    /// preserving maps.
    pub fn fin_pointed(k: usize) -> Result<Self> {
        Self::function_skeleton(k, true)
    }

    fn function_skeleton(k: usize, pointed: bool) -> Result<Self> {
        let size = |n: usize| if pointed { n + 1 } else { n };
        let objects: Vec<String> = (0..=k)
            .map(|n| {
                if pointed {
                    format!("{n}+")
                } else {
                    n.to_string()
                }
            })
            .collect();
        let mut morphisms = Vec::new();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut index = HashMap::new();
        for a in 0..=k {
            for b in 0..=k {
                for images in crate::fincat::all_functions(size(a), size(b)) {
                    if pointed && images.first().is_some_and(|&v| v != 0) {
                        continue;
                    }
                    let name = format!("{}>{}:[{}]", objects[a], objects[b], join(&images));
                    index.insert((b, images.clone()), morphisms.len());
                    morphisms.push((name, a, b));
                    maps.push(images);
                }
            }
        }
        let identity = (0..=k)
            .map(|n| index[&(n, (0..size(n)).collect::<Vec<_>>())])
            .collect();
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.1, m.2)).collect();
        let cat = Arc::new(FinCategory::generate(
            objects,
            morphisms,
            identity,
            |g, f| {
                let composite: Vec<usize> = maps[f].iter().map(|&x| maps[g][x]).collect();
                index[&(ends[g].1, composite)]
            },
        )?);
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for (m, images) in maps.iter().enumerate() {
            let target = size(ends[m].1);
            let mut seen = vec![false; target];
            let mut injective = true;
            for &v in images {
                injective &= !seen[v];
                seen[v] = true;
            }
            if injective {
                plus.push(m);
            }
            if seen.iter().all(|&s| s) {
                minus.push(m);
            }
        }
        attach_reedy(cat, (0..=k).collect(), &plus, &minus, true)
    }
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
