//! Workspace files: named categories, presheaves, maps, signatures,
//! coalgebras, Reedy structures and G-sets in one JSON document.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde_json::{Map, Value};
use wkan_core::fincat::{coproduct, product, CategoryBuilder};
use wkan_core::mtype::Coalgebra;
use wkan_core::poly::apply_poly;
use wkan_core::reedy::{GSet, Group};
use wkan_core::wtree::Algebra;
use wkan_core::{
    Budget, DepPolySignature, FinCategory, FinFn, FinSet, PolySignature, Presheaf, PshMap,
    ReedyStructure, SimplexCategory,
};

use crate::error::{CliError, Located};

/// How a category was declared. Builtins keep the extra structure the
/// commands need.
#[derive(Clone, Debug)]
pub enum CategoryKind {
    Plain,
    Simplex(SimplexCategory),
    Fin(usize),
    FinPointed(usize),
    Naturals(usize),
}

#[derive(Clone, Debug)]
pub struct CategoryEntry {
    pub cat: Arc<FinCategory>,
    pub kind: CategoryKind,
}

#[derive(Clone, Debug)]
pub struct AlgebraEntry {
    pub signature: String,
    pub algebra: Algebra,
}

#[derive(Clone, Debug)]
pub struct CoalgebraEntry {
    pub signature: String,
    pub coalgebra: Coalgebra,
}

#[derive(Clone, Debug)]
pub struct GMap {
    pub source: String,
    pub target: String,
    pub map: FinFn,
}

/// A fully validated workspace.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub categories: BTreeMap<String, CategoryEntry>,
    pub presheaves: BTreeMap<String, Arc<Presheaf>>,
    pub maps: BTreeMap<String, PshMap>,
    pub signatures: BTreeMap<String, PolySignature>,
    pub dep_signatures: BTreeMap<String, DepPolySignature>,
    pub algebras: BTreeMap<String, AlgebraEntry>,
    pub coalgebras: BTreeMap<String, CoalgebraEntry>,
    pub reedy: BTreeMap<String, ReedyStructure>,
    pub groups: BTreeMap<String, Group>,
    pub gsets: BTreeMap<String, GSet>,
    pub gmaps: BTreeMap<String, GMap>,
}

const SECTIONS: [&str; 11] = [
    "categories",
    "presheaves",
    "maps",
    "signatures",
    "dep_signatures",
    "algebras",
    "coalgebras",
    "reedy",
    "groups",
    "gsets",
    "gmaps",
];

/// A key path inside the document, rendered like `presheaves.d1.at`.
#[derive(Clone)]
struct KeyPath(Vec<String>);

impl KeyPath {
    fn root(section: &str, name: &str) -> Self {
        KeyPath(vec![section.to_string(), name.to_string()])
    }

    fn at(&self, key: &str) -> Self {
        let mut p = self.0.clone();
        p.push(key.to_string());
        KeyPath(p)
    }
}

impl fmt::Display for KeyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

type Entry<T> = std::result::Result<T, Located>;

fn fail<T>(path: &KeyPath, detail: impl Into<String>) -> Entry<T> {
    Err(Located {
        path: path.to_string(),
        detail: detail.into(),
    })
}

fn core<T>(path: &KeyPath, r: wkan_core::Result<T>) -> Entry<T> {
    r.or_else(|e| fail(path, e.to_string()))
}

fn object<'a>(path: &KeyPath, v: &'a Value) -> Entry<&'a Map<String, Value>> {
    v.as_object()
        .map_or_else(|| fail(path, "expected an object"), Ok)
}

fn field<'a>(path: &KeyPath, v: &'a Map<String, Value>, key: &str) -> Entry<&'a Value> {
    v.get(key)
        .map_or_else(|| fail(path, format!("missing key `{key}`")), Ok)
}

fn string(path: &KeyPath, v: &Value) -> Entry<String> {
    v.as_str()
        .map(str::to_string)
        .map_or_else(|| fail(path, "expected a string"), Ok)
}

fn strings(path: &KeyPath, v: &Value) -> Entry<Vec<String>> {
    let arr = v
        .as_array()
        .map_or_else(|| fail(path, "expected a list of strings"), Ok)?;
    arr.iter()
        .enumerate()
        .map(|(i, s)| string(&path.at(&i.to_string()), s))
        .collect()
}

fn number(path: &KeyPath, v: &Value) -> Entry<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .map_or_else(|| fail(path, "expected a non-negative integer"), Ok)
}

/// `{key: value}` with string values, as pairs in key order.
fn string_pairs(path: &KeyPath, v: &Value) -> Entry<Vec<(String, String)>> {
    object(path, v)?
        .iter()
        .map(|(k, x)| Ok((k.clone(), string(&path.at(k), x)?)))
        .collect()
}

fn lookup<'a, T>(
    path: &KeyPath,
    table: &'a BTreeMap<String, T>,
    kind: &str,
    name: &str,
) -> Entry<&'a T> {
    table
        .get(name)
        .map_or_else(|| fail(path, format!("unknown {kind} `{name}`")), Ok)
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: file.clone(),
            detail: e.to_string(),
        })?;
        Self::parse(&file, &text)
    }

    /// Parse and validate a document, collecting one located error per
    /// broken entry.
    pub fn parse(file: &str, text: &str) -> Result<Self, CliError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
            file: file.to_string(),
            line: e.line(),
            column: e.column(),
            detail: e.to_string(),
        })?;
        let mut loader = Loader {
            ws: Workspace::default(),
            errors: Vec::new(),
            doc: &doc,
            resolving: BTreeSet::new(),
        };
        loader.run();
        if loader.errors.is_empty() {
            Ok(loader.ws)
        } else {
            Err(CliError::Validation {
                file: file.to_string(),
                errors: loader.errors,
            })
        }
    }

    pub fn category(&self, name: &str) -> Result<&CategoryEntry, CliError> {
        self.categories
            .get(name)
            .ok_or_else(|| CliError::unknown("category", name))
    }

    pub fn presheaf(&self, name: &str) -> Result<&Arc<Presheaf>, CliError> {
        self.presheaves
            .get(name)
            .ok_or_else(|| CliError::unknown("presheaf", name))
    }

    pub fn map(&self, name: &str) -> Result<&PshMap, CliError> {
        self.maps
            .get(name)
            .ok_or_else(|| CliError::unknown("map", name))
    }

    pub fn signature(&self, name: &str) -> Result<&PolySignature, CliError> {
        self.signatures
            .get(name)
            .ok_or_else(|| CliError::unknown("signature", name))
    }

    pub fn dep_signature(&self, name: &str) -> Result<&DepPolySignature, CliError> {
        self.dep_signatures
            .get(name)
            .ok_or_else(|| CliError::unknown("dependent signature", name))
    }

    pub fn algebra(&self, name: &str) -> Result<&AlgebraEntry, CliError> {
        self.algebras
            .get(name)
            .ok_or_else(|| CliError::unknown("algebra", name))
    }

    pub fn coalgebra(&self, name: &str) -> Result<&CoalgebraEntry, CliError> {
        self.coalgebras
            .get(name)
            .ok_or_else(|| CliError::unknown("coalgebra", name))
    }

    pub fn reedy_structure(&self, name: &str) -> Result<&ReedyStructure, CliError> {
        self.reedy
            .get(name)
            .ok_or_else(|| CliError::unknown("Reedy structure", name))
    }

    pub fn gset(&self, name: &str) -> Result<&GSet, CliError> {
        self.gsets
            .get(name)
            .ok_or_else(|| CliError::unknown("G-set", name))
    }

    pub fn gmap(&self, name: &str) -> Result<&GMap, CliError> {
        self.gmaps
            .get(name)
            .ok_or_else(|| CliError::unknown("G-map", name))
    }

    /// The simplex category a map lives over, if it was declared as one.
    pub fn simplex_of(&self, map: &PshMap) -> Option<&SimplexCategory> {
        self.categories.values().find_map(|e| match &e.kind {
            CategoryKind::Simplex(sc) if **sc.category() == **map.category() => Some(sc),
            _ => None,
        })
    }
}

struct Loader<'a> {
    ws: Workspace,
    errors: Vec<Located>,
    doc: &'a Value,
    resolving: BTreeSet<String>,
}

impl Loader<'_> {
    fn run(&mut self) {
        let doc = self.doc;
        let top = match doc.as_object() {
            Some(top) => top,
            None => {
                self.errors.push(Located {
                    path: "$".into(),
                    detail: "a workspace is a JSON object".into(),
                });
                return;
            }
        };
        for key in top.keys() {
            if !SECTIONS.contains(&key.as_str()) {
                self.errors.push(Located {
                    path: key.clone(),
                    detail: "unknown section".into(),
                });
            }
        }
        for section in SECTIONS {
            let Some(entries) = top.get(section) else {
                continue;
            };
            let Some(entries) = entries.as_object() else {
                self.errors.push(Located {
                    path: section.into(),
                    detail: "a section maps names to entries".into(),
                });
                continue;
            };
            for (name, v) in entries {
                let path = KeyPath::root(section, name);
                let outcome = match section {
                    "categories" => self.category(&path, v).map(|e| {
                        self.ws.categories.insert(name.clone(), e);
                    }),
                    "presheaves" => self.presheaf(name).map(|_| ()),
                    "maps" => self.map(&path, v).map(|m| {
                        self.ws.maps.insert(name.clone(), m);
                    }),
                    "signatures" => self.signature(&path, v).map(|s| {
                        self.ws.signatures.insert(name.clone(), s);
                    }),
                    "dep_signatures" => self.dep_signature(&path, v).map(|s| {
                        self.ws.dep_signatures.insert(name.clone(), s);
                    }),
                    "algebras" => self.algebra(&path, v).map(|a| {
                        self.ws.algebras.insert(name.clone(), a);
                    }),
                    "coalgebras" => self.coalgebra(&path, v).map(|c| {
                        self.ws.coalgebras.insert(name.clone(), c);
                    }),
                    "reedy" => self.reedy(&path, v).map(|r| {
                        self.ws.reedy.insert(name.clone(), r);
                    }),
                    "groups" => self.group(&path, v).map(|g| {
                        self.ws.groups.insert(name.clone(), g);
                    }),
                    "gsets" => self.gset(&path, v).map(|g| {
                        self.ws.gsets.insert(name.clone(), g);
                    }),
                    _ => self.gmap(&path, v).map(|g| {
                        self.ws.gmaps.insert(name.clone(), g);
                    }),
                };
                if let Err(e) = outcome {
                    self.errors.push(e);
                }
            }
        }
    }

    fn category(&self, path: &KeyPath, v: &Value) -> Entry<CategoryEntry> {
        let o = object(path, v)?;
        let builtin = |key: &str| o.get(key).map(|n| number(&path.at(key), n)).transpose();
        if let Some(n) = builtin("simplex")? {
            let sc = core(path, SimplexCategory::new(n))?;
            return Ok(CategoryEntry {
                cat: sc.category().clone(),
                kind: CategoryKind::Simplex(sc),
            });
        }
        let reedy_builtin = [
            (
                "fin",
                CategoryKind::Fin as fn(usize) -> CategoryKind,
                ReedyStructure::fin as fn(usize) -> _,
            ),
            (
                "fin_pointed",
                CategoryKind::FinPointed,
                ReedyStructure::fin_pointed,
            ),
            ("naturals", CategoryKind::Naturals, ReedyStructure::naturals),
        ];
        for (key, kind, build) in reedy_builtin {
            if let Some(n) = builtin(key)? {
                let r = core(path, build(n))?;
                return Ok(CategoryEntry {
                    cat: r.category().clone(),
                    kind: kind(n),
                });
            }
        }
        let mut b = CategoryBuilder::new()
            .objects(strings(&path.at("objects"), field(path, o, "objects")?)?);
        if let Some(ms) = o.get("morphisms") {
            let mp = path.at("morphisms");
            let ms = ms
                .as_array()
                .map_or_else(|| fail(&mp, "expected a list"), Ok)?;
            for (i, m) in ms.iter().enumerate() {
                let p = mp.at(&i.to_string());
                let m = object(&p, m)?;
                let get = |k: &str| field(&p, m, k).and_then(|x| string(&p.at(k), x));
                b = b.morphism(get("id")?, get("src")?, get("dst")?);
            }
        }
        if let Some(ids) = o.get("identities") {
            for (obj, m) in string_pairs(&path.at("identities"), ids)? {
                b = b.identity(obj, m);
            }
        }
        if let Some(cs) = o.get("compose") {
            let cp = path.at("compose");
            let cs = cs
                .as_array()
                .map_or_else(|| fail(&cp, "expected a list of [g, f, gf]"), Ok)?;
            for (i, c) in cs.iter().enumerate() {
                let t = strings(&cp.at(&i.to_string()), c)?;
                if t.len() != 3 {
                    return fail(&cp.at(&i.to_string()), "expected [g, f, gf]");
                }
                b = b.compose(&t[0], &t[1], &t[2]);
            }
        }
        Ok(CategoryEntry {
            cat: Arc::new(core(path, b.build())?),
            kind: CategoryKind::Plain,
        })
    }

    /// Presheaves may refer to each other, so they are resolved on demand.
    fn presheaf(&mut self, name: &str) -> Entry<Arc<Presheaf>> {
        if let Some(p) = self.ws.presheaves.get(name) {
            return Ok(p.clone());
        }
        let path = KeyPath::root("presheaves", name);
        let v = match self.doc.get("presheaves").and_then(|s| s.get(name)) {
            Some(v) => v,
            None => return fail(&path, format!("unknown presheaf `{name}`")),
        };
        if !self.resolving.insert(name.to_string()) {
            return fail(&path, "presheaf is defined in terms of itself");
        }
        let built = self.build_presheaf(&path, v);
        self.resolving.remove(name);
        let p = Arc::new(built?);
        self.ws.presheaves.insert(name.to_string(), p.clone());
        Ok(p)
    }

    fn pair(&mut self, path: &KeyPath, v: &Value) -> Entry<(Arc<Presheaf>, Arc<Presheaf>)> {
        let names = strings(path, v)?;
        if names.len() != 2 {
            return fail(path, "expected two presheaf names");
        }
        let x = self.presheaf(&names[0]).or_else(|e| fail(path, e.detail))?;
        let y = self.presheaf(&names[1]).or_else(|e| fail(path, e.detail))?;
        Ok((x, y))
    }

    fn build_presheaf(&mut self, path: &KeyPath, v: &Value) -> Entry<Presheaf> {
        let o = object(path, v)?;
        if let Some(pair) = o.get("product") {
            let (x, y) = self.pair(&path.at("product"), pair)?;
            return Ok((*core(path, product(&x, &y))?.apex).clone());
        }
        if let Some(pair) = o.get("coproduct") {
            let (x, y) = self.pair(&path.at("coproduct"), pair)?;
            return Ok((*core(path, coproduct(&x, &y))?.0).clone());
        }
        let cname = string(&path.at("category"), field(path, o, "category")?)?;
        let entry = lookup(
            &path.at("category"),
            &self.ws.categories,
            "category",
            &cname,
        )?;
        let cat = entry.cat.clone();
        let simplicial = |key: &str| match &entry.kind {
            CategoryKind::Simplex(sc) => Ok(sc.clone()),
            _ => fail(
                &path.at(key),
                format!("`{key}` needs a category declared with `simplex`"),
            ),
        };
        if let Some(n) = o.get("simplex") {
            return core(
                path,
                simplicial("simplex")?.simplex(number(&path.at("simplex"), n)?),
            );
        }
        if let Some(n) = o.get("boundary") {
            return core(
                path,
                simplicial("boundary")?.boundary(number(&path.at("boundary"), n)?),
            );
        }
        if let Some(h) = o.get("horn") {
            let hp = path.at("horn");
            let nk = h
                .as_array()
                .filter(|a| a.len() == 2)
                .map_or_else(|| fail(&hp, "expected [n, k]"), Ok)?;
            let (n, k) = (number(&hp, &nk[0])?, number(&hp, &nk[1])?);
            return core(path, simplicial("horn")?.horn(n, k));
        }
        if let Some(s) = o.get("discrete") {
            let set = core(path, FinSet::new(strings(&path.at("discrete"), s)?))?;
            return Ok(simplicial("discrete")?.discrete(&set));
        }
        if let Some(s) = o.get("chaotic") {
            let set = core(path, FinSet::new(strings(&path.at("chaotic"), s)?))?;
            return core(path, simplicial("chaotic")?.chaotic(&set));
        }
        if let Some(c) = o.get("representable") {
            let obj = string(&path.at("representable"), c)?;
            let c = core(&path.at("representable"), cat.object_index(&obj))?;
            return Ok(Presheaf::representable(cat, c));
        }
        if o.get("terminal").and_then(Value::as_bool) == Some(true) {
            return Ok(Presheaf::terminal(cat));
        }
        let at: Vec<(String, Vec<String>)> = match o.get("at") {
            Some(at) => object(&path.at("at"), at)?
                .iter()
                .map(|(k, es)| Ok((k.clone(), strings(&path.at("at").at(k), es)?)))
                .collect::<Entry<_>>()?,
            None => Vec::new(),
        };
        let restrict: Vec<(String, Vec<(String, String)>)> = match o.get("restrict") {
            Some(r) => object(&path.at("restrict"), r)?
                .iter()
                .map(|(m, t)| Ok((m.clone(), string_pairs(&path.at("restrict").at(m), t)?)))
                .collect::<Entry<_>>()?,
            None => Vec::new(),
        };
        core(path, Presheaf::from_named(cat, &at, &restrict))
    }

    fn map(&mut self, path: &KeyPath, v: &Value) -> Entry<PshMap> {
        let o = object(path, v)?;
        let end = |this: &mut Self, key: &str| -> Entry<(String, Arc<Presheaf>)> {
            let name = string(&path.at(key), field(path, o, key)?)?;
            let p = this
                .presheaf(&name)
                .or_else(|e| fail(&path.at(key), e.detail))?;
            Ok((name, p))
        };
        let (sname, source) = end(self, "source")?;
        let (tname, target) = end(self, "target")?;
        if let Some(c) = o.get("components") {
            let cp = path.at("components");
            let comps: Vec<(String, Vec<(String, String)>)> = object(&cp, c)?
                .iter()
                .map(|(k, t)| Ok((k.clone(), string_pairs(&cp.at(k), t)?)))
                .collect::<Entry<_>>()?;
            return core(path, PshMap::from_named(source, target, &comps));
        }
        if o.get("by_name").and_then(Value::as_bool) == Some(true) {
            let comps = (0..source.category().object_count())
                .map(|c| {
                    (0..source.size(c))
                        .map(|e| {
                            let n = source.at(c).name(e);
                            target.at(c).index_of(n).map_or_else(
                                || fail(path, format!("`{n}` has no namesake in {tname}")),
                                Ok,
                            )
                        })
                        .collect::<Entry<Vec<usize>>>()
                })
                .collect::<Entry<Vec<_>>>()?;
            return core(path, PshMap::new(source, target, comps));
        }
        if let Some(v) = o.get("vertices") {
            // Simplices named by vertex strings map letterwise.
            let vm: BTreeMap<String, String> =
                string_pairs(&path.at("vertices"), v)?.into_iter().collect();
            let comps = (0..source.category().object_count())
                .map(|c| {
                    (0..source.size(c))
                        .map(|e| {
                            let n = source.at(c).name(e);
                            let image = n
                                .chars()
                                .map(|ch| vm.get(ch.to_string().as_str()).map(String::as_str))
                                .collect::<Option<String>>();
                            image.and_then(|i| target.at(c).index_of(&i)).map_or_else(
                                || {
                                    fail(
                                        &path.at("vertices"),
                                        format!("cannot map simplex `{n}` into {tname}"),
                                    )
                                },
                                Ok,
                            )
                        })
                        .collect::<Entry<Vec<usize>>>()
                })
                .collect::<Entry<Vec<_>>>()?;
            return core(path, PshMap::new(source, target, comps));
        }
        if o.get("to_terminal").and_then(Value::as_bool) == Some(true) {
            if (0..target.category().object_count()).any(|c| target.size(c) != 1) {
                return fail(path, format!("{tname} is not terminal"));
            }
            return core(path, PshMap::from_fn(source, target, |_, _| 0));
        }
        for (key, side) in [("projection", 0), ("injection", 1)] {
            if let Some(i) = o.get(key) {
                let i = number(&path.at(key), i)?;
                let decl = self.doc["presheaves"].get(if side == 0 { &sname } else { &tname });
                let former = if side == 0 { "product" } else { "coproduct" };
                let parts = match decl.and_then(|d| d.get(former)) {
                    Some(parts) => strings(path, parts)?,
                    None => {
                        return fail(
                            path,
                            format!("a {key} needs a presheaf declared as a {former}"),
                        )
                    }
                };
                let (x, y) = self.pair(path, &Value::from(parts.clone()))?;
                let maps = if side == 0 {
                    let p = core(path, product(&x, &y))?;
                    [p.left, p.right]
                } else {
                    let (_, l, r) = core(path, coproduct(&x, &y))?;
                    [l, r]
                };
                let m = maps
                    .get(i)
                    .map_or_else(|| fail(&path.at(key), "expected 0 or 1"), Ok)?
                    .clone();
                // Re-anchor on the workspace's own presheaves.
                return core(path, PshMap::new(source, target, m.components().to_vec()));
            }
        }
        fail(path, "a map needs `components`, `by_name`, `vertices`, `to_terminal`, `projection` or `injection`")
    }

    fn signature(&self, path: &KeyPath, v: &Value) -> Entry<PolySignature> {
        let o = object(path, v)?;
        if let Some(a) = o.get("arities") {
            let ap = path.at("arities");
            let pairs: Vec<(String, usize)> = match a {
                Value::Object(m) => m
                    .iter()
                    .map(|(k, n)| Ok((k.clone(), number(&ap.at(k), n)?)))
                    .collect::<Entry<_>>()?,
                Value::Array(xs) => xs
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        let p = ap.at(&i.to_string());
                        match x.as_array().map(Vec::as_slice) {
                            Some([l, n]) => Ok((string(&p, l)?, number(&p, n)?)),
                            _ => fail(&p, "expected [label, arity]"),
                        }
                    })
                    .collect::<Entry<_>>()?,
                _ => return fail(&ap, "expected {label: arity} or [[label, arity], ...]"),
            };
            return core(path, PolySignature::from_arities(&pairs));
        }
        let labels = core(
            path,
            FinSet::new(strings(&path.at("labels"), field(path, o, "labels")?)?),
        )?;
        let edges = core(
            path,
            FinSet::new(strings(&path.at("edges"), field(path, o, "edges")?)?),
        )?;
        let mp = path.at("map");
        let pairs = string_pairs(&mp, field(path, o, "map")?)?;
        let map = self.named_fn(&mp, &edges, &labels, &pairs)?;
        core(path, PolySignature::new(labels, edges, map))
    }

    fn named_fn(
        &self,
        path: &KeyPath,
        dom: &FinSet,
        cod: &FinSet,
        pairs: &[(String, String)],
    ) -> Entry<FinFn> {
        let mut table = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let xi = dom
                .index_of(x)
                .map_or_else(|| fail(path, format!("unknown element `{x}`")), Ok)?;
            let yi = cod
                .index_of(y)
                .map_or_else(|| fail(path, format!("unknown element `{y}`")), Ok)?;
            table[xi] = yi;
        }
        if let Some(x) = table.iter().position(|&y| y == usize::MAX) {
            return fail(path, format!("no value for `{}`", dom.name(x)));
        }
        core(path, FinFn::new(table, cod.len()))
    }

    fn dep_signature(&self, path: &KeyPath, v: &Value) -> Entry<DepPolySignature> {
        let o = object(path, v)?;
        let bname = string(&path.at("base"), field(path, o, "base")?)?;
        let base = lookup(&path.at("base"), &self.ws.signatures, "signature", &bname)?.clone();
        let sorts = core(
            path,
            FinSet::new(strings(&path.at("sorts"), field(path, o, "sorts")?)?),
        )?;
        let h = self.named_fn(
            &path.at("h"),
            base.edges(),
            &sorts,
            &string_pairs(&path.at("h"), field(path, o, "h")?)?,
        )?;
        let g = self.named_fn(
            &path.at("g"),
            base.labels(),
            &sorts,
            &string_pairs(&path.at("g"), field(path, o, "g")?)?,
        )?;
        core(path, DepPolySignature::new(base, sorts, h, g))
    }

    fn algebra(&self, path: &KeyPath, v: &Value) -> Entry<AlgebraEntry> {
        let o = object(path, v)?;
        let signature = string(&path.at("signature"), field(path, o, "signature")?)?;
        let sig = lookup(
            &path.at("signature"),
            &self.ws.signatures,
            "signature",
            &signature,
        )?;
        let carrier = core(
            path,
            FinSet::new(strings(&path.at("carrier"), field(path, o, "carrier")?)?),
        )?;
        let domain = core(path, apply_poly(sig, &carrier, &Budget::default()))?;
        let sp = path.at("structure");
        let structure = self.named_fn(
            &sp,
            domain.names(),
            &carrier,
            &string_pairs(&sp, field(path, o, "structure")?)?,
        )?;
        let algebra = core(
            path,
            Algebra::new(sig, carrier, structure.table().to_vec(), &Budget::default()),
        )?;
        Ok(AlgebraEntry { signature, algebra })
    }

    fn coalgebra(&self, path: &KeyPath, v: &Value) -> Entry<CoalgebraEntry> {
        let o = object(path, v)?;
        let signature = string(&path.at("signature"), field(path, o, "signature")?)?;
        let sig = lookup(
            &path.at("signature"),
            &self.ws.signatures,
            "signature",
            &signature,
        )?;
        let coalgebra = core(path, Coalgebra::from_json(sig.clone(), v))?;
        Ok(CoalgebraEntry {
            signature,
            coalgebra,
        })
    }

    fn reedy(&self, path: &KeyPath, v: &Value) -> Entry<ReedyStructure> {
        let o = object(path, v)?;
        let cname = string(&path.at("category"), field(path, o, "category")?)?;
        let entry = lookup(
            &path.at("category"),
            &self.ws.categories,
            "category",
            &cname,
        )?;
        if o.contains_key("degree") {
            return core(path, ReedyStructure::from_json(entry.cat.clone(), v));
        }
        match entry.kind {
            CategoryKind::Simplex(ref sc) => core(path, ReedyStructure::from_simplex(sc)),
            CategoryKind::Fin(k) => core(path, ReedyStructure::fin(k)),
            CategoryKind::FinPointed(k) => core(path, ReedyStructure::fin_pointed(k)),
            CategoryKind::Naturals(m) => core(path, ReedyStructure::naturals(m)),
            CategoryKind::Plain => fail(
                path,
                "a declared category needs `degree`, `plus` and `minus`",
            ),
        }
    }

    fn group(&self, path: &KeyPath, v: &Value) -> Entry<Group> {
        let o = object(path, v)?;
        if let Some(n) = o.get("cyclic") {
            return core(path, Group::cyclic(number(&path.at("cyclic"), n)?));
        }
        if let Some(a) = o.get("automorphisms") {
            let ap = path.at("automorphisms");
            let parts = strings(&ap, a)?;
            let [cname, obj] = parts.as_slice() else {
                return fail(&ap, "expected [category, object]");
            };
            let entry = lookup(&ap, &self.ws.categories, "category", cname)?;
            let oi = core(&ap, entry.cat.object_index(obj))?;
            return core(path, Group::automorphisms(&entry.cat, oi));
        }
        let elements = core(
            path,
            FinSet::new(strings(&path.at("elements"), field(path, o, "elements")?)?),
        )?;
        let tp = path.at("table");
        let rows = field(path, o, "table")?
            .as_array()
            .map_or_else(|| fail(&tp, "expected a list of rows"), Ok)?;
        let table = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let rp = tp.at(&i.to_string());
                strings(&rp, row)?
                    .iter()
                    .map(|g| {
                        elements
                            .index_of(g)
                            .map_or_else(|| fail(&rp, format!("unknown element `{g}`")), Ok)
                    })
                    .collect()
            })
            .collect::<Entry<Vec<Vec<usize>>>>()?;
        core(path, Group::new(elements, table))
    }

    fn gset(&self, path: &KeyPath, v: &Value) -> Entry<GSet> {
        let o = object(path, v)?;
        let gname = string(&path.at("group"), field(path, o, "group")?)?;
        let group = lookup(&path.at("group"), &self.ws.groups, "group", &gname)?.clone();
        if o.get("regular").and_then(Value::as_bool) == Some(true) {
            return Ok(GSet::regular(&group));
        }
        let carrier = core(
            path,
            FinSet::new(strings(&path.at("carrier"), field(path, o, "carrier")?)?),
        )?;
        let Some(action) = o.get("action") else {
            return Ok(GSet::trivial(&group, carrier));
        };
        let ap = path.at("action");
        let action = object(&ap, action)?;
        let mut table = Vec::with_capacity(carrier.len());
        for (_, x) in carrier.iter() {
            let xp = ap.at(x);
            let row = strings(&xp, field(&ap, action, x)?)?;
            let row = row
                .iter()
                .map(|y| {
                    carrier
                        .index_of(y)
                        .map_or_else(|| fail(&xp, format!("unknown element `{y}`")), Ok)
                })
                .collect::<Entry<Vec<usize>>>()?;
            table.push(row);
        }
        core(path, GSet::new(group, carrier, table))
    }

    fn gmap(&self, path: &KeyPath, v: &Value) -> Entry<GMap> {
        let o = object(path, v)?;
        let source = string(&path.at("source"), field(path, o, "source")?)?;
        let target = string(&path.at("target"), field(path, o, "target")?)?;
        let x = lookup(&path.at("source"), &self.ws.gsets, "G-set", &source)?;
        let y = lookup(&path.at("target"), &self.ws.gsets, "G-set", &target)?;
        let mp = path.at("map");
        let map = self.named_fn(
            &mp,
            &x.carrier,
            &y.carrier,
            &string_pairs(&mp, field(path, o, "map")?)?,
        )?;
        Ok(GMap {
            source,
            target,
            map,
        })
    }
}
