use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finite set of pairwise distinct, opaque element identifiers.
///
/// Elements are addressed by their position; the identifier is only used at
/// the boundary (parsing, reports, canonical ordering).
#[derive(Clone, Default)]
pub struct FinSet {
    elems: Vec<String>,
    index: HashMap<String, usize>,
}

impl FinSet {
    pub fn new<I, S>(elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = FinSet::default();
        for e in elems {
            set.push(e.into())?;
        }
        Ok(set)
    }

    pub fn empty() -> Self {
        FinSet::default()
    }

    pub fn singleton(name: impl Into<String>) -> Self {
        FinSet::new([name.into()]).expect("singleton has no duplicates")
    }

    /// `prefix0, prefix1, ...`
    pub fn numbered(prefix: &str, n: usize) -> Self {
        FinSet::new((0..n).map(|i| format!("{prefix}{i}"))).expect("numbered names are distinct")
    }

    pub(crate) fn push(&mut self, name: String) -> Result<usize> {
        if self.index.contains_key(&name) {
            return Err(Error::Duplicate {
                kind: "element",
                name,
            });
        }
        let i = self.elems.len();
        self.index.insert(name.clone(), i);
        self.elems.push(name);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn names(&self) -> &[String] {
        &self.elems
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str)> {
        self.elems.iter().enumerate().map(|(i, s)| (i, s.as_str()))
    }

    /// Positions sorted lexicographically by identifier.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.elems[a].cmp(&self.elems[b]));
        order
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

/// A total function between finite sets, stored as a lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinFn {
    map: Vec<usize>,
    codomain: usize,
}

impl FinFn {
    pub fn new(map: Vec<usize>, codomain: usize) -> Result<Self> {
        if let Some(bad) = map.iter().find(|&&y| y >= codomain) {
            return Err(Error::Invalid(format!(
                "function value {bad} outside codomain of size {codomain}"
            )));
        }
        Ok(FinFn { map, codomain })
    }

    pub fn identity(n: usize) -> Self {
        FinFn {
            map: (0..n).collect(),
            codomain: n,
        }
    }

    pub fn constant(domain: usize, value: usize, codomain: usize) -> Self {
        assert!(value < codomain);
        FinFn {
            map: vec![value; domain],
            codomain,
        }
    }

    /// Lookup-table constructor for callers that already guarantee the range.
    pub(crate) fn from_table(map: Vec<usize>, codomain: usize) -> Self {
        debug_assert!(map.iter().all(|&y| y < codomain));
        FinFn { map, codomain }
    }

    pub fn domain(&self) -> usize {
        self.map.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ first`
    pub fn after(&self, first: &FinFn) -> FinFn {
        assert_eq!(first.codomain, self.domain(), "composable functions");
        FinFn {
            map: first.map.iter().map(|&y| self.map[y]).collect(),
            codomain: self.codomain,
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Preimages of each codomain element, in increasing order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.codomain];
        for (x, &y) in self.map.iter().enumerate() {
            fibers[y].push(x);
        }
        fibers
    }
}

/// Every function `domain -> codomain`, odometer order (last argument fastest).
pub fn all_functions(domain: usize, codomain: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if domain == 0 {
        Some(1)
    } else if codomain == 0 {
        Some(0)
    } else {
        (codomain as u128).checked_pow(domain as u32)
    };
    let total = total.expect("function space too large to iterate");
    let mut current = vec![0usize; domain];
    let mut produced: u128 = 0;
    std::iter::from_fn(move || {
        if produced == total {
            return None;
        }
        let out = current.clone();
        produced += 1;
        for slot in current.iter_mut().rev() {
            *slot += 1;
            if *slot < codomain {
                break;
            }
            *slot = 0;
        }
        Some(out)
    })
}
