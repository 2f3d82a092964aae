//! Backtracking enumeration of natural transformations.
//!
//! Choosing the image `v` of an element `e ∈ X(C)` forces `e·β ↦ v·β` for
//! every `β` into `C`. Because the category is closed under composition one
//! level of forcing is enough, and a conflict prunes the branch at once.

use super::presheaf::Presheaf;
use crate::budget::Budget;
use crate::error::Result;

const UNSET: usize = usize::MAX;

/// The order in which unassigned elements are branched on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchOrder {
    /// Objects in index order, elements in index order.
    #[default]
    Ascending,
    /// Objects with the most incoming morphisms first, since assigning there
    /// forces the most other values.
    LargestOrbitFirst,
}

type Candidates<'a> = Box<dyn Fn(usize, usize) -> Vec<usize> + 'a>;

/// A search for maps `source → target`, optionally constrained.
pub struct HomSearch<'a> {
    source: &'a Presheaf,
    target: &'a Presheaf,
    order: SearchOrder,
    fixed: Vec<(usize, usize, usize)>,
    candidates: Option<Candidates<'a>>,
    budget: Option<&'a Budget>,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a Presheaf, target: &'a Presheaf) -> Self {
        debug_assert!(source.same_category(target));
        HomSearch {
            source,
            target,
            order: SearchOrder::Ascending,
            fixed: Vec::new(),
            candidates: None,
            budget: None,
        }
    }

    pub fn order(mut self, order: SearchOrder) -> Self {
        self.order = order;
        self
    }

    /// Require `elem ∈ source(obj)` to map to `value`.
    pub fn fix(mut self, obj: usize, elem: usize, value: usize) -> Self {
        self.fixed.push((obj, elem, value));
        self
    }

    /// Restrict the admissible images of each element. The constraint is
    /// applied to forced values as well as chosen ones.
    pub fn candidates(mut self, f: impl Fn(usize, usize) -> Vec<usize> + 'a) -> Self {
        self.candidates = Some(Box::new(f));
        self
    }

    /// Charge one unit per candidate tried.
    pub fn budget(mut self, budget: &'a Budget) -> Self {
        self.budget = Some(budget);
        self
    }

    /// Visit every solution in a deterministic order. The visitor returns
    /// `false` to stop; the result tells whether the search ran to the end.
    pub fn for_each(&self, mut visit: impl FnMut(&[Vec<usize>]) -> bool) -> Result<bool> {
        let mut state = State::new(self);
        for &(o, x, v) in &self.fixed {
            let e = state.offsets[o] + x;
            if !state.assign(e, v) {
                return Ok(true);
            }
        }
        state.search(0, &mut visit)
    }

    pub fn first(&self) -> Result<Option<Vec<Vec<usize>>>> {
        let mut found = None;
        self.for_each(|c| {
            found = Some(c.to_vec());
            false
        })?;
        Ok(found)
    }

    pub fn count(&self) -> Result<u64> {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            true
        })?;
        Ok(n)
    }

    pub fn all(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        let mut out = Vec::new();
        self.for_each(|c| {
            out.push(c.to_vec());
            true
        })?;
        Ok(out)
    }
}

struct State<'s, 'a> {
    search: &'s HomSearch<'a>,
    offsets: Vec<usize>,
    object: Vec<usize>,
    value: Vec<usize>,
    trail: Vec<usize>,
    allowed: Option<Vec<Vec<usize>>>,
    mask: Option<Vec<Vec<bool>>>,
    branch: Vec<usize>,
    scratch: Vec<Vec<usize>>,
}

impl<'s, 'a> State<'s, 'a> {
    fn new(search: &'s HomSearch<'a>) -> Self {
        let src = search.source;
        let cat = src.category();
        let mut offsets = Vec::with_capacity(cat.object_count());
        let mut object = Vec::new();
        for o in 0..cat.object_count() {
            offsets.push(object.len());
            object.extend(std::iter::repeat_n(o, src.size(o)));
        }
        let (allowed, mask) = match &search.candidates {
            None => (None, None),
            Some(f) => {
                let lists: Vec<Vec<usize>> = object
                    .iter()
                    .enumerate()
                    .map(|(e, &o)| f(o, e - offsets[o]))
                    .collect();
                let masks = lists
                    .iter()
                    .zip(&object)
                    .map(|(l, &o)| {
                        let mut m = vec![false; search.target.size(o)];
                        for &v in l {
                            m[v] = true;
                        }
                        m
                    })
                    .collect();
                (Some(lists), Some(masks))
            }
        };
        let mut objects: Vec<usize> = (0..cat.object_count()).collect();
        if search.order == SearchOrder::LargestOrbitFirst {
            objects.sort_by_key(|&o| std::cmp::Reverse(cat.incoming(o).len()));
        }
        let branch = objects
            .iter()
            .flat_map(|&o| offsets[o]..offsets[o] + src.size(o))
            .collect();
        let scratch = (0..cat.object_count())
            .map(|o| vec![0; src.size(o)])
            .collect();
        State {
            search,
            value: vec![UNSET; object.len()],
            offsets,
            object,
            trail: Vec::new(),
            allowed,
            mask,
            branch,
            scratch,
        }
    }

    fn set(&mut self, e: usize, v: usize) -> bool {
        let cur = self.value[e];
        if cur != UNSET {
            return cur == v;
        }
        if let Some(mask) = &self.mask {
            if !mask[e][v] {
                return false;
            }
        }
        self.value[e] = v;
        self.trail.push(e);
        true
    }

    fn assign(&mut self, e: usize, v: usize) -> bool {
        if !self.set(e, v) {
            return false;
        }
        let (src, tgt) = (self.search.source, self.search.target);
        let cat = src.category();
        let o = self.object[e];
        let x = e - self.offsets[o];
        for &m in cat.incoming(o) {
            let d = cat.src(m);
            if !self.set(self.offsets[d] + src.restrict(m, x), tgt.restrict(m, v)) {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for e in self.trail.drain(mark..) {
            self.value[e] = UNSET;
        }
    }

    fn search(
        &mut self,
        mut pos: usize,
        visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
    ) -> Result<bool> {
        while pos < self.branch.len() && self.value[self.branch[pos]] != UNSET {
            pos += 1;
        }
        if pos == self.branch.len() {
            for (e, &o) in self.object.iter().enumerate() {
                self.scratch[o][e - self.offsets[o]] = self.value[e];
            }
            return Ok(visit(&self.scratch));
        }
        let e = self.branch[pos];
        let count = match &self.allowed {
            Some(lists) => lists[e].len(),
            None => self.search.target.size(self.object[e]),
        };
        for i in 0..count {
            let v = match &self.allowed {
                Some(lists) => lists[e][i],
                None => i,
            };
            if let Some(b) = self.search.budget {
                b.charge(1)?;
            }
            let mark = self.trail.len();
            if self.assign(e, v) && !self.search(pos + 1, visit)? {
                self.undo(mark);
                return Ok(false);
            }
            self.undo(mark);
        }
        Ok(true)
    }
}
