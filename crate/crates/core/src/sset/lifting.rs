use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::{generate_cell, CellKind, SimplexCategory};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{HomSearch, Presheaf, PshMap, SearchOrder};

fn same(a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A commuting square `p ∘ top = bottom ∘ i`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub i: PshMap,
    pub p: PshMap,
    pub top: PshMap,
    pub bottom: PshMap,
}

impl LiftingProblem {
    pub fn new(i: PshMap, p: PshMap, top: PshMap, bottom: PshMap) -> Result<Self> {
        if !same(i.source(), top.source())
            || !same(i.target(), bottom.source())
            || !same(top.target(), p.source())
            || !same(bottom.target(), p.target())
        {
            return Err(Error::Invalid(
                "lifting problem maps do not form a square".into(),
            ));
        }
        let cat = i.category().clone();
        for o in 0..cat.object_count() {
            for a in 0..i.source().size(o) {
                if p.apply(o, top.apply(o, a)) != bottom.apply(o, i.apply(o, a)) {
                    return Err(Error::NotCommuting(format!(
                        "{} in {}",
                        i.source().at(o).name(a),
                        cat.object_name(o)
                    )));
                }
            }
        }
        Ok(LiftingProblem { i, p, top, bottom })
    }

    /// Whether `d` satisfies `d ∘ i = top` and `p ∘ d = bottom`.
    pub fn is_filler(&self, d: &PshMap) -> bool {
        let objects = self.i.category().object_count();
        (0..objects).all(|o| {
            (0..self.i.source().size(o))
                .all(|a| d.apply(o, self.i.apply(o, a)) == self.top.apply(o, a))
                && (0..d.source().size(o))
                    .all(|b| self.p.apply(o, d.apply(o, b)) == self.bottom.apply(o, b))
        })
    }
}

/// A diagonal `d: B → Y` of a lifting problem.
#[derive(Clone, Debug)]
pub struct Filler {
    pub d: PshMap,
}

/// Search for a filler, trying the simplices of `B` in dimension order and
/// candidates in element order. `None` means no filler exists.
pub fn solve_lifting(problem: &LiftingProblem, budget: &Budget) -> Result<Option<Filler>> {
    let (b, y) = (problem.i.target().clone(), problem.p.source().clone());
    let objects = b.category().object_count();
    let fibers: Vec<Vec<Vec<usize>>> = (0..objects).map(|o| problem.p.fibers(o)).collect();
    let bottom = problem.bottom.clone();
    let mut search = HomSearch::new(&b, &y)
        .order(SearchOrder::Ascending)
        .budget(budget)
        .candidates(move |o, e| fibers[o][bottom.apply(o, e)].clone());
    for o in 0..objects {
        for a in 0..problem.i.source().size(o) {
            search = search.fix(o, problem.i.apply(o, a), problem.top.apply(o, a));
        }
    }
    match search.first()? {
        None => Ok(None),
        Some(components) => {
            let d = PshMap::new(b.clone(), y.clone(), components)?;
            assert!(problem.is_filler(&d), "search returned a non-filler");
            Ok(Some(Filler { d }))
        }
    }
}

/// An unfillable horn square: a horn map and a compatible `n`-simplex below.
#[derive(Clone, Debug)]
pub struct HornSquare {
    pub n: usize,
    pub k: usize,
    pub top: PshMap,
    pub bottom: usize,
}

impl HornSquare {
    pub fn to_json(&self, p: &PshMap) -> Value {
        let cat = self.top.category();
        let horn = self.top.source();
        let mut top = Map::new();
        for o in 0..cat.object_count() {
            let entries: Map<String, Value> = (0..horn.size(o))
                .map(|e| {
                    let v = self.top.target().at(o).name(self.top.apply(o, e));
                    (horn.at(o).name(e).to_string(), Value::String(v.into()))
                })
                .collect();
            top.insert(cat.object_name(o).to_string(), Value::Object(entries));
        }
        json!({
            "horn": format!("L{}[{}]", self.k, self.n),
            "top": top,
            "bottom": p.target().at(self.n).name(self.bottom),
        })
    }
}

#[derive(Clone, Debug)]
pub struct KanReport {
    pub dim: usize,
    pub fibration: bool,
    pub squares: u64,
    pub counterexample: Option<HornSquare>,
}

/// Check the lifting property against `Λ^k[n] ↪ Δ[n]` for all `n ≤ dim`.
///
/// By Yoneda a square is a horn map `h` together with an `n`-simplex `x`
/// of the base whose faces `d_i x`, `i ≠ k`, are `p(h(d_i))`, and a filler
/// is an `n`-simplex over `x` with faces `h(d_i)`. Squares are visited in
/// order of `n`, then `k`, then horn map, then `x`; the first unfillable
/// one is reported.
pub fn kan_check_upto(
    sc: &SimplexCategory,
    p: &PshMap,
    dim: usize,
    budget: &Budget,
) -> Result<KanReport> {
    if dim + 1 > sc.top() {
        return Err(Error::DimensionOutOfRange(format!(
            "checking up to dimension {dim} needs a truncation of at least {}",
            dim + 1
        )));
    }
    let (y, x) = (p.source().clone(), p.target().clone());
    let mut squares = 0u64;
    for n in 1..=dim {
        let fibers = p.fibers(n);
        for k in 0..=n {
            let cell = generate_cell(sc, CellKind::Horn(k), n)?;
            let horn = cell.space.clone();
            // The faces d_i with i ≠ k, as horn elements and as morphisms.
            let faces: Vec<(usize, usize)> = (0..=n)
                .filter(|&i| i != k)
                .map(|i| {
                    let d = sc.face(n, i);
                    let name = super::vertex_name(sc.images(d), n);
                    (
                        horn.at(n - 1)
                            .index_of(&name)
                            .expect("face lies in the horn"),
                        d,
                    )
                })
                .collect();
            let mut failure: Option<HornSquare> = None;
            let mut err = None;
            HomSearch::new(&horn, &y)
                .order(SearchOrder::LargestOrbitFirst)
                .budget(budget)
                .for_each(|top| {
                    for (xs, fiber) in fibers.iter().enumerate() {
                        let compatible = faces
                            .iter()
                            .all(|&(e, d)| x.restrict(d, xs) == p.apply(n - 1, top[n - 1][e]));
                        if !compatible {
                            continue;
                        }
                        squares += 1;
                        if let Err(e) = budget.charge(1) {
                            err = Some(e);
                            return false;
                        }
                        let filled = fiber.iter().any(|&ys| {
                            faces
                                .iter()
                                .all(|&(e, d)| y.restrict(d, ys) == top[n - 1][e])
                        });
                        if !filled {
                            let map = PshMap::new(horn.clone(), y.clone(), top.to_vec())
                                .expect("search yields natural maps");
                            failure = Some(HornSquare {
                                n,
                                k,
                                top: map,
                                bottom: xs,
                            });
                            return false;
                        }
                    }
                    true
                })?;
            if let Some(e) = err {
                return Err(e);
            }
            if failure.is_some() {
                return Ok(KanReport {
                    dim,
                    fibration: false,
                    squares,
                    counterexample: failure,
                });
            }
        }
    }
    Ok(KanReport {
        dim,
        fibration: true,
        squares,
        counterexample: None,
    })
}
