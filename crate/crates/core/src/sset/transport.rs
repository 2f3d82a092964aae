use std::collections::HashMap;

use super::lifting::{solve_lifting, Filler, LiftingProblem};
use super::SimplexCategory;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{pullback, PshMap};

/// A triangle `f ∘ p = g` with `p: Y → X` pointwise surjective, and a horn
/// square against `f`. `vertex` picks the horn's `k`-th vertex.
#[derive(Clone, Debug)]
pub struct EpiTriangle {
    pub p: PshMap,
    pub g: PshMap,
    pub vertex: PshMap,
    pub square: LiftingProblem,
}

/// An equivalence relation `R ⊆ Y × Y` given as the kernel pair of
/// `q: Y → Y/R`, and a horn square against `q`.
#[derive(Clone, Debug)]
pub struct EqRelTransport {
    pub pi1: PshMap,
    pub pi2: PshMap,
    pub square: LiftingProblem,
    pairs: Vec<HashMap<(usize, usize), usize>>,
}

impl EqRelTransport {
    /// Build `R` as the kernel pair of the square's right-hand map.
    pub fn kernel(square: LiftingProblem) -> Result<Self> {
        let r = pullback(&square.p, &square.p)?;
        let pairs = r
            .pairs
            .iter()
            .map(|ps| ps.iter().enumerate().map(|(i, &pr)| (pr, i)).collect())
            .collect();
        Ok(EqRelTransport {
            pi1: r.left,
            pi2: r.right,
            square,
            pairs,
        })
    }
}

#[derive(Clone, Debug)]
pub enum TransportData {
    EpiTriangle(EpiTriangle),
    EqRel(EqRelTransport),
}

impl TransportData {
    pub fn square(&self) -> &LiftingProblem {
        match self {
            TransportData::EpiTriangle(t) => &t.square,
            TransportData::EqRel(t) => &t.square,
        }
    }
}

fn least_preimage(p: &PshMap, o: usize, x: usize) -> Option<usize> {
    (0..p.source().size(o)).find(|&y| p.apply(o, y) == x)
}

/// Produce a filler for the horn square by the two-step constructions that
/// show fibrations descend along epis and along quotients by equivalence
/// relations. The intermediate lifts go through `solve_lifting`; a missing
/// one is reported as the stage that failed.
pub fn filler_transport(
    sc: &SimplexCategory,
    data: &TransportData,
    budget: &Budget,
) -> Result<Filler> {
    let square = data.square();
    let d = match data {
        TransportData::EpiTriangle(t) => {
            // γ: Δ[0] → Y over α(k).
            let vk = square.top.apply(0, t.vertex.apply(0, 0));
            let y0 =
                least_preimage(&t.p, 0, vk).ok_or(Error::TransportFailed { stage: "gamma" })?;
            let gamma = sc.yoneda(t.p.source(), 0, y0)?;
            // δ: Λ → Y with δk = γ and pδ = α.
            let first =
                LiftingProblem::new(t.vertex.clone(), t.p.clone(), gamma, square.top.clone())?;
            let delta =
                solve_lifting(&first, budget)?.ok_or(Error::TransportFailed { stage: "delta" })?;
            // ε: Δ[n] → Y with εi = δ and gε = β.
            let second = LiftingProblem::new(
                square.i.clone(),
                t.g.clone(),
                delta.d,
                square.bottom.clone(),
            )?;
            let eps = solve_lifting(&second, budget)?
                .ok_or(Error::TransportFailed { stage: "epsilon" })?;
            t.p.after(&eps.d)?
        }
        TransportData::EqRel(t) => {
            let b = square.i.target();
            // Δ[n] has n + 1 vertices.
            let n = b
                .size(0)
                .checked_sub(1)
                .ok_or(Error::TransportFailed { stage: "gamma" })?;
            let top_simplex = b
                .at(n)
                .index_of(&super::vertex_name(&(0..=n).collect::<Vec<_>>(), n))
                .ok_or(Error::TransportFailed { stage: "gamma" })?;
            // γ: Δ[n] → Y over β.
            let yb = least_preimage(&square.p, n, square.bottom.apply(n, top_simplex))
                .ok_or(Error::TransportFailed { stage: "gamma" })?;
            let gamma = sc.yoneda(square.p.source(), n, yb)?;
            let gamma_i = gamma.after(&square.i)?;
            // (α, γi): Λ → R.
            let horn = square.i.source();
            let comps = (0..=sc.top())
                .map(|o| {
                    (0..horn.size(o))
                        .map(|e| {
                            t.pairs[o]
                                .get(&(square.top.apply(o, e), gamma_i.apply(o, e)))
                                .copied()
                                .ok_or(Error::TransportFailed { stage: "pair" })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let pair = PshMap::new(horn.clone(), t.pi1.source().clone(), comps)?;
            // δ: Δ[n] → R with δi = (α, γi) and π₂δ = γ.
            let lift = LiftingProblem::new(square.i.clone(), t.pi2.clone(), pair, gamma)?;
            let delta =
                solve_lifting(&lift, budget)?.ok_or(Error::TransportFailed { stage: "delta" })?;
            t.pi1.after(&delta.d)?
        }
    };
    if !square.is_filler(&d) {
        return Err(Error::TransportFailed { stage: "verify" });
    }
    Ok(Filler { d })
}
