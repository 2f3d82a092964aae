//! One function per subcommand. Each returns a report; errors are budget or
//! validation failures.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use wkan_core::mtype::{bisimilar, is_coalgebra_morphism, minimize, truncate, TruncForest};
use wkan_core::pshw::{enumerate_psh_stage, stage_equation, NaturalityStatus, PshForest};
use wkan_core::quotient::{extensional_quotient, find_witnesses, quotient_by_pseudo_eqrel};
use wkan_core::reedy::{
    certify_absolute_pushout, gset_free_cofibration_check, minus_conditions, reedy_fib_cofib_check,
    AbsoluteSquare, Ambient, CheckSide, Variance,
};
use wkan_core::sset::{
    check_adjunction, dependent_product, kan_check_upto, solve_lifting, LiftingProblem,
};
use wkan_core::wtree::{enumerate_dep_stage, enumerate_stage, fold_memo};
use wkan_core::{Budget, Error, Forest, PshMap, ReedyStructure};

use crate::error::CliError;
use crate::report::Report;
use crate::workspace::Workspace;

type Result<T> = std::result::Result<T, CliError>;

/// `{object: {element: image}}` with names throughout.
pub fn map_json(m: &PshMap) -> Value {
    let cat = m.category();
    let (s, t) = (m.source(), m.target());
    let comps: Map<String, Value> = (0..cat.object_count())
        .map(|o| {
            let entries: Map<String, Value> = (0..s.size(o))
                .map(|e| {
                    (
                        s.at(o).name(e).to_string(),
                        json!(t.at(o).name(m.apply(o, e))),
                    )
                })
                .collect();
            (cat.object_name(o).to_string(), Value::Object(entries))
        })
        .collect();
    Value::Object(comps)
}

fn sizes_by_object(cat: &wkan_core::FinCategory, sizes: &[usize]) -> Value {
    let m: Map<String, Value> = sizes
        .iter()
        .enumerate()
        .map(|(o, &n)| (cat.object_name(o).to_string(), json!(n)))
        .collect();
    Value::Object(m)
}

pub fn w_stages(
    ws: &Workspace,
    sig: &str,
    max_stage: usize,
    trees: bool,
    budget: &Budget,
) -> Result<Report> {
    let mut forest = Forest::new(ws.signature(sig)?.clone());
    let st = enumerate_stage(&mut forest, max_stage, budget)?;
    let sizes = st.sizes();
    let mut result = json!({"sizes": sizes, "stabilized_at": st.stabilized_at});
    if trees {
        result["trees"] = json!(st.stages[max_stage]
            .iter()
            .map(|&w| forest.term(w))
            .collect::<Vec<_>>());
    }
    let listed: Vec<String> = sizes.iter().map(usize::to_string).collect();
    Ok(
        Report::positive(format!("stage sizes {}", listed.join(", ")), result)
            .stat("trees", forest.len()),
    )
}

pub fn w_fold(ws: &Workspace, algebra: &str, max_stage: usize, budget: &Budget) -> Result<Report> {
    let entry = ws.algebra(algebra)?;
    let mut forest = Forest::new(ws.signature(&entry.signature)?.clone());
    let st = enumerate_stage(&mut forest, max_stage, budget)?;
    let mut memo = Default::default();
    let carrier = entry.algebra.carrier();
    let mut values = BTreeMap::new();
    for &w in &st.stages[max_stage] {
        let x = fold_memo(&forest, &entry.algebra, w, &mut memo);
        values.insert(forest.term(w), carrier.name(x).to_string());
    }
    let n = values.len();
    Ok(Report::positive(
        format!("{n} trees folded into {algebra}"),
        json!({ "values": values }),
    ))
}

pub fn psh_w(
    ws: &Workspace,
    map: &str,
    max_stage: usize,
    trees: bool,
    budget: &Budget,
) -> Result<Report> {
    let f = ws.map(map)?;
    let cat = f.category().clone();
    let mut pf = PshForest::new(f)?;
    let st = enumerate_psh_stage(&mut pf, max_stage, budget)?;
    for k in 0..max_stage {
        stage_equation(&pf, &st, k, budget)?;
    }
    let last = &st.stages[max_stage];
    let mut unnatural = Vec::new();
    for ws_at in &last.trees {
        for &w in ws_at {
            if pf.naturality_status(w) != NaturalityStatus::HereditarilyNatural {
                unnatural.push(pf.term(w));
            }
        }
    }
    let stages: Vec<Value> = st
        .stages
        .iter()
        .map(|s| sizes_by_object(&cat, &s.sizes()))
        .collect();
    let mut result = json!({"stages": stages, "stabilized_at": st.stabilized_at});
    if trees {
        let by_obj: Map<String, Value> = last
            .trees
            .iter()
            .enumerate()
            .map(|(o, ts)| {
                (
                    cat.object_name(o).to_string(),
                    json!(ts.iter().map(|&w| pf.to_json(w)).collect::<Vec<_>>()),
                )
            })
            .collect();
        result["trees"] = Value::Object(by_obj);
    }
    let summary = format!(
        "stage {max_stage}: {}",
        sizes_by_object(&cat, &last.sizes())
    );
    if let Some(w) = unnatural.first() {
        return Ok(Report::negative(
            summary,
            result,
            json!({"tree": w, "status": "not hereditarily natural"}),
        ));
    }
    Ok(Report::positive(summary, result).stat("stage_equations", max_stage))
}

pub fn dep_w(ws: &Workspace, sig: &str, max_stage: usize, budget: &Budget) -> Result<Report> {
    let d = ws.dep_signature(sig)?;
    let mut forest = Forest::new(d.base().clone());
    let st = enumerate_dep_stage(&mut forest, d, max_stage, budget)?;
    let sorts = d.sorts();
    let stages: Vec<Value> = st
        .stages
        .iter()
        .map(|per_sort| {
            let m: Map<String, Value> = per_sort
                .iter()
                .enumerate()
                .map(|(c, ts)| (sorts.name(c).to_string(), json!(ts.len())))
                .collect();
            Value::Object(m)
        })
        .collect();
    let summary = format!("stage {max_stage}: {}", stages[max_stage]);
    Ok(Report::positive(
        summary,
        json!({"stages": stages, "stabilized_at": st.stabilized_at}),
    ))
}

fn state(c: &wkan_core::mtype::Coalgebra, name: &str) -> Result<usize> {
    c.states()
        .index_of(name)
        .ok_or_else(|| CliError::unknown("state", name))
}

pub fn m_trunc(ws: &Workspace, coalgebra: &str, x: &str, depth: usize) -> Result<Report> {
    let entry = ws.coalgebra(coalgebra)?;
    let sig = ws.signature(&entry.signature)?;
    let mut tf = TruncForest::new();
    let t = truncate(
        &entry.coalgebra,
        state(&entry.coalgebra, x)?,
        depth,
        &mut tf,
    );
    let term = tf.term(sig, t);
    Ok(Report::positive(
        format!("{x} to depth {depth}: {term}"),
        json!({ "term": term }),
    ))
}

pub fn m_bisim(
    ws: &Workspace,
    coalgebra: &str,
    x: &str,
    other: Option<&str>,
    y: &str,
) -> Result<Report> {
    let left = ws.coalgebra(coalgebra)?;
    let right = ws.coalgebra(other.unwrap_or(coalgebra))?;
    let (c1, c2) = (&left.coalgebra, &right.coalgebra);
    let (x1, x2) = (state(c1, x)?, state(c2, y)?);
    if bisimilar(c1, x1, c2, x2) {
        return Ok(Report::positive(
            format!("{x} and {y} are bisimilar"),
            json!({"bisimilar": true}),
        ));
    }
    // Distinct behaviours already differ at a depth of at most |S1|·|S2|.
    let sig = ws.signature(&left.signature)?;
    let mut tf = TruncForest::new();
    let bound = c1.len() * c2.len() + 1;
    let depth = (0..=bound)
        .find(|&n| truncate(c1, x1, n, &mut tf) != truncate(c2, x2, n, &mut tf))
        .expect("non-bisimilar states have distinct truncations");
    let (t1, t2) = (
        truncate(c1, x1, depth, &mut tf),
        truncate(c2, x2, depth, &mut tf),
    );
    let cx = json!({"depth": depth, "left": tf.term(sig, t1), "right": tf.term(sig, t2)});
    Ok(Report::negative(
        format!("{x} and {y} differ at depth {depth}"),
        json!({"bisimilar": false}),
        cx,
    ))
}

pub fn m_minimize(ws: &Workspace, coalgebra: &str) -> Result<Report> {
    let entry = ws.coalgebra(coalgebra)?;
    let c = &entry.coalgebra;
    let (m, q) = minimize(c);
    let classes: Vec<Vec<&str>> = q
        .fibers()
        .iter()
        .map(|xs| xs.iter().map(|&x| c.states().name(x)).collect())
        .collect();
    let morphism = is_coalgebra_morphism(c, &m, &q);
    let summary = format!("{} states, {} classes", c.len(), m.len());
    let result = json!({"classes": classes, "coalgebra": m.to_json()});
    if !morphism {
        return Ok(Report::negative(
            summary,
            result,
            json!({"detail": "the quotient map is not a coalgebra morphism"}),
        ));
    }
    Ok(Report::positive(summary, result))
}

pub fn quotient(ws: &Workspace, left: &str, right: &str, budget: &Budget) -> Result<Report> {
    let (s, t) = (ws.map(left)?.clone(), ws.map(right)?.clone());
    let cat = s.category().clone();
    let rel = match find_witnesses(s, t, budget) {
        Ok(rel) => rel,
        Err(Error::ConditionFailed { condition, witness }) => {
            let cx = json!({"condition": condition, "detail": witness});
            return Ok(Report::negative(
                format!("({left}, {right}) is not a pseudo-equivalence relation"),
                Value::Null,
                cx,
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let (classes, q) = quotient_by_pseudo_eqrel(&rel)?;
    let y = q.source();
    let by_obj: Map<String, Value> = classes
        .iter()
        .enumerate()
        .map(|(o, c)| {
            let members: Vec<Vec<&str>> = c
                .members()
                .iter()
                .map(|ms| ms.iter().map(|&e| y.at(o).name(e)).collect())
                .collect();
            (cat.object_name(o).to_string(), json!(members))
        })
        .collect();
    let counts: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let summary = format!("classes per object {}", sizes_by_object(&cat, &counts));
    Ok(Report::positive(
        summary,
        json!({"classes": by_obj, "quotient": map_json(&q)}),
    ))
}

pub fn aczel(ws: &Workspace, sig: &str, max_stage: usize, budget: &Budget) -> Result<Report> {
    let mut forest = Forest::new(ws.signature(sig)?.clone());
    let q = extensional_quotient(&mut forest, max_stage, budget)?;
    let summary = format!("{} trees, {} classes", q.trees.len(), q.classes.len());
    Ok(Report::positive(summary, q.to_json(&forest)))
}

pub fn kan_check(ws: &Workspace, map: &str, dim: usize, budget: &Budget) -> Result<Report> {
    let p = ws.map(map)?;
    let sc = ws.simplex_of(p).ok_or_else(|| CliError::BadArgument {
        flag: "map",
        detail: format!("{map} does not live over a category declared with `simplex`"),
    })?;
    let rep = kan_check_upto(sc, p, dim, budget)?;
    let result = json!({"fibration": rep.fibration, "dim": rep.dim});
    let report = match &rep.counterexample {
        None => Report::positive(
            format!("{map} has fillers for all horns up to dimension {dim}"),
            result,
        ),
        Some(cx) => Report::negative(
            format!("{map} fails at Λ{}[{}]", cx.k, cx.n),
            result,
            cx.to_json(p),
        ),
    };
    Ok(report.stat("squares", rep.squares))
}

pub fn lift(
    ws: &Workspace,
    i: &str,
    p: &str,
    top: &str,
    bottom: &str,
    budget: &Budget,
) -> Result<Report> {
    let (im, pm, tm, bm) = (ws.map(i)?, ws.map(p)?, ws.map(top)?, ws.map(bottom)?);
    let sq = LiftingProblem::new(im.clone(), pm.clone(), tm.clone(), bm.clone())?;
    match solve_lifting(&sq, budget)? {
        Some(f) => Ok(Report::positive(
            "the square has a diagonal filler",
            json!({"filler": map_json(&f.d)}),
        )),
        None => {
            let cx = json!({
                "i": map_json(im),
                "p": map_json(pm),
                "top": map_json(tm),
                "bottom": map_json(bm),
            });
            Ok(Report::negative(
                "the square has no diagonal filler",
                json!({"filler": null}),
                cx,
            ))
        }
    }
}

pub fn pi(
    ws: &Workspace,
    map: &str,
    family: &str,
    test: Option<&str>,
    budget: &Budget,
) -> Result<Report> {
    let (f, z) = (ws.map(map)?, ws.map(family)?);
    let dp = dependent_product(f, z, budget)?;
    let cat = f.category().clone();
    let sizes: Vec<usize> = (0..cat.object_count())
        .map(|o| dp.presheaf.size(o))
        .collect();
    let mut result = json!({"sizes": sizes_by_object(&cat, &sizes), "map": map_json(&dp.map)});
    let summary = format!("Π sizes {}", sizes_by_object(&cat, &sizes));
    let Some(y) = test else {
        return Ok(Report::positive(summary, result));
    };
    let adj = check_adjunction(f, z, ws.map(y)?, budget)?;
    result["adjunction"] =
        json!({"over_a": adj.over_a, "over_b": adj.over_b, "bijective": adj.bijective});
    if adj.bijective {
        Ok(Report::positive(summary, result))
    } else {
        let cx = json!({"over_a": adj.over_a, "over_b": adj.over_b});
        Ok(Report::negative(
            format!("{summary}; transposition is not bijective"),
            result,
            cx,
        ))
    }
}

pub fn reedy_validate(ws: &Workspace, reedy: &str) -> Result<Report> {
    let r = ws.reedy_structure(reedy)?;
    let cat = r.category();
    let count =
        |pred: &dyn Fn(usize) -> bool| (0..cat.morphism_count()).filter(|&m| pred(m)).count();
    let plus = count(&|m| r.is_plus(m));
    let minus = count(&|m| r.is_minus(m));
    let kind = if r.is_generalised() {
        "generalised Reedy"
    } else {
        "Reedy"
    };
    Ok(Report::positive(format!("{reedy} is {kind}"), r.to_json())
        .stat("morphisms", cat.morphism_count())
        .stat("plus", plus)
        .stat("minus", minus))
}

pub fn reedy_check(
    ws: &Workspace,
    reedy: &str,
    map: &str,
    side: CheckSide,
    variance: Variance,
    budget: &Budget,
) -> Result<Report> {
    let r = ws.reedy_structure(reedy)?;
    let m = ws.map(map)?;
    let rep = reedy_fib_cofib_check(r, Ambient::FiniteSets(m), side, variance, budget)?;
    let verdicts: Vec<Value> = rep
        .verdicts
        .iter()
        .map(|v| json!({"object": v.object, "holds": v.holds, "witness": v.witness}))
        .collect();
    let what = match side {
        CheckSide::Fibration => "fibration",
        CheckSide::Cofibration => "cofibration",
    };
    let result = json!({ "verdicts": verdicts });
    match rep.verdicts.iter().find(|v| !v.holds) {
        None => Ok(Report::positive(format!("{map} is a Reedy {what}"), result)),
        Some(v) => {
            let cx = json!({"object": v.object, "witness": v.witness});
            Ok(Report::negative(
                format!("{map} is not a Reedy {what}: fails at {}", v.object),
                result,
                cx,
            ))
        }
    }
}

fn square_from_names(r: &ReedyStructure, spec: &str) -> Result<AbsoluteSquare> {
    let names: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [p, q, f, g, a, b] = names.as_slice() else {
        return Err(CliError::BadArgument {
            flag: "square",
            detail: "expected six morphism names p,q,f,g,a,b".into(),
        });
    };
    let m = |n: &str| r.category().morphism_index(n).map_err(CliError::from);
    Ok(AbsoluteSquare {
        p: m(p)?,
        q: m(q)?,
        f: m(f)?,
        g: m(g)?,
        a: m(a)?,
        b: m(b)?,
    })
}

pub fn abs_pushout(ws: &Workspace, reedy: &str, square: Option<&str>) -> Result<Report> {
    let r = ws.reedy_structure(reedy)?;
    let cat = r.category();
    let squares = match square {
        Some(spec) => vec![square_from_names(r, spec)?],
        None => {
            let rep = minus_conditions(r);
            if let Some(m) = &rep.split_failure {
                return Ok(Report::negative(
                    format!("{m} has no section"),
                    Value::Null,
                    json!({"unsplit": m}),
                ));
            }
            if let Some((p, q)) = &rep.square_failure {
                let cx = json!({"span": [p, q]});
                return Ok(Report::negative(
                    format!("the span ({p}, {q}) has no completion"),
                    Value::Null,
                    cx,
                ));
            }
            rep.squares
        }
    };
    let mut certified = Vec::new();
    for sq in &squares {
        match certify_absolute_pushout(r, sq) {
            Ok(cert) => certified.push(json!({"square": sq.describe(cat), "steps": cert.steps, "objects_checked": cert.objects_checked})),
            Err(e @ (Error::SectionIncompatible(_) | Error::HomPushoutFailed(_) | Error::NotCommuting(_))) => {
                let cx = json!({"square": sq.describe(cat), "detail": e.to_string()});
                return Ok(Report::negative("a square is not an absolute pushout", json!({"certified": certified}), cx));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let n = certified.len();
    Ok(Report::positive(
        format!("{n} absolute pushout squares certified"),
        json!({ "certified": certified }),
    ))
}

pub fn gset_cofib(ws: &Workspace, gmap: &str) -> Result<Report> {
    let g = ws.gmap(gmap)?;
    let (x, y) = (ws.gset(&g.source)?, ws.gset(&g.target)?);
    let rep = gset_free_cofibration_check(x, y, &g.map)?;
    let result = json!({"cofibration": rep.cofibration});
    match &rep.witness {
        None => Ok(Report::positive(
            format!("{gmap} acts freely off its image"),
            result,
        )),
        Some((elem, stab)) => {
            let cx = json!({"element": elem, "stabilizer": stab});
            Ok(Report::negative(
                format!("{elem} has a stabilizer of order {stab}"),
                result,
                cx,
            ))
        }
    }
}
