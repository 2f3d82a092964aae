use super::ReedyStructure;
use crate::error::{Error, Result};
use crate::fincat::{graph_colimit, FinCategory};

/// A square `f p = g q` of `R⁻` maps out of `r`, with sections `a` of `p`
/// and `b` of `g` satisfying `q a = b f`.
///
/// ```text
///   r --q--> t
///   |        |
///   p        g
///   v        v
///   s --f--> u
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbsoluteSquare {
    pub p: usize,
    pub q: usize,
    pub f: usize,
    pub g: usize,
    pub a: usize,
    pub b: usize,
}

impl AbsoluteSquare {
    pub fn describe(&self, cat: &FinCategory) -> String {
        let n = |m: usize| cat.morphism_name(m);
        format!(
            "p={} q={} f={} g={} a={} b={}",
            n(self.p),
            n(self.q),
            n(self.f),
            n(self.g),
            n(self.a),
            n(self.b)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinusReport {
    /// `None` when every `R⁻` map splits, else the first that does not.
    pub split_failure: Option<String>,
    /// Section chosen for each `R⁻` map, in morphism order.
    pub sections: Vec<(usize, usize)>,
    /// `None` when every span of `R⁻` maps completes, else the first that
    /// does not.
    pub square_failure: Option<(String, String)>,
    pub squares: Vec<AbsoluteSquare>,
}

impl MinusReport {
    pub fn holds(&self) -> bool {
        self.split_failure.is_none() && self.square_failure.is_none()
    }
}

fn sections_of(cat: &FinCategory, m: usize) -> impl Iterator<Item = usize> + '_ {
    let (s, t) = (cat.src(m), cat.dst(m));
    cat.hom(t, s)
        .iter()
        .copied()
        .filter(move |&a| cat.comp(m, a) == cat.identity(t))
}

/// Search for sections of `R⁻` maps and for completions of spans of them.
///
/// For every `s ←p− r −q→ t` in `R⁻` the search looks for `f`, `g` in
/// `R⁻` with `f p = g q`, a section `a` of `p` and a section `b` of `g`
/// with `q a = b f`, trying apex objects, maps and sections in index order.
pub fn minus_conditions(r: &ReedyStructure) -> MinusReport {
    let cat = r.category();
    let minus: Vec<usize> = r.minus_maps().collect();
    let mut sections = Vec::new();
    let mut split_failure = None;
    for &m in &minus {
        match sections_of(cat, m).next() {
            Some(a) => sections.push((m, a)),
            None if split_failure.is_none() => {
                split_failure = Some(cat.morphism_name(m).to_string())
            }
            None => {}
        }
    }
    let mut squares = Vec::new();
    let mut square_failure = None;
    for &p in &minus {
        for &q in &minus {
            if cat.src(p) != cat.src(q) {
                continue;
            }
            match complete_span(r, p, q) {
                Some(sq) => squares.push(sq),
                None => {
                    square_failure = Some((
                        cat.morphism_name(p).to_string(),
                        cat.morphism_name(q).to_string(),
                    ));
                    break;
                }
            }
        }
        if square_failure.is_some() {
            break;
        }
    }
    MinusReport {
        split_failure,
        sections,
        square_failure,
        squares,
    }
}

fn complete_span(r: &ReedyStructure, p: usize, q: usize) -> Option<AbsoluteSquare> {
    let cat = r.category();
    let (s, t) = (cat.dst(p), cat.dst(q));
    for u in 0..cat.object_count() {
        for &f in cat.hom(s, u).iter().filter(|&&f| r.is_minus(f)) {
            for &g in cat.hom(t, u).iter().filter(|&&g| r.is_minus(g)) {
                if cat.comp(f, p) != cat.comp(g, q) {
                    continue;
                }
                for a in sections_of(cat, p) {
                    for b in sections_of(cat, g) {
                        if cat.comp(q, a) == cat.comp(b, f) {
                            return Some(AbsoluteSquare { p, q, f, g, a, b });
                        }
                    }
                }
            }
        }
    }
    None
}

/// The rewriting chains proving the square is a pushout, and the objects
/// whose co-representable functor was checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutCertificate {
    pub steps: Vec<String>,
    pub objects_checked: usize,
}

/// A word in the generators, composed right to left as written.
type Word = Vec<&'static str>;

fn rewrite(word: &Word, lhs: &[&'static str], rhs: &[&'static str]) -> Option<Word> {
    let pos = word.windows(lhs.len()).position(|w| w == lhs)?;
    let mut out = word[..pos].to_vec();
    out.extend_from_slice(rhs);
    out.extend_from_slice(&word[pos + lhs.len()..]);
    Some(out)
}

/// Certify that the square is an absolute pushout.
///
/// For a cocone `φ: s → x`, `ψ: t → x` with `φ p = ψ q`, the mediating map
/// is `χ = ψ b`. The certificate replays the two equational chains
/// `χf = φ` and `χgq = ψq` by rewriting, checking each structural rule in
/// the category, and then verifies that every co-representable
/// `Hom(x, −)` sends the square to a pushout of sets.
pub fn certify_absolute_pushout(
    r: &ReedyStructure,
    sq: &AbsoluteSquare,
) -> Result<PushoutCertificate> {
    let cat = r.category();
    let AbsoluteSquare { p, q, f, g, a, b } = *sq;
    let shaped = cat.src(p) == cat.src(q)
        && cat.dst(p) == cat.src(f)
        && cat.dst(q) == cat.src(g)
        && cat.dst(f) == cat.dst(g)
        && cat.src(a) == cat.dst(p)
        && cat.dst(a) == cat.src(p)
        && cat.src(b) == cat.dst(g)
        && cat.dst(b) == cat.dst(q);
    if !shaped {
        return Err(Error::Invalid(format!(
            "ill-shaped square {}",
            sq.describe(cat)
        )));
    }
    if ![p, q, f, g].iter().all(|&m| r.is_minus(m)) {
        return Err(Error::Invalid("the square's edges must lie in R-".into()));
    }
    if cat.comp(f, p) != cat.comp(g, q) {
        return Err(Error::NotCommuting(sq.describe(cat)));
    }
    if cat.comp(p, a) != cat.identity(cat.dst(p)) {
        return Err(Error::SectionIncompatible(format!(
            "{} is not a section of {}",
            cat.morphism_name(a),
            cat.morphism_name(p)
        )));
    }
    if cat.comp(g, b) != cat.identity(cat.dst(g)) {
        return Err(Error::SectionIncompatible(format!(
            "{} is not a section of {}",
            cat.morphism_name(b),
            cat.morphism_name(g)
        )));
    }
    if cat.comp(q, a) != cat.comp(b, f) {
        return Err(Error::SectionIncompatible(format!(
            "q a = {} but b f = {}",
            cat.morphism_name(cat.comp(q, a)),
            cat.morphism_name(cat.comp(b, f))
        )));
    }
    // Rules, written left to right as composites read right to left.
    // Structural ones are checked above; the cocone rule is the hypothesis.
    let rules: [(&str, &[&str], &[&str]); 5] = [
        ("definition of chi", &["chi"], &["psi", "b"]),
        ("b f = q a", &["b", "f"], &["q", "a"]),
        ("psi q = phi p", &["psi", "q"], &["phi", "p"]),
        ("p a = 1", &["p", "a"], &[]),
        ("g q = f p", &["g", "q"], &["f", "p"]),
    ];
    let chains: [(Word, &[usize], Word); 2] = [
        (vec!["chi", "f"], &[0, 1, 2, 3], vec!["phi"]),
        (vec!["chi", "g", "q"], &[0, 4, 1, 2, 3], vec!["phi", "p"]),
    ];
    let mut steps = Vec::new();
    for (start, order, goal) in chains {
        let mut word = start;
        for &k in order {
            let (name, lhs, rhs) = rules[k];
            let next = rewrite(&word, lhs, rhs)
                .ok_or_else(|| Error::Invalid(format!("rule `{name}` does not apply")))?;
            steps.push(format!(
                "{} = {}   [{name}]",
                word.join(" "),
                next.join(" ")
            ));
            word = next;
        }
        if word != goal {
            return Err(Error::Invalid(format!(
                "chain ended at {} instead of {}",
                word.join(" "),
                goal.join(" ")
            )));
        }
    }
    // φ p is ψ q by hypothesis, closing the second chain.
    steps.push("chi g q = psi q   [psi q = phi p]".into());
    let (rr, s, t, u) = (cat.src(p), cat.dst(p), cat.dst(q), cat.dst(f));
    for x in 0..cat.object_count() {
        let hom = |o: usize| cat.hom(x, o);
        let position = |o: usize, m: usize| {
            hom(o)
                .iter()
                .position(|&k| k == m)
                .expect("composite stays in the hom-set")
        };
        let post = |via: usize, from: usize, to: usize| -> Vec<usize> {
            hom(from)
                .iter()
                .map(|&m| position(to, cat.comp(via, m)))
                .collect()
        };
        let (hp, hq) = (post(p, rr, s), post(q, rr, t));
        let sizes = [hom(rr).len(), hom(s).len(), hom(t).len()];
        let mut classes = graph_colimit(&sizes, &[(0, 1, &hp), (0, 2, &hq)]);
        let _ = classes.representatives(|node, e| format!("{node}:{e}"));
        let (hf, hg) = (post(f, s, u), post(g, t, u));
        let count = classes.count();
        let mut map = vec![None; count];
        let mut ok = true;
        for (node, table) in [(1, &hf), (2, &hg)] {
            for (e, &v) in table.iter().enumerate() {
                let c = classes.class(node, e);
                match map[c] {
                    None => map[c] = Some(v),
                    Some(w) => ok &= w == v,
                }
            }
        }
        let mut image: Vec<usize> = map.iter().flatten().copied().collect();
        let mapped = image.len();
        image.sort_unstable();
        image.dedup();
        if !ok || mapped != count || image.len() != count || count != hom(u).len() {
            return Err(Error::HomPushoutFailed(cat.object_name(x).to_string()));
        }
    }
    Ok(PushoutCertificate {
        steps,
        objects_checked: cat.object_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::CategoryBuilder;
    use std::sync::Arc;

    #[test]
    fn delta_satisfies_both_conditions() {
        let r = ReedyStructure::delta(2).unwrap();
        let report = minus_conditions(&r);
        assert!(report.holds(), "{report:?}");
        for sq in &report.squares {
            certify_absolute_pushout(&r, sq).unwrap();
        }
    }

    #[test]
    fn naturals_hold_vacuously() {
        let r = ReedyStructure::naturals(3).unwrap();
        let report = minus_conditions(&r);
        assert!(report.holds());
        assert_eq!(report.sections.len(), 4);
    }

    #[test]
    fn unsplit_epi_fails_the_first_condition() {
        // Two objects and a single map e: A → B, placed in R⁻.
        let cat = Arc::new(
            CategoryBuilder::new()
                .objects(["A", "B"])
                .morphism("e", "A", "B")
                .build()
                .unwrap(),
        );
        let e = cat.morphism_index("e").unwrap();
        let ids: Vec<usize> = (0..2).map(|o| cat.identity(o)).collect();
        let mut minus = ids.clone();
        minus.push(e);
        let r = super::super::attach_reedy(cat, vec![1, 0], &ids, &minus, false).unwrap();
        assert_eq!(minus_conditions(&r).split_failure.as_deref(), Some("e"));
    }

    #[test]
    fn incompatible_sections_are_rejected() {
        let r = ReedyStructure::delta(2).unwrap();
        let cat = r.category();
        let m = |s: &str| cat.morphism_index(s).unwrap();
        // σ⁰, σ¹: [2] → [1] completed by the unique map [1] → [0].
        let (s0, s1, t) = (m("[0,0,1]>1"), m("[0,1,1]>1"), m("[0,0]>0"));
        let good = AbsoluteSquare {
            p: s0,
            q: s1,
            f: t,
            g: t,
            a: m("[1,2]>2"),
            b: m("[1]>1"),
        };
        certify_absolute_pushout(&r, &good).unwrap();
        let bad = AbsoluteSquare {
            b: m("[0]>1"),
            ..good
        };
        assert!(matches!(
            certify_absolute_pushout(&r, &bad),
            Err(Error::SectionIncompatible(_))
        ));
    }
}
