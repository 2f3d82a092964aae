use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinFn, FinSet};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    elements: FinSet,
    table: Vec<Vec<usize>>,
    unit: usize,
}

impl Group {
    pub fn new(elements: FinSet, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0
            || table.len() != n
            || table
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&v| v >= n))
        {
            return Err(Error::Invalid(
                "multiplication table must be square over the elements".into(),
            ));
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(Error::Invalid(format!(
                            "multiplication is not associative at ({}, {}, {})",
                            elements.name(g),
                            elements.name(h),
                            elements.name(k)
                        )));
                    }
                }
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::Invalid("no unit element".into()))?;
        if let Some(g) = (0..n).find(|&g| !(0..n).any(|h| table[g][h] == unit)) {
            return Err(Error::Invalid(format!(
                "{} has no inverse",
                elements.name(g)
            )));
        }
        Ok(Group {
            elements,
            table,
            unit,
        })
    }

    /// `ℤ/n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let table = (0..n)
            .map(|g| (0..n).map(|h| (g + h) % n).collect())
            .collect();
        Group::new(FinSet::numbered("g", n), table)
    }

    /// The automorphism group of an object, composed as `g h = g ∘ h`.
    pub fn automorphisms(cat: &FinCategory, o: usize) -> Result<Self> {
        let autos: Vec<usize> = cat
            .hom(o, o)
            .iter()
            .copied()
            .filter(|&m| cat.is_iso(m))
            .collect();
        let pos = |m: usize| {
            autos
                .iter()
                .position(|&k| k == m)
                .expect("isomorphisms compose to isomorphisms")
        };
        let table = autos
            .iter()
            .map(|&g| autos.iter().map(|&h| pos(cat.comp(g, h))).collect())
            .collect();
        Group::new(
            FinSet::new(autos.iter().map(|&m| cat.morphism_name(m)))?,
            table,
        )
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &FinSet {
        &self.elements
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }
}

/// A finite set with a right action `x · g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    pub group: Group,
    pub carrier: FinSet,
    /// `action[x][g] = x · g`.
    action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: Group, carrier: FinSet, action: Vec<Vec<usize>>) -> Result<Self> {
        let (n, k) = (carrier.len(), group.len());
        if action.len() != n
            || action
                .iter()
                .any(|row| row.len() != k || row.iter().any(|&v| v >= n))
        {
            return Err(Error::Invalid(
                "action table must cover every element and group element".into(),
            ));
        }
        for x in 0..n {
            if action[x][group.unit()] != x {
                return Err(Error::Invalid(format!(
                    "unit does not fix {}",
                    carrier.name(x)
                )));
            }
            for g in 0..k {
                for h in 0..k {
                    if action[action[x][g]][h] != action[x][group.mul(g, h)] {
                        return Err(Error::Invalid(format!(
                            "(x.g).h differs from x.(gh) at {}",
                            carrier.name(x)
                        )));
                    }
                }
            }
        }
        Ok(GSet {
            group,
            carrier,
            action,
        })
    }

    /// The group acting on itself by right multiplication.
    pub fn regular(group: &Group) -> Self {
        let action = (0..group.len())
            .map(|x| (0..group.len()).map(|g| group.mul(x, g)).collect())
            .collect();
        GSet {
            group: group.clone(),
            carrier: group.elements().clone(),
            action,
        }
    }

    /// `n` points fixed by every group element.
    pub fn trivial(group: &Group, carrier: FinSet) -> Self {
        let action = (0..carrier.len()).map(|x| vec![x; group.len()]).collect();
        GSet {
            group: group.clone(),
            carrier,
            action,
        }
    }

    pub fn act(&self, x: usize, g: usize) -> usize {
        self.action[x][g]
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.len())
            .filter(|&g| self.action[x][g] == x)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCofibration {
    pub cofibration: bool,
    /// An element outside the image with a nontrivial stabilizer.
    pub witness: Option<(String, usize)>,
}

/// Whether an equivariant injection `X → Y` acts freely off its image.
pub fn gset_free_cofibration_check(x: &GSet, y: &GSet, map: &FinFn) -> Result<FreeCofibration> {
    if x.group != y.group {
        return Err(Error::Invalid("G-sets over different groups".into()));
    }
    if map.domain() != x.carrier.len() || map.codomain() != y.carrier.len() {
        return Err(Error::Invalid("map does not match the carriers".into()));
    }
    for e in 0..x.carrier.len() {
        for g in 0..x.group.len() {
            if map.apply(x.act(e, g)) != y.act(map.apply(e), g) {
                return Err(Error::NotEquivariant(format!(
                    "{} . {}",
                    x.carrier.name(e),
                    x.group.elements().name(g)
                )));
            }
        }
    }
    let fibers = map.fibers();
    if let Some(v) = fibers.iter().position(|f| f.len() > 1) {
        return Err(Error::NotMono(y.carrier.name(v).to_string()));
    }
    let witness = (0..y.carrier.len())
        .filter(|&v| fibers[v].is_empty())
        .map(|v| (v, y.stabilizer(v).len()))
        .find(|&(_, size)| size > 1)
        .map(|(v, size)| (y.carrier.name(v).to_string(), size));
    Ok(FreeCofibration {
        cofibration: witness.is_none(),
        witness,
    })
}
