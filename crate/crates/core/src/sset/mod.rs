//! Truncated simplicial sets: presheaves on the full subcategory of the
//! simplex category spanned by `[0], …, [N]`.

mod lifting;
mod pi;
mod transport;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinSet, Presheaf, PshMap};

pub use lifting::{kan_check_upto, solve_lifting, Filler, HornSquare, KanReport, LiftingProblem};
pub use pi::{check_adjunction, dependent_product, AdjunctionReport, DependentProduct};
pub use transport::{filler_transport, EpiTriangle, EqRelTransport, TransportData};

/// `Δ≤N`, with morphisms the monotone maps `[m] → [n]` named like `[0,2]>3`.
#[derive(Clone, Debug)]
pub struct SimplexCategory {
    top: usize,
    cat: Arc<FinCategory>,
    images: Vec<Vec<usize>>,
    index: HashMap<(Vec<usize>, usize), usize>,
}

/// Monotone maps `[m] → [n]` in lexicographic order of their images.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(
        pos: usize,
        lo: usize,
        m: usize,
        n: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos > m {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(pos + 1, v, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, 0, m, n, &mut Vec::new(), &mut out);
    out
}

/// Digits for small targets, dot-separated otherwise.
pub fn vertex_name(images: &[usize], n: usize) -> String {
    if n < 10 {
        images.iter().map(|v| char::from(b'0' + *v as u8)).collect()
    } else {
        images
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl SimplexCategory {
    pub fn new(top: usize) -> Result<Self> {
        let mut specs = Vec::new();
        let mut images = Vec::new();
        let mut index = HashMap::new();
        for n in 0..=top {
            for m in 0..=top {
                for img in monotone_maps(m, n) {
                    let name = format!(
                        "[{}]>{n}",
                        img.iter()
                            .map(usize::to_string)
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    index.insert((img.clone(), n), specs.len());
                    specs.push((name, m, n));
                    images.push(img);
                }
            }
        }
        let identity = (0..=top)
            .map(|n| index[&((0..=n).collect::<Vec<_>>(), n)])
            .collect();
        let objects = (0..=top).map(|n| format!("[{n}]")).collect();
        let targets: Vec<usize> = specs.iter().map(|s| s.2).collect();
        let cat = FinCategory::generate(objects, specs, identity, |g, f| {
            let composite: Vec<usize> = images[f].iter().map(|&v| images[g][v]).collect();
            index[&(composite, targets[g])]
        })?;
        Ok(SimplexCategory {
            top,
            cat: Arc::new(cat),
            images,
            index,
        })
    }

    /// The truncation level `N`.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    /// Vertex images of a morphism.
    pub fn images(&self, m: usize) -> &[usize] {
        &self.images[m]
    }

    pub fn morphism(&self, images: &[usize], n: usize) -> Option<usize> {
        self.index.get(&(images.to_vec(), n)).copied()
    }

    /// `d_i: [n-1] → [n]`, skipping `i`.
    pub fn face(&self, n: usize, i: usize) -> usize {
        let img: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
        self.index[&(img, n)]
    }

    /// `s_i: [n+1] → [n]`, hitting `i` twice.
    pub fn degeneracy(&self, n: usize, i: usize) -> usize {
        let img: Vec<usize> = (0..=n + 1)
            .map(|v| if v <= i { v } else { v - 1 })
            .collect();
        self.index[&(img, n)]
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n > self.top {
            Err(Error::DimensionOutOfRange(format!(
                "dimension {n} exceeds the truncation {}",
                self.top
            )))
        } else {
            Ok(())
        }
    }

    /// The subpresheaf of `Δ[n]` on the maps `θ` with `keep(θ)`.
    fn sub_simplex(&self, n: usize, keep: impl Fn(&[usize]) -> bool) -> Result<Presheaf> {
        self.check_dim(n)?;
        let members: Vec<Vec<Vec<usize>>> = (0..=self.top)
            .map(|m| {
                monotone_maps(m, n)
                    .into_iter()
                    .filter(|t| keep(t))
                    .collect()
            })
            .collect();
        let pos: Vec<HashMap<&Vec<usize>, usize>> = members
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let sets = members
            .iter()
            .map(|ms| FinSet::new(ms.iter().map(|t| vertex_name(t, n))))
            .collect::<Result<Vec<_>>>()?;
        Presheaf::from_fn(self.cat.clone(), sets, |alpha, x| {
            let (d, c) = (self.cat.src(alpha), self.cat.dst(alpha));
            let theta = &members[c][x];
            let composite: Vec<usize> = self.images[alpha].iter().map(|&v| theta[v]).collect();
            *pos[d]
                .get(&composite)
                .expect("subcomplex is closed under restriction")
        })
    }

    /// The standard simplex `Δ[n]`, simplices named by vertex strings.
    pub fn simplex(&self, n: usize) -> Result<Presheaf> {
        self.sub_simplex(n, |_| true)
    }

    /// `∂Δ[n]`: the non-surjective maps.
    pub fn boundary(&self, n: usize) -> Result<Presheaf> {
        self.sub_simplex(n, |t| (0..=n).any(|v| !t.contains(&v)))
    }

    /// `Λ^k[n]`: maps missing some vertex other than `k`.
    pub fn horn(&self, n: usize, k: usize) -> Result<Presheaf> {
        if n == 0 || k > n {
            return Err(Error::DimensionOutOfRange(format!("no horn Λ^{k}[{n}]")));
        }
        self.sub_simplex(n, |t| (0..=n).any(|v| v != k && !t.contains(&v)))
    }

    /// The point `Δ[0]`.
    pub fn point(&self) -> Presheaf {
        self.simplex(0).expect("Δ[0] exists at every truncation")
    }

    /// The discrete simplicial set on `s`: every simplex is degenerate.
    pub fn discrete(&self, s: &FinSet) -> Presheaf {
        Presheaf::constant(self.cat.clone(), s.clone())
    }

    /// The chaotic simplicial set on `s`: `n`-simplices are `(n+1)`-tuples
    /// and restriction reindexes.
    pub fn chaotic(&self, s: &FinSet) -> Result<Presheaf> {
        let k = s.len();
        let short = s.names().iter().all(|n| n.chars().count() == 1);
        let tuples: Vec<Vec<Vec<usize>>> = (0..=self.top)
            .map(|m| crate::fincat::all_functions(m + 1, k).collect())
            .collect();
        let sets = tuples
            .iter()
            .map(|ts| {
                FinSet::new(ts.iter().map(|t| {
                    let parts: Vec<&str> = t.iter().map(|&v| s.name(v)).collect();
                    if short {
                        parts.concat()
                    } else {
                        parts.join(",")
                    }
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Presheaf::from_fn(self.cat.clone(), sets, |alpha, x| {
            let c = self.cat.dst(alpha);
            let t = &tuples[c][x];
            self.images[alpha].iter().fold(0, |acc, &v| acc * k + t[v])
        })
    }

    /// The map `Δ[n] → X` classifying an `n`-simplex `x`.
    pub fn yoneda(&self, x: &Arc<Presheaf>, n: usize, elem: usize) -> Result<PshMap> {
        let delta = Arc::new(self.simplex(n)?);
        let components = (0..=self.top)
            .map(|m| {
                monotone_maps(m, n)
                    .iter()
                    .map(|t| x.restrict(self.index[&(t.clone(), n)], elem))
                    .collect()
            })
            .collect();
        PshMap::new(delta, x.clone(), components)
    }
}

/// Which generating cell to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Simplex,
    Boundary,
    Horn(usize),
}

/// A cell `K ⊆ Δ[n]` with its inclusion, and for horns the map
/// `Δ[0] → Λ^k[n]` picking the `k`-th vertex.
#[derive(Clone, Debug)]
pub struct Cell {
    pub space: Arc<Presheaf>,
    pub inclusion: PshMap,
    pub vertex: Option<PshMap>,
}

pub fn generate_cell(sc: &SimplexCategory, kind: CellKind, n: usize) -> Result<Cell> {
    let space = Arc::new(match kind {
        CellKind::Simplex => sc.simplex(n)?,
        CellKind::Boundary => sc.boundary(n)?,
        CellKind::Horn(k) => sc.horn(n, k)?,
    });
    let full = Arc::new(sc.simplex(n)?);
    let inclusion = PshMap::from_fn(space.clone(), full.clone(), |o, x| {
        full.at(o)
            .index_of(space.at(o).name(x))
            .expect("cell sits inside the simplex")
    })?;
    let vertex = match kind {
        CellKind::Horn(k) => {
            let point = Arc::new(sc.point());
            let name = |m: usize| vertex_name(&vec![k; m + 1], n);
            Some(PshMap::from_fn(point, space.clone(), |o, _| {
                space
                    .at(o)
                    .index_of(&name(o))
                    .expect("every vertex lies in the horn")
            })?)
        }
        _ => None,
    };
    Ok(Cell {
        space,
        inclusion,
        vertex,
    })
}

/// Nondegenerate simplices of `x` in each dimension.
pub fn nondegenerate(sc: &SimplexCategory, x: &Presheaf) -> Vec<Vec<usize>> {
    (0..=sc.top)
        .map(|n| {
            (0..x.size(n))
                .filter(|&e| {
                    n == 0
                        || (0..n).all(|i| {
                            let lower = x.restrict(sc.face(n, i), e);
                            x.restrict(sc.degeneracy(n - 1, i), lower) != e
                        })
                })
                .collect()
        })
        .collect()
}
