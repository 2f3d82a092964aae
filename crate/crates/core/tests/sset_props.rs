mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use wkan_core::fincat::{coproduct, pullback};
use wkan_core::sset::{
    filler_transport, kan_check_upto, solve_lifting, EpiTriangle, EqRelTransport, TransportData,
};
use wkan_core::{Presheaf, PshMap, SimplexCategory};

fn sc() -> SimplexCategory {
    SimplexCategory::new(3).unwrap()
}

/// A discrete (`false`) or chaotic (`true`) simplicial set on `n` vertices.
fn block(sc: &SimplexCategory, (chaos, n): (bool, usize)) -> Arc<Presheaf> {
    if chaos {
        chaotic(sc, n)
    } else {
        discrete(sc, n)
    }
}

/// Whether a vertex function defines a simplicial map between blocks.
fn vertex_map_exists(src: (bool, usize), tgt: (bool, usize), f: &[usize]) -> bool {
    !src.0 || tgt.0 || f.iter().all(|&v| v == f[0])
}

fn kind() -> impl Strategy<Value = (bool, usize)> {
    (any::<bool>(), 1usize..=3)
}

proptest! {
    #![proptest_config(common::cases(12))]

    /// A union of a chain of Kan subobjects over the point is Kan, since
    /// every horn square into the union factors through a stage.
    #[test]
    fn unions_of_kan_chains_are_kan(blocks in prop::collection::vec(kind(), 1..=3)) {
        let sc = sc();
        let b = budget();
        let mut x = block(&sc, blocks[0]);
        let mut chain = vec![x.clone()];
        for &k in &blocks[1..] {
            x = coproduct(&x, &block(&sc, k)).unwrap().0;
            chain.push(x.clone());
        }
        for stage in &chain {
            prop_assert!(kan_check_upto(&sc, &to_point(&sc, stage), 2, &b).unwrap().fibration);
        }
    }

    /// If `p: Y ↠ X` and `f ∘ p` are Kan, so is `f`, with fillers obtained
    /// by transport.
    #[test]
    fn fibrations_descend_along_epis(
        ky in kind(), kx in kind(), kz in kind(),
        py in prop::collection::vec(0usize..3, 3), fx in prop::collection::vec(0usize..3, 3),
    ) {
        let sc = sc();
        let b = budget();
        let p_table: Vec<usize> = (0..ky.1).map(|v| py[v] % kx.1).collect();
        let f_table: Vec<usize> = (0..kx.1).map(|v| fx[v] % kz.1).collect();
        prop_assume!((0..kx.1).all(|v| p_table.contains(&v)));
        prop_assume!(vertex_map_exists(ky, kx, &p_table) && vertex_map_exists(kx, kz, &f_table));
        let (y, x, z) = (block(&sc, ky), block(&sc, kx), block(&sc, kz));
        let p = vertex_map(&sc, &y, &x, |v| p_table[v]);
        let f = vertex_map(&sc, &x, &z, |v| f_table[v]);
        prop_assume!(p.is_epi());
        let g = f.after(&p).unwrap();
        let kan = |m: &PshMap| kan_check_upto(&sc, m, 2, &b).unwrap().fibration;
        prop_assume!(kan(&p) && kan(&g));
        prop_assert!(kan(&f));
        for (square, vertex) in horn_squares(&sc, &f, 2).unwrap() {
            let data = TransportData::EpiTriangle(EpiTriangle { p: p.clone(), g: g.clone(), vertex, square: square.clone() });
            let filler = filler_transport(&sc, &data, &b).unwrap();
            prop_assert!(square.is_filler(&filler.d));
        }
    }

    /// If both projections of the kernel pair of `q: Y ↠ Y/R` are Kan, so
    /// is `q`, with fillers obtained by transport.
    #[test]
    fn fibrations_descend_to_quotients(ky in kind(), n in 1usize..=3, table in prop::collection::vec(0usize..3, 3)) {
        let sc = sc();
        let b = budget();
        let kq = (ky.0, n.min(ky.1));
        let q_table: Vec<usize> = (0..ky.1).map(|v| table[v] % kq.1).collect();
        prop_assume!((0..kq.1).all(|v| q_table.contains(&v)));
        let (y, quo) = (block(&sc, ky), block(&sc, kq));
        let q = vertex_map(&sc, &y, &quo, |v| q_table[v]);
        let r = pullback(&q, &q).unwrap();
        let kan = |m: &PshMap| kan_check_upto(&sc, m, 2, &b).unwrap().fibration;
        prop_assume!(kan(&r.left) && kan(&r.right));
        prop_assert!(kan(&q));
        for (square, _) in horn_squares(&sc, &q, 2).unwrap() {
            let data = TransportData::EqRel(EqRelTransport::kernel(square.clone()).unwrap());
            let filler = filler_transport(&sc, &data, &b).unwrap();
            prop_assert!(square.is_filler(&filler.d));
            prop_assert!(solve_lifting(&square, &b).unwrap().is_some());
        }
    }
}
