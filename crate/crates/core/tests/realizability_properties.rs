use uso_core::cube::Face;
use uso_core::realizability::ForbiddenKind;
use uso_core::{
    build_matousek, find_forbidden, holt_klee_3face, is_branching_closure, Branching, DimSet,
    InfluenceGraph,
};

/// Path enumeration for Holt-Klee, cross-checked by a unit-capacity
/// vertex-split max flow on the 8-vertex face.
fn disjoint_path_count(o: &uso_core::Orientation, face: Face) -> usize {
    let verts: Vec<DimSet> = face.vertices().collect();
    let span = face.spanning();
    let idx = |v: DimSet| verts.iter().position(|&w| w == v).unwrap();
    let source = verts.iter().copied().find(|&v| o.outmap(v) & span == span).unwrap();
    let sink = verts.iter().copied().find(|&v| (o.outmap(v) & span).is_empty()).unwrap();
    // node 2i = in(i), 2i+1 = out(i)
    let size = 16;
    let mut cap = vec![vec![0i32; size]; size];
    for &v in &verts {
        let i = idx(v);
        cap[2 * i][2 * i + 1] = if v == source || v == sink { 3 } else { 1 };
        for d in (o.outmap(v) & span).dims() {
            cap[2 * i + 1][2 * idx(v.toggled(d))] = 1;
        }
    }
    let (s, t) = (2 * idx(source) + 1, 2 * idx(sink));
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; size];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in 0..size {
                if prev[w] == usize::MAX && cap[u][w] > 0 {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut w = t;
        while w != s {
            let u = prev[w];
            cap[u][w] -= 1;
            cap[w][u] += 1;
            w = u;
        }
        flow += 1;
    }
}

#[test]
fn characterization_agrees_exhaustively_to_four() {
    for n in 1..=4 {
        for g in InfluenceGraph::enumerate_acyclic(n).unwrap() {
            assert_eq!(find_forbidden(&g).is_none(), is_branching_closure(&g).is_some(), "{g:?}");
        }
    }
}

#[test]
fn witnesses_have_the_stated_shape() {
    for g in InfluenceGraph::enumerate_acyclic(4).unwrap() {
        let Some(w) = find_forbidden(&g) else { continue };
        let [x, y, z] = w.vertices;
        match w.kind {
            ForbiddenKind::G1 => {
                assert!(g.has_edge(x, y) && g.has_edge(y, z) && !g.has_edge(x, z));
            }
            ForbiddenKind::G2 => {
                assert!(g.has_edge(y, x) && g.has_edge(z, x));
                assert!(!g.has_edge(y, z) && !g.has_edge(z, y));
                // G1 is searched first
                assert!(g.is_transitive() || find_forbidden(&g).unwrap().kind == ForbiddenKind::G2);
            }
        }
    }
}

#[test]
fn branching_closures_round_trip() {
    for n in 1..=5 {
        for b in Branching::enumerate(n).unwrap() {
            let g = b.transitive_closure();
            assert_eq!(is_branching_closure(&g), Some(b));
            assert_eq!(find_forbidden(&g), None);
        }
    }
}

#[test]
fn holt_klee_matches_max_flow_on_all_three_cubes() {
    for g in InfluenceGraph::enumerate_acyclic(3).unwrap() {
        let o = build_matousek(&g);
        let face = Face::whole(3);
        let by_paths = holt_klee_3face(&o, face).unwrap();
        assert_eq!(by_paths, disjoint_path_count(&o, face) == 3, "{g:?}");
        // realizable exactly when Holt-Klee holds, on 3 dimensions
        assert_eq!(by_paths, find_forbidden(&g).is_none(), "{g:?}");
    }
}

#[test]
fn realizable_four_cubes_pass_on_every_three_face() {
    for b in Branching::enumerate(4).unwrap() {
        let o = build_matousek(&b.transitive_closure());
        for face in Face::all(4).filter(|f| f.dimension() == 3) {
            assert!(holt_klee_3face(&o, face).unwrap());
        }
    }
}

#[test]
fn witness_face_fails_holt_klee() {
    for n in 3..=5 {
        for g in InfluenceGraph::enumerate_acyclic(n).unwrap() {
            if let Some(w) = find_forbidden(&g) {
                let o = build_matousek(&g);
                let face = Face::new(DimSet::EMPTY, w.dims()).unwrap();
                assert!(!holt_klee_3face(&o, face).unwrap(), "{g:?} {w}");
            }
        }
    }
}

#[test]
fn path_flips_keep_branching_closures_to_four() {
    for n in 1..=4 {
        for b in Branching::enumerate(n).unwrap() {
            let g = b.transitive_closure();
            for path in b.root_paths() {
                let flipped = g.flip_rows(path).unwrap();
                assert!(is_branching_closure(&flipped).is_some(), "{b:?} {path:?}");
            }
        }
    }
}
