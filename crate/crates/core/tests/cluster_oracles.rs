use std::collections::VecDeque;

use planeperc_core::clusters::{
    self, arms, label, tenuous_check, trifurcations, ArmKind, InnerBox, TenuousStatus,
};
use planeperc_core::lattice::{Adjacency, BondConfig, EdgeRef, Region, Vertex};
use planeperc_core::samplers::{rng_from_seed, Init, Model, Sampler};

/// Component id per vertex from plain breadth-first search over open edges.
fn bfs_components(c: &BondConfig) -> Vec<usize> {
    let r = c.region();
    let nv = r.vertex_count();
    let mut comp = vec![usize::MAX; nv];
    let mut next = 0;
    for s in 0..nv {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for e in r.incident_edges(r.vertex_at(v)).unwrap() {
                if !c.edge_is_open(e).unwrap() {
                    continue;
                }
                let (a, b) = r.endpoints(r.edge_index(e).unwrap());
                let w = if a == v { b } else { a };
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    comp
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let mut map = std::collections::HashMap::new();
    let mut back = std::collections::HashMap::new();
    a.iter().zip(b).all(|(x, y)| {
        *map.entry(*x).or_insert(*y) == *y && *back.entry(*y).or_insert(*x) == *x
    })
}

#[test]
fn labels_match_bfs_exhaustively_on_3x3() {
    let r = Region::free_box(3, 3).unwrap();
    for key in 0..1u64 << 12 {
        let c = BondConfig::from_key(r, key).unwrap();
        let lab = label(&c);
        assert!(same_partition(lab.labels(), &bfs_components(&c)), "key {key}");
        assert_eq!(lab.sizes().iter().sum::<usize>(), 9);
    }
}

#[test]
fn labels_match_bfs_on_random_configs() {
    let mut rng = rng_from_seed(21);
    for region in [
        Region::free_box(8, 8).unwrap(),
        Region::torus(8).unwrap(),
        Region::free_box(13, 5).unwrap(),
    ] {
        for p in [0.3, 0.5, 0.7] {
            let mut s = Sampler::new(Model::Bernoulli { p }, region).unwrap();
            for _ in 0..200 {
                let c = s.sample(&mut rng);
                let lab = label(&c);
                assert!(same_partition(lab.labels(), &bfs_components(&c)));
            }
        }
    }
}

#[test]
fn crossing_extremes() {
    let r = Region::free_box(6, 4).unwrap();
    use clusters::Direction::*;
    for d in [LeftRight, TopBottom] {
        assert!(clusters::crossing(&BondConfig::all_open(r), d).unwrap());
        assert!(!clusters::crossing(&BondConfig::closed(r), d).unwrap());
    }
}

/// Brute-force trifurcations: delete each vertex and count the boundary
/// reaching pieces of its cluster.
fn naive_trifurcations(c: &BondConfig) -> Vec<usize> {
    let r = c.region();
    let adj = Adjacency::new(r);
    let nv = r.vertex_count();
    let boundary: Vec<bool> = (0..nv)
        .map(|v| r.is_boundary_vertex(r.vertex_at(v)))
        .collect();
    let mut out = Vec::new();
    for v in 0..nv {
        let mut seen = vec![false; nv];
        seen[v] = true;
        let mut pieces = 0;
        for &(start, e) in adj.neighbors(v) {
            if !c.is_open(e) || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut touches = false;
            while let Some(u) = queue.pop_front() {
                touches |= boundary[u];
                for &(w, f) in adj.neighbors(u) {
                    if c.is_open(f) && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            pieces += touches as usize;
        }
        if pieces >= 3 {
            out.push(v);
        }
    }
    out
}

#[test]
fn trifurcations_match_naive_count_and_bound() {
    let mut rng = rng_from_seed(22);
    let r = Region::free_box(16, 16).unwrap();
    let mut total = 0;
    for p in [0.4, 0.5, 0.6, 0.7] {
        let mut s = Sampler::new(Model::Bernoulli { p }, r).unwrap();
        for _ in 0..150 {
            let c = s.sample(&mut rng);
            let report = trifurcations(&c);
            assert_eq!(report.vertices, naive_trifurcations(&c));
            assert_eq!(report.bound_violations(), 0);
            total += report.total();
        }
    }
    assert!(total > 0, "the sweep should meet some trifurcations");
    let small = Region::free_box(3, 3).unwrap();
    for key in 0..1u64 << 12 {
        let c = BondConfig::from_key(small, key).unwrap();
        assert_eq!(trifurcations(&c).vertices, naive_trifurcations(&c));
    }
}

#[test]
fn trifurcations_on_uniform_spanning_trees() {
    let mut rng = rng_from_seed(23);
    let r = Region::free_box(12, 12).unwrap();
    let mut s = Sampler::new(Model::Ust, r).unwrap();
    for _ in 0..100 {
        let c = s.sample(&mut rng);
        let report = trifurcations(&c);
        assert_eq!(report.vertices, naive_trifurcations(&c));
        assert_eq!(report.bound_violations(), 0);
    }
}

/// Arm intervals read off independently: primal arms by BFS in the annulus,
/// dual arms by BFS over plaquettes. Returns the cyclic kinds sequence.
fn oracle_arm_kinds(c: &BondConfig, b: InnerBox) -> Vec<ArmKind> {
    let r = c.region();
    let (w, h) = (r.width(), r.height());
    let in_b = |x: usize, y: usize| x >= b.x0 && x <= b.x1 && y >= b.y0 && y <= b.y1;
    let annulus_open = |e: EdgeRef| {
        let f = r.far_end(e);
        c.edge_is_open(e).unwrap() && !(in_b(e.base.x, e.base.y) && in_b(f.x, f.y))
    };
    let annulus_closed = |e: EdgeRef| {
        let f = r.far_end(e);
        !c.edge_is_open(e).unwrap() && !(in_b(e.base.x, e.base.y) && in_b(f.x, f.y))
    };
    // primal: vertices of annulus clusters that reach the boundary
    let mut reach = vec![vec![false; h]; w];
    let mut queue = VecDeque::new();
    for x in 0..w {
        for y in 0..h {
            if x == 0 || y == 0 || x + 1 == w || y + 1 == h {
                reach[x][y] = true;
                queue.push_back((x, y));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        let mut nb = Vec::new();
        if x + 1 < w && annulus_open(EdgeRef::right(x, y)) {
            nb.push((x + 1, y));
        }
        if x > 0 && annulus_open(EdgeRef::right(x - 1, y)) {
            nb.push((x - 1, y));
        }
        if y + 1 < h && annulus_open(EdgeRef::up(x, y)) {
            nb.push((x, y + 1));
        }
        if y > 0 && annulus_open(EdgeRef::up(x, y - 1)) {
            nb.push((x, y - 1));
        }
        for (a, bb) in nb {
            if !reach[a][bb] {
                reach[a][bb] = true;
                queue.push_back((a, bb));
            }
        }
    }
    // primal component ids restricted to reaching vertices
    let mut comp = vec![vec![usize::MAX; h]; w];
    let mut next = 0;
    for sx in 0..w {
        for sy in 0..h {
            if comp[sx][sy] != usize::MAX {
                continue;
            }
            comp[sx][sy] = next;
            queue.push_back((sx, sy));
            while let Some((x, y)) = queue.pop_front() {
                let mut nb = Vec::new();
                if x + 1 < w && annulus_open(EdgeRef::right(x, y)) {
                    nb.push((x + 1, y));
                }
                if x > 0 && annulus_open(EdgeRef::right(x - 1, y)) {
                    nb.push((x - 1, y));
                }
                if y + 1 < h && annulus_open(EdgeRef::up(x, y)) {
                    nb.push((x, y + 1));
                }
                if y > 0 && annulus_open(EdgeRef::up(x, y - 1)) {
                    nb.push((x, y - 1));
                }
                for (a, bb) in nb {
                    if comp[a][bb] == usize::MAX {
                        comp[a][bb] = next;
                        queue.push_back((a, bb));
                    }
                }
            }
            next += 1;
        }
    }
    // dual: plaquettes reaching the outer plaquette ring, through closed edges
    let (pw, ph) = (w - 1, h - 1);
    let mut dcomp = vec![vec![usize::MAX; ph]; pw];
    let mut dreach = Vec::new();
    let mut dnext = 0;
    for sx in 0..pw {
        for sy in 0..ph {
            if dcomp[sx][sy] != usize::MAX {
                continue;
            }
            dcomp[sx][sy] = dnext;
            let mut reaches = false;
            queue.push_back((sx, sy));
            while let Some((x, y)) = queue.pop_front() {
                reaches |= x == 0 || y == 0 || x + 1 == pw || y + 1 == ph;
                let mut nb = Vec::new();
                if x + 1 < pw && annulus_closed(EdgeRef::up(x + 1, y)) {
                    nb.push((x + 1, y));
                }
                if x > 0 && annulus_closed(EdgeRef::up(x, y)) {
                    nb.push((x - 1, y));
                }
                if y + 1 < ph && annulus_closed(EdgeRef::right(x, y + 1)) {
                    nb.push((x, y + 1));
                }
                if y > 0 && annulus_closed(EdgeRef::right(x, y)) {
                    nb.push((x, y - 1));
                }
                for (a, bb) in nb {
                    if dcomp[a][bb] == usize::MAX {
                        dcomp[a][bb] = dnext;
                        queue.push_back((a, bb));
                    }
                }
            }
            dreach.push(reaches);
            dnext += 1;
        }
    }
    // walk the boundary of B counterclockwise
    let mut touches: Vec<(ArmKind, usize)> = Vec::new();
    let radial = |e: EdgeRef, outer: Vertex, touches: &mut Vec<(ArmKind, usize)>| {
        if c.edge_is_open(e).unwrap() && reach[outer.x][outer.y] {
            touches.push((ArmKind::Primal, comp[outer.x][outer.y]));
        }
    };
    let face = |px: usize, py: usize, touches: &mut Vec<(ArmKind, usize)>| {
        let id = dcomp[px][py];
        if dreach[id] {
            touches.push((ArmKind::Dual, id));
        }
    };
    for x in b.x0..=b.x1 {
        radial(EdgeRef::up(x, b.y0 - 1), Vertex::new(x, b.y0 - 1), &mut touches);
        face(x, b.y0 - 1, &mut touches);
    }
    for y in b.y0..=b.y1 {
        radial(EdgeRef::right(b.x1, y), Vertex::new(b.x1 + 1, y), &mut touches);
        face(b.x1, y, &mut touches);
    }
    for x in (b.x0..=b.x1).rev() {
        radial(EdgeRef::up(x, b.y1), Vertex::new(x, b.y1 + 1), &mut touches);
        face(x - 1, b.y1, &mut touches);
    }
    for y in (b.y0..=b.y1).rev() {
        radial(EdgeRef::right(b.x0 - 1, y), Vertex::new(b.x0 - 1, y), &mut touches);
        face(b.x0 - 1, y - 1, &mut touches);
    }
    touches.dedup();
    if touches.len() >= 2 && touches[0] == touches[touches.len() - 1] {
        touches.pop();
    }
    touches.into_iter().map(|(k, _)| k).collect()
}

#[test]
fn arms_match_oracle_and_alternate() {
    let mut rng = rng_from_seed(24);
    let window = Region::free_box(15, 15).unwrap();
    let inner = InnerBox::new(5, 5, 9, 9);
    let models = [
        Model::Bernoulli { p: 0.5 },
        Model::Bernoulli { p: 0.4 },
        Model::Bernoulli { p: 0.6 },
        Model::Ust,
        Model::UniformEven,
        Model::RandomCluster {
            p: 0.5,
            q: 2.0,
            sweeps: 5,
            init: Init::AllOpen,
        },
    ];
    let mut multi_arm = 0;
    for model in models {
        let mut s = Sampler::new(model, window).unwrap();
        for _ in 0..170 {
            let c = s.sample(&mut rng);
            let seq = arms(&c, inner).unwrap();
            let kinds: Vec<ArmKind> = seq.arms().iter().map(|a| a.kind).collect();
            assert_eq!(kinds, oracle_arm_kinds(&c, inner), "{model}");
            assert_eq!(seq.violations(), 0, "{model}");
            if seq.arms().len() >= 4 {
                multi_arm += 1;
            }
        }
    }
    assert!(multi_arm > 50);
}

#[test]
fn comb_is_tenuous() {
    // band 11 x 8, n = 4: the cluster of v = (5, 1) runs along row 1 to the
    // left side; two teeth rise from row 1 to row 5 without reaching the top
    // and are not joined above row 4.
    let band = Region::free_box(11, 8).unwrap();
    let mut c = BondConfig::closed(band);
    for x in 0..5 {
        c.set_edge(EdgeRef::right(x, 1), true).unwrap();
    }
    for tooth in [1, 3] {
        for y in 1..5 {
            c.set_edge(EdgeRef::up(tooth, y), true).unwrap();
        }
    }
    let v = Vertex::new(5, 1);
    assert_eq!(tenuous_check(&c, 4, v).unwrap(), TenuousStatus::TenuousProxy);
    // joining the teeth above row n does not change the verdict...
    c.set_edge(EdgeRef::right(1, 5), true).unwrap();
    c.set_edge(EdgeRef::right(2, 5), true).unwrap();
    assert_eq!(tenuous_check(&c, 4, v).unwrap(), TenuousStatus::TenuousProxy);
    // ...but extending one tooth to the top does
    c.set_edge(EdgeRef::up(3, 5), true).unwrap();
    c.set_edge(EdgeRef::up(3, 6), true).unwrap();
    assert_eq!(tenuous_check(&c, 4, v).unwrap(), TenuousStatus::NonTenuousProxy);
    // cutting the path to the left side leaves a cluster that reaches the
    // top only through rows above n
    c.set_edge(EdgeRef::right(0, 1), false).unwrap();
    assert_eq!(tenuous_check(&c, 4, v).unwrap(), TenuousStatus::NonTenuousProxy);
}
