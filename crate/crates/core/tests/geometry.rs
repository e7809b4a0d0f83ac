//! Combinatorics of the exported triangulations.

use std::collections::{BTreeMap, BTreeSet};

use qsphere::chains::triangulate;
use qsphere::constructors::{build_pgun_phi, sphere_sun};

#[test]
fn su3_is_a_twelve_gon() {
    for q in [4u64, 9] {
        let c = sphere_sun(3, q, 5).unwrap();
        let t = triangulate(&c.group, &c.sphere).unwrap();
        assert_eq!(t.dimension, 1);
        assert_eq!(t.cells.len(), 12);
        assert_eq!(t.vertex_count(), 12);
        assert_eq!(t.edge_count(), 12);
        assert!(t.is_closed_pseudomanifold());
        assert_eq!(t.euler_characteristic(), 0);
        // A single cycle: walk the edges from one vertex.
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for cell in &t.cells {
            let (a, b) = (cell.vertices[0], cell.vertices[1]);
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        assert!(adj.values().all(|v| v.len() == 2));
        let (mut prev, mut cur) = (usize::MAX, 0);
        let mut seen = BTreeSet::new();
        while seen.insert(cur) {
            let next = *adj[&cur].iter().find(|&&v| v != prev).unwrap();
            prev = cur;
            cur = next;
        }
        assert_eq!(seen.len(), 12);
        // Rank-one and rank-two vertices alternate.
        for cell in &t.cells {
            let ranks: BTreeSet<usize> = cell.vertices.iter().map(|&v| t.vertices[v].rank).collect();
            assert_eq!(ranks, BTreeSet::from([1, 2]));
        }
    }
}

#[test]
fn su4_is_a_subdivided_coxeter_sphere() {
    let c = sphere_sun(4, 4, 5).unwrap();
    let t = triangulate(&c.group, &c.sphere).unwrap();
    assert_eq!(t.dimension, 2);
    assert_eq!(t.cells.len(), 144);
    assert_eq!(t.vertex_count(), 74);
    assert_eq!(t.edge_count(), 216);
    assert_eq!(t.euler_characteristic(), 2);
    assert!(t.is_closed_pseudomanifold());
    // 24 big cells, one per element of X, each split into 3! triangles
    // around the barycentre (the rank-3 vertex of that cell).
    let mut by_label: BTreeMap<&Vec<usize>, Vec<usize>> = BTreeMap::new();
    for cell in &t.cells {
        by_label.entry(&cell.label).or_default().push(*cell.vertices.last().unwrap());
    }
    assert_eq!(by_label.len(), 24);
    for tops in by_label.values() {
        assert_eq!(tops.len(), 6);
        assert!(tops.iter().all(|&v| v == tops[0] && t.vertices[v].rank == 3));
    }
    let ranks = |r| t.vertices.iter().filter(|v| v.rank == r).count();
    assert_eq!((ranks(1), ranks(2), ranks(3)), (14, 36, 24));
    // Positions lie on the unit sphere and the vertices are distinct points.
    for v in &t.vertices {
        let norm: f64 = v.position.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-9);
    }
}

#[test]
fn off_export_header() {
    let c = sphere_sun(4, 4, 5).unwrap();
    let t = triangulate(&c.group, &c.sphere).unwrap();
    let off = t.to_off();
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("74 144 0"));
    assert_eq!(off.lines().count(), 2 + 74 + 144);
    assert!(off.lines().skip(2 + 74).all(|l| l.starts_with("3 ")));
}

#[test]
fn mesh_needs_small_rank_and_labels() {
    let c = sphere_sun(4, 4, 5).unwrap();
    let mut rank_four = c.sphere.clone();
    rank_four.e_gens.push(rank_four.e_gens[0].clone());
    assert!(triangulate(&c.group, &rank_four).is_err());
    let b = build_pgun_phi(2, 5, 1, 3).unwrap();
    assert!(triangulate(&b.group, &b.sphere).is_err());
}
