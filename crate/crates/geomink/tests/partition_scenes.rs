use geomink::assembly::{analyze, find_partitions, partition, Mode, PartitionOptions};
use geomink::scenes;
use geomink::sphere::DirPoint;

#[test]
fn separated_cubes_split() {
    let r = partition(&scenes::separated_cubes(1), Mode::First).unwrap();
    assert_eq!(r.solutions().len(), 1);
    assert_eq!(r.solutions()[0].movable, vec![1]);
}

#[test]
fn hollow_box_is_interlocked() {
    assert!(partition(&scenes::hollow_box(), Mode::All)
        .unwrap()
        .is_interlocked());
}

#[test]
fn peg_leaves_along_plus_z_only() {
    let an = analyze(&scenes::peg_in_hole(), PartitionOptions::default()).unwrap();
    // Directions in which the peg is not blocked by the block: only +z,
    // an isolated vertex of the union of projections.
    let q = &an.regions[&(1, 0)];
    let free_faces = q.face_ids().filter(|&f| !q.face(f).data).count();
    let free_edges = q.edge_ids().filter(|&e| !q.edge(e).data).count();
    let free_vertices: Vec<_> = q.vertex_ids().filter(|&v| !q.vertex(v).data).collect();
    assert_eq!((free_faces, free_edges, free_vertices.len()), (0, 0, 1));
    assert_eq!(
        q.point(free_vertices[0]),
        &DirPoint::from_ints(0, 0, 1).unwrap()
    );
    // Peg up, or equivalently block down.
    let r = find_partitions(&an.motion, Mode::All);
    let found: Vec<_> = r
        .solutions()
        .iter()
        .map(|s| (s.direction.clone(), s.movable.clone()))
        .collect();
    assert_eq!(
        found,
        vec![
            (DirPoint::from_ints(0, 0, -1).unwrap(), vec![0]),
            (DirPoint::from_ints(0, 0, 1).unwrap(), vec![1])
        ]
    );
}

#[test]
fn split_star_vertex_solutions() {
    let an = analyze(&scenes::split_star(), PartitionOptions::default()).unwrap();
    assert!(an.motion.monotonicity_violations().is_empty());
    let r = find_partitions(&an.motion, Mode::All);
    for s in r.solutions() {
        println!("{:?} {:?} {:?}", s.cell, s.direction, s.movable);
    }
    assert_eq!(r.solutions().len(), 8);
}
