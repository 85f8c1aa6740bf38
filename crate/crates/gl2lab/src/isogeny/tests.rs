use super::*;
use crate::groups::{adjoin_minus_id, ambient_group, full_lift, transpose_group};
use crate::residues::{mat_inv, mat_mul};

fn grp(n: u64, rows: &[[[i64; 2]; 2]]) -> GroupClosure {
    generate(&SubgroupSpec::from_rows(n, rows).unwrap()).unwrap()
}

fn lifted(n: u64, rows: &[[[i64; 2]; 2]]) -> GroupClosure {
    full_lift(&grp(n, rows), 5).unwrap()
}

fn conj(a: &GroupClosure, b: &GroupClosure) -> bool {
    is_conjugate(a, b).unwrap().is_some()
}

fn step(r: u32, v: [u32; 2]) -> IsogenyStep {
    IsogenyStep::new(r, v).unwrap()
}

#[test]
fn borel_normalization_examples() {
    let g = full_lift(&grp(2, &[[[1, 0], [1, 1]]]), 3).unwrap();
    let (h, p) = borel_normalize(&g, &IsogenyStep::trivial()).unwrap();
    assert_eq!(p, ResidueMatrix::identity(g.modulus()));
    assert!(h.same_elements(&g));
    let (h, p) = borel_normalize(&g, &step(1, [0, 1])).unwrap();
    assert_eq!(p, ResidueMatrix::identity(g.modulus()));
    assert!(h.same_elements(&g));
    assert!(h.generators().iter().all(|x| x.entries()[1] % 2 == 0));
    // <(1,0)> is not stable under [[1,0],[1,1]]; it is under the transpose,
    // which the swap normalizes.
    assert!(matches!(borel_normalize(&g, &step(1, [1, 0])), Err(Error::NotStable(1, 0))));
    let gt = transpose_group(&g);
    let (h, p) = borel_normalize(&gt, &step(1, [1, 0])).unwrap();
    assert_eq!(p.rows(), [[0, 1], [1, 0]]);
    assert!(h.generators().iter().all(|x| x.entries()[1] % 2 == 0));
    assert!(h.same_elements(&g));
}

#[test]
fn normalization_makes_top_right_divisible() {
    let g = lifted(8, &[[[3, 6], [0, 1]], [[7, 0], [0, 1]], [[5, 0], [0, 1]]]);
    for r in 0..=3 {
        for c in stable_cyclic_subgroups(&g, r).unwrap() {
            let (h, _) = borel_normalize(&g, &IsogenyStep::from_kernel(c)).unwrap();
            assert!(h.packed_elements().iter().all(|&x| crate::residues::unpack(x)[1].is_multiple_of(1 << r)));
        }
    }
}

#[test]
fn full_group_maps_to_gl2_mod_32() {
    let gl2 = ambient_group(Modulus::new(2).unwrap()).unwrap();
    let img = isogeny_image(&gl2, &IsogenyStep::trivial()).unwrap();
    assert_eq!(img.order(), ambient_order(target_modulus()));
    assert!(matches!(
        isogeny_image(&gl2, &step(1, [0, 1])),
        Err(Error::KernelTooLarge { r: 1, m: 0 })
    ));
    let msg = isogeny_image(&gl2, &step(1, [0, 1])).unwrap_err().to_string();
    assert!(msg.contains("kernel larger than level permits"), "{msg}");
}

#[test]
fn two_isogeny_of_the_generic_two_torsion_group() {
    let g = lifted(2, &[[[1, 0], [1, 1]]]);
    let img = isogeny_image(&g, &step(1, [0, 1])).unwrap();
    assert!(conj(&img, &g));
}

#[test]
fn trivial_mod_two_gives_the_generic_four_isogeny_group() {
    let g = lifted(2, &[[[1, 0], [0, 1]]]);
    let expected = lifted(4, &[[[3, 0], [0, 1]], [[1, 1], [0, 1]], [[3, 0], [0, 3]]]);
    let kernels = stable_cyclic_subgroups(&g, 1).unwrap();
    assert_eq!(kernels.len(), 3);
    for c in kernels {
        let img = isogeny_image(&g, &IsogenyStep::from_kernel(c)).unwrap();
        assert!(conj(&img, &expected), "kernel {c}");
    }
}

#[test]
fn odd_steps_are_no_ops() {
    let rows = [[[3, 6], [0, 1]], [[7, 0], [0, 1]], [[5, 0], [0, 1]]];
    let g = grp(8, &rows);
    let img = isogeny_image(&g, &IsogenyStep::odd(3).unwrap()).unwrap();
    assert!(img.same_elements(&at_level_32(&g).unwrap()));
    let g24 = grp(24, &[[[5, 6], [0, 1]], [[7, 0], [0, 1]], [[1, 0], [0, 5]], [[1, 8], [0, 1]]]);
    let img = isogeny_image(&g24, &IsogenyStep::odd(5).unwrap()).unwrap();
    assert!(img.same_elements(&at_level_32(&g24).unwrap()));
    assert!(IsogenyStep::odd(4).is_err());
}

#[test]
fn closed_form_kernel_generators_match_the_transform() {
    for m in 0..=5 {
        for r in 0..=m {
            for t in kernel_image_generators(m, r).unwrap() {
                assert_eq!(transform_generator(t.source, r).unwrap(), t.image, "m={m} r={r}");
                assert_eq!(t.source_det_mod_32(), t.image.det());
            }
        }
    }
    assert!(matches!(kernel_image_generators(1, 2), Err(Error::KernelTooLarge { r: 2, m: 1 })));
}

#[test]
fn transform_rejects_undivisible_entries() {
    assert!(matches!(transform_generator([[1, 1], [0, 1]], 1), Err(Error::Internal(_))));
}

/// The direct route: lift to level 2^(5+r), normalize there and
/// transform every generator of the lifted group.
fn generic_route(g: &GroupClosure, c: CyclicSubgroup) -> GroupClosure {
    let big = Modulus::two_power(5 + c.r).unwrap();
    let lift = crate::groups::lift(g, big).unwrap();
    let p = borel_conjugator(&c, big);
    let pinv = mat_inv(&p).unwrap();
    let images: Vec<ResidueMatrix> = lift
        .generators()
        .iter()
        .map(|s| {
            let x = mat_mul(&mat_mul(&p, s).unwrap(), &pinv).unwrap();
            transform_generator(x.rows().map(|row| row.map(|v| v as u64)), c.r).unwrap()
        })
        .collect();
    generate(&SubgroupSpec::new(target_modulus(), images).unwrap()).unwrap()
}

#[test]
fn agrees_with_the_generic_route() {
    let groups = [
        grp(2, &[[[1, 0], [1, 1]]]),
        grp(2, &[[[1, 0], [0, 1]]]),
        grp(4, &[[[3, 0], [0, 1]], [[1, 1], [0, 1]], [[3, 0], [0, 3]]]),
        transpose_group(&grp(8, &[[[3, 6], [0, 1]], [[7, 0], [0, 1]], [[5, 0], [0, 1]]])),
    ];
    for g in &groups {
        let m = level_exponent(g).unwrap();
        for r in 0..=m.min(2) {
            for c in stable_cyclic_subgroups(&full_lift(g, 5).unwrap(), r).unwrap() {
                let fast = isogeny_image(g, &IsogenyStep::from_kernel(c)).unwrap();
                let slow = generic_route(g, c);
                assert!(fast.same_elements(&slow), "kernel {c} of {:?}", g.generators());
            }
        }
    }
}

#[test]
fn determinant_and_minus_id_are_preserved() {
    let g = transpose_group(&grp(8, &[[[3, 6], [0, 1]], [[7, 0], [0, 1]], [[5, 0], [0, 1]]]));
    let g32 = full_lift(&g, 5).unwrap();
    for r in 0..=3 {
        for c in stable_cyclic_subgroups(&g32, r).unwrap() {
            for h in [g.clone(), adjoin_minus_id(&g)] {
                let d = isogeny_image_detailed(&h, &IsogenyStep::from_kernel(c)).unwrap();
                for t in &d.generators {
                    assert_eq!(t.source_det_mod_32(), t.image.det());
                }
                assert_eq!(d.image.contains_minus_id(), h.contains_minus_id());
            }
        }
    }
}

#[test]
fn torsion_examples() {
    let z2z8 = grp(8, &[[[1, 0], [2, 1]], [[3, 0], [0, 1]], [[5, 0], [0, 1]]]);
    assert_eq!(torsion_fixed(&z2z8), TorsionPair { d1: 2, d2: 8 });
    let gl8 = ambient_group(Modulus::new(8).unwrap()).unwrap();
    assert_eq!(torsion_fixed(&gl8), TorsionPair { d1: 1, d2: 1 });
    let triv = grp(4, &[[[1, 0], [0, 1]]]);
    assert_eq!(torsion_fixed(&triv), TorsionPair { d1: 4, d2: 4 });
    assert_eq!(TorsionPair { d1: 2, d2: 8 }.symbol(), vec![2, 8]);
    assert_eq!(TorsionPair::from_symbol(&[8]).unwrap(), TorsionPair { d1: 1, d2: 8 });
    assert_eq!(TorsionPair { d1: 2, d2: 8 }.to_string(), "(2 | 8)");
}

#[test]
fn single_vertex_graph() {
    let gl32 = ambient_group(target_modulus()).unwrap();
    let graph = propagate_graph(&gl32, &OddPart::none()).unwrap();
    assert_eq!(graph.vertices.len(), 1);
    assert!(graph.edges.is_empty());
    assert_eq!(graph.shape, "L_1");
    assert_eq!(graph.torsion_column(), vec![TorsionPair { d1: 1, d2: 1 }]);
}

#[test]
fn t4_star() {
    let g = grp(2, &[[[1, 0], [0, 1]]]);
    let graph = propagate_graph(&g, &OddPart::none()).unwrap();
    assert_eq!(graph.shape, "T_4");
    assert_eq!(graph.edge_pairs(), vec![(0, 1), (0, 2), (0, 3)]);
    assert_eq!(graph.vertices[0].torsion, TorsionPair { d1: 2, d2: 2 });
    assert!(graph.uniform_index().is_some());
    assert!(graph.duality_failures().unwrap().is_empty());
}

#[test]
fn odd_parts_multiply_the_graph() {
    let g = grp(2, &[[[1, 0], [1, 1]]]);
    let graph = propagate_graph(&g, &OddPart::parse("3:3").unwrap()).unwrap();
    assert_eq!(graph.shape, "R_6");
    assert_eq!(graph.vertices.len(), 6);
    assert_eq!(graph.edges.iter().filter(|e| e.degree == 2).count(), 3);
    assert_eq!(graph.edges.iter().filter(|e| e.degree == 3).count(), 4);
    assert!(graph.vertices[0].image.same_elements(&graph.vertices[2].image));
    assert!(matches!(propagate_graph(&g, &OddPart::parse("5:3").unwrap()), Err(Error::Kenku { .. })));
    let t4 = grp(2, &[[[1, 0], [0, 1]]]);
    assert!(matches!(propagate_graph(&t4, &OddPart::parse("3:3").unwrap()), Err(Error::TooManyVertices(12))));
    assert!(OddPart::parse("4:2").is_err());
    assert!(OddPart::parse("3").is_err());
}

#[test]
fn t8_graph_from_the_z2_z8_group() {
    let h193n = grp(8, &[[[3, 6], [0, 1]], [[7, 0], [0, 1]], [[5, 0], [0, 1]]]);
    let graph = propagate_graph(&transpose_group(&h193n), &OddPart::none()).unwrap();
    assert_eq!(graph.shape, "T_8");
    assert_eq!(graph.uniform_index(), Some(96));
    let expected: Vec<TorsionPair> = [vec![2, 8], vec![8], vec![8], vec![2, 4], vec![4], vec![2, 2], vec![2], vec![2]]
        .iter()
        .map(|s| TorsionPair::from_symbol(s).unwrap())
        .collect();
    let fixture_edges = [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (5, 6), (5, 7)];
    let computed = graph.torsion_column();
    let phi = find_graph_isomorphism(8, &fixture_edges, &graph.edge_pairs(), |i, j| expected[i] == computed[j]);
    assert!(phi.is_some(), "torsion {computed:?}, edges {:?}", graph.edge_pairs());
    assert!(graph.duality_failures().unwrap().is_empty());
    let json = graph.to_json();
    assert_eq!(json["vertex_count"], 8);
    assert_eq!(json["shape"], "T_8");
}

#[test]
fn isomorphism_search() {
    let path = [(0, 1), (1, 2)];
    let other = [(0, 2), (2, 1)];
    let phi = find_graph_isomorphism(3, &path, &other, |_, _| true).unwrap();
    assert_eq!(phi[1], 2);
    assert!(find_graph_isomorphism(3, &path, &other, |i, j| i == j).is_none());
}
