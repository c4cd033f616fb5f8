//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single `criterion N: PASS|FAIL ...` line (visible with `--nocapture`).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tricert::census::{enumerate, enumerate_exact, CensusFilter};
use tricert::faces::{is_face_generic, is_face_pair_reduced};
use tricert::fixtures::{barycentric_subdivision, FOUR_TET_SPHERE_TABLE};
use tricert::homology::{h1, AbelianInvariants};
use tricert::qmatch::{
    build_q_system, build_q_system_with, clusters_of_three, fg_quads, haken_projection_check, one_quad_solutions,
    solution_supports,
};
use tricert::squares::{all_squares, tetra_type, Refined, TopologicalType, GENERIC_LABELS};
use tricert::surface_detect::{capped_two_square_surfaces, check_cluster_theorem, PatternCatalog};
use tricert::{Skeleton, Triangulation};

fn report(n: u32, result: Result<String, String>) {
    match result {
        Ok(msg) => println!("criterion {n}: PASS {msg}"),
        Err(msg) => {
            println!("criterion {n}: FAIL {msg}");
            panic!("criterion {n} failed: {msg}");
        }
    }
}

fn skeletons(filter: &CensusFilter) -> Vec<(Triangulation, Skeleton)> {
    enumerate(filter)
        .unwrap()
        .into_iter()
        .map(|t| {
            let s = Skeleton::build(&t).unwrap();
            (t, s)
        })
        .collect()
}

fn orientable_census(max: usize) -> Vec<(Triangulation, Skeleton)> {
    skeletons(&CensusFilter {
        require_sphere_links: false,
        ..CensusFilter::manifolds(max)
    })
}

#[test]
fn criterion_01_golden_sphere() {
    let start = Instant::now();
    let tri = Triangulation::parse_table(FOUR_TET_SPHERE_TABLE).unwrap();
    let s = Skeleton::build(&tri).unwrap();
    let facts = (
        tri.is_closed(),
        s.is_orientable(),
        s.face_classes().len(),
        s.vertex_links().iter().all(|l| l.is_sphere()),
        h1(&s).is_trivial(),
        is_face_generic(&s).value,
        is_face_pair_reduced(&s).value,
    );
    let elapsed = start.elapsed();
    let expected = (true, true, 8, true, true, true, false);
    let res = if facts != expected {
        Err(format!("got {facts:?}"))
    } else if elapsed >= Duration::from_secs(1) {
        Err(format!("took {elapsed:?}"))
    } else {
        Ok(format!(
            "closed, orientable, 8 faces, sphere link, H1 = 0, generic, not pair-reduced ({elapsed:?})"
        ))
    };
    report(1, res);
}

#[test]
fn criterion_02_zero_columns_are_f_and_g_squares() {
    let start = Instant::now();
    let census = orientable_census(2);
    let mut mismatches = Vec::new();
    for (t, s) in &census {
        let q = build_q_system(s).unwrap();
        if one_quad_solutions(&q) != fg_quads(s) {
            mismatches.push(t.to_table());
        }
    }
    let elapsed = start.elapsed();
    let res = if !mismatches.is_empty() {
        Err(format!("{} mismatches, first:\n{}", mismatches.len(), mismatches[0]))
    } else if elapsed >= Duration::from_secs(60) {
        Err(format!("took {elapsed:?}"))
    } else {
        Ok(format!(
            "{} orientable members, no mismatch ({elapsed:?})",
            census.len()
        ))
    };
    report(2, res);
}

#[test]
fn criterion_03_tetrahedral_solution() {
    let census = orientable_census(2);
    let mut bad = 0;
    let mut tets = 0;
    for (_, s) in &census {
        let q = build_q_system(s).unwrap();
        for t in 0..s.tet_count() {
            tets += 1;
            if q.matrix
                .iter()
                .any(|row| row[3 * t] + row[3 * t + 1] + row[3 * t + 2] != 0)
            {
                bad += 1;
            }
        }
    }
    let res = if bad == 0 {
        Ok(format!("{tets} tetrahedra"))
    } else {
        Err(format!("{bad} nonzero combinations"))
    };
    report(3, res);
}

#[test]
fn criterion_04_projective_space_pair() {
    let members: Vec<Skeleton> = enumerate_exact(2, &CensusFilter::manifolds(2))
        .unwrap()
        .iter()
        .map(|t| Skeleton::build(t).unwrap())
        .filter(|s| h1(s) == AbelianInvariants::cyclic(2))
        .collect();
    let res = (|| {
        if members.len() != 2 {
            return Err(format!("{} members with H1 = Z/2", members.len()));
        }
        let mut kinds = Vec::new();
        for s in &members {
            if clusters_of_three(&build_q_system(s).unwrap()).is_empty() {
                return Err("a member without clusters".into());
            }
            kinds.push((is_face_generic(s).value, is_face_pair_reduced(s).value));
        }
        let one_generic_unreduced = kinds.iter().filter(|k| **k == (true, false)).count() == 1;
        let one_not_generic = kinds.iter().filter(|k| !k.0).count() == 1;
        if one_generic_unreduced && one_not_generic {
            Ok("two members, both with clusters; one generic and not pair-reduced, one not generic".into())
        } else {
            Err(format!("predicates {kinds:?}"))
        }
    })();
    report(4, res);
}

/// Labels allowed without Klein or projective squares, with the refinement
/// each degenerate label must carry.
fn restricted_ok(label: &str, refined: Option<Refined>, reduced: bool) -> bool {
    match label {
        "AAA" | "AAC" | "ABB" | "ABE" | "ACC" => true,
        "BBC" => !reduced,
        "BBD" => refined == Some(Refined::SBbd),
        "BDE" => {
            if reduced {
                refined == Some(Refined::Lst321)
            } else {
                matches!(refined, Some(Refined::SBde | Refined::Lst321))
            }
        }
        _ => false,
    }
}

#[test]
fn criterion_05_tetrahedron_types() {
    let mut violations = Vec::new();
    let (mut generic_members, mut restricted_members) = (0, 0);
    for (t, s) in orientable_census(3)
        .iter()
        .filter(|(_, s)| s.vertex_links().iter().all(|l| l.is_sphere()))
    {
        if !is_face_generic(s).value {
            continue;
        }
        generic_members += 1;
        let reduced = is_face_pair_reduced(s).value;
        let bad_squares = all_squares(s).iter().any(|sq| {
            matches!(
                sq.topological_type,
                TopologicalType::Klein | TopologicalType::Projective
            )
        });
        for tet in 0..s.tet_count() {
            let ty = tetra_type(s, tet);
            if !GENERIC_LABELS.contains(&ty.label.as_str()) {
                violations.push(format!("{} outside the list in\n{}", ty.partition, t.to_table()));
            }
            if !bad_squares && !restricted_ok(&ty.label, ty.refined, reduced) {
                violations.push(format!(
                    "{} ({:?}) not allowed in\n{}",
                    ty.label,
                    ty.refined,
                    t.to_table()
                ));
            }
        }
        if !bad_squares && reduced {
            restricted_members += 1;
        }
    }
    let res = if violations.is_empty() {
        Ok(format!(
            "{generic_members} generic members, {restricted_members} with the restricted list"
        ))
    } else {
        Err(format!("{} violations, first: {}", violations.len(), violations[0]))
    };
    report(5, res);
}

#[test]
fn criterion_06_capped_surface_bound() {
    let mut count = 0;
    let mut bad = Vec::new();
    for (t, s) in skeletons(&CensusFilter::manifolds(3)) {
        for p in capped_two_square_surfaces(&s) {
            count += 1;
            let chi = p.resolved_surface.euler_characteristic;
            if !(-1..=2).contains(&chi) {
                bad.push(format!("chi {chi} in\n{}", t.to_table()));
            }
        }
    }
    let res = if bad.is_empty() && count > 0 {
        Ok(format!("{count} capped surfaces, all with -1 <= chi <= 2"))
    } else if count == 0 {
        Err("no capped surfaces found".into())
    } else {
        Err(format!("{} violations, first: {}", bad.len(), bad[0]))
    };
    report(6, res);
}

#[test]
fn criterion_07_hypotheses_exclude_clusters() {
    let catalog = PatternCatalog::builtin();
    let census = enumerate(&CensusFilter::manifolds(3)).unwrap();
    let mut corpus: Vec<Triangulation> = census.iter().filter(|t| t.tet_count() == 3).cloned().collect();
    corpus.extend(
        census
            .iter()
            .filter(|t| t.tet_count() <= 2)
            .map(barycentric_subdivision),
    );
    let (mut certified, mut violations) = (0, Vec::new());
    for t in &corpus {
        let s = Skeleton::build(t).unwrap();
        let r = check_cluster_theorem(&s, &catalog).unwrap();
        if !r.certifies_cluster_free() {
            continue;
        }
        certified += 1;
        if !clusters_of_three(&build_q_system(&s).unwrap()).is_empty() {
            violations.push(t.to_table());
        }
    }
    let res = if !violations.is_empty() {
        Err(format!(
            "{} inputs with clusters, first:\n{}",
            violations.len(),
            violations[0]
        ))
    } else if certified == 0 {
        Err("no input satisfies the hypotheses".into())
    } else {
        Ok(format!(
            "{} inputs, {certified} satisfy all hypotheses, none has a cluster",
            corpus.len()
        ))
    };
    report(7, res);
}

#[test]
fn criterion_08_haken_projection() {
    let mut failures = Vec::new();
    let mut vectors = 0;
    for (t, s) in orientable_census(2) {
        let q = build_q_system(&s).unwrap();
        match haken_projection_check(&s, &q) {
            Ok(n) => vectors += n,
            Err(i) => failures.push(format!("vector {i} of\n{}", t.to_table())),
        }
    }
    let res = if failures.is_empty() {
        Ok(format!("{vectors} kernel vectors project into the Q-system"))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    };
    report(8, res);
}

#[test]
fn criterion_09_convention_independence() {
    let census = orientable_census(2);
    let mut failures = 0;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, s) in &census {
            let base = build_q_system(s).unwrap();
            let tet_signs: Vec<i32> = base
                .tet_signs
                .iter()
                .map(|&x| if rng.gen_bool(0.5) { -x } else { x })
                .collect();
            let edge_signs: Vec<i32> = (0..base.rows())
                .map(|_| if rng.gen_bool(0.5) { -1 } else { 1 })
                .collect();
            let flipped = build_q_system_with(s, &tet_signs, &edge_signs);
            let render = |q| {
                let sup = solution_supports(q);
                let coincident: Vec<bool> = clusters_of_three(q).iter().map(|c| c.coincident).collect();
                format!(
                    "{sup:?} {coincident:?} {} {}",
                    is_face_generic(s).value,
                    is_face_pair_reduced(s).value
                )
            };
            if render(&base) != render(&flipped) {
                failures += 1;
            }
        }
    }
    let res = if failures == 0 {
        Ok(format!("10 seeds over {} members, identical outputs", census.len()))
    } else {
        Err(format!("{failures} runs differ"))
    };
    report(9, res);
}

#[test]
fn criterion_10_small_census_homology() {
    let groups: BTreeSet<AbelianInvariants> = skeletons(&CensusFilter::manifolds(2))
        .iter()
        .map(|(_, s)| h1(s))
        .collect();
    let wanted = [
        AbelianInvariants::trivial(),
        AbelianInvariants::cyclic(2),
        AbelianInvariants::cyclic(3),
        AbelianInvariants::cyclic(4),
        AbelianInvariants::cyclic(5),
        AbelianInvariants::cyclic(7),
        AbelianInvariants::cyclic(8),
        AbelianInvariants {
            rank: 0,
            torsion: vec![2, 2],
        },
    ];
    let missing: Vec<String> = wanted
        .iter()
        .filter(|g| !groups.contains(g))
        .map(ToString::to_string)
        .collect();
    let found: Vec<String> = groups.iter().map(ToString::to_string).collect();
    let res = if missing.is_empty() {
        Ok(format!("found {}", found.join(", ")))
    } else {
        Err(format!("missing {}", missing.join(", ")))
    };
    report(10, res);
}
