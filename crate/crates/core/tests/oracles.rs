//! Implementation results checked against independent brute-force oracles.

use std::collections::BTreeSet;

use vecgroupoid::{
    check_all, induced_groupoid, null_groupoid, pair_groupoid, single_unit_groupoid, FieldSpec,
    GroupoidOps, Matrix, Multiplication, SuiteSelection, VectorGroupoid,
};

fn gf(p: u32) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

/// Every vector of GF(p)^n in little-endian index order, built by counting.
fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (0..p).map(move |d| [v.clone(), vec![d]].concat()))
            .collect();
    }
    // reorder so that the first coordinate varies fastest
    out.sort_by_key(|v| {
        v.iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p as u64 + d as u64)
    });
    out
}

fn mat_vec(p: u32, rows: usize, cols: usize, entries: &[u32], v: &[u32]) -> Vec<u32> {
    (0..rows)
        .map(|r| (0..cols).map(|c| entries[r * cols + c] * v[c]).sum::<u32>() % p)
        .collect()
}

/// rank = log_p of the size of the image of A (or of A^T when that is the
/// smaller enumeration), found by enumerating every product.
fn brute_rank(p: u32, rows: usize, cols: usize, entries: &[u32]) -> usize {
    if cols > rows {
        let transposed: Vec<u32> = (0..cols)
            .flat_map(|c| (0..rows).map(move |r| entries[r * cols + c]))
            .collect();
        return brute_rank(p, cols, rows, &transposed);
    }
    let image: BTreeSet<Vec<u32>> = all_vectors(p, cols)
        .iter()
        .map(|v| mat_vec(p, rows, cols, entries, v))
        .collect();
    let mut size = image.len();
    let mut rank = 0;
    while size > 1 {
        size /= p as usize;
        rank += 1;
    }
    rank
}

fn all_matrices(p: u32, rows: usize, cols: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as usize).pow((rows * cols) as u32);
    (0..count).map(move |mut idx| {
        (0..rows * cols)
            .map(|_| {
                let d = (idx % p as usize) as u32;
                idx /= p as usize;
                d
            })
            .collect()
    })
}

#[test]
fn rank_and_kernel_agree_with_enumeration() {
    for p in [2u32, 3] {
        for rows in 1..=9 {
            for cols in 1..=9 / rows {
                for entries in all_matrices(p, rows, cols) {
                    let a = Matrix::new(gf(p), rows, cols, entries.clone()).unwrap();
                    let rank = a.rank();
                    assert_eq!(rank, brute_rank(p, rows, cols, &entries), "{a}");
                    let kernel = a.kernel_basis();
                    assert_eq!(kernel.len() + rank, cols);
                    for v in &kernel {
                        assert!(a.apply(v).unwrap().iter().all(|&c| c == 0));
                    }
                    if !kernel.is_empty() {
                        let stacked = Matrix::from_rows(gf(p), cols, &kernel).unwrap();
                        assert_eq!(stacked.rank(), kernel.len());
                    }
                }
            }
        }
    }
}

#[test]
fn solve_returns_exact_solutions() {
    for entries in all_matrices(3, 2, 2) {
        let a = Matrix::new(gf(3), 2, 2, entries.clone()).unwrap();
        for b in all_vectors(3, 2) {
            let reachable = all_vectors(3, 2)
                .iter()
                .any(|x| mat_vec(3, 2, 2, &entries, x) == b);
            match a.solve(&b) {
                Ok(x) => assert_eq!(a.apply(&x).unwrap(), b),
                Err(_) => assert!(!reachable, "{a} x = {b:?} has a solution"),
            }
        }
    }
}

#[test]
fn kernel_of_one_one_by_enumeration() {
    let zeros: Vec<Vec<u32>> = all_vectors(2, 2)
        .into_iter()
        .filter(|v| (v[0] + v[1]) % 2 == 0)
        .collect();
    assert_eq!(zeros, vec![vec![0, 0], vec![1, 1]]);
    let a = Matrix::from_rows(gf(2), 2, &[vec![1, 1]]).unwrap();
    assert_eq!(a.kernel_basis(), vec![vec![1, 1]]);
}

/// `sum over u of |beta^{-1}(u)| * |alpha^{-1}(u)|`
fn composable_count_oracle(g: &VectorGroupoid) -> usize {
    g.base()
        .iter()
        .map(|u| {
            let alpha_fibre = g.total().iter().filter(|&x| g.source(x) == Ok(u)).count();
            let beta_fibre = g.total().iter().filter(|&x| g.target(x) == Ok(u)).count();
            alpha_fibre * beta_fibre
        })
        .sum()
}

fn sample_groupoids() -> Vec<VectorGroupoid> {
    vec![
        pair_groupoid(gf(2), 1).unwrap(),
        pair_groupoid(gf(3), 1).unwrap(),
        pair_groupoid(gf(2), 2).unwrap(),
        null_groupoid(gf(2), 1).unwrap(),
        null_groupoid(gf(3), 2).unwrap(),
        single_unit_groupoid(gf(2), 2).unwrap(),
        single_unit_groupoid(gf(5), 1).unwrap(),
        induced_groupoid(
            &pair_groupoid(gf(3), 1).unwrap(),
            &Matrix::from_rows(gf(3), 2, &[vec![1, 2]]).unwrap(),
            2,
        )
        .unwrap()
        .structure,
    ]
}

#[test]
fn composable_pair_counts_match_fibre_counting() {
    for g in sample_groupoids() {
        let pairs = g.composable_pairs().unwrap();
        assert_eq!(pairs.len(), composable_count_oracle(&g));
        // ascending lexicographic
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        // compose succeeds exactly on the composable pairs
        let set: BTreeSet<_> = pairs.iter().copied().collect();
        for x in g.total().iter() {
            for y in g.total().iter() {
                assert_eq!(g.compose(x, y).is_ok(), set.contains(&(x, y)));
            }
        }
    }
}

#[test]
fn composable_pair_examples() {
    assert_eq!(
        pair_groupoid(gf(2), 1)
            .unwrap()
            .composable_pairs()
            .unwrap()
            .len(),
        8
    );
    assert_eq!(
        null_groupoid(gf(2), 1).unwrap().composable_pairs().unwrap(),
        vec![(0, 0), (1, 1)]
    );
    assert_eq!(
        single_unit_groupoid(gf(2), 2)
            .unwrap()
            .composable_pairs()
            .unwrap()
            .len(),
        16
    );
}

#[test]
fn exported_tables_cover_exactly_the_composable_pairs() {
    for g in sample_groupoids() {
        let table = g.to_table().unwrap();
        let Multiplication::Table(entries) = table.multiplication() else {
            panic!("to_table produced a formula backend");
        };
        let keys: Vec<_> = entries.keys().copied().collect();
        assert_eq!(keys, g.composable_pairs().unwrap());
        assert!(check_all(&table, SuiteSelection::ALL).unwrap().all_passed());
    }
}

#[test]
fn isotropy_groups_are_closed() {
    for g in sample_groupoids() {
        for u in g.base().iter() {
            let group = g.isotropy_group(u).unwrap();
            let set: BTreeSet<_> = group.elements.iter().copied().collect();
            for &a in &group.elements {
                for &b in &group.elements {
                    assert!(set.contains(&g.compose(a, b).unwrap()));
                }
            }
        }
    }
}

#[test]
fn pair_groupoid_element_examples() {
    let g = pair_groupoid(gf(2), 1).unwrap();
    // (x, y) <-> x + 2y
    assert_eq!(g.source(1), Ok(1));
    assert_eq!(g.unit(1), Ok(3));
    assert_eq!(g.invert(1), Ok(2));
    assert_eq!(g.compose(1, 2), Ok(3));
    assert_eq!(g.compose(0, 0), Ok(0));
    assert!(matches!(
        g.compose(1, 3),
        Err(vecgroupoid::Error::NotComposable {
            beta_x: 0,
            alpha_y: 1,
            ..
        })
    ));
}

#[test]
fn isotropy_examples() {
    let pair = pair_groupoid(gf(2), 1).unwrap();
    assert_eq!(pair.isotropy_group(0).unwrap().elements, vec![0]);
    let null = null_groupoid(gf(2), 1).unwrap();
    assert_eq!(null.isotropy_group(1).unwrap().elements, vec![1]);
    let single = single_unit_groupoid(gf(2), 2).unwrap();
    let group = single.isotropy_group(0).unwrap();
    assert_eq!(group.elements, vec![0, 1, 2, 3]);
    // Cayley table is vector addition
    for (i, &a) in group.elements.iter().enumerate() {
        for (j, &b) in group.elements.iter().enumerate() {
            assert_eq!(group.elements[group.table[i][j]], a ^ b);
        }
    }
}

#[test]
fn conjugation_examples() {
    let pair = pair_groupoid(gf(2), 1).unwrap();
    let phi = pair.isotropy_conjugation(1).unwrap();
    assert_eq!(phi.domain.elements, vec![3]);
    assert_eq!(phi.codomain.elements, vec![0]);
    assert_eq!(phi.apply(3), Some(0));

    let single = single_unit_groupoid(gf(2), 2).unwrap();
    let phi = single.isotropy_conjugation(3).unwrap();
    for z in 0..4 {
        assert_eq!(phi.apply(z), Some(z));
    }

    // conjugating by a unit is the identity
    for g in sample_groupoids() {
        for u in g.base().iter() {
            let phi = g.isotropy_conjugation(g.unit(u).unwrap()).unwrap();
            assert!(phi.map.iter().all(|&(a, b)| a == b));
        }
    }
}

#[test]
fn induced_structure_identities_hold_for_every_element() {
    let parent = pair_groupoid(gf(2), 1).unwrap();
    for h in [Matrix::identity(gf(2), 1), Matrix::zeros(gf(2), 1, 1)] {
        let ig = induced_groupoid(&parent, &h, 1).unwrap();
        let s = &ig.structure;
        for w in s.total().iter() {
            let a_star = GroupoidOps::source(s, w);
            let b_star = GroupoidOps::target(s, w);
            assert_eq!(
                GroupoidOps::compose(s, GroupoidOps::unit(s, a_star), w),
                Some(w)
            );
            assert_eq!(
                GroupoidOps::compose(s, GroupoidOps::invert(s, w), w),
                Some(GroupoidOps::unit(s, b_star))
            );
            // ambient triple satisfies the defining constraints
            let triple = ig.rule().decode(w).unwrap();
            let (x, y, a) = (&triple[..1], &triple[1..2], &triple[2..]);
            assert_eq!(h.apply(x).unwrap(), parent.alpha().apply(a).unwrap());
            assert_eq!(h.apply(y).unwrap(), parent.beta().apply(a).unwrap());
        }
    }
}
