//! Slice-level invariants: the structured/brute-force agreement on a small
//! grid, the action's group law over catalog products, pure symplectic
//! slices, and vanishing bounds.

use confrep_core::cohomology::SliceContext;
use confrep_core::mcg::{parse_catalog, separating_twist, MappingClass};
use confrep_core::rng::SplitMix64;

const CATALOG_G2: &str = include_str!("../../cli/data/catalog_g2.txt");

#[test]
fn structured_equals_brute_force_grid() {
    for g in 0..=2 {
        let ctx = SliceContext::new(g);
        for i in 0..=5 {
            for n in 0..=5 {
                assert_eq!(
                    ctx.slice_basis(i, n).len(),
                    ctx.brute_force_slice_dim(i, n),
                    "g={g}, i={i}, n={n}"
                );
            }
        }
    }
}

#[test]
fn golden_dimension_tables() {
    // Frozen from the dual-route computation (structured V/K bases against
    // the brute-force differential ranks), which agrees on this whole grid.
    let expected_g1: [[usize; 7]; 7] = [
        [1, 1, 1, 1, 1, 1, 1],
        [0, 2, 2, 2, 2, 2, 2],
        [0, 0, 2, 4, 4, 4, 4],
        [0, 0, 0, 4, 5, 5, 5],
        [0, 0, 0, 0, 3, 7, 7],
        [0, 0, 0, 0, 0, 6, 8],
        [0, 0, 0, 0, 0, 0, 4],
    ];
    let expected_g2: [[usize; 7]; 7] = [
        [1, 1, 1, 1, 1, 1, 1],
        [0, 4, 4, 4, 4, 4, 4],
        [0, 0, 9, 9, 9, 9, 9],
        [0, 0, 0, 16, 21, 21, 21],
        [0, 0, 0, 0, 30, 34, 34],
        [0, 0, 0, 0, 0, 40, 61],
        [0, 0, 0, 0, 0, 0, 70],
    ];
    for (g, expected) in [(1usize, expected_g1), (2, expected_g2)] {
        let ctx = SliceContext::new(g);
        let table = ctx.dims_table(6, 6);
        for i in 0..=6 {
            for n in 0..=6 {
                assert_eq!(table[i][n], expected[i][n], "g={g}, i={i}, n={n}");
            }
        }
    }
}

#[test]
fn high_degrees_vanish() {
    // The manifold bound is i > 2n; the slice structure in fact forces
    // vanishing already for i > n.
    for g in 0..=4 {
        let ctx = SliceContext::new(g);
        for n in 0..=6 {
            for i in (n + 1)..=(2 * n + 2) {
                assert_eq!(ctx.slice_basis(i, n).len(), 0, "g={g}, i={i}, n={n}");
            }
        }
    }
}

#[test]
fn act_group_law_on_catalog_products() {
    let catalog = parse_catalog(CATALOG_G2).unwrap();
    let ctx = SliceContext::new(2);
    let mut rng = SplitMix64::new(4242);
    let entries = catalog.entries();
    let slices = [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)];
    for _ in 0..25 {
        let pick = |rng: &mut SplitMix64| -> MappingClass {
            let e = &entries[rng.range_usize(0, entries.len() - 1)].class;
            if rng.coin() {
                e.clone()
            } else {
                e.inverse().unwrap()
            }
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let (i, n) = slices[rng.range_usize(0, slices.len() - 1)];
        let basis = ctx.slice_basis(i, n);
        let lhs = ctx.act(&a.compose(&b), &basis).unwrap().matrix;
        let rhs = ctx
            .act(&a, &basis)
            .unwrap()
            .matrix
            .mul(&ctx.act(&b, &basis).unwrap().matrix);
        assert_eq!(lhs, rhs, "slice ({i}, ({n}))");
    }
}

#[test]
fn torelli_elements_act_trivially_on_pure_symplectic_slices() {
    // Slices with no y and no v see only the symplectic matrix, so any two
    // Torelli elements act the same there, namely as the identity.
    let catalog = parse_catalog(CATALOG_G2).unwrap();
    let ctx = SliceContext::new(2);
    let witness = confrep_core::mcg::nonsymplectic_witness(&catalog, 4).unwrap();
    let sep = separating_twist(2, 1);
    for (i, n) in [(1, 1), (2, 2), (1, 3), (2, 4)] {
        let basis = ctx.slice_basis(i, n);
        // Restrict attention to slices whose monomials are all pure.
        if basis
            .monomials()
            .iter()
            .any(|m| m.ypows.iter().any(|&p| p > 0) || matches!(m.class, confrep_core::cohomology::ClassPart::K { .. }))
        {
            continue;
        }
        let w = ctx.act(&witness.class, &basis).unwrap().matrix;
        let s = ctx.act(&sep, &basis).unwrap().matrix;
        assert!(w.is_identity(), "witness on pure slice ({i},{n})");
        assert!(s.is_identity(), "separating twist on pure slice ({i},{n})");
    }
}

#[test]
fn witness_acts_nontrivially_on_2_2() {
    let catalog = parse_catalog(CATALOG_G2).unwrap();
    let witness = confrep_core::mcg::nonsymplectic_witness(&catalog, 4).unwrap();
    let ctx = SliceContext::new(2);
    let basis = ctx.slice_basis(2, 2);
    let rep = ctx.act(&witness.class, &basis).unwrap();
    assert!(!rep.matrix.is_identity());
}

#[test]
fn slice_2_2_realizes_the_reduced_johnson_representation() {
    // The (2, (2)) slice basis is, up to a permutation, the reduced Johnson
    // module: V²-classes (pair monomials minus the ω-pivot) followed by the
    // y_i in reverse order. Conjugating by that permutation must turn act()
    // into johnson_rep(·, reduced) exactly, matrix entry by matrix entry.
    use confrep_core::johnson::johnson_rep;
    use confrep_core::matrix::RatMatrix;
    use confrep_core::Rat;

    for (g, text) in [
        (1usize, include_str!("../../cli/data/catalog_g1.txt")),
        (2, include_str!("../../cli/data/catalog_g2.txt")),
        (3, include_str!("../../cli/data/catalog_g3.txt")),
    ] {
        let catalog = parse_catalog(text).unwrap();
        let ctx = SliceContext::new(g);
        let basis = ctx.slice_basis(2, 2);
        let n = 2 * g;
        let pairs = confrep_core::binomial(n, 2) - 1;
        let dim = n + pairs;
        assert_eq!(basis.len(), dim);

        // rep index -> slice index: pair class j sits at j; y_i sits after
        // the pair block, in reverse generator order.
        let slice_of_rep = |r: usize| -> usize {
            if r < n {
                pairs + (n - 1 - r)
            } else {
                r - n
            }
        };
        let mut perm = RatMatrix::zero(dim, dim);
        for r in 0..dim {
            perm[(slice_of_rep(r), r)] = Rat::from_integer(1.into());
        }
        let perm_inv = perm.transpose();

        let mut classes: Vec<MappingClass> = catalog
            .entries()
            .iter()
            .map(|e| e.class.clone())
            .collect();
        classes.push(catalog.entries()[0].class.compose(&catalog.entries()[1].class));
        if g >= 2 {
            classes.push(separating_twist(g, 1));
        }
        for class in classes {
            let acted = ctx.act(&class, &basis).unwrap().matrix;
            let rep = johnson_rep(&class.aut().unwrap(), true).unwrap();
            let conjugated = perm.mul(rep.matrix()).mul(&perm_inv);
            assert_eq!(acted, conjugated, "g = {g}");
        }
    }
}

#[test]
fn character_of_trivially_acting_classes_is_the_dimension() {
    let ctx = SliceContext::new(2);
    let tw = confrep_core::mcg::boundary_twist(2);
    for (i, n) in [(1, 1), (2, 2), (2, 3), (3, 4)] {
        let dim = ctx.slice_basis(i, n).len();
        let chi = ctx.character(&tw, i, n).unwrap();
        assert_eq!(chi, confrep_core::Rat::from_integer((dim as i64).into()));
        let chi_id = ctx.character(&MappingClass::identity(2), i, n).unwrap();
        assert_eq!(chi_id, confrep_core::Rat::from_integer((dim as i64).into()));
    }
}

#[test]
fn euler_characteristics_cancel_rank_corrections() {
    for g in 0..=2 {
        let ctx = SliceContext::new(g);
        for n in 0..=5 {
            let structured = ctx.euler_characteristic(n, n + 1);
            let mut brute = 0i64;
            for i in 0..=n + 1 {
                let d = ctx.brute_force_slice_dim(i, n) as i64;
                brute += if i % 2 == 0 { d } else { -d };
            }
            assert_eq!(structured, brute, "g={g}, n={n}");
        }
    }
}
