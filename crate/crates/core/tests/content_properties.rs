//! Property suite for the content function and its interaction with
//! abelianization and homomorphisms.

use confrep_core::freegroup::{
    commutator, random_hom, Bivector, Letter, Sign, Word,
};
use confrep_core::rng::SplitMix64;
use confrep_core::{Int, Rat};
use proptest::prelude::*;

fn rat(x: i64) -> Rat {
    Rat::from_integer(Int::from(x))
}

fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (1..=rank, prop::bool::ANY).prop_map(|(index, neg)| Letter {
            index,
            sign: if neg { Sign::Minus } else { Sign::Plus },
        }),
        0..=max_len,
    )
}

fn ranked_words(max_rank: usize) -> impl Strategy<Value = (usize, Word, Word)> {
    (1..=max_rank).prop_flat_map(move |rank| {
        (letters(rank, 40), letters(rank, 40)).prop_map(move |(la, lb)| {
            (
                rank,
                Word::reduce(rank, la).unwrap(),
                Word::reduce(rank, lb).unwrap(),
            )
        })
    })
}

proptest! {
    #[test]
    fn content_is_spelling_independent((rank, a, _b) in ranked_words(6), pad in letters(6, 10)) {
        // Interleave cancelling pairs of the padding letters into a's
        // spelling; the element, hence the content, must not change.
        let mut spelled: Vec<Letter> = Vec::new();
        let mut pad_iter = pad.into_iter().filter(|l| l.index <= rank);
        for &l in a.letters() {
            if let Some(p) = pad_iter.next() {
                spelled.push(p);
                spelled.push(p.inverse());
            }
            spelled.push(l);
        }
        let respelled = Word::reduce(rank, spelled).unwrap();
        prop_assert_eq!(&respelled, &a);
        prop_assert_eq!(respelled.content(), a.content());
    }

    #[test]
    fn content_of_inverse_negates((_rank, a, _b) in ranked_words(6)) {
        prop_assert_eq!(a.inverse().content(), a.content().neg());
    }

    #[test]
    fn content_product_rule((_rank, a, b) in ranked_words(6)) {
        let lhs = a.mul(&b).content();
        let rhs = a
            .content()
            .add(&b.content())
            .add(&Bivector::wedge_vectors(&a.abelianize(), &b.abelianize()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn content_of_commutator((_rank, a, b) in ranked_words(6)) {
        let expected =
            Bivector::wedge_vectors(&a.abelianize(), &b.abelianize()).scale(&rat(2));
        prop_assert_eq!(commutator(&a, &b).content(), expected);
    }

    #[test]
    fn content_kills_double_commutators((rank, a, b) in ranked_words(5), lc in letters(5, 12)) {
        let c = Word::reduce(rank, lc.into_iter().filter(|l| l.index <= rank)).unwrap();
        prop_assert!(commutator(&a, &commutator(&b, &c)).content().is_zero());
    }

    #[test]
    fn abelianization_is_natural((rank, w, _b) in ranked_words(4)) {
        let mut rng = SplitMix64::new(rank as u64);
        let target = 1 + rank % 3;
        let f = random_hom(rank, target, 6, &mut rng);
        let lhs = f.apply(&w).unwrap().abelianize();
        let m = f.abelianization_matrix();
        let v: Vec<Rat> = w.abelianize().into_iter().map(Rat::from_integer).collect();
        let rhs: Vec<Int> = m
            .mul_vec(&v)
            .into_iter()
            .map(|x| {
                assert!(x.is_integer());
                x.to_integer()
            })
            .collect();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn compose_is_associative_on_random_triples() {
    let mut rng = SplitMix64::new(314);
    for _ in 0..100 {
        let (n, m, k, l) = (
            rng.range_usize(1, 3),
            rng.range_usize(1, 3),
            rng.range_usize(1, 3),
            rng.range_usize(1, 3),
        );
        let f = random_hom(k, l, 6, &mut rng);
        let g = random_hom(m, k, 6, &mut rng);
        let h = random_hom(n, m, 6, &mut rng);
        let left = f.compose(&g.compose(&h).unwrap()).unwrap();
        let right = f.compose(&g).unwrap().compose(&h).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn basis_dependence_of_content() {
    // In the α-basis the word β1 = α1 α2 has content e1 ∧ e2; rewriting the
    // same element as the single letter of a β-basis gives zero. Both
    // numbers are pinned.
    let alpha_expr = Word::parse(2, "a1 a2").unwrap();
    assert_eq!(alpha_expr.content().get(1, 2), rat(1));
    let beta_letter = Word::parse(2, "a1").unwrap();
    assert!(beta_letter.content().is_zero());
}
