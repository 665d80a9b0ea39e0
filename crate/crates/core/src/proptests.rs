//! Property tests for the algebraic invariants.

use proptest::prelude::*;

use crate::artin::{gen_from_hex, gen_from_params, verify_artin, Presentation, SurgeryParams};
use crate::braid::{classify, PureBraid};
use crate::free_product::{rho, BraidWord, FpLetter, FpWord};
use crate::hexatangle::{builtin_symmetries, parse_cell, HexFilling, LinearCell, Param};
use crate::triviality::{
    abelian_invariants, replay_is_trivial, simplify, smith_diagonal, TrivialityTag,
};
use crate::word::Word;

fn raw_word(rank: u32, max_len: usize) -> impl Strategy<Value = Vec<(u32, i64)>> {
    prop::collection::vec((1..=rank, prop_oneof![-2i64..=-1, 1i64..=2]), 0..max_len)
}

fn word(rank: u32, max_len: usize) -> impl Strategy<Value = Word> {
    raw_word(rank, max_len).prop_map(|r| Word::reduce(r).unwrap())
}

fn fp_word(max_len: usize) -> impl Strategy<Value = FpWord> {
    prop::collection::vec(
        prop_oneof![Just(FpLetter::D(1)), (1i64..=2).prop_map(FpLetter::Y)],
        0..max_len,
    )
    .prop_map(FpWord::reduce)
}

fn braid_word(max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(
        prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)],
        0..max_len,
    )
    .prop_map(|l| BraidWord::new(l).unwrap())
}

fn filling(r: i64) -> impl Strategy<Value = HexFilling> {
    prop::array::uniform6(-r..=r).prop_map(HexFilling)
}

/// Letter-by-letter reduction, the textbook algorithm.
fn naive_reduce(raw: &[(u32, i64)]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for &(g, e) in raw {
        let l = g as i64 * e.signum();
        for _ in 0..e.abs() {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
    }
    out
}

fn letters(w: &Word) -> Vec<i64> {
    w.syllables()
        .iter()
        .flat_map(|s| {
            std::iter::repeat_n(
                s.generator as i64 * s.exponent.signum(),
                s.exponent.unsigned_abs() as usize,
            )
        })
        .collect()
}

/// All reduced free-product words with at most `n` syllables.
fn all_fp_words(n: usize) -> Vec<FpWord> {
    let gens = [FpWord::delta(), FpWord::y(1), FpWord::y(2)];
    let mut out = vec![FpWord::identity()];
    let mut layer = vec![FpWord::identity()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for g in &gens {
                let v = w.concat(g);
                if v.len() == w.len() + 1 {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_matches_naive(raw in raw_word(3, 24)) {
        prop_assert_eq!(letters(&Word::reduce(raw.clone()).unwrap()), naive_reduce(&raw));
    }

    #[test]
    fn reduction_is_confluent(raw in raw_word(3, 24), cut in 0usize..24) {
        let cut = cut.min(raw.len());
        let whole = Word::reduce(raw.clone()).unwrap();
        let left = Word::reduce(raw[..cut].to_vec()).unwrap();
        let right = Word::reduce(raw[cut..].to_vec()).unwrap();
        prop_assert_eq!(&left * &right, whole);
    }

    #[test]
    fn inverse_and_powers(w in word(3, 12), a in -3i64..=3, b in -3i64..=3) {
        prop_assert!((&w * &w.inverse()).is_identity());
        prop_assert_eq!(&w.pow(a) * &w.pow(b), w.pow(a + b));
    }

    #[test]
    fn cyclic_reduce_reconstructs(w in word(3, 16)) {
        let (core, conj) = w.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(core.conjugate(&conj), w);
    }

    #[test]
    fn conjugates_share_a_cyclic_word(w in word(3, 12), g in word(3, 8)) {
        prop_assert!(w.is_conjugate(&w.conjugate(&g)));
        prop_assert_eq!(w.cyclic_word(), w.conjugate(&g).cyclic_word());
    }

    #[test]
    fn rotations_are_conjugates(w in word(3, 12), k in 0u64..20) {
        prop_assert!(w.is_conjugate(&w.rotate_letters(k)));
    }

    #[test]
    fn abelianization_is_a_homomorphism(a in word(3, 12), b in word(3, 12)) {
        let sum: Vec<i64> = a.abelianize(3).iter().zip(b.abelianize(3)).map(|(x, y)| x + y).collect();
        prop_assert_eq!((&a * &b).abelianize(3), sum);
    }

    #[test]
    fn word_text_round_trips(w in word(4, 16)) {
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w.clone());
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w);
    }

    #[test]
    fn fp_reduction_is_confluent(a in fp_word(10), b in fp_word(10), c in fp_word(10)) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert!(a.concat(&a.inverse()).is_empty());
    }

    #[test]
    fn fp_conjugacy_matches_search(a in fp_word(4), b in fp_word(4)) {
        // a conjugator never needs more syllables than the two words together
        let by_search = all_fp_words(a.len() + b.len()).iter().any(|g| a.conjugate(g) == b);
        prop_assert_eq!(a.is_conjugate(&b), by_search);
    }

    #[test]
    fn fp_conjugates_share_a_cyclic_word(w in fp_word(10), g in fp_word(6)) {
        prop_assert!(w.is_conjugate(&w.conjugate(&g)));
    }

    #[test]
    fn rho_is_a_homomorphism(a in braid_word(10), b in braid_word(10)) {
        let mut ab = a.clone();
        ab.extend(&b);
        prop_assert_eq!(rho(&ab), rho(&a).concat(&rho(&b)));
    }

    #[test]
    fn rho_respects_braid_relation(a in braid_word(6), b in braid_word(6)) {
        let with = |mid: &str| {
            let mut w = a.clone();
            w.extend(&mid.parse().unwrap());
            w.extend(&b);
            rho(&w)
        };
        prop_assert_eq!(with("s1*s2*s1"), with("s2*s1*s2"));
        prop_assert_eq!(with("s1*s2*s1*s1*s2*s1"), with("1"));
    }

    #[test]
    fn blockwise_rho_ignores_the_twist(
        blocks in prop::collection::vec((-2i64..=2, -2i64..=2), 0..4),
        e in -2i64..=2,
    ) {
        let b = PureBraid::new(blocks, e);
        prop_assert_eq!(b.rho_blocks(), crate::braid::rho_of_braid(&b));
    }

    #[test]
    fn classification_is_rotation_invariant(
        blocks in prop::collection::vec((-3i64..=3, -3i64..=3), 0..6),
        e in -3i64..=3,
        k in 0usize..6,
    ) {
        let mut rotated = blocks.clone();
        if !rotated.is_empty() {
            let k = k % rotated.len();
            rotated.rotate_left(k);
        }
        let a = classify(&PureBraid::new(blocks, e));
        let b = classify(&PureBraid::new(rotated, e));
        prop_assert_eq!(a.tag, b.tag);
        let (x, y) = (&a.normalized.blocks, &b.normalized.blocks);
        prop_assert_eq!(x.len(), y.len());
        prop_assert!(x.is_empty() || (0..x.len()).any(|k| x[k..].iter().chain(&x[..k]).eq(y.iter())));
    }

    #[test]
    fn normalization_keeps_the_closure(blocks in prop::collection::vec((-2i64..=2, -2i64..=2), 0..5), e in -2i64..=2) {
        let b = PureBraid::new(blocks, e);
        let n = b.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert_eq!(rho(&n.to_braid_word()), rho(&b.to_braid_word()));
        prop_assert!(rho(&b.cyclic_normalize().to_braid_word()).is_conjugate(&rho(&b.to_braid_word())));
    }

    #[test]
    fn surgery_presentations_are_w_artin(v in prop::array::uniform6(-4i64..=4)) {
        let s = SurgeryParams::new(v[0], v[1], v[2], v[3], v[4], v[5]);
        prop_assert!(verify_artin(&gen_from_params(&s)).unwrap().w);
    }

    #[test]
    fn surgery_composes_with_filling(h in filling(3)) {
        let a = gen_from_params(&SurgeryParams::from(&h.to_surgery()));
        prop_assert_eq!(a.relators, gen_from_hex(&h).relators);
    }

    #[test]
    fn verdict_ignores_unreduced_input(raw in prop::collection::vec(raw_word(3, 10), 3)) {
        // rebuild each relator letter by letter with cancelling pairs inserted
        let reduced: Vec<Word> = raw.iter().map(|r| Word::reduce(r.clone()).unwrap()).collect();
        let padded: Vec<Word> = raw
            .iter()
            .map(|r| {
                let mut p = r.clone();
                p.insert(0, (2, 1));
                p.insert(1, (2, -1));
                Word::reduce(p).unwrap()
            })
            .collect();
        let a = verify_artin(&Presentation::new(3, reduced).unwrap()).unwrap();
        let b = verify_artin(&Presentation::new(3, padded).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn symmetries_preserve_the_linking_determinant(h in filling(5), k in 1usize..=24) {
        let det = |h: &HexFilling| {
            let [a, b, g, d, e, n] = h.0.map(i128::from);
            let m = [[a + d + n, d + n, n], [d + n, b + g + d + n, g + n], [n, g + n, e + g + n]];
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let image = builtin_symmetries().apply(k, &h).unwrap();
        prop_assert_eq!(det(&image).abs(), det(&h).abs());
    }

    #[test]
    fn symmetries_preserve_abelian_invariants(h in filling(3), k in 1usize..=24) {
        let image = builtin_symmetries().apply(k, &h).unwrap();
        prop_assert_eq!(abelian_invariants(&gen_from_hex(&image)), abelian_invariants(&gen_from_hex(&h)));
    }

    #[test]
    fn orbits_are_closed(h in filling(3), k in 1usize..=24) {
        let orbit = builtin_symmetries().orbit(&h, false);
        let image = builtin_symmetries().apply(k, &h).unwrap();
        prop_assert_eq!(builtin_symmetries().orbit(&image, false), orbit);
    }

    #[test]
    fn cells_round_trip(pm in any::<bool>(), c in 1i64..=5, neg in any::<bool>(), var in prop::option::of(0usize..6), coeff_neg in any::<bool>(), var_first in any::<bool>()) {
        let var = var.map(|i| Param::ALL[i]);
        let cell = LinearCell {
            pm,
            constant: if neg && !pm { -c } else { c },
            coeff: if var.is_some() { if coeff_neg { -1 } else { 1 } } else { 0 },
            var,
            var_first: var.is_some() && var_first && !pm,
        };
        let text = cell.to_string();
        prop_assert_eq!(parse_cell(&text).unwrap(), cell, "{}", text);
    }

    #[test]
    fn smith_form_ignores_unimodular_moves(
        m in prop::array::uniform3(prop::array::uniform3(-4i64..=4)),
        i in 0usize..3, j in 0usize..3, q in -3i64..=3, cols in any::<bool>(),
    ) {
        let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.to_vec()).collect();
        let before = smith_diagonal(&a);
        if i != j {
            if cols {
                for row in a.iter_mut() {
                    row[j] += q * row[i];
                }
            } else {
                let src = a[i].clone();
                for (x, y) in a[j].iter_mut().zip(&src) {
                    *x += q * y;
                }
            }
        }
        a.swap(0, 2);
        prop_assert_eq!(smith_diagonal(&a), before.clone());
        let d = before;
        for w in d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
    }

    #[test]
    fn invariants_ignore_relator_moves(rels in prop::collection::vec(word(3, 8), 3), g in word(3, 5), t in 0usize..3, s in 0usize..3) {
        let base = Presentation::new(3, rels.clone()).unwrap();
        let mut moved = rels;
        moved[t] = moved[t].conjugate(&g).inverse();
        if s != t {
            moved[t] = &moved[t] * &moved[s];
        }
        prop_assert_eq!(abelian_invariants(&Presentation::new(3, moved).unwrap()), abelian_invariants(&base));
    }

    #[test]
    fn simplifier_is_deterministic_and_sound(h in filling(2)) {
        let p = gen_from_hex(&h);
        let a = simplify(&p, 2_000);
        prop_assert_eq!(&a, &simplify(&p, 2_000));
        let inv = abelian_invariants(&p);
        if !inv.is_trivial() {
            prop_assert_ne!(a.tag, TrivialityTag::Trivial);
        }
        if a.tag == TrivialityTag::Trivial {
            prop_assert_eq!(a.divisors.clone(), vec![1, 1, 1]);
            prop_assert!(replay_is_trivial(&p, &a.moves));
        }
    }
}

#[test]
fn brute_force_conjugacy_finds_known_pairs() {
    let a: FpWord = "D*y".parse().unwrap();
    let b: FpWord = "y*D".parse().unwrap();
    assert!(all_fp_words(2).iter().any(|g| a.conjugate(g) == b));
}
