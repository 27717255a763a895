use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use surface_braids::abelian::{delta_coinvariants, snf, tower_abelianization, Matrix, TowerLevel};
use surface_braids::combing::{section_s, Comber};
use surface_braids::free::{FreeAut, FreeWord};
use surface_braids::homs::{self, QuatElement};
use surface_braids::presentations::build_gamma_rp2;
use surface_braids::verify::gamma_alphabet;
use surface_braids::{AbelianInvariants, Generator, Word};

fn word_over(alphabet: Vec<Generator>, max_len: usize) -> impl Strategy<Value = Word> {
    let n = alphabet.len();
    prop::collection::vec((0..n, prop_oneof![-2i64..=-1, 1i64..=2]), 0..=max_len)
        .prop_map(move |ls| Word::from_letters(ls.into_iter().map(|(k, e)| (alphabet[k], e))))
}

/// `A`, `tau` and `rho` letters of `P_n(RP^2)`.
fn pn_alphabet(n: usize) -> Vec<Generator> {
    let mut out: Vec<Generator> = (1..=n)
        .flat_map(|k| [Generator::Tau(k), Generator::Rho(k)])
        .collect();
    for j in 2..=n {
        out.extend((1..j).map(|i| Generator::A(i, j)));
    }
    out
}

fn pn_rho_alphabet(n: usize) -> Vec<Generator> {
    pn_alphabet(n)
        .into_iter()
        .filter(|g| !matches!(g, Generator::Tau(_)))
        .collect()
}

fn sigma_alphabet(n: usize) -> Vec<Generator> {
    (1..n).map(Generator::Sigma).collect()
}

fn det(m: &[Vec<i64>]) -> BigInt {
    if m.is_empty() {
        return BigInt::from(1);
    }
    let mut acc = BigInt::from(0);
    for c in 0..m.len() {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != c)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let term = BigInt::from(m[0][c]) * det(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariants from determinantal divisors: `d_k` is the gcd of all `k x k`
/// minors and the invariant factors are `d_k / d_{k-1}`.
fn determinantal_invariants(m: &[Vec<i64>], rows: usize, cols: usize) -> AbelianInvariants {
    let mut divisors = vec![BigInt::from(1)];
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::from(0);
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c]).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == BigInt::from(0) {
            break;
        }
        divisors.push(g);
    }
    let rank = divisors.len() - 1;
    let torsion = divisors
        .windows(2)
        .map(|w| &w[1] / &w[0])
        .filter(|d| *d != BigInt::from(1))
        .collect();
    AbelianInvariants {
        free_rank: rows - rank,
        torsion,
    }
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r).prop_map(move |m| (r, c, m))
    })
}

#[derive(Clone, Debug)]
enum Op {
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    AddRow(usize, usize, i64),
    AddCol(usize, usize, i64),
    NegRow(usize),
}

fn ops() -> impl Strategy<Value = Vec<Op>> {
    let op = prop_oneof![
        (0usize..8, 0usize..8).prop_map(|(a, b)| Op::SwapRows(a, b)),
        (0usize..8, 0usize..8).prop_map(|(a, b)| Op::SwapCols(a, b)),
        (0usize..8, 0usize..8, -3i64..=3).prop_map(|(a, b, k)| Op::AddRow(a, b, k)),
        (0usize..8, 0usize..8, -3i64..=3).prop_map(|(a, b, k)| Op::AddCol(a, b, k)),
        (0usize..8).prop_map(Op::NegRow),
    ];
    prop::collection::vec(op, 0..12)
}

fn nielsen_moves(rank: usize) -> impl Strategy<Value = Vec<(usize, usize, bool, bool)>> {
    prop::collection::vec((0..rank, 0..rank, any::<bool>(), any::<bool>()), 0..8)
}

/// Product of elementary Nielsen automorphisms: `x_a -> x_a x_b^{+-1}`
/// (or `x_b^{+-1} x_a`), plus inversion of `x_a` when `a == b`.
fn nielsen_aut(rank: usize, moves: &[(usize, usize, bool, bool)]) -> FreeAut {
    let mut acc = FreeAut::identity(rank);
    for &(a, b, left, inv) in moves {
        let mut images: Vec<FreeWord> = (0..rank).map(FreeWord::basis).collect();
        let xa = a as i32 + 1;
        images[a] = if a == b {
            FreeWord::from_letters([-xa])
        } else {
            let xb = if inv { -(b as i32 + 1) } else { b as i32 + 1 };
            if left {
                FreeWord::from_letters([xb, xa])
            } else {
                FreeWord::from_letters([xa, xb])
            }
        };
        acc = FreeAut::from_images(images).compose(&acc);
    }
    acc
}

proptest! {
    #[test]
    fn word_text_round_trip(w in word_over(pn_alphabet(5), 20)) {
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn word_group_laws(u in word_over(gamma_alphabet(2), 10), v in word_over(gamma_alphabet(2), 10), w in word_over(gamma_alphabet(2), 10)) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        prop_assert!(u.concat(&u.inverse()).is_empty());
        prop_assert!(u.inverse().concat(&u).is_empty());
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert_eq!(u.concat(&v).inverse(), v.inverse().concat(&u.inverse()));
    }

    #[test]
    fn iota_sharp_is_homomorphism(u in word_over(pn_alphabet(4), 12), v in word_over(pn_alphabet(4), 12)) {
        let lhs = homs::iota_sharp(4, &u.concat(&v)).unwrap();
        prop_assert_eq!(lhs, homs::iota_sharp(4, &u).unwrap().add(&homs::iota_sharp(4, &v).unwrap()));
    }

    #[test]
    fn iota_hat_is_homomorphism(u in word_over(gamma_alphabet(3), 12), v in word_over(gamma_alphabet(3), 12)) {
        let lhs = homs::iota_hat(3, &u.concat(&v)).unwrap();
        prop_assert_eq!(lhs, homs::iota_hat(3, &u).unwrap().add(&homs::iota_hat(3, &v).unwrap()));
    }

    #[test]
    fn iota_sharp_extends_iota_hat(w in word_over(gamma_alphabet(3), 16)) {
        let mut expected = vec![0, 0];
        expected.extend(homs::iota_hat(3, &w).unwrap().0);
        prop_assert_eq!(homs::iota_sharp(5, &w).unwrap().0, expected);
    }

    #[test]
    fn q2_is_homomorphism(u in word_over(pn_alphabet(4), 10), v in word_over(pn_alphabet(4), 10)) {
        let lhs = homs::q2_sharp(4, &u.concat(&v)).unwrap();
        let rhs: QuatElement = homs::q2_sharp(4, &u).unwrap() * homs::q2_sharp(4, &v).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn forgetting_composes(w in word_over(pn_rho_alphabet(5), 16)) {
        let direct = homs::forget_strands(&w, 5, 3).unwrap();
        let stepwise = homs::forget_strands(&homs::forget_strands(&w, 5, 4).unwrap(), 4, 3).unwrap();
        prop_assert_eq!(direct, stepwise);
    }

    #[test]
    fn artin_representation_is_homomorphism(u in word_over(sigma_alphabet(4), 8), v in word_over(sigma_alphabet(4), 8)) {
        let uv = homs::artin_representation(4, &u.concat(&v)).unwrap();
        let (fu, fv) = (homs::artin_representation(4, &u).unwrap(), homs::artin_representation(4, &v).unwrap());
        prop_assert!(uv == fu.compose(&fv) || uv == fv.compose(&fu));
        prop_assert!(homs::artin_representation(4, &u.concat(&u.inverse())).unwrap().is_identity());
    }

    #[test]
    fn free_inverse_is_two_sided(moves in nielsen_moves(3)) {
        let phi = nielsen_aut(3, &moves);
        let inv = phi.inverse().unwrap();
        prop_assert!(phi.compose(&inv).is_identity());
        prop_assert!(inv.compose(&phi).is_identity());
    }

    #[test]
    fn snf_matches_determinantal_divisors((r, c, m) in small_matrix()) {
        let got = snf(&Matrix::from_rows(m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()));
        prop_assert_eq!(got, determinantal_invariants(&m, r, c));
    }

    #[test]
    fn snf_invariant_under_unimodular_moves((r, c, m) in small_matrix(), ops in ops()) {
        let base = snf(&Matrix::from_rows(m.clone()));
        let mut a = Matrix::from_rows(m).map(|&x| BigInt::from(x));
        for op in ops {
            match op {
                Op::SwapRows(x, y) => a.swap_rows(x % r, y % r),
                Op::SwapCols(x, y) => a.swap_cols(x % c, y % c),
                Op::AddRow(x, y, k) if x % r != y % r => a.add_row_multiple(x % r, y % r, &BigInt::from(k)),
                Op::AddCol(x, y, k) if x % c != y % c => a.add_col_multiple(x % c, y % c, &BigInt::from(k)),
                Op::NegRow(x) => a.negate_row(x % r),
                _ => {}
            }
        }
        let moved = snf(&a);
        prop_assert_eq!(moved.free_rank, base.free_rank);
        prop_assert_eq!(moved.torsion, base.torsion.into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn identity_actions_give_free_coinvariants(rank in 1usize..6, copies in 0usize..4) {
        let actions = vec![FreeAut::identity(rank); copies];
        prop_assert_eq!(delta_coinvariants(rank, &actions).unwrap(), AbelianInvariants::free(rank));
    }

    #[test]
    fn two_level_tower_splits(moves in nielsen_moves(3), base in 1usize..4) {
        let top = TowerLevel { rank: 3, actions: vec![nielsen_aut(3, &moves)] };
        let bottom = TowerLevel { rank: base, actions: vec![] };
        let whole = tower_abelianization(&[top.clone(), bottom]).unwrap();
        let expected = delta_coinvariants(3, &top.actions).unwrap().direct_sum(&AbelianInvariants::free(base));
        prop_assert_eq!(whole, expected);
    }

    #[test]
    fn section_is_multiplicative_and_split(u in word_over(gamma_alphabet(2), 10), v in word_over(gamma_alphabet(2), 10)) {
        let su = section_s(3, &u).unwrap();
        prop_assert_eq!(section_s(3, &u.concat(&v)).unwrap(), su.concat(&section_s(3, &v).unwrap()));
        prop_assert_eq!(homs::forget_strands(&su, 5, 4).unwrap(), u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combing_ignores_inserted_relators(m in 1usize..=3, seed in any::<u64>(), u in word_over(gamma_alphabet(3), 6), v in word_over(gamma_alphabet(3), 6)) {
        let comber = Comber::shared(m).unwrap();
        let keep = |w: Word| Word::from_letters(w.unit_letters().filter(|(g, _)| g.max_strand() <= m + 2));
        let (u, v) = (keep(u), keep(v));
        let relators = build_gamma_rp2(m, 2).unwrap().relators;
        let r = &relators[(seed as usize) % relators.len()].word;
        prop_assert_eq!(comber.comb(&u.concat(r).concat(&v)).unwrap(), comber.comb(&u.concat(&v)).unwrap());
    }

    #[test]
    fn normal_form_reassembles(u in word_over(gamma_alphabet(3), 8), v in word_over(gamma_alphabet(3), 6)) {
        let comber = Comber::shared(3).unwrap();
        let nu = comber.comb(&u).unwrap();
        // The reassembled word names the same element.
        prop_assert_eq!(comber.comb(&nu.to_word().unwrap()).unwrap(), nu.clone());
        prop_assert_eq!(comber.comb(&nu.to_word().unwrap().concat(&v)).unwrap(), comber.comb(&u.concat(&v)).unwrap());
        prop_assert!(comber.comb(&nu.to_word().unwrap().concat(&u.inverse())).unwrap().is_identity());
    }
}
