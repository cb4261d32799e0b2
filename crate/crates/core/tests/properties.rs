use nichols_core::braided::{ad_x1, chi, skew_derive};
use nichols_core::exactfield::parse_field_spec;
use nichols_core::jset::{compute_j, compute_j_via_clauses};
use nichols_core::oracle::{naive_symmetrizer, BraidingMatrix};
use nichols_core::qcalc::{
    hypothesis_holds, q2_denominator_eval, q2_eval, q2_numerator_eval, q_binom, q_int,
};
use nichols_core::rootvec::{ad_p_closed_form, ad_p_words, d1_on_um, d2_on_um, solve_d1};
use nichols_core::{BraidingParams, Field, FieldElement, GradedElement, Oracle, UhatBasisVector, Word};
use proptest::prelude::*;

const FIELDS: [&str; 4] = ["Fp:5", "Fp:7", "ext:Fp:3:1,0,1", "Q"];
const RATIONALS: [&str; 10] = ["1", "-1", "2", "-2", "3", "1/2", "-1/2", "-3", "2/3", "-1/3"];

fn element(field: &Field, seed: u32) -> FieldElement {
    match field.nonzero_elements() {
        Some(units) => units[seed as usize % units.len()].clone(),
        None => field.parse_element(RATIONALS[seed as usize % RATIONALS.len()]).unwrap(),
    }
}

fn any_params() -> impl Strategy<Value = BraidingParams> {
    (0..FIELDS.len(), any::<u32>(), any::<u32>(), any::<u32>(), any::<u32>()).prop_map(|(f, a, b, c, d)| {
        let field = parse_field_spec(FIELDS[f]).unwrap();
        BraidingParams::new(element(&field, a), element(&field, b), element(&field, c), element(&field, d))
            .unwrap()
    })
}

fn any_shorthand() -> impl Strategy<Value = BraidingParams> {
    (0..FIELDS.len(), any::<u32>(), any::<u32>(), any::<u32>()).prop_map(|(f, a, b, c)| {
        let field = parse_field_spec(FIELDS[f]).unwrap();
        BraidingParams::shorthand(element(&field, a), element(&field, b), element(&field, c)).unwrap()
    })
}

fn random_element(field: &Field, letters: &[u8], coeffs: &[u32]) -> GradedElement {
    // All words are permutations of `letters`, so the result is homogeneous.
    let mut out = GradedElement::zero(field);
    let mut w = letters.to_vec();
    for (i, c) in coeffs.iter().enumerate() {
        let n = w.len();
        w.swap(i % n, (i * 7 + 3) % n);
        out = out.add(&GradedElement::word(field, Word::from_letters(&w)).scale(&element(field, *c)));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let field = parse_field_spec(FIELDS[f]).unwrap();
        let (x, y, z) = (element(&field, a), element(&field, b), element(&field, c));
        prop_assert_eq!(&(&x + &y) * &z, &x * &z + &y * &z);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert!((&x * x.inv().unwrap()).is_one());
        let lit = x.to_string();
        prop_assert_eq!(field.parse_element(&lit).unwrap(), x);
    }

    #[test]
    fn gaussian_binomial_pascal_and_symmetry(f in 0..FIELDS.len(), a in any::<u32>(), n in 1u64..9, k in 0u64..9) {
        let field = parse_field_spec(FIELDS[f]).unwrap();
        let q = element(&field, a);
        let k = k.min(n);
        prop_assert_eq!(q_binom(n, k, &q), q_binom(n, n - k, &q));
        if k >= 1 {
            let pascal = q_binom(n - 1, k - 1, &q) + q.pow(k) * q_binom(n - 1, k, &q);
            prop_assert_eq!(q_binom(n, k, &q), pascal);
        }
        if !q.is_one() {
            let one = field.one();
            prop_assert_eq!(q_int(n, &q) * (&q - &one), q.pow(n) - one);
        }
    }

    #[test]
    fn q2_divides_numerator(p in any_shorthand(), k in 0usize..5, m in 0usize..5) {
        let q2 = q2_eval(k, m, &p).unwrap();
        prop_assert_eq!(q2 * q2_denominator_eval(k, m, &p), q2_numerator_eval(k, m, &p));
    }

    #[test]
    fn skew_derivations_are_twisted(
        p in any_params(),
        a in 0usize..3, b in 0usize..3, c in 0usize..3, d in 0usize..3,
        cx in prop::collection::vec(any::<u32>(), 1..4),
        cy in prop::collection::vec(any::<u32>(), 1..4),
    ) {
        prop_assume!(a + b > 0 && c + d > 0);
        let field = p.field().clone();
        let lx: Vec<u8> = std::iter::repeat_n(1, a).chain(std::iter::repeat_n(2, b)).collect();
        let ly: Vec<u8> = std::iter::repeat_n(1, c).chain(std::iter::repeat_n(2, d)).collect();
        let x = random_element(&field, &lx, &cx);
        let y = random_element(&field, &ly, &cy);
        for i in [1u8, 2] {
            let alpha = if i == 1 { (1, 0) } else { (0, 1) };
            let lhs = skew_derive(i, &x.mul(&y), &p);
            let twist = chi((a as i64, b as i64), alpha, &p);
            let rhs = skew_derive(i, &x, &p).mul(&y).add(&x.mul(&skew_derive(i, &y, &p)).scale(&twist));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ad_x1_preserves_the_u_family(p in any_params(), m in 0usize..4, seeds in prop::collection::vec(any::<u32>(), 5)) {
        prop_assume!(hypothesis_holds(m as u64 + 1, &p));
        let field = p.field().clone();
        let v = UhatBasisVector::new((0..=m).map(|i| element(&field, seeds[i])).collect());
        let image = ad_x1(&v.to_element(&p).unwrap(), &p).unwrap();
        let coords = UhatBasisVector::from_element(&image, m + 1, &p).unwrap();
        prop_assert_eq!(coords.clone(), UhatBasisVector::from_element_dense(&image, m + 1, &p).unwrap());
        prop_assert_eq!(coords.to_element(&p).unwrap(), image);
    }

    #[test]
    fn closed_form_agrees_with_words(p in any_params(), m in 0usize..4, k in 0usize..4) {
        prop_assume!(hypothesis_holds((m + k) as u64, &p));
        let words = ad_p_words(m, k, &p).unwrap();
        let closed = ad_p_closed_form(m, k, &p).unwrap().scale(&p.q12().pow(m as u64));
        prop_assert_eq!(closed.to_element(&p).unwrap(), words);
    }

    #[test]
    fn solve_d1_inverts_d1_on_interior(p in any_params(), k in 1usize..7, seeds in prop::collection::vec(any::<u32>(), 7)) {
        prop_assume!(hypothesis_holds(k as u64, &p));
        let field = p.field().clone();
        let v = UhatBasisVector::new(
            (0..=k).map(|i| if i == 0 || i == k { field.zero() } else { element(&field, seeds[i]) }).collect(),
        );
        let w = d1_on_um(&v, &p).unwrap().scale(&-p.q21().inv().unwrap());
        prop_assert_eq!(solve_d1(&w, &p).unwrap(), v);
    }

    #[test]
    fn p_k_kernel_condition(p in any_shorthand(), k in 0usize..6) {
        prop_assume!(hypothesis_holds(k as u64, &p));
        let pk = nichols_core::rootvec::p_k(k, &p).unwrap();
        prop_assert!(d1_on_um(&pk, &p).unwrap().is_zero());
        let oracle = Oracle::new(&p);
        let in_ker = oracle.in_kernel(&pk.to_element(&p).unwrap()).unwrap();
        prop_assert_eq!(in_ker, d2_on_um(&pk, &p).unwrap().is_zero());
    }

    #[test]
    fn j_structure(p in any_shorthand()) {
        let cls = compute_j(24, &p);
        let j = cls.j_set();
        for w in j.windows(2) {
            prop_assert!(w[1] - w[0] >= 3);
        }
        for m in 0..=24 {
            prop_assert!(3 * cls.count_upto(m) <= m + 3);
            if hypothesis_holds(m as u64, &p) {
                prop_assert_eq!(compute_j_via_clauses(m, &p), cls.truncate(m).j_set());
                prop_assert!(cls.truncate(m).anomalies().is_empty());
            }
        }
        if p.field().characteristic() == 0 {
            prop_assert!(cls.j2().is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recursive_symmetrizer_matches_permutation_sum(p in any_params(), a in 0usize..5, b in 0usize..5) {
        prop_assume!(a + b >= 2 && a + b <= 6);
        let oracle = Oracle::new(&p);
        let naive = naive_symmetrizer(&[a, b], &BraidingMatrix::from_params(&p)).unwrap();
        let recursive = oracle.symmetrizer(&[a, b]).unwrap();
        prop_assert_eq!(recursive.matrix(), naive.matrix());
    }

    #[test]
    fn kernel_oracles_agree(
        p in any_params(),
        a in 0usize..5, b in 0usize..5,
        coeffs in prop::collection::vec(any::<u32>(), 1..6),
        pick in any::<u32>(),
    ) {
        prop_assume!(a + b >= 2 && a + b <= 8);
        let field = p.field().clone();
        let oracle = Oracle::new(&p);
        let letters: Vec<u8> = std::iter::repeat_n(1, a).chain(std::iter::repeat_n(2, b)).collect();
        let x = random_element(&field, &letters, &coeffs);
        prop_assert_eq!(oracle.in_kernel(&x), oracle.in_kernel_by_derivations(&x));
        // Elements of the kernel itself, so both answers are exercised.
        let sym = oracle.symmetrizer(&[a, b]).unwrap();
        let null = sym.matrix().nullspace();
        if !null.is_empty() {
            let v = &null[pick as usize % null.len()];
            let y = GradedElement::from_terms(
                &field,
                sym.basis().iter().zip(v).map(|(w, c)| {
                    (Word::from_letters(&w.iter().map(|l| l + 1).collect::<Vec<_>>()), c.clone())
                }),
            );
            prop_assert_eq!(oracle.in_kernel(&y), Ok(true));
            prop_assert_eq!(oracle.in_kernel_by_derivations(&y), Ok(true));
        }
    }

    #[test]
    fn ad_x1_maps_kernel_injectively(p in any_shorthand(), m in 0usize..5) {
        prop_assume!(hypothesis_holds(m as u64 + 1, &p));
        let oracle = Oracle::new(&p);
        let here = oracle.ker_cap_um(m).unwrap();
        let there = oracle.ker_cap_um(m + 1).unwrap();
        let images: Vec<Vec<FieldElement>> = here
            .basis
            .iter()
            .map(|v| {
                let img = ad_x1(&v.to_element(&p).unwrap(), &p).unwrap();
                UhatBasisVector::from_element(&img, m + 1, &p).unwrap().coords().to_vec()
            })
            .collect();
        for v in &images {
            let x = UhatBasisVector::new(v.clone()).to_element(&p).unwrap();
            prop_assert!(oracle.in_kernel(&x).unwrap());
        }
        prop_assert_eq!(nichols_core::linalg::rank_of_vectors(p.field(), &images), here.dim);
        prop_assert!(here.dim <= there.dim);
    }
}
