use polyaut::classify::{classify_plane, invariant_basis, ClassifyOptions, Verdict};
use polyaut::ideal::{buchberger, radical_member, s_polynomial, unique_fixpoint, Ideal};
use polyaut::poly::Monomial;
use polyaut::torus::{build_gm_flow, weight_split};
use polyaut::{
    casestudy, Budget, Derivation, ElementaryFactor, Field, MonomialOrder, MultiPoly, PolyMap, PolyRing, Ring, Scalar,
    SquareMatrix,
};
use proptest::prelude::*;

fn ring(vars: &[&str]) -> Ring {
    PolyRing::new(Field::Rationals, vars, MonomialOrder::Lex).unwrap()
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| Field::Rationals.from_ratio(n, d))
}

fn cyclotomic() -> impl Strategy<Value = Scalar> {
    (prop::sample::select(vec![3u32, 4, 5, 6, 8]), prop::collection::vec(-3i64..=3, 1..6)).prop_map(|(m, cs)| {
        let field = Field::cyclotomic(m).unwrap();
        let z = field.generator().unwrap();
        cs.iter().enumerate().fold(field.zero(), |acc, (k, &c)| &acc + &(&field.from_i64(c) * &z.pow(k as i64).unwrap()))
    })
}

fn poly(r: Ring, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let n = r.nvars();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -4i64..=4), 0..=max_terms).prop_map(move |terms| {
        let mut f = MultiPoly::zero(&r);
        for (exps, c) in terms {
            if exps.iter().sum::<u32>() <= max_deg {
                f.add_term(Monomial::from_exps(&exps), r.field().from_i64(c));
            }
        }
        f
    })
}

/// A random tame automorphism of the plane over `Q`.
fn word_map() -> impl Strategy<Value = PolyMap> {
    let factor = prop_oneof![
        ((-2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2), (-2i64..=2, -2i64..=2)).prop_filter_map(
            "singular",
            |((a, b, c, d), (s, t))| {
                let q = Field::Rationals;
                let m = SquareMatrix::new(&q, vec![vec![q.from_i64(a), q.from_i64(b)], vec![q.from_i64(c), q.from_i64(d)]])
                    .unwrap();
                (!m.det().is_zero()).then(|| ElementaryFactor::Affine { matrix: m, shift: vec![q.from_i64(s), q.from_i64(t)] })
            }
        ),
        (0usize..2, prop::collection::vec(-2i64..=2, 1..=3)).prop_map(|(target, cs)| {
            let r = ring(&["x", "y"]);
            let other = 1 - target;
            let mut p = MultiPoly::zero(&r);
            for (k, c) in cs.iter().enumerate() {
                p.add_term(Monomial::var(2, other, k as u32), r.field().from_i64(*c));
            }
            ElementaryFactor::Elementary { target, p }
        }),
        Just(ElementaryFactor::Permutation(vec![1, 0])),
    ];
    prop::collection::vec(factor, 1..=3).prop_map(|w| PolyMap::from_word(&ring(&["x", "y"]), w).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(rational(), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(s in rational(), t in rational()) {
        prop_assert_eq!(&(&s + &t) - &t, s.clone());
        if !s.is_zero() {
            prop_assert!((&s * &s.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn cyclotomic_axioms(s in cyclotomic(), t in cyclotomic()) {
        if s.same_field(&t) {
            prop_assert_eq!(&(&s + &t) - &t, s.clone());
        }
        if !s.is_zero() {
            prop_assert!((&s * &s.inv().unwrap()).is_one());
            if let Some(d) = s.root_of_unity_order().unwrap() {
                prop_assert!(s.pow(d as i64).unwrap().is_one());
                for e in 1..d {
                    prop_assert!(!s.pow(e as i64).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn zeta_powers_wrap(m in prop::sample::select(vec![3u32, 4, 5, 7, 12]), k in 0i64..40) {
        let field = Field::cyclotomic(m).unwrap();
        let z = field.generator().unwrap();
        prop_assert_eq!(z.pow(k).unwrap(), z.pow(k % m as i64).unwrap());
    }

    #[test]
    fn substitution_laws(f in poly(ring(&["x", "y"]), 4, 5), g in poly(ring(&["x", "y"]), 2, 3),
                         h in poly(ring(&["x", "y"]), 2, 3), p in point()) {
        let r = f.ring().clone();
        let ids = vec![MultiPoly::var(&r, 0), MultiPoly::var(&r, 1)];
        prop_assert_eq!(f.substitute(&ids).unwrap(), f.clone());
        let images = vec![g.clone(), h.clone()];
        let mapped = vec![g.evaluate(&p).unwrap(), h.evaluate(&p).unwrap()];
        prop_assert_eq!(f.substitute(&images).unwrap().evaluate(&p).unwrap(), f.evaluate(&mapped).unwrap());
    }

    #[test]
    fn leibniz_for_partials(f in poly(ring(&["x", "y", "z"]), 3, 4), g in poly(ring(&["x", "y", "z"]), 3, 4), v in 0usize..3) {
        let lhs = (&f * &g).partial_derivative(v);
        let rhs = &(&f * &g.partial_derivative(v)) + &(&g * &f.partial_derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_laws(a in word_map(), b in word_map(), c in word_map(), p in point()) {
        prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        prop_assert_eq!(a.invert().unwrap().invert().unwrap(), a.clone());
        prop_assert!(a.compose(&a.invert().unwrap()).unwrap().is_identity());
        let ab = a.compose(&b).unwrap();
        let lhs = ab.jacobian_at(&p).unwrap();
        let rhs = a.jacobian_at(&b.apply_point(&p).unwrap()).unwrap().mul(&b.jacobian_at(&p).unwrap());
        prop_assert_eq!(lhs, rhs);
        let det = a.jacobian_determinant();
        prop_assert!(det.is_constant() && !det.is_zero());
    }

    #[test]
    fn degrees_are_submultiplicative(a in word_map()) {
        let d = a.iterate_degrees(4, &Budget::default()).unwrap();
        for m in 1..=4usize {
            for n in 1..=4 - m {
                prop_assert!(d[m + n - 1] <= d[m - 1] * d[n - 1]);
            }
        }
        prop_assert_eq!(d, a.iterate_degrees_exact(4, &Budget::default()).unwrap());
    }

    #[test]
    fn derivations(c in -2i64..=2, dy in poly(ring(&["x", "y", "z"]), 3, 3), dz in poly(ring(&["x", "y", "z"]), 3, 3),
                   f in poly(ring(&["x", "y", "z"]), 3, 3), g in poly(ring(&["x", "y", "z"]), 3, 3)) {
        let r = f.ring().clone();
        let strip = |p: &MultiPoly, keep: usize| {
            let vars: Vec<usize> = (0..r.nvars()).collect();
            MultiPoly::from_terms(&r, p.terms().filter(|(m, _)| vars.iter().all(|&v| v < keep || m.exps()[v] == 0))
                .map(|(m, s)| (m.clone(), s.clone())))
        };
        let d = Derivation::new(&r, vec![MultiPoly::constant(&r, r.field().from_i64(c)), strip(&dy, 1), strip(&dz, 2)]).unwrap();
        let lhs = d.apply(&(&f * &g)).unwrap();
        let rhs = &(&f * &d.apply(&g).unwrap()) + &(&g * &d.apply(&f).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(d.interpolation_check(&f).unwrap());
        let flow = d.exp_flow().unwrap();
        prop_assert!(flow.satisfies_flow_law().unwrap());
        prop_assert!(flow.specialize(&r.field().zero()).unwrap().is_identity());
    }

    #[test]
    fn weight_components(f in poly(ring(&["x", "y"]), 3, 5)) {
        let r = f.ring().clone();
        let q = Field::Rationals;
        let map = PolyMap::parse(&r, &["2*x", "y/2"]).unwrap();
        let two = q.from_i64(2);
        let split = weight_split(&map, &two, &f, -3, 3).unwrap();
        let sum = split.components.values().fold(MultiPoly::zero(&r), |acc, c| &acc + c);
        prop_assert_eq!(sum, f.clone());
        for (w, c) in &split.components {
            prop_assert_eq!(map.pullback(c).unwrap(), c.scale(&two.pow(*w).unwrap()));
        }
        let finite = PolyMap::parse(&r, &["-x", "-y"]).unwrap();
        if finite.pullback(&f).unwrap() != f {
            prop_assert!(weight_split(&finite, &two, &f, -3, 3).is_err());
        }
    }

    #[test]
    fn groebner_oracle(gens in prop::collection::vec(poly(ring(&["x", "y", "z"]), 3, 3), 1..=3),
                       extra in poly(ring(&["x", "y", "z"]), 2, 2), probe in poly(ring(&["x", "y", "z"]), 3, 4)) {
        let r = probe.ring().clone();
        let b = Budget::default();
        let ideal = Ideal::new(&r, gens.clone()).unwrap();
        let g = buchberger(&ideal, MonomialOrder::Degrevlex, &b).unwrap();
        for p in &gens {
            prop_assert!(g.reduce(p).unwrap().is_zero());
        }
        for i in 0..g.basis().len() {
            for j in i + 1..g.basis().len() {
                prop_assert!(g.reduce(&s_polynomial(&g.basis()[i], &g.basis()[j]).unwrap()).unwrap().is_zero());
            }
        }
        let once = g.reduce(&probe).unwrap();
        prop_assert_eq!(g.reduce(&once).unwrap(), once);
        prop_assert_eq!(buchberger(&ideal, MonomialOrder::Degrevlex, &b).unwrap(), g);
        let mut more = gens.clone();
        more.push(extra);
        if radical_member(&probe, &ideal, &b).unwrap() {
            prop_assert!(radical_member(&probe, &Ideal::new(&r, more).unwrap(), &b).unwrap());
        }
    }

    #[test]
    fn fixpoints_under_conjugation(h in word_map()) {
        let r = ring(&["x", "y"]);
        let b = Budget::default();
        let origin = [Field::Rationals.zero(), Field::Rationals.zero()];
        for coords in [["-x", "y + x^2"], ["-x", "-y + x^2"], ["x", "y"], ["-y", "x"]] {
            let f = PolyMap::parse(&r, &coords).unwrap();
            let conj = h.compose(&f).unwrap().compose(&h.invert().unwrap()).unwrap();
            let hp = h.apply_point(&origin).unwrap();
            prop_assert_eq!(unique_fixpoint(&conj, &hp, &b).unwrap(), unique_fixpoint(&f, &origin, &b).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn classification_is_sound(h in word_map()) {
        let r = ring(&["x", "y"]);
        let b = Budget::default();
        let o = ClassifyOptions { order_bound: 16, invariant_degree_bound: 4 };
        for coords in [["2*x", "y/2"], ["x", "y + x^2"], ["-y", "x"], ["x", "y"]] {
            let f = h.compose(&PolyMap::parse(&r, &coords).unwrap()).unwrap().compose(&h.invert().unwrap()).unwrap();
            let rep = classify_plane(&f, &o, &b).unwrap();
            for w in &rep.witnesses {
                prop_assert_eq!(&f.pullback(w).unwrap(), w);
            }
            if rep.verdict == Verdict::NEquals(2) {
                prop_assert!(f.pow(rep.evidence.order.unwrap(), &b).unwrap().is_identity());
            }
            if f.is_identity() {
                prop_assert_ne!(rep.verdict, Verdict::NEquals(0));
            }
        }
    }

    #[test]
    fn invariant_bases_grow(a in word_map()) {
        let r = ring(&["x", "y"]);
        let b = Budget::default();
        let f = a.compose(&PolyMap::parse(&r, &["x", "y + x^2"]).unwrap()).unwrap().compose(&a.invert().unwrap()).unwrap();
        let small = invariant_basis(&f, 2, &b).unwrap();
        let large = invariant_basis(&f, 4, &b).unwrap();
        for g in &small {
            prop_assert_eq!(&f.pullback(g).unwrap(), g);
            prop_assert!(polyaut::linalg::express_in_span(&large, g).is_some());
        }
    }
}

#[test]
fn flows_at_one_are_identity() {
    let r = ring(&["x", "y"]);
    let q = Field::Rationals;
    for (coords, a) in [(["2*x", "y/2"], 2), (["4*x", "2*y"], 2), (["3*x", "y/9"], 3)] {
        let f = PolyMap::parse(&r, &coords).unwrap();
        let a = q.from_i64(a);
        let flow = build_gm_flow(&f, &a, &Budget::default()).unwrap();
        assert!(flow.specialize(&q.one()).unwrap().is_identity());
        assert_eq!(flow.specialize(&a).unwrap(), f);
    }
}

#[test]
fn case_study_is_deterministic() {
    let b = Budget::default();
    let one = format!("{:?}", casestudy::run_poloni_moser(3, &b).unwrap());
    let two = format!("{:?}", casestudy::run_poloni_moser(3, &b).unwrap());
    assert_eq!(one, two);
}
