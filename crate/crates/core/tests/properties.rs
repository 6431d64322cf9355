use proptest::prelude::*;
use radclean::classify::{
    classify_rad_clean, classify_strongly_clean, normalize_invertible_trace, rad_clean_alternative,
    verify_witness, Case, Method, Reduction,
};
use radclean::cli::ClassifyReport;
use radclean::mat2::MonicQuadratic;
use radclean::quadratic::{solve_split_quadratic, solve_x2_plus_x};
use radclean::series::{classify_series_matrix, evaluate_at_zero, lift_root_recurrence, truncate};
use radclean::{Elem, Mat2, Ring, RingSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RINGS: &[&str] = &[
    "Zmod:4",
    "Zmod:8",
    "Zmod:9",
    "Zmod:25",
    "Zmod:49",
    "Zmod:1024",
    "Zloc:2",
    "Zloc:3",
    "Zloc:5",
    "Padic:2:32",
    "Padic:3:20",
    "Padic:7:10",
    "Series(Zmod:4;4)",
    "Series(Zmod:9;3)",
    "Series(Padic:5:6;3)",
    "Series(Series(Zmod:3;2);2)",
];

fn ring_and_rng() -> impl Strategy<Value = (Ring, ChaCha8Rng)> {
    (0..RINGS.len(), any::<u64>()).prop_map(|(i, seed)| {
        (
            Ring::parse(RINGS[i]).unwrap(),
            ChaCha8Rng::seed_from_u64(seed),
        )
    })
}

fn random_matrix(ring: &Ring, rng: &mut ChaCha8Rng) -> Mat2 {
    let [a, b, c, d] = [0; 4].map(|_| ring.random_elem(rng));
    Mat2::new(a, b, c, d).unwrap()
}

/// Matrices biased toward the interesting case: unit trace, radical det.
fn random_split_candidate(ring: &Ring, rng: &mut ChaCha8Rng) -> Mat2 {
    let a = ring.random_elem(rng);
    let d = &ring.random_unit(rng) - &a;
    let b = ring.random_unit(rng);
    // choose c so that det = ad − bc is radical
    let c = &(&(&a * &d) - &ring.random_radical(rng)) * &b.try_invert().unwrap();
    Mat2::new(a, b, c, d).unwrap()
}

/// `P·[[α, x], [0, β]]·P⁻¹` with α radical and β a unit, so χ splits.
fn random_planted_split(ring: &Ring, rng: &mut ChaCha8Rng) -> Mat2 {
    let t = Mat2::new(
        ring.random_radical(rng),
        ring.random_elem(rng),
        ring.zero(),
        ring.random_unit(rng),
    )
    .unwrap();
    t.conjugate_by(&random_invertible(ring, rng)).unwrap()
}

fn sample(kind: u8, ring: &Ring, rng: &mut ChaCha8Rng) -> Mat2 {
    match kind {
        0 => random_matrix(ring, rng),
        1 => random_split_candidate(ring, rng),
        _ => random_planted_split(ring, rng),
    }
}

fn random_invertible(ring: &Ring, rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let p = random_matrix(ring, rng);
        if p.is_gl2() {
            return p;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unit_radical_dichotomy((ring, mut rng) in ring_and_rng()) {
        let x = ring.random_elem(&mut rng);
        prop_assert_ne!(x.is_unit(), x.is_in_radical());
        prop_assert!(ring.random_unit(&mut rng).is_unit());
        prop_assert!(ring.random_radical(&mut rng).is_in_radical());
    }

    #[test]
    fn literals_round_trip((ring, mut rng) in ring_and_rng()) {
        let x = ring.random_elem(&mut rng);
        prop_assert_eq!(ring.parse_elem(&x.to_string()).unwrap(), x);
        let m = random_matrix(&ring, &mut rng);
        prop_assert_eq!(Mat2::parse(&ring, &m.to_string()).unwrap(), m);
        prop_assert_eq!(ring.spec().to_string().parse::<RingSpec>().unwrap(), ring.spec().clone());
    }

    #[test]
    fn cayley_hamilton((ring, mut rng) in ring_and_rng()) {
        let a = random_matrix(&ring, &mut rng);
        let cd = a.char_data();
        let lhs = &(&(&a * &a) - &a.scale(&cd.trace).unwrap()) + &Mat2::scalar(&cd.det);
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn verdicts_come_with_verified_witnesses((ring, mut rng) in ring_and_rng(), kind in 0..3u8) {
        let a = sample(kind, &ring, &mut rng);
        let c = classify_rad_clean(&a).unwrap();
        prop_assert_eq!(c.strongly_rad_clean, c.witness.is_some());
        prop_assert_eq!(c.case == Case::SplitSpectral, c.roots.is_some());
        if let Some(w) = c.witness {
            prop_assert!(verify_witness(&a, w.e, w.u).is_ok());
        }
        if c.strongly_rad_clean {
            prop_assert!(c.strongly_clean);
        }
        prop_assert_eq!(classify_strongly_clean(&a).unwrap(), c.strongly_clean);
    }

    #[test]
    fn verdict_is_similarity_invariant((ring, mut rng) in ring_and_rng(), kind in 0..3u8) {
        let a = sample(kind, &ring, &mut rng);
        let p = random_invertible(&ring, &mut rng);
        let b = a.conjugate_by(&p).unwrap();
        let (ca, cb) = (classify_rad_clean(&a).unwrap(), classify_rad_clean(&b).unwrap());
        prop_assert_eq!(ca.case, cb.case);
        prop_assert_eq!(ca.strongly_clean, cb.strongly_clean);
        prop_assert_eq!(ca.roots, cb.roots);
    }

    #[test]
    fn decision_paths_agree((ring, mut rng) in ring_and_rng(), kind in 0..3u8) {
        let a = sample(kind, &ring, &mut rng);
        let expected = classify_rad_clean(&a).unwrap().strongly_rad_clean;
        let zloc = matches!(ring.spec(), RingSpec::Zloc { .. });
        for path in Method::ALL {
            if path == Method::DiscriminantSquare && !ring.two_is_unit() {
                continue;
            }
            // square roots of non-unit discriminants are only decided over Z_(p)
            match rad_clean_alternative(&a, path) {
                Ok(v) => prop_assert_eq!(v, expected, "{} on {}", path, a),
                Err(e) => prop_assert!(
                    path == Method::DiscriminantSquare && !zloc,
                    "{} on {}: {}", path, a, e
                ),
            }
        }
    }

    #[test]
    fn split_roots_satisfy_vieta((ring, mut rng) in ring_and_rng()) {
        let mu = ring.random_unit(&mut rng);
        let lam = ring.random_radical(&mut rng);
        let q = MonicQuadratic::new(mu.clone(), lam.clone()).unwrap();
        if let Ok(r) = solve_split_quadratic(&q) {
            prop_assert_eq!(&r.alpha + &r.beta, -&mu);
            prop_assert_eq!(&r.alpha * &r.beta, lam);
            prop_assert!(r.alpha.is_in_radical() && r.beta.is_unit());
        } else {
            let zloc = matches!(ring.spec(), RingSpec::Zloc { .. });
            prop_assert!(zloc);
        }
        let c = ring.random_radical(&mut rng);
        if let Ok(x) = solve_x2_plus_x(&c) {
            prop_assert_eq!(&(&x * &x) + &x, c);
        }
    }

    #[test]
    fn normal_form_preserves_invariants((ring, mut rng) in ring_and_rng()) {
        let a = random_matrix(&ring, &mut rng);
        match normalize_invertible_trace(&a) {
            Ok(n) if n.reduction == Reduction::UnitDiagonal => {
                prop_assert!(a.is_gl2());
                prop_assert!(n.form.c().is_zero());
                prop_assert_eq!(&n.transform * &a, n.form);
            }
            Ok(n) => {
                prop_assert_eq!(a.conjugate_by(&n.transform).unwrap(), n.form.clone());
                prop_assert_eq!(n.form.d(), &a.trace());
                prop_assert_eq!(n.form.b(), &-a.det());
            }
            Err(_) => prop_assert!(!a.trace().is_unit()),
        }
    }
}

fn series_ring() -> impl Strategy<Value = (Ring, ChaCha8Rng)> {
    (0..4usize, any::<u64>()).prop_map(|(i, seed)| {
        let spec = [
            "Series(Zmod:4;6)",
            "Series(Zmod:9;5)",
            "Series(Padic:3:8;4)",
            "Series(Zloc:5;4)",
        ][i];
        (Ring::parse(spec).unwrap(), ChaCha8Rng::seed_from_u64(seed))
    })
}

fn coeff(e: &Elem, k: usize) -> Elem {
    e.coeffs().unwrap()[k].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn series_verdict_matches_constant_terms((ring, mut rng) in series_ring(), kind in 0..3u8) {
        let a = sample(kind, &ring, &mut rng);
        let lifted = classify_series_matrix(&a).unwrap();
        let base = classify_rad_clean(&evaluate_at_zero(&a).unwrap()).unwrap();
        prop_assert_eq!(lifted.case, base.case);
        prop_assert_eq!(lifted.strongly_rad_clean, base.strongly_rad_clean);
        if let (Some(l), Some(b)) = (&lifted.roots, &base.roots) {
            prop_assert_eq!(&coeff(&l.alpha, 0), &b.alpha);
        }
        prop_assert_eq!(lifted, classify_rad_clean(&a).unwrap());
    }

    #[test]
    fn lifting_commutes_with_truncation((ring, mut rng) in series_ring(), m in 1usize..4) {
        let base = ring.base().unwrap().clone();
        let mu = ring.random_unit(&mut rng);
        let lam = ring.random_radical(&mut rng);
        let q0 = MonicQuadratic::new(coeff(&mu, 0), coeff(&lam, 0)).unwrap();
        let Ok(r0) = solve_split_quadratic(&q0) else {
            return Ok(());
        };
        prop_assert_eq!(r0.alpha.ring(), &base);
        let full = lift_root_recurrence(&mu, &lam, &r0.alpha).unwrap();
        let short = lift_root_recurrence(&truncate(&mu, m).unwrap(), &truncate(&lam, m).unwrap(), &r0.alpha).unwrap();
        prop_assert_eq!(truncate(&full, m).unwrap(), short);
    }

    #[test]
    fn classify_json_round_trips((ring, mut rng) in ring_and_rng(), kind in 0..3u8) {
        let a = sample(kind, &ring, &mut rng);
        let c = classify_rad_clean(&a).unwrap();
        let report = ClassifyReport::new(&a, &c, true);
        let text = serde_json::to_string(&report).unwrap();
        let back: ClassifyReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, report);
    }
}
