use isoform::groups::{FiniteMobiusGroup, GroupTypeTag};
use isoform::isotropy::{check_a5_shortcut, check_characterization, isotropy, orbit_report, IsotropyKind};
use isoform::mobius::MobiusMap;
use isoform::oneform::RationalOneForm;
use isoform::paper::{cyclic_family, dihedral_family, find, two_pole, ExpectedIsotropy, PAPER_FORMS};
use isoform::sphere::SpherePoint;
use isoform::synthesis::sample_stratum;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;
type F = RationalOneForm<f64>;
type G = FiniteMobiusGroup<f64>;
const EPS: f64 = 1e-8;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn paper(name: &str) -> F {
    find(name).unwrap().form(EPS).unwrap()
}

fn tag_of(form: &F) -> ExpectedIsotropy {
    match isotropy(form, EPS).unwrap().kind {
        IsotropyKind::Finite(g) => ExpectedIsotropy::Finite(g.tag()),
        IsotropyKind::ContinuousCStar { .. } => ExpectedIsotropy::ContinuousCStar,
    }
}

/// `g^* η = η` checked pointwise: `f(g(z)) g'(z) = f(z)` at scattered points.
fn preserves(form: &F, g: &MobiusMap<f64>) -> bool {
    let [a, b, cc, d] = g.entries();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 5 {
        let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let den = cc * z + d;
        let w = (a * z + b) / den;
        let near = |p: C| form.special_points().iter().any(|s| s.chordal(&SpherePoint::Finite(p)) < 1e-3);
        if near(z) || near(w) || den.norm() < 1e-3 {
            continue;
        }
        let lhs = form.evaluate(w, EPS).unwrap() * (a * d - b * cc) / (den * den);
        let rhs = form.evaluate(z, EPS).unwrap();
        if (lhs - rhs).norm() > 1e-6 * rhs.norm() {
            return false;
        }
        checked += 1;
    }
    true
}

fn rot(k: C) -> MobiusMap<f64> {
    MobiusMap::new(k, c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap()
}

#[test]
fn bundled_forms_have_their_isotropy() {
    for pf in PAPER_FORMS {
        let form = pf.form::<f64>(EPS).unwrap();
        let got = tag_of(&form);
        let expected = pf.erratum.map_or(pf.isotropy, |e| e.isotropy);
        assert_eq!(got, expected, "{}", pf.name);
        let r = isotropy(&form, EPS).unwrap();
        for g in r.group().unwrap().elements() {
            assert!(preserves(&form, g), "{}: {g:?}", pf.name);
        }
    }
}

/// `z dz/(z⁴ − 1)` is also fixed by `z ↦ 1/z`, so its isotropy is `𝔻₂` and
/// contains the printed `ℤ₂` generated by `z ↦ −z`.
#[test]
fn ejemplo1_isotropy_contains_the_half_turn() {
    let form = paper("ejemplo1");
    let r = isotropy(&form, EPS).unwrap();
    let g = r.group().unwrap();
    assert_eq!(g.tag(), GroupTypeTag::Dihedral(2));
    assert!(g.contains(&rot(c(-1.0, 0.0)), EPS));
    let inv = MobiusMap::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    assert!(preserves(&form, &inv) && g.contains(&inv, EPS));
    assert!(!preserves(&form, &rot(C::i())));
}

#[test]
fn families_and_two_pole() {
    for n in 2..=7 {
        assert_eq!(tag_of(&dihedral_family(n, c(0.0, -1.0), EPS).unwrap()), ExpectedIsotropy::Finite(GroupTypeTag::Dihedral(n)));
        assert_eq!(tag_of(&cyclic_family(n, EPS).unwrap()), ExpectedIsotropy::Finite(GroupTypeTag::Cyclic(n)));
    }
    for lambda in [c(1.0, 0.0), c(0.0, 1.0), c(-0.3, 2.0)] {
        let f = two_pole(lambda, EPS).unwrap();
        let r = isotropy(&f, EPS).unwrap();
        let IsotropyKind::ContinuousCStar { conjugator } = r.kind else { panic!("expected C*") };
        // the conjugator normalises the form to λ dz/z
        let pushed = f.pushforward(&conjugator, EPS).unwrap();
        assert!(pushed.form_equal(&two_pole(pushed.lambda(), EPS).unwrap(), EPS));
        assert!((pushed.lambda() - lambda).norm() < 1e-9);
    }
    // two poles anywhere, not just at 0 and ∞
    let f = F::new(c(0.0, 2.0), vec![], vec![SpherePoint::from_re_im(1.0, 1.0), SpherePoint::from_re_im(-2.0, 0.5)], EPS).unwrap();
    assert_eq!(tag_of(&f), ExpectedIsotropy::ContinuousCStar);
}

#[test]
fn characterization_examples() {
    let z4 = G::generate(&[rot(C::i())], 8, EPS).unwrap();
    let r = check_characterization(&paper("ejemplo1"), &z4, EPS).unwrap();
    assert!(r.cond1 && r.cond2 && !r.cond3 && !r.maximal);
    assert!(r.failures.iter().any(|f| f.reason.contains("order-4") && f.reason.contains("zero")));

    let z2 = G::generate(&[rot(c(-1.0, 0.0))], 4, EPS).unwrap();
    let r = check_characterization(&paper("ejemplo2"), &z2, EPS).unwrap();
    assert!(r.cond1 && r.cond2 && !r.cond3);
    let at: Vec<_> = r.failures.iter().map(|f| f.point).collect();
    assert!(at.iter().any(|p| p.approx_eq(&SpherePoint::zero(), 1e-9)));
    assert!(at.iter().any(|p| p.is_infinite()));

    let octa = paper("octa");
    let s4 = G::canonical(GroupTypeTag::S4);
    assert!(check_characterization(&octa, &s4, EPS).unwrap().all());

    let e3 = paper("ejemplo3");
    let d3 = G::canonical(GroupTypeTag::Dihedral(3));
    let z3 = G::canonical(GroupTypeTag::Cyclic(3));
    let r = check_characterization(&e3, &z3, EPS).unwrap();
    assert!(r.all(), "{:?}", r.failures);
    let r = check_characterization(&e3, &d3, EPS).unwrap();
    assert!(!r.all());
}

#[test]
fn a5_shortcut() {
    let dodeca = paper("dodecaedro");
    let a5 = isotropy(&dodeca, EPS).unwrap().group().unwrap().clone();
    assert!(check_a5_shortcut(&dodeca, &a5, EPS).unwrap());
    assert!(check_characterization(&dodeca, &a5, EPS).unwrap().all());
    assert!(check_a5_shortcut(&dodeca, &G::canonical(GroupTypeTag::A4), EPS).is_err());

    // nudge one pole off its orbit
    let mut poles = dodeca.poles().to_vec();
    let moved = poles.iter().position(|p| !p.is_infinite()).unwrap();
    poles[moved] = SpherePoint::Finite(poles[moved].finite().unwrap() + c(1e-3, 0.0));
    let nudged = F::new(dodeca.lambda(), dodeca.zeros().to_vec(), poles, EPS).unwrap();
    assert!(!check_a5_shortcut(&nudged, &a5, EPS).unwrap());

    let canon = G::canonical(GroupTypeTag::A5);
    for seed in 0..10 {
        let (l1, l2) = [(0, 0), (1, 0), (1, 1), (2, 1)][seed as usize % 4];
        let f = sample_stratum::<f64>(GroupTypeTag::A5, l1, l2, seed, EPS).unwrap();
        let full = check_characterization(&f, &canon, EPS).unwrap().all();
        assert_eq!(check_a5_shortcut(&f, &canon, EPS).unwrap(), full, "seed {seed}");
        assert!(full);
    }
}

#[test]
fn orbit_report_counts_full_orbits() {
    let f = sample_stratum::<f64>(GroupTypeTag::Dihedral(3), 1, 1, 3, EPS).unwrap();
    let g = isotropy(&f, EPS).unwrap().group().unwrap().clone();
    let rep = orbit_report(&f, &g, EPS).unwrap();
    assert_eq!((rep.l1, rep.l2), (1, 1));
    let sizes: usize = rep.orbits.iter().map(|o| o.size).sum();
    assert_eq!(sizes, f.poles().len() + f.zeros().len());
}

#[test]
fn synthesized_forms_contain_their_group() {
    let tags = [GroupTypeTag::A4, GroupTypeTag::S4, GroupTypeTag::A5, GroupTypeTag::Dihedral(4), GroupTypeTag::Cyclic(3)];
    for (i, tag) in tags.into_iter().enumerate() {
        let f = sample_stratum::<f64>(tag, 1, 1, 40 + i as u64, EPS).unwrap();
        let g = isotropy(&f, EPS).unwrap().group().unwrap().clone();
        assert_eq!(g.tag(), tag);
        for e in g.elements() {
            assert!(preserves(&f, e));
        }
        // closed under composition and inverses
        for a in g.elements() {
            assert!(g.contains(&a.inverse(), EPS));
            for b in g.elements() {
                assert!(g.contains(&a.compose(b), EPS));
            }
        }
    }
}

fn random_map(seed: u64) -> MobiusMap<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut e = || c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let (a, b, cc, d) = (e(), e(), e(), e());
        let det = (a * d - b * cc).norm();
        let size = [a, b, cc, d].iter().map(|x| x.norm_sqr()).sum::<f64>();
        if det > 0.3 * size / 4.0 {
            return MobiusMap::new(a, b, cc, d).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isotropy_is_conjugation_covariant(seed in any::<u64>(), which in 0usize..4) {
        let name = ["tetra", "ejemploTetra", "diedricoN", "ejemplo3"][which];
        let f = paper(name);
        let t = random_map(seed);
        let g = isotropy(&f, EPS).unwrap().group().unwrap().clone();
        let h = isotropy(&f.pushforward(&t, EPS).unwrap(), EPS).unwrap().group().unwrap().clone();
        prop_assert!(h.same_set(&g.conjugate(&t), 1e-6), "{}", name);
    }

    #[test]
    fn isotropy_ignores_scaling(re in -3.0..3.0f64, im in -3.0..3.0f64, which in 0usize..3) {
        prop_assume!(re.hypot(im) > 0.1);
        let name = ["octa", "EjemploCiclico", "ejemploLangerOcta"][which];
        let f = paper(name);
        let g = isotropy(&f, EPS).unwrap().group().unwrap().clone();
        let h = isotropy(&f.scaled(c(re, im)), EPS).unwrap().group().unwrap().clone();
        prop_assert!(g.same_set(&h, EPS));
    }
}
