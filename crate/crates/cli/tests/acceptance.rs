//! One PASS/FAIL line per acceptance criterion. Exits non-zero only when a
//! criterion fails that is not listed in `KNOWN_UNATTAINABLE`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use isoform::groups::{closure, identify_type, DEFAULT_CAP};
use isoform::isochrony::{isochrony_report, mirror_search, IsochronyOptions};
use isoform::isotropy::{check_a5_shortcut, check_characterization, isotropy, IsotropyKind};
use isoform::mobius::MobiusMap;
use isoform::paper::{cyclic_family, dihedral_family, find, two_pole, ExpectedIsotropy, PAPER_FORMS};
use isoform::portrait::{integrate_streamline, psi_drift, render_svg, separatrices, RenderOptions, StreamOptions, Termination};
use isoform::synthesis::{pole_count, sample_stratum};
use isoform::{FiniteMobiusGroup, GroupTypeTag, MobiusPolyhedron, PolyhedronKind, RationalOneForm, SpherePoint};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use GroupTypeTag::*;

type C = Complex<f64>;

const EPS: f64 = 1e-8;
const ISOTROPY_BUDGET: Duration = Duration::from_secs(10);
const RESIDUE_SUM_REL: f64 = 1e-7;
const RANDOM_FORMS: usize = 1000;
const MAX_K: usize = 20;
const FUNCTORIALITY_TRIPLES: usize = 1000;
const ANGLE_TOL: f64 = 1e-6;
const RESIDUE_ABS_TOL: f64 = 1e-6;
const STRATA: usize = 50;
const A5_SHORTCUT_SAMPLES: u64 = 10;
const DRIFT_PER_LENGTH: f64 = 1e-5;
const STREAMLINES: usize = 100;
const CLOSE_TOL: f64 = 1e-3;
const STREAM_TOL: f64 = 1e-8;
const VERIFY_BUDGET: Duration = Duration::from_secs(60);

struct Outcome {
    id: u32,
    name: &'static str,
    ok: bool,
    /// Failure is understood and documented rather than a regression.
    known: bool,
    detail: String,
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn cis(t: f64) -> C {
    C::from_polar(1.0, t)
}

fn map(a: C, b: C, cc: C, d: C) -> MobiusMap<f64> {
    MobiusMap::new(a, b, cc, d).unwrap()
}

fn tag_of(form: &RationalOneForm) -> ExpectedIsotropy {
    match isotropy(form, EPS) {
        Ok(r) => match r.kind {
            IsotropyKind::Finite(g) => ExpectedIsotropy::Finite(g.tag()),
            IsotropyKind::ContinuousCStar { .. } => ExpectedIsotropy::ContinuousCStar,
        },
        Err(_) => ExpectedIsotropy::Finite(Trivial),
    }
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let mut cases: Vec<(String, RationalOneForm, ExpectedIsotropy)> = Vec::new();
    let expect = [
        ("ejemplo1", Cyclic(2)),
        ("ejemplo2", Trivial),
        ("ejemplo3", Cyclic(3)),
        ("tetra", A4),
        ("octa", S4),
        ("dodecaedro", A5),
        ("ejemploTetra", Dihedral(2)),
        ("ejemploLangerOcta", A4),
    ];
    for (name, tag) in expect {
        cases.push((name.into(), find(name).unwrap().form(EPS).unwrap(), ExpectedIsotropy::Finite(tag)));
    }
    for n in 2..=7 {
        cases.push((format!("diedricoN n={n}"), dihedral_family(n, c(0.0, -1.0), EPS).unwrap(), ExpectedIsotropy::Finite(Dihedral(n))));
        cases.push((format!("EjemploCiclico n={n}"), cyclic_family(n, EPS).unwrap(), ExpectedIsotropy::Finite(Cyclic(n))));
    }
    for lambda in [c(1.0, 0.0), c(0.0, 1.0), c(2.0, -0.5)] {
        cases.push((format!("λ={lambda} dz/z"), two_pole(lambda, EPS).unwrap(), ExpectedIsotropy::ContinuousCStar));
    }
    let mut misses = Vec::new();
    for (name, form, expected) in &cases {
        let got = tag_of(form);
        if got != *expected {
            misses.push(format!("{name}: expected {expected}, computed {got}"));
        }
    }
    let elapsed = t0.elapsed();
    // The ejemplo1 miss must be exactly the 𝔻₂ symmetry, witnessed by z ↦ 1/z.
    let e1 = find("ejemplo1").unwrap().form::<f64>(EPS).unwrap();
    let inv = map(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    let witnessed = e1.pushforward(&inv, EPS).is_ok_and(|p| p.form_equal(&e1, EPS)) && tag_of(&e1) == ExpectedIsotropy::Finite(Dihedral(2));
    let ok = misses.is_empty() && elapsed < ISOTROPY_BUDGET;
    // `z dz/(z⁴ − 1)` is also invariant under `z ↦ 1/z`: its isotropy is 𝔻₂, not ℤ₂.
    let known = witnessed && misses.len() == 1 && misses[0].starts_with("ejemplo1:") && elapsed < ISOTROPY_BUDGET;
    let detail = format!(
        "{}/{} exact in {:.2}s{}{}",
        cases.len() - misses.len(),
        cases.len(),
        elapsed.as_secs_f64(),
        if misses.is_empty() { String::new() } else { format!("; {}", misses.join("; ")) },
        if witnessed { " (z -> 1/z preserves ejemplo1)" } else { "" }
    );
    Outcome { id: 1, name: "isotropy oracle suite", ok, known, detail }
}

/// The generator pairs exactly as printed, as matrices.
fn printed_generators(tag: GroupTypeTag) -> Vec<MobiusMap<f64>> {
    let (s2, s3, s5, s6) = (2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt(), 6f64.sqrt());
    let (zero, one, i) = (c(0.0, 0.0), c(1.0, 0.0), C::i());
    match tag {
        A4 => vec![
            map(cis(2.0 * PI / 3.0), zero, zero, one),
            map(s2 + i * s6, 2.0 + 2.0 * i * s3, c(-4.0, 0.0), c(2.0 * s2, 0.0)),
        ],
        S4 => vec![map(i, zero, zero, one), map(one, one, -one, one)],
        A5 => {
            let w = cis(2.0 * PI / 5.0);
            vec![map(w, zero, zero, one), map(c(s5 + 1.0, 0.0), -2.0 * w, (1.0 - w + w * w) * (3.0 + s5), -w * w * (1.0 + s5))]
        }
        Dihedral(n) => vec![map(cis(2.0 * PI / n as f64), zero, zero, one), map(zero, one, one, zero)],
        Cyclic(n) => vec![map(cis(2.0 * PI / n as f64), zero, zero, one)],
        Trivial => vec![],
    }
}

fn histogram(elements: &[MobiusMap<f64>]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for g in elements {
        *h.entry(g.rotation_order(60, 1e-6).unwrap_or(0)).or_insert(0) += 1;
    }
    h
}

fn random_map(rng: &mut ChaCha8Rng, range: f64) -> MobiusMap<f64> {
    loop {
        let mut e = || c(rng.random_range(-range..range), rng.random_range(-range..range));
        let (a, b, cc, d) = (e(), e(), e(), e());
        let size = [a, b, cc, d].iter().map(|x| x.norm_sqr()).sum::<f64>();
        if (a * d - b * cc).norm() > 0.1 * size {
            return map(a, b, cc, d);
        }
    }
}

fn criterion_2() -> Outcome {
    let mut tags = vec![A4, S4, A5];
    tags.extend((2..=7).map(Dihedral));
    tags.extend((2..=7).map(Cyclic));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = Vec::new();
    for tag in &tags {
        let Ok(elements) = closure(&printed_generators(*tag), DEFAULT_CAP, EPS) else {
            bad.push(format!("{tag}: closure failed"));
            continue;
        };
        let identified = identify_type(&elements, EPS).ok();
        if elements.len() != tag.order() || identified != Some(*tag) {
            bad.push(format!("{tag}: order {} identified {identified:?}", elements.len()));
            continue;
        }
        let h = histogram(&elements);
        for _ in 0..10 {
            let t = random_map(&mut rng, 2.0);
            let conj: Vec<_> = elements.iter().map(|g| t.conjugate(g)).collect();
            if histogram(&conj) != h {
                bad.push(format!("{tag}: histogram changed under conjugation"));
                break;
            }
        }
    }
    Outcome { id: 2, name: "group realizations", known: false, ok: bad.is_empty(), detail: format!("{} groups, 10 conjugations each{}", tags.len(), join(&bad)) }
}

fn join(v: &[String]) -> String {
    if v.is_empty() {
        String::new()
    } else {
        format!("; {}", v.join("; "))
    }
}

/// `(v, e, f)` per polyhedron and the pole-count formulas, transcribed.
fn printed_vef(kind: PolyhedronKind) -> (usize, usize, usize) {
    match kind {
        PolyhedronKind::Tetrahedron => (4, 6, 4),
        PolyhedronKind::Cube => (8, 12, 6),
        PolyhedronKind::Octahedron => (6, 12, 8),
        PolyhedronKind::Icosahedron => (12, 30, 20),
        PolyhedronKind::Dodecahedron => (20, 30, 12),
        PolyhedronKind::Dihedron(n) => (n, n, 2),
        PolyhedronKind::Hosohedron(n) => (2, n, n),
    }
}

fn printed_k(g: GroupTypeTag, dif: i32, l2: usize) -> Option<usize> {
    let (v, e, f) = match g {
        A4 => (4, 6, 4),
        S4 => (6, 12, 8),
        A5 => (12, 30, 20),
        Dihedral(n) => (n, n, 2),
        _ => (0, 0, 0),
    };
    let base = l2 * g.order();
    match (g, dif) {
        (Cyclic(2), -2) | (Dihedral(2), -2) => Some(base),
        (Cyclic(2), -1) => Some(base + 1),
        (Cyclic(_), 0) => Some(base + 2),
        (Dihedral(_), -1) => Some(base + f),
        (Dihedral(_) | A4 | S4 | A5, 0) => Some(base + v + f),
        (Dihedral(_) | A4 | S4 | A5, 1) => Some(base + v + f + e),
        _ => None,
    }
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let kinds = [
        PolyhedronKind::Tetrahedron,
        PolyhedronKind::Cube,
        PolyhedronKind::Octahedron,
        PolyhedronKind::Icosahedron,
        PolyhedronKind::Dodecahedron,
        PolyhedronKind::Dihedron(5),
        PolyhedronKind::Hosohedron(5),
    ];
    for kind in kinds {
        let p = MobiusPolyhedron::canonical(kind).unwrap();
        let got = (p.vertices().len(), p.edges().len(), p.faces().len());
        if got != printed_vef(kind) {
            bad.push(format!("{kind}: {got:?}"));
        }
    }
    let mut cells = 0;
    for g in [A4, S4, A5, Dihedral(2), Dihedral(3), Dihedral(4), Dihedral(6), Cyclic(2), Cyclic(3), Cyclic(5)] {
        for dif in -2..=1 {
            for l2 in 0..=2usize {
                let l1 = l2 as i64 + dif as i64;
                let Some(k) = printed_k(g, dif, l2).filter(|&k| k > 2 && l1 >= 0) else {
                    if pole_count(g, dif, l2).is_ok() && l1 >= 0 {
                        bad.push(format!("{g} dif={dif} ℓ₂={l2}: accepted an empty cell"));
                    }
                    continue;
                };
                cells += 1;
                match (pole_count(g, dif, l2), sample_stratum::<f64>(g, l1 as usize, l2, 3, EPS)) {
                    (Ok(kc), Ok(form)) if kc == k && form.poles().len() == k => {}
                    (kc, form) => bad.push(format!("{g} dif={dif} ℓ₂={l2}: table {k}, computed {kc:?}, synthesized {:?}", form.map(|f| f.poles().len()))),
                }
            }
        }
    }
    Outcome { id: 3, name: "table fidelity", known: false, ok: bad.is_empty(), detail: format!("7 polyhedra, {cells} cells synthesized{}", join(&bad)) }
}

fn criterion_4() -> Outcome {
    let tags = [A4, S4, A5, Dihedral(2), Dihedral(3), Dihedral(5), Cyclic(2), Cyclic(3), Cyclic(4), Cyclic(6)];
    let cells_for = |g: GroupTypeTag| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for l2 in 0..=2usize {
            for l1 in 0..=2usize {
                let dif = l1 as i32 - l2 as i32;
                if printed_k(g, dif, l2).is_some_and(|k| k > 2) {
                    v.push((l1, l2));
                }
            }
        }
        v
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    let (mut pos, mut neg) = (0, 0);
    for s in 0..STRATA {
        let g = tags[s % tags.len()];
        let cells = cells_for(g);
        let (l1, l2) = cells[rng.random_range(0..cells.len())];
        let form = match sample_stratum::<f64>(g, l1, l2, s as u64, EPS) {
            Ok(f) => f,
            Err(e) => {
                bad.push(format!("{g} ({l1},{l2}): {e}"));
                continue;
            }
        };
        let iso = isotropy(&form, EPS).ok().and_then(|r| r.group().cloned());
        let canonical = FiniteMobiusGroup::canonical(g);
        // a conjugate of the same abstract group that does not preserve the form
        let moved = canonical.conjugate(&random_map(&mut rng, 1.5));
        for (group, label) in [(&canonical, "canonical"), (&moved, "conjugated")] {
            let all = check_characterization(&form, group, EPS).map(|r| r.all()).unwrap_or(false);
            let is_iso = iso.as_ref().is_some_and(|h| h.same_set(group, 1e-6));
            if all != is_iso {
                bad.push(format!("{g} ({l1},{l2}) {label}: check={all} isotropy={is_iso}"));
            }
            if is_iso {
                pos += 1;
            } else {
                neg += 1;
            }
        }
    }
    let a5 = FiniteMobiusGroup::canonical(A5);
    for seed in 0..A5_SHORTCUT_SAMPLES {
        let (l1, l2) = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)][seed as usize % 5];
        let form = sample_stratum::<f64>(A5, l1, l2, 100 + seed, EPS).unwrap();
        for group in [a5.clone(), a5.conjugate(&random_map(&mut rng, 1.5))] {
            let short = check_a5_shortcut(&form, &group, EPS).unwrap();
            let full = check_characterization(&form, &group, EPS).unwrap().all();
            if short != full {
                bad.push(format!("A5 shortcut disagrees (seed {seed})"));
            }
        }
    }
    Outcome {
        id: 4,
        name: "characterization equivalence",
        known: false,
        ok: bad.is_empty() && pos >= STRATA && neg >= STRATA,
        detail: format!("{STRATA} strata, {pos} positive / {neg} negative checks, {A5_SHORTCUT_SAMPLES} A5 shortcut samples{}", join(&bad)),
    }
}

/// Largest angle between a residue and the real line through `dir`.
fn angle_to_line(residues: &[C], dir: C) -> f64 {
    residues
        .iter()
        .filter(|r| r.norm() > 1e-12)
        .map(|r| {
            let q = r / dir;
            (q.im / q.norm()).abs().asin()
        })
        .fold(0.0, f64::max)
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let tetra = find("tetra").unwrap().form::<f64>(EPS).unwrap();
    let mut forms = vec![("tetra".to_string(), tetra)];
    for n in 2..=7 {
        forms.push((format!("diedricoN n={n}"), dihedral_family(n, cis(0.3 * n as f64), EPS).unwrap()));
    }
    let mut worst: f64 = 0.0;
    for (name, f) in &forms {
        let res: Vec<C> = f.residues().iter().map(|r| r.value).collect();
        let a = angle_to_line(&res, f.lambda());
        worst = worst.max(a);
        if a > ANGLE_TOL {
            bad.push(format!("{name}: angle {a:.2e}"));
        }
    }
    let counter = find("contraejemploisocrona").unwrap().form::<f64>(EPS).unwrap();
    let report = isochrony_report(&counter, IsochronyOptions::default());
    let targets = [C::i(), -C::i(), c(0.0, -5.0)];
    let in_set = counter.residues().iter().all(|r| targets.iter().any(|t| (r.value - t).norm() <= RESIDUE_ABS_TOL));
    let hit_all = targets.iter().all(|t| counter.residues().iter().any(|r| (r.value - t).norm() <= RESIDUE_ABS_TOL));
    let group = isotropy(&counter, EPS).unwrap().group().unwrap().clone();
    let mirror = mirror_search(&counter, &group, EPS);
    if !(report.is_isochronous && in_set && hit_all && mirror.is_none()) {
        bad.push(format!(
            "counterexample: isochronous={} residues-in-set={in_set}/{hit_all} mirror={}",
            report.is_isochronous,
            mirror.is_some()
        ));
    }
    let mut certified = 0;
    let mut tested = 0;
    for (g, l1, l2) in [(A4, 0, 0), (A4, 1, 1), (S4, 0, 0), (S4, 1, 0), (A5, 0, 0), (Dihedral(3), 0, 0), (Dihedral(4), 1, 1), (Dihedral(2), 0, 2), (Cyclic(3), 1, 1), (Cyclic(2), 0, 2)] {
        for seed in 0..3 {
            let form = sample_stratum::<f64>(g, l1, l2, seed, EPS).unwrap();
            let grp = isotropy(&form, EPS).unwrap().group().unwrap().clone();
            tested += 1;
            if mirror_search(&form, &grp, EPS).is_some() {
                certified += 1;
                if !isochrony_report(&form, IsochronyOptions::default()).rotatable {
                    bad.push(format!("{g} ({l1},{l2}) seed {seed}: mirror without collinear residues"));
                }
            }
        }
    }
    Outcome {
        id: 5,
        name: "isochrony",
        known: false,
        ok: bad.is_empty() && certified > 0,
        detail: format!("worst angle {worst:.1e} rad; mirror found on {certified}/{tested} synthesized forms, all rotatable{}", join(&bad)),
    }
}

/// Random form with `k` poles, all finite, so the residue sum is a real test.
fn random_finite_form(rng: &mut ChaCha8Rng, k: usize) -> RationalOneForm {
    loop {
        let pts: Vec<SpherePoint> = (0..2 * k - 2).map(|_| SpherePoint::from_re_im(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))).collect();
        if isoform::sphere::min_separation(&pts) < 0.02 {
            continue;
        }
        let lambda = C::from_polar(rng.random_range(0.2..3.0), rng.random_range(0.0..2.0 * PI));
        // k finite poles and k − 2 finite zeros keep ∞ regular
        let (poles, zeros) = pts.split_at(k);
        return RationalOneForm::new(lambda, zeros.to_vec(), poles.to_vec(), EPS).unwrap();
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    let rel_sum = |f: &RationalOneForm| {
        let res = f.residues();
        let sum: C = res.iter().filter(|r| !r.pole.is_infinite()).map(|r| r.value).sum();
        let at_inf: C = res.iter().filter(|r| r.pole.is_infinite()).map(|r| r.value).sum();
        let max = res.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
        (sum + at_inf).norm() / max
    };
    for _ in 0..RANDOM_FORMS {
        let k = rng.random_range(2..=MAX_K);
        let f = random_finite_form(&mut rng, k);
        worst = worst.max(rel_sum(&f));
    }
    // The dodecahedral form has a pole at ∞, whose residue is defined by the sum;
    // check its finite residues against the contour integral around them instead.
    let dodeca = find("dodecaedro").unwrap().form::<f64>(EPS).unwrap();
    let finite: C = dodeca.residues().iter().filter(|r| !r.pole.is_infinite()).map(|r| r.value).sum();
    let radius = 1.0 + 2.0 * dodeca.poles().iter().filter_map(|p| p.finite()).map(|z| z.norm()).fold(0.0, f64::max);
    let n = 1 << 14;
    let contour: C = (0..n)
        .map(|j| {
            let u = cis(2.0 * PI * j as f64 / n as f64);
            dodeca.evaluate(radius * u, 0.0).unwrap() * radius * u
        })
        .sum::<C>()
        / n as f64;
    let dmax = dodeca.residues().iter().map(|r| r.value.norm()).fold(0.0, f64::max);
    let dodeca_rel = (finite - contour).norm() / dmax;
    worst = worst.max(dodeca_rel.max(rel_sum(&dodeca)));
    if worst > RESIDUE_SUM_REL {
        bad.push(format!("residue sum {worst:.1e}"));
    }
    let mut functorial = 0;
    for _ in 0..FUNCTORIALITY_TRIPLES {
        let k = rng.random_range(2..=10);
        let f = random_finite_form(&mut rng, k);
        let (t, s) = (random_map(&mut rng, 3.0), random_map(&mut rng, 3.0));
        let lhs = f.pushforward(&t.compose(&s), EPS);
        let rhs = f.pushforward(&s, EPS).and_then(|g| g.pushforward(&t, EPS));
        if let (Ok(l), Ok(r)) = (lhs, rhs) {
            if l.form_equal(&r, EPS) {
                functorial += 1;
            }
        }
    }
    if functorial != FUNCTORIALITY_TRIPLES {
        bad.push(format!("functoriality {functorial}/{FUNCTORIALITY_TRIPLES}"));
    }
    Outcome {
        id: 6,
        name: "numerical conservation",
        known: false,
        ok: bad.is_empty(),
        detail: format!("worst |Σ Res|/max|Res| = {worst:.1e} over {RANDOM_FORMS} forms + dodecaedro; functoriality {functorial}/{FUNCTORIALITY_TRIPLES}{}", join(&bad)),
    }
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let octa = find("octa").unwrap().form::<f64>(EPS).unwrap().with_lambda(c(0.0, -1.0));
    let opts = StreamOptions { tol: STREAM_TOL, close_tol: CLOSE_TOL, ..StreamOptions::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < STREAMLINES {
        let z = c(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
        if octa.special_points().iter().any(|p| p.chordal(&SpherePoint::Finite(z)) < 0.02) {
            continue;
        }
        let t = integrate_streamline(&octa, z, 0.0, &opts);
        worst = worst.max(psi_drift(&octa, &t, 0.0).per_unit_length());
        done += 1;
    }
    if worst > DRIFT_PER_LENGTH {
        bad.push(format!("drift {worst:.1e}"));
    }
    let center = integrate_streamline(&two_pole(C::i(), EPS).unwrap(), c(1.0, 0.0), 0.0, &opts);
    let gap = (center.points.last().unwrap() - center.points[0]).norm();
    if center.status != Termination::Closed || gap > CLOSE_TOL {
        bad.push(format!("i dz/z: {:?}, gap {gap:.1e}", center.status));
    }
    let mut sep_total = 0;
    for pf in PAPER_FORMS {
        let f = pf.form::<f64>(EPS).unwrap();
        let expected = 4 * f.zeros().iter().filter(|q| !q.is_infinite()).count();
        let got = separatrices(&f, 0.0, &StreamOptions { max_len: 2.0, ..opts.clone() }).len();
        sep_total += got;
        if got != expected {
            bad.push(format!("{}: {got} separatrices, expected {expected}", pf.name));
        }
    }
    let tetra = find("tetra").unwrap().form::<f64>(EPS).unwrap();
    let render = RenderOptions { grid: (6, 6), ..RenderOptions::default() };
    if render_svg(&tetra, &render, EPS) != render_svg(&tetra, &render, EPS) {
        bad.push("SVG differs between runs".into());
    }
    Outcome {
        id: 7,
        name: "portrait properties",
        known: false,
        ok: bad.is_empty(),
        detail: format!("worst drift {worst:.1e}/unit over {STREAMLINES} octa streamlines; i dz/z closes (gap {gap:.1e}); {sep_total} separatrices; SVG identical{}", join(&bad)),
    }
}

fn criterion_8() -> Outcome {
    let t0 = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_isoform")).arg("verify-paper").output();
    let elapsed = t0.elapsed();
    let (ok, detail) = match out {
        Ok(o) => (o.status.success() && elapsed < VERIFY_BUDGET, format!("exit {:?} in {:.2}s", o.status.code(), elapsed.as_secs_f64())),
        Err(e) => (false, format!("could not spawn: {e}")),
    };
    Outcome { id: 8, name: "end-to-end verify-paper", ok, known: false, detail }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 8] = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8];
    let mut unexpected = 0;
    for run in criteria {
        let t0 = Instant::now();
        let o = run();
        let status = if o.ok { "PASS" } else { "FAIL" };
        let known = !o.ok && o.known;
        println!(
            "{status} criterion {} ({}) [{:.1}s]: {}{}",
            o.id,
            o.name,
            t0.elapsed().as_secs_f64(),
            o.detail,
            if known { " [known unattainable]" } else { "" }
        );
        if !o.ok && !known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criterion/criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
