//! Isotropy group of a rational 1-form and the pole/zero characterization of
//! invariance under a finite group.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::groups::{FiniteMobiusGroup, GroupTypeTag};
use crate::mobius::MobiusMap;
use crate::oneform::{probe_points, RationalOneForm};
use crate::scalar::{lit, Real};
use crate::sphere::{contains_close, find_close, SpherePoint};

/// Candidates whose invariance residual lies in `[ε, BORDERLINE·ε]` are reported.
pub const BORDERLINE: f64 = 1e3;
/// Relative tolerance for grouping poles by residue.
const RESIDUE_CLASS_TOL: f64 = 1e-6;
/// Poles (smallest residue classes first) considered when choosing the source triple.
const SOURCE_POOL: usize = 40;

/// Either a finite group or the one-parameter group `ℂ*` of a two-pole form.
#[derive(Clone, Debug)]
pub enum IsotropyKind<T> {
    Finite(FiniteMobiusGroup<T>),
    /// `conjugator` sends the two poles to `0` and `∞`, turning the group into `z ↦ kz`.
    ContinuousCStar { conjugator: MobiusMap<T> },
}

#[derive(Clone, Debug)]
pub struct IsotropyResult<T> {
    pub kind: IsotropyKind<T>,
    /// Near-miss candidates, reported rather than silently dropped.
    pub warnings: Vec<String>,
}

impl<T: Real> IsotropyResult<T> {
    pub fn group(&self) -> Option<&FiniteMobiusGroup<T>> {
        match &self.kind {
            IsotropyKind::Finite(g) => Some(g),
            IsotropyKind::ContinuousCStar { .. } => None,
        }
    }

    pub fn type_tag(&self) -> Option<GroupTypeTag> {
        self.group().map(|g| g.tag())
    }

    /// `"cyclic"`, `"dihedral"`, …, or `"continuous_cstar"`.
    pub fn type_name(&self) -> String {
        match &self.kind {
            IsotropyKind::Finite(g) => g.tag().kind_name().to_string(),
            IsotropyKind::ContinuousCStar { .. } => "continuous_cstar".into(),
        }
    }
}

/// Equivalence classes of poles under (approximate) equality of residues.
fn residue_classes<T: Real>(form: &RationalOneForm<T>) -> Vec<usize> {
    let res: Vec<Complex<T>> = form.residues().into_iter().map(|r| r.value).collect();
    let scale = res.iter().map(|r| r.norm()).fold(T::zero(), T::max);
    let tol = lit::<T>(RESIDUE_CLASS_TOL) * scale;
    let mut class = vec![usize::MAX; res.len()];
    let mut next = 0;
    for i in 0..res.len() {
        if class[i] != usize::MAX {
            continue;
        }
        class[i] = next;
        // Grow transitively so that near-equal chains never split a true class.
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            for k in 0..res.len() {
                if class[k] == usize::MAX && (res[k] - res[j]).norm() <= tol {
                    class[k] = next;
                    stack.push(k);
                }
            }
        }
        next += 1;
    }
    class
}

/// Source triple minimizing the number of candidate images, then maximizing separation.
fn source_triple<T: Real>(poles: &[SpherePoint<T>], class: &[usize]) -> [usize; 3] {
    let size = |i: usize| class.iter().filter(|&&c| c == class[i]).count();
    let mut order: Vec<usize> = (0..poles.len()).collect();
    order.sort_by_key(|&i| (size(i), i));
    order.truncate(SOURCE_POOL);
    let mut best = ([order[0], order[1], order[2]], usize::MAX, T::zero());
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            for c in b + 1..order.len() {
                let (i, j, k) = (order[a], order[b], order[c]);
                let cost = size(i) * size(j) * size(k);
                let sep = poles[i].chordal(&poles[j]).min(poles[i].chordal(&poles[k])).min(poles[j].chordal(&poles[k]));
                if cost < best.1 || (cost == best.1 && sep > best.2) {
                    best = ([i, j, k], cost, sep);
                }
            }
        }
    }
    best.0
}

/// Every Möbius map `T` with `T_* η = η`.
///
/// For `k ≥ 3` poles, a fixed source triple of poles is sent to every ordered
/// triple of poles with matching residues (residues are invariant, so no
/// symmetry is missed); surviving maps are checked on all zeros and poles and
/// on the value of the pushed-forward form.
pub fn isotropy<T: Real>(form: &RationalOneForm<T>, eps: T) -> Result<IsotropyResult<T>> {
    let poles = form.poles();
    let k = poles.len();
    if k == 2 {
        let probe = probe_points(&form.special_points(), 1, eps)?[0];
        let one = SpherePoint::from_re_im(T::one(), T::zero());
        let conjugator = MobiusMap::from_three_pairs(
            [poles[0], SpherePoint::Finite(probe), poles[1]],
            [SpherePoint::zero(), one, SpherePoint::Infinity],
            eps,
        )?;
        return Ok(IsotropyResult { kind: IsotropyKind::ContinuousCStar { conjugator }, warnings: vec![] });
    }
    let class = residue_classes(form);
    let src = source_triple(poles, &class);
    let src_pts = [poles[src[0]], poles[src[1]], poles[src[2]]];
    let loose = lit::<T>(BORDERLINE) * eps;
    let mut accepted = Vec::new();
    let mut warnings = Vec::new();
    let members = |c: usize| -> Vec<usize> { (0..k).filter(|&j| class[j] == c).collect() };
    let (ca, cb, cc) = (members(class[src[0]]), members(class[src[1]]), members(class[src[2]]));
    for &a in &ca {
        for &b in &cb {
            if b == a {
                continue;
            }
            for &c in &cc {
                if c == a || c == b {
                    continue;
                }
                let dst = [poles[a], poles[b], poles[c]];
                let Ok(t) = MobiusMap::from_three_pairs(src_pts, dst, eps) else { continue };
                // Cheap rejection: every pole must land near a pole of the same residue class.
                let lands = poles.iter().enumerate().all(|(i, p)| {
                    let img = t.apply(p);
                    find_close(poles, &img, loose).is_some_and(|j| class[j] == class[i])
                });
                if !lands || !form.zeros().iter().all(|q| contains_close(form.zeros(), &t.apply(q), loose)) {
                    continue;
                }
                let Ok(pushed) = form.pushforward(&t, eps) else { continue };
                let Some(r) = pushed.residual(form, eps) else { continue };
                if r <= eps {
                    accepted.push(t);
                } else if r <= loose {
                    warnings.push(format!("borderline candidate {t} rejected with residual {r:e}"));
                }
            }
        }
    }
    let group = FiniteMobiusGroup::from_elements(accepted, eps)
        .map_err(|e| Error::Internal(format!("isotropy candidates: {e}")))?;
    Ok(IsotropyResult { kind: IsotropyKind::Finite(group), warnings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Zero,
    Pole,
}

#[derive(Clone, Debug)]
pub struct OrbitEntry<T> {
    pub kind: PointKind,
    pub representative: SpherePoint<T>,
    pub size: usize,
    pub full: bool,
}

/// Orbit decomposition of the zeros and poles, with `ℓ₁`/`ℓ₂` the numbers of
/// full orbits of zeros/poles.
#[derive(Clone, Debug)]
pub struct OrbitReport<T> {
    pub orbits: Vec<OrbitEntry<T>>,
    pub l1: usize,
    pub l2: usize,
}

fn orbits_of<T: Real>(
    group: &FiniteMobiusGroup<T>,
    points: &[SpherePoint<T>],
    kind: PointKind,
    eps: T,
) -> Result<Vec<OrbitEntry<T>>> {
    let mut seen = vec![false; points.len()];
    let mut out = Vec::new();
    for i in 0..points.len() {
        if seen[i] {
            continue;
        }
        let orbit = group.orbit(&points[i], eps);
        let mut members = Vec::with_capacity(orbit.len());
        for q in &orbit {
            let j = find_close(points, q, lit::<T>(BORDERLINE) * eps)
                .ok_or_else(|| Error::Precondition(format!("{} is not invariant under the group", points[i])))?;
            seen[j] = true;
            members.push(points[j]);
        }
        let representative = *members
            .iter()
            .min_by_key(|p| p.canonical_key())
            .expect("orbit is nonempty");
        out.push(OrbitEntry { kind, representative, size: orbit.len(), full: orbit.len() == group.order() });
    }
    out.sort_by_key(|o| (o.kind == PointKind::Pole, o.representative.canonical_key()));
    Ok(out)
}

pub fn orbit_report<T: Real>(form: &RationalOneForm<T>, group: &FiniteMobiusGroup<T>, eps: T) -> Result<OrbitReport<T>> {
    let mut orbits = orbits_of(group, form.zeros(), PointKind::Zero, eps)?;
    orbits.extend(orbits_of(group, form.poles(), PointKind::Pole, eps)?);
    let count = |kind| orbits.iter().filter(|o| o.kind == kind && o.full).count();
    let (l1, l2) = (count(PointKind::Zero), count(PointKind::Pole));
    Ok(OrbitReport { orbits, l1, l2 })
}

#[derive(Clone, Debug)]
pub struct Failure<T> {
    pub element: MobiusMap<T>,
    pub point: SpherePoint<T>,
    pub reason: String,
}

/// Outcome of the invariance criteria for a given finite group.
#[derive(Clone, Debug)]
pub struct CharacterizationReport<T> {
    /// The pole set is invariant.
    pub cond1: bool,
    /// The zero set is invariant.
    pub cond2: bool,
    /// Rotation axes sit on poles (order ≥ 3) or on poles/zeros (order 2).
    pub cond3: bool,
    /// The group is the whole isotropy group of the form.
    pub maximal: bool,
    pub failures: Vec<Failure<T>>,
}

impl<T> CharacterizationReport<T> {
    pub fn all(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.maximal
    }
}

fn set_failures<T: Real>(
    group: &FiniteMobiusGroup<T>,
    set: &[SpherePoint<T>],
    what: &str,
    eps: T,
) -> Vec<Failure<T>> {
    let mut out = Vec::new();
    for g in group.elements() {
        if let Some(p) = set.iter().find(|p| !contains_close(set, &g.apply(p), eps)) {
            out.push(Failure { element: *g, point: *p, reason: format!("{what} set not invariant") });
        }
    }
    out
}

pub fn check_characterization<T: Real>(
    form: &RationalOneForm<T>,
    group: &FiniteMobiusGroup<T>,
    eps: T,
) -> Result<CharacterizationReport<T>> {
    let mut failures = set_failures(group, form.poles(), "pole", eps);
    let cond1 = failures.is_empty();
    let zf = set_failures(group, form.zeros(), "zero", eps);
    let cond2 = zf.is_empty();
    failures.extend(zf);
    let mut cond3 = true;
    for g in group.elements() {
        if g.is_identity(eps) {
            continue;
        }
        let order = g
            .rotation_order(group.order(), eps)
            .ok_or_else(|| Error::Internal("group element of unresolved order".into()))?;
        for p in g.fixed_points(eps)? {
            let is_pole = contains_close(form.poles(), &p, eps);
            let is_zero = contains_close(form.zeros(), &p, eps);
            let reason = match (order, is_pole, is_zero) {
                (_, true, _) => None,
                (2, false, true) => None,
                (m, false, true) => Some(format!("order-{m} element fixes a zero")),
                (m, false, false) => Some(format!("order-{m} element fixes a regular point")),
            };
            if let Some(reason) = reason {
                cond3 = false;
                failures.push(Failure { element: *g, point: p, reason });
            }
        }
    }
    let maximal = match isotropy(form, eps)?.kind {
        IsotropyKind::Finite(h) => h.same_set(group, eps),
        IsotropyKind::ContinuousCStar { .. } => false,
    };
    Ok(CharacterizationReport { cond1, cond2, cond3, maximal, failures })
}

/// For icosahedral groups, invariance of poles and zeros alone decides invariance.
pub fn check_a5_shortcut<T: Real>(form: &RationalOneForm<T>, group: &FiniteMobiusGroup<T>, eps: T) -> Result<bool> {
    if group.tag() != GroupTypeTag::A5 {
        return Err(Error::Precondition(format!("shortcut applies to A5 only, got {}", group.tag())));
    }
    Ok(set_failures(group, form.poles(), "pole", eps).is_empty()
        && set_failures(group, form.zeros(), "zero", eps).is_empty())
}
