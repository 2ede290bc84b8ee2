//! Construction of `G`-invariant forms from the table of admissible placements,
//! strata bookkeeping and seeded sampling.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{FiniteMobiusGroup, GroupTypeTag};
use crate::isotropy::{isotropy, IsotropyKind};
use crate::mobius::MobiusMap;
use crate::oneform::RationalOneForm;
use crate::polyhedra::{MobiusPolyhedron, PolyhedronKind};
use crate::scalar::{lit, Real};
use crate::sphere::{min_separation, SpherePoint};

/// Rejections allowed before [`sample_stratum`] gives up.
pub const MAX_REJECTIONS: usize = 10_000;
/// Minimal chordal separation between distinct zeros/poles of sampled forms.
pub const SAMPLE_SEPARATION: f64 = 0.02;
/// Default `λ` of synthesized forms.
pub fn default_lambda<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), -T::one())
}

/// Input of [`synthesize`]: a group, the `dif = ℓ₁ − ℓ₂` column of the table and
/// one representative per full orbit of zeros and of poles.
#[derive(Clone, Debug)]
pub struct SynthesisSpec<T> {
    pub group: GroupTypeTag,
    /// Moves the canonical model; representatives are given in moved coordinates.
    pub conjugator: Option<MobiusMap<T>>,
    pub dif: i32,
    pub zero_reps: Vec<SpherePoint<T>>,
    pub pole_reps: Vec<SpherePoint<T>>,
    pub lambda: Complex<T>,
    /// `ℤ₂`, `dif = −1` only: put the pole on the second fixed point instead of the first.
    pub swap_fixed_points: bool,
}

impl<T: Real> SynthesisSpec<T> {
    pub fn new(group: GroupTypeTag, dif: i32, zero_reps: Vec<SpherePoint<T>>, pole_reps: Vec<SpherePoint<T>>) -> Self {
        Self { group, conjugator: None, dif, zero_reps, pole_reps, lambda: default_lambda(), swap_fixed_points: false }
    }
}

/// A stratum of forms with prescribed isotropy: pole count and dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub group: GroupTypeTag,
    pub dif: i32,
    pub l1: usize,
    pub l2: usize,
    /// Number of poles `k`.
    pub k: usize,
    /// Complex dimension `ℓ₁ + ℓ₂ + 4`.
    pub dim: usize,
    pub fiber: &'static str,
}

fn model_kind(group: GroupTypeTag) -> Result<PolyhedronKind> {
    Ok(match group {
        GroupTypeTag::A4 => PolyhedronKind::Tetrahedron,
        GroupTypeTag::S4 => PolyhedronKind::Octahedron,
        GroupTypeTag::A5 => PolyhedronKind::Icosahedron,
        GroupTypeTag::Dihedral(n) => PolyhedronKind::Dihedron(n),
        GroupTypeTag::Cyclic(n) => PolyhedronKind::Hosohedron(n.max(2)),
        GroupTypeTag::Trivial => return Err(Error::IllegalCell("trivial group has no polyhedral model".into())),
    })
}

/// Checks that `(G, dif, ℓ₁, ℓ₂)` is an admissible cell of the table.
pub fn check_cell(group: GroupTypeTag, dif: i32, l1: usize, l2: usize) -> Result<()> {
    let illegal = |why: &str| Err(Error::IllegalCell(format!("{group}, dif={dif}: {why}")));
    if l1 as i64 - l2 as i64 != dif as i64 {
        return illegal(&format!("ℓ₁ − ℓ₂ = {} does not match dif", l1 as i64 - l2 as i64));
    }
    let allowed: &[i32] = match group {
        GroupTypeTag::Trivial => return illegal("no placement for the trivial group"),
        GroupTypeTag::A4 | GroupTypeTag::S4 | GroupTypeTag::A5 => &[0, 1],
        GroupTypeTag::Dihedral(2) => &[-2, -1, 0, 1],
        GroupTypeTag::Dihedral(_) => &[-1, 0, 1],
        GroupTypeTag::Cyclic(2) => &[-2, -1, 0],
        GroupTypeTag::Cyclic(_) => &[0],
    };
    if !allowed.contains(&dif) {
        return illegal("no such column");
    }
    // Cyclic groups with no interior poles give only two poles (continuous isotropy).
    if let GroupTypeTag::Cyclic(_) = group {
        if dif == 0 && l2 == 0 {
            return illegal("cyclic placement needs ℓ ≥ 1");
        }
    }
    Ok(())
}

/// Number of poles of a form in the given cell.
pub fn pole_count(group: GroupTypeTag, dif: i32, l2: usize) -> Result<usize> {
    let l1 = (l2 as i64 + dif as i64).max(0) as usize;
    check_cell(group, dif, l1, l2)?;
    let g = group.order();
    let c = model_kind(group)?.counts();
    Ok(match (group, dif) {
        (GroupTypeTag::Cyclic(_), -2) => l2 * g,
        (GroupTypeTag::Cyclic(_), -1) => l2 * g + 1,
        (GroupTypeTag::Cyclic(_), _) => l2 * g + 2,
        (_, -2) => l2 * g,
        (_, -1) => l2 * g + c.f,
        (_, 0) => l2 * g + c.v + c.f,
        _ => l2 * g + c.v + c.f + c.e,
    })
}

pub fn stratum(group: GroupTypeTag, dif: i32, l1: usize, l2: usize) -> Result<Stratum> {
    check_cell(group, dif, l1, l2)?;
    Ok(Stratum {
        group,
        dif,
        l1,
        l2,
        k: pole_count(group, dif, l2)?,
        dim: l1 + l2 + 4,
        fiber: "PSL(2,C)/G × C*",
    })
}

/// Special points placed on zeros and poles by the table: `(zeros, poles)`.
fn placement<T: Real>(
    spec: &SynthesisSpec<T>,
    poly: &MobiusPolyhedron<T>,
) -> (Vec<SpherePoint<T>>, Vec<SpherePoint<T>>) {
    let (v, e, f) = (poly.vertices().to_vec(), poly.edges().to_vec(), poly.faces().to_vec());
    let cat = |parts: &[&Vec<SpherePoint<T>>]| parts.iter().flat_map(|p| p.iter().copied()).collect::<Vec<_>>();
    if let GroupTypeTag::Cyclic(_) = spec.group {
        // The hosohedron's vertices are the two fixed points of the rotation.
        return match spec.dif {
            0 => (vec![], v),
            -1 => {
                let (p, z) = if spec.swap_fixed_points { (v[1], v[0]) } else { (v[0], v[1]) };
                (vec![z], vec![p])
            }
            _ => (v, vec![]),
        };
    }
    match spec.dif {
        1 => (vec![], cat(&[&v, &e, &f])),
        0 => (e, cat(&[&v, &f])),
        -1 => (cat(&[&v, &e]), f),
        _ => (cat(&[&v, &e, &f]), vec![]),
    }
}

fn group_and_model<T: Real>(group: GroupTypeTag, conjugator: Option<&MobiusMap<T>>) -> Result<(FiniteMobiusGroup<T>, MobiusPolyhedron<T>)> {
    let mut poly = MobiusPolyhedron::<T>::canonical(model_kind(group)?)?;
    let mut g = if let GroupTypeTag::Cyclic(n) = group {
        FiniteMobiusGroup::canonical(GroupTypeTag::Cyclic(n))
    } else {
        poly.group().clone()
    };
    if let Some(t) = conjugator {
        poly = poly.transform(t);
        g = g.conjugate(t);
    }
    Ok((g, poly))
}

/// Builds the form of the table cell and verifies its isotropy is exactly `G`.
pub fn synthesize<T: Real>(spec: &SynthesisSpec<T>, eps: T) -> Result<RationalOneForm<T>> {
    let (l1, l2) = (spec.zero_reps.len(), spec.pole_reps.len());
    check_cell(spec.group, spec.dif, l1, l2)?;
    let (group, poly) = group_and_model(spec.group, spec.conjugator.as_ref())?;
    let (mut zeros, mut poles) = placement(spec, &poly);
    let special = poly.special_points();
    let sep = lit::<T>(1e3) * eps;
    for (reps, out) in [(&spec.zero_reps, &mut zeros), (&spec.pole_reps, &mut poles)] {
        for r in reps.iter() {
            if special.iter().any(|s| s.chordal(r) <= sep) {
                return Err(Error::InvalidInterior(format!("{r} lies on a vertex, edge midpoint or face center")));
            }
            let orbit = group.orbit(r, eps);
            if orbit.len() != group.order() {
                return Err(Error::InvalidInterior(format!("orbit of {r} has {} < |G| points", orbit.len())));
            }
            out.extend(orbit);
        }
    }
    let all: Vec<_> = zeros.iter().chain(poles.iter()).copied().collect();
    if min_separation(&all) <= sep {
        return Err(Error::InvalidInterior("orbits of the representatives overlap".into()));
    }
    let form = RationalOneForm::new(spec.lambda, zeros, poles, eps)?;
    match isotropy(&form, eps)?.kind {
        IsotropyKind::Finite(h) if h.order() > group.order() => Err(Error::AccidentalSymmetry(h.tag().to_string())),
        IsotropyKind::Finite(h) if h.same_set(&group, eps) => Ok(form),
        IsotropyKind::Finite(h) => Err(Error::Internal(format!("synthesized form has isotropy {}", h.tag()))),
        IsotropyKind::ContinuousCStar { .. } => Err(Error::AccidentalSymmetry("continuous C*".into())),
    }
}

/// Seeded random form in the stratum `(G, ℓ₁, ℓ₂)` with `λ = −i`.
///
/// Representatives are drawn uniformly on the sphere; draws with short orbits,
/// near-collisions or accidental extra symmetry are rejected.
pub fn sample_stratum<T: Real>(group: GroupTypeTag, l1: usize, l2: usize, seed: u64, eps: T) -> Result<RationalOneForm<T>> {
    let dif = l1 as i64 - l2 as i64;
    let dif = i32::try_from(dif).map_err(|_| Error::IllegalCell("dif out of range".into()))?;
    check_cell(group, dif, l1, l2)?;
    let (g, poly) = group_and_model::<T>(group, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_sep = lit::<T>(SAMPLE_SEPARATION);
    let mut rejections = 0;
    while rejections < MAX_REJECTIONS {
        let zero_reps: Vec<_> = (0..l1).map(|_| SpherePoint::random(&mut rng)).collect();
        let pole_reps: Vec<_> = (0..l2).map(|_| SpherePoint::random(&mut rng)).collect();
        let mut spec = SynthesisSpec::new(group, dif, zero_reps, pole_reps);
        spec.lambda = default_lambda();
        // Reject near-collisions before paying for the isotropy computation.
        let (mut zs, mut ps) = placement(&spec, &poly);
        for r in spec.zero_reps.iter() {
            zs.extend(g.orbit(r, eps));
        }
        for r in spec.pole_reps.iter() {
            ps.extend(g.orbit(r, eps));
        }
        let all: Vec<_> = zs.iter().chain(ps.iter()).copied().collect();
        let full = spec.zero_reps.iter().chain(spec.pole_reps.iter()).all(|r| g.orbit(r, eps).len() == g.order());
        if !full || min_separation(&all) < min_sep {
            rejections += 1;
            continue;
        }
        match synthesize(&spec, eps) {
            Ok(form) => return Ok(form),
            Err(Error::AccidentalSymmetry(_) | Error::InvalidInterior(_) | Error::InvalidForm(_)) => rejections += 1,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted(MAX_REJECTIONS))
}
