//! Möbius polyhedra: vertices, edge midpoints and face centers of the regular
//! tessellations of the sphere, together with their symmetry groups.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::groups::{FiniteMobiusGroup, GroupTypeTag};
use crate::mobius::MobiusMap;
use crate::scalar::{cis, lit, Real};
use crate::sphere::{contains_close, dedup_close, SpherePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyhedronKind {
    Tetrahedron,
    Cube,
    Octahedron,
    Icosahedron,
    Dodecahedron,
    Dihedron(usize),
    Hosohedron(usize),
}

/// Combinatorial data `(v, e, f, |G|)` of each kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyhedronCounts {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub group_order: usize,
}

impl PolyhedronKind {
    pub fn counts(&self) -> PolyhedronCounts {
        let (v, e, f, g) = match *self {
            PolyhedronKind::Tetrahedron => (4, 6, 4, 12),
            PolyhedronKind::Cube => (8, 12, 6, 24),
            PolyhedronKind::Octahedron => (6, 12, 8, 24),
            PolyhedronKind::Icosahedron => (12, 30, 20, 60),
            PolyhedronKind::Dodecahedron => (20, 30, 12, 60),
            PolyhedronKind::Dihedron(n) => (n, n, 2, 2 * n),
            PolyhedronKind::Hosohedron(n) => (2, n, n, 2 * n),
        };
        PolyhedronCounts { v, e, f, group_order: g }
    }

    pub fn group_type(&self) -> GroupTypeTag {
        match *self {
            PolyhedronKind::Tetrahedron => GroupTypeTag::A4,
            PolyhedronKind::Cube | PolyhedronKind::Octahedron => GroupTypeTag::S4,
            PolyhedronKind::Icosahedron | PolyhedronKind::Dodecahedron => GroupTypeTag::A5,
            PolyhedronKind::Dihedron(n) | PolyhedronKind::Hosohedron(n) => GroupTypeTag::Dihedral(n),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolyhedronKind::Tetrahedron => "tetrahedron",
            PolyhedronKind::Cube => "cube",
            PolyhedronKind::Octahedron => "octahedron",
            PolyhedronKind::Icosahedron => "icosahedron",
            PolyhedronKind::Dodecahedron => "dodecahedron",
            PolyhedronKind::Dihedron(_) => "dihedron",
            PolyhedronKind::Hosohedron(_) => "hosohedron",
        }
    }
}

impl fmt::Display for PolyhedronKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyhedronKind::Dihedron(n) | PolyhedronKind::Hosohedron(n) => write!(f, "{}{}", self.name(), n),
            _ => write!(f, "{}", self.name()),
        }
    }
}

impl FromStr for PolyhedronKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let param = |rest: &str| -> Result<usize> {
            let n = rest
                .trim_start_matches(['(', '_'])
                .trim_end_matches(')')
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad polyhedron {s:?}")))?;
            if n < 2 {
                return Err(Error::Parse("dihedron/hosohedron needs n ≥ 2".into()));
            }
            Ok(n)
        };
        Ok(match s {
            "tetrahedron" => PolyhedronKind::Tetrahedron,
            "cube" => PolyhedronKind::Cube,
            "octahedron" => PolyhedronKind::Octahedron,
            "icosahedron" => PolyhedronKind::Icosahedron,
            "dodecahedron" => PolyhedronKind::Dodecahedron,
            _ if s.starts_with("dihedron") => PolyhedronKind::Dihedron(param(&s[8..])?),
            _ if s.starts_with("hosohedron") => PolyhedronKind::Hosohedron(param(&s[10..])?),
            _ => return Err(Error::Parse(format!("unknown polyhedron {s:?}"))),
        })
    }
}

/// Orbit of a point is "full" when its size equals the group order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitSizeClass {
    Full,
    Special(usize),
}

/// A regular tessellation of the sphere placed by a Möbius embedding.
#[derive(Clone, Debug)]
pub struct MobiusPolyhedron<T> {
    kind: PolyhedronKind,
    vertices: Vec<SpherePoint<T>>,
    edges: Vec<SpherePoint<T>>,
    faces: Vec<SpherePoint<T>>,
    group: FiniteMobiusGroup<T>,
    embedding: MobiusMap<T>,
}

fn roots_of<T: Real>(n: usize, twist: T) -> Vec<SpherePoint<T>> {
    let tau = T::PI() + T::PI();
    (0..n)
        .map(|k| SpherePoint::Finite(cis((lit::<T>(k as f64) + twist) * tau / lit(n as f64))))
        .collect()
}

/// Edge midpoint and face center seeds from the vertex set of a triangulated solid.
fn triangle_seeds<T: Real>(vertices: &[SpherePoint<T>]) -> Result<(SpherePoint<T>, SpherePoint<T>)> {
    let v0 = vertices[0];
    let dmin = vertices[1..]
        .iter()
        .map(|v| v0.chordal(v))
        .fold(lit::<T>(2.0), T::min);
    let tol = lit::<T>(1e-6);
    let adjacent: Vec<_> = vertices[1..]
        .iter()
        .filter(|v| (v0.chordal(v) - dmin).abs() <= tol)
        .copied()
        .collect();
    let v1 = adjacent[0];
    let v2 = adjacent[1..]
        .iter()
        .find(|w| (w.chordal(&v1) - dmin).abs() <= tol)
        .copied()
        .ok_or_else(|| Error::Internal("no triangular face found".into()))?;
    let mid = v0.spherical_midpoint(&v1)?;
    let (a, b, c) = (v0.to_unit_vector(), v1.to_unit_vector(), v2.to_unit_vector());
    let center = SpherePoint::from_vector([a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]])?;
    Ok((mid, center))
}

impl<T: Real> MobiusPolyhedron<T> {
    /// Canonical embedding of each kind.
    pub fn canonical(kind: PolyhedronKind) -> Result<Self> {
        let eps = T::default_eps();
        let group = FiniteMobiusGroup::<T>::canonical(kind.group_type());
        let orbit = |p: SpherePoint<T>| group.orbit(&p, eps);
        let (vertices, edges, faces) = match kind {
            PolyhedronKind::Tetrahedron => {
                let r = T::one() / lit::<T>(2.0).sqrt();
                let mut v: Vec<_> = roots_of(3, T::zero())
                    .into_iter()
                    .map(|p| SpherePoint::Finite(p.finite().unwrap() * r))
                    .collect();
                v.push(SpherePoint::Infinity);
                let (s3, s6) = (lit::<T>(3.0).sqrt(), lit::<T>(6.0).sqrt());
                let b = cis(T::PI() / lit(3.0)) * (s6 / (lit::<T>(3.0) + s3));
                (v, orbit(SpherePoint::Finite(b)), orbit(SpherePoint::zero()))
            }
            PolyhedronKind::Octahedron | PolyhedronKind::Cube => {
                let one = T::one();
                let v = vec![
                    SpherePoint::zero(),
                    SpherePoint::from_re_im(one, T::zero()),
                    SpherePoint::from_re_im(-one, T::zero()),
                    SpherePoint::from_re_im(T::zero(), one),
                    SpherePoint::from_re_im(T::zero(), -one),
                    SpherePoint::Infinity,
                ];
                let (mid, center) = triangle_seeds(&v)?;
                let (e, f) = (orbit(mid), orbit(center));
                if kind == PolyhedronKind::Octahedron { (v, e, f) } else { (f, e, v) }
            }
            PolyhedronKind::Icosahedron | PolyhedronKind::Dodecahedron => {
                let v = orbit(SpherePoint::zero());
                let (mid, center) = triangle_seeds(&v)?;
                let (e, f) = (orbit(mid), orbit(center));
                if kind == PolyhedronKind::Icosahedron { (v, e, f) } else { (f, e, v) }
            }
            PolyhedronKind::Dihedron(n) | PolyhedronKind::Hosohedron(n) => {
                if n < 2 {
                    return Err(Error::Degenerate("dihedron needs n ≥ 2".into()));
                }
                let v = roots_of(n, T::zero());
                let e = roots_of(n, lit(0.5));
                let f = vec![SpherePoint::zero(), SpherePoint::Infinity];
                if matches!(kind, PolyhedronKind::Dihedron(_)) { (v, e, f) } else { (f, e, v) }
            }
        };
        let poly = Self { kind, vertices, edges, faces, group, embedding: MobiusMap::identity() };
        poly.validate(eps)?;
        Ok(poly)
    }

    fn validate(&self, eps: T) -> Result<()> {
        let c = self.kind.counts();
        let ok = self.vertices.len() == c.v
            && self.edges.len() == c.e
            && self.faces.len() == c.f
            && self.group.order() == c.group_order;
        if !ok {
            return Err(Error::Internal(format!(
                "{}: got v={} e={} f={} |G|={}",
                self.kind,
                self.vertices.len(),
                self.edges.len(),
                self.faces.len(),
                self.group.order()
            )));
        }
        let all = self.special_points();
        if dedup_close(&all, eps).len() != all.len() {
            return Err(Error::Internal("vertex, edge and face sets overlap".into()));
        }
        Ok(())
    }

    /// The same polyhedron moved by `t`; the group is conjugated accordingly.
    pub fn transform(&self, t: &MobiusMap<T>) -> Self {
        let map = |s: &[SpherePoint<T>]| s.iter().map(|p| t.apply(p)).collect::<Vec<_>>();
        Self {
            kind: self.kind,
            vertices: map(&self.vertices),
            edges: map(&self.edges),
            faces: map(&self.faces),
            group: self.group.conjugate(t),
            embedding: t.compose(&self.embedding),
        }
    }

    pub fn kind(&self) -> PolyhedronKind {
        self.kind
    }

    pub fn vertices(&self) -> &[SpherePoint<T>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[SpherePoint<T>] {
        &self.edges
    }

    pub fn faces(&self) -> &[SpherePoint<T>] {
        &self.faces
    }

    pub fn group(&self) -> &FiniteMobiusGroup<T> {
        &self.group
    }

    pub fn embedding(&self) -> &MobiusMap<T> {
        &self.embedding
    }

    /// `V ∪ E ∪ F`.
    pub fn special_points(&self) -> Vec<SpherePoint<T>> {
        let mut all = self.vertices.clone();
        all.extend_from_slice(&self.edges);
        all.extend_from_slice(&self.faces);
        all
    }

    /// Antipode of a special point, transported through the embedding.
    pub fn antipode(&self, p: &SpherePoint<T>, eps: T) -> Result<SpherePoint<T>> {
        if !contains_close(&self.special_points(), p, eps) {
            return Err(Error::Precondition("antipode is defined on V ∪ E ∪ F only".into()));
        }
        let inv = self.embedding.inverse();
        Ok(self.embedding.apply(&inv.apply(p).antipode()))
    }

    pub fn orbit_size_class(&self, p: &SpherePoint<T>, eps: T) -> OrbitSizeClass {
        let k = self.group.orbit(p, eps).len();
        if k == self.group.order() {
            OrbitSizeClass::Full
        } else {
            OrbitSizeClass::Special(k)
        }
    }
}

/// Orbit size class of `p` under an arbitrary finite group.
pub fn orbit_size_class<T: Real>(group: &FiniteMobiusGroup<T>, p: &SpherePoint<T>, eps: T) -> OrbitSizeClass {
    let k = group.orbit(p, eps).len();
    if k == group.order() {
        OrbitSizeClass::Full
    } else {
        OrbitSizeClass::Special(k)
    }
}
