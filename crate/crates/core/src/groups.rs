//! Finite subgroups of `PSL(2, ℂ)`: closure, recognition and canonical models.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mobius::MobiusMap;
use crate::scalar::{cis, lit, Real};
use crate::sphere::{dedup_close, SpherePoint};

/// Default cap on the number of elements produced by [`closure`].
pub const DEFAULT_CAP: usize = 200;

/// Isomorphism type of a finite Möbius group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTypeTag {
    Trivial,
    Cyclic(usize),
    Dihedral(usize),
    A4,
    S4,
    A5,
}

impl GroupTypeTag {
    pub fn order(&self) -> usize {
        match *self {
            GroupTypeTag::Trivial => 1,
            GroupTypeTag::Cyclic(n) => n,
            GroupTypeTag::Dihedral(n) => 2 * n,
            GroupTypeTag::A4 => 12,
            GroupTypeTag::S4 => 24,
            GroupTypeTag::A5 => 60,
        }
    }

    /// Name used in JSON (`"type"` field).
    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupTypeTag::Trivial => "trivial",
            GroupTypeTag::Cyclic(_) => "cyclic",
            GroupTypeTag::Dihedral(_) => "dihedral",
            GroupTypeTag::A4 => "A4",
            GroupTypeTag::S4 => "S4",
            GroupTypeTag::A5 => "A5",
        }
    }

    /// Parameter `n` for the cyclic and dihedral families.
    pub fn param(&self) -> Option<usize> {
        match *self {
            GroupTypeTag::Cyclic(n) | GroupTypeTag::Dihedral(n) => Some(n),
            _ => None,
        }
    }

    pub fn from_kind(kind: &str, n: Option<usize>) -> Result<Self> {
        let need = |n: Option<usize>| n.ok_or_else(|| Error::Parse(format!("group type {kind} needs n")));
        let tag = match kind {
            "trivial" => GroupTypeTag::Trivial,
            "cyclic" => GroupTypeTag::Cyclic(need(n)?),
            "dihedral" => GroupTypeTag::Dihedral(need(n)?),
            "A4" | "tetrahedral" => GroupTypeTag::A4,
            "S4" | "octahedral" => GroupTypeTag::S4,
            "A5" | "icosahedral" => GroupTypeTag::A5,
            _ => return Err(Error::Parse(format!("unknown group type {kind:?}"))),
        };
        tag.validated()
    }

    fn validated(self) -> Result<Self> {
        match self {
            GroupTypeTag::Cyclic(0) => Err(Error::Parse("cyclic group needs n ≥ 1".into())),
            GroupTypeTag::Cyclic(1) => Ok(GroupTypeTag::Trivial),
            GroupTypeTag::Dihedral(n) if n < 2 => Err(Error::Parse("dihedral group needs n ≥ 2".into())),
            t => Ok(t),
        }
    }

    pub fn is_platonic(&self) -> bool {
        matches!(self, GroupTypeTag::A4 | GroupTypeTag::S4 | GroupTypeTag::A5)
    }
}

impl fmt::Display for GroupTypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTypeTag::Trivial => write!(f, "trivial"),
            GroupTypeTag::Cyclic(n) => write!(f, "Z{n}"),
            GroupTypeTag::Dihedral(n) => write!(f, "D{n}"),
            GroupTypeTag::A4 => write!(f, "A4"),
            GroupTypeTag::S4 => write!(f, "S4"),
            GroupTypeTag::A5 => write!(f, "A5"),
        }
    }
}

impl FromStr for GroupTypeTag {
    type Err = Error;

    /// Accepts `Z<n>`, `D<n>`, `A4`, `S4`, `A5` and `trivial`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad group name {s:?}")))
        };
        let tag = match s {
            "trivial" | "1" => GroupTypeTag::Trivial,
            "A4" => GroupTypeTag::A4,
            "S4" => GroupTypeTag::S4,
            "A5" => GroupTypeTag::A5,
            _ if s.starts_with('Z') || s.starts_with('C') => GroupTypeTag::Cyclic(num(&s[1..])?),
            _ if s.starts_with('D') => GroupTypeTag::Dihedral(num(&s[1..])?),
            _ => return Err(Error::Parse(format!("bad group name {s:?}"))),
        };
        tag.validated()
    }
}

/// All products of `generators`, or an error once more than `cap` elements appear.
pub fn closure<T: Real>(generators: &[MobiusMap<T>], cap: usize, eps: T) -> Result<Vec<MobiusMap<T>>> {
    let mut elements = vec![MobiusMap::identity()];
    let mut queue = vec![MobiusMap::identity()];
    while let Some(e) = queue.pop() {
        for g in generators {
            let h = e.compose(g);
            if !elements.iter().any(|x| x.approx_eq(&h, eps)) {
                elements.push(h);
                if elements.len() > cap {
                    return Err(Error::NotFinite(cap));
                }
                queue.push(h);
            }
        }
    }
    Ok(elements)
}

/// Reads off the isomorphism type from element orders.
pub fn identify_type<T: Real>(elements: &[MobiusMap<T>], eps: T) -> Result<GroupTypeTag> {
    let n = elements.len();
    if n == 1 {
        return Ok(GroupTypeTag::Trivial);
    }
    let orders: Vec<usize> = elements
        .iter()
        .map(|g| g.rotation_order(n, eps))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::UnrecognizedGroup("element of infinite or unresolved order".into()))?;
    let max = *orders.iter().max().unwrap_or(&1);
    if max == n {
        return Ok(GroupTypeTag::Cyclic(n));
    }
    if n % 2 == 0 && orders.contains(&(n / 2)) && n / 2 >= 2 && !(n == 12 && max == 3) {
        return Ok(GroupTypeTag::Dihedral(n / 2));
    }
    match (n, max) {
        (12, 3) => Ok(GroupTypeTag::A4),
        (24, 4) => Ok(GroupTypeTag::S4),
        (60, 5) => Ok(GroupTypeTag::A5),
        _ => Err(Error::UnrecognizedGroup(format!("order {n} with maximal element order {max}"))),
    }
}

/// A rotation axis: the fixed pair of non-trivial elements and the largest order seen there.
#[derive(Clone, Debug)]
pub struct Axis<T> {
    pub element: MobiusMap<T>,
    pub points: [SpherePoint<T>; 2],
    pub order: usize,
}

/// A finite group of Möbius maps with its recognized type.
#[derive(Clone, Debug)]
pub struct FiniteMobiusGroup<T> {
    elements: Vec<MobiusMap<T>>,
    tag: GroupTypeTag,
}

fn m<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> MobiusMap<T> {
    MobiusMap::new(a, b, c, d).expect("canonical generator is regular")
}

/// Generators of the canonical model of each group type.
pub fn canonical_generators<T: Real>(tag: GroupTypeTag) -> Vec<MobiusMap<T>> {
    let z0 = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let re = |x: f64| Complex::new(lit::<T>(x), T::zero());
    let cx = |x: f64, y: f64| Complex::new(lit::<T>(x), lit::<T>(y));
    let tau = T::PI() + T::PI();
    match tag {
        GroupTypeTag::Trivial => vec![],
        GroupTypeTag::Cyclic(n) => vec![m(cis(tau / lit(n as f64)), z0, z0, one)],
        GroupTypeTag::Dihedral(n) => vec![
            m(cis(tau / lit(n as f64)), z0, z0, one),
            m(z0, one, one, z0),
        ],
        GroupTypeTag::A4 => {
            let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
            vec![
                m(cis(tau / lit(3.0)), z0, z0, one),
                m(cx(s2, s6), cx(2.0, 2.0 * s3), re(-4.0), re(2.0 * s2)),
            ]
        }
        GroupTypeTag::S4 => vec![
            m(Complex::new(T::zero(), T::one()), z0, z0, one),
            m(one, one, -one, one),
        ],
        GroupTypeTag::A5 => {
            let w = cis(tau / lit(5.0));
            let s5 = lit::<T>(5.0).sqrt();
            let two = lit::<T>(2.0);
            vec![
                m(w, z0, z0, one),
                m(
                    Complex::new(s5 + T::one(), T::zero()),
                    -w * two,
                    (one - w + w * w) * (lit::<T>(3.0) + s5),
                    -w * w * (T::one() + s5),
                ),
            ]
        }
    }
}

impl<T: Real> FiniteMobiusGroup<T> {
    /// Closes the generators and recognizes the result.
    pub fn generate(generators: &[MobiusMap<T>], cap: usize, eps: T) -> Result<Self> {
        let elements = closure(generators, cap, eps)?;
        let tag = identify_type(&elements, eps)?;
        Ok(Self { elements, tag })
    }

    /// Canonical model generated by the classical generators of each type.
    pub fn canonical(tag: GroupTypeTag) -> Self {
        let eps = T::default_eps();
        let elements = closure(&canonical_generators::<T>(tag), DEFAULT_CAP, eps)
            .expect("canonical generators close");
        debug_assert_eq!(elements.len(), tag.order());
        Self { elements, tag }
    }

    /// Validates that `elements` form a group (identity, inverses, products) and recognizes it.
    pub fn from_elements(elements: Vec<MobiusMap<T>>, eps: T) -> Result<Self> {
        let contains = |g: &MobiusMap<T>| elements.iter().any(|x| x.approx_eq(g, eps));
        if !contains(&MobiusMap::identity()) {
            return Err(Error::NotAGroup("identity missing".into()));
        }
        for (i, x) in elements.iter().enumerate() {
            if elements[..i].iter().any(|y| y.approx_eq(x, eps)) {
                return Err(Error::NotAGroup("repeated element".into()));
            }
            if !contains(&x.inverse()) {
                return Err(Error::NotAGroup("not closed under inverses".into()));
            }
            for y in &elements {
                if !contains(&x.compose(y)) {
                    return Err(Error::NotAGroup("not closed under composition".into()));
                }
            }
        }
        let tag = identify_type(&elements, eps)?;
        Ok(Self { elements, tag })
    }

    pub fn tag(&self) -> GroupTypeTag {
        self.tag
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[MobiusMap<T>] {
        &self.elements
    }

    pub fn contains(&self, g: &MobiusMap<T>, eps: T) -> bool {
        self.elements.iter().any(|x| x.approx_eq(g, eps))
    }

    /// Same underlying set of maps.
    pub fn same_set(&self, other: &Self, eps: T) -> bool {
        self.order() == other.order() && other.elements.iter().all(|g| self.contains(g, eps))
    }

    /// `T G T⁻¹`.
    pub fn conjugate(&self, t: &MobiusMap<T>) -> Self {
        Self {
            elements: self.elements.iter().map(|g| t.conjugate(g)).collect(),
            tag: self.tag,
        }
    }

    pub fn orbit(&self, p: &SpherePoint<T>, eps: T) -> Vec<SpherePoint<T>> {
        let images: Vec<_> = self.elements.iter().map(|g| g.apply(p)).collect();
        dedup_close(&images, eps)
    }

    /// Fixed-point pairs of the non-trivial elements, one entry per axis.
    pub fn axes(&self, eps: T) -> Result<Vec<Axis<T>>> {
        let n = self.order();
        let mut axes: Vec<Axis<T>> = Vec::new();
        for g in &self.elements {
            if g.is_identity(eps) {
                continue;
            }
            let order = g
                .rotation_order(n, eps)
                .ok_or_else(|| Error::Internal("group element of unresolved order".into()))?;
            let fp = g.fixed_points(eps)?;
            if fp.len() != 2 {
                return Err(Error::Internal("finite-order element without two fixed points".into()));
            }
            let pts = [fp[0], fp[1]];
            let same = |a: &Axis<T>| {
                (a.points[0].approx_eq(&pts[0], eps) && a.points[1].approx_eq(&pts[1], eps))
                    || (a.points[0].approx_eq(&pts[1], eps) && a.points[1].approx_eq(&pts[0], eps))
            };
            match axes.iter_mut().find(|a| same(a)) {
                Some(a) if order > a.order => {
                    a.order = order;
                    a.element = *g;
                }
                Some(_) => {}
                None => axes.push(Axis { element: *g, points: pts, order }),
            }
        }
        Ok(axes)
    }

    /// A small generating set (at most two maps for every finite type).
    pub fn generators(&self, eps: T) -> Vec<MobiusMap<T>> {
        let n = self.order();
        if n == 1 {
            return vec![];
        }
        let mut by_order: Vec<(usize, MobiusMap<T>)> = self
            .elements
            .iter()
            .map(|g| (g.rotation_order(n, eps).unwrap_or(0), *g))
            .collect();
        by_order.sort_by(|a, b| b.0.cmp(&a.0));
        let g1 = by_order[0].1;
        if by_order[0].0 == n {
            return vec![g1];
        }
        for (_, g2) in &by_order[1..] {
            if let Ok(els) = closure(&[g1, *g2], n, eps) {
                if els.len() == n {
                    return vec![g1, *g2];
                }
            }
        }
        self.elements.iter().filter(|g| !g.is_identity(eps)).copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_orders_and_types() {
        for tag in [
            GroupTypeTag::Trivial,
            GroupTypeTag::Cyclic(7),
            GroupTypeTag::Dihedral(2),
            GroupTypeTag::Dihedral(5),
            GroupTypeTag::A4,
            GroupTypeTag::S4,
            GroupTypeTag::A5,
        ] {
            let g = FiniteMobiusGroup::<f64>::canonical(tag);
            assert_eq!(g.order(), tag.order(), "{tag}");
            assert_eq!(identify_type(g.elements(), 1e-8).unwrap(), tag);
        }
    }

    #[test]
    fn axes_census() {
        let count = |tag| FiniteMobiusGroup::<f64>::canonical(tag).axes(1e-8).unwrap().len();
        assert_eq!(count(GroupTypeTag::A4), 7);
        assert_eq!(count(GroupTypeTag::S4), 13);
        assert_eq!(count(GroupTypeTag::A5), 31);
        assert_eq!(count(GroupTypeTag::Dihedral(5)), 6);
    }

    #[test]
    fn loxodromic_generator_is_not_finite() {
        let g = MobiusMap::<f64>::new(
            Complex::new(2.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        )
        .unwrap();
        assert_eq!(closure(&[g], 200, 1e-8).unwrap_err(), Error::NotFinite(200));
    }

    #[test]
    fn parse_names() {
        assert_eq!("D5".parse::<GroupTypeTag>().unwrap(), GroupTypeTag::Dihedral(5));
        assert_eq!("Z1".parse::<GroupTypeTag>().unwrap(), GroupTypeTag::Trivial);
        assert!("D1".parse::<GroupTypeTag>().is_err());
        assert!("Q8".parse::<GroupTypeTag>().is_err());
    }
}
