//! Bundled reference forms with their known isotropy groups and isochrony claims.

use num_complex::Complex;

use crate::error::Result;
use crate::groups::GroupTypeTag;
use crate::json::form_from_str;
use crate::mobius::MobiusMap;
use crate::oneform::RationalOneForm;
use crate::scalar::{cis, lit, Real};
use crate::sphere::SpherePoint;

/// Expected isotropy of a reference form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedIsotropy {
    Finite(GroupTypeTag),
    ContinuousCStar,
}

impl std::fmt::Display for ExpectedIsotropy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExpectedIsotropy::Finite(t) => write!(f, "{t}"),
            ExpectedIsotropy::ContinuousCStar => write!(f, "C*"),
        }
    }
}

/// A reference form bundled as coefficient-list JSON.
#[derive(Clone, Copy, Debug)]
pub struct PaperForm {
    pub name: &'static str,
    pub json: &'static str,
    pub isotropy: ExpectedIsotropy,
    /// Known isochrony status at the bundled `λ`, when asserted.
    pub isochronous: Option<bool>,
    /// Whether a reflection certificate is known to exist.
    pub mirror: Option<bool>,
    /// Set when the printed isotropy is too small.
    pub erratum: Option<Erratum>,
}

/// A printed isotropy claim contradicted by an explicit extra symmetry.
#[derive(Clone, Copy, Debug)]
pub struct Erratum {
    /// The isotropy the form actually has.
    pub isotropy: ExpectedIsotropy,
    /// Matrix `[a, b, c, d]` (as `[re, im]` pairs) of a symmetry outside the printed group.
    pub witness: [[f64; 2]; 4],
    pub note: &'static str,
}

impl Erratum {
    pub fn witness_map<T: Real>(&self) -> Result<MobiusMap<T>> {
        let [a, b, c, d] = self.witness.map(|[re, im]| Complex::new(lit::<T>(re), lit::<T>(im)));
        MobiusMap::new(a, b, c, d)
    }
}

macro_rules! bundled {
    ($name:literal) => {
        include_str!(concat!("../data/paper/", $name, ".json"))
    };
}

use ExpectedIsotropy::Finite;
use GroupTypeTag::*;

/// The eleven bundled reference forms (the parametric families at `n = 5`).
pub const PAPER_FORMS: [PaperForm; 11] = [
    PaperForm {
        name: "ejemplo1",
        json: bundled!("ejemplo1"),
        isotropy: Finite(Cyclic(2)),
        isochronous: Some(false),
        mirror: None,
        erratum: Some(Erratum {
            isotropy: Finite(Dihedral(2)),
            witness: [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
            note: "z -> 1/z also preserves z dz/(z^4-1)",
        }),
    },
    PaperForm { name: "ejemplo2", json: bundled!("ejemplo2"), isotropy: Finite(Trivial), isochronous: None, mirror: None, erratum: None },
    PaperForm { name: "ejemplo3", json: bundled!("ejemplo3"), isotropy: Finite(Cyclic(3)), isochronous: None, mirror: None, erratum: None },
    PaperForm { name: "tetra", json: bundled!("tetra"), isotropy: Finite(A4), isochronous: Some(true), mirror: Some(true), erratum: None },
    PaperForm { name: "octa", json: bundled!("octa"), isotropy: Finite(S4), isochronous: Some(true), mirror: Some(true), erratum: None },
    PaperForm { name: "dodecaedro", json: bundled!("dodecaedro"), isotropy: Finite(A5), isochronous: Some(true), mirror: Some(true), erratum: None },
    PaperForm { name: "diedricoN", json: bundled!("diedricoN"), isotropy: Finite(Dihedral(5)), isochronous: Some(true), mirror: Some(true), erratum: None },
    PaperForm { name: "EjemploCiclico", json: bundled!("EjemploCiclico"), isotropy: Finite(Cyclic(5)), isochronous: Some(true), mirror: Some(true), erratum: None },
    PaperForm { name: "ejemploTetra", json: bundled!("ejemploTetra"), isotropy: Finite(Dihedral(2)), isochronous: None, mirror: None, erratum: None },
    PaperForm { name: "ejemploLangerOcta", json: bundled!("ejemploLangerOcta"), isotropy: Finite(A4), isochronous: None, mirror: None, erratum: None },
    PaperForm { name: "contraejemploisocrona", json: bundled!("contraejemploisocrona"), isotropy: Finite(Cyclic(4)), isochronous: Some(true), mirror: Some(false), erratum: None },
];

impl PaperForm {
    pub fn form<T: Real>(&self, eps: T) -> Result<RationalOneForm<T>> {
        form_from_str(self.json, eps)
    }
}

pub fn find(name: &str) -> Option<&'static PaperForm> {
    PAPER_FORMS.iter().find(|f| f.name == name)
}

fn roots_of<T: Real>(n: usize, scale: T, twist: T) -> Vec<SpherePoint<T>> {
    let tau = T::PI() + T::PI();
    (0..n)
        .map(|k| SpherePoint::Finite(cis((lit::<T>(k as f64) + twist) * tau / lit(n as f64)) * scale))
        .collect()
}

/// `λ (zⁿ + 1)/(z(zⁿ − 1)) dz`, isotropy `Dₙ`.
pub fn dihedral_family<T: Real>(n: usize, lambda: Complex<T>, eps: T) -> Result<RationalOneForm<T>> {
    let zeros = roots_of(n, T::one(), lit(0.5));
    let mut poles = roots_of(n, T::one(), T::zero());
    poles.push(SpherePoint::zero());
    poles.push(SpherePoint::Infinity);
    RationalOneForm::new(lambda, zeros, poles, eps)
}

/// `i (1 + 2zⁿ)/(z(zⁿ − 1)) dz`, isotropy `Zₙ`.
pub fn cyclic_family<T: Real>(n: usize, eps: T) -> Result<RationalOneForm<T>> {
    // zⁿ = −1/2
    let r = lit::<T>(0.5).powf(T::one() / lit(n as f64));
    let zeros = roots_of(n, r, lit(0.5));
    let mut poles = roots_of(n, T::one(), T::zero());
    poles.push(SpherePoint::zero());
    poles.push(SpherePoint::Infinity);
    RationalOneForm::new(Complex::new(T::zero(), lit(2.0)), zeros, poles, eps)
}

/// `λ dz/z`, whose isotropy is the continuous group `ℂ*`.
pub fn two_pole<T: Real>(lambda: Complex<T>, eps: T) -> Result<RationalOneForm<T>> {
    RationalOneForm::new(lambda, vec![], vec![SpherePoint::zero(), SpherePoint::Infinity], eps)
}
