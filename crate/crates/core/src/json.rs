//! JSON interchange: points as `[re, im]` or `"inf"`, maps as `{"a","b","c","d"}`,
//! groups as `{"type","n","elements"}`, polyhedra as `{"kind","V","E","F"}` and
//! forms either by zeros/poles or by ascending coefficient lists.

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{FiniteMobiusGroup, GroupTypeTag};
use crate::mobius::MobiusMap;
use crate::oneform::RationalOneForm;
use crate::polyhedra::{MobiusPolyhedron, PolyhedronKind};
use crate::scalar::Real;
use crate::sphere::SpherePoint;

fn c_to_wire<T: Real>(z: Complex<T>) -> [f64; 2] {
    [z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)]
}

fn c_from_wire<T: Real>(w: [f64; 2]) -> Result<Complex<T>> {
    if !(w[0].is_finite() && w[1].is_finite()) {
        return Err(Error::Parse("non-finite number".into()));
    }
    let f = |x: f64| T::from_f64(x).ok_or_else(|| Error::Parse(format!("{x} not representable")));
    Ok(Complex::new(f(w[0])?, f(w[1])?))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointWire {
    Pair([f64; 2]),
    Tag(String),
}

impl<T: Real> Serialize for SpherePoint<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpherePoint::Infinity => PointWire::Tag("inf".into()).serialize(s),
            SpherePoint::Finite(z) => PointWire::Pair(c_to_wire(*z)).serialize(s),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for SpherePoint<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PointWire::deserialize(d)? {
            PointWire::Tag(t) if t == "inf" => Ok(SpherePoint::Infinity),
            PointWire::Tag(t) => Err(D::Error::custom(format!("unknown point tag {t:?}"))),
            PointWire::Pair(w) => c_from_wire(w).map(SpherePoint::Finite).map_err(D::Error::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapWire {
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

impl<T: Real> Serialize for MobiusMap<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [a, b, c, d] = self.entries();
        MapWire { a: c_to_wire(a), b: c_to_wire(b), c: c_to_wire(c), d: c_to_wire(d) }.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for MobiusMap<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = MapWire::deserialize(d)?;
        let conv = |x| c_from_wire::<T>(x).map_err(D::Error::custom);
        MobiusMap::new(conv(w.a)?, conv(w.b)?, conv(w.c)?, conv(w.d)?).map_err(D::Error::custom)
    }
}

pub fn point_from_value<T: Real>(v: &Value) -> Result<SpherePoint<T>> {
    SpherePoint::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn map_from_value<T: Real>(v: &Value) -> Result<MobiusMap<T>> {
    MobiusMap::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn map_to_value<T: Real>(m: &MobiusMap<T>) -> Value {
    serde_json::to_value(m).expect("maps serialize")
}

pub fn group_to_value<T: Real>(g: &FiniteMobiusGroup<T>) -> Value {
    let tag = g.tag();
    let mut v = json!({ "type": tag.kind_name(), "elements": g.elements() });
    if let Some(n) = tag.param() {
        v["n"] = json!(n);
    }
    v
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupWire {
    #[serde(rename = "type")]
    kind: String,
    n: Option<usize>,
    elements: Option<Vec<Value>>,
    conjugator: Option<Value>,
}

/// Reads a group; explicit elements are validated, otherwise the canonical model is used
/// (conjugated when a `"conjugator"` map is present).
pub fn group_from_value<T: Real>(v: &Value, eps: T) -> Result<FiniteMobiusGroup<T>> {
    let w: GroupWire = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let tag = GroupTypeTag::from_kind(&w.kind, w.n)?;
    let group = match w.elements {
        Some(els) => {
            let maps = els.iter().map(map_from_value).collect::<Result<Vec<_>>>()?;
            let g = FiniteMobiusGroup::from_elements(maps, eps)?;
            if g.tag() != tag {
                return Err(Error::Parse(format!("elements form {} but type says {}", g.tag(), tag)));
            }
            g
        }
        None => FiniteMobiusGroup::canonical(tag),
    };
    match w.conjugator {
        Some(c) => Ok(group.conjugate(&map_from_value(&c)?)),
        None => Ok(group),
    }
}

pub fn polyhedron_to_value<T: Real>(p: &MobiusPolyhedron<T>) -> Value {
    let mut v = json!({
        "kind": p.kind().name(),
        "V": p.vertices(),
        "E": p.edges(),
        "F": p.faces(),
    });
    if let PolyhedronKind::Dihedron(n) | PolyhedronKind::Hosohedron(n) = p.kind() {
        v["n"] = json!(n);
    }
    v
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormWire {
    name: Option<String>,
    lambda: Option<[f64; 2]>,
    zeros: Option<Vec<Value>>,
    poles: Option<Vec<Value>>,
    numer: Option<Vec<[f64; 2]>>,
    denom: Option<Vec<[f64; 2]>>,
}

/// Parses either `{"lambda","zeros","poles"}` or `{"numer","denom"[,"lambda"]}`.
pub fn form_from_value<T: Real>(v: &Value, eps: T) -> Result<RationalOneForm<T>> {
    let w: FormWire = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let _ = w.name;
    let one = Complex::new(T::one(), T::zero());
    match (w.zeros, w.poles, w.numer, w.denom) {
        (Some(z), Some(p), None, None) => {
            let lambda = match w.lambda {
                Some(l) => c_from_wire(l)?,
                None => return Err(Error::Parse("form by zeros/poles needs \"lambda\"".into())),
            };
            let zeros = z.iter().map(point_from_value).collect::<Result<Vec<_>>>()?;
            let poles = p.iter().map(point_from_value).collect::<Result<Vec<_>>>()?;
            RationalOneForm::new(lambda, zeros, poles, eps)
        }
        (None, None, Some(n), Some(d)) => {
            let lambda = w.lambda.map(c_from_wire).transpose()?.unwrap_or(one);
            let numer = n.into_iter().map(c_from_wire).collect::<Result<Vec<_>>>()?;
            let denom = d.into_iter().map(c_from_wire).collect::<Result<Vec<_>>>()?;
            RationalOneForm::from_rational_coefficients(&numer, &denom, lambda, eps)
        }
        _ => Err(Error::Parse(
            "form needs either \"zeros\"+\"poles\"+\"lambda\" or \"numer\"+\"denom\"".into(),
        )),
    }
}

pub fn form_from_str<T: Real>(s: &str, eps: T) -> Result<RationalOneForm<T>> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    form_from_value(&v, eps)
}

pub fn form_to_value<T: Real>(f: &RationalOneForm<T>) -> Value {
    json!({
        "lambda": c_to_wire(f.lambda()),
        "zeros": f.zeros(),
        "poles": f.poles(),
    })
}

pub fn complex_to_value<T: Real>(z: Complex<T>) -> Value {
    json!(c_to_wire(z))
}
