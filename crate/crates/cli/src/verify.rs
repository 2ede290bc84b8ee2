//! The reference-form harness behind `verify-paper`.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex;
use serde_json::{json, Value};

use isoform::isochrony::{isochrony_report, mirror_search, IsochronyOptions};
use isoform::isotropy::{isotropy, IsotropyKind};
use isoform::paper::{cyclic_family, dihedral_family, two_pole, ExpectedIsotropy, PaperForm, PAPER_FORMS};
use isoform::{GroupTypeTag, RationalOneForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// The printed claim is wrong and an explicit symmetry proves it.
    Erratum,
    Fail,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Erratum => "ERRATUM",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    pub expected: String,
    pub computed: String,
    /// `expected/computed`, or `-` when no claim is checked.
    pub isochronous: String,
    pub mirror: String,
    pub status: Status,
    pub note: String,
    pub millis: f64,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub rows: Vec<Row>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<24} {:<8} {:<8} {:<11} {:<11} {:<8} {:>9}  note", "form", "expected", "computed", "isochron.", "mirror", "status", "ms");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<24} {:<8} {:<8} {:<11} {:<11} {:<8} {:>9.1}  {}",
                r.name,
                r.expected,
                r.computed,
                r.isochronous,
                r.mirror,
                r.status.label(),
                r.millis,
                r.note
            );
        }
        let _ = writeln!(s, "{} rows, {} failed", self.rows.len(), self.failures());
        s
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name, "expected": r.expected, "computed": r.computed,
                        "isochronous": r.isochronous, "mirror": r.mirror,
                        "status": r.status.label(), "note": r.note, "ms": r.millis,
                    })
                })
                .collect(),
        )
    }
}

fn computed_isotropy(form: &RationalOneForm, eps: f64) -> Result<(ExpectedIsotropy, IsotropyKind<f64>), String> {
    let r = isotropy(form, eps).map_err(|e| e.to_string())?;
    let tag = match &r.kind {
        IsotropyKind::Finite(g) => ExpectedIsotropy::Finite(g.tag()),
        IsotropyKind::ContinuousCStar { .. } => ExpectedIsotropy::ContinuousCStar,
    };
    Ok((tag, r.kind))
}

fn claim(expected: Option<bool>, got: bool) -> (String, bool) {
    match expected {
        Some(e) => (format!("{e}/{got}"), e == got),
        None => ("-".into(), true),
    }
}

fn paper_row(pf: &PaperForm, eps: f64) -> Row {
    let t0 = Instant::now();
    let mut row = Row {
        name: pf.name.into(),
        expected: pf.isotropy.to_string(),
        computed: "?".into(),
        isochronous: "-".into(),
        mirror: "-".into(),
        status: Status::Fail,
        note: String::new(),
        millis: 0.0,
    };
    let form = match pf.form::<f64>(eps) {
        Ok(f) => f,
        Err(e) => {
            row.note = format!("parse: {e}");
            return row;
        }
    };
    let (tag, kind) = match computed_isotropy(&form, eps) {
        Ok(x) => x,
        Err(e) => {
            row.note = e;
            return row;
        }
    };
    row.computed = tag.to_string();
    let iso = isochrony_report(&form, IsochronyOptions::default());
    let (iso_text, iso_ok) = claim(pf.isochronous, iso.is_isochronous);
    row.isochronous = iso_text;
    let mirror_ok = match (&kind, pf.mirror) {
        (IsotropyKind::Finite(g), Some(expected)) => {
            let cert = mirror_search(&form, g, eps);
            let (text, ok) = claim(Some(expected), cert.is_some());
            row.mirror = text;
            // A certificate must come with collinear residues.
            ok && (cert.is_none() || iso.rotatable)
        }
        (_, Some(_)) => false,
        (_, None) => true,
    };
    let matches = tag == pf.isotropy;
    row.status = match (&pf.erratum, matches) {
        (None, true) => Status::Pass,
        (None, false) => Status::Fail,
        (Some(_), true) => {
            row.note = "erratum listed but printed claim reproduced".into();
            Status::Fail
        }
        (Some(err), false) => {
            let witnessed = err
                .witness_map::<f64>()
                .and_then(|w| form.pushforward(&w, eps))
                .map(|pushed| pushed.form_equal(&form, eps))
                .unwrap_or(false);
            if witnessed && tag == err.isotropy {
                row.note = err.note.into();
                Status::Erratum
            } else {
                row.note = "erratum witness does not hold".into();
                Status::Fail
            }
        }
    };
    if !(iso_ok && mirror_ok) {
        row.status = Status::Fail;
    }
    row.millis = t0.elapsed().as_secs_f64() * 1e3;
    row
}

fn family_row(name: String, form: isoform::Result<RationalOneForm>, expected: ExpectedIsotropy, eps: f64) -> Row {
    let t0 = Instant::now();
    let computed = form.map_err(|e| e.to_string()).and_then(|f| computed_isotropy(&f, eps));
    let (computed, status, note) = match computed {
        Ok((tag, _)) => (tag.to_string(), if tag == expected { Status::Pass } else { Status::Fail }, String::new()),
        Err(e) => ("?".into(), Status::Fail, e),
    };
    Row {
        name,
        expected: expected.to_string(),
        computed,
        isochronous: "-".into(),
        mirror: "-".into(),
        status,
        note,
        millis: t0.elapsed().as_secs_f64() * 1e3,
    }
}

/// The eleven bundled forms, the dihedral and cyclic families for `n = 2..7`
/// and the two-pole form `i dz/z`.
pub fn verify_paper(eps: f64) -> Report {
    let mut rows: Vec<Row> = PAPER_FORMS.iter().map(|pf| paper_row(pf, eps)).collect();
    for n in 2..=7 {
        rows.push(family_row(
            format!("diedricoN n={n}"),
            dihedral_family(n, Complex::new(0.0, -1.0), eps),
            ExpectedIsotropy::Finite(GroupTypeTag::Dihedral(n)),
            eps,
        ));
    }
    for n in 2..=7 {
        rows.push(family_row(
            format!("EjemploCiclico n={n}"),
            cyclic_family(n, eps),
            ExpectedIsotropy::Finite(GroupTypeTag::Cyclic(n)),
            eps,
        ));
    }
    rows.push(family_row("i dz/z".into(), two_pole(Complex::new(0.0, 1.0), eps), ExpectedIsotropy::ContinuousCStar, eps));
    Report { rows }
}
