use serde::Serialize;

use super::commands::{analyze, segre, segre_chain_report, AnalyzeReport, SegreReport};
use super::{CliError, Result};
use crate::manifold::{parse_model, ManifoldModel};
use crate::series::GaussRational;

/// Expected invariant of a catalog model.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Annotation {
    /// `ν`; `None` for infinite type.
    Nu(Option<u32>),
    Mu(&'static [u32]),
    LeviNondegenerate(bool),
    /// Degeneracy `l`; `None` means not finitely nondegenerate, with the
    /// span known to stabilize short of full.
    Nondegeneracy(Option<u32>),
    /// `l`-nondegeneracy in dimension 1; `None` for degenerate.
    Dimension1(Option<u32>),
    Bounds { r: u64, k: u64 },
    /// Vanishing order of `δ`, attaining its bound.
    SegreM(u32),
    /// Generic rank of the chain map of length `2(d + 1)`.
    SegreRank(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub kappa: u32,
    /// Base point `(re_num, re_den, im_num, im_den)` per coordinate; empty
    /// for the origin.
    pub point: &'static [(i64, i64, i64, i64)],
    pub annotations: &'static [Annotation],
}

impl CatalogEntry {
    pub fn model(&self, kappa: Option<u32>) -> Result<ManifoldModel> {
        let m = parse_model(self.text, kappa.unwrap_or(self.kappa)).map_err(CliError::from_model)?;
        if self.point.is_empty() {
            return Ok(m);
        }
        let p: Vec<GaussRational> = self.point.iter().map(|&(a, b, c, d)| GaussRational::from_parts(a, b, c, d)).collect();
        m.translate(&p).map_err(CliError::from_model)
    }
}

use Annotation::*;

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "quadric",
        text: "model \"quadric\" { ambient 2; codim 1; im w = z*conj(z); }",
        kappa: 12,
        point: &[],
        annotations: &[
            Nu(Some(2)),
            Mu(&[2]),
            LeviNondegenerate(true),
            Nondegeneracy(Some(1)),
            Bounds { r: 4, k: 19 },
            SegreRank(2),
            SegreM(2),
        ],
    },
    CatalogEntry {
        name: "quartic",
        text: "model \"quartic\" { ambient 2; codim 1; im w = (z*conj(z))^2; }",
        kappa: 10,
        point: &[],
        annotations: &[Nu(Some(4)), Mu(&[4]), LeviNondegenerate(false), Nondegeneracy(None), SegreRank(2)],
    },
    CatalogEntry {
        name: "quartic-off-center",
        text: "model \"quartic\" { ambient 2; codim 1; im w = (z*conj(z))^2; }",
        kappa: 10,
        point: &[(1, 1, 0, 1), (0, 1, 1, 1)],
        annotations: &[
            Nu(Some(2)),
            Mu(&[2]),
            LeviNondegenerate(true),
            Nondegeneracy(Some(1)),
            Bounds { r: 4, k: 19 },
            SegreM(2),
        ],
    },
    CatalogEntry {
        name: "cubic-perturbed-sphere",
        text: "model \"cubic\" { ambient 3; codim 1; \
               im w = z1*conj(z1) + z2*conj(z2) + im(z1^2*conj(z1) + (z1 + z2)^3*(conj(z1) + conj(z2))); }",
        kappa: 7,
        point: &[],
        annotations: &[Nu(Some(2)), LeviNondegenerate(true), Nondegeneracy(Some(1)), Dimension1(Some(3))],
    },
    CatalogEntry {
        name: "codim2",
        text: "model \"codim2\" { ambient 3; codim 2; im w1 = z*conj(z); im w2 = z*conj(z)*(z + conj(z)); }",
        kappa: 10,
        point: &[],
        annotations: &[Nu(Some(3)), Mu(&[2, 3]), Nondegeneracy(Some(1)), Bounds { r: 6, k: 93 }, SegreRank(3), SegreM(6)],
    },
    CatalogEntry {
        name: "sphere5",
        text: "model \"sphere5\" { ambient 3; codim 1; im w = z1*conj(z1) + z2*conj(z2); }",
        kappa: 8,
        point: &[],
        annotations: &[
            Nu(Some(2)),
            Mu(&[2]),
            LeviNondegenerate(true),
            Nondegeneracy(Some(1)),
            Dimension1(None),
            Bounds { r: 4, k: 19 },
            SegreRank(3),
            SegreM(2),
        ],
    },
    CatalogEntry {
        name: "light-cone-tube",
        text: "model \"tube\" { ambient 3; codim 1; rho 1: (re(w) + 1)^2 - re(z1)^2 - (re(z2) + 1)^2; }",
        kappa: 8,
        point: &[],
        annotations: &[Nu(Some(2)), Mu(&[2]), LeviNondegenerate(false), Nondegeneracy(Some(2)), Bounds { r: 8, k: 35 }, SegreRank(3), SegreM(2)],
    },
    CatalogEntry {
        name: "hyperplane",
        text: "model \"hyperplane\" { ambient 2; codim 1; im w = 0; }",
        kappa: 8,
        point: &[],
        annotations: &[Nu(None), LeviNondegenerate(false), Nondegeneracy(None), SegreRank(1)],
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn find_entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnotationCheck {
    pub annotation: Annotation,
    pub found: String,
    pub ok: bool,
}

/// Run the pipeline on an entry and compare with every annotation.
pub fn check_entry(entry: &CatalogEntry, l_max: u32, seed: u64) -> Result<Vec<AnnotationCheck>> {
    let model = entry.model(None)?;
    let report: AnalyzeReport = analyze(&model, l_max)?;
    let seg: Option<SegreReport> = if entry.annotations.iter().any(|a| matches!(a, SegreM(_))) {
        Some(segre(&model, None, seed)?)
    } else if entry.annotations.iter().any(|a| matches!(a, SegreRank(_))) {
        Some(segre_chain_report(&model, None, seed)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for a in entry.annotations {
        let (found, ok) = match a {
            Nu(nu) => (format!("{:?}", report.nu), report.nu == *nu && report.finite_type == nu.is_some()),
            Mu(mu) => (format!("{:?}", report.mu), report.mu == *mu),
            LeviNondegenerate(b) => (report.levi.nondegenerate.to_string(), report.levi.nondegenerate == *b),
            Nondegeneracy(l) => {
                let absolute = report.l.is_some() || report.l_verdict.contains("absolute");
                (report.l_verdict.clone(), report.l == *l && absolute)
            }
            Dimension1(l) => match &report.dim1 {
                Some(d) => (format!("{:?}", d.l), d.nondegenerate == l.is_some() && d.l == *l),
                None => ("not computed".into(), false),
            },
            Bounds { r, k } => (format!("r {:?}, k {:?}", report.r, report.k), report.r == Some(*r) && report.k == Some(*k)),
            SegreM(m) => {
                let s = seg.as_ref().expect("segre report");
                match &s.delta {
                    Some(d) => (format!("m {} ({})", d.m, s.verdict), d.m == *m && d.attained && s.verdict == "PASS"),
                    None => (s.verdict.clone(), false),
                }
            }
            SegreRank(r) => {
                let s = seg.as_ref().expect("segre report");
                let top = s.rank_table.last().map(|row| row.rank);
                (format!("{top:?}"), top == Some(*r) && s.palindrome_ok)
            }
        };
        out.push(AnnotationCheck { annotation: a.clone(), found, ok });
    }
    Ok(out)
}
