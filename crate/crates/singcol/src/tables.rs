//! The numerical tables, cell by cell, with optional lab verification.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{recognize, TypeName};
use crate::collision::{
    ade_arrows, collide_ade, cuspfree_omp_checked, kind_of, omp_omp_checked, sqh_omp_checked,
    CollisionData, CollisionResult, CuspVariant, FormulaCheck, Kind,
};
use crate::error::{Error, Result};
use crate::flatlimit::{local_diagram, verify_collision, Setup, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    OmpOmp,
    CuspOmp,
    CuspfreeOmp,
    Ade,
    Dk,
}

impl FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "omp-omp" => Which::OmpOmp,
            "cusp-omp" => Which::CuspOmp,
            "cuspfree-omp" => Which::CuspfreeOmp,
            "ade" => Which::Ade,
            "dk" => Which::Dk,
            _ => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!(
                        "unknown table {s:?}; expected omp-omp, cusp-omp, cuspfree-omp, ade or dk"
                    ),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ranges {
    pub pmax: u32,
    pub qmax: Option<u32>,
    pub rmax: Option<u32>,
}

impl Ranges {
    pub fn new(pmax: u32, qmax: Option<u32>, rmax: Option<u32>) -> Result<Self> {
        if pmax < 1 || qmax == Some(0) || rmax == Some(0) {
            return Err(Error::Domain("table ranges must be ≥ 1".into()));
        }
        Ok(Ranges { pmax, qmax, rmax })
    }

    fn q_upto(&self, cap: u32) -> u32 {
        self.qmax.map_or(cap, |q| q.min(cap))
    }
}

/// One table entry: the collision, the printed formulas if any, and
/// whether the lab can run on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub label: String,
    pub x: TypeName,
    pub y: TypeName,
    pub data: CollisionData,
    pub result: CollisionResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<FormulaCheck>,
    pub verifiable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub cell: Cell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn lab_ok(x: &TypeName, y: &TypeName) -> bool {
    local_diagram(x).is_ok() && local_diagram(y).is_ok()
}

struct Builder {
    cells: Vec<Cell>,
}

impl Builder {
    fn push(
        &mut self,
        label: String,
        x: TypeName,
        y: TypeName,
        data: CollisionData,
        result: CollisionResult,
        formula: Option<FormulaCheck>,
    ) {
        let verifiable = lab_ok(&x, &y);
        let index = self.cells.len();
        self.cells.push(Cell {
            index,
            label,
            x,
            y,
            data,
            result,
            formula,
            verifiable,
        });
    }
}

fn ade_pairs(pmax: u32, qmax: u32) -> Vec<(TypeName, TypeName)> {
    let mut out = Vec::new();
    for k in 1..=pmax {
        for l in 1..=k.min(qmax) {
            out.push((TypeName::a(k), TypeName::a(l)));
        }
    }
    for k in 4..=pmax + 3 {
        for l in 1..=qmax {
            out.push((TypeName::d(k), TypeName::a(l)));
        }
    }
    out.push((TypeName::e(6), TypeName::a(1)));
    out
}

/// The cells of a table in a fixed order. Cells outside every rule guard
/// are left out.
pub fn cells(which: Which, ranges: &Ranges) -> Result<Vec<Cell>> {
    let mut b = Builder { cells: Vec::new() };
    let both = [CollisionData::default(), CollisionData::l_eq_lx()];
    match which {
        Which::OmpOmp => {
            for p in 1..=ranges.pmax {
                for q in 1..=ranges.q_upto(p) {
                    let (res, chk) = omp_omp_checked(p, q)?;
                    let label = format!("p={p},q={q}");
                    b.push(
                        label,
                        TypeName::omp(p + 1),
                        TypeName::omp(q + 1),
                        CollisionData::default(),
                        res,
                        chk,
                    );
                }
            }
        }
        Which::CuspOmp => {
            for p in 2..=ranges.pmax {
                for q in 1..=ranges.q_upto(p - 1) {
                    for data in both {
                        let (res, chk) = sqh_omp_checked(CuspVariant::Cusp, p, q, &data)?;
                        let label = format!(
                            "p={p},q={q},{}",
                            if data.l_eq_lx { "l=lx" } else { "l!=lx" }
                        );
                        b.push(
                            label,
                            TypeName::sqh(p, p + 1),
                            TypeName::omp(q + 1),
                            data,
                            res,
                            chk,
                        );
                    }
                }
            }
        }
        Which::CuspfreeOmp => {
            let rmax = ranges.rmax.unwrap_or(3);
            for p in 2..=ranges.pmax {
                for r in 1..=rmax {
                    for q in 1..=ranges.q_upto(p + r) {
                        for data in both {
                            let (res, chk) = match cuspfree_omp_checked(p, r, q, &data) {
                                Ok(v) => v,
                                Err(Error::Unsupported(_)) => continue,
                                Err(e) => return Err(e),
                            };
                            let label = format!(
                                "p={p},r={r},q={q},{}",
                                if data.l_eq_lx { "l=lx" } else { "l!=lx" }
                            );
                            b.push(
                                label,
                                TypeName::cuspfree(p, r),
                                TypeName::omp(q + 1),
                                data,
                                res,
                                chk,
                            );
                        }
                    }
                }
            }
        }
        Which::Ade | Which::Dk => {
            let pairs = if which == Which::Dk {
                (4..=6).map(|m| (TypeName::d(4), TypeName::d(m))).collect()
            } else {
                ade_pairs(ranges.pmax.min(6), ranges.qmax.unwrap_or(3))
            };
            for (x, y) in pairs {
                if ade_arrows(&x, &y).is_err() {
                    continue;
                }
                for res in collide_ade(&x, &y)? {
                    let conditional = res.flags.iter().any(|f| f == "when l=lx");
                    // the A_{k+l+1} arrow needs every tangent on the collision line
                    let data = if conditional {
                        CollisionData::new(true, true, true)?
                    } else {
                        CollisionData::default()
                    };
                    let label = format!(
                        "{x}+{y}->{}",
                        res.names.first().map(|n| n.to_string()).unwrap_or_default()
                    );
                    let index = b.cells.len();
                    // a tangency condition or two ordinary points pins down a single lab outcome
                    let omps = matches!((kind_of(&x), kind_of(&y)), (Kind::Omp(_), Kind::Omp(_)));
                    let verifiable =
                        (conditional || (omps && res.generic == Some(true))) && lab_ok(&x, &y);
                    b.cells.push(Cell {
                        index,
                        label,
                        x: x.clone(),
                        y: y.clone(),
                        data,
                        result: res,
                        formula: None,
                        verifiable,
                    });
                }
            }
        }
    }
    Ok(b.cells)
}

/// Closed-form cells must match the rule diagram exactly. Picture cells
/// name a type only, so there the limit needs to have that type.
pub fn verify_cell(cell: &Cell, seed: u64) -> Result<VerifyReport> {
    let setup = Setup::new(cell.x.clone(), cell.y.clone(), cell.data);
    let mut rep = verify_collision(&cell.result, &setup, None, seed)?;
    let picture = cell.result.rule_id.starts_with("ade:") || cell.result.rule_id.starts_with("dk:");
    if picture {
        let got = recognize(&rep.staircase);
        if let Some(c) = rep
            .checks
            .iter_mut()
            .find(|c| c.id == "staircase" && !c.pass)
        {
            if let Some(n) = cell.result.names.iter().find(|n| got.contains(n)) {
                c.pass = true;
                c.detail = format!("limit {} has type {n}", rep.staircase);
            }
        }
    }
    Ok(rep)
}

/// Builds the rows, running the lab on verifiable cells when `verify` is set.
/// Rows come back in cell order whatever the pool does.
pub fn rows(cells: Vec<Cell>, verify: Option<u64>) -> Vec<Row> {
    use rayon::prelude::*;
    cells
        .into_par_iter()
        .map(|cell| match verify {
            Some(seed) if cell.verifiable => match verify_cell(&cell, seed) {
                Ok(rep) => Row {
                    verified: Some(rep.pass()),
                    verify: Some(rep),
                    error: None,
                    cell,
                },
                Err(e) => Row {
                    verified: Some(false),
                    verify: None,
                    error: Some(e.to_string()),
                    cell,
                },
            },
            _ => Row {
                cell,
                verified: None,
                verify: None,
                error: None,
            },
        })
        .collect()
}

/// True iff every lab run passed.
pub fn all_verified(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.verified != Some(false))
}

fn half(twice: i64) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

/// A plain-text table: type, μ, δ, κ, the printed formulas and, after
/// verification, the lab verdict.
pub fn render(rows: &[Row]) -> String {
    let verify = rows.iter().any(|r| r.verified.is_some());
    let mut lines: Vec<Vec<String>> = Vec::new();
    let mut head: Vec<String> = [
        "cell",
        "case",
        "type",
        "μ",
        "δ",
        "κ",
        "printed (μ,δ,κ)",
        "flags",
    ]
    .map(String::from)
    .to_vec();
    if verify {
        head.push("verified".into());
    }
    lines.push(head);
    for r in rows {
        let c = &r.cell;
        let inv = &c.result.invariants;
        let names: Vec<String> = c.result.names.iter().map(|n| n.to_string()).collect();
        let ty = if names.is_empty() {
            c.result.diagram.to_string()
        } else {
            names.join("/")
        };
        let printed = c.formula.as_ref().map_or("-".into(), |f| {
            format!("({},{},{})", f.expected.0, half(f.expected.1), f.expected.2)
        });
        let mut flags: Vec<String> = c
            .result
            .flags
            .iter()
            .filter(|f| !f.contains(" vs diagram "))
            .cloned()
            .collect();
        if c.result.generic == Some(false) {
            flags.push("non-generic".into());
        }
        if c.formula.as_ref().is_some_and(|f| !f.matches()) {
            flags.push("formula mismatch".into());
        }
        let mut line = vec![
            c.index.to_string(),
            c.label.clone(),
            ty,
            inv.mu().to_string(),
            inv.delta().to_string(),
            inv.kappa().to_string(),
            printed,
            if flags.is_empty() {
                "-".into()
            } else {
                flags.join("; ")
            },
        ];
        if verify {
            line.push(match r.verified {
                Some(true) => "yes".into(),
                Some(false) => "NO".into(),
                None => "n/a".into(),
            });
        }
        lines.push(line);
    }
    let widths: Vec<usize> = (0..lines[0].len())
        .map(|i| {
            lines
                .iter()
                .map(|l| l[i].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (k, l) in lines.iter().enumerate() {
        let cols: Vec<String> = l
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect();
        let _ = writeln!(out, "{}", cols.join("  ").trim_end());
        if k == 0 {
            let _ = writeln!(
                out,
                "{}",
                widths
                    .iter()
                    .map(|w| "-".repeat(*w))
                    .collect::<Vec<_>>()
                    .join("  ")
            );
        }
    }
    out
}
