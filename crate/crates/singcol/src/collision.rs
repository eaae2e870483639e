//! Closed-form collision rules, bound predicates and branchwise composition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Polynomial, Univariate};
use crate::catalog::{normal_form, recognize, Series, TypeName};
use crate::error::{Error, Result};
use crate::invariants::{free_branch_count, milnor_local, multiplicity, InvariantRecord};
use crate::newton::{nnd_check, NewtonDiagram};

/// Which of the lines l (collision direction), l_x, l_y coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CollisionData {
    pub l_eq_lx: bool,
    pub l_eq_ly: bool,
    pub lx_eq_ly: bool,
    pub trajectory_order: u32,
}

impl Default for CollisionData {
    fn default() -> Self {
        CollisionData {
            l_eq_lx: false,
            l_eq_ly: false,
            lx_eq_ly: false,
            trajectory_order: 1,
        }
    }
}

impl CollisionData {
    pub fn new(l_eq_lx: bool, l_eq_ly: bool, lx_eq_ly: bool) -> Result<Self> {
        let d = CollisionData {
            l_eq_lx,
            l_eq_ly,
            lx_eq_ly,
            trajectory_order: 1,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn l_eq_lx() -> Self {
        CollisionData {
            l_eq_lx: true,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l_eq_lx && self.l_eq_ly && !self.lx_eq_ly {
            return Err(Error::Domain("l = l_x and l = l_y force l_x = l_y".into()));
        }
        if self.trajectory_order == 0 {
            return Err(Error::Domain("trajectory order must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Comma list from {l=lx, l!=lx, l=ly, lx=ly}.
    pub fn parse(s: &str) -> Result<Self> {
        let mut d = CollisionData::default();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok {
                "l=lx" => d.l_eq_lx = true,
                "l!=lx" => d.l_eq_lx = false,
                "l=ly" => d.l_eq_ly = true,
                "lx=ly" => d.lx_eq_ly = true,
                _ => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("unknown collision flag {tok:?}"),
                    });
                }
            }
        }
        if d.l_eq_lx && d.l_eq_ly {
            d.lx_eq_ly = true;
        }
        d.validate()?;
        Ok(d)
    }
}

impl fmt::Display for CollisionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![if self.l_eq_lx { "l=lx" } else { "l!=lx" }];
        if self.l_eq_ly {
            parts.push("l=ly");
        }
        if self.lx_eq_ly {
            parts.push("lx=ly");
        }
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundItem {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub items: Vec<BoundItem>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn item(&self, id: &str) -> Option<&BoundItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

/// Invariants of one input type with its number of free branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub invariants: InvariantRecord,
    pub free: u32,
}

impl Profile {
    pub fn of_type(name: &TypeName) -> Result<Self> {
        let nf = normal_form(name)?;
        Ok(Profile {
            invariants: InvariantRecord::of_diagram(&nf.diagram)?,
            free: free_branch_count(&nf.poly)?,
        })
    }
}

/// (a) multiplicity bound, (b) Lê–Ramanujam, (c) κ semicontinuity.
pub fn bound_check(x: &Profile, y: &Profile, f: &InvariantRecord) -> BoundReport {
    let (mx, my, mf) = (x.invariants.mult(), y.invariants.mult(), f.mult());
    let (rx, ry) = (x.free, y.free);
    let (ux, uy, uf) = (
        x.invariants.mu() as i64,
        y.invariants.mu() as i64,
        f.mu() as i64,
    );
    let a = if rx + ry >= my {
        BoundItem {
            id: "multiplicity".into(),
            pass: mf == mx,
            detail: format!(
                "r_x + r_y = {} ≥ m_y = {my}: need mult {mf} = m_x = {mx}",
                rx + ry
            ),
        }
    } else {
        let cap = mx + my - rx - ry;
        BoundItem {
            id: "multiplicity".into(),
            pass: mf <= cap,
            detail: format!(
                "r_x + r_y = {} < m_y = {my}: need mult {mf} ≤ {cap}",
                rx + ry
            ),
        }
    };
    let b = BoundItem {
        id: "le-ramanujam".into(),
        pass: uf > ux + uy,
        detail: format!("need μ {uf} ≥ {} + {} + 1", ux, uy),
    };
    let need = ux + uy + (mx as i64 + my as i64 - mf as i64) - 1;
    let c = BoundItem {
        id: "kappa".into(),
        pass: uf >= need,
        detail: format!("need μ {uf} ≥ {need}"),
    };
    BoundReport {
        items: vec![a, b, c],
    }
}

/// The multiplicity statement read over all collisions of one pair: some
/// result attains m_x (resp. stays within m_x + m_y − r_x − r_y).
pub fn multiplicity_attained(x: &Profile, y: &Profile, results: &[InvariantRecord]) -> BoundItem {
    let (mx, my) = (x.invariants.mult(), y.invariants.mult());
    let low = results.iter().map(InvariantRecord::mult).min();
    let (pass, want) = if x.free + y.free >= my {
        (low == Some(mx), format!("= {mx}"))
    } else {
        let cap = mx + my - x.free - y.free;
        (low.is_some_and(|m| m <= cap), format!("≤ {cap}"))
    };
    BoundItem {
        id: "multiplicity-attained".into(),
        pass,
        detail: format!("least result multiplicity {low:?}, need {want}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionResult {
    pub diagram: NewtonDiagram,
    pub names: Vec<TypeName>,
    pub invariants: InvariantRecord,
    pub rule_id: String,
    pub primitive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundReport>,
}

impl CollisionResult {
    fn of_diagram(d: NewtonDiagram, rule_id: String, primitive: bool) -> Result<Self> {
        let invariants = InvariantRecord::of_diagram(&d)?;
        Ok(CollisionResult {
            names: recognize(&d),
            diagram: d,
            invariants,
            rule_id,
            primitive,
            generic: None,
            flags: Vec::new(),
            bounds: None,
        })
    }

    fn with_bounds(mut self, x: &Profile, y: &Profile) -> Self {
        self.bounds = Some(bound_check(x, y, &self.invariants));
        self
    }
}

/// x^a + y^b; a unit when either exponent is zero.
fn binom(a: u32, b: u32) -> Polynomial {
    if a == 0 || b == 0 {
        Polynomial::one()
    } else {
        Polynomial::xy(a, 0) + Polynomial::xy(0, b)
    }
}

fn product(fs: &[(u32, u32)]) -> Polynomial {
    fs.iter()
        .fold(Polynomial::one(), |acc, &(a, b)| &acc * &binom(a, b))
}

fn trinomial(t: [(u32, u32); 3]) -> Polynomial {
    t.iter().fold(Polynomial::zero(), |acc, &(a, b)| {
        acc + Polynomial::xy(a, b)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    OmpOmp,
    /// x^p + y^(p+1) with an ordinary (q+1)-fold point.
    Cusp,
    /// x^(p+1) + y^(p+2) with an ordinary (q+1)-fold point.
    CuspShifted,
    Cuspfree,
}

/// Rule parameters: p, q as in the tables, r free lines, and the tangency flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub l_eq_lx: bool,
}

/// (μ, 2δ, κ) as printed.
pub type Formulas = (i64, i64, i64);

pub struct Rule {
    pub id: &'static str,
    pub family: Family,
    pub guard: fn(&Params) -> bool,
    pub normal_form: fn(&Params) -> Polynomial,
    pub formulas: Option<fn(i64, i64, i64) -> Formulas>,
    pub primitive: bool,
}

pub static RULES: &[Rule] = &[
    Rule {
        id: "omp+omp",
        family: Family::OmpOmp,
        guard: |c| c.q >= 1 && c.q <= c.p,
        normal_form: |c| product(&[(c.p - c.q, c.p - c.q), (c.q + 1, 2 * c.q + 2)]),
        formulas: Some(|p, q, _| {
            (
                p * p + q * q + q,
                p * (p + 1) + q * (q + 1),
                p * p + p + q * q + q,
            )
        }),
        primitive: true,
    },
    Rule {
        id: "cusp+omp:l=lx,p>=q+2",
        family: Family::Cusp,
        guard: |c| c.l_eq_lx && c.q >= 1 && c.p >= c.q + 2,
        normal_form: |c| product(&[(c.p - 1 - c.q, c.p - c.q), (c.q + 1, 2 * c.q + 2)]),
        formulas: Some(|p, q, _| {
            (
                p * p - p + (q + 1) * (q + 1),
                p * (p - 1) + (q + 1) * (q + 2),
                p * p + q * (q + 2),
            )
        }),
        primitive: true,
    },
    Rule {
        id: "cusp+omp:l=lx,p=q+1",
        family: Family::Cusp,
        guard: |c| c.l_eq_lx && c.q >= 1 && c.p == c.q + 1,
        normal_form: |c| binom(c.p, 2 * c.p + 1),
        formulas: Some(|p, _, _| (2 * p * (p - 1), 2 * p * (p - 1), 2 * p * p - p - 1)),
        primitive: true,
    },
    Rule {
        id: "cusp+omp:l!=lx",
        family: Family::Cusp,
        guard: |c| !c.l_eq_lx && c.q >= 1 && c.q < c.p,
        normal_form: |c| product(&[(c.p - c.q, c.p - c.q), (c.q + 1, 2 * c.q + 1)]),
        formulas: Some(|p, q, _| (p * p + q * q, p * (p + 1) + q * (q - 1), p * p + q * q + q)),
        primitive: true,
    },
    Rule {
        id: "cusp1+omp:l!=lx",
        family: Family::CuspShifted,
        guard: |c| !c.l_eq_lx && c.q >= 1 && c.q <= c.p,
        normal_form: |c| trinomial([(c.p + 2, 0), (c.q + 1, c.p + 1 - c.q), (0, c.p + c.q + 2)]),
        formulas: None,
        primitive: true,
    },
    Rule {
        id: "cusp1+omp:l=lx",
        family: Family::CuspShifted,
        guard: |c| c.l_eq_lx && c.q >= 1 && c.q <= c.p,
        normal_form: |c| trinomial([(c.p + 1, 0), (c.q + 1, c.p + 1 - c.q), (0, c.p + c.q + 3)]),
        formulas: None,
        primitive: true,
    },
    Rule {
        id: "cuspfree+omp:l=lx,p>=q+2",
        family: Family::Cuspfree,
        guard: |c| c.l_eq_lx && c.q >= 1 && c.p >= c.q + 2,
        normal_form: |c| {
            product(&[
                (c.r, c.r),
                (c.p - c.q - 1, c.p - c.q),
                (c.q + 1, 2 * c.q + 2),
            ])
        },
        formulas: Some(|p, q, r| {
            let s = (p + r) * (p + r - 1);
            (
                (p + r - 1) * (p + r - 1) + p - 1 + (q + 1) * (q + 1),
                s + (q + 1) * (q + 2),
                s + p - 1 + (q + 1) * (q + 1),
            )
        }),
        primitive: true,
    },
    Rule {
        id: "cuspfree+omp:l=lx,p<=q+1",
        family: Family::Cuspfree,
        guard: |c| c.l_eq_lx && c.q >= 1 && c.p <= c.q + 1 && c.q < c.p + c.r,
        normal_form: |c| {
            let k = c.q + 1 - c.p;
            product(&[
                (c.r + c.p - c.q - 1, c.r + c.p - c.q - 1),
                (k, 2 * k),
                (c.p, 2 * c.p + 1),
            ])
        },
        formulas: Some(|p, q, r| {
            let s = (p + r) * (p + r - 1);
            (
                (p + r - 1) * (p + r - 1) + p - 1 + q * q + q,
                s + q * (q + 1),
                s + p - 1 + q * (q + 1),
            )
        }),
        primitive: true,
    },
    Rule {
        id: "cuspfree+omp:l!=lx,q>=r",
        family: Family::Cuspfree,
        guard: |c| !c.l_eq_lx && c.q >= 1 && c.q >= c.r && c.q <= c.p + c.r,
        normal_form: |c| {
            product(&[
                (c.p + c.r - c.q, c.p + c.r - c.q),
                (c.q - c.r + 1, 2 * (c.q - c.r) + 1),
                (c.r, 2 * c.r),
            ])
        },
        formulas: Some(|p, q, r| {
            (
                (p + r) * (p + r) + q * q - r,
                (p + r) * (p + r + 1) + q * (q - 1),
                (p + r) * (p + r) + p + q * q,
            )
        }),
        primitive: true,
    },
    Rule {
        id: "cuspfree+omp:l!=lx,q<r",
        family: Family::Cuspfree,
        guard: |c| !c.l_eq_lx && c.q >= 1 && c.q < c.r,
        normal_form: |c| {
            product(&[
                (c.r - c.q - 1, c.r - c.q - 1),
                (c.p, c.p + 1),
                (c.q + 1, 2 * c.q + 2),
            ])
        },
        formulas: Some(|p, q, r| {
            (
                (p + r) * (p + r) - p + q * (q + 1),
                (p + r) * (p + r - 1) + q * (q + 1) + 2 * r,
                (p + r) * (p + r) + r + q * (q + 1),
            )
        }),
        primitive: true,
    },
];

pub fn rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

/// Table formulas against the invariants of the rule diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub rule_id: String,
    pub expected: Formulas,
    pub actual: Formulas,
}

impl FormulaCheck {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }

    pub fn mismatches(&self) -> Vec<String> {
        let (e, a) = (self.expected, self.actual);
        let mut out = Vec::new();
        if e.0 != a.0 {
            out.push(format!(
                "{}: table μ {} vs diagram μ {}",
                self.rule_id, e.0, a.0
            ));
        }
        if e.1 != a.1 {
            out.push(format!(
                "{}: table δ {}/2 vs diagram δ {}/2",
                self.rule_id, e.1, a.1
            ));
        }
        if e.2 != a.2 {
            out.push(format!(
                "{}: table κ {} vs diagram κ {}",
                self.rule_id, e.2, a.2
            ));
        }
        out
    }
}

fn apply(rule: &Rule, c: &Params) -> Result<(CollisionResult, Option<FormulaCheck>)> {
    let f = (rule.normal_form)(c);
    let d = NewtonDiagram::of_polynomial(&f)?;
    let mut res = CollisionResult::of_diagram(d, rule.id.to_string(), rule.primitive)?;
    let check = rule.formulas.map(|fm| {
        let inv = &res.invariants;
        FormulaCheck {
            rule_id: rule.id.to_string(),
            expected: fm(c.p as i64, c.q as i64, c.r as i64),
            actual: (inv.mu() as i64, 2 * inv.delta() as i64, inv.kappa() as i64),
        }
    });
    if let Some(ch) = &check {
        res.flags.extend(ch.mismatches());
    }
    Ok((res, check))
}

fn dispatch(family: Family, c: &Params) -> Result<(CollisionResult, Option<FormulaCheck>)> {
    let hits: Vec<&Rule> = RULES
        .iter()
        .filter(|r| r.family == family && (r.guard)(c))
        .collect();
    match hits.as_slice() {
        [r] => apply(r, c),
        [] => {
            let near: Vec<&str> = RULES
                .iter()
                .filter(|r| r.family == family)
                .map(|r| r.id)
                .collect();
            Err(Error::Unsupported(format!(
                "no rule for {family:?} with p={}, q={}, r={}, l=l_x {}; rules of this family: {}",
                c.p,
                c.q,
                c.r,
                c.l_eq_lx,
                near.join(", ")
            )))
        }
        _ => Err(Error::Internal(format!(
            "overlapping rule guards for {c:?}"
        ))),
    }
}

/// Names printed next to the OMP+OMP formula.
const OMP_OMP_LISTED: &[(u32, u32, &str)] = &[
    (1, 1, "A3"),
    (2, 1, "D6"),
    (3, 1, "X1_2"),
    (2, 2, "J2_0"),
    (3, 2, "Z13"),
];

pub fn collide_omp_omp(p: u32, q: u32) -> Result<CollisionResult> {
    omp_omp_checked(p, q).map(|(r, _)| r)
}

pub fn omp_omp_checked(p: u32, q: u32) -> Result<(CollisionResult, Option<FormulaCheck>)> {
    if q > p {
        return Err(Error::OrderConvention(format!(
            "need mult S_x ≥ mult S_y, got p = {p} < q = {q}"
        )));
    }
    if q == 0 {
        return Err(Error::Domain("q must be ≥ 1".into()));
    }
    let c = Params {
        p,
        q,
        r: 0,
        l_eq_lx: false,
    };
    let (mut res, check) = dispatch(Family::OmpOmp, &c)?;
    for &(lp, lq, name) in OMP_OMP_LISTED {
        let listed: TypeName = name.parse()?;
        if (lp, lq) == (p, q) && !res.names.contains(&listed) {
            res.flags.push(format!(
                "suspect: listed as {name} (μ {}), diagram gives μ {}",
                listed.mu().unwrap_or(0),
                res.invariants.mu()
            ));
        }
    }
    let x = Profile::of_type(&TypeName::omp(p + 1))?;
    let y = Profile::of_type(&TypeName::omp(q + 1))?;
    Ok((res.with_bounds(&x, &y), check))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CuspVariant {
    /// x^p + y^(p+1)
    Cusp,
    /// x^(p+1) + y^(p+2)
    Shifted,
}

pub fn collide_sqh_omp(
    variant: CuspVariant,
    p: u32,
    q: u32,
    data: &CollisionData,
) -> Result<CollisionResult> {
    sqh_omp_checked(variant, p, q, data).map(|(r, _)| r)
}

pub fn sqh_omp_checked(
    variant: CuspVariant,
    p: u32,
    q: u32,
    data: &CollisionData,
) -> Result<(CollisionResult, Option<FormulaCheck>)> {
    data.validate()?;
    let c = Params {
        p,
        q,
        r: 0,
        l_eq_lx: data.l_eq_lx,
    };
    let (family, sx) = match variant {
        CuspVariant::Cusp => {
            if p < 2 {
                return Err(Error::Domain("x^p + y^(p+1) needs p ≥ 2".into()));
            }
            (Family::Cusp, TypeName::sqh(p, p + 1))
        }
        CuspVariant::Shifted => {
            if p < 1 {
                return Err(Error::Domain("x^(p+1) + y^(p+2) needs p ≥ 1".into()));
            }
            (Family::CuspShifted, TypeName::sqh(p + 1, p + 2))
        }
    };
    let (res, check) = dispatch(family, &c)?;
    let x = Profile::of_type(&sx)?;
    let y = Profile::of_type(&TypeName::omp(q + 1))?;
    Ok((res.with_bounds(&x, &y), check))
}

pub fn collide_cuspfree_omp(
    p: u32,
    r: u32,
    q: u32,
    data: &CollisionData,
) -> Result<CollisionResult> {
    cuspfree_omp_checked(p, r, q, data).map(|(res, _)| res)
}

pub fn cuspfree_omp_checked(
    p: u32,
    r: u32,
    q: u32,
    data: &CollisionData,
) -> Result<(CollisionResult, Option<FormulaCheck>)> {
    data.validate()?;
    if q > p + r {
        return Err(Error::Unsupported(format!(
            "need q ≤ p + r, got q = {q} > {}",
            p + r
        )));
    }
    let sx = TypeName::new(Series::Cuspfree, vec![p, r])?;
    let c = Params {
        p,
        q,
        r,
        l_eq_lx: data.l_eq_lx,
    };
    let (res, check) = dispatch(Family::Cuspfree, &c)?;
    let x = Profile::of_type(&sx)?;
    let y = Profile::of_type(&TypeName::omp(q + 1))?;
    Ok((res.with_bounds(&x, &y), check))
}

/// One arrow of the ADE / D_k pictures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub target: TypeName,
    pub generic: bool,
    pub rule_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

fn arrows_ordered(x: &TypeName, y: &TypeName) -> Vec<Arrow> {
    let mut out = Vec::new();
    let mut push = |target: TypeName, generic: bool, id: &str, cond: Option<&str>| {
        if target_ok(&target) {
            out.push(Arrow {
                target,
                generic,
                rule_id: id.into(),
                condition: cond.map(str::to_string),
            });
        }
    };
    let one = |n: &TypeName, s: Series| (n.series() == s).then(|| n.indices()[0]);
    if let (Some(k), Some(l)) = (one(x, Series::A), one(y, Series::A)) {
        push(TypeName::a(k + l + 1), true, "ade:A_k+A_l", Some("l=lx"));
        push(TypeName::d(k + l + 2), false, "ade:A_k+A_l", None);
        if l == 3 {
            push(TypeName::a(k + 4), true, "ade:A_k+A_3", None);
            push(TypeName::e(k + 4), true, "ade:A_k+A_3", None);
            push(TypeName::d(k + 4), true, "ade:A_k+A_3", None);
        }
        if l == 1 {
            push(TypeName::a(k + 2), true, "ade:A_k+A_1", None);
            push(TypeName::e(k + 2), true, "ade:A_k+A_1", None);
        }
        if (k, l) == (3, 2) {
            push(TypeName::a(6), true, "ade:A_3+A_2", None);
            push(TypeName::d(6), true, "ade:A_3+A_2", None);
            push(TypeName::e(7), false, "ade:A_3+A_2", None);
        }
        if (k, l) == (4, 2) {
            push(TypeName::a(7), true, "ade:A_4+A_2", None);
            push(TypeName::e(7), true, "ade:A_4+A_2", None);
            push(TypeName::d(8), false, "ade:A_4+A_2", None);
        }
    }
    if let (Some(5), Some(k)) = (one(x, Series::D), one(y, Series::A)) {
        push(TypeName::d(5 + k + 1), true, "ade:D_5+A_k", None);
        push(TypeName::e(5 + k + 1), true, "ade:D_5+A_k", None);
    }
    if let (Some(6), Some(1)) = (one(x, Series::E), one(y, Series::A)) {
        push(TypeName::e(8), true, "ade:E_6+A_1", None);
    }
    if let (Some(k), Some(l)) = (one(x, Series::D), one(y, Series::A)) {
        push(TypeName::d(k + l + 1), true, "ade:D_k+A_l", None);
    }
    if let (Some(4), Some(m)) = (one(x, Series::D), one(y, Series::D)) {
        match m {
            4 => push(TypeName::j(2, 0), true, "dk:D_4+D_4", None),
            5 => {
                push(TypeName::x(1, 2), true, "dk:D_4+D_5", None);
                push(TypeName::j(2, 1), true, "dk:D_4+D_5", None);
            }
            6 => {
                push(TypeName::x(1, 2), true, "dk:D_4+D_6", None);
                push(TypeName::j(2, 2), true, "dk:D_4+D_6", None);
            }
            _ => {}
        }
    }
    out
}

/// E_k only for 6 ≤ k ≤ 8 in these pictures.
fn target_ok(t: &TypeName) -> bool {
    match t.series() {
        Series::E => (6..=8).contains(&t.indices()[0]),
        _ => TypeName::new(t.series(), t.indices().to_vec()).is_ok(),
    }
}

/// The tabulated arrows from S_x + S_y, merged over every picture that
/// matches the pair in either order.
pub fn ade_arrows(x: &TypeName, y: &TypeName) -> Result<Vec<Arrow>> {
    let mut all = arrows_ordered(x, y);
    if x != y {
        all.extend(arrows_ordered(y, x));
    }
    let mut merged: Vec<Arrow> = Vec::new();
    for a in all {
        match merged.iter_mut().find(|m| m.target == a.target) {
            Some(m) => {
                m.generic |= a.generic;
                if m.condition.is_none() {
                    m.condition = a.condition;
                }
            }
            None => merged.push(a),
        }
    }
    if merged.is_empty() {
        return Err(Error::NotTabulated(format!(
            "{x} + {y} is not in the ADE or D_k pictures"
        )));
    }
    Ok(merged)
}

pub fn collide_ade(x: &TypeName, y: &TypeName) -> Result<Vec<CollisionResult>> {
    let (px, py) = (Profile::of_type(x)?, Profile::of_type(y)?);
    let (px, py) = if px.invariants.mult() >= py.invariants.mult() {
        (px, py)
    } else {
        (py, px)
    };
    ade_arrows(x, y)?
        .into_iter()
        .map(|a| {
            let d = normal_form(&a.target)?.diagram;
            let mut res = CollisionResult::of_diagram(d, a.rule_id.clone(), a.generic)?;
            if !res.names.contains(&a.target) {
                res.names.insert(0, a.target.clone());
            }
            res.generic = Some(a.generic);
            if let Some(c) = a.condition {
                res.flags.push(format!("when {c}"));
            }
            Ok(res.with_bounds(&px, &py))
        })
        .collect()
}

/// Coarse shape of an input type for rule dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Omp(u32),
    Cusp(u32),
    Cuspfree(u32, u32),
    Other,
}

pub fn kind_of(t: &TypeName) -> Kind {
    let ix = t.indices();
    match (t.series(), ix) {
        (Series::Omp, [m]) => Kind::Omp(*m),
        (Series::A, [1]) => Kind::Omp(2),
        (Series::D, [4]) => Kind::Omp(3),
        (Series::X, [1, 0]) => Kind::Omp(4),
        (Series::Sqh, [p, q]) if p == q => Kind::Omp(*p),
        (Series::Sqh, [p, q]) if *q == p + 1 => Kind::Cusp(*p),
        (Series::A, [2]) => Kind::Cusp(2),
        (Series::E, [6]) => Kind::Cusp(3),
        (Series::W, [12]) => Kind::Cusp(4),
        (Series::Cuspfree, [p, r]) => Kind::Cuspfree(*p, *r),
        _ => Kind::Other,
    }
}

/// Closed-form rule when one applies, the ADE and D_k pictures otherwise.
pub fn collide(x: &TypeName, y: &TypeName, data: &CollisionData) -> Result<Vec<CollisionResult>> {
    data.validate()?;
    match (kind_of(x), kind_of(y)) {
        (Kind::Omp(mx), Kind::Omp(my)) => Ok(vec![collide_omp_omp(mx - 1, my - 1)?]),
        (Kind::Cusp(p), Kind::Omp(m)) => {
            Ok(vec![collide_sqh_omp(CuspVariant::Cusp, p, m - 1, data)?])
        }
        (Kind::Cuspfree(p, r), Kind::Omp(m)) => Ok(vec![collide_cuspfree_omp(p, r, m - 1, data)?]),
        _ => {
            let all = collide_ade(x, y)?;
            let other = if data.l_eq_lx {
                "when l!=lx"
            } else {
                "when l=lx"
            };
            let kept: Vec<CollisionResult> = all
                .iter()
                .filter(|r| !r.flags.iter().any(|f| f == other))
                .cloned()
                .collect();
            Ok(if kept.is_empty() { all } else { kept })
        }
    }
}

/// Homogeneous binary form of degree m as coefficients of x^i y^(m−i).
fn cone(f: &Polynomial) -> Result<(u32, Univariate)> {
    let m = multiplicity(f)?;
    let c = f.initial_form();
    Ok((
        m,
        Univariate::new((0..=m).map(|i| c.coeff(&Monomial::xy(i, m - i))).collect()),
    ))
}

/// Do the tangent cones of f and g share a line?
pub fn share_tangent(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    let (mf, cf) = cone(f)?;
    let (mg, cg) = cone(g)?;
    // y divides the form iff the x^m coefficient vanishes.
    let y_f = cf.degree() != Some(mf as usize);
    let y_g = cg.degree() != Some(mg as usize);
    if y_f && y_g {
        return Ok(true);
    }
    Ok(cf.gcd(&cg).degree().unwrap_or(0) > 0)
}

/// A member of the diagram with small deterministic coefficients that is NND.
pub fn diagram_representative(d: &NewtonDiagram) -> Result<Polynomial> {
    let v = d.vertices();
    for shift in 0..16i64 {
        let f = Polynomial::from_xy_terms(
            &v.iter()
                .enumerate()
                .map(|(i, &(a, b))| (1 + ((i as i64 + shift) % 5), a, b))
                .collect::<Vec<_>>(),
        );
        // Interior lattice points of each face, so that every face is square-free.
        let mut f = f;
        for face in d.faces() {
            let l = face.lattice_length;
            let (sa, sb) = (
                (face.end.0 - face.start.0) / l,
                (face.start.1 - face.end.1) / l,
            );
            for k in 1..l {
                let c = ((k as i64 * 3 + shift) % 7) - 3;
                f = f + Polynomial::from_xy_terms(&[(
                    c,
                    face.start.0 + k * sa,
                    face.start.1 - k * sb,
                )]);
            }
        }
        if nnd_check(&f, d) {
            return Ok(f);
        }
    }
    Err(Error::Genericity(16))
}

/// S_x = S_x¹ ∪ S_x² with S_x² colliding with S_y as in `inner`; the
/// untouched part S_x¹ is joined transversally to the inner result.
pub fn branchwise_collide(
    x1: &Polynomial,
    x2: &Polynomial,
    y: &TypeName,
    inner: &CollisionResult,
) -> Result<CollisionResult> {
    if share_tangent(x1, x2)? {
        return Err(Error::Precondition(
            "the two parts of S_x share a tangent line".into(),
        ));
    }
    let g = diagram_representative(&inner.diagram)?;
    if share_tangent(x1, &g)? {
        return Err(Error::Precondition(
            "S_x¹ is tangent to the realized inner result".into(),
        ));
    }
    let r1 = InvariantRecord::of_polynomial(x1)?;
    let r2 = inner.invariants;
    let (m1, m2) = (r1.mult(), r2.mult());
    let delta = r1.delta() + r2.delta() + m1 * m2;
    let r = r1.r() + r2.r();
    let rec = InvariantRecord::new(m1 + m2, 2 * delta + 1 - r, r)?;
    let f = x1 * &g;
    let mu = milnor_local(&f)?;
    if mu != rec.mu() {
        return Err(Error::Internal(format!(
            "composite μ {} but product has μ {mu}",
            rec.mu()
        )));
    }
    let d = NewtonDiagram::of_polynomial(&f)?;
    let names = if nnd_check(&f, &d) && InvariantRecord::of_diagram(&d).ok() == Some(rec) {
        recognize(&d)
    } else {
        Vec::new()
    };
    let x2_mult = multiplicity(x2)?;
    let y_mult = normal_form(y)?.diagram.multiplicity();
    let primitive = inner.primitive && m2 == x2_mult && x2_mult >= y_mult;
    Ok(CollisionResult {
        diagram: d,
        names: if names.is_empty() {
            vec![TypeName::composite()]
        } else {
            names
        },
        invariants: rec,
        rule_id: format!("branchwise({})", inner.rule_id),
        primitive,
        generic: None,
        flags: Vec::new(),
        bounds: None,
    })
}
