//! Flat limits of linear singularity conditions at a fixed and a moving point.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::matrix::{axpy, sparse_rref, MatrixJson, RationalMatrix, SparseRow};
use crate::algebra::rational::{q, q2};
use crate::algebra::{Monomial, Polynomial, Rational, Var};
use crate::catalog::{normal_form, TypeName};
use crate::collision::{kind_of, CollisionData, CollisionResult, Kind};
use crate::error::{Error, Result};
use crate::invariants::milnor_local;
use crate::newton::{nnd_check, NewtonDiagram, Point};

/// Monomials x^a y^b with a + b ≤ N, by degree and then by decreasing a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetSpace {
    n: u32,
    basis: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl JetSpace {
    pub fn new(n: u32) -> Self {
        let basis: Vec<Point> = (0..=n)
            .flat_map(|d| (0..=d).rev().map(move |a| (a, d - a)))
            .collect();
        let index = basis.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        JetSpace { n, basis, index }
    }

    pub fn degree_bound(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn column(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn monomial(&self, i: usize) -> Point {
        self.basis[i]
    }

    pub fn column_names(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|&(a, b)| Monomial::xy(a, b).to_string())
            .collect()
    }
}

/// Polynomial in ε, ascending, without trailing zeros.
pub type EpsPoly = Vec<Rational>;
/// Sparse row over ℚ[ε].
pub type EpsRow = BTreeMap<usize, EpsPoly>;

fn trim(p: &mut EpsPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn eval(p: &EpsPoly, t: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// Largest power of ε dividing every entry.
fn valuation(r: &EpsRow) -> usize {
    r.values()
        .map(|p| p.iter().position(|c| !c.is_zero()).unwrap_or(0))
        .min()
        .unwrap_or(0)
}

fn shift_down(r: &mut EpsRow, v: usize) {
    if v == 0 {
        return;
    }
    for p in r.values_mut() {
        p.drain(..v);
    }
}

fn constant_part(r: &EpsRow) -> SparseRow {
    r.iter()
        .filter_map(|(&c, p)| p.first().filter(|x| !x.is_zero()).map(|x| (c, x.clone())))
        .collect()
}

/// `r -= f * s`
fn sub_scaled(r: &mut EpsRow, s: &EpsRow, f: &Rational) {
    for (c, sp) in s {
        let e = r.entry(*c).or_default();
        if e.len() < sp.len() {
            e.resize(sp.len(), Rational::zero());
        }
        for (k, x) in sp.iter().enumerate() {
            e[k] -= f * x;
        }
        trim(e);
        if e.is_empty() {
            r.remove(c);
        }
    }
}

fn eps_degree(r: &EpsRow) -> usize {
    r.values()
        .map(|p| p.len().saturating_sub(1))
        .max()
        .unwrap_or(0)
}

type Vector = (Rational, Rational);

/// Adapted coordinates at a point: f(P + u·d_u + w·d_w). The direction
/// d_u may approach its ε = 0 value as d_u + Σ ε^i w_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub d_u: Vector,
    pub d_w: Vector,
    pub approach: Vec<Vector>,
}

impl Frame {
    pub fn axes() -> Self {
        Frame {
            d_u: (q(1), q(0)),
            d_w: (q(0), q(1)),
            approach: Vec::new(),
        }
    }

    pub fn swapped() -> Self {
        Frame {
            d_u: (q(0), q(1)),
            d_w: (q(1), q(0)),
            approach: Vec::new(),
        }
    }

    pub fn diagonal() -> Self {
        Frame {
            d_u: (q(1), q(1)),
            d_w: (q(0), q(1)),
            approach: Vec::new(),
        }
    }
}

/// P(ε) = Σ_{k ≥ 1} ε^k v_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub terms: Vec<Vector>,
}

impl Trajectory {
    pub fn origin() -> Self {
        Trajectory { terms: Vec::new() }
    }

    pub fn straight() -> Self {
        Trajectory {
            terms: vec![(q(1), q(0))],
        }
    }
}

fn eps_series(base: &Rational, coeffs: impl Iterator<Item = (u32, Rational)>) -> Polynomial {
    let mut p = Polynomial::constant(base.clone());
    for (k, c) in coeffs {
        p.add_term(Monomial::new(0, 0, k), c);
    }
    p
}

/// Point conditions: the type's local diagram (convenient) and its placement.
#[derive(Debug, Clone)]
pub struct PointConditions {
    pub diagram: NewtonDiagram,
    pub trajectory: Trajectory,
    pub frame: Frame,
}

impl PointConditions {
    /// Exponents (a, b) strictly below the diagram.
    pub fn below(&self) -> Vec<Point> {
        let (ua, wb) = (self.diagram.x_offset_max(), self.diagram.y_offset_max());
        let mut out = Vec::new();
        for a in 0..=ua {
            for b in 0..=wb {
                if !self.diagram.contains((a, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Coefficient of u^a w^b in f(P + u d_u + w d_w) for each (a, b) below.
    pub fn rows(&self, space: &JetSpace) -> Vec<(Point, EpsRow)> {
        let below = self.below();
        let d = below.iter().map(|&(a, b)| a + b).max().unwrap_or(0);
        let u = Polynomial::var(Var::X);
        let w = Polynomial::var(Var::Y);
        let coord = |k: usize| {
            let px = eps_series(
                &q(0),
                self.trajectory
                    .terms
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i as u32 + 1, [&v.0, &v.1][k].clone())),
            );
            let du = eps_series(
                [&self.frame.d_u.0, &self.frame.d_u.1][k],
                self.frame
                    .approach
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i as u32 + 1, [&v.0, &v.1][k].clone())),
            );
            let dw = [&self.frame.d_w.0, &self.frame.d_w.1][k].clone();
            px + &du * &u + w.scale(&dw)
        };
        let (l1, l2) = (coord(0), coord(1));
        let powers = |l: &Polynomial| {
            let mut v = vec![Polynomial::one()];
            for _ in 0..space.degree_bound() {
                let next = v.last().unwrap().mul_truncated(l, d);
                v.push(next);
            }
            v
        };
        let (p1, p2) = (powers(&l1), powers(&l2));
        let slot: HashMap<Point, usize> = below.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut rows: Vec<EpsRow> = vec![EpsRow::new(); below.len()];
        for (col, &(i, j)) in space.basis.iter().enumerate() {
            if p1[i as usize].is_zero() || p2[j as usize].is_zero() {
                continue;
            }
            let g = p1[i as usize].mul_truncated(&p2[j as usize], d);
            for ((a, b), mut e) in g.eps_coefficients() {
                if let Some(&s) = slot.get(&(a, b)) {
                    trim(&mut e);
                    if !e.is_empty() {
                        rows[s].insert(col, e);
                    }
                }
            }
        }
        below.into_iter().zip(rows).collect()
    }
}

trait Offsets {
    fn x_offset_max(&self) -> u32;
    fn y_offset_max(&self) -> u32;
}

impl Offsets for NewtonDiagram {
    fn x_offset_max(&self) -> u32 {
        self.vertices().last().map(|v| v.0).unwrap_or(0)
    }

    fn y_offset_max(&self) -> u32 {
        self.vertices().first().map(|v| v.1).unwrap_or(0)
    }
}

/// Local diagram of a linear type, oriented with u-intercept ≥ w-intercept.
pub fn local_diagram(t: &TypeName) -> Result<NewtonDiagram> {
    let d = match kind_of(t) {
        Kind::Omp(m) => NewtonDiagram::new(vec![(0, m), (m, 0)])?,
        // the cusp tangent on the u-axis, r further tangents in general position
        Kind::Cuspfree(p, r) => NewtonDiagram::new(vec![(0, p + r), (r, p), (p + r + 1, 0)])?,
        _ => {
            let nf = normal_form(t)?;
            if !nf.diagram.is_convenient()
                || !nf.diagram.is_linear_type()
                || !nnd_check(&nf.poly, &nf.diagram)
            {
                return Err(Error::Unsupported(format!(
                    "{t} is not a linear type with a convenient diagram"
                )));
            }
            nf.diagram
        }
    };
    Ok(if d.x_offset_max() >= d.y_offset_max() {
        d
    } else {
        d.swap()
    })
}

#[derive(Debug, Clone)]
pub struct LinearConditionSystem {
    pub space: JetSpace,
    pub rows: Vec<EpsRow>,
    pub labels: Vec<String>,
}

impl LinearConditionSystem {
    pub fn new(space: JetSpace) -> Self {
        LinearConditionSystem {
            space,
            rows: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn add(&mut self, tag: &str, pc: &PointConditions) {
        for ((a, b), r) in pc.rows(&self.space) {
            self.rows.push(r);
            self.labels.push(format!("{tag}:u^{a}w^{b}"));
        }
    }

    pub fn with_rows(space: JetSpace, rows: Vec<EpsRow>) -> Self {
        let labels = (0..rows.len()).map(|i| format!("row{i}")).collect();
        LinearConditionSystem {
            space,
            rows,
            labels,
        }
    }

    /// Rank at ε = t.
    pub fn rank_at(&self, t: &Rational) -> usize {
        let ev: Vec<SparseRow> = self.rows.iter().map(|r| eval_row(r, t)).collect();
        sparse_rref(&ev).len()
    }

    /// Rank over ℚ(ε), taken as the larger rank at two unrelated points.
    pub fn generic_rank(&self) -> usize {
        GENERIC_POINTS
            .iter()
            .map(|&(n, d)| self.rank_at(&q2(n, d)))
            .max()
            .unwrap_or(0)
    }
}

const GENERIC_POINTS: [(i64, i64); 2] = [(1009, 17), (-577, 131)];

fn eval_row(r: &EpsRow, t: &Rational) -> SparseRow {
    r.iter()
        .filter_map(|(&c, p)| {
            let v = eval(p, t);
            (!v.is_zero()).then_some((c, v))
        })
        .collect()
}

/// Incremental echelon over ℚ for the rank test at a sample ε.
struct Echelon(BTreeMap<usize, SparseRow>);

impl Echelon {
    /// Inserts when independent; reports whether it was.
    fn insert(&mut self, mut r: SparseRow) -> bool {
        loop {
            let Some((&c, _)) = r.iter().find(|(c, _)| self.0.contains_key(c)) else {
                break;
            };
            let f = r[&c].clone();
            axpy(&mut r, &self.0[&c], &(-f));
        }
        let Some((&c, v)) = r.iter().next() else {
            return false;
        };
        let inv = Rational::one() / v;
        for x in r.values_mut() {
            *x *= &inv;
        }
        self.0.insert(c, r);
        true
    }
}

#[derive(Debug, Clone)]
pub struct LimitSystem {
    pub space: JetSpace,
    /// Reduced echelon rows over ℚ.
    pub rows: Vec<SparseRow>,
    pub source_rank: usize,
    pub passes: usize,
}

impl LimitSystem {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Monomials whose coefficient functional lies in the row space.
    pub fn forced(&self) -> Vec<Point> {
        self.rows
            .iter()
            .filter(|r| r.len() == 1)
            .map(|r| self.space.monomial(*r.keys().next().unwrap()))
            .collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.rows.iter().all(|r| r.len() == 1)
    }

    pub fn survivors(&self) -> Vec<Point> {
        let forced: std::collections::HashSet<Point> = self.forced().into_iter().collect();
        self.space
            .basis
            .iter()
            .copied()
            .filter(|p| !forced.contains(p))
            .collect()
    }

    pub fn staircase(&self) -> Result<NewtonDiagram> {
        NewtonDiagram::of_support(self.survivors())
    }

    pub fn same_row_space(&self, o: &LimitSystem) -> bool {
        self.space == o.space && self.rows == o.rows
    }

    pub fn to_json(&self) -> MatrixJson {
        let n = self.space.len();
        let dense: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![Rational::zero(); n];
                for (c, x) in r {
                    v[*c] = x.clone();
                }
                v
            })
            .collect();
        MatrixJson::new(
            self.space.column_names(),
            &RationalMatrix::from_rows(n, dense),
        )
    }
}

/// Row space limit as ε → 0: divide out ε-content, reduce the ε = 0 parts,
/// and feed rows whose ε = 0 part cancels back in after dividing by ε.
pub fn flat_limit(system: &LinearConditionSystem) -> Result<LimitSystem> {
    let t = q2(GENERIC_POINTS[0].0, GENERIC_POINTS[0].1);
    let source_rank = system.generic_rank();
    let guard: usize = system.rows.iter().map(eps_degree).sum::<usize>() + system.rows.len();
    let mut generic = Echelon(BTreeMap::new());
    // pivot column of the ε = 0 part → full row
    let mut basis: BTreeMap<usize, EpsRow> = BTreeMap::new();
    let mut passes = 0usize;
    for row in &system.rows {
        if !generic.insert(eval_row(row, &t)) {
            continue;
        }
        let mut r = row.clone();
        loop {
            let v = valuation(&r);
            shift_down(&mut r, v);
            let mut c0 = constant_part(&r);
            for (&pc, b) in basis.iter() {
                if let Some(f) = c0.get(&pc).cloned() {
                    let b0 = constant_part(b);
                    let inv = Rational::one() / &b0[&pc];
                    let f = f * inv;
                    sub_scaled(&mut r, b, &f);
                    axpy(&mut c0, &b0, &(-f));
                }
            }
            if let Some((&pc, _)) = c0.iter().next() {
                basis.insert(pc, r);
                break;
            }
            if r.is_empty() {
                return Err(Error::Structural(
                    "row independent at a sample ε reduced to zero".into(),
                ));
            }
            passes += 1;
            if passes > guard {
                return Err(Error::NonTermination(passes));
            }
        }
    }
    let rows = sparse_rref(&basis.values().map(constant_part).collect::<Vec<_>>());
    if rows.len() != source_rank {
        return Err(Error::Structural(format!(
            "limit rank {} differs from generic rank {source_rank}",
            rows.len()
        )));
    }
    Ok(LimitSystem {
        space: system.space.clone(),
        rows,
        source_rank,
        passes,
    })
}

/// The limit of OMP(p+1) at 0 and OMP(q+1) at (ε, 0) written down directly:
/// every coefficient of degree ≤ p, and in degree p + k (1 ≤ k ≤ q + 1) the
/// coefficients x^a y^(p+k−a) with a ≥ p + 2k − 1 − q.
pub fn triangular_system(p: u32, q: u32, n: u32) -> Result<LimitSystem> {
    if q < 1 || q > p {
        return Err(Error::OrderConvention(format!(
            "need p ≥ q ≥ 1, got p = {p}, q = {q}"
        )));
    }
    let space = JetSpace::new(n);
    let mut cols: Vec<usize> = Vec::new();
    for d in 0..=p.min(n) {
        cols.extend((0..=d).filter_map(|a| space.column((a, d - a))));
    }
    for k in 1..=q + 1 {
        let d = p + k;
        cols.extend((p + 2 * k - 1 - q..=d).filter_map(|a| space.column((a, d - a))));
    }
    cols.sort_unstable();
    let rows = cols
        .into_iter()
        .map(|c| SparseRow::from([(c, Rational::one())]))
        .collect::<Vec<_>>();
    let source_rank = rows.len();
    Ok(LimitSystem {
        space,
        rows,
        source_rank,
        passes: 0,
    })
}

pub fn omp_omp_system(
    p: u32,
    q: u32,
    n: u32,
    trajectory: Trajectory,
) -> Result<LinearConditionSystem> {
    let mut sys = LinearConditionSystem::new(JetSpace::new(n));
    sys.add(
        "x",
        &PointConditions {
            diagram: local_diagram(&TypeName::omp(p + 1))?,
            trajectory: Trajectory::origin(),
            frame: Frame::axes(),
        },
    );
    sys.add(
        "y",
        &PointConditions {
            diagram: local_diagram(&TypeName::omp(q + 1))?,
            trajectory,
            frame: Frame::axes(),
        },
    );
    Ok(sys)
}

/// Triangular rows against the computed limit; a mismatch is a bug.
pub fn check_triangular(p: u32, q: u32, n: u32) -> Result<LimitSystem> {
    let lim = flat_limit(&omp_omp_system(p, q, n, Trajectory::straight())?)?;
    let tri = triangular_system(p, q, n)?;
    if !lim.same_row_space(&tri) {
        return Err(Error::Structural(format!(
            "triangular rows differ from the flat limit at p={p}, q={q}, N={n}"
        )));
    }
    Ok(lim)
}

/// Both types, S_x at the origin and S_y moving in along the x-axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Setup {
    pub x: TypeName,
    pub y: TypeName,
    pub data: CollisionData,
}

impl Setup {
    pub fn new(x: TypeName, y: TypeName, data: CollisionData) -> Self {
        Setup { x, y, data }
    }

    pub fn default_jet_degree(&self) -> Result<u32> {
        let mx = local_diagram(&self.x)?.multiplicity();
        let my = local_diagram(&self.y)?.multiplicity();
        Ok(2 * (mx - 1 + my - 1 + 3))
    }

    pub fn system(&self, n: u32, trajectory: Trajectory) -> Result<LinearConditionSystem> {
        self.data.validate()?;
        let fx = if self.data.l_eq_lx {
            Frame::axes()
        } else {
            Frame::swapped()
        };
        let fy = if self.data.l_eq_ly {
            Frame::axes()
        } else if self.data.lx_eq_ly {
            fx.clone()
        } else {
            Frame::diagonal()
        };
        let mut sys = LinearConditionSystem::new(JetSpace::new(n));
        sys.add(
            "x",
            &PointConditions {
                diagram: local_diagram(&self.x)?,
                trajectory: Trajectory::origin(),
                frame: fx,
            },
        );
        sys.add(
            "y",
            &PointConditions {
                diagram: local_diagram(&self.y)?,
                trajectory,
                frame: fy,
            },
        );
        Ok(sys)
    }
}

/// A random solution of the limit system that is NND for its own diagram.
pub fn generic_member(limit: &LimitSystem, seed: u64, range: i64) -> Result<Polynomial> {
    let one = limit.space.column((0, 0));
    if !one.is_some_and(|c| {
        limit
            .rows
            .iter()
            .any(|r| r.len() == 1 && r.contains_key(&c))
    }) {
        return Err(Error::Precondition(
            "the limit system does not force f(0) = 0".into(),
        ));
    }
    if range < 1 {
        return Err(Error::Domain("coefficient range must be ≥ 1".into()));
    }
    let pivots: std::collections::HashSet<usize> = limit
        .rows
        .iter()
        .filter_map(|r| r.keys().next().copied())
        .collect();
    const ATTEMPTS: u64 = 8;
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut val: BTreeMap<usize, Rational> = BTreeMap::new();
        for c in (0..limit.space.len()).filter(|c| !pivots.contains(c)) {
            let mut k = 0i64;
            while k == 0 {
                k = rng.gen_range(-range..=range);
            }
            val.insert(c, q(k));
        }
        for r in &limit.rows {
            let mut it = r.iter();
            let (&pc, _) = it.next().unwrap();
            let v: Rational = it.fold(Rational::zero(), |acc, (c, x)| acc - x * &val[c]);
            val.insert(pc, v);
        }
        let f =
            Polynomial::from_terms(val.into_iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| {
                let (a, b) = limit.space.monomial(c);
                (Monomial::xy(a, b), v)
            }));
        let d = NewtonDiagram::of_polynomial(&f)?;
        if nnd_check(&f, &d) {
            return Ok(f);
        }
    }
    Err(Error::Genericity(ATTEMPTS as usize))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub x: TypeName,
    pub y: TypeName,
    pub data: String,
    pub jet_degree: u32,
    pub seed: u64,
    pub staircase: NewtonDiagram,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<MatrixJson>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const DEFAULT_RANGE: i64 = 9;

/// The limit at N, redone at 2N when the staircase reaches within two
/// degrees of the jet bound.
pub fn limit_for(setup: &Setup, n: Option<u32>) -> Result<(u32, LimitSystem)> {
    let mut n = match n {
        Some(n) => n,
        None => setup.default_jet_degree()?,
    };
    for _ in 0..2 {
        let lim = flat_limit(&setup.system(n, Trajectory::straight())?)?;
        let st = lim.staircase()?;
        if st.x_offset_max().max(st.y_offset_max()) + 2 <= n {
            return Ok((n, lim));
        }
        n *= 2;
    }
    Err(Error::Precondition(format!(
        "staircase not bounded inside the jet space at N = {}",
        n / 2
    )))
}

pub fn verify_collision(
    prediction: &CollisionResult,
    setup: &Setup,
    n: Option<u32>,
    seed: u64,
) -> Result<VerifyReport> {
    let (n, lim) = limit_for(setup, n)?;
    let st = lim.staircase()?;
    let mut checks = Vec::new();
    checks.push(Check {
        id: "staircase".into(),
        pass: st.equal_up_to_swap(&prediction.diagram),
        detail: format!("limit {st} vs predicted {}", prediction.diagram),
    });
    let want = prediction.invariants.mu();
    let f = generic_member(&lim, seed, DEFAULT_RANGE)?;
    let mu = milnor_local(&f)?;
    checks.push(Check {
        id: "milnor".into(),
        pass: mu == want,
        detail: format!("generic member μ {mu} vs {want}"),
    });
    let nn = st.newton_number()?;
    checks.push(Check {
        id: "newton".into(),
        pass: nn == want,
        detail: format!("Newton number {nn} vs {want}"),
    });
    let ok = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        x: setup.x.clone(),
        y: setup.y.clone(),
        data: setup.data.to_string(),
        jet_degree: n,
        seed,
        staircase: st,
        checks,
        limit: (!ok).then(|| lim.to_json()),
    })
}
