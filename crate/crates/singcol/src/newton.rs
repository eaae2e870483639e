//! Newton diagrams of plane curve germs.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Polynomial, Rational, Univariate};
use crate::error::{Error, Result};

pub type Point = (u32, u32);

/// Vertices sorted by strictly increasing a and strictly decreasing b.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct NewtonDiagram {
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    vertices: Vec<[u32; 2]>,
}

impl TryFrom<DiagramJson> for NewtonDiagram {
    type Error = Error;
    fn try_from(j: DiagramJson) -> Result<Self> {
        NewtonDiagram::new(j.vertices.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<NewtonDiagram> for DiagramJson {
    fn from(d: NewtonDiagram) -> Self {
        DiagramJson {
            vertices: d.vertices.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub start: Point,
    pub end: Point,
    pub lattice_length: u32,
    /// |Δb / Δa|
    pub slope: Rational,
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

/// Lower-left convex staircase of a point set, collinear points dropped.
fn staircase(points: impl IntoIterator<Item = Point>) -> Vec<Point> {
    let mut best: BTreeMap<u32, u32> = BTreeMap::new();
    for (a, b) in points {
        best.entry(a).and_modify(|v| *v = (*v).min(b)).or_insert(b);
    }
    let mut mins: Vec<Point> = Vec::new();
    for (a, b) in best {
        if mins.last().is_none_or(|&(_, lb)| b < lb) {
            mins.push((a, b));
        }
    }
    let mut hull: Vec<Point> = Vec::new();
    for p in mins {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

impl NewtonDiagram {
    /// Validates ordering and convexity; points interior to a face are dropped.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Domain("empty diagram".into()));
        }
        for w in vertices.windows(2) {
            if !(w[0].0 < w[1].0 && w[0].1 > w[1].1) {
                return Err(Error::Domain(format!(
                    "vertices {:?} not a staircase",
                    vertices
                )));
            }
        }
        for w in vertices.windows(3) {
            if cross(w[0], w[1], w[2]) < 0 {
                return Err(Error::Domain(format!("vertex {:?} is not convex", w[1])));
            }
        }
        Ok(NewtonDiagram {
            vertices: staircase(vertices),
        })
    }

    pub fn of_support(support: impl IntoIterator<Item = Point>) -> Result<Self> {
        let v = staircase(support);
        if v.is_empty() {
            return Err(Error::Domain("empty support".into()));
        }
        Ok(NewtonDiagram { vertices: v })
    }

    pub fn of_polynomial(f: &Polynomial) -> Result<Self> {
        Self::of_support(f.xy_support())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn x_offset(&self) -> u32 {
        self.vertices[0].0
    }

    pub fn y_offset(&self) -> u32 {
        self.vertices[self.vertices.len() - 1].1
    }

    pub fn is_convenient(&self) -> bool {
        self.x_offset() == 0 && self.y_offset() == 0
    }

    pub fn faces(&self) -> Vec<Face> {
        self.vertices
            .windows(2)
            .map(|w| {
                let (da, db) = (w[1].0 - w[0].0, w[0].1 - w[1].1);
                Face {
                    start: w[0],
                    end: w[1],
                    lattice_length: da.gcd(&db),
                    slope: Rational::new(db.into(), da.into()),
                }
            })
            .collect()
    }

    /// Minimal total degree over the vertices.
    pub fn multiplicity(&self) -> u32 {
        self.vertices.iter().map(|&(a, b)| a + b).min().unwrap()
    }

    pub fn swap(&self) -> Self {
        NewtonDiagram {
            vertices: self.vertices.iter().rev().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Weakly above the staircase (inside the Newton region).
    pub fn contains(&self, p: Point) -> bool {
        let v = &self.vertices;
        if p.0 < v[0].0 || p.1 < v[v.len() - 1].1 {
            return false;
        }
        for w in v.windows(2) {
            if p.0 >= w[0].0 && p.0 <= w[1].0 {
                return cross(w[0], w[1], p) >= 0;
            }
        }
        if p.0 <= v[0].0 {
            p.1 >= v[0].1
        } else {
            true
        }
    }

    pub fn equal_up_to_swap(&self, o: &NewtonDiagram) -> bool {
        self == o || *self == o.swap()
    }

    /// Close a non-convenient reduced diagram by the smallest axis vertex that
    /// keeps the generic topological type, and normalize a smooth branch cut
    /// off by the first or last face.
    pub fn canonical(&self) -> Result<Self> {
        if self.x_offset() > 1 || self.y_offset() > 1 {
            return Err(Error::NonReduced(format!(
                "diagram {self} has an offset ≥ 2"
            )));
        }
        if self.vertices == [(1, 1)] {
            return Ok(NewtonDiagram {
                vertices: vec![(0, 2), (2, 0)],
            });
        }
        if self.vertices == [(0, 0)] {
            return Err(Error::NotAGerm);
        }
        let mut v = self.vertices.clone();
        if v.len() >= 2 && v[0].0 == 0 && v[1].0 == 1 {
            v.remove(0);
        }
        let n = v.len();
        if n >= 2 && v[n - 1].1 == 0 && v[n - 2].1 == 1 {
            v.pop();
        }
        let mut out = v.clone();
        if v[0].0 == 1 {
            let (a1, b1) = v[0];
            let add = match v.get(1) {
                Some(&(a2, b2)) => (b1 - b2).div_ceil(a2 - a1),
                None => 1,
            };
            out.insert(0, (0, b1 + add));
        }
        let n = v.len();
        if v[n - 1].1 == 1 {
            let (an, bn) = v[n - 1];
            let add = if n >= 2 {
                let (ap, bp) = v[n - 2];
                (an - ap).div_ceil(bp - bn)
            } else {
                1
            };
            out.push((an + add, 0));
        }
        Self::of_support(out)
    }

    /// Same generic type up to swapping the axes.
    pub fn same_type(&self, o: &NewtonDiagram) -> bool {
        match (self.canonical(), o.canonical()) {
            (Ok(a), Ok(b)) => a.equal_up_to_swap(&b),
            _ => self.equal_up_to_swap(o),
        }
    }

    pub fn is_linear_type(&self) -> bool {
        let half = Rational::new(1.into(), 2.into());
        let two = Rational::from_integer(2.into());
        self.faces()
            .iter()
            .all(|f| f.slope >= half && f.slope <= two)
    }

    /// Kouchnirenko's number, with virtual axis vertices at symbolic
    /// distance M when the diagram is not convenient.
    pub fn newton_number(&self) -> Result<u32> {
        let v = &self.vertices;
        if v == &[(0, 0)] {
            return Err(Error::NotAGerm);
        }
        let (xo, yo) = (self.x_offset() as i64, self.y_offset() as i64);
        if xo >= 2 || yo >= 2 {
            return Err(Error::NonReduced(format!(
                "missing axis with offset {} in {self}",
                xo.max(yo)
            )));
        }
        // 2V − a − b + 1 = c0 + c1·M
        let mut c0: i64 = 1;
        let mut c1: i64 = 0;
        for w in v.windows(2) {
            let (a0, b0, a1, b1) = (w[0].0 as i64, w[0].1 as i64, w[1].0 as i64, w[1].1 as i64);
            c0 += (a1 - a0) * (b0 + b1);
        }
        let (a1, b1) = (v[0].0 as i64, v[0].1 as i64);
        if xo > 0 {
            c0 += a1 * b1;
            c1 += a1 - 1;
        } else {
            c0 -= b1;
        }
        let (an, bn) = (v[v.len() - 1].0 as i64, v[v.len() - 1].1 as i64);
        if yo > 0 {
            c0 -= an * bn;
            c1 += bn - 1;
        } else {
            c0 -= an;
        }
        if c1 != 0 {
            return Err(Error::NonIsolated(format!(
                "Newton number of {self} depends on M"
            )));
        }
        u32::try_from(c0).map_err(|_| Error::Internal(format!("negative Newton number for {self}")))
    }

    pub fn generic_branch_count(&self) -> Result<u32> {
        if self.x_offset() >= 2 || self.y_offset() >= 2 {
            return Err(Error::NonReduced(format!(
                "diagram {self} has an offset ≥ 2"
            )));
        }
        Ok(self.faces().iter().map(|f| f.lattice_length).sum::<u32>()
            + self.x_offset()
            + self.y_offset())
    }

    /// Dehomogenized face polynomials of `f` along this diagram.
    pub fn face_polynomials(&self, f: &Polynomial) -> Vec<Univariate> {
        self.faces()
            .iter()
            .map(|face| {
                let l = face.lattice_length;
                let (sa, sb) = (
                    (face.end.0 - face.start.0) / l,
                    (face.start.1 - face.end.1) / l,
                );
                Univariate::new(
                    (0..=l)
                        .map(|k| {
                            f.coeff(&Monomial::xy(face.start.0 + k * sa, face.start.1 - k * sb))
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// Newton non-degeneracy: every face polynomial is square-free.
pub fn nnd_check(f: &Polynomial, d: &NewtonDiagram) -> bool {
    d.face_polynomials(f).iter().all(|u| u.is_squarefree())
}

impl fmt::Display for NewtonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (a, b)) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "]")
    }
}

/// Parses `[[0,3],[2,2],[6,0]]` or `{"vertices": ...}`.
pub fn parse_diagram(s: &str) -> Result<NewtonDiagram> {
    let t = s.trim();
    let err = |e: serde_json::Error| Error::Parse {
        pos: e.column().saturating_sub(1),
        msg: e.to_string(),
    };
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(err)
    } else {
        let v: Vec<[u32; 2]> = serde_json::from_str(t).map_err(err)?;
        NewtonDiagram::new(v.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: &[(u32, u32)]) -> NewtonDiagram {
        NewtonDiagram::new(v.to_vec()).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn diagrams_of_supports() {
        assert_eq!(
            NewtonDiagram::of_support([(4, 0), (0, 2)]).unwrap(),
            d(&[(0, 2), (4, 0)])
        );
        let f = p("x^4 + x^2*y^2 + y^6");
        assert_eq!(
            NewtonDiagram::of_polynomial(&f).unwrap(),
            d(&[(0, 6), (2, 2), (4, 0)])
        );
        let g = p("(x + y)*(x^3 + y^6)");
        assert_eq!(
            NewtonDiagram::of_polynomial(&g).unwrap(),
            d(&[(0, 7), (3, 1), (4, 0)])
        );
    }

    #[test]
    fn collinear_points_are_not_vertices() {
        assert_eq!(
            NewtonDiagram::of_polynomial(&p("y^3 + x^2*y^2 + x^6")).unwrap(),
            d(&[(0, 3), (6, 0)])
        );
        assert_eq!(
            NewtonDiagram::new(vec![(0, 2), (1, 1), (2, 0)]).unwrap(),
            d(&[(0, 2), (2, 0)])
        );
        assert!(NewtonDiagram::new(vec![(0, 2), (1, 2)]).is_err());
    }

    #[test]
    fn linearity() {
        assert!(d(&[(0, 2), (4, 0)]).is_linear_type());
        assert!(!d(&[(0, 2), (5, 0)]).is_linear_type());
        for pp in 2..6 {
            for qq in pp..=2 * pp {
                assert!(d(&[(0, qq), (pp, 0)]).is_linear_type());
            }
        }
    }

    #[test]
    fn newton_numbers() {
        assert_eq!(d(&[(0, 2), (4, 0)]).newton_number(), Ok(3));
        assert_eq!(d(&[(1, 2), (3, 0)]).newton_number(), Ok(4));
        assert_eq!(d(&[(0, 3), (3, 0)]).newton_number(), Ok(4));
        assert_eq!(d(&[(1, 1)]).newton_number(), Ok(1));
        assert_eq!(d(&[(0, 1), (1, 0)]).newton_number(), Ok(0));
        assert!(matches!(
            d(&[(2, 2), (4, 0)]).newton_number(),
            Err(Error::NonReduced(_))
        ));
    }

    #[test]
    fn branch_counts() {
        assert_eq!(d(&[(0, 3), (3, 0)]).generic_branch_count(), Ok(3));
        assert_eq!(d(&[(1, 2), (3, 0)]).generic_branch_count(), Ok(3));
        assert_eq!(d(&[(0, 3), (2, 2), (6, 0)]).generic_branch_count(), Ok(3));
    }

    #[test]
    fn nnd() {
        let f = p("x^4 + y^4");
        assert!(nnd_check(&f, &NewtonDiagram::of_polynomial(&f).unwrap()));
        let g = p("(x + y)^2 + y^4");
        assert!(!nnd_check(&g, &NewtonDiagram::of_polynomial(&g).unwrap()));
        let h = p("y^2 + 2*x*y + x^2 + x^3");
        assert!(!nnd_check(&h, &NewtonDiagram::of_polynomial(&h).unwrap()));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(
            d(&[(1, 2), (3, 0)]).canonical().unwrap(),
            d(&[(0, 3), (3, 0)])
        );
        assert_eq!(
            d(&[(0, 4), (4, 1)]).canonical().unwrap(),
            d(&[(0, 4), (4, 1), (6, 0)])
        );
        assert_eq!(
            d(&[(1, 2), (5, 0)]).canonical().unwrap(),
            d(&[(0, 3), (1, 2), (5, 0)])
        );
        assert!(d(&[(1, 2), (5, 0)]).same_type(&d(&[(0, 5), (2, 1), (3, 0)])));
        assert!(d(&[(0, 10), (1, 2), (3, 0)]).same_type(&d(&[(0, 3), (3, 0)])));
        assert_eq!(d(&[(1, 1)]).canonical().unwrap(), d(&[(0, 2), (2, 0)]));
    }

    #[test]
    fn json() {
        let x = d(&[(0, 3), (2, 2), (6, 0)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"vertices":[[0,3],[6,0]]}"#);
        assert_eq!(serde_json::from_str::<NewtonDiagram>(&s).unwrap(), x);
        assert_eq!(parse_diagram("[[0,3],[2,2],[6,0]]").unwrap(), x);
        assert!(parse_diagram("[[0,3],[2,2],[3,0]]").is_err());
        assert_eq!(x.vertices(), &[(0, 3), (6, 0)]);
    }

    fn support() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((0u32..9, 0u32..9), 1..8)
    }

    proptest! {
        #[test]
        fn idempotent_and_below_support(s in support()) {
            let dd = NewtonDiagram::of_support(s.clone()).unwrap();
            prop_assert_eq!(&NewtonDiagram::of_support(dd.vertices().to_vec()).unwrap(), &dd);
            for &pt in &s {
                prop_assert!(dd.contains(pt));
            }
            prop_assert!(NewtonDiagram::new(dd.vertices().to_vec()).is_ok());
        }

        #[test]
        fn swap_symmetry(s in support()) {
            let dd = NewtonDiagram::of_support(s.clone()).unwrap();
            let sw = NewtonDiagram::of_support(s.iter().map(|&(a, b)| (b, a))).unwrap();
            prop_assert_eq!(&sw, &dd.swap());
            prop_assert_eq!(sw.newton_number().ok(), dd.newton_number().ok());
            prop_assert_eq!(sw.generic_branch_count().ok(), dd.generic_branch_count().ok());
        }

        #[test]
        fn canonical_is_idempotent_and_keeps_invariants(s in support()) {
            let dd = NewtonDiagram::of_support(s).unwrap();
            if let Ok(c) = dd.canonical() {
                prop_assert_eq!(c.canonical().unwrap(), c.clone());
                prop_assert!(c.is_convenient());
                if let (Ok(m1), Ok(m2)) = (dd.newton_number(), c.newton_number()) {
                    prop_assert_eq!(m1, m2);
                    prop_assert_eq!(dd.generic_branch_count().unwrap(), c.generic_branch_count().unwrap());
                    prop_assert_eq!(dd.multiplicity(), c.multiplicity());
                }
            }
        }
    }

    #[test]
    fn omp_branch_count_is_multiplicity() {
        for m in 2..9 {
            let o = d(&[(0, m), (m, 0)]);
            assert_eq!(o.generic_branch_count(), Ok(m));
            assert_eq!(o.newton_number(), Ok((m - 1) * (m - 1)));
        }
    }
}
