//! Named singularity types, normal forms and recognition by diagram.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::invariants::InvariantRecord;
use crate::newton::{nnd_check, NewtonDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E,
    J,
    Z,
    X,
    W,
    Omp,
    Sqh,
    Cuspfree,
    Composite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TypeName {
    series: Series,
    indices: Vec<u32>,
}

impl TypeName {
    pub fn new(series: Series, indices: Vec<u32>) -> Result<Self> {
        let n = TypeName { series, indices };
        n.validate()?;
        Ok(n)
    }

    pub fn a(k: u32) -> Self {
        TypeName {
            series: Series::A,
            indices: vec![k],
        }
    }

    pub fn d(k: u32) -> Self {
        TypeName {
            series: Series::D,
            indices: vec![k],
        }
    }

    pub fn e(k: u32) -> Self {
        TypeName {
            series: Series::E,
            indices: vec![k],
        }
    }

    pub fn j(k: u32, i: u32) -> Self {
        TypeName {
            series: Series::J,
            indices: vec![k, i],
        }
    }

    pub fn x(k: u32, i: u32) -> Self {
        TypeName {
            series: Series::X,
            indices: vec![k, i],
        }
    }

    pub fn z(k: u32) -> Self {
        TypeName {
            series: Series::Z,
            indices: vec![k],
        }
    }

    pub fn w(k: u32) -> Self {
        TypeName {
            series: Series::W,
            indices: vec![k],
        }
    }

    pub fn omp(m: u32) -> Self {
        TypeName {
            series: Series::Omp,
            indices: vec![m],
        }
    }

    pub fn sqh(p: u32, q: u32) -> Self {
        TypeName {
            series: Series::Sqh,
            indices: vec![p, q],
        }
    }

    pub fn cuspfree(p: u32, r: u32) -> Self {
        TypeName {
            series: Series::Cuspfree,
            indices: vec![p, r],
        }
    }

    pub fn composite() -> Self {
        TypeName {
            series: Series::Composite,
            indices: vec![],
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// A, D, E, J, Z, X or W.
    pub fn is_aglv(&self) -> bool {
        matches!(
            self.series,
            Series::A | Series::D | Series::E | Series::J | Series::Z | Series::X | Series::W
        )
    }

    fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::Domain(format!("invalid type {self}: {why}")));
        let ix = &self.indices;
        let want = match self.series {
            Series::A | Series::D | Series::E | Series::Z | Series::W | Series::Omp => 1,
            Series::J | Series::X | Series::Sqh | Series::Cuspfree => 2,
            Series::Composite => 0,
        };
        if ix.len() != want {
            return bad(&format!("expected {want} indices"));
        }
        match self.series {
            Series::A if ix[0] < 1 => bad("A needs k ≥ 1"),
            Series::D if ix[0] < 4 => bad("D needs k ≥ 4"),
            Series::E if ix[0] < 6 || ix[0] % 6 > 2 => bad("E needs k ∈ {6j, 6j+1, 6j+2}"),
            Series::J | Series::X if ix[0] < 1 => bad("needs k ≥ 1"),
            Series::Z if ix[0] < 11 || !matches!(ix[0] % 6, 5 | 0 | 1) => {
                bad("Z needs k ∈ {6j−1, 6j, 6j+1} with j ≥ 2")
            }
            Series::W if ix[0] < 12 || ix[0] % 12 > 1 => bad("W needs k ∈ {12j, 12j+1}"),
            Series::Omp if ix[0] < 2 => bad("omp needs m ≥ 2"),
            Series::Sqh if ix[0] < 2 || ix[1] < ix[0] => bad("sqh needs 2 ≤ p ≤ q"),
            Series::Cuspfree if ix[0] < 2 || ix[1] < 1 => bad("cuspfree needs p ≥ 2, r ≥ 1"),
            _ => Ok(()),
        }
    }

    /// Milnor number read off the name.
    pub fn mu(&self) -> Option<u32> {
        let ix = &self.indices;
        Some(match self.series {
            Series::A | Series::D | Series::E | Series::Z | Series::W => ix[0],
            Series::J => 6 * ix[0] - 2 + ix[1],
            Series::X => 12 * ix[0] - 3 + ix[1],
            Series::Omp => (ix[0] - 1).pow(2),
            Series::Sqh => (ix[0] - 1) * (ix[1] - 1),
            Series::Cuspfree => (ix[0] + ix[1] - 1).pow(2) + ix[0] - 1,
            Series::Composite => return None,
        })
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ix = &self.indices;
        let join = || ix.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self.series {
            Series::A => write!(f, "A{}", join()),
            Series::D => write!(f, "D{}", join()),
            Series::E => write!(f, "E{}", join()),
            Series::Z => write!(f, "Z{}", join()),
            Series::W => write!(f, "W{}", join()),
            Series::J if ix.len() == 2 => write!(f, "J{}_{}", ix[0], ix[1]),
            Series::X if ix.len() == 2 => write!(f, "X{}_{}", ix[0], ix[1]),
            Series::J => write!(f, "J({})", join()),
            Series::X => write!(f, "X({})", join()),
            Series::Omp => write!(f, "omp({})", join()),
            Series::Sqh => write!(f, "sqh({})", join()),
            Series::Cuspfree => write!(f, "cuspfree({})", join()),
            Series::Composite => write!(f, "composite"),
        }
    }
}

impl FromStr for TypeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let perr = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg} in type name {s:?}"),
        };
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| perr("expected a number"))
        };
        match s {
            "J10" => return Ok(TypeName::j(2, 0)),
            "X9" => return Ok(TypeName::x(1, 0)),
            "composite" => return Ok(TypeName::composite()),
            _ => {}
        }
        if let Some(open) = s.find('(') {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| perr("missing ')'"))?;
            let args: Vec<u32> = inner.split(',').map(num).collect::<Result<_>>()?;
            let series = match s[..open].to_ascii_lowercase().as_str() {
                "omp" => Series::Omp,
                "sqh" => Series::Sqh,
                "cuspfree" => Series::Cuspfree,
                _ => return Err(perr("unknown family")),
            };
            return TypeName::new(series, args);
        }
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(|| perr("empty"))?;
        let rest = chars.as_str();
        let series = match head {
            'A' => Series::A,
            'D' => Series::D,
            'E' => Series::E,
            'J' => Series::J,
            'Z' => Series::Z,
            'X' => Series::X,
            'W' => Series::W,
            _ => return Err(perr("unknown series")),
        };
        let indices = match series {
            Series::J | Series::X => {
                let (k, i) = rest.split_once('_').ok_or_else(|| perr("expected k_i"))?;
                vec![num(k)?, num(i)?]
            }
            _ => vec![num(rest)?],
        };
        TypeName::new(series, indices)
    }
}

impl TryFrom<String> for TypeName {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TypeName> for String {
    fn from(t: TypeName) -> String {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub poly: Polynomial,
    pub diagram: NewtonDiagram,
}

fn xy(c: i64, a: u32, b: u32) -> Polynomial {
    Polynomial::from_xy_terms(&[(c, a, b)])
}

/// The free branches of `cuspfree(p, r)` are the lines y = c·x, c = 1..r.
pub fn cuspfree_poly(p: u32, r: u32) -> Polynomial {
    let mut f = xy(1, p, 0) + xy(1, 0, p + 1);
    for c in 1..=r {
        f = &f * &Polynomial::from_xy_terms(&[(1, 0, 1), (-(c as i64), 1, 0)]);
    }
    f
}

pub fn normal_form(name: &TypeName) -> Result<NormalForm> {
    name.validate()?;
    let ix = name.indices();
    let poly = match name.series() {
        Series::A => xy(1, 0, 2) + xy(1, ix[0] + 1, 0),
        Series::D => xy(1, 1, 2) + xy(1, ix[0] - 1, 0),
        Series::E => {
            let (j, rem) = (ix[0] / 6, ix[0] % 6);
            match rem {
                0 => xy(1, 0, 3) + xy(1, 3 * j + 1, 0),
                1 => xy(1, 0, 3) + xy(1, 2 * j + 1, 1),
                _ => xy(1, 0, 3) + xy(1, 3 * j + 2, 0),
            }
        }
        Series::J => {
            let (k, i) = (ix[0], ix[1]);
            xy(1, 0, 3) + xy(1, k, 2) + xy(1, 3 * k + i, 0)
        }
        Series::Z => {
            let k = ix[0];
            match k % 6 {
                5 => xy(1, 1, 3) + xy(1, 3 * (k + 1) / 6 - 1, 0),
                0 => xy(1, 1, 3) + xy(1, 2 * (k / 6), 1),
                _ => xy(1, 1, 3) + xy(1, 3 * (k / 6), 0),
            }
        }
        Series::X => {
            let (k, i) = (ix[0], ix[1]);
            xy(1, 0, 4) + xy(1, k, 3) + xy(1, 2 * k, 2) + xy(1, 4 * k + i, 0)
        }
        Series::W => {
            let j = ix[0] / 12;
            if ix[0] % 12 == 0 {
                xy(1, 0, 4) + xy(1, 4 * j + 1, 0)
            } else {
                xy(1, 0, 4) + xy(1, 3 * j + 1, 1)
            }
        }
        Series::Omp => xy(1, ix[0], 0) + xy(1, 0, ix[0]),
        Series::Sqh => xy(1, ix[0], 0) + xy(1, 0, ix[1]),
        Series::Cuspfree => cuspfree_poly(ix[0], ix[1]),
        Series::Composite => {
            return Err(Error::Domain("composite types have no normal form".into()))
        }
    };
    let diagram = NewtonDiagram::of_polynomial(&poly)?;
    Ok(NormalForm { poly, diagram })
}

/// Candidate names whose subscript formula gives Milnor number `mu`.
fn candidates(mu: u32) -> Vec<TypeName> {
    let mut out = Vec::new();
    for (s, k) in [(Series::A, mu), (Series::D, mu), (Series::E, mu)] {
        out.push(TypeName {
            series: s,
            indices: vec![k],
        });
    }
    for k in 1..=(mu + 2) / 6 {
        if let Some(i) = (mu + 2).checked_sub(6 * k) {
            out.push(TypeName::j(k, i));
        }
    }
    out.push(TypeName::z(mu));
    for k in 1..=(mu + 3) / 12 {
        if let Some(i) = (mu + 3).checked_sub(12 * k) {
            out.push(TypeName::x(k, i));
        }
    }
    out.push(TypeName::w(mu));
    if let Some(m) = (2..=mu + 1).find(|m| (m - 1) * (m - 1) == mu) {
        out.push(TypeName::omp(m));
    }
    for p in 2..=mu + 1 {
        if mu % (p - 1) == 0 {
            let q = mu / (p - 1) + 1;
            if q >= p {
                out.push(TypeName::sqh(p, q));
            }
        }
    }
    for p in 2..=mu + 1 {
        for r in 1..=mu {
            if (p + r - 1).pow(2) + p - 1 == mu {
                out.push(TypeName::cuspfree(p, r));
            }
        }
    }
    out.retain(|n| n.validate().is_ok());
    out
}

/// All catalog names whose normal-form diagram is `d` up to swap. Names from
/// the A–W series come first and shadow the omp/sqh/cuspfree families.
pub fn recognize(d: &NewtonDiagram) -> Vec<TypeName> {
    let Ok(mu) = d.newton_number() else {
        return Vec::new();
    };
    let matching: Vec<TypeName> = candidates(mu)
        .into_iter()
        .filter(|n| normal_form(n).is_ok_and(|nf| nf.diagram.same_type(d)))
        .collect();
    let mut out: Vec<TypeName> = if matching.iter().any(TypeName::is_aglv) {
        matching.into_iter().filter(TypeName::is_aglv).collect()
    } else {
        matching
    };
    // J_{1,i} is D_{4+i} under another name.
    if out.iter().any(|n| n.series == Series::D) {
        out.retain(|n| !(n.series == Series::J && n.indices[0] == 1));
    }
    out
}

/// Names, or the diagram with its invariants when nothing matches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recognition {
    pub names: Vec<TypeName>,
    pub anonymous: Option<Anonymous>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anonymous {
    pub diagram: NewtonDiagram,
    pub invariants: InvariantRecord,
}

pub fn describe(d: &NewtonDiagram) -> Result<Recognition> {
    let names = recognize(d);
    let anonymous = if names.is_empty() {
        Some(Anonymous {
            diagram: d.clone(),
            invariants: InvariantRecord::of_diagram(d)?,
        })
    } else {
        None
    };
    Ok(Recognition { names, anonymous })
}

/// Every AGLV name in the round-trip ranges plus small family members.
pub fn enumerate() -> Vec<TypeName> {
    let mut out: Vec<TypeName> = (1..=13).map(TypeName::a).collect();
    out.extend((4..=13).map(TypeName::d));
    out.extend([6, 7, 8, 12, 13, 14, 18, 19].map(TypeName::e));
    for k in 1..=3 {
        for i in 0..=3 {
            out.push(TypeName::j(k, i));
            out.push(TypeName::x(k, i));
        }
    }
    out.extend([11, 12, 13].map(TypeName::z));
    out.extend([12, 13].map(TypeName::w));
    out.extend((2..=8).map(TypeName::omp));
    out
}

pub fn is_catalog_nnd(name: &TypeName) -> Result<bool> {
    let nf = normal_form(name)?;
    Ok(nnd_check(&nf.poly, &nf.diagram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::milnor_local;

    fn t(s: &str) -> TypeName {
        s.parse().unwrap()
    }

    fn dg(v: &[(u32, u32)]) -> NewtonDiagram {
        NewtonDiagram::new(v.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        for s in [
            "A3",
            "D4",
            "E7",
            "J2_0",
            "X1_2",
            "Z13",
            "W12",
            "omp(4)",
            "sqh(3,4)",
            "cuspfree(2,1)",
        ] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(t("J10"), TypeName::j(2, 0));
        assert_eq!(t("X9"), TypeName::x(1, 0));
        assert!("E9".parse::<TypeName>().is_err());
        assert!("D3".parse::<TypeName>().is_err());
        assert!("Q7".parse::<TypeName>().is_err());
        assert!("sqh(4,3)".parse::<TypeName>().is_err());
        let j: TypeName = serde_json::from_str("\"J2_1\"").unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), "\"J2_1\"");
    }

    #[test]
    fn listed_normal_forms() {
        assert_eq!(
            normal_form(&t("A3")).unwrap().poly,
            "y^2 + x^4".parse().unwrap()
        );
        assert_eq!(
            normal_form(&t("A3")).unwrap().diagram,
            dg(&[(0, 2), (4, 0)])
        );
        assert_eq!(
            normal_form(&t("Z13")).unwrap().poly,
            "y^3*x + x^6".parse().unwrap()
        );
        assert_eq!(
            normal_form(&t("X1_2")).unwrap().poly,
            "y^4 + y^3*x + y^2*x^2 + x^6".parse().unwrap()
        );
        assert_eq!(
            normal_form(&t("E7")).unwrap().poly,
            "y^3 + y*x^3".parse().unwrap()
        );
        assert_eq!(
            normal_form(&t("W13")).unwrap().poly,
            "y^4 + y*x^4".parse().unwrap()
        );
        assert_eq!(
            normal_form(&t("Z11")).unwrap().poly,
            "y^3*x + x^5".parse().unwrap()
        );
        assert_eq!(
            normal_form(&t("Z12")).unwrap().poly,
            "y^3*x + y*x^4".parse().unwrap()
        );
    }

    #[test]
    fn recognition_examples() {
        assert_eq!(recognize(&dg(&[(0, 2), (4, 0)])), vec![TypeName::a(3)]);
        assert!(recognize(&dg(&[(0, 3), (2, 2), (6, 0)])).contains(&TypeName::j(2, 0)));
        assert!(recognize(&dg(&[(0, 5), (2, 1), (3, 0)])).contains(&TypeName::d(6)));
        // (mult 3, μ 11, r 3) twice, with different diagrams.
        let x12 = recognize(&normal_form(&t("X1_2")).unwrap().diagram);
        let j21 = recognize(&normal_form(&t("J2_1")).unwrap().diagram);
        assert!(x12.contains(&t("X1_2")) && !x12.contains(&t("J2_1")));
        assert!(j21.contains(&t("J2_1")) && !j21.contains(&t("X1_2")));
        assert_eq!(
            recognize(&dg(&[(0, 5), (5, 0)])),
            vec![TypeName::omp(5), TypeName::sqh(5, 5)]
        );
        let anon = describe(&dg(&[(0, 7), (3, 1), (4, 0)])).unwrap();
        assert!(anon.names.is_empty());
        assert_eq!(anon.anonymous.unwrap().invariants.mu(), 15);
    }

    #[test]
    fn round_trip_and_nnd() {
        for n in enumerate() {
            let nf = normal_form(&n).unwrap();
            assert!(nnd_check(&nf.poly, &nf.diagram), "{n} degenerate");
            let found = recognize(&nf.diagram);
            let alias = n.series() == Series::J && n.indices()[0] == 1;
            let shadowed = (alias || !n.is_aglv()) && found.iter().any(TypeName::is_aglv);
            assert!(found.contains(&n) || shadowed, "{n} → {found:?}");
            assert_eq!(nf.diagram.newton_number().ok(), n.mu(), "{n}");
        }
    }

    #[test]
    fn subscript_is_mu() {
        for s in ["A5", "D7", "E6", "E7", "E8", "J10", "X9", "Z13", "W12"] {
            let n = t(s);
            let nf = normal_form(&n).unwrap();
            let want = if s == "J10" {
                10
            } else if s == "X9" {
                9
            } else {
                s[1..].parse().unwrap()
            };
            assert_eq!(nf.diagram.newton_number(), Ok(want), "{s}");
            assert_eq!(milnor_local(&nf.poly), Ok(want), "{s}");
        }
    }

    #[test]
    fn cuspfree_table_mu() {
        for p in 2..5 {
            for r in 1..4 {
                let n = TypeName::cuspfree(p, r);
                let nf = normal_form(&n).unwrap();
                assert_eq!(nf.diagram, dg(&[(0, p + r + 1), (p, r), (p + r, 0)]));
                assert_eq!(milnor_local(&nf.poly).ok(), n.mu());
            }
        }
    }
}
