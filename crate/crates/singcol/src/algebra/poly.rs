use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, MonomialOrder, Var};
use super::rational::{fmt_rational, q, Rational};
use crate::error::{Error, Result};

/// Sparse polynomial over ℚ in x, y, ε. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v))
    }

    pub fn xy(a: u32, b: u32) -> Self {
        Self::monomial(Monomial::xy(a, b))
    }

    /// Sum of `c * x^a * y^b` over integer triples.
    pub fn from_xy_terms(ts: &[(i64, u32, u32)]) -> Self {
        let mut p = Self::zero();
        for &(c, a, b) in ts {
            p.add_term(Monomial::xy(a, b), q(c));
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(m, c);
                false
            }
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Support projected to (x, y) exponents.
    pub fn xy_support(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = self.terms.keys().map(|m| (m.x(), m.y())).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn min_xy_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.xy_degree()).min()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn partial_derivative(&self, v: Var) -> Self {
        let i = v.index();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.0[i];
            if k == 0 {
                continue;
            }
            let mut n = *m;
            n.0[i] -= 1;
            out.add_term(n, c * q(i64::from(k)));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Simultaneous substitution; variables not in `map` are kept.
    pub fn substitute(&self, map: &[(Var, Polynomial)]) -> Self {
        let image = |v: Var| -> Polynomial {
            map.iter()
                .find(|(w, _)| *w == v)
                .map(|(_, p)| p.clone())
                .unwrap_or_else(|| Polynomial::var(v))
        };
        let imgs = [image(Var::X), image(Var::Y), image(Var::E)];
        let mut cache: [Vec<Polynomial>; 3] =
            [vec![Self::one()], vec![Self::one()], vec![Self::one()]];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for i in 0..3 {
                let k = m.0[i] as usize;
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap() * &imgs[i];
                    cache[i].push(next);
                }
                if k > 0 {
                    t = &t * &cache[i][k];
                }
            }
            out = out + t;
        }
        out
    }

    /// `point` is (x, y) or (x, y, ε).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let need = if self.uses(Var::E) { 3 } else { 2 };
        if point.len() != 2 && point.len() != 3 || point.len() < need {
            return Err(Error::Arity {
                expected: need,
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, p) in point.iter().enumerate() {
                let k = m.0[i];
                if k > 0 {
                    t *= num_traits::pow(p.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Drop every term whose (x, y)-degree exceeds `d`.
    pub fn truncate_xy(&self, d: u32) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.xy_degree() <= d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Product truncated at (x, y)-degree `d`.
    pub fn mul_truncated(&self, o: &Polynomial, d: u32) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            if m1.xy_degree() > d {
                continue;
            }
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                if m.xy_degree() <= d {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        out
    }

    /// Collect as a polynomial in (x, y) whose coefficients are ε-polynomials.
    pub fn eps_coefficients(&self) -> BTreeMap<(u32, u32), Vec<Rational>> {
        let mut out: BTreeMap<(u32, u32), Vec<Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = out.entry((m.x(), m.y())).or_default();
            let k = m.e() as usize;
            if v.len() <= k {
                v.resize(k + 1, Rational::zero());
            }
            v[k] += c;
        }
        out
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (*m, c.clone()))
    }

    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<(Monomial, Rational)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading(order) {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => Self::zero(),
        }
    }

    /// Lowest-degree homogeneous part in (x, y).
    pub fn initial_form(&self) -> Self {
        match self.min_xy_degree() {
            Some(d) => Polynomial {
                terms: self
                    .terms
                    .iter()
                    .filter(|(m, _)| m.xy_degree() == d)
                    .map(|(m, c)| (*m, c.clone()))
                    .collect(),
            },
            None => Self::zero(),
        }
    }

    /// Swap the roles of x and y.
    pub fn swap_xy(&self) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.y(), m.x(), m.e()), c.clone()))
                .collect(),
        }
    }

    /// Linear change (x, y) ↦ (a x + b y, c x + d y).
    pub fn linear_change(&self, m: [[Rational; 2]; 2]) -> Self {
        let lx = Polynomial::from_terms([
            (Monomial::xy(1, 0), m[0][0].clone()),
            (Monomial::xy(0, 1), m[0][1].clone()),
        ]);
        let ly = Polynomial::from_terms([
            (Monomial::xy(1, 0), m[1][0].clone()),
            (Monomial::xy(0, 1), m[1][1].clone()),
        ]);
        self.substitute(&[(Var::X, lx), (Var::Y, ly)])
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, o: Polynomial) -> Polynomial {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.clone() + o.clone()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, o: Polynomial) -> Polynomial {
        for (m, c) in o.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.clone() - o.clone()
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, o: Polynomial) -> Polynomial {
        &self * &o
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self
            .sorted_terms(MonomialOrder::DegRevLex)
            .iter()
            .enumerate()
        {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}
