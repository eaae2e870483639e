//! Dense univariate polynomials over ℚ, enough for square-freeness tests.

use num_traits::{One, Zero};

use super::rational::Rational;

/// Coefficients by ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Univariate(Vec<Rational>);

impl Univariate {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Univariate(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Univariate::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn rem(&self, d: &Univariate) -> Univariate {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd {
            let k = r.len() - 1;
            let c = &r[k] / &lead;
            if !c.is_zero() {
                for i in 0..=dd {
                    let t = &c * &d.0[i];
                    r[k - dd + i] -= t;
                }
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Univariate::new(r)
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            Some(l) => {
                let inv = Rational::one() / l;
                Univariate(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Univariate) -> Univariate {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// No repeated root over ℚ̄.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    fn u(c: &[i64]) -> Univariate {
        Univariate::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn gcd_of_products() {
        // (t-1)(t+2) and (t-1)(t-3)
        let a = u(&[-2, 1, 1]);
        let b = u(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), u(&[-1, 1]));
    }

    #[test]
    fn squarefree() {
        assert!(u(&[1, 0, 0, 0, 1]).is_squarefree());
        assert!(!u(&[1, 2, 1]).is_squarefree());
        assert!(u(&[5]).is_squarefree());
        assert!(!Univariate::default().is_squarefree());
    }
}
