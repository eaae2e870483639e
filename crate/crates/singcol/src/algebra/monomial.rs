use std::cmp::Ordering;
use std::fmt;

/// Variables of the fixed alphabet. `E` is the deformation parameter ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    E,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::E];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::E => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::E => "e",
        }
    }
}

/// x^a y^b ε^c. Zero exponents are simply absent factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(x: u32, y: u32, e: u32) -> Self {
        Monomial([x, y, e])
    }

    pub fn xy(a: u32, b: u32) -> Self {
        Monomial([a, b, 0])
    }

    pub fn var(v: Var) -> Self {
        let mut m = Monomial::ONE;
        m.0[v.index()] = 1;
        m
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn x(&self) -> u32 {
        self.0[0]
    }

    pub fn y(&self) -> u32 {
        self.0[1]
    }

    pub fn e(&self) -> u32 {
        self.0[2]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn xy_degree(&self) -> u32 {
        self.0[0] + self.0[1]
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] <= o.0[i])
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial([o.0[0] - self.0[0], o.0[1] - self.0[1], o.0[2] - self.0[2]])
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial([
            self.0[0].max(o.0[0]),
            self.0[1].max(o.0[1]),
            self.0[2].max(o.0[2]),
        ])
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] == 0 || o.0[i] == 0)
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0, 0, 0]
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in Var::ALL {
            let k = self.exp(v);
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), k)?;
            }
        }
        Ok(())
    }
}

/// Monomial orders on x > y > ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
    /// Degrevlex on (x, y), ties broken by the power of ε.
    EliminationEpsLast,
    /// Local degree order: lower degree is larger. Only meaningful modulo a
    /// power of the maximal ideal.
    NegDegRevLex,
}

pub type OrderKey = [i64; 3];

impl MonomialOrder {
    /// A key whose lexicographic order realises the monomial order.
    pub fn key(&self, m: &Monomial) -> OrderKey {
        let [x, y, e] = m.0.map(i64::from);
        match self {
            MonomialOrder::DegRevLex => [x + y + e, -e, -y],
            MonomialOrder::Lex => [x, y, e],
            MonomialOrder::EliminationEpsLast => [x + y, -y, e],
            MonomialOrder::NegDegRevLex => [-(x + y + e), -e, -y],
        }
    }

    pub fn monomial(&self, k: &OrderKey) -> Monomial {
        let m = match self {
            MonomialOrder::DegRevLex => [k[0] + k[1] + k[2], -k[2], -k[1]],
            MonomialOrder::Lex => *k,
            MonomialOrder::EliminationEpsLast => [k[0] + k[1], -k[1], k[2]],
            MonomialOrder::NegDegRevLex => [-k[0] + k[1] + k[2], -k[2], -k[1]],
        };
        Monomial(m.map(|v| v as u32))
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}
