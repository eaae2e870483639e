use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    buchberger, local_colength, standard_monomial_count, Monomial, MonomialOrder, Polynomial,
    Univariate, Var,
};
use crate::error::{Error, Result};
use crate::newton::{nnd_check, NewtonDiagram};

static CONSTRUCTED: AtomicU64 = AtomicU64::new(0);
static REJECTED: AtomicU64 = AtomicU64::new(0);

/// Number of records built so far in this process.
pub fn records_constructed() -> u64 {
    CONSTRUCTED.load(Ordering::Relaxed)
}

/// Number of constructor calls that violated an identity.
pub fn records_rejected() -> u64 {
    REJECTED.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RecordJson")]
pub struct InvariantRecord {
    mult: u32,
    mu: u32,
    r: u32,
    delta: u32,
    kappa: u32,
}

#[derive(Deserialize)]
struct RecordJson {
    mult: u32,
    mu: u32,
    r: u32,
    delta: u32,
    kappa: u32,
}

impl TryFrom<RecordJson> for InvariantRecord {
    type Error = Error;
    fn try_from(j: RecordJson) -> Result<Self> {
        let rec = InvariantRecord::new(j.mult, j.mu, j.r)?;
        if rec.delta != j.delta || rec.kappa != j.kappa {
            REJECTED.fetch_add(1, Ordering::Relaxed);
            return Err(Error::Internal(format!(
                "record (δ {}, κ {}) disagrees with derived (δ {}, κ {})",
                j.delta, j.kappa, rec.delta, rec.kappa
            )));
        }
        Ok(rec)
    }
}

impl InvariantRecord {
    /// δ and κ are derived; every identity is checked here.
    pub fn new(mult: u32, mu: u32, r: u32) -> Result<Self> {
        let reject = |msg: String| {
            REJECTED.fetch_add(1, Ordering::Relaxed);
            Err(Error::Internal(msg))
        };
        if mult == 0 || r == 0 {
            return reject(format!("mult {mult} and r {r} must be positive"));
        }
        if (mu + r - 1) % 2 != 0 {
            return reject(format!("μ + r − 1 = {} is odd", mu + r - 1));
        }
        if mult > mu + 1 {
            return reject(format!("mult {mult} exceeds μ + 1 = {}", mu + 1));
        }
        let delta = (mu + r - 1) / 2;
        let kappa = mu + mult - 1;
        let rec = InvariantRecord {
            mult,
            mu,
            r,
            delta,
            kappa,
        };
        if rec.mu + rec.r != 2 * rec.delta + 1 || rec.kappa + 1 != rec.mu + rec.mult {
            return reject(format!("identity failure in {rec:?}"));
        }
        CONSTRUCTED.fetch_add(1, Ordering::Relaxed);
        Ok(rec)
    }

    pub fn mult(&self) -> u32 {
        self.mult
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn of_diagram(d: &NewtonDiagram) -> Result<Self> {
        Self::new(
            d.multiplicity(),
            d.newton_number()?,
            d.generic_branch_count()?,
        )
    }

    /// μ by the Milnor-algebra oracle; the polynomial must be NND.
    pub fn of_polynomial(f: &Polynomial) -> Result<Self> {
        multiplicity(f)?;
        let d = NewtonDiagram::of_polynomial(f)?;
        if !nnd_check(f, &d) {
            return Err(Error::Degenerate(format!(
                "{f} is Newton-degenerate on {d}"
            )));
        }
        let r = d.generic_branch_count()?;
        let mu = milnor_local(f)?;
        Self::new(d.multiplicity(), mu, r)
    }
}

pub fn multiplicity(f: &Polynomial) -> Result<u32> {
    if f.uses(Var::E) {
        return Err(Error::Domain("germ must not involve ε".into()));
    }
    if f.is_zero() {
        return Err(Error::Domain("zero polynomial".into()));
    }
    if !f.coeff(&Monomial::ONE).is_zero() {
        return Err(Error::NotAGerm);
    }
    Ok(f.min_xy_degree().unwrap())
}

pub const DEFAULT_N_MAX: u32 = 40;

/// dim ℚ[x,y] / (f_x, f_y, m^N).
pub fn jacobian_colength(f: &Polynomial, n: u32) -> usize {
    let gens = [f.partial_derivative(Var::X), f.partial_derivative(Var::Y)];
    local_colength(&gens, n)
}

/// Same count through a global Gröbner basis of (f_x, f_y) + m^N. Slow once
/// N passes the determinacy range; kept as a cross-check.
pub fn jacobian_colength_global(f: &Polynomial, n: u32) -> usize {
    let mut gens = vec![
        f.partial_derivative(Var::X).truncate_xy(n - 1),
        f.partial_derivative(Var::Y).truncate_xy(n - 1),
    ];
    gens.extend((0..=n).map(|a| Polynomial::xy(a, n - a)));
    let o = MonomialOrder::DegRevLex;
    standard_monomial_count(&buchberger(&gens, o), o)
        .finite()
        .expect("m^N keeps the quotient finite")
}

pub fn milnor_local(f: &Polynomial) -> Result<u32> {
    milnor_local_with(f, DEFAULT_N_MAX)
}

/// Local Milnor number: colengths of (f_x, f_y) + m^N for N = mult + 2,
/// mult + 3, ... until two consecutive values agree. Equality at N and N + 1
/// gives m^N ⊆ J locally (Nakayama), so the value is exact.
pub fn milnor_local_with(f: &Polynomial, n_max: u32) -> Result<u32> {
    let m = multiplicity(f)?;
    let mut n = m + 2;
    let mut prev = jacobian_colength(f, n);
    while n < n_max {
        n += 1;
        let cur = jacobian_colength(f, n);
        if cur == prev {
            return Ok(cur as u32);
        }
        prev = cur;
    }
    Err(Error::NonIsolated(format!(
        "Milnor number of {f} did not stabilize by N = {n_max}"
    )))
}

/// Smooth branches not tangent to any other branch: simple lines of the
/// tangent cone.
pub fn free_branch_count(f: &Polynomial) -> Result<u32> {
    let m = multiplicity(f)?;
    let cone = f.initial_form();
    let coeffs: Vec<_> = (0..=m)
        .map(|i| cone.coeff(&Monomial::xy(i, m - i)))
        .collect();
    let g = Univariate::new(coeffs);
    let deficit = m as usize - g.degree().unwrap_or(0);
    let h = g.gcd(&g.derivative());
    let simple = distinct_roots(&g) - distinct_roots(&h) + usize::from(deficit == 1);
    Ok(simple as u32)
}

fn distinct_roots(g: &Univariate) -> usize {
    match g.degree() {
        None | Some(0) => 0,
        Some(d) => d - g.gcd(&g.derivative()).degree().unwrap_or(0),
    }
}
