//! Buchberger's algorithm with the sugar strategy, the Gebauer–Möller
//! pair update and a final inter-reduction.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::monomial::{Monomial, MonomialOrder, OrderKey, Var};
use super::poly::Polynomial;
use super::rational::Rational;

fn add_keys(a: &OrderKey, b: &OrderKey) -> OrderKey {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Polynomial as a descending term list in a fixed order.
#[derive(Clone, Debug)]
struct OPoly {
    terms: Vec<(OrderKey, Rational)>,
    lm: Monomial,
    sugar: u32,
}

impl OPoly {
    fn from_map(
        map: BTreeMap<OrderKey, Rational>,
        order: MonomialOrder,
        sugar: u32,
    ) -> Option<Self> {
        let mut terms: Vec<(OrderKey, Rational)> = map.into_iter().rev().collect();
        let (k, c) = terms.first()?.clone();
        let inv = Rational::one() / c;
        for t in terms.iter_mut() {
            t.1 *= &inv;
        }
        Some(OPoly {
            lm: order.monomial(&k),
            terms,
            sugar,
        })
    }

    fn to_poly(&self, order: MonomialOrder) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(k, c)| (order.monomial(k), c.clone())),
        )
    }
}

fn to_map(p: &Polynomial, order: MonomialOrder) -> BTreeMap<OrderKey, Rational> {
    p.terms().map(|(m, c)| (order.key(m), c.clone())).collect()
}

/// Terms of total degree `>= trunc` are discarded.
#[derive(Clone, Copy)]
struct Ctx {
    order: MonomialOrder,
    trunc: u32,
}

impl Ctx {
    fn keep(&self, k: &OrderKey) -> bool {
        self.trunc == u32::MAX || self.order.monomial(k).degree() < self.trunc
    }

    fn to_map(&self, p: &Polynomial) -> BTreeMap<OrderKey, Rational> {
        p.terms()
            .map(|(m, c)| (self.order.key(m), c.clone()))
            .filter(|(k, _)| self.keep(k))
            .collect()
    }
}

fn sub_multiple(
    ctx: Ctx,
    f: &mut BTreeMap<OrderKey, Rational>,
    g: &OPoly,
    shift: &OrderKey,
    c: &Rational,
) {
    for (k, v) in g.terms.iter().skip(1) {
        let key = add_keys(k, shift);
        if !ctx.keep(&key) {
            continue;
        }
        let delta = v * c;
        let zero = match f.get_mut(&key) {
            Some(e) => {
                *e -= delta;
                e.is_zero()
            }
            None => {
                f.insert(key, -delta);
                false
            }
        };
        if zero {
            f.remove(&key);
        }
    }
}

/// Full reduction of `f` by `basis` (only entries flagged active).
fn reduce(
    mut f: BTreeMap<OrderKey, Rational>,
    basis: &[OPoly],
    active: &[bool],
    ctx: Ctx,
) -> BTreeMap<OrderKey, Rational> {
    let order = ctx.order;
    let mut rest = BTreeMap::new();
    while let Some((k, c)) = f.pop_last() {
        let m = order.monomial(&k);
        let reducer = basis
            .iter()
            .enumerate()
            .find(|(i, g)| active[*i] && g.lm.divides(&m));
        match reducer {
            Some((_, g)) => {
                let shift = order.key(&g.lm.quotient_of(&m));
                sub_multiple(ctx, &mut f, g, &shift, &c);
            }
            None => {
                rest.insert(k, c);
            }
        }
    }
    rest
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn make_pair(basis: &[OPoly], i: usize, j: usize) -> Pair {
    let (a, b) = (&basis[i], &basis[j]);
    let lcm = a.lm.lcm(&b.lm);
    let sa = a.sugar + lcm.degree() - a.lm.degree();
    let sb = b.sugar + lcm.degree() - b.lm.degree();
    Pair {
        i,
        j,
        lcm,
        sugar: sa.max(sb),
    }
}

fn update(basis: &[OPoly], active: &mut [bool], pairs: &mut Vec<Pair>, h: usize) {
    let lh = basis[h].lm;
    let mut c: Vec<Pair> = (0..h)
        .filter(|&g| active[g])
        .map(|g| make_pair(basis, g, h))
        .collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p) = c.pop() {
        let coprime = basis[p.i].lm.coprime(&lh);
        let dominated = c.iter().chain(d.iter()).any(|o| o.lcm.divides(&p.lcm));
        if coprime || !dominated {
            d.push(p);
        }
    }
    let e: Vec<Pair> = d
        .into_iter()
        .filter(|p| !basis[p.i].lm.coprime(&lh))
        .collect();
    pairs.retain(|p| {
        !(lh.divides(&p.lcm) && basis[p.i].lm.lcm(&lh) != p.lcm && basis[p.j].lm.lcm(&lh) != p.lcm)
    });
    pairs.extend(e);
    for g in 0..h {
        if active[g] && lh.divides(&basis[g].lm) {
            active[g] = false;
        }
    }
    active[h] = true;
}

/// Reduced Gröbner basis, monic, sorted by ascending leading monomial.
pub fn buchberger(generators: &[Polynomial], order: MonomialOrder) -> Vec<Polynomial> {
    assert!(
        order != MonomialOrder::NegDegRevLex,
        "local orders need a truncation degree"
    );
    run(
        generators,
        Ctx {
            order,
            trunc: u32::MAX,
        },
    )
}

/// Standard basis of the ideal generated in ℚ[x, y, ε] / m^n, with m the
/// maximal ideal at the origin, for the local degree order. Sorted by
/// leading monomial, largest first.
pub fn local_standard_basis(generators: &[Polynomial], n: u32) -> Vec<Polynomial> {
    let mut out = run(
        generators,
        Ctx {
            order: MonomialOrder::NegDegRevLex,
            trunc: n,
        },
    );
    out.reverse();
    out
}

/// dim ℚ[x, y] / (I + m^n), counted from a local standard basis.
pub fn local_colength(generators: &[Polynomial], n: u32) -> usize {
    let g = local_standard_basis(generators, n);
    let lms: Vec<Monomial> = g
        .iter()
        .filter_map(|p| p.leading(MonomialOrder::NegDegRevLex))
        .map(|(m, _)| m)
        .collect();
    let mut count = 0;
    for d in 0..n {
        for a in 0..=d {
            let m = Monomial::xy(a, d - a);
            if !lms.iter().any(|l| l.divides(&m)) {
                count += 1;
            }
        }
    }
    count
}

fn run(generators: &[Polynomial], ctx: Ctx) -> Vec<Polynomial> {
    let order = ctx.order;
    let mut basis: Vec<OPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut gens: Vec<&Polynomial> = generators.iter().filter(|g| !g.is_zero()).collect();
    gens.sort_by_key(|g| g.total_degree().unwrap_or(0));
    for g in gens {
        let sugar = g.total_degree().unwrap_or(0);
        let r = reduce(ctx.to_map(g), &basis, &active, ctx);
        if let Some(p) = OPoly::from_map(r, order, sugar) {
            basis.push(p);
            active.push(false);
            let h = basis.len() - 1;
            update(&basis, &mut active, &mut pairs, h);
        }
    }
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.sugar
                    .cmp(&pb.sugar)
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
            })
            .expect("nonempty");
        let p = pairs.swap_remove(best);
        if p.lcm.degree() >= ctx.trunc {
            continue;
        }
        let (f, g) = (&basis[p.i], &basis[p.j]);
        let mut s = BTreeMap::new();
        let sf = order.key(&f.lm.quotient_of(&p.lcm));
        let sg = order.key(&g.lm.quotient_of(&p.lcm));
        for (k, c) in f.terms.iter().skip(1) {
            let key = add_keys(k, &sf);
            if ctx.keep(&key) {
                s.insert(key, c.clone());
            }
        }
        sub_multiple(ctx, &mut s, g, &sg, &Rational::one());
        let r = reduce(s, &basis, &active, ctx);
        if let Some(h) = OPoly::from_map(r, order, p.sugar) {
            basis.push(h);
            active.push(false);
            let hi = basis.len() - 1;
            update(&basis, &mut active, &mut pairs, hi);
        }
    }
    // The active set is a minimal basis; inter-reduce tails.
    let idx: Vec<usize> = (0..basis.len()).filter(|&i| active[i]).collect();
    let mut out = Vec::with_capacity(idx.len());
    for &i in &idx {
        let mut others = active.clone();
        others[i] = false;
        let head = basis[i].terms[0].clone();
        let tail: BTreeMap<OrderKey, Rational> = basis[i].terms.iter().skip(1).cloned().collect();
        let mut r = reduce(tail, &basis, &others, ctx);
        r.insert(head.0, head.1);
        out.push(Polynomial::from_terms(
            r.into_iter().map(|(k, c)| (order.monomial(&k), c)),
        ));
    }
    out.sort_by(|a, b| {
        let la = a.leading(order).unwrap().0;
        let lb = b.leading(order).unwrap().0;
        order.cmp(&la, &lb)
    });
    out
}

/// Normal form of `f` modulo a Gröbner basis.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let ob: Vec<OPoly> = basis
        .iter()
        .filter_map(|g| OPoly::from_map(to_map(g, order), order, 0))
        .collect();
    let active = vec![true; ob.len()];
    let ctx = Ctx {
        order,
        trunc: u32::MAX,
    };
    let r = reduce(ctx.to_map(f), &ob, &active, ctx);
    let tmp = OPoly {
        terms: r.into_iter().rev().collect(),
        lm: Monomial::ONE,
        sugar: 0,
    };
    tmp.to_poly(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardCount {
    Finite(usize),
    Infinite,
}

impl StandardCount {
    pub fn finite(self) -> Option<usize> {
        match self {
            StandardCount::Finite(n) => Some(n),
            StandardCount::Infinite => None,
        }
    }
}

/// Number of monomials outside the leading-term ideal. The ambient ring is
/// ℚ[x, y], extended by ε when some basis element involves it.
pub fn standard_monomial_count(basis: &[Polynomial], order: MonomialOrder) -> StandardCount {
    let lms: Vec<Monomial> = basis
        .iter()
        .filter_map(|g| g.leading(order))
        .map(|(m, _)| m)
        .collect();
    if lms.iter().any(|m| m.is_one()) {
        return StandardCount::Finite(0);
    }
    let with_e = basis.iter().any(|g| g.uses(Var::E));
    let vars: Vec<usize> = if with_e { vec![0, 1, 2] } else { vec![0, 1] };
    let mut bound = [1u32; 3];
    for &v in &vars {
        let pure = lms
            .iter()
            .filter(|m| (0..3).all(|i| i == v || m.0[i] == 0))
            .map(|m| m.0[v])
            .min();
        match pure {
            Some(k) => bound[v] = k,
            None => return StandardCount::Infinite,
        }
    }
    let mut count = 0;
    for a in 0..bound[0] {
        for b in 0..bound[1] {
            for c in 0..bound[2] {
                let m = Monomial::new(a, b, c);
                if !lms.iter().any(|l| l.divides(&m)) {
                    count += 1;
                }
            }
        }
    }
    StandardCount::Finite(count)
}
