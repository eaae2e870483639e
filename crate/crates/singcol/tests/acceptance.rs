//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use singcol::catalog::{normal_form, recognize, TypeName};
use singcol::collision::{
    bound_check, collide_omp_omp, cuspfree_omp_checked, multiplicity_attained, omp_omp_checked,
    sqh_omp_checked, CollisionData, CollisionResult, CuspVariant, Profile,
};
use singcol::error::Error;
use singcol::flatlimit::{generic_member, limit_for, verify_collision, Setup};
use singcol::invariants::{milnor_local, records_constructed, records_rejected, InvariantRecord};
use singcol::newton::NewtonDiagram;
use singcol::trees::{delta_const_collide, random_tree, tree_invariants, ResolutionTree};

// Every comparison below is on exact integers or exact diagrams.
const EXACT: i64 = 0;
const BUDGET_OMP: Duration = Duration::from_secs(180);
const BUDGET_CUSP: Duration = Duration::from_secs(300);
const BUDGET_ORACLE: Duration = Duration::from_secs(120);
const SEED: u64 = 1;
const GLUE_CASES: usize = 100;
const ORACLE_MIN: usize = 20;

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

fn t(s: &str) -> TypeName {
    s.parse().unwrap()
}

fn dg(v: &[(u32, u32)]) -> NewtonDiagram {
    NewtonDiagram::new(v.to_vec()).unwrap()
}

fn diff(a: u32, b: u32) -> i64 {
    (a as i64 - b as i64).abs()
}

/// Results gathered for the bound suite, with the input types.
#[derive(Default)]
struct Produced {
    items: Vec<(TypeName, TypeName, CollisionResult)>,
}

impl Produced {
    fn add(&mut self, x: &TypeName, y: &TypeName, r: &CollisionResult) {
        self.items.push((x.clone(), y.clone(), r.clone()));
    }
}

fn criterion_1(out: &mut Produced) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for p in 1..=5u32 {
        for q in 1..=p {
            let (pred, check) = omp_omp_checked(p, q).unwrap();
            let (x, y) = (TypeName::omp(p + 1), TypeName::omp(q + 1));
            out.add(&x, &y, &pred);
            let expected =
                NewtonDiagram::of_support([(0, p + q + 2), (q + 1, p - q), (p + 1, 0)]).unwrap();
            let setup = Setup::new(x, y, CollisionData::default());
            let (_, lim) = limit_for(&setup, None).unwrap();
            let st = lim.staircase().unwrap();
            let f = generic_member(&lim, SEED, 9).unwrap();
            let mu = milnor_local(&f).unwrap();
            let nn = st.newton_number().unwrap();
            let want = p * p + q * q + q;
            let ok = st.equal_up_to_swap(&expected)
                && pred.diagram == expected
                && diff(mu, want) == EXACT
                && diff(nn, want) == EXACT
                && check.as_ref().is_some_and(|c| c.matches());
            if !ok {
                bad.push(format!(
                    "p={p},q={q}: staircase {st}, μ {mu}, Newton {nn}, want {want}"
                ));
            }
        }
    }
    let el = start.elapsed();
    let pass = bad.is_empty() && el <= BUDGET_OMP;
    let mut o = Outcome::new(pass, format!("OMP+OMP 15 cells, {:.1}s", el.as_secs_f64()));
    for b in bad {
        o = o.note(b);
    }
    o
}

fn criterion_2(out: &mut Produced) -> Outcome {
    let cases = [
        ("A1", "A1", "A3"),
        ("D4", "A1", "D6"),
        ("X9", "A1", "X1_2"),
        ("D4", "D4", "J10"),
    ];
    let mut bad = Vec::new();
    for (x, y, want) in cases {
        let (x, y) = (t(x), t(y));
        let setup = Setup::new(x.clone(), y.clone(), CollisionData::default());
        let (_, lim) = limit_for(&setup, None).unwrap();
        let names = recognize(&lim.staircase().unwrap());
        if !names.contains(&t(want)) {
            bad.push(format!(
                "{x}+{y}: limit recognized as {names:?}, want {want}"
            ));
        }
    }
    let (x, y) = (t("X9"), t("D4"));
    let setup = Setup::new(x.clone(), y.clone(), CollisionData::default());
    let (_, lim) = limit_for(&setup, None).unwrap();
    let st = lim.staircase().unwrap();
    let mu = st.newton_number().unwrap();
    let pred = collide_omp_omp(3, 2).unwrap();
    out.add(&x, &y, &pred);
    if diff(mu, 15) != EXACT || pred.invariants.mu() != 15 {
        bad.push(format!("X9+D4: μ {mu}, want 15"));
    }
    let mut o = Outcome::new(
        bad.is_empty(),
        "A1+A1, D4+A1, X9+A1, D4+D4 named from the limit",
    );
    o = o.note(format!(
        "X9+D4: limit {st}, μ {mu}; listed as Z13 (μ 13), flags {:?}",
        pred.flags
    ));
    for b in bad {
        o = o.note(b);
    }
    o
}

fn criterion_3(out: &mut Produced) -> Outcome {
    let (x, y) = (t("A2"), t("A1"));
    let mut bad = Vec::new();
    for (data, want, name) in [
        (CollisionData::l_eq_lx(), dg(&[(0, 2), (5, 0)]), "A4"),
        (
            CollisionData::default(),
            dg(&[(0, 4), (2, 1), (3, 0)]),
            "D5",
        ),
    ] {
        let pred = sqh_omp_checked(CuspVariant::Cusp, 2, 1, &data).unwrap().0;
        out.add(&x, &y, &pred);
        let setup = Setup::new(x.clone(), y.clone(), data);
        let (_, lim) = limit_for(&setup, None).unwrap();
        let st = lim.staircase().unwrap();
        if !(st.equal_up_to_swap(&want) && pred.diagram.equal_up_to_swap(&want)) {
            bad.push(format!(
                "{data}: limit {st}, rule {}, want {want}",
                pred.diagram
            ));
        }
        if !recognize(&st).contains(&t(name)) {
            bad.push(format!("{data}: limit {st} is not {name}"));
        }
    }
    let mut o = Outcome::new(bad.is_empty(), "A2+A1: A4 when l=lx, D5 when l!=lx");
    for b in bad {
        o = o.note(b);
    }
    o
}

fn criterion_4(out: &mut Produced) -> Outcome {
    let start = Instant::now();
    let (mut formula_bad, mut lab_bad, mut lab_runs) = (Vec::new(), Vec::new(), 0);
    for p in 2..=6u32 {
        for q in 1..p {
            for data in [CollisionData::default(), CollisionData::l_eq_lx()] {
                let (pred, check) = sqh_omp_checked(CuspVariant::Cusp, p, q, &data).unwrap();
                let (x, y) = (TypeName::sqh(p, p + 1), TypeName::omp(q + 1));
                out.add(&x, &y, &pred);
                let check = check.unwrap();
                if !check.matches() {
                    formula_bad.extend(
                        check
                            .mismatches()
                            .into_iter()
                            .map(|m| format!("p={p},q={q}: {m}")),
                    );
                }
                if !data.l_eq_lx || p >= q + 2 {
                    lab_runs += 1;
                    let rep = verify_collision(&pred, &Setup::new(x, y, data), None, SEED).unwrap();
                    if !rep.pass() {
                        lab_bad.push(format!("p={p},q={q},{data}: {:?}", rep.checks));
                    }
                }
            }
        }
    }
    let el = start.elapsed();
    let pass = formula_bad.is_empty() && lab_bad.is_empty() && el <= BUDGET_CUSP;
    let mut o = Outcome::new(
        pass,
        format!(
            "cusp x^p+y^(p+1), 2≤p≤6: {} formula mismatches, {lab_runs} lab runs with {} failures, {:.1}s",
            formula_bad.len(),
            lab_bad.len(),
            el.as_secs_f64()
        ),
    );
    for b in formula_bad.into_iter().chain(lab_bad) {
        o = o.note(b);
    }
    o
}

fn criterion_5(out: &mut Produced) -> Outcome {
    let (mut cells, mut skipped, mut mismatched, mut unflagged) = (0, 0, Vec::new(), Vec::new());
    for p in 2..=4u32 {
        for r in 1..=3u32 {
            for q in 1..=p + r {
                for data in [CollisionData::default(), CollisionData::l_eq_lx()] {
                    let (pred, check) = match cuspfree_omp_checked(p, r, q, &data) {
                        Ok(v) => v,
                        Err(Error::Unsupported(_)) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => panic!("p={p},r={r},q={q},{data}: {e}"),
                    };
                    cells += 1;
                    out.add(&TypeName::cuspfree(p, r), &TypeName::omp(q + 1), &pred);
                    let check = check.unwrap();
                    for m in check.mismatches() {
                        if !pred.flags.contains(&m) {
                            unflagged.push(format!("p={p},r={r},q={q}: {m}"));
                        }
                        mismatched.push(format!("p={p},r={r},q={q},{data}: {m}"));
                    }
                }
            }
        }
    }
    let mut o = Outcome::new(
        unflagged.is_empty(),
        format!(
            "cusp∪free, p≤4, r≤3, q≤p+r: {cells} cells, {} flagged mismatches, {} unflagged, {skipped} outside every case",
            mismatched.len(),
            unflagged.len()
        ),
    );
    for m in mismatched.into_iter().chain(unflagged) {
        o = o.note(m);
    }
    o
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    let (mut done, mut seed) = (0, 0u64);
    while done < GLUE_CASES && seed < 100 * GLUE_CASES as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seed += 1;
        let (tx, ty) = (random_tree(&mut rng, 6, 3), random_tree(&mut rng, 4, 2));
        match delta_const_collide(&tx, &ty) {
            Ok((_, _, rep)) => {
                done += 1;
                if !rep.all_pass() {
                    bad.push(format!("seed {}: {rep:?}", seed - 1));
                }
            }
            Err(Error::Precondition(_) | Error::OrderConvention(_)) => {}
            Err(e) => bad.push(format!("seed {}: {e}", seed - 1)),
        }
    }
    for p in 1..=5u32 {
        for q in 1..=p {
            let (_, f, rep) =
                delta_const_collide(&ResolutionTree::omp(p + 1), &ResolutionTree::omp(q + 1))
                    .unwrap();
            let engine = collide_omp_omp(p, q).unwrap().invariants;
            if !rep.all_pass() || f != engine {
                bad.push(format!("omp p={p},q={q}: tree {f:?} vs engine {engine:?}"));
            }
        }
    }
    let _ = tree_invariants(&ResolutionTree::j10());
    let mut o = Outcome::new(
        bad.is_empty() && done == GLUE_CASES,
        format!("{done} random glue cases, 15 OMP pairs against the engine"),
    );
    for b in bad {
        o = o.note(b);
    }
    o
}

fn criterion_7(out: &Produced) -> Outcome {
    let mut counts = [0usize; 3];
    let mut violations = Vec::new();
    let mut scoped = 0;
    for (x, y, r) in &out.items {
        let (px, py) = (Profile::of_type(x).unwrap(), Profile::of_type(y).unwrap());
        let (px, py) = if px.invariants.mult() >= py.invariants.mult() {
            (px, py)
        } else {
            (py, px)
        };
        let rep = bound_check(&px, &py, &r.invariants);
        for (i, id) in ["multiplicity", "le-ramanujam", "kappa"].iter().enumerate() {
            let item = rep.item(id).unwrap();
            if !item.pass {
                counts[i] += 1;
                violations.push(format!(
                    "{x}+{y} -> {} [{}]: {id}: {}",
                    r.diagram, r.rule_id, item.detail
                ));
                // l off every non-free tangent, where the multiplicity may jump
                if *id == "multiplicity" && r.rule_id.contains("l!=lx") {
                    scoped += 1;
                }
            }
        }
    }
    let mut pairs: Vec<(TypeName, TypeName)> = out
        .items
        .iter()
        .map(|(x, y, _)| (x.clone(), y.clone()))
        .collect();
    pairs.sort();
    pairs.dedup();
    let mut attained_bad = Vec::new();
    for (x, y) in &pairs {
        let recs: Vec<InvariantRecord> = out
            .items
            .iter()
            .filter(|(a, b, _)| a == x && b == y)
            .map(|(_, _, r)| r.invariants)
            .collect();
        let (px, py) = (Profile::of_type(x).unwrap(), Profile::of_type(y).unwrap());
        let (px, py) = if px.invariants.mult() >= py.invariants.mult() {
            (px, py)
        } else {
            (py, px)
        };
        let item = multiplicity_attained(&px, &py, &recs);
        if !item.pass {
            attained_bad.push(format!("{x}+{y}: {}", item.detail));
        }
    }
    let total: usize = counts.iter().sum();
    let mut o = Outcome::new(
        total == 0,
        format!(
            "{} results: multiplicity {} violations, Lê-Ramanujam {}, κ {}",
            out.items.len(),
            counts[0],
            counts[1],
            counts[2]
        ),
    )
    .note(format!(
        "{scoped} of the {} multiplicity violations have l off every non-free tangent",
        counts[0]
    ))
    .note(format!(
        "existence form (some collision with mult = m_x) over {} input pairs: {} failures",
        pairs.len(),
        attained_bad.len()
    ));
    for v in violations.into_iter().chain(attained_bad) {
        o = o.note(v);
    }
    o
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut names: Vec<TypeName> = (1..=13).map(TypeName::a).collect();
    names.extend((4..=13).map(TypeName::d));
    names.extend([6, 7, 8].map(TypeName::e));
    names.extend(["J10", "X9", "X1_2", "Z11", "Z12", "Z13", "W12", "W13"].map(t));
    names.extend((2..=8).map(TypeName::omp));
    let mut bad = Vec::new();
    for n in &names {
        let nf = normal_form(n).unwrap();
        let nn = nf.diagram.newton_number().unwrap();
        let mu = milnor_local(&nf.poly).unwrap();
        if diff(nn, mu) != EXACT {
            bad.push(format!("{n}: Newton {nn} vs Milnor {mu}"));
        }
    }
    let el = start.elapsed();
    let mut o = Outcome::new(
        bad.is_empty() && names.len() >= ORACLE_MIN && el <= BUDGET_ORACLE,
        format!("{} normal forms, {:.1}s", names.len(), el.as_secs_f64()),
    );
    for b in bad {
        o = o.note(b);
    }
    o
}

fn criterion_9() -> Outcome {
    let (made, rejected) = (records_constructed(), records_rejected());
    Outcome::new(
        rejected == 0 && made > 0,
        format!("{made} records constructed in this run, {rejected} rejected by the identity hook"),
    )
}

fn main() {
    let mut produced = Produced::default();
    let runs: Vec<(u32, Outcome)> = vec![
        (1, criterion_1(&mut produced)),
        (2, criterion_2(&mut produced)),
        (3, criterion_3(&mut produced)),
        (4, criterion_4(&mut produced)),
        (5, criterion_5(&mut produced)),
        (6, criterion_6()),
        (7, criterion_7(&produced)),
        (8, criterion_8()),
        (9, criterion_9()),
    ];
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let mut failed = Vec::new();
    for (n, o) in &runs {
        println!(
            "{} criterion {n}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        );
        let limit = if verbose || !o.pass { usize::MAX } else { 3 };
        for note in o.notes.iter().take(limit) {
            println!("    {note}");
        }
        if !o.pass {
            failed.push(*n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
