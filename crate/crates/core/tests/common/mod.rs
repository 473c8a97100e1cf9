//! Brute-force oracles, random program generation and answer-set invariant
//! checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;

use asp_embed::eval::{
    ground_program, herbrand_base, is_model, reduct, violated_instances, AnswerSet,
    EvaluationLimits, Interpretation,
};
use asp_embed::syntax::{Atom, Program, Rule, Term};
use asp_embed::systems::{AnswerSets, Satisfiability};

pub fn int(t: &Term) -> i64 {
    t.as_integer().expect("integer term")
}

pub fn name(t: &Term) -> String {
    match t {
        Term::Symbol(s) => t.unquoted().unwrap_or_else(|| s.clone()),
        other => panic!("not a constant: {other}"),
    }
}

fn atoms_of<'a>(i: &'a Interpretation, pred: &'a str) -> impl Iterator<Item = &'a Atom> + 'a {
    i.iter().filter(move |a| a.predicate == pred)
}

// ---- 3-COL ---------------------------------------------------------------

pub type Coloring = BTreeSet<(i64, char)>;

/// Instance file, nodes, arcs, number of colorings.
pub type GraphCase<'a> = (&'a str, &'a [i64], &'a [(i64, i64)], usize);

/// Every proper 3-coloring of the graph, by trying all 3^n assignments.
pub fn colorings(nodes: &[i64], arcs: &[(i64, i64)]) -> BTreeSet<Coloring> {
    let colors = ['r', 'y', 'g'];
    let mut out = BTreeSet::new();
    let total = 3usize.pow(nodes.len() as u32);
    for code in 0..total {
        let mut c = BTreeMap::new();
        let mut rest = code;
        for &n in nodes {
            c.insert(n, colors[rest % 3]);
            rest /= 3;
        }
        if arcs.iter().all(|(x, y)| c[x] != c[y]) {
            out.insert(c.into_iter().collect());
        }
    }
    out
}

pub fn coloring_of(i: &Interpretation) -> Coloring {
    atoms_of(i, "color")
        .map(|a| (int(&a.terms[0]), name(&a.terms[1]).chars().next().unwrap()))
        .collect()
}

// ---- Ramsey --------------------------------------------------------------

/// Edge colorings of K_n (true = red) with no red triangle and no blue K4.
pub fn ramsey_colorings(n: i64) -> BTreeSet<BTreeSet<(i64, i64, bool)>> {
    let edges: Vec<(i64, i64)> = (1..=n)
        .flat_map(|x| (x + 1..=n).map(move |y| (x, y)))
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << edges.len()) {
        let red: BTreeMap<(i64, i64), bool> = edges
            .iter()
            .enumerate()
            .map(|(k, e)| (*e, mask >> k & 1 == 1))
            .collect();
        let all = |vs: &[i64], want: bool| {
            vs.iter()
                .enumerate()
                .all(|(i, a)| vs[i + 1..].iter().all(|b| red[&(*a, *b)] == want))
        };
        let nodes: Vec<i64> = (1..=n).collect();
        let mut ok = true;
        for (i, a) in nodes.iter().enumerate() {
            for (j, b) in nodes.iter().enumerate().skip(i + 1) {
                for (k, c) in nodes.iter().enumerate().skip(j + 1) {
                    if all(&[*a, *b, *c], true) {
                        ok = false;
                    }
                    for d in nodes.iter().skip(k + 1) {
                        if all(&[*a, *b, *c, *d], false) {
                            ok = false;
                        }
                    }
                }
            }
        }
        if ok {
            out.insert(red.into_iter().map(|((x, y), r)| (x, y, r)).collect());
        }
    }
    out
}

pub fn edge_coloring_of(i: &Interpretation) -> BTreeSet<(i64, i64, bool)> {
    i.iter()
        .filter(|a| a.predicate == "red" || a.predicate == "blue")
        .map(|a| (int(&a.terms[0]), int(&a.terms[1]), a.predicate == "red"))
        .collect()
}

// ---- toy sudoku ----------------------------------------------------------

pub type Grid = BTreeSet<(i64, i64, i64)>;

/// n x n grids over symbols 1..=n with distinct rows and columns that
/// agree with `given`.
pub fn latin_squares(n: i64, given: &[(i64, i64, i64)]) -> BTreeSet<Grid> {
    let cells: Vec<(i64, i64)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let mut out = BTreeSet::new();
    let total = (n as usize).pow(cells.len() as u32);
    for code in 0..total {
        let mut g = BTreeMap::new();
        let mut rest = code;
        for c in &cells {
            g.insert(*c, (rest % n as usize) as i64 + 1);
            rest /= n as usize;
        }
        let rows =
            (0..n).all(|x| (0..n).map(|y| g[&(x, y)]).collect::<BTreeSet<_>>().len() == n as usize);
        let cols =
            (0..n).all(|y| (0..n).map(|x| g[&(x, y)]).collect::<BTreeSet<_>>().len() == n as usize);
        if rows && cols && given.iter().all(|(x, y, v)| g[&(*x, *y)] == *v) {
            out.insert(g.into_iter().map(|((x, y), v)| (x, y, v)).collect());
        }
    }
    out
}

pub fn grid_of(i: &Interpretation) -> Grid {
    atoms_of(i, "cell")
        .map(|a| (int(&a.terms[0]), int(&a.terms[1]), int(&a.terms[2])))
        .collect()
}

// ---- workout plans -------------------------------------------------------

/// Activity, calories per minute, preference weight.
pub const ACTIVITIES: [(&str, i64, i64); 3] =
    [("ON_BICYCLE", 5, 3), ("WALKING", 2, 2), ("RUNNING", 11, 1)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    /// (activity, minutes) for every activity with a non-zero duration.
    pub steps: BTreeSet<(String, i64)>,
    pub calories: i64,
    pub minutes: i64,
    /// (level 3, level 2): preference weights, then minutes.
    pub cost: (i64, i64),
}

/// All 27 ways of giving each activity 0, 10 or 20 minutes.
pub fn all_plans() -> Vec<Plan> {
    let mut out = Vec::new();
    for code in 0..27 {
        let mut rest = code;
        let mut plan = Plan {
            steps: BTreeSet::new(),
            calories: 0,
            minutes: 0,
            cost: (0, 0),
        };
        for (act, rate, weight) in ACTIVITIES {
            let minutes = [0, 10, 20][rest % 3];
            rest /= 3;
            if minutes > 0 {
                plan.steps.insert((act.to_string(), minutes));
                plan.calories += rate * minutes;
                plan.minutes += minutes;
                plan.cost.0 += weight;
                plan.cost.1 += minutes;
            }
        }
        out.push(plan);
    }
    out
}

/// Plans reaching 200 calories, at most 300, within 20 minutes.
pub fn admissible_plans() -> Vec<Plan> {
    all_plans()
        .into_iter()
        .filter(|p| (200..=300).contains(&p.calories) && p.minutes <= 20)
        .collect()
}

pub fn plan_of(i: &Interpretation) -> BTreeSet<(String, i64)> {
    atoms_of(i, "activity_to_do")
        .map(|a| (name(&a.terms[0]), int(&a.terms[1])))
        .collect()
}

// ---- propositional brute force -------------------------------------------

/// Answer sets by definition: every subset of the Herbrand base that is a
/// model of the ground program and has no smaller model of its reduct.
pub fn brute_force_answer_sets(p: &Program) -> BTreeSet<Interpretation> {
    let limits = EvaluationLimits::default();
    let gp = ground_program(p, &limits).unwrap();
    let base: Vec<Atom> = herbrand_base(p, &limits).unwrap().into_iter().collect();
    assert!(base.len() <= 16, "base too large for brute force");
    let subset = |atoms: &[Atom], mask: u32| -> Interpretation {
        atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    };
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << base.len()) {
        let i = subset(&base, mask);
        if !is_model(&i, &gp) {
            continue;
        }
        let r = reduct(&gp, &i);
        let inside: Vec<Atom> = i.iter().cloned().collect();
        let full = (1u32 << inside.len()) - 1;
        let smaller = (0..full).any(|m| is_model(&subset(&inside, m), &r));
        if !smaller {
            out.insert(i);
        }
    }
    out
}

/// Minimal models of a positive program by enumeration.
pub fn brute_force_minimal_models(p: &Program) -> BTreeSet<Interpretation> {
    let limits = EvaluationLimits::default();
    let gp = ground_program(p, &limits).unwrap();
    let base: Vec<Atom> = herbrand_base(p, &limits).unwrap().into_iter().collect();
    let models: Vec<Interpretation> = (0u32..(1 << base.len()))
        .map(|mask| {
            base.iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect::<Interpretation>()
        })
        .filter(|i| is_model(i, &gp))
        .collect();
    models
        .iter()
        .filter(|m| !models.iter().any(|o| o != *m && o.is_subset(m)))
        .cloned()
        .collect()
}

pub struct GenConfig {
    pub propositions: &'static [&'static str],
    pub negation: bool,
    pub max_rules: usize,
}

/// At most 4 + 2 * 2 = 8 atoms with the default four propositions, 10 with
/// six.
pub const SIX: &[&str] = &["a", "b", "c", "d", "e", "f"];
pub const FOUR: &[&str] = &["a", "b", "c", "d"];

fn pick<'a, R: Rng>(rng: &mut R, xs: &[&'a str]) -> &'a str {
    xs[rng.gen_range(0..xs.len())]
}

/// A random safe program over the given propositions and the unary
/// predicates p and q with constants 1 and 2.
pub fn random_program<R: Rng>(rng: &mut R, cfg: &GenConfig) -> String {
    let ground: Vec<&str> = cfg
        .propositions
        .iter()
        .copied()
        .chain(["p(1)", "p(2)", "q(1)", "q(2)"])
        .collect();
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=cfg.max_rules) {
        let neg = |rng: &mut R| cfg.negation && rng.gen_bool(0.4);
        if rng.gen_bool(0.25) {
            let head = match rng.gen_range(0..4) {
                0 => String::new(),
                1 => "p(X)".to_string(),
                2 => "q(X)".to_string(),
                _ => "p(X) | q(X)".to_string(),
            };
            let mut body = vec![pick(rng, &["p(X)", "q(X)"]).to_string()];
            if rng.gen_bool(0.5) {
                let lit = pick(rng, &["p(X)", "q(X)", "a", "b"]);
                body.push(if neg(rng) {
                    format!("not {lit}")
                } else {
                    lit.to_string()
                });
            }
            rules.push(
                format!("{head} :- {}.", body.join(", "))
                    .trim_start()
                    .to_string(),
            );
            continue;
        }
        let heads = match rng.gen_range(0..20) {
            0..=2 => 0,
            3..=13 => 1,
            _ => 2,
        };
        let head: Vec<&str> = (0..heads).map(|_| pick(rng, &ground)).collect();
        let min_body = if heads == 0 { 1 } else { 0 };
        let body: Vec<String> = (0..rng.gen_range(min_body..=3))
            .map(|_| {
                let a = pick(rng, &ground);
                if neg(rng) {
                    format!("not {a}")
                } else {
                    a.to_string()
                }
            })
            .collect();
        let head = head.join(" | ");
        rules.push(if body.is_empty() {
            format!("{head}.")
        } else if head.is_empty() {
            format!(":- {}.", body.join(", "))
        } else {
            format!("{head} :- {}.", body.join(", "))
        });
    }
    rules.join("\n")
}

// ---- invariants ----------------------------------------------------------

fn constraints_only(p: &Program) -> Program {
    Program::new(
        p.rules
            .iter()
            .filter(|r| r.is_constraint())
            .cloned()
            .collect(),
        Vec::new(),
    )
}

/// Problems found in `sets` as answer sets of `p`; empty when none.
pub fn invariant_violations(p: &Program, sets: &[AnswerSet]) -> Vec<String> {
    let mut errs = Vec::new();
    let facts: BTreeSet<&Atom> = p.facts().collect();
    let edb = p.classify_predicates().edb;
    let constraints = constraints_only(p);
    for s in sets {
        let i = &s.atoms;
        let v: Vec<Rule> = violated_instances(p, i).unwrap();
        if !v.is_empty() {
            errs.push(format!("{i} violates {}", v[0]));
        }
        if !violated_instances(&constraints, i).unwrap().is_empty() {
            errs.push(format!("{i} satisfies a constraint body"));
        }
        if let Some(f) = facts.iter().find(|f| !i.contains(f)) {
            errs.push(format!("{i} misses fact {f}"));
        }
        if let Some(a) = i
            .iter()
            .find(|a| edb.contains(&a.signature()) && !facts.contains(a))
        {
            errs.push(format!("{i} contains underivable {a}"));
        }
    }
    for a in sets {
        for b in sets {
            if a.atoms != b.atoms && a.atoms.is_subset(&b.atoms) {
                errs.push(format!("{} is inside {}", a.atoms, b.atoms));
            }
        }
    }
    errs
}

// ---- solver output fixtures ----------------------------------------------

pub struct Fixture {
    pub name: String,
    pub program: String,
    pub args: Vec<String>,
    pub output: String,
    pub expected: Vec<String>,
}

pub fn fixture_dir(kind: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(kind)
}

/// `<case>.in` (program, optional `% args:` first line), `<case>.out`
/// (solver stdout) and `<case>.expected` (see [`render_answer_sets`]).
pub fn fixtures(kind: &str) -> Vec<Fixture> {
    let mut outs: Vec<PathBuf> = fs::read_dir(fixture_dir(kind))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "out"))
        .collect();
    outs.sort();
    outs.into_iter()
        .map(|out| {
            let read = |ext: &str| fs::read_to_string(out.with_extension(ext)).unwrap();
            let program = read("in");
            let args = program
                .lines()
                .next()
                .and_then(|l| l.strip_prefix("% args:"))
                .map(|a| a.split_whitespace().map(str::to_string).collect())
                .unwrap_or_default();
            Fixture {
                name: out.file_stem().unwrap().to_string_lossy().into_owned(),
                args,
                output: read("out"),
                expected: read("expected").lines().map(str::to_string).collect(),
                program,
            }
        })
        .collect()
}

pub fn render_answer_sets(a: &AnswerSets) -> Vec<String> {
    let status = match a.satisfiable {
        Satisfiability::Sat => "sat",
        Satisfiability::Unsat => "unsat",
        Satisfiability::Unknown => "unknown",
    };
    let mut lines = vec![
        format!("satisfiable: {status}"),
        format!(
            "optimum_found: {}",
            if a.optimum_found { "yes" } else { "no" }
        ),
    ];
    lines.extend(a.sets.iter().map(|s| format!("{} {}", s.atoms, s.cost)));
    lines
}
