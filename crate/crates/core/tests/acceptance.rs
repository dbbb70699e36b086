//! Acceptance suite. Prints one PASS or FAIL line per criterion, then fails
//! unless every criterion passes apart from the listed known discrepancies.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use common::*;
use quivers::catalog::{self, ReferenceCatalog};
use quivers::classify::{self, Verdict};
use quivers::format;
use quivers::linalg;
use quivers::mutclass::{self, Caps, ClassStatus, FiniteVerdict, MutationClass};
use quivers::patterns;
use quivers::{Error, Quiver};

/// Failures that are expected and explained: the stated A3 class size of 2
/// disagrees with both the library and the exhaustive oracle, which find 4
/// quivers up to relabeling (the path, the path with a middle source, the
/// path with a middle sink, and the oriented triangle).
const KNOWN_RED: &[(&str, &str)] = &[("class enumeration ground truths", "A3 class size")];

const STATED_A3_SIZE: usize = 2;

#[derive(Default)]
struct Outcome {
    failures: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, key: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push((key.into(), detail()));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

type Criterion = fn(&Ctx) -> Result<Outcome, Error>;

struct Ctx {
    catalog: ReferenceCatalog,
    corpus: Vec<Quiver>,
}

impl Ctx {
    fn class(&self, name: &str) -> Result<std::sync::Arc<MutationClass>, Error> {
        self.catalog.class(name)
    }
}

fn q(n: usize, arrows: &[(usize, usize, i64)]) -> Quiver {
    Quiver::from_arrows(n, arrows.iter().copied()).unwrap()
}

fn involution_and_skew_symmetry(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let mut count = 0;
    for (idx, q) in ctx.corpus.iter().enumerate() {
        for k in 0..q.n() {
            let m = q.mutate(k)?;
            count += 1;
            let skew = (0..q.n()).all(|i| (0..q.n()).all(|j| *m.entry(i, j) == -m.entry(j, i)));
            out.check(format!("skew #{idx} k={k}"), skew, || to_text_one(&m));
            out.check(format!("involution #{idx} k={k}"), m.mutate(k)? == *q, || {
                to_text_one(q)
            });
        }
    }
    out.note(format!("{} quivers, {count} mutations", ctx.corpus.len()));
    Ok(out)
}

fn to_text_one(q: &Quiver) -> String {
    format::to_text(q).replace('\n', "; ")
}

fn rank_invariance(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    for (idx, q) in ctx.corpus.iter().enumerate() {
        let r = linalg::rank_z(q);
        for k in 0..q.n() {
            let rk = linalg::rank_z(&q.mutate(k)?);
            out.check(format!("rank #{idx} k={k}"), r == rk, || format!("{r} -> {rk}"));
        }
    }
    Ok(out)
}

fn pushforward_soundness(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let mut with_radical = 0;
    for (idx, q) in ctx.corpus.iter().enumerate() {
        let basis = linalg::radical_basis_z(q);
        if basis.vectors.is_empty() {
            continue;
        }
        with_radical += 1;
        for k in 0..q.n() {
            let m = q.mutate(k)?;
            for u in &basis.vectors {
                let v = q.pushforward_vector(k, u)?;
                out.check(format!("pushforward #{idx} k={k}"), m.is_radical(&v)?, || {
                    format!("{u:?} -> {v:?}")
                });
            }
        }
    }
    out.note(format!("{with_radical} quivers with nontrivial radical"));
    Ok(out)
}

fn support_criteria(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let mut tested = 0;
    for (idx, q) in ctx.corpus.iter().enumerate().filter(|(_, q)| q.n() <= 6) {
        let b = to_matrix(q);
        let b2: Matrix = b
            .iter()
            .map(|r| r.iter().map(|x| x.rem_euclid(2)).collect())
            .collect();
        for set in subsets(q.n()) {
            tested += 1;
            let z = indicator_product(&b, &set).iter().all(|&x| x == 0);
            let g = indicator_product(&b2, &set).iter().all(|&x| x % 2 == 0);
            out.check(
                format!("Z #{idx} {set:?}"),
                patterns::radical_support_check_z(q, &set)? == z,
                String::new,
            );
            out.check(
                format!("GF2 #{idx} {set:?}"),
                patterns::radical_support_check_gf2(q, &set)? == g,
                String::new,
            );
        }
    }
    out.note(format!("{tested} (quiver, subset) pairs"));
    Ok(out)
}

fn certificate_witnesses(_: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let families: Vec<(&str, Quiver)> = vec![
        ("(i) weight-3 path", q(3, &[(0, 1, 3), (1, 2, 1)])),
        ("(i) weight-3 oriented triangle", q(3, &[(0, 1, 3), (1, 2, 1), (2, 0, 1)])),
        ("(i) weight-4 edge in a square", q(4, &[(0, 1, 4), (1, 2, 1), (2, 3, 1), (3, 0, 1)])),
        ("(ii) tree with a double edge", q(3, &[(0, 1, 2), (1, 2, 1)])),
        ("(ii) tree with two double edges", q(3, &[(0, 1, 2), (2, 1, 2)])),
        ("(ii) acyclic triangle 2,1,1", q(3, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)])),
        ("(ii) acyclic triangle 2,2,2", q(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)])),
        ("(ii) oriented triangle 2,2,1", q(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 1)])),
        (
            "(iii) non-oriented square with a double edge",
            q(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 1), (0, 3, 1)]),
        ),
        (
            "(iii) non-oriented pentagon with a double edge",
            q(5, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 4, 1), (0, 4, 1)]),
        ),
        (
            "(iv) vertex meeting a non-oriented square once",
            q(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1), (4, 0, 1)]),
        ),
        (
            "(iv) vertex meeting a non-oriented square three times",
            q(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1), (4, 0, 1), (4, 1, 1), (2, 4, 1)]),
        ),
        (
            "(iv) vertex meeting an oriented square three times",
            q(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (4, 0, 1), (1, 4, 1), (4, 2, 1)]),
        ),
        (
            "(iv) vertex meeting an oriented pentagon three times",
            q(
                6,
                &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1), (5, 0, 1), (5, 2, 1), (5, 3, 1)],
            ),
        ),
        (
            "(v) acyclic quiver with two non-oriented squares",
            q(5, &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1), (3, 4, 1), (0, 4, 1)]),
        ),
        (
            "(v) two non-oriented squares joined at a vertex",
            q(
                7,
                &[(0, 1, 1), (1, 2, 1), (0, 3, 1), (3, 2, 1), (2, 4, 1), (4, 5, 1), (2, 6, 1), (6, 5, 1)],
            ),
        ),
    ];
    let caps = Caps::with_max_size(50_000);
    for (name, w) in &families {
        let class = mutclass::enumerate_class(w, caps)?;
        let reached = class.status == ClassStatus::AbortedWeight
            && class
                .witness
                .as_ref()
                .is_some_and(|x| x.max_weight() >= 3.into());
        out.check(*name, reached, || format!("status {:?}", class.status));
        let cert = patterns::infinite_certificate(w)?;
        out.check(format!("{name}: certificate"), cert.is_some(), String::new);
        if let Some(c) = cert {
            out.note(format!("{name}: {:?}", c.clause));
        }
    }
    for (name, tri) in [
        ("oriented triangle 2,1,1", q(3, &[(0, 1, 2), (1, 2, 1), (2, 0, 1)])),
        ("oriented triangle 2,2,2", q(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)])),
    ] {
        let class = mutclass::enumerate_class(&tri, caps)?;
        out.check(name, class.status == ClassStatus::Complete, || {
            format!("status {:?}", class.status)
        });
        out.check(
            format!("{name}: no certificate"),
            patterns::infinite_certificate(&tri)?.is_none(),
            String::new,
        );
        out.note(format!("{name}: class size {}", class.size()));
    }
    Ok(out)
}

fn class_ground_truths(_: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let mut rng = StdRng::seed_from_u64(0xc1a55);
    for name in ["A2", "A3", "E6", "X6", "X7"] {
        let seed = catalog::seed(name)?;
        let class = mutclass::enumerate_class(&seed, Caps::default())?;
        out.check(format!("{name} complete"), class.is_complete(), || {
            format!("{:?}", class.status)
        });
        let heavy = class
            .representatives()
            .iter()
            .filter(|m| m.max_weight() > 2.into())
            .count();
        out.check(format!("{name} weights"), heavy == 0, || format!("{heavy} members"));
        let frozen = frozen_size(name);
        out.check(format!("{name} frozen size"), class.size() == frozen, || {
            format!("{} vs frozen {frozen}", class.size())
        });
        if let OracleClass::Complete(set) = oracle_class(&seed) {
            out.check(format!("{name} oracle size"), set.len() == class.size(), || {
                format!("oracle {}", set.len())
            });
        } else {
            out.check(format!("{name} oracle size"), false, || "oracle saw weight 3".into());
        }
        let mut picks: Vec<&Quiver> = class.representatives().iter().collect();
        picks.shuffle(&mut rng);
        for start in picks.into_iter().take(3) {
            let again = mutclass::enumerate_class(start, Caps::default())?;
            out.check(
                format!("{name} re-enumeration"),
                again.members() == class.members(),
                || format!("{} vs {}", again.size(), class.size()),
            );
        }
        out.note(format!("{name}={}", class.size()));
        match name {
            "A2" => out.check("A2 class size", class.size() == 1, || class.size().to_string()),
            "A3" => out.check("A3 class size", class.size() == STATED_A3_SIZE, || {
                format!("stated {STATED_A3_SIZE}, found {} (oracle agrees)", class.size())
            }),
            _ => {}
        }
    }
    Ok(out)
}

fn has_non_oriented_cycle(q: &Quiver) -> Result<bool, Error> {
    Ok(patterns::cycles(q)?.iter().any(|c| !c.oriented))
}

fn e6_characterization(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    for name in ["A6", "D6", "E6"] {
        let class = ctx.class(name)?;
        let mut eligible = 0;
        for m in class.representatives() {
            if !m.is_simply_laced() || !m.is_connected() || has_non_oriented_cycle(m)? {
                continue;
            }
            eligible += 1;
            let r = classify::e6_characterization(m, &ctx.catalog)?;
            let want = name == "E6";
            let label = to_text_one(m);
            out.check(format!("{name} (a)"), r.a == want, || label.clone());
            out.check(format!("{name} (b)"), r.b == want, || label.clone());
            out.check(format!("{name} (c)"), r.c == want, || label.clone());
            out.check(format!("{name} (d)"), r.d == want, || label.clone());
        }
        out.note(format!("{name}: {eligible}/{}", class.size()));
    }
    Ok(out)
}

fn basic_radical_criterion(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let surface = ["D4", "D5", "D6", "D7", "C3", "C4", "C5", "C6", "C7", "C8"];
    for name in surface {
        let seed = catalog::seed(name)?;
        out.check(
            format!("{name} seed"),
            classify::surface_by_basic_radical(&seed)?.holds,
            String::new,
        );
        let class = ctx.class(name)?;
        for m in class.representatives() {
            let r = classify::surface_by_basic_radical_unchecked(m)?;
            out.check(format!("{name} member passes"), r.holds, || to_text_one(m));
        }
        out.note(format!("{name}: {}", class.size()));
    }
    for name in ["E6", "X6"] {
        let class = ctx.class(name)?;
        for m in class.representatives() {
            let r = classify::surface_by_basic_radical_unchecked(m)?;
            out.check(format!("{name} member fails"), !r.holds, || to_text_one(m));
        }
        out.note(format!("{name}: {}", class.size()));
    }
    Ok(out)
}

fn surface_class_names() -> Vec<String> {
    let mut names = Vec::new();
    for n in 3..=8 {
        names.push(format!("A{n}"));
        names.push(format!("C{n}"));
    }
    for n in 4..=8 {
        names.push(format!("D{n}"));
    }
    names
}

fn gf2_radicals(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let mut members: Vec<Quiver> = Vec::new();
    let mut undecided = 0;
    let caps = Caps::with_max_size(20_000);
    for q in ctx.corpus.iter().filter(|q| q.n() >= 3 && q.is_connected()) {
        match mutclass::is_finite_mutation_type_with(q, caps) {
            Ok(FiniteVerdict::Finite(_)) => members.push(q.clone()),
            Ok(FiniteVerdict::Infinite(_)) => {}
            Err(Error::Unknown(_)) => undecided += 1,
            Err(e) => return Err(e),
        }
    }
    let random_finite = members.len();
    let mut names = surface_class_names();
    names.extend(catalog::EXCEPTIONAL.iter().map(|s| s.to_string()));
    for name in &names {
        members.extend(ctx.class(name)?.representatives().iter().cloned());
    }
    for m in &members {
        for d in patterns::double_edges(m) {
            out.check(
                "double edge radical",
                patterns::radical_support_check_gf2(m, &d.vertices)?,
                || to_text_one(m),
            );
        }
        for c in patterns::cycles(m)?.iter().filter(|c| !c.oriented) {
            out.check(
                "non-oriented cycle radical",
                patterns::radical_support_check_gf2(m, &c.order)?,
                || to_text_one(m),
            );
        }
    }
    out.note(format!(
        "{} finite members ({random_finite} random, {undecided} random undecided)",
        members.len()
    ));

    let mut sweep_names = surface_class_names();
    sweep_names.extend(["X6".to_string(), "X7".to_string()]);
    for name in &sweep_names {
        let class = ctx.class(name)?;
        let dims = mutclass::sweep_class(&class, patterns::v00)?;
        let worst = dims.values.values().map(|d| d.quotient_dim).max().unwrap_or(0);
        out.check(format!("{name} quotient <= 1"), worst <= 1, || worst.to_string());
        let v00 = mutclass::sweep_class(&class, |m| patterns::v00(m).map(|d| d.dim_v00))?;
        out.check(format!("{name} dim_v00 constant"), v00.constant, || {
            format!("{:?}", v00.values.values().collect::<BTreeSet<_>>())
        });
        if name == "A5" || name == "A7" {
            let path = patterns::v00(&catalog::seed(name)?)?;
            out.note(format!("{name} path quotient {}", path.quotient_dim));
        }
    }
    Ok(out)
}

fn exceptional_subquivers(ctx: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    for (name, target) in [("E6^(1)", "E6"), ("E7", "E6"), ("X7", "X6")] {
        let class = ctx.class(name)?;
        for m in class.representatives() {
            let hit = classify::contains_class_subquiver(m, target, &ctx.catalog)?;
            out.check(format!("{name} contains {target}"), hit.is_some(), || to_text_one(m));
        }
    }
    let mut scanned = 0;
    let mut names: Vec<String> = ["E6", "E7", "E8", "E6^(1)", "E7^(1)", "E6^(1,1)", "X6", "X7"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    names.extend(["A6", "A7", "D6", "D7", "C6", "C7"].iter().map(|s| s.to_string()));
    for name in &names {
        for m in ctx.class(name)?.representatives() {
            scanned += 1;
            out.check(
                "E6 and X6 exclusive",
                classify::e6_x6_exclusion(m, &ctx.catalog)?,
                || to_text_one(m),
            );
        }
    }
    out.note(format!("exclusion on {scanned} members"));
    for name in catalog::EXCEPTIONAL {
        let c = classify::classify_quiver(&catalog::seed(name)?, &ctx.catalog)?;
        let ok = match &c.verdict {
            Verdict::ExceptionalE(n) | Verdict::ExceptionalX(n) => n == name,
            _ => false,
        };
        out.check(format!("classify {name}"), ok, || c.verdict.to_string());
    }
    for (name, seed) in named_seeds().into_iter().filter(|(n, _)| {
        n.starts_with('A') || n.starts_with('D') || n.starts_with('C')
    }) {
        if seed.n() < 3 {
            continue;
        }
        let c = classify::classify_quiver(&seed, &ctx.catalog)?;
        out.check(format!("classify {name}"), c.verdict == Verdict::Surface, || {
            c.verdict.to_string()
        });
    }
    Ok(out)
}

fn format_round_trip(_: &Ctx) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    for (idx, q) in random_corpus().iter().enumerate() {
        let text = format::to_text(q);
        out.check(format!("text #{idx}"), format::parse_text(&text)? == *q, || text.clone());
        out.check(format!("text print #{idx}"), format::to_text(&format::parse_text(&text)?) == text, String::new);
        let json = format::to_json(q);
        out.check(format!("json #{idx}"), format::parse_json(&json)? == *q, || json.clone());
        out.check(format!("json print #{idx}"), format::to_json(&format::parse_json(&json)?) == json, String::new);
    }
    Ok(out)
}

fn main() {
    let criteria: &[(&str, u64, Criterion)] = &[
        ("involution and skew-symmetry", 1, involution_and_skew_symmetry),
        ("rank invariance", 5, rank_invariance),
        ("pushforward soundness", 5, pushforward_soundness),
        ("radical support criteria", 10, support_criteria),
        ("infinite-type certificates", 60, certificate_witnesses),
        ("class enumeration ground truths", 300, class_ground_truths),
        ("E6 characterization", 120, e6_characterization),
        ("basic radical criterion", 180, basic_radical_criterion),
        ("GF(2) radicals and V00", 180, gf2_radicals),
        ("exceptional subquivers and classification", 600, exceptional_subquivers),
        ("format round trip", 1, format_round_trip),
    ];
    let ctx = Ctx {
        catalog: ReferenceCatalog::new(),
        corpus: corpus(),
    };
    let mut unexpected = Vec::new();
    let mut stale = Vec::new();
    for &(name, budget, run) in criteria {
        let start = Instant::now();
        let result = run(&ctx);
        let took = start.elapsed();
        let timing = timing(took, Duration::from_secs(budget));
        match result {
            Err(e) => {
                println!("FAIL {name} [{timing}]: error {e}");
                unexpected.push(format!("{name}: {e}"));
            }
            Ok(o) => {
                let notes = if o.notes.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", o.notes.join("; "))
                };
                if o.failures.is_empty() {
                    println!("PASS {name} [{timing}]{notes}");
                } else {
                    let shown: Vec<String> = o
                        .failures
                        .iter()
                        .take(5)
                        .map(|(k, d)| format!("{k}: {d}"))
                        .collect();
                    let known = o
                        .failures
                        .iter()
                        .all(|(k, _)| KNOWN_RED.contains(&(name, k.as_str())));
                    let tag = if known { " known discrepancy" } else { "" };
                    println!(
                        "FAIL {name}{tag} [{timing}]: {} failure(s): {}{notes}",
                        o.failures.len(),
                        shown.join(" | ")
                    );
                    if !known {
                        unexpected.push(name.to_string());
                    }
                }
                for &(crit, key) in KNOWN_RED.iter().filter(|(c, _)| *c == name) {
                    if !o.failures.iter().any(|(k, _)| k == key) {
                        stale.push(format!("{crit}: {key}"));
                    }
                }
            }
        }
    }
    let ok = unexpected.is_empty() && stale.is_empty();
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
    }
    if !stale.is_empty() {
        println!("known discrepancies no longer reproduce: {stale:?}");
    }
    println!(
        "acceptance: {} criteria, {} known discrepancy, {}",
        criteria.len(),
        KNOWN_RED.len(),
        if ok { "ok" } else { "FAILED" }
    );
    std::process::exit(if ok { 0 } else { 1 });
}

fn timing(took: Duration, budget: Duration) -> String {
    let over = if took > budget { ", over budget" } else { "" };
    format!("{:.2}s of {}s{over}", took.as_secs_f64(), budget.as_secs())
}
