//! One test per acceptance criterion.  Each prints a single
//! `ACCEPTANCE <n> <tag>: PASS|FAIL` line (visible under
//! `--nocapture`) and asserts both the checks and the time budget.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use steinberg::cartan::Gcm;
use steinberg::chevlie;
use steinberg::fpgroup::{self, EnumResult};
use steinberg::present::{self, EmitOptions, Relator};
use steinberg::ring::Ring;
use steinberg::verify::{self, RepKind};
use steinberg::weyl;

fn gcm(spec: &str) -> Gcm {
    Gcm::parse(spec).expect(spec)
}

fn ring(dsl: &str) -> Ring {
    Ring::parse(dsl).expect(dsl)
}

fn conclude(n: u32, tag: &str, ok: bool, t0: Instant, budget: Duration) {
    let dt = t0.elapsed();
    println!(
        "ACCEPTANCE {n} {tag}: {} ({:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        dt.as_secs_f64()
    );
    assert!(ok, "criterion {n} ({tag}) failed");
    assert!(
        dt <= budget,
        "criterion {n} ({tag}) took {dt:?}, budget {budget:?}"
    );
}

#[test]
fn criterion_1_symbolic_relators() {
    let t0 = Instant::now();
    let mut ok = true;
    let r = ring("laurent(r;t,u)");
    for d in ["A1", "A1+A1", "A2", "B2", "G2"] {
        let g = gcm(d);
        let relators = present::all_relators(&g, &r).unwrap();
        for kind in [RepKind::Defining, RepKind::Adjoint] {
            let rep = verify::build_rep(&g, &r, kind).unwrap();
            let out = verify::check_relators(&rep, &relators).unwrap();
            if !out.passed() || out.checked == 0 {
                ok = false;
            }
        }
    }
    conclude(1, "symbolic relator verification", ok, t0, Duration::from_secs(10));
}

#[test]
fn criterion_2_table1_instantiation() {
    let t0 = Instant::now();
    let mut ok = true;
    let gf2 = ring("gf2");
    for d in ["A3", "D4"] {
        let g = gcm(d);
        let p = present::table1_presentation(&g, &gf2).unwrap();
        let rep = verify::build_rep(&g, &gf2, RepKind::Adjoint).unwrap();
        let out = verify::check_relators(&rep, &p.relators).unwrap();
        if !out.passed() || out.checked == 0 {
            ok = false;
        }
    }
    conclude(2, "rank-two schema instantiation", ok, t0, Duration::from_secs(30));
}

#[test]
fn criterion_3_wstar_suite() {
    let t0 = Instant::now();
    let mut ok = true;
    let diagrams = [
        "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2",
    ];
    for d in diagrams {
        let checks = chevlie::wstar_suite(&gcm(d)).unwrap();
        if checks.len() != 7 || !checks.iter().all(|c| c.passed()) {
            ok = false;
        }
    }
    conclude(3, "reflection extension identities", ok, t0, Duration::from_secs(60));
}

#[test]
fn criterion_4_diagram_endomorphisms() {
    let t0 = Instant::now();
    let mut ok = true;
    for (d, f) in [("B2", "gf2"), ("B2", "gf8"), ("G2", "gf3"), ("G2", "gf27")] {
        let report = verify::check_endomorphism(&gcm(d), &ring(f)).unwrap();
        if !report.passed() || report.inverse_after_square != Some(true) {
            ok = false;
        }
    }
    conclude(4, "diagram endomorphisms", ok, t0, Duration::from_secs(60));
}

#[test]
fn criterion_5_unipotent_generation() {
    let t0 = Instant::now();
    let mut ok = true;
    let named: [(&str, &str, &[&str], u64); 7] = [
        ("B2", "gf2", &["s", "l"], 2),
        ("B2", "gf3", &["s", "l"], 1),
        ("B2", "gf2", &["s", "l", "s'"], 1),
        ("B2", "gf2", &["s", "l", "l'"], 1),
        ("G2", "gf2", &["s", "l"], 2),
        ("G2", "gf3", &["s", "l"], 3),
        ("G2", "gf4", &["s", "l"], 1),
    ];
    for (d, f, tokens, want) in named {
        let g = gcm(d);
        let roots: Vec<Vec<i64>> = tokens
            .iter()
            .map(|t| verify::root_token(&g, t).unwrap())
            .collect();
        let idx = verify::unipotent_generation_index(&g, &ring(f), &roots).unwrap();
        if idx != want {
            ok = false;
        }
    }
    for d in ["A3", "B3", "C3"] {
        for f in ["gf2", "gf3"] {
            let g = gcm(d);
            let roots = verify::simple_and_reflected_roots(&g);
            let idx = verify::unipotent_generation_index(&g, &ring(f), &roots).unwrap();
            if idx != 1 {
                ok = false;
            }
        }
    }
    conclude(5, "unipotent generation indices", ok, t0, Duration::from_secs(300));
}

type RelKey = (String, Vec<String>, Vec<String>, Vec<(String, i32)>);

fn rel_key(g: &Gcm, r: &Ring, rel: &Relator) -> RelKey {
    (
        rel.family.to_string(),
        rel.nodes.iter().map(|&n| g.label(n).to_string()).collect(),
        rel.params.iter().map(|v| r.fmt_value(v)).collect(),
        rel.word
            .0
            .iter()
            .map(|(gen, e)| (present::gen_name(g, r, gen), *e))
            .collect(),
    )
}

fn key_counts(g: &Gcm, r: &Ring, rels: &[Relator]) -> BTreeMap<RelKey, usize> {
    let mut m = BTreeMap::new();
    for rel in rels {
        *m.entry(rel_key(g, r, rel)).or_insert(0) += 1;
    }
    m
}

fn sub_gcm(g: &Gcm, nodes: &[usize]) -> Gcm {
    let labels = nodes.iter().map(|&i| g.label(i).to_string()).collect();
    let a = nodes
        .iter()
        .map(|&i| nodes.iter().map(|&j| g.entry(i, j)).collect())
        .collect();
    Gcm::new(labels, a).expect("principal submatrix of a GCM")
}

#[test]
fn criterion_6_locality() {
    let t0 = Instant::now();
    let mut ok = true;
    let cases = [
        ("A1", "gf2", EmitOptions::default()),
        ("A2", "gf2", EmitOptions::default()),
        ("A2", "gf4", EmitOptions { kac_moody: true, ..Default::default() }),
        ("B2", "z/3", EmitOptions::default()),
        ("B2", "z/4", EmitOptions { sparse: true, ..Default::default() }),
        ("G2", "gf2", EmitOptions::default()),
        ("A1+A1", "gf3", EmitOptions::default()),
        ("A3", "gf2", EmitOptions::default()),
        ("A3", "z/3", EmitOptions { kac_moody: true, ..Default::default() }),
        ("B3", "gf2", EmitOptions::default()),
        ("C3", "z/2", EmitOptions::default()),
        ("D4", "gf2", EmitOptions::default()),
        ("A2~", "gf2", EmitOptions::default()),
    ];
    for (d, f, opts) in cases {
        let g = gcm(d);
        let r = ring(f);
        let p = present::emit_presentation(&g, &r, opts).unwrap();
        if !p.relators.iter().all(|rel| rel.word.nodes().len() <= 2) {
            ok = false;
        }
        let full = key_counts(&g, &r, &p.relators);
        let mut union: BTreeMap<RelKey, usize> = BTreeMap::new();
        let mut subsets: Vec<Vec<usize>> = (0..g.rank()).map(|i| vec![i]).collect();
        for i in 0..g.rank() {
            for j in (i + 1)..g.rank() {
                subsets.push(vec![i, j]);
            }
        }
        for nodes in subsets {
            let sg = sub_gcm(&g, &nodes);
            let sp = present::emit_presentation(&sg, &r, opts).unwrap();
            for (k, c) in key_counts(&sg, &r, &sp.relators) {
                let slot = union.entry(k).or_insert(0);
                *slot = (*slot).max(c);
            }
        }
        if full != union {
            ok = false;
        }
    }
    conclude(6, "rank-two locality", ok, t0, Duration::from_secs(60));
}

#[test]
fn criterion_7_pruning_soundness() {
    let t0 = Instant::now();
    let mut ok = true;
    let cap = 2_000_000;
    let g = gcm("A3");
    for f in ["gf2", "z/3"] {
        let r = ring(f);
        let run = |prune: bool| {
            let p = present::emit_presentation(
                &g,
                &r,
                EmitOptions { prune, ..Default::default() },
            )
            .unwrap();
            fpgroup::todd_coxeter(p.generators.len(), &p.integer_relators(), cap)
        };
        match (run(false), run(true)) {
            (EnumResult::Complete { index: a }, EnumResult::Complete { index: b }) => {
                println!("  A3/{f}: both complete, orders {a} and {b}");
                if a != b {
                    ok = false;
                }
            }
            (
                EnumResult::Capped { defined: da, live: la },
                EnumResult::Capped { defined: db, live: lb },
            ) => {
                println!(
                    "  A3/{f}: both capped at {cap} (defined {da}/{db}, live {la}/{lb})"
                );
                if da != db {
                    ok = false;
                }
            }
            _ => {
                println!("  A3/{f}: one run completed, the other capped");
                ok = false;
            }
        }
    }
    conclude(7, "pruning soundness", ok, t0, Duration::from_secs(300));
}

#[test]
fn criterion_8_order_oracle_coherence() {
    let t0 = Instant::now();
    let mut ok = true;
    let g = gcm("A1");
    for (f, want_matrix) in [("gf2", 6u64), ("gf3", 24u64)] {
        let r = ring(f);
        let p = present::emit_presentation(&g, &r, EmitOptions::default()).unwrap();
        let tc = match fpgroup::todd_coxeter(p.generators.len(), &p.integer_relators(), 1 << 20) {
            EnumResult::Complete { index } => index,
            EnumResult::Capped { .. } => {
                ok = false;
                continue;
            }
        };
        let rep = verify::build_rep(&g, &r, RepKind::Defining).unwrap();
        let mut gens = vec![rep.s_matrix(0).unwrap().clone()];
        for t in r.elements().unwrap() {
            gens.push(rep.x_matrix(0, &t).unwrap());
        }
        let mat = fpgroup::matrix_closure(&r, &gens, 1 << 20).unwrap();
        println!("  A1/{f}: enumerated {tc}, matrix image {mat}, ratio {}", tc / mat);
        if mat != want_matrix || tc % mat != 0 {
            ok = false;
        }
    }
    conclude(8, "order oracle coherence", ok, t0, Duration::from_secs(120));
}

#[test]
fn criterion_9_root_counts() {
    let t0 = Instant::now();
    let mut ok = true;
    for (d, want) in [
        ("A2", 6),
        ("B2", 8),
        ("G2", 12),
        ("A3", 12),
        ("B3", 18),
        ("C3", 18),
        ("F4", 48),
    ] {
        let rs = weyl::enumerate_roots(&gcm(d), 30);
        if !rs.stabilized() || 2 * rs.positive_roots().len() != want {
            ok = false;
        }
    }
    let g2: std::collections::BTreeSet<Vec<i64>> = weyl::enumerate_roots(&gcm("G2"), 30)
        .positive_roots()
        .iter()
        .map(|p| p.root.clone())
        .collect();
    let expected: std::collections::BTreeSet<Vec<i64>> = [
        vec![1, 0],
        vec![0, 1],
        vec![1, 1],
        vec![2, 1],
        vec![3, 1],
        vec![3, 2],
    ]
    .into_iter()
    .collect();
    if g2 != expected {
        ok = false;
    }
    conclude(9, "root system counts", ok, t0, Duration::from_secs(5));
}
