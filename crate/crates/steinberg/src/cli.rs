//! Command-line front end.  Every subcommand prints a deterministic
//! report (plain text, or a JSON envelope under `--json`) and exits 0
//! when all checks pass, 1 when an identity check fails, and 2 on
//! usage errors.  Measurements such as group orders and generation
//! indices are reports, not assertions; they exit 0.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::cartan::Gcm;
use crate::chevlie::{self, LieAlgebra, StabKind};
use crate::fpgroup::{self, EnumResult};
use crate::present::{self, EmitOptions};
use crate::ring::Ring;
use crate::verify::{self, RepKind};
use crate::weyl;

#[derive(Parser)]
#[command(
    name = "steinberg",
    about = "Presentations of Steinberg groups over commutative rings, \
             checked in matrix representations, with desk-scale order oracles"
)]
struct Cli {
    /// Print a JSON envelope instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the sampled construction checks on large finite rings.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Cap on coset-table rows and matrix-closure sizes.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    max_cosets: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Gap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RepArg {
    Defining,
    Adjoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AutosType {
    B2,
    G2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit the presentation for a diagram over a ring.
    Present {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        ring: String,
        /// Drop relators made redundant by diagram symmetry.
        #[arg(long)]
        prune: bool,
        /// Append the torus multiplicativity relators.
        #[arg(long)]
        kac_moody: bool,
        /// Use the additive-basis form of the additivity batch.
        #[arg(long)]
        sparse: bool,
        /// Emit the rank-two schema instantiation instead of the
        /// batch lists (incompatible with the other emission flags).
        #[arg(long)]
        table1: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
    },
    /// Evaluate every relator in a matrix representation.
    Verify {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = RepArg::Adjoint)]
        rep: RepArg,
    },
    /// Check the characteristic-2 or -3 diagram-swap endomorphism.
    Autos {
        #[arg(long = "type", value_enum)]
        kind: AutosType,
        #[arg(long)]
        field: String,
    },
    /// Run the identity suite for the triple-exponential matrices.
    WstarCheck {
        #[arg(long)]
        diagram: String,
    },
    /// Print and verify the root-stabilizer generators of one node.
    Stabilizer {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        node: String,
    },
    /// Enumerate real roots with coroots and positivity signs.
    Roots {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 20)]
        bound: usize,
    },
    /// Todd-Coxeter order oracle for the emitted presentation.
    Enumerate {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        ring: String,
        #[arg(long)]
        prune: bool,
        #[arg(long)]
        kac_moody: bool,
    },
    /// Index of chosen positive-root groups inside the unipotent group.
    UnipotentGen {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        field: String,
        /// Comma-separated root names (s, l, s', l', s'', l'') or
        /// digit strings of simple-root coefficients.
        #[arg(long)]
        gens: String,
    },
}

struct Report {
    command: &'static str,
    config: Json,
    outcome: Json,
    human: String,
    exit: i32,
}

fn usage(msg: impl Into<String>) -> String {
    msg.into()
}

fn parse_gcm(spec: &str) -> Result<Gcm, String> {
    Gcm::parse(spec).map_err(|e| usage(e.to_string()))
}

fn parse_ring(dsl: &str) -> Result<Ring, String> {
    Ring::parse(dsl).map_err(|e| usage(e.to_string()))
}

fn word_text(gcm: &Gcm, ring: &Ring, w: &present::Word) -> String {
    if w.0.is_empty() {
        return "1".into();
    }
    w.0.iter()
        .map(|(g, e)| {
            let name = present::gen_name(gcm, ring, g);
            if *e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn star_word_text(gcm: &Gcm, w: &[(usize, i64)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|(l, e)| {
            if *e == 1 {
                format!("s{}", gcm.label(*l))
            } else {
                format!("s{}^{e}", gcm.label(*l))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn relator_json(p: &present::Presentation, r: &present::Relator) -> Json {
    json!({
        "batch": r.batch,
        "family": r.family,
        "nodes": r.nodes.iter().map(|&n| p.gcm.label(n)).collect::<Vec<_>>(),
        "params": r.params.iter().map(|v| p.ring.fmt_value(v)).collect::<Vec<_>>(),
    })
}

fn cmd_present(
    diagram: &str,
    ring: &str,
    prune: bool,
    kac_moody: bool,
    sparse: bool,
    table1: bool,
    out: OutFormat,
) -> Result<Report, String> {
    let gcm = parse_gcm(diagram)?;
    let ring = parse_ring(ring)?;
    if table1 && (prune || kac_moody || sparse) {
        return Err(usage(
            "--table1 is a separate emission and takes no other emission flags",
        ));
    }
    let p = if table1 {
        present::table1_presentation(&gcm, &ring).map_err(|e| usage(e.to_string()))?
    } else {
        present::emit_presentation(
            &gcm,
            &ring,
            EmitOptions {
                prune,
                kac_moody,
                sparse,
            },
        )
        .map_err(|e| usage(e.to_string()))?
    };
    let config = json!({
        "diagram": diagram,
        "ring": ring.dsl(),
        "prune": prune,
        "kac_moody": kac_moody,
        "sparse": sparse,
        "table1": table1,
        "out": match out { OutFormat::Json => "json", OutFormat::Gap => "gap" },
    });
    let (human, outcome) = match out {
        OutFormat::Json => {
            let text = p.to_json();
            let doc: Json = serde_json::from_str(&text).expect("own emission parses");
            (text, doc)
        }
        OutFormat::Gap => {
            let text = p.to_gap();
            (text.clone(), json!({ "gap": text }))
        }
    };
    Ok(Report {
        command: "present",
        config,
        outcome,
        human,
        exit: 0,
    })
}

fn cmd_verify(diagram: &str, ring: &str, rep: RepArg, seed: u64) -> Result<Report, String> {
    let gcm = parse_gcm(diagram)?;
    let ring = parse_ring(ring)?;
    let kind = match rep {
        RepArg::Defining => RepKind::Defining,
        RepArg::Adjoint => RepKind::Adjoint,
    };
    let model =
        verify::build_rep_seeded(&gcm, &ring, kind, seed).map_err(|e| usage(e.to_string()))?;
    let relators = present::all_relators(&gcm, &ring).map_err(|e| usage(e.to_string()))?;
    let out = verify::check_relators(&model, &relators).map_err(|e| usage(e.to_string()))?;
    let p = present::Presentation {
        gcm: gcm.clone(),
        ring: ring.clone(),
        generators: Vec::new(),
        relators: Vec::new(),
    };
    let mut human = format!(
        "diagram {diagram}, ring {}, rep {} (dim {})\nrelators checked: {}\nfailures: {}\n",
        ring.dsl(),
        match rep {
            RepArg::Defining => "defining",
            RepArg::Adjoint => "adjoint",
        },
        model.dim(),
        out.checked,
        out.failures.len()
    );
    for f in &out.failures {
        human.push_str(&format!(
            "  relator {} fails: batch {} family {} word {}\n",
            f.index,
            f.relator.batch,
            f.relator.family,
            word_text(&gcm, &ring, &f.relator.word)
        ));
    }
    human.push_str(if out.passed() { "PASS\n" } else { "FAIL\n" });
    let outcome = json!({
        "dim": model.dim(),
        "checked": out.checked,
        "failures": out
            .failures
            .iter()
            .map(|f| {
                let mut v = relator_json(&p, &f.relator);
                v["index"] = json!(f.index);
                v
            })
            .collect::<Vec<_>>(),
        "pass": out.passed(),
    });
    Ok(Report {
        command: "verify",
        config: json!({
            "diagram": diagram,
            "ring": ring.dsl(),
            "rep": match rep { RepArg::Defining => "defining", RepArg::Adjoint => "adjoint" },
            "seed": seed,
        }),
        outcome,
        human,
        exit: if out.passed() { 0 } else { 1 },
    })
}

fn cmd_autos(kind: AutosType, field: &str) -> Result<Report, String> {
    let gcm = Gcm::named(match kind {
        AutosType::B2 => "B2",
        AutosType::G2 => "G2",
    })
    .expect("named diagram");
    let ring = parse_ring(field)?;
    let report = verify::check_endomorphism(&gcm, &ring).map_err(|e| usage(e.to_string()))?;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut human = format!(
        "diagram {}, field {}\nreduced relators checked: {}\nrelator image failures: {}\n",
        match kind {
            AutosType::B2 => "B2",
            AutosType::G2 => "G2",
        },
        ring.dsl(),
        report.relators_checked,
        report.failures.len()
    );
    for f in &report.failures {
        human.push_str(&format!(
            "  relator {} ({}) has non-identity image\n",
            f.index, f.relator.family
        ));
    }
    human.push_str(&format!(
        "square of the swap is the power substitution: {}\n",
        yes_no(report.square_is_frobenius)
    ));
    if let Some(inv) = report.inverse_after_square {
        human.push_str(&format!(
            "root substitution inverts the square: {}\n",
            yes_no(inv)
        ));
    }
    human.push_str(if report.passed() { "PASS\n" } else { "FAIL\n" });
    let outcome = json!({
        "relators_checked": report.relators_checked,
        "failures": report.failures.iter().map(|f| json!({
            "index": f.index,
            "family": f.relator.family,
        })).collect::<Vec<_>>(),
        "square_is_power_substitution": report.square_is_frobenius,
        "inverse_after_square": report.inverse_after_square,
        "pass": report.passed(),
    });
    Ok(Report {
        command: "autos",
        config: json!({
            "type": match kind { AutosType::B2 => "b2", AutosType::G2 => "g2" },
            "field": ring.dsl(),
        }),
        outcome,
        human,
        exit: if report.passed() { 0 } else { 1 },
    })
}

fn cmd_wstar_check(diagram: &str) -> Result<Report, String> {
    let gcm = parse_gcm(diagram)?;
    let checks = chevlie::wstar_suite(&gcm).map_err(|e| usage(e.to_string()))?;
    let mut human = format!("diagram {diagram}\n");
    let mut all = true;
    for c in &checks {
        all &= c.passed();
        human.push_str(&format!(
            "{}: {} instances, {}\n",
            c.name,
            c.instances,
            if c.passed() { "PASS" } else { "FAIL" }
        ));
        for f in &c.failures {
            human.push_str(&format!("  fails on {f}\n"));
        }
    }
    human.push_str(if all { "PASS\n" } else { "FAIL\n" });
    let outcome = json!({
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "instances": c.instances,
            "failures": c.failures,
            "pass": c.passed(),
        })).collect::<Vec<_>>(),
        "pass": all,
    });
    Ok(Report {
        command: "wstar-check",
        config: json!({ "diagram": diagram }),
        outcome,
        human,
        exit: if all { 0 } else { 1 },
    })
}

fn cmd_stabilizer(diagram: &str, node: &str) -> Result<Report, String> {
    let gcm = parse_gcm(diagram)?;
    let i = gcm
        .node_by_label(node)
        .ok_or_else(|| usage(format!("no node labeled {node:?}")))?;
    let lie = LieAlgebra::new(&gcm).map_err(|e| usage(e.to_string()))?;
    let gens = chevlie::stabilizer_generators(&gcm, i).map_err(|e| usage(e.to_string()))?;
    let e_i = lie.simple_e(i);
    let minus: Vec<i64> = e_i.iter().map(|c| -c).collect();
    let mut human = format!(
        "diagram {diagram}, node {node}\nstabilizer generators for the root vector of node {node}:\n"
    );
    let mut rows = Vec::new();
    let mut all = true;
    for gen in &gens {
        let img = lie.star_word(&gen.word).mul_vec(&e_i);
        let (expected, expect_text) = match gen.kind {
            StabKind::SquareTwist(l) if gcm.entry(l, i).rem_euclid(2) == 1 => {
                (&minus, "-1")
            }
            _ => (&e_i, "+1"),
        };
        let ok = img == *expected;
        all &= ok;
        let kind_text = match &gen.kind {
            StabKind::BasisCycle(walk) => format!(
                "cycle {}",
                walk.iter().map(|&l| gcm.label(l)).collect::<Vec<_>>().join("-")
            ),
            StabKind::Transport { j, k } => {
                format!("transport j={} k={}", gcm.label(*j), gcm.label(*k))
            }
            StabKind::SquareTwist(l) => format!("square l={}", gcm.label(*l)),
        };
        human.push_str(&format!(
            "  {kind_text}: {}  coefficient {expect_text}: {}\n",
            star_word_text(&gcm, &gen.word),
            if ok { "ok" } else { "WRONG" }
        ));
        rows.push(json!({
            "kind": kind_text,
            "word": star_word_text(&gcm, &gen.word),
            "expected_coefficient": expect_text,
            "ok": ok,
        }));
    }
    let words: Vec<chevlie::StarWord> = gens.iter().map(|g| g.word.clone()).collect();
    let orbit = lie.root_orbit_size(&lie.roots().simple(i));
    let sub = lie.word_group_order(&words);
    let total = lie.wstar_order();
    let orders_ok = sub * orbit == total;
    all &= orders_ok;
    human.push_str(&format!(
        "orbit size {orbit}, generated order {sub}, extension order {total}: {}\n",
        if orders_ok { "ok" } else { "WRONG" }
    ));
    human.push_str(if all { "PASS\n" } else { "FAIL\n" });
    let outcome = json!({
        "generators": rows,
        "orbit": orbit,
        "generated_order": sub,
        "extension_order": total,
        "pass": all,
    });
    Ok(Report {
        command: "stabilizer",
        config: json!({ "diagram": diagram, "node": node }),
        outcome,
        human,
        exit: if all { 0 } else { 1 },
    })
}

fn cmd_roots(diagram: &str, bound: usize) -> Result<Report, String> {
    let gcm = parse_gcm(diagram)?;
    let rs = weyl::enumerate_roots(&gcm, bound);
    let mut human = format!(
        "diagram {diagram}, bound {bound}\nstabilized: {}\npositive roots: {}\n",
        if rs.stabilized() { "yes" } else { "no" },
        rs.positive_roots().len()
    );
    let mut rows = Vec::new();
    for sign in ["+", "-"] {
        for p in rs.positive_roots() {
            let (root, coroot): (Vec<i64>, Vec<i64>) = if sign == "+" {
                (p.root.clone(), p.coroot.clone())
            } else {
                (
                    p.root.iter().map(|c| -c).collect(),
                    p.coroot.iter().map(|c| -c).collect(),
                )
            };
            human.push_str(&format!("  {sign} {root:?}  coroot {coroot:?}\n"));
            rows.push(json!({
                "sign": sign,
                "root": root,
                "coroot": coroot,
            }));
        }
    }
    human.push_str(&format!("total roots: {}\n", 2 * rs.positive_roots().len()));
    let outcome = json!({
        "stabilized": rs.stabilized(),
        "positive_count": rs.positive_roots().len(),
        "total_count": 2 * rs.positive_roots().len(),
        "roots": rows,
    });
    Ok(Report {
        command: "roots",
        config: json!({ "diagram": diagram, "bound": bound }),
        outcome,
        human,
        exit: 0,
    })
}

fn cmd_enumerate(
    diagram: &str,
    ring: &str,
    prune: bool,
    kac_moody: bool,
    max_cosets: usize,
) -> Result<Report, String> {
    let gcm = parse_gcm(diagram)?;
    let ring = parse_ring(ring)?;
    let p = present::emit_presentation(
        &gcm,
        &ring,
        EmitOptions {
            prune,
            kac_moody,
            sparse: false,
        },
    )
    .map_err(|e| usage(e.to_string()))?;
    let result = fpgroup::todd_coxeter(p.generators.len(), &p.integer_relators(), max_cosets);
    let mut human = format!(
        "diagram {diagram}, ring {}\ngenerators: {}, relators: {}\n",
        ring.dsl(),
        p.generators.len(),
        p.relators.len()
    );
    let outcome = match result {
        EnumResult::Complete { index } => {
            human.push_str(&format!("order: {index}\n"));
            json!({
                "generators": p.generators.len(),
                "relators": p.relators.len(),
                "complete": true,
                "order": index,
            })
        }
        EnumResult::Capped { defined, live } => {
            human.push_str(&format!(
                "capped at {max_cosets} cosets (defined {defined}, live {live})\n"
            ));
            json!({
                "generators": p.generators.len(),
                "relators": p.relators.len(),
                "complete": false,
                "defined": defined,
                "live": live,
            })
        }
    };
    Ok(Report {
        command: "enumerate",
        config: json!({
            "diagram": diagram,
            "ring": ring.dsl(),
            "prune": prune,
            "kac_moody": kac_moody,
            "max_cosets": max_cosets,
        }),
        outcome,
        human,
        exit: 0,
    })
}

fn cmd_unipotent_gen(diagram: &str, field: &str, gens: &str) -> Result<Report, String> {
    let gcm = parse_gcm(diagram)?;
    let ring = parse_ring(field)?;
    let mut roots = Vec::new();
    let mut names = Vec::new();
    for token in gens.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let root = verify::root_token(&gcm, token).map_err(|e| usage(e.to_string()))?;
        names.push((token.to_string(), root.clone()));
        roots.push(root);
    }
    if roots.is_empty() {
        return Err(usage("--gens lists no root names"));
    }
    let index = verify::unipotent_generation_index(&gcm, &ring, &roots)
        .map_err(|e| usage(e.to_string()))?;
    let mut human = format!("diagram {diagram}, field {}\n", ring.dsl());
    for (name, root) in &names {
        human.push_str(&format!("  root group {name} -> {root:?}\n"));
    }
    human.push_str(&format!("index in the unipotent group: {index}\n"));
    let outcome = json!({
        "roots": names.iter().map(|(n, r)| json!({ "name": n, "root": r })).collect::<Vec<_>>(),
        "index": index,
    });
    Ok(Report {
        command: "unipotent-gen",
        config: json!({ "diagram": diagram, "field": ring.dsl(), "gens": gens }),
        outcome,
        human,
        exit: 0,
    })
}

/// Entry point used by the binary; argv[0] is included.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let report = match &cli.cmd {
        Cmd::Present {
            diagram,
            ring,
            prune,
            kac_moody,
            sparse,
            table1,
            out,
        } => cmd_present(diagram, ring, *prune, *kac_moody, *sparse, *table1, *out),
        Cmd::Verify { diagram, ring, rep } => cmd_verify(diagram, ring, *rep, cli.seed),
        Cmd::Autos { kind, field } => cmd_autos(*kind, field),
        Cmd::WstarCheck { diagram } => cmd_wstar_check(diagram),
        Cmd::Stabilizer { diagram, node } => cmd_stabilizer(diagram, node),
        Cmd::Roots { diagram, bound } => cmd_roots(diagram, *bound),
        Cmd::Enumerate {
            diagram,
            ring,
            prune,
            kac_moody,
        } => cmd_enumerate(diagram, ring, *prune, *kac_moody, cli.max_cosets),
        Cmd::UnipotentGen {
            diagram,
            field,
            gens,
        } => cmd_unipotent_gen(diagram, field, gens),
    };
    match report {
        Ok(r) => {
            if cli.json {
                let envelope = json!({
                    "command": r.command,
                    "config": r.config,
                    "outcome": r.outcome,
                    "exit": r.exit,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            } else {
                print!("{}", r.human);
            }
            r.exit
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
