//! Command-line front end: descriptor verification, bounds, spectral
//! sequence tables, cohomology tables, example emission and self-tests.
//!
//! Exit codes: 0 = pass, 1 = a check failed, 2 = malformed input.

use clap::{Args, Parser, Subcommand};
use projcoh::checker::{
    self, catalog_names, ActionDescriptor, CatalogSpec, CheckerError, Verdict,
};
use projcoh::homalg::{
    self, cohomology_table, disc_pair, moore_cone_pair, pair_coefficient_diagram, rp_pair,
    Coefficients,
};
use projcoh::intcoh;
use projcoh::sseq::{self, D3Status};
use serde_json::json;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "projcoh", version, about = "Exact-arithmetic verifier for free (Z/2)^r-actions on products of real projective spaces")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the necessary-condition battery and the rank-bound trace on a
    /// descriptor (path or `-` for stdin).
    Verify {
        /// Path to an action descriptor JSON file, or `-` for stdin.
        input: String,
        /// Print the full trace certificate in text mode.
        #[arg(long)]
        trace: bool,
    },
    /// Print `sum_i mu(n_i)` for the given dimensions.
    Bound {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<u32>,
    },
    /// Dimension table of a spectral-sequence page for a descriptor.
    Sspage {
        #[arg(long)]
        action: String,
        #[arg(long)]
        window: Option<u32>,
        #[arg(long, default_value_t = 2)]
        page: u8,
    },
    /// Cohomology tables.
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    /// The catalog of model actions.
    #[command(subcommand)]
    Examples(ExamplesCmd),
    /// Built-in verification batteries.
    Selftest {
        /// One of: lemma33, propD, bc-relations, presentation.
        which: String,
        /// Sample count for the randomized battery.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Seed for the randomized battery.
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CohomologyCmd {
    /// Integral or mod-2 cohomology of a product of projective spaces,
    /// computed from the cellular cochain complex.
    RpProduct(RpProductArgs),
    /// Per-degree dimension counts from the generators-and-relations side,
    /// verified against the cochain oracle.
    Presentation(PresentationArgs),
}

#[derive(Args)]
struct RpProductArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<u32>,
    /// `z` for integral, `f2` for mod-2 coefficients.
    #[arg(long, default_value = "z")]
    coeff: String,
    #[arg(long)]
    max_degree: u32,
}

#[derive(Args)]
struct PresentationArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<u32>,
    #[arg(long)]
    max_degree: u32,
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// List the catalog entries.
    List,
    /// Emit a catalog descriptor as JSON. Accepts `emit jo_product 1 1` or
    /// a full expression like `emit "product(z4(1),q8_join(0))"`.
    Emit {
        name: String,
        params: Vec<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, anyhow::Error> {
    match &cli.command {
        Command::Verify { input, trace } => cmd_verify(input, *trace, cli.json),
        Command::Bound { dims } => {
            let value = checker::bound(dims);
            if cli.json {
                let mus: Vec<u32> = dims.iter().map(|&n| checker::mu(n)).collect();
                println!("{}", json!({"dims": dims, "mu": mus, "bound": value}));
            } else {
                println!("{value}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sspage {
            action,
            window,
            page,
        } => cmd_sspage(action, *window, *page, cli.json),
        Command::Cohomology(sub) => cmd_cohomology(sub, cli.json),
        Command::Examples(sub) => cmd_examples(sub, cli.json),
        Command::Selftest {
            which,
            samples,
            seed,
        } => cmd_selftest(which, *samples, *seed, cli.json),
    }
}

fn read_descriptor(input: &str) -> Result<ActionDescriptor, CheckerError> {
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CheckerError::Malformed(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| CheckerError::Malformed(format!("{input}: {e}")))?
    };
    ActionDescriptor::from_json_str(&text)
}

fn print_verdict_text(verdict: &Verdict, trace: bool) {
    println!("verdict: {}", if verdict.pass { "PASS" } else { "FAIL" });
    println!("  {}", verdict.label);
    if !verdict.stripped.ones.is_empty() || !verdict.stripped.zeros.is_empty() {
        println!(
            "  stripped factors: dims=1 at {:?}, dims=0 at {:?}",
            verdict.stripped.ones, verdict.stripped.zeros
        );
    }
    for check in &verdict.conditions {
        let mark = if check.ok { "ok  " } else { "FAIL" };
        print!("  [{mark}] {}: {}", check.id, check.detail);
        if let Some(w) = &check.witness {
            print!(" [{w}]");
        }
        println!();
    }
    if let Some(cert) = &verdict.trace {
        if trace {
            println!("  trace certificate:");
            println!("    blocks: a={} b={} c={}", cert.a, cert.b, cert.c);
            println!("    combinations tried: {}", cert.combos_tried);
            for (idx, factor, pair) in &cert.chosen_factors {
                println!("    factor {idx}: chose {factor} from {pair}");
            }
            println!("    H basis: {:?} (s = {})", cert.h_basis, cert.s);
            println!("    restricted c-forms: {:?}", cert.restricted_c_forms);
            println!("    c-scan: {}", cert.c_scan);
            println!("    {}", cert.inequality);
            println!("    attains bound: {}", cert.attains_bound);
        } else {
            println!("  {}", cert.inequality);
        }
    }
}

fn cmd_verify(input: &str, trace: bool, as_json: bool) -> Result<ExitCode, anyhow::Error> {
    let desc = read_descriptor(input)?;
    let verdict = checker::verify(&desc)?;
    if as_json {
        println!("{}", serde_json::to_string(&verdict)?);
    } else {
        print_verdict_text(&verdict, trace);
    }
    Ok(if verdict.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_sspage(
    action: &str,
    window: Option<u32>,
    page: u8,
    as_json: bool,
) -> Result<ExitCode, anyhow::Error> {
    if page != 2 && page != 3 {
        return Err(CheckerError::Malformed(format!("page: expected 2 or 3, got {page}")).into());
    }
    let desc = read_descriptor(action)?;
    let window = window.unwrap_or_else(|| desc.default_window());
    let e2 = sseq::build_e2(&desc, window)?;

    let mut slots = Vec::new();
    if page == 2 {
        for p in 0..=window {
            for q in 0..=(window - p) {
                let dim = e2.slot(p, q).map_or(0, |s| s.dim());
                slots.push((p, q, Some(dim), "n/a".to_string()));
            }
        }
    } else {
        let mut e3 = sseq::turn_page(e2);
        sseq::d3_on_squares(&mut e3)?;
        for p in 0..=window {
            for q in 0..=(window - p) {
                let slot = e3.slot(p, q).unwrap();
                let dim = if slot.valid { Some(slot.dim) } else { None };
                let d3 = match slot.d3 {
                    D3Status::Known(_) => "known",
                    D3Status::Unknown => "unknown",
                    D3Status::NotComputed => "n/a",
                };
                slots.push((p, q, dim, d3.to_string()));
            }
        }
    }

    if as_json {
        let entries: Vec<serde_json::Value> = slots
            .iter()
            .map(|(p, q, dim, d3)| {
                json!({"p": p, "q": q, "dim": dim, "valid": dim.is_some(), "d3": d3})
            })
            .collect();
        println!(
            "{}",
            json!({"window": window, "page": page, "slots": entries})
        );
    } else {
        println!("E{page} page, window {window} (rows q, columns p; `?` = outside the window)");
        let max_q = window;
        print!("  q\\p");
        for p in 0..=window {
            print!("{p:>5}");
        }
        println!();
        for q in (0..=max_q).rev() {
            print!("{q:>5}");
            for p in 0..=window {
                if p + q > window {
                    print!("{:>5}", "");
                    continue;
                }
                let entry = slots
                    .iter()
                    .find(|(sp, sq, _, _)| *sp == p && *sq == q)
                    .unwrap();
                match entry.2 {
                    Some(d) => print!("{d:>5}"),
                    None => print!("{:>5}", "?"),
                }
            }
            println!();
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cohomology(sub: &CohomologyCmd, as_json: bool) -> Result<ExitCode, anyhow::Error> {
    match sub {
        CohomologyCmd::RpProduct(args) => {
            let coeff = match args.coeff.as_str() {
                "z" | "Z" => Coefficients::Integers,
                "f2" | "F2" => Coefficients::Mod(2),
                other => {
                    return Err(
                        CheckerError::Malformed(format!("coeff: expected z or f2, got {other}"))
                            .into(),
                    )
                }
            };
            let complex = homalg::rp_product_complex(&args.dims)?;
            let table = cohomology_table(&complex, args.max_degree as usize, coeff)?;
            if as_json {
                let groups: Vec<String> = table.iter().map(ToString::to_string).collect();
                println!(
                    "{}",
                    json!({"dims": args.dims, "coeff": args.coeff, "groups": groups})
                );
            } else {
                for (n, group) in table.iter().enumerate() {
                    println!("H^{n} = {group}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CohomologyCmd::Presentation(args) => {
            let report = intcoh::x_verify_dims(&args.dims, args.max_degree)
                .map_err(|e| CheckerError::Malformed(e.to_string()))?;
            if as_json {
                let rows: Vec<serde_json::Value> = report
                    .rows
                    .iter()
                    .map(|row| {
                        json!({
                            "n": row.n,
                            "f2_dim": row.f2_dim,
                            "free": row.free_rank,
                            "torsion": row.torsion_here,
                            "oracle_free": row.oracle_free,
                            "oracle_torsion": row.oracle_torsion,
                            "ok": row.ok,
                        })
                    })
                    .collect();
                println!("{}", json!({"dims": report.dims, "pass": report.pass, "rows": rows}));
            } else {
                println!("  n  dimF2  free  torsion  oracle(free,torsion)  ok");
                for row in &report.rows {
                    println!(
                        "{:>3}  {:>5}  {:>4}  {:>7}  {:>19}  {}",
                        row.n,
                        row.f2_dim,
                        row.free_rank,
                        row.torsion_here,
                        format!("({},{})", row.oracle_free, row.oracle_torsion),
                        if row.ok { "ok" } else { "FAIL" }
                    );
                }
                println!("presentation check: {}", if report.pass { "PASS" } else { "FAIL" });
            }
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn cmd_examples(sub: &ExamplesCmd, as_json: bool) -> Result<ExitCode, anyhow::Error> {
    match sub {
        ExamplesCmd::List => {
            if as_json {
                let entries: Vec<serde_json::Value> = catalog_names()
                    .iter()
                    .map(|(name, doc)| json!({"name": name, "doc": doc}))
                    .collect();
                println!("{}", json!(entries));
            } else {
                for (name, doc) in catalog_names() {
                    println!("{name:24} {doc}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        ExamplesCmd::Emit { name, params } => {
            // Flat params, or a single expression; nested specs arrive as
            // one shell word each, so rejoin before parsing.
            let desc = if name.contains('(') || params.is_empty() {
                let expr = if params.is_empty() {
                    name.clone()
                } else {
                    format!(
                        "{name}({})",
                        params
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                };
                CatalogSpec::parse(&expr).and_then(|s| s.build())
            } else {
                checker::catalog(name, params)
            }?;
            println!("{}", serde_json::to_string(&desc)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_selftest(
    which: &str,
    samples: u64,
    seed: u64,
    as_json: bool,
) -> Result<ExitCode, anyhow::Error> {
    let mut pass = true;
    let mut lines: Vec<(String, bool)> = Vec::new();
    match which {
        "lemma33" => {
            for k in 1..=3usize {
                let pair = disc_pair(k);
                for m in [2i64, 4] {
                    let d = pair_coefficient_diagram(&pair, m)?;
                    let out = d.nine_check_all()?;
                    lines.push((format!("{}: anticommutes", d.name), out.holds));
                    pass &= out.holds;
                }
            }
            for n in 2..=4usize {
                let pair = rp_pair(n);
                for m in [2i64, 4] {
                    let d = pair_coefficient_diagram(&pair, m)?;
                    let out = d.nine_check_all()?;
                    lines.push((format!("{}: anticommutes", d.name), out.holds));
                    pass &= out.holds;
                }
            }
            let d = pair_coefficient_diagram(&moore_cone_pair(4), 4)?;
            let out = d.nine_check_all()?;
            lines.push((format!("{}: anticommutes", d.name), out.holds));
            let observable = out.samples.iter().any(|s| {
                s.sign_observable && s.value_order.is_some_and(|o| o >= 4)
            });
            lines.push((
                format!("{}: sign observable on an order-4 class", d.name),
                observable,
            ));
            pass &= out.holds && observable;
        }
        "propD" => {
            let exhaustive = checker::propd_smalltest(3, 1, 0, seed)?;
            let ok = exhaustive.counterexamples.is_empty();
            lines.push((
                format!(
                    "s=3, c=1 exhaustive over {} forms: all have a nonzero zero",
                    exhaustive.tuples_tested
                ),
                ok,
            ));
            pass &= ok;
            let sampled = checker::propd_smalltest(5, 2, samples, seed)?;
            let ok = sampled.counterexamples.is_empty();
            lines.push((
                format!(
                    "s=5, c=2 sampled {} pairs: no counterexample",
                    sampled.tuples_tested
                ),
                ok,
            ));
            pass &= ok;
        }
        "bc-relations" => {
            let subsets: Vec<Vec<usize>> = (1u32..8)
                .map(|m| (0..3).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect())
                .collect();
            let mut all = true;
            for i_set in &subsets {
                for j_set in &subsets {
                    all &= intcoh::verify_bc_relation(i_set, j_set, 3)
                        .map_err(|e| CheckerError::Malformed(e.to_string()))?;
                }
            }
            lines.push(("49 product relations under the empty-index-is-zero reading".into(), all));
            pass &= all;
            let (lhs, rhs) = intcoh::bc_relation_sides(&[1], &[1, 2], 2, true)
                .map_err(|e| CheckerError::Malformed(e.to_string()))?;
            let inconsistent = lhs != rhs;
            lines.push((
                "empty-index-is-one reading is inconsistent on I={1}, J={1,2}".into(),
                inconsistent,
            ));
            pass &= inconsistent;
        }
        "presentation" => {
            for dims in [vec![3u32], vec![2, 3], vec![3, 5]] {
                let report = intcoh::x_verify_dims(&dims, 8)
                    .map_err(|e| CheckerError::Malformed(e.to_string()))?;
                lines.push((format!("dims {dims:?} through degree 8"), report.pass));
                pass &= report.pass;
            }
        }
        other => {
            return Err(CheckerError::Malformed(format!(
                "selftest: unknown battery `{other}` (expected lemma33, propD, bc-relations, presentation)"
            ))
            .into())
        }
    }
    if as_json {
        let entries: Vec<serde_json::Value> = lines
            .iter()
            .map(|(name, ok)| json!({"check": name, "pass": ok}))
            .collect();
        println!("{}", json!({"battery": which, "pass": pass, "checks": entries}));
    } else {
        for (name, ok) in &lines {
            println!("[{}] {name}", if *ok { "ok  " } else { "FAIL" });
        }
        println!("selftest {which}: {}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
