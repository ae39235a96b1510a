use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;
use xsect_core::binom::parse_exact;
use xsect_core::exchange::{certify_matching, exchange_lemma1};
use xsect_core::search::{max_diversity, problem1_curve, SearchConfig};
use xsect_core::shifting::{shift_preserving_nontriviality, shift_to_fixpoint};
use xsect_core::verifiers::{
    verify_ekr, verify_hm, verify_lemma2, verify_thm4, verify_thm5_cor1, verify_thm6, Lemma2Options, SkipKind,
    Thm6Options, Verdict, VerifierReport,
};
use xsect_core::{lex_family, lex_rank, lex_unrank, BigCount, Exact, GroundParams, KSet, LexRank, Point, SetFamily};

use crate::args::{Cli, Command, Format, Lex, Search, SearchCommon, Verify};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
/// An internal consistency check failed.
pub const EXIT_INTERNAL: i32 = 4;

pub fn error_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<xsect_core::Error>() {
        Some(xsect_core::Error::InvariantViolated(_)) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify(v) => verify(v),
        Command::Shift(args) => {
            let fam = read_family(&args.input)?;
            let value = if args.preserve_nontrivial {
                to_json(&shift_preserving_nontriviality(&fam)?)?
            } else {
                let (family, trace) = shift_to_fixpoint(&fam)?;
                to_json(&json!({ "family": family, "trace": trace }))?
            };
            emit(&value, args.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Exchange(args) => {
            let fam = read_family(&args.input)?;
            let ex = exchange_lemma1(&fam)?;
            let ctx = &ex.context;
            let value = json!({
                "context": {
                    "pivot": ctx.pivot.to_vec(),
                    "l": ctx.l,
                    "L": ctx.big_l.to_vec(),
                    "prefix_len": ctx.prefix_len,
                    "A": ctx.fam_a,
                    "B": ctx.fam_b,
                },
                "degree": ex.degree,
                "graph": ex.graph.dump(Some(&certify_matching(&ex.graph))),
                "family": ex.family,
                "order_before": ex.order_before.get(),
                "order_after": ex.order_after.get(),
                "l_equals_k": ex.l_equals_k,
            });
            emit(&to_json(&value)?, args.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Lex(l) => lex(l),
        Command::Search(s) => search(s),
    }
}

fn verify(v: Verify) -> Result<i32> {
    let (report, out) = match v {
        Verify::Ekr { n, k, mode, common } => (verify_ekr(n, k, mode.into(), common.budget)?, common.out),
        Verify::Hm { n, k, mode, common } => (verify_hm(n, k, mode.into(), common.budget)?, common.out),
        Verify::Thm4 {
            n,
            a,
            b,
            j,
            point,
            common,
        } => {
            let point = Point::from_index(point).context("point must be 1, 2 or 3")?;
            (verify_thm4(n, a, b, j, point, common.budget)?, common.out)
        }
        Verify::Thm5 { n, a, b, alpha, common } => {
            let alpha = exact_arg("alpha", &alpha)?;
            (verify_thm5_cor1(n, a, b, &alpha, common.budget)?, common.out)
        }
        Verify::Thm6 {
            n,
            k,
            u,
            mode,
            trials,
            seed,
            common,
        } => {
            let u = exact_arg("u", &u)?;
            let opts = Thm6Options {
                mode: mode.into(),
                trials,
                seed,
                budget: common.budget,
            };
            (verify_thm6(n, k, &u, opts)?, common.out)
        }
        Verify::Lemma2 {
            n,
            k,
            trials,
            seed,
            common,
        } => {
            let opts = Lemma2Options {
                trials,
                seed,
                budget: common.budget,
            };
            (verify_lemma2(n, k, opts)?, common.out)
        }
    };
    emit(&to_json(&report)?, out.as_deref())?;
    verdict_code(&report, out.as_deref())
}

fn verdict_code(report: &VerifierReport, out: Option<&Path>) -> Result<i32> {
    Ok(match &report.verdict {
        Verdict::Verified => EXIT_OK,
        Verdict::Counterexample => {
            if let (Some(out), Some(w)) = (out, &report.witness) {
                let path = witness_path(out);
                emit(&to_json(w)?, Some(&path))?;
                eprintln!("counterexample: witness written to {}", path.display());
            } else {
                eprintln!("counterexample: witness included in the report");
            }
            EXIT_COUNTEREXAMPLE
        }
        Verdict::Skipped {
            kind: SkipKind::Budget,
            reason,
        } => {
            eprintln!("skipped: {reason}");
            EXIT_BUDGET
        }
        Verdict::Skipped { .. } => EXIT_OK,
    })
}

fn witness_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}.witness.json"))
}

fn lex(l: Lex) -> Result<i32> {
    let value = match l {
        Lex::Rank { n, k, set } => {
            GroundParams::new(n, k)?;
            let s = KSet::from_elements(n, &set)?;
            if s.len() != k {
                bail!("set {s} has {} elements, expected {k}", s.len());
            }
            json!({ "n": n, "k": k, "set": s.to_vec(), "rank": lex_rank(&s).get() })
        }
        Lex::Unrank { n, k, rank } => {
            let params = GroundParams::new(n, k)?;
            let s = lex_unrank(LexRank::new(rank, params)?, params)?;
            json!({ "n": n, "k": k, "rank": rank, "set": s.to_vec() })
        }
        Lex::Segment { n, k, m } => {
            let params = GroundParams::new(n, k)?;
            serde_json::to_value(lex_family(params, &BigCount::from(m))?)?
        }
    };
    println!("{}", to_json(&value)?);
    Ok(EXIT_OK)
}

fn search_config(s: &SearchCommon) -> Result<SearchConfig> {
    let params = GroundParams::new(s.n, s.k)?;
    Ok(SearchConfig::new(params, s.common.budget, s.mode.into(), s.seed)?.with_trials(s.trials))
}

fn search(s: Search) -> Result<i32> {
    match s {
        Search::Diversity { search, witness_dir } => {
            let report = max_diversity(&search_config(&search)?)?;
            if let Some(dir) = witness_dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(format!("{}.json", report.witness_id));
                emit(&to_json(&report.witness)?, Some(&path))?;
            }
            let text = match search.format {
                Format::Json => to_json(&report)?,
                Format::Csv => format!("{}\n{}", xsect_core::search::DiversityReport::CSV_HEADER, report.csv_row()),
            };
            emit(&text, search.common.out.as_deref())?;
            Ok(if report.lower_bound_only { EXIT_BUDGET } else { EXIT_OK })
        }
        Search::Problem1 { search, c_grid } => {
            let grid = c_grid.iter().map(|c| exact_arg("c-grid", c)).collect::<Result<Vec<_>>>()?;
            let table = problem1_curve(&search_config(&search)?, &grid)?;
            let text = match search.format {
                Format::Json => to_json(&table)?,
                Format::Csv => {
                    let mut lines = vec![xsect_core::search::Problem1Table::CSV_HEADER.to_string()];
                    lines.extend(table.csv_rows());
                    lines.join("\n")
                }
            };
            emit(&text, search.common.out.as_deref())?;
            Ok(if table.partial { EXIT_BUDGET } else { EXIT_OK })
        }
    }
}

fn exact_arg(name: &str, s: &str) -> Result<Exact> {
    parse_exact(s).with_context(|| format!("--{name}: {s:?} is not an exact number (try 5/2 or 2.5)"))
}

fn read_family(path: &Path) -> Result<SetFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing family JSON in {}", path.display()))
}

/// One-line JSON; struct fields keep their declaration order.
fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
