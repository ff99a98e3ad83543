//! `schurpair`: Schur multipliers of groups and pairs from the command line.
//!
//! Exit codes: 0 success, 1 a verification found a mismatch, 2 bad input,
//! 3 size budget, 4 internal error, 5 no complement or no direct factor.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schurpair::abelian::log_base;
use schurpair::catalog::{
    build_group, catalog_closure, default_budget, groups_of_order, parse_spec, read_action_file,
    render_text, verify_theorems, CatalogError, Classifier, Theorem,
};
use schurpair::group::{direct_product, semidirect_product, FiniteGroup, GroupError};
use schurpair::homology::{
    HomologyError, MultiplierCache, DEFAULT_HOMOLOGY_BUDGET, HOMOLOGY_HARD_CAP,
};
use schurpair::pair::{analyze_pair, PairContext, PairError};

#[derive(Parser)]
#[command(
    name = "schurpair",
    version,
    about = "Schur multipliers of finite p-groups and of pairs of groups"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Multiplier cache file, read if present and written back on success.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// The Schur multiplier of one group.
    Multiplier {
        spec: String,
        /// Largest group order to compute homology for.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// The multiplier of the pair (N x K, N), or (N ⋊ K, N) with --action.
    Pair {
        normal: String,
        complement: String,
        #[arg(long)]
        action: Option<PathBuf>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Matches a pair against the classification cases.
    Classify {
        normal: String,
        complement: String,
        #[arg(long)]
        action: Option<PathBuf>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Checks classification statements over the catalog.
    Verify {
        /// T10, T12, T13, T14, T15 or all.
        #[arg(required = true)]
        theorems: Vec<String>,
        /// Primes, comma separated.
        #[arg(long = "p", value_delimiter = ',', default_values_t = [2u64, 3])]
        primes: Vec<u64>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Lists catalog groups.
    Catalog {
        /// `p^k` (k <= 3) for one order, or a bare prime for the closure.
        #[arg(long)]
        order: Option<String>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn group_code(e: &GroupError) -> u8 {
    match e {
        GroupError::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn homology_code(e: &HomologyError) -> u8 {
    match e {
        HomologyError::BudgetExceeded { .. } | HomologyError::AboveHardCap(_) => 3,
        HomologyError::Cache(_) => 2,
        HomologyError::InternalFreeRank(_) | HomologyError::Linear(_) => 4,
    }
}

fn pair_code(e: &PairError) -> u8 {
    match e {
        PairError::NoComplement | PairError::NotADirectFactor(_) => 5,
        PairError::InvalidContext(_) => 2,
        PairError::Group(g) => group_code(g),
        PairError::Homology(h) => homology_code(h),
        PairError::BoundViolation { .. } => 4,
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Failure {
        let code = match &e {
            CatalogError::BudgetExceeded { .. } | CatalogError::AboveHardCap { .. } => 3,
            CatalogError::Group(g) => group_code(g),
            CatalogError::Pair { source, .. } => pair_code(source),
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<PairError> for Failure {
    fn from(e: PairError) -> Failure {
        Failure::new(pair_code(&e), e.to_string())
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Failure {
        Failure::new(homology_code(&e), e.to_string())
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Failure {
        Failure::new(group_code(&e), e.to_string())
    }
}

/// What a command produced: the same data as JSON and as text, plus
/// whether it counts as success.
struct Output {
    json: Value,
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                ),
                Format::Text => print!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let cache = match &cli.cache {
        Some(path) if path.exists() => MultiplierCache::load(path)?,
        _ => MultiplierCache::new(),
    };
    let out = match &cli.command {
        Command::Multiplier { spec, budget } => multiplier(spec, *budget, &cache)?,
        Command::Pair {
            normal,
            complement,
            action,
            budget,
        } => pair(
            normal,
            complement,
            action.as_deref(),
            *budget,
            &cache,
            false,
        )?,
        Command::Classify {
            normal,
            complement,
            action,
            budget,
        } => pair(normal, complement, action.as_deref(), *budget, &cache, true)?,
        Command::Verify {
            theorems,
            primes,
            budget,
        } => verify(theorems, primes, *budget, &cache)?,
        Command::Catalog { order } => catalog(order.as_deref())?,
    };
    if let Some(path) = &cli.cache {
        cache.save(path)?;
    }
    Ok(out)
}

fn check_budget(budget: usize) -> Result<usize, Failure> {
    if budget > HOMOLOGY_HARD_CAP {
        Err(Failure::new(
            3,
            format!("budget {budget} exceeds the hard cap {HOMOLOGY_HARD_CAP}"),
        ))
    } else {
        Ok(budget)
    }
}

/// The given budget, or the default for the group's prime.
fn budget_for(order: usize, budget: Option<usize>) -> Result<usize, Failure> {
    check_budget(budget.unwrap_or_else(|| match prime_of(order) {
        Some(p) => default_budget(p),
        None => DEFAULT_HOMOLOGY_BUDGET,
    }))
}

/// The prime of a prime-power order.
fn prime_of(order: usize) -> Option<u64> {
    match schurpair::abelian::factorize(order as u64).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

fn load_group(text: &str) -> Result<FiniteGroup, Failure> {
    Ok(build_group(&parse_spec(text)?)?)
}

fn multiplier(
    spec: &str,
    budget: Option<usize>,
    cache: &MultiplierCache,
) -> Result<Output, Failure> {
    let g = load_group(spec)?;
    let budget = budget_for(g.order(), budget)?;
    let m = cache.multiplier(&g, budget)?;
    // For a p-group of order p^n, |M(G)| = p^(n(n-1)/2 - t).
    let t = g.prime_power().map(|(p, n)| {
        let observed = log_base(m.order(), p as u128).expect("multiplier of a p-group");
        (n * n.saturating_sub(1) / 2) as i64 - observed as i64
    });
    let t_text = t.map(|t| format!(", t = {t}")).unwrap_or_default();
    Ok(Output {
        json: json!({
            "group": spec.trim(),
            "order": g.order(),
            "multiplier": m,
            "multiplier_text": m.to_string(),
            "multiplier_order": m.order() as u64,
            "t": t,
        }),
        text: format!("M = {m} (order {}){t_text}\n", m.order()),
        ok: true,
    })
}

fn pair(
    n_text: &str,
    k_text: &str,
    action: Option<&Path>,
    budget: Option<usize>,
    cache: &MultiplierCache,
    classify_only: bool,
) -> Result<Output, Failure> {
    let (n, k) = (load_group(n_text)?, load_group(k_text)?);
    let product = match action {
        None => direct_product(&n, &k),
        Some(path) => semidirect_product(&n, &k, &read_action_file(path, &n, &k)?)?,
    };
    let order = product.group.order();
    let p = match prime_of(order) {
        Some(p) => p,
        None if order == 1 => 2,
        None => {
            return Err(Failure::new(
                2,
                format!("|G| = {order} is not a prime power"),
            ))
        }
    };
    let budget = budget_for(order, budget)?;
    let ctx = PairContext::from_product(product, p)?;
    let mut report = analyze_pair(&ctx, cache, budget)?;
    let verdict = Classifier::new(p).classify(&ctx, report.t);
    report.matched_cases = verdict.matched_cases.clone();
    if classify_only {
        let status = serde_json::to_value(verdict.status).expect("serializable");
        let scope = serde_json::to_value(verdict.scope).expect("serializable");
        let mut text = format!(
            "t = {}, status {}, scope {}, matched [{}]\n",
            verdict.t,
            status.as_str().unwrap_or_default(),
            scope.as_str().unwrap_or_default(),
            verdict.matched_cases.join(", ")
        );
        for note in &verdict.notes {
            text.push_str(&format!("note: {note}\n"));
        }
        return Ok(Output {
            json: serde_json::to_value(&verdict).expect("serializable"),
            text,
            ok: true,
        });
    }
    let text = format!(
        "M(G) = {}\nM(K) = {}\nM(G,N) = {} (order {})\nt = {}\nbound1_slack = {}\nbound7_holds = {}\n\
         commutator_order = {}\npair_center_order = {}\nmatched = [{}]\n",
        report.m_g,
        report.m_k,
        report.m_gn,
        report.m_gn.order(),
        report.t,
        report.bound1_slack,
        report.bound7_holds,
        report.commutator_order,
        report.pair_center_order,
        report.matched_cases.join(", ")
    );
    Ok(Output {
        json: serde_json::to_value(&report).expect("serializable"),
        text,
        ok: true,
    })
}

fn verify(
    ids: &[String],
    primes: &[u64],
    budget: Option<usize>,
    cache: &MultiplierCache,
) -> Result<Output, Failure> {
    let mut theorems = Vec::new();
    for id in ids {
        if id.eq_ignore_ascii_case("all") {
            theorems.extend(Theorem::ALL);
        } else {
            theorems.push(id.parse::<Theorem>()?);
        }
    }
    theorems.sort();
    theorems.dedup();
    if primes.is_empty() {
        return Err(Failure::new(2, "no primes given"));
    }
    if let Some(b) = budget {
        check_budget(b)?;
    }
    let reports = verify_theorems(&theorems, primes, budget, cache)?;
    let mismatches: usize = reports.iter().map(|r| r.mismatch_count()).sum();
    let unlisted: usize = reports.iter().map(|r| r.backward.unlisted).sum();
    let mut text = render_text(&reports);
    text.push_str(&format!(
        "total: {mismatches} mismatches, {unlisted} unlisted\n"
    ));
    Ok(Output {
        json: json!({ "reports": reports, "mismatches": mismatches, "unlisted": unlisted }),
        text,
        ok: mismatches == 0 && unlisted == 0,
    })
}

fn catalog(order: Option<&str>) -> Result<Output, Failure> {
    let groups = match order {
        None => {
            let mut all = Vec::new();
            for p in [2, 3] {
                for k in 1..=3 {
                    all.extend(groups_of_order(p, k)?);
                }
            }
            all
        }
        Some(text) => {
            let bad = || Failure::new(2, format!("--order {text:?}: expected p^k or a prime"));
            match text.split_once('^') {
                Some((p, k)) => {
                    let p: u64 = p.trim().parse().map_err(|_| bad())?;
                    let k: u32 = k.trim().parse().map_err(|_| bad())?;
                    groups_of_order(p, k)?
                }
                None => {
                    let p: u64 = text.trim().parse().map_err(|_| bad())?;
                    catalog_closure(p, default_budget(p))?
                }
            }
        }
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for g in &groups {
        let (order, exponent) = (g.order(), g.group.exponent());
        let (center, derived) = (g.group.center().order(), g.group.derived_subgroup().order());
        text.push_str(&format!(
            "{:<24} order {order:>3}  exponent {exponent:>3}  center {center:>3}  derived {derived:>3}\n",
            g.name()
        ));
        rows.push(json!({
            "name": g.name(),
            "order": order,
            "exponent": exponent,
            "abelian": g.group.is_abelian(),
            "center_order": center,
            "derived_order": derived,
        }));
    }
    Ok(Output {
        json: json!({ "groups": rows }),
        text,
        ok: true,
    })
}
