//! Exhaustive checks of the classification statements over the catalog.
//!
//! The forward pass builds witnesses for each case and checks their `t`.
//! The backward pass sweeps every catalog pair within budget and checks that
//! each pair with the statement's `t` lands in one of its cases, and that no
//! pair matching a case has a different `t`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::cases::{
    Classifier, ComplementPattern, NormalPattern, Status, Theorem, TheoremCase, CAPABILITY_NOTE,
};
use super::enumerate::{
    catalog_closure, catalog_pairs, max_exponent, CatalogGroup, CatalogPair, PairLabel, SweepScope,
};
use super::CatalogError;
use crate::group::{min_generators, FiniteGroup};
use crate::homology::{MultiplierCache, HOMOLOGY_HARD_CAP};
use crate::pair::{analyze_pair, PairContext, PairReport};

/// Default sweep budget: 32 at `p = 2`, otherwise the largest power of `p`
/// within the homology cap.
pub fn default_budget(p: u64) -> usize {
    if p == 2 {
        32
    } else {
        (p as usize).pow(max_exponent(p, HOMOLOGY_HARD_CAP))
    }
}

/// One evaluated pair.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub pair: CatalogPair,
    pub context: PairContext,
    pub report: PairReport,
}

/// Every catalog pair at one prime and budget, with its analysis.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub p: u64,
    pub budget: usize,
    pub closure_size: usize,
    pub entries: Vec<SweepEntry>,
}

fn check_budget(budget: usize) -> Result<(), CatalogError> {
    if budget > HOMOLOGY_HARD_CAP {
        Err(CatalogError::AboveHardCap { budget })
    } else {
        Ok(())
    }
}

fn evaluate(
    pair: CatalogPair,
    p: u64,
    cache: &MultiplierCache,
    budget: usize,
) -> Result<SweepEntry, CatalogError> {
    let fail = |source| CatalogError::Pair {
        pair: pair.to_string(),
        source,
    };
    let context = pair.context(p).map_err(fail)?;
    let report = analyze_pair(&context, cache, budget).map_err(fail)?;
    Ok(SweepEntry {
        pair,
        context,
        report,
    })
}

impl Sweep {
    pub fn compute(p: u64, budget: usize, cache: &MultiplierCache) -> Result<Sweep, CatalogError> {
        check_budget(budget)?;
        let closure_size = catalog_closure(p, budget)?.len();
        let pairs = catalog_pairs(p, budget, SweepScope::ALL)?;
        let entries = pairs
            .into_par_iter()
            .map(|pair| evaluate(pair, p, cache, budget))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sweep {
            p,
            budget,
            closure_size,
            entries,
        })
    }

    pub fn direct_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.pair.action.is_none())
            .count()
    }
}

/// A pair as it appears in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairFinding {
    #[serde(flatten)]
    pub pair: PairLabel,
    pub order: usize,
    pub t: u32,
    pub matched_cases: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardStatus {
    Pass,
    Fail,
    /// The smallest witness is larger than the homology cap.
    BeyondCap,
    /// The case names groups that do not exist at this prime.
    PIncompatible,
    /// The case asserts nothing checkable forward.
    NecessityOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForwardResult {
    pub case: String,
    pub expected_t: u32,
    pub status: ForwardStatus,
    pub witnesses: Vec<PairFinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BackwardSummary {
    pub pairs_checked: usize,
    pub confirmed: usize,
    pub unlisted: usize,
    pub mismatches: Vec<PairFinding>,
    pub unlisted_pairs: Vec<PairFinding>,
    /// Pairs with the statement's `t` whose complement is not normal, which
    /// the statement's hypothesis excludes.
    pub outside_hypotheses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub theorem: Theorem,
    pub p: u64,
    pub budget: usize,
    pub forward: Vec<ForwardResult>,
    pub backward: BackwardSummary,
    pub coverage_note: String,
}

impl HarnessReport {
    pub fn mismatch_count(&self) -> usize {
        self.backward.mismatches.len()
            + self
                .forward
                .iter()
                .filter(|f| f.status == ForwardStatus::Fail)
                .count()
    }

    /// Nothing failed: no forward failure, no mismatch, no unlisted pair.
    pub fn is_clean(&self) -> bool {
        self.mismatch_count() == 0 && self.backward.unlisted == 0
    }
}

fn finding(entry_pair: &CatalogPair, order: usize, t: u32, matched: Vec<String>) -> PairFinding {
    PairFinding {
        pair: entry_pair.label(),
        order,
        t,
        matched_cases: matched,
    }
}

/// Candidate normal subgroups for a forward case.
fn forward_normals(case: &TheoremCase, p: u64, closure: &[CatalogGroup]) -> Vec<CatalogGroup> {
    match case.normal {
        NormalPattern::Trivial => vec![closure[0].clone()],
        NormalPattern::Iso(shape) => shape
            .spec(p)
            .and_then(|s| CatalogGroup::from_spec(s).ok())
            .into_iter()
            .collect(),
        NormalPattern::ElementaryAbelianPair => closure
            .iter()
            .filter(|g| g.order() > 1 && is_elementary_abelian(&g.group, p))
            .cloned()
            .collect(),
        NormalPattern::ExtraspecialPair => Vec::new(),
    }
}

fn is_elementary_abelian(g: &FiniteGroup, p: u64) -> bool {
    g.is_abelian() && (g.order() == 1 || g.exponent() as u64 == p)
}

/// Candidate complements for a forward case, given `N`.
fn forward_complements(
    case: &TheoremCase,
    p: u64,
    n: &CatalogGroup,
    closure: &[CatalogGroup],
    budget: usize,
) -> Vec<CatalogGroup> {
    let fits = |k: &&CatalogGroup| n.order() * k.order() <= budget;
    match case.complement {
        ComplementPattern::Trivial => vec![closure[0].clone()],
        ComplementPattern::Iso(shape) => shape
            .spec(p)
            .and_then(|s| CatalogGroup::from_spec(s).ok())
            .into_iter()
            .collect(),
        ComplementPattern::Any => closure
            .iter()
            .filter(fits)
            .filter(|k| {
                case.normal != NormalPattern::ElementaryAbelianPair
                    || is_elementary_abelian(&k.group, p)
            })
            .cloned()
            .collect(),
        ComplementPattern::GeneratorDeficit(j) => closure
            .iter()
            .filter(fits)
            .filter(|k| {
                let m = k.group.log_order(p).expect("p-group");
                min_generators(&k.group, p).is_ok_and(|d| d + j == m)
            })
            .cloned()
            .collect(),
    }
}

struct ForwardPlan {
    results: Vec<ForwardResult>,
    blocked: Vec<String>,
    beyond_cap: Vec<String>,
}

fn forward_pass(
    theorem: Theorem,
    p: u64,
    budget: usize,
    closure: &[CatalogGroup],
    classifier: &Classifier,
    cache: &MultiplierCache,
) -> Result<ForwardPlan, CatalogError> {
    let mut plan = ForwardPlan {
        results: Vec::new(),
        blocked: Vec::new(),
        beyond_cap: Vec::new(),
    };
    for case in theorem.cases() {
        let mut result = ForwardResult {
            case: case.case_id.to_string(),
            expected_t: case.t_value,
            status: ForwardStatus::Pass,
            witnesses: Vec::new(),
            note: None,
        };
        if case.normal == NormalPattern::ExtraspecialPair {
            result.status = ForwardStatus::NecessityOnly;
            result.note = Some(format!(
                "only the extraspecial-pair predicate is checked; {CAPABILITY_NOTE}"
            ));
            plan.results.push(result);
            continue;
        }
        let Some((n_exp, m_exp)) = case.minimal_witness_exponents(p) else {
            result.status = ForwardStatus::PIncompatible;
            result.note = Some(format!("no instance at p = {p}"));
            plan.results.push(result);
            continue;
        };
        let minimal = (p as u128).pow(n_exp + m_exp);
        if minimal > HOMOLOGY_HARD_CAP as u128 {
            result.status = ForwardStatus::BeyondCap;
            result.note = Some(format!("smallest witness has order {minimal}"));
            plan.beyond_cap
                .push(format!("{} ({minimal})", case.case_id));
            plan.results.push(result);
            continue;
        }
        if minimal > budget as u128 {
            plan.blocked
                .push(format!("{} needs |G| = {minimal}", case.case_id));
            continue;
        }
        let mut pairs = Vec::new();
        for n in forward_normals(case, p, closure) {
            for k in forward_complements(case, p, &n, closure, budget) {
                if n.order() * k.order() <= budget {
                    pairs.push(CatalogPair::direct(n.clone(), k));
                }
            }
        }
        let evaluated = pairs
            .into_par_iter()
            .map(|pair| evaluate(pair, p, cache, budget))
            .collect::<Result<Vec<_>, _>>()?;
        for e in evaluated {
            let verdict = classifier.classify_among(&e.context, e.report.t, theorem.cases());
            let ok = e.report.t == case.t_value && verdict.status == Status::Confirmed;
            if !ok {
                result.status = ForwardStatus::Fail;
            }
            result.witnesses.push(finding(
                &e.pair,
                e.pair.order(),
                e.report.t,
                verdict.matched_cases,
            ));
        }
        if result.witnesses.is_empty() {
            result.status = ForwardStatus::Fail;
            result.note = Some("no witness within budget".into());
        }
        if matches!(case.complement, ComplementPattern::GeneratorDeficit(_))
            && result.witnesses.len() < 3
        {
            result.note = Some(format!(
                "{} complement choice(s) within budget {budget}",
                result.witnesses.len()
            ));
        }
        plan.results.push(result);
    }
    Ok(plan)
}

fn backward_pass(theorem: Theorem, sweep: &Sweep, classifier: &Classifier) -> BackwardSummary {
    let target = theorem.t_value();
    let verdicts: Vec<_> = sweep
        .entries
        .par_iter()
        .map(|e| {
            let direct = e.pair.action.is_none();
            if theorem.assumes_normal_complement() && !direct {
                return None;
            }
            Some(classifier.classify_among(&e.context, e.report.t, theorem.cases()))
        })
        .collect();
    let mut summary = BackwardSummary::default();
    for (e, v) in sweep.entries.iter().zip(verdicts) {
        let t = e.report.t;
        let Some(v) = v else {
            if t == target {
                summary.outside_hypotheses += 1;
            }
            continue;
        };
        summary.pairs_checked += 1;
        let found = || finding(&e.pair, e.pair.order(), t, v.matched_cases.clone());
        match v.status {
            Status::Confirmed => summary.confirmed += 1,
            Status::Mismatch => summary.mismatches.push(found()),
            Status::Unlisted if t == target => summary.unlisted_pairs.push(found()),
            Status::Unlisted => {}
        }
    }
    summary.unlisted = summary.unlisted_pairs.len();
    summary
}

fn coverage_note(theorem: Theorem, sweep: &Sweep, beyond_cap: &[String]) -> String {
    let p = sweep.p;
    let semidirect = sweep.entries.len() - sweep.direct_count();
    let mut note = format!(
        "catalog closure at p = {p}, |G| <= {}: {} groups (the trivial group, all groups of order p, p^2, p^3, \
         all abelian p-groups, direct products of two of these); {} direct pairs; {} semidirect pairs \
         (factors of order at most p^3, every nontrivial action up to conjugation in Aut(N))",
        sweep.budget,
        sweep.closure_size,
        sweep.direct_count(),
        semidirect
    );
    if theorem.assumes_normal_complement() {
        note.push_str("; backward sweep restricted to direct pairs (K normal)");
    }
    if theorem == Theorem::T12 {
        note.push_str("; case (iii) checks the extraspecial-pair predicate only, ");
        note.push_str(CAPABILITY_NOTE);
    }
    if !beyond_cap.is_empty() {
        let _ = write!(note, "; beyond_cap: {}", beyond_cap.join(", "));
    }
    note
}

/// Runs both passes for one statement at one prime, reusing `sweep` when it
/// matches `p` and `budget`.
pub fn verify_with_sweep(
    theorem: Theorem,
    sweep: &Sweep,
    cache: &MultiplierCache,
) -> Result<HarnessReport, CatalogError> {
    let (p, budget) = (sweep.p, sweep.budget);
    let closure = catalog_closure(p, budget)?;
    let classifier = Classifier::new(p);
    let plan = forward_pass(theorem, p, budget, &closure, &classifier, cache)?;
    if !plan.blocked.is_empty() {
        return Err(CatalogError::BudgetExceeded {
            budget,
            blocked: plan.blocked,
        });
    }
    let backward = backward_pass(theorem, sweep, &classifier);
    Ok(HarnessReport {
        theorem,
        p,
        budget,
        forward: plan.results,
        backward,
        coverage_note: coverage_note(theorem, sweep, &plan.beyond_cap),
    })
}

pub fn verify_theorem(
    theorem: Theorem,
    p: u64,
    budget: usize,
    cache: &MultiplierCache,
) -> Result<HarnessReport, CatalogError> {
    let sweep = Sweep::compute(p, budget, cache)?;
    verify_with_sweep(theorem, &sweep, cache)
}

/// Every requested statement at every requested prime, one sweep per prime.
/// `budget = None` uses [`default_budget`] for each prime.
pub fn verify_theorems(
    theorems: &[Theorem],
    primes: &[u64],
    budget: Option<usize>,
    cache: &MultiplierCache,
) -> Result<Vec<HarnessReport>, CatalogError> {
    if let Some(b) = budget {
        check_budget(b)?;
    }
    let mut out = Vec::new();
    for &p in primes {
        let budget = budget.unwrap_or_else(|| default_budget(p));
        let sweep = Sweep::compute(p, budget, cache)?;
        for &theorem in theorems {
            out.push(verify_with_sweep(theorem, &sweep, cache)?);
        }
    }
    Ok(out)
}

/// Plain-text rendering carrying the same data as the JSON form.
pub fn render_text(reports: &[HarnessReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(s, "{} at p = {}, budget {}", r.theorem, r.p, r.budget);
        let _ = writeln!(s, "  {:<10} {:>3}  {:<15} witnesses", "case", "t", "status");
        for f in &r.forward {
            let status = serde_json::to_value(f.status).expect("serializable");
            let ws: Vec<String> = f
                .witnesses
                .iter()
                .map(|w| {
                    format!(
                        "({}; {}){}",
                        w.pair.normal,
                        w.pair.complement,
                        if w.t == f.expected_t { "" } else { "!" }
                    )
                })
                .collect();
            let _ = writeln!(
                s,
                "  {:<10} {:>3}  {:<15} {}",
                f.case,
                f.expected_t,
                status.as_str().unwrap_or_default(),
                ws.join(" ")
            );
            if let Some(note) = &f.note {
                let _ = writeln!(s, "  {:<10} {:>3}  {:<15} note: {note}", "", "", "");
            }
        }
        let b = &r.backward;
        let _ = writeln!(
            s,
            "  backward: {} checked, {} confirmed, {} unlisted, {} mismatches, {} outside hypotheses",
            b.pairs_checked,
            b.confirmed,
            b.unlisted,
            b.mismatches.len(),
            b.outside_hypotheses
        );
        for (kind, list) in [("mismatch", &b.mismatches), ("unlisted", &b.unlisted_pairs)] {
            for f in list {
                let _ = writeln!(
                    s,
                    "    {kind}: N = {}, K = {}{}, t = {}, matched [{}]",
                    f.pair.normal,
                    f.pair.complement,
                    f.pair
                        .action
                        .map(|a| format!(", action #{a}"))
                        .unwrap_or_default(),
                    f.t,
                    f.matched_cases.join(", ")
                );
            }
        }
        let _ = writeln!(s, "  coverage: {}", r.coverage_note);
    }
    s
}
