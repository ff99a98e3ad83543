//! Multipliers of pairs `(G, N)` where `N` has a complement `K`.
//!
//! With `|N| = p^n` and `|K| = p^m`, the deficiency `t` is defined by
//! `|M(G,N)| = p^(n(2m+n-1)/2 - t)`. `M(G,N)` is recovered from
//! `M(G) ≅ M(G,N) × M(K)` by cancelling `M(K)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{log_base, AbelianError, AbelianInvariants};
use crate::group::{
    abelianization, find_complement, pair_center, pair_commutator, FiniteGroup, GroupError,
    Product, Subgroup,
};
use crate::homology::{HomologyError, MultiplierCache};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("the normal subgroup has no complement")]
    NoComplement,
    #[error("invalid pair: {0}")]
    InvalidContext(String),
    #[error(transparent)]
    NotADirectFactor(#[from] AbelianError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("multiplier order p^{observed} exceeds the pair bound p^{bound}")]
    BoundViolation { bound: u32, observed: u32 },
}

impl PairError {
    /// True for errors caused by a size limit rather than by the input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            PairError::Homology(
                HomologyError::BudgetExceeded { .. } | HomologyError::AboveHardCap(_)
            ) | PairError::Group(GroupError::BudgetExceeded { .. })
        )
    }
}

/// A validated pair: `N` normal in `G`, `K` a complement, both `p`-groups.
#[derive(Clone, Debug)]
pub struct PairContext {
    g: FiniteGroup,
    n: Subgroup,
    k: Subgroup,
    p: u64,
    n_exp: u32,
    m_exp: u32,
}

impl PairContext {
    pub fn new(g: FiniteGroup, n: Subgroup, k: Subgroup, p: u64) -> Result<PairContext, PairError> {
        n.require_normal(&g)?;
        if !n.intersect(&k).is_trivial() {
            return Err(PairError::InvalidContext(
                "N and K intersect nontrivially".into(),
            ));
        }
        if n.order() * k.order() != g.order() {
            return Err(PairError::InvalidContext(format!(
                "|N| * |K| = {} * {} differs from |G| = {}",
                n.order(),
                k.order(),
                g.order()
            )));
        }
        let log = |x: usize| {
            log_base(x as u128, p as u128).ok_or(GroupError::NotPGroup {
                order: g.order(),
                p,
            })
        };
        let n_exp = log(n.order())?;
        let m_exp = log(k.order())?;
        Ok(PairContext {
            g,
            n,
            k,
            p,
            n_exp,
            m_exp,
        })
    }

    /// Searches `G` for a complement to `N`.
    pub fn with_complement(g: FiniteGroup, n: Subgroup, p: u64) -> Result<PairContext, PairError> {
        let k = find_complement(&g, &n)?.ok_or(PairError::NoComplement)?;
        PairContext::new(g, n, k, p)
    }

    /// The pair `(N ⋊ K, N)` of a product, with its built-in complement.
    pub fn from_product(product: Product, p: u64) -> Result<PairContext, PairError> {
        PairContext::new(product.group, product.left, product.right, p)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn normal(&self) -> &Subgroup {
        &self.n
    }

    pub fn complement(&self) -> &Subgroup {
        &self.k
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `n` with `|N| = p^n`.
    pub fn n(&self) -> u32 {
        self.n_exp
    }

    /// `m` with `|K| = p^m`.
    pub fn m(&self) -> u32 {
        self.m_exp
    }

    /// `n(2m+n-1)/2`, the exponent of the general bound on `|M(G,N)|`.
    pub fn bound_exponent(&self) -> u32 {
        bound_exponent(self.n_exp, self.m_exp)
    }

    /// When `K` is normal too, `G` is the internal direct product `N × K`.
    pub fn is_direct(&self) -> bool {
        self.k.is_normal_in(&self.g)
    }

    pub fn normal_group(&self) -> FiniteGroup {
        self.n.to_group(&self.g).0
    }

    pub fn complement_group(&self) -> FiniteGroup {
        self.k.to_group(&self.g).0
    }
}

fn bound_exponent(n: u32, m: u32) -> u32 {
    // n(2m+n-1) is always even, and zero when n is.
    if n == 0 {
        0
    } else {
        n * (2 * m + n - 1) / 2
    }
}

/// Everything computed for one pair. Serialized field names are part of the
/// output format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    #[serde(rename = "mG")]
    pub m_g: AbelianInvariants,
    #[serde(rename = "mK")]
    pub m_k: AbelianInvariants,
    #[serde(rename = "mGN")]
    pub m_gn: AbelianInvariants,
    pub t: u32,
    pub bound1_slack: i64,
    pub bound7_holds: bool,
    pub commutator_order: usize,
    pub pair_center_order: usize,
    pub matched_cases: Vec<String>,
}

/// `M(G,N)`, as `M(G)` with `M(K)` cancelled.
pub fn pair_multiplier(
    ctx: &PairContext,
    cache: &MultiplierCache,
    budget: usize,
) -> Result<AbelianInvariants, PairError> {
    Ok(multipliers(ctx, cache, budget)?.2)
}

fn multipliers(
    ctx: &PairContext,
    cache: &MultiplierCache,
    budget: usize,
) -> Result<(AbelianInvariants, AbelianInvariants, AbelianInvariants), PairError> {
    let m_g = cache.multiplier(&ctx.g, budget)?;
    let m_k = cache.multiplier(&ctx.complement_group(), budget)?;
    let m_gn = m_g.cancel_direct_factor(&m_k)?;
    Ok((m_g, m_k, m_gn))
}

/// `|M(N)| · |N^ab ⊗ K^ab|`, the order of `M(N × K, N)`.
pub fn pair_multiplier_order_direct(
    n: &FiniteGroup,
    k: &FiniteGroup,
    cache: &MultiplierCache,
    budget: usize,
) -> Result<u128, PairError> {
    let m_n = cache.multiplier(n, budget)?;
    let tensor = abelianization(n).0.tensor(&abelianization(k).0);
    Ok(m_n.order() * tensor.order())
}

/// `t = n(2m+n-1)/2 - log_p |M(G,N)|`.
pub fn deficiency_t(ctx: &PairContext, mgn_order: u128) -> Result<u32, PairError> {
    let observed = log_base(mgn_order, ctx.p as u128).ok_or_else(|| {
        PairError::InvalidContext(format!("{mgn_order} is not a power of {}", ctx.p))
    })?;
    let bound = ctx.bound_exponent();
    bound
        .checked_sub(observed)
        .ok_or(PairError::BoundViolation { bound, observed })
}

/// Slack of both pair bounds, given `M(G,N)`.
///
/// The first is `|M(G,N)| <= p^(n(2m+n-1)/2)` with `n`, `m` from `|N|`,
/// `|K|`. The second is `|M(G,N)|·|[N,G]| <= p^(n(2m+n-1)/2)` where now
/// `p^n = |N/Z(N,G)|` and `p^m = |G/N|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub bound1_slack: i64,
    pub bound7_slack: i64,
}

impl BoundCheck {
    pub fn bound7_holds(&self) -> bool {
        self.bound7_slack >= 0
    }
}

pub fn check_bounds(
    ctx: &PairContext,
    cache: &MultiplierCache,
    budget: usize,
) -> Result<BoundCheck, PairError> {
    let m_gn = pair_multiplier(ctx, cache, budget)?;
    bounds_for(ctx, &m_gn)
}

fn bounds_for(ctx: &PairContext, m_gn: &AbelianInvariants) -> Result<BoundCheck, PairError> {
    let p = ctx.p;
    let log = |x: u128| log_base(x, p as u128).expect("orders inside a p-group");
    let observed = log(m_gn.order()) as i64;
    let bound1_slack = ctx.bound_exponent() as i64 - observed;

    let center = pair_center(&ctx.g, &ctx.n)?;
    let comm = pair_commutator(&ctx.g, &ctx.n)?;
    let n7 = log((ctx.n.order() / center.order()) as u128);
    let m7 = log(ctx.n.index() as u128);
    let bound7_slack = bound_exponent(n7, m7) as i64 - observed - log(comm.order() as u128) as i64;
    Ok(BoundCheck {
        bound1_slack,
        bound7_slack,
    })
}

/// Computes the full report except `matched_cases`, which the classifier
/// fills in.
pub fn analyze_pair(
    ctx: &PairContext,
    cache: &MultiplierCache,
    budget: usize,
) -> Result<PairReport, PairError> {
    let (m_g, m_k, m_gn) = multipliers(ctx, cache, budget)?;
    let t = deficiency_t(ctx, m_gn.order())?;
    let bounds = bounds_for(ctx, &m_gn)?;
    Ok(PairReport {
        m_g,
        m_k,
        m_gn,
        t,
        bound1_slack: bounds.bound1_slack,
        bound7_holds: bounds.bound7_holds(),
        commutator_order: pair_commutator(&ctx.g, &ctx.n)?.order(),
        pair_center_order: pair_center(&ctx.g, &ctx.n)?.order(),
        matched_cases: Vec::new(),
    })
}
