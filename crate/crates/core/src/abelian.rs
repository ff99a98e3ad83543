//! Finite abelian groups up to isomorphism.
//!
//! Invariant factors are kept divisibility-DECREASING: `[n1, n2, …, nk]` with
//! `n_{i+1} | n_i`, every `n_i >= 2`. The empty list is the trivial group and
//! renders as `1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linear::{smith_normal_form, Int, SparseIntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("cyclic order {0} is not positive")]
    NonPositiveOrder(i64),
    #[error("{factor} is not a direct factor of {whole}")]
    NotADirectFactor { whole: String, factor: String },
    #[error("invariant factor {0} exceeds 64 bits")]
    Overflow(String),
    #[error("invariant factors {0:?} do not form a decreasing divisibility chain")]
    NotAChain(Vec<u64>),
    #[error("cannot parse `{text}` at offset {offset}: expected {expected}")]
    Parse {
        text: String,
        offset: usize,
        expected: &'static str,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct AbelianInvariants(Vec<u64>);

impl TryFrom<Vec<u64>> for AbelianInvariants {
    type Error = AbelianError;

    fn try_from(v: Vec<u64>) -> Result<Self, Self::Error> {
        AbelianInvariants::from_invariant_factors(v)
    }
}

impl From<AbelianInvariants> for Vec<u64> {
    fn from(a: AbelianInvariants) -> Self {
        a.0
    }
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants(Vec::new())
    }

    /// Accepts an already-canonical list.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self, AbelianError> {
        let ok = factors.iter().all(|&n| n >= 2) && factors.windows(2).all(|w| w[0] % w[1] == 0);
        if ok {
            Ok(AbelianInvariants(factors))
        } else {
            Err(AbelianError::NotAChain(factors))
        }
    }

    /// Invariant factors of `Z_{o1} x Z_{o2} x …`, through the Smith form of
    /// the diagonal relation matrix.
    pub fn canonicalize(orders: &[i64]) -> Result<Self, AbelianError> {
        if let Some(&bad) = orders.iter().find(|&&o| o < 1) {
            return Err(AbelianError::NonPositiveOrder(bad));
        }
        let n = orders.len();
        let diag = SparseIntMatrix::from_triplets(
            n,
            n,
            orders
                .iter()
                .enumerate()
                .map(|(i, &o)| (i, i, Int::from(o))),
        )
        .expect("diagonal indices in range");
        let snf = smith_normal_form(&diag, false);
        let mut factors = Vec::new();
        for d in snf.torsion() {
            factors.push(
                d.to_u64()
                    .ok_or_else(|| AbelianError::Overflow(d.to_string()))?,
            );
        }
        factors.reverse();
        Ok(AbelianInvariants(factors))
    }

    /// Infallible variant for orders known to be positive.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let signed: Vec<i64> = orders
            .iter()
            .map(|&o| i64::try_from(o).expect("cyclic order fits in i64"))
            .collect();
        AbelianInvariants::canonicalize(&signed).expect("orders are positive")
    }

    pub fn factors(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of invariant factors (minimum number of generators).
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u128 {
        self.0.iter().map(|&n| n as u128).product()
    }

    pub fn exponent(&self) -> u64 {
        self.0.first().copied().unwrap_or(1)
    }

    /// `log_p |A|` when the order is a power of `p`.
    pub fn log_order(&self, p: u64) -> Option<u32> {
        log_base(self.order(), p as u128)
    }

    /// Prime-power cyclic factors, grouped by prime; exponents sorted
    /// descending.
    pub fn elementary_divisors(&self) -> BTreeMap<u64, Vec<u32>> {
        let mut out: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in &self.0 {
            for (q, e) in factorize(n) {
                out.entry(q).or_default().push(e);
            }
        }
        for v in out.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    }

    pub fn from_elementary_divisors(divs: &BTreeMap<u64, Vec<u32>>) -> Self {
        let mut sorted: Vec<(u64, Vec<u32>)> = divs
            .iter()
            .map(|(&q, es)| {
                let mut es: Vec<u32> = es.iter().copied().filter(|&e| e > 0).collect();
                es.sort_unstable_by(|a, b| b.cmp(a));
                (q, es)
            })
            .collect();
        sorted.retain(|(_, es)| !es.is_empty());
        let len = sorted.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
        let factors = (0..len)
            .map(|i| {
                sorted
                    .iter()
                    .filter_map(|(q, es)| es.get(i).map(|&e| q.pow(e)))
                    .product()
            })
            .collect();
        AbelianInvariants(factors)
    }

    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let orders: Vec<u64> = self.0.iter().chain(&other.0).copied().collect();
        AbelianInvariants::from_cyclic_orders(&orders)
    }

    /// `A ⊗ B`, by `Z_a ⊗ Z_b ≅ Z_gcd(a,b)` and bilinearity.
    pub fn tensor(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let orders: Vec<u64> = self
            .0
            .iter()
            .flat_map(|&a| other.0.iter().map(move |&b| a.gcd(&b)))
            .collect();
        AbelianInvariants::from_cyclic_orders(&orders)
    }

    /// Schur multiplier of this abelian group:
    /// `Z_{n2} x Z_{n3}^(2) x … x Z_{nk}^(k-1)`.
    pub fn multiplier_abelian(&self) -> AbelianInvariants {
        let orders: Vec<u64> = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(i, &n)| std::iter::repeat_n(n, i))
            .collect();
        AbelianInvariants::from_cyclic_orders(&orders)
    }

    /// The unique `C` with `self ≅ factor x C`.
    pub fn cancel_direct_factor(
        &self,
        factor: &AbelianInvariants,
    ) -> Result<AbelianInvariants, AbelianError> {
        let mut whole = self.elementary_divisors();
        let fail = || AbelianError::NotADirectFactor {
            whole: self.to_string(),
            factor: factor.to_string(),
        };
        for (q, es) in factor.elementary_divisors() {
            let have = whole.get_mut(&q).ok_or_else(fail)?;
            for e in es {
                let pos = have.iter().position(|&x| x == e).ok_or_else(fail)?;
                have.remove(pos);
            }
        }
        Ok(AbelianInvariants::from_elementary_divisors(&whole))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

const MAX_PARSED_ORDER: i64 = 1 << 32;

/// Parses `1` or `Z<n> x Z<m> x …` (whitespace-insensitive); the cyclic
/// orders may come in any order and are canonicalized.
impl FromStr for AbelianInvariants {
    type Err = AbelianError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |offset: usize, expected: &'static str| AbelianError::Parse {
            text: text.to_string(),
            offset,
            expected,
        };
        let bytes = text.as_bytes();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if bytes.get(i) == Some(&b'1') {
            i += 1;
            skip_ws(&mut i);
            return if i == bytes.len() {
                Ok(AbelianInvariants::trivial())
            } else {
                Err(err(i, "end of input after `1`"))
            };
        }
        let mut orders = Vec::new();
        loop {
            skip_ws(&mut i);
            if bytes.get(i) != Some(&b'Z') {
                return Err(err(i, "`Z`"));
            }
            i += 1;
            skip_ws(&mut i);
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: i64 = text[start..i]
                .parse()
                .map_err(|_| err(start, "a cyclic order"))?;
            if !(1..=MAX_PARSED_ORDER).contains(&n) {
                return Err(err(start, "a cyclic order between 1 and 2^32"));
            }
            orders.push(n);
            skip_ws(&mut i);
            if i == bytes.len() {
                break;
            }
            if bytes[i] != b'x' {
                return Err(err(i, "`x` or end of input"));
            }
            i += 1;
        }
        AbelianInvariants::canonicalize(&orders)
    }
}

/// `Some(e)` when `n = base^e`.
pub fn log_base(mut n: u128, base: u128) -> Option<u32> {
    if base < 2 || n == 0 {
        return None;
    }
    let mut e = 0;
    while n.is_multiple_of(base) {
        n /= base;
        e += 1;
    }
    (n == 1).then_some(e)
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q <= n / q {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}
