//! Monoidal well-orders on `N^n`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::presentation::GeneratorSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderKind {
    Lex,
    GradedLex,
    /// Weighted degree first, lexicographic tie-break.
    Weighted,
}

/// A total monoidal well-order on exponents.
///
/// `priority` lists generator indices from most to least significant for the
/// lexicographic comparisons. `eliminate`, when nonempty, is compared
/// lexicographically before anything else; this yields block elimination
/// orders for the graded kinds. Weights are indexed by generator and are
/// strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
    weights: Vec<u64>,
    eliminate: Vec<usize>,
}

impl MonomialOrder {
    /// Lexicographic order with generators in declared order, `e_0 ≻ e_1 ≻ ...`.
    pub fn lex(n: usize) -> Self {
        Self::lex_with_priority((0..n).collect()).expect("identity permutation")
    }

    pub fn lex_with_priority(priority: Vec<usize>) -> Result<Self> {
        Self::new(OrderKind::Lex, priority, None)
    }

    pub fn graded_lex(priority: Vec<usize>) -> Result<Self> {
        Self::new(OrderKind::GradedLex, priority, None)
    }

    pub fn weighted(priority: Vec<usize>, weights: Vec<u64>) -> Result<Self> {
        Self::new(OrderKind::Weighted, priority, Some(weights))
    }

    pub fn new(kind: OrderKind, priority: Vec<usize>, weights: Option<Vec<u64>>) -> Result<Self> {
        let n = priority.len();
        let mut seen = alloc::vec![false; n];
        for &p in &priority {
            if p >= n || seen[p] {
                return Err(Error::InvalidOrder("priority is not a permutation".to_string()));
            }
            seen[p] = true;
        }
        let weights = match (kind, weights) {
            (OrderKind::Weighted, Some(w)) => {
                if w.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: w.len() });
                }
                if w.contains(&0) {
                    return Err(Error::InvalidOrder("weights must be positive".to_string()));
                }
                w
            }
            (OrderKind::Weighted, None) => {
                return Err(Error::InvalidOrder("weighted order needs weights".to_string()))
            }
            (_, Some(_)) => {
                return Err(Error::InvalidOrder("weights only apply to weighted orders".to_string()))
            }
            (_, None) => alloc::vec![1; n],
        };
        Ok(MonomialOrder { kind, priority, weights, eliminate: Vec::new() })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn eliminated(&self) -> &[usize] {
        &self.eliminate
    }

    pub fn num_generators(&self) -> usize {
        self.priority.len()
    }

    /// An order on `n + 1` generators where the new last generator is above
    /// every monomial not involving it, and which restricts to `self`.
    pub fn with_top_generator(&self) -> MonomialOrder {
        let n = self.num_generators();
        let mut out = self.clone();
        if self.kind == OrderKind::Lex && self.eliminate.is_empty() {
            out.priority.insert(0, n);
        } else {
            out.priority.push(n);
            out.eliminate.insert(0, n);
        }
        out.weights.push(1);
        out
    }

    /// Compares two exponents, checking that both have the right length.
    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        a.check_len(self.num_generators())?;
        b.check_len(self.num_generators())?;
        Ok(self.cmp_exp(a, b))
    }

    /// Comparison without the length check.
    pub fn cmp_exp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        let (ac, bc) = (a.coords(), b.coords());
        for &i in &self.eliminate {
            match ac[i].cmp(&bc[i]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        let graded = match self.kind {
            OrderKind::Lex => Ordering::Equal,
            OrderKind::GradedLex => a.degree().cmp(&b.degree()),
            OrderKind::Weighted => self.weighted_degree(a).cmp(&self.weighted_degree(b)),
        };
        if graded != Ordering::Equal {
            return graded;
        }
        for &i in &self.priority {
            match ac[i].cmp(&bc[i]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn weighted_degree(&self, a: &Exponent) -> BigUint {
        a.coords()
            .iter()
            .zip(&self.weights)
            .map(|(c, &w)| c * w)
            .sum()
    }

    /// Parses `lex:y,x`, `grlex:x,y`, `weighted:x=2,y=1`, optionally prefixed by
    /// `elim:a,b;`. Generators missing from the list follow in declared order.
    pub fn parse(desc: &str, gens: &GeneratorSet) -> Result<Self> {
        let bad = |m: &str| Error::InvalidOrder(alloc::format!("{m} in {desc:?}"));
        let (elim, body) = match desc.strip_prefix("elim:") {
            Some(rest) => {
                let (e, b) = rest.split_once(';').ok_or_else(|| bad("missing ';'"))?;
                (Some(e), b)
            }
            None => (None, desc),
        };
        let (kind, list) = body.split_once(':').unwrap_or((body, ""));
        let kind = match kind.trim() {
            "lex" => OrderKind::Lex,
            "grlex" | "graded-lex" => OrderKind::GradedLex,
            "weighted" | "wgrlex" => OrderKind::Weighted,
            other => return Err(bad(&alloc::format!("unknown order kind {other:?}"))),
        };
        let n = gens.len();
        let mut priority = Vec::new();
        let mut weights = alloc::vec![1u64; n];
        let mut listed = alloc::vec![false; n];
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, w) = match item.split_once('=') {
                Some((nm, w)) => (nm.trim(), Some(w.trim())),
                None => (item, None),
            };
            let i = gens.index_of(name).ok_or_else(|| bad(&alloc::format!("unknown generator {name:?}")))?;
            if listed[i] {
                return Err(bad("repeated generator"));
            }
            listed[i] = true;
            priority.push(i);
            if let Some(w) = w {
                if kind != OrderKind::Weighted {
                    return Err(bad("weights only apply to weighted orders"));
                }
                weights[i] = w.parse().map_err(|_| bad("bad weight"))?;
            }
        }
        priority.extend((0..n).filter(|&i| !listed[i]));
        let weights = (kind == OrderKind::Weighted).then_some(weights);
        let mut order = MonomialOrder::new(kind, priority, weights)?;
        if let Some(e) = elim {
            let mut seen = alloc::vec![false; n];
            for name in e.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let i = gens.index_of(name).ok_or_else(|| bad("unknown generator"))?;
                if seen[i] {
                    return Err(bad("repeated generator"));
                }
                seen[i] = true;
                order.eliminate.push(i);
            }
        }
        Ok(order)
    }

    /// Inverse of [`MonomialOrder::parse`].
    pub fn describe(&self, gens: &GeneratorSet) -> String {
        let mut s = String::new();
        if !self.eliminate.is_empty() {
            s.push_str("elim:");
            let names: Vec<&str> = self.eliminate.iter().map(|&i| gens.name(i)).collect();
            s.push_str(&names.join(","));
            s.push(';');
        }
        s.push_str(match self.kind {
            OrderKind::Lex => "lex:",
            OrderKind::GradedLex => "grlex:",
            OrderKind::Weighted => "weighted:",
        });
        let items: Vec<String> = self
            .priority
            .iter()
            .map(|&i| match self.kind {
                OrderKind::Weighted => alloc::format!("{}={}", gens.name(i), self.weights[i]),
                _ => gens.name(i).to_string(),
            })
            .collect();
        s.push_str(&items.join(","));
        s
    }
}
