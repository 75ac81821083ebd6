//! Monoidal rewriting: normal forms, Buchberger completion, reduced bases,
//! and a bounded brute-force congruence oracle.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::order::MonomialOrder;
use crate::presentation::{Presentation, Relation};

/// An oriented relation `head → body` with `head ≻ body`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Exponent,
    pub body: Exponent,
}

impl Rule {
    /// Orients a nontrivial pair; `None` when both sides agree.
    pub fn oriented(order: &MonomialOrder, a: Exponent, b: Exponent) -> Option<Rule> {
        match order.cmp_exp(&a, &b) {
            Ordering::Greater => Some(Rule { head: a, body: b }),
            Ordering::Less => Some(Rule { head: b, body: a }),
            Ordering::Equal => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    rules: Vec<Rule>,
    reduced: bool,
}

impl GroebnerBasis {
    /// Wraps rules without checking the Gröbner property.
    pub fn from_rules(order: MonomialOrder, rules: Vec<Rule>, reduced: bool) -> Self {
        GroebnerBasis { order, rules, reduced }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_reduced_flag(&self) -> bool {
        self.reduced
    }

    pub fn num_generators(&self) -> usize {
        self.order.num_generators()
    }

    /// The `⪯`-minimum of the congruence class of `a`.
    pub fn normal_form(&self, a: &Exponent) -> Exponent {
        reduce_with(&self.order, &self.rules, a.clone(), None)
    }

    /// As [`GroebnerBasis::normal_form`], recording the index of each rule applied.
    pub fn normal_form_traced(&self, a: &Exponent, trace: &mut Vec<usize>) -> Exponent {
        reduce_with(&self.order, &self.rules, a.clone(), Some(trace))
    }

    pub fn congruent(&self, a: &Exponent, b: &Exponent) -> bool {
        self.normal_form(a) == self.normal_form(b)
    }

    pub fn is_normal(&self, a: &Exponent) -> bool {
        !self.rules.iter().any(|r| r.head.divides(a))
    }

    /// Buchberger's criterion: every critical pair is joinable by these rules.
    pub fn is_groebner(&self) -> bool {
        for (i, ri) in self.rules.iter().enumerate() {
            for rj in &self.rules[i + 1..] {
                if let Some((a, b)) = critical_pair(ri, rj) {
                    if self.normal_form(&a) != self.normal_form(&b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// No head or body lies in the ideal of another rule's head, and heads are distinct.
    pub fn is_reduced(&self) -> bool {
        self.rules.iter().enumerate().all(|(i, r)| {
            self.rules.iter().enumerate().all(|(j, s)| {
                i == j || (!r.head.divides(&s.head) && !r.head.divides(&s.body))
            })
        })
    }

    /// Rules as unoriented relations `head = body`.
    pub fn relations(&self) -> Vec<Relation> {
        self.rules.iter().map(|r| Relation::new(r.head.clone(), r.body.clone())).collect()
    }

    /// Rules supported on `keep`, re-indexed to those coordinates.
    ///
    /// When every generator outside `keep` is above `F(keep)` in the order, the
    /// result is a Gröbner basis of `R ∩ (F(keep) × F(keep))` under `order`.
    pub fn restrict(&self, keep: &[usize], order: MonomialOrder) -> GroebnerBasis {
        let n = self.num_generators();
        let mut inside = alloc::vec![false; n];
        for &k in keep {
            inside[k] = true;
        }
        let outside: Vec<bool> = inside.iter().map(|b| !b).collect();
        let rules = self
            .rules
            .iter()
            .filter(|r| !r.head.meets(&outside) && !r.body.meets(&outside))
            .map(|r| Rule { head: r.head.select(keep), body: r.body.select(keep) })
            .collect();
        GroebnerBasis { order, rules, reduced: self.reduced }
    }
}

/// Rewrites `a` with the `⪯`-largest applicable head until none applies.
fn reduce_with(order: &MonomialOrder, rules: &[Rule], mut a: Exponent, mut trace: Option<&mut Vec<usize>>) -> Exponent {
    loop {
        let mut best: Option<usize> = None;
        for (i, r) in rules.iter().enumerate() {
            if r.head.divides(&a)
                && best.is_none_or(|b| order.cmp_exp(&r.head, &rules[b].head) == Ordering::Greater)
            {
                best = Some(i);
            }
        }
        match best {
            Some(i) => {
                a.rewrite(&rules[i].head, &rules[i].body);
                if let Some(t) = trace.as_deref_mut() {
                    t.push(i);
                }
            }
            None => return a,
        }
    }
}

/// The term elimination of two rules, `(b_i + a_i∨a_j − a_i, b_j + a_i∨a_j − a_j)`.
///
/// `None` when the heads have disjoint supports: such pairs are always joinable.
fn critical_pair(ri: &Rule, rj: &Rule) -> Option<(Exponent, Exponent)> {
    if ri.head.support().all(|k| rj.head.coords()[k] == num_bigint::BigUint::default()) {
        return None;
    }
    let lcm = ri.head.join(&rj.head);
    let a = ri.body.add(&lcm.checked_sub(&ri.head).expect("join dominates"));
    let b = rj.body.add(&lcm.checked_sub(&rj.head).expect("join dominates"));
    Some((a, b))
}

/// Completes the relations of `pres` into a Gröbner basis under `order`.
pub fn buchberger(pres: &Presentation, order: &MonomialOrder) -> GroebnerBasis {
    buchberger_traced(pres, order, &mut |_| {})
}

/// As [`buchberger`], reporting each rule as it is adjoined.
pub fn buchberger_traced(pres: &Presentation, order: &MonomialOrder, on_rule: &mut dyn FnMut(&Rule)) -> GroebnerBasis {
    let mut rules: Vec<Rule> = Vec::new();
    let mut queue: VecDeque<(Exponent, Exponent)> =
        pres.relations().iter().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
    while let Some((a, b)) = queue.pop_front() {
        let a = reduce_with(order, &rules, a, None);
        let b = reduce_with(order, &rules, b, None);
        let Some(rule) = Rule::oriented(order, a, b) else {
            continue;
        };
        // The head is irreducible, so the head ideal strictly grows.
        debug_assert!(rules.iter().all(|r| !r.head.divides(&rule.head)));
        for r in &rules {
            if let Some(pair) = critical_pair(r, &rule) {
                queue.push_back(pair);
            }
        }
        on_rule(&rule);
        rules.push(rule);
    }
    GroebnerBasis { order: order.clone(), rules, reduced: false }
}

/// The unique reduced Gröbner basis of the congruence generated by `basis`.
///
/// Heads are the minimal generators of the head ideal, bodies their normal
/// forms; rules are sorted by head, ascending in the order.
pub fn reduce_basis(basis: &GroebnerBasis) -> GroebnerBasis {
    let order = &basis.order;
    let mut heads: Vec<&Exponent> = basis.rules.iter().map(|r| &r.head).collect();
    heads.sort_by(|a, b| order.cmp_exp(a, b));
    heads.dedup();
    let mut minimal: Vec<Exponent> = Vec::new();
    for h in heads {
        // A proper divisor is strictly smaller in a monoidal well-order.
        if !minimal.iter().any(|m| m.divides(h)) {
            minimal.push(h.clone());
        }
    }
    let rules = minimal
        .into_iter()
        .map(|head| {
            let body = basis.normal_form(&head);
            Rule { head, body }
        })
        .collect();
    GroebnerBasis { order: order.clone(), rules, reduced: true }
}

/// Reduced Gröbner basis of `pres` under `order`.
pub fn groebner(pres: &Presentation, order: &MonomialOrder) -> GroebnerBasis {
    reduce_basis(&buchberger(pres, order))
}

pub fn normal_form(basis: &GroebnerBasis, a: &Exponent) -> Exponent {
    basis.normal_form(a)
}

pub fn congruent(basis: &GroebnerBasis, a: &Exponent, b: &Exponent) -> bool {
    basis.congruent(a, b)
}

/// Exact congruence classes of all exponents of total degree at most `bound`,
/// closing the generating relations under translations that stay in the box.
///
/// Sound but box-limited: two exponents in the same class are congruent, but
/// congruent exponents whose every connecting chain leaves the box are split.
#[derive(Debug, Clone)]
pub struct CongruenceClosure {
    bound: u32,
    points: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    class: Vec<usize>,
    num_classes: usize,
}

impl CongruenceClosure {
    pub fn degree_bound(&self) -> u32 {
        self.bound
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Class label of `a`, or `None` outside the box.
    pub fn class_of(&self, a: &Exponent) -> Option<usize> {
        let key = a.to_u32s()?;
        self.index.get(&key).map(|&i| self.class[i])
    }

    pub fn same_class(&self, a: &Exponent, b: &Exponent) -> Option<bool> {
        Some(self.class_of(a)? == self.class_of(b)?)
    }

    /// All points of the box with their class labels, in enumeration order.
    pub fn points(&self) -> impl Iterator<Item = (Exponent, usize)> + '_ {
        self.points.iter().enumerate().map(|(i, p)| {
            (Exponent::from_u64s(&p.iter().map(|&c| u64::from(c)).collect::<Vec<_>>()), self.class[i])
        })
    }

    /// Classes as lists of exponents, ordered by first point.
    pub fn classes(&self) -> Vec<Vec<Exponent>> {
        let mut out = alloc::vec![Vec::new(); self.num_classes];
        for (p, c) in self.points() {
            out[c].push(p);
        }
        out
    }
}

fn binomial_cells(n: usize, bound: u32) -> u128 {
    // C(bound + n, n), saturating.
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc.saturating_mul(u128::from(bound) + k) / k;
    }
    acc
}

fn enumerate_box(n: usize, bound: u32) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            go(prefix, n, left - c, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), n, bound, &mut out);
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Builds the bounded congruence oracle, refusing boxes above `max_cells` points.
pub fn oracle_closure(pres: &Presentation, degree_bound: u32, max_cells: u64) -> Result<CongruenceClosure> {
    let n = pres.num_generators();
    let cells = binomial_cells(n, degree_bound);
    if cells > u128::from(max_cells) {
        return Err(Error::OracleTooLarge { cells, cap: max_cells });
    }
    let points = enumerate_box(n, degree_bound);
    let index: BTreeMap<Vec<u32>, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    for rel in pres.relations() {
        let (Some(a), Some(b)) = (rel.lhs.to_u32s(), rel.rhs.to_u32s()) else {
            continue;
        };
        let da: u64 = a.iter().map(|&c| u64::from(c)).sum();
        let db: u64 = b.iter().map(|&c| u64::from(c)).sum();
        let top = da.max(db);
        if top > u64::from(degree_bound) {
            continue;
        }
        for shift in &points {
            let ds: u64 = shift.iter().map(|&c| u64::from(c)).sum();
            if ds + top > u64::from(degree_bound) {
                continue;
            }
            let pa: Vec<u32> = a.iter().zip(shift).map(|(x, s)| x + s).collect();
            let pb: Vec<u32> = b.iter().zip(shift).map(|(x, s)| x + s).collect();
            let (ia, ib) = (find(&mut parent, index[&pa]), find(&mut parent, index[&pb]));
            if ia != ib {
                let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
                parent[hi] = lo;
            }
        }
    }
    let mut label = alloc::vec![usize::MAX; points.len()];
    let mut class = alloc::vec![0; points.len()];
    let mut num_classes = 0;
    for i in 0..points.len() {
        let root = find(&mut parent, i);
        if label[root] == usize::MAX {
            label[root] = num_classes;
            num_classes += 1;
        }
        class[i] = label[root];
    }
    Ok(CongruenceClosure { bound: degree_bound, points, index, class, num_classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(c: &[u64]) -> Exponent {
        Exponent::from_u64s(c)
    }

    fn blowup() -> Presentation {
        Presentation::from_u64s(&["u", "v1", "v2"], &[(&[1, 1, 0], &[1, 0, 1])]).unwrap()
    }

    #[test]
    fn normal_form_applies_rule_once() {
        // Generators (x, y), lex y ≻ x, rule 2y → 2x.
        let order = MonomialOrder::lex_with_priority(vec![1, 0]).unwrap();
        let gb = GroebnerBasis::from_rules(order, vec![Rule { head: e(&[0, 2]), body: e(&[2, 0]) }], true);
        let mut trace = Vec::new();
        assert_eq!(gb.normal_form_traced(&e(&[1, 3]), &mut trace), e(&[3, 1]));
        assert_eq!(trace, vec![0]);
    }

    #[test]
    fn empty_basis_is_identity() {
        let gb = GroebnerBasis::from_rules(MonomialOrder::lex(2), vec![], true);
        assert_eq!(gb.normal_form(&e(&[4, 1])), e(&[4, 1]));
    }

    #[test]
    fn blowup_normal_form_takes_three_steps() {
        // lex v2 ≻ v1 ≻ u on generators (u, v1, v2).
        let order = MonomialOrder::lex_with_priority(vec![2, 1, 0]).unwrap();
        let gb = groebner(&blowup(), &order);
        assert_eq!(gb.rules(), &[Rule { head: e(&[1, 0, 1]), body: e(&[1, 1, 0]) }]);
        let mut trace = Vec::new();
        assert_eq!(gb.normal_form_traced(&e(&[2, 0, 3]), &mut trace), e(&[2, 3, 0]));
        assert_eq!(trace.len(), 3);
    }

    #[test]
    fn single_relation_is_already_groebner() {
        let p = Presentation::from_u64s(&["x", "y"], &[(&[0, 2], &[2, 0])]).unwrap();
        let order = MonomialOrder::lex_with_priority(vec![1, 0]).unwrap();
        let gb = buchberger(&p, &order);
        assert_eq!(gb.rules(), &[Rule { head: e(&[0, 2]), body: e(&[2, 0]) }]);
    }

    #[test]
    fn buchberger_adds_the_cubic_rule() {
        let p = Presentation::from_u64s(&["x", "y", "z"], &[(&[1, 1, 0], &[0, 0, 2]), (&[1, 0, 1], &[0, 2, 0])])
            .unwrap();
        let gb = groebner(&p, &MonomialOrder::lex(3));
        let mut rules = gb.rules().to_vec();
        rules.sort();
        let mut expected = vec![
            Rule { head: e(&[1, 1, 0]), body: e(&[0, 0, 2]) },
            Rule { head: e(&[1, 0, 1]), body: e(&[0, 2, 0]) },
            Rule { head: e(&[0, 3, 0]), body: e(&[0, 0, 3]) },
        ];
        expected.sort();
        assert_eq!(rules, expected);
        assert!(gb.is_groebner() && gb.is_reduced());
    }

    #[test]
    fn empty_presentation_has_empty_basis() {
        let p = Presentation::free(&["a", "b"]).unwrap();
        assert!(buchberger(&p, &MonomialOrder::lex(2)).rules().is_empty());
    }

    #[test]
    fn reduce_drops_divisible_heads() {
        let order = MonomialOrder::lex_with_priority(vec![1, 0]).unwrap();
        let gb = GroebnerBasis::from_rules(
            order,
            vec![Rule { head: e(&[0, 2]), body: e(&[2, 0]) }, Rule { head: e(&[0, 4]), body: e(&[4, 0]) }],
            false,
        );
        let red = reduce_basis(&gb);
        assert_eq!(red.rules(), &[Rule { head: e(&[0, 2]), body: e(&[2, 0]) }]);
        assert_eq!(reduce_basis(&red), red);
    }

    #[test]
    fn blowup_congruences() {
        let gb = groebner(&blowup(), &MonomialOrder::lex(3));
        assert!(gb.congruent(&e(&[1, 1, 0]), &e(&[1, 0, 1])));
        assert!(!gb.congruent(&e(&[0, 1, 0]), &e(&[0, 0, 1])));
        assert!(gb.congruent(&e(&[3, 2, 1]), &e(&[3, 2, 1])));
    }

    #[test]
    fn oracle_small_cases() {
        let p = Presentation::from_u64s(&["a", "b"], &[(&[2, 0], &[0, 2])]).unwrap();
        let o = oracle_closure(&p, 3, 1_000).unwrap();
        assert_eq!(o.same_class(&e(&[2, 0]), &e(&[0, 2])), Some(true));
        assert_eq!(o.same_class(&e(&[1, 0]), &e(&[0, 1])), Some(false));
        let class_a = o.class_of(&e(&[1, 0])).unwrap();
        assert_eq!(o.classes()[class_a], vec![e(&[1, 0])]);

        let o = oracle_closure(&blowup(), 3, 1_000).unwrap();
        let c = o.class_of(&e(&[1, 1, 0])).unwrap();
        let mut members = o.classes()[c].clone();
        members.sort();
        assert_eq!(members, vec![e(&[1, 0, 1]), e(&[1, 1, 0])]);

        let free = Presentation::free(&["a", "b", "c"]).unwrap();
        let o = oracle_closure(&free, 4, 1_000).unwrap();
        assert_eq!(o.num_classes(), o.num_points());
    }

    #[test]
    fn oracle_refuses_large_boxes() {
        let free = Presentation::free(&["a", "b", "c", "d", "e", "f"]).unwrap();
        assert!(matches!(oracle_closure(&free, 100, 1_000_000), Err(Error::OracleTooLarge { .. })));
    }
}
