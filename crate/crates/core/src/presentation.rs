//! Presentations `F/R`, monoid maps between them, and pushout charts.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::order::MonomialOrder;
use crate::rewriting::groebner;

/// Ordered, pairwise distinct, nonempty generator names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSet {
    names: Vec<String>,
}

impl GeneratorSet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::InvalidGenerators("empty generator name".to_string()));
            }
            if name.starts_with(|c: char| c.is_ascii_digit()) || name.contains(['+', '*', ',', ';', ':', '=']) {
                return Err(Error::InvalidGenerators(alloc::format!("unusable name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidGenerators(alloc::format!("duplicate name {name:?}")));
            }
        }
        Ok(GeneratorSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The generators at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> GeneratorSet {
        GeneratorSet { names: indices.iter().map(|&i| self.names[i].clone()).collect() }
    }

    /// A name not already in use, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        (1..)
            .map(|k| alloc::format!("{base}{k}"))
            .find(|c| self.index_of(c).is_none())
            .expect("unbounded search")
    }
}

/// An unoriented relation `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub lhs: Exponent,
    pub rhs: Exponent,
}

impl Relation {
    pub fn new(lhs: Exponent, rhs: Exponent) -> Self {
        Relation { lhs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// A finite presentation: generators and relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: GeneratorSet,
    relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(generators: GeneratorSet, relations: Vec<Relation>) -> Result<Self> {
        let n = generators.len();
        for r in &relations {
            r.lhs.check_len(n)?;
            r.rhs.check_len(n)?;
        }
        Ok(Presentation { generators, relations })
    }

    /// The free monoid on `names`.
    pub fn free(names: &[&str]) -> Result<Self> {
        let gens = GeneratorSet::new(names.iter().map(|s| s.to_string()).collect())?;
        Ok(Presentation { generators: gens, relations: Vec::new() })
    }

    /// Convenience constructor from small integer relation pairs.
    pub fn from_u64s(names: &[&str], relations: &[(&[u64], &[u64])]) -> Result<Self> {
        let gens = GeneratorSet::new(names.iter().map(|s| s.to_string()).collect())?;
        let rels = relations
            .iter()
            .map(|(a, b)| Relation::new(Exponent::from_u64s(a), Exponent::from_u64s(b)))
            .collect();
        Presentation::new(gens, rels)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_free(&self) -> bool {
        self.relations.iter().all(Relation::is_trivial)
    }

    /// The order used when none is specified: lex in declared order.
    pub fn default_order(&self) -> MonomialOrder {
        MonomialOrder::lex(self.num_generators())
    }
}

/// A homomorphism given by the image of each source generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMap {
    source: Presentation,
    target: Presentation,
    images: Vec<Exponent>,
}

/// Result of [`validate_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapCheck {
    Valid,
    /// Index of a source relation whose images are not congruent.
    Violated(usize),
}

impl MapCheck {
    pub fn is_valid(self) -> bool {
        self == MapCheck::Valid
    }
}

impl MonoidMap {
    pub fn new(source: Presentation, target: Presentation, images: Vec<Exponent>) -> Result<Self> {
        if images.len() != source.num_generators() {
            return Err(Error::DimensionMismatch {
                expected: source.num_generators(),
                found: images.len(),
            });
        }
        for im in &images {
            im.check_len(target.num_generators())?;
        }
        Ok(MonoidMap { source, target, images })
    }

    pub fn identity(p: &Presentation) -> Self {
        let n = p.num_generators();
        MonoidMap {
            source: p.clone(),
            target: p.clone(),
            images: (0..n).map(|i| Exponent::unit(n, i)).collect(),
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[Exponent] {
        &self.images
    }

    /// Image of a source exponent.
    pub fn apply(&self, a: &Exponent) -> Exponent {
        let mut out = Exponent::zero(self.target.num_generators());
        for (c, im) in a.coords().iter().zip(&self.images) {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                out.add_assign(im);
            } else {
                out.add_assign(&im.scale(c));
            }
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonoidMap) -> Result<MonoidMap> {
        if self.target.generators != other.source.generators {
            return Err(Error::SourceMismatch);
        }
        MonoidMap::new(
            self.source.clone(),
            other.target.clone(),
            self.images.iter().map(|im| other.apply(im)).collect(),
        )
    }
}

/// Checks that every source relation maps to congruent target exponents.
pub fn validate_map(f: &MonoidMap) -> MapCheck {
    let target = f.target();
    let gb = groebner(target, &target.default_order());
    for (i, r) in f.source().relations().iter().enumerate() {
        if !gb.congruent(&f.apply(&r.lhs), &f.apply(&r.rhs)) {
            return MapCheck::Violated(i);
        }
    }
    MapCheck::Valid
}

/// Composite of two maps, `g ∘ f`.
pub fn compose(f: &MonoidMap, g: &MonoidMap) -> Result<MonoidMap> {
    f.then(g)
}

/// The chart `Q ⊕_P R` of a pair of maps `f: P → Q`, `g: P → R`.
///
/// Generators are those of `Q` followed by those of `R`; when names clash they
/// are suffixed `1` (from `Q`) and `2` (from `R`). Relations are the relations
/// of `Q`, of `R`, and `f(p) = g(p)` for each generator `p` of `P`.
pub fn pushout(f: &MonoidMap, g: &MonoidMap) -> Result<Presentation> {
    if f.source() != g.source() {
        return Err(Error::SourceMismatch);
    }
    for m in [f, g] {
        if let MapCheck::Violated(relation) = validate_map(m) {
            return Err(Error::InvalidMap { relation });
        }
    }
    let (q, r) = (f.target(), g.target());
    let (nq, nr) = (q.num_generators(), r.num_generators());
    let names = disjoint_names(q.generators(), r.generators());
    let left = |e: &Exponent| e.extend_zero(nr);
    let right = |e: &Exponent| {
        let mut v = alloc::vec![BigUint::zero(); nq];
        v.extend(e.coords().iter().cloned());
        Exponent::new(v)
    };
    let mut relations = Vec::new();
    relations.extend(q.relations().iter().map(|rel| Relation::new(left(&rel.lhs), left(&rel.rhs))));
    relations.extend(r.relations().iter().map(|rel| Relation::new(right(&rel.lhs), right(&rel.rhs))));
    for (fi, gi) in f.images().iter().zip(g.images()) {
        relations.push(Relation::new(left(fi), right(gi)));
    }
    Presentation::new(GeneratorSet::new(names)?, relations)
}

fn disjoint_names(q: &GeneratorSet, r: &GeneratorSet) -> Vec<String> {
    let plain: Vec<String> = q.names().iter().chain(r.names()).cloned().collect();
    if GeneratorSet::new(plain.clone()).is_ok() {
        return plain;
    }
    let suffixed: Vec<String> = q
        .names()
        .iter()
        .map(|n| alloc::format!("{n}1"))
        .chain(r.names().iter().map(|n| alloc::format!("{n}2")))
        .collect();
    if GeneratorSet::new(suffixed.clone()).is_ok() {
        return suffixed;
    }
    q.names()
        .iter()
        .map(|n| alloc::format!("Q_{n}"))
        .chain(r.names().iter().map(|n| alloc::format!("R_{n}")))
        .collect()
}

/// Removes generators that a relation expresses in terms of the others.
///
/// Repeatedly picks a relation `e = w` with `e` a single generator not in the
/// support of `w` (preferring to drop the later generator when both sides are
/// single generators), substitutes `w` for `e` and drops `e`. Returns the
/// simplified presentation and the isomorphism from the input onto it.
pub fn eliminate_redundant_generators(p: &Presentation) -> Result<(Presentation, MonoidMap)> {
    let mut current = p.clone();
    let mut to_current = MonoidMap::identity(p);
    while let Some((drop, value)) = find_substitution(&current) {
        let n = current.num_generators();
        let keep: Vec<usize> = (0..n).filter(|&i| i != drop).collect();
        let images: Vec<Exponent> = (0..n)
            .map(|i| if i == drop { value.select(&keep) } else { Exponent::unit(n, i).select(&keep) })
            .collect();
        let gens = current.generators().select(&keep);
        let provisional = Presentation::new(gens.clone(), Vec::new())?;
        let step = MonoidMap::new(current.clone(), provisional, images)?;
        let relations: Vec<Relation> = current
            .relations()
            .iter()
            .map(|r| Relation::new(step.apply(&r.lhs), step.apply(&r.rhs)))
            .filter(|r| !r.is_trivial())
            .collect();
        let next = Presentation::new(gens, relations)?;
        let step = MonoidMap::new(current, next.clone(), step.images().to_vec())?;
        to_current = MonoidMap::new(p.clone(), next.clone(), to_current.images().iter().map(|im| step.apply(im)).collect())?;
        current = next;
    }
    Ok((current, to_current))
}

fn single_generator(e: &Exponent) -> Option<usize> {
    let mut support = e.support();
    let i = support.next()?;
    (support.next().is_none() && e.coords()[i].is_one()).then_some(i)
}

fn find_substitution(p: &Presentation) -> Option<(usize, Exponent)> {
    for r in p.relations() {
        let candidates = [(single_generator(&r.lhs), &r.rhs), (single_generator(&r.rhs), &r.lhs)];
        let mut best: Option<(usize, Exponent)> = None;
        for (g, other) in candidates {
            if let Some(g) = g {
                if other.coords()[g].is_zero() && best.as_ref().is_none_or(|(b, _)| g > *b) {
                    best = Some((g, other.clone()));
                }
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}
