//! Units, prime ideals, faces, groupification and integrality of a presented monoid.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::intsat::integralize_basis;
use crate::lattice::{hermite_normal_form, smith_normal_form, IntegerMatrix};
use crate::limits::Limits;
use crate::order::MonomialOrder;
use crate::presentation::{Presentation, Relation};
use crate::rewriting::{groebner, GroebnerBasis};

/// A set `J` of generators such that, for every relation `a = b`, the support
/// of `a` meets `J` exactly when the support of `b` does.
///
/// These are the traces `E ∩ Φ⁻¹(p)` of the prime ideals `p`; the empty set
/// is included and corresponds to the whole monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeTrace {
    indices: Vec<usize>,
}

impl PrimeTrace {
    /// Checks the support condition, naming the first violating relation.
    pub fn new(pres: &Presentation, mut indices: Vec<usize>) -> Result<PrimeTrace> {
        indices.sort_unstable();
        indices.dedup();
        let n = pres.num_generators();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad + 1 });
        }
        let mask = mask(n, &indices);
        for (i, r) in pres.relations().iter().enumerate() {
            if r.lhs.meets(&mask) != r.rhs.meets(&mask) {
                return Err(Error::InvalidPrime { relation: i });
            }
        }
        Ok(PrimeTrace { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Generators outside the prime, in declared order.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| !self.contains(i)).collect()
    }

    pub fn names<'a>(&self, pres: &'a Presentation) -> Vec<&'a str> {
        self.indices.iter().map(|&i| pres.generators().name(i)).collect()
    }
}

fn mask(n: usize, indices: &[usize]) -> Vec<bool> {
    let mut m = alloc::vec![false; n];
    for &i in indices {
        m[i] = true;
    }
    m
}

/// All prime traces, sorted by size and then by index list.
///
/// Subsets are visited in Gray-code order, keeping per-relation counts of
/// how many generators of `J` each side contains.
pub fn enumerate_primes(pres: &Presentation, limits: &Limits) -> Result<Vec<PrimeTrace>> {
    let n = pres.num_generators();
    if n > limits.max_prime_generators {
        return Err(Error::TooManyGenerators { count: n, cap: limits.max_prime_generators });
    }
    let rels: Vec<&Relation> = pres.relations().iter().filter(|r| !r.is_trivial()).collect();
    // touches[g] lists (relation, side) pairs whose support contains g.
    let mut touches: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); n];
    for (k, r) in rels.iter().enumerate() {
        for g in r.lhs.support() {
            touches[g].push((k, 0));
        }
        for g in r.rhs.support() {
            touches[g].push((k, 1));
        }
    }
    let mut hits = alloc::vec![[0u32; 2]; rels.len()];
    let mut bad = 0usize;
    let mut member = alloc::vec![false; n];
    let mut out = alloc::vec![PrimeTrace { indices: Vec::new() }];
    for step in 1u64..(1u64 << n) {
        let g = step.trailing_zeros() as usize;
        let adding = !member[g];
        member[g] = adding;
        for &(k, side) in &touches[g] {
            let before = (hits[k][0] > 0) != (hits[k][1] > 0);
            if adding {
                hits[k][side] += 1;
            } else {
                hits[k][side] -= 1;
            }
            let after = (hits[k][0] > 0) != (hits[k][1] > 0);
            match (before, after) {
                (false, true) => bad += 1,
                (true, false) => bad -= 1,
                _ => {}
            }
        }
        if bad == 0 {
            out.push(PrimeTrace { indices: (0..n).filter(|&i| member[i]).collect() });
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.indices.cmp(&b.indices)));
    debug_assert!({
        let union: Vec<usize> = (0..n).filter(|&i| out.iter().any(|p| p.contains(i))).collect();
        out.last().map(|p| p.indices.clone()) == Some(union)
    });
    Ok(out)
}

/// The largest prime trace, as the greatest fixed point of pruning `E`.
///
/// If one side of a relation meets `J` and the other does not, no prime
/// inside `J` meets the first side, so its support is removed from `J`.
pub fn maximal_prime(pres: &Presentation) -> PrimeTrace {
    let n = pres.num_generators();
    let mut member = alloc::vec![true; n];
    loop {
        let mut changed = false;
        for r in pres.relations() {
            let (a, b) = (r.lhs.meets(&member), r.rhs.meets(&member));
            if a != b {
                let side = if a { &r.lhs } else { &r.rhs };
                for g in side.support() {
                    changed |= member[g];
                    member[g] = false;
                }
            }
        }
        if !changed {
            break;
        }
    }
    PrimeTrace { indices: (0..n).filter(|&i| member[i]).collect() }
}

/// Invertible generators, together with the generators whose normal form is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitReport {
    /// `E ∖ J_max`.
    pub units: Vec<usize>,
    /// `{e : nf(e) = 0}`, exact when units map to 0 (e.g. sharp monoids).
    pub normal_form_zero: Vec<usize>,
}

impl UnitReport {
    /// True when the two methods disagree.
    pub fn diverges(&self) -> bool {
        self.units != self.normal_form_zero
    }
}

pub fn units(pres: &Presentation) -> UnitReport {
    let n = pres.num_generators();
    let jmax = maximal_prime(pres);
    let gb = groebner(pres, &pres.default_order());
    UnitReport {
        units: jmax.complement(n),
        normal_form_zero: (0..n).filter(|&i| gb.normal_form(&Exponent::unit(n, i)).is_zero()).collect(),
    }
}

/// Lex order with the generators of `prime` first (in declared order), then the rest.
pub fn elimination_order(n: usize, prime: &PrimeTrace) -> MonomialOrder {
    let mut priority = prime.indices.clone();
    priority.extend(prime.complement(n));
    MonomialOrder::lex_with_priority(priority).expect("permutation")
}

/// Whether `order` is lex with the generators of `prime` as its leading
/// block, so that restricting a Gröbner basis yields the face.
pub fn eliminates(order: &MonomialOrder, prime: &PrimeTrace) -> bool {
    let k = prime.len();
    let p = order.priority();
    order.kind() == crate::order::OrderKind::Lex
        && order.eliminated().is_empty()
        && p.len() >= k
        && p[..k].iter().all(|&i| prime.contains(i))
}

/// Presentation of the face `M ∖ p` on the generators outside `prime`.
pub fn face_presentation(pres: &Presentation, prime: &PrimeTrace) -> Result<Presentation> {
    let checked = PrimeTrace::new(pres, prime.indices.clone())?;
    let order = elimination_order(pres.num_generators(), &checked);
    let gb = groebner(pres, &order);
    face_from_basis(pres, &gb, &checked)
}

/// The face read off from a reduced Gröbner basis under an order eliminating `prime`.
pub fn face_from_basis(pres: &Presentation, gb: &GroebnerBasis, prime: &PrimeTrace) -> Result<Presentation> {
    if !eliminates(gb.order(), prime) {
        return Err(Error::InvalidOrder(alloc::string::String::from("order does not eliminate the prime")));
    }
    let keep = prime.complement(pres.num_generators());
    let position = |g: usize| keep.iter().position(|&k| k == g);
    let priority: Vec<usize> = gb.order().priority().iter().filter_map(|&g| position(g)).collect();
    let restricted = gb.restrict(&keep, MonomialOrder::lex_with_priority(priority)?);
    Presentation::new(pres.generators().select(&keep), restricted.relations())
}

/// `M^gp ≅ Z^r ⊕ ⊕ Z/d_i` with the image of every generator.
///
/// Images list the `r` free coordinates first, then one residue per torsion
/// divisor. The free part is put in Hermite form; torsion coordinates are
/// shifted so that generators at unit pivots have zero torsion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupification {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub images: Vec<Vec<BigInt>>,
}

impl Groupification {
    pub fn free_images(&self) -> Vec<Vec<BigInt>> {
        self.images.iter().map(|v| v[..self.free_rank].to_vec()).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Image of an exponent, with torsion residues reduced.
    pub fn image(&self, a: &Exponent) -> Vec<BigInt> {
        let mut out = alloc::vec![BigInt::zero(); self.free_rank + self.torsion.len()];
        for (c, im) in a.coords().iter().zip(&self.images) {
            let c = BigInt::from(c.clone());
            for (o, x) in out.iter_mut().zip(im) {
                *o += &c * x;
            }
        }
        for (k, d) in self.torsion.iter().enumerate() {
            out[self.free_rank + k] = out[self.free_rank + k].mod_floor(d);
        }
        out
    }
}

pub fn groupify(pres: &Presentation) -> Groupification {
    let n = pres.num_generators();
    let diffs: Vec<Vec<BigInt>> =
        pres.relations().iter().filter(|r| !r.is_trivial()).map(|r| r.lhs.difference(&r.rhs)).collect();
    let m = IntegerMatrix::from_rows(n, diffs).expect("relations over the generators");
    let snf = smith_normal_form(&m);
    let rank = snf.rank();
    let free_rank = n - rank;
    let tors: Vec<(usize, BigInt)> =
        snf.divisors.iter().enumerate().filter(|(_, d)| !d.is_one()).map(|(i, d)| (i, d.clone())).collect();
    let free_t = snf.v.columns(rank, n).transpose();
    let hf = hermite_normal_form(&free_t);
    let free = hf.h.transpose();
    let mut torsion_part: Vec<Vec<BigInt>> =
        (0..n).map(|j| tors.iter().map(|(i, d)| snf.v.get(j, *i).mod_floor(d)).collect()).collect();
    // phi[k] is the torsion shift attached to free basis vector k.
    let mut phi: Vec<Vec<BigInt>> = alloc::vec![alloc::vec![BigInt::zero(); tors.len()]; free_rank];
    for (k, &col) in hf.pivots.iter().enumerate() {
        if !hf.h.get(k, col).is_one() {
            continue;
        }
        for t in 0..tors.len() {
            let mut s = torsion_part[col][t].clone();
            for l in 0..k {
                s -= free.get(col, l) * &phi[l][t];
            }
            phi[k][t] = s.mod_floor(&tors[t].1);
        }
    }
    for (j, row) in torsion_part.iter_mut().enumerate() {
        for (t, x) in row.iter_mut().enumerate() {
            let mut s = x.clone();
            for k in 0..free_rank {
                s -= free.get(j, k) * &phi[k][t];
            }
            *x = s.mod_floor(&tors[t].1);
        }
    }
    let images = (0..n).map(|j| free.row(j).iter().cloned().chain(torsion_part[j].iter().cloned()).collect()).collect();
    Groupification { free_rank, torsion: tors.into_iter().map(|(_, d)| d).collect(), images }
}

/// Whether `M → M^gp` is injective, i.e. the reduced Gröbner bases of `R` and
/// of `(R : x^∞)` agree under the default order.
pub fn is_integral(pres: &Presentation) -> bool {
    let order = pres.default_order();
    groebner(pres, &order) == integralize_basis(pres, &order)
}
