//! Elements of the free commutative monoid `N^n`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::presentation::GeneratorSet;

/// A vector of arbitrary-precision nonnegative integers, one per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(Vec<BigUint>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(alloc::vec![BigUint::zero(); n])
    }

    /// The `i`-th basis element of `N^n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.0[i] = BigUint::from(1u8);
        e
    }

    /// Sum of all basis elements, an interior point of `N^n`.
    pub fn ones(n: usize) -> Self {
        Exponent(alloc::vec![BigUint::from(1u8); n])
    }

    pub fn new(coords: Vec<BigUint>) -> Self {
        Exponent(coords)
    }

    pub fn from_u64s(coords: &[u64]) -> Self {
        Exponent(coords.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Converts a signed vector, failing on negative entries.
    pub fn from_signed(coords: &[BigInt]) -> Option<Self> {
        coords
            .iter()
            .map(|c| c.to_biguint())
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigUint> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> BigUint {
        self.0.iter().sum()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), other.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn add_assign(&mut self, other: &Exponent) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn scale(&self, k: &BigUint) -> Exponent {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        if other.divides(self) {
            Some(Exponent(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    /// Replaces `self` by `self - head + body`; `head` must divide `self`.
    pub fn rewrite(&mut self, head: &Exponent, body: &Exponent) {
        for ((a, h), b) in self.0.iter_mut().zip(&head.0).zip(&body.0) {
            *a -= h;
            *a += b;
        }
    }

    /// Componentwise `self <= other`, i.e. `other ∈ self + F`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Coordinatewise maximum (least common multiple).
    pub fn join(&self, other: &Exponent) -> Exponent {
        Exponent(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| if a >= b { a.clone() } else { b.clone() })
                .collect(),
        )
    }

    /// Coordinatewise minimum.
    pub fn meet(&self, other: &Exponent) -> Exponent {
        Exponent(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| if a <= b { a.clone() } else { b.clone() })
                .collect(),
        )
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    /// Whether the support meets the indicator set `mask`.
    pub fn meets(&self, mask: &[bool]) -> bool {
        self.support().any(|i| mask[i])
    }

    pub fn to_signed(&self) -> Vec<BigInt> {
        self.0.iter().map(|c| BigInt::from(c.clone())).collect()
    }

    /// `self - other` as a signed lattice vector.
    pub fn difference(&self, other: &Exponent) -> Vec<BigInt> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| BigInt::from(a.clone()) - BigInt::from(b.clone()))
            .collect()
    }

    /// Keeps the coordinates listed in `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Exponent {
        Exponent(indices.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// Appends `extra` zero coordinates.
    pub fn extend_zero(&self, extra: usize) -> Exponent {
        let mut v = self.0.clone();
        v.resize(self.0.len() + extra, BigUint::zero());
        Exponent(v)
    }

    pub fn to_u32s(&self) -> Option<Vec<u32>> {
        self.0.iter().map(|c| c.to_u32()).collect()
    }

    /// Parses the human syntax `"2u+3v1"` (also `"0"`, `"3*x"`) against `gens`.
    pub fn parse(text: &str, gens: &GeneratorSet) -> Result<Exponent> {
        let mut out = Exponent::zero(gens.len());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty exponent".to_string()));
        }
        if compact == "0" {
            return Ok(out);
        }
        for term in compact.split('+') {
            let digits = term.chars().take_while(char::is_ascii_digit).count();
            let (coef, rest) = term.split_at(digits);
            let name = rest.strip_prefix('*').unwrap_or(rest);
            let coef = if coef.is_empty() {
                BigUint::from(1u8)
            } else {
                coef.parse::<BigUint>()
                    .map_err(|_| Error::Parse(term.to_string()))?
            };
            if name.is_empty() {
                if coef.is_zero() {
                    continue;
                }
                return Err(Error::Parse(alloc::format!("missing generator in {term:?}")));
            }
            let i = gens
                .index_of(name)
                .ok_or_else(|| Error::Parse(alloc::format!("unknown generator {name:?}")))?;
            out.0[i] += coef;
        }
        Ok(out)
    }

    /// Renders in the human syntax, terms in declared generator order.
    pub fn display(&self, gens: &GeneratorSet) -> String {
        let mut s = String::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push('+');
            }
            if *c != BigUint::from(1u8) {
                let _ = write!(s, "{c}");
            }
            s.push_str(gens.name(i));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}
