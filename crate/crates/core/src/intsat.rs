//! Localization, ideal quotients `(R : x^∞)`, integralization and saturation.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::lattice::{decompose, hermite_normal_form, hilbert_basis, left_kernel, Cone, IntegerMatrix, LatticeSplit};
use crate::limits::Limits;
use crate::order::MonomialOrder;
use crate::presentation::{GeneratorSet, MonoidMap, Presentation, Relation};
use crate::rewriting::{groebner, GroebnerBasis};
use crate::structure::{groupify, is_integral};

/// `M[-x]`: adjoins a generator `t` (last) with the relation `t + x = 0`.
pub fn localize(pres: &Presentation, x: &Exponent) -> Result<Presentation> {
    let n = pres.num_generators();
    x.check_len(n)?;
    let mut names: Vec<String> = pres.generators().names().to_vec();
    names.push(pres.generators().fresh_name("t"));
    let mut relations: Vec<Relation> =
        pres.relations().iter().map(|r| Relation::new(r.lhs.extend_zero(1), r.rhs.extend_zero(1))).collect();
    let mut lhs = x.extend_zero(1);
    lhs.add_assign(&Exponent::unit(n + 1, n));
    relations.push(Relation::new(lhs, Exponent::zero(n + 1)));
    Presentation::new(GeneratorSet::new(names)?, relations)
}

/// Reduced Gröbner basis of `(R : x^∞)` over the original generators.
///
/// Computed by adjoining `t` with `t + x = 0`, completing under an extension
/// of `order` with `t` on top, and keeping the rules free of `t`.
pub fn ideal_quotient(pres: &Presentation, x: &Exponent, order: &MonomialOrder) -> Result<GroebnerBasis> {
    let n = pres.num_generators();
    if order.num_generators() != n {
        return Err(Error::DimensionMismatch { expected: n, found: order.num_generators() });
    }
    let local = localize(pres, x)?;
    let gb = groebner(&local, &order.with_top_generator());
    let keep: Vec<usize> = (0..n).collect();
    Ok(gb.restrict(&keep, order.clone()))
}

/// Reduced Gröbner basis of the integralization `(R : x^∞)`, `x` the sum of all generators.
pub fn integralize_basis(pres: &Presentation, order: &MonomialOrder) -> GroebnerBasis {
    ideal_quotient(pres, &Exponent::ones(pres.num_generators()), order).expect("order matches the presentation")
}

/// `M^int`, on the same generators, with the reduced basis under the default order as relations.
pub fn integralize(pres: &Presentation) -> Presentation {
    let gb = integralize_basis(pres, &pres.default_order());
    Presentation::new(pres.generators().clone(), gb.relations()).expect("same generators")
}

/// `M^sat = (C ∩ Z^r) ⊕ T` for the cone `C` spanned by the free images.
///
/// Generators of the saturation are, in order: the Hilbert basis `h1, h2, ...`
/// of the sharp quotient of `C` (lifted to `Z^r`), a basis `z1, z1_inv, ...`
/// of the unit lattice of `C` with inverses, and one generator `t1, ...` per
/// torsion divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationResult {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    /// Lifts to `Z^r` of the Hilbert basis of the sharp quotient cone.
    pub hilbert: Vec<Vec<BigInt>>,
    /// Basis of `C ∩ -C ∩ Z^r`.
    pub lineality: Vec<Vec<BigInt>>,
    /// Images of the saturation generators in `Z^r ⊕ T`.
    pub generator_images: Vec<Vec<BigInt>>,
    /// Cone spanned by the free images.
    pub cone: Cone,
    /// The sharp quotient `C / (C ∩ -C)`, pointed, in its own lattice.
    pub sharp_cone: Cone,
    pub presentation: Presentation,
    /// From the integralized input into `presentation`.
    pub inclusion: MonoidMap,
}

/// Saturation of an integral presentation.
pub fn saturate(pres: &Presentation, limits: &Limits) -> Result<SaturationResult> {
    if !is_integral(pres) {
        return Err(Error::NotIntegral);
    }
    let g = groupify(pres);
    let source = integralize(pres);
    saturate_images(source, g.free_rank, &g.torsion, &g.images, limits)
}

/// Saturation of the monoid generated by `images` in `Z^rank`.
pub fn saturate_embedded(gens: GeneratorSet, rank: usize, images: &[Vec<BigInt>], limits: &Limits) -> Result<SaturationResult> {
    if images.len() != gens.len() {
        return Err(Error::DimensionMismatch { expected: gens.len(), found: images.len() });
    }
    if let Some(v) = images.iter().find(|v| v.len() != rank) {
        return Err(Error::DimensionMismatch { expected: rank, found: v.len() });
    }
    let source = lattice_presentation(gens, rank, &[], images)?;
    saturate_images(source, rank, &[], images, limits)
}

/// The integral monoid generated by `images` in `Z^rank ⊕ ⊕ Z/d`, presented
/// by the kernel congruence of `N^k → Z^rank ⊕ T`.
pub fn lattice_presentation(gens: GeneratorSet, rank: usize, torsion: &[BigInt], images: &[Vec<BigInt>]) -> Result<Presentation> {
    let k = images.len();
    let width = rank + torsion.len();
    let mut rows: Vec<Vec<BigInt>> = images.to_vec();
    for (j, d) in torsion.iter().enumerate() {
        let mut r = alloc::vec![BigInt::zero(); width];
        r[rank + j] = d.clone();
        rows.push(r);
    }
    let m = IntegerMatrix::from_rows(width, rows)?;
    let kernel: Vec<Vec<BigInt>> = left_kernel(&m).into_iter().map(|v| v[..k].to_vec()).collect();
    let basis = if kernel.is_empty() {
        Vec::new()
    } else {
        hermite_normal_form(&IntegerMatrix::from_rows(k, kernel)?).basis()
    };
    let relations = basis.iter().map(|v| {
        let pos: Vec<BigInt> = v.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() }).collect();
        let neg: Vec<BigInt> = v.iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() }).collect();
        Relation::new(Exponent::from_signed(&pos).expect("nonnegative"), Exponent::from_signed(&neg).expect("nonnegative"))
    });
    let raw = Presentation::new(gens, relations.collect())?;
    Ok(integralize(&raw))
}

fn saturate_images(
    source: Presentation,
    rank: usize,
    torsion: &[BigInt],
    images: &[Vec<BigInt>],
    limits: &Limits,
) -> Result<SaturationResult> {
    if rank > limits.max_ambient_rank {
        return Err(Error::RankCap { rank, cap: limits.max_ambient_rank });
    }
    let free: Vec<Vec<BigInt>> = images.iter().map(|v| v[..rank].to_vec()).collect();
    let cone = Cone::from_rays(rank, &free)?;
    let split = LatticeSplit::new(rank, cone.lineality());
    let projection = split.projection();
    let projected: Vec<Vec<BigInt>> = cone.rays().iter().map(|r| projection.apply(r)).collect();
    let sharp_cone = Cone::from_rays(split.quotient_rank(), &projected)?;
    let sharp_basis = hilbert_basis(&sharp_cone, limits)?;
    let hilbert: Vec<Vec<BigInt>> = sharp_basis.iter().map(|h| split.lift_quotient(h)).collect();
    let lineality = split.inner_basis();

    let width = rank + torsion.len();
    let pad = |v: &[BigInt]| -> Vec<BigInt> {
        let mut out = v.to_vec();
        out.resize(width, BigInt::zero());
        out
    };
    let mut names: Vec<String> = Vec::new();
    let mut gen_images: Vec<Vec<BigInt>> = Vec::new();
    for (i, h) in hilbert.iter().enumerate() {
        names.push(alloc::format!("h{}", i + 1));
        gen_images.push(pad(h));
    }
    for (i, z) in lineality.iter().enumerate() {
        names.push(alloc::format!("z{}", i + 1));
        gen_images.push(pad(z));
        names.push(alloc::format!("z{}_inv", i + 1));
        gen_images.push(pad(&z.iter().map(|x| -x).collect::<Vec<_>>()));
    }
    for j in 0..torsion.len() {
        names.push(alloc::format!("t{}", j + 1));
        let mut t = alloc::vec![BigInt::zero(); width];
        t[rank + j] = BigInt::from(1);
        gen_images.push(t);
    }
    let presentation = lattice_presentation(GeneratorSet::new(names)?, rank, torsion, &gen_images)?;

    let (nh, nz) = (hilbert.len(), lineality.len());
    let mut incl = Vec::new();
    for v in images {
        let mut coeffs = alloc::vec![BigInt::zero(); presentation.num_generators()];
        let p = projection.apply(&v[..rank]);
        let c = decompose(&sharp_cone, &sharp_basis, &p).ok_or(Error::Matrix("decomposable in the Hilbert basis"))?;
        let mut rest: Vec<BigInt> = v[..rank].to_vec();
        for (ci, h) in c.iter().zip(&hilbert) {
            for (r, x) in rest.iter_mut().zip(h) {
                *r -= ci * x;
            }
        }
        coeffs[..nh].clone_from_slice(&c);
        for (j, y) in split.inner_coords(&rest).into_iter().enumerate() {
            let slot = nh + 2 * j + usize::from(y.is_negative());
            coeffs[slot] = y.abs();
        }
        for (j, d) in torsion.iter().enumerate() {
            coeffs[nh + 2 * nz + j] = v[rank + j].mod_floor(d);
        }
        incl.push(Exponent::from_signed(&coeffs).expect("nonnegative multiplicities"));
    }
    let inclusion = MonoidMap::new(source, presentation.clone(), incl)?;
    Ok(SaturationResult {
        rank,
        torsion: torsion.to_vec(),
        hilbert,
        lineality,
        generator_images: gen_images,
        cone,
        sharp_cone,
        presentation,
        inclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vectors;
    use crate::presentation::validate_map;
    use crate::rewriting::Rule;
    use alloc::string::ToString;
    use alloc::vec;

    fn blowup() -> Presentation {
        Presentation::from_u64s(&["u", "v1", "v2"], &[(&[1, 1, 0], &[1, 0, 1])]).unwrap()
    }

    fn rule(h: &[u64], b: &[u64]) -> Rule {
        Rule { head: Exponent::from_u64s(h), body: Exponent::from_u64s(b) }
    }

    fn gens(names: &[&str]) -> GeneratorSet {
        GeneratorSet::new(names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn localizing_n_gives_z() {
        let l = localize(&Presentation::free(&["a"]).unwrap(), &Exponent::from_u64s(&[1])).unwrap();
        assert_eq!(l.generators().names(), &["a", "t"]);
        assert_eq!(l.relations(), &[Relation::new(Exponent::from_u64s(&[1, 1]), Exponent::from_u64s(&[0, 0]))]);
        let g = groupify(&l);
        assert_eq!(g.free_rank, 1);
    }

    #[test]
    fn quotient_examples() {
        let b = blowup();
        let q = ideal_quotient(&b, &Exponent::from_u64s(&[1, 1, 1]), &b.default_order()).unwrap();
        assert_eq!(q.rules(), &[rule(&[0, 1, 0], &[0, 0, 1])]);
        let free = Presentation::free(&["x", "y"]).unwrap();
        assert!(ideal_quotient(&free, &Exponent::from_u64s(&[2, 1]), &free.default_order()).unwrap().rules().is_empty());
        let two = Presentation::from_u64s(&["a", "b"], &[(&[2, 0], &[0, 2])]).unwrap();
        let q = ideal_quotient(&two, &Exponent::from_u64s(&[1, 1]), &two.default_order()).unwrap();
        assert_eq!(q.rules(), &[rule(&[2, 0], &[0, 2])]);
        assert_eq!(q, groebner(&two, &two.default_order()));
    }

    #[test]
    fn integralize_examples() {
        let i = integralize(&blowup());
        assert_eq!(i.relations(), &[Relation::new(Exponent::from_u64s(&[0, 1, 0]), Exponent::from_u64s(&[0, 0, 1]))]);
        assert_eq!(integralize(&i), i);
        let p = Presentation::from_u64s(&["a", "b", "c"], &[(&[1, 1, 0], &[1, 0, 1])]).unwrap();
        assert!(integralize(&p).relations().iter().any(|r| !r.lhs.is_zero() && r.lhs.difference(&r.rhs) == vectors(&[&[0, 1, -1]])[0]));
    }

    #[test]
    fn saturate_numerical_semigroup() {
        let p = Presentation::from_u64s(&["a", "b"], &[(&[3, 0], &[0, 2])]).unwrap();
        let s = saturate(&p, &Limits::default()).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.hilbert, vectors(&[&[1]]));
        assert!(s.presentation.relations().is_empty());
        assert_eq!(s.inclusion.images(), &[Exponent::from_u64s(&[2]), Exponent::from_u64s(&[3])]);
        assert!(validate_map(&s.inclusion).is_valid());
    }

    #[test]
    fn saturate_embedded_cone() {
        let s = saturate_embedded(gens(&["p", "q"]), 2, &vectors(&[&[1, 0], &[1, 2]]), &Limits::default()).unwrap();
        assert_eq!(s.hilbert, vectors(&[&[1, 0], &[1, 1], &[1, 2]]));
        assert_eq!(s.presentation.relations().len(), 1);
        assert!(validate_map(&s.inclusion).is_valid());
    }

    #[test]
    fn saturate_free_is_identity() {
        let s = saturate(&Presentation::free(&["x", "y"]).unwrap(), &Limits::default()).unwrap();
        assert_eq!(s.hilbert, vectors(&[&[0, 1], &[1, 0]]));
        assert!(s.presentation.relations().is_empty());
    }

    #[test]
    fn saturation_keeps_torsion() {
        let p = Presentation::from_u64s(&["a", "b"], &[(&[2, 0], &[0, 2])]).unwrap();
        let s = saturate(&p, &Limits::default()).unwrap();
        assert_eq!(s.torsion, vec![BigInt::from(2)]);
        assert_eq!(s.presentation.generators().names(), &["h1", "t1"]);
        assert_eq!(s.presentation.relations(), &[Relation::new(Exponent::from_u64s(&[0, 2]), Exponent::from_u64s(&[0, 0]))]);
        assert!(validate_map(&s.inclusion).is_valid());
    }

    #[test]
    fn saturation_with_units() {
        let p = Presentation::from_u64s(&["a", "b", "c"], &[(&[1, 1, 0], &[0, 0, 0])]).unwrap();
        let s = saturate(&p, &Limits::default()).unwrap();
        assert_eq!(s.lineality.len(), 1);
        assert_eq!(s.hilbert.len(), 1);
        assert!(validate_map(&s.inclusion).is_valid());
    }

    #[test]
    fn non_integral_is_rejected() {
        assert_eq!(saturate(&blowup(), &Limits::default()).unwrap_err(), Error::NotIntegral);
    }
}
