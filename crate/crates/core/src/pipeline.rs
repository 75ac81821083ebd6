//! Fine and fs faces of a chart, and of the pushout chart of a diagram.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::extcone::{extend, extend_map, extended_fiber_product, theorem_c_check, ExtendedConeMap, FiberStratum, TheoremCReport};
use crate::intsat::{integralize, saturate, SaturationResult};
use crate::lattice::{right_inverse, Cone, IntegerMatrix};
use crate::limits::Limits;
use crate::order::MonomialOrder;
use crate::presentation::{eliminate_redundant_generators, pushout, validate_map, MapCheck, MonoidMap, Presentation};
use crate::rewriting::{groebner, GroebnerBasis};
use crate::structure::{elimination_order, enumerate_primes, face_from_basis, groupify, PrimeTrace};

/// How a face was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Elimination order of the Gröbner basis the face was read from.
    pub order: MonomialOrder,
    /// Rules in that basis.
    pub basis_rules: usize,
    /// Whether the basis was shared with a larger prime.
    pub shared: bool,
}

/// Everything computed for one prime trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRecord {
    pub prime: PrimeTrace,
    pub face: Presentation,
    pub fine: Presentation,
    pub fs: SaturationResult,
    /// `Hom` of the sharp fs charting monoid into `R≥0`.
    pub cone: Cone,
    /// The quotient face → fine, identity on generators.
    pub to_fine: MonoidMap,
    pub provenance: Provenance,
}

/// Reduced Gröbner bases keyed by elimination order.
#[derive(Debug, Default, Clone)]
pub struct GroebnerCache {
    entries: Vec<(MonomialOrder, GroebnerBasis)>,
}

impl GroebnerCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The basis under `order`, and whether it was already cached.
    pub fn get_or_compute(&mut self, pres: &Presentation, order: &MonomialOrder) -> (GroebnerBasis, bool) {
        if let Some((_, gb)) = self.entries.iter().find(|(o, _)| o == order) {
            return (gb.clone(), true);
        }
        let gb = groebner(pres, order);
        self.entries.push((order.clone(), gb.clone()));
        (gb, false)
    }
}

/// One record per prime trace, sorted by prime.
///
/// Primes are processed from largest to smallest so that a basis computed
/// for `J ∪ {g}` with `J` leading is reused for `J` whenever both prescribe
/// the same elimination order.
pub fn fine_faces(chart: &Presentation, limits: &Limits) -> Result<Vec<FaceRecord>> {
    let primes = enumerate_primes(chart, limits)?;
    let n = chart.num_generators();
    let mut cache = GroebnerCache::new();
    let mut records = Vec::with_capacity(primes.len());
    for prime in primes.iter().rev() {
        let order = elimination_order(n, prime);
        let (gb, shared) = cache.get_or_compute(chart, &order);
        let face = face_from_basis(chart, &gb, prime)?;
        let fine = integralize(&face);
        let fs = saturate(&fine, limits)?;
        let cone = fs.sharp_cone.dual();
        let k = face.num_generators();
        let to_fine = MonoidMap::new(face.clone(), fine.clone(), (0..k).map(|i| Exponent::unit(k, i)).collect())?;
        let provenance = Provenance { order, basis_rules: gb.rules().len(), shared };
        records.push(FaceRecord { prime: prime.clone(), face, fine, fs, cone, to_fine, provenance });
    }
    records.reverse();
    Ok(records)
}

/// Maps `f: P → Q` and `g: P → R` whose pushout is the chart of `X ×_B Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub f: MonoidMap,
    pub g: MonoidMap,
}

impl Diagram {
    pub fn new(f: MonoidMap, g: MonoidMap) -> Result<Diagram> {
        if f.source() != g.source() {
            return Err(Error::SourceMismatch);
        }
        for m in [&f, &g] {
            if let MapCheck::Violated(relation) = validate_map(m) {
                return Err(Error::InvalidMap { relation });
            }
        }
        Ok(Diagram { f, g })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramReport {
    /// `Q ⊕_P R` as first written down.
    pub pushout: Presentation,
    /// The pushout after removing redundant generators; faces are computed on this.
    pub chart: Presentation,
    pub faces: Vec<FaceRecord>,
    pub map_f: ExtendedConeMap,
    pub map_g: ExtendedConeMap,
    pub strata: Vec<FiberStratum>,
    pub theorem_c: TheoremCReport,
}

impl DiagramReport {
    pub fn matched(&self) -> bool {
        self.theorem_c.all_faces_matched() && self.theorem_c.all_strata_matched()
    }
}

/// `σ_P = Hom(P, R≥0)` in the dual of the free part of `P^gp`.
pub fn dual_cone(p: &Presentation) -> Result<Cone> {
    let g = groupify(p);
    Cone::from_inequalities(g.free_rank, &g.free_images(), &[])
}

/// The linear map `σ_Q → σ_P` dual to `f: P → Q`.
pub fn dual_map(f: &MonoidMap) -> Result<IntegerMatrix> {
    let gp = groupify(f.source());
    let gq = groupify(f.target());
    let cols = |rows: Vec<Vec<BigInt>>, n: usize| -> Result<IntegerMatrix> { Ok(IntegerMatrix::from_rows(n, rows)?.transpose()) };
    let p_images = cols(gp.free_images(), gp.free_rank)?;
    let q_images = cols(f.images().iter().map(|e| gq.image(e)[..gq.free_rank].to_vec()).collect(), gq.free_rank)?;
    let section = right_inverse(&p_images)?;
    Ok(q_images.mul(&section)?.transpose())
}

pub fn fine_faces_of_diagram(diagram: &Diagram, limits: &Limits) -> Result<DiagramReport> {
    let raw = pushout(&diagram.f, &diagram.g)?;
    let (chart, _) = eliminate_redundant_generators(&raw)?;
    let faces = fine_faces(&chart, limits)?;
    let base = extend(&dual_cone(diagram.f.source())?);
    let map_f = extend_map(&dual_map(&diagram.f)?, &extend(&dual_cone(diagram.f.target())?), &base)?;
    let map_g = extend_map(&dual_map(&diagram.g)?, &extend(&dual_cone(diagram.g.target())?), &base)?;
    let strata = extended_fiber_product(&map_f, &map_g)?;
    let cones: Vec<Cone> = faces.iter().map(|r| r.cone.clone()).collect();
    let theorem_c = theorem_c_check(&cones, &strata);
    Ok(DiagramReport { pushout: raw, chart, faces, map_f, map_g, strata, theorem_c })
}

/// Names of a record's prime generators, for reports.
pub fn prime_names(chart: &Presentation, prime: &PrimeTrace) -> Vec<String> {
    prime.names(chart).into_iter().map(String::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::unimodular_equivalent;
    use crate::structure::is_integral;
    use alloc::vec;

    fn blowup() -> Presentation {
        Presentation::from_u64s(&["u", "v1", "v2"], &[(&[1, 1, 0], &[1, 0, 1])]).unwrap()
    }

    fn blowup_diagram() -> Diagram {
        let p = Presentation::free(&["x", "y"]).unwrap();
        let q = Presentation::free(&["u", "v"]).unwrap();
        let f = MonoidMap::new(p, q, vec![Exponent::from_u64s(&[1, 0]), Exponent::from_u64s(&[1, 1])]).unwrap();
        Diagram::new(f.clone(), f).unwrap()
    }

    #[test]
    fn blowup_chart_faces() {
        let recs = fine_faces(&blowup(), &Limits::default()).unwrap();
        assert_eq!(recs.len(), 6);
        assert_eq!(recs[0].fine, integralize(&blowup()));
        assert_eq!(recs[0].fs.rank, 2);
        assert_eq!(recs[1].prime.indices(), &[0]);
        assert!(recs[1].face.is_free() && recs[1].face.num_generators() == 2);
        for (r, rank) in recs[2..].iter().zip([1, 1, 1, 0]) {
            assert_eq!(r.fs.rank, rank);
        }
        for r in &recs {
            assert!(is_integral(&r.fine));
            assert!(validate_map(&r.to_fine).is_valid());
            assert!(validate_map(&r.fs.inclusion).is_valid());
        }
        assert!(recs[2].provenance.shared || recs[1].provenance.shared);
    }

    #[test]
    fn free_chart_faces() {
        let recs = fine_faces(&Presentation::free(&["a", "b", "c"]).unwrap(), &Limits::default()).unwrap();
        assert_eq!(recs.len(), 8);
        assert!(recs.iter().all(|r| r.face.is_free() && r.fine == r.face));
    }

    #[test]
    fn dual_map_of_blowup() {
        let d = blowup_diagram();
        assert_eq!(dual_map(&d.f).unwrap(), IntegerMatrix::from_i64(2, &[&[1, 0], &[1, 1]]));
        assert_eq!(dual_cone(d.f.source()).unwrap(), Cone::orthant(2));
    }

    #[test]
    fn blowup_diagram_matches() {
        let rep = fine_faces_of_diagram(&blowup_diagram(), &Limits::default()).unwrap();
        assert_eq!(rep.faces.len(), 6);
        assert!(rep.matched());
        let src = &rep.map_f.source;
        let e1_ray = src.base.rays().iter().position(|r| r == &crate::lattice::vectors(&[&[1, 0]])[0]).unwrap();
        let e1 = src.face_index(&[e1_ray]).unwrap();
        assert_eq!(rep.map_f.face_map[e1], rep.map_f.target.strata.len() - 1);
        let s = rep.strata.iter().position(|s| s.source_faces == (e1, e1)).unwrap();
        assert!(unimodular_equivalent(&rep.strata[s].cone, &Cone::orthant(2)));
        assert!(rep.theorem_c.strata_matched[s]);
    }

    #[test]
    fn doubling_diagram() {
        let n = Presentation::free(&["p"]).unwrap();
        let q = Presentation::free(&["q"]).unwrap();
        let r = Presentation::free(&["r"]).unwrap();
        let f = MonoidMap::new(n.clone(), q, vec![Exponent::from_u64s(&[2])]).unwrap();
        let g = MonoidMap::new(n, r, vec![Exponent::from_u64s(&[1])]).unwrap();
        let rep = fine_faces_of_diagram(&Diagram::new(f, g).unwrap(), &Limits::default()).unwrap();
        assert_eq!(rep.chart.generators().names(), &["q"]);
        assert_eq!(rep.faces.len(), 2);
        assert!(rep.matched());
    }
}
