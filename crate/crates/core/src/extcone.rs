//! Extended cones: the disjoint union of asymptotic cones `σ/(ℝκ)` over the
//! faces `κ` of `σ`, their maps, fiber products, and the chart-level check
//! that fs faces of a fiber product match its extended-cone strata.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{cone_fiber_product, unimodular_equivalent, Cone, Face, IntegerMatrix, LatticeSplit};

/// The asymptotic cone at one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub face: Face,
    /// Projection `Z^n → Z^n / (span κ ∩ Z^n)`.
    pub projection: IntegerMatrix,
    /// A section of `projection`.
    pub section: IntegerMatrix,
    /// Image of the base cone in the quotient lattice.
    pub cone: Cone,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedCone {
    pub base: Cone,
    /// One stratum per face, in the order of [`Cone::faces`].
    pub strata: Vec<Stratum>,
}

impl ExtendedCone {
    pub fn face_index(&self, rays: &[usize]) -> Option<usize> {
        self.strata.iter().position(|s| s.face.rays == rays)
    }
}

pub fn extend(cone: &Cone) -> ExtendedCone {
    let n = cone.rank();
    let mut gens: Vec<Vec<BigInt>> = cone.rays().to_vec();
    gens.extend(cone.lineality().iter().cloned());
    gens.extend(cone.lineality().iter().map(|l| l.iter().map(|x| -x).collect()));
    let strata = cone
        .faces()
        .into_iter()
        .map(|face| {
            let mut span: Vec<Vec<BigInt>> = face.rays.iter().map(|&i| cone.rays()[i].clone()).collect();
            span.extend(cone.lineality().iter().cloned());
            let split = LatticeSplit::new(n, &span);
            let projection = split.projection();
            let images: Vec<Vec<BigInt>> = gens.iter().map(|g| projection.apply(g)).collect();
            let asymptotic = Cone::from_rays(split.quotient_rank(), &images).expect("projected lengths");
            Stratum { face, projection, section: split.section(), cone: asymptotic }
        })
        .collect();
    ExtendedCone { base: cone.clone(), strata }
}

/// The map of extended cones induced by a linear map of the bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedConeMap {
    pub linear: IntegerMatrix,
    pub source: ExtendedCone,
    pub target: ExtendedCone,
    /// For each source stratum, the target stratum it lands in.
    pub face_map: Vec<usize>,
    /// For each source stratum, the induced map of quotient lattices.
    pub quotients: Vec<IntegerMatrix>,
}

impl ExtendedConeMap {
    /// Injective on each stratum and on the set of strata.
    pub fn is_injective(&self) -> bool {
        let mut seen = alloc::collections::BTreeSet::new();
        if !self.face_map.iter().all(|k| seen.insert(*k)) {
            return false;
        }
        self.source.strata.iter().zip(&self.quotients).all(|(s, q)| injective_on(q, &s.cone))
    }
}

/// Whether `q` is injective on the linear span of `cone`.
fn injective_on(q: &IntegerMatrix, cone: &Cone) -> bool {
    let mut span: Vec<Vec<BigInt>> = cone.rays().to_vec();
    span.extend(cone.lineality().iter().cloned());
    if span.is_empty() {
        return true;
    }
    let images: Vec<Vec<BigInt>> = span.iter().map(|v| q.apply(v)).collect();
    let rank = |vs: Vec<Vec<BigInt>>, n: usize| IntegerMatrix::from_rows(n, vs).expect("lengths").rank();
    rank(images, q.num_rows()) == rank(span, q.num_cols())
}

pub fn extend_map(f: &IntegerMatrix, source: &ExtendedCone, target: &ExtendedCone) -> Result<ExtendedConeMap> {
    let (sb, tb) = (&source.base, &target.base);
    if f.num_cols() != sb.rank() {
        return Err(Error::DimensionMismatch { expected: sb.rank(), found: f.num_cols() });
    }
    if f.num_rows() != tb.rank() {
        return Err(Error::DimensionMismatch { expected: tb.rank(), found: f.num_rows() });
    }
    for (i, r) in sb.rays().iter().enumerate() {
        if !tb.contains(&f.apply(r)) {
            return Err(Error::ConeContainment { ray: i });
        }
    }
    for (i, l) in sb.lineality().iter().enumerate() {
        let img = f.apply(l);
        let neg: Vec<BigInt> = img.iter().map(|x| -x).collect();
        if !tb.contains(&img) || !tb.contains(&neg) {
            return Err(Error::ConeContainment { ray: sb.rays().len() + i });
        }
    }
    let lineality_images: Vec<Vec<BigInt>> = sb.lineality().iter().map(|l| f.apply(l)).collect();
    let mut face_map = Vec::new();
    let mut quotients = Vec::new();
    for s in &source.strata {
        let mut points: Vec<Vec<BigInt>> = s.face.rays.iter().map(|&i| f.apply(&sb.rays()[i])).collect();
        points.extend(lineality_images.iter().cloned());
        let image_face = tb.smallest_face_containing(&points)?;
        let k = target.face_index(&image_face.rays).expect("faces of the target base");
        let q = target.strata[k].projection.mul(f)?.mul(&s.section)?;
        face_map.push(k);
        quotients.push(q);
    }
    Ok(ExtendedConeMap { linear: f.clone(), source: source.clone(), target: target.clone(), face_map, quotients })
}

/// One stratum of a fiber product of extended cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberStratum {
    /// Stratum indices in the two sources.
    pub source_faces: (usize, usize),
    pub target_face: usize,
    pub cone: Cone,
}

/// Pairs of source strata over a common target stratum, with the fiber
/// product of their asymptotic cones.
pub fn extended_fiber_product(f: &ExtendedConeMap, g: &ExtendedConeMap) -> Result<Vec<FiberStratum>> {
    if f.target.base != g.target.base {
        return Err(Error::TargetMismatch);
    }
    let mut out = Vec::new();
    for (i, &ki) in f.face_map.iter().enumerate() {
        for (j, &kj) in g.face_map.iter().enumerate() {
            if ki != kj {
                continue;
            }
            let cone = cone_fiber_product(&f.source.strata[i].cone, &f.quotients[i], &g.source.strata[j].cone, &g.quotients[j])?;
            out.push(FiberStratum { source_faces: (i, j), target_face: ki, cone });
        }
    }
    Ok(out)
}

/// Outcome of matching fs face cones against fiber-product strata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCReport {
    /// For each face, the indices of all unimodularly equivalent strata.
    pub matches: Vec<Vec<usize>>,
    /// For each stratum, whether some face matched it.
    pub strata_matched: Vec<bool>,
}

impl TheoremCReport {
    /// Every face matched some stratum.
    pub fn all_faces_matched(&self) -> bool {
        self.matches.iter().all(|m| !m.is_empty())
    }

    /// Every stratum matched some face.
    pub fn all_strata_matched(&self) -> bool {
        self.strata_matched.iter().all(|&b| b)
    }
}

/// Caveat attached to every report.
pub const CHART_LEVEL_NOTE: &str =
    "chart-level check on single cones; faces are not split into connected components and the global cone complex is not assembled";

pub fn theorem_c_check(face_cones: &[Cone], strata: &[FiberStratum]) -> TheoremCReport {
    let matches: Vec<Vec<usize>> = face_cones
        .iter()
        .map(|c| (0..strata.len()).filter(|&k| unimodular_equivalent(c, &strata[k].cone)).collect())
        .collect();
    let mut strata_matched = alloc::vec![false; strata.len()];
    for m in &matches {
        for &k in m {
            strata_matched[k] = true;
        }
    }
    TheoremCReport { matches, strata_matched }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vectors;
    use alloc::vec;

    fn blowup_cone() -> Cone {
        Cone::from_rays(2, &vectors(&[&[1, 0], &[1, 1]])).unwrap()
    }

    fn half_line() -> Cone {
        Cone::from_rays(1, &vectors(&[&[1]])).unwrap()
    }

    #[test]
    fn strata_of_orthant() {
        let e = extend(&Cone::orthant(2));
        assert_eq!(e.strata.len(), 4);
        assert_eq!(e.strata[0].cone, Cone::orthant(2));
        assert!(e.strata[1].cone == half_line() && e.strata[2].cone == half_line());
        assert!(e.strata[3].cone.is_zero());
    }

    #[test]
    fn strata_of_blowup_cone() {
        let c = blowup_cone();
        let e = extend(&c);
        assert_eq!(e.strata.len(), 4);
        let at_diag = e.face_index(&[1]).unwrap();
        assert_eq!(c.rays()[1], vectors(&[&[1, 1]])[0]);
        assert!(unimodular_equivalent(&e.strata[at_diag].cone, &half_line()));
        assert_eq!(extend(&Cone::zero(2)).strata.len(), 1);
    }

    #[test]
    fn identity_map_of_strata() {
        let e = extend(&Cone::orthant(2));
        let m = extend_map(&IntegerMatrix::identity(2), &e, &e).unwrap();
        assert_eq!(m.face_map, vec![0, 1, 2, 3]);
        assert!(m.is_injective());
    }

    #[test]
    fn orthant_into_wider_cone_is_not_injective() {
        let sigma = extend(&Cone::orthant(2));
        let tau = extend(&Cone::from_rays(2, &vectors(&[&[1, 0], &[-1, 1]])).unwrap());
        let m = extend_map(&IntegerMatrix::identity(2), &sigma, &tau).unwrap();
        let ray_v = sigma.face_index(&[sigma.base.rays().iter().position(|r| r == &vectors(&[&[0, 1]])[0]).unwrap()]).unwrap();
        let zero = tau.strata.len() - 1;
        assert!(tau.strata[zero].cone.is_zero());
        assert_eq!(m.face_map[ray_v], zero);
        assert!(!m.is_injective());
    }

    #[test]
    fn blowup_map_sends_diagonal_ray_to_zero_stratum() {
        let src = extend(&blowup_cone());
        let tgt = extend(&Cone::orthant(2));
        let f = IntegerMatrix::from_i64(2, &[&[1, 0], &[1, 1]]);
        let m = extend_map(&f, &src, &tgt).unwrap();
        let diag = src.face_index(&[1]).unwrap();
        assert_eq!(m.face_map[diag], tgt.strata.len() - 1);
    }

    #[test]
    fn containment_is_checked() {
        let src = extend(&Cone::orthant(2));
        let tgt = extend(&Cone::orthant(2));
        let f = IntegerMatrix::from_i64(2, &[&[1, 0], &[0, -1]]);
        assert_eq!(extend_map(&f, &src, &tgt), Err(Error::ConeContainment { ray: 0 }));
    }

    #[test]
    fn fiber_product_of_identities_on_half_line() {
        let e = extend(&half_line());
        let m = extend_map(&IntegerMatrix::identity(1), &e, &e).unwrap();
        let strata = extended_fiber_product(&m, &m).unwrap();
        assert_eq!(strata.len(), 2);
        assert!(unimodular_equivalent(&strata[0].cone, &half_line()));
        assert!(strata[1].cone.is_zero());
    }

    #[test]
    fn blowup_self_product() {
        let src = extend(&blowup_cone());
        let tgt = extend(&Cone::orthant(2));
        let f = IntegerMatrix::from_i64(2, &[&[1, 0], &[1, 1]]);
        let m = extend_map(&f, &src, &tgt).unwrap();
        let strata = extended_fiber_product(&m, &m).unwrap();
        let diag = src.face_index(&[1]).unwrap();
        let s = strata.iter().find(|s| s.source_faces == (diag, diag)).unwrap();
        assert!(unimodular_equivalent(&s.cone, &Cone::orthant(2)));
        let base = strata.iter().find(|s| s.source_faces == (0, 0)).unwrap();
        assert_eq!(base.cone, cone_fiber_product(&src.base, &f, &src.base, &f).unwrap());
        let report = theorem_c_check(&[Cone::orthant(2)], &strata);
        assert!(report.all_faces_matched());
        assert!(report.matches[0].contains(&strata.iter().position(|t| t == s).unwrap()));
    }
}
