use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cone::{Cone, Face};
use super::matrix::{adjugate, determinant, smith_normal_form, unimodular_inverse, IntegerMatrix, LatticeSplit};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Pulling triangulation of a full-dimensional pointed cone.
///
/// Each simplex is a sorted list of ray indices. The apex pulled at every
/// level is the smallest ray index of the face being triangulated.
pub fn triangulate(cone: &Cone) -> Vec<Vec<usize>> {
    let faces = cone.faces();
    let top = faces.last().expect("a cone has at least one face").clone();
    let mut out = pull(&top, &faces);
    out.sort();
    out
}

fn pull(face: &Face, faces: &[Face]) -> Vec<Vec<usize>> {
    if face.rays.len() == face.dim {
        return alloc::vec![face.rays.clone()];
    }
    let apex = face.rays[0];
    let mut out = Vec::new();
    for f in faces {
        if f.dim + 1 == face.dim && !f.rays.contains(&apex) && f.rays.iter().all(|r| face.rays.contains(r)) {
            for mut s in pull(f, faces) {
                s.push(apex);
                s.sort();
                out.push(s);
            }
        }
    }
    out
}

/// Nonzero lattice points of the half-open parallelepiped `{Σ λ_i v_i : 0 <= λ_i < 1}`
/// spanned by the linearly independent `rays` of `Z^d`, `d = rays.len()`.
///
/// Points are found as coset representatives of `Z^d / V Z^d` via the Smith
/// form of `V`, then moved into the parallelepiped. The count is `|det V| - 1`.
pub fn parallelepiped_points(rays: &[Vec<BigInt>], cap: u64) -> Result<Vec<Vec<BigInt>>> {
    let d = rays.len();
    let v = IntegerMatrix::from_rows(d, rays.to_vec())?.transpose();
    let det = determinant(&v);
    if det.is_zero() {
        return Err(Error::Matrix("of full rank"));
    }
    let volume = det.abs();
    if volume > BigInt::from(cap) {
        return Err(Error::VolumeCap { volume: volume.to_string(), cap });
    }
    let adj = adjugate(&v);
    let (adj, den) = if det.is_negative() { (scale(&adj, &-BigInt::one()), -det) } else { (adj, det) };
    let snf = smith_normal_form(&v);
    let uinv = unimodular_inverse(&snf.u)?;
    let radices: Vec<u64> = snf.divisors.iter().map(|x| x.to_u64().expect("bounded by the volume cap")).collect();
    let mut digits = alloc::vec![0u64; d];
    let mut out = Vec::new();
    loop {
        let i = match digits.iter().zip(&radices).position(|(x, r)| x + 1 < *r) {
            Some(i) => i,
            None => break,
        };
        digits[i] += 1;
        for x in &mut digits[..i] {
            *x = 0;
        }
        let y: Vec<BigInt> = digits.iter().map(|&x| BigInt::from(x)).collect();
        let x = uinv.apply(&y);
        let lambda: Vec<BigInt> = adj.apply(&x).iter().map(|c| c.mod_floor(&den)).collect();
        let point: Vec<BigInt> = v.apply(&lambda).iter().map(|c| c / &den).collect();
        out.push(point);
    }
    out.sort();
    Ok(out)
}

fn scale(m: &IntegerMatrix, k: &BigInt) -> IntegerMatrix {
    let rows = m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x * k).collect()).collect();
    IntegerMatrix::from_rows(m.num_cols(), rows).expect("same shape")
}

/// The Hilbert basis of `cone ∩ Z^n` for a pointed cone, sorted.
pub fn hilbert_basis(cone: &Cone, limits: &Limits) -> Result<Vec<Vec<BigInt>>> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    if cone.rank() > limits.max_ambient_rank {
        return Err(Error::RankCap { rank: cone.rank(), cap: limits.max_ambient_rank });
    }
    if cone.rays().is_empty() {
        return Ok(Vec::new());
    }
    let split = LatticeSplit::new(cone.rank(), cone.rays());
    let d = split.rank();
    let inner_rays: Vec<Vec<BigInt>> = cone.rays().iter().map(|r| split.inner_coords(r)).collect();
    let inner = Cone::from_rays(d, &inner_rays)?;
    let mut candidates: BTreeSet<Vec<BigInt>> = inner.rays().iter().cloned().collect();
    for simplex in triangulate(&inner) {
        let gens: Vec<Vec<BigInt>> = simplex.iter().map(|&i| inner.rays()[i].clone()).collect();
        candidates.extend(parallelepiped_points(&gens, limits.parallelepiped_volume)?);
    }
    let candidates: Vec<Vec<BigInt>> = candidates.into_iter().collect();
    let mut basis: Vec<Vec<BigInt>> = candidates
        .iter()
        .filter(|x| {
            !candidates.iter().any(|y| {
                y != *x && {
                    let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                    diff.iter().any(|c| !c.is_zero()) && inner.contains(&diff)
                }
            })
        })
        .map(|x| split.lift_inner(x))
        .collect();
    basis.sort();
    Ok(basis)
}

/// Writes a point of the cone as a nonnegative combination of `basis`,
/// returning the multiplicities.
///
/// `cone` must be pointed and contain every element of `basis`. Elements are
/// subtracted greedily in order, backtracking over remainders that are known
/// to be stuck.
pub fn decompose(cone: &Cone, basis: &[Vec<BigInt>], point: &[BigInt]) -> Option<Vec<BigInt>> {
    if !cone.contains(point) {
        return None;
    }
    let mut coeffs = alloc::vec![BigInt::zero(); basis.len()];
    let mut stuck = BTreeSet::new();
    if descend(cone, basis, point.to_vec(), &mut coeffs, &mut stuck) {
        Some(coeffs)
    } else {
        None
    }
}

fn descend(
    cone: &Cone,
    basis: &[Vec<BigInt>],
    rest: Vec<BigInt>,
    coeffs: &mut [BigInt],
    stuck: &mut BTreeSet<Vec<BigInt>>,
) -> bool {
    if rest.iter().all(Zero::is_zero) {
        return true;
    }
    if stuck.contains(&rest) {
        return false;
    }
    for (i, b) in basis.iter().enumerate() {
        if b.iter().all(Zero::is_zero) {
            continue;
        }
        let next: Vec<BigInt> = rest.iter().zip(b).map(|(x, y)| x - y).collect();
        if !cone.contains(&next) {
            continue;
        }
        coeffs[i] += 1;
        if descend(cone, basis, next, coeffs, stuck) {
            return true;
        }
        coeffs[i] -= 1;
    }
    stuck.insert(rest);
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vectors;
    use alloc::vec;

    fn hb(rank: usize, rays: &[&[i64]]) -> Vec<Vec<BigInt>> {
        hilbert_basis(&Cone::from_rays(rank, &vectors(rays)).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn orthant_basis() {
        assert_eq!(hb(2, &[&[1, 0], &[0, 1]]), vectors(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn spec_examples() {
        assert_eq!(hb(2, &[&[1, 0], &[1, 2]]), vectors(&[&[1, 0], &[1, 1], &[1, 2]]));
        assert_eq!(hb(2, &[&[2, 3]]), vectors(&[&[2, 3]]));
        assert_eq!(hb(1, &[&[1]]), vectors(&[&[1]]));
    }

    #[test]
    fn classic_cones() {
        // The cone over (1,0),(1,3): basis is the four points (1,k).
        assert_eq!(hb(2, &[&[1, 0], &[1, 3]]).len(), 4);
        // The (2,1)-cone (0,1),(2,-1): basis (0,1),(1,0),(2,-1).
        assert_eq!(hb(2, &[&[0, 1], &[2, -1]]), vectors(&[&[0, 1], &[1, 0], &[2, -1]]));
        // A non-simplicial cone in rank 3.
        let b = hb(3, &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(b, vectors(&[&[-1, 0, 1], &[0, -1, 1], &[0, 0, 1], &[0, 1, 1], &[1, 0, 1]]));
    }

    #[test]
    fn lower_dimensional_cone_in_sublattice() {
        let b = hb(3, &[&[1, 0, 0], &[1, 2, 0]]);
        assert_eq!(b, vectors(&[&[1, 0, 0], &[1, 1, 0], &[1, 2, 0]]));
    }

    #[test]
    fn parallelepiped_of_wide_cone() {
        let pts = parallelepiped_points(&vectors(&[&[1, 0], &[1, 2]]), 100).unwrap();
        assert_eq!(pts, vectors(&[&[1, 1]]));
        let big = parallelepiped_points(&vectors(&[&[1, 0], &[1, 2000]]), 100);
        assert!(matches!(big, Err(Error::VolumeCap { .. })));
    }

    #[test]
    fn pulling_triangulation_of_square() {
        let c = Cone::from_rays(3, &vectors(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]])).unwrap();
        let t = triangulate(&c);
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|s| s.contains(&0) && s.len() == 3));
    }

    #[test]
    fn non_pointed_is_rejected() {
        let c = Cone::from_inequalities(2, &vectors(&[&[0, 1]]), &[]).unwrap();
        assert_eq!(hilbert_basis(&c, &Limits::default()), Err(Error::NotPointed));
    }

    #[test]
    fn greedy_decomposition() {
        let c = Cone::from_rays(2, &vectors(&[&[1, 0], &[1, 2]])).unwrap();
        let basis = hilbert_basis(&c, &Limits::default()).unwrap();
        let coeffs = decompose(&c, &basis, &vectors(&[&[5, 3]])[0]).unwrap();
        let mut sum = vec![BigInt::zero(); 2];
        for (k, b) in coeffs.iter().zip(&basis) {
            for (s, x) in sum.iter_mut().zip(b) {
                *s += k * x;
            }
        }
        assert_eq!(sum, vectors(&[&[5, 3]])[0]);
    }
}
