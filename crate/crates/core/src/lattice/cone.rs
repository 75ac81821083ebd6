use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{adjugate, determinant, dot, hermite_normal_form, primitive, IntegerMatrix, LatticeSplit};
use crate::error::{Error, Result};

/// A rational polyhedral cone in `R^rank`, stored with both descriptions.
///
/// `rays` and `lineality` generate the cone; `facets` (inequalities `h·x >= 0`)
/// and `equations` (`h·x = 0`) cut it out. Every field is canonical: rays are
/// primitive and reduced modulo the lineality space, facets reduced modulo the
/// equations, lineality and equations given by Hermite bases, all sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    lineality: Vec<Vec<BigInt>>,
    facets: Vec<Vec<BigInt>>,
    equations: Vec<Vec<BigInt>>,
}

/// A face, named by the indices of the rays it contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub rays: Vec<usize>,
}

impl Cone {
    /// The cone generated by `gens`.
    pub fn from_rays(rank: usize, gens: &[Vec<BigInt>]) -> Result<Cone> {
        check_lengths(rank, gens)?;
        let (facets, equations) = double_description(rank, gens);
        let (rays, lineality) = double_description(rank, &with_negatives(&facets, &equations));
        Ok(Cone { rank, rays, lineality, facets, equations })
    }

    /// The cone `{x : h·x >= 0 for h in ineqs, e·x = 0 for e in eqs}`.
    pub fn from_inequalities(rank: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> Result<Cone> {
        check_lengths(rank, ineqs)?;
        check_lengths(rank, eqs)?;
        let (rays, lineality) = double_description(rank, &with_negatives(ineqs, eqs));
        let (facets, equations) = double_description(rank, &with_negatives(&rays, &lineality));
        Ok(Cone { rank, rays, lineality, facets, equations })
    }

    pub fn zero(rank: usize) -> Cone {
        Cone::from_rays(rank, &[]).expect("no generators")
    }

    /// The nonnegative orthant.
    pub fn orthant(rank: usize) -> Cone {
        let id = IntegerMatrix::identity(rank).to_rows();
        Cone::from_rays(rank, &id).expect("unit vectors")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    pub fn facets(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.rank - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The dual cone `{y : y·x >= 0 for all x in self}`.
    pub fn dual(&self) -> Cone {
        Cone {
            rank: self.rank,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        x.len() == self.rank
            && self.facets.iter().all(|h| !dot(h, x).is_negative())
            && self.equations.iter().all(|e| dot(e, x).is_zero())
    }

    /// Whether `x` lies in the relative interior.
    pub fn contains_interior(&self, x: &[BigInt]) -> bool {
        self.contains(x) && self.facets.iter().all(|h| dot(h, x).is_positive())
    }

    fn tight_rays(&self, h: &[BigInt]) -> Vec<usize> {
        (0..self.rays.len()).filter(|&i| dot(h, &self.rays[i]).is_zero()).collect()
    }

    fn face_dim(&self, rays: &[usize]) -> usize {
        let mut span: Vec<Vec<BigInt>> = rays.iter().map(|&i| self.rays[i].clone()).collect();
        span.extend(self.lineality.iter().cloned());
        rank_of(self.rank, &span)
    }

    /// All faces, sorted by dimension and then by ray indices.
    pub fn faces(&self) -> Vec<Face> {
        let tight: Vec<Vec<usize>> = self.facets.iter().map(|h| self.tight_rays(h)).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = alloc::vec![(0..self.rays.len()).collect::<Vec<usize>>()];
        seen.insert(queue[0].clone());
        while let Some(face) = queue.pop() {
            for t in &tight {
                let meet: Vec<usize> = face.iter().copied().filter(|i| t.contains(i)).collect();
                if seen.insert(meet.clone()) {
                    queue.push(meet);
                }
            }
        }
        let mut faces: Vec<Face> = seen.into_iter().map(|rays| Face { dim: self.face_dim(&rays), rays }).collect();
        faces.sort();
        faces
    }

    /// Rays of the face whose relative interior meets the cone generated by
    /// `points`, i.e. the smallest face containing them.
    pub fn smallest_face_containing(&self, points: &[Vec<BigInt>]) -> Result<Face> {
        for (i, p) in points.iter().enumerate() {
            if !self.contains(p) {
                return Err(Error::ConeContainment { ray: i });
            }
        }
        let mut rays: Vec<usize> = (0..self.rays.len()).collect();
        for h in &self.facets {
            if points.iter().all(|p| dot(h, p).is_zero()) {
                let t = self.tight_rays(h);
                rays.retain(|i| t.contains(i));
            }
        }
        Ok(Face { dim: self.face_dim(&rays), rays })
    }

    /// The face with the given ray indices as a cone in its own right.
    pub fn face_cone(&self, rays: &[usize]) -> Cone {
        let mut gens: Vec<Vec<BigInt>> = rays.iter().map(|&i| self.rays[i].clone()).collect();
        gens.extend(with_negatives(&[], &self.lineality));
        Cone::from_rays(self.rank, &gens).expect("rays of matching length")
    }

    /// Image under a linear map `f` (rows = target coordinates).
    pub fn image(&self, f: &IntegerMatrix) -> Result<Cone> {
        if f.num_cols() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: f.num_cols() });
        }
        let gens: Vec<Vec<BigInt>> =
            with_negatives(&self.rays, &self.lineality).iter().map(|g| f.apply(g)).collect();
        Cone::from_rays(f.num_rows(), &gens)
    }
}

fn check_lengths(rank: usize, vs: &[Vec<BigInt>]) -> Result<()> {
    match vs.iter().find(|v| v.len() != rank) {
        Some(v) => Err(Error::DimensionMismatch { expected: rank, found: v.len() }),
        None => Ok(()),
    }
}

fn with_negatives(pos: &[Vec<BigInt>], both: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut out = pos.to_vec();
    for v in both {
        out.push(v.clone());
        out.push(v.iter().map(|x| -x).collect());
    }
    out
}

fn rank_of(n: usize, vs: &[Vec<BigInt>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    IntegerMatrix::from_rows(n, vs.to_vec()).expect("vectors of length n").rank()
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(m: usize) -> Bits {
        Bits(alloc::vec![0; m.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct DdRay {
    v: Vec<BigInt>,
    tight: Bits,
}

/// Extreme rays and a lineality basis of `{x : h·x >= 0 for all h}`.
///
/// Incremental double description. Constraints are processed in
/// lexicographic order; adjacency uses the combinatorial test on sets of
/// tight constraints.
fn double_description(n: usize, constraints: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut cons: Vec<Vec<BigInt>> =
        constraints.iter().filter(|h| h.iter().any(|x| !x.is_zero())).map(|h| primitive(h.clone())).collect();
    cons.sort();
    cons.dedup();
    let m = cons.len();
    let mut lin: Vec<Vec<BigInt>> = IntegerMatrix::identity(n).to_rows();
    let mut rays: Vec<DdRay> = Vec::new();
    for (k, h) in cons.iter().enumerate() {
        if let Some(pos) = lin.iter().position(|l| !dot(h, l).is_zero()) {
            let mut l0 = lin.remove(pos);
            let mut a0 = dot(h, &l0);
            if a0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                a0 = -a0;
            }
            for l in lin.iter_mut() {
                let s = dot(h, l);
                if !s.is_zero() {
                    *l = primitive(l.iter().zip(&l0).map(|(x, y)| &a0 * x - &s * y).collect());
                }
            }
            for r in rays.iter_mut() {
                let s = dot(h, &r.v);
                if !s.is_zero() {
                    r.v = primitive(r.v.iter().zip(&l0).map(|(x, y)| &a0 * x - &s * y).collect());
                }
                r.tight.set(k);
            }
            let mut tight = Bits::new(m);
            for j in 0..k {
                tight.set(j);
            }
            rays.push(DdRay { v: primitive(l0), tight });
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(h, &r.v)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.tight.set(k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                let adjacent = (0..rays.len()).all(|r| r == p || r == q || !common.subset_of(&rays[r].tight));
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> =
                    rays[q].v.iter().zip(&rays[p].v).map(|(x, y)| &vals[p] * x - &vals[q] * y).collect();
                let mut tight = common;
                tight.set(k);
                next.push(DdRay { v: primitive(v), tight });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_zero() {
                r.tight.set(k);
                next.push(r);
            } else if vals[i].is_positive() {
                next.push(r);
            }
        }
        rays = next;
    }
    let lineality = hermite_normal_form(&IntegerMatrix::from_rows(n, lin).expect("length n")).basis();
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| reduce_mod_span(r.v, &lineality)).collect();
    out.sort();
    out.dedup();
    (out, lineality)
}

/// Primitive multiple of the orthogonal projection of `v` away from `span`.
fn reduce_mod_span(v: Vec<BigInt>, span: &[Vec<BigInt>]) -> Vec<BigInt> {
    if span.is_empty() {
        return primitive(v);
    }
    let k = span.len();
    let n = v.len();
    let b = IntegerMatrix::from_rows(n, span.to_vec()).expect("length n");
    let gram = b.mul(&b.transpose()).expect("square");
    let g = determinant(&gram);
    let coeffs = adjugate(&gram).apply(&b.apply(&v));
    let mut out: Vec<BigInt> = v.iter().map(|x| &g * x).collect();
    for i in 0..k {
        for (o, s) in out.iter_mut().zip(b.row(i)) {
            *o -= &coeffs[i] * s;
        }
    }
    primitive(out)
}

/// `{(p, q) in s1 × s2 : f(p) = g(q)}`.
pub fn cone_fiber_product(s1: &Cone, f: &IntegerMatrix, s2: &Cone, g: &IntegerMatrix) -> Result<Cone> {
    let (n1, n2) = (s1.rank, s2.rank);
    if f.num_cols() != n1 {
        return Err(Error::DimensionMismatch { expected: n1, found: f.num_cols() });
    }
    if g.num_cols() != n2 {
        return Err(Error::DimensionMismatch { expected: n2, found: g.num_cols() });
    }
    if f.num_rows() != g.num_rows() {
        return Err(Error::DimensionMismatch { expected: f.num_rows(), found: g.num_rows() });
    }
    let pad = |v: &[BigInt], left: bool| -> Vec<BigInt> {
        let mut out = alloc::vec![BigInt::zero(); n1 + n2];
        let off = if left { 0 } else { n1 };
        for (i, x) in v.iter().enumerate() {
            out[off + i] = x.clone();
        }
        out
    };
    let mut ineqs: Vec<Vec<BigInt>> = s1.facets.iter().map(|h| pad(h, true)).collect();
    ineqs.extend(s2.facets.iter().map(|h| pad(h, false)));
    let mut eqs: Vec<Vec<BigInt>> = s1.equations.iter().map(|h| pad(h, true)).collect();
    eqs.extend(s2.equations.iter().map(|h| pad(h, false)));
    for i in 0..f.num_rows() {
        eqs.push(f.row(i).iter().cloned().chain(g.row(i).iter().map(|x| -x)).collect());
    }
    Cone::from_inequalities(n1 + n2, &ineqs, &eqs)
}

/// Rays of the pointed cone `C / lineality`, in coordinates of the lattice
/// `span ∩ Z^d` of that quotient.
fn intrinsic_rays(c: &Cone) -> (usize, Vec<Vec<BigInt>>) {
    let split = LatticeSplit::new(c.rank, &c.lineality);
    let projected: Vec<Vec<BigInt>> = c.rays.iter().map(|r| primitive(split.project(r))).collect();
    let inner = LatticeSplit::new(split.quotient_rank(), &projected);
    let rays = projected.iter().map(|p| primitive(inner.inner_coords(p))).collect();
    (inner.rank(), rays)
}

/// Whether some lattice isomorphism between the spans carries `a` onto `b`.
///
/// Both cones are first reduced modulo their lineality spaces and written in
/// intrinsic lattice coordinates; then a basis of rays of `a` is matched
/// against every ordered choice of rays of `b`.
pub fn unimodular_equivalent(a: &Cone, b: &Cone) -> bool {
    if a.dim() != b.dim() || a.lineality.len() != b.lineality.len() || a.rays.len() != b.rays.len() {
        return false;
    }
    let (d, ra) = intrinsic_rays(a);
    let (_, rb) = intrinsic_rays(b);
    if d == 0 {
        return true;
    }
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..ra.len() {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&j| ra[j].clone()).collect();
        trial.push(ra[i].clone());
        if rank_of(d, &trial) == trial.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    let cols = |rays: &[Vec<BigInt>], idx: &[usize]| -> IntegerMatrix {
        IntegerMatrix::from_rows(d, idx.iter().map(|&i| rays[i].clone()).collect()).expect("length d").transpose()
    };
    let am = cols(&ra, &basis);
    let det = determinant(&am);
    let adj = adjugate(&am);
    let target: BTreeSet<Vec<BigInt>> = rb.iter().cloned().collect();
    let mut choice = Vec::new();
    search(&ra, &rb, &target, &adj, &det, d, &cols, &mut choice)
}

#[allow(clippy::too_many_arguments)]
fn search(
    ra: &[Vec<BigInt>],
    rb: &[Vec<BigInt>],
    target: &BTreeSet<Vec<BigInt>>,
    adj: &IntegerMatrix,
    det: &BigInt,
    d: usize,
    cols: &dyn Fn(&[Vec<BigInt>], &[usize]) -> IntegerMatrix,
    choice: &mut Vec<usize>,
) -> bool {
    if choice.len() == d {
        let prod = cols(rb, choice).mul(adj).expect("square");
        let mut t = IntegerMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let (q, r) = prod.get(i, j).div_rem(det);
                if !r.is_zero() {
                    return false;
                }
                t.set(i, j, q);
            }
        }
        if !determinant(&t).abs().is_one() {
            return false;
        }
        let image: BTreeSet<Vec<BigInt>> = ra.iter().map(|r| t.apply(r)).collect();
        return &image == target;
    }
    for j in 0..rb.len() {
        if choice.contains(&j) {
            continue;
        }
        choice.push(j);
        if search(ra, rb, target, adj, det, d, cols, choice) {
            return true;
        }
        choice.pop();
    }
    false
}

/// Groups faces by their ray sets, for lookups by index list.
pub fn face_index(faces: &[Face]) -> BTreeMap<Vec<usize>, usize> {
    faces.iter().enumerate().map(|(i, f)| (f.rays.clone(), i)).collect()
}
