//! Wire formats. Every top-level document carries `"format": 1`.
//!
//! Integers within `±(2^53 - 1)` are written as JSON numbers, anything
//! larger as a decimal string. Both spellings are accepted on input.

use std::fmt;

use logfaces_core::extcone::{ExtendedCone, ExtendedConeMap, FiberStratum, TheoremCReport, CHART_LEVEL_NOTE};
use logfaces_core::intsat::SaturationResult;
use logfaces_core::lattice::{Cone, IntegerMatrix};
use logfaces_core::order::MonomialOrder;
use logfaces_core::pipeline::{DiagramReport, FaceRecord};
use logfaces_core::rewriting::GroebnerBasis;
use logfaces_core::{Error, Exponent, GeneratorSet, MonoidMap, Presentation, Relation};
use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const FORMAT: u32 = 1;

const SAFE: i64 = (1 << 53) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if (-SAFE..=SAFE).contains(&v) => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.parse::<BigInt>().map(JsonInt).map_err(|_| E::custom(format!("not a decimal integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

pub fn int_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<JsonInt>> {
    rows.iter().map(|r| ints(r)).collect()
}

pub fn exponent(e: &Exponent) -> Vec<JsonInt> {
    e.coords().iter().map(|c| JsonInt(BigInt::from(c.clone()))).collect()
}

pub fn matrix(m: &IntegerMatrix) -> Vec<Vec<JsonInt>> {
    int_rows(&m.to_rows())
}

fn big(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn big_rows(rows: &[Vec<JsonInt>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| big(r)).collect()
}

/// Input side: a problem with the document's contents rather than its syntax.
#[derive(Debug)]
pub enum InputError {
    Schema(String),
    Core(Error),
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError::Core(e)
    }
}

type InputResult<T> = Result<T, InputError>;

fn exponent_in(v: &[JsonInt], n: usize, what: &str) -> InputResult<Exponent> {
    if v.len() != n {
        return Err(InputError::Schema(format!("{what}: expected {n} coordinates, found {}", v.len())));
    }
    let mut coords = Vec::with_capacity(n);
    for x in v {
        match x.0.sign() {
            Sign::Minus => return Err(InputError::Schema(format!("{what}: negative exponent {}", x.0))),
            _ => coords.push(x.0.magnitude().clone()),
        }
    }
    Ok(Exponent::new(coords))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(Vec<JsonInt>, Vec<JsonInt>)>,
}

impl PresentationJson {
    pub fn from_core(p: &Presentation) -> Self {
        PresentationJson {
            generators: p.generators().names().to_vec(),
            relations: p.relations().iter().map(|r| (exponent(&r.lhs), exponent(&r.rhs))).collect(),
        }
    }

    pub fn to_core(&self) -> InputResult<Presentation> {
        let gens = GeneratorSet::new(self.generators.clone())?;
        let n = gens.len();
        let mut rels = Vec::with_capacity(self.relations.len());
        for (i, (a, b)) in self.relations.iter().enumerate() {
            let what = format!("relation #{i}");
            rels.push(Relation::new(exponent_in(a, n, &what)?, exponent_in(b, n, &what)?));
        }
        Ok(Presentation::new(gens, rels)?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    #[serde(rename = "P")]
    pub p: PresentationJson,
    #[serde(rename = "Q")]
    pub q: PresentationJson,
    #[serde(rename = "R")]
    pub r: PresentationJson,
    pub f: Vec<Vec<JsonInt>>,
    pub g: Vec<Vec<JsonInt>>,
}

fn monoid_map(source: &Presentation, target: &Presentation, images: &[Vec<JsonInt>], name: &str) -> InputResult<MonoidMap> {
    if images.len() != source.num_generators() {
        return Err(InputError::Schema(format!(
            "{name}: expected {} images, found {}",
            source.num_generators(),
            images.len()
        )));
    }
    let n = target.num_generators();
    let imgs = images
        .iter()
        .enumerate()
        .map(|(i, v)| exponent_in(v, n, &format!("{name} image of {}", source.generators().name(i))))
        .collect::<InputResult<Vec<_>>>()?;
    Ok(MonoidMap::new(source.clone(), target.clone(), imgs)?)
}

impl DiagramJson {
    pub fn maps(&self) -> InputResult<(MonoidMap, MonoidMap)> {
        let p = self.p.to_core()?;
        let f = monoid_map(&p, &self.q.to_core()?, &self.f, "f")?;
        let g = monoid_map(&p, &self.r.to_core()?, &self.g, "g")?;
        Ok((f, g))
    }
}

/// A cone given either by generators or by inequalities.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeInput {
    pub rank: usize,
    pub rays: Option<Vec<Vec<JsonInt>>>,
    #[serde(default)]
    pub lineality: Vec<Vec<JsonInt>>,
    pub facets: Option<Vec<Vec<JsonInt>>>,
    #[serde(default)]
    pub equations: Vec<Vec<JsonInt>>,
}

impl ConeInput {
    pub fn to_core(&self) -> InputResult<Cone> {
        let check = |rows: &[Vec<JsonInt>], what: &str| -> InputResult<Vec<Vec<BigInt>>> {
            match rows.iter().find(|r| r.len() != self.rank) {
                Some(r) => Err(InputError::Schema(format!("{what}: expected {} coordinates, found {}", self.rank, r.len()))),
                None => Ok(big_rows(rows)),
            }
        };
        match (&self.rays, &self.facets) {
            (Some(_), Some(_)) => Err(InputError::Schema("give rays or facets, not both".into())),
            (Some(rays), None) => {
                if !self.equations.is_empty() {
                    return Err(InputError::Schema("equations only combine with facets".into()));
                }
                let mut gens = check(rays, "rays")?;
                for l in check(&self.lineality, "lineality")? {
                    gens.push(l.iter().map(|x| -x).collect());
                    gens.push(l);
                }
                Ok(Cone::from_rays(self.rank, &gens)?)
            }
            (None, facets) => {
                if !self.lineality.is_empty() {
                    return Err(InputError::Schema("lineality only combines with rays".into()));
                }
                let ineqs = check(facets.as_deref().unwrap_or(&[]), "facets")?;
                Ok(Cone::from_inequalities(self.rank, &ineqs, &check(&self.equations, "equations")?)?)
            }
        }
    }
}

fn matrix_in(rows: &[Vec<JsonInt>], cols: usize, target_rank: usize) -> InputResult<IntegerMatrix> {
    if rows.len() != target_rank {
        return Err(InputError::Schema(format!("matrix: expected {target_rank} rows, found {}", rows.len())));
    }
    Ok(IntegerMatrix::from_rows(cols, big_rows(rows))?)
}

/// A linear map `source → target` as a matrix acting on column vectors.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeMapInput {
    pub source: ConeInput,
    pub matrix: Vec<Vec<JsonInt>>,
}

impl ConeMapInput {
    pub fn to_core(&self, target_rank: usize) -> InputResult<(Cone, IntegerMatrix)> {
        let source = self.source.to_core()?;
        let m = matrix_in(&self.matrix, source.rank(), target_rank)?;
        Ok((source, m))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendMapInput {
    pub source: ConeInput,
    pub target: ConeInput,
    pub matrix: Vec<Vec<JsonInt>>,
}

impl ExtendMapInput {
    pub fn to_core(&self) -> InputResult<(Cone, Cone, IntegerMatrix)> {
        let source = self.source.to_core()?;
        let target = self.target.to_core()?;
        let m = matrix_in(&self.matrix, source.rank(), target.rank())?;
        Ok((source, target, m))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberProductInput {
    pub target: ConeInput,
    pub f: ConeMapInput,
    pub g: ConeMapInput,
}

// Output documents.

#[derive(Debug, Clone, Serialize)]
pub struct ConeJson {
    pub rank: usize,
    pub rays: Vec<Vec<JsonInt>>,
    pub facets: Vec<Vec<JsonInt>>,
    pub lineality: Vec<Vec<JsonInt>>,
    pub equations: Vec<Vec<JsonInt>>,
}

impl ConeJson {
    pub fn new(c: &Cone) -> Self {
        ConeJson {
            rank: c.rank(),
            rays: int_rows(c.rays()),
            facets: int_rows(c.facets()),
            lineality: int_rows(c.lineality()),
            equations: int_rows(c.equations()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleJson {
    pub head: Vec<JsonInt>,
    pub body: Vec<JsonInt>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisJson {
    pub generators: Vec<String>,
    pub order: String,
    pub rules: Vec<RuleJson>,
}

impl BasisJson {
    pub fn new(gens: &GeneratorSet, gb: &GroebnerBasis) -> Self {
        BasisJson {
            generators: gens.names().to_vec(),
            order: gb.order().describe(gens),
            rules: gb.rules().iter().map(|r| RuleJson { head: exponent(&r.head), body: exponent(&r.body) }).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MapJson {
    pub images: Vec<Vec<JsonInt>>,
}

impl MapJson {
    pub fn new(m: &MonoidMap) -> Self {
        MapJson { images: m.images().iter().map(exponent).collect() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationJson {
    pub rank: usize,
    pub torsion: Vec<JsonInt>,
    pub hilbert: Vec<Vec<JsonInt>>,
    pub lineality: Vec<Vec<JsonInt>>,
    #[serde(rename = "generatorImages")]
    pub generator_images: Vec<Vec<JsonInt>>,
    pub cone: ConeJson,
    pub presentation: PresentationJson,
    pub inclusion: Vec<Vec<JsonInt>>,
}

impl SaturationJson {
    pub fn new(s: &SaturationResult) -> Self {
        SaturationJson {
            rank: s.rank,
            torsion: ints(&s.torsion),
            hilbert: int_rows(&s.hilbert),
            lineality: int_rows(&s.lineality),
            generator_images: int_rows(&s.generator_images),
            cone: ConeJson::new(&s.cone),
            presentation: PresentationJson::from_core(&s.presentation),
            inclusion: MapJson::new(&s.inclusion).images,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeFaceJson {
    pub prime: Vec<String>,
    pub face: PresentationJson,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProvenanceJson {
    pub order: String,
    pub basis_rules: usize,
    pub shared: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FaceRecordJson {
    pub prime: Vec<String>,
    pub level: &'static str,
    pub face: PresentationJson,
    pub fine: PresentationJson,
    pub fs: SaturationJson,
    pub cone: ConeJson,
    pub provenance: ProvenanceJson,
}

impl FaceRecordJson {
    pub fn new(chart: &Presentation, r: &FaceRecord) -> Self {
        FaceRecordJson {
            prime: names(chart, r.prime.indices()),
            level: "chart",
            face: PresentationJson::from_core(&r.face),
            fine: PresentationJson::from_core(&r.fine),
            fs: SaturationJson::new(&r.fs),
            cone: ConeJson::new(&r.cone),
            provenance: provenance(chart, &r.provenance.order, r.provenance.basis_rules, r.provenance.shared),
        }
    }
}

fn provenance(chart: &Presentation, order: &MonomialOrder, basis_rules: usize, shared: bool) -> ProvenanceJson {
    ProvenanceJson { order: order.describe(chart.generators()), basis_rules, shared }
}

pub fn names(p: &Presentation, indices: &[usize]) -> Vec<String> {
    indices.iter().map(|&i| p.generators().name(i).to_string()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumJson {
    pub face: Vec<usize>,
    pub projection: Vec<Vec<JsonInt>>,
    pub cone: ConeJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtendedConeJson {
    pub base: ConeJson,
    pub strata: Vec<StratumJson>,
}

impl ExtendedConeJson {
    pub fn new(e: &ExtendedCone) -> Self {
        ExtendedConeJson {
            base: ConeJson::new(&e.base),
            strata: e
                .strata
                .iter()
                .map(|s| StratumJson { face: s.face.rays.clone(), projection: matrix(&s.projection), cone: ConeJson::new(&s.cone) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StratumImageJson {
    pub source_face: Vec<usize>,
    pub target_face: Vec<usize>,
    pub quotient: Vec<Vec<JsonInt>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtendedMapJson {
    pub matrix: Vec<Vec<JsonInt>>,
    pub source: ExtendedConeJson,
    pub target: ExtendedConeJson,
    pub strata: Vec<StratumImageJson>,
    pub base_injective: bool,
    pub injective: bool,
}

impl ExtendedMapJson {
    pub fn new(m: &ExtendedConeMap) -> Self {
        ExtendedMapJson {
            matrix: matrix(&m.linear),
            source: ExtendedConeJson::new(&m.source),
            target: ExtendedConeJson::new(&m.target),
            strata: m
                .source
                .strata
                .iter()
                .zip(&m.face_map)
                .zip(&m.quotients)
                .map(|((s, &k), q)| StratumImageJson {
                    source_face: s.face.rays.clone(),
                    target_face: m.target.strata[k].face.rays.clone(),
                    quotient: matrix(q),
                })
                .collect(),
            base_injective: m.linear.rank() == m.linear.num_cols(),
            injective: m.is_injective(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberStratumJson {
    pub source_faces: [Vec<usize>; 2],
    pub target_face: Vec<usize>,
    pub cone: ConeJson,
}

pub fn fiber_strata(f: &ExtendedConeMap, g: &ExtendedConeMap, strata: &[FiberStratum]) -> Vec<FiberStratumJson> {
    strata
        .iter()
        .map(|s| FiberStratumJson {
            source_faces: [f.source.strata[s.source_faces.0].face.rays.clone(), g.source.strata[s.source_faces.1].face.rays.clone()],
            target_face: f.target.strata[s.target_face].face.rays.clone(),
            cone: ConeJson::new(&s.cone),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceMatchJson {
    pub prime: Vec<String>,
    pub strata: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremCJson {
    pub matched: bool,
    pub all_faces_matched: bool,
    pub all_strata_matched: bool,
    pub faces: Vec<FaceMatchJson>,
    pub strata_matched: Vec<bool>,
    pub note: &'static str,
}

impl TheoremCJson {
    pub fn new(chart: &Presentation, faces: &[FaceRecord], t: &TheoremCReport) -> Self {
        TheoremCJson {
            matched: t.all_faces_matched() && t.all_strata_matched(),
            all_faces_matched: t.all_faces_matched(),
            all_strata_matched: t.all_strata_matched(),
            faces: faces
                .iter()
                .zip(&t.matches)
                .map(|(r, m)| FaceMatchJson { prime: names(chart, r.prime.indices()), strata: m.clone() })
                .collect(),
            strata_matched: t.strata_matched.clone(),
            note: CHART_LEVEL_NOTE,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagramReportJson {
    pub format: u32,
    pub pushout: PresentationJson,
    pub chart: PresentationJson,
    pub faces: Vec<FaceRecordJson>,
    pub strata: Vec<FiberStratumJson>,
    #[serde(rename = "theoremC")]
    pub theorem_c: TheoremCJson,
}

impl DiagramReportJson {
    pub fn new(r: &DiagramReport) -> Self {
        DiagramReportJson {
            format: FORMAT,
            pushout: PresentationJson::from_core(&r.pushout),
            chart: PresentationJson::from_core(&r.chart),
            faces: r.faces.iter().map(|f| FaceRecordJson::new(&r.chart, f)).collect(),
            strata: fiber_strata(&r.map_f, &r.map_g, &r.strata),
            theorem_c: TheoremCJson::new(&r.chart, &r.faces, &r.theorem_c),
        }
    }
}
