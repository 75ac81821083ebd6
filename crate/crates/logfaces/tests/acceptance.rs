//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines land in the test log verbatim.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use logfaces::run;
use logfaces_core::extcone::{extend, extend_map};
use logfaces_core::intsat::{integralize, saturate_embedded};
use logfaces_core::lattice::{decompose, hermite_normal_form, unimodular_equivalent, vectors, Cone, IntegerMatrix};
use logfaces_core::pipeline::{fine_faces_of_diagram, Diagram};
use logfaces_core::rewriting::{groebner, oracle_closure, GroebnerBasis};
use logfaces_core::{Exponent, GeneratorSet, Limits, MonoidMap, MonomialOrder, Presentation, Relation};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Check = Result<String, String>;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let out = run(args.iter().map(|s| s.to_string()));
    if out.code != 0 {
        return Err(format!("{args:?} exited {}: {}", out.code, out.stderr));
    }
    serde_json::from_str(&out.stdout).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(t < limit, format!("{what} took {t:?}, limit {limit:?}"))
}

fn blowup_fine_faces() -> Check {
    let t = Instant::now();
    let v = cli(&["fine-faces", &fixture("blowup.json")])?;
    let elapsed = t.elapsed();
    let faces = v["faces"].as_array().ok_or("no faces")?;
    ensure(faces.len() == 6, format!("{} faces", faces.len()))?;
    let empty = &faces[0];
    ensure(empty["prime"] == json!([]), "first face is not at the empty prime")?;
    ensure(empty["fine"]["relations"] == json!([[[0, 1, 0], [0, 0, 1]]]), "fine empty face is not <u,v1,v2 | v1=v2>")?;
    let fs = &empty["fs"];
    ensure(fs["rank"] == 2 && fs["torsion"] == json!([]), "empty face does not saturate to rank 2")?;
    ensure(fs["hilbert"].as_array().map(Vec::len) == Some(2), "empty face is not N^2")?;
    ensure(fs["presentation"]["relations"] == json!([]), "saturation of the empty face is not free")?;
    let u = &faces[1];
    ensure(u["prime"] == json!(["u"]), "second face is not at {u}")?;
    ensure(u["face"] == json!({"generators": ["v1", "v2"], "relations": []}), "face at {u} is not free of rank 2")?;
    within(elapsed, Duration::from_secs(1), "fine-faces")?;
    Ok(format!("6 faces, empty face N^2, {{u}} face free on v1,v2, {elapsed:.2?}"))
}

fn theorem_c_blowup() -> Check {
    let t = Instant::now();
    let v = cli(&["check-theorem-c", &fixture("blowup_diagram.json")])?;
    let elapsed = t.elapsed();
    ensure(v["theoremC"]["matched"] == true, "report is not fully matched")?;
    let faces = v["theoremC"]["faces"].as_array().ok_or("no faces")?;
    ensure(faces.iter().all(|f| !f["strata"].as_array().unwrap().is_empty()), "an fs face has no matching stratum")?;

    // Locate the stratum at the pair of source rays mapping to (1,1).
    let p = Presentation::free(&["x", "y"]).unwrap();
    let q = Presentation::free(&["u", "v"]).unwrap();
    let f = MonoidMap::new(p, q, vec![Exponent::from_u64s(&[1, 0]), Exponent::from_u64s(&[1, 1])]).unwrap();
    let rep = fine_faces_of_diagram(&Diagram::new(f.clone(), f).unwrap(), &Limits::default()).map_err(|e| e.to_string())?;
    let m = &rep.map_f;
    let diag = vectors(&[&[1, 1]])[0].clone();
    let ray = m.source.base.rays().iter().position(|r| m.linear.apply(r) == diag).ok_or("no source ray maps to (1,1)")?;
    let k = m.source.face_index(&[ray]).ok_or("ray is not a face")?;
    let s = rep.strata.iter().position(|s| s.source_faces == (k, k)).ok_or("no stratum at (ray(1,1), ray(1,1))")?;
    ensure(unimodular_equivalent(&rep.strata[s].cone, &Cone::orthant(2)), "stratum is not R>=0^2")?;
    ensure(rep.theorem_c.strata_matched[s], "stratum is not matched")?;
    let strata = v["strata"].as_array().unwrap();
    ensure(strata[s]["sourceFaces"] == json!([[ray], [ray]]), "CLI stratum order differs from the library")?;
    let single = rep.faces.iter().position(|r| r.prime.len() == 1).ok_or("no face at a single prime generator")?;
    ensure(rep.theorem_c.matches[single].contains(&s), "face at {u} does not match the R>=0^2 stratum")?;
    within(elapsed, Duration::from_secs(1), "check-theorem-c")?;
    Ok(format!("{} faces matched, R>=0^2 at stratum {s} = (ray(1,1), ray(1,1)), {elapsed:.2?}", faces.len()))
}

fn random_corpus(count: usize) -> Vec<Presentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let names: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
            let m = rng.gen_range(0..=4);
            let exp = |rng: &mut ChaCha8Rng| Exponent::from_u64s(&(0..n).map(|_| rng.gen_range(0..=3)).collect::<Vec<_>>());
            let rels = (0..m).map(|_| Relation::new(exp(&mut rng), exp(&mut rng))).collect();
            Presentation::new(GeneratorSet::new(names).unwrap(), rels).unwrap()
        })
        .collect()
}

fn degree_box(n: usize, bound: u64) -> Vec<Exponent> {
    fn go(prefix: &mut Vec<u64>, n: usize, left: u64, out: &mut Vec<Exponent>) {
        if prefix.len() == n {
            out.push(Exponent::from_u64s(prefix));
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            go(prefix, n, left - c, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, bound, &mut out);
    out
}

/// Mismatching points between the two partitions of the box.
fn lattice_mismatches(p: &Presentation, pts: &[Exponent]) -> usize {
    let n = p.num_generators();
    let int = integralize(p);
    let gb = groebner(&int, &int.default_order());
    let diffs: Vec<Vec<BigInt>> = p.relations().iter().map(|r| r.lhs.difference(&r.rhs)).collect();
    let hf = hermite_normal_form(&IntegerMatrix::from_rows(n, diffs).unwrap());
    let mut nf_to_coset: BTreeMap<Exponent, Vec<BigInt>> = BTreeMap::new();
    let mut coset_to_nf: BTreeMap<Vec<BigInt>, Exponent> = BTreeMap::new();
    let mut bad = 0;
    for x in pts {
        let nf = gb.normal_form(x);
        let coset = hf.reduce(&x.to_signed());
        let a = nf_to_coset.entry(nf.clone()).or_insert_with(|| coset.clone());
        let b = coset_to_nf.entry(coset.clone()).or_insert_with(|| nf.clone());
        if *a != coset || *b != nf {
            bad += 1;
        }
    }
    bad
}

fn integralization_oracle(corpus: &[Presentation]) -> Check {
    let t = Instant::now();
    let mut mismatches = 0;
    let mut points = 0;
    for p in corpus {
        let pts = degree_box(p.num_generators(), 8);
        points += pts.len();
        mismatches += lattice_mismatches(p, &pts);
    }
    let elapsed = t.elapsed();
    ensure(mismatches == 0, format!("{mismatches} mismatching points"))?;
    within(elapsed, Duration::from_secs(120), "integralization oracle")?;
    Ok(format!("{} presentations, {points} points (all pairs via partition comparison), 0 mismatches, {elapsed:.2?}", corpus.len()))
}

fn random_reduction(gb: &GroebnerBasis, x: &Exponent, rng: &mut ChaCha8Rng) -> Exponent {
    let mut x = x.clone();
    loop {
        let hits: Vec<usize> = (0..gb.rules().len()).filter(|&i| gb.rules()[i].head.divides(&x)).collect();
        if hits.is_empty() {
            return x;
        }
        let r = &gb.rules()[hits[rng.gen_range(0..hits.len())]];
        x.rewrite(&r.head, &r.body);
    }
}

#[derive(Default)]
struct Tally {
    classes: usize,
    escalations: usize,
    /// Classes whose normal form lies beyond the box and beyond the cap.
    outside: usize,
    violations: Vec<String>,
}

/// Checks one presentation under `order` against its bounded oracle.
///
/// Every member of a bounded class must share one normal form, under any
/// rewriting order, and a class holds at most one normal element. A class
/// without one must reach its normal form in a larger box; when that normal
/// form lies outside the base box and the cap stops escalation, the class is
/// counted in `outside` instead.
fn check_classes(i: usize, p: &Presentation, order: &MonomialOrder, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<(), String> {
    const BASE: u32 = 6;
    const CELLS: u64 = 300_000;
    let gb = groebner(p, order);
    let oracle = oracle_closure(p, BASE, CELLS).map_err(|e| e.to_string())?;
    t.classes += oracle.num_classes();
    let mut pending = Vec::new();
    for class in oracle.classes() {
        let nf = gb.normal_form(&class[0]);
        for x in &class {
            if gb.normal_form(x) != nf || random_reduction(&gb, x, rng) != nf {
                t.violations.push(format!("#{i}: {x:?} reduces inconsistently"));
            }
        }
        let normal = class.iter().filter(|x| gb.is_normal(x)).count();
        if normal > 1 {
            t.violations.push(format!("#{i}: a class holds {normal} normal forms"));
        }
        if normal == 0 {
            pending.push((class[0].clone(), nf));
        }
    }
    let mut bound = BASE;
    while !pending.is_empty() {
        let need = pending.iter().map(|(x, nf)| x.degree().max(nf.degree())).min().unwrap();
        bound = (bound + 4).max(u32::try_from(need).unwrap_or(u32::MAX));
        let Ok(big) = oracle_closure(p, bound, CELLS) else {
            for (x, nf) in &pending {
                if nf.degree() <= BASE.into() {
                    t.violations.push(format!("#{i}: {x:?} never meets its normal form {nf:?}"));
                } else {
                    t.outside += 1;
                }
            }
            break;
        };
        t.escalations += 1;
        pending.retain(|(x, nf)| big.same_class(x, nf) != Some(true));
    }
    Ok(())
}

fn confluence(corpus: &[Presentation]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let (mut lex, mut grlex) = (Tally::default(), Tally::default());
    for (i, p) in corpus.iter().enumerate() {
        let n = p.num_generators();
        check_classes(i, p, &p.default_order(), &mut rng, &mut lex)?;
        let graded = MonomialOrder::graded_lex((0..n).collect()).unwrap();
        check_classes(i, p, &graded, &mut rng, &mut grlex)?;
    }
    ensure(grlex.outside == 0, format!("grlex: {} classes unresolved", grlex.outside))?;
    for (name, t) in [("lex", &lex), ("grlex", &grlex)] {
        ensure(t.violations.is_empty(), format!("{name}: {} violations, first: {}", t.violations.len(), t.violations.first().map_or("", |s| s)))?;
    }
    Ok(format!(
        "{} presentations; grlex: {} classes, {} escalations, each meets its normal form once; \
         lex: {} classes, {} escalations, {} classes whose normal form lies beyond the box cap; 0 violations",
        corpus.len(),
        grlex.classes,
        grlex.escalations,
        lex.classes,
        lex.escalations,
        lex.outside
    ))
}

fn buchberger_golden() -> Check {
    let v = cli(&["groebner", &fixture("buchberger.json"), "--order", "lex:x,y,z"])?;
    let got: BTreeSet<String> = v["rules"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| format!("{}->{}", r["head"], r["body"]))
        .collect();
    let want: BTreeSet<String> = ["[1,1,0]->[0,0,2]", "[1,0,1]->[0,2,0]", "[0,3,0]->[0,0,3]"].map(String::from).into();
    ensure(got == want, format!("basis {got:?}"))?;
    Ok("{x+y->2z, x+z->2y, 3y->3z}".into())
}

fn saturation_cases() -> Check {
    let v = cli(&["saturate", &fixture("numerical.json")])?;
    ensure(v["hilbert"] == json!([[1]]), format!("<2,3> saturates to {}", v["hilbert"]))?;
    ensure(v["inclusion"] == json!([[2], [3]]), "<2,3> inclusion is not a->2, b->3")?;
    let names = |k: usize| GeneratorSet::new((1..=k).map(|i| format!("e{i}")).collect()).unwrap();
    let plane = saturate_embedded(names(2), 2, &vectors(&[&[1, 0], &[1, 2]]), &Limits::default()).map_err(|e| e.to_string())?;
    let mut h = plane.hilbert.clone();
    h.sort();
    ensure(h == vectors(&[&[1, 0], &[1, 1], &[1, 2]]), format!("cone{{(1,0),(1,2)}} Hilbert basis {h:?}"))?;

    let mut cones: Vec<Vec<Vec<BigInt>>> = vec![
        vectors(&[&[2], &[3]]),
        vectors(&[&[1, 0], &[1, 2]]),
        vectors(&[&[2, 1], &[1, 3]]),
        vectors(&[&[1, 0, 0], &[1, 2, 0], &[1, 1, 3]]),
        vectors(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2], &[0, 0, 1]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    while cones.len() < 10 {
        let r = rng.gen_range(2..=3);
        let k = rng.gen_range(r..=r + 1);
        let gens: Vec<Vec<BigInt>> = (0..k).map(|_| (0..r).map(|_| BigInt::from(rng.gen_range(0..=3))).collect()).collect();
        let m = IntegerMatrix::from_rows(r, gens.clone()).unwrap();
        if m.rank() == r && gens.iter().all(|g| g.iter().any(|x| x != &BigInt::from(0))) {
            cones.push(gens);
        }
    }
    let mut violations = 0;
    for gens in &cones {
        let r = gens[0].len();
        let sat = saturate_embedded(names(gens.len()), r, gens, &Limits::default()).map_err(|e| e.to_string())?;
        let cone = &sat.cone;
        let mut found = 0;
        let mut tries = 0;
        while found < 100 {
            tries += 1;
            ensure(tries < 200_000, format!("only {found} samples found in {gens:?}"))?;
            let v: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(0..=8))).collect();
            if !cone.contains(&v) {
                continue;
            }
            let in_monoid = (1..=4).any(|n| {
                let nv: Vec<BigInt> = v.iter().map(|x| x * n).collect();
                decompose(cone, gens, &nv).is_some()
            });
            if !in_monoid {
                continue;
            }
            found += 1;
            if decompose(cone, &sat.hilbert, &v).is_none() {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, format!("{violations} sampled points missing from the saturation"))?;
    Ok(format!("<2,3> -> {{1}}, cone{{(1,0),(1,2)}} -> {{(1,0),(1,1),(1,2)}}, {} cones x 100 samples, 0 violations", cones.len()))
}

fn non_injectivity() -> Check {
    let v = cli(&["extend", &fixture("non_injective.json")])?;
    let rays = v["source"]["base"]["rays"].as_array().unwrap();
    let ray_v = rays.iter().position(|r| *r == json!([0, 1])).ok_or("no ray (0,1)")?;
    let strata = v["strata"].as_array().unwrap();
    let image = strata.iter().find(|s| s["sourceFace"] == json!([ray_v])).ok_or("no stratum at ray(v)")?;
    let target = &v["target"];
    let full: Vec<usize> = (0..target["base"]["rays"].as_array().unwrap().len()).collect();
    ensure(image["targetFace"] == json!(full), format!("ray(v) stratum maps to {}", image["targetFace"]))?;
    let zero = target["strata"].as_array().unwrap().iter().find(|s| s["face"] == json!(full)).ok_or("no full face")?;
    ensure(zero["cone"]["rank"] == 0, "stratum at the full face is not zero")?;
    ensure(v["baseInjective"] == true, "base map is not injective")?;
    ensure(v["injective"] == false, "extended map is injective")?;

    // Same facts through the library.
    let sigma = extend(&Cone::orthant(2));
    let tau = extend(&Cone::from_rays(2, &vectors(&[&[1, 0], &[-1, 1]])).unwrap());
    let m = extend_map(&IntegerMatrix::identity(2), &sigma, &tau).map_err(|e| e.to_string())?;
    ensure(!m.is_injective(), "library map is injective")?;
    Ok("stratum at ray(v) maps to the zero stratum; base injective, extension not".into())
}

fn units_edge_case() -> Check {
    let p = cli(&["primes", &fixture("units.json")])?;
    ensure(p["primes"] == json!([[]]), format!("primes {}", p["primes"]))?;
    let u = cli(&["units", &fixture("units.json")])?;
    ensure(u["units"] == json!(["a", "b"]), format!("units {}", u["units"]))?;
    ensure(u["normalFormZero"] == json!([]), format!("fast path {}", u["normalFormZero"]))?;
    ensure(u["diverges"] == true, "divergence not reported")?;
    Ok("primes {{}}, units {a,b}, normal-form-0 set {}, divergence reported".replace("{{}}", "{∅}"))
}

fn determinism() -> Check {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures"].iter().collect();
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    let verbs = logfaces::cli::VERBS;
    let (mut runs, mut successes) = (0, 0);
    for name in &names {
        let path = fixture(name);
        let text = std::fs::read_to_string(&path).unwrap();
        let first = serde_json::from_str::<Value>(&text).ok().and_then(|v| v["generators"][0].as_str().map(String::from));
        for verb in verbs {
            let mut args = vec![verb.to_string(), path.clone()];
            if verb == "nf" {
                args.extend(["--exp".to_string(), first.clone().unwrap_or_else(|| "0".into())]);
            }
            let a = run(args.clone());
            let b = run(args.clone());
            runs += 1;
            successes += usize::from(a.code == 0);
            ensure(a == b, format!("{verb} {name} differs between runs"))?;
        }
    }
    Ok(format!("{} fixtures x {} verbs, {runs} paired runs ({successes} successful), byte-identical", names.len(), verbs.len()))
}

fn main() {
    let corpus = random_corpus(500);
    let checks: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("1 blowup fine faces", Box::new(blowup_fine_faces)),
        ("2 Theorem C on the blowup diagram", Box::new(theorem_c_blowup)),
        ("3 integralization vs HNF oracle", Box::new(|| integralization_oracle(&corpus))),
        ("4 confluence and bounded classes", Box::new(|| confluence(&corpus))),
        ("5 Buchberger golden basis", Box::new(buchberger_golden)),
        ("6 saturation cases and sampling", Box::new(saturation_cases)),
        ("7 extended-cone non-injectivity", Box::new(non_injectivity)),
        ("8 prime/unit edge case", Box::new(units_edge_case)),
        ("9 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &checks {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
