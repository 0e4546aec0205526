//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use vecgroupoid::{
    check_all, check_derived_rules, check_ehresmann, check_morphism, check_subspaces,
    check_vector_axioms, induced_groupoid, is_transitive, null_groupoid, pair_groupoid,
    single_unit_groupoid, universal_factorization, Error, FieldSpec, GroupoidMorphism, Matrix,
    Multiplication, SpaceRef, Status, SuiteSelection, VectorGroupoid,
};
use vecgroupoid_cli::{
    parse_json, parse_spec, serialize_groupoid, to_pretty_json, FactorizeDoc, MorphismDoc,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn gf(p: u32) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn constructions() -> Vec<(String, VectorGroupoid)> {
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        let mut dim = 1;
        while (p as usize).pow(dim as u32) <= 125 {
            out.push((
                format!("null GF({p})^{dim}"),
                null_groupoid(gf(p), dim).unwrap(),
            ));
            out.push((
                format!("single_unit GF({p})^{dim}"),
                single_unit_groupoid(gf(p), dim).unwrap(),
            ));
            if (p as usize).pow(2 * dim as u32) <= 125 {
                out.push((
                    format!("pair GF({p})^{dim}"),
                    pair_groupoid(gf(p), dim).unwrap(),
                ));
            }
            dim += 1;
        }
    }
    out
}

/// Every linear map GF(p)^cols -> GF(p)^rows, or 25 evenly spaced ones when
/// there are more than 100.
fn linear_maps(p: u32, rows: usize, cols: usize) -> Vec<Matrix> {
    let len = rows * cols;
    let count = (p as usize).pow(len as u32);
    let picks: Vec<usize> = if count <= 100 {
        (0..count).collect()
    } else {
        (0..25).map(|i| i * count / 25).collect()
    };
    picks
        .into_iter()
        .map(|mut idx| {
            let entries = (0..len)
                .map(|_| {
                    let d = (idx % p as usize) as u32;
                    idx /= p as usize;
                    d
                })
                .collect();
            Matrix::new(gf(p), rows, cols, entries).unwrap()
        })
        .collect()
}

struct InducedCase {
    name: String,
    parent_transitive: bool,
    structure: VectorGroupoid,
}

/// `|{(x, y, a) : h x = alpha a, h y = beta a}|`, counted directly.
fn pullback_size(parent: &VectorGroupoid, h: &Matrix, x_dim: usize) -> usize {
    let x = SpaceRef::new(parent.field(), x_dim);
    let image: Vec<Vec<u32>> = x
        .iter()
        .map(|i| h.apply(&x.index_to_vector(i).unwrap()).unwrap())
        .collect();
    let mut by_image: BTreeMap<&Vec<u32>, usize> = BTreeMap::new();
    for v in &image {
        *by_image.entry(v).or_default() += 1;
    }
    parent
        .total()
        .iter()
        .map(|a| {
            let v = parent.total().index_to_vector(a).unwrap();
            let s = parent.alpha().apply(&v).unwrap();
            let t = parent.beta().apply(&v).unwrap();
            by_image.get(&s).copied().unwrap_or(0) * by_image.get(&t).copied().unwrap_or(0)
        })
        .sum()
}

fn induced_cases() -> Result<Vec<InducedCase>, String> {
    let parents = [
        ("pair GF(2)^1", pair_groupoid(gf(2), 1).unwrap()),
        ("pair GF(3)^1", pair_groupoid(gf(3), 1).unwrap()),
        (
            "single_unit GF(2)^2",
            single_unit_groupoid(gf(2), 2).unwrap(),
        ),
    ];
    let mut out = Vec::new();
    for (pname, parent) in parents {
        let parent_transitive = is_transitive(&parent)
            .map_err(|e| e.to_string())?
            .transitive;
        let p = parent.field().p();
        for x_dim in 0..=2 {
            for h in linear_maps(p, parent.base().dim(), x_dim) {
                let name = format!("{pname}, h = {:?}, dim X = {x_dim}", h.to_rows());
                let ig =
                    induced_groupoid(&parent, &h, x_dim).map_err(|e| format!("{name}: {e}"))?;
                let m = parent.total().dim();
                let rank = ig.constraint.rank();
                ensure(ig.dim() == 2 * x_dim + m - rank, || {
                    format!("{name}: dimension law")
                })?;
                let counted = pullback_size(&parent, &h, x_dim);
                ensure(counted == (p as usize).pow(ig.dim() as u32), || {
                    format!(
                        "{name}: {counted} pullback triples vs dimension {}",
                        ig.dim()
                    )
                })?;
                out.push(InducedCase {
                    name,
                    parent_transitive,
                    structure: ig.structure,
                });
            }
        }
    }
    Ok(out)
}

fn criterion_1() -> Outcome {
    let mut slowest = Duration::ZERO;
    let cases = constructions();
    for (name, g) in &cases {
        let start = Instant::now();
        let report = check_all(g, SuiteSelection::ALL).map_err(|e| format!("{name}: {e}"))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(report.all_passed(), || format!("{name}:\n{report}"))?;
        ensure(elapsed < Duration::from_secs(10), || {
            format!("{name} took {elapsed:?}")
        })?;
    }
    Ok(format!(
        "{} constructions, slowest run {slowest:?}",
        cases.len()
    ))
}

fn criterion_2() -> Outcome {
    let cases = induced_cases()?;
    for c in &cases {
        let report =
            check_all(&c.structure, SuiteSelection::ALL).map_err(|e| format!("{}: {e}", c.name))?;
        ensure(report.all_passed(), || format!("{}:\n{report}", c.name))?;
    }
    Ok(format!(
        "{} induced groupoids, dimension law exact",
        cases.len()
    ))
}

fn mutants() -> Vec<(String, VectorGroupoid)> {
    let table = pair_groupoid(gf(2), 1).unwrap().to_table().unwrap();
    let Multiplication::Table(entries) = table.multiplication().clone() else {
        unreachable!()
    };
    let mut out = Vec::new();
    for (&key, &value) in &entries {
        for wrong in (0..4).filter(|&w| w != value) {
            let mut mutated = entries.clone();
            mutated.insert(key, wrong);
            let g = VectorGroupoid::new(
                2,
                1,
                table.alpha().clone(),
                table.beta().clone(),
                table.epsilon().clone(),
                table.inversion().clone(),
                Multiplication::Table(mutated),
            )
            .unwrap();
            out.push((format!("{key:?} -> {wrong}"), g));
        }
    }
    out
}

/// Re-evaluates a groupoid law on a witness straight from the structure
/// maps. `None` for laws this replay does not cover.
fn replay_violates(g: &VectorGroupoid, law_id: &str, e: &[usize]) -> Option<bool> {
    let c = |a: usize, b: usize| g.compose(a, b).ok();
    let unit = |u: usize| g.unit(u).unwrap();
    Some(match (law_id, e) {
        ("G1", &[x, y, z]) => {
            let left = c(x, y).and_then(|xy| c(xy, z));
            let right = c(y, z).and_then(|yz| c(x, yz));
            left != right
        }
        ("G2", &[x]) => {
            c(unit(g.source(x).unwrap()), x) != Some(x)
                || c(x, unit(g.target(x).unwrap())) != Some(x)
        }
        ("G3", &[x]) => {
            let inv = g.invert(x).unwrap();
            c(inv, x) != Some(unit(g.target(x).unwrap()))
                || c(x, inv) != Some(unit(g.source(x).unwrap()))
        }
        ("P2.1.i", &[x, y]) => match c(x, y) {
            Some(xy) => g.source(xy) != g.source(x) || g.target(xy) != g.target(y),
            None => true,
        },
        _ => return None,
    })
}

fn criterion_3() -> Outcome {
    let all = mutants();
    let mut detected = 0;
    for (name, g) in &all {
        // the suites replay their own witnesses; a stale one is an error here
        let report = check_all(g, SuiteSelection::ALL).map_err(|e| format!("{name}: {e}"))?;
        let failures: Vec<_> = report
            .results
            .iter()
            .filter(|r| r.status == Status::Fail)
            .collect();
        let all_witnessed = failures.iter().all(|r| r.witness.is_some());
        let mut replayed = false;
        for r in &failures {
            let w = r.witness.as_ref().unwrap();
            match replay_violates(g, &r.law_id, &w.elements) {
                Some(true) => replayed = true,
                Some(false) => {
                    return Err(format!("{name}: {} witness {w} does not replay", r.law_id))
                }
                None => {}
            }
        }
        if all_witnessed && replayed {
            detected += 1;
        }
    }
    ensure(detected == all.len() && all.len() == 24, || {
        format!("{detected}/{} detected", all.len())
    })?;
    Ok(format!(
        "{detected}/{} mutants detected, each with an independently replayed witness",
        all.len()
    ))
}

fn criterion_4() -> Outcome {
    let mut groupoids = constructions();
    groupoids.extend(induced_cases()?.into_iter().map(|c| (c.name, c.structure)));
    groupoids.extend(mutants());
    let mut premises = 0;
    for (name, g) in &groupoids {
        let err = |e: Error| format!("{name}: {e}");
        let axioms = check_ehresmann(g).map_err(err)?.all_passed()
            && check_vector_axioms(g).map_err(err)?.all_passed();
        if axioms {
            premises += 1;
            let derived = check_derived_rules(g).map_err(err)?;
            let subspaces = check_subspaces(g).map_err(err)?;
            ensure(derived.all_passed() && subspaces.all_passed(), || {
                format!("{name}: axioms hold but\n{derived}{subspaces}")
            })?;
        }
    }
    Ok(format!(
        "{premises} of {} groupoids satisfy the axioms; all satisfy the derived laws",
        groupoids.len()
    ))
}

fn criterion_5() -> Outcome {
    let err = |e: Error| e.to_string();
    let parent = pair_groupoid(gf(2), 1).unwrap();
    let h = Matrix::identity(gf(2), 1);
    let ig = induced_groupoid(&parent, &h, 1).map_err(err)?;

    let u = ig.projection_matrix();
    let fact = universal_factorization(&ig.structure, &u, &h, &ig).map_err(err)?;
    ensure(fact.all_passed(), || {
        format!("identity factorization:\n{}", fact.report)
    })?;
    ensure(
        fact.morphism.f() == &Matrix::identity(gf(2), ig.dim()),
        || "v is not the identity".into(),
    )?;
    ensure(
        ig.projection_matrix().mul(fact.morphism.f()).map_err(err)? == u,
        || "identity factorization does not commute".into(),
    )?;

    let null = null_groupoid(gf(2), 1).unwrap();
    let u = parent.epsilon().mul(&h).map_err(err)?;
    let fact = universal_factorization(&null, &u, &h, &ig).map_err(err)?;
    ensure(fact.all_passed(), || {
        format!("units factorization:\n{}", fact.report)
    })?;
    ensure(fact.morphism.f() == ig.structure.epsilon(), || {
        "v differs from eps*".into()
    })?;
    ensure(
        ig.projection_matrix().mul(fact.morphism.f()).map_err(err)? == u,
        || "units factorization does not commute".into(),
    )?;
    for id in ["T4.1-unique", "T4.1-commute"] {
        ensure(fact.report.get(id).is_some_and(|r| r.passed()), || {
            format!("{id} missing")
        })?;
    }

    let bad = Matrix::from_rows(gf(2), 1, &[vec![1], vec![0]]).unwrap();
    match universal_factorization(&null, &bad, &h, &ig) {
        Err(Error::NotAMorphism { law_id, witness }) => {
            let m = GroupoidMorphism::new(null.clone(), parent.clone(), bad, h).map_err(err)?;
            let direct = check_morphism(&m).map_err(err)?;
            let r = direct.get(&law_id).ok_or("unknown law id")?;
            ensure(
                r.status == Status::Fail && r.witness.as_ref() == Some(&witness),
                || "rejection witness does not match a direct check".into(),
            )?;
            Ok(format!("both factorizations commute and are unique; non-morphism rejected at {law_id} {witness}"))
        }
        other => Err(format!("non-morphism accepted: {other:?}")),
    }
}

fn criterion_6() -> Outcome {
    let mut decisions = 0;
    let mut inherited = 0;
    for c in induced_cases()? {
        let t = is_transitive(&c.structure).map_err(|e| format!("{}: {e}", c.name))?;
        ensure(t.decisions_agree(), || {
            format!("{}: decisions disagree", c.name)
        })?;
        decisions += 1;
        if c.parent_transitive {
            ensure(t.transitive, || format!("{}: not transitive", c.name))?;
            inherited += 1;
        }
    }
    for (name, g) in constructions() {
        let t = is_transitive(&g).map_err(|e| format!("{name}: {e}"))?;
        ensure(t.decisions_agree(), || {
            format!("{name}: decisions disagree")
        })?;
        decisions += 1;
    }
    let null = is_transitive(&null_groupoid(gf(2), 1).unwrap()).map_err(|e| e.to_string())?;
    ensure(!null.transitive && null.decisions_agree(), || {
        "null GF(2)^1 reported transitive".into()
    })?;
    Ok(format!("{inherited} induced groupoids transitive; {decisions}/{decisions} decisions agree; null GF(2)^1 not transitive"))
}

fn criterion_7() -> Outcome {
    let g = pair_groupoid(gf(2), 1).unwrap();
    let v = g.total();
    for w in v.iter() {
        let [x, y] = v.index_to_vector(w).unwrap()[..] else {
            unreachable!()
        };
        let lhs = v.add(w, g.invert(w).unwrap());
        let rhs = v.add(
            g.unit(g.source(w).unwrap()).unwrap(),
            g.unit(g.target(w).unwrap()).unwrap(),
        );
        let symbolic = v.vector_to_index(&[(x + y) % 2, (x + y) % 2]).unwrap();
        ensure(lhs == rhs && rhs == symbolic, || {
            format!("({x}, {y}): {lhs} {rhs} {symbolic}")
        })?;
    }
    Ok("(x,y) + i(x,y) = (x+y, x+y) = eps(alpha) + eps(beta) on all 4 elements".into())
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn vgcheck(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_vgcheck"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("vgcheck killed by a signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn round_trips(path: &Path) -> Result<(), String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let name = path.file_name().unwrap().to_string_lossy();
    let again = if name.starts_with("morphism") {
        let doc: MorphismDoc = parse_json(&text).map_err(|e| e.to_string())?;
        let m = doc.to_morphism().map_err(|e| e.to_string())?;
        let again = to_pretty_json(&MorphismDoc::from_morphism(&m));
        let m2 = parse_json::<MorphismDoc>(&again)
            .and_then(|d| d.to_morphism())
            .map_err(|e| e.to_string())?;
        ensure(m2 == m, || format!("{name}: model changed"))?;
        again
    } else if name.starts_with("factorize") {
        let doc: FactorizeDoc = parse_json(&text).map_err(|e| e.to_string())?;
        doc.load().map_err(|e| e.to_string())?;
        to_pretty_json(&doc)
    } else {
        let g = parse_spec(&text).map_err(|e| e.to_string())?;
        let again = serialize_groupoid(&g);
        ensure(parse_spec(&again).map_err(|e| e.to_string())? == g, || {
            format!("{name}: model changed")
        })?;
        again
    };
    ensure(again == text, || format!("{name}: serialization differs"))
}

fn criterion_8() -> Outcome {
    let mut docs: Vec<PathBuf> = fs::read_dir(data_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    docs.sort();
    for path in &docs {
        round_trips(path)?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let pair = data_dir().join("pair_gf2.json");
    let mutated = data_dir().join("pair_gf2_table_mutated.json");
    let truncated = dir.path().join("truncated.json");
    let text = fs::read_to_string(&pair).map_err(|e| e.to_string())?;
    fs::write(&truncated, &text[..text.len() / 2]).map_err(|e| e.to_string())?;

    let (ok, _) = vgcheck(&["check", pair.to_str().unwrap()])?;
    let (violation, report) = vgcheck(&["check", mutated.to_str().unwrap()])?;
    let (malformed, _) = vgcheck(&["check", truncated.to_str().unwrap()])?;
    ensure((ok, violation, malformed) == (0, 1, 2), || {
        format!("exit codes {ok}/{violation}/{malformed}")
    })?;
    let report: serde_json::Value = serde_json::from_str(&report).map_err(|e| e.to_string())?;
    let has_triple = report["results"].as_array().unwrap().iter().any(|r| {
        r["witness"]["elements"]
            .as_array()
            .is_some_and(|e| e.len() == 3)
    });
    ensure(has_triple, || "mutated report has no witness triple".into())?;

    for path in &docs {
        let name = path.file_name().unwrap().to_string_lossy();
        let command = if name.starts_with("morphism") {
            "morphism-check"
        } else if name.starts_with("factorize") {
            "factorize"
        } else {
            "check"
        };
        let reports: Vec<PathBuf> = (0..2)
            .map(|i| dir.path().join(format!("{name}.{i}")))
            .collect();
        for r in &reports {
            vgcheck(&[
                command,
                path.to_str().unwrap(),
                "--report",
                r.to_str().unwrap(),
            ])?;
        }
        let first = fs::read(&reports[0]).map_err(|e| e.to_string())?;
        let second = fs::read(&reports[1]).map_err(|e| e.to_string())?;
        ensure(!first.is_empty() && first == second, || {
            format!("{name}: reports differ")
        })?;
    }
    Ok(format!(
        "{} documents round-trip; exit codes 0/1/2; reports byte-identical",
        docs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("construction soundness", criterion_1),
        ("induced-groupoid soundness", criterion_2),
        ("mutation detection", criterion_3),
        ("derived laws follow from the axioms", criterion_4),
        ("universal factorization", criterion_5),
        ("transitivity", criterion_6),
        ("pair groupoid inverse identity", criterion_7),
        ("command-line contract", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
