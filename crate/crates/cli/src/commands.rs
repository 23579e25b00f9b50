//! One function per verb. Each returns the report to print, `None` when it
//! already wrote its artifact to stdout, or the failure class.

use std::fs;
use std::path::Path;

use bifol::census::{
    affine_class, budget_from_env, genericity_report, growth_report, intmap_class, rows_csv, skew_generators, skew_h,
    trivial_affine_generators, GeneratingSet, GrowthReport, Model, PatternClassifier,
};
use bifol::dynamics::{classify_isometry, wpd_scan};
use bifol::fixtures::{self, Fixture};
use bifol::graphs::{bottleneck_certify, build_graph, qi_inclusion_report, GraphKind};
use bifol::io;
use bifol::layout::with_all_crossings;
use bifol::lozenge::detect_lozenges;
use bifol::periodic::{AffineElement, IndexAutomorphism, IntMap, PeriodicPattern};
use bifol::random::random_pattern;
use bifol::walls::{metric_axiom_check, qi_metric_report, WallContext, WallKind};
use bifol::{validate_pattern, FinitePattern, Pattern};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::Report;
use crate::{Failure, Format, ModelArg, Verdict, Window};

type Outcome = Result<Option<Report>, Failure>;

fn read(path: &Path, r: &mut Report) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    r.input(&path.display().to_string(), text.as_bytes());
    Ok(text)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Default window for periodic inputs: at least four periods and 16 indices.
fn default_window(pp: &PeriodicPattern) -> (i64, i64) {
    (0, (4 * pp.period as i64).max(16) - 1)
}

/// A finite pattern from a file; periodic inputs are materialized on the
/// window with a marked point at every crossing.
fn finite(path: &Path, window: Window, r: &mut Report) -> Result<Pattern, Failure> {
    let text = read(path, r)?;
    let fp = match io::parse_pattern(&text)? {
        Fixture::Finite(fp) => fp,
        Fixture::Periodic(pp) => {
            let (lo, hi) = window.window.unwrap_or_else(|| default_window(&pp));
            r.env("window", [lo, hi]);
            with_all_crossings(pp.materialize_window(lo, hi)?)
        }
    };
    Ok(Pattern::new(fp)?)
}

fn periodic(path: &Path, r: &mut Report) -> Result<PeriodicPattern, Failure> {
    match io::parse_pattern(&read(path, r)?)? {
        Fixture::Periodic(pp) => Ok(pp),
        Fixture::Finite(_) => Err(Failure::Usage(format!("{}: expected a periodic pattern", path.display()))),
    }
}

pub fn validate(path: &Path) -> Outcome {
    let mut r = Report::new("validate");
    let text = read(path, &mut r)?;
    let value: Value = io::from_json(&text)?;
    let (kind, violations) = if value.get("period").is_some() {
        let pp: PeriodicPattern = io::from_json(&text)?;
        ("periodic", pp.check().err().map(|e| json!([e.to_string()])).unwrap_or(json!([])))
    } else {
        let fp: FinitePattern = io::from_json(&text)?;
        ("finite", serde_json::to_value(validate_pattern(&fp).violations).expect("serializable"))
    };
    let valid = violations.as_array().is_some_and(Vec::is_empty);
    r.check("valid-pattern", valid, format!("{} violations", violations.as_array().map_or(0, Vec::len)));
    r.results = json!({ "kind": kind, "violations": violations });
    if valid {
        Ok(Some(r))
    } else {
        print!("{}", io::to_canonical_json(&r)?);
        Err(Failure::Data(format!("{}: pattern is invalid", path.display())))
    }
}

pub fn gen(kind: &str, param: Option<i64>, seed: u64, max_leaves: usize, out: Option<&Path>) -> Outcome {
    let mut r = Report::new("gen");
    let f = if kind == "random" {
        r.env("seed", seed);
        r.env("max_leaves", max_leaves);
        Fixture::Finite(random_pattern(seed, max_leaves)?)
    } else {
        r.env("param", param);
        fixtures::generate(kind, param)?
    };
    let text = io::serialize_pattern(&f)?;
    match out {
        None => {
            print!("{text}");
            Ok(None)
        }
        Some(path) => {
            write(path, &text)?;
            r.results = json!({ "kind": kind, "out": path.display().to_string() });
            Ok(Some(r))
        }
    }
}

pub fn graph(path: &Path, kind: GraphKind, window: Window, out: Option<&Path>) -> Outcome {
    let mut r = Report::new("graph");
    let p = finite(path, window, &mut r)?;
    let g = build_graph(&p, kind);
    let dot = io::export_dot(&p, &g);
    let Some(out) = out else {
        print!("{dot}");
        return Ok(None);
    };
    write(out, &dot)?;
    let inc = qi_inclusion_report(&p);
    r.check("graph-inclusion", inc.pass(), format!("{} pairs, {} violations", inc.pairs, inc.violations.len()));
    r.results = json!({
        "kind": kind.name(),
        "vertices": g.len(),
        "edges": g.edge_count(),
        "connected": g.is_connected(),
        "diameter": g.diameter(),
        "out": out.display().to_string(),
    });
    Ok(Some(r))
}

pub fn dist(
    path: &Path,
    kind: GraphKind,
    pair: Option<(String, String)>,
    window: Window,
    out: Option<&Path>,
) -> Outcome {
    let mut r = Report::new("dist");
    let p = finite(path, window, &mut r)?;
    let g = build_graph(&p, kind);
    match pair {
        Some((a, b)) => {
            let d = g.distance(&p, p.leaf(&a)?, p.leaf(&b)?)?;
            r.results = json!({ "kind": kind.name(), "from": a, "to": b, "distance": d });
            Ok(Some(r))
        }
        None => {
            let csv = io::distance_csv(&p, &g);
            match out {
                None => {
                    print!("{csv}");
                    Ok(None)
                }
                Some(o) => {
                    write(o, &csv)?;
                    r.results = json!({ "kind": kind.name(), "out": o.display().to_string() });
                    Ok(Some(r))
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn bottleneck(
    files: &[std::path::PathBuf],
    k: u32,
    kinds: &[GraphKind],
    random: u64,
    seed: u64,
    max_leaves: usize,
    window: Window,
) -> Outcome {
    let mut r = Report::new("bottleneck");
    r.env("K", k);
    let mut patterns = Vec::new();
    for f in files {
        patterns.push((f.display().to_string(), finite(f, window, &mut r)?));
    }
    if random > 0 {
        r.env("seed", seed);
        r.env("random", random);
        r.env("max_leaves", max_leaves);
        for s in seed..seed + random {
            patterns.push((format!("random:{s}"), Pattern::new(random_pattern(s, max_leaves)?)?));
        }
    }
    if patterns.is_empty() {
        return Err(Failure::Usage("no patterns given".into()));
    }
    let mut rows = Vec::new();
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for (name, p) in &patterns {
        for &kind in kinds {
            let g = build_graph(p, kind);
            let row = match bottleneck_certify(&g, k) {
                Ok(b) if b.pass => {
                    passed += 1;
                    json!({ "input": name, "kind": kind.name(), "status": "pass" })
                }
                Ok(b) => {
                    failed += 1;
                    let w = b.witness.map(|(x, y, v)| [x, y, v].map(|i| p.leaf_id(g.leaves[i]).to_string()));
                    json!({ "input": name, "kind": kind.name(), "status": "fail", "witness": w })
                }
                // The certificate is defined on connected graphs only.
                Err(bifol::Error::Disconnected) => {
                    skipped += 1;
                    json!({ "input": name, "kind": kind.name(), "status": "skipped", "reason": "disconnected" })
                }
                Err(e) => return Err(e.into()),
            };
            rows.push(row);
        }
    }
    r.check(format!("bottleneck-k{k}"), failed == 0, format!("{passed} pass, {failed} fail, {skipped} skipped"));
    r.results = Value::Array(rows);
    Ok(Some(r))
}

pub fn metric(path: &Path, kind: Option<WallKind>, window: Window, out: Option<&Path>) -> Outcome {
    let mut r = Report::new("metric");
    let p = finite(path, window, &mut r)?;
    let ctx = WallContext::new(&p);
    let kinds: Vec<WallKind> = kind.map_or(WallKind::ALL.to_vec(), |k| vec![k]);
    let mut axioms = Vec::new();
    for &k in &kinds {
        let m = metric_axiom_check(&ctx, k)?;
        r.check(
            format!("metric-axioms-{}", k.name()),
            m.pass(),
            format!("{} triples, {} violations", m.triples, m.violations.len()),
        );
        axioms.push(m);
    }
    let qi = qi_metric_report(&ctx)?;
    let bad = qi.rows.iter().filter(|x| !x.ok).count();
    r.check("wall-vs-graph", qi.pass(), format!("{} comparisons, {bad} violations", qi.rows.len()));
    if let (Some(k), Some(o)) = (kind, out) {
        let labels: Vec<String> = p.points().iter().map(|q| q.id.clone()).collect();
        let rows: Vec<Vec<Option<u32>>> =
            ctx.matrix(k)?.into_iter().map(|row| row.into_iter().map(Some).collect()).collect();
        write(o, &io::matrix_csv("point", &labels, &rows))?;
    }
    r.results = json!({
        "axioms": axioms,
        "wall_vs_graph": {
            "comparisons": qi.rows.len(),
            "violations": qi.rows.iter().filter(|x| !x.ok).collect::<Vec<_>>(),
            "min_lower_slack": qi.min_lower_slack,
            "min_upper_slack": qi.min_upper_slack,
            "skipped_region_points": qi.skipped_region_points,
        },
    });
    Ok(Some(r))
}

pub fn lozenges(path: &Path, window: Window) -> Outcome {
    let mut r = Report::new("lozenges");
    let p = finite(path, window, &mut r)?;
    let rep = detect_lozenges(&p);
    r.check(
        "lozenge-quadrants",
        rep.quadrant_claim_holds(),
        format!("{} lozenges, {} chains, {} corners", rep.lozenges.len(), rep.chains.len(), rep.corner_count()),
    );
    r.results = rep.to_json(&p);
    Ok(Some(r))
}

fn window_size(pp: &PeriodicPattern, window: Option<i64>) -> i64 {
    window.unwrap_or(4 * pp.period as i64)
}

pub fn classify(path: &Path, element: &str, window: Option<i64>, nmax: u32, expect: Option<Verdict>) -> Outcome {
    let mut r = Report::new("classify");
    let pp = periodic(path, &mut r)?;
    let g = pp.automorphism(element)?;
    let w = window_size(&pp, window);
    r.env("window", w);
    r.env("nmax", nmax);
    let c = classify_isometry(&pp, &g, w, nmax)?;
    if let Some(e) = expect {
        let (tag, ok) = match e {
            Verdict::Loxodromic => ("expect-loxodromic", c.is_loxodromic()),
            Verdict::Elliptic => ("expect-elliptic", c.is_elliptic()),
        };
        r.check(tag, ok, format!("{element} on {}", pp.name));
    }
    r.results = json!({ "element": element, "classification": c });
    Ok(Some(r))
}

pub fn wpd(path: &Path, element: &str, base: i64, eps: u32, n: u32, radius: u32, window: Option<i64>) -> Outcome {
    let mut r = Report::new("wpd");
    let pp = periodic(path, &mut r)?;
    let g = pp.automorphism(element)?;
    let w = window_size(&pp, window);
    r.env("window", w);
    let mut gens = Vec::new();
    for name in pp.automorphisms.keys() {
        let a = pp.automorphism(name)?;
        if !a.is_identity() {
            gens.push((name.clone(), a));
        }
    }
    let rep = wpd_scan(&pp, &g, base, eps, n, &gens, radius, w)?;
    r.check("wpd-stable", rep.stable, format!("{} witnesses among {} candidates", rep.witnesses.len(), rep.candidates));
    r.results = serde_json::to_value(&rep).expect("serializable");
    Ok(Some(r))
}

/// Generators file: `{"generators": [{"name": …, …}]}` with `offsets` for
/// the skew model, `k` and `v` for the trivial model, `plus` and `minus`
/// for the pattern model.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GensFile {
    generators: Vec<GenSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenSpec {
    name: String,
    offsets: Option<Vec<i64>>,
    k: Option<i64>,
    v: Option<[i64; 2]>,
    plus: Option<Vec<i64>>,
    minus: Option<Vec<i64>>,
}

fn missing(name: &str, what: &str) -> Failure {
    Failure::Usage(format!("generator `{name}`: missing `{what}`"))
}

fn load_gens(path: Option<&Path>, r: &mut Report) -> Result<Option<Vec<GenSpec>>, Failure> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(io::from_json::<GensFile>(&read(p, r)?)?.generators)),
    }
}

fn census_checks(r: &mut Report, g: &GrowthReport) {
    r.check("ball-growth-bound", g.ball_growth_bound, "|B(n+1)| ≤ 2|S|·|B(n)| at every radius");
}

pub fn census(
    model: ModelArg,
    gens: Option<&Path>,
    pattern: Option<&Path>,
    nmax: u32,
    h: Option<&str>,
    out: Option<&Path>,
) -> Outcome {
    let mut r = Report::new("census");
    let budget = budget_from_env();
    r.env("nmax", nmax);
    r.env("budget_ms", budget);
    let specs = load_gens(gens, &mut r)?;
    if h.is_some() && !matches!(model, ModelArg::Skew) {
        return Err(Failure::Usage("--h applies to the skew model only".into()));
    }
    let growth = match model {
        ModelArg::Trivial => {
            let s = match specs {
                None => trivial_affine_generators(),
                Some(v) => {
                    let mut g = Vec::new();
                    for x in v {
                        let e = AffineElement::new(
                            x.k.ok_or_else(|| missing(&x.name, "k"))?,
                            x.v.ok_or_else(|| missing(&x.name, "v"))?,
                        );
                        g.push((x.name, e));
                    }
                    GeneratingSet::new(Model::TrivialAffine, g)?
                }
            };
            growth_report(&s, nmax, Some(budget), |g| Ok(affine_class(g)))?
        }
        ModelArg::Skew => {
            let s = match specs {
                None => skew_generators(),
                Some(v) => {
                    let mut g = Vec::new();
                    for x in v {
                        let o = x.offsets.ok_or_else(|| missing(&x.name, "offsets"))?;
                        g.push((x.name, IntMap::new(o)?));
                    }
                    GeneratingSet::new(Model::SkewIntmap, g)?
                }
            };
            let growth = growth_report(&s, nmax, Some(budget), |g| Ok(intmap_class(g)))?;
            if let Some(h) = h {
                let h = match h {
                    "shift" => skew_h(),
                    list => {
                        let o: Result<Vec<i64>, _> = list.split(',').map(|t| t.trim().parse::<i64>()).collect();
                        IntMap::new(o.map_err(|e| Failure::Usage(format!("--h: {e}")))?)?
                    }
                };
                let gen = genericity_report(&s, &h, nmax, Some(budget))?;
                r.check("genericity", gen.pass(), format!("{} elements, {} failures", gen.checked, gen.failures.len()));
                r.env("h", h.offsets());
                r.results = json!({ "genericity": gen });
            }
            growth
        }
        ModelArg::Pattern => {
            let path = pattern.ok_or_else(|| Failure::Usage("--model pattern needs --pattern FILE".into()))?;
            let pp = periodic(path, &mut r)?;
            let mut g = Vec::new();
            match specs {
                None => {
                    for name in pp.automorphisms.keys() {
                        let a = pp.automorphism(name)?;
                        if !a.is_identity() {
                            g.push((name.clone(), a));
                        }
                    }
                }
                Some(v) => {
                    for x in v {
                        let plus = x.plus.ok_or_else(|| missing(&x.name, "plus"))?;
                        let minus = x.minus.ok_or_else(|| missing(&x.name, "minus"))?;
                        g.push((x.name, IndexAutomorphism::for_pattern(&pp, plus, minus)?));
                    }
                }
            }
            let s = GeneratingSet::new(Model::PeriodicPattern, g)?;
            let c = PatternClassifier::new(&pp)?;
            growth_report(&s, nmax, Some(budget), |g: &IndexAutomorphism| c.class(g))?
        }
    };
    census_checks(&mut r, &growth);
    if let Some(o) = out {
        write(o, &rows_csv(&growth.rows))?;
    }
    let growth = serde_json::to_value(&growth).expect("serializable");
    r.results = match r.results.take() {
        Value::Object(mut m) => {
            m.insert("growth".into(), growth);
            Value::Object(m)
        }
        _ => json!({ "growth": growth }),
    };
    Ok(Some(r))
}

pub fn export(path: &Path, format: Format, kind: GraphKind, window: Window, out: &Path) -> Outcome {
    let mut r = Report::new("export");
    let text = match format {
        Format::Json => io::serialize_pattern(&io::parse_pattern(&read(path, &mut r)?)?)?,
        Format::Dot => {
            let p = finite(path, window, &mut r)?;
            io::export_dot(&p, &build_graph(&p, kind))
        }
        Format::Csv => {
            let p = finite(path, window, &mut r)?;
            io::distance_csv(&p, &build_graph(&p, kind))
        }
    };
    write(out, &text)?;
    r.results = json!({ "out": out.display().to_string(), "bytes": text.len() });
    Ok(Some(r))
}
