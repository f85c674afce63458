//! Each subcommand turns resolved parameters into a [`Report`].

use std::path::Path;

use normred::acceptance::{run_acceptance, run_criterion, AcceptOptions, CriterionResult};
use normred::curve::{br_bounds, BoundCase, Blowdown, CurveModel, Gonality};
use normred::cycle::{
    brute_force_minimal_anti_nef, build_star_graph, is_computation_sequence, laufer_fundamental_cycle, z_perp_and_b,
    Cycle, DualGraph,
};
use normred::graph_file::GraphFile;
use normred::par::Exec;
use normred::qseq::{q_sequence_from_lengths, sweep, Check, FamilyRun, FamilySpec, RunOptions};
use normred::{Error, Result};
use serde_json::Value;

use crate::report::{Report, Section, Sequence};

/// Largest graph the `graph` command cross-checks by exhaustive search.
const BRUTE_FORCE_VERTICES: usize = 8;

/// Runs the families in parameter order, stopping at the first failure.
pub fn families(report: &mut Report, mut specs: Vec<FamilySpec>, opts: &RunOptions) -> Result<()> {
    specs.sort_by_key(|s| match *s {
        FamilySpec::Hypersurface { d } => (d, 0),
        FamilySpec::Blowup { d, r } => (d, r),
        FamilySpec::Vero { g } => (g, 0),
    });
    specs.dedup();
    for run in sweep(&specs, opts) {
        report.sections.push(family_section(&run?));
    }
    Ok(())
}

fn family_section(run: &FamilyRun) -> Section {
    let mut s = Section::new(run.family.name(), run.family.params());
    s.value("reduction Q", run.reduction.clone());
    s.value("reduction exponent of Q", run.reduction_exponent);
    s.value("colength R/Q", run.colength_q);
    s.value("colength R/I", run.colength_i);
    match run.pg_blowdown {
        Some(Blowdown::Value(v)) => s.value("p_g of the blowdown", v),
        Some(Blowdown::Indeterminate) => s.value("p_g of the blowdown", "indeterminate"),
        None => {}
    }
    if let Some(v) = &run.vero {
        s.value("closure certificate", v.certificate.clone());
        s.value(
            "closure certificate degree u",
            v.certificate_u.map_or(Value::Null, Value::from),
        );
        s.value("extra generator outside Q closure(I^g)", v.extra_outside_q_closure);
        s.value("I^2 = QI", v.ideal_squared_is_q_times_ideal);
    }
    s.sequence = Some(Sequence::from_report(&run.report));
    s.checks = run.checks.clone();
    s
}

fn gonality_value(g: Gonality) -> String {
    match g {
        Gonality::Exact(v) => v.to_string(),
        Gonality::AtLeast(v) => format!(">= {v}"),
    }
}

fn curve_values(s: &mut Section, curve: &CurveModel) -> Result<()> {
    s.value("genus", curve.genus());
    s.value("deg D", curve.degree());
    s.value("a-invariant", curve.a_invariant());
    s.value("gonality", gonality_value(curve.gonality()));
    let b = br_bounds(curve, BoundCase::Negative)?;
    s.value("br bound [[(2g-2)/gonality]] + 1", b.bound_theorem_main);
    s.value("nr(m) prediction a + 2", b.nr_m_prediction);
    if let Some(v) = b.complete_intersection_bound {
        s.value("complete intersection bound a + [[a/(d1-1)]] + 1", v);
    }
    Ok(())
}

/// Curve-side invariants of the cone over a hyperelliptic curve with `D = b * g^1_2`,
/// plus the q-sequence of the maximal ideal from `q(n m) = sum_{k >= n} h^1(kD)`.
pub fn hyperelliptic(report: &mut Report, g: u64, b: u64, n_max: Option<u32>) -> Result<()> {
    let curve = CurveModel::hyperelliptic(g, b)?;
    let mut s = Section::new("hyperelliptic", format!("g={g};b={b}"));
    curve_values(&mut s, &curve)?;
    let a = curve.a_invariant().max(0) as u64;
    let n_max = n_max.map_or(a + 2, u64::from).max(1);
    let mut rr = true;
    let mut h1 = Vec::new();
    for n in 0..=n_max {
        let (h0, h) = curve.h0_h1(n)?;
        rr &= h0 as i64 - h as i64 == (n * curve.degree()) as i64 - g as i64 + 1;
        h1.push(h);
    }
    s.value("h^1(nD), n = 0..", h1.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
    let q: Vec<u64> = (0..=n_max + 1).map(|k| curve.q_k_maximal(k)).collect::<Result<_>>()?;
    let lengths: Vec<u64> = (1..=n_max as usize)
        .map(|n| (q[n + 1] + q[n - 1]) as i64 - 2 * q[n] as i64)
        .map(|l| u64::try_from(l).map_err(|_| Error::Invariant(format!("negative second difference {l}"))))
        .collect::<Result<_>>()?;
    let p_g = curve.pinkham_pg()?;
    let seq = q_sequence_from_lengths(p_g, &lengths)?;
    let bound = br_bounds(&curve, BoundCase::Negative)?.bound_theorem_main;
    s.checks.push(Check::new("h^0 - h^1 = deg - g + 1", rr));
    s.checks.push(Check::new(
        "q rebuilt from lengths matches the curve-side sum",
        seq.q[..] == q[..=n_max as usize],
    ));
    s.checks.extend(seq.invariant_checks());
    s.checks.push(Check::new("gonality bound equals g + 1", bound == g as i64 + 1));
    s.checks.push(Check::new("br <= gonality bound", i64::from(seq.br) <= bound));
    s.sequence = Some(Sequence::from_report(&seq));
    report.sections.push(s);
    Ok(())
}

pub fn ci_bound(report: &mut Report, degrees: Vec<u64>) -> Result<()> {
    let curve = CurveModel::complete_intersection(degrees)?;
    let CurveModel::CompleteIntersection { degrees } = &curve else {
        unreachable!("constructor returns a complete intersection")
    };
    let params = degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    let mut s = Section::new("complete_intersection", format!("degrees={params}"));
    curve_values(&mut s, &curve)?;
    let b = br_bounds(&curve, BoundCase::Negative)?;
    if let Some(v) = b.complete_intersection_bound {
        s.checks.push(Check::new(
            "complete intersection bound is at least a + 2",
            v >= curve.a_invariant() + 2,
        ));
    }
    report.sections.push(s);
    Ok(())
}

fn cycle_string(g: &DualGraph, c: &Cycle) -> String {
    let parts: Vec<String> = c
        .coeffs()
        .iter()
        .zip(g.vertices())
        .filter(|(&v, _)| v != 0)
        .map(|(v, vx)| format!("{}:{v}", vx.id))
        .collect();
    parts.join(" ")
}

/// Fundamental cycle and checks for a graph, plus a row per named cycle.
fn graph_section(
    family: &str,
    params: String,
    g: &DualGraph,
    cycles: &[(String, Cycle)],
    exec: Exec,
) -> Result<Section> {
    g.require_resolution_graph()?;
    let mut s = Section::new(family, params);
    s.value("vertices", g.len() as u64);
    s.value("edges", g.edges().len() as u64);
    let laufer = laufer_fundamental_cycle(g)?;
    let z = &laufer.cycle;
    s.value("Z_X", cycle_string(g, z));
    s.value("Z_X^2", g.intersect(z, z)?);
    s.value("p_a(Z_X)", g.pa(z)?);
    s.value("computation sequence length", laufer.sequence.len() as u64);
    s.checks.push(Check::new("Z_X anti-nef", g.is_anti_nef(z)));
    s.checks.push(Check::new(
        "Laufer steps form a computation sequence",
        is_computation_sequence(g, &laufer.sequence),
    ));
    if g.len() <= BRUTE_FORCE_VERTICES {
        let top = z.coeffs().iter().copied().max().unwrap_or(0).max(6);
        let brute = brute_force_minimal_anti_nef(g, &vec![top; g.len()], exec);
        s.checks.push(Check::new("Z_X equals the brute-force minimum", brute.as_ref() == Some(z)));
    }
    // cone-like data around the curve of largest genus, when there is one
    let e0 = (0..g.len()).max_by_key(|&i| (g.vertices()[i].genus, std::cmp::Reverse(i)));
    if let Some(e0) = e0.filter(|&i| g.vertices()[i].genus > 0) {
        s.value("E_0", g.vertices()[e0].id.clone());
        // the orthogonal-case data needs a positive anti-nef cycle with Z E_0 = 0
        let named = cycles.iter().map(|(n, c)| (n.as_str(), c));
        let orthogonal = named
            .chain(std::iter::once(("Z_X", z)))
            .find(|(_, c)| c.is_positive() && g.is_anti_nef(c) && g.dot_vertex(c, e0) == 0);
        if let Some((name, c)) = orthogonal {
            let zp = z_perp_and_b(g, c, e0)?;
            s.value("orthogonal cycle Z", name);
            s.value("-Z_B E_0", zp.minus_zb_e0);
            s.value("-Z_X^2", zp.minus_zx_squared);
            s.value("[[(2g-2)/(-Z_B E_0)]]", zp.threshold);
            s.checks.extend(zp.checks);
        }
    }
    for (name, c) in cycles {
        s.value(name, cycle_string(g, c));
        s.value(&format!("{name} anti-nef"), g.is_anti_nef(c));
        if c.is_positive() {
            s.value(&format!("p_a({name})"), g.pa(c)?);
        }
        s.value(&format!("{name} Z_X"), g.intersect(c, z)?);
    }
    Ok(s)
}

pub fn graph(report: &mut Report, path: &Path, exec: Exec) -> Result<()> {
    let file = GraphFile::read(path)?;
    let (g, cycles) = file.to_graph()?;
    let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    report.sections.push(graph_section("graph", format!("file={name}"), &g, &cycles, exec)?);
    Ok(())
}

pub fn star(report: &mut Report, d: u32, r: u32, graph_out: Option<&Path>, exec: Exec) -> Result<()> {
    let star = build_star_graph(d, r)?;
    let cycles = vec![("Z_r".to_string(), star.z_r.clone()), ("C_r".to_string(), star.c_r.clone())];
    let mut s = graph_section("star", format!("d={d};r={r}"), &star.graph, &cycles, exec)?;
    let z = star.fundamental_cycle()?;
    let genus = i64::from((d - 1) * (d - 2) / 2);
    s.value("Z_r C_r", star.graph.intersect(&star.z_r, &star.c_r)?);
    s.value("p_g-ideal", r + 2 >= d);
    s.checks.extend(star.checks.iter().cloned());
    s.checks.push(Check::new("p_a(Z_X) = (d-1)(d-2)/2", star.graph.pa(&z)? == genus));
    if let Some(p) = graph_out {
        GraphFile::from_star(&star).write(p)?;
    }
    report.sections.push(s);
    Ok(())
}

/// Runs the requested criteria (all when empty) and prints one line per criterion.
pub fn accept(criteria: &[u32], opts: &AcceptOptions) -> Result<Vec<CriterionResult>> {
    if let Some(n) = criteria.iter().find(|n| !(1..=7).contains(*n)) {
        return Err(Error::Usage(format!("no criterion {n} (use 1 to 7)")));
    }
    if criteria.is_empty() {
        return Ok(run_acceptance(opts, |r| println!("{r}")));
    }
    let mut out = Vec::new();
    for &n in criteria {
        let r = run_criterion(n, opts).expect("criterion numbers checked above");
        println!("{r}");
        out.push(r);
    }
    Ok(out)
}
