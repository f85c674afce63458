//! The acceptance suite: seven exact checks over the hypersurface, blowup and Veronese
//! families, the curve formulas and the cycle lattice. Shared by the `normred accept`
//! command and the `acceptance` test target.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{self, binom, br_bounds, upper_bracket, BoundCase, CurveModel};
use crate::cycle::{brute_force_minimal_anti_nef, build_star_graph, laufer_fundamental_cycle, z_perp_and_b, DualGraph};
use crate::error::Result;
use crate::field::{Field, DEFAULT_PRIME};
use crate::par::{self, Exec};
use crate::qseq::{full_invariant_run, FamilyRun, FamilySpec, QSequenceReport, RunOptions};
use crate::series;

#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct AcceptOptions {
    pub seed: u64,
    pub exec: Exec,
    /// Replace the Veronese closure by plain powers (a deliberately wrong oracle).
    pub inject_fault: bool,
}


#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub number: u32,
    pub title: &'static str,
    pub passed: bool,
    /// First failure, or a summary of what was checked.
    pub detail: String,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] criterion {}: {} ({})", self.number, self.title, self.detail)
    }
}

/// Collects failures; the first one becomes the detail line.
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, label: &str, got: T, want: T) {
        let ok = got == want;
        self.expect(ok, || format!("{label}: got {got:?}, expected {want:?}"));
    }

    fn error(&mut self, label: &str, e: impl std::fmt::Display) {
        self.checked += 1;
        self.failures.push(format!("{label}: {e}"));
    }

    fn finish(self, number: u32, title: &'static str, summary: String) -> CriterionResult {
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{summary}; {} checks", self.checked)
        } else {
            format!("{} of {} checks failed; first: {}", self.failures.len(), self.checked, self.failures[0])
        };
        CriterionResult {
            number,
            title,
            passed,
            detail,
        }
    }
}

/// Every family run made by the suite, kept for the cross-cutting criteria 6 and 7.
#[derive(Default)]
struct Runs {
    all: Vec<FamilyRun>,
}

fn run_opts(opts: &AcceptOptions, field: Field) -> RunOptions {
    RunOptions {
        field,
        seed: opts.seed,
        exec: opts.exec,
        drop_closure_extra: opts.inject_fault,
        ..RunOptions::default()
    }
}

fn run_grid(specs: &[FamilySpec], opts: &RunOptions) -> Vec<(FamilySpec, Result<FamilyRun>)> {
    let results = par::map(opts.exec, specs, |s| full_invariant_run(*s, opts));
    specs.iter().copied().zip(results).collect()
}

fn criterion_1(opts: &AcceptOptions, runs: &mut Runs) -> CriterionResult {
    let mut t = Tally::new();
    let specs: Vec<FamilySpec> = (3..=6).map(|d| FamilySpec::Hypersurface { d }).collect();
    for (spec, res) in run_grid(&specs, &run_opts(opts, Field::Rational)) {
        let FamilySpec::Hypersurface { d } = spec else { unreachable!() };
        match res {
            Ok(run) => {
                for n in 0..=d {
                    t.eq(&format!("d={d}: q({n} m)"), run.report.q[n as usize], binom(d as i64 - n as i64, 3));
                }
                t.eq(&format!("d={d}: nr"), run.report.nr, d - 1);
                t.eq(&format!("d={d}: br"), run.report.br, d - 1);
                runs.all.push(run);
            }
            Err(e) => t.error(&format!("d={d}"), e),
        }
    }
    t.finish(1, "hypersurface cones", "q(n m) = binom(d-n, 3) and nr = br = d-1 for d = 3..6".into())
}

fn criterion_2(opts: &AcceptOptions, runs: &mut Runs) -> CriterionResult {
    let mut t = Tally::new();
    let mut specs = Vec::new();
    for d in 3..=5u32 {
        for r in 1..=3u32 {
            specs.push(FamilySpec::Blowup { d, r });
        }
    }
    for (spec, res) in run_grid(&specs, &run_opts(opts, Field::Rational)) {
        let FamilySpec::Blowup { d, r } = spec else { unreachable!() };
        let tag = format!("d={d}, r={r}");
        let run = match res {
            Ok(run) => run,
            Err(e) => {
                t.error(&tag, e);
                continue;
            }
        };
        let rep = &run.report;
        t.eq(&format!("{tag}: length of R/Q"), run.colength_q, (d * (r + 1)) as u64);

        // Hilbert series of R/Q, summed from degree s(r+1) on
        let hs = series::rational(&[d as usize, r as usize + 1], &[1, 1], (d + r + 1) as usize);
        for s in 2..=rep.n_max() + 1 {
            let from = (s * (r + 1)) as usize;
            let tail: i64 = hs.iter().skip(from).sum();
            t.eq(&format!("{tag}: length of I^{s}/QI^{}", s - 1), rep.length(s - 1) as i64, tail);
        }

        let p_g = binom(d as i64, 3);
        let q_i = rep.q[1];
        if r < d {
            let formula = binom(d as i64 - 1, 3) as i64 + (r as i64 * (2 * d as i64 - r as i64 - 3)) / 2;
            t.eq(&format!("{tag}: q(I)"), q_i as i64, formula);
        } else {
            // the closed form for q(I) covers r <= d-1; past that I is a p_g-ideal
            t.eq(&format!("{tag}: q(I)"), q_i, p_g);
        }
        let expect_nr = (d - 1).div_ceil(r + 1);
        t.eq(&format!("{tag}: nr"), rep.nr, expect_nr);
        t.eq(&format!("{tag}: br"), rep.br, expect_nr);
        t.eq(&format!("{tag}: p_g-ideal iff r >= d-2"), q_i == p_g, r + 2 >= d);
        runs.all.push(run);
    }
    t.finish(
        2,
        "blowup families",
        "colength d(r+1), series tails, q(I), nr = br, p_g-ideal threshold for d = 3..5, r = 1..3".into(),
    )
}

fn criterion_3(opts: &AcceptOptions, runs: &mut Runs) -> CriterionResult {
    let mut t = Tally::new();
    for g in [2u32, 3] {
        let mut per_field: Vec<FamilyRun> = Vec::new();
        for field in [Field::Rational, Field::Prime(DEFAULT_PRIME)] {
            let tag = format!("g={g}, field {field}");
            let run = match full_invariant_run(FamilySpec::Vero { g }, &run_opts(opts, field)) {
                Ok(run) => run,
                Err(e) => {
                    t.error(&tag, e);
                    continue;
                }
            };
            let rep = &run.report;
            let gg = g as u64;
            t.eq(&format!("{tag}: length of A/I"), run.colength_i, gg);
            t.eq(&format!("{tag}: length of A/Q"), run.colength_q, 4 * gg - 2);
            t.eq(&format!("{tag}: I^2 = QI"), run.reduction_exponent, 1);
            match &run.vero {
                Some(v) => {
                    t.eq(&format!("{tag}: certificate degree for x y^(g^2-1)"), v.certificate_u, Some(2));
                    t.eq(&format!("{tag}: x y^(g^2-1) outside Q closure(I^g)"), v.extra_outside_q_closure, true);
                }
                None => t.error(&tag, "no Veronese data"),
            }
            t.eq(&format!("{tag}: length of closure(I^(g+1))/Q closure(I^g)"), rep.length(g), 1);
            let want: Vec<u64> = (0..rep.q.len() as u64).map(|n| gg.saturating_sub(n)).collect();
            t.eq(&format!("{tag}: q(nI)"), rep.q.clone(), want);
            t.eq(&format!("{tag}: nr"), rep.nr, 1);
            t.eq(&format!("{tag}: br"), rep.br, g + 1);
            t.eq(&format!("{tag}: br = p_g + 1"), rep.br as u64, rep.p_g + 1);
            per_field.push(run);
        }
        if let [a, b] = per_field.as_slice() {
            t.eq(&format!("g={g}: q-sequence report agrees across fields"), &a.report, &b.report);
            t.eq(
                &format!("g={g}: colengths agree across fields"),
                (a.colength_i, a.colength_q),
                (b.colength_i, b.colength_q),
            );
            t.eq(&format!("g={g}: Veronese data agrees across fields"), &a.vero, &b.vero);
        }
        runs.all.extend(per_field);
    }
    t.finish(
        3,
        "Veronese example",
        "colengths, I^2 = QI, closure certificate and non-membership, q, nr = 1, br = g+1 over Q and F_32003".into(),
    )
}

fn criterion_4(opts: &AcceptOptions) -> CriterionResult {
    let mut t = Tally::new();
    match full_invariant_run(FamilySpec::Blowup { d: 4, r: 1 }, &run_opts(opts, Field::Rational)) {
        Ok(run) => match curve::pg_blowdown(4, 1) {
            Ok(curve::Blowdown::Value(v)) => {
                t.eq("d=4, r=1: q_inf vs blowdown p_g", run.report.q_inf, v);
                t.eq("blowdown p_g", v, 3);
            }
            other => t.error("pg_blowdown(4, 1)", format!("{other:?}")),
        },
        Err(e) => t.error("d=4, r=1", e),
    }
    match build_star_graph(4, 1).and_then(|s| z_perp_and_b(&s.graph, &s.z_r, 0)) {
        Ok(zp) => t.eq("d=4, r=1: stabilization threshold", zp.threshold, 1),
        Err(e) => t.error("star d=4, r=1", e),
    }
    t.finish(4, "stabilization cross-check", "q_inf of d=4, r=1 equals the blowdown p_g = 3".into())
}

/// Adjacency matrix and automorphism group (as vertex permutations).
type GraphWithAutomorphisms = (Vec<Vec<bool>>, Vec<Vec<usize>>);

/// Connected simple graphs on `n` vertices up to isomorphism.
fn connected_graphs(n: usize) -> Vec<GraphWithAutomorphisms> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let encode = |adj: &Vec<Vec<bool>>, p: &[usize]| -> u32 {
        pairs
            .iter()
            .enumerate()
            .fold(0u32, |acc, (k, &(i, j))| if adj[p[i]][p[j]] { acc | (1 << k) } else { acc })
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut adj = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        if !connected(&adj) {
            continue;
        }
        let canon = perms.iter().map(|p| encode(&adj, p)).min().expect("nonempty");
        if seen.insert(canon) {
            let me = encode(&adj, &(0..n).collect::<Vec<_>>());
            let autos = perms.iter().filter(|p| encode(&adj, p) == me).cloned().collect();
            out.push((adj, autos));
        }
    }
    out
}

fn connected(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if adj[i][j] && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Intersection matrices of all connected negative definite graphs with at most
/// `max_vertices` vertices, simple edges and self-intersections in `weights`, one per
/// isomorphism class.
pub fn small_negative_definite_graphs(max_vertices: usize, weights: std::ops::RangeInclusive<i64>) -> Vec<Vec<Vec<i64>>> {
    let ws: Vec<i64> = weights.collect();
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        for (adj, autos) in connected_graphs(n) {
            let total = ws.len().pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let w: Vec<i64> = (0..n)
                    .map(|_| {
                        let x = ws[c % ws.len()];
                        c /= ws.len();
                        x
                    })
                    .collect();
                // keep one weighting per orbit of the automorphism group
                if autos.iter().any(|p| p.iter().map(|&i| w[i]).collect::<Vec<_>>() < w) {
                    continue;
                }
                let m: Vec<Vec<i64>> = (0..n)
                    .map(|i| (0..n).map(|j| if i == j { w[i] } else { adj[i][j] as i64 }).collect())
                    .collect();
                if crate::cycle::leading_minors(&m)
                    .iter()
                    .enumerate()
                    .all(|(k, v)| if k % 2 == 0 { *v < 0 } else { *v > 0 })
                {
                    out.push(m);
                }
            }
        }
    }
    out
}

fn criterion_5(opts: &AcceptOptions) -> CriterionResult {
    let mut t = Tally::new();
    let mats = small_negative_definite_graphs(5, -4..=-1);
    let outcomes = par::map(opts.exec, &mats, |m| -> std::result::Result<(), String> {
        let g = DualGraph::from_matrix(m).map_err(|e| e.to_string())?;
        let z = laufer_fundamental_cycle(&g).map_err(|e| e.to_string())?.cycle;
        if !g.is_anti_nef(&z) {
            return Err(format!("{m:?}: Laufer output is not anti-nef"));
        }
        let bound = (*z.coeffs().iter().max().expect("nonempty")).max(6);
        let brute = brute_force_minimal_anti_nef(&g, &vec![bound; g.len()], Exec::Sequential);
        if brute.as_ref() != Some(&z) {
            return Err(format!("{m:?}: Laufer {:?} vs brute force {:?}", z.coeffs(), brute.map(|b| b.coeffs().to_vec())));
        }
        Ok(())
    });
    for o in outcomes {
        t.expect(o.is_ok(), || o.clone().unwrap_err());
    }
    let graphs = mats.len();
    for d in 3..=5u32 {
        for r in 1..=3u32 {
            let tag = format!("star d={d}, r={r}");
            match build_star_graph(d, r) {
                Ok(s) => {
                    t.expect(s.checks.iter().all(|c| c.passed), || format!("{tag}: {:?}", s.checks));
                    match s.fundamental_cycle().and_then(|zx| s.graph.pa(&zx)) {
                        Ok(pa) => t.eq(&format!("{tag}: p_a(Z_X)"), pa, ((d - 1) * (d - 2) / 2) as i64),
                        Err(e) => t.error(&tag, e),
                    }
                    match z_perp_and_b(&s.graph, &s.z_r, 0) {
                        Ok(zp) => t.expect(zp.checks.iter().all(|c| c.passed), || format!("{tag}: {:?}", zp.checks)),
                        Err(e) => t.error(&tag, e),
                    }
                }
                Err(e) => t.error(&tag, e),
            }
        }
    }
    t.finish(
        5,
        "cycle lattice",
        format!(
            "Laufer = brute force on {graphs} weighted graphs (up to isomorphism; genus does not enter), star graphs d = 3..5, r = 1..3"
        ),
    )
}

fn bound_checks(t: &mut Tally, tag: &str, rep: &QSequenceReport) {
    t.expect(rep.nr <= rep.br, || format!("{tag}: nr > br"));
    t.expect(rep.br as u64 <= rep.p_g + 1, || format!("{tag}: br > p_g + 1"));
    t.expect(rep.p_g >= binom(rep.nr as i64, 2), || format!("{tag}: p_g < binom(nr, 2)"));
}

fn criterion_6(runs: &Runs) -> CriterionResult {
    let mut t = Tally::new();
    for run in &runs.all {
        let tag = format!("{} over {}", run.family, run.field);
        bound_checks(&mut t, &tag, &run.report);
        if let FamilySpec::Blowup { d, .. } = run.family {
            let g = ((d - 1) * (d - 2) / 2) as i64;
            let bound = upper_bracket(Ratio::new(2 * g - 2, d as i64)) + 1;
            t.expect(run.report.br as i64 <= bound, || format!("{tag}: br > [[(2g-2)/d]] + 1"));
        }
    }
    for d in 3..=10u64 {
        let b = CurveModel::plane(d).and_then(|c| br_bounds(&c, BoundCase::Negative));
        match b {
            Ok(b) => t.eq(&format!("plane d={d}: gonality bound"), b.bound_theorem_main, d as i64 - 1),
            Err(e) => t.error("plane", e),
        }
    }
    for g in 2..=12u64 {
        match CurveModel::hyperelliptic(g, 1).and_then(|c| br_bounds(&c, BoundCase::Negative)) {
            Ok(b) => t.eq(&format!("hyperelliptic g={g}: gonality bound"), b.bound_theorem_main, g as i64 + 1),
            Err(e) => t.error("hyperelliptic", e),
        }
    }
    match CurveModel::complete_intersection(vec![2, 2]).and_then(|c| br_bounds(&c, BoundCase::Negative)) {
        Ok(b) => {
            t.eq("CI(2,2): bound", b.complete_intersection_bound, Some(2));
            t.eq("CI(2,2): a + 2", b.nr_m_prediction, 2);
        }
        Err(e) => t.error("CI(2,2)", e),
    }
    t.finish(
        6,
        "bound invariants",
        format!("{} family runs, plane d = 3..10, hyperelliptic g = 2..12, CI(2,2)", runs.all.len()),
    )
}

fn criterion_7(opts: &AcceptOptions, runs: &Runs) -> CriterionResult {
    let mut t = Tally::new();
    for run in &runs.all {
        let rep = &run.report;
        let q: Vec<i64> = rep.q.iter().map(|&v| v as i64).collect();
        for n in 1..rep.n_max() as usize {
            t.eq(
                &format!("{}: second difference at n={n}", run.family),
                q[n + 1] + q[n - 1] - 2 * q[n],
                rep.length(n as u32) as i64,
            );
        }
    }
    let mut models: Vec<CurveModel> = (1..=10).filter_map(|d| CurveModel::plane(d).ok()).collect();
    for g in 2..=10 {
        for b in 1..=4 {
            models.extend(CurveModel::hyperelliptic(g, b).ok());
        }
    }
    for c in &models {
        for n in 0..=20u64 {
            match c.h0_h1(n) {
                Ok((h0, h1)) => t.eq(
                    &format!("{c:?}: Riemann-Roch at n={n}"),
                    h0 as i64 - h1 as i64,
                    (n * c.degree()) as i64 - c.genus() as i64 + 1,
                ),
                Err(e) => t.error(&format!("{c:?}"), e),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut graphs = 0;
    for d in 3..=5u32 {
        for r in 1..=3u32 {
            let Ok(s) = build_star_graph(d, r) else {
                t.error("star", format!("d={d}, r={r}"));
                continue;
            };
            graphs += 1;
            let g = &s.graph;
            for _ in 0..1000 {
                let mut draw = || loop {
                    let c: Vec<i64> = (0..g.len()).map(|_| rng.random_range(0..=5)).collect();
                    if c.iter().any(|&x| x > 0) {
                        break g.cycle(c).expect("right length");
                    }
                };
                let (a, b) = (draw(), draw());
                let lhs = a.add(&b).and_then(|ab| g.pa(&ab));
                let rhs = (|| Ok::<_, crate::Error>(g.pa(&a)? + g.pa(&b)? + g.intersect(&a, &b)? - 1))();
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => t.expect(l == r, || format!("star d={d}, r={r}: p_a additivity {l} != {r}")),
                    (Err(e), _) | (_, Err(e)) => t.error("p_a", e),
                }
            }
        }
    }
    t.finish(
        7,
        "identity suite",
        format!(
            "second differences on {} reports, Riemann-Roch on {} curve models, p_a additivity on 1000 pairs x {graphs} graphs",
            runs.all.len(),
            models.len()
        ),
    )
}

/// Runs all criteria in order, calling `progress` after each.
pub fn run_acceptance(opts: &AcceptOptions, mut progress: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let mut runs = Runs::default();
    let mut out = Vec::new();
    let mut push = |r: CriterionResult| {
        progress(&r);
        out.push(r);
    };
    push(criterion_1(opts, &mut runs));
    push(criterion_2(opts, &mut runs));
    push(criterion_3(opts, &mut runs));
    push(criterion_4(opts));
    push(criterion_5(opts));
    push(criterion_6(&runs));
    push(criterion_7(opts, &runs));
    out
}

/// A single criterion, for running them separately. Criteria 6 and 7 re-run the families
/// they inspect.
pub fn run_criterion(number: u32, opts: &AcceptOptions) -> Option<CriterionResult> {
    let mut runs = Runs::default();
    Some(match number {
        1 => criterion_1(opts, &mut runs),
        2 => criterion_2(opts, &mut runs),
        3 => criterion_3(opts, &mut runs),
        4 => criterion_4(opts),
        5 => criterion_5(opts),
        6 | 7 => {
            criterion_1(opts, &mut runs);
            criterion_2(opts, &mut runs);
            criterion_3(opts, &mut runs);
            if number == 6 {
                criterion_6(&runs)
            } else {
                criterion_7(opts, &runs)
            }
        }
        _ => return None,
    })
}
