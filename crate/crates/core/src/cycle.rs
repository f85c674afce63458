//! Cycles on resolution graphs: the intersection pairing, fundamental cycles, arithmetic
//! genus, and the star graphs resolving `(L) + m^(r+1)` on a cone over a plane curve.

use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use num_rational::Ratio;

use crate::curve::upper_bracket;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::qseq::Check;

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// Default cap on the number of cycles visited when enumerating computation sequences.
pub const SEQUENCE_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    pub self_int: i64,
}

/// A weighted graph with intersection matrix `M[i][i] = E_i^2`, `M[i][j] = E_i E_j`.
#[derive(Clone, Debug)]
pub struct DualGraph {
    uid: u64,
    vertices: Vec<Vertex>,
    matrix: Vec<Vec<i64>>,
}

impl PartialEq for DualGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.matrix == other.matrix
    }
}

/// Integer coefficients on the vertices of one graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    graph: u64,
    coeffs: Vec<i64>,
}

impl Cycle {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Effective and nonzero.
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && !self.is_zero()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect()
    }

    pub fn add(&self, other: &Cycle) -> Result<Cycle> {
        if self.graph != other.graph {
            return Err(Error::Precondition("cycles live on different graphs".into()));
        }
        Ok(Cycle {
            graph: self.graph,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> Cycle {
        Cycle {
            graph: self.graph,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// `self <= other` coefficientwise.
    pub fn le(&self, other: &Cycle) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }
}

impl DualGraph {
    /// `edges` are `(i, j, multiplicity)` with `i != j`; repeated pairs accumulate.
    pub fn new(vertices: Vec<Vertex>, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::Precondition("graph has no vertices".into()));
        }
        let mut seen = HashSet::new();
        for v in &vertices {
            if v.self_int > -1 {
                return Err(Error::Precondition(format!("vertex {} has self-intersection {} > -1", v.id, v.self_int)));
            }
            if !seen.insert(v.id.as_str()) {
                return Err(Error::Precondition(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut matrix = vec![vec![0i64; n]; n];
        for (i, v) in vertices.iter().enumerate() {
            matrix[i][i] = v.self_int;
        }
        for &(i, j, m) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::Precondition(format!("bad edge ({i}, {j})")));
            }
            matrix[i][j] += m as i64;
            matrix[j][i] += m as i64;
        }
        Ok(DualGraph {
            uid: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
            vertices,
            matrix,
        })
    }

    /// Graph with all genera zero from a matrix (diagonal = self-intersections).
    pub fn from_matrix(matrix: &[Vec<i64>]) -> Result<Self> {
        let n = matrix.len();
        let vertices = (0..n)
            .map(|i| Vertex {
                id: format!("v{i}"),
                genus: 0,
                self_int: matrix[i][i],
            })
            .collect();
        let mut edges = Vec::new();
        for (i, row) in matrix.iter().enumerate() {
            for (j, &m) in row.iter().enumerate().skip(i + 1) {
                if m < 0 || m != matrix[j][i] {
                    return Err(Error::Precondition("off-diagonal entries must be symmetric and >= 0".into()));
                }
                if m > 0 {
                    edges.push((i, j, m as u32));
                }
            }
        }
        DualGraph::new(vertices, &edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// `(i, j, E_i E_j)` for `i < j` with a nonzero pairing.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.matrix[i][j] != 0 {
                    out.push((i, j, self.matrix[i][j] as u32));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| j != i && self.matrix[i][j] != 0)
    }

    pub fn cycle(&self, coeffs: Vec<i64>) -> Result<Cycle> {
        if coeffs.len() != self.len() {
            return Err(Error::Precondition(format!(
                "cycle has {} coefficients, graph has {} vertices",
                coeffs.len(),
                self.len()
            )));
        }
        Ok(Cycle { graph: self.uid, coeffs })
    }

    pub fn zero_cycle(&self) -> Cycle {
        Cycle {
            graph: self.uid,
            coeffs: vec![0; self.len()],
        }
    }

    pub fn vertex_cycle(&self, i: usize) -> Cycle {
        let mut c = self.zero_cycle();
        c.coeffs[i] = 1;
        c
    }

    /// The reduced cycle `sum E_i` over the given vertices.
    pub fn reduced_cycle(&self, vs: &[usize]) -> Cycle {
        let mut c = self.zero_cycle();
        for &i in vs {
            c.coeffs[i] = 1;
        }
        c
    }

    fn own(&self, y: &Cycle) -> Result<()> {
        if y.graph == self.uid {
            Ok(())
        } else {
            Err(Error::Precondition("cycle belongs to a different graph".into()))
        }
    }

    /// `Y E_i`.
    pub fn dot_vertex(&self, y: &Cycle, i: usize) -> i64 {
        y.coeffs.iter().zip(&self.matrix[i]).map(|(a, m)| a * m).sum()
    }

    /// `(Y E_0, ..., Y E_n)`.
    pub fn dots(&self, y: &Cycle) -> Vec<i64> {
        (0..self.len()).map(|i| self.dot_vertex(y, i)).collect()
    }

    pub fn intersect(&self, y: &Cycle, w: &Cycle) -> Result<i64> {
        self.own(y)?;
        self.own(w)?;
        Ok(w.coeffs.iter().enumerate().map(|(i, c)| c * self.dot_vertex(y, i)).sum())
    }

    /// `K E_i = -E_i^2 + 2 g_i - 2`, the adjunction value making `p_a(E_i) = g_i`.
    pub fn k_dot_vertex(&self, i: usize) -> i64 {
        -self.matrix[i][i] + 2 * self.vertices[i].genus as i64 - 2
    }

    /// `p_a(Y) = (Y^2 + K Y)/2 + 1`.
    pub fn pa(&self, y: &Cycle) -> Result<i64> {
        self.own(y)?;
        let y2 = self.intersect(y, y)?;
        let ky: i64 = y.coeffs.iter().enumerate().map(|(i, c)| c * self.k_dot_vertex(i)).sum();
        debug_assert!((y2 + ky) % 2 == 0);
        Ok((y2 + ky) / 2 + 1)
    }

    pub fn is_anti_nef(&self, y: &Cycle) -> bool {
        (0..self.len()).all(|i| self.dot_vertex(y, i) <= 0)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in self.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Exact test through the signs of the leading principal minors.
    pub fn is_negative_definite(&self) -> bool {
        leading_minors(&self.matrix)
            .iter()
            .enumerate()
            .all(|(k, m)| if k % 2 == 0 { *m < 0 } else { *m > 0 })
    }

    /// Connected and negative definite.
    pub fn require_resolution_graph(&self) -> Result<()> {
        if !self.is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// The induced subgraph on `vs` (in that order).
    pub fn induced(&self, vs: &[usize]) -> Result<DualGraph> {
        let vertices = vs.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut edges = Vec::new();
        for (a, &i) in vs.iter().enumerate() {
            for (b, &j) in vs.iter().enumerate().skip(a + 1) {
                if self.matrix[i][j] != 0 {
                    edges.push((a, b, self.matrix[i][j] as u32));
                }
            }
        }
        DualGraph::new(vertices, &edges)
    }

    /// Connected component of `start` inside the vertex set `allowed`.
    fn component_within(&self, start: usize, allowed: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(i) = stack.pop() {
            out.push(i);
            for j in self.neighbors(i) {
                if allowed[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Leading principal minors by fraction-free elimination (exact in `i128`).
pub fn leading_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            // a vanishing pivot means the k-th leading minor is zero; later ones are not needed
            out.push(0);
            out.extend(std::iter::repeat_n(0, n - k - 1));
            return out;
        }
        out.push(a[k][k]);
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    out
}

/// Fundamental cycle and the computation sequence that produced it.
#[derive(Clone, Debug)]
pub struct Laufer {
    pub cycle: Cycle,
    /// `j_0, j_1, ...`: `Y_1 = E_(j_0)` and `Y_(i+1) = Y_i + E_(j_i)`.
    pub sequence: Vec<usize>,
}

/// Start at `E_0`, then keep adding some `E_j` with `Y E_j > 0` until `Y` is anti-nef.
pub fn laufer_fundamental_cycle(g: &DualGraph) -> Result<Laufer> {
    g.require_resolution_graph()?;
    let mut y = g.vertex_cycle(0);
    let mut dots = g.dots(&y);
    let mut sequence = vec![0];
    while let Some(j) = dots.iter().position(|&d| d > 0) {
        y.coeffs[j] += 1;
        for (i, d) in dots.iter_mut().enumerate() {
            *d += g.matrix[i][j];
        }
        sequence.push(j);
    }
    Ok(Laufer { cycle: y, sequence })
}

/// Replays a computation sequence, checking `Y_i E_(j_i) > 0` at each step.
pub fn is_computation_sequence(g: &DualGraph, seq: &[usize]) -> bool {
    let Some(&first) = seq.first() else { return false };
    let mut y = g.vertex_cycle(first);
    for &j in &seq[1..] {
        if g.dot_vertex(&y, j) <= 0 {
            return false;
        }
        y.coeffs[j] += 1;
    }
    g.is_anti_nef(&y)
}

/// Coefficientwise minimum of all nonzero anti-nef cycles with `0 <= Y_i <= bound[i]`.
pub fn brute_force_minimal_anti_nef(g: &DualGraph, bound: &[i64], exec: Exec) -> Option<Cycle> {
    let n = g.len();
    assert_eq!(bound.len(), n);
    let firsts: Vec<i64> = (0..=bound[0]).collect();
    let partial = par::map(exec, &firsts, |&c0| {
        let mut y = vec![0i64; n];
        y[0] = c0;
        let mut dots: Vec<i64> = (0..n).map(|i| g.matrix[i][0] * c0).collect();
        let mut best: Option<Vec<i64>> = None;
        loop {
            if dots.iter().all(|&d| d <= 0) && y.iter().any(|&c| c != 0) {
                best = Some(match best {
                    None => y.clone(),
                    Some(b) => b.iter().zip(&y).map(|(a, c)| *a.min(c)).collect(),
                });
            }
            // odometer over coordinates 1..n, keeping Y E_i up to date
            let mut k = 1;
            loop {
                if k == n {
                    return best;
                }
                if y[k] < bound[k] {
                    y[k] += 1;
                    for (i, d) in dots.iter_mut().enumerate() {
                        *d += g.matrix[i][k];
                    }
                    break;
                }
                for (i, d) in dots.iter_mut().enumerate() {
                    *d -= g.matrix[i][k] * y[k];
                }
                y[k] = 0;
                k += 1;
            }
        }
    });
    let best = partial.into_iter().flatten().reduce(|a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect())?;
    Some(Cycle {
        graph: g.uid,
        coeffs: best,
    })
}

/// Data attached to an anti-nef cycle `Z` with `Z E_0 = 0`.
#[derive(Clone, Debug)]
pub struct ZPerp {
    /// Vertices with `Z E_i = 0`.
    pub z_perp: Vec<usize>,
    /// The connected component of `Z^perp` containing `E_0`.
    pub b: Vec<usize>,
    pub z_b: Cycle,
    /// Vertices outside `B` meeting `B`.
    pub attachments: Vec<usize>,
    pub minus_zb_e0: i64,
    pub minus_zx_squared: i64,
    /// Least integer `> (2g - 2)/(-Z_B E_0)`.
    pub threshold: i64,
    pub checks: Vec<Check>,
}

pub fn z_perp_and_b(g: &DualGraph, z: &Cycle, e0: usize) -> Result<ZPerp> {
    g.own(z)?;
    g.require_resolution_graph()?;
    if !g.is_anti_nef(z) || !z.is_positive() {
        return Err(Error::Precondition("Z must be a positive anti-nef cycle".into()));
    }
    let ze0 = g.dot_vertex(z, e0);
    if ze0 != 0 {
        return Err(Error::Precondition(format!(
            "Z E_0 = {ze0} < 0: this is the negative case, where the orthogonal bound does not apply"
        )));
    }
    let dots = g.dots(z);
    let z_perp: Vec<usize> = (0..g.len()).filter(|&i| dots[i] == 0).collect();
    let allowed: Vec<bool> = dots.iter().map(|&d| d == 0).collect();
    let b = g.component_within(e0, &allowed);
    let in_b: Vec<bool> = (0..g.len()).map(|i| b.contains(&i)).collect();

    let mut order = vec![b.iter().position(|&i| i == e0).expect("e0 in B")];
    order.extend((0..b.len()).filter(|&k| b[k] != e0));
    let sub = g.induced(&order.iter().map(|&k| b[k]).collect::<Vec<_>>())?;
    let zb_sub = laufer_fundamental_cycle(&sub)?.cycle;
    let mut z_b = g.zero_cycle();
    for (pos, &k) in order.iter().enumerate() {
        z_b.coeffs[b[k]] = zb_sub.coeffs[pos];
    }

    let attachments: Vec<usize> = (0..g.len())
        .filter(|&i| !in_b[i] && g.neighbors(i).any(|j| in_b[j]))
        .collect();
    let zx = laufer_fundamental_cycle(g)?.cycle;
    let minus_zb_e0 = -g.dot_vertex(&z_b, e0);
    let minus_zx_squared = -g.intersect(&zx, &zx)?;
    let genus = g.vertices[e0].genus as i64;
    if minus_zb_e0 <= 0 {
        return Err(Error::Invariant("Z_B E_0 must be negative".into()));
    }
    let threshold = upper_bracket(Ratio::new(2 * genus - 2, minus_zb_e0));
    let checks = vec![
        Check::new("Z + Z_B anti-nef", g.is_anti_nef(&z.add(&z_b)?)),
        Check::new("Z_B E_i = 1 at attachments", attachments.iter().all(|&i| g.dot_vertex(&z_b, i) == 1)),
        Check::new("-Z_B E_0 >= -Z_X^2", minus_zb_e0 >= minus_zx_squared),
    ];
    Ok(ZPerp {
        z_perp,
        b,
        z_b,
        attachments,
        minus_zb_e0,
        minus_zx_squared,
        threshold,
        checks,
    })
}

/// Result of the vanishing test for `H^1(O_X(D))` on a graph with one non-rational curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingVerdict {
    /// `D E_0 > 2g - 2`.
    pub vanishes: bool,
    pub full: Option<SequenceCheck>,
}

/// Outcome of checking `Y D > 2 p_a(Y) - 2` over all cycles of all computation sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceCheck {
    Done {
        cycles: usize,
        /// Every visited cycle satisfies the inequality.
        all_positive: bool,
        /// Each visited `V` has either `E_0 <= V` and `p_a(V) = g`, or rational support avoiding
        /// `E_0` and `p_a(V) = 0`.
        dichotomy: bool,
    },
    CapExceeded { cap: usize },
}

/// `d_dot[i] = D E_i` for a nef divisor `D`.
pub fn conelike_vanishing(g: &DualGraph, e0: usize, d_dot: &[i64], enumerate_cap: Option<usize>) -> Result<VanishingVerdict> {
    if d_dot.len() != g.len() {
        return Err(Error::Precondition("one intersection number per vertex expected".into()));
    }
    if d_dot.iter().any(|&v| v < 0) {
        return Err(Error::Precondition("D is not nef".into()));
    }
    let genus = g.vertices[e0].genus as i64;
    let vanishes = d_dot[e0] > 2 * genus - 2;
    let full = match enumerate_cap {
        None => None,
        Some(cap) => Some(check_sequence_cycles(g, e0, d_dot, cap)?),
    };
    Ok(VanishingVerdict { vanishes, full })
}

fn check_sequence_cycles(g: &DualGraph, e0: usize, d_dot: &[i64], cap: usize) -> Result<SequenceCheck> {
    g.require_resolution_graph()?;
    let genus = g.vertices[e0].genus as i64;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..g.len() {
        let c = g.vertex_cycle(i);
        if seen.insert(c.coeffs.clone()) {
            queue.push_back(c);
        }
    }
    let mut all_positive = true;
    let mut dichotomy = true;
    while let Some(y) = queue.pop_front() {
        if seen.len() > cap {
            return Ok(SequenceCheck::CapExceeded { cap });
        }
        let pa = g.pa(&y)?;
        let yd: i64 = y.coeffs.iter().zip(d_dot).map(|(a, b)| a * b).sum();
        all_positive &= yd > 2 * pa - 2;
        let through_e0 = y.coeffs[e0] > 0 && pa == genus;
        let rational_tree = y.coeffs[e0] == 0 && pa == 0 && y.support().iter().all(|&i| g.vertices[i].genus == 0);
        dichotomy &= through_e0 || rational_tree;
        let dots = g.dots(&y);
        for (j, &dj) in dots.iter().enumerate() {
            if dj > 0 {
                let mut next = y.clone();
                next.coeffs[j] += 1;
                if seen.insert(next.coeffs.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(SequenceCheck::Done {
        cycles: seen.len(),
        all_positive,
        dichotomy,
    })
}

/// The resolution graph of `(L) + m^(r+1)` on the cone over a plane curve of degree `d`.
#[derive(Clone, Debug)]
pub struct StarGraph {
    pub d: u32,
    pub r: u32,
    pub graph: DualGraph,
    /// The cycle of the ideal.
    pub z_r: Cycle,
    /// Its cohomological cycle.
    pub c_r: Cycle,
    pub checks: Vec<Check>,
}

impl StarGraph {
    /// Index of `E_(i,j)`, `1 <= i <= d`, `1 <= j <= r`.
    pub fn arm(&self, i: u32, j: u32) -> usize {
        arm_index(self.r, i, j)
    }

    pub fn fundamental_cycle(&self) -> Result<Cycle> {
        Ok(laufer_fundamental_cycle(&self.graph)?.cycle)
    }
}

fn arm_index(r: u32, i: u32, j: u32) -> usize {
    1 + ((i - 1) * r + (j - 1)) as usize
}

/// Central curve `E_0` of genus `(d-1)(d-2)/2` with `E_0^2 = -2d`, and `d` arms
/// `E_(i,1) - ... - E_(i,r)` of `(-2)`-curves ending in a `(-1)`-curve.
pub fn build_star_graph(d: u32, r: u32) -> Result<StarGraph> {
    if d < 3 || r < 1 {
        return Err(Error::Usage("star graph needs d >= 3 and r >= 1".into()));
    }
    let mut vertices = vec![Vertex {
        id: "e0".into(),
        genus: (d - 1) * (d - 2) / 2,
        self_int: -2 * d as i64,
    }];
    let mut edges = Vec::new();
    for i in 1..=d {
        for j in 1..=r {
            vertices.push(Vertex {
                id: format!("e{i}_{j}"),
                genus: 0,
                self_int: if j == r { -1 } else { -2 },
            });
            let prev = if j == 1 { 0 } else { arm_index(r, i, j - 1) };
            edges.push((prev, arm_index(r, i, j), 1));
        }
    }
    let graph = DualGraph::new(vertices, &edges)?;
    let mut z = vec![0i64; graph.len()];
    let mut c = vec![0i64; graph.len()];
    z[0] = 1;
    c[0] = d as i64 - 2;
    for i in 1..=d {
        for j in 1..=r {
            z[arm_index(r, i, j)] = j as i64 + 1;
            c[arm_index(r, i, j)] = (d as i64 - 2 - j as i64).max(0);
        }
    }
    let z_r = graph.cycle(z)?;
    let c_r = graph.cycle(c)?;
    let zc = graph.intersect(&z_r, &c_r)?;
    let checks = vec![
        Check::new("Z_r anti-nef", graph.is_anti_nef(&z_r)),
        Check::new("Z_r E_0 = 0", graph.dot_vertex(&z_r, 0) == 0),
        Check::new(
            "Z_r E_(i,r) = -1",
            (1..=d).all(|i| graph.dot_vertex(&z_r, arm_index(r, i, r)) == -1),
        ),
        Check::new("Z_r C_r = 0 iff r >= d - 2", (zc == 0) == (r + 2 >= d)),
    ];
    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Invariant(format!("star graph d={d}, r={r}: {}", bad.name)));
    }
    Ok(StarGraph {
        d,
        r,
        graph,
        z_r,
        c_r,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(weights: &[i64]) -> DualGraph {
        let vs = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Vertex {
                id: format!("v{i}"),
                genus: 0,
                self_int: w,
            })
            .collect();
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i, 1)).collect();
        DualGraph::new(vs, &edges).unwrap()
    }

    #[test]
    fn genus_of_single_curve() {
        let g = DualGraph::new(
            vec![Vertex {
                id: "e".into(),
                genus: 1,
                self_int: -1,
            }],
            &[],
        )
        .unwrap();
        assert_eq!(g.pa(&g.vertex_cycle(0)).unwrap(), 1);
        assert_eq!(laufer_fundamental_cycle(&g).unwrap().cycle.coeffs(), &[1]);
    }

    #[test]
    fn a2_chain() {
        let g = chain(&[-2, -2]);
        let z = laufer_fundamental_cycle(&g).unwrap().cycle;
        assert_eq!(z.coeffs(), &[1, 1]);
        assert_eq!(g.pa(&z).unwrap(), 0);
        assert_eq!(brute_force_minimal_anti_nef(&g, &[6, 6], Exec::Sequential).unwrap(), z);
    }

    #[test]
    fn d4_graph_fundamental_cycle() {
        // central -2 curve with three -2 neighbours: Z = 2 E_0 + E_1 + E_2 + E_3
        let vs = (0..4)
            .map(|i| Vertex {
                id: format!("v{i}"),
                genus: 0,
                self_int: -2,
            })
            .collect();
        let g = DualGraph::new(vs, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        let l = laufer_fundamental_cycle(&g).unwrap();
        assert_eq!(l.cycle.coeffs(), &[2, 1, 1, 1]);
        assert!(is_computation_sequence(&g, &l.sequence));
        assert_eq!(brute_force_minimal_anti_nef(&g, &[6; 4], Exec::Parallel).unwrap(), l.cycle);
    }

    #[test]
    fn minors_and_definiteness() {
        assert_eq!(leading_minors(&[vec![-2, 1], vec![1, -2]]), vec![-2, 3]);
        assert!(chain(&[-2, -2, -2]).is_negative_definite());
        assert!(!chain(&[-1, -1]).is_negative_definite());
        assert!(matches!(laufer_fundamental_cycle(&chain(&[-1, -1])), Err(Error::NotNegativeDefinite)));
        let two = DualGraph::from_matrix(&[vec![-2, 0], vec![0, -2]]).unwrap();
        assert!(matches!(laufer_fundamental_cycle(&two), Err(Error::Disconnected)));
    }

    #[test]
    fn star_d3_r1() {
        let s = build_star_graph(3, 1).unwrap();
        let g = &s.graph;
        assert_eq!(g.dot_vertex(&s.z_r, 0), 0);
        let zx = s.fundamental_cycle().unwrap();
        assert_eq!(zx.coeffs(), &[1, 1, 1, 1]);
        assert_eq!(g.intersect(&zx, &zx).unwrap(), -3);
        assert_eq!(g.pa(&zx).unwrap(), 1);
        let zp = z_perp_and_b(g, &s.z_r, 0).unwrap();
        assert_eq!(zp.b, vec![0]);
        assert_eq!(zp.minus_zb_e0, 6);
        assert_eq!(zp.minus_zx_squared, 3);
        assert_eq!(zp.threshold, 1);
        assert!(zp.checks.iter().all(|c| c.passed));
    }

    #[test]
    fn star_d4_r1_threshold() {
        let s = build_star_graph(4, 1).unwrap();
        let zp = z_perp_and_b(&s.graph, &s.z_r, 0).unwrap();
        assert_eq!(zp.minus_zb_e0, 8);
        assert_eq!(zp.threshold, 1);
        assert_ne!(s.graph.intersect(&s.z_r, &s.c_r).unwrap(), 0);
        let s2 = build_star_graph(4, 2).unwrap();
        assert_eq!(s2.graph.intersect(&s2.z_r, &s2.c_r).unwrap(), 0);
    }

    #[test]
    fn negative_case_is_rejected() {
        let s = build_star_graph(4, 1).unwrap();
        let zx = s.fundamental_cycle().unwrap();
        assert!(matches!(z_perp_and_b(&s.graph, &zx, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn cone_vanishing() {
        for (d, n, expect) in [(3u32, 1i64, true), (3, 2, true), (4, 1, false)] {
            let genus = (d - 1) * (d - 2) / 2;
            let g = DualGraph::new(
                vec![Vertex {
                    id: "e0".into(),
                    genus,
                    self_int: -(d as i64),
                }],
                &[],
            )
            .unwrap();
            let zx = g.vertex_cycle(0);
            let dd: Vec<i64> = g.dots(&zx.scale(-n));
            let v = conelike_vanishing(&g, 0, &dd, Some(SEQUENCE_CAP)).unwrap();
            assert_eq!(v.vanishes, expect);
            if let Some(SequenceCheck::Done { all_positive, dichotomy, .. }) = v.full {
                assert_eq!(all_positive, expect);
                assert!(dichotomy);
            } else {
                panic!("enumeration should finish");
            }
        }
        let g = build_star_graph(4, 1).unwrap().graph;
        let zero = vec![0; g.len()];
        assert!(!conelike_vanishing(&g, 0, &zero, None).unwrap().vanishes);
        assert!(conelike_vanishing(&g, 0, &[-1, 0, 0, 0, 0], None).is_err());
    }

    #[test]
    fn star_sequence_cycles_follow_dichotomy() {
        let s = build_star_graph(4, 2).unwrap();
        let d = s.graph.dots(&s.z_r.scale(-1));
        match conelike_vanishing(&s.graph, 0, &d, Some(SEQUENCE_CAP)).unwrap().full {
            Some(SequenceCheck::Done { dichotomy, .. }) => assert!(dichotomy),
            other => panic!("{other:?}"),
        }
    }
}
