//! Exact minimum cuts on grid networks.
//!
//! Cells are split into sources (forced into the set), sinks (forced out) and
//! free cells. The network has one undirected arc per adjacent pair with the
//! perimeter weight as capacity; sources and sinks are contracted into the two
//! terminals. Capacities are scaled by a power of two and rounded so that the
//! largest one is close to 2^52, then the max flow runs in exact integer
//! arithmetic (Dinic with current-arc pointers on the implicit grid).

use crate::error::{invalid, LabError, Result};
use crate::grid::{CellSet, GridSpace};

/// Largest number of free cells accepted by [`enumerate_oracle`].
pub const ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct CutProblem<'a> {
    space: &'a GridSpace,
    sources: CellSet,
    sinks: CellSet,
    free: CellSet,
}

impl<'a> CutProblem<'a> {
    /// Sources, sinks and free cells must be pairwise disjoint and cover the grid.
    pub fn new(space: &'a GridSpace, sources: CellSet, sinks: CellSet, free: CellSet) -> Result<Self> {
        for (name, s) in [("sources", &sources), ("sinks", &sinks), ("free", &free)] {
            if s.layout() != space.layout() {
                return Err(invalid(format!("{name} belong to a different grid")));
            }
        }
        if !sources.is_disjoint(&sinks) || !sources.is_disjoint(&free) || !sinks.is_disjoint(&free) {
            return Err(invalid("sources, sinks and free cells must be disjoint"));
        }
        if sources.union(&sinks).union(&free).count() != space.len() {
            return Err(invalid("sources, sinks and free cells must cover every cell"));
        }
        Ok(CutProblem {
            space,
            sources,
            sinks,
            free,
        })
    }

    /// Every cell that is neither a source nor a sink is free.
    pub fn with_free_rest(space: &'a GridSpace, sources: CellSet, sinks: CellSet) -> Result<Self> {
        if sources.layout() != space.layout() || sinks.layout() != space.layout() {
            return Err(invalid("terminal sets belong to a different grid"));
        }
        let free = sources.union(&sinks).complement();
        Self::new(space, sources, sinks, free)
    }

    pub fn space(&self) -> &GridSpace {
        self.space
    }

    pub fn sources(&self) -> &CellSet {
        &self.sources
    }

    pub fn sinks(&self) -> &CellSet {
        &self.sinks
    }

    pub fn free(&self) -> &CellSet {
        &self.free
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    /// Total weight of the edges leaving `set`.
    pub value: f64,
    /// Source side of the cut.
    pub set: CellSet,
    /// Edges `(inside, outside)` crossing the cut, in grid edge order.
    pub saturated_edges: Vec<(usize, usize)>,
    /// Value of the feasible flow found by the solver, in original units.
    pub flow_value: f64,
    /// Whether the integer flow equals the integer cut capacity exactly.
    pub certified: bool,
}

/// Power-of-two factor bringing the largest capacity just below 2^52.
fn capacity_scale(max_cap: f64) -> f64 {
    if max_cap <= 0.0 {
        return 1.0;
    }
    let e = max_cap.log2().ceil() as i32;
    2f64.powi(52 - e)
}

fn scaled(cap: f64, scale: f64) -> i64 {
    ((cap * scale).round() as i64).max(1)
}

/// `(value, crossing edges)` of `set` over the whole grid.
fn cut_of(space: &GridSpace, set: &CellSet) -> (f64, Vec<(usize, usize)>) {
    let s = set.as_slice();
    let mut value = 0.0;
    let mut edges = Vec::new();
    space.for_each_edge(|a, b, w| {
        if s[a] != s[b] {
            value += w;
            edges.push(if s[a] { (a, b) } else { (b, a) });
        }
    });
    (value, edges)
}

const UNSEEN: u32 = u32::MAX;

/// Free cells of a bounding box, with their terminal and neighbour capacities.
struct Network {
    /// Box origin and size in cells.
    x0: usize,
    y0: usize,
    width: usize,
    height: usize,
    /// Residual capacity of the arc leaving local cell `c` in direction `d`
    /// (0: -x, 1: +x, 2: -y, 3: +y); zero when the neighbour is not free.
    res: Vec<i64>,
    from_source: Vec<i64>,
    to_sink: Vec<i64>,
    free: Vec<bool>,
}

impl Network {
    fn neighbor(&self, c: usize, d: usize) -> Option<usize> {
        let x = c % self.width;
        let y = c / self.width;
        match d {
            0 if x > 0 => Some(c - 1),
            1 if x + 1 < self.width => Some(c + 1),
            2 if y > 0 => Some(c - self.width),
            3 if y + 1 < self.height => Some(c + self.width),
            _ => None,
        }
    }

    fn global(&self, space: &GridSpace, c: usize) -> usize {
        space.index(self.x0 + c % self.width, self.y0 + c / self.width)
    }

    fn build(problem: &CutProblem<'_>, scale: f64, bbox: [usize; 4]) -> Network {
        let space = problem.space;
        let [x0, x1, y0, y1] = bbox;
        let width = x1 - x0 + 1;
        let height = y1 - y0 + 1;
        let len = width * height;
        let mut net = Network {
            x0,
            y0,
            width,
            height,
            res: vec![0; 4 * len],
            from_source: vec![0; len],
            to_sink: vec![0; len],
            free: vec![false; len],
        };
        for c in 0..len {
            let g = net.global(space, c);
            net.free[c] = problem.free.contains(g);
        }
        for c in 0..len {
            if !net.free[c] {
                continue;
            }
            let g = net.global(space, c);
            for d in 0..4 {
                // every neighbour of a free cell lies inside the box
                let Some(v) = net.neighbor(c, d) else { continue };
                let gv = net.global(space, v);
                let cap = scaled(space.edge_weight(g, gv), scale);
                if net.free[v] {
                    net.res[4 * c + d] = cap;
                } else if problem.sources.contains(gv) {
                    net.from_source[c] += cap;
                } else {
                    net.to_sink[c] += cap;
                }
            }
        }
        net
    }

    /// Layered BFS from the source terminal; returns the level of the last layer
    /// before the sink, or `None` when the sink is unreachable.
    fn bfs(&self, level: &mut [u32], queue: &mut Vec<usize>) -> Option<u32> {
        level.fill(UNSEEN);
        queue.clear();
        for c in 0..self.free.len() {
            if self.free[c] && self.from_source[c] > 0 {
                level[c] = 0;
                queue.push(c);
            }
        }
        let mut head = 0;
        let mut sink_level = None;
        while head < queue.len() {
            let c = queue[head];
            head += 1;
            let lc = level[c];
            if let Some(t) = sink_level {
                if lc >= t {
                    continue;
                }
            }
            if self.to_sink[c] > 0 && sink_level.is_none() {
                sink_level = Some(lc);
                continue;
            }
            for d in 0..4 {
                if self.res[4 * c + d] <= 0 {
                    continue;
                }
                let v = self.neighbor(c, d).expect("positive arc has a head");
                if level[v] == UNSEEN {
                    level[v] = lc + 1;
                    queue.push(v);
                }
            }
        }
        sink_level
    }

    /// Blocking flow on the level graph.
    fn blocking_flow(&mut self, level: &mut [u32], starts: &[usize], sink_level: u32) -> i128 {
        const DEAD: u32 = UNSEEN - 1;
        let mut arc = vec![0u8; self.free.len()];
        let mut total: i128 = 0;
        let mut stack: Vec<usize> = Vec::new();
        for &s in starts {
            if level[s] != 0 {
                continue;
            }
            while self.from_source[s] > 0 && level[s] == 0 {
                stack.clear();
                stack.push(s);
                loop {
                    let Some(&u) = stack.last() else { break };
                    if level[u] == sink_level {
                        if self.to_sink[u] > 0 {
                            total += i128::from(self.augment(&stack, &mut arc));
                            // retreat to the tail of the first saturated arc
                            let mut keep = stack.len();
                            if self.from_source[s] == 0 {
                                keep = 0;
                            } else {
                                for (i, &w) in stack.iter().enumerate() {
                                    let saturated = if i + 1 == stack.len() {
                                        self.to_sink[w] == 0
                                    } else {
                                        self.res[4 * w + arc[w] as usize] == 0
                                    };
                                    if saturated {
                                        keep = i + 1;
                                        break;
                                    }
                                }
                            }
                            stack.truncate(keep);
                            if keep == 0 {
                                break;
                            }
                            continue;
                        }
                        level[u] = DEAD;
                        stack.pop();
                        continue;
                    }
                    let mut advanced = false;
                    while arc[u] < 4 {
                        let d = arc[u] as usize;
                        if self.res[4 * u + d] > 0 {
                            let v = self.neighbor(u, d).expect("positive arc has a head");
                            if level[v] == level[u] + 1 {
                                stack.push(v);
                                advanced = true;
                                break;
                            }
                        }
                        arc[u] += 1;
                    }
                    if !advanced {
                        level[u] = DEAD;
                        stack.pop();
                    }
                }
            }
        }
        total
    }

    fn augment(&mut self, path: &[usize], arc: &mut [u8]) -> i64 {
        let first = path[0];
        let last = path[path.len() - 1];
        let mut bottleneck = self.from_source[first].min(self.to_sink[last]);
        for &w in &path[..path.len() - 1] {
            bottleneck = bottleneck.min(self.res[4 * w + arc[w] as usize]);
        }
        self.from_source[first] -= bottleneck;
        self.to_sink[last] -= bottleneck;
        for &w in &path[..path.len() - 1] {
            let d = arc[w] as usize;
            let v = self.neighbor(w, d).expect("path arc has a head");
            self.res[4 * w + d] -= bottleneck;
            self.res[4 * v + (d ^ 1)] += bottleneck;
        }
        bottleneck
    }

    /// Free cells reachable from the source terminal in the residual network.
    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.free.len()];
        let mut queue = Vec::new();
        for c in 0..self.free.len() {
            if self.free[c] && self.from_source[c] > 0 {
                seen[c] = true;
                queue.push(c);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let c = queue[head];
            head += 1;
            for d in 0..4 {
                if self.res[4 * c + d] > 0 {
                    let v = self.neighbor(c, d).expect("positive arc has a head");
                    if !seen[v] {
                        seen[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        seen
    }
}

/// Minimum cut with the minimal minimizer as source side.
pub fn min_cut(problem: &CutProblem<'_>) -> Result<CutResult> {
    let space = problem.space;
    if problem.sources.is_empty() {
        return Ok(CutResult {
            value: 0.0,
            set: CellSet::empty(space),
            saturated_edges: Vec::new(),
            flow_value: 0.0,
            certified: true,
        });
    }

    // scale from every edge that can be cut
    let src = problem.sources.as_slice();
    let snk = problem.sinks.as_slice();
    let fr = problem.free.as_slice();
    let mut max_cap: f64 = 0.0;
    let mut bbox = [usize::MAX, 0, usize::MAX, 0];
    space.for_each_edge(|a, b, w| {
        if fr[a] || fr[b] || (src[a] && snk[b]) || (snk[a] && src[b]) {
            max_cap = max_cap.max(w);
        }
    });
    let scale = capacity_scale(max_cap);

    let mut direct: i128 = 0;
    space.for_each_edge(|a, b, w| {
        if (src[a] && snk[b]) || (snk[a] && src[b]) {
            direct += i128::from(scaled(w, scale));
        }
    });
    for c in problem.free.iter() {
        let [x, y] = space.coords(c);
        bbox[0] = bbox[0].min(x);
        bbox[1] = bbox[1].max(x);
        bbox[2] = bbox[2].min(y);
        bbox[3] = bbox[3].max(y);
    }

    let mut set = problem.sources.clone();
    let mut flow: i128 = 0;
    if bbox[0] != usize::MAX {
        let n = space.resolution();
        let ymax = if space.dim() == 1 { 0 } else { n - 1 };
        let bbox = [
            bbox[0].saturating_sub(1),
            (bbox[1] + 1).min(n - 1),
            bbox[2].saturating_sub(1),
            (bbox[3] + 1).min(ymax),
        ];
        let mut net = Network::build(problem, scale, bbox);
        let mut level = vec![UNSEEN; net.free.len()];
        let mut queue = Vec::new();
        while let Some(sink_level) = net.bfs(&mut level, &mut queue) {
            let starts: Vec<usize> = queue.iter().copied().take_while(|&c| level[c] == 0).collect();
            let pushed = net.blocking_flow(&mut level, &starts, sink_level);
            if pushed == 0 {
                break;
            }
            flow += pushed;
        }
        for (c, reached) in net.reachable().into_iter().enumerate() {
            if reached {
                set.insert(net.global(space, c));
            }
        }
    }

    let (value, saturated_edges) = cut_of(space, &set);
    let cut_int: i128 = saturated_edges
        .iter()
        .map(|&(a, b)| i128::from(scaled(space.edge_weight(a, b), scale)))
        .sum();
    let total_flow = flow + direct;
    Ok(CutResult {
        value,
        set,
        saturated_edges,
        flow_value: total_flow as f64 / scale,
        certified: total_flow == cut_int,
    })
}

/// Exhaustive reference solver over all subsets of the free cells.
///
/// Ties in value (relative 1e-12) are broken by smaller cardinality, then by
/// the membership vector in cell order with absent before present.
pub fn enumerate_oracle(problem: &CutProblem<'_>) -> Result<CutResult> {
    let space = problem.space;
    let free: Vec<usize> = problem.free.iter().collect();
    if free.len() > ORACLE_LIMIT {
        return Err(LabError::Unsupported(format!(
            "{} free cells exceed the oracle limit of {ORACLE_LIMIT}",
            free.len()
        )));
    }
    if problem.sources.is_empty() {
        return min_cut(problem);
    }
    let mut bit = vec![usize::MAX; space.len()];
    for (i, &c) in free.iter().enumerate() {
        bit[c] = i;
    }
    // endpoint: Ok(bit) for free cells, Err(inside) for terminals
    let side = |c: usize| -> std::result::Result<usize, bool> {
        if bit[c] != usize::MAX {
            Ok(bit[c])
        } else {
            Err(problem.sources.contains(c))
        }
    };
    let mut constant = 0.0;
    let mut edges = Vec::new();
    space.for_each_edge(|a, b, w| match (side(a), side(b)) {
        (Err(x), Err(y)) => {
            if x != y {
                constant += w;
            }
        }
        (sa, sb) => edges.push((sa, sb, w)),
    });
    let inside = |mask: u32, s: std::result::Result<usize, bool>| match s {
        Ok(i) => mask >> i & 1 == 1,
        Err(x) => x,
    };
    let better = |mask: u32, value: f64, best: u32, best_value: f64| -> bool {
        let tol = 1e-12 * best_value.abs().max(value.abs());
        if value < best_value - tol {
            return true;
        }
        if value > best_value + tol {
            return false;
        }
        let (ca, cb) = (mask.count_ones(), best.count_ones());
        if ca != cb {
            return ca < cb;
        }
        let diff = mask ^ best;
        diff != 0 && mask >> diff.trailing_zeros() & 1 == 0
    };
    let mut best = 0u32;
    let mut best_value = f64::INFINITY;
    for mask in 0..(1u32 << free.len()) {
        let mut value = constant;
        for &(a, b, w) in &edges {
            if inside(mask, a) != inside(mask, b) {
                value += w;
            }
        }
        if best_value.is_infinite() || better(mask, value, best, best_value) {
            best = mask;
            best_value = value;
        }
    }
    let mut set = problem.sources.clone();
    for (i, &c) in free.iter().enumerate() {
        if best >> i & 1 == 1 {
            set.insert(c);
        }
    }
    let (value, saturated_edges) = cut_of(space, &set);
    Ok(CutResult {
        value,
        set,
        saturated_edges,
        flow_value: value,
        certified: true,
    })
}
