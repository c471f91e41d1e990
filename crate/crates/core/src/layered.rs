//! Layered constraint search for contiguity chains.
//!
//! For a fixed length `c`, the intermediate maps `h_1, ..., h_{c-1}` are
//! unknowns ranging over codomain vertices. Each pair of consecutive layers
//! and each maximal simplex `s` of the domain must satisfy: `h_{i-1}(s) ∪
//! h_i(s)` lies in some maximal simplex of the codomain. A maximal simplex
//! `σ` is viable for a constraint when every participating domain meets it;
//! pruning every domain to the union of viable simplices is exact arc
//! consistency for this constraint shape. Search is MRV backtracking with
//! iterative deepening on `c`.

use std::collections::VecDeque;

use crate::complex::{Complex, VertexId};

/// Bitset domains for all layer variables, stored flat.
#[derive(Clone)]
struct Domains {
    words: usize,
    bits: Vec<u64>,
}

impl Domains {
    fn get(&self, var: usize) -> &[u64] {
        &self.bits[var * self.words..(var + 1) * self.words]
    }

    fn get_mut(&mut self, var: usize) -> &mut [u64] {
        &mut self.bits[var * self.words..(var + 1) * self.words]
    }

    fn count(&self, var: usize) -> u32 {
        self.get(var).iter().map(|w| w.count_ones()).sum()
    }

    fn values(&self, var: usize) -> impl Iterator<Item = usize> + '_ {
        self.get(var).iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b)
        })
    }

    fn set_single(&mut self, var: usize, value: usize) {
        let d = self.get_mut(var);
        d.fill(0);
        d[value / 64] |= 1 << (value % 64);
    }
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

struct Problem<'a> {
    dom: &'a Complex,
    /// Maximal simplices of the codomain as bitsets.
    sigmas: Vec<Vec<u64>>,
    words: usize,
    cod_n: usize,
    n: usize,
    c: usize,
    /// Free variables in tie-breaking order for branching.
    scan: Vec<usize>,
}

impl Problem<'_> {
    /// Variable index of `(layer, vertex)`; layers `0..=c`.
    fn var(&self, layer: usize, v: usize) -> usize {
        layer * self.n + v
    }

    fn constraint_vars(&self, step: usize, s: usize, out: &mut Vec<usize>) {
        out.clear();
        for v in self.dom.maximal_simplices()[s].vertices() {
            out.push(self.var(step - 1, v.idx()));
            out.push(self.var(step, v.idx()));
        }
    }

    /// Constraints touching a variable: steps `layer` and `layer + 1`.
    fn constraints_of(&self, var: usize, out: &mut Vec<(usize, usize)>) {
        let (layer, v) = (var / self.n, var % self.n);
        for &s in self.dom.star_of(VertexId::from(v)) {
            if layer >= 1 {
                out.push((layer, s as usize));
            }
            if layer < self.c {
                out.push((layer + 1, s as usize));
            }
        }
    }

    /// Propagates to a fixpoint. Returns false on a wipe-out.
    fn propagate(&self, d: &mut Domains, queue: &mut VecDeque<(usize, usize)>, queued: &mut [bool]) -> bool {
        let nmax = self.dom.maximal_simplices().len();
        let mut vars = Vec::new();
        let mut union = vec![0u64; self.words];
        let mut touched = Vec::new();
        while let Some((step, s)) = queue.pop_front() {
            queued[step * nmax + s] = false;
            self.constraint_vars(step, s, &mut vars);
            union.fill(0);
            for sigma in &self.sigmas {
                if vars.iter().all(|&x| intersects(d.get(x), sigma)) {
                    for (u, w) in union.iter_mut().zip(sigma) {
                        *u |= w;
                    }
                }
            }
            for &x in &vars {
                let dx = d.get_mut(x);
                let mut changed = false;
                let mut empty = true;
                for (a, u) in dx.iter_mut().zip(&union) {
                    let na = *a & u;
                    changed |= na != *a;
                    empty &= na == 0;
                    *a = na;
                }
                if empty {
                    queue.clear();
                    queued.fill(false);
                    return false;
                }
                if changed {
                    touched.clear();
                    self.constraints_of(x, &mut touched);
                    for &(st, ss) in &touched {
                        let k = st * nmax + ss;
                        if !queued[k] {
                            queued[k] = true;
                            queue.push_back((st, ss));
                        }
                    }
                }
            }
        }
        true
    }
}

/// Outcome of a layered search for one fixed length.
enum Layer {
    Found(Vec<Vec<VertexId>>),
    Infeasible,
    OutOfBudget,
}

/// Searches chains of length `1..=c_max` from `f` to `g` (iterative
/// deepening), spending at most `node_budget` branching nodes overall.
pub(crate) fn layered_search(
    dom: &Complex,
    cod: &Complex,
    f: &[VertexId],
    g: &[VertexId],
    c_max: usize,
    node_budget: usize,
) -> Option<Vec<Vec<VertexId>>> {
    if f == g {
        return Some(vec![f.to_vec()]);
    }
    let words = cod.num_vertices().div_ceil(64);
    let sigmas = cod
        .maximal_simplices()
        .iter()
        .map(|s| {
            let mut bits = vec![0u64; words];
            for v in s.vertices() {
                bits[v.idx() / 64] |= 1 << (v.idx() % 64);
            }
            bits
        })
        .collect();
    let mut remaining = node_budget;
    let mut problem = Problem {
        dom,
        sigmas,
        words,
        cod_n: cod.num_vertices(),
        n: dom.num_vertices(),
        c: 1,
        scan: Vec::new(),
    };
    let bfs = bfs_order(dom);
    for c in 1..=c_max {
        problem.c = c;
        let n = problem.n;
        // one vertex's whole trajectory before moving to a neighbour
        problem.scan = bfs.iter().flat_map(|&v| (1..c).map(move |l| l * n + v)).collect();
        match solve(&problem, f, g, &mut remaining) {
            Layer::Found(t) => return Some(t),
            Layer::Infeasible => continue,
            Layer::OutOfBudget => return None,
        }
    }
    None
}

/// Domain vertices in breadth-first order over shared maximal simplices.
fn bfs_order(dom: &Complex) -> Vec<usize> {
    let n = dom.num_vertices();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &s in dom.star_of(VertexId::from(v)) {
                for w in dom.maximal_simplices()[s as usize].vertices() {
                    if !seen[w.idx()] {
                        seen[w.idx()] = true;
                        queue.push_back(w.idx());
                    }
                }
            }
        }
    }
    out
}

fn solve(p: &Problem<'_>, f: &[VertexId], g: &[VertexId], remaining: &mut usize) -> Layer {
    let nvars = (p.c + 1) * p.n;
    let mut d = Domains {
        words: p.words,
        bits: vec![!0u64; nvars * p.words],
    };
    // clear bits past the codomain size
    let tail = p.words * 64 - p.cod_n;
    if tail > 0 {
        for var in 0..nvars {
            let last = &mut d.get_mut(var)[p.words - 1];
            *last &= !0u64 >> tail;
        }
    }
    for v in 0..p.n {
        d.set_single(p.var(0, v), f[v].idx());
        d.set_single(p.var(p.c, v), g[v].idx());
    }
    let nmax = p.dom.maximal_simplices().len();
    let mut queued = vec![false; (p.c + 1) * nmax];
    let mut queue = VecDeque::new();
    for step in 1..=p.c {
        for s in 0..nmax {
            queued[step * nmax + s] = true;
            queue.push_back((step, s));
        }
    }
    if !p.propagate(&mut d, &mut queue, &mut queued) {
        return Layer::Infeasible;
    }
    let mut exhausted = false;
    match branch(p, d, f, g, remaining, &mut queue, &mut queued, &mut exhausted) {
        Some(d) => {
            let tables = (0..=p.c)
                .map(|layer| {
                    (0..p.n)
                        .map(|v| VertexId::from(d.values(p.var(layer, v)).next().expect("assigned")))
                        .collect()
                })
                .collect();
            Layer::Found(tables)
        }
        None if exhausted => Layer::OutOfBudget,
        None => Layer::Infeasible,
    }
}

#[allow(clippy::too_many_arguments)]
fn branch(
    p: &Problem<'_>,
    d: Domains,
    f: &[VertexId],
    g: &[VertexId],
    remaining: &mut usize,
    queue: &mut VecDeque<(usize, usize)>,
    queued: &mut [bool],
    exhausted: &mut bool,
) -> Option<Domains> {
    // smallest open domain, ties broken by the scan order
    let mut pick = None;
    let mut best = u32::MAX;
    for &var in &p.scan {
        let k = d.count(var);
        if k > 1 && k < best {
            best = k;
            pick = Some(var);
            if k == 2 {
                break;
            }
        }
    }
    let Some(var) = pick else {
        return Some(d);
    };
    if *remaining == 0 {
        *exhausted = true;
        return None;
    }
    *remaining -= 1;
    let (layer, v) = (var / p.n, var % p.n);
    let prev = d.values(p.var(layer - 1, v)).next().filter(|_| d.count(p.var(layer - 1, v)) == 1);
    let mut order: Vec<usize> = d.values(var).collect();
    // stay put if possible, then head for the target
    // early layers lean toward the start map, late ones toward the target
    let anchor = if 2 * layer >= p.c { g[v].idx() } else { f[v].idx() };
    order.sort_by_key(|&x| (x != anchor, Some(x) != prev, x));
    let mut touched = Vec::new();
    let nmax = p.dom.maximal_simplices().len();
    for x in order {
        let mut child = d.clone();
        child.set_single(var, x);
        touched.clear();
        p.constraints_of(var, &mut touched);
        for &(st, ss) in &touched {
            let k = st * nmax + ss;
            if !queued[k] {
                queued[k] = true;
                queue.push_back((st, ss));
            }
        }
        if p.propagate(&mut child, queue, queued) {
            if let Some(done) = branch(p, child, f, g, remaining, queue, queued, exhausted) {
                return Some(done);
            }
        }
        if *exhausted {
            return None;
        }
    }
    None
}
