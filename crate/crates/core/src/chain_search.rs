//! Searching for contiguity chains between two simplicial maps.
//!
//! A returned chain is always valid. `None` only means the search gave up
//! within its budget; it is not a proof that no chain exists.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complex::{Complex, VertexId};
use crate::error::{Error, Result};
use crate::maps::{image_into, ContiguityChain, SimplicialMap};

/// Largest `|codomain|^|domain|` for which exact search is attempted.
pub const EXACT_SEARCH_LIMIT: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainStrategy {
    /// Breadth-first search over all vertex maps. Finds a shortest chain
    /// within `c_max` whenever one exists.
    Exact,
    /// Move toward the target one vertex at a time, in domain order.
    Greedy,
    /// Greedy with seeded random vertex orders, alternating directions.
    Randomized { restarts: usize },
    /// Constraint propagation over the intermediate maps with iterative
    /// deepening on the length. Complete unless the node budget runs out.
    Layered { node_budget: usize },
    /// Exact when the map space is small enough; otherwise greedy, then
    /// layered search, then randomized restarts.
    Auto { restarts: usize, node_budget: usize },
}

impl Default for ChainStrategy {
    fn default() -> Self {
        ChainStrategy::Auto {
            restarts: 8,
            node_budget: 20_000,
        }
    }
}

/// Result of a greedy run that did not reach its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stuck {
    /// Vertices where the last map still differs from the target.
    pub residual: usize,
}

/// Finds a chain from `f` to `g` of length at most `c_max`.
///
/// Among successful attempts, the shortest chain wins, ties broken by the
/// lexicographic order of the image tables; the answer depends only on the
/// inputs, never on thread scheduling.
pub fn find_chain(
    f: &SimplicialMap,
    g: &SimplicialMap,
    c_max: usize,
    strategy: ChainStrategy,
    seed: u64,
) -> Result<Option<ContiguityChain>> {
    if !f.same_ends(g) {
        return Err(Error::Mismatch("maps have different domain or codomain"));
    }
    for h in [f, g] {
        if let Some(s) = h.first_non_simplicial() {
            return Err(Error::NotSimplicial {
                simplex: s.indices(),
            });
        }
    }
    let tables = match strategy {
        ChainStrategy::Exact => exact_bfs(f, g, c_max),
        ChainStrategy::Greedy => greedy(f, g, c_max, None).ok(),
        ChainStrategy::Randomized { restarts } => randomized(f, g, c_max, restarts, seed),
        ChainStrategy::Layered { node_budget } => layered(f, g, c_max, node_budget),
        ChainStrategy::Auto {
            restarts,
            node_budget,
        } => {
            if map_space_size(f) <= EXACT_SEARCH_LIMIT {
                exact_bfs(f, g, c_max)
            } else {
                match greedy(f, g, c_max, None) {
                    // greedy success of length <= 1 is already optimal
                    Ok(t) if t.len() <= 2 => Some(t),
                    first => {
                        let first = first.ok();
                        // layered search is complete, so only look for
                        // chains at least as short as its answer
                        let bound = first.as_ref().map_or(c_max, |t| t.len() - 1);
                        let second = layered(f, g, bound, node_budget);
                        let bound = second.as_ref().map_or(bound, |t| t.len() - 1);
                        let rest = randomized(f, g, bound, restarts, seed);
                        best_of([first, second, rest].into_iter().flatten())
                    }
                }
            }
        }
    };
    Ok(tables.map(|t| into_chain(f, t)))
}

/// Greedy search that reports how close it got on failure.
pub fn greedy_chain(f: &SimplicialMap, g: &SimplicialMap, c_max: usize) -> std::result::Result<ContiguityChain, Stuck> {
    greedy(f, g, c_max, None).map(|t| into_chain(f, t))
}

fn layered(f: &SimplicialMap, g: &SimplicialMap, c_max: usize, node_budget: usize) -> Option<Vec<Vec<VertexId>>> {
    crate::layered::layered_search(f.domain(), f.codomain(), f.images(), g.images(), c_max, node_budget)
}

fn map_space_size(f: &SimplicialMap) -> f64 {
    (f.codomain().num_vertices() as f64).powi(f.domain().num_vertices() as i32)
}

fn into_chain(f: &SimplicialMap, tables: Vec<Vec<VertexId>>) -> ContiguityChain {
    let maps = tables
        .into_iter()
        .map(|t| SimplicialMap::new_unchecked(f.domain().clone(), f.codomain().clone(), t))
        .collect();
    ContiguityChain::new_unchecked(maps)
}

fn best_of(found: impl IntoIterator<Item = Vec<Vec<VertexId>>>) -> Option<Vec<Vec<VertexId>>> {
    found
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}

/// True iff `h(s) ∪ k(s)` is a simplex for every maximal simplex `s`
/// containing `w`.
fn locally_contiguous(
    dom: &Complex,
    cod: &Complex,
    h: &[VertexId],
    k: &[VertexId],
    w: VertexId,
    buf: &mut Vec<VertexId>,
) -> bool {
    dom.star_of(w).iter().all(|&i| {
        image_into(buf, h, &dom.maximal_simplices()[i as usize], Some(k));
        cod.contains_sorted(buf)
    })
}

/// One greedy step from `h` toward `target`: switch vertices to their
/// target image while `(h, next)` stays contiguous, until nothing moves.
fn greedy_step(
    dom: &Complex,
    cod: &Complex,
    h: &[VertexId],
    target: &[VertexId],
    order: &[VertexId],
    buf: &mut Vec<VertexId>,
) -> Vec<VertexId> {
    let mut next = h.to_vec();
    loop {
        let mut moved = false;
        for &w in order {
            let i = w.idx();
            if next[i] == target[i] {
                continue;
            }
            let old = next[i];
            next[i] = target[i];
            if locally_contiguous(dom, cod, h, &next, w, buf) {
                moved = true;
            } else {
                next[i] = old;
            }
        }
        if !moved {
            return next;
        }
    }
}

fn greedy(
    f: &SimplicialMap,
    g: &SimplicialMap,
    c_max: usize,
    order: Option<&[VertexId]>,
) -> std::result::Result<Vec<Vec<VertexId>>, Stuck> {
    let dom = f.domain();
    let cod = f.codomain();
    let natural: Vec<VertexId>;
    let order = match order {
        Some(o) => o,
        None => {
            natural = dom.vertex_ids().collect();
            &natural
        }
    };
    let target = g.images();
    let mut buf = Vec::new();
    let mut tables = vec![f.images().to_vec()];
    loop {
        let h = tables.last().expect("non-empty");
        if h.as_slice() == target {
            return Ok(tables);
        }
        let residual = h.iter().zip(target).filter(|(a, b)| a != b).count();
        if tables.len() > c_max {
            return Err(Stuck { residual });
        }
        let next = if crate::maps::first_non_contiguous(dom, cod, h, target).is_none() {
            target.to_vec()
        } else {
            greedy_step(dom, cod, h, target, order, &mut buf)
        };
        if next == *h {
            return Err(Stuck { residual });
        }
        tables.push(next);
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    // splitmix-style spread so neighbouring seeds give unrelated streams
    let mut z = seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

fn randomized(
    f: &SimplicialMap,
    g: &SimplicialMap,
    c_max: usize,
    restarts: usize,
    seed: u64,
) -> Option<Vec<Vec<VertexId>>> {
    let found: Vec<Vec<Vec<VertexId>>> = (0..restarts)
        .into_par_iter()
        .filter_map(|r| {
            let mut order: Vec<VertexId> = f.domain().vertex_ids().collect();
            order.shuffle(&mut restart_rng(seed, r));
            if r % 2 == 0 {
                greedy(f, g, c_max, Some(&order)).ok()
            } else {
                // contiguity is symmetric, so a chain from g to f reversed
                // is a chain from f to g
                greedy(g, f, c_max, Some(&order)).ok().map(|mut t| {
                    t.reverse();
                    t
                })
            }
        })
        .collect();
    best_of(found)
}

/// Breadth-first search from `f`; neighbours are enumerated by a pruned
/// depth-first assignment of images.
fn exact_bfs(f: &SimplicialMap, g: &SimplicialMap, c_max: usize) -> Option<Vec<Vec<VertexId>>> {
    let dom = f.domain();
    let cod = f.codomain();
    let start = f.images().to_vec();
    let target = g.images().to_vec();
    let mut parent: HashMap<Vec<VertexId>, Option<Vec<VertexId>>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((h, depth)) = queue.pop_front() {
        if h == target {
            let mut path = vec![h];
            while let Some(Some(p)) = parent.get(path.last().expect("non-empty")) {
                path.push(p.clone());
            }
            path.reverse();
            return Some(path);
        }
        if depth == c_max {
            continue;
        }
        for n in contiguous_neighbours(dom, cod, &h) {
            if !parent.contains_key(&n) {
                parent.insert(n.clone(), Some(h.clone()));
                queue.push_back((n, depth + 1));
            }
        }
    }
    None
}

/// All maps `k` with `(h, k)` contiguous, in lexicographic order. Such `k`
/// are automatically simplicial.
pub(crate) fn contiguous_neighbours(dom: &Complex, cod: &Complex, h: &[VertexId]) -> Vec<Vec<VertexId>> {
    fn rec(
        dom: &Complex,
        cod: &Complex,
        h: &[VertexId],
        k: &mut Vec<VertexId>,
        buf: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let w = k.len();
        if w == h.len() {
            out.push(k.clone());
            return;
        }
        for c in cod.vertex_ids() {
            k.push(c);
            // every maximal simplex through w, restricted to assigned vertices
            let ok = dom.star_of(VertexId::from(w)).iter().all(|&i| {
                let s = &dom.maximal_simplices()[i as usize];
                buf.clear();
                buf.extend(s.vertices().iter().map(|v| h[v.idx()]));
                buf.extend(
                    s.vertices()
                        .iter()
                        .filter(|v| v.idx() <= w)
                        .map(|v| k[v.idx()]),
                );
                buf.sort_unstable();
                buf.dedup();
                cod.contains_sorted(buf)
            });
            if ok {
                rec(dom, cod, h, k, buf, out);
            }
            k.pop();
        }
    }
    let mut out = Vec::new();
    rec(dom, cod, h, &mut Vec::with_capacity(h.len()), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::verify_chain;
    use std::sync::Arc;

    fn path3() -> Arc<Complex> {
        Arc::new(Complex::build(["a", "b", "c"], &[vec![0, 1], vec![1, 2]]).unwrap())
    }

    fn constant(k: &Arc<Complex>, v: u32) -> SimplicialMap {
        SimplicialMap::constant(k.clone(), k.clone(), VertexId(v)).unwrap()
    }

    #[test]
    fn trivial_chain_for_equal_maps() {
        let p = path3();
        let f = SimplicialMap::identity(p);
        for strategy in [
            ChainStrategy::Exact,
            ChainStrategy::Greedy,
            ChainStrategy::Randomized { restarts: 3 },
        ] {
            let chain = find_chain(&f, &f, 0, strategy, 0).unwrap().unwrap();
            assert_eq!(chain.len(), 0);
        }
    }

    #[test]
    fn constants_on_path_need_two_steps() {
        let p = path3();
        let (ca, cc) = (constant(&p, 0), constant(&p, 2));
        assert!(find_chain(&ca, &cc, 1, ChainStrategy::Exact, 0).unwrap().is_none());
        let chain = find_chain(&ca, &cc, 2, ChainStrategy::Exact, 0).unwrap().unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain.maps()[1], constant(&p, 1));
        assert_eq!(verify_chain(&chain, &ca, &cc), Ok(()));
        // greedy only moves straight to the target and cannot route via b
        assert!(find_chain(&ca, &cc, 5, ChainStrategy::Greedy, 0).unwrap().is_none());
    }

    #[test]
    fn one_step_into_a_full_simplex() {
        let d = Arc::new(Complex::build(["0", "1", "2", "3"], &[vec![0, 1, 2, 3]]).unwrap());
        let c = Arc::new(Complex::build(["x", "y", "z"], &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap());
        let f = SimplicialMap::new(c.clone(), d.clone(), vec![VertexId(0), VertexId(1), VertexId(2)]).unwrap();
        let g = SimplicialMap::new(c, d, vec![VertexId(3), VertexId(3), VertexId(1)]).unwrap();
        for strategy in [ChainStrategy::Greedy, ChainStrategy::Exact, ChainStrategy::default()] {
            let chain = find_chain(&f, &g, 4, strategy, 1).unwrap().unwrap();
            assert_eq!(chain.len(), 1);
        }
    }

    #[test]
    fn neighbours_match_brute_force() {
        let p = path3();
        let h = [VertexId(0), VertexId(1), VertexId(1)];
        let fast = contiguous_neighbours(&p, &p, &h);
        let mut slow = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let k = vec![VertexId(a), VertexId(b), VertexId(c)];
                    if crate::maps::first_non_contiguous(&p, &p, &h, &k).is_none() {
                        slow.push(k);
                    }
                }
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn randomized_is_deterministic() {
        let p = path3();
        let f = SimplicialMap::identity(p.clone());
        let g = constant(&p, 1);
        let a = find_chain(&f, &g, 4, ChainStrategy::Randomized { restarts: 6 }, 42).unwrap();
        let b = find_chain(&f, &g, 4, ChainStrategy::Randomized { restarts: 6 }, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(verify_chain(&a.unwrap(), &f, &g), Ok(()));
    }

    #[test]
    fn mismatched_inputs_are_errors() {
        let p = path3();
        let q = Arc::new(Complex::build(["x"], &[vec![0]]).unwrap());
        let f = SimplicialMap::identity(p);
        let g = SimplicialMap::identity(q);
        assert!(find_chain(&f, &g, 1, ChainStrategy::Greedy, 0).is_err());
    }
}
