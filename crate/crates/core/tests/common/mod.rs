//! Brute-force oracles. Everything here works on plain vertex-index lists
//! and never calls into the library's constructions.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use sc_core::Complex;

pub type Faces = BTreeSet<Vec<usize>>;

/// Maximal simplices of `k` as sorted index lists.
pub fn generators(k: &Complex) -> Vec<Vec<usize>> {
    k.maximal_simplices().iter().map(|s| s.indices()).collect()
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Every non-empty subset of every generator.
pub fn all_faces(gens: &[Vec<usize>]) -> Faces {
    let mut out = Faces::new();
    for g in gens {
        for mask in 1u32..(1 << g.len()) {
            let face: Vec<usize> = (0..g.len()).filter(|i| mask >> i & 1 == 1).map(|i| g[i]).collect();
            out.insert(face);
        }
    }
    out
}

pub fn f_vector(faces: &Faces) -> Vec<usize> {
    let dim = faces.iter().map(Vec::len).max().unwrap_or(0);
    let mut f = vec![0; dim];
    for s in faces {
        f[s.len() - 1] += 1;
    }
    f
}

pub fn euler(faces: &Faces) -> i64 {
    faces
        .iter()
        .map(|s| if s.len() % 2 == 1 { 1 } else { -1 })
        .sum()
}

pub fn euler_of_f(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

fn dedup_sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// f-vector of the ordered product: strictly increasing chains of pairs
/// under the componentwise order whose two projections are faces.
pub fn product_f_vector(k: &Faces, nk: usize, l: &Faces, nl: usize) -> Vec<usize> {
    let mut f = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..nk).flat_map(|u| (0..nl).map(move |v| (u, v))).collect();
    let mut chain = Vec::new();
    fn extend(
        chain: &mut Vec<(usize, usize)>,
        pairs: &[(usize, usize)],
        k: &Faces,
        l: &Faces,
        f: &mut Vec<usize>,
    ) {
        let us = dedup_sorted(chain.iter().map(|p| p.0).collect());
        let vs = dedup_sorted(chain.iter().map(|p| p.1).collect());
        if !k.contains(&us) || !l.contains(&vs) {
            return;
        }
        if f.len() < chain.len() {
            f.resize(chain.len(), 0);
        }
        f[chain.len() - 1] += 1;
        let &(u0, v0) = chain.last().unwrap();
        for &(u, v) in pairs {
            if u >= u0 && v >= v0 && (u, v) != (u0, v0) {
                chain.push((u, v));
                extend(chain, pairs, k, l, f);
                chain.pop();
            }
        }
    }
    for &p in &pairs {
        chain.push(p);
        extend(&mut chain, &pairs, k, l, &mut f);
        chain.pop();
    }
    f
}

/// f-vector of the barycentric subdivision: chains of faces under strict
/// inclusion.
pub fn subdivision_f_vector(k: &Faces) -> Vec<usize> {
    let faces: Vec<&Vec<usize>> = k.iter().collect();
    let mut f = Vec::new();
    fn subset(a: &[usize], b: &[usize]) -> bool {
        a.len() < b.len() && a.iter().all(|x| b.contains(x))
    }
    fn extend(chain: &mut Vec<usize>, faces: &[&Vec<usize>], f: &mut Vec<usize>) {
        if f.len() < chain.len() {
            f.resize(chain.len(), 0);
        }
        f[chain.len() - 1] += 1;
        let top = faces[*chain.last().unwrap()];
        for (j, g) in faces.iter().enumerate() {
            if subset(top, g) {
                chain.push(j);
                extend(chain, faces, f);
                chain.pop();
            }
        }
    }
    for i in 0..faces.len() {
        let mut chain = vec![i];
        extend(&mut chain, &faces, &mut f);
    }
    f
}

/// A random complex on `1..=max_n` vertices with every vertex used.
pub fn random_generators(rng: &mut impl Rng, max_n: usize, max_size: usize, max_gens: usize) -> (usize, Vec<Vec<usize>>) {
    let n = rng.gen_range(1..=max_n);
    let count = rng.gen_range(1..=max_gens);
    let mut gens: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n));
            let mut s: Vec<usize> = rand::seq::index::sample(rng, n, size).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    for v in 0..n {
        if !gens.iter().any(|g| g.contains(&v)) {
            gens.push(vec![v]);
        }
    }
    (n, gens)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// All complexes on exactly `n` vertices (every vertex used), one per
/// isomorphism class, as antichains of generators.
pub fn complexes_up_to_iso(n: usize) -> Vec<Vec<Vec<usize>>> {
    let subsets: Vec<u32> = (1u32..(1 << n)).collect();
    let perms = permutations(n);
    let canon = |family: &[u32]| -> Vec<u32> {
        perms
            .iter()
            .map(|p| {
                let mut img: Vec<u32> = family
                    .iter()
                    .map(|&s| (0..n).filter(|&i| s >> i & 1 == 1).map(|i| 1u32 << p[i]).sum())
                    .collect();
                img.sort_unstable();
                img
            })
            .min()
            .unwrap()
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for choice in 1u64..(1 << subsets.len()) {
        let family: Vec<u32> = (0..subsets.len())
            .filter(|i| choice >> i & 1 == 1)
            .map(|i| subsets[i])
            .collect();
        let antichain = family
            .iter()
            .all(|&a| family.iter().all(|&b| a == b || a & b != a));
        let covering = family.iter().fold(0, |acc, s| acc | s) == (1 << n) - 1;
        if antichain && covering && seen.insert(canon(&family)) {
            out.push(
                family
                    .iter()
                    .map(|&s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
                    .collect(),
            );
        }
    }
    out
}

/// Every complex with one to `max_n` vertices, up to isomorphism.
pub fn small_complexes(max_n: usize) -> Vec<(usize, Vec<Vec<usize>>)> {
    (1..=max_n)
        .flat_map(|n| complexes_up_to_iso(n).into_iter().map(move |g| (n, g)))
        .collect()
}

/// Every vertex map `k → l` sending faces to faces.
pub fn simplicial_maps(k: &Faces, nk: usize, l: &Faces, nl: usize) -> Vec<Vec<usize>> {
    let total = nl.pow(nk as u32);
    (0..total)
        .map(|mut code| {
            (0..nk)
                .map(|_| {
                    let v = code % nl;
                    code /= nl;
                    v
                })
                .collect::<Vec<_>>()
        })
        .filter(|f| k.iter().all(|s| l.contains(&dedup_sorted(s.iter().map(|&v| f[v]).collect()))))
        .collect()
}

/// `f(s) ∪ g(s)` is a face of `l` for every face `s` of `k`.
pub fn contiguous(k: &Faces, l: &Faces, f: &[usize], g: &[usize]) -> bool {
    k.iter().all(|s| {
        l.contains(&dedup_sorted(s.iter().flat_map(|&v| [f[v], g[v]]).collect()))
    })
}

/// Shortest chain length between `f` and `g` by breadth-first search over
/// all simplicial maps, or `None` if they are in different classes.
pub fn chain_distance(k: &Faces, nk: usize, l: &Faces, nl: usize, f: &[usize], g: &[usize]) -> Option<usize> {
    let maps = simplicial_maps(k, nk, l, nl);
    let index = |m: &[usize]| maps.iter().position(|x| x == m).unwrap();
    let mut dist = vec![usize::MAX; maps.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[index(f)] = 0;
    queue.push_back(index(f));
    while let Some(i) = queue.pop_front() {
        for j in 0..maps.len() {
            if dist[j] == usize::MAX && contiguous(k, l, &maps[i], &maps[j]) {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    let d = dist[index(g)];
    (d != usize::MAX).then_some(d)
}

/// Face set as a hash set, for quick membership in hot loops.
pub fn face_set(faces: &Faces) -> HashSet<Vec<usize>> {
    faces.iter().cloned().collect()
}

/// Point-in-segment / point-in-triangle test for a realization in the
/// plane or higher: is `p` a convex combination of `pts` within `tol`?
/// Handles up to three points by direct formulas.
pub fn in_hull(p: &[f64], pts: &[Vec<f64>], tol: f64) -> bool {
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    match pts.len() {
        1 => dist(p, &pts[0]) <= tol,
        2 => {
            let (a, b) = (&pts[0], &pts[1]);
            let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
            let ap: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
            let len2: f64 = ab.iter().map(|x| x * x).sum();
            let t = (ab.iter().zip(&ap).map(|(x, y)| x * y).sum::<f64>() / len2).clamp(0.0, 1.0);
            let q: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + t * d).collect();
            dist(p, &q) <= tol
        }
        _ => panic!("in_hull handles at most segments"),
    }
}
