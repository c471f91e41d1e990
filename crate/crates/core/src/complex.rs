//! Finite ordered abstract simplicial complexes stored by their maximal
//! simplices.
//!
//! Vertex ids are consecutive indices `0..n` and the id order is the vertex
//! order of the complex. Every face query is a subset test against the
//! maximal simplices, so faces are never materialized unless asked for.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Index of a vertex in a complex's ordered vertex table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A non-empty, strictly increasing list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Builds a simplex from ids that must already be strictly increasing.
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(
                vertices.iter().map(|v| v.idx()).collect(),
            ));
        }
        Ok(Simplex(vertices))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Simplex(vertices))
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| VertexId::from(i)).collect())
    }

    /// Caller guarantees the invariant.
    pub(crate) fn new_unchecked(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|v| v.idx()).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> VertexId {
        self.0[0]
    }

    pub fn last(&self) -> VertexId {
        self.0[self.0.len() - 1]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Subset test by merging two sorted lists.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    /// All non-empty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (1..=self.0.len()).flat_map(move |k| {
            self.0
                .iter()
                .copied()
                .combinations(k)
                .map(Simplex::new_unchecked)
        })
    }

    /// Faces with exactly `k` vertices.
    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = Simplex> + '_ {
        self.0
            .iter()
            .copied()
            .combinations(k)
            .map(Simplex::new_unchecked)
    }
}

pub(crate) fn is_sorted_subset(small: &[VertexId], big: &[VertexId]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for v in small {
        for w in it.by_ref() {
            if w == v {
                continue 'outer;
            }
            if w > v {
                return false;
            }
        }
        return false;
    }
    true
}

/// A finite ordered simplicial complex.
#[derive(Clone)]
pub struct Complex {
    labels: Vec<String>,
    maximal: Vec<Simplex>,
    // vertex -> indices of maximal simplices containing it
    star: Vec<Vec<u32>>,
    label_index: HashMap<String, VertexId>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.maximal == other.maximal
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("vertices", &self.labels.len())
            .field("maximal_simplices", &self.maximal.len())
            .field("dim", &self.dim())
            .finish()
    }
}

impl Complex {
    /// Builds a complex from ordered labels and generating simplices given as
    /// vertex-index lists. Generators are sorted, deduplicated and reduced to
    /// their maximal antichain.
    pub fn build<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        generators: &[Vec<usize>],
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut simplices = Vec::with_capacity(generators.len());
        for g in generators {
            let mut vs = Vec::with_capacity(g.len());
            for &i in g {
                if i >= n {
                    return Err(Error::VertexOutOfRange { index: i, len: n });
                }
                vs.push(VertexId::from(i));
            }
            simplices.push(Simplex::from_unsorted(vs)?);
        }
        Self::from_simplices(labels, simplices)
    }

    /// Like [`Complex::build`] but with already-formed simplices.
    pub fn from_simplices(labels: Vec<String>, simplices: Vec<Simplex>) -> Result<Self> {
        if simplices.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let n = labels.len();
        for s in &simplices {
            if let Some(v) = s.vertices().iter().find(|v| v.idx() >= n) {
                return Err(Error::VertexOutOfRange {
                    index: v.idx(),
                    len: n,
                });
            }
        }
        let maximal = reduce_to_antichain(n, simplices);
        let complex = Self::assemble(labels, maximal)?;
        if let Some(v) = complex.star.iter().position(|s| s.is_empty()) {
            return Err(Error::UnusedVertex(complex.labels[v].clone()));
        }
        Ok(complex)
    }

    /// For constructions whose output is an antichain covering every vertex
    /// by construction. Sorts the maximal simplices.
    pub(crate) fn from_antichain_unchecked(labels: Vec<String>, mut maximal: Vec<Simplex>) -> Self {
        maximal.sort_unstable();
        let c = Self::assemble(labels, maximal).expect("constructed labels are unique");
        debug_assert!(c.star.iter().all(|s| !s.is_empty()));
        c
    }

    fn assemble(labels: Vec<String>, maximal: Vec<Simplex>) -> Result<Self> {
        let mut label_index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), VertexId::from(i)).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut star = vec![Vec::new(); labels.len()];
        for (k, s) in maximal.iter().enumerate() {
            for v in s.vertices() {
                star[v.idx()].push(k as u32);
            }
        }
        Ok(Complex {
            labels,
            maximal,
            star,
            label_index,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.idx()]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.label_index.get(label).copied()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.labels.len()).map(VertexId::from)
    }

    /// Maximal simplices in lexicographic order.
    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.maximal
    }

    /// Indices (into [`Complex::maximal_simplices`]) of the maximal simplices
    /// containing `v`.
    pub fn star_of(&self, v: VertexId) -> &[u32] {
        &self.star[v.idx()]
    }

    pub fn dim(&self) -> usize {
        self.maximal.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    /// True iff `s` is a face of some maximal simplex.
    pub fn has_simplex(&self, s: &Simplex) -> Result<bool> {
        if let Some(v) = s.vertices().iter().find(|v| v.idx() >= self.labels.len()) {
            return Err(Error::VertexOutOfRange {
                index: v.idx(),
                len: self.labels.len(),
            });
        }
        Ok(self.contains_sorted(s.vertices()))
    }

    /// Membership for a sorted, deduplicated, in-range vertex list.
    pub(crate) fn contains_sorted(&self, vs: &[VertexId]) -> bool {
        let Some(first) = vs.first() else {
            return false;
        };
        self.star[first.idx()]
            .iter()
            .any(|&k| is_sorted_subset(vs, self.maximal[k as usize].vertices()))
    }

    /// Every simplex exactly once, in lexicographic order.
    pub fn simplices(&self) -> Vec<Simplex> {
        let mut all = BTreeSet::new();
        for s in &self.maximal {
            all.extend(s.faces());
        }
        all.into_iter().collect()
    }

    /// Simplices of dimension `d` in lexicographic order.
    pub fn simplices_of_dim(&self, d: usize) -> Vec<Simplex> {
        let mut all = BTreeSet::new();
        for s in self.maximal.iter().filter(|s| s.dim() >= d) {
            all.extend(s.faces_of_size(d + 1));
        }
        all.into_iter().collect()
    }

    /// Number of `d`-simplices for `d = 0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim())
            .map(|d| self.simplices_of_dim(d).len())
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// The `d`-skeleton. Returns a copy of `self` when `d >= dim`.
    pub fn skeleton(&self, d: usize) -> Complex {
        if d >= self.dim() {
            return self.clone();
        }
        let mut gens = Vec::new();
        for s in &self.maximal {
            if s.dim() <= d {
                gens.push(s.clone());
            } else {
                gens.extend(s.faces_of_size(d + 1));
            }
        }
        let maximal = reduce_to_antichain(self.labels.len(), gens);
        Complex::from_antichain_unchecked(self.labels.clone(), maximal)
    }

    /// Renumbers vertices: old vertex `i` becomes vertex `perm[i]`, keeping
    /// its label.
    pub fn relabel(&self, perm: &[usize]) -> Result<Complex> {
        let n = self.labels.len();
        if perm.len() != n {
            return Err(Error::BadPermutation(format!(
                "expected {n} entries, got {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadPermutation(format!("{perm:?} is not a bijection")));
            }
        }
        let mut labels = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        let maximal = self
            .maximal
            .iter()
            .map(|s| {
                let mut vs: Vec<VertexId> =
                    s.vertices().iter().map(|v| VertexId::from(perm[v.idx()])).collect();
                vs.sort_unstable();
                Simplex::new_unchecked(vs)
            })
            .collect();
        Ok(Complex::from_antichain_unchecked(labels, maximal))
    }

    /// Same simplices, new label strings (ids and order unchanged).
    pub fn rename(&self, labels: Vec<String>) -> Result<Complex> {
        if labels.len() != self.labels.len() {
            return Err(Error::Mismatch("label count"));
        }
        Complex::assemble(labels, self.maximal.clone())
    }
}

/// Reduces a list of simplices to the antichain of its maximal elements.
pub(crate) fn reduce_to_antichain(num_vertices: usize, mut simplices: Vec<Simplex>) -> Vec<Simplex> {
    simplices.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    simplices.dedup();
    let mut kept: Vec<Simplex> = Vec::new();
    let mut star: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
    for s in simplices {
        let absorbed = star[s.first().idx()]
            .iter()
            .any(|&k| s.is_face_of(&kept[k]));
        if !absorbed {
            for v in s.vertices() {
                star[v.idx()].push(kept.len());
            }
            kept.push(s);
        }
    }
    kept.sort_unstable();
    kept
}

/// A subcomplex of an ambient complex, given by an antichain of ambient
/// simplices. Faces are members by subset.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    ambient: Arc<Complex>,
    maximal: Vec<Simplex>,
}

impl PartialEq for Subcomplex {
    fn eq(&self, other: &Self) -> bool {
        same_complex(&self.ambient, &other.ambient) && self.maximal == other.maximal
    }
}

pub(crate) fn same_complex(a: &Arc<Complex>, b: &Arc<Complex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Subcomplex {
    pub fn new(ambient: Arc<Complex>, simplices: Vec<Simplex>) -> Result<Self> {
        for s in &simplices {
            if !ambient.has_simplex(s)? {
                return Err(Error::NotASimplex(s.indices()));
            }
        }
        let maximal = reduce_to_antichain(ambient.num_vertices(), simplices);
        Ok(Subcomplex { ambient, maximal })
    }

    /// The whole ambient complex as a subcomplex of itself.
    pub fn full(ambient: Arc<Complex>) -> Self {
        let maximal = ambient.maximal_simplices().to_vec();
        Subcomplex { ambient, maximal }
    }

    pub(crate) fn from_antichain_unchecked(ambient: Arc<Complex>, mut maximal: Vec<Simplex>) -> Self {
        maximal.sort_unstable();
        Subcomplex { ambient, maximal }
    }

    pub fn ambient(&self) -> &Arc<Complex> {
        &self.ambient
    }

    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn has_simplex(&self, s: &Simplex) -> bool {
        self.maximal.iter().any(|m| s.is_face_of(m))
    }

    /// Vertices of the subcomplex in ambient order.
    pub fn vertices(&self) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self
            .maximal
            .iter()
            .flat_map(|s| s.vertices().iter().copied())
            .collect();
        set.into_iter().collect()
    }

    /// The subcomplex as a standalone complex with inherited vertex order
    /// and labels, plus the table back into the ambient complex.
    pub fn materialize(&self) -> Materialized {
        let back = self.vertices();
        let mut local = vec![u32::MAX; self.ambient.num_vertices()];
        for (i, v) in back.iter().enumerate() {
            local[v.idx()] = i as u32;
        }
        let labels = back
            .iter()
            .map(|&v| self.ambient.label(v).to_string())
            .collect();
        // local ids are order-preserving, so sortedness carries over
        let maximal = self
            .maximal
            .iter()
            .map(|s| {
                Simplex::new_unchecked(
                    s.vertices().iter().map(|v| VertexId(local[v.idx()])).collect(),
                )
            })
            .collect();
        Materialized {
            complex: Arc::new(Complex::from_antichain_unchecked(labels, maximal)),
            to_ambient: back,
        }
    }
}

/// A subcomplex materialized as a complex of its own.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub complex: Arc<Complex>,
    /// Local vertex id -> ambient vertex id (strictly increasing).
    pub to_ambient: Vec<VertexId>,
}

impl Materialized {
    pub fn to_local(&self, ambient: VertexId) -> Option<VertexId> {
        self.to_ambient
            .binary_search(&ambient)
            .ok()
            .map(VertexId::from)
    }
}

/// True iff every maximal simplex of `complex` lies in at least one piece.
pub fn is_cover(complex: &Arc<Complex>, pieces: &[Subcomplex]) -> Result<bool> {
    if pieces.iter().any(|p| !same_complex(p.ambient(), complex)) {
        return Err(Error::Mismatch("piece ambient differs from the covered complex"));
    }
    Ok(first_uncovered(complex, pieces).is_none())
}

/// First maximal simplex of `complex` not contained in any piece.
pub(crate) fn first_uncovered<'a>(complex: &'a Complex, pieces: &[Subcomplex]) -> Option<&'a Simplex> {
    // index piece simplices by first vertex for the subset tests
    let mut by_vertex: Vec<Vec<&Simplex>> = vec![Vec::new(); complex.num_vertices()];
    for p in pieces {
        for s in p.maximal_simplices() {
            for v in s.vertices() {
                by_vertex[v.idx()].push(s);
            }
        }
    }
    complex
        .maximal_simplices()
        .iter()
        .find(|s| !by_vertex[s.first().idx()].iter().any(|m| s.is_face_of(m)))
}
