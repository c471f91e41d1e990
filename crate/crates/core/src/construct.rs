//! Ordered products, barycentric subdivision, approximations of the identity
//! and the projection composites `Sd^b(K×K) → K`.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::maps::SimplicialMap;

/// Default cap on the number of top simplices a subdivision may produce.
pub const DEFAULT_SIZE_BUDGET: u128 = 10_000_000;

/// The ordered product `K × L`.
///
/// Vertices are all pairs `(u, v)` in lexicographic order; simplices are the
/// chains in the componentwise order whose projections are simplices of the
/// factors.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    pub complex: Arc<Complex>,
    pub factors: (Arc<Complex>, Arc<Complex>),
    decode: Vec<(VertexId, VertexId)>,
}

impl ProductComplex {
    pub fn decode(&self, w: VertexId) -> (VertexId, VertexId) {
        self.decode[w.idx()]
    }

    pub fn encode(&self, u: VertexId, v: VertexId) -> VertexId {
        VertexId((u.0 as usize * self.factors.1.num_vertices() + v.idx()) as u32)
    }

    /// Projection onto factor 1 or 2.
    pub fn projection(&self, factor: usize) -> Result<SimplicialMap> {
        let (target, pick): (&Arc<Complex>, fn(&(VertexId, VertexId)) -> VertexId) = match factor {
            1 => (&self.factors.0, |p| p.0),
            2 => (&self.factors.1, |p| p.1),
            _ => return Err(Error::Mismatch("factor index must be 1 or 2")),
        };
        Ok(SimplicialMap::new_unchecked(
            self.complex.clone(),
            target.clone(),
            self.decode.iter().map(pick).collect(),
        ))
    }
}

pub fn product_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

pub fn subdivision_label<'a>(parent_labels: impl IntoIterator<Item = &'a str>) -> String {
    format!("{{{}}}", parent_labels.into_iter().join(","))
}

/// Builds the ordered product. Each pair of maximal simplices of dimensions
/// `p` and `q` contributes its `C(p+q, p)` staircase chains, which are
/// exactly the maximal simplices of the product.
pub fn ordered_product(k: &Arc<Complex>, l: &Arc<Complex>) -> ProductComplex {
    let m = l.num_vertices();
    let mut labels = Vec::with_capacity(k.num_vertices() * m);
    let mut decode = Vec::with_capacity(k.num_vertices() * m);
    for u in k.vertex_ids() {
        for v in l.vertex_ids() {
            labels.push(product_label(k.label(u), l.label(v)));
            decode.push((u, v));
        }
    }
    let mut maximal = Vec::new();
    for s in k.maximal_simplices() {
        for t in l.maximal_simplices() {
            let (p, q) = (s.dim(), t.dim());
            // choose which of the p+q steps move in the first coordinate
            for first_steps in (0..p + q).combinations(p) {
                let (mut i, mut j) = (0, 0);
                let mut chain = Vec::with_capacity(p + q + 1);
                let enc = |i: usize, j: usize| {
                    VertexId((s.vertices()[i].idx() * m + t.vertices()[j].idx()) as u32)
                };
                chain.push(enc(0, 0));
                let mut next_first = first_steps.iter().peekable();
                for step in 0..p + q {
                    if next_first.peek() == Some(&&step) {
                        next_first.next();
                        i += 1;
                    } else {
                        j += 1;
                    }
                    chain.push(enc(i, j));
                }
                maximal.push(Simplex::new_unchecked(chain));
            }
        }
    }
    ProductComplex {
        complex: Arc::new(Complex::from_antichain_unchecked(labels, maximal)),
        factors: (k.clone(), l.clone()),
        decode,
    }
}

/// The barycentric subdivision `Sd(parent)`.
///
/// Vertex `w` is the barycenter of the parent simplex `decode(w)`; vertices
/// are ordered by parent dimension, then lexicographically.
#[derive(Clone, Debug)]
pub struct SubdivisionComplex {
    pub complex: Arc<Complex>,
    pub parent: Arc<Complex>,
    decode: Vec<Simplex>,
    encode: HashMap<Simplex, VertexId>,
}

impl SubdivisionComplex {
    pub fn decode(&self, w: VertexId) -> &Simplex {
        &self.decode[w.idx()]
    }

    /// The vertex that is the barycenter of `s`, if `s` is a parent simplex.
    pub fn vertex_of(&self, s: &Simplex) -> Option<VertexId> {
        self.encode.get(s).copied()
    }
}

/// Number of top simplices `Sd(k)` would have: `Σ (dim s + 1)!` over the
/// maximal simplices.
pub fn projected_subdivision_size(k: &Complex) -> u128 {
    k.maximal_simplices()
        .iter()
        .map(|s| (1..=s.len() as u128).fold(1u128, |a, b| a.saturating_mul(b)))
        .fold(0u128, u128::saturating_add)
}

pub fn barycentric_subdivision(parent: &Arc<Complex>) -> SubdivisionComplex {
    let mut vertices = parent.simplices();
    vertices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let encode: HashMap<Simplex, VertexId> = vertices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), VertexId::from(i)))
        .collect();
    let labels = vertices
        .iter()
        .map(|s| subdivision_label(s.vertices().iter().map(|&v| parent.label(v))))
        .collect();
    let mut maximal = Vec::new();
    for top in parent.maximal_simplices() {
        // one full flag per ordering of the top simplex's vertices
        for order in top.vertices().iter().copied().permutations(top.len()) {
            let mut flag = Vec::with_capacity(order.len());
            let mut face = Vec::with_capacity(order.len());
            for v in order {
                let at = face.binary_search(&v).unwrap_err();
                face.insert(at, v);
                flag.push(encode[&Simplex::new_unchecked(face.clone())]);
            }
            // dimension increases along a flag, hence so do ids
            maximal.push(Simplex::new_unchecked(flag));
        }
    }
    SubdivisionComplex {
        complex: Arc::new(Complex::from_antichain_unchecked(labels, maximal)),
        parent: parent.clone(),
        decode: vertices,
        encode,
    }
}

/// `b` successive subdivisions of `k`, checking the size guardrail before
/// building each level. `b = 0` yields an empty list.
pub fn iterated_subdivision(k: &Arc<Complex>, b: usize, budget: u128) -> Result<Vec<SubdivisionComplex>> {
    let mut levels: Vec<SubdivisionComplex> = Vec::with_capacity(b);
    for level in 1..=b {
        let current = levels.last().map_or(k, |s| &s.complex);
        let projected = projected_subdivision_size(current);
        if projected > budget {
            return Err(Error::SizeGuardrail {
                level,
                projected,
                budget,
            });
        }
        let next = barycentric_subdivision(current);
        levels.push(next);
    }
    Ok(levels)
}

/// Which vertex of its parent simplex a barycenter is sent to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxPolicy {
    Min,
    #[default]
    Max,
}

impl ApproxPolicy {
    pub fn pick(self, s: &Simplex) -> VertexId {
        match self {
            ApproxPolicy::Min => s.first(),
            ApproxPolicy::Max => s.last(),
        }
    }

    pub fn other(self) -> Self {
        match self {
            ApproxPolicy::Min => ApproxPolicy::Max,
            ApproxPolicy::Max => ApproxPolicy::Min,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ApproxPolicy::Min => "min",
            ApproxPolicy::Max => "max",
        }
    }
}

impl std::str::FromStr for ApproxPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(ApproxPolicy::Min),
            "max" => Ok(ApproxPolicy::Max),
            other => Err(Error::Malformed(format!("unknown policy {other:?}"))),
        }
    }
}

/// The simplicial approximation `Sd(parent) → parent` of the identity that
/// sends each barycenter to the policy's vertex of its parent simplex.
pub fn approx_identity(sd: &SubdivisionComplex, policy: ApproxPolicy) -> SimplicialMap {
    let images = sd.decode.iter().map(|s| policy.pick(s)).collect();
    SimplicialMap::new_unchecked(sd.complex.clone(), sd.parent.clone(), images)
}

/// `Sd^b(K×K)` together with every intermediate level.
#[derive(Clone, Debug)]
pub struct Tower {
    pub base: Arc<Complex>,
    pub product: ProductComplex,
    pub levels: Vec<SubdivisionComplex>,
}

impl Tower {
    pub fn build(base: &Arc<Complex>, b: usize, budget: u128) -> Result<Self> {
        let product = ordered_product(base, base);
        let levels = iterated_subdivision(&product.complex, b, budget)?;
        Ok(Tower {
            base: base.clone(),
            product,
            levels,
        })
    }

    pub fn b(&self) -> usize {
        self.levels.len()
    }

    /// The complex `Sd^b(K×K)`.
    pub fn top(&self) -> &Arc<Complex> {
        self.levels.last().map_or(&self.product.complex, |s| &s.complex)
    }

    /// `ι ∘ ⋯ ∘ ι : Sd^b(K×K) → K×K` as a vertex table into product ids.
    pub fn to_product(&self, policy: ApproxPolicy) -> Vec<VertexId> {
        let mut table: Vec<VertexId> = self.top().vertex_ids().collect();
        for sd in self.levels.iter().rev() {
            for w in table.iter_mut() {
                *w = policy.pick(sd.decode(*w));
            }
        }
        table
    }

    /// `π_i = (i-th projection) ∘ ι ∘ ⋯ ∘ ι : Sd^b(K×K) → K`.
    pub fn projection_composite(&self, factor: usize, policy: ApproxPolicy) -> Result<SimplicialMap> {
        projection_composite(&self.product, &self.levels, factor, policy)
    }

    /// For every vertex of `Sd^b(K×K)`, the product vertices spanning the
    /// minimal simplex of `K×K` containing it.
    pub fn product_carriers(&self) -> Vec<Simplex> {
        let mut carriers: Vec<Simplex> = self
            .product
            .complex
            .vertex_ids()
            .map(Simplex::vertex)
            .collect();
        for sd in &self.levels {
            carriers = sd
                .complex
                .vertex_ids()
                .map(|w| {
                    let vs = sd
                        .decode(w)
                        .vertices()
                        .iter()
                        .flat_map(|p| carriers[p.idx()].vertices().iter().copied())
                        .collect();
                    Simplex::from_unsorted(vs).expect("non-empty")
                })
                .collect();
        }
        carriers
    }
}

/// Composite of the approximations down a tower followed by a factor
/// projection.
pub fn projection_composite(
    product: &ProductComplex,
    levels: &[SubdivisionComplex],
    factor: usize,
    policy: ApproxPolicy,
) -> Result<SimplicialMap> {
    let mut expected = &product.complex;
    for sd in levels {
        if !crate::complex::same_complex(&sd.parent, expected) {
            return Err(Error::Mismatch("subdivision levels do not form a tower over the product"));
        }
        expected = &sd.complex;
    }
    let proj = product.projection(factor)?;
    let mut map = proj;
    for sd in levels {
        map = map.compose(&approx_identity(sd, policy))?;
    }
    Ok(map)
}
