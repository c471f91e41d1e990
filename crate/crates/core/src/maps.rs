//! Vertex maps between complexes, the contiguity predicate, and contiguity
//! chains `h_0, ..., h_c`.

use std::fmt;
use std::sync::Arc;

use crate::complex::{same_complex, Complex, Materialized, Simplex, VertexId};
use crate::error::{Error, Result};

/// A total vertex table from `domain` to `codomain`.
///
/// Simpliciality is a checkable predicate, not a type invariant.
#[derive(Clone)]
pub struct SimplicialMap {
    domain: Arc<Complex>,
    codomain: Arc<Complex>,
    images: Vec<VertexId>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && same_complex(&self.domain, &other.domain)
            && same_complex(&self.codomain, &other.codomain)
    }
}

impl fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialMap")
            .field("images", &self.images)
            .finish()
    }
}

impl SimplicialMap {
    pub fn new(domain: Arc<Complex>, codomain: Arc<Complex>, images: Vec<VertexId>) -> Result<Self> {
        if images.len() != domain.num_vertices() {
            return Err(Error::Mismatch("image table length differs from domain size"));
        }
        if let Some(v) = images.iter().find(|v| v.idx() >= codomain.num_vertices()) {
            return Err(Error::VertexOutOfRange {
                index: v.idx(),
                len: codomain.num_vertices(),
            });
        }
        Ok(SimplicialMap {
            domain,
            codomain,
            images,
        })
    }

    pub(crate) fn new_unchecked(
        domain: Arc<Complex>,
        codomain: Arc<Complex>,
        images: Vec<VertexId>,
    ) -> Self {
        debug_assert_eq!(images.len(), domain.num_vertices());
        SimplicialMap {
            domain,
            codomain,
            images,
        }
    }

    pub fn identity(k: Arc<Complex>) -> Self {
        let images = k.vertex_ids().collect();
        SimplicialMap {
            domain: k.clone(),
            codomain: k,
            images,
        }
    }

    pub fn constant(domain: Arc<Complex>, codomain: Arc<Complex>, target: VertexId) -> Result<Self> {
        let images = vec![target; domain.num_vertices()];
        Self::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Arc<Complex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Complex> {
        &self.codomain
    }

    pub fn images(&self) -> &[VertexId] {
        &self.images
    }

    pub fn image(&self, v: VertexId) -> VertexId {
        self.images[v.idx()]
    }

    /// The image vertex set of `s`, sorted and deduplicated.
    pub fn image_of(&self, s: &Simplex) -> Simplex {
        let vs = s.vertices().iter().map(|v| self.images[v.idx()]).collect();
        Simplex::from_unsorted(vs).expect("simplices are non-empty")
    }

    /// First maximal simplex of the domain whose image is not a simplex.
    pub fn first_non_simplicial(&self) -> Option<&Simplex> {
        let mut buf = Vec::new();
        self.domain.maximal_simplices().iter().find(|s| {
            image_into(&mut buf, &self.images, s, None);
            !self.codomain.contains_sorted(&buf)
        })
    }

    /// True iff every maximal simplex of the domain maps onto a simplex.
    pub fn is_simplicial(&self) -> bool {
        self.first_non_simplicial().is_none()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SimplicialMap) -> Result<SimplicialMap> {
        if !same_complex(inner.codomain(), &self.domain) {
            return Err(Error::Mismatch("inner codomain differs from outer domain"));
        }
        let images = inner.images.iter().map(|v| self.images[v.idx()]).collect();
        Ok(SimplicialMap::new_unchecked(
            inner.domain.clone(),
            self.codomain.clone(),
            images,
        ))
    }

    /// Restriction to a materialized subcomplex of the domain.
    pub fn restrict(&self, piece: &Materialized) -> Result<SimplicialMap> {
        if piece.to_ambient.last().is_some_and(|v| v.idx() >= self.domain.num_vertices()) {
            return Err(Error::Mismatch("piece is not a subcomplex of the map's domain"));
        }
        let images = piece.to_ambient.iter().map(|v| self.images[v.idx()]).collect();
        Ok(SimplicialMap::new_unchecked(
            piece.complex.clone(),
            self.codomain.clone(),
            images,
        ))
    }

    pub(crate) fn same_ends(&self, other: &SimplicialMap) -> bool {
        same_complex(&self.domain, &other.domain) && same_complex(&self.codomain, &other.codomain)
    }
}

/// Collects the images of `s` under `f` (and `g`, if given) into `buf`,
/// sorted and deduplicated.
#[inline]
pub(crate) fn image_into(
    buf: &mut Vec<VertexId>,
    f: &[VertexId],
    s: &Simplex,
    g: Option<&[VertexId]>,
) {
    buf.clear();
    buf.extend(s.vertices().iter().map(|v| f[v.idx()]));
    if let Some(g) = g {
        buf.extend(s.vertices().iter().map(|v| g[v.idx()]));
    }
    buf.sort_unstable();
    buf.dedup();
}

/// First maximal simplex `s` of the shared domain with `f(s) ∪ g(s)` not a
/// simplex of the codomain.
pub(crate) fn first_non_contiguous<'a>(
    domain: &'a Complex,
    codomain: &Complex,
    f: &[VertexId],
    g: &[VertexId],
) -> Option<&'a Simplex> {
    let mut buf = Vec::new();
    domain.maximal_simplices().iter().find(|s| {
        image_into(&mut buf, f, s, Some(g));
        !codomain.contains_sorted(&buf)
    })
}

/// True iff `f(s) ∪ g(s)` is a simplex for every simplex `s` of the domain.
///
/// Both maps must be simplicial with the same domain and codomain.
pub fn contiguous_pair(f: &SimplicialMap, g: &SimplicialMap) -> Result<bool> {
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
    Ok(first_non_contiguous(&f.domain, &f.codomain, &f.images, &g.images).is_none())
}

/// A sequence of simplicial maps with consecutive pairs contiguous.
#[derive(Clone, PartialEq)]
pub struct ContiguityChain {
    maps: Vec<SimplicialMap>,
}

impl fmt::Debug for ContiguityChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContiguityChain")
            .field("len", &self.len())
            .finish()
    }
}

/// Why a chain failed verification. Simplex and vertex ids refer to the
/// chain's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainDefect {
    Empty,
    DomainMismatch { map: usize },
    NotSimplicial { map: usize, simplex: Simplex },
    NotContiguous { step: usize, simplex: Simplex },
    StartMismatch { vertex: VertexId },
    EndMismatch { vertex: VertexId },
}

impl fmt::Display for ChainDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainDefect::Empty => write!(f, "chain has no maps"),
            ChainDefect::DomainMismatch { map } => {
                write!(f, "map {map} has a different domain or codomain")
            }
            ChainDefect::NotSimplicial { map, simplex } => {
                write!(f, "map {map} is not simplicial on {:?}", simplex.indices())
            }
            ChainDefect::NotContiguous { step, simplex } => write!(
                f,
                "maps {} and {step} are not contiguous on {:?}",
                step - 1,
                simplex.indices()
            ),
            ChainDefect::StartMismatch { vertex } => {
                write!(f, "first map differs from the expected start at vertex {vertex}")
            }
            ChainDefect::EndMismatch { vertex } => {
                write!(f, "last map differs from the expected end at vertex {vertex}")
            }
        }
    }
}

impl ContiguityChain {
    /// Checks every invariant of a chain.
    pub fn new(maps: Vec<SimplicialMap>) -> std::result::Result<Self, ChainDefect> {
        let chain = ContiguityChain { maps };
        chain.check_links()?;
        Ok(chain)
    }

    pub(crate) fn new_unchecked(maps: Vec<SimplicialMap>) -> Self {
        debug_assert!(!maps.is_empty());
        ContiguityChain { maps }
    }

    /// Length `c` (number of contiguity steps).
    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    /// A chain of length 0 is a single map.
    pub fn is_trivial(&self) -> bool {
        self.maps.len() == 1
    }

    pub fn maps(&self) -> &[SimplicialMap] {
        &self.maps
    }

    pub fn start(&self) -> &SimplicialMap {
        &self.maps[0]
    }

    pub fn end(&self) -> &SimplicialMap {
        &self.maps[self.maps.len() - 1]
    }

    fn check_links(&self) -> std::result::Result<(), ChainDefect> {
        let first = self.maps.first().ok_or(ChainDefect::Empty)?;
        for (i, h) in self.maps.iter().enumerate() {
            if !h.same_ends(first) {
                return Err(ChainDefect::DomainMismatch { map: i });
            }
            if let Some(s) = h.first_non_simplicial() {
                return Err(ChainDefect::NotSimplicial {
                    map: i,
                    simplex: s.clone(),
                });
            }
        }
        for (i, w) in self.maps.windows(2).enumerate() {
            if let Some(s) =
                first_non_contiguous(&first.domain, &first.codomain, &w[0].images, &w[1].images)
            {
                return Err(ChainDefect::NotContiguous {
                    step: i + 1,
                    simplex: s.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Checks that `chain` is a valid chain from `start` to `end`, comparing the
/// endpoints as exact vertex tables.
pub fn verify_chain(
    chain: &ContiguityChain,
    start: &SimplicialMap,
    end: &SimplicialMap,
) -> std::result::Result<(), ChainDefect> {
    chain.check_links()?;
    let first = chain.start();
    if !first.same_ends(start) {
        return Err(ChainDefect::DomainMismatch { map: 0 });
    }
    if !chain.end().same_ends(end) {
        return Err(ChainDefect::DomainMismatch { map: chain.len() });
    }
    if let Some(v) = first_difference(first.images(), start.images()) {
        return Err(ChainDefect::StartMismatch { vertex: v });
    }
    if let Some(v) = first_difference(chain.end().images(), end.images()) {
        return Err(ChainDefect::EndMismatch { vertex: v });
    }
    Ok(())
}

fn first_difference(a: &[VertexId], b: &[VertexId]) -> Option<VertexId> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .map(VertexId::from)
}

/// Extends `chain` to length `target` by repeating its final map.
pub fn pad_chain(chain: &ContiguityChain, target: usize) -> Result<ContiguityChain> {
    if target < chain.len() {
        return Err(Error::ChainTooShort {
            target,
            len: chain.len(),
        });
    }
    let mut maps = chain.maps.clone();
    maps.resize(target + 1, chain.end().clone());
    Ok(ContiguityChain::new_unchecked(maps))
}

/// Moves a chain to new endpoints by prepending `new_start` and appending
/// `new_end`. Both must be contiguous to the old endpoints; the result has
/// length `c + 2`.
pub fn transport_chain(
    chain: &ContiguityChain,
    new_start: &SimplicialMap,
    new_end: &SimplicialMap,
) -> Result<ContiguityChain> {
    let mut maps = Vec::with_capacity(chain.maps.len() + 2);
    maps.push(new_start.clone());
    maps.extend(chain.maps.iter().cloned());
    maps.push(new_end.clone());
    link_checked(maps)
}

/// Carries a chain on `J` to `Sd(J)`: composes every map with `lambda`
/// (an approximation `Sd(J) → J` of the identity), then joins the new
/// endpoints with one step at each end. Result length is `c + 2`.
pub fn refine_chain(
    chain: &ContiguityChain,
    lambda: &SimplicialMap,
    new_start: &SimplicialMap,
    new_end: &SimplicialMap,
) -> Result<ContiguityChain> {
    let mut maps = Vec::with_capacity(chain.maps.len() + 2);
    maps.push(new_start.clone());
    for h in &chain.maps {
        maps.push(h.compose(lambda)?);
    }
    maps.push(new_end.clone());
    link_checked(maps)
}

fn link_checked(maps: Vec<SimplicialMap>) -> Result<ContiguityChain> {
    ContiguityChain::new(maps).map_err(|d| Error::ContiguityAssertion(d.to_string()))
}
