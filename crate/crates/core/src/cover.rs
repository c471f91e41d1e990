//! Cover search over `Sd^b(K×K)` and certificate verification.
//!
//! A [`CoverCertificate`] lists subcomplexes covering `Sd^b(K×K)` together
//! with a contiguity chain from `π_1|J` to `π_2|J` on each piece `J`. It
//! witnesses `SC^b_c(K) <= pieces - 1` and can be re-checked from scratch
//! with [`verify_certificate`]; nothing in it is trusted.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::chain_search::{find_chain, ChainStrategy};
use crate::complex::{first_uncovered, Complex, Materialized, Simplex, Subcomplex, VertexId};
use crate::construct::{
    approx_identity, barycentric_subdivision, ApproxPolicy, Tower, DEFAULT_SIZE_BUDGET,
};
use crate::error::{Error, Result};
use crate::maps::{pad_chain, refine_chain, transport_chain, verify_chain, ChainDefect, ContiguityChain, SimplicialMap};

/// One local domain and its homotopy.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedPiece {
    /// Subcomplex of the tower's top complex.
    pub piece: Subcomplex,
    /// Chain on the materialized piece from `π_1|piece` to `π_2|piece`.
    pub chain: ContiguityChain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverCertificate {
    pub base: Arc<Complex>,
    pub b: usize,
    pub c: usize,
    pub policy: ApproxPolicy,
    pub pieces: Vec<CertifiedPiece>,
}

impl CoverCertificate {
    /// The certified upper bound on `SC^b_c(base)`.
    pub fn bound(&self) -> usize {
        self.pieces.len().saturating_sub(1)
    }

    pub fn tower(&self) -> Result<Tower> {
        Tower::build(&self.base, self.b, DEFAULT_SIZE_BUDGET)
    }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq)]
pub enum CertificateDefect {
    NoPieces,
    Tower(String),
    ForeignPiece { piece: usize },
    Uncovered { simplex: Vec<String> },
    ChainTooLong { piece: usize, len: usize, c: usize },
    Chain {
        piece: usize,
        defect: ChainDefect,
        /// Tower labels of the offending simplex or vertex.
        at: Vec<String>,
    },
}

impl fmt::Display for CertificateDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateDefect::NoPieces => write!(f, "certificate has no pieces"),
            CertificateDefect::Tower(e) => write!(f, "cannot rebuild the tower: {e}"),
            CertificateDefect::ForeignPiece { piece } => {
                write!(f, "piece {piece} is not a subcomplex of the rebuilt tower")
            }
            CertificateDefect::Uncovered { simplex } => {
                write!(f, "simplex [{}] is not covered by any piece", simplex.join(", "))
            }
            CertificateDefect::ChainTooLong { piece, len, c } => {
                write!(f, "piece {piece}: chain length {len} exceeds c = {c}")
            }
            CertificateDefect::Chain { piece, defect, at } => {
                write!(f, "piece {piece}: {defect} [{}]", at.join(", "))
            }
        }
    }
}

impl std::error::Error for CertificateDefect {}

/// The restricted projections on one piece.
pub(crate) struct PieceEnds {
    pub materialized: Materialized,
    pub start: SimplicialMap,
    pub end: SimplicialMap,
}

pub(crate) fn piece_ends(piece: &Subcomplex, pi1: &SimplicialMap, pi2: &SimplicialMap) -> Result<PieceEnds> {
    let materialized = piece.materialize();
    let start = pi1.restrict(&materialized)?;
    let end = pi2.restrict(&materialized)?;
    Ok(PieceEnds {
        materialized,
        start,
        end,
    })
}

/// Rebuilds `Sd^b(K×K)` and both projections from the certificate header and
/// checks the cover, every chain's endpoints and links, and the bound `c`.
pub fn verify_certificate(cert: &CoverCertificate) -> std::result::Result<(), CertificateDefect> {
    if cert.pieces.is_empty() {
        return Err(CertificateDefect::NoPieces);
    }
    let tower = cert.tower().map_err(|e| CertificateDefect::Tower(e.to_string()))?;
    let top = tower.top();
    for (i, p) in cert.pieces.iter().enumerate() {
        if !crate::complex::same_complex(p.piece.ambient(), top) {
            return Err(CertificateDefect::ForeignPiece { piece: i });
        }
    }
    let pieces: Vec<Subcomplex> = cert.pieces.iter().map(|p| p.piece.clone()).collect();
    if let Some(s) = first_uncovered(top, &pieces) {
        return Err(CertificateDefect::Uncovered {
            simplex: labels_of(top, s.vertices()),
        });
    }
    let pi1 = tower
        .projection_composite(1, cert.policy)
        .map_err(|e| CertificateDefect::Tower(e.to_string()))?;
    let pi2 = tower
        .projection_composite(2, cert.policy)
        .map_err(|e| CertificateDefect::Tower(e.to_string()))?;
    for (i, p) in cert.pieces.iter().enumerate() {
        if p.chain.len() > cert.c {
            return Err(CertificateDefect::ChainTooLong {
                piece: i,
                len: p.chain.len(),
                c: cert.c,
            });
        }
        let ends = piece_ends(&p.piece, &pi1, &pi2).map_err(|e| CertificateDefect::Tower(e.to_string()))?;
        verify_chain(&p.chain, &ends.start, &ends.end).map_err(|defect| {
            let dom = &ends.materialized.complex;
            let at = match &defect {
                ChainDefect::NotSimplicial { simplex, .. } | ChainDefect::NotContiguous { simplex, .. } => {
                    labels_of(dom, simplex.vertices())
                }
                ChainDefect::StartMismatch { vertex } | ChainDefect::EndMismatch { vertex } => {
                    labels_of(dom, &[*vertex])
                }
                ChainDefect::Empty | ChainDefect::DomainMismatch { .. } => Vec::new(),
            };
            CertificateDefect::Chain { piece: i, defect, at }
        })?;
    }
    Ok(())
}

fn labels_of(k: &Complex, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| k.label(v).to_string()).collect()
}

/// Extends every chain to length `c_target` (witness of monotonicity in `c`).
pub fn pad_certificate(cert: &CoverCertificate, c_target: usize) -> Result<CoverCertificate> {
    let pieces = cert
        .pieces
        .iter()
        .map(|p| {
            Ok(CertifiedPiece {
                piece: p.piece.clone(),
                chain: pad_chain(&p.chain, c_target)?,
            })
        })
        .collect::<Result<_>>()?;
    if c_target < cert.c {
        return Err(Error::ChainTooShort {
            target: c_target,
            len: cert.c,
        });
    }
    Ok(CoverCertificate {
        c: c_target,
        pieces,
        ..cert.clone()
    })
}

/// Re-expresses a certificate for another approximation policy. Each chain
/// gains one step at each end, so `c` becomes `c + 2`.
pub fn transport_certificate(cert: &CoverCertificate, policy: ApproxPolicy) -> Result<CoverCertificate> {
    let tower = cert.tower()?;
    let (old1, old2) = (
        tower.projection_composite(1, cert.policy)?,
        tower.projection_composite(2, cert.policy)?,
    );
    let (new1, new2) = (
        tower.projection_composite(1, policy)?,
        tower.projection_composite(2, policy)?,
    );
    let mut pieces = Vec::with_capacity(cert.pieces.len());
    for p in &cert.pieces {
        let old = piece_ends(&p.piece, &old1, &old2)?;
        let new = piece_ends(&p.piece, &new1, &new2)?;
        if !old.start.same_ends(p.chain.start()) {
            return Err(Error::Mismatch("chain domain differs from its piece"));
        }
        let chain = transport_chain(&p.chain, &new.start, &new.end)?;
        pieces.push(CertifiedPiece {
            piece: p.piece.clone(),
            chain,
        });
    }
    Ok(CoverCertificate {
        base: cert.base.clone(),
        b: cert.b,
        c: cert.c + 2,
        policy,
        pieces,
    })
}

/// Carries a certificate from `Sd^b` to `Sd^{b+1}`: each piece `J` becomes
/// `Sd(J)` and each chain is composed with an approximation `Sd(J) → J` of
/// the identity (chosen by `lambda_policy`), gaining one step at each end.
pub fn refine_certificate(cert: &CoverCertificate, lambda_policy: ApproxPolicy) -> Result<CoverCertificate> {
    let tower = Tower::build(&cert.base, cert.b + 1, DEFAULT_SIZE_BUDGET)?;
    let last = tower.levels.last().expect("b + 1 >= 1 levels");
    let top = tower.top().clone();
    let pi1 = tower.projection_composite(1, cert.policy)?;
    let pi2 = tower.projection_composite(2, cert.policy)?;
    let mut pieces = Vec::with_capacity(cert.pieces.len());
    for p in &cert.pieces {
        let j = p.piece.materialize();
        let sd_j = barycentric_subdivision(&j.complex);
        let lambda = approx_identity(&sd_j, lambda_policy);
        // Sd(J) vertex (a simplex of J) -> vertex of Sd^{b+1}(K×K)
        let lift = |w: VertexId| -> VertexId {
            let local = sd_j.decode(w);
            let ambient = Simplex::new_unchecked(local.vertices().iter().map(|v| j.to_ambient[v.idx()]).collect());
            last.vertex_of(&ambient).expect("simplices of J are simplices of Sd^b")
        };
        let maximal = sd_j
            .complex
            .maximal_simplices()
            .iter()
            .map(|s| Simplex::from_unsorted(s.vertices().iter().map(|&w| lift(w)).collect()).expect("non-empty"))
            .collect();
        let piece = Subcomplex::from_antichain_unchecked(top.clone(), maximal);
        let ends = piece_ends(&piece, &pi1, &pi2)?;
        // identify the materialized piece with Sd(J)
        let mut to_sd = HashMap::with_capacity(sd_j.complex.num_vertices());
        for w in sd_j.complex.vertex_ids() {
            to_sd.insert(lift(w), w);
        }
        let phi_images = ends
            .materialized
            .to_ambient
            .iter()
            .map(|a| to_sd[a])
            .collect();
        let phi = SimplicialMap::new(ends.materialized.complex.clone(), sd_j.complex.clone(), phi_images)?;
        let lambda_on_piece = lambda.compose(&phi)?;
        let chain = refine_chain(&p.chain, &lambda_on_piece, &ends.start, &ends.end)?;
        pieces.push(CertifiedPiece { piece, chain });
    }
    Ok(CoverCertificate {
        base: cert.base.clone(),
        b: cert.b + 1,
        c: cert.c + 2,
        policy: cert.policy,
        pieces,
    })
}

/// How to seed candidate pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedStyle {
    /// Closed star of the diagonal: maximal simplices with a vertex whose
    /// carrier in `K×K` is a diagonal simplex.
    Diagonal,
    /// Maximal simplices not in the diagonal seed.
    Antidiagonal,
    /// One singleton seed per maximal simplex not yet covered.
    GreedyGrowth,
}

/// Vertices of `Sd^b(K×K)` whose carrier lies in the diagonal of `K×K`.
pub fn diagonal_vertices(tower: &Tower) -> Vec<bool> {
    tower
        .product_carriers()
        .iter()
        .map(|car| {
            car.vertices().iter().all(|&p| {
                let (u, v) = tower.product.decode(p);
                u == v
            })
        })
        .collect()
}

/// Candidate pieces of the given style. `covered` is only consulted by
/// [`SeedStyle::GreedyGrowth`]. Empty seeds are omitted.
pub fn seed_pieces(tower: &Tower, style: SeedStyle, covered: &[Subcomplex]) -> Vec<Subcomplex> {
    let top = tower.top();
    let pieces: Vec<Vec<Simplex>> = match style {
        SeedStyle::Diagonal | SeedStyle::Antidiagonal => {
            let diag = diagonal_vertices(tower);
            let want = style == SeedStyle::Diagonal;
            let chosen = top
                .maximal_simplices()
                .iter()
                .filter(|s| s.vertices().iter().any(|v| diag[v.idx()]) == want)
                .cloned()
                .collect();
            vec![chosen]
        }
        SeedStyle::GreedyGrowth => {
            let covered_set = covered_maximal(top, covered);
            top.maximal_simplices()
                .iter()
                .enumerate()
                .filter(|(k, _)| !covered_set[*k])
                .map(|(_, s)| vec![s.clone()])
                .collect()
        }
    };
    pieces
        .into_iter()
        .filter(|p| !p.is_empty())
        .map(|p| Subcomplex::from_antichain_unchecked(top.clone(), p))
        .collect()
}

/// Flags the maximal simplices of `top` lying in some piece.
fn covered_maximal(top: &Complex, pieces: &[Subcomplex]) -> Vec<bool> {
    let mut flags = vec![false; top.maximal_simplices().len()];
    let index: HashMap<&Simplex, usize> = top
        .maximal_simplices()
        .iter()
        .enumerate()
        .map(|(k, s)| (s, k))
        .collect();
    for p in pieces {
        for s in p.maximal_simplices() {
            if let Some(&k) = index.get(s) {
                flags[k] = true;
            }
        }
    }
    flags
}

/// Parameters for [`sc_upper_bound`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub b: usize,
    pub c_max: usize,
    pub max_pieces: usize,
    pub seed: u64,
    /// Number of piece evaluations (one chain search each) the whole run
    /// may spend.
    pub budget: usize,
    /// Highest subdivision level to escalate to when level `b` fails.
    pub max_b: usize,
    pub size_budget: u128,
    pub policy: ApproxPolicy,
    pub strategy: ChainStrategy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            b: 1,
            c_max: 16,
            max_pieces: 2,
            seed: 0,
            budget: 2_000,
            max_b: 1,
            size_budget: DEFAULT_SIZE_BUDGET,
            policy: ApproxPolicy::Max,
            strategy: ChainStrategy::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub evaluations: usize,
    pub levels_tried: Vec<usize>,
    pub chain_lengths: Vec<usize>,
    pub piece_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Certified(CoverCertificate),
    /// The evaluation budget ran out (or every strategy was tried) without a
    /// cover. Not a lower bound.
    BudgetExhausted,
    /// Escalating to a finer level would exceed the size guardrail.
    GuardrailAbort { level: usize, projected: u128 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub outcome: Outcome,
    /// Level of the certificate, or the last level searched.
    pub b: usize,
    pub stats: SearchStats,
}

impl BoundReport {
    pub fn bound(&self) -> Option<usize> {
        self.certificate().map(CoverCertificate::bound)
    }

    pub fn c(&self) -> Option<usize> {
        self.certificate().map(|c| c.c)
    }

    pub fn certificate(&self) -> Option<&CoverCertificate> {
        match &self.outcome {
            Outcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Searches for a cover of `Sd^b(K×K)` by at most `max_pieces` pieces with
/// `c`-contiguous projections, `c <= c_max`.
///
/// Reports a bound only together with a certificate that has been verified.
/// Failure within the budget says nothing about `SC^b_c(K)`.
pub fn sc_upper_bound(base: &Arc<Complex>, cfg: &SearchConfig) -> Result<BoundReport> {
    if cfg.max_pieces == 0 {
        return Err(Error::Malformed("max_pieces must be at least 1".into()));
    }
    let mut stats = SearchStats::default();
    let mut remaining = cfg.budget;
    let mut tower = Tower::build(base, cfg.b, cfg.size_budget)?;
    loop {
        stats.levels_tried.push(tower.b());
        if let Some(found) = search_level(&tower, cfg, &mut remaining, &mut stats)? {
            let c = found.iter().map(|p| p.chain.len()).max().unwrap_or(0);
            stats.chain_lengths = found.iter().map(|p| p.chain.len()).collect();
            stats.piece_sizes = found.iter().map(|p| p.piece.maximal_simplices().len()).collect();
            let cert = CoverCertificate {
                base: base.clone(),
                b: tower.b(),
                c,
                policy: cfg.policy,
                pieces: found,
            };
            verify_certificate(&cert).map_err(|d| Error::Internal(format!("search produced a bad certificate: {d}")))?;
            return Ok(BoundReport {
                outcome: Outcome::Certified(cert),
                b: tower.b(),
                stats,
            });
        }
        if tower.b() >= cfg.max_b || remaining == 0 {
            return Ok(BoundReport {
                outcome: Outcome::BudgetExhausted,
                b: tower.b(),
                stats,
            });
        }
        // finer level, as in the proof strategy: subdivide until covers appear
        match Tower::build(base, tower.b() + 1, cfg.size_budget) {
            Ok(t) => tower = t,
            Err(Error::SizeGuardrail { level, projected, .. }) => {
                return Ok(BoundReport {
                    outcome: Outcome::GuardrailAbort { level, projected },
                    b: tower.b(),
                    stats,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// Evaluates pieces under a shared budget, memoizing by maximal simplices.
struct Evaluator<'a> {
    pi1: SimplicialMap,
    pi2: SimplicialMap,
    cfg: &'a SearchConfig,
    cache: HashMap<Vec<Simplex>, Option<ContiguityChain>>,
}

enum Eval {
    Good(ContiguityChain),
    Bad,
    OutOfBudget,
}

impl Evaluator<'_> {
    fn eval(&mut self, piece: &Subcomplex, remaining: &mut usize, stats: &mut SearchStats) -> Result<Eval> {
        if let Some(hit) = self.cache.get(piece.maximal_simplices()) {
            return Ok(hit.clone().map_or(Eval::Bad, Eval::Good));
        }
        if *remaining == 0 {
            return Ok(Eval::OutOfBudget);
        }
        *remaining -= 1;
        stats.evaluations += 1;
        let ends = piece_ends(piece, &self.pi1, &self.pi2)?;
        let found = find_chain(&ends.start, &ends.end, self.cfg.c_max, self.cfg.strategy, self.cfg.seed)?;
        self.cache.insert(piece.maximal_simplices().to_vec(), found.clone());
        Ok(found.map_or(Eval::Bad, Eval::Good))
    }
}

fn search_level(
    tower: &Tower,
    cfg: &SearchConfig,
    remaining: &mut usize,
    stats: &mut SearchStats,
) -> Result<Option<Vec<CertifiedPiece>>> {
    let top = tower.top();
    let mut ev = Evaluator {
        pi1: tower.projection_composite(1, cfg.policy)?,
        pi2: tower.projection_composite(2, cfg.policy)?,
        cfg,
        cache: HashMap::new(),
    };
    macro_rules! eval {
        ($piece:expr) => {
            match ev.eval($piece, remaining, stats)? {
                Eval::Good(ch) => Some(ch),
                Eval::Bad => None,
                Eval::OutOfBudget => return Ok(None),
            }
        };
    }

    // one piece: the whole complex
    let whole = Subcomplex::full(top.clone());
    if let Some(chain) = eval!(&whole) {
        return Ok(Some(vec![CertifiedPiece { piece: whole, chain }]));
    }
    if cfg.max_pieces == 1 {
        return Ok(None);
    }

    // two pieces around the diagonal and away from it
    let mut good: Vec<CertifiedPiece> = Vec::new();
    let diag = seed_pieces(tower, SeedStyle::Diagonal, &[]);
    let anti = seed_pieces(tower, SeedStyle::Antidiagonal, &[]);
    if let (Some(d), Some(a)) = (diag.first(), anti.first()) {
        let dc = eval!(d);
        let ac = eval!(a);
        match (dc, ac) {
            (Some(dc), Some(ac)) => {
                return Ok(Some(vec![
                    CertifiedPiece { piece: d.clone(), chain: dc },
                    CertifiedPiece { piece: a.clone(), chain: ac },
                ]))
            }
            (Some(dc), None) => {
                if let Some(pair) = rebalance(top, d, a, dc, remaining, stats, &mut ev)? {
                    return Ok(Some(pair));
                }
            }
            (None, Some(ac)) => {
                if let Some(pair) = rebalance(top, a, d, ac, remaining, stats, &mut ev)? {
                    return Ok(Some(pair));
                }
            }
            (None, None) => {}
        }
    }

    // greedy growth of new pieces over what is still uncovered
    loop {
        let covered: Vec<Subcomplex> = good.iter().map(|p| p.piece.clone()).collect();
        let seeds = seed_pieces(tower, SeedStyle::GreedyGrowth, &covered);
        let Some(seed) = seeds.into_iter().next() else {
            return Ok(Some(good));
        };
        if good.len() == cfg.max_pieces {
            return Ok(None);
        }
        let covered_flags = covered_maximal(top, &covered);
        let Some(chain) = eval!(&seed) else {
            // a single simplex always admits a chain into a connected
            // codomain only if c_max allows it; give up on this level
            return Ok(None);
        };
        let mut piece = CertifiedPiece { piece: seed, chain };
        let adjacency = FacetAdjacency::new(top);
        let index: HashMap<&Simplex, usize> = top
            .maximal_simplices()
            .iter()
            .enumerate()
            .map(|(k, s)| (s, k))
            .collect();
        let mut rejected = BTreeSet::new();
        loop {
            let members: BTreeSet<usize> = piece
                .piece
                .maximal_simplices()
                .iter()
                .map(|s| index[s])
                .collect();
            // uncovered neighbours first, then covered ones
            let mut frontier: Vec<usize> = members
                .iter()
                .flat_map(|&k| adjacency.neighbours(k))
                .filter(|k| !members.contains(k) && !rejected.contains(k))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            frontier.sort_by_key(|&k| (covered_flags[k], k));
            let mut grew = false;
            for k in frontier {
                if covered_flags[k] {
                    break;
                }
                let mut simplices = piece.piece.maximal_simplices().to_vec();
                simplices.push(top.maximal_simplices()[k].clone());
                let candidate = Subcomplex::from_antichain_unchecked(top.clone(), simplices);
                match eval!(&candidate) {
                    Some(chain) => {
                        piece = CertifiedPiece { piece: candidate, chain };
                        grew = true;
                        break;
                    }
                    None => {
                        rejected.insert(k);
                    }
                }
            }
            if !grew {
                break;
            }
        }
        good.push(piece);
    }
}

/// Shifts the frontier between a good piece and a bad one: simplices of the
/// bad piece touching the good one move across while the good piece stays
/// good, until the bad piece becomes good or nothing moves.
#[allow(clippy::too_many_arguments)]
fn rebalance(
    top: &Arc<Complex>,
    good: &Subcomplex,
    bad: &Subcomplex,
    good_chain: ContiguityChain,
    remaining: &mut usize,
    stats: &mut SearchStats,
    ev: &mut Evaluator<'_>,
) -> Result<Option<Vec<CertifiedPiece>>> {
    let mut good = CertifiedPiece {
        piece: good.clone(),
        chain: good_chain,
    };
    let mut bad: Vec<Simplex> = bad.maximal_simplices().to_vec();
    for _round in 0..top.num_vertices() {
        let good_vertices: BTreeSet<VertexId> = good.piece.vertices().into_iter().collect();
        let (frontier, rest): (Vec<Simplex>, Vec<Simplex>) = bad
            .iter()
            .cloned()
            .partition(|s| s.vertices().iter().any(|v| good_vertices.contains(v)));
        if frontier.is_empty() || rest.is_empty() {
            return Ok(None);
        }
        let mut grown = good.piece.maximal_simplices().to_vec();
        grown.extend(frontier.iter().cloned());
        let grown = Subcomplex::from_antichain_unchecked(top.clone(), grown);
        let Eval::Good(chain) = ev.eval(&grown, remaining, stats)? else {
            return Ok(None);
        };
        good = CertifiedPiece { piece: grown, chain };
        bad = rest;
        // keep the overlap: the shrunken piece still includes the frontier
        // simplices' shared faces through its own closure
        let shrunk = Subcomplex::from_antichain_unchecked(top.clone(), bad.clone());
        match ev.eval(&shrunk, remaining, stats)? {
            Eval::Good(chain) => {
                return Ok(Some(vec![good, CertifiedPiece { piece: shrunk, chain }]));
            }
            Eval::Bad => continue,
            Eval::OutOfBudget => return Ok(None),
        }
    }
    Ok(None)
}

/// Maximal simplices sharing a codimension-one face.
struct FacetAdjacency {
    neighbours: Vec<Vec<usize>>,
}

impl FacetAdjacency {
    fn new(k: &Complex) -> Self {
        let mut by_facet: HashMap<Simplex, Vec<usize>> = HashMap::new();
        for (i, s) in k.maximal_simplices().iter().enumerate() {
            if s.len() == 1 {
                continue;
            }
            for f in s.faces_of_size(s.len() - 1) {
                by_facet.entry(f).or_default().push(i);
            }
        }
        let mut neighbours = vec![Vec::new(); k.maximal_simplices().len()];
        for group in by_facet.values() {
            for &a in group {
                for &b in group {
                    if a != b {
                        neighbours[a].push(b);
                    }
                }
            }
        }
        for n in &mut neighbours {
            n.sort_unstable();
            n.dedup();
        }
        FacetAdjacency { neighbours }
    }

    fn neighbours(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbours[k].iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{circle, simplex};

    fn cfg(b: usize, c_max: usize, max_pieces: usize) -> SearchConfig {
        SearchConfig {
            b,
            c_max,
            max_pieces,
            max_b: b,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn triangle_needs_one_piece() {
        let report = sc_upper_bound(&simplex(2), &cfg(0, 1, 1)).unwrap();
        assert_eq!(report.bound(), Some(0));
        let cert = report.certificate().unwrap();
        assert!(cert.c <= 1);
        assert_eq!(verify_certificate(cert), Ok(()));
    }

    #[test]
    fn circle_at_level_zero_fails_honestly() {
        let config = SearchConfig {
            budget: 1,
            ..cfg(0, 2, 1)
        };
        let report = sc_upper_bound(&circle(), &config).unwrap();
        assert_eq!(report.outcome, Outcome::BudgetExhausted);
        assert_eq!(report.bound(), None);
    }

    #[test]
    fn zero_pieces_rejected() {
        assert!(sc_upper_bound(&circle(), &cfg(0, 1, 0)).is_err());
    }

    #[test]
    fn guardrail_propagates_at_start() {
        let config = SearchConfig {
            size_budget: 10,
            ..cfg(1, 1, 1)
        };
        assert!(matches!(sc_upper_bound(&circle(), &config), Err(Error::SizeGuardrail { .. })));
    }

    #[test]
    fn guardrail_stops_escalation() {
        let config = SearchConfig {
            size_budget: 200,
            max_b: 3,
            budget: 1,
            ..cfg(0, 1, 1)
        };
        let report = sc_upper_bound(&circle(), &config).unwrap();
        assert!(matches!(report.outcome, Outcome::GuardrailAbort { .. } | Outcome::BudgetExhausted));
    }

    #[test]
    fn diagonal_seed_contains_diagonal_vertex() {
        let tower = Tower::build(&circle(), 0, DEFAULT_SIZE_BUDGET).unwrap();
        let seeds = seed_pieces(&tower, SeedStyle::Diagonal, &[]);
        let v00 = tower.top().vertex_by_label("(0,0)").unwrap();
        assert!(seeds[0].vertices().contains(&v00));
    }

    #[test]
    fn greedy_seeds_cover_the_rest() {
        let tower = Tower::build(&circle(), 1, DEFAULT_SIZE_BUDGET).unwrap();
        let full = Subcomplex::full(tower.top().clone());
        assert!(seed_pieces(&tower, SeedStyle::GreedyGrowth, &[full]).is_empty());
        let diag = seed_pieces(&tower, SeedStyle::Diagonal, &[]);
        let anti = seed_pieces(&tower, SeedStyle::Antidiagonal, &[]);
        let n = tower.top().maximal_simplices().len();
        assert_eq!(
            diag[0].maximal_simplices().len() + anti[0].maximal_simplices().len(),
            n
        );
        let rest = seed_pieces(&tower, SeedStyle::GreedyGrowth, &diag);
        assert_eq!(rest.len(), anti[0].maximal_simplices().len());
    }

    #[test]
    fn corrupted_chain_is_localized() {
        let report = sc_upper_bound(&simplex(2), &cfg(0, 1, 1)).unwrap();
        let mut cert = report.certificate().unwrap().clone();
        let chain = &cert.pieces[0].chain;
        let mut maps = chain.maps().to_vec();
        let first = &maps[0];
        let mut images = first.images().to_vec();
        images[0] = VertexId((images[0].0 + 1) % 3);
        maps[0] = SimplicialMap::new_unchecked(first.domain().clone(), first.codomain().clone(), images);
        cert.pieces[0].chain = ContiguityChain::new_unchecked(maps);
        assert!(matches!(
            verify_certificate(&cert),
            Err(CertificateDefect::Chain { piece: 0, .. })
        ));
    }

    #[test]
    fn claimed_c_too_small_is_rejected() {
        let report = sc_upper_bound(&simplex(2), &cfg(0, 1, 1)).unwrap();
        let mut cert = report.certificate().unwrap().clone();
        if cert.c == 0 {
            return;
        }
        cert.c -= 1;
        assert!(matches!(
            verify_certificate(&cert),
            Err(CertificateDefect::ChainTooLong { .. })
        ));
    }

    #[test]
    fn missing_piece_is_uncovered() {
        let report = sc_upper_bound(&circle(), &cfg(1, 16, 2)).unwrap();
        let mut cert = report.certificate().unwrap().clone();
        cert.pieces.pop();
        assert!(matches!(verify_certificate(&cert), Err(CertificateDefect::Uncovered { .. })));
        cert.pieces.clear();
        assert_eq!(verify_certificate(&cert), Err(CertificateDefect::NoPieces));
    }

    #[test]
    fn algebra_on_triangle() {
        let report = sc_upper_bound(&simplex(2), &cfg(0, 1, 1)).unwrap();
        let cert = report.certificate().unwrap();
        let padded = pad_certificate(cert, 3).unwrap();
        assert_eq!(padded.c, 3);
        assert_eq!(verify_certificate(&padded), Ok(()));
        assert!(pad_certificate(&padded, 1).is_err());
        let moved = transport_certificate(cert, ApproxPolicy::Min).unwrap();
        assert_eq!((moved.c, moved.policy), (cert.c + 2, ApproxPolicy::Min));
        assert_eq!(verify_certificate(&moved), Ok(()));
        let finer = refine_certificate(cert, ApproxPolicy::Max).unwrap();
        assert_eq!((finer.b, finer.c), (1, cert.c + 2));
        assert_eq!(verify_certificate(&finer), Ok(()));
    }
}
