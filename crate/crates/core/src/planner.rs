//! Piecewise-linear motion planners extracted from certificates.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::complex::{Complex, Materialized, Simplex, VertexId};
use crate::construct::{ProductComplex, SubdivisionComplex, Tower};
use crate::cover::CoverCertificate;
use crate::error::{Error, Result};

/// Tolerance on barycentric coordinates and affine residuals.
pub const TOLERANCE: f64 = 1e-9;

/// Coordinates for every vertex of a complex. Simplices are realized as
/// convex hulls of their vertex images.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    dim: usize,
    coords: Vec<Vec<f64>>,
}

impl Embedding {
    /// `coords[v]` is the point of vertex `v` of `k`.
    pub fn new(k: &Complex, dim: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.len() < k.num_vertices() {
            return Err(Error::MissingCoordinates(k.label(VertexId::from(coords.len())).to_string()));
        }
        if coords.len() > k.num_vertices() {
            return Err(Error::Malformed(format!(
                "{} points for {} vertices",
                coords.len(),
                k.num_vertices()
            )));
        }
        if dim == 0 {
            return Err(Error::Malformed("embedding dimension must be positive".into()));
        }
        if let Some(p) = coords.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        if coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite coordinate".into()));
        }
        Ok(Embedding { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, v: VertexId) -> &[f64] {
        &self.coords[v.idx()]
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    /// `Σ weights[i] · point(vertices[i])`.
    pub fn combine(&self, vertices: &[VertexId], weights: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (&v, &w) in vertices.iter().zip(weights) {
            for (o, x) in out.iter_mut().zip(self.point(v)) {
                *o += w * x;
            }
        }
        out
    }
}

/// `(u, v) ↦ (e1(u), e2(v))`.
pub fn product_embedding(product: &ProductComplex, e1: &Embedding, e2: &Embedding) -> Embedding {
    let coords = product
        .complex
        .vertex_ids()
        .map(|w| {
            let (u, v) = product.decode(w);
            let mut p = e1.point(u).to_vec();
            p.extend_from_slice(e2.point(v));
            p
        })
        .collect();
    Embedding {
        dim: e1.dim + e2.dim,
        coords,
    }
}

/// Barycenters of the parent's simplices.
pub fn subdivision_embedding(sd: &SubdivisionComplex, parent: &Embedding) -> Embedding {
    let coords = sd
        .complex
        .vertex_ids()
        .map(|w| {
            let s = sd.decode(w);
            let weight = 1.0 / s.len() as f64;
            parent.combine(s.vertices(), &vec![weight; s.len()])
        })
        .collect();
    Embedding {
        dim: parent.dim,
        coords,
    }
}

/// Embedding of `Sd^b(K×K)` induced by an embedding of `K`.
pub fn induced_embedding(tower: &Tower, base: &Embedding) -> Result<Embedding> {
    if base.coords.len() != tower.base.num_vertices() {
        return Err(Error::MissingCoordinates(format!(
            "{} points for {} vertices",
            base.coords.len(),
            tower.base.num_vertices()
        )));
    }
    let mut e = product_embedding(&tower.product, base, base);
    for sd in &tower.levels {
        e = subdivision_embedding(sd, &e);
    }
    Ok(e)
}

/// Barycentric coordinates of `a` with respect to the points of `s`, or
/// `None` when `a` is off the affine hull or outside the simplex.
pub fn barycentric(e: &Embedding, s: &Simplex, a: &[f64]) -> Option<Vec<f64>> {
    let vs = s.vertices();
    let p0 = e.point(vs[0]);
    let k = vs.len() - 1;
    let mut lambda = vec![0.0; vs.len()];
    let residual = if k == 0 {
        dist(p0, a)
    } else {
        let m = DMatrix::from_fn(e.dim, k, |r, c| e.point(vs[c + 1])[r] - p0[r]);
        let rhs = DVector::from_fn(e.dim, |r, _| a[r] - p0[r]);
        let mu = m.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
        lambda[0] = 1.0 - mu.sum();
        for i in 0..k {
            lambda[i + 1] = mu[i];
        }
        (&m * &mu - &rhs).norm()
    };
    if k == 0 {
        lambda[0] = 1.0;
    }
    (residual <= TOLERANCE && lambda.iter().all(|&l| l >= -TOLERANCE)).then_some(lambda)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Where a configuration pair sits in the cover.
#[derive(Clone, Debug, PartialEq)]
pub struct Location {
    pub piece: usize,
    /// Minimal carrier, as a simplex of `Sd^b(K×K)`.
    pub carrier: Simplex,
    /// Barycentric weights, aligned with `carrier`.
    pub weights: Vec<f64>,
}

/// A path given by breakpoints at non-decreasing times from 0 to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PLPath {
    pub breakpoints: Vec<Vec<f64>>,
    pub times: Vec<f64>,
}

impl PLPath {
    pub fn new(breakpoints: Vec<Vec<f64>>, times: Vec<f64>) -> Result<Self> {
        let ok = breakpoints.len() >= 2
            && breakpoints.len() == times.len()
            && times[0] == 0.0
            && *times.last().unwrap() == 1.0
            && times.windows(2).all(|w| w[0] <= w[1]);
        if !ok {
            return Err(Error::Malformed("path times must run from 0 to 1 along the breakpoints".into()));
        }
        Ok(PLPath { breakpoints, times })
    }

    /// `n >= 2` evenly spaced samples `(t, point)`.
    pub fn samples(&self, n: usize) -> Vec<(f64, Vec<f64>)> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                (t, evaluate_path(self, t).expect("t in [0, 1]"))
            })
            .collect()
    }
}

/// Linear interpolation between consecutive breakpoints.
pub fn evaluate_path(p: &PLPath, t: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::TimeOutOfRange(t));
    }
    // last segment whose start time is <= t
    let k = p.times.partition_point(|&s| s <= t).clamp(1, p.times.len() - 1) - 1;
    let (t0, t1) = (p.times[k], p.times[k + 1]);
    let (a, b) = (&p.breakpoints[k], &p.breakpoints[k + 1]);
    if t1 <= t0 {
        return Ok(b.clone());
    }
    let s = (t - t0) / (t1 - t0);
    Ok(a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect())
}

/// A certificate prepared for repeated planning queries.
pub struct Planner<'a> {
    cert: &'a CoverCertificate,
    base: &'a Embedding,
    top: Arc<Complex>,
    top_embedding: Embedding,
    carriers: Vec<Simplex>,
    product: ProductComplex,
    pieces: Vec<Materialized>,
}

impl<'a> Planner<'a> {
    pub fn new(cert: &'a CoverCertificate, base: &'a Embedding) -> Result<Self> {
        let tower = cert.tower()?;
        let top_embedding = induced_embedding(&tower, base)?;
        Ok(Planner {
            cert,
            base,
            top: tower.top().clone(),
            top_embedding,
            carriers: tower.product_carriers(),
            product: tower.product.clone(),
            pieces: cert.pieces.iter().map(|p| p.piece.materialize()).collect(),
        })
    }

    fn pair(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        for p in [x, y] {
            if p.len() != self.base.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.base.dim,
                    got: p.len(),
                });
            }
        }
        Ok(x.iter().chain(y).copied().collect())
    }

    /// Lowest-index piece containing the minimal carrier of `(x, y)`.
    pub fn locate(&self, x: &[f64], y: &[f64]) -> Result<Location> {
        let a = self.pair(x, y)?;
        let (s, lambda) = self
            .top
            .maximal_simplices()
            .iter()
            .find_map(|s| barycentric(&self.top_embedding, s, &a).map(|l| (s, l)))
            .ok_or(Error::OutsideRealization)?;
        let mut carrier = Vec::new();
        let mut weights = Vec::new();
        for (&v, &l) in s.vertices().iter().zip(&lambda) {
            if l > TOLERANCE {
                carrier.push(v);
                weights.push(l);
            }
        }
        if carrier.is_empty() {
            return Err(Error::Internal("all barycentric weights vanish".into()));
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let carrier = Simplex::new_unchecked(carrier);
        let piece = self
            .cert
            .pieces
            .iter()
            .position(|p| p.piece.has_simplex(&carrier))
            .ok_or_else(|| Error::Internal(format!("carrier {carrier:?} lies in no piece")))?;
        Ok(Location {
            piece,
            carrier,
            weights,
        })
    }

    /// Path `x → ‖h_0‖(a) → ⋯ → ‖h_c‖(a) → y` for `a = (x, y)`, with every
    /// segment checked to stay in one simplex of `K`.
    pub fn plan(&self, x: &[f64], y: &[f64]) -> Result<PLPath> {
        let loc = self.locate(x, y)?;
        let piece = &self.cert.pieces[loc.piece];
        let local = &self.pieces[loc.piece];
        let local_vertices: Vec<VertexId> = loc
            .carrier
            .vertices()
            .iter()
            .map(|&w| local.to_local(w).expect("carrier lies in the piece"))
            .collect();
        let images = |i: usize| -> Vec<VertexId> {
            let h = &piece.chain.maps()[i];
            local_vertices.iter().map(|&w| h.image(w)).collect()
        };

        // the carrier of a in K×K, projected to each factor
        let tau: Vec<VertexId> = loc
            .carrier
            .vertices()
            .iter()
            .flat_map(|w| self.carriers[w.idx()].vertices().iter().copied())
            .collect();
        let factor = |which: usize| -> Vec<VertexId> {
            tau.iter()
                .map(|&p| {
                    let (u, v) = self.product.decode(p);
                    if which == 1 {
                        u
                    } else {
                        v
                    }
                })
                .collect()
        };

        let base = &self.cert.base;
        let span = |a: &[VertexId], b: &[VertexId], what: &str| -> Result<()> {
            let s = Simplex::from_unsorted(a.iter().chain(b).copied().collect())?;
            if base.contains_sorted(s.vertices()) {
                Ok(())
            } else {
                Err(Error::Internal(format!("{what} leaves every simplex of the base")))
            }
        };
        let inside = |p: &[f64], vs: &[VertexId], what: &str| -> Result<()> {
            let s = Simplex::from_unsorted(vs.to_vec())?;
            barycentric(self.base, &s, p)
                .map(|_| ())
                .ok_or_else(|| Error::Internal(format!("{what} is not in its expected simplex")))
        };

        let c = piece.chain.len();
        let first = factor(1);
        let last = factor(2);
        inside(x, &first, "start point")?;
        inside(y, &last, "end point")?;
        span(&first, &images(0), "first segment")?;
        for i in 1..=c {
            span(&images(i - 1), &images(i), "chain segment")?;
        }
        span(&images(c), &last, "last segment")?;

        let mut breakpoints = Vec::with_capacity(c + 3);
        breakpoints.push(x.to_vec());
        for i in 0..=c {
            breakpoints.push(self.base.combine(&images(i), &loc.weights));
        }
        breakpoints.push(y.to_vec());
        let segments = (c + 2) as f64;
        let mut times: Vec<f64> = (0..=c + 2).map(|k| k as f64 / segments).collect();
        *times.last_mut().unwrap() = 1.0;
        PLPath::new(breakpoints, times)
    }
}

/// One-shot form of [`Planner::locate`].
pub fn locate_carrier(cert: &CoverCertificate, base: &Embedding, x: &[f64], y: &[f64]) -> Result<Location> {
    Planner::new(cert, base)?.locate(x, y)
}

/// One-shot form of [`Planner::plan`].
pub fn make_path(cert: &CoverCertificate, base: &Embedding, x: &[f64], y: &[f64]) -> Result<PLPath> {
    Planner::new(cert, base)?.plan(x, y)
}
