//! Built-in example complexes and their embeddings.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::complex::Complex;
use crate::construct::{ordered_product, ProductComplex};
use crate::error::{Error, Result};
use crate::planner::{product_embedding, Embedding};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    /// Boundary of the triangle, `S_1`.
    Circle,
    /// The full `n`-simplex.
    Simplex(usize),
    Interval,
    /// `S_1 × S_1` as a standalone complex.
    Torus,
}

impl FromStr for Example {
    type Err = Error;

    /// Accepts `circle`, `interval`, `torus`, and `simplex<n>` in the forms
    /// `simplex2`, `simplex:2` or `simplex(2)`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => return Ok(Example::Circle),
            "interval" => return Ok(Example::Interval),
            "torus" => return Ok(Example::Torus),
            _ => {}
        }
        let n = s
            .strip_prefix("simplex")
            .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
            .and_then(|r| r.parse::<usize>().ok());
        n.map(Example::Simplex).ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Example::Circle => write!(f, "circle"),
            Example::Simplex(n) => write!(f, "simplex{n}"),
            Example::Interval => write!(f, "interval"),
            Example::Torus => write!(f, "torus"),
        }
    }
}

impl Example {
    pub const NAMED: [Example; 4] = [Example::Circle, Example::Simplex(2), Example::Interval, Example::Torus];

    pub fn complex(self) -> Arc<Complex> {
        match self {
            Example::Circle => circle(),
            Example::Simplex(n) => simplex(n),
            Example::Interval => simplex(1),
            Example::Torus => Arc::new(torus_product().complex.as_ref().clone()),
        }
    }

    pub fn embedding(self) -> Embedding {
        match self {
            Example::Circle => circle_embedding(),
            Example::Simplex(n) => simplex_embedding(n),
            Example::Interval => simplex_embedding(1),
            Example::Torus => {
                let e = circle_embedding();
                product_embedding(&torus_product(), &e, &e)
            }
        }
    }
}

/// `S_1`: vertices 0, 1, 2 and the three edges.
pub fn circle() -> Arc<Complex> {
    Arc::new(Complex::build(["0", "1", "2"], &[vec![0, 1], vec![1, 2], vec![0, 2]]).expect("valid"))
}

/// `Δⁿ` on vertices `0..=n`.
pub fn simplex(n: usize) -> Arc<Complex> {
    let labels: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    Arc::new(Complex::build(labels, &[(0..=n).collect()]).expect("valid"))
}

fn torus_product() -> ProductComplex {
    let c = circle();
    ordered_product(&c, &c)
}

/// The triangle at `(1, 0)`, `(−1/2, √3/2)`, `(−1/2, −√3/2)`.
pub fn circle_embedding() -> Embedding {
    let h = 3f64.sqrt() / 2.0;
    Embedding::new(&circle(), 2, vec![vec![1.0, 0.0], vec![-0.5, h], vec![-0.5, -h]]).expect("valid")
}

/// Vertex 0 at the origin and vertex `i` at the `i`-th unit vector.
pub fn simplex_embedding(n: usize) -> Embedding {
    let dim = n.max(1);
    let coords = (0..=n)
        .map(|i| {
            let mut p = vec![0.0; dim];
            if i > 0 {
                p[i - 1] = 1.0;
            }
            p
        })
        .collect();
    Embedding::new(&simplex(n), dim, coords).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_vectors() {
        assert_eq!(Example::Circle.complex().f_vector(), vec![3, 3]);
        assert_eq!(Example::Simplex(2).complex().f_vector(), vec![3, 3, 1]);
        assert_eq!(Example::Interval.complex().f_vector(), vec![2, 1]);
        assert_eq!(Example::Torus.complex().f_vector(), vec![9, 27, 18]);
    }

    #[test]
    fn names() {
        for s in ["simplex3", "simplex:3", "simplex(3)"] {
            assert_eq!(s.parse::<Example>().unwrap(), Example::Simplex(3));
        }
        assert!(matches!("sphere".parse::<Example>(), Err(Error::UnknownExample(_))));
        for e in Example::NAMED {
            assert_eq!(e.to_string().parse::<Example>().unwrap(), e);
        }
    }

    #[test]
    fn circle_is_skeleton_of_triangle() {
        assert_eq!(simplex(2).skeleton(1), *circle());
    }

    #[test]
    fn embeddings_are_total() {
        for e in Example::NAMED {
            assert_eq!(e.embedding().coords().len(), e.complex().num_vertices());
        }
    }
}
