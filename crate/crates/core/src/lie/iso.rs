//! Intertwiner spaces and isomorphism search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Representation;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::par::{any_range, Execution};

/// Basis of `{P : P R1(z) = R2(z) P for every basis vector z}`.
pub fn intertwiners(r1: &Representation, r2: &Representation) -> Result<Vec<Matrix>> {
    if r1.algebra() != r2.algebra() {
        return Err(Error::DimensionMismatch("representations of different algebras".into()));
    }
    let field = r1.field();
    let (n1, n2) = (r1.dim(), r2.dim());
    let gens = r1.algebra().generators();
    // unknown P[a][b] sits at column a * n1 + b
    let mut system = Vec::with_capacity(gens.len() * n1 * n2);
    for z in &gens {
        let (a, b) = (r1.image(*z), r2.image(*z));
        for i in 0..n2 {
            for j in 0..n1 {
                let mut row = vec![field.zero(); n1 * n2];
                for k in 0..n1 {
                    let c = &row[i * n1 + k] + a.get(k, j);
                    row[i * n1 + k] = c;
                }
                for k in 0..n2 {
                    let c = &row[k * n1 + j] - b.get(i, k);
                    row[k * n1 + j] = c;
                }
                system.push(row);
            }
        }
    }
    let system = Matrix::from_rows(field, system)?;
    system
        .nullspace()
        .into_iter()
        .map(|v| Matrix::from_rows(field, v.chunks(n1).map(<[Scalar]>::to_vec).collect()))
        .collect()
}

/// Knobs for [`is_isomorphic_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoSearch {
    pub seed: u64,
    /// Exhaust the intertwiner space over `F_p` when its dimension is at most
    /// this and `p^dim <= exhaustive_limit`.
    pub exhaustive_dim: usize,
    pub exhaustive_limit: u64,
    /// Random combinations tried over `F_p` before giving up.
    pub samples: usize,
    /// Random integer points tried over `Q`.
    pub rational_trials: usize,
    pub exec: Execution,
}

impl Default for IsoSearch {
    fn default() -> Self {
        IsoSearch {
            seed: 0,
            exhaustive_dim: 12,
            exhaustive_limit: 1 << 20,
            samples: 10_000,
            rational_trials: 24,
            exec: Execution::default(),
        }
    }
}

fn combine(basis: &[Matrix], coeffs: &[Scalar]) -> Matrix {
    let mut acc = Matrix::zeros(basis[0].field(), basis[0].rows(), basis[0].cols());
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = &acc + &b.scale(c);
        }
    }
    acc
}

pub fn is_isomorphic(r1: &Representation, r2: &Representation) -> Result<bool> {
    is_isomorphic_with(r1, r2, &IsoSearch::default())
}

/// Looks for an invertible intertwiner. Over `F_p` a small space is scanned
/// completely and a large one is sampled, failing with
/// [`Error::InconclusiveSearch`] if no sample is invertible. Over `Q` the
/// determinant is a polynomial of degree `dim` on the space, so random
/// integer points from a box much wider than `dim` detect a nonzero one with
/// overwhelming probability.
pub fn is_isomorphic_with(r1: &Representation, r2: &Representation, cfg: &IsoSearch) -> Result<bool> {
    if r1.algebra() != r2.algebra() {
        return Err(Error::DimensionMismatch("representations of different algebras".into()));
    }
    if r1.dim() != r2.dim() {
        return Ok(false);
    }
    let basis = intertwiners(r1, r2)?;
    match basis.len() {
        0 => return Ok(false),
        1 => return Ok(basis[0].is_invertible()),
        _ => {}
    }
    let field = r1.field();
    let k = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match field.order() {
        Some(p) => {
            let total = (k <= cfg.exhaustive_dim)
                .then(|| p.checked_pow(k as u32))
                .flatten()
                .filter(|&t| t <= cfg.exhaustive_limit);
            if let Some(total) = total {
                return Ok(any_range(cfg.exec, total, |mut idx| {
                    let coeffs: Vec<Scalar> = (0..k)
                        .map(|_| {
                            let d = idx % p;
                            idx /= p;
                            field.from_u64(d)
                        })
                        .collect();
                    combine(&basis, &coeffs).is_invertible()
                }));
            }
            for _ in 0..cfg.samples {
                let coeffs: Vec<Scalar> = (0..k).map(|_| field.random(&mut rng)).collect();
                if combine(&basis, &coeffs).is_invertible() {
                    return Ok(true);
                }
            }
            Err(Error::InconclusiveSearch(cfg.samples))
        }
        None => {
            let bound = 50 * r1.dim() as i64 + 50;
            for _ in 0..cfg.rational_trials {
                let coeffs: Vec<Scalar> = (0..k)
                    .map(|_| Field::RATIONALS.from_i64(rng.random_range(-bound..=bound)))
                    .collect();
                if combine(&basis, &coeffs).is_invertible() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}
