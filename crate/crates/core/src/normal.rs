//! Normal forms: simultaneous triangularization, the upper-triangular sweep,
//! Jordan-block form for commuting uniserial families and the `(Y, J)` normal
//! form of an admissible uniserial module.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::jordan::TruncPoly;
use crate::lie::{Generator, Representation};
use crate::matrix::{
    eigenvalues, invariant_subspace_lattice, is_chain, rref, subspace_count, Matrix, DEFAULT_SUBSPACE_BUDGET,
};
use crate::orbit::{canonicalize, ClassY};

/// Whether the brute-force lattice oracle confirmed uniseriality or the
/// input was too large for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Uniseriality {
    Verified,
    Unverified,
}

/// Runs the lattice oracle when the field is finite and the subspace count is
/// within `budget`.
pub fn check_uniserial(family: &[Matrix], budget: u128) -> Result<Uniseriality> {
    let first = family
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty family".into()))?;
    let Some(p) = first.field().order() else {
        return Ok(Uniseriality::Unverified);
    };
    if subspace_count(p, first.rows()) > budget {
        return Ok(Uniseriality::Unverified);
    }
    let lattice = invariant_subspace_lattice(family, budget)?;
    if is_chain(&lattice) {
        Ok(Uniseriality::Verified)
    } else {
        Err(Error::NotUniserial(
            "invariant subspaces are not totally ordered".into(),
        ))
    }
}

fn check_family(family: &[Matrix]) -> Result<(Field, usize)> {
    let first = family
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty family".into()))?;
    let (field, n) = (first.field(), first.rows());
    for a in family {
        if a.field() != field {
            return Err(Error::MixedFields(field, a.field()));
        }
        if !a.is_square() || a.rows() != n {
            return Err(Error::DimensionMismatch("family members differ in size".into()));
        }
    }
    Ok((field, n))
}

fn check_commuting(family: &[Matrix]) -> Result<()> {
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if !a.commutator(b)?.is_zero() {
                return Err(Error::NotCommuting);
            }
        }
    }
    Ok(())
}

/// Columns of `w` times each null vector of `a * w`: the subspace
/// `span(w) ∩ ker(a)` as a column basis.
fn restrict_kernel(a: &Matrix, w: &Matrix) -> Result<Option<Matrix>> {
    let null = a.checked_mul(w)?.nullspace();
    if null.is_empty() {
        return Ok(None);
    }
    let cols: Vec<Vec<Scalar>> = null.iter().map(|c| w.mul_vec(c)).collect();
    Matrix::from_columns(w.field(), &cols).map(Some)
}

/// Matrix of `a` on the invariant subspace spanned by the columns of `w`.
fn restrict_operator(a: &Matrix, w: &Matrix) -> Result<Matrix> {
    let mut rows = w.transpose().to_rows();
    let pivots = rref(&mut rows);
    let k = w.cols();
    let sub = Matrix::from_fn(w.field(), k, k, |i, j| w.get(pivots[i], j).clone());
    let aw = a.checked_mul(w)?;
    let aw_sub = Matrix::from_fn(w.field(), k, k, |i, j| aw.get(pivots[i], j).clone());
    sub.inverse()?.checked_mul(&aw_sub)
}

/// A common eigenvector of `nilpotent ∪ commuting`, assuming the joint kernel
/// of the nilpotent members is invariant under the commuting ones. Each
/// commuting member contributes its least eigenvalue on the current space.
fn common_eigenvector(nilpotent: &[Matrix], commuting: &[Matrix], field: Field, n: usize) -> Result<Vec<Scalar>> {
    let mut w = Matrix::identity(field, n);
    for a in nilpotent {
        w = restrict_kernel(a, &w)?.ok_or(Error::NotAdmissible)?;
    }
    for a in commuting {
        let r = restrict_operator(a, &w)?;
        let (lambda, _) = eigenvalues(&r)?.into_iter().next().expect("nonempty spectrum");
        let k = r.rows();
        let shifted = &r - &Matrix::identity(field, k).scale(&lambda);
        w = restrict_kernel(&shifted, &Matrix::identity(field, k))?
            .map(|c| w.checked_mul(&c))
            .transpose()?
            .ok_or(Error::EigenvaluesNotSplit(field))?;
    }
    Ok(w.column(0))
}

/// Invertible `Q` with first column `v`, completed by standard basis vectors.
fn complete_basis(v: &[Scalar], field: Field) -> Result<Matrix> {
    let n = v.len();
    let mut cols = vec![v.to_vec()];
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![field.zero(); n];
        e[j] = field.one();
        cols.push(e);
        if Matrix::from_columns(field, &cols)?.rank() < cols.len() {
            cols.pop();
        }
    }
    Matrix::from_columns(field, &cols)
}

fn lower_right(a: &Matrix) -> Matrix {
    let n = a.rows();
    Matrix::from_fn(a.field(), n - 1, n - 1, |i, j| a.get(i + 1, j + 1).clone())
}

/// Flag basis for a family of the shape "commuting nilpotent ideal plus
/// commuting operators normalizing it", built by peeling off common
/// eigenvectors and recursing on the quotient.
pub(crate) fn flag_basis(nilpotent: &[Matrix], commuting: &[Matrix], field: Field, n: usize) -> Result<Matrix> {
    if n == 1 {
        return Ok(Matrix::identity(field, 1));
    }
    let v = common_eigenvector(nilpotent, commuting, field, n)?;
    let q0 = complete_basis(&v, field)?;
    let q0_inv = q0.inverse()?;
    let reduce = |family: &[Matrix]| -> Result<Vec<Matrix>> {
        family
            .iter()
            .map(|a| Ok(lower_right(&q0_inv.checked_mul(a)?.checked_mul(&q0)?)))
            .collect()
    };
    let q1 = flag_basis(&reduce(nilpotent)?, &reduce(commuting)?, field, n - 1)?;
    let lifted = Matrix::from_fn(field, n, n, |i, j| match (i, j) {
        (0, 0) => field.one(),
        (0, _) | (_, 0) => field.zero(),
        _ => q1.get(i - 1, j - 1).clone(),
    });
    q0.checked_mul(&lifted)
}

/// Invertible `Q` with `Q^{-1} A Q` upper triangular for every `A` in the
/// commuting family.
pub fn simultaneous_triangularize(family: &[Matrix]) -> Result<Matrix> {
    let (field, n) = check_family(family)?;
    check_commuting(family)?;
    flag_basis(&[], family, field, n)
}

/// Clears every entry `(i, j)` with `A_ii != A_jj` of an upper triangular
/// matrix by conjugating with `I + c E^{ij}`, bottom row first and left to
/// right within a row. Returns `(P, B)` with `P` unipotent upper triangular
/// and `B = P^{-1} A P`.
pub fn sweep_normalize(a: &Matrix) -> Result<(Matrix, Matrix)> {
    if !a.is_upper_triangular() {
        return Err(Error::NotUpperTriangular);
    }
    let field = a.field();
    let n = a.rows();
    let mut b = a.clone();
    let mut p = Matrix::identity(field, n);
    for i in (0..n.saturating_sub(1)).rev() {
        for j in i + 1..n {
            let (bii, bjj) = (b.get(i, i).clone(), b.get(j, j).clone());
            if bii == bjj || b.get(i, j).is_zero() {
                continue;
            }
            let c = b.get(i, j) / &(&bjj - &bii);
            // B <- (I - c E^{ij}) B (I + c E^{ij})
            for r in 0..=i {
                let v = b.get(r, j) + &(&c * b.get(r, i));
                b.set(r, j, v);
            }
            for k in j..n {
                let v = b.get(i, k) - &(&c * b.get(j, k));
                b.set(i, k, v);
            }
            // P <- P (I + c E^{ij})
            for r in 0..n {
                let v = p.get(r, j) + &(&c * p.get(r, i));
                p.set(r, j, v);
            }
        }
    }
    Ok((p, b))
}

/// Entry `k` is true iff some member has a nonzero `(k, k+1)` entry.
pub fn superdiagonal_support(family: &[Matrix]) -> Result<Vec<bool>> {
    let (_, n) = check_family(family)?;
    if family.iter().any(|a| !a.is_upper_triangular()) {
        return Err(Error::NotUpperTriangular);
    }
    Ok((0..n.saturating_sub(1))
        .map(|k| family.iter().any(|a| !a.get(k, k + 1).is_zero()))
        .collect())
}

/// Basis `N^{m-1} e_m, ..., N e_m, e_m` turning a strictly upper triangular
/// `N` with nonzero superdiagonal into `J_m(0)`.
fn chain_basis(n_mat: &Matrix) -> Result<Matrix> {
    let field = n_mat.field();
    let m = n_mat.rows();
    if (0..m - 1).any(|k| n_mat.get(k, k + 1).is_zero()) {
        return Err(Error::NotUniserial("superdiagonal has a zero entry".into()));
    }
    let mut v = vec![field.zero(); m];
    v[m - 1] = field.one();
    let mut cols = vec![v];
    for _ in 1..m {
        let next = n_mat.mul_vec(cols.last().expect("nonempty"));
        cols.push(next);
    }
    cols.reverse();
    Matrix::from_columns(field, &cols)
}

/// Jordan-block form of a commuting uniserial family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniserialForm {
    /// Member represented by `J_m(alpha)`.
    pub index: usize,
    pub basis_change: Matrix,
    pub alpha: Scalar,
    /// `polys[j]` in powers of `J_m(alpha)` (not of `J_m(0)`), so that
    /// `Q^{-1} family[j] Q = polys[j](J_m(alpha))`.
    pub polys: Vec<TruncPoly>,
    pub uniseriality: Uniseriality,
}

impl UniserialForm {
    pub fn jordan_generator(&self) -> Matrix {
        Matrix::jordan_block(self.basis_change.rows(), &self.alpha)
    }

    /// `Q polys[j](J_m(alpha)) Q^{-1}` for every member.
    pub fn reconstruct(&self) -> Result<Vec<Matrix>> {
        let j = self.jordan_generator();
        let q_inv = self.basis_change.inverse()?;
        self.polys
            .iter()
            .map(|p| self.basis_change.checked_mul(&p.eval_at(&j))?.checked_mul(&q_inv))
            .collect()
    }
}

pub fn uniserialize_commuting(family: &[Matrix]) -> Result<UniserialForm> {
    uniserialize_commuting_with(family, DEFAULT_SUBSPACE_BUDGET)
}

/// Picks the first member whose triangular form has a nonzero `(1, 2)`
/// entry and conjugates it to a Jordan block; every other member becomes a
/// polynomial in that block.
pub fn uniserialize_commuting_with(family: &[Matrix], budget: u128) -> Result<UniserialForm> {
    let (field, m) = check_family(family)?;
    check_commuting(family)?;
    let uniseriality = check_uniserial(family, budget)?;

    let q1 = simultaneous_triangularize(family)?;
    let q1_inv = q1.inverse()?;
    let tri: Vec<Matrix> = family
        .iter()
        .map(|a| q1_inv.checked_mul(a)?.checked_mul(&q1))
        .collect::<Result<_>>()?;
    for t in &tri {
        let d = t.diagonal_entries();
        if d.iter().any(|x| x != &d[0]) {
            return Err(Error::NotUniserial("a member has two distinct eigenvalues".into()));
        }
    }

    let index = if m == 1 {
        0
    } else {
        tri.iter()
            .position(|t| !t.get(0, 1).is_zero())
            .ok_or_else(|| Error::NotUniserial("first superdiagonal entry vanishes".into()))?
    };
    let alpha = tri[index].get(0, 0).clone();
    let q = if m == 1 {
        q1
    } else {
        let nil = &tri[index] - &Matrix::identity(field, m).scale(&alpha);
        q1.checked_mul(&chain_basis(&nil)?)?
    };
    let q_inv = q.inverse()?;
    let polys = family
        .iter()
        .map(|a| {
            let b = q_inv.checked_mul(a)?.checked_mul(&q)?;
            let in_j = TruncPoly::centralizer_decompose(&b, m)?;
            Ok(in_j.taylor_shift(&-&alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UniserialForm {
        index,
        basis_change: q,
        alpha,
        polys,
        uniseriality,
    })
}

/// `(Y, J)` normal form of an admissible uniserial module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormData {
    pub m: usize,
    pub alpha: Scalar,
    /// Factor applied to `x` (the inverse of the weight of `v`) before
    /// reading off `Y`. The caller's algebra is left untouched.
    pub x_scale: Scalar,
    pub v: Generator,
    /// `Q` such that `Q^{-1} R(v) Q = J` and `x_scale Q^{-1} R(x) Q = Y`.
    pub basis_change: Matrix,
    pub y: ClassY,
    /// Every basis vector of `a`, as an element of `F[J]`, in generator order.
    pub operator_polys: Vec<(Generator, TruncPoly)>,
    pub uniseriality: Uniseriality,
}

impl NormalFormData {
    pub fn x_matrix(&self) -> Matrix {
        self.y.to_matrix()
    }

    pub fn poly(&self, g: Generator) -> Option<&TruncPoly> {
        self.operator_polys.iter().find(|(h, _)| *h == g).map(|(_, p)| p)
    }
}

pub fn extract_normal_form(rep: &Representation) -> Result<NormalFormData> {
    extract_normal_form_with(rep, DEFAULT_SUBSPACE_BUDGET)
}

/// Triangularize along the composition series, sweep the image of `x`,
/// pick `v`, rescale `x`, conjugate `v` to `J`, then move `Y` to its
/// canonical orbit representative.
pub fn extract_normal_form_with(rep: &Representation, budget: u128) -> Result<NormalFormData> {
    if !rep.verify_representation() {
        return Err(Error::NotRepresentation);
    }
    if !rep.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    if rep.annihilated_by_derived() {
        return Err(Error::AnnihilatedByDerived);
    }
    let uniseriality = check_uniserial(&rep.images(), budget)?;

    let algebra = rep.algebra();
    let field = algebra.field();
    let m = rep.dim();
    let a_gens = algebra.a_generators();
    let (derived, abelian): (Vec<Generator>, Vec<Generator>) =
        a_gens.iter().partition(|g| !algebra.delta(**g).is_zero());
    let nilpotent: Vec<Matrix> = derived.iter().map(|g| rep.image(*g).clone()).collect();
    let mut commuting = vec![rep.x().clone()];
    commuting.extend(abelian.iter().map(|g| rep.image(*g).clone()));

    let q1 = flag_basis(&nilpotent, &commuting, field, m)?;
    let a_tri = Matrix::conjugate(&q1, rep.x())?;
    let (p, a_swept) = sweep_normalize(&a_tri)?;
    let q = q1.checked_mul(&p)?;
    let q_inv = q.inverse()?;
    let in_flag = |g: Generator| q_inv.checked_mul(rep.image(g))?.checked_mul(&q);

    let diag = a_swept.diagonal_entries();
    if diag.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotUniserial(
            "x has equal consecutive eigenvalues on the flag".into(),
        ));
    }

    let mut best: Option<(Scalar, Generator, Matrix)> = None;
    for g in &derived {
        let img = in_flag(*g)?;
        if img.get(0, 1).is_zero() {
            continue;
        }
        let delta = algebra.delta(*g).clone();
        if best.as_ref().is_none_or(|(d, _, _)| delta < *d) {
            best = Some((delta, *g, img));
        }
    }
    let (delta, v, v_img) =
        best.ok_or_else(|| Error::NotUniserial("no weight vector reaches the superdiagonal".into()))?;
    let x_scale = delta.inv()?;
    let x_scaled = a_swept.scale(&x_scale);
    let alpha = x_scaled.get(0, 0).clone();

    let q2 = chain_basis(&v_img)?;
    let y_raw = ClassY::from_matrix(&Matrix::conjugate(&q2, &x_scaled)?)
        .map_err(|_| Error::NotUniserial("x does not normalize <v> as expected".into()))?;
    let (y, t) = canonicalize(&y_raw, field.characteristic())?;
    let basis_change = q.checked_mul(&q2)?.checked_mul(&t.to_matrix())?;
    let basis_inv = basis_change.inverse()?;

    let x_check = basis_inv
        .checked_mul(rep.x())?
        .checked_mul(&basis_change)?
        .scale(&x_scale);
    debug_assert_eq!(x_check, y.to_matrix());

    let operator_polys = a_gens
        .iter()
        .map(|g| {
            let img = basis_inv.checked_mul(rep.image(*g))?.checked_mul(&basis_change)?;
            Ok((*g, TruncPoly::centralizer_decompose(&img, m)?))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(NormalFormData {
        m,
        alpha,
        x_scale,
        v,
        basis_change,
        y,
        operator_polys,
        uniseriality,
    })
}
