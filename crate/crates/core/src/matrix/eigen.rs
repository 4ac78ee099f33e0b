//! Characteristic polynomials and eigenvalues in the ground field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Coefficients of `det(X I - A)`, lowest degree first (monic, length n+1).
///
/// Reduces to upper Hessenberg form by elementary similarities, then runs the
/// standard three-term recurrence on the leading principal minors.
pub fn characteristic_polynomial(a: &Matrix) -> Result<Vec<Scalar>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "characteristic polynomial of non-square matrix".into(),
        ));
    }
    let field = a.field();
    let n = a.rows();
    let mut h = a.to_rows();

    for m in 1..n.saturating_sub(1) {
        let c = m - 1;
        let Some(piv) = (m..n).find(|&i| !h[i][c].is_zero()) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let inv = h[m][c].inv()?;
        for i in m + 1..n {
            if h[i][c].is_zero() {
                continue;
            }
            let u = &h[i][c] * &inv;
            let (top, bottom) = h.split_at_mut(i);
            for (x, y) in bottom[0].iter_mut().zip(&top[m]) {
                *x = &*x - &(&u * y);
            }
            for row in h.iter_mut() {
                let t = &u * &row[i];
                row[m] = &row[m] + &t;
            }
        }
    }

    // polys[k] = characteristic polynomial of the leading k x k block
    let mut polys: Vec<Vec<Scalar>> = vec![vec![field.one()]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![field.zero(); m + 2];
        for (k, c) in prev.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * &h[m][m]);
        }
        let mut t = field.one();
        for i in (0..m).rev() {
            t = &t * &h[i + 1][i];
            let coeff = &t * &h[i][m];
            if coeff.is_zero() {
                continue;
            }
            for (k, c) in polys[i].iter().enumerate() {
                next[k] = &next[k] - &(&coeff * c);
            }
        }
        polys.push(next);
    }
    Ok(polys.pop().expect("n >= 1"))
}

fn eval(poly: &[Scalar], x: &Scalar) -> Scalar {
    poly.iter().rev().fold(x.field().zero(), |acc, c| &(&acc * x) + c)
}

/// Quotient of `poly` by `X - r`, assuming `r` is a root.
fn deflate(poly: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = poly.len() - 1;
    let mut q = vec![r.field().zero(); n];
    let mut carry = r.field().zero();
    for k in (1..=n).rev() {
        carry = &poly[k] + &(&carry * r);
        q[k - 1] = carry.clone();
    }
    q
}

type QPoly = Vec<BigRational>;

fn trim(p: &mut QPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn q_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Remainder of `a` by `b`, `b` nonzero.
fn q_rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().expect("nonzero divisor");
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let c = r.last().expect("nonempty") / lead;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &c * bk;
        }
        r.pop();
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        trim(&mut r);
    }
    r
}

fn q_div_exact(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigRational::zero(); a.len() - db];
    let lead = b.last().expect("nonzero divisor");
    for shift in (0..q.len()).rev() {
        let c = &r[shift + db] / lead;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &c * bk;
        }
        q[shift] = c;
    }
    q
}

fn q_gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = q_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative(p: &[BigRational]) -> QPoly {
    if p.len() == 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

fn sturm_sequence(p: &[BigRational]) -> Vec<QPoly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        let r = q_rem(&seq[n - 2], &seq[n - 1]);
        if r.len() == 1 && r[0].is_zero() {
            return seq;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
}

fn sign_changes(seq: &[QPoly], x: &BigRational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| q_eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// The fraction of least denominator in `[lo, hi]`, `lo <= hi`.
fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    if lo.is_positive() {
        let fl = lo.floor();
        if &fl == lo {
            return fl;
        }
        if &(&fl + BigRational::one()) <= hi {
            return fl + BigRational::one();
        }
        let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
        fl + inner.recip()
    } else if hi.is_negative() {
        -simplest_between(&-hi, &-lo)
    } else {
        BigRational::zero()
    }
}

/// Distinct rational roots of a nonzero polynomial, ascending.
///
/// Real roots of the square-free part are isolated with a Sturm sequence
/// and narrowed below `1/B^2`, where `B` bounds the denominator of any
/// rational root; the simplest fraction in such an interval is then the
/// only rational candidate.
fn rational_roots(poly: &[BigRational]) -> Vec<BigRational> {
    let mut p = poly.to_vec();
    trim(&mut p);
    if p.len() == 1 {
        return Vec::new();
    }
    let g = q_gcd(&p, &derivative(&p));
    let s = q_div_exact(&p, &g);
    if s.len() == 1 {
        return Vec::new();
    }
    let denom_lcm = s.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let lead = (s.last().expect("nonempty") * BigRational::from_integer(denom_lcm)).abs();
    let lead_int = lead.ceil();
    let width = (&lead_int * &lead_int).recip();
    let radius = BigRational::one()
        + s.iter()
            .map(|c| (c / s.last().expect("nonempty")).abs())
            .max()
            .expect("nonempty");
    let seq = sturm_sequence(&s);
    let count = |a: &BigRational, b: &BigRational| sign_changes(&seq, a) - sign_changes(&seq, b);

    let mut roots = Vec::new();
    let mut stack = vec![(-&radius, radius)];
    while let Some((a, b)) = stack.pop() {
        let n = count(&a, &b);
        if n == 0 {
            continue;
        }
        if n > 1 {
            let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
            stack.push((a, mid.clone()));
            stack.push((mid, b));
            continue;
        }
        // one simple root in (a, b]; narrow it by sign
        let (mut a, mut b) = (a, b);
        let mut sb = q_eval(&s, &b);
        if sb.is_zero() {
            roots.push(b);
            continue;
        }
        if q_eval(&s, &a).is_zero() {
            // a belongs to the neighbouring interval; nudge it inward
            let mut step = (&b - &a) / BigRational::from_integer(BigInt::from(2));
            while count(&(&a + &step), &b) == 0 {
                step /= BigRational::from_integer(BigInt::from(2));
            }
            a += &step;
        }
        while &b - &a >= width {
            let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
            let sm = q_eval(&s, &mid);
            if sm.is_zero() {
                a = mid.clone();
                b = mid;
                break;
            }
            if sm.is_positive() == sb.is_positive() {
                b = mid;
                sb = sm;
            } else {
                a = mid;
            }
        }
        let cand = simplest_between(&a, &b);
        if q_eval(&s, &cand).is_zero() {
            roots.push(cand);
        }
    }
    roots.sort();
    roots
}

fn candidate_roots(poly: &[Scalar], field: Field) -> Vec<Scalar> {
    if let Some(elems) = field.elements() {
        return elems.collect();
    }
    let q: QPoly = poly
        .iter()
        .map(|c| c.as_rational().expect("rational coefficient").clone())
        .collect();
    rational_roots(&q)
        .into_iter()
        .map(|r| {
            field
                .parse_scalar(&format!("{}/{}", r.numer(), r.denom()))
                .expect("valid rational")
        })
        .collect()
}

/// Eigenvalues with algebraic multiplicity, in the field's total order.
///
/// Over `F_p` every residue is tested; over `Q` the rational root theorem
/// supplies the candidates. Fails with [`Error::EigenvaluesNotSplit`] when the
/// roots found account for less than the full degree.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<(Scalar, usize)>> {
    let field = a.field();
    let mut poly = characteristic_polynomial(a)?;
    let mut out = Vec::new();
    let mut cands = candidate_roots(&poly, field);
    cands.sort();
    for r in cands {
        let mut mult = 0;
        while poly.len() > 1 && eval(&poly, &r).is_zero() {
            poly = deflate(&poly, &r);
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
        if poly.len() == 1 {
            break;
        }
    }
    if poly.len() > 1 {
        return Err(Error::EigenvaluesNotSplit(field));
    }
    Ok(out)
}
