//! Matrices over truncated power series `R[[x]]/(x^m)`.
//!
//! A series is a unit or radical exactly when its constant term is, so both
//! membership questions for a matrix reduce to its value at `x = 0`. Roots
//! of monic quadratics lift from the base ring one coefficient at a time:
//! writing `y = Σ b_k x^k` in `y² + μy + λ = 0` and collecting `x^k` gives
//!
//! ```text
//! (2b₀ + μ₀)·b_k = −λ_k − Σ_{i=1..k} μ_i·b_{k−i} − Σ_{i=1..k−1} b_i·b_{k−i}
//! ```
//!
//! which determines every `b_k` once `2b₀ + μ₀` is a unit.

use crate::classify::{construct_witness, verify_witness, Case, Classification, Reason};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::quadratic::RootPair;
use crate::rings::{Elem, Ring};

fn series_ring(ring: &Ring) -> Result<(&Ring, usize)> {
    match (ring.base(), ring.order()) {
        (Some(base), Some(order)) => Ok((base, order)),
        _ => Err(Error::PreconditionViolated(format!(
            "{ring} is not a power series ring"
        ))),
    }
}

/// The matrix of constant terms.
pub fn evaluate_at_zero(a: &Mat2) -> Result<Mat2> {
    let (base, _) = series_ring(a.ring())?;
    let [p, q, r, s] = a
        .entries()
        .clone()
        .map(|e| e.constant_term().expect("series").clone());
    let m = Mat2::new(p, q, r, s)?;
    debug_assert!(m.ring() == base);
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesMembership {
    pub gl2: bool,
    pub radical: bool,
}

/// GL₂ and M₂(J) membership, decided on the constant-term matrix.
pub fn series_membership(a: &Mat2) -> Result<SeriesMembership> {
    let a0 = evaluate_at_zero(a)?;
    Ok(SeriesMembership {
        gl2: a0.is_gl2(),
        radical: a0.is_in_radical_m2(),
    })
}

/// `y² + μy + λ`.
pub fn residual(mu: &Elem, lam: &Elem, y: &Elem) -> Result<Elem> {
    y.try_mul(y)?.try_add(&mu.try_mul(y)?)?.try_add(lam)
}

/// The image of a series in `R[[x]]/(x^order)`, for `order` at most the
/// ring's own order.
pub fn truncate(e: &Elem, order: usize) -> Result<Elem> {
    let (base, m) = series_ring(e.ring())?;
    if order == 0 || order > m {
        return Err(Error::PreconditionViolated(format!(
            "cannot truncate {} to order {order}",
            e.ring()
        )));
    }
    let target = Ring::series(base, order)?;
    target.series_from_coeffs(e.coeffs().expect("series")[..order].to_vec())
}

/// Lifts the radical root `b0` of `t² + μ₀t + λ₀` over the base ring to the
/// root of `t² + μt + λ` over the series ring.
pub fn lift_root_recurrence(mu: &Elem, lam: &Elem, b0: &Elem) -> Result<Elem> {
    if !b0.is_in_radical() {
        return Err(Error::PreconditionViolated(format!(
            "b0 = {b0} is not in the radical"
        )));
    }
    lift_simple_root(mu, lam, b0)
}

/// As [`lift_root_recurrence`], for any simple root `b0`.
pub(crate) fn lift_simple_root(mu: &Elem, lam: &Elem, b0: &Elem) -> Result<Elem> {
    mu.check_ring(lam.ring())?;
    let ring = mu.ring();
    let (base, order) = series_ring(ring)?;
    b0.check_ring(base)?;
    let mus = mu.coeffs().expect("series");
    let lams = lam.coeffs().expect("series");
    if !residual(&mus[0], &lams[0], b0)?.is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "b0 = {b0} is not a root of t^2 + ({})t + ({})",
            mus[0], lams[0]
        )));
    }
    let slope = &(b0 + b0) + &mus[0];
    let inv = slope
        .try_invert()
        .map_err(|_| Error::NotSimpleRoot(format!("2*b0 + mu0 = {slope} is not a unit")))?;

    let mut b = Vec::with_capacity(order);
    b.push(b0.clone());
    for k in 1..order {
        let mut acc = lams[k].clone();
        for i in 1..=k {
            acc = &acc + &(&mus[i] * &b[k - i]);
        }
        for i in 1..k {
            acc = &acc + &(&b[i] * &b[k - i]);
        }
        b.push(-(&acc * &inv));
    }
    let y = ring.series_from_coeffs(b)?;
    if !residual(mu, lam, &y)?.is_zero() {
        return Err(Error::Verification(format!(
            "lifted root {y} leaves a nonzero residual"
        )));
    }
    Ok(y)
}

/// Classifies a matrix over a series ring by solving over the base ring
/// and lifting the radical root of χ(A).
///
/// Agrees with [`crate::classify::classify_rad_clean`]; nested series rings
/// recurse through their bases.
pub fn classify_series_matrix(a: &Mat2) -> Result<Classification> {
    let ring = a.ring();
    series_ring(ring)?;
    let membership = series_membership(a)?;
    if membership.gl2 {
        let w = verify_witness(a, Mat2::zero(ring), a.clone())?;
        return Ok(Classification::rad_clean(a, Case::Invertible, None, w));
    }
    if membership.radical {
        let id = Mat2::identity(ring);
        let w = verify_witness(a, id.clone(), a - &id)?;
        return Ok(Classification::rad_clean(a, Case::Radical, None, w));
    }
    let cd = a.char_data();
    if !cd.trace.is_unit() {
        return Ok(Classification::rejected(a, Reason::TraceNotUnit));
    }
    let a0 = evaluate_at_zero(a)?;
    let base_verdict = if a0.ring().is_series() {
        classify_series_matrix(&a0)?
    } else {
        crate::classify::classify_rad_clean(&a0)?
    };
    let Some(base_roots) = base_verdict.roots else {
        return Ok(Classification::rejected(a, Reason::NoSplitRoots));
    };
    let alpha = lift_root_recurrence(cd.chi.mu(), cd.chi.lam(), &base_roots.alpha)?;
    let beta = -(cd.chi.mu() + &alpha);
    let roots = RootPair { alpha, beta };
    let witness = construct_witness(a, &roots)?;
    Ok(Classification::rad_clean(
        a,
        Case::SplitSpectral,
        Some(roots),
        witness,
    ))
}
