//! Decision procedures for strong rad-cleanness of 2×2 matrices over a
//! commutative local ring, and construction of the decomposition `A = E + U`.
//!
//! A matrix that is neither invertible nor in J(M₂(R)) is strongly rad-clean
//! exactly when its characteristic polynomial splits with one root α in J(R)
//! and one root β in U(R). In that case
//!
//! ```text
//! E = (β − α)⁻¹ (β·I − A)
//! ```
//!
//! is the projector onto ker(A − αI) along ker(A − βI), `U = A − E` is
//! invertible and `EAE = αE` has radical entries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::quadratic::{
    self, discriminant_sqrt, solve_split_quadratic, solve_x2_plus_x, Evidence, RootPair,
    Solvability,
};
use crate::rings::{Elem, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Invertible,
    Radical,
    SplitSpectral,
    NotRadClean,
}

/// Which criterion produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Split of χ(A) into a radical and a unit root.
    CharRoots,
    /// `x² + x = −det/tr²` has a root in J(R).
    X2PlusXRadicalRoot,
    /// `x² + x = det/(tr² − 4det)` is solvable.
    X2PlusXSolvable,
    /// `tr² − 4det` is a square (needs 2 ∈ U(R)).
    DiscriminantSquare,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::CharRoots,
        Method::X2PlusXRadicalRoot,
        Method::X2PlusXSolvable,
        Method::DiscriminantSquare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::CharRoots => "char-roots",
            Method::X2PlusXRadicalRoot => "x2-plus-x-radical-root",
            Method::X2PlusXSolvable => "x2-plus-x-solvable",
            Method::DiscriminantSquare => "discriminant-square",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a matrix was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// Neither invertible nor radical, and tr A ∉ U(R).
    TraceNotUnit,
    /// Unit trace, but χ(A) has no root in J(R).
    NoSplitRoots,
}

/// One checked property of a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "E^2=E")]
    Idempotent,
    #[serde(rename = "A=E+U")]
    Decomposes,
    #[serde(rename = "EA=AE")]
    Commutes,
    #[serde(rename = "U in GL2")]
    UnitPart,
    #[serde(rename = "EAE in M2(J)")]
    CornerRadical,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::Idempotent => "E^2=E",
            Condition::Decomposes => "A=E+U",
            Condition::Commutes => "EA=AE",
            Condition::UnitPart => "U in GL2",
            Condition::CornerRadical => "EAE in M2(J)",
        }
    }
}

/// A verified strongly rad-clean decomposition `A = E + U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub e: Mat2,
    pub u: Mat2,
    /// Conditions checked, in order; always all five.
    pub transcript: Vec<Condition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub case: Case,
    pub roots: Option<RootPair>,
    pub strongly_rad_clean: bool,
    pub strongly_clean: bool,
    pub witness: Option<Witness>,
    pub method: Method,
    pub reason: Option<Reason>,
}

impl Classification {
    pub(crate) fn rad_clean(
        a: &Mat2,
        case: Case,
        roots: Option<RootPair>,
        witness: Witness,
    ) -> Self {
        debug_assert_eq!(case == Case::SplitSpectral, roots.is_some());
        let _ = a;
        Self {
            case,
            roots,
            strongly_rad_clean: true,
            strongly_clean: true,
            witness: Some(witness),
            method: Method::CharRoots,
            reason: None,
        }
    }

    pub(crate) fn rejected(a: &Mat2, reason: Reason) -> Self {
        Self {
            case: Case::NotRadClean,
            roots: None,
            strongly_rad_clean: false,
            strongly_clean: complement_invertible(a),
            witness: None,
            method: Method::CharRoots,
            reason: Some(reason),
        }
    }
}

fn complement_invertible(a: &Mat2) -> bool {
    (&Mat2::identity(a.ring()) - a).is_gl2()
}

/// Checks the five defining conditions and returns the witness.
pub fn verify_witness(a: &Mat2, e: Mat2, u: Mat2) -> Result<Witness> {
    let fail =
        |c: Condition| Error::WitnessVerificationFailed(format!("{} fails for A = {a}", c.label()));
    let checks = [
        (Condition::Idempotent, e.is_idempotent()),
        (Condition::Decomposes, &(&e + &u) == a),
        (Condition::Commutes, e.commutes_with(a)),
        (Condition::UnitPart, u.is_gl2()),
        (
            Condition::CornerRadical,
            (&(&e * a) * &e).is_in_radical_m2(),
        ),
    ];
    let mut transcript = Vec::with_capacity(checks.len());
    for (cond, ok) in checks {
        if !ok {
            return Err(fail(cond));
        }
        transcript.push(cond);
    }
    Ok(Witness { e, u, transcript })
}

/// Spectral-projector witness from a split of χ(A) into a radical root α
/// and a unit root β.
pub fn construct_witness(a: &Mat2, roots: &RootPair) -> Result<Witness> {
    let RootPair { alpha, beta } = roots;
    let cd = a.char_data();
    let consistent = alpha.ring() == a.ring()
        && beta.ring() == a.ring()
        && alpha.is_in_radical()
        && beta.is_unit()
        && (alpha + beta) == cd.trace
        && (alpha * beta) == cd.det;
    if !consistent {
        return Err(Error::WitnessVerificationFailed(format!(
            "({alpha}, {beta}) is not a radical/unit root split of the characteristic polynomial of {a}"
        )));
    }
    let gap = (beta - alpha).try_invert()?;
    let e = (&Mat2::scalar(beta) - a).scale(&gap)?;
    let u = a - &e;
    verify_witness(a, e, u)
}

fn invertible_witness(a: &Mat2) -> Result<Witness> {
    verify_witness(a, Mat2::zero(a.ring()), a.clone())
}

fn radical_witness(a: &Mat2) -> Result<Witness> {
    let id = Mat2::identity(a.ring());
    let u = a - &id;
    verify_witness(a, id, u)
}

/// Decides strong rad-cleanness and builds the witness when it holds.
///
/// Fails only when an internal verification fails.
pub fn classify_rad_clean(a: &Mat2) -> Result<Classification> {
    if a.is_gl2() {
        return Ok(Classification::rad_clean(
            a,
            Case::Invertible,
            None,
            invertible_witness(a)?,
        ));
    }
    if a.is_in_radical_m2() {
        return Ok(Classification::rad_clean(
            a,
            Case::Radical,
            None,
            radical_witness(a)?,
        ));
    }
    let cd = a.char_data();
    if !cd.trace.is_unit() {
        return Ok(Classification::rejected(a, Reason::TraceNotUnit));
    }
    match solve_split_quadratic(&cd.chi) {
        Ok(roots) => {
            let witness = construct_witness(a, &roots)?;
            Ok(Classification::rad_clean(
                a,
                Case::SplitSpectral,
                Some(roots),
                witness,
            ))
        }
        Err(Error::NotSolvable) => Ok(Classification::rejected(a, Reason::NoSplitRoots)),
        Err(e) => Err(e),
    }
}

/// Strongly clean: `I − A` invertible, or strongly rad-clean.
pub fn classify_strongly_clean(a: &Mat2) -> Result<bool> {
    Ok(complement_invertible(a) || classify_rad_clean(a)?.strongly_rad_clean)
}

fn solved(r: Result<Elem>) -> Result<bool> {
    match r {
        Ok(_) => Ok(true),
        Err(Error::NotSolvable) | Err(Error::NotASquare(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The strong rad-clean verdict computed along one specific criterion.
///
/// All paths agree with [`classify_rad_clean`]; `DiscriminantSquare`
/// requires 2 to be a unit.
pub fn rad_clean_alternative(a: &Mat2, path: Method) -> Result<bool> {
    if path == Method::DiscriminantSquare && !a.ring().two_is_unit() {
        return Err(Error::CharTwo(a.ring().to_string()));
    }
    if path == Method::CharRoots {
        return Ok(classify_rad_clean(a)?.strongly_rad_clean);
    }
    if a.is_gl2() || a.is_in_radical_m2() {
        return Ok(true);
    }
    let tr = a.trace();
    let det = a.det();
    if !tr.is_unit() {
        return Ok(false);
    }
    let four_det = &a.ring().from_int(4) * &det;
    match path {
        Method::X2PlusXRadicalRoot => {
            let c = -(&det * &(&tr * &tr).try_invert()?);
            if !c.is_in_radical() {
                return Ok(false);
            }
            solved(solve_x2_plus_x(&c))
        }
        Method::X2PlusXSolvable => {
            if !det.is_in_radical() {
                return Ok(false);
            }
            let c = &det * &(&(&tr * &tr) - &four_det).try_invert()?;
            solved(solve_x2_plus_x(&c))
        }
        Method::DiscriminantSquare => {
            if !det.is_in_radical() {
                return Ok(false);
            }
            solved(discriminant_sqrt(&(&(&tr * &tr) - &four_det)))
        }
        Method::CharRoots => unreachable!(),
    }
}

/// How an invertible-trace matrix was brought to normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// c ∈ U(R): conjugate directly to companion form.
    LowerLeftUnit,
    /// b ∈ U(R), c ∈ J(R): swap the basis, then as above.
    UpperRightUnit,
    /// b, c ∈ J(R), a − d ∈ U(R): shear by B₂₁(−1) first.
    DiagonalGapUnit,
    /// b, c ∈ J(R), a, d ∈ U(R): row reduction exhibits A ∈ GL₂(R).
    UnitDiagonal,
}

/// Output of [`normalize_invertible_trace`].
///
/// For every reduction except `UnitDiagonal`, `form = P·A·P⁻¹` is the
/// companion matrix `[[0, −det A], [1, tr A]]`. For `UnitDiagonal`,
/// `form = P·A` is upper triangular with unit diagonal, which certifies
/// `A ∈ GL₂(R)` but is not a similarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub reduction: Reduction,
    pub transform: Mat2,
    pub form: Mat2,
}

fn companion_transform(a: &Mat2) -> Result<Mat2> {
    let c_inv = a.c().try_invert()?;
    let shear = Mat2::b12(&-(a.a() * &c_inv));
    Ok(&Mat2::diag(a.c(), &a.ring().one())? * &shear)
}

/// Conjugates a matrix with unit trace into companion form, following the
/// case split on which entries are units.
pub fn normalize_invertible_trace(a: &Mat2) -> Result<Normalization> {
    if !a.trace().is_unit() {
        return Err(Error::PreconditionViolated(format!(
            "trace of {a} is not a unit"
        )));
    }
    let ring = a.ring();
    let (reduction, transform) = if a.c().is_unit() {
        (Reduction::LowerLeftUnit, companion_transform(a)?)
    } else if a.b().is_unit() {
        let swap = Mat2::swap(ring);
        let swapped = &(&swap * a) * &swap;
        (
            Reduction::UpperRightUnit,
            &companion_transform(&swapped)? * &swap,
        )
    } else if (a.a() - a.d()).is_unit() {
        let shear = Mat2::b21(&ring.from_int(-1));
        let sheared = a.conjugate_by(&shear)?;
        (
            Reduction::DiagonalGapUnit,
            &companion_transform(&sheared)? * &shear,
        )
    } else {
        assert!(
            a.a().is_unit() && a.d().is_unit(),
            "a matrix with all entries radical has radical trace"
        );
        let row_op = Mat2::b21(&-(a.c() * &a.a().try_invert()?));
        let form = &row_op * a;
        return Ok(Normalization {
            reduction: Reduction::UnitDiagonal,
            transform: row_op,
            form,
        });
    };
    let form = a.conjugate_by(&transform)?;
    if !form.a().is_zero() || !form.c().is_one() {
        return Err(Error::Verification(format!(
            "{form} is not in companion form"
        )));
    }
    Ok(Normalization {
        reduction,
        transform,
        form,
    })
}

/// Whether every matrix with invertible trace over the ring is strongly
/// rad-clean.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceProperty {
    Holds {
        evidence: Evidence,
        pairs_checked: u64,
    },
    /// `matrix = [[0, −λ], [1, −μ]]` has characteristic polynomial
    /// `t² + μt + λ`, which does not split; it is verified not strongly
    /// rad-clean.
    Counterexample {
        lambda: Elem,
        mu: Elem,
        matrix: Box<Mat2>,
        pairs_checked: u64,
    },
}

impl TraceProperty {
    pub fn holds(&self) -> bool {
        matches!(self, TraceProperty::Holds { .. })
    }
}

pub fn trace_property_check(ring: &Ring, budget: u64) -> Result<TraceProperty> {
    match quadratic::solvable_for_all(ring, budget)? {
        Solvability::Holds {
            evidence,
            pairs_checked,
        } => Ok(TraceProperty::Holds {
            evidence,
            pairs_checked,
        }),
        Solvability::Counterexample {
            lambda,
            mu,
            pairs_checked,
        } => {
            let matrix = Mat2::new(ring.zero(), -&lambda, ring.one(), -&mu)?;
            let verdict = classify_rad_clean(&matrix)?;
            if verdict.strongly_rad_clean || !matrix.trace().is_unit() {
                return Err(Error::Verification(format!(
                    "counterexample matrix {matrix} is not a rejected unit-trace matrix"
                )));
            }
            Ok(TraceProperty::Counterexample {
                lambda,
                mu,
                matrix: Box::new(matrix),
                pairs_checked,
            })
        }
    }
}
