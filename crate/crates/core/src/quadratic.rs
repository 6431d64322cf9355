//! Monic quadratics with one root in the maximal ideal and one unit root.
//!
//! For `t² + μt + λ` with μ a unit and λ in J(R) the residue polynomial is
//! `t(t + μ̄)`, whose roots 0 and −μ̄ are simple. The radical root is found
//! per ring family:
//!
//! * Z/p^k and p-adics: Newton iteration from 0, doubling the number of
//!   correct digits each step until the residue is exact.
//! * Z_(p): the discriminant must be the square of a rational; the radical
//!   root is then picked from the quadratic formula.
//! * power series: the base ring's root is lifted coefficient by
//!   coefficient (see [`crate::series`]).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::MonicQuadratic;
use crate::rings::{ratio_is_local, ratio_sqrt, Elem, Ring, RingSpec};
use crate::series;

/// Seed for every sampled check, so repeated runs see the same pairs.
pub(crate) const SAMPLE_SEED: u64 = 0x7261_6463_6c65_616e;

/// Roots of a split quadratic: `alpha` in J(R), `beta` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPair {
    pub alpha: Elem,
    pub beta: Elem,
}

/// Solves `t² + μt + λ = 0` for μ ∈ U(R), λ ∈ J(R).
///
/// The returned pair satisfies `α + β = −μ`, `αβ = λ`, `α ∈ J(R)` and
/// `β ∈ U(R)`; all four are re-checked before returning.
pub fn solve_split_quadratic(q: &MonicQuadratic) -> Result<RootPair> {
    if !q.mu().is_unit() {
        return Err(Error::PreconditionViolated(format!(
            "mu = {} is not a unit",
            q.mu()
        )));
    }
    if !q.lam().is_in_radical() {
        return Err(Error::PreconditionViolated(format!(
            "lambda = {} is not in the radical",
            q.lam()
        )));
    }
    let alpha = radical_root(q.mu(), q.lam())?;
    let beta = -(q.mu() + &alpha);
    let ok = q.eval(&alpha)?.is_zero()
        && q.eval(&beta)?.is_zero()
        && alpha.is_in_radical()
        && beta.is_unit()
        && (&alpha * &beta) == *q.lam();
    if !ok {
        return Err(Error::Verification(format!(
            "roots {alpha}, {beta} do not split {q}"
        )));
    }
    Ok(RootPair { alpha, beta })
}

/// The root in J(R) of `x² + x = c`, for c ∈ J(R).
pub fn solve_x2_plus_x(c: &Elem) -> Result<Elem> {
    if !c.is_in_radical() {
        return Err(Error::PreconditionViolated(format!(
            "c = {c} is not in the radical"
        )));
    }
    let x = radical_root(&c.ring().one(), &-c)?;
    if &(&x * &x) + &x != *c || !x.is_in_radical() {
        return Err(Error::Verification(format!(
            "{x} does not solve x^2 + x = {c}"
        )));
    }
    Ok(x)
}

/// A square root of `d` in a ring where 2 is a unit.
///
/// Only units and zero are decided in the residue and series families; a
/// nonzero non-unit is reported as a violated precondition there. In Z_(p)
/// any element is decided.
pub fn discriminant_sqrt(d: &Elem) -> Result<Elem> {
    let ring = d.ring();
    if !ring.two_is_unit() {
        return Err(Error::CharTwo(ring.to_string()));
    }
    if d.is_zero() {
        return Ok(ring.zero());
    }
    let root = match ring.spec() {
        RingSpec::Zmod { .. } | RingSpec::Padic { .. } => {
            require_unit(d)?;
            let p = ring.prime();
            let r0 = sqrt_mod_prime(&d.residue().expect("residue").mod_floor(p), p)
                .ok_or_else(|| Error::NotASquare(d.to_string()))?;
            newton_sqrt(d, ring.from_bigint(&r0))?
        }
        RingSpec::Zloc { .. } => {
            let q = d.ratio().expect("Zloc element");
            let s = ratio_sqrt(q).ok_or_else(|| Error::NotASquare(d.to_string()))?;
            ring.from_ratio(s)?
        }
        RingSpec::Series { .. } => {
            require_unit(d)?;
            let u0 = discriminant_sqrt(d.constant_term().expect("series"))?;
            series::lift_simple_root(&ring.zero(), &-d, &u0)?
        }
    };
    if &root * &root != *d {
        return Err(Error::Verification(format!("{root}^2 != {d}")));
    }
    Ok(root)
}

fn require_unit(d: &Elem) -> Result<()> {
    if d.is_unit() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!(
            "square roots are only decided for units here, got {d}"
        )))
    }
}

/// The unique root in J(R) of `t² + μt + λ`. Callers guarantee μ ∈ U(R)
/// and λ ∈ J(R).
pub(crate) fn radical_root(mu: &Elem, lam: &Elem) -> Result<Elem> {
    let ring = mu.ring();
    match ring.spec() {
        RingSpec::Zmod { k, .. } => newton_radical_root(mu, lam, *k),
        RingSpec::Padic { prec, .. } => newton_radical_root(mu, lam, *prec),
        RingSpec::Zloc { .. } => {
            let root = rational_radical_root(
                mu.ratio().expect("Zloc element"),
                lam.ratio().expect("Zloc element"),
                ring.prime(),
            )
            .ok_or(Error::NotSolvable)?;
            ring.from_ratio(root)
        }
        RingSpec::Series { .. } => {
            let alpha0 = radical_root(
                mu.constant_term().expect("series"),
                lam.constant_term().expect("series"),
            )?;
            series::lift_root_recurrence(mu, lam, &alpha0)
        }
    }
}

fn newton_steps(digits: u32) -> u32 {
    // correct digits double per step: 1, 2, 4, ...
    32 - digits.leading_zeros() + 2
}

fn newton_radical_root(mu: &Elem, lam: &Elem, digits: u32) -> Result<Elem> {
    let mut x = mu.ring().zero();
    for _ in 0..newton_steps(digits) {
        let f = &(&(&x * &x) + &(mu * &x)) + lam;
        if f.is_zero() {
            return Ok(x);
        }
        let df = &(&x + &x) + mu;
        x = &x - &(&f * &df.try_invert()?);
    }
    Err(Error::Verification(format!(
        "Newton iteration for t^2 + ({mu})t + ({lam}) did not converge"
    )))
}

fn newton_sqrt(d: &Elem, mut u: Elem) -> Result<Elem> {
    let digits = match d.ring().spec() {
        RingSpec::Zmod { k, .. } => *k,
        RingSpec::Padic { prec, .. } => *prec,
        _ => unreachable!("residue rings only"),
    };
    for _ in 0..newton_steps(digits) {
        let f = &(&u * &u) - d;
        if f.is_zero() {
            return Ok(u);
        }
        u = &u - &(&f * &(&u + &u).try_invert()?);
    }
    Err(Error::Verification(format!(
        "square root iteration for {d} did not converge"
    )))
}

/// Radical root of `t² + μt + λ` over Q, if it is rational and lies in
/// J(Z_(p)).
fn rational_radical_root(mu: &BigRational, lam: &BigRational, p: &BigInt) -> Option<BigRational> {
    let disc = mu * mu - BigRational::from_integer(4.into()) * lam;
    let s = ratio_sqrt(&disc)?;
    let two = BigRational::from_integer(2.into());
    [(-mu + &s) / &two, (-mu - &s) / &two]
        .into_iter()
        .find(|r| ratio_is_local(r, p) && r.numer().is_multiple_of(p))
}

/// Square root of `n` modulo the prime `p` (Tonelli–Shanks), normalized to
/// the smaller of the two residues.
pub(crate) fn sqrt_mod_prime(n: &BigInt, p: &BigInt) -> Option<BigInt> {
    let n = n.mod_floor(p);
    if n.is_zero() || p == &BigInt::from(2) {
        return Some(n);
    }
    let one = BigInt::one();
    let pm1 = p - &one;
    if n.modpow(&(&pm1 >> 1), p) != one {
        return None;
    }
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 >> 1), p) == one {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = n.modpow(&q, p);
    let mut r = n.modpow(&((&q + &one) >> 1), p);
    while t != one {
        let mut i = 0;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = &t2 * &t2 % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = &t * &c % p;
        r = &r * &b % p;
    }
    let other = p - &r;
    Some(if other < r { other } else { r })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// Every pair (λ, μ) ∈ J × U was solved.
    Exhaustive,
    /// Complete rings: the residue roots are simple, so Newton lifting
    /// always succeeds. Backed by a spot check.
    HenselSimpleRoots,
    /// A deterministic sample of pairs was solved.
    Sampled,
}

/// Outcome of checking that `x² + μx + λ = 0` is solvable for all
/// λ ∈ J(R), μ ∈ U(R).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solvability {
    Holds {
        evidence: Evidence,
        pairs_checked: u64,
    },
    Counterexample {
        lambda: Elem,
        mu: Elem,
        pairs_checked: u64,
    },
}

impl Solvability {
    pub fn holds(&self) -> bool {
        matches!(self, Solvability::Holds { .. })
    }
}

fn try_pair(lam: &Elem, mu: &Elem) -> Result<bool> {
    match solve_split_quadratic(&MonicQuadratic::new(mu.clone(), lam.clone())?) {
        Ok(_) => Ok(true),
        Err(Error::NotSolvable) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Checks solvability of every `x² + μx + λ` with λ ∈ J(R), μ ∈ U(R).
///
/// `budget` caps the number of pairs: exceeding it is an error for the
/// exhaustive Z/p^k check, and is the sample size for Z_(p) and series.
pub fn solvable_for_all(ring: &Ring, budget: u64) -> Result<Solvability> {
    match ring.spec() {
        RingSpec::Zmod { p, k } => {
            let n = p.pow(*k);
            let radical = n / p;
            let pairs = radical * (n - radical);
            if pairs > budget {
                return Err(Error::BudgetExceeded(format!(
                    "{pairs} pairs over {ring} exceed budget {budget}"
                )));
            }
            let mut checked = 0;
            for l in (0..n).step_by(*p as usize) {
                let lam = ring.from_bigint(&l.into());
                for m in (0..n).filter(|m| m % p != 0) {
                    let mu = ring.from_bigint(&m.into());
                    checked += 1;
                    if !try_pair(&lam, &mu)? {
                        return Ok(Solvability::Counterexample {
                            lambda: lam,
                            mu,
                            pairs_checked: checked,
                        });
                    }
                }
            }
            Ok(Solvability::Holds {
                evidence: Evidence::Exhaustive,
                pairs_checked: checked,
            })
        }
        RingSpec::Padic { .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            let spot = budget.min(32);
            for _ in 0..spot {
                let lam = ring.random_radical(&mut rng);
                let mu = ring.random_unit(&mut rng);
                if !try_pair(&lam, &mu)? {
                    return Err(Error::Verification(format!(
                        "Hensel lifting failed for lambda = {lam}, mu = {mu}"
                    )));
                }
            }
            Ok(Solvability::Holds {
                evidence: Evidence::HenselSimpleRoots,
                pairs_checked: spot,
            })
        }
        RingSpec::Zloc { p } => {
            // λ = p·s_i and μ = u_j along anti-diagonals of (i, j), where
            // s = 0, 1, -1, 2, -2, .. and u runs over the integers prime to p
            // in the same order.
            let zigzag = |i: u64| -> i64 {
                let h = i.div_ceil(2) as i64;
                if i % 2 == 1 {
                    h
                } else {
                    -h
                }
            };
            let units: Vec<i64> = (0u64..)
                .map(zigzag)
                .filter(|u| *u != 0 && u.rem_euclid(*p as i64) != 0)
                .take(budget as usize + 1)
                .collect();
            let mut checked = 0;
            'outer: for diag in 0u64.. {
                for i in 0..=diag {
                    if checked >= budget {
                        break 'outer;
                    }
                    let j = (diag - i) as usize;
                    let lam = ring.from_bigint(&(BigInt::from(*p) * zigzag(i)));
                    let mu = ring.from_int(units[j]);
                    checked += 1;
                    if !try_pair(&lam, &mu)? {
                        return Ok(Solvability::Counterexample {
                            lambda: lam,
                            mu,
                            pairs_checked: checked,
                        });
                    }
                }
            }
            Ok(Solvability::Holds {
                evidence: Evidence::Sampled,
                pairs_checked: checked,
            })
        }
        RingSpec::Series { .. } => {
            let base = ring.base().expect("series ring has a base");
            let mut checked = match solvable_for_all(base, budget)? {
                Solvability::Counterexample {
                    lambda,
                    mu,
                    pairs_checked,
                } => {
                    return Ok(Solvability::Counterexample {
                        lambda: ring.series_from_coeffs(vec![lambda])?,
                        mu: ring.series_from_coeffs(vec![mu])?,
                        pairs_checked,
                    });
                }
                Solvability::Holds { pairs_checked, .. } => pairs_checked,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            for _ in 0..budget {
                let lam = ring.random_radical(&mut rng);
                let mu = ring.random_unit(&mut rng);
                checked += 1;
                if !try_pair(&lam, &mu)? {
                    return Ok(Solvability::Counterexample {
                        lambda: lam,
                        mu,
                        pairs_checked: checked,
                    });
                }
            }
            Ok(Solvability::Holds {
                evidence: Evidence::Sampled,
                pairs_checked: checked,
            })
        }
    }
}
