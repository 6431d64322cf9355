use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{Ring, RingSpec};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub(crate) enum Repr {
    /// Canonical residue in [0, modulus).
    Residue(BigInt),
    /// Fraction in lowest terms, positive p-free denominator.
    Local(BigRational),
    /// Exactly `order` coefficients over the base ring.
    Series(Vec<Elem>),
}

/// One element of a [`Ring`], always held in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Elem {
    ring: Ring,
    repr: Repr,
}

impl Ring {
    /// The image of an integer in this ring.
    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        let repr = match self.spec() {
            RingSpec::Zmod { .. } | RingSpec::Padic { .. } => {
                Repr::Residue(n.mod_floor(self.modulus().expect("residue ring has a modulus")))
            }
            RingSpec::Zloc { .. } => Repr::Local(BigRational::from_integer(n.clone())),
            RingSpec::Series { order, .. } => {
                let base = self.base().expect("series ring has a base");
                let mut coeffs = vec![base.from_bigint(n)];
                coeffs.resize(*order, base.zero());
                Repr::Series(coeffs)
            }
        };
        Elem {
            ring: self.clone(),
            repr,
        }
    }

    /// A fraction of Z_(p). Fails unless the ring is `Zloc` and the reduced
    /// denominator is prime to p.
    pub fn from_ratio(&self, q: BigRational) -> Result<Elem> {
        match self.spec() {
            RingSpec::Zloc { .. } => {
                if q.denom().is_multiple_of(self.prime()) {
                    return Err(Error::DenominatorNotUnit(format_ratio(&q)));
                }
                Ok(Elem {
                    ring: self.clone(),
                    repr: Repr::Local(q),
                })
            }
            _ if q.is_integer() => Ok(self.from_bigint(q.numer())),
            _ => Err(Error::PreconditionViolated(format!(
                "fractions are only supported in Zloc rings, not {self}"
            ))),
        }
    }

    /// Builds a power series from its leading coefficients; missing
    /// coefficients are zero.
    pub fn series_from_coeffs(&self, coeffs: Vec<Elem>) -> Result<Elem> {
        let (base, order) = match (self.base(), self.order()) {
            (Some(b), Some(o)) => (b, o),
            _ => {
                return Err(Error::PreconditionViolated(format!(
                    "{self} is not a series ring"
                )))
            }
        };
        if coeffs.len() > order {
            return Err(Error::PreconditionViolated(format!(
                "{} coefficients exceed truncation order {order}",
                coeffs.len()
            )));
        }
        for c in &coeffs {
            c.check_ring(base)?;
        }
        let mut coeffs = coeffs;
        coeffs.resize(order, base.zero());
        Ok(Elem {
            ring: self.clone(),
            repr: Repr::Series(coeffs),
        })
    }

    /// Every element of a finite ring, in increasing residue order.
    pub fn elements(&self) -> Option<impl Iterator<Item = Elem> + '_> {
        let n = self.finite_size()?;
        Some((0..n).map(move |i| self.from_bigint(&BigInt::from(i))))
    }

    /// Uniform residue for Zmod/Padic, a small fraction for Zloc,
    /// coefficientwise for series.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self.spec() {
            RingSpec::Zmod { .. } | RingSpec::Padic { .. } => {
                let m = self.modulus().expect("residue ring has a modulus");
                self.from_bigint(&rng.gen_bigint_range(&BigInt::zero(), m))
            }
            RingSpec::Zloc { p } => loop {
                let num = BigInt::from(rng.gen_range(-60i64..=60));
                let den = BigInt::from(rng.gen_range(1i64..=12));
                if !den.is_multiple_of(&BigInt::from(*p)) {
                    break Elem {
                        ring: self.clone(),
                        repr: Repr::Local(BigRational::new(num, den)),
                    };
                }
            },
            RingSpec::Series { order, .. } => {
                let base = self.base().expect("series ring has a base");
                let coeffs = (0..*order).map(|_| base.random_elem(rng)).collect();
                Elem {
                    ring: self.clone(),
                    repr: Repr::Series(coeffs),
                }
            }
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random_elem(rng);
            if e.is_unit() {
                return e;
            }
        }
    }

    pub fn random_radical<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self.spec() {
            RingSpec::Series { .. } => {
                let e = self.random_elem(rng);
                let mut coeffs = e.coeffs().expect("series element").to_vec();
                coeffs[0] = self
                    .base()
                    .expect("series ring has a base")
                    .random_radical(rng);
                self.series_from_coeffs(coeffs)
                    .expect("coefficients from the base ring")
            }
            _ => &self.random_elem(rng) * &self.from_bigint(self.prime()),
        }
    }
}

fn format_ratio(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Elem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Residue in [0, p^k) for Zmod and Padic elements.
    pub fn residue(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Residue(r) => Some(r),
            _ => None,
        }
    }

    /// Reduced fraction for Zloc elements.
    pub fn ratio(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Local(q) => Some(q),
            _ => None,
        }
    }

    /// Coefficients [c0, .., c_{m-1}] of a power-series element.
    pub fn coeffs(&self) -> Option<&[Elem]> {
        match &self.repr {
            Repr::Series(c) => Some(c),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Option<&Elem> {
        self.coeffs().map(|c| &c[0])
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Residue(r) => r.is_zero(),
            Repr::Local(q) => q.is_zero(),
            Repr::Series(c) => c.iter().all(Elem::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Residue(r) => r.is_one(),
            Repr::Local(q) => q.is_one(),
            Repr::Series(c) => c[0].is_one() && c[1..].iter().all(Elem::is_zero),
        }
    }

    pub fn is_unit(&self) -> bool {
        let p = self.ring.prime();
        match &self.repr {
            Repr::Residue(r) => !r.is_multiple_of(p),
            Repr::Local(q) => !q.numer().is_multiple_of(p),
            Repr::Series(c) => c[0].is_unit(),
        }
    }

    /// Membership in the maximal ideal, tested directly rather than as the
    /// complement of [`Elem::is_unit`].
    pub fn is_in_radical(&self) -> bool {
        let p = self.ring.prime();
        let radical = match &self.repr {
            Repr::Residue(r) => r.is_multiple_of(p),
            Repr::Local(q) => q.numer().is_multiple_of(p),
            Repr::Series(c) => c[0].is_in_radical(),
        };
        debug_assert_ne!(radical, self.is_unit(), "local ring dichotomy for {self:?}");
        radical
    }

    pub(crate) fn check_ring(&self, ring: &Ring) -> Result<()> {
        if self.ring == *ring {
            return Ok(());
        }
        match (self.ring.spec(), ring.spec()) {
            (RingSpec::Padic { p: p1, prec: a }, RingSpec::Padic { p: p2, prec: b })
                if p1 == p2 =>
            {
                Err(Error::PrecisionMismatch {
                    left: *a,
                    right: *b,
                })
            }
            _ => Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: ring.to_string(),
            }),
        }
    }

    fn with_repr(&self, repr: Repr) -> Elem {
        Elem {
            ring: self.ring.clone(),
            repr,
        }
    }

    fn reduce(&self, r: BigInt) -> Elem {
        let m = self.ring.modulus().expect("residue ring has a modulus");
        self.with_repr(Repr::Residue(r.mod_floor(m)))
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem> {
        self.check_ring(&other.ring)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Elem) -> Result<Elem> {
        self.check_ring(&other.ring)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn try_mul(&self, other: &Elem) -> Result<Elem> {
        self.check_ring(&other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Elem) -> Elem {
        match (&self.repr, &other.repr) {
            (Repr::Residue(a), Repr::Residue(b)) => self.reduce(a + b),
            (Repr::Local(a), Repr::Local(b)) => self.with_repr(Repr::Local(a + b)),
            (Repr::Series(a), Repr::Series(b)) => self.with_repr(Repr::Series(
                a.iter().zip(b).map(|(x, y)| x.add_unchecked(y)).collect(),
            )),
            _ => unreachable!("representation follows the ring"),
        }
    }

    fn sub_unchecked(&self, other: &Elem) -> Elem {
        match (&self.repr, &other.repr) {
            (Repr::Residue(a), Repr::Residue(b)) => self.reduce(a - b),
            (Repr::Local(a), Repr::Local(b)) => self.with_repr(Repr::Local(a - b)),
            (Repr::Series(a), Repr::Series(b)) => self.with_repr(Repr::Series(
                a.iter().zip(b).map(|(x, y)| x.sub_unchecked(y)).collect(),
            )),
            _ => unreachable!("representation follows the ring"),
        }
    }

    fn mul_unchecked(&self, other: &Elem) -> Elem {
        match (&self.repr, &other.repr) {
            (Repr::Residue(a), Repr::Residue(b)) => self.reduce(a * b),
            (Repr::Local(a), Repr::Local(b)) => self.with_repr(Repr::Local(a * b)),
            (Repr::Series(a), Repr::Series(b)) => {
                let m = a.len();
                let coeffs = (0..m)
                    .map(|k| {
                        let mut acc = a[0].mul_unchecked(&b[k]);
                        for i in 1..=k {
                            acc = acc.add_unchecked(&a[i].mul_unchecked(&b[k - i]));
                        }
                        acc
                    })
                    .collect();
                self.with_repr(Repr::Series(coeffs))
            }
            _ => unreachable!("representation follows the ring"),
        }
    }

    pub fn neg(&self) -> Elem {
        match &self.repr {
            Repr::Residue(a) => self.reduce(-a),
            Repr::Local(a) => self.with_repr(Repr::Local(-a)),
            Repr::Series(a) => self.with_repr(Repr::Series(a.iter().map(Elem::neg).collect())),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Elem {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, or [`Error::NotAUnit`].
    pub fn try_invert(&self) -> Result<Elem> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        match &self.repr {
            Repr::Residue(a) => {
                let m = self.ring.modulus().expect("residue ring has a modulus");
                let eg = a.extended_gcd(m);
                debug_assert!(eg.gcd.is_one());
                Ok(self.reduce(eg.x))
            }
            Repr::Local(q) => Ok(self.with_repr(Repr::Local(q.recip()))),
            Repr::Series(c) => {
                // c * b = 1  =>  b_k = -b_0 * sum_{i=1..k} c_i b_{k-i}
                let b0 = c[0].try_invert()?;
                let mut b: Vec<Elem> = Vec::with_capacity(c.len());
                b.push(b0.clone());
                for k in 1..c.len() {
                    let mut acc = c[1].mul_unchecked(&b[k - 1]);
                    for i in 2..=k {
                        acc = acc.add_unchecked(&c[i].mul_unchecked(&b[k - i]));
                    }
                    b.push(b0.mul_unchecked(&acc).neg());
                }
                Ok(self.with_repr(Repr::Series(b)))
            }
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Residue(r) => write!(f, "{r}"),
            Repr::Local(q) => f.write_str(&format_ratio(q)),
            Repr::Series(c) => {
                f.write_str("[")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

// Operator forms panic on mismatched rings; use the `try_*` methods when the
// operands come from untrusted input.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(self)
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(&self)
    }
}

pub(crate) fn ratio_is_local(q: &BigRational, p: &BigInt) -> bool {
    !q.denom().is_multiple_of(p)
}

pub(crate) fn ratio_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}
