use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Pow;

use crate::error::{Error, Result};

/// Description of one concrete commutative local ring.
///
/// The textual form (see [`fmt::Display`] and [`FromStr`]) is
/// `Zmod:<p^k>`, `Zloc:<p>`, `Padic:<p>:<prec>` or `Series(<base>;<order>)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// Z/p^k.
    Zmod { p: u64, k: u32 },
    /// Integers localized at the prime p: fractions with p-free denominator.
    Zloc { p: u64 },
    /// p-adic integers held modulo p^prec.
    Padic { p: u64, prec: u32 },
    /// base[[x]] / (x^order).
    Series { base: Box<RingSpec>, order: usize },
}

impl RingSpec {
    pub fn prime(&self) -> u64 {
        match self {
            RingSpec::Zmod { p, .. } | RingSpec::Zloc { p } | RingSpec::Padic { p, .. } => *p,
            RingSpec::Series { base, .. } => base.prime(),
        }
    }

    /// Number of nested power-series variables.
    pub fn series_depth(&self) -> usize {
        match self {
            RingSpec::Series { base, .. } => 1 + base.series_depth(),
            _ => 0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            RingSpec::Zmod { p, k } => {
                check_prime(*p)?;
                if *k == 0 {
                    return Err(Error::InvalidSpec(
                        "Zmod exponent must be at least 1".into(),
                    ));
                }
                if p.checked_pow(*k).is_none() {
                    return Err(Error::InvalidSpec(format!(
                        "Zmod modulus {p}^{k} overflows u64"
                    )));
                }
                Ok(())
            }
            RingSpec::Zloc { p } => check_prime(*p),
            RingSpec::Padic { p, prec } => {
                check_prime(*p)?;
                if *prec == 0 {
                    return Err(Error::InvalidSpec(
                        "Padic precision must be at least 1".into(),
                    ));
                }
                Ok(())
            }
            RingSpec::Series { base, order } => {
                if *order == 0 {
                    return Err(Error::InvalidSpec("Series order must be at least 1".into()));
                }
                base.validate()
            }
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if primal_check::miller_rabin(p) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{p} is not prime")))
    }
}

/// Splits m into (p, k) with m = p^k, p prime.
fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    (1..=63u32).rev().find_map(|k| {
        let r = m.nth_root(k);
        (r >= 2 && r.checked_pow(k) == Some(m) && primal_check::miller_rabin(r)).then_some((r, k))
    })
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod { p, k } => write!(f, "Zmod:{}", p.pow(*k)),
            RingSpec::Zloc { p } => write!(f, "Zloc:{p}"),
            RingSpec::Padic { p, prec } => write!(f, "Padic:{p}:{prec}"),
            RingSpec::Series { base, order } => write!(f, "Series({base};{order})"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (spec, rest) = parse_spec(s, 0)?;
        if rest != s.len() {
            return Err(Error::parse(rest, "trailing characters after ring spec"));
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_number<T: FromStr>(s: &str, start: usize, what: &str) -> Result<(T, usize)> {
    let len = s[start..].bytes().take_while(u8::is_ascii_digit).count();
    if len == 0 {
        return Err(Error::parse(start, format!("expected {what}")));
    }
    let value = s[start..start + len]
        .parse()
        .map_err(|_| Error::parse(start, format!("{what} out of range")))?;
    Ok((value, start + len))
}

fn expect(s: &str, pos: usize, token: &str) -> Result<usize> {
    if s[pos..].starts_with(token) {
        Ok(pos + token.len())
    } else {
        Err(Error::parse(pos, format!("expected '{token}'")))
    }
}

fn parse_spec(s: &str, pos: usize) -> Result<(RingSpec, usize)> {
    let rest = &s[pos..];
    if rest.starts_with("Zmod:") {
        let (m, end) = parse_number::<u64>(s, pos + 5, "modulus")?;
        let (p, k) = prime_power(m)
            .ok_or_else(|| Error::InvalidSpec(format!("Zmod modulus {m} is not a prime power")))?;
        Ok((RingSpec::Zmod { p, k }, end))
    } else if rest.starts_with("Zloc:") {
        let (p, end) = parse_number(s, pos + 5, "prime")?;
        Ok((RingSpec::Zloc { p }, end))
    } else if rest.starts_with("Padic:") {
        let (p, end) = parse_number(s, pos + 6, "prime")?;
        let end = expect(s, end, ":")?;
        let (prec, end) = parse_number(s, end, "precision")?;
        Ok((RingSpec::Padic { p, prec }, end))
    } else if rest.starts_with("Series(") {
        let (base, end) = parse_spec(s, pos + 7)?;
        let end = expect(s, end, ";")?;
        let (order, end) = parse_number(s, end, "truncation order")?;
        let end = expect(s, end, ")")?;
        Ok((
            RingSpec::Series {
                base: Box::new(base),
                order,
            },
            end,
        ))
    } else {
        Err(Error::parse(
            pos,
            "expected one of Zmod:, Zloc:, Padic:, Series(",
        ))
    }
}

struct RingData {
    spec: RingSpec,
    prime: BigInt,
    /// p^k or p^prec for the residue families.
    modulus: Option<BigInt>,
    base: Option<Ring>,
}

/// Cheaply clonable handle to a validated ring.
///
/// Two handles compare equal when their specs are equal; elements from
/// equal rings may be combined freely.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring> {
        spec.validate()?;
        Ok(Self::build(spec))
    }

    fn build(spec: RingSpec) -> Ring {
        let prime = BigInt::from(spec.prime());
        let modulus = match &spec {
            RingSpec::Zmod { k, .. } => Some(Pow::pow(&prime, *k)),
            RingSpec::Padic { prec, .. } => Some(Pow::pow(&prime, *prec)),
            _ => None,
        };
        let base = match &spec {
            RingSpec::Series { base, .. } => Some(Self::build((**base).clone())),
            _ => None,
        };
        Ring(Arc::new(RingData {
            spec,
            prime,
            modulus,
            base,
        }))
    }

    pub fn parse(text: &str) -> Result<Ring> {
        Ok(Self::build(text.parse()?))
    }

    /// Z/m for a prime power m.
    pub fn zmod(m: u64) -> Result<Ring> {
        let (p, k) = prime_power(m)
            .ok_or_else(|| Error::InvalidSpec(format!("Zmod modulus {m} is not a prime power")))?;
        Self::new(RingSpec::Zmod { p, k })
    }

    pub fn zloc(p: u64) -> Result<Ring> {
        Self::new(RingSpec::Zloc { p })
    }

    pub fn padic(p: u64, prec: u32) -> Result<Ring> {
        Self::new(RingSpec::Padic { p, prec })
    }

    pub fn series(base: &Ring, order: usize) -> Result<Ring> {
        Self::new(RingSpec::Series {
            base: Box::new(base.spec().clone()),
            order,
        })
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn prime(&self) -> &BigInt {
        &self.0.prime
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.0.modulus.as_ref()
    }

    /// Coefficient ring of a power-series ring.
    pub fn base(&self) -> Option<&Ring> {
        self.0.base.as_ref()
    }

    /// Truncation order of a power-series ring.
    pub fn order(&self) -> Option<usize> {
        match &self.0.spec {
            RingSpec::Series { order, .. } => Some(*order),
            _ => None,
        }
    }

    pub fn is_series(&self) -> bool {
        self.0.base.is_some()
    }

    /// Number of elements, for the finite rings Z/p^k.
    pub fn finite_size(&self) -> Option<u64> {
        match &self.0.spec {
            RingSpec::Zmod { p, k } => Some(p.pow(*k)),
            _ => None,
        }
    }

    /// Whether 1/2 exists in the ring. Depends only on the residue field.
    pub fn two_is_unit(&self) -> bool {
        self.0.spec.prime() != 2
    }

    pub fn zero(&self) -> super::Elem {
        self.from_int(0)
    }

    pub fn one(&self) -> super::Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> super::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub(crate) fn ptr_eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || self.0.spec == other.0.spec
    }
}

impl Eq for Ring {}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.spec.fmt(f)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ring::parse(s)
    }
}
