//! 2×2 matrices over a single local ring.
//!
//! Matrices act on column vectors by left multiplication. The literal form
//! is `"a,b;c,d"`: rows separated by `;`, entries by `,`, each entry in the
//! element literal grammar.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rings::literal::LiteralParser;
use crate::rings::{Elem, Ring};

/// Row-major matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2 {
    ring: Ring,
    entries: [Elem; 4],
}

/// The monic quadratic `t² + mu·t + lam`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicQuadratic {
    mu: Elem,
    lam: Elem,
}

impl MonicQuadratic {
    pub fn new(mu: Elem, lam: Elem) -> Result<Self> {
        mu.check_ring(lam.ring())?;
        Ok(Self { mu, lam })
    }

    pub fn mu(&self) -> &Elem {
        &self.mu
    }

    pub fn lam(&self) -> &Elem {
        &self.lam
    }

    pub fn ring(&self) -> &Ring {
        self.mu.ring()
    }

    pub fn eval(&self, t: &Elem) -> Result<Elem> {
        Ok(t.try_mul(t)?.try_add(&self.mu.try_mul(t)?)? + self.lam.clone())
    }

    /// `mu² − 4·lam`.
    pub fn discriminant(&self) -> Elem {
        &self.mu * &self.mu - &self.ring().from_int(4) * &self.lam
    }
}

impl fmt::Display for MonicQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^2 + ({})t + ({})", self.mu, self.lam)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharData {
    pub trace: Elem,
    pub det: Elem,
    /// `t² − (tr A)·t + det A`.
    pub chi: MonicQuadratic,
}

impl Mat2 {
    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Self> {
        let ring = a.ring().clone();
        for e in [&b, &c, &d] {
            e.check_ring(&ring)?;
        }
        Ok(Self {
            ring,
            entries: [a, b, c, d],
        })
    }

    pub fn from_ints(ring: &Ring, rows: [[i64; 2]; 2]) -> Self {
        Self {
            ring: ring.clone(),
            entries: [
                ring.from_int(rows[0][0]),
                ring.from_int(rows[0][1]),
                ring.from_int(rows[1][0]),
                ring.from_int(rows[1][1]),
            ],
        }
    }

    /// Parses `"a,b;c,d"`.
    pub fn parse(ring: &Ring, text: &str) -> Result<Self> {
        let mut p = LiteralParser::new(text);
        let a = p.literal(ring)?;
        p.expect(b',')?;
        let b = p.literal(ring)?;
        p.expect(b';')?;
        let c = p.literal(ring)?;
        p.expect(b',')?;
        let d = p.literal(ring)?;
        p.finish()?;
        Self::new(a, b, c, d)
    }

    pub fn identity(ring: &Ring) -> Self {
        Self::from_ints(ring, [[1, 0], [0, 1]])
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::from_ints(ring, [[0, 0], [0, 0]])
    }

    pub fn scalar(x: &Elem) -> Self {
        let z = x.ring().zero();
        Self {
            ring: x.ring().clone(),
            entries: [x.clone(), z.clone(), z, x.clone()],
        }
    }

    pub fn diag(x: &Elem, y: &Elem) -> Result<Self> {
        let z = x.ring().zero();
        Self::new(x.clone(), z.clone(), z, y.clone())
    }

    /// `[[1, x], [0, 1]]`.
    pub fn b12(x: &Elem) -> Self {
        let r = x.ring();
        Self {
            ring: r.clone(),
            entries: [r.one(), x.clone(), r.zero(), r.one()],
        }
    }

    /// `[[1, 0], [x, 1]]`.
    pub fn b21(x: &Elem) -> Self {
        let r = x.ring();
        Self {
            ring: r.clone(),
            entries: [r.one(), r.zero(), x.clone(), r.one()],
        }
    }

    /// The permutation `[[0, 1], [1, 0]]`.
    pub fn swap(ring: &Ring) -> Self {
        Self::from_ints(ring, [[0, 1], [1, 0]])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn entries(&self) -> &[Elem; 4] {
        &self.entries
    }

    pub fn a(&self) -> &Elem {
        &self.entries[0]
    }

    pub fn b(&self) -> &Elem {
        &self.entries[1]
    }

    pub fn c(&self) -> &Elem {
        &self.entries[2]
    }

    pub fn d(&self) -> &Elem {
        &self.entries[3]
    }

    /// Entry literals as `[[a, b], [c, d]]`.
    pub fn rows(&self) -> [[String; 2]; 2] {
        let s = |i: usize| self.entries[i].to_string();
        [[s(0), s(1)], [s(2), s(3)]]
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> Result<Self> {
        let [a, b, c, d] = &self.entries;
        Self::new(f(a), f(b), f(c), f(d))
    }

    pub fn trace(&self) -> Elem {
        self.a() + self.d()
    }

    pub fn det(&self) -> Elem {
        self.a() * self.d() - self.b() * self.c()
    }

    pub fn char_data(&self) -> CharData {
        let trace = self.trace();
        let det = self.det();
        let chi = MonicQuadratic {
            mu: -&trace,
            lam: det.clone(),
        };
        CharData { trace, det, chi }
    }

    pub fn is_gl2(&self) -> bool {
        self.det().is_unit()
    }

    /// Membership in the Jacobson radical of M₂(R), i.e. every entry in J(R).
    pub fn is_in_radical_m2(&self) -> bool {
        self.entries.iter().all(Elem::is_in_radical)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Elem::is_zero)
    }

    pub fn is_idempotent(&self) -> bool {
        &(self * self) == self
    }

    pub fn commutes_with(&self, other: &Mat2) -> bool {
        self * other == other * self
    }

    fn check_ring(&self, other: &Mat2) -> Result<()> {
        self.entries[0].check_ring(&other.ring)
    }

    pub fn try_add(&self, other: &Mat2) -> Result<Mat2> {
        self.check_ring(other)?;
        Ok(self.zip(other, |x, y| x + y))
    }

    pub fn try_sub(&self, other: &Mat2) -> Result<Mat2> {
        self.check_ring(other)?;
        Ok(self.zip(other, |x, y| x - y))
    }

    pub fn try_mul(&self, other: &Mat2) -> Result<Mat2> {
        self.check_ring(other)?;
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        Ok(Mat2 {
            ring: self.ring.clone(),
            entries: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        })
    }

    pub fn scale(&self, s: &Elem) -> Result<Mat2> {
        s.check_ring(&self.ring)?;
        Ok(Mat2 {
            ring: self.ring.clone(),
            entries: self.entries.clone().map(|x| s * &x),
        })
    }

    fn zip(&self, other: &Mat2, f: impl Fn(&Elem, &Elem) -> Elem) -> Mat2 {
        Mat2 {
            ring: self.ring.clone(),
            entries: [0, 1, 2, 3].map(|i| f(&self.entries[i], &other.entries[i])),
        }
    }

    /// Closed-form inverse `det⁻¹·adj`.
    pub fn inverse(&self) -> Result<Mat2> {
        let inv = self.det().try_invert().map_err(|_| Error::NotInvertible)?;
        let [a, b, c, d] = &self.entries;
        Ok(Mat2 {
            ring: self.ring.clone(),
            entries: [d * &inv, -(b * &inv), -(c * &inv), a * &inv],
        })
    }

    /// `P · self · P⁻¹`.
    pub fn conjugate_by(&self, p: &Mat2) -> Result<Mat2> {
        self.check_ring(p)?;
        let p_inv = p.inverse()?;
        Ok(&(p * self) * &p_inv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Add,
    Sub,
    Mul,
    Conjugate,
}

/// Binary matrix operation by name; `Conjugate` computes `a · b · a⁻¹`.
pub fn mat_op(op: MatOp, a: &Mat2, b: &Mat2) -> Result<Mat2> {
    match op {
        MatOp::Add => a.try_add(b),
        MatOp::Sub => a.try_sub(b),
        MatOp::Mul => a.try_mul(b),
        MatOp::Conjugate => b.conjugate_by(a),
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "{a},{b};{c},{d}")
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]] over {}", self.ring)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Mat2> for &Mat2 {
            type Output = Mat2;
            fn $method(self, rhs: &Mat2) -> Mat2 {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2 {
            ring: self.ring.clone(),
            entries: self.entries.clone().map(|x| -x),
        }
    }
}
