//! Brute-force checks over M₂(Z/p^k) straight from the definitions.
//!
//! Everything here uses machine-integer arithmetic on residues, separate
//! from the library's exact ring code, so that agreement between the two
//! means something. Matrices are encoded as indices `a + n·b + n²·c + n³·d`.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_rad_clean, classify_strongly_clean, rad_clean_alternative, Method};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::rings::{Ring, RingSpec};

type Small = [u64; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest modulus p^k accepted.
    pub max_modulus: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_modulus: 9 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    Clean,
    RadClean,
    JClean,
    Quasipolar,
}

impl Predicate {
    pub const ALL: [Predicate; 4] = [
        Predicate::Clean,
        Predicate::RadClean,
        Predicate::JClean,
        Predicate::Quasipolar,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    Only(Predicate),
}

impl Selection {
    fn includes(self, p: Predicate) -> bool {
        match self {
            Selection::All => true,
            Selection::Only(q) => p == q,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Residue arithmetic and the lazily filled quasinilpotence table for one
/// modulus.
pub struct Oracle {
    ring: Ring,
    n: u64,
    p: u64,
    idempotents: Vec<Small>,
    qnil: Vec<OnceLock<bool>>,
}

impl Oracle {
    pub fn new(ring: &Ring, budget: Budget) -> Result<Self> {
        let RingSpec::Zmod { p, k } = *ring.spec() else {
            return Err(Error::PreconditionViolated(format!(
                "the oracle needs a finite ring Zmod:<p^k>, got {ring}"
            )));
        };
        let n = p.pow(k);
        if n > budget.max_modulus {
            return Err(Error::BudgetExceeded(format!(
                "modulus {n} exceeds the oracle limit {}",
                budget.max_modulus
            )));
        }
        let mut oracle = Self {
            ring: ring.clone(),
            n,
            p,
            idempotents: Vec::new(),
            qnil: Vec::new(),
        };
        oracle.idempotents = (0..oracle.count())
            .map(|i| oracle.decode(i))
            .filter(|e| oracle.mul(e, e) == *e)
            .collect();
        oracle.qnil = (0..oracle.count()).map(|_| OnceLock::new()).collect();
        Ok(oracle)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Number of matrices, n⁴.
    pub fn count(&self) -> u64 {
        self.n.pow(4)
    }

    fn decode(&self, mut i: u64) -> Small {
        let mut m = [0; 4];
        for e in &mut m {
            *e = i % self.n;
            i /= self.n;
        }
        m
    }

    fn encode(&self, m: &Small) -> u64 {
        m.iter().rev().fold(0, |acc, e| acc * self.n + e)
    }

    fn mul(&self, x: &Small, y: &Small) -> Small {
        let n = self.n;
        [
            (x[0] * y[0] + x[1] * y[2]) % n,
            (x[0] * y[1] + x[1] * y[3]) % n,
            (x[2] * y[0] + x[3] * y[2]) % n,
            (x[2] * y[1] + x[3] * y[3]) % n,
        ]
    }

    fn add(&self, x: &Small, y: &Small) -> Small {
        [0, 1, 2, 3].map(|i| (x[i] + y[i]) % self.n)
    }

    fn sub(&self, x: &Small, y: &Small) -> Small {
        [0, 1, 2, 3].map(|i| (x[i] + self.n - y[i]) % self.n)
    }

    fn identity(&self) -> Small {
        [1 % self.n, 0, 0, 1 % self.n]
    }

    fn unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p)
    }

    fn invertible(&self, m: &Small) -> bool {
        let det = (m[0] * m[3] + self.n * self.n - m[1] * m[2] % self.n) % self.n;
        self.unit(det)
    }

    fn radical(&self, m: &Small) -> bool {
        m.iter().all(|&e| e % self.p == 0)
    }

    fn commute(&self, x: &Small, y: &Small) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// `I + Q·X` is invertible for every X commuting with Q.
    fn quasinilpotent(&self, q: &Small) -> bool {
        *self.qnil[self.encode(q) as usize].get_or_init(|| {
            let id = self.identity();
            (0..self.count())
                .map(|i| self.decode(i))
                .filter(|x| self.commute(q, x))
                .all(|x| self.invertible(&self.add(&id, &self.mul(q, &x))))
        })
    }

    fn small(&self, m: &Mat2) -> Result<Small> {
        if m.ring() != &self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: m.ring().to_string(),
            });
        }
        Ok(m.entries().clone().map(|e| {
            let r = e.residue().expect("Zmod element");
            u64::try_from(r).expect("reduced residue")
        }))
    }

    fn to_mat2(&self, m: &Small) -> Mat2 {
        let [a, b, c, d] = m.map(|e| e as i64);
        Mat2::from_ints(&self.ring, [[a, b], [c, d]])
    }

    pub fn idempotents(&self) -> Vec<Mat2> {
        self.idempotents.iter().map(|e| self.to_mat2(e)).collect()
    }

    fn brute(&self, a: &Small, which: Predicate) -> bool {
        let mut commuting = self.idempotents.iter().filter(|e| self.commute(e, a));
        match which {
            Predicate::Clean => commuting.any(|e| self.invertible(&self.sub(a, e))),
            Predicate::RadClean => commuting.any(|e| {
                self.invertible(&self.sub(a, e)) && self.radical(&self.mul(&self.mul(e, a), e))
            }),
            Predicate::JClean => commuting.any(|e| self.radical(&self.sub(a, e))),
            Predicate::Quasipolar => commuting
                .any(|e| self.invertible(&self.add(a, e)) && self.quasinilpotent(&self.mul(a, e))),
        }
    }

    /// Decides a predicate for one matrix by search over idempotents.
    pub fn brute_predicate(&self, a: &Mat2, which: Predicate) -> Result<bool> {
        Ok(self.brute(&self.small(a)?, which))
    }

    fn sweep_range(&self, range: std::ops::Range<u64>, selection: Selection) -> Result<Partial> {
        let mut part = Partial::default();
        for i in range {
            let s = self.decode(i);
            let a = self.to_mat2(&s);
            self.sweep_one(&s, &a, selection, &mut part)?;
        }
        Ok(part)
    }

    fn sweep_one(
        &self,
        s: &Small,
        a: &Mat2,
        selection: Selection,
        part: &mut Partial,
    ) -> Result<()> {
        let mut verdict = [None; 4];
        for (slot, which) in verdict.iter_mut().zip(Predicate::ALL) {
            if selection.includes(which) {
                let v = self.brute(s, which);
                *slot = Some(v);
                part.tallies.bump(which, v);
            }
        }
        let [clean, rad, j, qp] = verdict;
        let unit_trace = self.unit((s[0] + s[3]) % self.n);
        if unit_trace {
            part.tallies.invertible_trace += 1;
        }

        let mut compare = |check: &str, closed: bool, brute: bool| {
            if closed != brute {
                part.mismatches.push(Mismatch {
                    matrix: a.rows(),
                    check: check.to_owned(),
                    closed_form: closed,
                    brute,
                });
            }
        };
        if let Some(brute) = clean {
            compare("strongly-clean", classify_strongly_clean(a)?, brute);
        }
        if let Some(brute) = rad {
            let c = classify_rad_clean(a)?;
            compare(Method::CharRoots.as_str(), c.strongly_rad_clean, brute);
            for path in Method::ALL.into_iter().skip(1) {
                if path == Method::DiscriminantSquare && !self.ring.two_is_unit() {
                    continue;
                }
                compare(path.as_str(), rad_clean_alternative(a, path)?, brute);
            }
            if unit_trace && brute {
                part.tallies.invertible_trace_rad_clean += 1;
            }
            if let Some(w) = &c.witness {
                let e = self.small(&w.e)?;
                let u = self.small(&w.u)?;
                let ok = self.mul(&e, &e) == e
                    && self.add(&e, &u) == *s
                    && self.commute(&e, s)
                    && self.invertible(&u)
                    && self.radical(&self.mul(&self.mul(&e, s), &e));
                if ok {
                    part.witnesses_verified += 1;
                } else {
                    part.witness_failures.push(a.rows());
                }
            }
        }

        let implications = [
            ("j-clean => rad-clean", j, rad),
            ("rad-clean => clean", rad, clean),
            ("rad-clean => quasipolar", rad, qp),
        ];
        for (name, lhs, rhs) in implications {
            if let (Some(true), Some(false)) = (lhs, rhs) {
                part.implication_violations.push(Violation {
                    matrix: a.rows(),
                    implication: name.to_owned(),
                });
            }
        }
        Ok(())
    }
}

/// All idempotents of M₂(Z/p^k).
pub fn enumerate_idempotents(ring: &Ring, budget: Budget) -> Result<Vec<Mat2>> {
    Ok(Oracle::new(ring, budget)?.idempotents())
}

pub fn brute_predicate(a: &Mat2, which: Predicate, budget: Budget) -> Result<bool> {
    Oracle::new(a.ring(), budget)?.brute_predicate(a, which)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tallies {
    pub clean: Option<u64>,
    pub rad_clean: Option<u64>,
    pub j_clean: Option<u64>,
    pub quasipolar: Option<u64>,
    pub invertible_trace: u64,
    /// Unit-trace matrices found strongly rad-clean by brute force.
    pub invertible_trace_rad_clean: u64,
}

impl Tallies {
    fn slot(&mut self, which: Predicate) -> &mut Option<u64> {
        match which {
            Predicate::Clean => &mut self.clean,
            Predicate::RadClean => &mut self.rad_clean,
            Predicate::JClean => &mut self.j_clean,
            Predicate::Quasipolar => &mut self.quasipolar,
        }
    }

    pub fn get(&self, which: Predicate) -> Option<u64> {
        match which {
            Predicate::Clean => self.clean,
            Predicate::RadClean => self.rad_clean,
            Predicate::JClean => self.j_clean,
            Predicate::Quasipolar => self.quasipolar,
        }
    }

    fn bump(&mut self, which: Predicate, holds: bool) {
        *self.slot(which).get_or_insert(0) += u64::from(holds);
    }

    fn merge(&mut self, other: &Tallies) {
        for which in Predicate::ALL {
            if let Some(v) = other.get(which) {
                *self.slot(which).get_or_insert(0) += v;
            }
        }
        self.invertible_trace += other.invertible_trace;
        self.invertible_trace_rad_clean += other.invertible_trace_rad_clean;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub matrix: [[String; 2]; 2],
    pub check: String,
    pub closed_form: bool,
    pub brute: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub matrix: [[String; 2]; 2],
    pub implication: String,
}

#[derive(Default)]
struct Partial {
    tallies: Tallies,
    mismatches: Vec<Mismatch>,
    implication_violations: Vec<Violation>,
    witnesses_verified: u64,
    witness_failures: Vec<[[String; 2]; 2]>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.tallies.merge(&other.tallies);
        self.mismatches.extend(other.mismatches);
        self.implication_violations
            .extend(other.implication_violations);
        self.witnesses_verified += other.witnesses_verified;
        self.witness_failures.extend(other.witness_failures);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub ring: String,
    pub total_matrices: u64,
    pub idempotents: u64,
    /// Closed-form checks compared against brute force.
    pub compared: Vec<String>,
    pub tallies: Tallies,
    pub mismatches: Vec<Mismatch>,
    pub implication_violations: Vec<Violation>,
    pub witnesses_verified: u64,
    pub witness_failures: Vec<[[String; 2]; 2]>,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
            && self.implication_violations.is_empty()
            && self.witness_failures.is_empty()
    }
}

const CHUNK: u64 = 256;

/// Runs every selected brute-force predicate over all of M₂(Z/p^k) and
/// compares it with the closed-form criteria, in parallel.
pub fn exhaustive_cross_check(
    ring: &Ring,
    selection: Selection,
    budget: Budget,
) -> Result<OracleReport> {
    exhaustive_cross_check_with(ring, selection, budget, Execution::Parallel)
}

/// As [`exhaustive_cross_check`]; both executions give identical reports.
pub fn exhaustive_cross_check_with(
    ring: &Ring,
    selection: Selection,
    budget: Budget,
    execution: Execution,
) -> Result<OracleReport> {
    let oracle = Oracle::new(ring, budget)?;
    let total = oracle.count();
    let chunks: Vec<_> = (0..total)
        .step_by(CHUNK as usize)
        .map(|s| s..(s + CHUNK).min(total))
        .collect();
    let parts: Vec<Partial> = match execution {
        Execution::Serial => chunks
            .into_iter()
            .map(|r| oracle.sweep_range(r, selection))
            .collect::<Result<_>>()?,
        Execution::Parallel => chunks
            .into_par_iter()
            .map(|r| oracle.sweep_range(r, selection))
            .collect::<Result<_>>()?,
    };
    let merged = parts.into_iter().fold(Partial::default(), Partial::merge);

    let mut compared = Vec::new();
    if selection.includes(Predicate::Clean) {
        compared.push("strongly-clean".to_owned());
    }
    if selection.includes(Predicate::RadClean) {
        for path in Method::ALL {
            if path != Method::DiscriminantSquare || ring.two_is_unit() {
                compared.push(path.as_str().to_owned());
            }
        }
    }
    Ok(OracleReport {
        ring: ring.to_string(),
        total_matrices: total,
        idempotents: oracle.idempotents.len() as u64,
        compared,
        tallies: merged.tallies,
        mismatches: merged.mismatches,
        implication_violations: merged.implication_violations,
        witnesses_verified: merged.witnesses_verified,
        witness_failures: merged.witness_failures,
    })
}

/// Tests `EXE ∈ J(E·M₂·E)` definitionally for every idempotent E and every
/// X: an element x of the corner is radical iff `E − x·y` is a unit of the
/// corner for all y in it. Returns whether this always agrees with
/// `EXE ∈ M₂(J)`.
pub fn corner_radical_identity_holds(ring: &Ring, budget: Budget) -> Result<bool> {
    let o = Oracle::new(ring, budget)?;
    for e in &o.idempotents {
        let mut corner: Vec<Small> = (0..o.count())
            .map(|i| o.mul(&o.mul(e, &o.decode(i)), e))
            .collect();
        corner.sort_unstable();
        corner.dedup();
        let is_unit = |z: &Small| {
            corner
                .iter()
                .any(|w| o.mul(z, w) == *e && o.mul(w, z) == *e)
        };
        let units: Vec<bool> = corner.iter().map(is_unit).collect();
        let unit_in_corner = |z: &Small| units[corner.binary_search(z).expect("corner is closed")];
        for x in &corner {
            let definitional = corner
                .iter()
                .all(|y| unit_in_corner(&o.sub(e, &o.mul(x, y))));
            if definitional != o.radical(x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
