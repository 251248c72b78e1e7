//! Exact linear algebra over the rationals and prime fields: reduced row
//! echelon form, null-space bases, affine solution families for `Ly = b`,
//! and fiber cardinality.
//!
//! No floating point anywhere. Rationals are arbitrary-precision and always
//! reduced; GF(p) residues always live in `0..p`. Over GF(p) the fiber of a
//! point is a finite set whose size `p^(n-rank)` can be checked against
//! brute-force enumeration, which is exactly what
//! [`verify_translation_family`] does when the space is small enough.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exhaustive family-enumeration cap for [`verify_translation_family`].
pub const FAMILY_ENUMERATION_CAP: u64 = 4096;

/// Full-space brute-force cap (`p^n`) for the fiber cross-check.
pub const BRUTE_FORCE_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinearError {
    #[error("{p} is not prime; GF(p) needs a prime modulus")]
    NotPrime { p: u64 },
    #[error("dimension mismatch: {what}")]
    DimensionMismatch { what: String },
    #[error("entry belongs to a different field than the matrix")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a solution set: {reason}")]
    NotASolutionSet { reason: String },
    #[error("internal self-check failed: {what}")]
    SelfCheckFailed { what: String },
}

/// The field a matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Rationals,
    Gf { p: u64 },
}

impl FieldTag {
    /// Validates primality for GF(p) by trial division.
    pub fn gf(p: u64) -> Result<Self, LinearError> {
        if p < 2 {
            return Err(LinearError::NotPrime { p });
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= p {
            if p % d == 0 {
                return Err(LinearError::NotPrime { p });
            }
            d += 1;
        }
        Ok(FieldTag::Gf { p })
    }

    fn zero(&self) -> ExactScalar {
        match self {
            FieldTag::Rationals => ExactScalar::Rational(BigRational::zero()),
            FieldTag::Gf { p } => ExactScalar::Residue { p: *p, value: 0 },
        }
    }

    fn one(&self) -> ExactScalar {
        match self {
            FieldTag::Rationals => ExactScalar::Rational(BigRational::one()),
            FieldTag::Gf { p } => ExactScalar::Residue { p: *p, value: 1 % *p },
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::Gf { p } => write!(f, "GF({p})"),
        }
    }
}

/// A field element: a reduced arbitrary-precision rational or a residue
/// mod a prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    Residue { p: u64, value: u64 },
}

impl ExactScalar {
    pub fn from_integer(field: FieldTag, v: i64) -> Self {
        match field {
            FieldTag::Rationals => ExactScalar::Rational(BigRational::from(BigInt::from(v))),
            FieldTag::Gf { p } => {
                let r = v.rem_euclid(p as i64) as u64;
                ExactScalar::Residue { p, value: r }
            }
        }
    }

    pub fn from_big_integer(field: FieldTag, v: &BigInt) -> Self {
        match field {
            FieldTag::Rationals => ExactScalar::Rational(BigRational::from(v.clone())),
            FieldTag::Gf { p } => {
                let m = BigInt::from(p);
                let mut r = v % &m;
                if r.is_negative() {
                    r += &m;
                }
                let (_, digits) = r.to_u64_digits();
                ExactScalar::Residue { p, value: digits.first().copied().unwrap_or(0) }
            }
        }
    }

    pub fn rational(numer: i64, denom: i64) -> Result<Self, LinearError> {
        if denom == 0 {
            return Err(LinearError::DivisionByZero);
        }
        Ok(ExactScalar::Rational(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    pub fn field(&self) -> FieldTag {
        match self {
            ExactScalar::Rational(_) => FieldTag::Rationals,
            ExactScalar::Residue { p, .. } => FieldTag::Gf { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => r.is_zero(),
            ExactScalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, LinearError> {
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => {
                Ok(ExactScalar::Rational(a + b))
            }
            (ExactScalar::Residue { p, value: a }, ExactScalar::Residue { p: q, value: b })
                if p == q =>
            {
                Ok(ExactScalar::Residue {
                    p: *p,
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                })
            }
            _ => Err(LinearError::MixedFields),
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, LinearError> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Self, LinearError> {
        match self {
            ExactScalar::Rational(a) => Ok(ExactScalar::Rational(-a)),
            ExactScalar::Residue { p, value } => {
                Ok(ExactScalar::Residue { p: *p, value: if *value == 0 { 0 } else { p - value } })
            }
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, LinearError> {
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => {
                Ok(ExactScalar::Rational(a * b))
            }
            (ExactScalar::Residue { p, value: a }, ExactScalar::Residue { p: q, value: b })
                if p == q =>
            {
                Ok(ExactScalar::Residue {
                    p: *p,
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                })
            }
            _ => Err(LinearError::MixedFields),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, LinearError> {
        if rhs.is_zero() {
            return Err(LinearError::DivisionByZero);
        }
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => {
                Ok(ExactScalar::Rational(a / b))
            }
            (ExactScalar::Residue { p, value: a }, ExactScalar::Residue { p: q, value: b })
                if p == q =>
            {
                let inv = mod_inverse(*b, *p);
                Ok(ExactScalar::Residue {
                    p: *p,
                    value: ((*a as u128 * inv as u128) % *p as u128) as u64,
                })
            }
            _ => Err(LinearError::MixedFields),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ExactScalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Fermat inverse; `p` prime and `b != 0 mod p`.
fn mod_inverse(b: u64, p: u64) -> u64 {
    let mut result: u128 = 1;
    let mut base = b as u128 % p as u128;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    result as u64
}

/// A dense matrix with every entry in one declared field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: FieldTag,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        field: FieldTag,
        entries: Vec<ExactScalar>,
    ) -> Result<Self, LinearError> {
        if rows == 0 || cols == 0 {
            return Err(LinearError::DimensionMismatch {
                what: format!("dimensions must be positive, got {rows}x{cols}"),
            });
        }
        if entries.len() != rows * cols {
            return Err(LinearError::DimensionMismatch {
                what: format!("{rows}x{cols} matrix needs {} entries, got {}", rows * cols, entries.len()),
            });
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(LinearError::MixedFields);
        }
        Ok(Self { rows, cols, field, entries })
    }

    pub fn from_integers(
        field: FieldTag,
        data: &[Vec<i64>],
    ) -> Result<Self, LinearError> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        if data.iter().any(|r| r.len() != cols) {
            return Err(LinearError::DimensionMismatch { what: "ragged rows".into() });
        }
        let entries = data
            .iter()
            .flat_map(|row| row.iter().map(|&v| ExactScalar::from_integer(field, v)))
            .collect();
        Self::new(rows, cols, field, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &ExactScalar {
        &self.entries[r * self.cols + c]
    }

    fn at_mut(&mut self, r: usize, c: usize) -> &mut ExactScalar {
        &mut self.entries[r * self.cols + c]
    }

    /// Matrix-vector product; `v` must have `cols` entries in this field.
    pub fn mul_vector(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>, LinearError> {
        if v.len() != self.cols {
            return Err(LinearError::DimensionMismatch {
                what: format!("vector of length {} against {} columns", v.len(), self.cols),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = self.field.zero();
            for c in 0..self.cols {
                acc = acc.checked_add(&self.at(r, c).checked_mul(&v[c])?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Output of [`rref`]: the reduced form, its rank, and the pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Reduced row echelon form by Gauss-Jordan elimination. Pivot selection is
/// deterministic: scanning columns left to right, the first row at or below
/// the current one with a nonzero entry. Pivots are normalized to 1 with
/// zeros above and below.
pub fn rref(m: &ExactMatrix) -> Rref {
    let mut r = m.clone();
    let mut pivot_cols = Vec::new();
    let mut pivot_row = 0;
    for col in 0..r.cols {
        if pivot_row >= r.rows {
            break;
        }
        let found = (pivot_row..r.rows).find(|&row| !r.at(row, col).is_zero());
        let Some(src) = found else { continue };
        if src != pivot_row {
            for c in 0..r.cols {
                let a = r.at(src, c).clone();
                let b = r.at(pivot_row, c).clone();
                *r.at_mut(src, c) = b;
                *r.at_mut(pivot_row, c) = a;
            }
        }
        let pivot = r.at(pivot_row, col).clone();
        for c in col..r.cols {
            let scaled = r
                .at(pivot_row, c)
                .checked_div(&pivot)
                .expect("pivot is nonzero by selection");
            *r.at_mut(pivot_row, c) = scaled;
        }
        for row in 0..r.rows {
            if row == pivot_row || r.at(row, col).is_zero() {
                continue;
            }
            let factor = r.at(row, col).clone();
            for c in col..r.cols {
                let delta = r
                    .at(pivot_row, c)
                    .checked_mul(&factor)
                    .and_then(|d| r.at(row, c).checked_sub(&d))
                    .expect("uniform field");
                *r.at_mut(row, c) = delta;
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    let rank = pivot_cols.len();
    Rref { matrix: r, rank, pivot_cols }
}

/// Null-space basis by free-variable back-substitution: one vector per free
/// column in ascending order (free variable 1, other free variables 0), each
/// verified against `M.k = 0` and the whole set verified independent by a
/// second rank computation.
pub fn null_space_basis(m: &ExactMatrix) -> Result<Vec<Vec<ExactScalar>>, LinearError> {
    let reduced = rref(m);
    let n = m.cols;
    let pivot_set: BTreeSet<usize> = reduced.pivot_cols.iter().copied().collect();
    let mut basis = Vec::with_capacity(n - reduced.rank);
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![m.field.zero(); n];
        v[free] = m.field.one();
        for (row, &pc) in reduced.pivot_cols.iter().enumerate() {
            // Pivot variable = -R[row][free] when the free variable is 1.
            v[pc] = reduced.matrix.at(row, free).checked_neg()?;
        }
        let image = m.mul_vector(&v)?;
        if image.iter().any(|e| !e.is_zero()) {
            return Err(LinearError::SelfCheckFailed {
                what: format!("null-space vector for free column {free} is not in the kernel"),
            });
        }
        basis.push(v);
    }
    if basis.len() != n - reduced.rank {
        return Err(LinearError::SelfCheckFailed {
            what: "null-space dimension does not match n - rank".into(),
        });
    }
    if !basis.is_empty() {
        let entries: Vec<ExactScalar> = basis.iter().flatten().cloned().collect();
        let as_matrix = ExactMatrix::new(basis.len(), n, m.field, entries)?;
        if rref(&as_matrix).rank != basis.len() {
            return Err(LinearError::SelfCheckFailed {
                what: "null-space basis is linearly dependent".into(),
            });
        }
    }
    Ok(basis)
}

/// The family `y0 + span(kernel basis)` of all solutions to `Ly = b`.
#[derive(Debug, Clone)]
pub struct AffineSolutionSet {
    pub particular: Vec<ExactScalar>,
    pub kernel_basis: Vec<Vec<ExactScalar>>,
    pub field: FieldTag,
}

impl AffineSolutionSet {
    pub fn nullity(&self) -> usize {
        self.kernel_basis.len()
    }

    /// The member `y0 + sum(c_i k_i)` for one coefficient tuple.
    pub fn member(&self, coefficients: &[ExactScalar]) -> Result<Vec<ExactScalar>, LinearError> {
        if coefficients.len() != self.kernel_basis.len() {
            return Err(LinearError::DimensionMismatch {
                what: format!(
                    "{} coefficients against {} kernel basis vectors",
                    coefficients.len(),
                    self.kernel_basis.len()
                ),
            });
        }
        let mut y = self.particular.clone();
        for (c, k) in coefficients.iter().zip(&self.kernel_basis) {
            for (yi, ki) in y.iter_mut().zip(k) {
                *yi = yi.checked_add(&c.checked_mul(ki)?)?;
            }
        }
        Ok(y)
    }
}

/// Outcome of [`solve_affine`]: a full solution family, or inconsistency
/// with the rref row that witnesses it.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Solution(AffineSolutionSet),
    /// No solution: in the reduced augmented matrix, this row reads
    /// `0 = 1`.
    Inconsistent { witness_row: usize },
}

/// Solves `My = b` exactly via the augmented rref. The particular solution
/// sets all free variables to zero; the kernel basis comes from
/// [`null_space_basis`]. All solution-set invariants are re-verified before
/// returning.
pub fn solve_affine(m: &ExactMatrix, b: &[ExactScalar]) -> Result<SolveOutcome, LinearError> {
    if b.len() != m.rows {
        return Err(LinearError::DimensionMismatch {
            what: format!("rhs of length {} against {} rows", b.len(), m.rows),
        });
    }
    if b.iter().any(|e| e.field() != m.field) {
        return Err(LinearError::MixedFields);
    }
    let n = m.cols;
    let mut entries = Vec::with_capacity(m.rows * (n + 1));
    for r in 0..m.rows {
        for c in 0..n {
            entries.push(m.at(r, c).clone());
        }
        entries.push(b[r].clone());
    }
    let augmented = ExactMatrix::new(m.rows, n + 1, m.field, entries)?;
    let reduced = rref(&augmented);
    if let Some(row) = reduced.pivot_cols.iter().position(|&c| c == n) {
        return Ok(SolveOutcome::Inconsistent { witness_row: row });
    }

    let mut particular = vec![m.field.zero(); n];
    for (row, &pc) in reduced.pivot_cols.iter().enumerate() {
        particular[pc] = reduced.matrix.at(row, n).clone();
    }
    let image = m.mul_vector(&particular)?;
    if image != b {
        return Err(LinearError::SelfCheckFailed {
            what: "particular solution does not satisfy My = b".into(),
        });
    }
    let kernel_basis = null_space_basis(m)?;
    Ok(SolveOutcome::Solution(AffineSolutionSet {
        particular,
        kernel_basis,
        field: m.field,
    }))
}

/// How many points a fiber of the map `y -> My` has: `p^(n-rank)` over
/// GF(p), a dimension over the rationals (finite only when the kernel is
/// trivial). The size is the same for every point of the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberCardinality {
    Finite { count: BigUint },
    Infinite { dimension: usize },
}

impl fmt::Display for FiberCardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberCardinality::Finite { count } => write!(f, "{count}"),
            FiberCardinality::Infinite { dimension } => {
                write!(f, "infinite (dimension {dimension})")
            }
        }
    }
}

pub fn fiber_cardinality(m: &ExactMatrix) -> FiberCardinality {
    let d = m.cols - rref(m).rank;
    match m.field {
        FieldTag::Gf { p } => {
            FiberCardinality::Finite { count: BigUint::from(p).pow(d as u32) }
        }
        FieldTag::Rationals => {
            if d == 0 {
                FiberCardinality::Finite { count: BigUint::one() }
            } else {
                FiberCardinality::Infinite { dimension: d }
            }
        }
    }
}

/// Checks that every sampled coefficient tuple yields an exact solution of
/// `My = b`. Over GF(p) with `p^nullity` within the enumeration cap, all
/// tuples are enumerated instead and checked to produce exactly `p^nullity`
/// distinct solutions; when `p^n` is within the brute-force cap the family
/// is also compared against the full-space fiber of `b`.
pub fn verify_translation_family(
    m: &ExactMatrix,
    b: &[ExactScalar],
    solset: &AffineSolutionSet,
    coefficient_samples: &[Vec<ExactScalar>],
) -> Result<bool, LinearError> {
    if solset.field != m.field {
        return Err(LinearError::MixedFields);
    }
    for (i, tuple) in coefficient_samples.iter().enumerate() {
        let y = solset.member(tuple)?;
        if m.mul_vector(&y)? != b {
            return Err(LinearError::NotASolutionSet {
                reason: format!("sampled coefficient tuple {i} does not solve My = b"),
            });
        }
    }

    if let FieldTag::Gf { p } = m.field {
        let d = solset.kernel_basis.len() as u32;
        let family_size = p.checked_pow(d);
        if let Some(size) = family_size.filter(|&s| s <= FAMILY_ENUMERATION_CAP) {
            let mut family: BTreeSet<Vec<u64>> = BTreeSet::new();
            let mut tuple = vec![0u64; d as usize];
            loop {
                let coeffs: Vec<ExactScalar> =
                    tuple.iter().map(|&v| ExactScalar::Residue { p, value: v }).collect();
                let y = solset.member(&coeffs)?;
                if m.mul_vector(&y)? != b {
                    return Err(LinearError::NotASolutionSet {
                        reason: format!("family member at tuple {tuple:?} does not solve My = b"),
                    });
                }
                family.insert(residue_vector(&y)?);
                if !advance_base_p(&mut tuple, p) {
                    break;
                }
            }
            if family.len() as u64 != size {
                return Err(LinearError::NotASolutionSet {
                    reason: format!(
                        "family has {} distinct members, expected p^d = {size}",
                        family.len()
                    ),
                });
            }
            let n = m.cols as u32;
            if p.checked_pow(n).is_some_and(|total| total <= BRUTE_FORCE_CAP) {
                let fiber = brute_force_fiber(m, b)?;
                if fiber != family {
                    return Err(LinearError::NotASolutionSet {
                        reason: "family does not exhaust the brute-force fiber of b".into(),
                    });
                }
            }
        }
    }

    Ok(true)
}

/// Every vector of GF(p)^n mapped by `m` onto `b`, found by exhaustive
/// enumeration. This is the independent oracle side of the fiber checks.
pub fn brute_force_fiber(
    m: &ExactMatrix,
    b: &[ExactScalar],
) -> Result<BTreeSet<Vec<u64>>, LinearError> {
    let FieldTag::Gf { p } = m.field else {
        return Err(LinearError::DimensionMismatch {
            what: "brute-force fiber enumeration needs a finite field".into(),
        });
    };
    let n = m.cols;
    let mut fiber = BTreeSet::new();
    let mut v = vec![0u64; n];
    loop {
        let vec: Vec<ExactScalar> =
            v.iter().map(|&value| ExactScalar::Residue { p, value }).collect();
        if m.mul_vector(&vec)? == b {
            fiber.insert(v.clone());
        }
        if !advance_base_p(&mut v, p) {
            break;
        }
    }
    Ok(fiber)
}

fn residue_vector(v: &[ExactScalar]) -> Result<Vec<u64>, LinearError> {
    v.iter()
        .map(|e| match e {
            ExactScalar::Residue { value, .. } => Ok(*value),
            ExactScalar::Rational(_) => Err(LinearError::MixedFields),
        })
        .collect()
}

fn advance_base_p(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> ExactScalar {
        ExactScalar::from_integer(FieldTag::Rationals, v)
    }

    fn qm(data: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_integers(FieldTag::Rationals, data).unwrap()
    }

    fn gfm(p: u64, data: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_integers(FieldTag::gf(p).unwrap(), data).unwrap()
    }

    #[test]
    fn primality_is_checked() {
        assert!(FieldTag::gf(2).is_ok());
        assert!(FieldTag::gf(3).is_ok());
        assert!(FieldTag::gf(13).is_ok());
        assert!(matches!(FieldTag::gf(1), Err(LinearError::NotPrime { p: 1 })));
        assert!(matches!(FieldTag::gf(4), Err(LinearError::NotPrime { p: 4 })));
        assert!(matches!(FieldTag::gf(91), Err(LinearError::NotPrime { p: 91 })));
    }

    #[test]
    fn rationals_stay_reduced() {
        let half = ExactScalar::rational(2, 4).unwrap();
        assert_eq!(half.to_string(), "1/2");
        let neg = ExactScalar::rational(1, -2).unwrap();
        assert_eq!(neg.to_string(), "-1/2");
        let sum = half.checked_add(&neg).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn residues_stay_reduced() {
        let a = ExactScalar::from_integer(FieldTag::Gf { p: 5 }, -3);
        assert_eq!(a, ExactScalar::Residue { p: 5, value: 2 });
        let b = ExactScalar::Residue { p: 5, value: 4 };
        let prod = a.checked_mul(&b).unwrap();
        assert_eq!(prod, ExactScalar::Residue { p: 5, value: 3 });
        let quot = prod.checked_div(&b).unwrap();
        assert_eq!(quot, a);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = q(3);
        assert!(matches!(a.checked_div(&q(0)), Err(LinearError::DivisionByZero)));
        let r = ExactScalar::Residue { p: 7, value: 4 };
        let z = ExactScalar::Residue { p: 7, value: 0 };
        assert!(matches!(r.checked_div(&z), Err(LinearError::DivisionByZero)));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = q(1);
        let b = ExactScalar::Residue { p: 3, value: 1 };
        assert!(matches!(a.checked_add(&b), Err(LinearError::MixedFields)));
        assert!(ExactMatrix::new(1, 2, FieldTag::Rationals, vec![a, b]).is_err());
    }

    #[test]
    fn rref_zero_matrix() {
        let m = qm(&[vec![0, 0], vec![0, 0]]);
        let r = rref(&m);
        assert_eq!(r.rank, 0);
        assert!(r.pivot_cols.is_empty());
        assert_eq!(r.matrix, m);
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = qm(&[vec![1, 0], vec![0, 1]]);
        let r = rref(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, m);
    }

    #[test]
    fn rref_rank_one_matrix() {
        let m = qm(&[vec![1, 2], vec![2, 4]]);
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix, qm(&[vec![1, 2], vec![0, 0]]));
        assert_eq!(r.pivot_cols, vec![0]);
    }

    #[test]
    fn null_space_of_invertible_is_empty() {
        let m = qm(&[vec![2, 1], vec![1, 1]]);
        assert!(null_space_basis(&m).unwrap().is_empty());
    }

    #[test]
    fn null_space_of_difference_row() {
        let m = qm(&[vec![1, -1]]);
        let basis = null_space_basis(&m).unwrap();
        assert_eq!(basis, vec![vec![q(1), q(1)]]);
    }

    #[test]
    fn null_space_over_gf2() {
        let m = gfm(2, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let basis = null_space_basis(&m).unwrap();
        let one = ExactScalar::Residue { p: 2, value: 1 };
        assert_eq!(basis, vec![vec![one.clone(), one.clone(), one]]);
    }

    #[test]
    fn solve_unique_system() {
        let m = qm(&[vec![2, 0], vec![0, 3]]);
        let out = solve_affine(&m, &[q(4), q(9)]).unwrap();
        match out {
            SolveOutcome::Solution(s) => {
                assert_eq!(s.particular, vec![q(2), q(3)]);
                assert!(s.kernel_basis.is_empty());
            }
            SolveOutcome::Inconsistent { .. } => panic!("system is consistent"),
        }
    }

    #[test]
    fn solve_underdetermined_difference() {
        let m = qm(&[vec![1, -1]]);
        let out = solve_affine(&m, &[q(2)]).unwrap();
        let SolveOutcome::Solution(s) = out else { panic!("consistent") };
        assert_eq!(s.particular, vec![q(2), q(0)]);
        assert_eq!(s.kernel_basis, vec![vec![q(1), q(1)]]);
        // Every (2+c, c) solves the system.
        for c in [-1i64, 0, 1, 5] {
            let y = s.member(&[q(c)]).unwrap();
            assert_eq!(m.mul_vector(&y).unwrap(), vec![q(2)]);
        }
        let seven_thirds = ExactScalar::rational(7, 3).unwrap();
        let y = s.member(&[seven_thirds]).unwrap();
        assert_eq!(m.mul_vector(&y).unwrap(), vec![q(2)]);
    }

    #[test]
    fn solve_inconsistent_system() {
        let m = qm(&[vec![1, 0], vec![1, 0]]);
        let out = solve_affine(&m, &[q(1), q(2)]).unwrap();
        assert!(matches!(out, SolveOutcome::Inconsistent { witness_row: 1 }));
    }

    #[test]
    fn fiber_cardinality_cases() {
        let inv = qm(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(
            fiber_cardinality(&inv),
            FiberCardinality::Finite { count: BigUint::one() }
        );

        let gf2 = gfm(2, &[vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(
            fiber_cardinality(&gf2),
            FiberCardinality::Finite { count: BigUint::from(2u32) }
        );

        let diff = qm(&[vec![1, -1]]);
        assert_eq!(fiber_cardinality(&diff), FiberCardinality::Infinite { dimension: 1 });
    }

    #[test]
    fn gf2_buckets_all_have_kernel_size() {
        // Enumerate all 8 inputs of the 2x3 rank-2 system and bucket by
        // image: every bucket must have size 2.
        let m = gfm(2, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let mut buckets: std::collections::BTreeMap<Vec<u64>, usize> = Default::default();
        let mut v = vec![0u64; 3];
        loop {
            let vec: Vec<ExactScalar> =
                v.iter().map(|&value| ExactScalar::Residue { p: 2, value }).collect();
            let image = residue_vector(&m.mul_vector(&vec).unwrap()).unwrap();
            *buckets.entry(image).or_default() += 1;
            if !advance_base_p(&mut v, 2) {
                break;
            }
        }
        assert_eq!(buckets.len(), 4);
        assert!(buckets.values().all(|&c| c == 2));
    }

    #[test]
    fn translation_family_over_gf2_is_exhaustive() {
        let m = gfm(2, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let b = vec![
            ExactScalar::Residue { p: 2, value: 1 },
            ExactScalar::Residue { p: 2, value: 0 },
        ];
        let SolveOutcome::Solution(s) = solve_affine(&m, &b).unwrap() else {
            panic!("consistent")
        };
        assert!(verify_translation_family(&m, &b, &s, &[]).unwrap());
        let fiber = brute_force_fiber(&m, &b).unwrap();
        assert_eq!(fiber.len(), 2);
    }

    #[test]
    fn translation_family_empty_kernel() {
        let m = qm(&[vec![1, 0], vec![0, 1]]);
        let b = vec![q(5), q(6)];
        let SolveOutcome::Solution(s) = solve_affine(&m, &b).unwrap() else {
            panic!("consistent")
        };
        assert!(verify_translation_family(&m, &b, &s, &[vec![]]).unwrap());
    }

    #[test]
    fn corrupted_solution_set_is_detected() {
        let m = qm(&[vec![1, -1]]);
        let b = vec![q(2)];
        let SolveOutcome::Solution(mut s) = solve_affine(&m, &b).unwrap() else {
            panic!("consistent")
        };
        s.particular[0] = q(3);
        let err = verify_translation_family(&m, &b, &s, &[vec![q(0)]]).unwrap_err();
        assert!(matches!(err, LinearError::NotASolutionSet { .. }));
    }

    #[test]
    fn rank_nullity_on_every_rref() {
        for data in [
            vec![vec![1, 2, 3], vec![4, 5, 6]],
            vec![vec![0, 0], vec![0, 0], vec![1, 1]],
            vec![vec![3]],
        ] {
            let m = qm(&data);
            let r = rref(&m);
            let basis = null_space_basis(&m).unwrap();
            assert_eq!(r.rank + basis.len(), m.cols());
        }
    }
}
