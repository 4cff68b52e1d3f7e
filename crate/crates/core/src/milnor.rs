//! The mod 2 Steenrod algebra in the Milnor basis.
//!
//! A basis element `Sq(r_1, ..., r_k)` has degree `sum r_i (2^i - 1)`. Within a
//! degree, basis elements are ordered reverse-lexicographically: compare the
//! last exponent first. This order drives leading terms in the resolution,
//! and the position of an element in [`DegreeBasis`] is its coordinate in
//! every bit vector over `A_t`.
//!
//! Exponent sequences are packed into a `u64`, one byte per exponent with
//! `r_1` in the lowest byte. Numeric order of the packed key is then exactly
//! the reverse-lexicographic order, which makes basis lookups a binary search.
//! Packing caps degrees at [`MAX_DEGREE`].

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::Error;

/// Largest internal degree the packed representation supports.
pub const MAX_DEGREE: u32 = 255;

/// Maximum number of exponents (enough for every degree up to [`MAX_DEGREE`]).
pub const MAX_LEN: usize = 8;

/// A Milnor basis monomial `Sq^R`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MilnorElt(u64);

#[inline]
fn xi_degree(i: usize) -> u32 {
    (2u32 << i) - 1
}

impl MilnorElt {
    /// The unit `Sq^0 = Sq()`.
    pub const UNIT: MilnorElt = MilnorElt(0);

    /// Builds a monomial from its exponents. Trailing zeros are ignored.
    pub fn new(exponents: &[u32]) -> Result<Self, Error> {
        let len = exponents.iter().rposition(|&r| r != 0).map_or(0, |p| p + 1);
        if len > MAX_LEN || exponents[..len].iter().any(|&r| r > 255) {
            return Err(Error::Range(format!(
                "Milnor exponents {exponents:?} exceed the packed representation"
            )));
        }
        let elt = MilnorElt(
            exponents[..len]
                .iter()
                .enumerate()
                .fold(0u64, |key, (i, &r)| key | (u64::from(r) << (8 * i))),
        );
        if elt.degree() > MAX_DEGREE {
            return Err(Error::Range(format!("degree of {elt} exceeds {MAX_DEGREE}")));
        }
        Ok(elt)
    }

    /// `Sq^n`, i.e. the exponent sequence `(n)`.
    pub fn sq(n: u32) -> Self {
        assert!(n <= MAX_DEGREE, "Sq^{n} out of range");
        MilnorElt(u64::from(n))
    }

    pub(crate) fn from_key(key: u64) -> Self {
        MilnorElt(key)
    }

    pub(crate) fn key(self) -> u64 {
        self.0
    }

    pub fn is_unit(self) -> bool {
        self.0 == 0
    }

    /// Number of exponents up to and including the last nonzero one.
    pub fn len(self) -> usize {
        if self.0 == 0 {
            0
        } else {
            8 - (self.0.leading_zeros() as usize / 8)
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The `i`-th exponent, zero-based (`exponent(0)` is `r_1`).
    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        if i >= MAX_LEN {
            0
        } else {
            ((self.0 >> (8 * i)) & 0xff) as u32
        }
    }

    pub fn exponents(self) -> Vec<u32> {
        (0..self.len()).map(|i| self.exponent(i)).collect()
    }

    pub fn degree(self) -> u32 {
        (0..self.len()).map(|i| self.exponent(i) * xi_degree(i)).sum()
    }

    /// Doubles every exponent. Returns `None` if an exponent would overflow.
    pub fn doubled(self) -> Option<Self> {
        let exps: Vec<u32> = self.exponents().iter().map(|r| 2 * r).collect();
        MilnorElt::new(&exps).ok()
    }

    /// The restriction `V`: halves an all-even exponent sequence, and sends
    /// anything with an odd exponent to zero (`None`).
    pub fn v_restrict(self) -> Option<Self> {
        // every byte even <=> the low bit of every byte is clear
        if self.0 & 0x0101_0101_0101_0101 != 0 {
            None
        } else {
            Some(MilnorElt((self.0 >> 1) & 0x7f7f_7f7f_7f7f_7f7f))
        }
    }
}

impl PartialOrd for MilnorElt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then reverse-lexicographic.
impl Ord for MilnorElt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| compare_rlex(*self, *other))
    }
}

impl fmt::Display for MilnorElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.exponent(i))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MilnorElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sq{self}")
    }
}

/// Milnor degree `sum r_i (2^i - 1)`.
pub fn degree(r: MilnorElt) -> u32 {
    r.degree()
}

/// Reverse-lexicographic comparison: `R < R'` iff `r_k < r'_k` at the
/// highest index `k` where they differ.
pub fn compare_rlex(a: MilnorElt, b: MilnorElt) -> Ordering {
    a.0.cmp(&b.0)
}

/// `V` on a single monomial.
pub fn v_restrict(r: MilnorElt) -> Option<MilnorElt> {
    r.v_restrict()
}

/// A homogeneous F2-linear combination of Milnor monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraElt {
    degree: u32,
    // sorted by compare_rlex, no duplicates
    support: Vec<MilnorElt>,
}

impl AlgebraElt {
    pub fn zero(degree: u32) -> Self {
        AlgebraElt {
            degree,
            support: Vec::new(),
        }
    }

    pub fn unit() -> Self {
        AlgebraElt::from(MilnorElt::UNIT)
    }

    /// Sums a list of monomials of the given degree, cancelling pairs.
    pub fn from_monomials(
        degree: u32,
        monomials: impl IntoIterator<Item = MilnorElt>,
    ) -> Result<Self, Error> {
        let mut support: Vec<MilnorElt> = monomials.into_iter().collect();
        if let Some(bad) = support.iter().find(|m| m.degree() != degree) {
            return Err(Error::Range(format!(
                "monomial {bad} does not have degree {degree}"
            )));
        }
        support.sort_unstable_by(|a, b| compare_rlex(*a, *b));
        Ok(AlgebraElt {
            degree,
            support: cancel_pairs(support),
        })
    }

    pub(crate) fn from_sorted_unchecked(degree: u32, support: Vec<MilnorElt>) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0].0 < w[1].0));
        AlgebraElt { degree, support }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn support(&self) -> &[MilnorElt] {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, m: MilnorElt) -> bool {
        self.support
            .binary_search_by(|x| compare_rlex(*x, m))
            .is_ok()
    }

    /// Adds (XORs) a monomial of the right degree.
    pub fn add_monomial(&mut self, m: MilnorElt) {
        debug_assert_eq!(m.degree(), self.degree);
        match self.support.binary_search_by(|x| compare_rlex(*x, m)) {
            Ok(p) => {
                self.support.remove(p);
            }
            Err(p) => self.support.insert(p, m),
        }
    }

    pub fn add(&mut self, other: &AlgebraElt) {
        assert_eq!(self.degree, other.degree, "adding elements of different degree");
        let mut merged = Vec::with_capacity(self.support.len() + other.support.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.support, &other.support);
        while i < a.len() && j < b.len() {
            match compare_rlex(a[i], b[j]) {
                Ordering::Less => {
                    merged.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    merged.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        self.support = merged;
    }

    /// Applies `V` termwise, dropping monomials with an odd exponent.
    /// Returns `None` when the degree is odd (the image is then zero in no
    /// meaningful degree).
    pub fn v_restrict(&self) -> Option<AlgebraElt> {
        if !self.degree.is_multiple_of(2) {
            return None;
        }
        let support = self.support.iter().filter_map(|m| m.v_restrict()).collect();
        // halving preserves rlex order
        Some(AlgebraElt::from_sorted_unchecked(self.degree / 2, support))
    }
}

impl From<MilnorElt> for AlgebraElt {
    fn from(m: MilnorElt) -> Self {
        AlgebraElt {
            degree: m.degree(),
            support: vec![m],
        }
    }
}

impl fmt::Display for AlgebraElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, m) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "Sq{m}")?;
        }
        Ok(())
    }
}

fn cancel_pairs(sorted: Vec<MilnorElt>) -> Vec<MilnorElt> {
    let mut out: Vec<MilnorElt> = Vec::with_capacity(sorted.len());
    for m in sorted {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}

/// All Milnor monomials of one degree, sorted by [`compare_rlex`].
#[derive(Debug)]
pub struct DegreeBasis {
    degree: u32,
    elements: Vec<MilnorElt>,
}

impl DegreeBasis {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> &[MilnorElt] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, index: usize) -> MilnorElt {
        self.elements[index]
    }

    pub fn index_of(&self, m: MilnorElt) -> Option<usize> {
        self.index_of_key(m.key())
    }

    #[inline]
    pub(crate) fn index_of_key(&self, key: u64) -> Option<usize> {
        self.elements.binary_search_by(|x| x.0.cmp(&key)).ok()
    }
}

/// Every exponent sequence of degree `t`, in reverse-lexicographic order.
pub fn enumerate_basis(t: u32) -> DegreeBasis {
    assert!(t <= MAX_DEGREE, "degree {t} exceeds {MAX_DEGREE}");
    let mut top = 0;
    while top + 1 < MAX_LEN && xi_degree(top + 1) <= t {
        top += 1;
    }
    let mut elements = Vec::new();
    let mut exps = [0u32; MAX_LEN];
    fill_exponents(top, t, &mut exps, &mut elements);
    elements.sort_unstable_by_key(|m| m.0);
    DegreeBasis { degree: t, elements }
}

fn fill_exponents(level: usize, remaining: u32, exps: &mut [u32; MAX_LEN], out: &mut Vec<MilnorElt>) {
    if level == 0 {
        exps[0] = remaining;
        let key = exps
            .iter()
            .enumerate()
            .fold(0u64, |k, (i, &r)| k | (u64::from(r) << (8 * i)));
        out.push(MilnorElt(key));
        return;
    }
    let w = xi_degree(level);
    for r in 0..=remaining / w {
        exps[level] = r;
        fill_exponents(level - 1, remaining - r * w, exps, out);
    }
    exps[level] = 0;
}

/// Calls `emit` with every monomial `T` appearing (with odd coefficient) in
/// the product `Sq^R Sq^S`, enumerating Milnor matrices.
///
/// The coefficient of a matrix `X` is the product over diagonals of
/// multinomial coefficients, which is odd exactly when the entries on each
/// diagonal have pairwise disjoint binary digits. That test is applied as
/// each entry is chosen.
pub fn for_each_product(r: MilnorElt, s: MilnorElt, mut emit: impl FnMut(MilnorElt)) {
    if r.is_unit() {
        emit(s);
        return;
    }
    if s.is_unit() {
        emit(r);
        return;
    }
    let mut st = MatrixSearch {
        rows: r.len(),
        cols: s.len(),
        row_rem: [0; MAX_LEN + 1],
        col_rem: [0; MAX_LEN + 1],
        diag: [0; 2 * MAX_LEN + 2],
    };
    for i in 0..st.rows {
        st.row_rem[i + 1] = r.exponent(i);
    }
    for j in 0..st.cols {
        st.col_rem[j + 1] = s.exponent(j);
    }
    st.search(0, &mut emit);
}

struct MatrixSearch {
    rows: usize,
    cols: usize,
    row_rem: [u32; MAX_LEN + 1],
    col_rem: [u32; MAX_LEN + 1],
    diag: [u32; 2 * MAX_LEN + 2],
}

impl MatrixSearch {
    fn search(&mut self, cell: usize, emit: &mut impl FnMut(MilnorElt)) {
        if cell == self.rows * self.cols {
            self.finish(emit);
            return;
        }
        let i = cell / self.cols + 1;
        let j = cell % self.cols + 1;
        let bound = (self.row_rem[i] >> j).min(self.col_rem[j]);
        let last_col = j == self.cols;
        for x in 0..=bound {
            if x & self.diag[i + j] != 0 {
                continue;
            }
            self.row_rem[i] -= x << j;
            self.col_rem[j] -= x;
            self.diag[i + j] |= x;
            if last_col {
                // the row is complete; x_{i0} takes what is left
                let xi0 = self.row_rem[i];
                if xi0 & self.diag[i] == 0 {
                    self.diag[i] |= xi0;
                    self.search(cell + 1, emit);
                    self.diag[i] ^= xi0;
                }
            } else {
                self.search(cell + 1, emit);
            }
            self.diag[i + j] ^= x;
            self.col_rem[j] += x;
            self.row_rem[i] += x << j;
        }
    }

    fn finish(&mut self, emit: &mut impl FnMut(MilnorElt)) {
        let mut diag = self.diag;
        for (d, &x0j) in diag[1..=self.cols].iter_mut().zip(&self.col_rem[1..=self.cols]) {
            if x0j & *d != 0 {
                return;
            }
            *d |= x0j;
        }
        let mut key = 0u64;
        for (k, &t) in diag.iter().enumerate().take(self.rows + self.cols + 1).skip(1) {
            debug_assert!(t <= 255 && k <= MAX_LEN || t == 0);
            if t != 0 {
                key |= u64::from(t) << (8 * (k - 1));
            }
        }
        emit(MilnorElt(key));
    }
}

/// `Sq^R Sq^S` in the Milnor basis.
pub fn multiply(r: MilnorElt, s: MilnorElt) -> AlgebraElt {
    let mut terms = Vec::new();
    for_each_product(r, s, |t| terms.push(t));
    terms.sort_unstable_by_key(|m| m.0);
    AlgebraElt::from_sorted_unchecked(r.degree() + s.degree(), cancel_pairs(terms))
}

/// Bilinear extension of [`multiply`].
pub fn multiply_elt(a: &AlgebraElt, b: &AlgebraElt) -> AlgebraElt {
    let mut terms = Vec::new();
    for &r in a.support() {
        for &s in b.support() {
            for_each_product(r, s, |t| terms.push(t));
        }
    }
    terms.sort_unstable_by_key(|m| m.0);
    AlgebraElt::from_sorted_unchecked(a.degree() + b.degree(), cancel_pairs(terms))
}

/// Cache of [`DegreeBasis`] tables, shared across threads.
///
/// Bases are built on first use and never change afterwards, so racing
/// builders produce identical tables.
#[derive(Debug, Default)]
pub struct MilnorAlgebra {
    bases: RwLock<Vec<Arc<DegreeBasis>>>,
}

impl MilnorAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(&self, t: u32) -> Arc<DegreeBasis> {
        {
            let bases = self.bases.read().expect("basis cache poisoned");
            if let Some(b) = bases.get(t as usize) {
                return Arc::clone(b);
            }
        }
        let mut bases = self.bases.write().expect("basis cache poisoned");
        while bases.len() <= t as usize {
            let next = bases.len() as u32;
            bases.push(Arc::new(enumerate_basis(next)));
        }
        Arc::clone(&bases[t as usize])
    }

    /// `dim_F2 A_t`.
    pub fn dimension(&self, t: u32) -> usize {
        self.basis(t).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> MilnorElt {
        MilnorElt::new(exps).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(degree(MilnorElt::UNIT), 0);
        assert_eq!(degree(m(&[8])), 8);
        assert_eq!(degree(m(&[2, 2])), 8);
        assert_eq!(degree(m(&[1, 0, 1])), 8);
        assert_eq!(degree(m(&[0, 0, 1])), 7);
        assert_eq!(degree(m(&[4, 1])), 7);
    }

    #[test]
    fn trailing_zeros_are_canonicalized() {
        assert_eq!(m(&[3, 0, 0]), m(&[3]));
        assert_eq!(m(&[0, 0]), MilnorElt::UNIT);
        assert_eq!(m(&[1, 0, 1]).exponents(), vec![1, 0, 1]);
    }

    #[test]
    fn small_bases() {
        assert_eq!(enumerate_basis(0).elements(), &[MilnorElt::UNIT]);
        assert_eq!(enumerate_basis(3).elements(), &[m(&[3]), m(&[0, 1])]);
        assert_eq!(enumerate_basis(8).len(), 4);
        assert_eq!(
            enumerate_basis(8).elements(),
            &[m(&[8]), m(&[5, 1]), m(&[2, 2]), m(&[1, 0, 1])]
        );
    }

    #[test]
    fn rlex_chain() {
        let n = 24;
        let chain = [
            m(&[n]),
            m(&[n - 3, 1]),
            m(&[n - 6, 2]),
            m(&[n - 7, 0, 1]),
            m(&[n - 10, 1, 1]),
            m(&[n - 14, 0, 2]),
            m(&[n - 17, 1, 2]),
            m(&[n - 15, 0, 0, 1]),
            m(&[n - 18, 1, 0, 1]),
            m(&[n - 22, 0, 1, 1]),
        ];
        for w in chain.windows(2) {
            assert_eq!(compare_rlex(w[0], w[1]), Ordering::Less, "{} < {}", w[0], w[1]);
        }
        assert_eq!(compare_rlex(chain[3], chain[3]), Ordering::Equal);
    }

    #[test]
    fn basic_products() {
        assert_eq!(multiply(m(&[5]), MilnorElt::UNIT), AlgebraElt::from(m(&[5])));
        assert!(multiply(m(&[1]), m(&[1])).is_zero());
        assert_eq!(multiply(m(&[2]), m(&[2])), AlgebraElt::from(m(&[1, 1])));
        // Sq^2 Sq^1 = Sq^3 + Sq(0,1), Sq^1 Sq^2 = Sq^3
        assert_eq!(
            multiply(m(&[2]), m(&[1])),
            AlgebraElt::from_monomials(3, [m(&[3]), m(&[0, 1])]).unwrap()
        );
        assert_eq!(multiply(m(&[1]), m(&[2])), AlgebraElt::from(m(&[3])));
    }

    #[test]
    fn multiply_elt_cancels() {
        let a = AlgebraElt::from(m(&[1]));
        assert!(multiply_elt(&a, &a).is_zero());
        let x = AlgebraElt::from_monomials(3, [m(&[3]), m(&[0, 1])]).unwrap();
        assert_eq!(multiply_elt(&x, &AlgebraElt::unit()), x);
    }

    #[test]
    fn v_restrict_rules() {
        assert_eq!(v_restrict(m(&[2, 2])), Some(m(&[1, 1])));
        assert_eq!(v_restrict(m(&[3])), None);
        assert_eq!(v_restrict(MilnorElt::UNIT), Some(MilnorElt::UNIT));
        assert_eq!(v_restrict(m(&[4, 0, 6])), Some(m(&[2, 0, 3])));
    }

    #[test]
    fn out_of_range_exponents_rejected() {
        assert!(MilnorElt::new(&[256]).is_err());
        assert!(MilnorElt::new(&[0, 0, 0, 0, 0, 0, 0, 0, 1]).is_err());
    }

    #[test]
    fn algebra_caches_bases() {
        let alg = MilnorAlgebra::new();
        assert_eq!(alg.dimension(8), 4);
        assert_eq!(alg.dimension(16), 12);
        assert!(Arc::ptr_eq(&alg.basis(8), &alg.basis(8)));
    }
}
