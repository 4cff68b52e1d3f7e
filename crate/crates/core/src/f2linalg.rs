//! Bit-packed vectors over F2 and echelon lists that remember, for every
//! stored image, the source vector that produced it.
//!
//! The leading position of a vector is its lowest set bit. Callers lay out
//! coordinates so that bit 0 is the smallest term in their term order.

use std::fmt;

use crate::error::Error;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zero(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(index, true);
        v
    }

    /// Sets each listed index, toggling repeats.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zero(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set bit.
    pub fn leading(&self) -> Option<usize> {
        self.leading_from(0)
    }

    /// Lowest set bit at or above `start`.
    pub fn leading_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut w = start / WORD;
        let mut word = self.words[w] & (!0u64 << (start % WORD));
        loop {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn add_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XOR of the words of `other` from the one containing bit `start`.
    /// Only correct when `other` has no bits below `start`'s word.
    #[inline]
    fn add_assign_from(&mut self, other: &BitVector, start: usize) {
        debug_assert_eq!(self.len, other.len);
        let w0 = start / WORD;
        for (a, b) in self.words[w0..].iter_mut().zip(&other.words[w0..]) {
            *a ^= b;
        }
    }

    /// Changes the length, dropping or zero-filling bits at the top.
    pub fn resize(&mut self, len: usize) {
        self.words.resize(len.div_ceil(WORD), 0);
        self.len = len;
        let extra = self.words.len() * WORD - len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> extra;
            }
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
struct Row {
    witness: BitVector,
    image: BitVector,
    pivot: usize,
}

/// Pairs `(x, dx)` with distinct leading positions of `dx`.
///
/// Images are only head-reduced: bits below the pivot are zero, bits above
/// are whatever the insertion left there. Reduction therefore walks upwards
/// and subtracts the unique row whose pivot matches the current leading bit.
#[derive(Clone, Debug)]
pub struct WitnessedEchelon {
    source_len: usize,
    target_len: usize,
    rows: Vec<Row>,
    pivot_row: Vec<u32>,
}

const NO_ROW: u32 = u32::MAX;

/// Outcome of [`WitnessedEchelon::reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub residue: BitVector,
    /// Row ids subtracted, in the order they were applied.
    pub combination: Vec<usize>,
}

impl WitnessedEchelon {
    pub fn new(source_len: usize, target_len: usize) -> Self {
        WitnessedEchelon {
            source_len,
            target_len,
            rows: Vec::new(),
            pivot_row: vec![NO_ROW; target_len],
        }
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Row ids in increasing pivot order.
    pub fn ordered_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row
            .iter()
            .filter(|&&r| r != NO_ROW)
            .map(|&r| r as usize)
    }

    /// `(witness, image)` pairs in increasing pivot order.
    pub fn pairs(&self) -> impl Iterator<Item = (&BitVector, &BitVector)> + '_ {
        self.ordered_ids()
            .map(|id| (&self.rows[id].witness, &self.rows[id].image))
    }

    pub fn witness(&self, id: usize) -> &BitVector {
        &self.rows[id].witness
    }

    pub fn image(&self, id: usize) -> &BitVector {
        &self.rows[id].image
    }

    pub fn pivot(&self, id: usize) -> usize {
        self.rows[id].pivot
    }

    pub fn has_pivot(&self, position: usize) -> bool {
        self.pivot_row.get(position).is_some_and(|&r| r != NO_ROW)
    }

    /// Subtracts stored images while the leading bit of `v` is a pivot.
    pub fn reduce(&self, v: &BitVector) -> Reduction {
        let mut residue = v.clone();
        let mut combination = Vec::new();
        self.reduce_in_place(&mut residue, |id| combination.push(id));
        Reduction {
            residue,
            combination,
        }
    }

    /// As [`reduce`](Self::reduce), also adding the matching witnesses into
    /// `witness_sum`.
    pub fn reduce_with_witness(&self, v: &mut BitVector, witness_sum: &mut BitVector) {
        self.reduce_in_place(v, |id| witness_sum.add_assign(&self.rows[id].witness));
    }

    fn reduce_in_place(&self, v: &mut BitVector, mut used: impl FnMut(usize)) {
        assert_eq!(v.len(), self.target_len, "vector is not in the target space");
        let mut pos = 0;
        while let Some(p) = v.leading_from(pos) {
            let r = self.pivot_row[p];
            if r == NO_ROW {
                break;
            }
            let row = &self.rows[r as usize];
            v.add_assign_from(&row.image, p);
            used(r as usize);
            pos = p + 1;
        }
    }

    /// Appends `(witness, image)`. The image must be nonzero with a leading
    /// position not already taken.
    pub fn insert(&mut self, witness: BitVector, image: BitVector) -> Result<usize, Error> {
        if witness.len() != self.source_len || image.len() != self.target_len {
            return Err(Error::Echelon(format!(
                "pair of lengths ({}, {}) does not fit echelon ({}, {})",
                witness.len(),
                image.len(),
                self.source_len,
                self.target_len
            )));
        }
        let pivot = image
            .leading()
            .ok_or_else(|| Error::Echelon("cannot insert a zero image".into()))?;
        if self.pivot_row[pivot] != NO_ROW {
            return Err(Error::Echelon(format!(
                "leading position {pivot} is already taken"
            )));
        }
        let id = self.rows.len();
        self.pivot_row[pivot] = id as u32;
        self.rows.push(Row {
            witness,
            image,
            pivot,
        });
        Ok(id)
    }

    /// A source vector mapping onto `target`, or `None` if `target` is not in
    /// the span of the images.
    pub fn solve(&self, target: &BitVector) -> Option<BitVector> {
        let mut v = target.clone();
        let mut u = BitVector::zero(self.source_len);
        self.reduce_with_witness(&mut v, &mut u);
        v.is_zero().then_some(u)
    }

    /// Grows or shrinks the source space; witnesses are resized in place.
    pub fn resize_source(&mut self, len: usize) {
        self.source_len = len;
        for row in &mut self.rows {
            row.witness.resize(len);
        }
    }

    /// Checks every stored pair against a linear map, returning the ids of
    /// pairs with `map(witness) != image`.
    pub fn mismatches(&self, map: impl Fn(&BitVector) -> BitVector) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&id| map(&self.rows[id].witness) != self.rows[id].image)
            .collect()
    }
}

/// Cycles found while building an echelon, in encounter order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KernelList {
    vectors: Vec<BitVector>,
}

impl KernelList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: BitVector) {
        self.vectors.push(v);
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BitVector> {
        self.vectors.iter()
    }

    pub fn resize_all(&mut self, len: usize) {
        for v in &mut self.vectors {
            v.resize(len);
        }
    }
}

impl<'a> IntoIterator for &'a KernelList {
    type Item = &'a BitVector;
    type IntoIter = std::slice::Iter<'a, BitVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.vectors.iter()
    }
}

/// Rank of a list of vectors, by plain elimination. Used for checks that
/// should not depend on the witnessed echelon machinery.
pub fn rank_of(vectors: impl IntoIterator<Item = BitVector>) -> usize {
    let mut pivots: Vec<BitVector> = Vec::new();
    let mut by_lead: std::collections::HashMap<usize, usize> = Default::default();
    for mut v in vectors {
        while let Some(p) = v.leading() {
            match by_lead.get(&p) {
                Some(&i) => v.add_assign(&pivots[i]),
                None => {
                    by_lead.insert(p, pivots.len());
                    pivots.push(v);
                    break;
                }
            }
        }
    }
    pivots.len()
}
