//! Minimal free resolution of F2 over the Steenrod algebra, with a canonical
//! choice of generators.
//!
//! Bidegrees are processed for each `t` in increasing order, and for each `s`
//! within it. At `(s, t)`:
//!
//! * Step 1 walks the decomposable terms `Sq^R s_g*` of `C_{s,t}` in term
//!   order, head-reducing `d(Sq^R s_g*)` against the image list built so far.
//!   Terms whose image reduces to zero become kernel elements.
//! * Step 2 walks `Ker_{s-1,t}` in order. Each kernel element not already in
//!   the image gets a new generator whose differential is the *unreduced*
//!   kernel element.
//!
//! Terms of `C_{s,t}` are ordered generator-major, then reverse-lexicographic
//! in the coefficient. A [`Block`] turns that order into bit positions, so
//! the lowest set bit of a vector is its leading term.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2linalg::{rank_of, BitVector, KernelList, WitnessedEchelon};
use crate::milnor::{for_each_product, AlgebraElt, DegreeBasis, MilnorAlgebra, MilnorElt};

/// Generator `s_g*` of `C_s`, living in internal degree `t`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GeneratorId {
    pub s: u32,
    pub g: u32,
    pub t: u32,
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.s, self.g)
    }
}

/// `coeff * g*` inside a free module.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModuleTerm {
    pub gen: u32,
    pub coeff: AlgebraElt,
}

/// A homogeneous element of a free module `C_s`, as a sum of
/// `coefficient * generator` terms sorted by generator. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModuleElt {
    degree: u32,
    terms: Vec<ModuleTerm>,
}

impl ModuleElt {
    pub fn zero(degree: u32) -> Self {
        ModuleElt {
            degree,
            terms: Vec::new(),
        }
    }

    /// The generator itself, `1 * g*`.
    pub fn generator(gen: u32, degree: u32) -> Self {
        ModuleElt {
            degree,
            terms: vec![ModuleTerm {
                gen,
                coeff: AlgebraElt::unit(),
            }],
        }
    }

    /// Builds an element from terms, merging repeated generators. Every
    /// coefficient must have degree `degree - t(gen)`, which the caller checks
    /// against the module it has in mind.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = ModuleTerm>) -> Self {
        let mut by_gen: BTreeMap<u32, AlgebraElt> = BTreeMap::new();
        for term in terms {
            match by_gen.get_mut(&term.gen) {
                Some(c) => c.add(&term.coeff),
                None => {
                    by_gen.insert(term.gen, term.coeff);
                }
            }
        }
        ModuleElt {
            degree,
            terms: by_gen
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(gen, coeff)| ModuleTerm { gen, coeff })
                .collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[ModuleTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomial terms `Sq^R g*`.
    pub fn monomial_count(&self) -> usize {
        self.terms.iter().map(|t| t.coeff.len()).sum()
    }

    pub fn coefficient(&self, gen: u32) -> Option<&AlgebraElt> {
        self.terms
            .binary_search_by_key(&gen, |t| t.gen)
            .ok()
            .map(|i| &self.terms[i].coeff)
    }
}

impl fmt::Display for ModuleElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if term.coeff.len() == 1 {
                write!(f, "{} g{}", term.coeff, term.gen)?;
            } else {
                write!(f, "({}) g{}", term.coeff, term.gen)?;
            }
        }
        Ok(())
    }
}

/// Minimal term of a nonzero element: lowest generator, then the
/// reverse-lexicographically smallest monomial of its coefficient.
pub fn leading_term(x: &ModuleElt) -> Result<(u32, MilnorElt)> {
    let first = x
        .terms
        .first()
        .ok_or_else(|| Error::Range("the zero element has no leading term".into()))?;
    Ok((first.gen, first.coeff.support()[0]))
}

/// Coordinates of `C_{s,t}`: generator-major blocks of `A_{t - t(g)}`.
#[derive(Clone, Debug)]
pub struct Block {
    degree: u32,
    offsets: Vec<usize>,
    bases: Vec<Arc<DegreeBasis>>,
    dim: usize,
    decomposables: usize,
}

impl Block {
    fn new(algebra: &MilnorAlgebra, gen_degrees: &[u32], t: u32) -> Self {
        let mut offsets = Vec::new();
        let mut bases = Vec::new();
        let mut dim = 0;
        let mut decomposables = 0;
        for &tg in gen_degrees.iter().take_while(|&&tg| tg <= t) {
            let basis = algebra.basis(t - tg);
            offsets.push(dim);
            dim += basis.len();
            if tg < t {
                decomposables = dim;
            }
            bases.push(basis);
        }
        Block {
            degree: t,
            offsets,
            bases,
            dim,
            decomposables,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates below this index are the terms with positive-degree
    /// coefficient; the generators of degree `t` come after.
    pub fn decomposables(&self) -> usize {
        self.decomposables
    }

    /// Generators with degree at most `t`.
    pub fn generator_count(&self) -> usize {
        self.offsets.len()
    }

    pub fn offset(&self, gen: u32) -> usize {
        self.offsets[gen as usize]
    }

    pub fn basis(&self, gen: u32) -> &DegreeBasis {
        &self.bases[gen as usize]
    }

    /// The term at a coordinate.
    pub fn term_at(&self, position: usize) -> (u32, MilnorElt) {
        let gen = self.offsets.partition_point(|&o| o <= position) - 1;
        (gen as u32, self.bases[gen].get(position - self.offsets[gen]))
    }

    pub fn position(&self, gen: u32, m: MilnorElt) -> Option<usize> {
        let g = gen as usize;
        if g >= self.offsets.len() {
            return None;
        }
        self.bases[g].index_of(m).map(|i| self.offsets[g] + i)
    }

    pub fn to_dense(&self, x: &ModuleElt) -> Result<BitVector> {
        let mut v = BitVector::zero(self.dim);
        for term in x.terms() {
            for &m in term.coeff.support() {
                let p = self.position(term.gen, m).ok_or_else(|| {
                    Error::Range(format!(
                        "term Sq{m} g{} is not in degree {}",
                        term.gen, self.degree
                    ))
                })?;
                v.flip(p);
            }
        }
        Ok(v)
    }

    pub fn to_sparse(&self, v: &BitVector) -> ModuleElt {
        assert_eq!(v.len(), self.dim);
        let mut terms: Vec<ModuleTerm> = Vec::new();
        let mut current: Option<(usize, Vec<MilnorElt>)> = None;
        for p in v.iter_ones() {
            let gen = self.offsets.partition_point(|&o| o <= p) - 1;
            let m = self.bases[gen].get(p - self.offsets[gen]);
            match &mut current {
                Some((g, ms)) if *g == gen => ms.push(m),
                _ => {
                    if let Some((g, ms)) = current.take() {
                        terms.push(self.make_term(g, ms));
                    }
                    current = Some((gen, vec![m]));
                }
            }
        }
        if let Some((g, ms)) = current {
            terms.push(self.make_term(g, ms));
        }
        ModuleElt {
            degree: self.degree,
            terms,
        }
    }

    fn make_term(&self, gen: usize, monomials: Vec<MilnorElt>) -> ModuleTerm {
        ModuleTerm {
            gen: gen as u32,
            coeff: AlgebraElt::from_sorted_unchecked(self.bases[gen].degree(), monomials),
        }
    }
}

/// Adds `Sq^r * x` into `out`, a vector over `block` (the block of the
/// module containing `x`, in degree `deg r + deg x`).
pub fn act_into(r: MilnorElt, x: &ModuleElt, block: &Block, out: &mut BitVector) {
    for term in x.terms() {
        let off = block.offset(term.gen);
        let basis = block.basis(term.gen);
        for &s in term.coeff.support() {
            for_each_product(r, s, |prod| {
                let idx = basis
                    .index_of_key(prod.key())
                    .expect("product lands outside its degree");
                out.flip(off + idx);
            });
        }
    }
}

/// Adds `a * x` into `out`.
pub fn act_elt_into(a: &AlgebraElt, x: &ModuleElt, block: &Block, out: &mut BitVector) {
    for &r in a.support() {
        act_into(r, x, block, out);
    }
}

/// `h_i * (s0)_{g0}` contains `s_g`, read off a differential.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HimultEntry {
    pub s: u32,
    pub g: u32,
    pub s0: u32,
    pub g0: u32,
    pub i: u32,
}

/// Dimension bookkeeping for one bidegree.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct BidegreeStats {
    pub decomposables: usize,
    pub step1_rank: usize,
    pub kernel_dim: usize,
    pub new_generators: usize,
    pub image_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Violation {
    pub s: u32,
    pub g: u32,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessViolation {
    pub s: u32,
    pub t: u32,
    pub image_rank: usize,
    pub kernel_dim: usize,
}

/// The resolution `0 <- F2 <- C_0 <- C_1 <- ...` computed so far.
///
/// `d(0_0*)` is stored as `1 * g0`, read as the nonzero element of F2.
pub struct Resolution {
    algebra: Arc<MilnorAlgebra>,
    gens: Vec<Vec<u32>>,
    diffs: Vec<Vec<ModuleElt>>,
    maxt: Vec<Option<u32>>,
    stats: BTreeMap<(u32, u32), BidegreeStats>,
    echelons: RwLock<HashMap<(u32, u32), Arc<WitnessedEchelon>>>,
    retain_echelons: bool,
}

impl fmt::Debug for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Resolution")
            .field("gens", &self.gens)
            .field("maxt", &self.maxt)
            .finish_non_exhaustive()
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Self::new()
    }
}

impl Resolution {
    pub fn new() -> Self {
        Self::with_algebra(Arc::new(MilnorAlgebra::new()))
    }

    pub fn with_algebra(algebra: Arc<MilnorAlgebra>) -> Self {
        Resolution {
            algebra,
            gens: Vec::new(),
            diffs: Vec::new(),
            maxt: Vec::new(),
            stats: BTreeMap::new(),
            echelons: RwLock::new(HashMap::new()),
            retain_echelons: true,
        }
    }

    /// Keep or drop image echelons while resolving. Dropped echelons are
    /// rebuilt on demand by [`image_echelon`](Self::image_echelon).
    pub fn set_retain_echelons(&mut self, retain: bool) {
        self.retain_echelons = retain;
        if !retain {
            self.echelons.write().expect("echelon cache poisoned").clear();
        }
    }

    /// Rebuilds a resolution from stored generators, differentials and
    /// completion degrees.
    pub fn from_parts(
        gens: Vec<Vec<u32>>,
        diffs: Vec<Vec<ModuleElt>>,
        maxt: Vec<Option<u32>>,
    ) -> Result<Self> {
        if gens.len() != diffs.len() || gens.len() != maxt.len() {
            return Err(Error::Format(
                "generator, differential and Maxt tables disagree on the number of stages".into(),
            ));
        }
        for (s, (degs, ds)) in gens.iter().zip(&diffs).enumerate() {
            if degs.len() != ds.len() {
                return Err(Error::Format(format!(
                    "C_{s} has {} generators but {} differentials",
                    degs.len(),
                    ds.len()
                )));
            }
            if degs.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Format(format!("generators of C_{s} are not sorted by degree")));
            }
            for (g, (&tg, d)) in degs.iter().zip(ds).enumerate() {
                if d.degree() != tg {
                    return Err(Error::Format(format!(
                        "d({s}_{g}*) has degree {} but the generator has degree {tg}",
                        d.degree()
                    )));
                }
            }
        }
        let mut res = Resolution::new();
        res.gens = gens;
        res.diffs = diffs;
        res.maxt = maxt;
        Ok(res)
    }

    pub fn algebra(&self) -> &Arc<MilnorAlgebra> {
        &self.algebra
    }

    /// Largest `s` with any computed data, if any.
    pub fn max_s(&self) -> Option<u32> {
        self.maxt.iter().rposition(|m| m.is_some()).map(|s| s as u32)
    }

    /// Degree through which `C_s` is complete.
    pub fn maxt(&self, s: u32) -> Option<u32> {
        self.maxt.get(s as usize).copied().flatten()
    }

    pub fn maxt_table(&self) -> &[Option<u32>] {
        &self.maxt
    }

    pub fn is_computed(&self, s: u32, t: u32) -> bool {
        self.maxt(s).is_some_and(|m| m >= t)
    }

    /// Generator degrees of `C_s`.
    pub fn generator_degrees(&self, s: u32) -> &[u32] {
        self.gens.get(s as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn generator_count(&self, s: u32) -> usize {
        self.generator_degrees(s).len()
    }

    pub fn generator(&self, s: u32, g: u32) -> GeneratorId {
        GeneratorId {
            s,
            g,
            t: self.generator_degrees(s)[g as usize],
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.gens.iter().enumerate().flat_map(|(s, degs)| {
            degs.iter().enumerate().map(move |(g, &t)| GeneratorId {
                s: s as u32,
                g: g as u32,
                t,
            })
        })
    }

    /// Indices of the generators of `C_s` in degree `t`, i.e. a basis of
    /// `Ext^{s,t}`.
    pub fn generators_in_degree(&self, s: u32, t: u32) -> std::ops::Range<u32> {
        let degs = self.generator_degrees(s);
        let lo = degs.partition_point(|&d| d < t);
        let hi = degs.partition_point(|&d| d <= t);
        lo as u32..hi as u32
    }

    /// `dim Ext^{s,t}`.
    pub fn ext_dimension(&self, s: u32, t: u32) -> usize {
        self.generators_in_degree(s, t).len()
    }

    pub fn differential(&self, s: u32, g: u32) -> &ModuleElt {
        &self.diffs[s as usize][g as usize]
    }

    pub fn stats(&self, s: u32, t: u32) -> Option<&BidegreeStats> {
        self.stats.get(&(s, t))
    }

    pub fn block(&self, s: u32, t: u32) -> Block {
        Block::new(&self.algebra, self.generator_degrees(s), t)
    }

    /// Computes everything with `s <= s_max` and `t <= t_max` not already
    /// present.
    pub fn extend(&mut self, s_max: u32, t_max: u32) -> Result<()> {
        let stages = s_max as usize + 1;
        if self.gens.len() < stages {
            self.gens.resize(stages, Vec::new());
            self.diffs.resize(stages, Vec::new());
            self.maxt.resize(stages, None);
        }
        let mut kernels: HashMap<(u32, u32), KernelList> = HashMap::new();
        for t in 0..=t_max {
            for s in 0..=s_max {
                if self.is_computed(s, t) {
                    continue;
                }
                if t > 0 && !self.is_computed(s, t - 1) {
                    return Err(Error::Range(format!(
                        "C_{s} is not complete below degree {t}"
                    )));
                }
                let (mut echelon, kernel) = self.step1_image_kernel(s, t)?;
                let previous = match s {
                    0 => None,
                    _ => Some(match kernels.remove(&(s - 1, t)) {
                        Some(k) => k,
                        None => self.kernel_of(s - 1, t)?,
                    }),
                };
                let step1_rank = echelon.rank();
                let new = self.step2_new_generators(s, t, &mut echelon, previous.as_ref())?;
                self.stats.insert(
                    (s, t),
                    BidegreeStats {
                        decomposables: echelon.source_len() - new.len(),
                        step1_rank,
                        kernel_dim: kernel.len(),
                        new_generators: new.len(),
                        image_rank: echelon.rank(),
                    },
                );
                self.maxt[s as usize] = Some(t);
                if s < s_max {
                    kernels.insert((s, t), kernel);
                }
                if self.retain_echelons && s > 0 {
                    self.echelons
                        .write()
                        .expect("echelon cache poisoned")
                        .insert((s, t), Arc::new(echelon));
                }
            }
        }
        Ok(())
    }

    /// Images `d(Sq^R g*)` of the decomposable terms of `C_{s,t}`, in term
    /// order, as vectors over `C_{s-1,t}`.
    fn decomposable_images(&self, s: u32, t: u32, source: &Block, target: &Block) -> Vec<BitVector> {
        let per_gen: Vec<Vec<BitVector>> = (0..source.generator_count() as u32)
            .into_par_iter()
            .filter(|&g| self.generator_degrees(s)[g as usize] < t)
            .map(|g| {
                let d = self.differential(s, g);
                source
                    .basis(g)
                    .elements()
                    .iter()
                    .map(|&r| {
                        let mut v = BitVector::zero(target.dim());
                        act_into(r, d, target, &mut v);
                        v
                    })
                    .collect()
            })
            .collect();
        per_gen.into_iter().flatten().collect()
    }

    /// Step 1 at `(s, t)`: the image list of `d_s` on decomposables and the
    /// kernel elements found along the way. Witnesses have length equal to the
    /// number of decomposables.
    pub fn step1_image_kernel(&self, s: u32, t: u32) -> Result<(WitnessedEchelon, KernelList)> {
        let source = self.block(s, t);
        let d_count = source.decomposables();
        let mut kernel = KernelList::new();
        if s == 0 {
            // d_0 is the augmentation; it kills every decomposable term
            let target_len = usize::from(t == 0);
            for i in 0..d_count {
                kernel.push(BitVector::unit(d_count, i));
            }
            return Ok((WitnessedEchelon::new(d_count, target_len), kernel));
        }
        if t > 0 && !self.is_computed(s - 1, t) {
            return Err(Error::Range(format!(
                "C_{} is not complete through degree {t}",
                s - 1
            )));
        }
        let target = self.block(s - 1, t);
        let images = self.decomposable_images(s, t, &source, &target);
        let mut echelon = WitnessedEchelon::new(d_count, target.dim());
        for (i, mut dx) in images.into_iter().enumerate() {
            let mut x = BitVector::unit(d_count, i);
            echelon.reduce_with_witness(&mut dx, &mut x);
            if dx.is_zero() {
                kernel.push(x);
            } else {
                echelon.insert(x, dx)?;
            }
        }
        Ok((echelon, kernel))
    }

    /// `Ker_{s,t}` as vectors over all of `C_{s,t}` (generators of degree `t`
    /// included, though they never occur).
    fn kernel_of(&self, s: u32, t: u32) -> Result<KernelList> {
        let (_, mut kernel) = self.step1_image_kernel(s, t)?;
        kernel.resize_all(self.block(s, t).dim());
        Ok(kernel)
    }

    /// Step 2 at `(s, t)`: adds a generator for every element of
    /// `Ker_{s-1,t}` outside the current image, with differential equal to
    /// the kernel element as found in Step 1. Extends `echelon` to the full
    /// image of `d_s` in degree `t`.
    pub fn step2_new_generators(
        &mut self,
        s: u32,
        t: u32,
        echelon: &mut WitnessedEchelon,
        previous_kernel: Option<&KernelList>,
    ) -> Result<Vec<GeneratorId>> {
        let d_count = echelon.source_len();
        let mut new = Vec::new();
        if s == 0 {
            // Ker(F2 -> 0) is F2 itself, concentrated in degree 0
            if t == 0 {
                self.push_generator(0, 0, ModuleElt::generator(0, 0));
                echelon.resize_source(d_count + 1);
                echelon.insert(BitVector::unit(d_count + 1, d_count), BitVector::unit(1, 0))?;
                new.push(GeneratorId { s: 0, g: 0, t: 0 });
            }
            return Ok(new);
        }
        let previous = previous_kernel.expect("positive s needs the previous kernel");
        let target = self.block(s - 1, t);
        let capacity = d_count + previous.len();
        echelon.resize_source(capacity);
        for c in previous {
            let mut c = c.clone();
            c.resize(target.dim());
            let mut x = c.clone();
            let mut z = BitVector::zero(capacity);
            echelon.reduce_with_witness(&mut x, &mut z);
            if x.is_zero() {
                continue;
            }
            let g = self.push_generator(s, t, target.to_sparse(&c));
            z.flip(d_count + new.len());
            echelon.insert(z, x)?;
            new.push(GeneratorId { s, g, t });
        }
        echelon.resize_source(d_count + new.len());
        Ok(new)
    }

    fn push_generator(&mut self, s: u32, t: u32, d: ModuleElt) -> u32 {
        let s = s as usize;
        let g = self.gens[s].len() as u32;
        self.gens[s].push(t);
        self.diffs[s].push(d);
        g
    }

    /// The full image echelon of `d_s` in degree `t` (pairs `(x, dx)` with
    /// `x` over `C_{s,t}`, `dx` over `C_{s-1,t}`), cached.
    pub fn image_echelon(&self, s: u32, t: u32) -> Result<Arc<WitnessedEchelon>> {
        if s == 0 {
            return Err(Error::Range("d_0 has no image echelon over a free module".into()));
        }
        if let Some(e) = self.echelons.read().expect("echelon cache poisoned").get(&(s, t)) {
            return Ok(Arc::clone(e));
        }
        if !self.is_computed(s, t) {
            return Err(Error::Range(format!("C_{s} is not computed in degree {t}")));
        }
        let (mut echelon, _) = self.step1_image_kernel(s, t)?;
        let d_count = echelon.source_len();
        let target = self.block(s - 1, t);
        let range = self.generators_in_degree(s, t);
        let full = d_count + range.len();
        echelon.resize_source(full);
        for (j, g) in range.enumerate() {
            let mut x = target.to_dense(self.differential(s, g))?;
            let mut z = BitVector::unit(full, d_count + j);
            echelon.reduce_with_witness(&mut x, &mut z);
            if x.is_zero() {
                return Err(Error::Format(format!(
                    "d({s}_{g}*) lies in the image of decomposables; the resolution is not minimal"
                )));
            }
            echelon.insert(z, x)?;
        }
        let echelon = Arc::new(echelon);
        self.echelons
            .write()
            .expect("echelon cache poisoned")
            .insert((s, t), Arc::clone(&echelon));
        Ok(echelon)
    }

    /// `d_s` applied to an element of `C_s`, as an element of `C_{s-1}`.
    pub fn apply_differential(&self, s: u32, x: &ModuleElt) -> Result<ModuleElt> {
        if s == 0 {
            return Err(Error::Range("d_0 lands in F2, not a free module".into()));
        }
        let target = self.block(s - 1, x.degree());
        let mut v = BitVector::zero(target.dim());
        for term in x.terms() {
            let d = self.differential(s, term.gen);
            act_elt_into(&term.coeff, d, &target, &mut v);
        }
        Ok(target.to_sparse(&v))
    }

    /// Entries `s g s0 g0 i` for every `Sq^{2^i}` in a coefficient of a
    /// differential.
    pub fn extract_himults(&self) -> Vec<HimultEntry> {
        let mut out = Vec::new();
        for s in 1..self.gens.len() as u32 {
            for (g, d) in self.diffs[s as usize].iter().enumerate() {
                for term in d.terms() {
                    let deg = term.coeff.degree();
                    if deg.is_power_of_two() && term.coeff.contains(MilnorElt::sq(deg)) {
                        out.push(HimultEntry {
                            s,
                            g: g as u32,
                            s0: s - 1,
                            g0: term.gen,
                            i: deg.trailing_zeros(),
                        });
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Expands `d(d(s_g*))` for every generator. Empty when `d^2 = 0`.
    pub fn check_d2(&self) -> Vec<D2Violation> {
        let mut out = Vec::new();
        for gen in self.generators().filter(|g| g.s >= 1).collect::<Vec<_>>() {
            let d = self.differential(gen.s, gen.g);
            if gen.s == 1 {
                // d_0 kills every term with a positive-degree coefficient
                if d.terms().iter().any(|term| term.coeff.degree() == 0) {
                    out.push(D2Violation {
                        s: gen.s,
                        g: gen.g,
                        residue: "unit coefficient in d_1".into(),
                    });
                }
                continue;
            }
            match self.apply_differential(gen.s - 1, d) {
                Ok(dd) if dd.is_zero() => {}
                Ok(dd) => out.push(D2Violation {
                    s: gen.s,
                    g: gen.g,
                    residue: dd.to_string(),
                }),
                Err(e) => out.push(D2Violation {
                    s: gen.s,
                    g: gen.g,
                    residue: e.to_string(),
                }),
            }
        }
        out
    }

    /// Rank of `d_s` on all of `C_{s,t}`, by plain elimination.
    fn full_rank(&self, s: u32, t: u32) -> Result<usize> {
        if s == 0 {
            return Ok(usize::from(t == 0 && !self.generator_degrees(0).is_empty()));
        }
        let source = self.block(s, t);
        let target = self.block(s - 1, t);
        let mut vectors = self.decomposable_images(s, t, &source, &target);
        for g in self.generators_in_degree(s, t) {
            vectors.push(target.to_dense(self.differential(s, g))?);
        }
        Ok(rank_of(vectors))
    }

    /// Recomputes, for each bidegree, `rank d_s` and `dim ker d_{s-1}` from
    /// the stored differentials and compares them.
    pub fn check_exactness(&self) -> Result<Vec<ExactnessViolation>> {
        let mut out = Vec::new();
        for s in 0..self.gens.len() as u32 {
            let Some(top) = self.maxt(s) else { continue };
            for t in 0..=top {
                let image_rank = self.full_rank(s, t)?;
                let kernel_dim = if s == 0 {
                    usize::from(t == 0)
                } else {
                    self.block(s - 1, t).dim() - self.full_rank(s - 1, t)?
                };
                if image_rank != kernel_dim {
                    out.push(ExactnessViolation {
                        s,
                        t,
                        image_rank,
                        kernel_dim,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Minimality: no differential has a unit coefficient (except `d_0`).
    pub fn is_minimal(&self) -> bool {
        self.diffs
            .iter()
            .skip(1)
            .flatten()
            .all(|d| d.terms().iter().all(|term| term.coeff.degree() > 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> MilnorElt {
        MilnorElt::new(e).unwrap()
    }

    fn resolved(s: u32, t: u32) -> Resolution {
        let mut r = Resolution::new();
        r.extend(s, t).unwrap();
        r
    }

    #[test]
    fn first_stage_is_the_hopf_classes() {
        let r = resolved(1, 17);
        assert_eq!(r.generator_degrees(0), &[0]);
        assert_eq!(r.generator_degrees(1), &[1, 2, 4, 8, 16]);
        for (i, &t) in r.generator_degrees(1).iter().enumerate() {
            let d = r.differential(1, i as u32);
            assert_eq!(d, &ModuleElt::from_terms(t, [ModuleTerm { gen: 0, coeff: m(&[t]).into() }]));
        }
    }

    #[test]
    fn step1_at_one_two_finds_sq1_sq1() {
        let r = resolved(1, 2);
        let (ech, ker) = r.step1_image_kernel(1, 2).unwrap();
        // the only decomposable is Sq^1 1_0*, and Sq^1 Sq^1 = 0
        assert_eq!(ech.rank(), 0);
        assert_eq!(ker.len(), 1);
    }

    #[test]
    fn step1_dimension_bookkeeping() {
        let r = resolved(2, 9);
        let (ech, ker) = r.step1_image_kernel(2, 9).unwrap();
        let expected: usize = r
            .generator_degrees(2)
            .iter()
            .filter(|&&tg| tg < 9)
            .map(|&tg| crate::milnor::enumerate_basis(9 - tg).len())
            .sum();
        assert_eq!(ech.rank() + ker.len(), expected);
        let (ech0, ker0) = r.step1_image_kernel(0, 1).unwrap();
        assert_eq!(ech0.rank(), 0);
        assert_eq!(ker0.len(), 1);
    }

    #[test]
    fn no_generator_in_one_three() {
        let r = resolved(1, 3);
        assert_eq!(r.ext_dimension(1, 3), 0);
        assert_eq!(r.ext_dimension(1, 1), 1);
        let st = r.stats(1, 3).unwrap();
        assert_eq!(st.image_rank, 2);
        assert_eq!(st.new_generators, 0);
    }

    #[test]
    fn leading_terms() {
        let x = ModuleElt::from_terms(
            4,
            [
                ModuleTerm { gen: 1, coeff: m(&[2]).into() },
                ModuleTerm { gen: 0, coeff: m(&[3]).into() },
            ],
        );
        assert_eq!(leading_term(&x).unwrap(), (0, m(&[3])));
        let y = ModuleElt::from_terms(
            9,
            [ModuleTerm {
                gen: 0,
                coeff: AlgebraElt::from_monomials(9, [m(&[6, 1]), m(&[9])]).unwrap(),
            }],
        );
        assert_eq!(leading_term(&y).unwrap(), (0, m(&[9])));
        assert!(leading_term(&ModuleElt::zero(3)).is_err());
    }

    #[test]
    fn block_round_trip() {
        let r = resolved(2, 12);
        let b = r.block(1, 12);
        for p in 0..b.dim() {
            let (g, mono) = b.term_at(p);
            assert_eq!(b.position(g, mono), Some(p));
            let v = BitVector::unit(b.dim(), p);
            assert_eq!(b.to_dense(&b.to_sparse(&v)).unwrap(), v);
        }
    }

    #[test]
    fn rebuilt_echelon_matches_retained() {
        let mut r = resolved(3, 14);
        let kept = r.image_echelon(3, 12).unwrap();
        r.set_retain_echelons(false);
        let rebuilt = r.image_echelon(3, 12).unwrap();
        assert_eq!(kept.rank(), rebuilt.rank());
        let a: Vec<_> = kept.pairs().collect();
        let b: Vec<_> = rebuilt.pairs().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn extension_matches_single_run() {
        let mut a = Resolution::new();
        a.extend(3, 10).unwrap();
        a.extend(5, 16).unwrap();
        let b = resolved(5, 16);
        for s in 0..=5 {
            assert_eq!(a.generator_degrees(s), b.generator_degrees(s));
            for g in 0..a.generator_count(s) as u32 {
                assert_eq!(a.differential(s, g), b.differential(s, g));
            }
        }
    }

    #[test]
    fn small_range_is_valid() {
        let r = resolved(6, 20);
        assert!(r.check_d2().is_empty());
        assert!(r.check_exactness().unwrap().is_empty());
        assert!(r.is_minimal());
    }
}
