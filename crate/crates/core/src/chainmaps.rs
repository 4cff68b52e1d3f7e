//! Chain maps over the resolution: lifts of cocycles `s_g`, and the map `V`
//! that computes `Sq^0`.
//!
//! A map of bidegree `(s0, t0)` sends each generator `(s0 + k)_g*` to an
//! element of `C_k` of internal degree `t(g) - t0`. Level `k` is solved from
//! level `k - 1` by reducing against the image echelon of `d_k`.
//!
//! `V` has `s0 = 0` and halves internal degrees: a generator of degree `t`
//! goes to `C_s` in degree `t / 2` (zero when `t` is odd). Read in the doubled
//! grading, this is the degree-preserving map `C_s -> ΦC_s`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2linalg::BitVector;
use crate::resolution::{act_elt_into, ModuleElt, Resolution};

/// A cochain `C_s -> Σ^t F2`, given by the generators it sends to 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cocycle {
    pub s: u32,
    pub t: u32,
    pub name: String,
    pub gens: Vec<u32>,
}

impl Cocycle {
    /// The cocycle `s_g` dual to one generator.
    pub fn dual_to(res: &Resolution, s: u32, g: u32) -> Result<Self> {
        if g as usize >= res.generator_count(s) {
            return Err(Error::Range(format!("no generator {s}_{g} in the resolution")));
        }
        Ok(Cocycle {
            s,
            t: res.generator(s, g).t,
            name: format!("{s}_{g}"),
            gens: vec![g],
        })
    }

    /// Checks that every listed generator exists and has degree `t`.
    pub fn validate(&self, res: &Resolution) -> Result<()> {
        for &g in &self.gens {
            if g as usize >= res.generator_count(self.s) {
                return Err(Error::Range(format!("no generator {}_{g}", self.s)));
            }
            let tg = res.generator(self.s, g).t;
            if tg != self.t {
                return Err(Error::Range(format!(
                    "{}_{g} has degree {tg}, not {}",
                    self.s, self.t
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MapKind {
    Cocycle,
    Sq0,
}

/// A chain map stored per generator. `None` marks a generator whose image
/// has not been computed, which is different from an image equal to zero.
/// Equality compares the stored entries, ignoring trailing missing ones.
#[derive(Clone, Debug)]
pub struct ChainMap {
    name: String,
    kind: MapKind,
    s0: u32,
    t0: u32,
    levels: Vec<Vec<Option<ModuleElt>>>,
}

/// `d m = m d` fails on a generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainViolation {
    pub s: u32,
    pub g: u32,
    pub message: String,
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}: {}", self.s, self.g, self.message)
    }
}

/// Unit-coefficient term of a chain map: the image of `s_g*` contains
/// `1 * (s - s0)_{g0}*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AugEntry {
    pub s: u32,
    pub g: u32,
    pub g0: u32,
}

/// The image of `s_g*` contains `Sq^{2^i} * (s - s0)_{g0}*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RawBracket {
    pub s: u32,
    pub g: u32,
    pub i: u32,
    pub g0: u32,
}

impl PartialEq for ChainMap {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.kind == other.kind
            && self.s0 == other.s0
            && self.t0 == other.t0
            && self.entries().eq(other.entries())
    }
}

impl Eq for ChainMap {}

impl ChainMap {
    /// Stored images as `(s, g, image)`, in `(s, g)` order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &ModuleElt)> + '_ {
        self.levels.iter().enumerate().flat_map(move |(k, level)| {
            level.iter().enumerate().filter_map(move |(g, image)| {
                image
                    .as_ref()
                    .map(|x| (self.s0 + k as u32, g as u32, x))
            })
        })
    }

    /// Assembles a map from stored levels.
    pub fn from_levels(
        name: impl Into<String>,
        kind: MapKind,
        s0: u32,
        t0: u32,
        levels: Vec<Vec<Option<ModuleElt>>>,
    ) -> Self {
        ChainMap {
            name: name.into(),
            kind,
            s0,
            t0,
            levels,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    /// Cohomological degree of the source cocycle; 0 for `V`.
    pub fn s0(&self) -> u32 {
        self.s0
    }

    pub fn t0(&self) -> u32 {
        self.t0
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Images at level `k`, indexed by generator of `C_{s0 + k}`.
    pub fn level(&self, k: usize) -> &[Option<ModuleElt>] {
        &self.levels[k]
    }

    /// Image of `s_g*`, where `s` is the source cohomological degree.
    pub fn image(&self, s: u32, g: u32) -> Option<&ModuleElt> {
        let k = s.checked_sub(self.s0)? as usize;
        self.levels.get(k)?.get(g as usize)?.as_ref()
    }

    /// Replaces the image of `s_g*`, growing the level tables as needed.
    pub fn set_image(&mut self, s: u32, g: u32, value: Option<ModuleElt>) {
        let k = (s - self.s0) as usize;
        if self.levels.len() <= k {
            self.levels.resize(k + 1, Vec::new());
        }
        let level = &mut self.levels[k];
        if level.len() <= g as usize {
            level.resize(g as usize + 1, None);
        }
        level[g as usize] = value;
    }

    /// Source degree `t(g)` to target degree, or `None` when the image is
    /// forced to be zero.
    fn target_degree(&self, t: u32) -> Option<u32> {
        match self.kind {
            MapKind::Cocycle => t.checked_sub(self.t0),
            MapKind::Sq0 => t.is_multiple_of(2).then_some(t / 2),
        }
    }

    /// Entries `(s, g, g0)` for the unit-coefficient terms, sorted.
    pub fn augment(&self) -> Vec<AugEntry> {
        let mut out = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            let s = self.s0 + k as u32;
            for (g, image) in level.iter().enumerate() {
                let Some(image) = image else { continue };
                for term in image.terms() {
                    if term.coeff.degree() == 0 {
                        out.push(AugEntry {
                            s,
                            g: g as u32,
                            g0: term.gen,
                        });
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Entries `(s, g, i, g0)` for every coefficient containing `Sq^{2^i}`.
    pub fn extract_brackets(&self) -> Vec<RawBracket> {
        let mut out = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            let s = self.s0 + k as u32;
            for (g, image) in level.iter().enumerate() {
                let Some(image) = image else { continue };
                for term in image.terms() {
                    let deg = term.coeff.degree();
                    if deg.is_power_of_two()
                        && term.coeff.contains(crate::milnor::MilnorElt::sq(deg))
                    {
                        out.push(RawBracket {
                            s,
                            g: g as u32,
                            i: deg.trailing_zeros(),
                            g0: term.gen,
                        });
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Generators `(s, g)` with source filtration at most `s_limit` that the
    /// resolution knows about but the map has no entry for.
    pub fn checkmap(&self, res: &Resolution, s_limit: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for s in self.s0..=s_limit {
            let count = res.generator_count(s);
            for g in 0..count as u32 {
                if self.image(s, g).is_none() {
                    out.push((s, g));
                }
            }
        }
        out
    }

    /// Like [`checkmap`](Self::checkmap), but only generators whose image
    /// degree lies in the computed range of the target.
    pub fn gaps(&self, res: &Resolution, s_limit: u32) -> Vec<(u32, u32)> {
        self.checkmap(res, s_limit)
            .into_iter()
            .filter(|&(s, g)| {
                let t = res.generator(s, g).t;
                let target_s = s - self.s0;
                self.target_degree(t)
                    .is_some_and(|u| res.is_computed(target_s, u))
            })
            .collect()
    }

    /// Recomputes `d(m(x))` and `m(d(x))` on every stored generator.
    pub fn verify(&self, res: &Resolution) -> Vec<ChainViolation> {
        let mut out = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            let s = self.s0 + k as u32;
            for (g, image) in level.iter().enumerate() {
                let Some(image) = image else { continue };
                if let Err(message) = self.check_generator(res, k as u32, s, g as u32, image) {
                    out.push(ChainViolation {
                        s,
                        g: g as u32,
                        message,
                    });
                }
            }
        }
        out
    }

    fn check_generator(
        &self,
        res: &Resolution,
        k: u32,
        s: u32,
        g: u32,
        image: &ModuleElt,
    ) -> std::result::Result<(), String> {
        if g as usize >= res.generator_count(s) {
            return Err("generator not in the resolution".into());
        }
        let t = res.generator(s, g).t;
        let Some(u) = self.target_degree(t) else {
            return if image.is_zero() {
                Ok(())
            } else {
                Err("image must vanish in this degree".into())
            };
        };
        if !image.is_zero() && image.degree() != u {
            return Err(format!("image has degree {}, expected {u}", image.degree()));
        }
        if !image.is_zero() {
            res.block(k, u)
                .to_dense(image)
                .map_err(|e| format!("malformed image: {e}"))?;
        }
        if k == 0 {
            let expected = match self.kind {
                MapKind::Sq0 => true,
                MapKind::Cocycle => u == 0,
            };
            let unit = image
                .coefficient(0)
                .is_some_and(|c| c.degree() == 0 && !c.is_zero());
            // level 0 composed with the augmentation must recover the cocycle,
            // which for Sq0 is the identity on 0_0*
            if self.kind == MapKind::Sq0 && unit != expected {
                return Err("V_0(0_0*) must be 0_0*".into());
            }
            if self.kind == MapKind::Cocycle && !expected && unit {
                return Err("unit term in a positive degree".into());
            }
            return Ok(());
        }
        let lhs = res
            .apply_differential(k, image)
            .map_err(|e| e.to_string())?;
        let rhs = self
            .image_of_boundary(res, s, g, k - 1, u)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| "the boundary involves missing entries".to_string())?;
        if lhs.terms() == rhs.terms() {
            Ok(())
        } else {
            Err(format!("d(m(x)) = {lhs} but m(d(x)) = {rhs}"))
        }
    }

    /// `m(d(s_g*))` in `C_{k}` at degree `u`, or `None` when some needed
    /// entry is missing.
    fn image_of_boundary(
        &self,
        res: &Resolution,
        s: u32,
        g: u32,
        k: u32,
        u: u32,
    ) -> Result<Option<ModuleElt>> {
        let block = res.block(k, u);
        let mut v = BitVector::zero(block.dim());
        for term in res.differential(s, g).terms() {
            let th = res.generator(s - 1, term.gen).t;
            let coeff = match self.kind {
                MapKind::Cocycle => {
                    if th < self.t0 {
                        continue;
                    }
                    term.coeff.clone()
                }
                MapKind::Sq0 => match term.coeff.v_restrict() {
                    Some(c) if !c.is_zero() => c,
                    _ => continue,
                },
            };
            let Some(inner) = self.image(s - 1, term.gen) else {
                return Ok(None);
            };
            if inner.is_zero() {
                continue;
            }
            act_elt_into(&coeff, inner, &block, &mut v);
        }
        Ok(Some(block.to_sparse(&v)))
    }
}

/// Lifts a cocycle to a chain map through source filtration `s_max`.
/// Generators whose target degree lies beyond the computed range are left
/// missing.
pub fn lift_cocycle(res: &Resolution, cocycle: &Cocycle, s_max: u32) -> Result<ChainMap> {
    cocycle.validate(res)?;
    let mut map = ChainMap::from_levels(
        cocycle.name.clone(),
        MapKind::Cocycle,
        cocycle.s,
        cocycle.t,
        Vec::new(),
    );
    // level 0: the cocycle itself, as a map to C_0
    let level0: Vec<Option<ModuleElt>> = res
        .generator_degrees(cocycle.s)
        .iter()
        .enumerate()
        .map(|(g, &t)| {
            Some(if t == cocycle.t && cocycle.gens.contains(&(g as u32)) {
                ModuleElt::generator(0, 0)
            } else {
                ModuleElt::zero(t.saturating_sub(cocycle.t))
            })
        })
        .collect();
    map.levels.push(level0);
    extend_levels(res, &mut map, s_max)?;
    Ok(map)
}

/// The chain map `V` with `V_0(0_0*) = 0_0*`, through filtration `s_max`.
pub fn lift_sq0(res: &Resolution, s_max: u32) -> Result<ChainMap> {
    if res.generator_count(0) == 0 {
        return Err(Error::Range("the resolution has no C_0".into()));
    }
    let mut map = ChainMap::from_levels("Sq0", MapKind::Sq0, 0, 0, Vec::new());
    map.levels.push(vec![Some(ModuleElt::generator(0, 0))]);
    extend_levels(res, &mut map, s_max)?;
    Ok(map)
}

fn extend_levels(res: &Resolution, map: &mut ChainMap, s_max: u32) -> Result<()> {
    let mut k = map.levels.len() as u32;
    while map.s0 + k <= s_max {
        let s = map.s0 + k;
        let degrees = res.generator_degrees(s);
        let level: Vec<Option<ModuleElt>> = (0..degrees.len() as u32)
            .into_par_iter()
            .map(|g| lift_generator(res, map, s, g, k))
            .collect::<Result<_>>()?;
        map.levels.push(level);
        k += 1;
    }
    Ok(())
}

fn lift_generator(
    res: &Resolution,
    map: &ChainMap,
    s: u32,
    g: u32,
    k: u32,
) -> Result<Option<ModuleElt>> {
    let t = res.generator(s, g).t;
    let Some(u) = map.target_degree(t) else {
        return Ok(Some(ModuleElt::zero(0)));
    };
    if !res.is_computed(k, u) || !res.is_computed(k - 1, u) {
        return Ok(None);
    }
    let Some(rhs) = map.image_of_boundary(res, s, g, k - 1, u)? else {
        return Ok(None);
    };
    if rhs.is_zero() {
        return Ok(Some(ModuleElt::zero(u)));
    }
    let target = res.block(k - 1, u);
    let echelon = res.image_echelon(k, u)?;
    let dense = target.to_dense(&rhs)?;
    let witness = echelon.solve(&dense).ok_or_else(|| Error::NoSolution {
        what: format!("lift of {} at {s}_{g}", map.name),
    })?;
    Ok(Some(res.block(k, u).to_sparse(&witness)))
}

/// Lifts every cocycle in parallel.
pub fn lift_all(res: &Resolution, cocycles: &[Cocycle], s_max: u32) -> Result<Vec<ChainMap>> {
    cocycles
        .par_iter()
        .map(|c| lift_cocycle(res, c, s_max))
        .collect()
}
