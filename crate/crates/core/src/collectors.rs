//! Products, Toda brackets, `Sq^0` values, operator reports and
//! indecomposables, read off augmented chain maps and differentials.
//!
//! A product entry `s g (s0 g0 F2) s1_g1` says the lift of `s1_g1` sends
//! `s_g*` to something containing `1 * (s0)_{g0}*`; the product
//! `(s0)_{g0} * (s1)_{g1}` is the sum of all `s_g` with such an entry.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::chainmaps::{AugEntry, ChainMap, MapKind};
use crate::error::{Error, Result};
use crate::f2linalg::{rank_of, BitVector};
use crate::resolution::{HimultEntry, Resolution};

/// A class `s_g`, written as a pair.
pub type Class = (u32, u32);

/// Which chain map an entry came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MapRef {
    Generator { s: u32, g: u32 },
    Sq0,
}

impl MapRef {
    pub fn of(map: &ChainMap) -> Result<Self> {
        match map.kind() {
            MapKind::Sq0 => Ok(MapRef::Sq0),
            MapKind::Cocycle => map.name().parse(),
        }
    }

    /// Cohomological degree of the map (0 for `Sq0`).
    pub fn s(&self) -> u32 {
        match self {
            MapRef::Generator { s, .. } => *s,
            MapRef::Sq0 => 0,
        }
    }
}

impl fmt::Display for MapRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapRef::Generator { s, g } => write!(f, "{s}_{g}"),
            MapRef::Sq0 => write!(f, "Sq0"),
        }
    }
}

impl FromStr for MapRef {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text == "Sq0" {
            return Ok(MapRef::Sq0);
        }
        let bad = || Error::Format(format!("'{text}' is neither s_g nor Sq0"));
        let (s, g) = text.split_once('_').ok_or_else(bad)?;
        Ok(MapRef::Generator {
            s: s.parse().map_err(|_| bad())?,
            g: g.parse().map_err(|_| bad())?,
        })
    }
}

/// One line of `all.products` (or `all.sq0`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProductEntry {
    pub s: u32,
    pub g: u32,
    pub s0: u32,
    pub g0: u32,
    pub map: MapRef,
}

/// One line of `brackets.sym`: `s_g in < hi, g0, s1_g1 >`, with middle
/// class `(s - s1)_{g0}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BracketEntry {
    pub s: u32,
    pub g: u32,
    pub i: u32,
    pub g0: u32,
    pub s1: u32,
    pub g1: u32,
}

impl BracketEntry {
    pub fn middle(&self) -> Class {
        (self.s - self.s1, self.g0)
    }
}

/// Product entries from the augmented maps. The unit map `0_0` is skipped:
/// its entries only restate `x = x * 0_0`, which the map of `x` already
/// records as `(0 0 F2) x`.
pub fn collect_products(maps: &[ChainMap]) -> Result<Vec<ProductEntry>> {
    let mut out = Vec::new();
    for map in maps {
        let r = MapRef::of(map)?;
        if r == (MapRef::Generator { s: 0, g: 0 }) {
            continue;
        }
        out.extend(entries_of(map, r));
    }
    sort_products(&mut out);
    Ok(out)
}

/// `all.sq0` entries: `s g (s g0 F2) Sq0` when `Sq0((s)_{g0})` contains `s_g`.
pub fn collect_sq0(v: &ChainMap) -> Vec<ProductEntry> {
    let mut out: Vec<ProductEntry> = entries_of(v, MapRef::Sq0).collect();
    sort_products(&mut out);
    out
}

fn entries_of(map: &ChainMap, r: MapRef) -> impl Iterator<Item = ProductEntry> + '_ {
    products_from_aug(r, map.s0(), map.augment())
}

/// Product entries for the map `r` of filtration `s1` from its `Map.aug`
/// entries.
pub fn products_from_aug(
    r: MapRef,
    s1: u32,
    aug: impl IntoIterator<Item = AugEntry>,
) -> impl Iterator<Item = ProductEntry> {
    aug.into_iter().map(move |a| ProductEntry {
        s: a.s,
        g: a.g,
        s0: a.s - s1,
        g0: a.g0,
        map: r,
    })
}

/// Paragraph order: by `(s, g)`, then `(s0, g0)` within a paragraph.
pub fn sort_products(entries: &mut [ProductEntry]) {
    entries.sort_unstable_by_key(|e| (e.s, e.g, e.s0, e.g0, e.map));
}

/// Bracket entries of one lifted cocycle.
pub fn collect_brackets(map: &ChainMap) -> Result<Vec<BracketEntry>> {
    let (s1, g1) = match MapRef::of(map)? {
        MapRef::Generator { s, g } => (s, g),
        MapRef::Sq0 => return Err(Error::Format("Sq0 has no bracket entries".into())),
    };
    Ok(map
        .extract_brackets()
        .into_iter()
        .map(|b| BracketEntry {
            s: b.s,
            g: b.g,
            i: b.i,
            g0: b.g0,
            s1,
            g1,
        })
        .collect())
}

/// Product entries indexed for lookup.
#[derive(Clone, Debug, Default)]
pub struct ProductTable {
    by_factors: HashMap<(Class, MapRef), BTreeSet<Class>>,
    maps: BTreeSet<MapRef>,
}

impl ProductTable {
    /// `maps` lists every map that was lifted, so that a product missing from
    /// the entries can be told apart from a product never computed.
    pub fn new(entries: &[ProductEntry], maps: impl IntoIterator<Item = MapRef>) -> Self {
        let mut by_factors: HashMap<(Class, MapRef), BTreeSet<Class>> = HashMap::new();
        for e in entries {
            let set = by_factors.entry(((e.s0, e.g0), e.map)).or_default();
            if !set.insert((e.s, e.g)) {
                set.remove(&(e.s, e.g));
            }
        }
        let mut maps: BTreeSet<MapRef> = maps.into_iter().collect();
        maps.insert(MapRef::Generator { s: 0, g: 0 });
        ProductTable { by_factors, maps }
    }

    pub fn has_map(&self, m: MapRef) -> bool {
        self.maps.contains(&m)
    }

    /// `p0 * p1`, read from the map of `p1`.
    pub fn product(&self, p0: Class, p1: Class) -> Result<BTreeSet<Class>> {
        let m = MapRef::Generator { s: p1.0, g: p1.1 };
        if !self.has_map(m) {
            return Err(Error::Range(format!("no lifted map for {m}")));
        }
        if p1 == (0, 0) {
            return Ok(BTreeSet::from([p0]));
        }
        Ok(self.by_factors.get(&(p0, m)).cloned().unwrap_or_default())
    }

    /// `Sq0(x)`, from the `all.sq0` entries.
    pub fn sq0(&self, x: Class) -> Result<BTreeSet<Class>> {
        if !self.has_map(MapRef::Sq0) {
            return Err(Error::Range("Sq0 has not been lifted".into()));
        }
        Ok(self.by_factors.get(&(x, MapRef::Sq0)).cloned().unwrap_or_default())
    }
}

/// `p0 * p1` as a set of classes, checked against the computed range.
pub fn compute_product(
    res: &Resolution,
    table: &ProductTable,
    p0: Class,
    p1: Class,
) -> Result<BTreeSet<Class>> {
    let t0 = class_degree(res, p0)?;
    let t1 = class_degree(res, p1)?;
    let (s, t) = (p0.0 + p1.0, t0 + t1);
    if !res.is_computed(s, t) {
        return Err(Error::Range(format!(
            "the product lands in ({s}, {t}), outside the computed range"
        )));
    }
    table.product(p0, p1)
}

pub fn class_degree(res: &Resolution, c: Class) -> Result<u32> {
    if c.1 as usize >= res.generator_count(c.0) {
        return Err(Error::Range(format!("no class {}_{}", c.0, c.1)));
    }
    Ok(res.generator(c.0, c.1).t)
}

/// `h_i * x` for every `x`, read off the differentials.
pub fn himult_table(himults: &[HimultEntry]) -> HashMap<(u32, Class), BTreeSet<Class>> {
    let mut out: HashMap<(u32, Class), BTreeSet<Class>> = HashMap::new();
    for h in himults {
        out.entry((h.i, (h.s0, h.g0))).or_default().insert((h.s, h.g));
    }
    out
}

/// A product that must vanish for a bracket to be defined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Obstruction {
    pub description: String,
    pub value: BTreeSet<Class>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BracketValue {
    Undefined(Vec<Obstruction>),
    Defined {
        /// Classes summing to one element of the bracket.
        representative: BTreeSet<Class>,
        /// A basis of the indeterminacy, each element a set of classes.
        indeterminacy: Vec<BTreeSet<Class>>,
    },
}

impl BracketValue {
    pub fn is_defined(&self) -> bool {
        matches!(self, BracketValue::Defined { .. })
    }

    /// Every element of the bracket coset. Empty when undefined.
    pub fn elements(&self) -> BTreeSet<BTreeSet<Class>> {
        let BracketValue::Defined {
            representative,
            indeterminacy,
        } = self
        else {
            return BTreeSet::new();
        };
        let mut out = BTreeSet::new();
        let n = indeterminacy.len().min(20);
        for mask in 0u32..(1 << n) {
            let mut x = representative.clone();
            for (j, v) in indeterminacy.iter().enumerate().take(n) {
                if mask & (1 << j) != 0 {
                    sym_diff_into(&mut x, v);
                }
            }
            out.insert(x);
        }
        out
    }
}

pub fn sym_diff_into(acc: &mut BTreeSet<Class>, other: &BTreeSet<Class>) {
    for &c in other {
        if !acc.remove(&c) {
            acc.insert(c);
        }
    }
}

/// Evaluates `< h_i, p0, p1 >` following the bracket proposition: defined when
/// `h_i * p0 = 0` and `p0 * p1 = 0`, in which case it contains the sum of the
/// bracket entries of the map of `p1` with middle class `p0`. The
/// indeterminacy is `h_i * Ext + Ext * p1` in the bracket bidegree; pass
/// `include_right = false` to keep only `h_i * Ext`.
#[allow(clippy::too_many_arguments)]
pub fn bracket_value(
    res: &Resolution,
    table: &ProductTable,
    himults: &HashMap<(u32, Class), BTreeSet<Class>>,
    brackets: &[BracketEntry],
    i: u32,
    p0: Class,
    p1: Class,
    include_right: bool,
) -> Result<BracketValue> {
    let t0 = class_degree(res, p0)?;
    let t1 = class_degree(res, p1)?;
    let (s, t) = (p0.0 + p1.0, (1u32 << i) + t0 + t1);
    if !res.is_computed(s, t) {
        return Err(Error::Range(format!(
            "the bracket lands in ({s}, {t}), outside the computed range"
        )));
    }
    let mut obstructions = Vec::new();
    let left = himults.get(&(i, p0)).cloned().unwrap_or_default();
    if !left.is_empty() {
        obstructions.push(Obstruction {
            description: format!("h{i} * {}_{}", p0.0, p0.1),
            value: left,
        });
    }
    let right = compute_product(res, table, p0, p1)?;
    if !right.is_empty() {
        obstructions.push(Obstruction {
            description: format!("{}_{} * {}_{}", p0.0, p0.1, p1.0, p1.1),
            value: right,
        });
    }
    if !obstructions.is_empty() {
        return Ok(BracketValue::Undefined(obstructions));
    }

    let mut representative = BTreeSet::new();
    for b in brackets {
        if b.i == i && b.middle() == p0 && (b.s1, b.g1) == p1 {
            sym_diff_into(&mut representative, &BTreeSet::from([(b.s, b.g)]));
        }
    }
    let mut spanning: Vec<BTreeSet<Class>> = Vec::new();
    for g in res.generators_in_degree(s - 1, t - (1 << i)) {
        if let Some(v) = himults.get(&(i, (s - 1, g))) {
            spanning.push(v.clone());
        }
    }
    if include_right && t >= t1 {
        for g in res.generators_in_degree(s - p1.0, t - t1) {
            spanning.push(table.product((s - p1.0, g), p1)?);
        }
    }
    let indeterminacy = independent_subset(res, s, t, spanning);
    Ok(BracketValue::Defined {
        representative,
        indeterminacy,
    })
}

/// Drops zero and dependent vectors from a list of classes in one bidegree.
fn independent_subset(
    res: &Resolution,
    s: u32,
    t: u32,
    vectors: Vec<BTreeSet<Class>>,
) -> Vec<BTreeSet<Class>> {
    let range = res.generators_in_degree(s, t);
    let dense = |v: &BTreeSet<Class>| {
        BitVector::from_indices(range.len(), v.iter().map(|&(_, g)| (g - range.start) as usize))
    };
    let mut kept: Vec<BTreeSet<Class>> = Vec::new();
    let mut rank = 0;
    for v in vectors {
        let mut trial: Vec<BitVector> = kept.iter().map(dense).collect();
        trial.push(dense(&v));
        let r = rank_of(trial);
        if r > rank {
            rank = r;
            kept.push(v);
        }
    }
    kept
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OperatorKind {
    P,
    P2,
    P4,
    MPrime,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 4] = [
        OperatorKind::P,
        OperatorKind::P2,
        OperatorKind::P4,
        OperatorKind::MPrime,
    ];

    /// Index of the first entry `h_i`.
    pub fn hopf_index(self) -> u32 {
        match self {
            OperatorKind::P => 3,
            OperatorKind::P2 => 4,
            OperatorKind::P4 => 5,
            OperatorKind::MPrime => 0,
        }
    }

    /// The middle entry: `h_0^4 = 4_0`, `h_0^8 = 8_0`, `h_0^16 = 16_0`, or
    /// `h_0^2 g_2 = 6_21`.
    pub fn middle(self) -> Class {
        match self {
            OperatorKind::P => (4, 0),
            OperatorKind::P2 => (8, 0),
            OperatorKind::P4 => (16, 0),
            OperatorKind::MPrime => (6, 21),
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            OperatorKind::P => "P.txt",
            OperatorKind::P2 => "P2.txt",
            OperatorKind::P4 => "P4.txt",
            OperatorKind::MPrime => "MM.txt",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            OperatorKind::P => "P x = < h3, h0^4, x >",
            OperatorKind::P2 => "P^2 x = < h4, h0^8, x >",
            OperatorKind::P4 => "P^4 x = < h5, h0^16, x >",
            OperatorKind::MPrime => "M' x = < h0, h0^2 g2, x >, where 6_21 = h0^2 g2",
        }
    }
}

/// The three sections of an operator file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorReport {
    pub kind: OperatorKind,
    /// (a) bracket entries with the operator's first and middle entries.
    pub values: Vec<BracketEntry>,
    /// (b) nonzero products by the middle entry.
    pub obstructions: Vec<ProductEntry>,
    /// (c) nonzero products by `h_i`, which give the indeterminacy.
    pub indeterminacy: Vec<ProductEntry>,
}

pub fn operator_report(
    kind: OperatorKind,
    products: &[ProductEntry],
    brackets: &[BracketEntry],
) -> OperatorReport {
    let i = kind.hopf_index();
    let middle = kind.middle();
    let mut values: Vec<BracketEntry> = brackets
        .iter()
        .filter(|b| b.i == i && b.s >= b.s1 && b.middle() == middle)
        .copied()
        .collect();
    values.sort_unstable_by_key(|b| (b.s, b.g, b.s1, b.g1));
    let pick = |c: Class| {
        let mut v: Vec<ProductEntry> = products
            .iter()
            .filter(|e| (e.s0, e.g0) == c)
            .copied()
            .collect();
        sort_products(&mut v);
        v
    };
    OperatorReport {
        kind,
        values,
        obstructions: pick(middle),
        indeterminacy: pick((1, i)),
    }
}

/// Indecomposables of the computed range.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Indecomposables {
    /// Classes appearing in no product of positive-filtration factors.
    pub certain: Vec<Class>,
    /// `(s, t) -> (dim Ext^{s,t}, dim of the decomposable span)`.
    pub by_bidegree: BTreeMap<(u32, u32), (usize, usize)>,
}

impl Indecomposables {
    /// Total dimension of the indecomposable quotient.
    pub fn total(&self) -> usize {
        self.by_bidegree.values().map(|(d, r)| d - r).sum()
    }
}

/// Computes `m / m^2` dimension per bidegree from the product entries, which
/// must come from maps for every class in the range.
pub fn indecomposables(res: &Resolution, products: &[ProductEntry]) -> Indecomposables {
    let mut decomposable: BTreeSet<Class> = BTreeSet::new();
    let mut sums: BTreeMap<(Class, MapRef), BTreeSet<Class>> = BTreeMap::new();
    for e in products {
        if e.s0 == 0 || e.s0 == e.s {
            continue;
        }
        decomposable.insert((e.s, e.g));
        sym_diff_into(
            sums.entry(((e.s0, e.g0), e.map)).or_default(),
            &BTreeSet::from([(e.s, e.g)]),
        );
    }
    let mut per: BTreeMap<(u32, u32), Vec<BitVector>> = BTreeMap::new();
    for v in sums.into_values().filter(|v| !v.is_empty()) {
        let &(s, g) = v.iter().next().expect("nonempty");
        let t = res.generator(s, g).t;
        let range = res.generators_in_degree(s, t);
        per.entry((s, t)).or_default().push(BitVector::from_indices(
            range.len(),
            v.iter().map(|&(_, g)| (g - range.start) as usize),
        ));
    }
    let mut by_bidegree = BTreeMap::new();
    let mut certain = Vec::new();
    for id in res.generators().filter(|id| id.s >= 1) {
        if !decomposable.contains(&(id.s, id.g)) {
            certain.push((id.s, id.g));
        }
        by_bidegree.entry((id.s, id.t)).or_insert_with(|| {
            let dim = res.ext_dimension(id.s, id.t);
            let rank = per.remove(&(id.s, id.t)).map_or(0, rank_of);
            (dim, rank)
        });
    }
    Indecomposables {
        certain,
        by_bidegree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainmaps::{lift_all, Cocycle};

    fn computed(s_max: u32, t_max: u32) -> (Resolution, Vec<ChainMap>) {
        let mut res = Resolution::new();
        res.extend(s_max, t_max).unwrap();
        let cocycles: Vec<Cocycle> = res
            .generators()
            .map(|id| Cocycle::dual_to(&res, id.s, id.g).unwrap())
            .collect();
        let maps = lift_all(&res, &cocycles, s_max).unwrap();
        (res, maps)
    }

    #[test]
    fn map_names() {
        for name in ["0_0", "7_13", "Sq0"] {
            assert_eq!(name.parse::<MapRef>().unwrap().to_string(), name);
        }
        for bad in ["7", "7_", "_3", "sq0", "1_2_3"] {
            assert!(bad.parse::<MapRef>().is_err(), "{bad}");
        }
    }

    #[test]
    fn repeated_entries_cancel() {
        let e = ProductEntry { s: 2, g: 0, s0: 1, g0: 0, map: "1_0".parse().unwrap() };
        let table = ProductTable::new(&[e, e], [e.map]);
        assert!(table.product((1, 0), (1, 0)).unwrap().is_empty());
        assert!(table.product((1, 0), (1, 1)).is_err());
        assert_eq!(table.product((1, 1), (0, 0)).unwrap(), BTreeSet::from([(1, 1)]));
    }

    #[test]
    fn hopf_relations() {
        let (res, maps) = computed(3, 14);
        let products = collect_products(&maps).unwrap();
        let refs: Vec<MapRef> = maps.iter().map(|m| MapRef::of(m).unwrap()).collect();
        let table = ProductTable::new(&products, refs);
        let p = |a, b| compute_product(&res, &table, a, b).unwrap();
        // h0 h1 = 0, h1 h2 = 0, h0 h2 != 0, h1^2 != 0
        assert!(p((1, 0), (1, 1)).is_empty());
        assert!(p((1, 1), (1, 2)).is_empty());
        assert_eq!(p((1, 0), (1, 2)).len(), 1);
        assert_eq!(p((1, 1), (1, 1)).len(), 1);
        // h1^3 = h0^2 h2
        let h1sq = *p((1, 1), (1, 1)).iter().next().unwrap();
        let h0h2 = *p((1, 0), (1, 2)).iter().next().unwrap();
        assert_eq!(p((1, 1), h1sq), p((1, 0), h0h2));
        assert!(compute_product(&res, &table, (1, 3), (3, 0)).is_err());
    }

    #[test]
    fn indecomposables_through_filtration_three() {
        let (res, maps) = computed(3, 20);
        let products = collect_products(&maps).unwrap();
        let ind = indecomposables(&res, &products);
        let positive: Vec<Class> = ind.certain.iter().copied().filter(|c| c.0 > 0).collect();
        let degrees: Vec<(u32, u32)> = positive.iter().map(|&(s, g)| (s, res.generator(s, g).t)).collect();
        // h0 .. h4 and c0
        assert_eq!(degrees, [(1, 1), (1, 2), (1, 4), (1, 8), (1, 16), (3, 11)]);
    }

    #[test]
    fn operator_sections_select_by_class() {
        let b = |s, g, i, g0, s1, g1| BracketEntry { s, g, i, g0, s1, g1 };
        let brackets = [b(5, 1, 3, 0, 1, 1), b(5, 2, 2, 0, 1, 2), b(6, 1, 3, 1, 2, 1)];
        let e = |s, g, s0, g0, m: &str| ProductEntry { s, g, s0, g0, map: m.parse().unwrap() };
        let products = [e(5, 0, 4, 0, "1_0"), e(6, 5, 1, 3, "5_1"), e(3, 0, 2, 0, "1_0")];
        let r = operator_report(OperatorKind::P, &products, &brackets);
        assert_eq!(r.values, vec![brackets[0]]);
        assert_eq!(r.obstructions, vec![products[0]]);
        assert_eq!(r.indeterminacy, vec![products[1]]);
    }
}
