#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use proptest::prelude::*;
use steenrod_ext::chainmaps::{AugEntry, RawBracket};
use steenrod_ext::collectors::{BracketEntry, MapRef, ProductEntry};
use steenrod_ext::io_formats::HDiff;
use steenrod_ext::io_formats::binary::{read_diff_binary, write_diff_binary};
use steenrod_ext::io_formats::map_files::{
    parse_brackets, parse_brackets_sym, parse_map_aug, write_brackets, write_brackets_sym, write_map_aug,
};
use steenrod_ext::io_formats::notation::{parse_coefficient, write_coefficient, Notation};
use steenrod_ext::io_formats::report_files::{parse_products, write_products};
use steenrod_ext::io_formats::resolution_files::{
    parse_hdiff, parse_himults, parse_maxt, parse_shape, write_hdiff, write_himults, write_maxt, write_shape,
};
use steenrod_ext::io_formats::Shape;
use steenrod_ext::milnor::{enumerate_basis, multiply, multiply_elt, AlgebraElt, MilnorAlgebra, MilnorElt};
use steenrod_ext::resolution::{HimultEntry, ModuleElt, ModuleTerm};

/// Exponents of `xi_1, xi_2, ...` in a monomial of the dual algebra.
type Xi = [u32; 8];

/// A monomial `xi^R (x) xi^S` of the tensor square.
type Tensor = (Xi, Xi);

fn xi_of(m: MilnorElt) -> Xi {
    let mut out = [0; 8];
    for (i, r) in m.exponents().into_iter().enumerate() {
        out[i] = r;
    }
    out
}

fn times(a: &HashSet<Tensor>, b: &HashSet<Tensor>) -> HashSet<Tensor> {
    let mut out = HashSet::new();
    for x in a {
        for y in b {
            let mut z = *x;
            for i in 0..8 {
                z.0[i] += y.0[i];
                z.1[i] += y.1[i];
            }
            if !out.insert(z) {
                out.remove(&z);
            }
        }
    }
    out
}

/// `Delta(xi_k) = sum_i xi_{k-i}^{2^i} (x) xi_i`, with `xi_0 = 1`.
fn coproduct_xi(k: usize) -> HashSet<Tensor> {
    let mut out = HashSet::new();
    for i in 0..=k {
        let mut t: Tensor = ([0; 8], [0; 8]);
        if k > i {
            t.0[k - i - 1] = 1 << i;
        }
        if i > 0 {
            t.1[i - 1] = 1;
        }
        out.insert(t);
    }
    out
}

/// `Delta(xi^T)` in the dual Hopf algebra, computed from the coproduct on
/// generators alone.
pub fn coproduct(t: MilnorElt) -> HashSet<Tensor> {
    let mut acc: HashSet<Tensor> = HashSet::from([([0; 8], [0; 8])]);
    for (k, e) in t.exponents().into_iter().enumerate() {
        let d = coproduct_xi(k + 1);
        for _ in 0..e {
            acc = times(&acc, &d);
        }
    }
    acc
}

/// Pairs `(R, S)` of total degree at most `max` where the coefficient of
/// `Sq(T)` in `Sq(R) Sq(S)` disagrees with the pairing
/// `<Sq(R) (x) Sq(S), Delta(xi^T)>`.
pub fn dual_pairing_mismatches(max: u32) -> Vec<String> {
    let mut out = Vec::new();
    for total in 0..=max {
        let coproducts: Vec<(MilnorElt, HashSet<Tensor>)> = enumerate_basis(total)
            .elements()
            .iter()
            .map(|&t| (t, coproduct(t)))
            .collect();
        for a in 0..=total {
            for &r in enumerate_basis(a).elements() {
                for &s in enumerate_basis(total - a).elements() {
                    let product = multiply(r, s);
                    for (t, delta) in &coproducts {
                        let expected = delta.contains(&(xi_of(r), xi_of(s)));
                        if product.contains(*t) != expected {
                            out.push(format!("{r:?} * {s:?} at {t:?}"));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn associativity_failures(max: u32) -> Vec<String> {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=max - a {
            for c in 0..=max - a - b {
                for &x in enumerate_basis(a).elements() {
                    for &y in enumerate_basis(b).elements() {
                        let xy = multiply(x, y);
                        for &z in enumerate_basis(c).elements() {
                            let left = multiply_elt(
                                &xy,
                                &AlgebraElt::from_monomials(c, [z]).unwrap(),
                            );
                            let right = multiply_elt(
                                &AlgebraElt::from_monomials(a, [x]).unwrap(),
                                &multiply(y, z),
                            );
                            if left != right {
                                out.push(format!("({x:?} {y:?}) {z:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every file under `root`, by relative path.
pub fn read_tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

// Generators for the format round trips.

pub fn arb_monomial(max_degree: u32) -> impl Strategy<Value = MilnorElt> {
    (1..=max_degree).prop_flat_map(|d| {
        let elems = enumerate_basis(d).elements().to_vec();
        proptest::sample::select(elems)
    })
}

pub fn arb_coefficient(max_degree: u32) -> impl Strategy<Value = AlgebraElt> {
    (0..=max_degree).prop_flat_map(|d| {
        let elems = enumerate_basis(d).elements().to_vec();
        let n = elems.len();
        proptest::sample::subsequence(elems, 1..=n)
            .prop_map(move |ms| AlgebraElt::from_monomials(d, ms).unwrap())
    })
}

pub fn arb_module_elt() -> impl Strategy<Value = ModuleElt> {
    (0u32..60, proptest::collection::btree_map(0u32..40, arb_coefficient(18), 0..5)).prop_map(|(t, terms)| {
        ModuleElt::from_terms(t, terms.into_iter().map(|(gen, coeff)| ModuleTerm { gen, coeff }))
    })
}

pub fn arb_hdiff() -> impl Strategy<Value = HDiff> {
    (
        proptest::option::of(0u32..300),
        proptest::collection::vec((0u32..60, arb_module_elt()), 0..6),
    )
        .prop_map(|(maxt, mut entries)| {
            entries.sort_by_key(|(t, _)| *t);
            let degrees = entries.iter().map(|(t, _)| *t).collect();
            let diffs = entries
                .into_iter()
                .map(|(t, d)| ModuleElt::from_terms(t, d.terms().to_vec()))
                .collect();
            HDiff { maxt, degrees, diffs }
        })
}

fn arb_map_ref() -> impl Strategy<Value = MapRef> {
    prop_oneof![
        (0u32..20, 0u32..200).prop_map(|(s, g)| MapRef::Generator { s, g }),
        Just(MapRef::Sq0),
    ]
}

pub fn arb_products() -> impl Strategy<Value = Vec<ProductEntry>> {
    proptest::collection::vec(
        (0u32..20, 0u32..200, 0u32..20, 0u32..200, arb_map_ref()).prop_map(|(s, g, s0, g0, map)| ProductEntry {
            s,
            g,
            s0,
            g0,
            map,
        }),
        0..30,
    )
}

pub fn arb_brackets() -> impl Strategy<Value = Vec<BracketEntry>> {
    proptest::collection::vec(
        (0u32..20, 0u32..200, 0u32..8, 0u32..200, 0u32..20, 0u32..200).prop_map(|(s0, g, i, g0, s1, g1)| {
            BracketEntry { s: s0 + s1, g, i, g0, s1, g1 }
        }),
        0..20,
    )
}

pub fn arb_raw_brackets() -> impl Strategy<Value = Vec<RawBracket>> {
    proptest::collection::vec(
        (0u32..20, 0u32..200, 0u32..8, 0u32..200).prop_map(|(s, g, i, g0)| RawBracket { s, g, i, g0 }),
        0..20,
    )
}

pub fn arb_aug() -> impl Strategy<Value = Vec<AugEntry>> {
    proptest::collection::vec((0u32..20, 0u32..200, 0u32..200).prop_map(|(s, g, g0)| AugEntry { s, g, g0 }), 0..20)
}

pub fn arb_himults() -> impl Strategy<Value = Vec<HimultEntry>> {
    proptest::collection::vec(
        (0u32..20, 0u32..200, 0u32..200, 0u32..8).prop_map(|(s0, g, g0, i)| HimultEntry { s: s0 + 1, g, s0, g0, i }),
        0..20,
    )
}

pub fn arb_shape() -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(proptest::collection::vec(0u32..100, 0..8), 1..6).prop_map(|mut v| {
        for d in &mut v {
            d.sort_unstable();
        }
        v
    })
}

/// One generated value for every file format.
#[derive(Clone, Debug)]
pub struct Instance {
    pub hdiff: HDiff,
    pub products: Vec<ProductEntry>,
    pub brackets: Vec<BracketEntry>,
    pub raw: Vec<RawBracket>,
    pub aug: Vec<AugEntry>,
    pub himults: Vec<HimultEntry>,
    pub shape: Vec<Vec<u32>>,
    pub coefficient: AlgebraElt,
}

pub fn arb_instance() -> impl Strategy<Value = Instance> {
    (
        arb_hdiff(),
        arb_products(),
        arb_brackets(),
        arb_raw_brackets(),
        arb_aug(),
        arb_himults(),
        arb_shape(),
        arb_coefficient(24),
    )
        .prop_map(|(hdiff, products, brackets, raw, aug, himults, shape, coefficient)| Instance {
            hdiff,
            products,
            brackets,
            raw,
            aug,
            himults,
            shape,
            coefficient,
        })
}

fn same<T: PartialEq + std::fmt::Debug>(what: &str, a: T, b: T) -> Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what}: {a:?} came back as {b:?}"))
    }
}

/// Writes every part of the instance and parses it back.
pub fn check_round_trips(x: &Instance, algebra: &MilnorAlgebra) -> Result<(), String> {
    let text = write_hdiff(&x.hdiff, algebra);
    same("hDiff", &x.hdiff, &parse_hdiff("hDiff", &text, algebra).map_err(|e| e.to_string())?)?;
    let bytes = write_diff_binary(3, &x.hdiff);
    let (s, back) = read_diff_binary("Diff", &bytes).map_err(|e| e.to_string())?;
    same("Diff", (3, &x.hdiff), (s, &back))?;
    same(
        "products",
        &x.products,
        &parse_products("p", &write_products(&x.products)).map_err(|e| e.to_string())?,
    )?;
    same(
        "brackets.sym",
        &x.brackets,
        &parse_brackets_sym(&write_brackets_sym(&x.brackets)).map_err(|e| e.to_string())?,
    )?;
    same("brackets", &x.raw, &parse_brackets(&write_brackets(&x.raw)).map_err(|e| e.to_string())?)?;
    same("Map.aug", &x.aug, &parse_map_aug(&write_map_aug(&x.aug)).map_err(|e| e.to_string())?)?;
    same(
        "himults",
        &x.himults,
        &parse_himults(&write_himults(&x.himults)).map_err(|e| e.to_string())?,
    )?;
    let shape = Shape { degrees: x.shape.clone() };
    same("Shape", &shape, &parse_shape(&write_shape(&shape)).map_err(|e| e.to_string())?)?;
    let maxt: Vec<Option<u32>> = x.shape.iter().map(|d| d.last().copied()).collect();
    same("Maxt", &maxt, &parse_maxt(&write_maxt(&maxt)).map_err(|e| e.to_string())?)?;
    let basis = algebra.basis(x.coefficient.degree());
    for notation in [Notation::Milnor, Notation::Hex, Notation::Indices] {
        let text = write_coefficient(&x.coefficient, &basis, notation);
        same(&format!("{notation:?} coefficient"), &x.coefficient, &parse_coefficient(&text, &basis)?)?;
    }
    Ok(())
}
