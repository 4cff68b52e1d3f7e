//! The three ways to write a Steenrod algebra coefficient:
//!
//! * `i(8)(2,2).` lists Milnor basis elements;
//! * `x80` is a hex bitstring over the degree's basis, most significant bit
//!   first, padded to whole bytes;
//! * `s0 3.` lists the indices of the set bits.
//!
//! Bit positions follow the reverse-lexicographic order of the degree basis.

use crate::milnor::{AlgebraElt, DegreeBasis, MilnorAlgebra, MilnorElt};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Notation {
    #[default]
    Milnor,
    Hex,
    Indices,
}

pub fn write_coefficient(a: &AlgebraElt, basis: &DegreeBasis, notation: Notation) -> String {
    match notation {
        Notation::Milnor => {
            let mut out = String::from("i");
            for m in a.support() {
                out.push_str(&m.to_string());
            }
            out.push('.');
            out
        }
        Notation::Hex => {
            let mut bytes = vec![0u8; basis.len().div_ceil(8).max(1)];
            for &m in a.support() {
                let i = basis.index_of(m).expect("coefficient outside its degree");
                bytes[i / 8] |= 0x80 >> (i % 8);
            }
            let mut out = String::from("x");
            for b in bytes {
                out.push_str(&format!("{b:02X}"));
            }
            out
        }
        Notation::Indices => {
            let mut idx: Vec<usize> = a
                .support()
                .iter()
                .map(|&m| basis.index_of(m).expect("coefficient outside its degree"))
                .collect();
            idx.sort_unstable();
            let list: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            format!("s{}.", list.join(" "))
        }
    }
}

/// Parses a coefficient of the basis' degree in any of the three notations.
pub fn parse_coefficient(text: &str, basis: &DegreeBasis) -> Result<AlgebraElt, String> {
    let text = text.trim();
    let mut monomials = Vec::new();
    if let Some(body) = text.strip_prefix('i') {
        let body = body
            .strip_suffix('.')
            .ok_or_else(|| format!("'{text}' lacks the terminating '.'"))?;
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner_end = rest
                .find(')')
                .ok_or_else(|| format!("unbalanced parentheses in '{text}'"))?;
            let inner = rest[..inner_end]
                .strip_prefix('(')
                .ok_or_else(|| format!("expected '(' in '{text}'"))?;
            let exps = inner
                .split(',')
                .map(|e| e.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| format!("bad exponent in '{text}': {e}"))?;
            let m = MilnorElt::new(&exps).map_err(|e| e.to_string())?;
            if m.degree() != basis.degree() {
                return Err(format!(
                    "{m} has degree {}, expected {}",
                    m.degree(),
                    basis.degree()
                ));
            }
            monomials.push(m);
            rest = rest[inner_end + 1..].trim_start();
        }
    } else if let Some(hex) = text.strip_prefix('x') {
        if hex.len() % 2 != 0 || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(format!("'{text}' is not a whole number of hex bytes"));
        }
        for (byte_index, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let byte = u8::from_str_radix(std::str::from_utf8(chunk).expect("ascii"), 16)
                .map_err(|e| e.to_string())?;
            for bit in 0..8 {
                if byte & (0x80 >> bit) != 0 {
                    monomials.push(basis_element(basis, byte_index * 8 + bit, text)?);
                }
            }
        }
    } else if let Some(body) = text.strip_prefix('s') {
        let body = body
            .strip_suffix('.')
            .ok_or_else(|| format!("'{text}' lacks the terminating '.'"))?;
        for tok in body.split_whitespace() {
            let i: usize = tok.parse().map_err(|e| format!("bad index '{tok}': {e}"))?;
            monomials.push(basis_element(basis, i, text)?);
        }
    } else {
        return Err(format!("unknown coefficient notation '{text}'"));
    }
    // repeated monomials cancel in pairs, as in any F2 sum
    AlgebraElt::from_monomials(basis.degree(), monomials).map_err(|e| e.to_string())
}

fn basis_element(basis: &DegreeBasis, i: usize, text: &str) -> Result<MilnorElt, String> {
    if i >= basis.len() {
        return Err(format!(
            "'{text}' sets bit {i} but degree {} has dimension {}",
            basis.degree(),
            basis.len()
        ));
    }
    Ok(basis.get(i))
}

/// `g deg dim coeff`: a coefficient on generator `g`.
pub fn write_term_line(gen: u32, a: &AlgebraElt, basis: &DegreeBasis, notation: Notation) -> String {
    format!(
        "{gen} {} {} {}",
        a.degree(),
        basis.len(),
        write_coefficient(a, basis, notation)
    )
}

pub fn parse_term_line(line: &str, algebra: &MilnorAlgebra) -> Result<(u32, AlgebraElt), String> {
    let mut parts = line.trim().splitn(4, char::is_whitespace);
    let mut field = |name: &str| -> Result<u32, String> {
        parts
            .next()
            .ok_or_else(|| format!("missing {name}"))?
            .parse()
            .map_err(|e| format!("bad {name}: {e}"))
    };
    let gen = field("generator")?;
    let degree = field("degree")?;
    let dim = field("dimension")?;
    let coeff = parts.next().ok_or("missing coefficient")?;
    if degree > crate::milnor::MAX_DEGREE {
        return Err(format!("degree {degree} is out of range"));
    }
    let basis = algebra.basis(degree);
    if dim as usize != basis.len() {
        return Err(format!(
            "dimension field {dim} disagrees with dim A_{degree} = {}",
            basis.len()
        ));
    }
    Ok((gen, parse_coefficient(coeff, &basis)?))
}
