//! Compact binary `Diff.s`, convertible to and from `hDiff.s` without loss.
//!
//! Layout, little-endian:
//!
//! ```text
//! magic  "F2DIFF\0\0"      8 bytes
//! version                  u16 (currently 1)
//! s                        u32
//! maxt                     i64 (-1 when nothing is computed)
//! generator count          u32
//! per generator:   degree u32, term count u32
//!   per term:      target generator u32, coefficient degree u32,
//!                  monomial count u32, monomials as u64 keys
//! ```
//!
//! A monomial key packs exponent `r_i` into byte `i - 1`.

use super::resolution_files::HDiff;
use crate::error::{Error, Result};
use crate::milnor::{AlgebraElt, MilnorElt};
use crate::resolution::{ModuleElt, ModuleTerm};

pub const MAGIC: &[u8; 8] = b"F2DIFF\0\0";
pub const VERSION: u16 = 1;

pub fn write_diff_binary(s: u32, h: &HDiff) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&s.to_le_bytes());
    out.extend_from_slice(&h.maxt.map_or(-1, i64::from).to_le_bytes());
    out.extend_from_slice(&(h.degrees.len() as u32).to_le_bytes());
    for (t, d) in h.degrees.iter().zip(&h.diffs) {
        out.extend_from_slice(&t.to_le_bytes());
        out.extend_from_slice(&(d.terms().len() as u32).to_le_bytes());
        for term in d.terms() {
            out.extend_from_slice(&term.gen.to_le_bytes());
            out.extend_from_slice(&term.coeff.degree().to_le_bytes());
            out.extend_from_slice(&(term.coeff.len() as u32).to_le_bytes());
            for m in term.coeff.support() {
                out.extend_from_slice(&m.key().to_le_bytes());
            }
        }
    }
    out
}

struct Reader<'a> {
    file: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| self.error("truncated file"))?;
        self.pos = end;
        Ok(chunk.try_into().expect("length checked"))
    }

    fn u32(&mut self) -> Result<u32> {
        self.take::<4>().map(u32::from_le_bytes)
    }

    fn error(&self, message: &str) -> Error {
        // the byte offset stands in for a line number
        Error::parse(self.file, self.pos, message)
    }
}

/// Returns the stage `s` and its differentials.
pub fn read_diff_binary(file: &str, bytes: &[u8]) -> Result<(u32, HDiff)> {
    let mut r = Reader { file, bytes, pos: 0 };
    if &r.take::<8>()? != MAGIC {
        return Err(r.error("not a binary differential file"));
    }
    let version = u16::from_le_bytes(r.take::<2>()?);
    if version != VERSION {
        return Err(r.error(&format!("unsupported version {version}")));
    }
    let s = r.u32()?;
    let maxt = match i64::from_le_bytes(r.take::<8>()?) {
        -1 => None,
        m if (0..=u32::MAX as i64).contains(&m) => Some(m as u32),
        _ => return Err(r.error("bad completion degree")),
    };
    let n = r.u32()? as usize;
    let mut degrees = Vec::with_capacity(n.min(1 << 16));
    let mut diffs = Vec::with_capacity(n.min(1 << 16));
    for _ in 0..n {
        let t = r.u32()?;
        let count = r.u32()? as usize;
        let mut terms = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let gen = r.u32()?;
            let degree = r.u32()?;
            let monos = r.u32()? as usize;
            let mut support = Vec::with_capacity(monos.min(1 << 16));
            let mut last: Option<u64> = None;
            for _ in 0..monos {
                let key = u64::from_le_bytes(r.take::<8>()?);
                if last.is_some_and(|l| l >= key) {
                    return Err(r.error("monomials out of order"));
                }
                last = Some(key);
                let m = MilnorElt::from_key(key);
                if MilnorElt::new(&m.exponents()).ok() != Some(m) || m.degree() != degree {
                    return Err(r.error("invalid monomial"));
                }
                support.push(m);
            }
            let coeff = AlgebraElt::from_monomials(degree, support)
                .map_err(|e| r.error(&e.to_string()))?;
            if coeff.is_zero() {
                return Err(r.error("zero coefficient"));
            }
            terms.push(ModuleTerm { gen, coeff });
        }
        if terms.windows(2).any(|w| w[0].gen >= w[1].gen) {
            return Err(r.error("terms out of order"));
        }
        degrees.push(t);
        diffs.push(ModuleElt::from_terms(t, terms));
    }
    if r.pos != bytes.len() {
        return Err(r.error("trailing bytes"));
    }
    Ok((
        s,
        HDiff {
            maxt,
            degrees,
            diffs,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io_formats::resolution_files::{parse_hdiff, write_hdiff};
    use crate::milnor::MilnorAlgebra;
    use crate::resolution::Resolution;

    #[test]
    fn binary_and_text_agree() {
        let mut r = Resolution::new();
        r.extend(4, 20).unwrap();
        let alg = MilnorAlgebra::new();
        for s in 0..=4 {
            let h = HDiff::of(&r, s);
            let bytes = write_diff_binary(s, &h);
            let (s2, back) = read_diff_binary("Diff", &bytes).unwrap();
            assert_eq!((s2, &back), (s, &h));
            let text = write_hdiff(&back, &alg);
            assert_eq!(parse_hdiff("hDiff", &text, &alg).unwrap(), h);
        }
    }

    #[test]
    fn rejects_damage() {
        let mut r = Resolution::new();
        r.extend(2, 9).unwrap();
        let bytes = write_diff_binary(2, &HDiff::of(&r, 2));
        assert!(read_diff_binary("Diff", &bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(read_diff_binary("Diff", &bad).is_err());
        let mut longer = bytes;
        longer.push(0);
        assert!(read_diff_binary("Diff", &longer).is_err());
    }
}
