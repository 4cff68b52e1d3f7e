//! Readers and writers for the dataset files, and the directory layout that
//! holds them.
//!
//! ```text
//! root/
//!   Def MAXFILT Shape Maxt himults
//!   hDiff.0 hDiff.1 ...      text differentials
//!   Diff.0 Diff.1 ...        binary differentials
//!   maps                     one cocycle name per line
//!   s_g/Def s_g/Map s_g/Map.aug s_g/brackets s_g/brackets.sym
//!   Sq0/Map Sq0/Map.aug
//!   all.products all.sq0 P.txt P2.txt P4.txt MM.txt
//! ```

pub mod binary;
pub mod map_files;
pub mod notation;
pub mod report_files;
pub mod resolution_files;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::chainmaps::{AugEntry, ChainMap, MapKind};
use crate::collectors::{collect_brackets, BracketEntry, OperatorKind};
use crate::error::{Error, Result};
use crate::resolution::Resolution;

pub use map_files::CochainDef;
pub use notation::Notation;
pub use resolution_files::{HDiff, Shape};

/// Walks a text file by whitespace-separated tokens or whole lines, tracking
/// line numbers for error messages.
pub(crate) struct Cursor<'a> {
    file: &'a str,
    lines: Vec<&'a str>,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(file: &'a str, text: &'a str) -> Self {
        Cursor {
            file,
            lines: text.lines().collect(),
            line: 0,
            col: 0,
        }
    }

    pub(crate) fn file(&self) -> &str {
        self.file
    }

    /// 1-based number of the current line.
    pub(crate) fn line(&self) -> usize {
        (self.line + 1).min(self.lines.len().max(1))
    }

    fn rest(&self) -> &'a str {
        self.lines.get(self.line).map_or("", |l| &l[self.col..])
    }

    fn skip_space(&mut self) {
        while self.line < self.lines.len() {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            if trimmed.is_empty() {
                self.line += 1;
                self.col = 0;
            } else {
                self.col += rest.len() - trimmed.len();
                return;
            }
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_space();
        self.line >= self.lines.len()
    }

    pub(crate) fn word(&mut self, what: &str) -> Result<&'a str> {
        if self.at_end() {
            return Err(Error::parse(self.file, self.line(), format!("missing {what}")));
        }
        let rest = self.rest();
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        self.col += len;
        Ok(&rest[..len])
    }

    pub(crate) fn number<T: FromStr>(&mut self, what: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let word = self.word(what)?;
        word.parse().map_err(|e| {
            Error::parse(self.file, self.line(), format!("bad {what} '{word}': {e}"))
        })
    }

    /// The rest of the current line if it has content, else the next
    /// nonblank line.
    pub(crate) fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        if self.at_end() {
            return Err(Error::parse(self.file, self.line(), format!("missing {what}")));
        }
        let text = self.rest();
        let number = self.line + 1;
        self.line += 1;
        self.col = 0;
        Ok((number, text))
    }

    pub(crate) fn expect_end(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(Error::parse(self.file, self.line(), "unexpected trailing data"))
        }
    }
}

/// Parses exactly `n` whitespace-separated numbers from a line.
pub(crate) fn fields<T: FromStr>(file: &str, line_no: usize, line: &str, n: usize) -> Result<Vec<T>> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != n {
        return Err(Error::parse(
            file,
            line_no,
            format!("expected {n} fields, found {}", f.len()),
        ));
    }
    f.iter()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(file, line_no, format!("bad number '{t}'")))
        })
        .collect()
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Paths of every file in a dataset directory.
#[derive(Clone, Debug)]
pub struct DatasetLayout {
    root: PathBuf,
}

impl DatasetLayout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DatasetLayout { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn def(&self) -> PathBuf {
        self.root.join("Def")
    }

    pub fn maxfilt(&self) -> PathBuf {
        self.root.join("MAXFILT")
    }

    pub fn shape(&self) -> PathBuf {
        self.root.join("Shape")
    }

    pub fn maxt(&self) -> PathBuf {
        self.root.join("Maxt")
    }

    pub fn hdiff(&self, s: u32) -> PathBuf {
        self.root.join(format!("hDiff.{s}"))
    }

    pub fn diff(&self, s: u32) -> PathBuf {
        self.root.join(format!("Diff.{s}"))
    }

    pub fn himults(&self) -> PathBuf {
        self.root.join("himults")
    }

    pub fn maps_list(&self) -> PathBuf {
        self.root.join("maps")
    }

    pub fn map_dir(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn cocycle_def(&self, name: &str) -> PathBuf {
        self.map_dir(name).join("Def")
    }

    pub fn map_file(&self, name: &str) -> PathBuf {
        self.map_dir(name).join("Map")
    }

    pub fn map_aug(&self, name: &str) -> PathBuf {
        self.map_dir(name).join("Map.aug")
    }

    pub fn brackets(&self, name: &str) -> PathBuf {
        self.map_dir(name).join("brackets")
    }

    pub fn brackets_sym(&self, name: &str) -> PathBuf {
        self.map_dir(name).join("brackets.sym")
    }

    pub fn all_products(&self) -> PathBuf {
        self.root.join("all.products")
    }

    pub fn all_sq0(&self) -> PathBuf {
        self.root.join("all.sq0")
    }

    pub fn operator(&self, kind: OperatorKind) -> PathBuf {
        self.root.join(kind.file_name())
    }

    pub fn has_resolution(&self) -> bool {
        self.shape().exists()
    }

    /// Writes `Def`, `MAXFILT`, `Shape`, `Maxt`, `hDiff.s`, `Diff.s` and
    /// `himults`.
    pub fn save_resolution(&self, res: &Resolution) -> Result<()> {
        let shape = Shape::of(res);
        write_text(&self.def(), &resolution_files::write_module_def())?;
        write_text(&self.maxfilt(), &resolution_files::write_maxfilt(shape.s_max()))?;
        write_text(&self.shape(), &resolution_files::write_shape(&shape))?;
        let stages = shape.degrees.len();
        write_text(
            &self.maxt(),
            &resolution_files::write_maxt(&res.maxt_table()[..stages]),
        )?;
        for s in 0..stages as u32 {
            let h = HDiff::of(res, s);
            write_text(&self.hdiff(s), &resolution_files::write_hdiff(&h, res.algebra()))?;
            let path = self.diff(s);
            fs::write(&path, binary::write_diff_binary(s, &h)).map_err(|e| Error::io(&path, e))?;
        }
        write_text(
            &self.himults(),
            &resolution_files::write_himults(&res.extract_himults()),
        )
    }

    /// Reads `Shape`, `Maxt` and every `hDiff.s`, checking that they agree.
    pub fn load_resolution(&self) -> Result<Resolution> {
        let shape = resolution_files::parse_shape(&read_text(&self.shape())?)?;
        let maxt = resolution_files::parse_maxt(&read_text(&self.maxt())?)?;
        if maxt.len() != shape.degrees.len() {
            return Err(Error::Format(format!(
                "Maxt lists {} stages but Shape lists {}",
                maxt.len(),
                shape.degrees.len()
            )));
        }
        let algebra = crate::milnor::MilnorAlgebra::new();
        let mut diffs = Vec::with_capacity(shape.degrees.len());
        for (s, degs) in shape.degrees.iter().enumerate() {
            let path = self.hdiff(s as u32);
            let h = resolution_files::parse_hdiff(&file_label(&path), &read_text(&path)?, &algebra)?;
            if &h.degrees != degs || h.maxt != maxt[s] {
                return Err(Error::Format(format!(
                    "hDiff.{s} disagrees with Shape or Maxt"
                )));
            }
            diffs.push(h.diffs);
        }
        Resolution::from_parts(shape.degrees, diffs, maxt)
    }

    pub fn write_maps_list(&self, names: &[String]) -> Result<()> {
        let mut text = names.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        write_text(&self.maps_list(), &text)
    }

    /// Reads a list of map names, one per line. `None` reads `maps`.
    pub fn read_maps_list(&self, path: Option<&Path>) -> Result<Vec<String>> {
        let default = self.maps_list();
        let path = path.unwrap_or(&default);
        Ok(read_text(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect())
    }

    pub fn save_cocycle_def(&self, def: &CochainDef) -> Result<()> {
        let algebra = crate::milnor::MilnorAlgebra::new();
        write_text(
            &self.cocycle_def(&def.name),
            &map_files::write_cochain_def(def, &algebra, Notation::Hex),
        )
    }

    pub fn load_cocycle_def(&self, name: &str) -> Result<CochainDef> {
        let path = self.cocycle_def(name);
        let algebra = crate::milnor::MilnorAlgebra::new();
        map_files::parse_cochain_def(&format!("{name}/Def"), &read_text(&path)?, &algebra)
    }

    /// Writes `Map` and `Map.aug`.
    pub fn save_map(&self, map: &ChainMap, res: &Resolution) -> Result<()> {
        let name = map.name();
        write_text(&self.map_file(name), &map_files::write_map(map, res.algebra()))?;
        write_text(&self.map_aug(name), &map_files::write_map_aug(&map.augment()))
    }

    /// Writes `brackets` and `brackets.sym` for a lifted cocycle.
    pub fn save_brackets(&self, map: &ChainMap) -> Result<()> {
        let name = map.name();
        write_text(
            &self.brackets(name),
            &map_files::write_brackets(&map.extract_brackets()),
        )?;
        write_text(
            &self.brackets_sym(name),
            &map_files::write_brackets_sym(&collect_brackets(map)?),
        )
    }

    pub fn load_map_aug(&self, name: &str) -> Result<Vec<AugEntry>> {
        map_files::parse_map_aug(&read_text(&self.map_aug(name))?)
    }

    pub fn load_brackets_sym(&self, name: &str) -> Result<Vec<BracketEntry>> {
        map_files::parse_brackets_sym(&read_text(&self.brackets_sym(name))?)
    }

    /// Reads `name/Map`, taking the bidegree from `name/Def` (or treating
    /// `Sq0` as the `V` map).
    pub fn load_map(&self, name: &str, res: &Resolution) -> Result<ChainMap> {
        let (kind, s0, t0) = if name == "Sq0" {
            (MapKind::Sq0, 0, 0)
        } else {
            let def = self.load_cocycle_def(name)?;
            (MapKind::Cocycle, def.s, def.t)
        };
        map_files::parse_map(
            &format!("{name}/Map"),
            &read_text(&self.map_file(name))?,
            res,
            name,
            kind,
            s0,
            t0,
        )
    }
}
