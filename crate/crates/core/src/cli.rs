//! The pipeline over a dataset directory, one function per subcommand.
//!
//! Every command reads what it needs from the layout and writes its results
//! back, so the stages can be run separately:
//!
//! ```text
//! resolve -> cocycles -> lift -> collect -> dosq0 -> brackets -> operators -> check
//! ```

use std::collections::BTreeSet;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::chainmaps::{lift_all, lift_sq0, ChainMap, Cocycle};
use crate::chart::{render_chart, ChartFormat, ChartSpec};
use crate::collectors::{
    collect_sq0, operator_report, products_from_aug, sort_products, BracketEntry, MapRef,
    OperatorKind,
};
use crate::error::Error;
use crate::io_formats::binary::read_diff_binary;
use crate::io_formats::report_files::{write_operator_report, write_products};
use crate::io_formats::resolution_files::{parse_himults, HDiff};
use crate::io_formats::{read_text, write_text, CochainDef, DatasetLayout};
use crate::resolution::Resolution;

/// Which cocycles a command works on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Selection {
    /// Every name in the dataset's `maps` file.
    All,
    /// Names read from a file, one per line.
    List(PathBuf),
    /// A single `s_g`.
    Single(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunConfig {
    pub root: PathBuf,
    /// Defaults to the range already in the dataset, where one exists.
    pub s_max: Option<u32>,
    pub t_max: Option<u32>,
    pub selection: Selection,
    pub format: ChartFormat,
}

impl RunConfig {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        RunConfig {
            root: root.into(),
            s_max: None,
            t_max: None,
            selection: Selection::All,
            format: ChartFormat::Tikz,
        }
    }

    pub fn with_range(mut self, s_max: u32, t_max: u32) -> Self {
        self.s_max = Some(s_max);
        self.t_max = Some(t_max);
        self
    }

    pub fn layout(&self) -> DatasetLayout {
        DatasetLayout::new(&self.root)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }
}

/// What a command did. Any violation makes the run a failure.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Outcome {
    pub messages: Vec<String>,
    pub violations: Vec<String>,
}

impl Outcome {
    fn note(&mut self, message: impl Into<String>) {
        self.messages.push(message.into());
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }
}

pub type CmdResult = Result<Outcome, CliError>;

fn load(config: &RunConfig) -> Result<Resolution, CliError> {
    let layout = config.layout();
    if !layout.has_resolution() {
        return Err(CliError::Usage(format!(
            "no resolution in {}; run resolve first",
            config.root.display()
        )));
    }
    Ok(layout.load_resolution()?)
}

/// Resolves through `s_max`, `t_max`, extending the dataset if one exists.
pub fn cmd_resolve(config: &RunConfig) -> CmdResult {
    let (Some(s_max), Some(t_max)) = (config.s_max, config.t_max) else {
        return Err(CliError::Usage("resolve needs --smax and --tmax".into()));
    };
    let layout = config.layout();
    let mut res = if layout.has_resolution() {
        layout.load_resolution()?
    } else {
        Resolution::new()
    };
    res.extend(s_max, t_max)?;
    layout.save_resolution(&res)?;
    let mut out = Outcome::default();
    out.note(format!(
        "resolved through s={s_max}, t={t_max}: {} generators",
        res.generators().count()
    ));
    Ok(out)
}

/// The generators `s_g` with `s <= s_max`, `t <= t_max`, in `(s, g)` order.
fn generators_in_range(res: &Resolution, s_max: u32, t_max: u32) -> Vec<(u32, u32)> {
    res.generators()
        .filter(|id| id.s <= s_max && id.t <= t_max)
        .map(|id| (id.s, id.g))
        .collect()
}

/// Writes `s_g/Def` for every generator in range, and the `maps` list.
pub fn cmd_cocycles(config: &RunConfig) -> CmdResult {
    let res = load(config)?;
    let layout = config.layout();
    let s_max = config.s_max.unwrap_or(res.max_s().unwrap_or(0));
    let t_max = config.t_max.unwrap_or(u32::MAX);
    let mut names = Vec::new();
    for (s, g) in generators_in_range(&res, s_max, t_max) {
        let c = Cocycle::dual_to(&res, s, g)?;
        layout.save_cocycle_def(&CochainDef::for_cocycle(&c))?;
        names.push(c.name);
    }
    layout.write_maps_list(&names)?;
    let mut out = Outcome::default();
    out.note(format!("{} cocycle definitions", names.len()));
    Ok(out)
}

fn selected_names(config: &RunConfig) -> Result<Vec<String>, CliError> {
    let layout = config.layout();
    let names = match &config.selection {
        Selection::All => layout.read_maps_list(None)?,
        Selection::List(path) => layout.read_maps_list(Some(path))?,
        Selection::Single(name) => vec![name.clone()],
    };
    for name in &names {
        if name.parse::<MapRef>().is_err() || name == "Sq0" {
            return Err(CliError::Usage(format!("'{name}' is not a cocycle name s_g")));
        }
    }
    Ok(names)
}

fn check_selection(res: &Resolution, names: &[String]) -> Result<(), CliError> {
    for name in names {
        if let Ok(MapRef::Generator { s, g }) = name.parse() {
            if g as usize >= res.generator_count(s) {
                return Err(CliError::Usage(format!("{name} is not a generator of the resolution")));
            }
        }
    }
    Ok(())
}

/// Filtration through which maps are lifted.
fn lift_limit(config: &RunConfig, res: &Resolution) -> u32 {
    let top = res.max_s().unwrap_or(0);
    config.s_max.map_or(top, |s| s.min(top))
}

/// Lifts the selected cocycles and writes `Map` and `Map.aug` for each.
pub fn cmd_lift(config: &RunConfig) -> CmdResult {
    let res = load(config)?;
    let layout = config.layout();
    let names = selected_names(config)?;
    check_selection(&res, &names)?;
    let cocycles = names
        .iter()
        .map(|n| layout.load_cocycle_def(n)?.to_cocycle())
        .collect::<Result<Vec<_>, _>>()?;
    let maps = lift_all(&res, &cocycles, lift_limit(config, &res))?;
    for map in &maps {
        layout.save_map(map, &res)?;
    }
    let mut out = Outcome::default();
    out.note(format!("lifted {} maps", maps.len()));
    Ok(out)
}

/// Lifts the squaring map and writes `Sq0/Map`, `Sq0/Map.aug` and `all.sq0`.
pub fn cmd_dosq0(config: &RunConfig) -> CmdResult {
    let res = load(config)?;
    let layout = config.layout();
    let v = lift_sq0(&res, lift_limit(config, &res))?;
    layout.save_map(&v, &res)?;
    let entries = collect_sq0(&v);
    write_text(&layout.all_sq0(), &write_products(&entries))?;
    let mut out = Outcome::default();
    out.note(format!("{} Sq0 entries", entries.len()));
    Ok(out)
}

/// Gathers every selected `Map.aug` into `all.products`.
pub fn cmd_collect(config: &RunConfig) -> CmdResult {
    let layout = config.layout();
    let names = selected_names(config)?;
    let mut entries = Vec::new();
    for name in &names {
        let r: MapRef = name.parse()?;
        // the unit map only restates x = x * 0_0
        if r == (MapRef::Generator { s: 0, g: 0 }) {
            continue;
        }
        let aug = layout.load_map_aug(name)?;
        entries.extend(products_from_aug(r, r.s(), aug));
    }
    sort_products(&mut entries);
    write_text(&layout.all_products(), &write_products(&entries))?;
    let mut out = Outcome::default();
    out.note(format!("{} product entries from {} maps", entries.len(), names.len()));
    Ok(out)
}

fn load_maps(layout: &DatasetLayout, res: &Resolution, names: &[String]) -> Result<Vec<ChainMap>, Error> {
    names.par_iter().map(|n| layout.load_map(n, res)).collect()
}

/// Writes `brackets` and `brackets.sym` for each selected map.
pub fn cmd_brackets(config: &RunConfig) -> CmdResult {
    let res = load(config)?;
    let layout = config.layout();
    let names = selected_names(config)?;
    let maps = load_maps(&layout, &res, &names)?;
    let mut total = 0;
    for map in &maps {
        layout.save_brackets(map)?;
        total += map.extract_brackets().len();
    }
    let mut out = Outcome::default();
    out.note(format!("{total} bracket entries"));
    Ok(out)
}

/// Writes `P.txt`, `P2.txt`, `P4.txt` and `MM.txt` from `all.products` and
/// the `brackets.sym` files.
pub fn cmd_operators(config: &RunConfig) -> CmdResult {
    let layout = config.layout();
    let names = selected_names(config)?;
    let path = layout.all_products();
    let products = crate::io_formats::report_files::parse_products("all.products", &read_text(&path)?)?;
    let mut brackets: Vec<BracketEntry> = Vec::new();
    for name in &names {
        brackets.extend(layout.load_brackets_sym(name)?);
    }
    let mut out = Outcome::default();
    for kind in OperatorKind::ALL {
        let report = operator_report(kind, &products, &brackets);
        write_text(&layout.operator(kind), &write_operator_report(&report))?;
        out.note(format!("{}: {} values", kind.file_name(), report.values.len()));
    }
    Ok(out)
}

/// Draws the box `0 <= s <= s_max`, `0 <= n <= t_max - s_max` as
/// `chart.tex` or `chart.svg`.
pub fn cmd_chart(config: &RunConfig) -> CmdResult {
    let res = load(config)?;
    let layout = config.layout();
    let s_max = config.s_max.unwrap_or(res.max_s().unwrap_or(0));
    let t_max = match config.t_max {
        Some(t) => t,
        None => (0..=s_max).filter_map(|s| res.maxt(s)).min().unwrap_or(0),
    };
    let himults = parse_himults(&read_text(&layout.himults())?)?;
    let n_max = t_max.saturating_sub(s_max);
    let spec = ChartSpec::new(0..=s_max, 0..=n_max).with_format(config.format);
    let doc = render_chart(&res, &himults, &spec)?;
    let file = match config.format {
        ChartFormat::Tikz => "chart.tex",
        ChartFormat::Svg => "chart.svg",
    };
    write_text(&layout.root().join(file), &doc)?;
    let mut out = Outcome::default();
    out.note(format!("wrote {file}"));
    Ok(out)
}

/// Checks `d^2 = 0`, exactness, minimality, agreement of the binary and text
/// differentials, and `dm = md` plus completeness of every listed map.
pub fn cmd_check(config: &RunConfig) -> CmdResult {
    let res = load(config)?;
    let layout = config.layout();
    let mut out = Outcome::default();
    for v in res.check_d2() {
        out.violations.push(format!("d^2 != 0 on {}_{}", v.s, v.g));
    }
    for v in res.check_exactness()? {
        out.violations.push(format!("not exact at s={} t={}", v.s, v.t));
    }
    if !res.is_minimal() {
        out.violations.push("resolution is not minimal".into());
    }
    for s in 0..res.maxt_table().len() as u32 {
        let path = layout.diff(s);
        let Ok(bytes) = std::fs::read(&path) else { continue };
        match read_diff_binary(&format!("Diff.{s}"), &bytes) {
            Ok((s2, h)) if s2 == s && h == HDiff::of(&res, s) => {}
            Ok(_) => out.violations.push(format!("Diff.{s} disagrees with hDiff.{s}")),
            Err(e) => out.violations.push(format!("Diff.{s}: {e}")),
        }
    }
    let mut names: BTreeSet<String> = BTreeSet::new();
    let explicit = !matches!(config.selection, Selection::All);
    if layout.maps_list().exists() || explicit {
        let selected = selected_names(config)?;
        check_selection(&res, &selected)?;
        names.extend(selected);
    }
    if layout.map_file("Sq0").exists() {
        names.insert("Sq0".into());
    }
    let limit = lift_limit(config, &res);
    let mut checked = 0;
    for name in &names {
        if !layout.map_file(name).exists() {
            if explicit && name != "Sq0" {
                out.violations.push(format!("{name}: not lifted"));
            }
            continue;
        }
        let map = match layout.load_map(name, &res) {
            Ok(m) => m,
            Err(e) => {
                out.violations.push(format!("{name}: {e}"));
                continue;
            }
        };
        checked += 1;
        for v in map.verify(&res) {
            out.violations.push(format!("{name}: dm != md at {}_{}: {}", v.s, v.g, v.message));
        }
        for (s, g) in map.gaps(&res, limit) {
            out.violations.push(format!("{name}: no entry for {s}_{g}"));
        }
    }
    out.note(format!(
        "checked {} generators and {checked} maps: {} violations",
        res.generators().count(),
        out.violations.len()
    ));
    Ok(out)
}

/// resolve, cocycles, lift, collect, dosq0, brackets, operators and check
/// in order.
pub fn cmd_pipeline(config: &RunConfig) -> CmdResult {
    let mut out = Outcome::default();
    let steps: [fn(&RunConfig) -> CmdResult; 8] = [
        cmd_resolve,
        cmd_cocycles,
        cmd_lift,
        cmd_collect,
        cmd_dosq0,
        cmd_brackets,
        cmd_operators,
        cmd_check,
    ];
    for step in steps {
        let o = step(config)?;
        out.messages.extend(o.messages);
        out.violations.extend(o.violations);
    }
    Ok(out)
}
