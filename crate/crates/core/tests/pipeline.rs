mod common;

use std::fs;
use std::process::Command;

use steenrod_ext::cli::{
    cmd_brackets, cmd_chart, cmd_check, cmd_cocycles, cmd_collect, cmd_dosq0, cmd_lift, cmd_operators, cmd_resolve,
    CliError, RunConfig, Selection,
};
use steenrod_ext::chart::ChartFormat;
use steenrod_ext::io_formats::{read_text, DatasetLayout};

fn resolved(s_max: u32, t_max: u32) -> (tempfile::TempDir, RunConfig) {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig::new(dir.path()).with_range(s_max, t_max);
    cmd_resolve(&config).unwrap();
    (dir, config)
}

#[test]
fn fresh_resolve_writes_published_hdiff_entry() {
    let (dir, _) = resolved(2, 9);
    let layout = DatasetLayout::new(dir.path());
    let text = read_text(&layout.hdiff(2)).unwrap();
    assert!(text.contains("\n9\n\n3\n0 8 4 i(8)(2,2).\n1 7 4 i(7)(4,1)(0,0,1).\n3 1 1 i(1).\n"));
    for f in ["Def", "MAXFILT", "Shape", "Maxt", "himults", "hDiff.0", "Diff.2"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(read_text(&layout.maxfilt()).unwrap(), "2\n");
}

#[test]
fn resolve_with_zero_filtration_has_only_c0() {
    let (dir, _) = resolved(0, 10);
    assert_eq!(read_text(&dir.path().join("Shape")).unwrap(), "0\n1\n0\n");
    assert!(!dir.path().join("hDiff.1").exists());
}

#[test]
fn rerun_extends_without_changing_existing_entries() {
    let (dir, config) = resolved(4, 14);
    let layout = DatasetLayout::new(dir.path());
    let before: Vec<String> = (0..=4).map(|s| read_text(&layout.hdiff(s)).unwrap()).collect();
    cmd_resolve(&config.clone().with_range(4, 22)).unwrap();
    for (s, old) in before.iter().enumerate() {
        let new = read_text(&layout.hdiff(s as u32)).unwrap();
        // everything after the header line is kept as a prefix
        let body = |t: &str| t.split_once('\n').unwrap().1.to_string();
        assert!(body(&new).starts_with(&body(old)), "hDiff.{s}");
    }
    let fresh = resolved(4, 22).0;
    assert_eq!(common::read_tree(dir.path()), common::read_tree(fresh.path()));
}

#[test]
fn cocycles_cover_the_range_in_order() {
    let (dir, config) = resolved(3, 12);
    cmd_cocycles(&config.clone().with_range(1, 8)).unwrap();
    let maps = read_text(&dir.path().join("maps")).unwrap();
    assert_eq!(maps, "0_0\n1_0\n1_1\n1_2\n1_3\n");
    let def = read_text(&dir.path().join("1_2/Def")).unwrap();
    assert_eq!(def, " 1 4 F2 F2 1_2 1\n\n2\n\n1\n0 0 1 x80\n");
    let empty = RunConfig { s_max: Some(1), t_max: Some(0), ..config.clone() };
    cmd_cocycles(&empty).unwrap();
    assert_eq!(read_text(&dir.path().join("maps")).unwrap(), "0_0\n");
}

#[test]
fn collect_reproduces_product_paragraphs() {
    let (dir, config) = resolved(8, 45);
    for step in [cmd_cocycles, cmd_lift, cmd_collect] {
        step(&config).unwrap();
    }
    let products = read_text(&dir.path().join("all.products")).unwrap();
    assert!(products.contains(
        "  7   14  (  0    0     F2)  7_14\n  7   14  (  1    0     F2)  6_15\n  7   14  (  1    3     F2)  6_10\n"
    ));
    assert!(products.contains("  7   13  (  6   10     F2)  1_3\n"));
}

#[test]
fn full_stage_sequence_checks_clean() {
    let (dir, config) = resolved(6, 30);
    for step in [cmd_cocycles, cmd_lift, cmd_collect, cmd_dosq0, cmd_brackets, cmd_operators, cmd_chart] {
        let out = step(&config).unwrap();
        assert!(out.violations.is_empty());
    }
    let out = cmd_check(&config).unwrap();
    assert_eq!(out.exit_code(), 0, "{:?}", out.violations);
    let layout = DatasetLayout::new(dir.path());
    assert!(read_text(&layout.map_aug("1_0")).unwrap().contains("2 4 3\n"));
    let sq0_aug = read_text(&layout.map_aug("Sq0")).unwrap();
    for line in ["2 1 0\n", "2 3 1\n", "2 5 2\n"] {
        assert!(sq0_aug.contains(line), "{line}");
    }
    let raw = read_text(&layout.brackets("1_0")).unwrap();
    assert!(raw.contains("2 8 16 0\n"));
    let sym = read_text(&layout.brackets_sym("1_0")).unwrap();
    assert!(sym.contains("2_8 in < h4, 0, 1_0 >\n"));
    assert!(read_text(&dir.path().join("P.txt")).unwrap().starts_with("P x = < h3, h0^4, x >\n"));
    assert!(read_text(&dir.path().join("chart.tex")).unwrap().contains("\\begin{tikzpicture}"));
    let svg = RunConfig { format: ChartFormat::Svg, ..config };
    cmd_chart(&svg).unwrap();
    assert!(dir.path().join("chart.svg").exists());
}

#[test]
fn check_names_a_corrupted_map() {
    let (dir, config) = resolved(5, 20);
    for step in [cmd_cocycles, cmd_lift] {
        step(&config).unwrap();
    }
    let path = dir.path().join("2_1/Map");
    let text = fs::read_to_string(&path).unwrap();
    // flip one bit of a Milnor exponent: i(0) becomes i(1)
    let damaged = text.replacen("i(0).", "i(1).", 1);
    assert_ne!(damaged, text);
    fs::write(&path, damaged).unwrap();
    let out = cmd_check(&config).unwrap();
    assert_eq!(out.exit_code(), 1);
    assert!(out.violations.iter().all(|v| v.starts_with("2_1")), "{:?}", out.violations);
}

#[test]
fn check_finds_a_wrong_but_well_formed_image() {
    let (dir, config) = resolved(4, 16);
    for step in [cmd_cocycles, cmd_lift] {
        step(&config).unwrap();
    }
    // 1_0 maps 2_0* to 1_0*: replace that unit coefficient by zero
    let path = dir.path().join("1_0/Map");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("2 0\n1\n0 0 1 i(0).\n"), "{text}");
    fs::write(&path, text.replacen("2 0\n1\n0 0 1 i(0).\n", "2 0 0\n", 1)).unwrap();
    let out = cmd_check(&config).unwrap();
    assert!(out.violations.iter().any(|v| v.starts_with("1_0: dm != md")), "{:?}", out.violations);
}

#[test]
fn check_detects_a_damaged_differential() {
    let (dir, config) = resolved(3, 12);
    let path = dir.path().join("hDiff.2");
    let text = fs::read_to_string(&path).unwrap();
    // drop Sq(0,0,1) from the coefficient of 1_1* in d(2_4*)
    let damaged = text.replacen("1 7 4 i(7)(4,1)(0,0,1).", "1 7 4 i(7)(4,1).", 1);
    assert_ne!(damaged, text);
    fs::write(&path, damaged).unwrap();
    let out = cmd_check(&config).unwrap();
    assert_eq!(out.exit_code(), 1);
    assert!(out.violations.iter().any(|v| v == "d^2 != 0 on 2_4"), "{:?}", out.violations);
    assert!(out.violations.iter().any(|v| v.starts_with("Diff.2 disagrees")));
}

#[test]
fn selection_must_name_generators() {
    let (_dir, config) = resolved(2, 9);
    cmd_cocycles(&config).unwrap();
    let bad = RunConfig { selection: Selection::Single("5_0".into()), ..config.clone() };
    assert!(matches!(cmd_lift(&bad), Err(CliError::Usage(_))));
    let sq = RunConfig { selection: Selection::Single("Sq0".into()), ..config };
    assert!(matches!(cmd_lift(&sq), Err(CliError::Usage(_))));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ext");
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_str().unwrap();
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(run(&["--root", root, "pipeline", "--smax", "4", "--tmax", "14", "--jobs", "1"]), Some(0));
    assert_eq!(run(&["--root", root, "check"]), Some(0));
    assert_eq!(run(&["--root", root, "check", "--map", "1_1"]), Some(0));
    assert_eq!(run(&["frobnicate"]), Some(2));
    assert_eq!(run(&["--root", root, "resolve"]), Some(2));
    assert_eq!(run(&["--root", root, "chart", "--format", "pdf"]), Some(2));
    fs::write(dir.path().join("1_1/Map"), "1 0\n1\n0 0 1 i(0).\n1 1\n").unwrap();
    assert_eq!(run(&["--root", root, "check", "--map", "1_1"]), Some(1));
}
