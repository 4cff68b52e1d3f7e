mod common;

use proptest::prelude::*;
use steenrod_ext::io_formats::binary::{read_diff_binary, write_diff_binary};
use steenrod_ext::io_formats::map_files::{parse_brackets, parse_map_aug};
use steenrod_ext::io_formats::report_files::parse_products;
use steenrod_ext::io_formats::resolution_files::{parse_hdiff, parse_shape, write_hdiff};
use steenrod_ext::io_formats::HDiff;
use steenrod_ext::milnor::MilnorAlgebra;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn every_format_round_trips(x in common::arb_instance()) {
        let algebra = MilnorAlgebra::new();
        if let Err(e) = common::check_round_trips(&x, &algebra) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn truncated_binary_is_rejected(h in common::arb_hdiff(), cut in 1usize..64) {
        let bytes = write_diff_binary(1, &h);
        let cut = cut.min(bytes.len());
        prop_assert!(read_diff_binary("Diff", &bytes[..bytes.len() - cut]).is_err());
    }

    #[test]
    fn hdiff_text_with_a_term_dropped_is_rejected(h in common::arb_hdiff()) {
        let algebra = MilnorAlgebra::new();
        let text = write_hdiff(&h, &algebra);
        // removing the last term line leaves a count that no longer matches
        let has_terms = h.diffs.iter().any(|d| !d.terms().is_empty());
        if has_terms {
            let lines: Vec<&str> = text.lines().collect();
            let last = lines.iter().rposition(|l| l.ends_with('.')).unwrap();
            let damaged: String = lines
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != last)
                .map(|(_, l)| format!("{l}\n"))
                .collect();
            let parsed = parse_hdiff("hDiff", &damaged, &algebra);
            prop_assert!(parsed.is_err() || parsed.unwrap() != h);
        }
    }
}

#[test]
fn malformed_lines_are_errors() {
    let algebra = MilnorAlgebra::new();
    assert!(parse_hdiff("h", "1 5\n1\n\n1\n0 1 1 i(2).\n", &algebra).is_err());
    assert!(parse_hdiff("h", "2 5\n1\n\n1\n0 1 1 i(1).\n", &algebra).is_err());
    assert!(parse_shape("1\n1 2\n0\n2 1\n").is_err());
    assert!(parse_brackets("2 8 12 0\n").is_err());
    assert!(parse_map_aug("2 4\n").is_err());
    assert!(parse_products("p", "  7   13  (  0    0     F3)  7_13").is_err());
    assert!(parse_products("p", "  7   13  (  0    0     F2)  7-13").is_err());
}

#[test]
fn empty_files() {
    let algebra = MilnorAlgebra::new();
    let empty = HDiff { maxt: None, degrees: vec![], diffs: vec![] };
    assert_eq!(parse_hdiff("h", &write_hdiff(&empty, &algebra), &algebra).unwrap(), empty);
    assert!(parse_brackets("").unwrap().is_empty());
    assert!(parse_products("p", "").unwrap().is_empty());
}
