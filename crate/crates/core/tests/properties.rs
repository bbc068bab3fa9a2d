mod common;

use proptest::prelude::*;

use common::*;
use tripoem_core::design::{
    admissible_order, construct_sts, find_resolution, is_fano, relabel, verify_sts, SearchBudget,
};
use tripoem_core::graph::{export_graph, from_decomposition, to_decomposition, ExportFormat};
use tripoem_core::interchange::{default_labels, SystemDocument};
use tripoem_core::poem::{
    normalize, parse_poem, scaffold, validate_poem, KeywordMap, Rule, Variant,
};

fn admissible() -> impl Strategy<Value = u32> {
    (3u32..=99).prop_filter("admissible", |&u| admissible_order(u))
}

fn permutation(u: u32) -> impl Strategy<Value = Vec<u32>> {
    Just((0..u).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_systems_verify(u in admissible(), seed in any::<u64>()) {
        let s = construct_sts(u, seed).unwrap();
        prop_assert!(verify_sts(&s).is_valid());
        // replication cross-check, independent of the pair check
        let r = (u - 1) / 2;
        prop_assert!(s.replication().iter().all(|&x| x == r));
        prop_assert!(s.pair_coverage().all_ones());
    }

    #[test]
    fn decomposition_round_trip(u in admissible(), seed in any::<u64>()) {
        let s = construct_sts(u, seed).unwrap();
        let d = to_decomposition(&s, &default_labels(u)).unwrap();
        let owners = d.edge_owners().unwrap();
        prop_assert_eq!(owners.len(), (u * (u - 1) / 2) as usize);
        prop_assert_eq!(from_decomposition(&d).unwrap(), s);
    }

    #[test]
    fn interchange_round_trip(u in admissible(), seed in any::<u64>()) {
        let s = construct_sts(u, seed).unwrap();
        let json = SystemDocument::from_system(&s, &default_labels(u)).to_json();
        prop_assert_eq!(SystemDocument::parse(&json).unwrap().system, s);
    }

    #[test]
    fn keyword_matching_ignores_case_and_punctuation(
        word in "[a-z]{1,8}",
        upper in any::<bool>(),
        trail in prop::sample::select(vec!["", ",", ".", "!", "?", "…", ";", ":", "*", "”"]),
    ) {
        let shown = if upper { word.to_uppercase() } else { word.clone() };
        prop_assert_eq!(normalize(&format!("{shown}{trail}")), word);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relabeling_preserves_structure(perm in permutation(7)) {
        let base = system_from_table(&TABLE_1_POINTS, &TABLE_1);
        let s = relabel(&base, &perm);
        prop_assert!(verify_sts(&s).is_valid());
        prop_assert_eq!(is_fano(&s), Ok(true));
        let outcome = find_resolution(&s, SearchBudget::default()).unwrap();
        prop_assert!(outcome.resolution().is_none());
    }

    #[test]
    fn relabeling_preserves_resolvability(perm in permutation(9)) {
        let base = system_from_table(&TABLE_2_POINTS, &TABLE_2);
        let s = relabel(&base, &perm);
        prop_assert!(verify_sts(&s).is_valid());
        prop_assert_eq!(is_fano(&s), Ok(false));
        prop_assert!(find_resolution(&s, SearchBudget::default()).unwrap().resolution().is_some());
    }

    #[test]
    fn relabeling_preserves_nonresolvability_of_bose_fifteen(perm in permutation(15)) {
        let s = relabel(&construct_sts(15, 0).unwrap(), &perm);
        let outcome = find_resolution(&s, SearchBudget::default()).unwrap();
        prop_assert!(outcome.resolution().is_none());
    }

    #[test]
    fn export_is_deterministic(u in admissible(), seed in any::<u64>()) {
        let s = construct_sts(u, seed).unwrap();
        for format in [ExportFormat::Dot, ExportFormat::Tikz, ExportFormat::Json] {
            let d = to_decomposition(&s, &default_labels(u)).unwrap();
            let a = export_graph(&d, format).unwrap();
            let b = export_graph(&to_decomposition(&s.clone(), &default_labels(u)).unwrap(), format).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn scaffold_round_trips(
        n in prop::sample::select(vec![7usize, 9, 13, 15]),
        resolvable in any::<bool>(),
        seed in 0u64..1000,
    ) {
        let words: Vec<String> = (0..n).map(|i| format!("Kw{i}")).collect();
        let keywords = KeywordMap::new(&words).unwrap();
        let variant = if resolvable && n % 6 == 3 { Variant::ResolvablePure } else { Variant::Pure };
        let poem = scaffold(&keywords, variant, seed).unwrap();
        let back = parse_poem(&poem.to_text()).unwrap();
        prop_assert!(validate_poem(&back).passed());
    }

    /// Rule (b) findings and verify_sts on the derived system agree, and
    /// every mutation is caught.
    #[test]
    fn mutations_are_caught(
        which in 0usize..5,
        pick in any::<prop::sample::Index>(),
    ) {
        let poem = corpus(CORPUS[which]);
        let mutations = all_mutations(&poem);
        let m = mutations[pick.index(mutations.len())];
        let report = validate_poem(&m.apply(&poem));
        prop_assert!(report.errors().count() >= 1);
        let structural = report.errors().any(|f| f.rule.is_structural());
        prop_assert_eq!(structural, !verify_sts(report.derived_system()).is_valid());
    }

    #[test]
    fn stsseven_poems_are_fano_at_line_level(seed in 0u64..1000) {
        let words = ["a", "b", "c", "d", "e", "f", "g"];
        let poem = scaffold(&KeywordMap::new(&words).unwrap(), Variant::Pure, seed).unwrap();
        let sets: Vec<Vec<u32>> = poem.lines().map(|(_, _, l)| l.keyword_set()).collect();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                prop_assert_eq!(a.iter().filter(|p| b.contains(p)).count(), 1);
            }
        }
    }
}

#[test]
fn rule_b_agrees_on_corpus() {
    for name in CORPUS {
        let report = validate_poem(&corpus(name));
        let structural = report.findings.iter().any(|f| f.rule.is_structural());
        assert_eq!(structural, !verify_sts(report.derived_system()).is_valid());
        assert!(!report.has_error(Rule::PairCoverage));
    }
}
