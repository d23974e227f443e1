mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use common::{corpus, grammar, sentence};
use spcore::format::{parse_encodings, parse_grammar};
use spcore::render::{parse_rendering, render_alignment, Orientation};
use spcore::*;

fn sorted_ids(a: &MultipleAlignment) -> Vec<PatternId> {
    let mut ids = a.old_pattern_ids();
    ids.sort_unstable();
    ids
}

fn words(symbols: &[Symbol]) -> String {
    symbols
        .iter()
        .map(|s| s.text().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Matched columns as `token cell cell ..`, cells named `N<pos>` for New
/// and `<pattern>.<pos>` for Old rows.
fn matched_columns(a: &MultipleAlignment) -> BTreeSet<String> {
    a.columns()
        .iter()
        .filter(|col| col.len() > 1)
        .map(|col| {
            let mut cells: Vec<String> = col
                .iter()
                .map(|&(r, p)| match a.rows()[r].pattern {
                    None => format!("N{p}"),
                    Some(id) => format!("{id}.{p}"),
                })
                .collect();
            cells.sort();
            format!("{} {}", a.symbol(col[0]).text(), cells.join(" "))
        })
        .collect()
}

fn flat(costs: &[(&str, f64)]) -> CostModel {
    let map: HashMap<TokenId, f64> = costs
        .iter()
        .map(|&(t, c)| (TokenId::intern(t).unwrap(), c))
        .collect();
    CostModel::with_costs(map, 8.0, 1.0)
}

#[test]
fn sentence_parse_uses_all_eight_patterns() {
    let g = grammar("parse_grammar.sp");
    let new = corpus("parse_new.txt");
    let model = build_cost_model(&g);
    let start = Instant::now();
    let found = build_alignments(&new, &g, &AlignParams::default(), &model);
    let took = start.elapsed();
    let best = &found[0];
    assert!(best.matches_all_new());
    assert_eq!(sorted_ids(best), (0..8).collect::<Vec<_>>());
    assert!(best.score() > 0.0);
    assert!(took < Duration::from_secs(5), "{took:?}");
}

#[test]
fn sentence_parse_connectors() {
    let g = grammar("parse_grammar.sp");
    let new = corpus("parse_new.txt");
    let model = build_cost_model(&g);
    let best = build_alignments(&new, &g, &AlignParams::default(), &model).remove(0);
    let expected: BTreeSet<String> = [
        "Num 6.1 7.0", "; 6.2 7.2", "NP 3.0 6.3", "D 0.0 3.2",
        "t 0.2 N0", "h 0.3 N1", "e 0.4 N2", "#D 0.5 3.3",
        "N 2.0 3.4", "Np 2.1 7.3", "N 1.0 2.2", "Nr 1.1 2.3",
        "a 1.3 N3", "p 1.4 N4", "p 1.5 N5", "l 1.6 N6", "e 1.7 N7",
        "#N 1.8 2.4", "s 2.5 N8", "#N 2.6 3.5", "#NP 3.6 6.4",
        "V 4.0 6.5", "Vp 4.1 7.4", "a 4.3 N9", "r 4.4 N10", "e 4.5 N11",
        "#V 4.6 6.6", "A 5.0 6.7", "s 5.2 N12", "w 5.3 N13", "e 5.4 N14",
        "e 5.5 N15", "t 5.6 N16", "#A 5.7 6.8",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    assert_eq!(matched_columns(&best), expected);
    assert_eq!(words(&derive_encoding(&best).symbols), "S PL 0a 17 6 11 21 #S");
    let text = render_alignment(&best, Orientation::Rows);
    let mut reparsed = parse_rendering(&text, Orientation::Rows);
    let mut original = best.columns().to_vec();
    reparsed.sort();
    original.sort();
    assert_eq!(reparsed, original);
}

#[test]
fn sentence_parse_round_trips_through_its_encoding() {
    let g = grammar("parse_grammar.sp");
    let new = corpus("parse_new.txt");
    let model = build_cost_model(&g);
    let best = build_alignments(&new, &g, &AlignParams::default(), &model).remove(0);
    let code = derive_encoding(&best).to_pattern().unwrap();
    let out = generate(&code, &g, &AlignParams::default(), &model);
    assert_eq!(out[0].text(), "t h e a p p l e s a r e s w e e t");
}

#[test]
fn plant_is_recognised_at_every_level() {
    let g = grammar("plant_grammar.sp");
    let new = corpus("plant_new.txt");
    assert_eq!(new.len(), 5);
    let model = build_cost_model(&g);
    let start = Instant::now();
    let found = build_alignments(&new, &g, &AlignParams::default(), &model);
    let took = start.elapsed();
    assert_eq!(sorted_ids(&found[0]), (0..6).collect::<Vec<_>>());
    assert!(took < Duration::from_secs(5), "{took:?}");
}

#[test]
fn sole_pattern_exact_match() {
    let g = parse_grammar("SPGRAMMAR 1\n1 | < %7 12 t h a t > | IIICCCCI\n").unwrap();
    // Alone, every token of the pattern is equally frequent and CD is 0.
    let model = build_cost_model(&grammar("that_grammar.sp"));
    let found = build_alignments(&[sentence("t h a t")], &g, &AlignParams::default(), &model);
    let best = &found[0];
    assert_eq!(best.rows().len(), 2);
    assert!(best.matches_all_new());
    assert_eq!(words(&derive_encoding(best).symbols), "< %7 12 >");
    let code = derive_encoding(best).to_pattern().unwrap();
    let out = generate(&code, &g, &AlignParams::default(), &model);
    assert_eq!(out[0].text(), "t h a t");
}

#[test]
fn cd_of_bare_new_is_zero() {
    let a = MultipleAlignment::from_new_patterns(&[sentence("a b c")]);
    let model = build_cost_model(&Grammar::new());
    assert_eq!(compression_difference(&a, &model), 0.0);
    assert!(derive_encoding(&a).is_empty());
}

#[test]
fn cd_by_hand_for_three_symbol_pattern() {
    let g = Grammar::from_patterns([Pattern::from_masked(0, "K a b", "ICC", 1).unwrap()]).unwrap();
    let model = flat(&[("K", 2.0), ("a", 3.0), ("b", 4.0)]);
    let found = build_alignments(&[sentence("a b")], &g, &AlignParams::default(), &model);
    assert_eq!(found[0].score(), 3.0 + 4.0 - 2.0);
    assert_eq!(compression_difference(&found[0], &model), found[0].score());
}

#[test]
fn girl_encoding_follows_the_unmatched_id_rule() {
    let g = grammar("that_grammar.sp");
    let model = build_cost_model(&g);
    let sentences = corpus("that_corpus.txt");
    let mut codes = Vec::new();
    for s in &sentences {
        let found = build_alignments(std::slice::from_ref(s), &g, &AlignParams::default(), &model);
        let best = &found[0];
        assert!(best.matches_all_new());
        let e1 = derive_encoding(best);
        assert_eq!(e1, derive_encoding(best));
        codes.push(words(&e1.symbols));
    }
    assert_eq!(codes, ["< %10 16 12 14 13 >", "< %10 16 12 15 13 >"]);
}

#[test]
fn girl_is_generated_from_its_encoding() {
    let g = grammar("that_grammar.sp");
    let model = build_cost_model(&g);
    for (code, text) in [
        ("< %10 16 12 15 13 >", "t h a t g i r l r u n s"),
        ("< %10 16 12 14 13 >", "t h a t b o y r u n s"),
    ] {
        let code = &parse_encodings(code).unwrap()[0];
        let out = generate(code, &g, &AlignParams::default(), &model);
        assert_eq!(out[0].text(), text);
    }
}

#[test]
fn abstract_pattern_generates_only_observed_sentences() {
    let g = grammar("that_grammar.sp");
    let model = build_cost_model(&g);
    let class = TokenId::intern("%9").unwrap();
    let mut produced = BTreeSet::new();
    for p in g.patterns().filter(|p| p.symbols()[1].token == class) {
        let code = format!("< %10 16 12 {} 13 >", p.symbols()[2].text());
        let code = &parse_encodings(&code).unwrap()[0];
        produced.insert(generate(code, &g, &AlignParams::default(), &model)[0].text());
    }
    let observed: BTreeSet<String> = corpus("that_corpus.txt").iter().map(|s| s.to_string()).collect();
    assert_eq!(produced, observed);
}

#[test]
fn probability_of_lone_alignment_is_one() {
    let g = Grammar::from_patterns([Pattern::from_masked(0, "P a", "IC", 1).unwrap()]).unwrap();
    let model = flat(&[("P", 2.0), ("a", 5.0)]);
    let found = build_alignments(&[sentence("a")], &g, &AlignParams::default(), &model);
    assert_eq!(found.len(), 1);
    assert_eq!(relative_probabilities(&found, &model), [1.0]);
}

#[test]
fn probabilities_follow_encoding_cost() {
    let g = Grammar::from_patterns([
        Pattern::from_masked(0, "P a", "IC", 1).unwrap(),
        Pattern::from_masked(1, "Q a", "IC", 1).unwrap(),
    ])
    .unwrap();
    for (q, expect) in [(2.0, [0.5, 0.5]), (3.0, [2.0 / 3.0, 1.0 / 3.0])] {
        let model = flat(&[("P", 2.0), ("Q", q), ("a", 5.0)]);
        let found = build_alignments(&[sentence("a")], &g, &AlignParams::default(), &model);
        assert_eq!(found.len(), 2);
        let p = relative_probabilities(&found, &model);
        for (got, want) in p.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{p:?}");
        }
    }
}

#[test]
fn no_positive_alignment_gives_empty_list() {
    let g = Grammar::from_patterns([Pattern::from_masked(0, "P x", "IC", 1).unwrap()]).unwrap();
    let model = build_cost_model(&g);
    assert!(build_alignments(&[sentence("a b")], &g, &AlignParams::default(), &model).is_empty());
    let code = parse_encodings("Z").unwrap().remove(0);
    assert!(generate(&code, &g, &AlignParams::default(), &model).is_empty());
}

#[test]
fn parse_is_deterministic() {
    let g = grammar("parse_grammar.sp");
    let new = corpus("parse_new.txt");
    let model = build_cost_model(&g);
    let a = build_alignments(&new, &g, &AlignParams::default(), &model);
    let b = build_alignments(&new, &g, &AlignParams::default(), &model);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.key(), y.key());
        assert_eq!(x.score().to_bits(), y.score().to_bits());
    }
}

#[test]
fn returned_alignments_are_consistent() {
    for (gf, nf) in [("parse_grammar.sp", "parse_new.txt"), ("plant_grammar.sp", "plant_new.txt")] {
        let g = grammar(gf);
        let model = build_cost_model(&g);
        let found = build_alignments(&corpus(nf), &g, &AlignParams::default(), &model);
        for w in found.windows(2) {
            assert!(w[0].rank_cmp(&w[1]).is_lt());
        }
        for a in &found {
            a.check_invariants().unwrap();
            assert!((a.score() - compression_difference(a, &model)).abs() < 1e-9);
            for o in [Orientation::Rows, Orientation::Columns] {
                let mut cols = parse_rendering(&render_alignment(a, o), o);
                let mut want = a.columns().to_vec();
                cols.sort();
                want.sort();
                assert_eq!(cols, want);
            }
        }
    }
}
