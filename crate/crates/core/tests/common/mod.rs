//! Shared helpers for the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spcore::format::{load_corpus, load_grammar};
use spcore::{Grammar, Origin, Pattern, Role};

/// Proptest settings for integration tests, which have no source file for
/// the regression store to sit beside.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases: n,
        failure_persistence: None,
        ..Default::default()
    }
}

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn grammar(name: &str) -> Grammar {
    load_grammar(fixture(name)).unwrap()
}

pub fn corpus(name: &str) -> Vec<Pattern> {
    load_corpus(fixture(name)).unwrap()
}

pub fn sentence(text: &str) -> Pattern {
    Pattern::from_text(0, text, Role::Content, Origin::New).unwrap()
}

const LETTERS: [&str; 16] = [
    "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p",
];

fn letters(rng: &mut ChaCha8Rng, n: usize, alphabet: usize) -> Vec<&'static str> {
    (0..n).map(|_| LETTERS[rng.gen_range(0..alphabet)]).collect()
}

/// A small random instance: a grammar of at most 6 patterns of at most 8
/// symbols and a New pattern of at most 12 symbols. Most instances are a
/// two-level grammar of classes of words and one or two sentence frames,
/// with New a sentence of it, sometimes damaged; the rest are plain random
/// letter patterns.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (Grammar, Pattern) {
    let mut pats: Vec<(String, String)> = Vec::new();
    let new: Vec<&str>;
    if rng.gen_bool(0.25) {
        for _ in 0..rng.gen_range(1..=5) {
            let n = rng.gen_range(2..=6);
            pats.push((letters(rng, n, 8).join(" "), "C".repeat(n)));
        }
        let n = rng.gen_range(3..=10);
        new = letters(rng, n, 8);
    } else {
        let classes = ["N", "V", "A"];
        let n_classes = rng.gen_range(2..=3);
        let mut words: Vec<Vec<Vec<&str>>> = Vec::new();
        for (k, class) in classes.iter().take(n_classes).enumerate() {
            let mut members = Vec::new();
            for m in 0..rng.gen_range(1..=2) {
                if pats.len() >= 4 {
                    break;
                }
                let n = rng.gen_range(1..=3);
                let w = letters(rng, n, 16);
                let d = format!("{}{k}{m}", class.to_lowercase());
                pats.push((
                    format!("{class} {d} {} #{class}", w.join(" ")),
                    format!("II{}I", "C".repeat(w.len())),
                ));
                members.push(w);
            }
            words.push(members);
        }
        let used: Vec<usize> = (0..words.len()).filter(|&k| !words[k].is_empty()).collect();
        let mut frame = vec!["S".to_string()];
        let mut order = used.clone();
        order.shuffle(rng);
        order.truncate(2.min(order.len()));
        for &k in &order {
            frame.push(classes[k].to_string());
            frame.push(format!("#{}", classes[k]));
        }
        frame.push("#S".to_string());
        pats.push((frame.join(" "), "I".repeat(frame.len())));
        let mut s: Vec<&str> = order
            .iter()
            .flat_map(|&k| words[k].choose(rng).unwrap().clone())
            .collect();
        match rng.gen_range(0..4) {
            0 if s.len() > 1 => {
                let i = rng.gen_range(0..s.len());
                s.remove(i);
            }
            1 => {
                let i = rng.gen_range(0..s.len());
                s[i] = LETTERS[rng.gen_range(0..16)];
            }
            2 => {
                let i = rng.gen_range(0..=s.len());
                s.insert(i, LETTERS[rng.gen_range(0..16)]);
            }
            _ => {}
        }
        new = s;
    }
    let g = Grammar::from_patterns(
        pats.iter()
            .enumerate()
            .map(|(i, (t, m))| Pattern::from_masked(i as u32, t, m, rng.gen_range(1..=3)).unwrap()),
    )
    .unwrap();
    (g, sentence(&new.join(" ")))
}
