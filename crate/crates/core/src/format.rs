//! Grammar and corpus files.
//!
//! A grammar file starts with the line `SPGRAMMAR 1` and holds one pattern
//! per line:
//!
//! ```text
//! <freq> | <tok> <tok> ... | <rolemask>
//! ```
//!
//! where the role mask has one `I` (identification) or `C` (contents) per
//! token. Lines starting with `#` and blank lines are ignored. Patterns get
//! ids in line order, starting at 0.
//!
//! A corpus file holds one New pattern per line, whitespace separated, with
//! every symbol in the contents role.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pattern::{Grammar, Origin, Pattern};
use crate::symbol::{Role, Symbol};

pub const GRAMMAR_HEADER: &str = "SPGRAMMAR 1";

fn err(line: usize, field: &'static str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        field,
        message: message.into(),
    }
}

pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, GRAMMAR_HEADER)) => {}
        Some((n, other)) => return Err(err(n, "header", format!("expected {GRAMMAR_HEADER:?}, found {other:?}"))),
        None => return Err(err(1, "header", format!("missing {GRAMMAR_HEADER:?}"))),
    }
    let mut grammar = Grammar::new();
    for (id, (n, line)) in lines.enumerate() {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err(n, "line", format!("expected 3 '|'-separated fields, found {}", fields.len())));
        }
        let freq: u64 = fields[0]
            .parse()
            .map_err(|_| err(n, "freq", format!("{:?} is not a positive integer", fields[0])))?;
        if freq == 0 {
            return Err(err(n, "freq", "frequency must be at least 1"));
        }
        let tokens: Vec<&str> = fields[1].split_whitespace().collect();
        if tokens.is_empty() {
            return Err(err(n, "tokens", "pattern has no symbols"));
        }
        let mask: Vec<char> = fields[2].chars().collect();
        if mask.len() != tokens.len() {
            return Err(err(
                n,
                "rolemask",
                format!("{} roles for {} tokens", mask.len(), tokens.len()),
            ));
        }
        let symbols = tokens
            .iter()
            .zip(&mask)
            .map(|(t, &r)| {
                let role =
                    Role::from_mask_char(r).ok_or_else(|| err(n, "rolemask", format!("bad role {r:?}")))?;
                Symbol::new(t, role).map_err(|e| err(n, "tokens", e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let pattern = Pattern::new(id as u32, symbols, freq, Origin::Old)
            .map_err(|e| err(n, "pattern", e.to_string()))?;
        grammar.insert(pattern)?;
    }
    Ok(grammar)
}

/// Writes patterns in id order. Ids are not stored; a reload numbers the
/// patterns from 0.
pub fn write_grammar(grammar: &Grammar) -> String {
    let mut out = String::new();
    out.push_str(GRAMMAR_HEADER);
    out.push('\n');
    for p in grammar.patterns() {
        let _ = writeln!(out, "{} | {} | {}", p.frequency(), p, p.role_mask());
    }
    out
}

pub fn load_grammar(path: impl AsRef<Path>) -> Result<Grammar> {
    parse_grammar(&fs::read_to_string(path)?)
}

pub fn save_grammar(grammar: &Grammar, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_grammar(grammar))?;
    Ok(())
}

/// Renumbers patterns 0.. in id order, as a save and reload would.
pub fn renumbered(grammar: &Grammar) -> Grammar {
    let mut out = Grammar::new();
    for (i, p) in grammar.patterns().enumerate() {
        let mut q = Pattern::new(i as u32, p.symbols().to_vec(), p.frequency(), Origin::Old)
            .expect("pattern already valid");
        q.origin = Origin::Old;
        out.insert(q).expect("fresh ids");
    }
    out
}

/// One New pattern per nonblank line, all symbols in the contents role.
pub fn parse_corpus(text: &str) -> Result<Vec<Pattern>> {
    parse_lines(text, Role::Content, Origin::New)
}

/// Like [`parse_corpus`] but every symbol is an ID symbol.
pub fn parse_encodings(text: &str) -> Result<Vec<Pattern>> {
    parse_lines(text, Role::Id, Origin::New)
}

fn parse_lines(text: &str, role: Role, origin: Origin) -> Result<Vec<Pattern>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .enumerate()
        .map(|(id, (n, l))| {
            Pattern::from_text(id as u32, l, role, origin)
                .map_err(|e| err(n + 1, "tokens", e.to_string()))
        })
        .collect()
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Pattern>> {
    parse_corpus(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn masked_line() {
        let g = parse_grammar("SPGRAMMAR 1\n1 | < %7 12 t h a t > | IIICCCCI\n").unwrap();
        let p = g.get(0).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.role_mask(), "IIICCCCI");
        assert_eq!(p.to_string(), "< %7 12 t h a t >");
    }

    #[test]
    fn errors_name_line_and_field() {
        let e = parse_grammar("SPGRAMMAR 1\n0 | a | C\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, field: "freq", .. }), "{e}");
        let e = parse_grammar("SPGRAMMAR 1\n# c\n\n2 | a b | C\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, field: "rolemask", .. }), "{e}");
        let e = parse_grammar("SPGRAMMAR 1\n2 | a b | CX\n").unwrap_err();
        assert!(matches!(e, Error::Parse { field: "rolemask", .. }));
        let e = parse_grammar("1 | a | C\n").unwrap_err();
        assert!(matches!(e, Error::Parse { field: "header", .. }));
        let e = parse_grammar("SPGRAMMAR 1\n1 | a\n").unwrap_err();
        assert!(matches!(e, Error::Parse { field: "line", .. }));
        let e = parse_grammar("SPGRAMMAR 1\nx | a | C\n").unwrap_err();
        assert!(matches!(e, Error::Parse { field: "freq", .. }));
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = parse_grammar("# grammar\nSPGRAMMAR 1\n\n# first\n3 | a b | CI\n").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.get(0).unwrap().frequency(), 3);
    }

    #[test]
    fn corpus_lines() {
        let c = parse_corpus("t h a t\n\n b o y \n").unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().flat_map(|p| p.symbols()).all(|s| s.role == Role::Content));
    }

    proptest! {
        #[test]
        fn save_load_round_trip(
            pats in prop::collection::vec(("[a-z%<>#0-9]{1,4}( [a-z%<>#0-9]{1,4}){0,6}", "[IC]{7}", 1u64..50), 0..8)
        ) {
            let mut g = Grammar::new();
            for (i, (text, mask, freq)) in pats.iter().enumerate() {
                let n = text.split_whitespace().count();
                g.insert(Pattern::from_masked(i as u32, text, &mask[..n], *freq).unwrap()).unwrap();
            }
            let text = write_grammar(&g);
            let back = parse_grammar(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(write_grammar(&back), text);
        }
    }
}
