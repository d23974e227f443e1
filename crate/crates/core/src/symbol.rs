//! Interned symbols.
//!
//! A symbol is an atomic mark that can only be compared for equality with
//! another symbol. Tokens are interned once per process into a dense index;
//! the identification/contents role travels with each occurrence, not with
//! the token.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of an interned token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenId(pub u32);

/// Whether an occurrence identifies a pattern (ID) or carries its contents (C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "I")]
    Id,
    #[serde(rename = "C")]
    Content,
}

impl Role {
    pub fn mask_char(self) -> char {
        match self {
            Role::Id => 'I',
            Role::Content => 'C',
        }
    }

    pub fn from_mask_char(c: char) -> Option<Role> {
        match c {
            'I' => Some(Role::Id),
            'C' => Some(Role::Content),
            _ => None,
        }
    }
}

#[derive(Default)]
struct Interner {
    by_text: HashMap<Arc<str>, TokenId>,
    texts: Vec<Arc<str>>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

impl TokenId {
    /// Interns `text`, returning the existing id when it was seen before.
    pub fn intern(text: &str) -> Result<TokenId> {
        validate_token(text)?;
        if let Some(id) = interner().read().unwrap().by_text.get(text) {
            return Ok(*id);
        }
        let mut table = interner().write().unwrap();
        if let Some(id) = table.by_text.get(text) {
            return Ok(*id);
        }
        let id = TokenId(table.texts.len() as u32);
        let text: Arc<str> = Arc::from(text);
        table.texts.push(text.clone());
        table.by_text.insert(text, id);
        Ok(id)
    }

    /// Looks up an already interned token without creating it.
    pub fn lookup(text: &str) -> Option<TokenId> {
        interner().read().unwrap().by_text.get(text).copied()
    }

    pub fn text(self) -> Arc<str> {
        interner().read().unwrap().texts[self.0 as usize].clone()
    }
}

fn validate_token(text: &str) -> Result<()> {
    if text.is_empty() {
        return Err(Error::Format("empty token".into()));
    }
    if text.chars().any(char::is_whitespace) {
        return Err(Error::Format(format!("token {text:?} contains whitespace")));
    }
    Ok(())
}

/// One occurrence of a token in a pattern.
///
/// Equality and hashing look at the token only; two occurrences of `%7`
/// are equal whether they are ID or C symbols.
#[derive(Debug, Clone, Copy)]
pub struct Symbol {
    pub token: TokenId,
    pub role: Role,
}

impl Symbol {
    pub fn new(token: &str, role: Role) -> Result<Symbol> {
        Ok(Symbol {
            token: TokenId::intern(token)?,
            role,
        })
    }

    pub fn content(token: &str) -> Result<Symbol> {
        Symbol::new(token, Role::Content)
    }

    pub fn id(token: &str) -> Result<Symbol> {
        Symbol::new(token, Role::Id)
    }

    pub fn is_id(&self) -> bool {
        self.role == Role::Id
    }

    pub fn text(&self) -> Arc<str> {
        self.token.text()
    }
}

/// Interns a token with the given role.
pub fn intern(token: &str, role: Role) -> Result<Symbol> {
    Symbol::new(token, role)
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.token == other.token
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.token.hash(state);
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}
