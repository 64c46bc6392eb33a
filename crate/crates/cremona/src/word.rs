//! Words in the generators `{σ} ∪ PGL₃`.
//!
//! A word is a letter sequence `f₁ f₂ ⋯ f_n` evaluating to the composition
//! `f₁∘f₂∘⋯∘f_n`: the rightmost letter applies first.

use crate::cremap::{CreMap, LinMap, MapError};
use crate::scalar::FieldMode;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "lin")]
    Lin(LinMap),
}

impl Letter {
    /// Wraps a matrix; `LinMap` construction already canonicalizes.
    pub fn lin(m: LinMap) -> Letter {
        Letter::Lin(m)
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Sigma => Letter::Sigma,
            Letter::Lin(m) => Letter::Lin(m.inverse()),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sigma => write!(f, "sigma"),
            Letter::Lin(m) => write!(f, "lin {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    pub fn empty() -> Word {
        Word { letters: vec![] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letters_mut(&mut self) -> &mut Vec<Letter> {
        &mut self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(rhs.letters.iter().cloned());
        Word { letters }
    }

    /// Evaluates the composition; the empty word is the identity.
    pub fn eval(&self, mode: FieldMode) -> Result<CreMap, MapError> {
        let mut acc = CreMap::identity(mode);
        for letter in &self.letters {
            let f = match letter {
                Letter::Sigma => CreMap::sigma(mode),
                Letter::Lin(m) => CreMap::from_lin(m),
            };
            acc = acc.compose(&f)?;
        }
        Ok(acc)
    }

    /// Formal inverse: reversed letters, each inverted (σ is its own
    /// inverse).
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// All `Lin` letters fix `[1:0:0]`, i.e. lie in the de Jonquières group.
    pub fn all_de_jonquieres(&self) -> bool {
        self.letters.iter().all(|l| match l {
            Letter::Sigma => true,
            Letter::Lin(m) => m.fixes_p100(),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "(empty)");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" · "))
    }
}
