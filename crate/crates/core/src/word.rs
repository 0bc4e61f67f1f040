//! Words over named generators, with grouping and commutator brackets.
//!
//! Words are the portable representation of group elements in reports and
//! on the command line: evaluation resolves names against an environment
//! and multiplies in right-action order.

use std::fmt;

use thiserror::Error;

use crate::homeo::Homeo;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unbound name `{0}`")]
    UnboundName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `name^exp`
    Gen(String, i64),
    /// `(word)^exp`
    Group(Word, i64),
    /// `[lhs,rhs]^exp`
    Comm(Word, Word, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    factors: Vec<Factor>,
}

impl Word {
    pub fn empty() -> Self {
        Word { factors: vec![] }
    }

    pub fn gen(name: &str) -> Self {
        Word {
            factors: vec![Factor::Gen(name.to_string(), 1)],
        }
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        Word { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Single letters `(name, +-1)` merged into exponent runs.
    pub fn from_letters(letters: &[(String, i64)]) -> Self {
        let mut factors: Vec<Factor> = Vec::new();
        for (name, e) in letters {
            if *e == 0 {
                continue;
            }
            match factors.last_mut() {
                Some(Factor::Gen(n, exp)) if n == name && (*exp > 0) == (*e > 0) => {
                    *exp += e;
                }
                _ => factors.push(Factor::Gen(name.clone(), *e)),
            }
        }
        Word { factors }
    }

    pub fn concat(mut self, mut other: Word) -> Word {
        self.factors.append(&mut other.factors);
        self
    }

    pub fn comm(lhs: Word, rhs: Word) -> Word {
        Word {
            factors: vec![Factor::Comm(lhs, rhs, 1)],
        }
    }

    /// `k^-1 w k`, with the three parts grouped so repeated sub-words can be
    /// evaluated once.
    pub fn conjugated(w: Word, k: &Word) -> Word {
        Word {
            factors: vec![
                Factor::Group(k.clone(), -1),
                Factor::Group(w, 1),
                Factor::Group(k.clone(), 1),
            ],
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| match f {
                    Factor::Gen(n, e) => Factor::Gen(n.clone(), -e),
                    Factor::Group(w, e) => Factor::Group(w.clone(), -e),
                    Factor::Comm(a, b, e) => Factor::Comm(a.clone(), b.clone(), -e),
                })
                .collect(),
        }
    }

    /// Number of single letters after flattening.
    pub fn letter_len(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Gen(_, e) => e.unsigned_abs() as usize,
                Factor::Group(w, e) => w.letter_len() * e.unsigned_abs() as usize,
                Factor::Comm(a, b, e) => {
                    2 * (a.letter_len() + b.letter_len()) * e.unsigned_abs() as usize
                }
            })
            .sum()
    }

    /// Right-action product of the resolved factors.
    pub fn evaluate<E: Homeo>(
        &self,
        resolve: &impl Fn(&str) -> Option<E>,
    ) -> Result<E, WordError> {
        self.evaluate_memo(resolve, &mut std::collections::HashMap::new())
    }

    /// Evaluation with a cache of already-evaluated sub-words; the words a
    /// tower emits share their sub-words heavily across one level.
    pub fn evaluate_memo<E: Homeo>(
        &self,
        resolve: &impl Fn(&str) -> Option<E>,
        cache: &mut std::collections::HashMap<Word, E>,
    ) -> Result<E, WordError> {
        if let Some(hit) = cache.get(self) {
            return Ok(hit.clone());
        }
        let mut out = E::identity();
        for f in &self.factors {
            let part = match f {
                Factor::Gen(name, e) => {
                    let g = resolve(name).ok_or_else(|| WordError::UnboundName(name.clone()))?;
                    g.pow(*e)
                }
                Factor::Group(w, e) => w.evaluate_memo(resolve, cache)?.pow(*e),
                Factor::Comm(a, b, e) => {
                    let ae = a.evaluate_memo(resolve, cache)?;
                    let be = b.evaluate_memo(resolve, cache)?;
                    ae.commutator(&be).pow(*e)
                }
            };
            out = out.compose(&part);
        }
        cache.insert(self.clone(), out.clone());
        Ok(out)
    }

    /// Names referenced anywhere in the word.
    pub fn names(&self) -> Vec<String> {
        fn collect(w: &Word, out: &mut Vec<String>) {
            for f in &w.factors {
                match f {
                    Factor::Gen(n, _) => {
                        if !out.contains(n) {
                            out.push(n.clone());
                        }
                    }
                    Factor::Group(w, _) => collect(w, out),
                    Factor::Comm(a, b, _) => {
                        collect(a, out);
                        collect(b, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        collect(self, &mut out);
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "()");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match factor {
                Factor::Gen(n, 1) => write!(f, "{}", n)?,
                Factor::Gen(n, e) => write!(f, "{}^{}", n, e)?,
                Factor::Group(w, 1) => write!(f, "({})", w)?,
                Factor::Group(w, e) => write!(f, "({})^{}", w, e)?,
                Factor::Comm(a, b, 1) => write!(f, "[{},{}]", a, b)?,
                Factor::Comm(a, b, e) => write!(f, "[{},{}]^{}", a, b, e)?,
            }
        }
        Ok(())
    }
}
