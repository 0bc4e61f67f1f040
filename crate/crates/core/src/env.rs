//! Element environments: ordered `name = expression` bindings loaded from a
//! file, where later lines may reference earlier names in word expressions.
//!
//! The projective constants `pp_a`, `pp_b`, `pp_c` are available in word
//! expressions unless shadowed by an earlier binding.

use std::fmt;

use thiserror::Error;

use crate::exact::ExactNumber;
use crate::homeo::{Ambient, GeneratingSet, GroupError, Homeo};
use crate::interval::IntervalSet;
use crate::parse::{parse_element, ElementExpr, ParseError};
use crate::plmap::PlMap;
use crate::ppmap::{pp_a, pp_b, pp_c, PpMap};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("line {line}: {err}")]
    Parse { line: usize, err: ParseError },
    #[error("line {line}: expected `name = expression`")]
    BadBinding { line: usize },
    #[error("line {line}: duplicate name `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: word references unbound name `{name}`")]
    Unbound { line: usize, name: String },
    #[error("line {line}: word mixes elements of different ambients")]
    MixedWord { line: usize },
    #[error("environment mixes elements of different ambients")]
    MixedKinds,
    #[error("{0}")]
    Group(#[from] GroupError),
}

/// A map of either ambient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Pl(PlMap),
    Pp(PpMap),
}

impl Element {
    pub fn ambient(&self) -> Ambient {
        match self {
            Element::Pl(_) => Ambient::UnitInterval,
            Element::Pp(_) => Ambient::RealLine,
        }
    }

    pub fn evaluate(&self, x: &ExactNumber) -> Result<ExactNumber, String> {
        match self {
            Element::Pl(m) => m.evaluate(x).map_err(|e| e.to_string()),
            Element::Pp(m) => m.evaluate(x).map_err(|e| e.to_string()),
        }
    }

    pub fn compose(&self, other: &Element) -> Result<Element, String> {
        match (self, other) {
            (Element::Pl(a), Element::Pl(b)) => Ok(Element::Pl(a.compose(b))),
            (Element::Pp(a), Element::Pp(b)) => Ok(Element::Pp(a.compose(b))),
            _ => Err("cannot compose maps of different ambients".into()),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Pl(m) => Element::Pl(m.inverse()),
            Element::Pp(m) => Element::Pp(m.inverse()),
        }
    }

    pub fn support(&self) -> IntervalSet {
        match self {
            Element::Pl(m) => m.support(),
            Element::Pp(m) => m.support(),
        }
    }

    pub fn fix_set(&self) -> IntervalSet {
        match self {
            Element::Pl(m) => m.fix_set(),
            Element::Pp(m) => m.fix_set(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Pl(m) => write!(f, "{}", m),
            Element::Pp(m) => write!(f, "{}", m),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ElementEnvironment {
    bindings: Vec<(String, Element)>,
}

impl ElementEnvironment {
    pub fn from_text(text: &str) -> Result<Self, EnvError> {
        let mut env = ElementEnvironment::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(j) => &raw[..j],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (name, expr) = line
                .split_once('=')
                .ok_or(EnvError::BadBinding { line: line_no })?;
            let name = name.trim().to_string();
            let expr = expr.trim();
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_')
                || name.chars().next().unwrap().is_ascii_digit()
            {
                return Err(EnvError::BadBinding { line: line_no });
            }
            if env.get(&name).is_some() {
                return Err(EnvError::Duplicate {
                    line: line_no,
                    name,
                });
            }
            let parsed =
                parse_element(expr).map_err(|err| EnvError::Parse { line: line_no, err })?;
            let element = env.eval_expr(parsed, line_no)?;
            env.bindings.push((name, element));
        }
        Ok(env)
    }

    fn eval_expr(&self, expr: ElementExpr, line: usize) -> Result<Element, EnvError> {
        match expr {
            ElementExpr::Pl(m) => Ok(Element::Pl(m)),
            ElementExpr::Pp(m) => Ok(Element::Pp(m)),
            ElementExpr::Tree(tp) => Ok(Element::Pl(tp.to_plmap())),
            ElementExpr::WordExpr(w) => self.eval_word(&w, line),
        }
    }

    fn eval_word(&self, w: &Word, line: usize) -> Result<Element, EnvError> {
        let names = w.names();
        let mut kind: Option<Ambient> = None;
        for n in &names {
            let a = match self.lookup_with_builtins(n) {
                Some(e) => e.ambient(),
                None => {
                    return Err(EnvError::Unbound {
                        line,
                        name: n.clone(),
                    })
                }
            };
            match kind {
                None => kind = Some(a),
                Some(k) if k == a => {}
                Some(_) => return Err(EnvError::MixedWord { line }),
            }
        }
        match kind {
            Some(Ambient::UnitInterval) | None => {
                let resolve = |n: &str| match self.lookup_with_builtins(n) {
                    Some(Element::Pl(m)) => Some(m),
                    _ => None,
                };
                let m = w.evaluate::<PlMap>(&resolve).map_err(|e| match e {
                    crate::word::WordError::UnboundName(name) => EnvError::Unbound { line, name },
                })?;
                Ok(Element::Pl(m))
            }
            Some(Ambient::RealLine) => {
                let resolve = |n: &str| match self.lookup_with_builtins(n) {
                    Some(Element::Pp(m)) => Some(m),
                    _ => None,
                };
                let m = w.evaluate::<PpMap>(&resolve).map_err(|e| match e {
                    crate::word::WordError::UnboundName(name) => EnvError::Unbound { line, name },
                })?;
                Ok(Element::Pp(m))
            }
        }
    }

    fn lookup_with_builtins(&self, name: &str) -> Option<Element> {
        if let Some(e) = self.get(name) {
            return Some(e.clone());
        }
        match name {
            "pp_a" => Some(Element::Pp(pp_a())),
            "pp_b" => Some(Element::Pp(pp_b())),
            "pp_c" => Some(Element::Pp(pp_c())),
            _ => None,
        }
    }

    pub fn get(&self, name: &str) -> Option<&Element> {
        self.bindings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
    }

    /// Resolves a name or inline expression against this environment.
    pub fn resolve_expr(&self, text: &str) -> Result<Element, EnvError> {
        if let Some(e) = self.lookup_with_builtins(text.trim()) {
            return Ok(e);
        }
        let parsed = parse_element(text).map_err(|err| EnvError::Parse { line: 0, err })?;
        self.eval_expr(parsed, 0)
    }

    pub fn bindings(&self) -> &[(String, Element)] {
        &self.bindings
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// All bindings as a PL generating set; errors if any is projective.
    pub fn pl_generating_set(&self) -> Result<GeneratingSet<PlMap>, EnvError> {
        let mut pairs = Vec::new();
        for (n, e) in &self.bindings {
            match e {
                Element::Pl(m) => pairs.push((n.clone(), m.clone())),
                Element::Pp(_) => return Err(EnvError::MixedKinds),
            }
        }
        Ok(GeneratingSet::new(pairs)?)
    }

    pub fn pp_generating_set(&self) -> Result<GeneratingSet<PpMap>, EnvError> {
        let mut pairs = Vec::new();
        for (n, e) in &self.bindings {
            match e {
                Element::Pp(m) => pairs.push((n.clone(), m.clone())),
                Element::Pl(_) => return Err(EnvError::MixedKinds),
            }
        }
        Ok(GeneratingSet::new(pairs)?)
    }

    /// The common ambient of all bindings, if homogeneous.
    pub fn ambient(&self) -> Result<Ambient, EnvError> {
        let mut kind = None;
        for (_, e) in &self.bindings {
            match kind {
                None => kind = Some(e.ambient()),
                Some(k) if k == e.ambient() => {}
                Some(_) => return Err(EnvError::MixedKinds),
            }
        }
        kind.ok_or(EnvError::Group(GroupError::Empty))
    }
}
