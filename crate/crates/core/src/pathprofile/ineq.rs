//! Pure binomial inequalities `prod H_k^{a_k} >= prod H_k^{b_k}` and their text grammar.

use crate::exactlp::rat::{parse_rat, Rat};
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Paths,
    EvenCycles,
    OddCycles,
    Stars,
    Cliques,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::Paths => 'P',
            Family::EvenCycles | Family::OddCycles => 'C',
            Family::Stars => 'S',
            Family::Cliques => 'K',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IneqParseError {
    #[error("expected exactly one '>=' in {0:?}")]
    Relation(String),
    #[error("malformed term {0:?}")]
    Term(String),
    #[error("negative exponent in term {0:?}")]
    NegativeExponent(String),
    #[error("terms from different graph families cannot be mixed")]
    MixedFamilies,
    #[error("{0}")]
    Index(String),
}

/// Exponent maps are kept disjoint: a graph appearing on both sides is cancelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialInequality {
    pub family: Family,
    pub lhs: BTreeMap<usize, Rat>,
    pub rhs: BTreeMap<usize, Rat>,
}

impl BinomialInequality {
    pub fn new(family: Family, lhs: BTreeMap<usize, Rat>, rhs: BTreeMap<usize, Rat>) -> Result<Self, IneqParseError> {
        for (k, e) in lhs.iter().chain(&rhs) {
            if e.is_negative() {
                return Err(IneqParseError::NegativeExponent(format!("{}{k}", family.letter())));
            }
        }
        let mut ineq = BinomialInequality { family, lhs, rhs };
        ineq.cancel();
        Ok(ineq)
    }

    /// Builds from integer exponent lists.
    pub fn from_terms(family: Family, lhs: &[(usize, i64)], rhs: &[(usize, i64)]) -> Result<Self, IneqParseError> {
        let collect = |terms: &[(usize, i64)]| {
            let mut m: BTreeMap<usize, Rat> = BTreeMap::new();
            for &(k, e) in terms {
                *m.entry(k).or_insert_with(Rat::zero) += Rat::from_integer(e.into());
            }
            m
        };
        Self::new(family, collect(lhs), collect(rhs))
    }

    /// Linear form `a - b` over the given coordinate indices.
    pub fn linear_form(&self, dim: usize, coord: impl Fn(usize) -> usize) -> Vec<Rat> {
        let mut c = vec![Rat::zero(); dim];
        for (&k, e) in &self.lhs {
            c[coord(k)] += e;
        }
        for (&k, e) in &self.rhs {
            c[coord(k)] -= e;
        }
        c
    }

    pub fn max_index(&self) -> Option<usize> {
        self.lhs.keys().chain(self.rhs.keys()).copied().max()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.lhs.keys().chain(self.rhs.keys()).copied().min()
    }

    /// The inequality with its sides exchanged.
    pub fn reversed(&self) -> Self {
        BinomialInequality { family: self.family, lhs: self.rhs.clone(), rhs: self.lhs.clone() }
    }

    fn cancel(&mut self) {
        let common: Vec<usize> = self.lhs.keys().filter(|k| self.rhs.contains_key(k)).copied().collect();
        for k in common {
            let a = self.lhs[&k].clone();
            let b = self.rhs[&k].clone();
            if a >= b {
                self.lhs.insert(k, a - b);
                self.rhs.remove(&k);
            } else {
                self.rhs.insert(k, b - a);
                self.lhs.remove(&k);
            }
        }
        self.lhs.retain(|_, e| !e.is_zero());
        self.rhs.retain(|_, e| !e.is_zero());
    }

    pub fn parse(text: &str) -> Result<Self, IneqParseError> {
        let parts: Vec<&str> = text.split(">=").collect();
        if parts.len() != 2 {
            return Err(IneqParseError::Relation(text.to_string()));
        }
        let mut family: Option<char> = None;
        let mut sides = Vec::new();
        let mut indices = Vec::new();
        for side in parts {
            let mut m: BTreeMap<usize, Rat> = BTreeMap::new();
            let cleaned = side.replace('*', " ");
            let tokens: Vec<&str> = cleaned.split_whitespace().collect();
            if tokens.is_empty() {
                return Err(IneqParseError::Term(side.trim().to_string()));
            }
            for tok in tokens {
                if tok == "1" {
                    continue;
                }
                let (base, exp) = match tok.split_once('^') {
                    Some((b, e)) => (b, parse_rat(e).map_err(|_| IneqParseError::Term(tok.to_string()))?),
                    None => (tok, Rat::from_integer(1.into())),
                };
                if exp.is_negative() {
                    return Err(IneqParseError::NegativeExponent(tok.to_string()));
                }
                let mut chars = base.chars();
                let letter = chars.next().ok_or_else(|| IneqParseError::Term(tok.to_string()))?;
                if !"PCSK".contains(letter) {
                    return Err(IneqParseError::Term(tok.to_string()));
                }
                let idx: usize = chars.as_str().parse().map_err(|_| IneqParseError::Term(tok.to_string()))?;
                match family {
                    None => family = Some(letter),
                    Some(f) if f != letter => return Err(IneqParseError::MixedFamilies),
                    _ => {}
                }
                indices.push(idx);
                *m.entry(idx).or_insert_with(Rat::zero) += exp;
            }
            sides.push(m);
        }
        let fam = match family.unwrap_or('P') {
            'P' => Family::Paths,
            'S' => Family::Stars,
            'K' => {
                if indices.contains(&0) {
                    return Err(IneqParseError::Index("complete graphs start at K1".into()));
                }
                Family::Cliques
            }
            _ => {
                if indices.iter().any(|&k| k < 3) {
                    return Err(IneqParseError::Index("cycles start at C3".into()));
                }
                if indices.iter().all(|k| k % 2 == 0) {
                    Family::EvenCycles
                } else if indices.iter().all(|k| k % 2 == 1) {
                    Family::OddCycles
                } else {
                    return Err(IneqParseError::Index("even and odd cycles cannot be mixed".into()));
                }
            }
        };
        let rhs = sides.pop().unwrap_or_default();
        let lhs = sides.pop().unwrap_or_default();
        Self::new(fam, lhs, rhs)
    }
}

fn fmt_side(f: &mut fmt::Formatter<'_>, letter: char, side: &BTreeMap<usize, Rat>) -> fmt::Result {
    if side.is_empty() {
        return write!(f, "1");
    }
    let one = Rat::from_integer(1.into());
    let terms: Vec<String> =
        side.iter().map(|(k, e)| if *e == one { format!("{letter}{k}") } else { format!("{letter}{k}^{e}") }).collect();
    write!(f, "{}", terms.join(" * "))
}

impl fmt::Display for BinomialInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_side(f, self.family.letter(), &self.lhs)?;
        write!(f, " >= ")?;
        fmt_side(f, self.family.letter(), &self.rhs)
    }
}

impl Serialize for BinomialInequality {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
