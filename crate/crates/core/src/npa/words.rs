//! Words in the projection generators `e_{v,i}` (family E) and `f_{w,j}`
//! (family F) modulo idempotence, orthogonality within a vertex and
//! commutation between the families.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    E,
    F,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub family: Family,
    pub vertex: usize,
    pub outcome: usize,
}

impl Generator {
    pub fn e(vertex: usize, outcome: usize) -> Self {
        Generator {
            family: Family::E,
            vertex,
            outcome,
        }
    }

    pub fn f(vertex: usize, outcome: usize) -> Self {
        Generator {
            family: Family::F,
            vertex,
            outcome,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::E => 'e',
            Family::F => 'f',
        };
        write!(f, "{name}{},{}", self.vertex, self.outcome)
    }
}

/// A reduced word, or the zero element. `Letters(vec![])` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Word {
    Zero,
    Letters(Vec<Generator>),
}

impl Word {
    pub fn one() -> Word {
        Word::Letters(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Word::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Word::Letters(l) if l.is_empty())
    }

    pub fn letters(&self) -> &[Generator] {
        match self {
            Word::Zero => &[],
            Word::Letters(l) => l,
        }
    }

    /// Number of letters (0 for the identity and for zero).
    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `w*`: letters are self-adjoint, so each family part is reversed.
    pub fn adjoint(&self) -> Word {
        match self {
            Word::Zero => Word::Zero,
            Word::Letters(l) => {
                let split = l.iter().position(|g| g.family == Family::F).unwrap_or(l.len());
                let mut out: Vec<Generator> = l[..split].iter().rev().copied().collect();
                out.extend(l[split..].iter().rev());
                Word::Letters(out)
            }
        }
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        match (self, other) {
            (Word::Letters(a), Word::Letters(b)) => {
                let mut all = a.clone();
                all.extend_from_slice(b);
                reduce(&all)
            }
            _ => Word::Zero,
        }
    }

    /// Representative of `{w, w*}`, used when moments are real symmetric.
    pub fn symmetric_class(&self) -> Word {
        let adj = self.adjoint();
        if adj < *self {
            adj
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Zero => write!(f, "0"),
            Word::Letters(l) if l.is_empty() => write!(f, "1"),
            Word::Letters(l) => {
                for (k, g) in l.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
        }
    }
}

/// Normal form: E-letters before F-letters (families commute), and within a
/// family adjacent letters on the same vertex merge (equal outcomes) or
/// annihilate (different outcomes).
pub fn reduce(letters: &[Generator]) -> Word {
    let mut out: Vec<Generator> = Vec::with_capacity(letters.len());
    for family in [Family::E, Family::F] {
        let start = out.len();
        for &g in letters.iter().filter(|g| g.family == family) {
            match out[start..].last() {
                Some(top) if top.vertex == g.vertex => {
                    if top.outcome != g.outcome {
                        return Word::Zero;
                    }
                }
                _ => out.push(g),
            }
        }
    }
    Word::Letters(out)
}

/// Reduced words in one family of length `<= max_len`, over outcomes
/// `0..outcomes`, ordered by length then lexicographically.
pub(crate) fn family_words(family: Family, n: usize, outcomes: usize, max_len: usize) -> Vec<Vec<Generator>> {
    let mut all = vec![Vec::new()];
    let mut frontier: Vec<Vec<Generator>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for v in 0..n {
                if w.last().is_some_and(|g: &Generator| g.vertex == v) {
                    continue;
                }
                for i in 0..outcomes {
                    let mut x = w.clone();
                    x.push(Generator { family, vertex: v, outcome: i });
                    next.push(x);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    all
}

/// Number of reduced one-family words of each length `0..=max_len`.
fn family_counts(n: usize, outcomes: usize, max_len: usize) -> Vec<u128> {
    let mut counts = vec![1u128];
    let first = (n * outcomes) as u128;
    let step = (n.saturating_sub(1) * outcomes) as u128;
    let mut cur = first;
    for _ in 0..max_len {
        counts.push(cur);
        cur = cur.saturating_mul(step);
    }
    counts
}

/// Closed-form size of the word set over outcomes `0..outcomes` with total
/// length `<= max_len`.
pub fn count_words(n: usize, outcomes: usize, max_len: usize) -> u128 {
    let fam = family_counts(n, outcomes, max_len);
    let mut total = 0u128;
    for a in 0..=max_len {
        for b in 0..=max_len - a {
            total = total.saturating_add(fam[a].saturating_mul(fam[b]));
        }
    }
    total
}

/// Words `E-part * F-part` over outcomes `0..outcomes` of total length
/// `<= max_len`, identity first, then by length and lexicographically.
pub(crate) fn words_with_outcomes(
    n: usize,
    outcomes: usize,
    max_len: usize,
    cap: usize,
) -> Result<Vec<Word>> {
    let count = count_words(n, outcomes, max_len);
    if count > cap as u128 {
        return Err(Error::CapExceeded {
            what: "moment index word",
            count: usize::try_from(count).unwrap_or(usize::MAX),
            cap,
        });
    }
    let es = family_words(Family::E, n, outcomes, max_len);
    let fs = family_words(Family::F, n, outcomes, max_len);
    let mut out = Vec::with_capacity(count as usize);
    for e in &es {
        for f in &fs {
            if e.len() + f.len() <= max_len {
                let mut w = e.clone();
                w.extend_from_slice(f);
                out.push(Word::Letters(w));
            }
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

/// The index set of all nonzero reduced words of length `<= level`.
pub fn enumerate_words(n: usize, c: usize, level: usize, cap: usize) -> Result<Vec<Word>> {
    words_with_outcomes(n, c, level, cap)
}
