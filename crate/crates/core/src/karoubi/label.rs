use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error};

/// A word over `{a, b}` naming a simple object of the one-coordinate category.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(into = "String", try_from = "String"))]
pub struct SimpleLabel(String);

impl SimpleLabel {
    pub fn empty() -> Self {
        SimpleLabel(String::new())
    }

    pub fn new(word: &str) -> Result<Self, Error> {
        if word.is_empty() || word == "∅" || word == "1" {
            return Ok(SimpleLabel::empty());
        }
        if let Some(c) = word.chars().find(|c| !matches!(c, 'a' | 'b')) {
            bail!(Invalid, "label letter {c:?} is not a or b");
        }
        Ok(SimpleLabel(String::from(word)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn word(&self) -> &str {
        &self.0
    }

    /// Letters swapped: the label of the dual object.
    pub fn dual(&self) -> Self {
        SimpleLabel(self.0.chars().map(|c| if c == 'a' { 'b' } else { 'a' }).collect())
    }

    /// The subword on positions `range` (zero based, half open).
    pub fn slice(&self, from: usize, to: usize) -> Self {
        SimpleLabel(String::from(&self.0[from..to]))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.0.clone();
        w.push_str(&other.0);
        SimpleLabel(w)
    }

    /// All labels of length exactly `n`, in order.
    pub fn of_length(n: usize) -> Vec<SimpleLabel> {
        (0..1usize << n)
            .map(|bits| SimpleLabel((0..n).map(|i| if bits >> (n - 1 - i) & 1 == 0 { 'a' } else { 'b' }).collect()))
            .collect()
    }

    /// All labels of length at most `n`, in order.
    pub fn up_to(n: usize) -> Vec<SimpleLabel> {
        (0..=n).flat_map(SimpleLabel::of_length).collect()
    }
}

impl Ord for SimpleLabel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for SimpleLabel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&self.0)
        }
    }
}

impl FromStr for SimpleLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        SimpleLabel::new(s.trim())
    }
}

impl From<SimpleLabel> for String {
    fn from(l: SimpleLabel) -> String {
        use alloc::string::ToString;
        l.to_string()
    }
}

impl TryFrom<String> for SimpleLabel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        SimpleLabel::new(&s)
    }
}

/// A simple object over several group coordinates: one label per coordinate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(transparent))]
pub struct LabelTuple(pub Vec<SimpleLabel>);

impl LabelTuple {
    pub fn single(l: SimpleLabel) -> Self {
        LabelTuple(alloc::vec![l])
    }

    pub fn pair(l: SimpleLabel, r: SimpleLabel) -> Self {
        LabelTuple(alloc::vec![l, r])
    }

    pub fn s(&self) -> usize {
        self.0.len()
    }

    /// Total length.
    pub fn len(&self) -> usize {
        self.0.iter().map(SimpleLabel::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every tuple with the length of entry `i` at most `max[i]`.
    pub fn all_within(max: &[usize]) -> Vec<LabelTuple> {
        let mut out = alloc::vec![LabelTuple(Vec::new())];
        for &m in max {
            let labels = SimpleLabel::up_to(m);
            out = out
                .into_iter()
                .flat_map(|t| {
                    labels.iter().map(move |l| {
                        let mut v = t.0.clone();
                        v.push(l.clone());
                        LabelTuple(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for LabelTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("⊠")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for LabelTuple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        s.split('⊠').map(str::parse).collect::<Result<Vec<_>, _>>().map(LabelTuple)
    }
}
