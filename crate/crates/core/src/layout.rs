use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

/// Ordered list of pool indices, one per circuit layer.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CircuitLayout(pub Vec<usize>);

impl CircuitLayout {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn push(&mut self, index: usize) {
        self.0.push(index);
    }

    pub fn extended(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        v.push(index);
        Self(v)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for CircuitLayout {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for CircuitLayout {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for CircuitLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}
