use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{VarId, VarSet};
use crate::oracle::Stage;

/// A stored separating set and where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepsetEntry {
    pub set: VarSet,
    /// Size level of the PC search that found it, or the set size for later stages.
    pub level: usize,
    pub stage: Stage,
}

/// One separating set per eliminated pair, keyed by the unordered pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SepsetMap {
    entries: BTreeMap<(VarId, VarId), SepsetEntry>,
}

fn pair(x: VarId, y: VarId) -> (VarId, VarId) {
    (x.min(y), x.max(y))
}

impl SepsetMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: VarId, y: VarId, set: VarSet, level: usize, stage: Stage) {
        self.entries.insert(pair(x, y), SepsetEntry { set, level, stage });
    }

    pub fn get(&self, x: VarId, y: VarId) -> Option<&VarSet> {
        self.entries.get(&pair(x, y)).map(|e| &e.set)
    }

    pub fn entry(&self, x: VarId, y: VarId) -> Option<&SepsetEntry> {
        self.entries.get(&pair(x, y))
    }

    pub fn contains(&self, x: VarId, y: VarId) -> bool {
        self.entries.contains_key(&pair(x, y))
    }

    pub fn remove(&mut self, x: VarId, y: VarId) -> Option<SepsetEntry> {
        self.entries.remove(&pair(x, y))
    }

    /// Whether `v` is in the stored set of `{x, y}`; `None` without an entry.
    pub fn separates_with(&self, x: VarId, y: VarId, v: VarId) -> Option<bool> {
        self.get(x, y).map(|s| s.contains(&v))
    }

    /// Entries in lexicographic pair order.
    pub fn iter(&self) -> impl Iterator<Item = ((VarId, VarId), &SepsetEntry)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::var_set;

    #[test]
    fn unordered_keys() {
        let mut m = SepsetMap::new();
        m.insert(VarId(3), VarId(1), var_set([2]), 1, Stage::PcSearch);
        assert_eq!(m.get(VarId(1), VarId(3)), Some(&var_set([2])));
        assert_eq!(m.separates_with(VarId(3), VarId(1), VarId(2)), Some(true));
        assert_eq!(m.separates_with(VarId(0), VarId(1), VarId(2)), None);
        assert_eq!(m.iter().next().unwrap().0, (VarId(1), VarId(3)));
    }
}
