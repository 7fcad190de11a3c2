use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Universe element. Integers sort before strings, integers numerically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Int(a), Label::Int(b)) => a.cmp(b),
            (Label::Int(_), Label::Text(_)) => Ordering::Less,
            (Label::Text(_), Label::Int(_)) => Ordering::Greater,
            (Label::Text(a), Label::Text(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(v) => write!(f, "{v}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Label {
    fn from(v: i64) -> Self {
        Label::Int(v)
    }
}

impl From<&str> for Label {
    fn from(v: &str) -> Self {
        Label::Text(v.to_string())
    }
}

impl From<String> for Label {
    fn from(v: String) -> Self {
        Label::Text(v)
    }
}

/// A finite family of subsets of a labeled universe.
///
/// The universe and every member set are kept sorted; member order is the
/// order given at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct SetFamily {
    universe: Vec<Label>,
    sets: Vec<Vec<Label>>,
    allow_duplicates: bool,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    universe: Vec<Label>,
    sets: Vec<Vec<Label>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    allow_duplicates: bool,
}

impl TryFrom<RawFamily> for SetFamily {
    type Error = crate::Error;

    fn try_from(raw: RawFamily) -> Result<Self> {
        SetFamily::build(raw.universe, raw.sets, raw.allow_duplicates)
    }
}

impl From<SetFamily> for RawFamily {
    fn from(f: SetFamily) -> Self {
        RawFamily { universe: f.universe, sets: f.sets, allow_duplicates: f.allow_duplicates }
    }
}

impl SetFamily {
    /// Family without repeated member sets.
    pub fn new(universe: Vec<Label>, sets: Vec<Vec<Label>>) -> Result<Self> {
        Self::build(universe, sets, false)
    }

    /// Family in which a member set may appear more than once.
    pub fn with_duplicates(universe: Vec<Label>, sets: Vec<Vec<Label>>) -> Result<Self> {
        Self::build(universe, sets, true)
    }

    /// Family over the integer universe `1..=n`.
    pub fn from_ints(n: i64, sets: &[&[i64]]) -> Result<Self> {
        let universe = (1..=n).map(Label::Int).collect();
        let sets = sets.iter().map(|s| s.iter().map(|&v| Label::Int(v)).collect()).collect();
        Self::new(universe, sets)
    }

    /// Family whose universe is exactly the union of its sets.
    pub fn from_sets(sets: Vec<Vec<Label>>, allow_duplicates: bool) -> Result<Self> {
        let universe: BTreeSet<Label> = sets.iter().flatten().cloned().collect();
        Self::build(universe.into_iter().collect(), sets, allow_duplicates)
    }

    fn build(mut universe: Vec<Label>, sets: Vec<Vec<Label>>, allow_duplicates: bool) -> Result<Self> {
        universe.sort();
        if universe.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("universe labels must be distinct"));
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (idx, mut set) in sets.into_iter().enumerate() {
            set.sort();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("set {idx} repeats an element")));
            }
            if let Some(bad) = set.iter().find(|l| universe.binary_search(l).is_err()) {
                return Err(invalid(format!("set {idx} contains {bad}, which is outside the universe")));
            }
            normalized.push(set);
        }
        if !allow_duplicates {
            let mut seen = BTreeSet::new();
            for (idx, set) in normalized.iter().enumerate() {
                if !seen.insert(set) {
                    return Err(invalid(format!("set {idx} is a duplicate")));
                }
            }
        }
        Ok(SetFamily { universe, sets: normalized, allow_duplicates })
    }

    pub fn universe(&self) -> &[Label] {
        &self.universe
    }

    pub fn sets(&self) -> &[Vec<Label>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn allows_duplicates(&self) -> bool {
        self.allow_duplicates
    }

    /// Member sets as sorted universe indices.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|s| s.iter().map(|l| self.universe.binary_search(l).expect("validated")).collect())
            .collect()
    }

    /// Whether `other` becomes this family under some bijection of universes
    /// that keeps the member order.
    pub fn equivalent_up_to_relabeling(&self, other: &SetFamily) -> bool {
        if self.len() != other.len() || self.universe.len() != other.universe.len() {
            return false;
        }
        self.membership_profile() == other.membership_profile()
    }

    fn membership_profile(&self) -> BTreeMap<Vec<bool>, usize> {
        let mut per_element = vec![vec![false; self.sets.len()]; self.universe.len()];
        for (j, set) in self.index_sets().into_iter().enumerate() {
            for i in set {
                per_element[i][j] = true;
            }
        }
        let mut profile = BTreeMap::new();
        for column in per_element {
            *profile.entry(column).or_insert(0) += 1;
        }
        profile
    }
}

/// First property violation found by [`verify_family`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    WrongSize { set: usize, size: usize },
    TooLargeIntersection { first: usize, second: usize, shared: usize },
    NotExactlyT { first: usize, second: usize, shared: usize },
    Covered { set: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub k: usize,
    pub t: usize,
    pub sets: usize,
    pub universe_size: usize,
    pub k_uniform: bool,
    pub max_pairwise_intersection: usize,
    pub at_most_t: bool,
    pub exactly_t: bool,
    pub maximally_cover_free: bool,
    pub witness: Option<Witness>,
}

impl FamilyReport {
    /// k-uniform, at most t-intersecting and maximally cover-free.
    pub fn all_hold(&self) -> bool {
        self.k_uniform && self.at_most_t && self.maximally_cover_free
    }
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Exact pairwise scan of `fam` against the `(k, t)` predicates.
///
/// The witness is the first violation in scan order: size, then pairwise
/// intersection above `t`, then a set without a private element.
pub fn verify_family(fam: &SetFamily, k: usize, t: usize) -> FamilyReport {
    let sets = fam.index_sets();
    let mut witness = None;

    let bad_size = sets.iter().position(|s| s.len() != k);
    if let Some(set) = bad_size {
        witness = Some(Witness::WrongSize { set, size: sets[set].len() });
    }

    let mut max_shared = 0;
    let mut too_large = None;
    let mut not_exact = None;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let shared = intersection_size(&sets[i], &sets[j]);
            max_shared = max_shared.max(shared);
            if shared > t && too_large.is_none() {
                too_large = Some(Witness::TooLargeIntersection { first: i, second: j, shared });
            }
            if shared != t && not_exact.is_none() {
                not_exact = Some(Witness::NotExactlyT { first: i, second: j, shared });
            }
        }
    }

    let mut counts = vec![0usize; fam.universe().len()];
    for s in &sets {
        for &e in s {
            counts[e] += 1;
        }
    }
    let covered = sets.iter().position(|s| !s.iter().any(|&e| counts[e] == 1));

    let at_most_t = too_large.is_none();
    let exactly_t = not_exact.is_none();
    if witness.is_none() {
        witness = too_large;
    }
    if witness.is_none() {
        witness = covered.map(|set| Witness::Covered { set });
    }

    FamilyReport {
        k,
        t,
        sets: sets.len(),
        universe_size: fam.universe().len(),
        k_uniform: bad_size.is_none(),
        max_pairwise_intersection: max_shared,
        at_most_t,
        exactly_t,
        maximally_cover_free: covered.is_none(),
        witness,
    }
}
