use std::collections::BTreeSet;
use std::fmt;

/// A permutation of `{1..r}` in one-line notation, stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

/// A word in the simple transpositions `s_1..s_{r-1}` (letters are 1-based).
/// The word `[a_1, ..., a_k]` stands for the product `s_{a_1} ... s_{a_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(pub Vec<usize>);

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Permutation((0..r).collect())
    }

    /// The longest element `w_0: i -> r + 1 - i`.
    pub fn longest(r: usize) -> Self {
        Permutation((0..r).rev().collect())
    }

    /// Longest element of the parabolic subgroup `S_s x S_{r-s}`.
    pub fn longest_parabolic(r: usize, s: usize) -> Self {
        let mut v: Vec<usize> = (0..s).rev().collect();
        v.extend((s..r).rev());
        Permutation(v)
    }

    /// From 1-based one-line notation; `None` unless it is a permutation.
    pub fn from_one_line(values: &[usize]) -> Option<Self> {
        let r = values.len();
        let seen: BTreeSet<usize> = values.iter().copied().collect();
        if seen.len() != r || values.iter().any(|&v| v == 0 || v > r) {
            return None;
        }
        Some(Permutation(values.iter().map(|v| v - 1).collect()))
    }

    /// Product `s_{a_1} ... s_{a_k}` of a word.
    pub fn from_word(r: usize, word: &ReducedWord) -> Self {
        let mut w = Self::identity(r);
        for &a in &word.0 {
            w.0.swap(a - 1, a);
        }
        w
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn inversions(&self) -> usize {
        let v = &self.0;
        (0..v.len())
            .map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count())
            .sum()
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    fn descents(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.0.len().saturating_sub(1)).filter(|&i| self.0[i] > self.0[i + 1])
    }

    fn first_descent(&self) -> Option<usize> {
        self.descents().next()
    }

    /// Deterministic reduced word: repeatedly strip the leftmost descent.
    pub fn reduced_word(&self) -> ReducedWord {
        let mut w = self.clone();
        let mut stripped = Vec::new();
        while let Some(i) = w.first_descent() {
            w.0.swap(i, i + 1);
            stripped.push(i + 1);
        }
        // w * s_{b_1} ... s_{b_k} = id, so w = s_{b_k} ... s_{b_1}.
        stripped.reverse();
        ReducedWord(stripped)
    }

    /// Up to `limit` distinct reduced words, in lexicographic order.
    pub fn reduced_words(&self, limit: usize) -> Vec<ReducedWord> {
        let mut out = Vec::new();
        let mut suffix = Vec::new();
        collect_words(self, &mut suffix, &mut out, limit);
        out.sort();
        out
    }
}

fn collect_words(w: &Permutation, suffix: &mut Vec<usize>, out: &mut Vec<ReducedWord>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    let descents: Vec<usize> = w.descents().collect();
    if descents.is_empty() {
        out.push(ReducedWord(suffix.iter().rev().copied().collect()));
        return;
    }
    for i in descents {
        let mut shorter = w.clone();
        shorter.0.swap(i, i + 1);
        suffix.push(i + 1);
        collect_words(&shorter, suffix, out, limit);
        suffix.pop();
        if out.len() >= limit {
            return;
        }
    }
}

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", letters.join(","))
    }
}
