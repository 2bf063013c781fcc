//! Finite linear orders with a unary function, and intervals of ω.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite structure `(I, <, f↾I)` re-based to positions `0..n`.
///
/// `fvals[k]` is the position of the image of the `k`-th element. A value
/// `≥ n` means the image falls outside the structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteStructure {
    fvals: Vec<usize>,
}

impl FiniteStructure {
    pub fn new(fvals: Vec<usize>) -> Self {
        FiniteStructure { fvals }
    }

    /// The cycle `0 → 1 → … → k-1 → 0` of the given length.
    pub fn cycle(len: usize) -> Self {
        assert!(len > 0, "cycle length must be positive");
        FiniteStructure {
            fvals: (0..len).map(|i| (i + 1) % len).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.fvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fvals.is_empty()
    }

    pub fn fvals(&self) -> &[usize] {
        &self.fvals
    }

    pub fn image(&self, k: usize) -> usize {
        self.fvals[k]
    }

    /// Every image lies inside the structure.
    pub fn is_function_closed(&self) -> bool {
        self.fvals.iter().all(|&v| v < self.fvals.len())
    }

    /// Number of elements of each preimage, positions `0..n`.
    pub fn preimage_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.fvals.len()];
        for &v in &self.fvals {
            if v < out.len() {
                out[v] += 1;
            }
        }
        out
    }

    /// Lengths of the cycles of the functional graph.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.fvals.len();
        let mut state = vec![0u8; n]; // 0 new, 1 on stack, 2 done
        let mut out = Vec::new();
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut x = start;
            while x < n && state[x] == 0 {
                state[x] = 1;
                path.push(x);
                x = self.fvals[x];
            }
            if x < n && state[x] == 1 {
                let at = path.iter().position(|&p| p == x).expect("on path");
                out.push(path.len() - at);
            }
            for p in path {
                state[p] = 2;
            }
        }
        out
    }

    /// Concatenation: `other` placed after `self`.
    pub fn concat(&self, other: &FiniteStructure) -> FiniteStructure {
        let shift = self.fvals.len();
        let mut fvals = self.fvals.clone();
        fvals.extend(other.fvals.iter().map(|&v| v + shift));
        FiniteStructure { fvals }
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fvals.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The only order-preserving bijection between two finite linear orders of
/// equal size is `k ↦ k`, so isomorphism is positional equality.
pub fn structures_isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    a.fvals == b.fvals
}

/// Inclusive interval `[lo, hi]` of ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    lo: u64,
    hi: u64,
}

impl Interval {
    pub fn new(lo: u64, hi: u64) -> Self {
        assert!(lo <= hi, "interval lo {lo} exceeds hi {hi}");
        Interval { lo, hi }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Cantor pairing `⟨x, y⟩ = (x + y)(x + y + 1)/2 + y`.
pub fn pair(x: u64, y: u64) -> u64 {
    let d = x + y;
    d * (d + 1) / 2 + y
}

pub fn unpair(c: u64) -> (u64, u64) {
    // Largest d with d(d+1)/2 ≤ c.
    let mut d = (((8 * c + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while (d + 1) * (d + 2) / 2 <= c {
        d += 1;
    }
    while d * (d + 1) / 2 > c {
        d -= 1;
    }
    let y = c - d * (d + 1) / 2;
    (d - y, y)
}

/// Every code below `pair_prefix_len(n)` has both components `< n`, and
/// `pair(n, 0)` equals it.
pub fn pair_prefix_len(n: u64) -> u64 {
    n * (n + 1) / 2
}
