//! Populations of packings with cached item frequencies and the entropy
//! diversity measure.
//!
//! For a population `P` of size `mu`, `h(i)` counts the members packing item
//! `i` and `f(i) = h(i)/mu`. The diversity objective is
//!
//! ```text
//! H(P) = -sum_i f(i) * ln f(i)        with 0 * ln 0 := 0
//! ```
//!
//! An item packed by none or by all members contributes nothing, so `H` is 0
//! exactly when every item is universal or absent. Each term is maximized at
//! `f = 1/e`, giving the ceiling `H <= n/e`.

use crate::packing::Packing;

/// Single term of the entropy sum for absolute frequency `h` out of `m`.
///
/// Every entropy computed in this crate goes through this function, so value
/// comparisons between the incremental and from-scratch paths are exact.
pub(crate) fn entropy_term(h: u32, m: u32) -> f64 {
    if h == 0 || h == m {
        0.0
    } else {
        let f = f64::from(h) / f64::from(m);
        -(f * f.ln())
    }
}

/// Analytic upper bound `n/e` on the entropy of any population over `n` items.
pub fn entropy_ceiling(n: usize) -> f64 {
    n as f64 / std::f64::consts::E
}

/// An ordered multiset of packings plus the cached frequency vector.
///
/// Members are distinguishable even when bit-identical; duplicates are
/// allowed. The cache is updated on every insert/remove and always equals a
/// from-scratch recount.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    members: Vec<Packing>,
    freq: Vec<u32>,
}

impl Population {
    /// `mu` copies of one packing; the usual seeded starting state.
    pub fn uniform(x: &Packing, mu: usize) -> Self {
        assert!(mu >= 1, "population size must be >= 1");
        let freq = x.bits().iter().map(|&b| if b { mu as u32 } else { 0 }).collect();
        Population { members: vec![x.clone(); mu], freq }
    }

    /// Builds from explicit members. Panics if empty or of uneven lengths.
    pub fn from_members(members: Vec<Packing>) -> Self {
        assert!(!members.is_empty(), "population must be nonempty");
        let n = members[0].len();
        let mut freq = vec![0u32; n];
        for m in &members {
            assert_eq!(m.len(), n, "members must have uniform length");
            for i in m.positions(true) {
                freq[i] += 1;
            }
        }
        Population { members, freq }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of items (bit positions).
    pub fn n(&self) -> usize {
        self.freq.len()
    }

    pub fn members(&self) -> &[Packing] {
        &self.members
    }

    pub fn member(&self, k: usize) -> &Packing {
        &self.members[k]
    }

    /// Cached absolute frequencies `h(i)`.
    pub fn frequencies(&self) -> &[u32] {
        &self.freq
    }

    pub fn push(&mut self, x: Packing) {
        assert_eq!(x.len(), self.n(), "packing length mismatch");
        for i in x.positions(true) {
            self.freq[i] += 1;
        }
        self.members.push(x);
    }

    /// Removes and returns member `k`, preserving the order of the rest.
    pub fn remove(&mut self, k: usize) -> Packing {
        let x = self.members.remove(k);
        for i in x.positions(true) {
            self.freq[i] -= 1;
        }
        x
    }

    /// The entropy measure `H(P)`.
    pub fn entropy(&self) -> f64 {
        let m = self.members.len() as u32;
        self.freq.iter().map(|&h| entropy_term(h, m)).sum()
    }

    /// Entropy of the population with member `k` deleted, without mutating.
    ///
    /// Panics if the population has fewer than two members or `k` is out of
    /// range.
    pub fn entropy_without(&self, k: usize) -> f64 {
        assert!(self.members.len() >= 2, "need at least two members");
        let bits = self.members[k].bits();
        let m = (self.members.len() - 1) as u32;
        self.freq
            .iter()
            .zip(bits)
            .map(|(&h, &b)| entropy_term(h - u32::from(b), m))
            .sum()
    }
}
