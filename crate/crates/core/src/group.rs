//! Exact word arithmetic in graph products of cyclic groups of order 2 or ∞.
//!
//! Every element is stored as its ShortLex-least geodesic word. Geodesic
//! words for one element differ only by swaps of adjacent commuting letters,
//! so the canonical word is the lexicographically least linearization of the
//! element's heap. Right multiplication by a letter either deletes the last
//! occurrence of its generator that can be shuffled to the end, or inserts
//! the letter at the leftmost slot it can reach where it beats its right
//! neighbour.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presentation::{Order, PresentationGraph};
use crate::word::{Letter, Word};

/// Hard caps on enumerations. Exceeding a cap is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of vertices held by one ball or search.
    pub ball_cap: usize,
    /// Maximum distance between the endpoints of an interval.
    pub interval_distance_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { ball_cap: 5_000_000, interval_distance_cap: 64 }
    }
}

/// A group element in normal form, tagged with the fingerprint of its graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    nf: Word,
    graph: u64,
}

impl GroupElement {
    pub fn word(&self) -> &Word {
        &self.nf
    }

    pub fn len(&self) -> usize {
        self.nf.len()
    }

    pub fn is_identity(&self) -> bool {
        self.nf.is_empty()
    }

    pub fn graph_id(&self) -> u64 {
        self.graph
    }
}

/// A presentation graph together with precomputed tables for word arithmetic.
#[derive(Clone)]
pub struct Group {
    graph: Arc<PresentationGraph>,
    id: u64,
    limits: Limits,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group").field("rank", &self.graph.rank()).field("id", &self.id).finish()
    }
}

impl Group {
    pub fn new(graph: PresentationGraph) -> Self {
        let id = graph.fingerprint();
        Group { graph: Arc::new(graph), id, limits: Limits::default() }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn graph(&self) -> &PresentationGraph {
        &self.graph
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.graph.letters()
    }

    /// Distinct generators that commute.
    #[inline]
    pub fn independent(&self, a: Letter, b: Letter) -> bool {
        a.gen() != b.gen() && self.graph.commute(a.gen(), b.gen())
    }

    #[inline]
    fn cancels(&self, a: Letter, b: Letter) -> bool {
        a.gen() == b.gen()
            && (self.graph.order(a.gen()) == Order::Two || a.is_inverse() != b.is_inverse())
    }

    pub fn letter_inverse(&self, l: Letter) -> Letter {
        self.graph.letter_inverse(l)
    }

    pub fn check_same(&self, g: &GroupElement) -> Result<()> {
        if g.graph == self.id {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { nf: Word::new(), graph: self.id }
    }

    /// Wraps a word already known to be in normal form.
    pub(crate) fn wrap(&self, nf: Word) -> GroupElement {
        debug_assert_eq!(self.normalize(&nf), nf);
        GroupElement { nf, graph: self.id }
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let w = self.graph.parse_word(text)?;
        Ok(self.wrap(self.normalize(&w)))
    }

    pub fn format(&self, g: &GroupElement) -> String {
        self.graph.format_word(g.word())
    }

    /// Right-multiplies a normal form by one letter, in place.
    pub fn push_letter(&self, nf: &mut Vec<Letter>, l: Letter) {
        let mut p = nf.len();
        while p > 0 {
            let x = nf[p - 1];
            if x.gen() == l.gen() {
                if self.cancels(x, l) {
                    nf.remove(p - 1);
                    return;
                }
                break;
            }
            if !self.graph.commute(x.gen(), l.gen()) {
                break;
            }
            p -= 1;
        }
        let q = nf[p..].iter().position(|&x| x > l).map_or(nf.len(), |i| p + i);
        nf.insert(q, l);
    }

    pub fn mul_letter(&self, nf: &Word, l: Letter) -> Word {
        let mut v = Vec::with_capacity(nf.len() + 1);
        v.extend_from_slice(nf);
        self.push_letter(&mut v, l);
        Word::from(v)
    }

    /// Normal form of an arbitrary (valid) word.
    pub fn normalize(&self, w: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(w.len());
        for &l in w {
            self.push_letter(&mut v, l);
        }
        Word::from(v)
    }

    /// Normal form of `nf · w`.
    pub fn mul_words(&self, nf: &Word, w: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(nf.len() + w.len());
        v.extend_from_slice(nf);
        for &l in w {
            self.push_letter(&mut v, l);
        }
        Word::from(v)
    }

    /// Formal inverse: reversed, with letters inverted. Not normalized.
    pub fn invert_word(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().rev().map(|&l| self.letter_inverse(l)).collect()
    }

    pub fn inverse_word(&self, nf: &Word) -> Word {
        self.normalize(&self.invert_word(nf))
    }

    /// Normal form of `a⁻¹ b`.
    pub fn quotient_word(&self, a: &Word, b: &Word) -> Word {
        let inv = self.inverse_word(a);
        self.mul_words(&inv, b)
    }

    pub fn word_distance(&self, a: &Word, b: &Word) -> usize {
        self.quotient_word(a, b).len()
    }

    pub fn normal_form(&self, w: &Word) -> Result<GroupElement> {
        self.graph.check_word(w)?;
        Ok(GroupElement { nf: self.normalize(w), graph: self.id })
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_same(g)?;
        self.check_same(h)?;
        Ok(GroupElement { nf: self.mul_words(&g.nf, &h.nf), graph: self.id })
    }

    pub fn mul_element_letter(&self, g: &GroupElement, l: Letter) -> GroupElement {
        GroupElement { nf: self.mul_letter(&g.nf, l), graph: self.id }
    }

    pub fn mul_element_word(&self, g: &GroupElement, w: &[Letter]) -> GroupElement {
        GroupElement { nf: self.mul_words(&g.nf, w), graph: self.id }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_same(g)?;
        Ok(GroupElement { nf: self.inverse_word(&g.nf), graph: self.id })
    }

    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> Result<usize> {
        self.check_same(g)?;
        self.check_same(h)?;
        Ok(self.word_distance(&g.nf, &h.nf))
    }

    /// A word is geodesic iff no two letters that cancel can be shuffled together.
    pub fn is_geodesic(&self, w: &Word) -> Result<bool> {
        self.graph.check_word(w)?;
        Ok(self.is_reduced(w))
    }

    pub(crate) fn is_reduced(&self, w: &[Letter]) -> bool {
        for j in 1..w.len() {
            let l = w[j];
            for i in (0..j).rev() {
                let x = w[i];
                if x.gen() == l.gen() {
                    if self.cancels(x, l) {
                        return false;
                    }
                    break;
                }
                if !self.graph.commute(x.gen(), l.gen()) {
                    break;
                }
            }
        }
        true
    }

    /// Whether positions `i < j` (1-based) of a geodesic word are ordered in
    /// its heap, i.e. joined by a chain of pairwise dependent letters.
    pub fn dependence_comparable(&self, w: &Word, i: usize, j: usize) -> Result<bool> {
        let n = w.len();
        for idx in [i, j] {
            if idx == 0 || idx > n {
                return Err(Error::IndexOutOfRange { index: idx, len: n });
            }
        }
        if i >= j {
            return Err(Error::Precondition(format!("need i < j, got {i} and {j}")));
        }
        if !self.is_geodesic(w)? {
            return Err(Error::NotGeodesic);
        }
        Ok(self.heap_above(w, i - 1)[j - 1])
    }

    /// `reach[p]` is true when position `p` lies above position `start` in the heap.
    pub(crate) fn heap_above(&self, w: &[Letter], start: usize) -> Vec<bool> {
        let mut reach = vec![false; w.len()];
        reach[start] = true;
        for p in start + 1..w.len() {
            reach[p] = (start..p).any(|q| reach[q] && !self.independent(w[q], w[p]));
        }
        reach
    }

    /// Removes the largest final segment of the heap made of letters whose
    /// generators lie in `mask`. On a normal form the result is the minimal
    /// representative of the coset `w·⟨mask⟩`, again in normal form.
    pub fn strip_right(&self, w: &[Letter], mask: u64) -> Word {
        let n = w.len();
        let mut removed = vec![false; n];
        for j in (0..n).rev() {
            let l = w[j];
            if mask >> l.gen() & 1 == 0 {
                continue;
            }
            if (j + 1..n).all(|k| removed[k] || self.independent(l, w[k])) {
                removed[j] = true;
            }
        }
        w.iter().zip(&removed).filter(|(_, &r)| !r).map(|(&l, _)| l).collect()
    }

    /// Mirror of [`Group::strip_right`] on the left. The result is reduced
    /// but not necessarily in normal form.
    pub fn strip_left(&self, w: &[Letter], mask: u64) -> Word {
        let n = w.len();
        let mut removed = vec![false; n];
        for j in 0..n {
            let l = w[j];
            if mask >> l.gen() & 1 == 0 {
                continue;
            }
            if (0..j).all(|k| removed[k] || self.independent(l, w[k])) {
                removed[j] = true;
            }
        }
        w.iter().zip(&removed).filter(|(_, &r)| !r).map(|(&l, _)| l).collect()
    }

    /// Canonical (shortest) representative of the left coset `g·⟨mask⟩`.
    pub fn coset_representative(&self, nf: &Word, mask: u64) -> Word {
        self.strip_right(nf, mask)
    }

    /// Decides `w ∈ ⟨a⟩·⟨b⟩` by stripping left divisors in `a` and right
    /// divisors in `b` to a fixpoint.
    pub fn product_membership(&self, w: &Word, a: u64, b: u64) -> bool {
        let mut cur = w.clone();
        loop {
            let next = self.strip_right(&self.strip_left(&cur, a), b);
            if next.is_empty() {
                return true;
            }
            if next.len() == cur.len() {
                return false;
            }
            cur = next;
        }
    }

    /// Bitmask of a generator set given by name.
    pub fn mask_of(&self, names: &[&str]) -> Result<u64> {
        names.iter().try_fold(0u64, |m, n| {
            let i = self
                .graph
                .generator_index(n)
                .ok_or_else(|| Error::InvalidLetter(format!("unknown generator `{n}`")))?;
            Ok(m | 1 << i)
        })
    }
}
