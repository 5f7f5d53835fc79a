//! Finite pieces of the Cayley graph: balls, intervals, geodesic paths and
//! nearest-point projections, all in the edge-path metric.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::word::{Letter, Word};

/// A geodesic edge path `base, base·l₁, base·l₁l₂, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPath {
    base: GroupElement,
    word: Word,
    vertices: Vec<GroupElement>,
}

impl GeodesicPath {
    pub fn new(group: &Group, base: &GroupElement, word: &Word) -> Result<Self> {
        group.check_same(base)?;
        if !group.is_geodesic(word)? {
            return Err(Error::NotGeodesic);
        }
        let mut vertices = Vec::with_capacity(word.len() + 1);
        let mut cur = base.clone();
        vertices.push(cur.clone());
        for &l in word.iter() {
            cur = group.mul_element_letter(&cur, l);
            vertices.push(cur.clone());
        }
        Ok(GeodesicPath { base: base.clone(), word: word.clone(), vertices })
    }

    pub fn from_identity(group: &Group, word: &Word) -> Result<Self> {
        Self::new(group, &group.identity(), word)
    }

    pub fn base(&self) -> &GroupElement {
        &self.base
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The `i`-th edge as (tail vertex, letter), 0-based.
    pub fn edge(&self, i: usize) -> (&GroupElement, Letter) {
        (&self.vertices[i], self.word[i])
    }
}

/// All elements within a given distance of a center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: GroupElement,
    pub radius: usize,
    /// BFS order; within a sphere, ShortLex order of the offset `center⁻¹·z`.
    pub elements: Vec<GroupElement>,
    /// `sphere_starts[n]` is the index of the first element at distance `n`.
    pub sphere_starts: Vec<usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sphere(&self, n: usize) -> &[GroupElement] {
        let end = self.sphere_starts.get(n + 1).copied().unwrap_or(self.elements.len());
        &self.elements[self.sphere_starts[n]..end]
    }
}

/// Letters that can start a geodesic word for the element `w` (its heap minima).
pub fn first_letters(group: &Group, w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for (p, &l) in w.iter().enumerate() {
        if out.iter().any(|x| x.gen() == l.gen()) {
            continue;
        }
        if w[..p].iter().all(|&x| group.independent(x, l)) {
            out.push(l);
        }
    }
    out
}

/// Layered spheres around the identity, as normal forms. Each layer is
/// sorted in ShortLex order.
pub fn spheres(group: &Group, radius: usize) -> Result<Vec<Vec<Word>>> {
    let cap = group.limits().ball_cap;
    let letters = group.letters();
    let mut layers: Vec<Vec<Word>> = vec![vec![Word::new()]];
    let mut total = 1usize;
    for n in 0..radius {
        let mut seen: HashSet<Word> = HashSet::new();
        for u in &layers[n] {
            for &l in &letters {
                let v = group.mul_letter(u, l);
                if v.len() == n + 1 {
                    seen.insert(v);
                }
            }
        }
        total += seen.len();
        if total > cap {
            return Err(Error::ResourceLimit { what: "ball size", cap });
        }
        let mut next: Vec<Word> = seen.into_iter().collect();
        next.sort_unstable();
        layers.push(next);
    }
    Ok(layers)
}

pub fn ball(group: &Group, center: &GroupElement, radius: usize) -> Result<Ball> {
    group.check_same(center)?;
    let layers = spheres(group, radius)?;
    let mut elements = Vec::new();
    let mut sphere_starts = Vec::with_capacity(layers.len());
    for layer in layers {
        sphere_starts.push(elements.len());
        elements.extend(layer.iter().map(|u| group.mul_element_word(center, u)));
    }
    Ok(Ball { center: center.clone(), radius, elements, sphere_starts })
}

pub fn distance(group: &Group, g: &GroupElement, h: &GroupElement) -> Result<usize> {
    group.distance(g, h)
}

/// Offsets `z` with `d(e,z) + d(z,u) = d(e,u)`, i.e. the prefixes of geodesic
/// words for `u`. Sorted in ShortLex order.
pub fn interval_offsets(group: &Group, u: &Word) -> Result<Vec<Word>> {
    let limits = group.limits();
    if u.len() > limits.interval_distance_cap {
        return Err(Error::ResourceLimit {
            what: "interval endpoint distance",
            cap: limits.interval_distance_cap,
        });
    }
    let mut out = vec![Word::new()];
    // (prefix, remaining suffix as an element)
    let mut layer: Vec<(Word, Word)> = vec![(Word::new(), u.clone())];
    for _ in 0..u.len() {
        let mut next: HashSet<(Word, Word)> = HashSet::new();
        for (z, rest) in &layer {
            for l in first_letters(group, rest) {
                let z2 = group.mul_letter(z, l);
                let rest2 = group.normalize(&[&[group.letter_inverse(l)][..], rest].concat());
                next.insert((z2, rest2));
            }
        }
        if out.len() + next.len() > limits.ball_cap {
            return Err(Error::ResourceLimit { what: "interval size", cap: limits.ball_cap });
        }
        let mut next: Vec<(Word, Word)> = next.into_iter().collect();
        next.sort_unstable();
        out.extend(next.iter().map(|(z, _)| z.clone()));
        layer = next;
    }
    out.sort_unstable();
    Ok(out)
}

/// The median-graph interval `I(g,h)`.
pub fn interval(group: &Group, g: &GroupElement, h: &GroupElement) -> Result<Vec<GroupElement>> {
    group.check_same(g)?;
    group.check_same(h)?;
    let u = group.quotient_word(g.word(), h.word());
    let mut out: Vec<GroupElement> = interval_offsets(group, &u)?
        .iter()
        .map(|z| group.mul_element_word(g, z))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Median of three vertices: the unique vertex lying on geodesics between each pair.
pub fn median(
    group: &Group,
    x: &GroupElement,
    y: &GroupElement,
    z: &GroupElement,
) -> Result<GroupElement> {
    let dxy = group.distance(x, y)?;
    let dxz = group.distance(x, z)?;
    let dyz = group.distance(y, z)?;
    // d(x, m) is fixed by the three pairwise distances.
    let dxm = (dxy + dxz - dyz) / 2;
    interval(group, x, y)?
        .into_iter()
        .find(|m| {
            group.word_distance(x.word(), m.word()) == dxm
                && group.word_distance(m.word(), z.word()) == dxz - dxm
        })
        .ok_or_else(|| Error::Precondition("no median found".into()))
}

/// Indices of the path vertices nearest to `x`, with the minimal distance.
pub fn project_indices(group: &Group, vertices: &[Word], x: &Word) -> (usize, Vec<usize>) {
    let inv = group.inverse_word(x);
    let mut best = usize::MAX;
    let mut idx = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        let d = group.mul_words(&inv, v).len();
        if d < best {
            best = d;
            idx.clear();
        }
        if d == best {
            idx.push(i);
        }
    }
    (best, idx)
}

/// Nearest path vertices to `x`; all ties are returned in path order.
pub fn project(group: &Group, path: &GeodesicPath, x: &GroupElement) -> Result<Vec<GroupElement>> {
    group.check_same(x)?;
    group.check_same(path.base())?;
    let words: Vec<Word> = path.vertices().iter().map(|v| v.word().clone()).collect();
    let (_, idx) = project_indices(group, &words, x.word());
    Ok(idx.into_iter().map(|i| path.vertices()[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn small_balls() {
        let h = catalog::group("hexagon").unwrap();
        assert_eq!(ball(&h, &h.identity(), 1).unwrap().len(), 7);
        let ck = catalog::group("croke-kleiner").unwrap();
        assert_eq!(ball(&ck, &ck.identity(), 1).unwrap().len(), 9);
        let b = ball(&h, &h.parse_element("h1 h3").unwrap(), 2).unwrap();
        assert_eq!(b.sphere(0), &[h.parse_element("h1 h3").unwrap()]);
        assert_eq!(b.sphere(1).len(), 6);
    }

    #[test]
    fn ball_cap_is_enforced() {
        let h = catalog::group("hexagon")
            .unwrap()
            .with_limits(crate::Limits { ball_cap: 50, interval_distance_cap: 64 });
        assert!(matches!(
            ball(&h, &h.identity(), 3),
            Err(Error::ResourceLimit { what: "ball size", cap: 50 })
        ));
    }

    #[test]
    fn distances() {
        let h = catalog::group("hexagon").unwrap();
        let e = |s: &str| h.parse_element(s).unwrap();
        assert_eq!(distance(&h, &e("ε"), &e("h1 h2")).unwrap(), 2);
        assert_eq!(distance(&h, &e("h1"), &e("h2")).unwrap(), 2);
        let ck = catalog::group("croke-kleiner").unwrap();
        assert_eq!(ck.distance(&ck.identity(), &ck.parse_element("a b a b").unwrap()).unwrap(), 4);
    }

    #[test]
    fn intervals() {
        let h = catalog::group("hexagon").unwrap();
        let e = |s: &str| h.parse_element(s).unwrap();
        let i = interval(&h, &h.identity(), &e("h1 h2")).unwrap();
        let mut want = vec![e("ε"), e("h1"), e("h2"), e("h1 h2")];
        want.sort();
        assert_eq!(i, want);
        assert_eq!(interval(&h, &h.identity(), &e("h1 h3")).unwrap().len(), 3);
        let ck = catalog::group("croke-kleiner").unwrap();
        let i = interval(&ck, &ck.identity(), &ck.parse_element("a b").unwrap()).unwrap();
        assert_eq!(i.len(), 4);
    }

    #[test]
    fn medians() {
        let h = catalog::group("hexagon").unwrap();
        let e = |s: &str| h.parse_element(s).unwrap();
        assert_eq!(median(&h, &e("h1"), &e("h2"), &e("ε")).unwrap(), e("ε"));
        assert_eq!(median(&h, &e("h1"), &e("h2"), &e("h1 h2 h4")).unwrap(), e("h1 h2"));
    }

    #[test]
    fn projections() {
        let h = catalog::group("hexagon").unwrap();
        let path = GeodesicPath::from_identity(&h, &h.graph().parse_word("h1 h3").unwrap()).unwrap();
        let x = h.parse_element("h2").unwrap();
        assert_eq!(project(&h, &path, &x).unwrap(), vec![h.identity()]);
        let on = h.parse_element("h1").unwrap();
        assert_eq!(project(&h, &path, &on).unwrap(), vec![on.clone()]);
        assert!(GeodesicPath::from_identity(&h, &h.graph().parse_word("h1 h1").unwrap()).is_err());
    }
}
