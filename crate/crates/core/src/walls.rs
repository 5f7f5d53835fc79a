//! Walls (hyperplanes) of the cube complex, identified algebraically.
//!
//! The edges dual to a wall of type `v` starting at `g` are exactly the
//! `v`-edges starting in the coset `g·⟨link(v)⟩`, so a wall is named by its
//! type and the shortest element of that coset. For an involution the two
//! endpoints of a dual edge are interchangeable and the smaller of the two
//! coset representatives is used.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::cayley::GeodesicPath;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::presentation::Order;
use crate::word::{Letter, Word};

/// A wall, compared by `(ty, key)` only.
#[derive(Debug, Clone)]
pub struct Wall {
    pub ty: usize,
    pub key: Word,
    /// A dual edge `(tail, letter)` the wall was built from.
    pub source: Option<(Word, Letter)>,
}

impl PartialEq for Wall {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty && self.key == other.key
    }
}

impl Eq for Wall {}

impl Hash for Wall {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ty.hash(state);
        self.key.hash(state);
    }
}

impl PartialOrd for Wall {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by key (ShortLex), then type.
impl Ord for Wall {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key).then(self.ty.cmp(&other.ty))
    }
}

impl Wall {
    /// The source edge if present, otherwise the positive `ty`-edge at `key`.
    pub fn dual_edge(&self) -> (Word, Letter) {
        match &self.source {
            Some(e) => e.clone(),
            None => (self.key.clone(), Letter::new(self.ty, false)),
        }
    }

    /// Representatives `k` such that the carrier's vertex set is the union
    /// of the cosets `k·⟨link(ty)⟩`.
    pub fn carrier_reps(&self, group: &Group) -> [Word; 2] {
        let v = Letter::new(self.ty, false);
        [self.key.clone(), group.mul_letter(&self.key, v)]
    }

    /// The carrier vertex `k·u` where `k` is the near (or far) representative.
    pub fn carrier_vertex(&self, group: &Group, u: &Word, far: bool) -> Result<GroupElement> {
        let link = group.graph().link(self.ty);
        if let Some(l) = u.iter().find(|l| link >> l.gen() & 1 == 0) {
            return Err(Error::Precondition(format!(
                "{} does not commute with {}",
                group.graph().format_letter(*l),
                group.graph().name(self.ty)
            )));
        }
        let rep = &self.carrier_reps(group)[far as usize];
        group.normal_form(&rep.concat(u))
    }

    pub fn format(&self, group: &Group) -> String {
        format!("{}@{}", group.graph().name(self.ty), group.graph().format_word(&self.key))
    }
}

/// Key of the wall dual to the edge from `tail` (a normal form) along `l`.
pub fn wall_key(group: &Group, tail: &Word, l: Letter) -> Word {
    let v = l.gen();
    let link = group.graph().link(v);
    match group.graph().order(v) {
        Order::Infinite => {
            if l.is_inverse() {
                group.strip_right(&group.mul_letter(tail, l), link)
            } else {
                group.strip_right(tail, link)
            }
        }
        Order::Two => {
            let a = group.strip_right(tail, link);
            let b = group.strip_right(&group.mul_letter(tail, l), link);
            a.min(b)
        }
    }
}

pub(crate) fn wall_from_words(group: &Group, tail: &Word, l: Letter) -> Wall {
    Wall { ty: l.gen(), key: wall_key(group, tail, l), source: Some((tail.clone(), l)) }
}

pub fn wall_of_edge(group: &Group, tail: &GroupElement, l: Letter) -> Result<Wall> {
    group.check_same(tail)?;
    group.graph().check_letter(l)?;
    Ok(wall_from_words(group, tail.word(), l))
}

/// Walls crossed by the path `base·w` (a normal form and a reduced word), in order.
pub(crate) fn walls_along(group: &Group, base: &Word, w: &[Letter]) -> Vec<Wall> {
    let mut cur = base.clone();
    let mut out = Vec::with_capacity(w.len());
    for &l in w {
        out.push(wall_from_words(group, &cur, l));
        cur = group.mul_letter(&cur, l);
    }
    out
}

pub fn walls_of_path(group: &Group, path: &GeodesicPath) -> Result<Vec<Wall>> {
    group.check_same(path.base())?;
    Ok(walls_along(group, path.base().word(), path.word()))
}

/// `w ∈ ⟨A⟩·⟨B⟩` for generator masks `a` and `b`.
pub fn product_membership(group: &Group, w: &GroupElement, a: u64, b: u64) -> bool {
    group.product_membership(w.word(), a, b)
}

/// Crossing test through carrier intersection.
pub fn crosses_by_carrier(group: &Group, w1: &Wall, w2: &Wall) -> bool {
    if w1 == w2 || w1.ty == w2.ty || !group.graph().commute(w1.ty, w2.ty) {
        return false;
    }
    let l1 = group.graph().link(w1.ty);
    let l2 = group.graph().link(w2.ty);
    let r1 = w1.carrier_reps(group);
    let r2 = w2.carrier_reps(group);
    r1.iter().any(|k1| {
        r2.iter().any(|k2| group.product_membership(&group.quotient_word(k1, k2), l1, l2))
    })
}

/// Crossing test through the heap of a geodesic meeting both walls.
pub fn crosses_by_heap(group: &Group, w1: &Wall, w2: &Wall) -> bool {
    if w1 == w2 {
        return false;
    }
    let ends = |w: &Wall| {
        let (tail, l) = w.dual_edge();
        let head = group.mul_letter(&tail, l);
        [tail, head]
    };
    let e1 = ends(w1);
    let e2 = ends(w2);
    for x in &e1 {
        for y in &e2 {
            let u = group.quotient_word(x, y);
            let walls = walls_along(group, x, &u);
            let p1 = walls.iter().position(|w| w == w1);
            let p2 = walls.iter().position(|w| w == w2);
            if let (Some(p1), Some(p2)) = (p1, p2) {
                let (i, j) = (p1.min(p2), p1.max(p2));
                return !group.heap_above(&u, i)[j];
            }
        }
    }
    unreachable!("some pair of dual-edge endpoints is separated by both walls")
}

/// Whether two walls cross. Both algorithms run in debug builds and must agree.
pub fn crosses(group: &Group, w1: &Wall, w2: &Wall) -> bool {
    let a = crosses_by_carrier(group, w1, w2);
    debug_assert_eq!(a, crosses_by_heap(group, w1, w2), "{w1:?} {w2:?}");
    a
}

/// Whether `wall` separates `x` from `y`.
pub fn separates(group: &Group, wall: &Wall, x: &GroupElement, y: &GroupElement) -> Result<bool> {
    group.check_same(x)?;
    group.check_same(y)?;
    let u = group.quotient_word(x.word(), y.word());
    Ok(walls_along(group, x.word(), &u).contains(wall))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    Crossing,
    Disjoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationVerdict {
    pub relation: Relation,
    /// Walls found crossing both inputs; meaningful for `Disjoint`.
    pub crossing_both_count: usize,
    pub search_radius: usize,
    /// Largest `k` for which `count > k` is certified by the witnesses.
    pub certified_over_k: Option<usize>,
    /// Sorted by key.
    pub witnesses: Vec<Wall>,
    /// No generator commutes with both types, so the count is exactly zero
    /// regardless of radius.
    pub type_certified: bool,
    /// The search stopped once the count exceeded the queried threshold.
    pub stopped_early: bool,
}

impl SeparationVerdict {
    fn simple(relation: Relation, radius: usize) -> Self {
        SeparationVerdict {
            relation,
            crossing_both_count: 0,
            search_radius: radius,
            certified_over_k: None,
            witnesses: Vec::new(),
            type_certified: false,
            stopped_early: false,
        }
    }

    /// `Disjoint` with at most `k` walls crossing both.
    pub fn is_k_separated(&self, k: usize) -> bool {
        self.relation == Relation::Disjoint && self.crossing_both_count <= k
    }

    /// Whether a small count is only known inside the search ball.
    pub fn radius_limited(&self) -> bool {
        self.relation == Relation::Disjoint && !self.type_certified
    }
}

/// Endpoints `(x, y)` of the two dual edges at minimal distance, and the
/// midpoint of the normal-form geodesic between them.
pub fn separation_center(group: &Group, w1: &Wall, w2: &Wall) -> Word {
    let ends = |w: &Wall| {
        let (tail, l) = w.dual_edge();
        let head = group.mul_letter(&tail, l);
        [tail, head]
    };
    let e1 = ends(w1);
    let e2 = ends(w2);
    let mut best: Option<(usize, &Word, Word)> = None;
    for x in &e1 {
        for y in &e2 {
            let u = group.quotient_word(x, y);
            if best.as_ref().is_none_or(|b| u.len() < b.0) {
                best = Some((u.len(), x, u));
            }
        }
    }
    let (d, x, u) = best.expect("four endpoint pairs");
    group.mul_words(x, &u[..d / 2])
}

/// Decides the relation of two walls and, for disjoint walls, counts walls
/// crossing both among those dual to edges of a ball around the separation
/// center. With `threshold = Some(k)` the search stops as soon as the count
/// exceeds `k`.
pub fn separation(
    group: &Group,
    w1: &Wall,
    w2: &Wall,
    radius: usize,
    threshold: Option<usize>,
) -> Result<SeparationVerdict> {
    if radius == 0 {
        return Err(Error::Precondition("separation radius must be at least 1".into()));
    }
    if w1 == w2 {
        return Ok(SeparationVerdict::simple(Relation::Equal, radius));
    }
    if crosses(group, w1, w2) {
        return Ok(SeparationVerdict::simple(Relation::Crossing, radius));
    }
    let g = group.graph();
    let candidates = g.link(w1.ty) & g.link(w2.ty) & !(1 << w1.ty) & !(1 << w2.ty);
    let mut verdict = SeparationVerdict::simple(Relation::Disjoint, radius);
    if candidates == 0 {
        verdict.type_certified = true;
        return Ok(verdict);
    }
    let letters: Vec<Letter> =
        group.letters().into_iter().filter(|l| candidates >> l.gen() & 1 == 1).collect();
    let all_letters = group.letters();
    let center = separation_center(group, w1, w2);
    let cap = group.limits().ball_cap;

    let mut seen: HashSet<Wall> = HashSet::new();
    let mut found: Vec<Wall> = Vec::new();
    let mut layer: Vec<Word> = vec![Word::new()];
    let mut total = 1usize;
    'outer: for n in 0..=radius {
        for u in &layer {
            for &l in &letters {
                if group.mul_letter(u, l).len() > radius {
                    continue;
                }
                let z = group.mul_words(&center, u);
                let wall = wall_from_words(group, &z, l);
                if !seen.insert(wall.clone()) {
                    continue;
                }
                if crosses(group, &wall, w1) && crosses(group, &wall, w2) {
                    found.push(wall);
                    if threshold.is_some_and(|k| found.len() > k) {
                        verdict.stopped_early = true;
                        break 'outer;
                    }
                }
            }
        }
        if n == radius {
            break;
        }
        let mut next: HashSet<Word> = HashSet::new();
        for u in &layer {
            for &l in &all_letters {
                let v = group.mul_letter(u, l);
                if v.len() == n + 1 {
                    next.insert(v);
                }
            }
        }
        total += next.len();
        if total > cap {
            return Err(Error::ResourceLimit { what: "separation ball size", cap });
        }
        layer = next.into_iter().collect();
        layer.sort_unstable();
    }
    found.sort();
    verdict.crossing_both_count = found.len();
    verdict.certified_over_k = found.len().checked_sub(1);
    verdict.witnesses = found;
    Ok(verdict)
}

/// Number of distinct walls dual to edges with both endpoints in `ball(center, radius)`.
pub fn walls_meeting_ball(group: &Group, center: &GroupElement, radius: usize) -> Result<usize> {
    group.check_same(center)?;
    let layers = crate::cayley::spheres(group, radius)?;
    let mut seen = HashSet::new();
    for u in layers.iter().flatten() {
        for l in group.letters() {
            if group.mul_letter(u, l).len() <= radius {
                let z = group.mul_words(center.word(), u);
                seen.insert(wall_from_words(group, &z, l));
            }
        }
    }
    Ok(seen.len())
}
