//! Lower divergence: shortest detours around balls centered on a ray.
//!
//! Vertices are handled relative to the ball center and packed into
//! integers, so the search over an annulus of tens of millions of vertices
//! fits in memory.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::rays::RaySpec;
use crate::word::{Letter, Word};

/// Outer limit of the region searched for a detour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchBound {
    /// Stay within this distance of the center.
    Fixed(usize),
    /// Stay within `r + k` of the center.
    Offset(usize),
    /// Stay within `m·r + k` of the center.
    Scaled(usize, usize),
}

impl SearchBound {
    pub fn at(self, r: usize) -> usize {
        match self {
            SearchBound::Fixed(n) => n,
            SearchBound::Offset(k) => r + k,
            SearchBound::Scaled(m, k) => m * r + k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ldiv {
    Finite {
        length: usize,
        /// Letters of a shortest detour from `γ(t-r)` to `γ(t+r)`.
        witness: Word,
    },
    /// No detour inside the search bound.
    Infinite { r_max: usize },
}

impl Ldiv {
    pub fn value(&self) -> Option<usize> {
        match self {
            Ldiv::Finite { length, .. } => Some(*length),
            Ldiv::Infinite { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdivSample {
    pub r: usize,
    pub t: usize,
    pub r_max: usize,
    pub result: Ldiv,
    /// Vertices settled by the search.
    pub explored: usize,
}

trait Packed: Copy + Eq + Hash {
    fn zero() -> Self;
    fn push(self, code: u32, bits: u32) -> Self;
    fn pop(self, bits: u32) -> (Self, u32);
}

impl Packed for u64 {
    fn zero() -> Self {
        0
    }
    fn push(self, code: u32, bits: u32) -> Self {
        self << bits | code as u64
    }
    fn pop(self, bits: u32) -> (Self, u32) {
        (self >> bits, (self & ((1 << bits) - 1)) as u32)
    }
}

impl Packed for u128 {
    fn zero() -> Self {
        0
    }
    fn push(self, code: u32, bits: u32) -> Self {
        self << bits | code as u128
    }
    fn pop(self, bits: u32) -> (Self, u32) {
        (self >> bits, (self & ((1 << bits) - 1)) as u32)
    }
}

struct Codec {
    letters: Vec<Letter>,
    slot: HashMap<Letter, u32>,
    bits: u32,
}

impl Codec {
    fn new(group: &Group) -> Self {
        let letters = group.letters();
        let slot = letters.iter().enumerate().map(|(i, &l)| (l, i as u32 + 1)).collect();
        let bits = u32::BITS - (letters.len() as u32).leading_zeros();
        Codec { letters, slot, bits }
    }

    fn pack<P: Packed>(&self, w: &[Letter]) -> P {
        w.iter().fold(P::zero(), |p, l| p.push(self.slot[l], self.bits))
    }

    fn unpack<P: Packed>(&self, mut p: P, out: &mut Vec<Letter>) {
        out.clear();
        loop {
            let (rest, code) = p.pop(self.bits);
            if code == 0 {
                break;
            }
            out.push(self.letters[code as usize - 1]);
            p = rest;
        }
        out.reverse();
    }
}

/// A* over vertices `z` with `r ≤ |z| ≤ r_max`, guided by the unconstrained
/// distance to the target. Returns the detour word and the number of
/// settled vertices.
fn detour<P: Packed>(
    group: &Group,
    codec: &Codec,
    source: &Word,
    target: &Word,
    r: usize,
    r_max: usize,
) -> Result<(Option<Word>, usize)> {
    let cap = group.limits().ball_cap;
    let target_inv = group.inverse_word(target);
    let heuristic = |z: &[Letter]| group.mul_words(&target_inv, z).len();
    let source_key: P = codec.pack(source);
    let target_key: P = codec.pack(target);

    // best g and the slot of the letter used to arrive
    let mut best: HashMap<P, (u32, u8)> = HashMap::new();
    let mut buckets: Vec<Vec<(P, u32)>> = Vec::new();
    let push = |buckets: &mut Vec<Vec<(P, u32)>>, f: usize, item: (P, u32)| {
        if buckets.len() <= f {
            buckets.resize_with(f + 1, Vec::new);
        }
        buckets[f].push(item);
    };
    best.insert(source_key, (0, 0));
    push(&mut buckets, heuristic(source), (source_key, 0));
    let mut settled = 0usize;
    let mut buf = Vec::new();
    let mut f = 0;
    while f < buckets.len() {
        let Some((key, g)) = buckets[f].pop() else {
            f += 1;
            continue;
        };
        if best[&key].0 != g {
            continue;
        }
        if key == target_key {
            let mut path = Vec::with_capacity(g as usize);
            let mut cur = key;
            while cur != source_key {
                let slot = best[&cur].1 as usize;
                let l = codec.letters[slot - 1];
                path.push(l);
                codec.unpack(cur, &mut buf);
                group.push_letter(&mut buf, group.letter_inverse(l));
                cur = codec.pack(&buf);
            }
            path.reverse();
            return Ok((Some(Word::from(path)), settled));
        }
        settled += 1;
        if best.len() > cap {
            return Err(Error::ResourceLimit { what: "detour search size", cap });
        }
        codec.unpack(key, &mut buf);
        let base = buf.clone();
        for (i, &l) in codec.letters.iter().enumerate() {
            buf.clear();
            buf.extend_from_slice(&base);
            group.push_letter(&mut buf, l);
            if buf.len() < r || buf.len() > r_max {
                continue;
            }
            let next: P = codec.pack(&buf);
            let ng = g + 1;
            if best.get(&next).is_some_and(|&(old, _)| old <= ng) {
                continue;
            }
            best.insert(next, (ng, i as u8 + 1));
            push(&mut buckets, ng as usize + heuristic(&buf), (next, ng));
        }
    }
    Ok((None, settled))
}

/// Length of the shortest path from `γ(t-r)` to `γ(t+r)` avoiding the open
/// ball of radius `r` about `γ(t)`, searched within distance `r_max` of `γ(t)`.
pub fn ldiv_at(group: &Group, ray: &RaySpec, r: usize, t: usize, r_max: usize) -> Result<LdivSample> {
    if r == 0 || t <= r {
        return Err(Error::Precondition(format!("need t > r ≥ 1, got r = {r}, t = {t}")));
    }
    if t + r > ray.horizon {
        return Err(Error::HorizonExceeded { horizon: ray.horizon, needed: t + r });
    }
    if r_max < r {
        return Err(Error::Precondition(format!("search bound {r_max} is below r = {r}")));
    }
    let w = ray.unroll(t + r);
    let source = group.normalize(&group.invert_word(&w[t - r..t]));
    let target = group.normalize(&w[t..t + r]);
    let codec = Codec::new(group);
    let needed = codec.bits as usize * r_max;
    let (found, explored) = if needed < 64 {
        detour::<u64>(group, &codec, &source, &target, r, r_max)?
    } else if needed < 128 {
        detour::<u128>(group, &codec, &source, &target, r, r_max)?
    } else {
        return Err(Error::ResourceLimit { what: "search bound for packed words", cap: 127 / codec.bits as usize });
    };
    let result = match found {
        Some(witness) => Ldiv::Finite { length: witness.len(), witness },
        None => Ldiv::Infinite { r_max },
    };
    Ok(LdivSample { r, t, r_max, result, explored })
}

/// Checks that a finite witness joins the right endpoints and never enters
/// the open ball.
pub fn validate_detour(group: &Group, ray: &RaySpec, s: &LdivSample) -> bool {
    let Ldiv::Finite { length, witness } = &s.result else {
        return true;
    };
    let w = ray.unroll(s.t + s.r);
    let center = group.normalize(&w[..s.t]);
    let center_inv = group.inverse_word(&center);
    let mut cur = group.normalize(&w[..s.t - s.r]);
    let outside = |z: &Word| group.mul_words(&center_inv, z).len() >= s.r;
    if !outside(&cur) {
        return false;
    }
    for &l in witness.iter() {
        cur = group.mul_letter(&cur, l);
        if !outside(&cur) {
            return false;
        }
    }
    *length == witness.len() && cur == group.normalize(&w)
}

/// Center positions covering one period once the ball window has cleared
/// the prefix, together with every position whose window meets the prefix.
pub fn default_t_samples(ray: &RaySpec, r: usize) -> Vec<usize> {
    let first = r + 1;
    let periodic_from = (ray.prefix.len() + r).max(first);
    (first..periodic_from + ray.period.len()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Growth {
    NoDetour,
    Linear,
    Superlinear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    /// Slopes at or above this are superlinear.
    pub superlinear_slope: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { superlinear_slope: 1.2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceProfile {
    pub r_values: Vec<usize>,
    /// Minimum over the sampled `t`; `None` when no detour was found.
    pub ldiv_values: Vec<Option<usize>>,
    /// Least-squares slope of `ln ldiv` against `ln r` over finite entries.
    pub slope: f64,
    pub classification: Growth,
    /// The sample realizing each minimum (or the first infinite one).
    pub witnesses: Vec<LdivSample>,
}

pub fn loglog_slope(points: &[(usize, usize)]) -> f64 {
    let pts: Vec<(f64, f64)> =
        points.iter().map(|&(r, v)| ((r as f64).ln(), (v.max(1) as f64).ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn divergence_profile(
    group: &Group,
    ray: &RaySpec,
    r_values: &[usize],
    t_samples: Option<&[usize]>,
    bound: SearchBound,
    config: ClassifyConfig,
) -> Result<DivergenceProfile> {
    let mut ldiv_values = Vec::new();
    let mut witnesses = Vec::new();
    for &r in r_values {
        if 2 * r >= ray.horizon {
            return Err(Error::HorizonExceeded { horizon: ray.horizon, needed: 2 * r + 1 });
        }
        let ts = match t_samples {
            Some(ts) => ts.iter().copied().filter(|&t| t > r && t + r <= ray.horizon).collect(),
            None => default_t_samples(ray, r),
        };
        let mut best: Option<LdivSample> = None;
        for t in ts {
            let s = ldiv_at(group, ray, r, t, bound.at(r))?;
            let better = match (&best, s.result.value()) {
                (None, _) => true,
                (Some(b), Some(v)) => b.result.value().is_none_or(|bv| v < bv),
                (Some(_), None) => false,
            };
            if better {
                best = Some(s);
            }
        }
        let best = best.ok_or_else(|| Error::Precondition(format!("no admissible t for r = {r}")))?;
        ldiv_values.push(best.result.value());
        witnesses.push(best);
    }
    let finite: Vec<(usize, usize)> =
        r_values.iter().zip(&ldiv_values).filter_map(|(&r, v)| v.map(|v| (r, v))).collect();
    let slope = loglog_slope(&finite);
    let classification = if ldiv_values.iter().any(Option::is_none) {
        Growth::NoDetour
    } else if slope >= config.superlinear_slope {
        Growth::Superlinear
    } else {
        Growth::Linear
    };
    Ok(DivergenceProfile { r_values: r_values.to_vec(), ldiv_values, slope, classification, witnesses })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub r: usize,
    pub ldiv: Option<usize>,
    pub bound: f64,
    pub pass: bool,
}

/// Compares `slack · ldiv(r)` with `r²/(2D) − D`. A missing detour counts as
/// infinite divergence and passes.
pub fn quadratic_bound_check(
    profile_r: &[usize],
    profile_ldiv: &[Option<usize>],
    d_hat: usize,
    slack: f64,
) -> Result<(Vec<BoundCheck>, f64)> {
    if d_hat == 0 {
        return Err(Error::Precondition("D_hat must be at least 1".into()));
    }
    let d = d_hat as f64;
    let rows: Vec<BoundCheck> = profile_r
        .iter()
        .zip(profile_ldiv)
        .map(|(&r, &ldiv)| {
            let bound = (r * r) as f64 / (2.0 * d) - d;
            let pass = match ldiv {
                Some(v) => slack * v as f64 >= bound,
                None => true,
            };
            BoundCheck { r, ldiv, bound, pass }
        })
        .collect();
    let frac = rows.iter().filter(|b| b.pass).count() as f64 / rows.len().max(1) as f64;
    Ok((rows, frac))
}
