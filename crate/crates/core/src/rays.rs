//! Eventually periodic geodesic rays, the contracting-ray detector, and the
//! contraction and slimness estimators.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::{interval_offsets, project_indices, spheres, GeodesicPath};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::walls::{separation, walls_along, SeparationVerdict};
use crate::word::{Letter, Word};

/// The ray `prefix · period · period · …` from the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySpec {
    pub prefix: Word,
    pub period: Word,
    pub horizon: usize,
}

impl RaySpec {
    /// Checks that the first `horizon` letters form a geodesic word.
    pub fn new(group: &Group, prefix: Word, period: Word, horizon: usize) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Precondition("ray period must be nonempty".into()));
        }
        group.graph().check_word(&prefix)?;
        group.graph().check_word(&period)?;
        let ray = RaySpec { prefix, period, horizon };
        if !group.is_geodesic(&ray.unroll(horizon))? {
            return Err(Error::NotGeodesic);
        }
        Ok(ray)
    }

    pub fn parse(group: &Group, prefix: &str, period: &str, horizon: usize) -> Result<Self> {
        let g = group.graph();
        Self::new(group, g.parse_word(prefix)?, g.parse_word(period)?, horizon)
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `n` letters.
    pub fn unroll(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter(i)).collect()
    }

    pub fn path(&self, group: &Group, n: usize) -> Result<GeodesicPath> {
        GeodesicPath::from_identity(group, &self.unroll(n))
    }

    pub fn format(&self, group: &Group) -> String {
        let g = group.graph();
        if self.prefix.is_empty() {
            format!("({})^∞", g.format_word(&self.period))
        } else {
            format!("{} ({})^∞", g.format_word(&self.prefix), g.format_word(&self.period))
        }
    }
}

/// Draws a random eventually periodic geodesic ray. Letters are proposed
/// uniformly and rejected when the unrolled word stops being geodesic.
pub fn sample_ray(
    group: &Group,
    rng: &mut impl Rng,
    prefix_len: usize,
    period_len: usize,
    horizon: usize,
) -> Result<RaySpec> {
    sample_ray_in(group, &group.letters(), rng, prefix_len, period_len, horizon)
}

/// [`sample_ray`] restricted to the given letters.
pub fn sample_ray_in(
    group: &Group,
    letters: &[Letter],
    rng: &mut impl Rng,
    prefix_len: usize,
    period_len: usize,
    horizon: usize,
) -> Result<RaySpec> {
    if letters.is_empty() {
        return Err(Error::Precondition("no letters to sample from".into()));
    }
    for _ in 0..10_000 {
        let mut w: Vec<Letter> = Vec::new();
        let mut stuck = 0;
        while w.len() < prefix_len + period_len && stuck < 100 {
            let l = *letters.choose(rng).expect("nonempty alphabet");
            w.push(l);
            if group.is_reduced(&w) {
                stuck = 0;
            } else {
                w.pop();
                stuck += 1;
            }
        }
        if w.len() < prefix_len + period_len {
            continue;
        }
        let period = Word::from(&w[prefix_len..]);
        let prefix = Word::from(&w[..prefix_len]);
        if let Ok(ray) = RaySpec::new(group, prefix, period, horizon) {
            return Ok(ray);
        }
    }
    Err(Error::Precondition("no geodesic periodic ray found".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorParams {
    pub k: usize,
    /// Consecutive chosen walls must be fewer than `r` edges apart.
    pub r: usize,
    pub radius: usize,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionWitness {
    /// 1-based edge positions of the chosen walls.
    pub indices: Vec<usize>,
    /// Verdict for each consecutive pair of `indices`.
    pub pair_verdicts: Vec<SeparationVerdict>,
    pub max_gap: usize,
    /// Some pair is only known to be k-separated inside the search radius.
    pub radius_limited: bool,
}

/// Stretch of the ray that no chain crosses: from the furthest reachable
/// position to the first later position that ends a short k-separated pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Obstruction {
    pub start: usize,
    pub end: usize,
    /// No short k-separated pair ends past `start` before the horizon.
    pub open: bool,
}

impl Obstruction {
    pub fn width(&self) -> usize {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detection {
    Accept(ContractionWitness),
    Reject(Obstruction),
}

impl Detection {
    pub fn is_accept(&self) -> bool {
        matches!(self, Detection::Accept(_))
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            Detection::Reject(o) => Some(o),
            Detection::Accept(_) => None,
        }
    }
}

/// Separation verdicts between walls at ray positions, memoized by the
/// subword joining them (verdicts are invariant under translation).
pub struct PairOracle<'a> {
    group: &'a Group,
    word: Word,
    radius: usize,
    threshold: Option<usize>,
    cache: HashMap<Vec<Letter>, SeparationVerdict>,
}

impl<'a> PairOracle<'a> {
    pub fn new(group: &'a Group, word: Word, radius: usize, threshold: Option<usize>) -> Self {
        PairOracle { group, word, radius, threshold, cache: HashMap::new() }
    }

    /// Verdict for the walls at 1-based positions `i < j`.
    pub fn verdict(&mut self, i: usize, j: usize) -> Result<&SeparationVerdict> {
        let sub = self.word[i - 1..j].to_vec();
        if !self.cache.contains_key(&sub) {
            let walls = walls_along(self.group, &Word::new(), &sub);
            let v = separation(self.group, &walls[0], &walls[sub.len() - 1], self.radius, self.threshold)?;
            self.cache.insert(sub.clone(), v);
        }
        Ok(&self.cache[&sub])
    }

    pub fn cache_size(&self) -> usize {
        self.cache.len()
    }
}

/// Looks for a chain of pairwise k-separated walls with gaps below `r`
/// crossing the ray from its first `r` edges to its last `r` edges.
pub fn detect_contracting(group: &Group, ray: &RaySpec, p: &DetectorParams) -> Result<Detection> {
    if p.r == 0 || p.radius == 0 {
        return Err(Error::Precondition("r and radius must be at least 1".into()));
    }
    let h = p.horizon;
    if h < 2 * p.r {
        return Err(Error::HorizonTooSmall { horizon: h, needed: 2 * p.r });
    }
    if h > ray.horizon {
        return Err(Error::HorizonExceeded { horizon: ray.horizon, needed: h });
    }
    let word = ray.unroll(h);
    let mut oracle = PairOracle::new(group, word, p.radius, Some(p.k));

    let mut reachable = vec![false; h + 1];
    let mut pred: Vec<Option<usize>> = vec![None; h + 1];
    for j in 1..=h {
        if j <= p.r {
            reachable[j] = true;
        }
        for i in j.saturating_sub(p.r - 1).max(1)..j {
            if reachable[i] && oracle.verdict(i, j)?.is_k_separated(p.k) {
                reachable[j] = true;
                pred[j] = Some(i);
                break;
            }
        }
    }

    let furthest = (1..=h).rev().find(|&j| reachable[j]).unwrap_or(0);
    if furthest > h - p.r {
        let mut indices = vec![furthest];
        while let Some(i) = pred[*indices.last().unwrap()] {
            indices.push(i);
        }
        indices.reverse();
        let mut pair_verdicts = Vec::new();
        for w in indices.windows(2) {
            pair_verdicts.push(oracle.verdict(w[0], w[1])?.clone());
        }
        let max_gap = indices.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
        let radius_limited = pair_verdicts.iter().any(|v| v.radius_limited());
        return Ok(Detection::Accept(ContractionWitness {
            indices,
            pair_verdicts,
            max_gap,
            radius_limited,
        }));
    }

    // the chain dies at `furthest`; the window runs to the next position where
    // any short k-separated pair lands
    for j in furthest + 1..=h {
        for i in j.saturating_sub(p.r - 1).max(1)..j {
            if oracle.verdict(i, j)?.is_k_separated(p.k) {
                return Ok(Detection::Reject(Obstruction {
                    start: furthest,
                    end: j,
                    open: false,
                }));
            }
        }
    }
    Ok(Detection::Reject(Obstruction {
        start: furthest,
        end: h,
        open: true,
    }))
}

/// Re-runs every pair of an accepted witness.
pub fn validate_witness(
    group: &Group,
    ray: &RaySpec,
    p: &DetectorParams,
    witness: &ContractionWitness,
) -> Result<bool> {
    let word = ray.unroll(p.horizon);
    let mut oracle = PairOracle::new(group, word, p.radius, Some(p.k));
    let idx = &witness.indices;
    if idx.first().is_none_or(|&i| i > p.r) || idx.last().is_none_or(|&j| j + p.r <= p.horizon) {
        return Ok(false);
    }
    for (w, v) in idx.windows(2).zip(&witness.pair_verdicts) {
        if w[1] <= w[0] || w[1] - w[0] >= p.r {
            return Ok(false);
        }
        let again = oracle.verdict(w[0], w[1])?;
        if again != v || !again.is_k_separated(p.k) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionSample {
    pub center: Word,
    pub radius: usize,
    pub diameter: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionEstimate {
    pub d_hat: usize,
    pub samples: Vec<ContractionSample>,
}

fn path_words(path: &GeodesicPath) -> Vec<Word> {
    path.vertices().iter().map(|v| v.word().clone()).collect()
}

/// Vertices at distance exactly `d` from the path, in ShortLex order.
pub fn vertices_at_distance(group: &Group, path: &GeodesicPath, d: usize) -> Result<Vec<Word>> {
    let verts = path_words(path);
    let sphere = spheres(group, d)?.pop().unwrap_or_default();
    let mut out = BTreeSet::new();
    for v in &verts {
        for u in &sphere {
            let c = group.mul_words(v, u);
            if project_indices(group, &verts, &c).0 == d {
                out.insert(c);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Projection diameter of `ball(center, radius)` onto the path, measured
/// along the path.
pub fn projection_diameter(group: &Group, verts: &[Word], center: &Word, radius: usize) -> Result<usize> {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for u in spheres(group, radius)?.iter().flatten() {
        let z = group.mul_words(center, u);
        let (_, idx) = project_indices(group, verts, &z);
        lo = lo.min(idx[0]);
        hi = hi.max(*idx.last().unwrap());
    }
    Ok(hi - lo)
}

fn choose<T: Clone>(items: &[T], budget: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    if items.len() <= budget {
        items.to_vec()
    } else {
        let mut idx: Vec<usize> = rand::seq::index::sample(rng, items.len(), budget).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| items[i].clone()).collect()
    }
}

/// Samples balls of each radius `ρ` whose centers lie at distance `ρ + 1`
/// from the path and records how far their projections spread.
pub fn estimate_contraction(
    group: &Group,
    path: &GeodesicPath,
    ball_radii: &[usize],
    sample_budget: usize,
    seed: u64,
) -> Result<ContractionEstimate> {
    let max_radius = ball_radii.iter().copied().max().unwrap_or(0);
    if path.len() < 2 * max_radius {
        return Err(Error::Precondition(format!(
            "path length {} is below twice the largest radius {max_radius}",
            path.len()
        )));
    }
    let verts = path_words(path);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    for &rho in ball_radii {
        let centers = vertices_at_distance(group, path, rho + 1)?;
        for c in choose(&centers, sample_budget, &mut rng) {
            let diameter = projection_diameter(group, &verts, &c, rho)?;
            samples.push(ContractionSample { center: c, radius: rho, diameter });
        }
    }
    let d_hat = samples.iter().map(|s| s.diameter).max().unwrap_or(0);
    Ok(ContractionEstimate { d_hat, samples })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlimnessSample {
    pub x: Word,
    /// Index of `y` on the path.
    pub y: usize,
    /// Index of `z` on the path, for the second condition.
    pub z: usize,
    pub value_i: usize,
    pub value_ii: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlimnessEstimate {
    pub delta_i: usize,
    pub delta_ii: usize,
    pub samples: Vec<SlimnessSample>,
}

fn distance_to_set(group: &Group, p: &Word, set: &[Word]) -> usize {
    let inv = group.inverse_word(p);
    set.iter().map(|z| group.mul_words(&inv, z).len()).min().unwrap_or(usize::MAX)
}

fn interval_points(group: &Group, x: &Word, y: &Word) -> Result<Vec<Word>> {
    let u = group.quotient_word(x, y);
    Ok(interval_offsets(group, &u)?.iter().map(|z| group.mul_words(x, z)).collect())
}

/// For a point `x` and path vertices `y`, `z`:
/// the first value is the largest distance from a projection point of `x`
/// to `I(x, y)`; the second is the largest distance from a path vertex
/// between `y` and `z` to `I(x, y) ∪ I(x, z)`.
pub fn slimness_values(
    group: &Group,
    verts: &[Word],
    x: &Word,
    y: usize,
    z: usize,
) -> Result<(usize, usize)> {
    let (_, proj) = project_indices(group, verts, x);
    let ixy = interval_points(group, x, &verts[y])?;
    let value_i = proj.iter().map(|&p| distance_to_set(group, &verts[p], &ixy)).max().unwrap_or(0);
    let mut union = ixy;
    union.extend(interval_points(group, x, &verts[z])?);
    let (a, b) = (y.min(z), y.max(z));
    let value_ii = (a..=b).map(|w| distance_to_set(group, &verts[w], &union)).max().unwrap_or(0);
    Ok((value_i, value_ii))
}

/// Samples triangles with one vertex `x` within `sample_radius` of the path
/// and two vertices on the path.
pub fn estimate_slimness(
    group: &Group,
    path: &GeodesicPath,
    sample_radius: usize,
    sample_budget: usize,
    seed: u64,
) -> Result<SlimnessEstimate> {
    let verts = path_words(path);
    let n = verts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = BTreeSet::new();
    let offsets = spheres(group, sample_radius)?;
    for v in &verts {
        for u in offsets.iter().flatten() {
            points.insert(group.mul_words(v, u));
        }
    }
    let points: Vec<Word> = points.into_iter().collect();
    let mut samples = Vec::new();
    for x in choose(&points, sample_budget, &mut rng) {
        let y = rng.gen_range(0..n);
        let z = rng.gen_range(0..n);
        let (value_i, value_ii) = slimness_values(group, &verts, &x, y, z)?;
        samples.push(SlimnessSample { x, y, z, value_i, value_ii });
    }
    Ok(SlimnessEstimate {
        delta_i: samples.iter().map(|s| s.value_i).max().unwrap_or(0),
        delta_ii: samples.iter().map(|s| s.value_ii).max().unwrap_or(0),
        samples,
    })
}

/// How far the projections of `beta`'s vertices onto `alpha` (both unrolled
/// to `horizon`) stray from the basepoint.
pub fn bounded_projection_check(
    group: &Group,
    alpha: &RaySpec,
    beta: &RaySpec,
    horizon: usize,
) -> Result<usize> {
    let a = alpha.unroll(horizon);
    let b = beta.unroll(horizon);
    if group.normalize(&a) == group.normalize(&b) {
        return Err(Error::RaysIndistinguishable(horizon));
    }
    let verts = path_words(&GeodesicPath::from_identity(group, &a)?);
    let (_, base) = project_indices(group, &verts, &Word::new());
    let p0 = base[0];
    let mut cur = Word::new();
    let mut worst = 0;
    for t in 0..=horizon {
        let (_, idx) = project_indices(group, &verts, &cur);
        worst = idx.iter().map(|&i| i.abs_diff(p0)).max().unwrap_or(0).max(worst);
        if t < horizon {
            cur = group.mul_letter(&cur, b[t]);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// `⟨a, b, c⟩`
    B1,
    /// `⟨b, c, d⟩`
    B2,
}

/// Greedy factorization of a word over `a, b, c, d` into maximal block
/// subwords: `a` forces `B1`, `d` forces `B2`, and `b`, `c` stay with the
/// current block (or join the first forced block).
pub fn block_decomposition(group: &Group, w: &Word) -> Result<Vec<(Block, Word)>> {
    let g = group.graph();
    g.check_word(w)?;
    let idx = |n: &str| {
        g.generator_index(n)
            .ok_or_else(|| Error::Precondition(format!("block decomposition needs generator `{n}`")))
    };
    let (a, b, c, d) = (idx("a")?, idx("b")?, idx("c")?, idx("d")?);
    let forced = |l: Letter| -> Result<Option<Block>> {
        let gen = l.gen();
        if gen == a {
            Ok(Some(Block::B1))
        } else if gen == d {
            Ok(Some(Block::B2))
        } else if gen == b || gen == c {
            Ok(None)
        } else {
            Err(Error::InvalidLetter(format!("`{}` is not in a block", g.name(gen))))
        }
    };
    let mut out: Vec<(Block, Word)> = Vec::new();
    let mut pending = Word::new();
    for &l in w.iter() {
        match (forced(l)?, out.last_mut()) {
            (None, Some((_, cur))) => cur.push(l),
            (None, None) => pending.push(l),
            (Some(blk), Some((cur_blk, cur))) if *cur_blk == blk => cur.push(l),
            (Some(blk), _) => {
                let mut sub = std::mem::take(&mut pending);
                sub.push(l);
                out.push((blk, sub));
            }
        }
    }
    if !pending.is_empty() {
        out.push((Block::B1, pending));
    }
    Ok(out)
}

/// Longest block subword.
pub fn block_time(blocks: &[(Block, Word)]) -> usize {
    blocks.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Gamma,
    Omega,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub side: Side,
    /// Shortest element of the coset.
    pub key: Word,
}

/// A splitting of the generators into two vertex groups meeting in a shared set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Amalgam {
    pub gamma: u64,
    pub omega: u64,
}

impl Amalgam {
    /// `⟨c1..c6⟩ *_{⟨c4,c5,c6⟩} ⟨c4,c5,c6,d1,d2,d3⟩` for the gamma1 builtin.
    pub fn gamma1(group: &Group) -> Result<Self> {
        Ok(Amalgam {
            gamma: group.mask_of(&["c1", "c2", "c3", "c4", "c5", "c6"])?,
            omega: group.mask_of(&["c4", "c5", "c6", "d1", "d2", "d3"])?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Itinerary {
    pub vertices: Vec<TreeVertex>,
}

impl Itinerary {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Itinerary) -> bool {
        other.vertices.starts_with(&self.vertices)
    }
}

/// The path in the Bass–Serre tree traced by a word. Letters outside the
/// shared set force their side; shared letters stay with the current block.
/// Non-geodesic input is normalized first.
pub fn itinerary(group: &Group, w: &Word, amalgam: Amalgam) -> Result<Itinerary> {
    group.graph().check_word(w)?;
    let shared = amalgam.gamma & amalgam.omega;
    let all = amalgam.gamma | amalgam.omega;
    let w = if group.is_reduced(w) { w.clone() } else { group.normalize(w) };
    let mut vertices = vec![TreeVertex { side: Side::Gamma, key: Word::new() }];
    let mut side = Side::Gamma;
    let mut prefix: Vec<Letter> = Vec::new();
    for &l in w.iter() {
        let bit = 1u64 << l.gen();
        if all & bit == 0 {
            return Err(Error::InvalidLetter(format!(
                "`{}` is outside the amalgam",
                group.graph().name(l.gen())
            )));
        }
        let wanted = if shared & bit != 0 {
            side
        } else if amalgam.gamma & bit != 0 {
            Side::Gamma
        } else {
            Side::Omega
        };
        if wanted != side {
            side = wanted;
            let mask = match side {
                Side::Gamma => amalgam.gamma,
                Side::Omega => amalgam.omega,
            };
            let key = group.strip_right(&group.normalize(&prefix), mask);
            vertices.push(TreeVertex { side, key });
        }
        prefix.push(l);
    }
    Ok(Itinerary { vertices })
}
