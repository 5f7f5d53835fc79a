//! Brute-force oracles that never call the normal-form code.
//!
//! [`WordBall`] builds every word of length at most `depth` as a trie and
//! glues nodes together by congruence closure of the defining relations
//! (`vv = 1` or `v v⁻¹ = 1`, `xy = yx` along edges). Any two words of length
//! at most `depth` that are equal in the group can be rewritten into each
//! other without exceeding their own length, so the resulting classes are
//! exactly the group elements of length at most `depth`.

use std::collections::{HashMap, HashSet, VecDeque};

use gpwalls::{Group, Letter, Order, Word};

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
}

const NONE: u32 = u32::MAX;

pub struct WordBall {
    letters: Vec<Letter>,
    slot: HashMap<Letter, usize>,
    depth: usize,
    /// `children[node * nl + slot]`
    children: Vec<u32>,
    node_depth: Vec<u8>,
    parent: Vec<(u32, u8)>,
    /// Class index per node.
    class_of: Vec<u32>,
    /// Shortest member of each class.
    class_rep: Vec<u32>,
    class_len: Vec<usize>,
    inverse_slot: Vec<usize>,
}

impl WordBall {
    pub fn new(group: &Group, depth: usize) -> Self {
        let letters = group.letters();
        let nl = letters.len();
        let slot: HashMap<Letter, usize> = letters.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let inverse_slot: Vec<usize> =
            letters.iter().map(|&l| slot[&group.letter_inverse(l)]).collect();

        let mut children = vec![NONE; nl];
        let mut node_depth = vec![0u8];
        let mut parent = vec![(0u32, 0u8)];
        let mut frontier = vec![0u32];
        for d in 0..depth {
            let mut next = Vec::new();
            for &n in &frontier {
                for s in 0..nl {
                    let id = node_depth.len() as u32;
                    node_depth.push(d as u8 + 1);
                    parent.push((n, s as u8));
                    children.extend(std::iter::repeat_n(NONE, nl));
                    children[n as usize * nl + s] = id;
                    next.push(id);
                }
            }
            frontier = next;
        }
        let n = node_depth.len();
        let child = |node: u32, s: usize| children[node as usize * nl + s];

        // initial identifications
        let mut pending: Vec<(u32, u32)> = Vec::new();
        for node in 0..n as u32 {
            if (node_depth[node as usize] as usize) + 2 > depth {
                continue;
            }
            for (s, &l) in letters.iter().enumerate() {
                let a = child(node, s);
                pending.push((child(a, inverse_slot[s]), node));
                for (t, &m) in letters.iter().enumerate() {
                    if l.gen() != m.gen() && group.graph().commute(l.gen(), m.gen()) {
                        pending.push((child(a, t), child(child(node, t), s)));
                    }
                }
            }
        }

        // congruence closure: each class keeps one known child per letter
        let mut uf = UnionFind::new(n);
        let mut sig: Vec<Vec<u32>> = (0..n as u32)
            .map(|node| (0..nl).map(|s| child(node, s)).collect())
            .collect();
        let mut queue: VecDeque<(u32, u32)> = pending.into();
        while let Some((a, b)) = queue.pop_front() {
            let ra = uf.find(a);
            let rb = uf.find(b);
            if ra == rb {
                continue;
            }
            let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
            uf.parent[drop as usize] = keep;
            let dropped = std::mem::take(&mut sig[drop as usize]);
            for s in 0..nl {
                let x = sig[keep as usize][s];
                let y = dropped[s];
                match (x == NONE, y == NONE) {
                    (true, false) => sig[keep as usize][s] = y,
                    (false, false) => queue.push_back((x, y)),
                    _ => {}
                }
            }
        }

        let mut class_index: HashMap<u32, u32> = HashMap::new();
        let mut class_of = vec![0u32; n];
        let mut class_rep = Vec::new();
        let mut class_len = Vec::new();
        for node in 0..n as u32 {
            let r = uf.find(node);
            let c = *class_index.entry(r).or_insert_with(|| {
                class_rep.push(node);
                class_len.push(node_depth[node as usize] as usize);
                class_rep.len() as u32 - 1
            });
            class_of[node as usize] = c;
        }
        WordBall {
            letters,
            slot,
            depth,
            children,
            node_depth,
            parent,
            class_of,
            class_rep,
            class_len,
            inverse_slot,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn node_count(&self) -> usize {
        self.node_depth.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_rep.len()
    }

    fn child(&self, node: u32, s: usize) -> u32 {
        self.children[node as usize * self.letters.len() + s]
    }

    fn node(&self, w: &[Letter]) -> Option<u32> {
        let mut n = 0u32;
        for l in w {
            n = self.child(n, *self.slot.get(l)?);
            if n == NONE {
                return None;
            }
        }
        Some(n)
    }

    /// Element class of a word of length at most `depth`.
    pub fn class(&self, w: &[Letter]) -> Option<usize> {
        self.node(w).map(|n| self.class_of[n as usize] as usize)
    }

    /// Length of the shortest word in the class.
    pub fn class_length(&self, c: usize) -> usize {
        self.class_len[c]
    }

    /// The first shortest word of a class in trie order.
    pub fn class_word(&self, c: usize) -> Word {
        let mut node = self.class_rep[c];
        let mut out = Vec::new();
        while node != 0 {
            let (p, s) = self.parent[node as usize];
            out.push(self.letters[s as usize]);
            node = p;
        }
        out.reverse();
        Word::from(out)
    }

    /// Neighbor of class `c` along letter `l`, when `c` has length below `depth`.
    pub fn step(&self, c: usize, l: Letter) -> Option<usize> {
        let rep = self.class_rep[c];
        if self.node_depth[rep as usize] as usize >= self.depth {
            return None;
        }
        let n = self.child(rep, self.slot[&l]);
        Some(self.class_of[n as usize] as usize)
    }

    /// BFS distances from class `start` in the graph of classes, following
    /// only edges out of classes shorter than `depth`.
    pub fn bfs(&self, start: usize) -> Vec<Option<usize>> {
        let nc = self.class_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nc];
        for c in 0..nc {
            for &l in &self.letters {
                if let Some(d) = self.step(c, l) {
                    adj[c].push(d);
                    adj[d].push(c);
                }
            }
        }
        let mut dist = vec![None; nc];
        dist[start] = Some(0);
        let mut q = VecDeque::from([start]);
        while let Some(c) = q.pop_front() {
            let dc = dist[c].unwrap();
            for &d in &adj[c] {
                if dist[d].is_none() {
                    dist[d] = Some(dc + 1);
                    q.push_back(d);
                }
            }
        }
        dist
    }

    pub fn inverse_letter(&self, l: Letter) -> Letter {
        self.letters[self.inverse_slot[self.slot[&l]]]
    }
}

/// Square-equivalence classes of edges of the Cayley graph inside a [`WordBall`].
pub struct EdgeClasses {
    /// Undirected edge `(class, letter)` in canonical orientation → edge class.
    edge_class: HashMap<(usize, Letter), usize>,
    /// Pairs of edge classes that share a square.
    crossing: HashSet<(usize, usize)>,
}

impl EdgeClasses {
    pub fn new(group: &Group, ball: &WordBall) -> Self {
        // canonical orientation: involution edges from the endpoint with smaller class id,
        // infinite-order edges along the positive letter
        let canon = |c: usize, l: Letter| -> Option<(usize, Letter)> {
            let d = ball.step(c, l)?;
            match group.graph().order(l.gen()) {
                Order::Two => Some((c.min(d), l)),
                Order::Infinite if l.is_inverse() => Some((d, ball.inverse_letter(l))),
                Order::Infinite => Some((c, l)),
            }
        };
        let mut ids: HashMap<(usize, Letter), usize> = HashMap::new();
        for c in 0..ball.class_count() {
            for &l in ball.letters() {
                if let Some(e) = canon(c, l) {
                    let n = ids.len();
                    ids.entry(e).or_insert(n);
                }
            }
        }
        let mut uf = UnionFind::new(ids.len());
        let mut squares: Vec<(usize, usize)> = Vec::new();
        for c in 0..ball.class_count() {
            for &x in ball.letters() {
                for &y in ball.letters() {
                    if x.gen() == y.gen() || !group.graph().commute(x.gen(), y.gen()) {
                        continue;
                    }
                    let (Some(cx), Some(cy)) = (ball.step(c, x), ball.step(c, y)) else {
                        continue;
                    };
                    let (Some(cxy), Some(cyx)) = (ball.step(cx, y), ball.step(cy, x)) else {
                        continue;
                    };
                    assert_eq!(cxy, cyx, "square does not close");
                    // x-edges: (c, x) ~ (cy, x); y-edges: (c, y) ~ (cx, y)
                    let ex1 = ids[&canon(c, x).unwrap()];
                    let ex2 = ids[&canon(cy, x).unwrap()];
                    let ey1 = ids[&canon(c, y).unwrap()];
                    let ey2 = ids[&canon(cx, y).unwrap()];
                    let (a, b) = (uf.find(ex1 as u32), uf.find(ex2 as u32));
                    uf.parent[a.max(b) as usize] = a.min(b);
                    let (a, b) = (uf.find(ey1 as u32), uf.find(ey2 as u32));
                    uf.parent[a.max(b) as usize] = a.min(b);
                    squares.push((ex1, ey1));
                }
            }
        }
        let edge_class: HashMap<(usize, Letter), usize> =
            ids.iter().map(|(&e, &i)| (e, uf.find(i as u32) as usize)).collect();
        let mut crossing = HashSet::new();
        for (a, b) in squares {
            let (a, b) = (uf.find(a as u32) as usize, uf.find(b as u32) as usize);
            crossing.insert((a, b));
            crossing.insert((b, a));
        }
        EdgeClasses { edge_class, crossing }
    }

    /// Edge class of the edge leaving element class `c` along `l`.
    pub fn class(&self, group: &Group, ball: &WordBall, c: usize, l: Letter) -> Option<usize> {
        let d = ball.step(c, l)?;
        let key = match group.graph().order(l.gen()) {
            Order::Two => (c.min(d), l),
            Order::Infinite if l.is_inverse() => (d, ball.inverse_letter(l)),
            Order::Infinite => (c, l),
        };
        self.edge_class.get(&key).copied()
    }

    pub fn cross(&self, a: usize, b: usize) -> bool {
        self.crossing.contains(&(a, b))
    }

    pub fn crossing_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.crossing.iter().copied()
    }
}

/// Every arrangement of `w`'s positions reachable by swapping adjacent
/// commuting letters. Each arrangement lists original positions.
pub fn shuffles(group: &Group, w: &[Letter]) -> Vec<Vec<usize>> {
    let start: Vec<usize> = (0..w.len()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([start.clone()]);
    let mut q = VecDeque::from([start]);
    while let Some(p) = q.pop_front() {
        for i in 0..p.len().saturating_sub(1) {
            let (a, b) = (w[p[i]], w[p[i + 1]]);
            if a.gen() != b.gen() && group.graph().commute(a.gen(), b.gen()) {
                let mut s = p.clone();
                s.swap(i, i + 1);
                if seen.insert(s.clone()) {
                    q.push_back(s);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// All words of length exactly `n` over the group's letters.
pub fn all_words(group: &Group, n: usize) -> Vec<Word> {
    let letters = group.letters();
    let mut out: Vec<Word> = vec![Word::new()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}
