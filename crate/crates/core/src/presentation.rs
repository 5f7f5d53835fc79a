//! Defining graphs of graph products of cyclic groups and the `.ggp` text format.
//!
//! ```text
//! # the hexagon group
//! gen h1 2
//! gen h2 2
//! rel h1 h2
//! ```
//!
//! `gen <name> <2|inf>` declares a generator, `rel <a> <b>` makes two
//! generators commute. Declaration order fixes the generator order used by
//! every canonical form downstream.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Generators are stored in a `u64` bitmask.
pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Two,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub order: Order,
}

/// Generators with orders in {2, ∞} plus commutation edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationGraph {
    generators: Vec<Generator>,
    edges: BTreeSet<(usize, usize)>,
    link: Vec<u64>,
    index: HashMap<String, usize>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PresentationGraph {
    /// Builds a graph from generator declarations and an edge list given by name.
    pub fn new(generators: Vec<Generator>, edges: &[(&str, &str)]) -> Result<Self> {
        let mut graph = PresentationGraph {
            generators: Vec::new(),
            edges: BTreeSet::new(),
            link: Vec::new(),
            index: HashMap::new(),
        };
        for g in generators {
            graph.add_generator(g).map_err(|reason| Error::Parse { line: 0, reason })?;
        }
        for (a, b) in edges {
            graph.add_edge(a, b).map_err(|reason| Error::Parse { line: 0, reason })?;
        }
        Ok(graph)
    }

    fn add_generator(&mut self, g: Generator) -> std::result::Result<(), String> {
        if !valid_name(&g.name) {
            return Err(format!("invalid generator name `{}`", g.name));
        }
        if self.index.contains_key(&g.name) {
            return Err(format!("duplicate generator `{}`", g.name));
        }
        if self.generators.len() == MAX_GENERATORS {
            return Err(format!("more than {MAX_GENERATORS} generators"));
        }
        self.index.insert(g.name.clone(), self.generators.len());
        self.generators.push(g);
        self.link.push(0);
        Ok(())
    }

    fn add_edge(&mut self, a: &str, b: &str) -> std::result::Result<(), String> {
        let i = *self.index.get(a).ok_or_else(|| format!("unknown generator `{a}`"))?;
        let j = *self.index.get(b).ok_or_else(|| format!("unknown generator `{b}`"))?;
        if i == j {
            return Err(format!("self-loop on `{a}`"));
        }
        self.edges.insert((i.min(j), i.max(j)));
        self.link[i] |= 1 << j;
        self.link[j] |= 1 << i;
        Ok(())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn order(&self, gen: usize) -> Order {
        self.generators[gen].order
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.generators[gen].name
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Unordered edges as `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Bitmask of the generators adjacent to `gen`.
    pub fn link(&self, gen: usize) -> u64 {
        self.link[gen]
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.link[a] >> b & 1 == 1
    }

    /// Size of the largest clique, the dimension of the cube complex.
    pub fn dimension(&self) -> usize {
        fn grow(link: &[u64], clique: usize, candidates: u64) -> usize {
            let mut best = clique;
            let mut rest = candidates;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                best = best.max(grow(link, clique + 1, rest & link[v]));
            }
            best
        }
        let all = if self.rank() == 64 { u64::MAX } else { (1u64 << self.rank()) - 1 };
        grow(&self.link, 0, all)
    }

    /// Number of distinct edge labels at a vertex of the Cayley graph.
    pub fn valence(&self) -> usize {
        self.generators
            .iter()
            .map(|g| match g.order {
                Order::Two => 1,
                Order::Infinite => 2,
            })
            .sum()
    }

    /// All letters in ShortLex order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.valence());
        for (i, g) in self.generators.iter().enumerate() {
            out.push(Letter::new(i, false));
            if g.order == Order::Infinite {
                out.push(Letter::new(i, true));
            }
        }
        out
    }

    pub fn check_letter(&self, l: Letter) -> Result<()> {
        let g = l.gen();
        if g >= self.rank() {
            return Err(Error::InvalidLetter(format!("generator index {g}")));
        }
        if l.is_inverse() && self.order(g) == Order::Two {
            return Err(Error::InvalidLetter(format!("{}^-1 on an involution", self.name(g))));
        }
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.iter().try_for_each(|&l| self.check_letter(l))
    }

    pub fn letter_inverse(&self, l: Letter) -> Letter {
        match self.order(l.gen()) {
            Order::Two => l,
            Order::Infinite => Letter::new(l.gen(), !l.is_inverse()),
        }
    }

    /// Parses a whitespace-separated word such as `a b^-1 c`. The tokens
    /// `ε` and `1` (or an empty string) denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "ε" || tok == "1" {
                continue;
            }
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let gen = self
                .generator_index(name)
                .ok_or_else(|| Error::InvalidLetter(format!("unknown generator `{name}`")))?;
            let l = Letter::new(gen, inverse);
            self.check_letter(l)?;
            letters.push(l);
        }
        Ok(Word::from(letters))
    }

    pub fn format_letter(&self, l: Letter) -> String {
        if l.is_inverse() {
            format!("{}^-1", self.name(l.gen()))
        } else {
            self.name(l.gen()).to_string()
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter().map(|&l| self.format_letter(l)).collect::<Vec<_>>().join(" ")
    }

    /// Stable fingerprint of generators and edges.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.generators.hash(&mut h);
        self.edges.hash(&mut h);
        h.finish()
    }
}

/// Parses the `.ggp` line format.
pub fn parse_presentation(text: &str) -> Result<PresentationGraph> {
    let mut graph = PresentationGraph::new(Vec::new(), &[])?;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let err = |reason: String| Error::Parse { line, reason };
        match fields.as_slice() {
            ["gen", name, order] => {
                let order = match *order {
                    "2" => Order::Two,
                    "inf" => Order::Infinite,
                    other => return Err(err(format!("order must be 2 or inf, got `{other}`"))),
                };
                graph
                    .add_generator(Generator { name: name.to_string(), order })
                    .map_err(err)?;
            }
            ["rel", a, b] => graph.add_edge(a, b).map_err(err)?,
            ["gen", ..] => return Err(err("expected `gen <name> <2|inf>`".into())),
            ["rel", ..] => return Err(err("expected `rel <name> <name>`".into())),
            [kw, ..] => return Err(err(format!("unknown directive `{kw}`"))),
            [] => unreachable!(),
        }
    }
    Ok(graph)
}

impl fmt::Display for PresentationGraph {
    /// Writes the graph back in `.ggp` form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            let order = match g.order {
                Order::Two => "2",
                Order::Infinite => "inf",
            };
            writeln!(f, "gen {} {}", g.name, order)?;
        }
        for &(i, j) in &self.edges {
            writeln!(f, "rel {} {}", self.name(i), self.name(j))?;
        }
        Ok(())
    }
}
