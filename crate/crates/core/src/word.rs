use std::cmp::Ordering;
use std::ops::Deref;

/// An oriented edge label of the Cayley graph: a generator with exponent ±1.
///
/// Packed as `2 * gen + inverse`, so the derived order is generator
/// declaration order with the positive letter first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        debug_assert!(gen < 128);
        Letter((gen as u8) << 1 | inverse as u8)
    }

    pub fn gen(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn code(self) -> u8 {
        self.0
    }
}

/// A finite sequence of letters. Ordered by ShortLex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_order_is_generator_then_sign() {
        let a = Letter::new(0, false);
        let a_inv = Letter::new(0, true);
        let b = Letter::new(1, false);
        assert!(a < a_inv && a_inv < b);
        assert_eq!(a_inv.gen(), 0);
        assert!(a_inv.is_inverse());
    }

    #[test]
    fn shortlex_compares_length_first() {
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        let short = Word::from(vec![b]);
        let long = Word::from(vec![a, a]);
        assert!(short < long);
        assert!(Word::from(vec![a, b]) < Word::from(vec![b, a]));
    }
}
