use crate::succinct::SLArray;

/// A bijection between the distinct values of a reference and dense token
/// ids `1..=len`. Id 0 is reserved for the endmarker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenMap {
    values: Vec<i64>,
}

impl TokenMap {
    pub fn new(values: &[i64]) -> Self {
        let mut values = values.to_vec();
        values.sort_unstable();
        values.dedup();
        TokenMap { values }
    }

    /// Number of distinct values.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Alphabet size of the token sequence, including the endmarker.
    pub fn sigma(&self) -> usize {
        self.values.len() + 1
    }

    #[inline]
    pub fn token(&self, value: i64) -> Option<u32> {
        self.values.binary_search(&value).ok().map(|i| i as u32 + 1)
    }

    pub fn value(&self, token: u32) -> i64 {
        assert!(token >= 1, "token 0 is the endmarker");
        self.values[token as usize - 1]
    }

    pub fn encode(&self, values: &[i64]) -> Vec<Option<u32>> {
        values.iter().map(|&v| self.token(v)).collect()
    }
}

/// Random access to a sequence of integer symbols.
pub trait Symbols {
    fn symbol_count(&self) -> usize;

    fn symbol(&self, i: usize) -> i64;
}

impl Symbols for [u8] {
    fn symbol_count(&self) -> usize {
        self.len()
    }

    fn symbol(&self, i: usize) -> i64 {
        self[i] as i64
    }
}

impl Symbols for [u32] {
    fn symbol_count(&self) -> usize {
        self.len()
    }

    fn symbol(&self, i: usize) -> i64 {
        self[i] as i64
    }
}

impl Symbols for [i64] {
    fn symbol_count(&self) -> usize {
        self.len()
    }

    fn symbol(&self, i: usize) -> i64 {
        self[i]
    }
}

impl Symbols for SLArray {
    fn symbol_count(&self) -> usize {
        self.len()
    }

    fn symbol(&self, i: usize) -> i64 {
        self.get(i) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remapping_is_a_bijection() {
        let values = [5, -3, 5, 1000, 0, -3];
        let map = TokenMap::new(&values);
        assert_eq!(map.len(), 4);
        assert_eq!(map.sigma(), 5);
        for &v in &values {
            let t = map.token(v).unwrap();
            assert!(t >= 1);
            assert_eq!(map.value(t), v);
        }
        assert_eq!(map.token(7), None);
        // Ids follow value order.
        assert!(map.token(-3) < map.token(0));
        assert!(map.token(0) < map.token(5));
    }
}
