use crate::error::{Error, Result};

/// A word over a finite alphabet. Symbols are small integer ids in
/// `[0, alphabet_size)`; two words can only be compared when they share an
/// alphabet, which callers express by constructing them with the same size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    symbols: Vec<u32>,
    alphabet_size: u32,
}

impl Sequence {
    /// Builds a word, checking every symbol against the alphabet bound.
    pub fn new(symbols: Vec<u32>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidArgument(
                "alphabet size must be positive".into(),
            ));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(Error::InvalidSymbol {
                symbol: bad,
                alphabet_size,
            });
        }
        Ok(Self {
            symbols,
            alphabet_size,
        })
    }

    /// Builds a word, inferring the alphabet as `max symbol + 1` (at least 1,
    /// so the empty word gets a unary alphabet).
    pub fn from_symbols(symbols: Vec<u32>) -> Self {
        let alphabet_size = symbols.iter().copied().max().map_or(1, |m| m + 1);
        Self {
            symbols,
            alphabet_size,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    /// Same word with one more symbol appended (alphabet widened if needed).
    pub fn appended(&self, symbol: u32) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        Self {
            symbols,
            alphabet_size: self.alphabet_size.max(symbol + 1),
        }
    }
}
