use std::fmt;

use crate::error::{Error, Result};

/// Dense arrays are indexed by edge id, so `q^ℓ` is capped.
pub const MAX_EDGES: usize = 1 << 24;

/// An ordered list of distinct symbols. Symbol `i` is digit `i` in the
/// base-`q` encoding of grams.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.len() < 2 {
            return Err(Error::InvalidParams("alphabet needs at least 2 symbols".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidParams(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The first `q` letters of `ACGT` for `q ≤ 4`, otherwise the first `q`
    /// letters of `A..Z`.
    pub fn default_for(q: usize) -> Result<Self> {
        match q {
            2..=4 => Alphabet::new("ACGT".chars().take(q)),
            5..=26 => Alphabet::new(('A'..='Z').take(q)),
            _ => Err(Error::InvalidParams(format!(
                "no default alphabet of size {q}"
            ))),
        }
    }

    /// The smallest default alphabet containing every symbol of `s`.
    pub fn infer(s: &str) -> Result<Self> {
        (2..=26)
            .filter_map(|q| Alphabet::default_for(q).ok())
            .find(|a| s.chars().all(|c| a.symbols.contains(&c)))
            .ok_or_else(|| {
                let c = s.chars().find(|c| !c.is_ascii_uppercase()).unwrap_or('?');
                Error::ForeignSymbol(c)
            })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, digit: usize) -> char {
        self.symbols[digit]
    }

    pub fn digit(&self, c: char) -> Result<usize> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .ok_or(Error::ForeignSymbol(c))
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn is_default(&self) -> bool {
        Alphabet::default_for(self.len()).is_ok_and(|d| &d == self)
    }

    /// Integer id of a gram, first symbol most significant.
    pub fn encode(&self, gram: &str, len: usize) -> Result<usize> {
        let mut id = 0usize;
        let mut count = 0usize;
        for c in gram.chars() {
            id = id * self.len() + self.digit(c)?;
            count += 1;
        }
        if count != len {
            return Err(Error::GramLength {
                gram: gram.to_string(),
                found: count,
                expected: len,
            });
        }
        Ok(id)
    }

    pub fn decode(&self, mut id: usize, len: usize) -> String {
        let q = self.len();
        let mut out = vec![' '; len];
        for slot in out.iter_mut().rev() {
            *slot = self.symbols[id % q];
            id /= q;
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Alphabet and window length `ℓ`. All index arithmetic hangs off this.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeParams {
    alphabet: Alphabet,
    ell: usize,
    vertex_count: usize,
    edge_count: usize,
}

impl CodeParams {
    pub fn new(q: usize, ell: usize) -> Result<Self> {
        Self::with_alphabet(Alphabet::default_for(q)?, ell)
    }

    pub fn with_alphabet(alphabet: Alphabet, ell: usize) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidParams(format!("ℓ must be at least 2, got {ell}")));
        }
        let q = alphabet.len();
        let edge_count = checked_pow(q, ell)
            .filter(|&n| n <= MAX_EDGES)
            .ok_or_else(|| Error::InvalidParams(format!("q^ℓ = {q}^{ell} is too large")))?;
        Ok(CodeParams {
            alphabet,
            ell,
            vertex_count: edge_count / q,
            edge_count,
        })
    }

    pub fn q(&self) -> usize {
        self.alphabet.len()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `q^{ℓ-1}`
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `q^ℓ`
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Encoders need `q ≥ 3` for the Hamiltonian-to-Eulerian extension.
    pub fn require_encoder_regime(&self) -> Result<()> {
        if self.q() < 3 {
            return Err(Error::InvalidParams(format!(
                "encoders require q ≥ 3, got q = {}",
                self.q()
            )));
        }
        Ok(())
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc = 1usize;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
