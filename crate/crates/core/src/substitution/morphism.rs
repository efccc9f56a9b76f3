use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substitution::AbelianizationMatrix;
use crate::word::{Alphabet, FiniteWord, LazyWord, Step, Symbol, WordSource};

/// A non-erasing morphism of the free monoid over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Vec<Symbol>>,
}

/// JSON form of a substitution: `{"labels": ["a", "b"], "images": ["ab", "a"]}`.
/// `labels` may be omitted, in which case letters are `1..=k` and the
/// images are written with those digits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubstitutionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub images: Vec<String>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Vec<Symbol>>) -> Result<Self> {
        if images.len() != alphabet.size() {
            return Err(Error::AlphabetMismatch { expected: alphabet.size(), found: images.len() });
        }
        for (i, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::InvalidSubstitution(format!(
                    "image of letter {} is empty",
                    alphabet.label(Symbol(i as u8))
                )));
            }
            for &s in image {
                alphabet.check(s)?;
            }
        }
        Ok(Substitution { alphabet, images })
    }

    /// The k-bonacci substitution: `i ↦ 1 (i+1)` for `i < k` and `k ↦ 1`.
    pub fn k_bonacci(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArguments("k-bonacci needs k >= 1".into()));
        }
        let alphabet = Alphabet::new(k)?;
        let images = (0..k)
            .map(|i| if i + 1 < k { vec![Symbol(0), Symbol((i + 1) as u8)] } else { vec![Symbol(0)] })
            .collect();
        Substitution::new(alphabet, images)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = alphabet.symbols().map(|s| vec![s]).collect();
        Substitution { alphabet, images }
    }

    pub fn from_spec(spec: &SubstitutionSpec) -> Result<Self> {
        let alphabet = match &spec.labels {
            Some(labels) => Alphabet::with_labels(labels.iter().cloned())?,
            None => Alphabet::new(spec.images.len())?,
        };
        let images = spec
            .images
            .iter()
            .map(|img| alphabet.parse_word(img))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(alphabet, images)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SubstitutionSpec = serde_json::from_str(text)?;
        Substitution::from_spec(&spec)
    }

    pub fn to_spec(&self) -> SubstitutionSpec {
        SubstitutionSpec {
            labels: self
                .alphabet
                .has_custom_labels()
                .then(|| self.alphabet.symbols().map(|s| self.alphabet.label(s)).collect()),
            images: self.images.iter().map(|img| self.alphabet.render(img)).collect(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, symbol: Symbol) -> &[Symbol] {
        &self.images[symbol.index()]
    }

    pub fn images(&self) -> &[Vec<Symbol>] {
        &self.images
    }

    fn apply_symbols(&self, symbols: &[Symbol]) -> Vec<Symbol> {
        let len = symbols.iter().map(|s| self.images[s.index()].len()).sum();
        let mut out = Vec::with_capacity(len);
        for s in symbols {
            out.extend_from_slice(&self.images[s.index()]);
        }
        out
    }

    /// Concatenation of the images of the letters of `word`.
    pub fn apply(&self, word: &FiniteWord) -> Result<FiniteWord> {
        if word.alphabet().size() != self.alphabet.size() {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.size(),
                found: word.alphabet().size(),
            });
        }
        Ok(FiniteWord::from_trusted(self.alphabet.clone(), self.apply_symbols(word.symbols())))
    }

    /// `self ∘ other`, i.e. the morphism `a ↦ self(other(a))`.
    pub fn compose(&self, other: &Substitution) -> Result<Substitution> {
        if other.alphabet.size() != self.alphabet.size() {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.size(),
                found: other.alphabet.size(),
            });
        }
        let images = other.images.iter().map(|img| self.apply_symbols(img)).collect();
        Ok(Substitution { alphabet: self.alphabet.clone(), images })
    }

    /// Entry `(i, j)` counts occurrences of letter `i` in the image of `j`.
    pub fn abelianization(&self) -> AbelianizationMatrix {
        let k = self.alphabet.size();
        let mut entries = vec![0u64; k * k];
        for (j, image) in self.images.iter().enumerate() {
            for s in image {
                entries[s.index() * k + j] += 1;
            }
        }
        AbelianizationMatrix::from_entries(k, entries)
    }

    /// The first letter whose image starts with itself and has length at
    /// least two.
    pub fn prolongable_letter(&self) -> Option<Symbol> {
        self.alphabet
            .symbols()
            .find(|&s| self.images[s.index()].len() >= 2 && self.images[s.index()][0] == s)
    }

    /// The fixed point starting with `seed`, the limit of `σⁿ(seed)`.
    ///
    /// A seed whose image is the seed itself yields the constant word; this
    /// covers the degenerate `k = 1` member of the k-bonacci family.
    pub fn fixed_point(&self, seed: Symbol) -> Result<LazyWord> {
        self.alphabet.check(seed)?;
        let image = self.image(seed);
        if image[0] != seed {
            return Err(Error::NonProlongable { seed: seed.index() });
        }
        if image.len() == 1 {
            return Ok(LazyWord::constant(self.alphabet.clone(), seed));
        }
        Ok(LazyWord::new(FixedPoint { substitution: Arc::new(self.clone()), seed }))
    }
}

struct FixedPoint {
    substitution: Arc<Substitution>,
    seed: Symbol,
}

impl WordSource for FixedPoint {
    fn alphabet(&self) -> &Alphabet {
        &self.substitution.alphabet
    }

    fn traverse(&self) -> Box<dyn Iterator<Item = Step> + Send> {
        Box::new(FixedPointIter {
            buffer: self.substitution.image(self.seed).to_vec(),
            substitution: Arc::clone(&self.substitution),
            expanded: 1,
            position: 0,
        })
    }

    fn describe(&self) -> String {
        format!("fixed point from letter {}", self.substitution.alphabet.label(self.seed))
    }
}

/// Generates `w = σ(w)` in place: the image of `w[i]` is appended once
/// the reader needs letters beyond the current buffer.
struct FixedPointIter {
    substitution: Arc<Substitution>,
    buffer: Vec<Symbol>,
    expanded: usize,
    position: usize,
}

impl Iterator for FixedPointIter {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        while self.position >= self.buffer.len() {
            let letter = self.buffer[self.expanded];
            self.buffer.extend_from_slice(&self.substitution.images[letter.index()]);
            self.expanded += 1;
        }
        let s = self.buffer[self.position];
        self.position += 1;
        Some(Ok(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &Substitution, text: &str) -> FiniteWord {
        FiniteWord::parse(s.alphabet(), text).unwrap()
    }

    #[test]
    fn k_bonacci_images() {
        let s2 = Substitution::k_bonacci(2).unwrap();
        assert_eq!(s2.to_spec().images, vec!["12", "1"]);
        let s3 = Substitution::k_bonacci(3).unwrap();
        assert_eq!(s3.to_spec().images, vec!["12", "13", "1"]);
        let s1 = Substitution::k_bonacci(1).unwrap();
        assert_eq!(s1.to_spec().images, vec!["1"]);
        assert!(Substitution::k_bonacci(0).is_err());
    }

    #[test]
    fn apply_concatenates_images() {
        let s2 = Substitution::k_bonacci(2).unwrap();
        assert_eq!(s2.apply(&word(&s2, "1")).unwrap().to_string(), "12");
        assert_eq!(s2.apply(&word(&s2, "12")).unwrap().to_string(), "121");
        let s3 = Substitution::k_bonacci(3).unwrap();
        assert_eq!(s3.apply(&word(&s3, "3")).unwrap().to_string(), "1");

        let w = FiniteWord::parse(&Alphabet::new(3).unwrap(), "1").unwrap();
        assert!(matches!(s2.apply(&w), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn fixed_point_prefixes() {
        let s2 = Substitution::k_bonacci(2).unwrap();
        assert_eq!(s2.fixed_point(Symbol(0)).unwrap().take(8).to_string(), "12112121");
        let s3 = Substitution::k_bonacci(3).unwrap();
        assert_eq!(s3.fixed_point(Symbol(0)).unwrap().take(7).to_string(), "1213121");
        let s4 = Substitution::k_bonacci(4).unwrap();
        assert_eq!(s4.fixed_point(Symbol(0)).unwrap().take(8).to_string(), "12131214");
    }

    #[test]
    fn degenerate_and_non_prolongable_seeds() {
        let s1 = Substitution::k_bonacci(1).unwrap();
        assert_eq!(s1.fixed_point(Symbol(0)).unwrap().take(5).to_string(), "11111");

        let swap = Substitution::from_json(r#"{"images": ["2", "1"]}"#).unwrap();
        assert!(matches!(swap.fixed_point(Symbol(0)), Err(Error::NonProlongable { seed: 0 })));
        let s2 = Substitution::k_bonacci(2).unwrap();
        assert!(matches!(s2.fixed_point(Symbol(1)), Err(Error::NonProlongable { seed: 1 })));
    }

    #[test]
    fn json_round_trip_with_labels() {
        let s = Substitution::from_json(r#"{"labels": ["a", "b"], "images": ["ab", "a"]}"#).unwrap();
        assert_eq!(s.fixed_point(Symbol(0)).unwrap().take(8).to_string(), "abaababa");
        let again = Substitution::from_spec(&s.to_spec()).unwrap();
        assert_eq!(again, s);
        assert!(Substitution::from_json(r#"{"images": ["12", ""]}"#).is_err());
        assert!(Substitution::from_json(r#"{"images": ["13", "1"]}"#).is_err());
    }

    #[test]
    fn fixed_point_is_stable_under_the_substitution() {
        for k in 2..=5 {
            let s = Substitution::k_bonacci(k).unwrap();
            let w = s.fixed_point(Symbol(0)).unwrap();
            let prefix = w.take(500);
            let image = s.apply(&prefix).unwrap();
            let longer = w.take(image.len());
            assert_eq!(image, longer);
        }
    }

    #[test]
    fn abelianization_is_functorial() {
        for k in 1..=5 {
            let s = Substitution::k_bonacci(k).unwrap();
            let m = s.abelianization();
            assert_eq!(s.compose(&s).unwrap().abelianization(), m.mul(&m));
            let lens: Vec<u64> = s.images().iter().map(|i| i.len() as u64).collect();
            assert_eq!(m.column_sums(), lens);
        }
    }
}
