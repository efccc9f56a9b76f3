use std::fmt;
use std::sync::Arc;

use crate::word::{Alphabet, FiniteWord, Symbol};

/// Why a stream stopped before its natural (infinite) end.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    /// Index of the first letter that could not be produced.
    pub position: usize,
    pub reason: String,
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "truncated at position {}: {}", self.position, self.reason)
    }
}

/// One step of a traversal: a letter, or the truncation marker that ends
/// the stream.
pub type Step = Result<Symbol, Truncation>;

/// A definition of a one-sided infinite word.
///
/// Every call to [`WordSource::traverse`] starts a fresh, independent
/// traversal; two traversals must produce the same letters.
pub trait WordSource: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    fn traverse(&self) -> Box<dyn Iterator<Item = Step> + Send>;

    fn describe(&self) -> String {
        "word".to_string()
    }
}

/// An unbounded word produced on demand.
#[derive(Clone)]
pub struct LazyWord {
    source: Arc<dyn WordSource>,
}

impl fmt::Debug for LazyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyWord")
            .field("source", &self.source.describe())
            .field("alphabet", self.source.alphabet())
            .finish()
    }
}

impl LazyWord {
    pub fn new(source: impl WordSource + 'static) -> Self {
        LazyWord { source: Arc::new(source) }
    }

    /// The constant word `sss…`.
    pub fn constant(alphabet: Alphabet, symbol: Symbol) -> Self {
        LazyWord::periodic(FiniteWord::from_trusted(alphabet, vec![symbol]))
    }

    /// The purely periodic word `uuu…`. Panics on an empty period.
    pub fn periodic(period: FiniteWord) -> Self {
        assert!(!period.is_empty(), "empty period");
        LazyWord::new(Periodic { period })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.source.alphabet()
    }

    pub fn describe(&self) -> String {
        self.source.describe()
    }

    pub fn iter(&self) -> Traversal {
        Traversal { inner: self.source.traverse(), produced: 0, truncation: None }
    }

    /// The first `len` letters, or fewer when the stream is truncated.
    pub fn prefix(&self, len: usize) -> Prefix {
        let mut buffer = PrefixBuffer::new(self);
        buffer.ensure(len);
        buffer.into_prefix()
    }

    pub fn take(&self, len: usize) -> FiniteWord {
        FiniteWord::from_trusted(self.alphabet().clone(), self.prefix(len).symbols)
    }
}

/// A finite prefix together with the truncation marker, if the stream ended.
#[derive(Debug, Clone)]
pub struct Prefix {
    pub symbols: Vec<Symbol>,
    pub truncation: Option<Truncation>,
}

/// A stateful traversal of a [`LazyWord`]. Yields letters until the stream
/// is truncated; the marker is then available from [`Traversal::truncation`].
pub struct Traversal {
    inner: Box<dyn Iterator<Item = Step> + Send>,
    produced: usize,
    truncation: Option<Truncation>,
}

impl Traversal {
    pub fn truncation(&self) -> Option<&Truncation> {
        self.truncation.as_ref()
    }
}

impl Iterator for Traversal {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        if self.truncation.is_some() {
            return None;
        }
        match self.inner.next() {
            Some(Ok(s)) => {
                self.produced += 1;
                Some(s)
            }
            Some(Err(t)) => {
                self.truncation = Some(t);
                None
            }
            None => {
                self.truncation = Some(Truncation {
                    position: self.produced,
                    reason: "source ended".into(),
                });
                None
            }
        }
    }
}

/// A growing prefix of one traversal, so repeated requests for longer
/// prefixes do not restart the word from the beginning.
pub struct PrefixBuffer {
    traversal: Traversal,
    symbols: Vec<Symbol>,
}

impl PrefixBuffer {
    pub fn new(word: &LazyWord) -> Self {
        PrefixBuffer { traversal: word.iter(), symbols: Vec::new() }
    }

    /// Extends the buffer to `len` letters if the stream allows and returns
    /// the available prefix, which may be shorter than `len`.
    pub fn ensure(&mut self, len: usize) -> &[Symbol] {
        if self.symbols.len() < len {
            let missing = len - self.symbols.len();
            self.symbols.reserve(missing);
            self.symbols.extend(self.traversal.by_ref().take(missing));
        }
        &self.symbols[..len.min(self.symbols.len())]
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.traversal.truncation()
    }

    pub fn into_prefix(self) -> Prefix {
        Prefix { truncation: self.traversal.truncation, symbols: self.symbols }
    }
}

struct Periodic {
    period: FiniteWord,
}

impl WordSource for Periodic {
    fn alphabet(&self) -> &Alphabet {
        self.period.alphabet()
    }

    fn traverse(&self) -> Box<dyn Iterator<Item = Step> + Send> {
        let period = self.period.symbols().to_vec();
        Box::new(period.into_iter().cycle().map(Ok))
    }

    fn describe(&self) -> String {
        format!("({})^ω", self.period)
    }
}

/// A finite word viewed as a stream that truncates after its last letter.
/// Handy for feeding explicit words to the factor machinery.
pub(crate) struct Finite {
    pub(crate) word: FiniteWord,
}

impl WordSource for Finite {
    fn alphabet(&self) -> &Alphabet {
        self.word.alphabet()
    }

    fn traverse(&self) -> Box<dyn Iterator<Item = Step> + Send> {
        let symbols = self.word.symbols().to_vec();
        let len = symbols.len();
        Box::new(symbols.into_iter().map(Ok).chain(std::iter::once(Err(Truncation {
            position: len,
            reason: "end of finite word".into(),
        }))))
    }

    fn describe(&self) -> String {
        format!("finite word of length {}", self.word.len())
    }
}

impl From<FiniteWord> for LazyWord {
    /// A finite word as a truncated stream.
    fn from(word: FiniteWord) -> Self {
        LazyWord::new(Finite { word })
    }
}
