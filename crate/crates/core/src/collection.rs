//! Predicate-defined collections of words inside an enumerated language.

use std::fmt;
use std::sync::Arc;

use crate::language::Language;

type Pred = dyn Fn(&[u8]) -> bool + Send + Sync;

/// A named membership predicate on words.
#[derive(Clone)]
pub struct WordPredicate {
    name: String,
    pred: Arc<Pred>,
}

impl WordPredicate {
    pub fn new(name: impl Into<String>, f: impl Fn(&[u8]) -> bool + Send + Sync + 'static) -> Self {
        WordPredicate { name: name.into(), pred: Arc::new(f) }
    }

    /// Every word.
    pub fn all() -> Self {
        WordPredicate::new("L", |_| true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn test(&self, w: &[u8]) -> bool {
        (self.pred)(w)
    }

    pub fn or(&self, other: &WordPredicate) -> WordPredicate {
        let (a, b) = (self.clone(), other.clone());
        WordPredicate::new(format!("{} ∪ {}", self.name, other.name), move |w| a.test(w) || b.test(w))
    }

    pub fn and_not(&self, other: &WordPredicate) -> WordPredicate {
        let (a, b) = (self.clone(), other.clone());
        WordPredicate::new(format!("{} \\ {}", self.name, other.name), move |w| a.test(w) && !b.test(w))
    }
}

impl fmt::Debug for WordPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("WordPredicate").field(&self.name).finish()
    }
}

/// `D ⊆ L` at finite depth, with cached per-length counts `#D_n` (index 0 is the
/// empty word).
#[derive(Debug, Clone)]
pub struct OrbitCollection<'a> {
    base: &'a Language,
    pred: WordPredicate,
    counts: Vec<u64>,
}

impl<'a> OrbitCollection<'a> {
    pub fn new(base: &'a Language, pred: WordPredicate) -> Self {
        let counts = collection_counts(base, &pred, base.depth());
        OrbitCollection { base, pred, counts }
    }

    pub fn full(base: &'a Language) -> Self {
        OrbitCollection::new(base, WordPredicate::all())
    }

    pub fn base(&self) -> &'a Language {
        self.base
    }

    pub fn name(&self) -> &str {
        self.pred.name()
    }

    pub fn predicate(&self) -> &WordPredicate {
        &self.pred
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        self.base.contains(w) && self.pred.test(w)
    }

    pub fn count(&self, n: usize) -> u64 {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn for_each_word(&self, n: usize, mut f: impl FnMut(&[u8])) {
        self.base.for_each_word(n, |w| {
            if self.pred.test(w) {
                f(w)
            }
        });
    }
}

/// `[#D_0, .., #D_depth]` by filtering the base language.
pub fn collection_counts(base: &Language, pred: &WordPredicate, depth: usize) -> Vec<u64> {
    (0..=depth.min(base.depth()))
        .map(|n| {
            let mut c = 0;
            base.for_each_word(n, |w| c += u64::from(pred.test(w)));
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::enumerate_language;
    use crate::model::ShiftModel;

    #[test]
    fn words_starting_with_zero() {
        let l = enumerate_language(&ShiftModel::golden_mean(), 4).unwrap();
        let d = OrbitCollection::new(&l, WordPredicate::new("0*", |w| w.first() == Some(&0)));
        assert_eq!(&d.counts()[1..], &[1, 2, 3, 5]);
    }

    #[test]
    fn full_collection_matches_language() {
        let l = enumerate_language(&ShiftModel::golden_mean(), 8).unwrap();
        assert_eq!(OrbitCollection::full(&l).counts(), l.counts().as_slice());
    }
}
