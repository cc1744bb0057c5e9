//! Exact finite-depth languages stored as a level-ordered trie.

use std::fmt::Write as _;
use std::ops::Range;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::model::{LanguageSource, ShiftModel};
use crate::word::Word;

const NONE: u32 = u32::MAX;

/// Environment variable overriding the default node budget.
pub const MAX_NODES_ENV: &str = "SYMDYN_MAX_NODES";

pub const DEFAULT_MAX_DEPTH: usize = 22;
pub const DEFAULT_MAX_NODES: usize = 1 << 24;

/// Hard resource limits for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        let max_nodes = std::env::var(MAX_NODES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_NODES);
        Budget { max_depth: DEFAULT_MAX_DEPTH, max_nodes }
    }
}

/// Enumeration options. Oracle cross-checking costs `O(A · n)` per node, so by
/// default it only runs on the first levels.
#[derive(Debug, Clone, Copy)]
pub struct Enumerator {
    pub budget: Budget,
    pub verify_depth: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator { budget: Budget::default(), verify_depth: 14 }
    }
}

impl Enumerator {
    pub fn with_budget(budget: Budget) -> Self {
        Enumerator { budget, ..Enumerator::default() }
    }

    pub fn verify_depth(mut self, depth: usize) -> Self {
        self.verify_depth = depth;
        self
    }

    pub fn run<S: LanguageSource>(&self, source: &S, depth: usize) -> Result<Language> {
        if depth == 0 {
            return Err(Error::Argument("enumeration depth must be at least 1".into()));
        }
        if depth > self.budget.max_depth {
            return Err(Error::Resource(format!(
                "depth {depth} exceeds the configured depth budget {}",
                self.budget.max_depth
            )));
        }
        if let Some(cert) = source.certifiable_depth() {
            if depth > cert {
                return Err(Error::InsufficientData(format!(
                    "depth {depth} exceeds the certifiable depth {cert} of the model"
                )));
            }
        }
        let a = source.alphabet_size();
        let mut lang = Language {
            alphabet: a,
            depth,
            children: vec![NONE; a],
            parent: vec![NONE],
            symbol: vec![0],
            levels: vec![0..1],
        };
        let mut frontier = vec![source.initial()];
        for level in 1..=depth {
            let prev = lang.levels[level - 1].clone();
            let start = lang.parent.len();
            let mut next = Vec::new();
            let verify = level <= self.verify_depth;
            let mut buf = Vec::with_capacity(level);
            for (offset, node) in prev.clone().enumerate() {
                if verify {
                    buf.clear();
                    buf.extend_from_slice(&lang.word_of(node as u32));
                }
                for s in 0..a as u8 {
                    let child = source.advance(&frontier[offset], s)?;
                    if verify {
                        buf.push(s);
                        let member = source.member(&Word::from_slice(&buf))?;
                        buf.pop();
                        if member != child.is_some() {
                            buf.push(s);
                            return Err(Error::Consistency(format!(
                                "successor oracle {} word {} but membership oracle {} it",
                                if child.is_some() { "admits" } else { "rejects" },
                                Word::from_slice(&buf),
                                if member { "accepts" } else { "rejects" },
                            )));
                        }
                    }
                    if let Some(state) = child {
                        if lang.parent.len() >= self.budget.max_nodes {
                            return Err(Error::Resource(format!(
                                "language trie exceeds the node budget of {} at depth {level}; raise {MAX_NODES_ENV} or lower the depth",
                                self.budget.max_nodes
                            )));
                        }
                        let id = lang.parent.len() as u32;
                        lang.children[node * a + s as usize] = id;
                        lang.parent.push(node as u32);
                        lang.symbol.push(s);
                        lang.children.extend(std::iter::repeat(NONE).take(a));
                        next.push(state);
                    }
                }
            }
            lang.levels.push(start..lang.parent.len());
            frontier = next;
        }
        Ok(lang)
    }
}

/// Enumerate the admissible words of every length `≤ depth` with default options.
pub fn enumerate_language(model: &ShiftModel, depth: usize) -> Result<Language> {
    Enumerator::default().run(model, depth)
}

/// Prefix-closed set of words up to a fixed depth. Nodes are stored level by level,
/// each level in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    alphabet: usize,
    depth: usize,
    children: Vec<u32>,
    parent: Vec<u32>,
    symbol: Vec<u8>,
    levels: Vec<Range<usize>>,
}

impl Language {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// `#L_n`; `#L_0 = 1`.
    pub fn count(&self, n: usize) -> u64 {
        self.levels.get(n).map_or(0, |r| r.len() as u64)
    }

    pub fn count_big(&self, n: usize) -> BigUint {
        BigUint::from(self.count(n))
    }

    /// `[#L_0, #L_1, .., #L_depth]`.
    pub fn counts(&self) -> Vec<u64> {
        self.levels.iter().map(|r| r.len() as u64).collect()
    }

    pub fn node(&self, w: &[u8]) -> Option<u32> {
        let mut node = 0usize;
        for &s in w {
            if s as usize >= self.alphabet {
                return None;
            }
            match self.children[node * self.alphabet + s as usize] {
                NONE => return None,
                c => node = c as usize,
            }
        }
        Some(node as u32)
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        self.node(w).is_some()
    }

    pub fn child(&self, node: u32, a: u8) -> Option<u32> {
        match self.children[node as usize * self.alphabet + a as usize] {
            NONE => None,
            c => Some(c),
        }
    }

    /// Symbols extending the word at `node`.
    pub fn followers(&self, node: u32) -> impl Iterator<Item = u8> + '_ {
        (0..self.alphabet as u8).filter(move |&a| self.child(node, a).is_some())
    }

    pub fn word_of(&self, node: u32) -> Vec<u8> {
        let mut out = Vec::new();
        let mut n = node;
        while n != 0 {
            out.push(self.symbol[n as usize]);
            n = self.parent[n as usize];
        }
        out.reverse();
        out
    }

    /// Node ids of the words of length `n`, in lexicographic order.
    pub fn level(&self, n: usize) -> Range<usize> {
        self.levels.get(n).cloned().unwrap_or(0..0)
    }

    /// Visit the words of length `n` in lexicographic order.
    pub fn for_each_word(&self, n: usize, mut f: impl FnMut(&[u8])) {
        if n > self.depth {
            return;
        }
        let mut buf = vec![0u8; n];
        for node in self.level(n) {
            let mut m = node as u32;
            for i in (0..n).rev() {
                buf[i] = self.symbol[m as usize];
                m = self.parent[m as usize];
            }
            f(&buf);
        }
    }

    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.count(n) as usize);
        self.for_each_word(n, |w| out.push(Word::from_slice(w)));
        out
    }

    /// Words of length `n` packed into `u64` codes (base `A`, most significant first).
    pub fn codes(&self, n: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.count(n) as usize);
        let a = self.alphabet as u64;
        self.for_each_word(n, |w| out.push(w.iter().fold(0u64, |acc, &s| acc * a + s as u64)));
        out
    }

    /// Number of admissible extensions of length `|w| + d` of the word at `node`.
    pub fn extension_count(&self, node: u32, d: usize) -> u64 {
        if d == 0 {
            return 1;
        }
        self.followers(node).map(|a| self.extension_count(self.child(node, a).unwrap(), d - 1)).sum()
    }

    /// Prefix-closure: every non-root node's parent is a node. Holds by construction;
    /// exposed for dumps read from disk.
    pub fn check_prefix_closed(&self) -> Result<()> {
        for n in 1..self.node_count() {
            let p = self.parent[n] as usize;
            if p >= self.node_count() || self.child(p as u32, self.symbol[n]) != Some(n as u32) {
                return Err(Error::Consistency(format!("node {n} is detached from its prefix")));
            }
        }
        Ok(())
    }

    /// First `(m, n)` with `#L_{m+n} > #L_m · #L_n`, if any.
    pub fn subadditivity_violation(&self) -> Option<(usize, usize)> {
        for m in 1..=self.depth {
            for n in 1..=self.depth - m {
                if self.count(m + n) as u128 > self.count(m) as u128 * self.count(n) as u128 {
                    return Some((m, n));
                }
            }
        }
        None
    }

    /// Line-based dump: a header, then one word per line in lexicographic order
    /// (prefixes before extensions).
    pub fn dump(&self) -> String {
        let mut out = format!("# alphabet={} depth={}\n", self.alphabet, self.depth);
        let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
        let mut path: Vec<u8> = Vec::new();
        while let Some((node, len)) = stack.pop() {
            path.truncate(len);
            if node != 0 {
                path.push(self.symbol[node as usize]);
                let _ = writeln!(out, "{}", Word::from_slice(&path));
            }
            for a in (0..self.alphabet as u8).rev() {
                if let Some(c) = self.child(node, a) {
                    stack.push((c, path.len()));
                }
            }
        }
        out
    }

    /// Inverse of [`Language::dump`]; rejects dumps that are not prefix-closed.
    pub fn from_dump(text: &str) -> Result<Language> {
        let mut lines = text.lines().enumerate();
        let (alphabet, depth) = match lines.next() {
            Some((_, header)) => parse_header(header)?,
            None => return Err(Error::Parse { line: 1, msg: "empty dump".into() }),
        };
        let mut words = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w: Word = line.parse().map_err(|e: Error| Error::Parse { line: i + 1, msg: e.to_string() })?;
            if w.len() > depth || w.check_alphabet(alphabet).is_err() {
                return Err(Error::Parse { line: i + 1, msg: format!("word {w} outside alphabet/depth") });
            }
            words.push((i + 1, w));
        }
        words.sort_by(|x, y| x.1.len().cmp(&y.1.len()).then_with(|| x.1.cmp(&y.1)));
        words.dedup_by(|x, y| x.1 == y.1);
        let mut lang = Language {
            alphabet,
            depth,
            children: vec![NONE; alphabet],
            parent: vec![NONE],
            symbol: vec![0],
            levels: vec![0..1],
        };
        let mut idx = 0;
        for level in 1..=depth {
            let start = lang.parent.len();
            while idx < words.len() && words[idx].1.len() == level {
                let (line, w) = &words[idx];
                let (last, prefix) = w.symbols().split_last().expect("nonempty");
                let Some(p) = lang.node(prefix) else {
                    return Err(Error::Consistency(format!(
                        "dump is not prefix-closed: {w} (line {line}) appears without its prefix"
                    )));
                };
                let id = lang.parent.len() as u32;
                lang.children[p as usize * alphabet + *last as usize] = id;
                lang.parent.push(p);
                lang.symbol.push(*last);
                lang.children.extend(std::iter::repeat(NONE).take(alphabet));
                idx += 1;
            }
            lang.levels.push(start..lang.parent.len());
        }
        Ok(lang)
    }
}

fn parse_header(h: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse { line: 1, msg: format!("bad dump header {h:?}") };
    let mut alphabet = None;
    let mut depth = None;
    for tok in h.trim_start_matches('#').split_whitespace() {
        match tok.split_once('=') {
            Some(("alphabet", v)) => alphabet = v.parse().ok(),
            Some(("depth", v)) => depth = v.parse().ok(),
            _ => return Err(bad()),
        }
    }
    Ok((alphabet.ok_or_else(bad)?, depth.ok_or_else(bad)?))
}
