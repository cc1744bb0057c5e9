use crate::error::{arg, Error, Result};
use crate::word::Word;

/// A labeled directed graph presenting a sofic shift. At most 64 states.
#[derive(Debug, Clone, PartialEq)]
pub struct Sofic {
    states: usize,
    alphabet: usize,
    /// `(from, to, label)`
    edges: Vec<(usize, usize, u8)>,
    live: u64,
}

impl Sofic {
    pub fn new(states: usize, alphabet: usize, edges: Vec<(usize, usize, u8)>) -> Result<Self> {
        if states == 0 || states > 64 {
            return arg(format!("sofic presentation needs 1..=64 states, got {states}"));
        }
        for &(f, t, l) in &edges {
            if f >= states || t >= states {
                return arg(format!("edge {f}->{t} references a missing state"));
            }
            if l as usize >= alphabet {
                return arg(format!("label {l} outside alphabet of size {alphabet}"));
            }
        }
        let live = live_states(states, &edges);
        if live == 0 {
            return Err(Error::Construction("labeled graph has no cycle; the shift is empty".into()));
        }
        Ok(Sofic { states, alphabet, edges, live })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn edges(&self) -> &[(usize, usize, u8)] {
        &self.edges
    }

    pub fn start(&self) -> u64 {
        self.live
    }

    /// Subset construction step restricted to live states.
    pub fn step(&self, subset: u64, a: u8) -> Option<u64> {
        let mut next = 0u64;
        for &(f, t, l) in &self.edges {
            if l == a && subset & (1 << f) != 0 && self.live & (1 << t) != 0 {
                next |= 1 << t;
            }
        }
        (next != 0).then_some(next)
    }

    /// Membership by backtracking search for a labeled path through live states.
    pub fn accepts(&self, w: &Word) -> bool {
        let s = w.symbols();
        if s.is_empty() {
            return true;
        }
        (0..self.states).any(|q| self.live & (1 << q) != 0 && self.path_from(q, s))
    }

    fn path_from(&self, q: usize, s: &[u8]) -> bool {
        match s.split_first() {
            None => true,
            Some((&a, rest)) => self
                .edges
                .iter()
                .any(|&(f, t, l)| f == q && l == a && self.live & (1 << t) != 0 && self.path_from(t, rest)),
        }
    }
}

fn live_states(states: usize, edges: &[(usize, usize, u8)]) -> u64 {
    let mut live: u64 = if states == 64 { u64::MAX } else { (1 << states) - 1 };
    loop {
        let mut next = 0u64;
        for &(f, t, _) in edges {
            if live & (1 << f) != 0 && live & (1 << t) != 0 {
                next |= 1 << f;
            }
        }
        if next == live {
            return live;
        }
        live = next;
    }
}
