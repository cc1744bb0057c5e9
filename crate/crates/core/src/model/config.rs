//! Line-oriented `key = value` model and potential descriptions.
//!
//! ```text
//! # golden mean shift
//! kind = sft
//! matrix = 11;10
//! ```
//!
//! Model keys:
//!
//! | kind    | keys                                                               |
//! |---------|--------------------------------------------------------------------|
//! | `sft`   | `matrix` rows separated by `;`, entries by `,`, spaces or nothing  |
//! | `sofic` | `states`, `alphabet`, `edges = 0>1:0, 1>0:1` (`from>to:label`)     |
//! | `beta`  | `z` (`2102001`, `(10)`, `1(10)`) or `beta` (`p/q`, decimal, `golden`), optional `z_depth` |
//! | `sgap`  | `S` (`1,2,5`, `0..`, `3..+2`)                                      |
//!
//! Potential keys (all optional): `potential.kind = constant | locally_constant |
//! series`, `potential.value`, `potential.window`, `potential.table = 00:0.5, 01:-1`,
//! `potential.symbol_values = 0.5,-1`, `potential.coefficients`, `potential.tail`,
//! `potential.offset`.
//!
//! Unknown or repeated keys are parse errors.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::beta_map::BetaMap;
use crate::error::{Error, Result};
use crate::model::{GapSet, ShiftModel, Sofic};
use crate::potential::{LocallyConstant, Potential, Series};
use crate::quadratic::QuadSurd;
use crate::scalar::parse_rational;
use crate::word::Word;

/// Digits generated for periodic or derived `z` when `z_depth` is absent.
pub const DEFAULT_Z_DEPTH: usize = 64;

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Parsed entries; consumers remove the keys they understand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return perr(line, format!("expected key = value, got {body:?}"));
            };
            let k = k.trim().to_string();
            if k.is_empty() {
                return perr(line, "empty key");
            }
            if entries.insert(k.clone(), (line, v.trim().to_string())).is_some() {
                return perr(line, format!("duplicate key {k:?}"));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Remove and parse `key` with `f`, mapping failures to a parse error on its line.
    pub fn take_with<T>(&mut self, key: &str, f: impl FnOnce(&str) -> Option<T>) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => match f(&v) {
                Some(t) => Ok(Some(t)),
                None => perr(line, format!("bad value {v:?} for {key}")),
            },
        }
    }

    /// Error on the first key nobody consumed.
    pub fn finish(self) -> Result<()> {
        match self.entries.into_iter().min_by_key(|(_, (line, _))| *line) {
            None => Ok(()),
            Some((k, (line, _))) => perr(line, format!("unknown key {k:?}")),
        }
    }
}

fn parse_matrix(line: usize, s: &str) -> Result<Vec<Vec<u8>>> {
    s.split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| {
            let cells: Vec<&str> = if row.contains(',') || row.contains(char::is_whitespace) {
                row.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect()
            } else {
                row.split("").filter(|t| !t.is_empty()).collect()
            };
            cells
                .into_iter()
                .map(|c| c.parse::<u8>().or_else(|_| perr(line, format!("bad matrix entry {c:?}"))))
                .collect()
        })
        .collect()
}

fn parse_edges(line: usize, s: &str) -> Result<Vec<(usize, usize, u8)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let parsed = t.split_once('>').and_then(|(a, rest)| {
                let (b, l) = rest.split_once(':')?;
                Some((a.trim().parse().ok()?, b.trim().parse().ok()?, l.trim().parse().ok()?))
            });
            parsed.map_or_else(|| perr(line, format!("bad edge {t:?}, expected from>to:label")), Ok)
        })
        .collect()
}

/// `pre(per)` expanded to `depth` symbols, or a literal word.
fn parse_z(line: usize, s: &str, depth: usize) -> Result<Word> {
    let bad = |e: Error| Error::Parse { line, msg: e.to_string() };
    match s.split_once('(') {
        None => s.parse::<Word>().map_err(bad),
        Some((pre, rest)) => {
            let per = rest.strip_suffix(')').ok_or_else(|| Error::Parse { line, msg: "unclosed '(' in z".into() })?;
            let pre: Word = pre.parse().map_err(bad)?;
            let per: Word = per.parse().map_err(bad)?;
            if per.is_empty() {
                return perr(line, "empty period in z");
            }
            let mut out = pre.into_symbols();
            out.extend(per.symbols().iter().cycle().take(depth.saturating_sub(out.len())));
            Ok(Word::new(out))
        }
    }
}

fn z_from_beta(line: usize, s: &str, depth: usize) -> Result<Word> {
    let bad = |e: Error| Error::Parse { line, msg: e.to_string() };
    let coding = if s == "golden" {
        BetaMap::new(QuadSurd::golden()).map_err(bad)?.quasi_greedy_z(depth)
    } else {
        let b: BigRational = parse_rational(s).ok_or_else(|| Error::Parse { line, msg: format!("bad β {s:?}") })?;
        BetaMap::new(b).map_err(bad)?.quasi_greedy_z(depth)
    };
    Ok(coding.digits)
}

/// Build the model described by the `kind` family of keys.
pub fn model_from_config(cfg: &mut ConfigFile) -> Result<ShiftModel> {
    let Some((line, kind)) = cfg.take("kind") else {
        return perr(0, "missing key \"kind\"");
    };
    let required = |cfg: &mut ConfigFile, key: &str| {
        cfg.take(key).ok_or_else(|| Error::Parse { line, msg: format!("kind = {kind} needs key {key:?}") })
    };
    let model = match kind.as_str() {
        "sft" => {
            let (l, m) = required(cfg, "matrix")?;
            ShiftModel::sft(parse_matrix(l, &m)?)?
        }
        "sofic" => {
            let states = cfg.take_with("states", |v| v.parse::<usize>().ok())?;
            let alphabet = cfg.take_with("alphabet", |v| v.parse::<usize>().ok())?;
            let (l, e) = required(cfg, "edges")?;
            let edges = parse_edges(l, &e)?;
            let states = states.unwrap_or_else(|| edges.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(0));
            let alphabet = alphabet.unwrap_or_else(|| edges.iter().map(|&(_, _, c)| c as usize + 1).max().unwrap_or(0));
            ShiftModel::Sofic(Sofic::new(states, alphabet, edges)?)
        }
        "beta" => {
            let depth = cfg.take_with("z_depth", |v| v.parse::<usize>().ok())?.unwrap_or(DEFAULT_Z_DEPTH);
            let z = match (cfg.take("z"), cfg.take("beta")) {
                (Some((l, z)), None) => parse_z(l, &z, depth)?,
                (None, Some((l, b))) => z_from_beta(l, &b, depth)?,
                (Some((l, _)), Some(_)) => return perr(l, "give either z or beta, not both"),
                (None, None) => return perr(line, "kind = beta needs z or beta"),
            };
            ShiftModel::beta(z)?
        }
        "sgap" => {
            let (l, s) = required(cfg, "S")?;
            ShiftModel::sgap(GapSet::parse(&s).map_err(|e| Error::Parse { line: l, msg: e.to_string() })?)
        }
        other => return perr(line, format!("unknown kind {other:?}")),
    };
    Ok(model)
}

fn parse_floats(line: usize, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().or_else(|_| perr(line, format!("bad number {t:?}"))))
        .collect()
}

/// Build the potential described by the `potential.*` keys, if any.
pub fn potential_from_config(cfg: &mut ConfigFile) -> Result<Option<Potential<f64>>> {
    let Some((line, kind)) = cfg.take("potential.kind") else {
        return Ok(None);
    };
    let float = |cfg: &mut ConfigFile, key: &str| cfg.take_with(key, |v| v.parse::<f64>().ok());
    let phi = match kind.as_str() {
        "constant" => Potential::constant(float(cfg, "potential.value")?.unwrap_or(0.0)),
        "locally_constant" => {
            if let Some((l, t)) = cfg.take("potential.table") {
                let window = cfg.take_with("potential.window", |v| v.parse::<usize>().ok())?;
                let mut entries = Vec::new();
                for item in t.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let Some((word, val)) = item.split_once(':') else {
                        return perr(l, format!("bad table entry {item:?}, expected word:value"));
                    };
                    let word: Word = word.trim().parse().map_err(|e: Error| Error::Parse { line: l, msg: e.to_string() })?;
                    let val: f64 = val.trim().parse().or_else(|_| perr(l, format!("bad value in {item:?}")))?;
                    entries.push((word, val));
                }
                let k = window.unwrap_or_else(|| entries.first().map_or(1, |(w, _)| w.len()));
                Potential::LocallyConstant(LocallyConstant::new(k, entries)?)
            } else if let Some((l, v)) = cfg.take("potential.symbol_values") {
                Potential::by_first_symbol(&parse_floats(l, &v)?)?
            } else {
                return perr(line, "locally_constant needs potential.table or potential.symbol_values");
            }
        }
        "series" => {
            let (l, v) = cfg
                .take("potential.symbol_values")
                .ok_or_else(|| Error::Parse { line, msg: "series needs potential.symbol_values".into() })?;
            let values = parse_floats(l, &v)?;
            let (l, c) = cfg
                .take("potential.coefficients")
                .ok_or_else(|| Error::Parse { line, msg: "series needs potential.coefficients".into() })?;
            let coefficients = parse_floats(l, &c)?;
            let tail = float(cfg, "potential.tail")?.unwrap_or(0.0);
            let mut s = Series::new(coefficients, tail, values)?;
            if let Some(o) = float(cfg, "potential.offset")? {
                s.offset = o;
            }
            Potential::Series(s)
        }
        other => return perr(line, format!("unknown potential kind {other:?}")),
    };
    Ok(Some(phi))
}

/// Parse a file that holds exactly a model and optionally a potential.
pub fn load(text: &str) -> Result<(ShiftModel, Option<Potential<f64>>)> {
    let mut cfg = ConfigFile::parse(text)?;
    let model = model_from_config(&mut cfg)?;
    let phi = potential_from_config(&mut cfg)?;
    cfg.finish()?;
    Ok((model, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn golden_sft() {
        let (m, phi) = load("# golden\nkind = sft\nmatrix = 11;10\n").unwrap();
        assert_eq!(m, ShiftModel::golden_mean());
        assert!(phi.is_none());
        let (m, _) = load("kind=sft\nmatrix = 1 1; 1 0").unwrap();
        assert_eq!(m, ShiftModel::golden_mean());
    }

    #[test]
    fn beta_forms_agree() {
        let (a, _) = load("kind = beta\nz = (10)\nz_depth = 20").unwrap();
        let (b, _) = load("kind = beta\nbeta = golden\nz_depth = 20").unwrap();
        assert_eq!(a, b);
        let (c, _) = load("kind = beta\nbeta = 101/40\nz_depth = 7").unwrap();
        assert_eq!(c.as_beta().unwrap().z(), &w("2102001"));
    }

    #[test]
    fn strictness() {
        assert!(matches!(load("kind = sft\nmatrix = 11;10\ncolour = red"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(load("kind = sft\nkind = sft"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load("kind = sft"), Err(Error::Parse { .. })));
        assert!(matches!(load("matrix"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn sofic_and_sgap() {
        let (m, _) = load("kind = sofic\nedges = 0>0:0, 0>1:1, 1>0:0").unwrap();
        assert_eq!(m.kind(), "sofic");
        let (m, _) = load("kind = sgap\nS = 1,3").unwrap();
        assert_eq!(m.kind(), "sgap");
    }

    #[test]
    fn potentials() {
        let (_, p) = load("kind=sft\nmatrix=11;10\npotential.kind=locally_constant\npotential.symbol_values=0.5,-1").unwrap();
        assert_eq!(p.unwrap().window(), 1);
        let (_, p) = load(
            "kind=sft\nmatrix=11;11\npotential.kind=series\npotential.symbol_values=0,1\npotential.coefficients=1,0.5\npotential.tail=0.5",
        )
        .unwrap();
        assert!(matches!(p, Some(Potential::Series(_))));
    }
}
