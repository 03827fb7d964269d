//! Plain-text system descriptions.
//!
//! ```text
//! # comments run to end of line
//! fib = "1->12, 2->1"
//! tau: 1->21, 2->1
//! sequence = periodic [fib]          # or: prefix [a, b] cycle [fib] / window [a, b, a]
//! model = iid [fib 0.5, tau 0.5]     # or: markov [a, b] / sofic 2
//! transition = [[0.5, 0.5], [1, 0]]  # markov only
//! initial = [1, 0]                   # markov / sofic, default uniform
//! edge = 0 -> 1 : fib @ 0.5          # sofic only, repeatable
//! depth = 20
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::lyapunov::{Sampler, SequenceModel, SoficEdge};
use crate::price::PriceParams;
use crate::word::{NamedSubstitution, Substitution};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    pub depth: usize,
    pub eigen_depth: usize,
    pub tolerance: f64,
    pub precision: u32,
    pub cap: usize,
    pub maxlen: usize,
    pub shift: usize,
    pub bound: Option<u64>,
    pub irreducible_from: usize,
    pub irreducible_to: usize,
    pub pairs: usize,
    pub steps: usize,
    pub classifier_depth: usize,
    pub fractal_depth: usize,
    pub bin_width: f64,
    pub seed: u64,
    pub length: usize,
    pub samples: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            depth: 20,
            eigen_depth: 200,
            tolerance: 1e-20,
            precision: 128,
            cap: 10,
            maxlen: 200,
            shift: 0,
            bound: None,
            irreducible_from: 1,
            irreducible_to: 50,
            pairs: 5,
            steps: 10_000,
            classifier_depth: 100_000,
            fractal_depth: 100_000,
            bin_width: 1e-3,
            seed: 0,
            length: 10_000,
            samples: 50,
        }
    }
}

impl Params {
    pub fn price_params(&self) -> PriceParams {
        PriceParams {
            depth: self.depth,
            pairs: self.pairs,
            irreducible_lengths: (self.irreducible_from, self.irreducible_to),
            maxlen: self.maxlen,
            balance_bound: self.bound,
            precision: self.precision,
            ..PriceParams::default()
        }
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<bool, String> {
        fn pos<T: std::str::FromStr + PartialOrd + Default>(v: &str) -> std::result::Result<T, String> {
            let x: T = v.parse().map_err(|_| format!("expected a number, got {v:?}"))?;
            if x <= T::default() {
                return Err(format!("expected a positive value, got {v}"));
            }
            Ok(x)
        }
        fn any<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("expected a number, got {v:?}"))
        }
        match key {
            "depth" => self.depth = pos(value)?,
            "eigen_depth" => self.eigen_depth = pos(value)?,
            "tolerance" => self.tolerance = pos(value)?,
            "precision" => self.precision = pos(value)?,
            "cap" => self.cap = pos(value)?,
            "maxlen" => self.maxlen = pos(value)?,
            "shift" => self.shift = any(value)?,
            "bound" => self.bound = Some(any(value)?),
            "irreducible_from" => self.irreducible_from = pos(value)?,
            "irreducible_to" => self.irreducible_to = pos(value)?,
            "pairs" => self.pairs = pos(value)?,
            "steps" => self.steps = pos(value)?,
            "classifier_depth" => self.classifier_depth = pos(value)?,
            "fractal_depth" => self.fractal_depth = pos(value)?,
            "bin_width" => self.bin_width = pos(value)?,
            "seed" => self.seed = any(value)?,
            "length" => self.length = pos(value)?,
            "samples" => self.samples = pos(value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceSpec {
    Periodic { cycle: Vec<String> },
    EventuallyPeriodic { prefix: Vec<String>, cycle: Vec<String> },
    Window { prefix: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    Iid { names: Vec<String>, weights: Vec<f64> },
    Markov { names: Vec<String>, transition: Vec<Vec<f64>>, initial: Option<Vec<f64>> },
    Sofic { states: usize, edges: Vec<(usize, usize, String, f64)>, initial: Option<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemConfig {
    pub substitutions: Vec<NamedSubstitution>,
    pub sequence: Option<SequenceSpec>,
    pub model: Option<ModelSpec>,
    pub params: Params,
    #[serde(skip)]
    sequence_line: usize,
    #[serde(skip)]
    model_line: usize,
}

impl Serialize for NamedSubstitution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

/// `[a, b, c]` → names.
fn name_list(s: &str, line: usize) -> Result<(Vec<String>, &str)> {
    let s = s.trim_start();
    let rest = s.strip_prefix('[').ok_or_else(|| err(line, format!("expected '[' at {s:?}")))?;
    let (inner, rest) = rest.split_once(']').ok_or_else(|| err(line, "missing ']'"))?;
    let names: Vec<String> = inner
        .split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect();
    if names.is_empty() {
        return Err(err(line, "empty substitution list"));
    }
    if let Some(bad) = names.iter().find(|n| !is_name(n)) {
        return Err(err(line, format!("invalid name {bad:?}")));
    }
    Ok((names, rest))
}

fn number_list(s: &str, line: usize) -> Result<Vec<f64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected [numbers], got {s:?}")))?;
    inner
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| err(line, format!("bad number {:?}", x.trim()))))
        .collect()
}

fn matrix(s: &str, line: usize) -> Result<Vec<Vec<f64>>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| err(line, "expected [[..], ..]"))?;
    let mut rows = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let end = rest.find(']').ok_or_else(|| err(line, "missing ']' in matrix row"))?;
        rows.push(number_list(&rest[..=end], line)?);
        rest = rest[end + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok(rows)
}

fn parse_sequence(v: &str, line: usize) -> Result<SequenceSpec> {
    let (kind, rest) = v.split_once(char::is_whitespace).unwrap_or((v, ""));
    match kind {
        "periodic" => {
            let (cycle, tail) = name_list(rest, line)?;
            expect_end(tail, line)?;
            Ok(SequenceSpec::Periodic { cycle })
        }
        "window" => {
            let (prefix, tail) = name_list(rest, line)?;
            expect_end(tail, line)?;
            Ok(SequenceSpec::Window { prefix })
        }
        "prefix" => {
            let (prefix, tail) = name_list(rest, line)?;
            let tail = tail.trim_start();
            let tail = tail
                .strip_prefix("cycle")
                .ok_or_else(|| err(line, "expected 'cycle [..]' after the prefix"))?;
            let (cycle, tail) = name_list(tail, line)?;
            expect_end(tail, line)?;
            Ok(SequenceSpec::EventuallyPeriodic { prefix, cycle })
        }
        other => Err(err(line, format!("unknown sequence kind {other:?}; use periodic, prefix .. cycle, or window"))),
    }
}

fn expect_end(tail: &str, line: usize) -> Result<()> {
    if tail.trim().is_empty() {
        Ok(())
    } else {
        Err(err(line, format!("unexpected trailing text {:?}", tail.trim())))
    }
}

fn parse_model(v: &str, line: usize) -> Result<ModelSpec> {
    let (kind, rest) = v.split_once(char::is_whitespace).unwrap_or((v, ""));
    match kind {
        "iid" => {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| err(line, "expected iid [name weight, ..]"))?;
            let mut names = Vec::new();
            let mut weights = Vec::new();
            for item in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let mut parts = item.split_whitespace();
                let name = parts.next().unwrap_or_default();
                if !is_name(name) {
                    return Err(err(line, format!("invalid name {name:?}")));
                }
                names.push(name.to_string());
                match parts.next() {
                    Some(w) => weights.push(w.parse::<f64>().map_err(|_| err(line, format!("bad weight {w:?}")))?),
                    None => weights.push(f64::NAN),
                }
                if parts.next().is_some() {
                    return Err(err(line, format!("unexpected text in {item:?}")));
                }
            }
            if names.is_empty() {
                return Err(err(line, "empty model"));
            }
            let given = weights.iter().filter(|w| !w.is_nan()).count();
            if given == 0 {
                weights = vec![1.0 / names.len() as f64; names.len()];
            } else if given != names.len() {
                return Err(err(line, "give a weight for every substitution or for none"));
            }
            Ok(ModelSpec::Iid { names, weights })
        }
        "markov" => {
            let (names, tail) = name_list(rest, line)?;
            expect_end(tail, line)?;
            Ok(ModelSpec::Markov {
                names,
                transition: Vec::new(),
                initial: None,
            })
        }
        "sofic" => {
            let states: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(line, format!("expected a state count, got {:?}", rest.trim())))?;
            if states == 0 {
                return Err(err(line, "a sofic model needs at least one state"));
            }
            Ok(ModelSpec::Sofic {
                states,
                edges: Vec::new(),
                initial: None,
            })
        }
        other => Err(err(line, format!("unknown model kind {other:?}; use iid, markov, or sofic"))),
    }
}

/// `from -> to : name @ weight`
fn parse_edge(v: &str, line: usize) -> Result<(usize, usize, String, f64)> {
    let bad = || err(line, format!("expected 'from -> to : name @ weight', got {v:?}"));
    let (from, rest) = v.split_once("->").ok_or_else(bad)?;
    let (to, rest) = rest.split_once(':').ok_or_else(bad)?;
    let (name, weight) = rest.split_once('@').ok_or_else(bad)?;
    let name = name.trim();
    if !is_name(name) {
        return Err(bad());
    }
    Ok((
        from.trim().parse().map_err(|_| bad())?,
        to.trim().parse().map_err(|_| bad())?,
        name.to_string(),
        weight.trim().parse().map_err(|_| bad())?,
    ))
}

const RESERVED: [&str; 5] = ["sequence", "model", "transition", "initial", "edge"];

impl SystemConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut subs: Vec<NamedSubstitution> = Vec::new();
        let mut sub_lines = BTreeMap::new();
        let mut sequence = None;
        let mut sequence_line = 0;
        let mut model: Option<ModelSpec> = None;
        let mut model_line = 0;
        let mut transition: Option<(usize, Vec<Vec<f64>>)> = None;
        let mut initial: Option<(usize, Vec<f64>)> = None;
        let mut edges: Vec<(usize, (usize, usize, String, f64))> = Vec::new();
        let mut params = Params::default();
        let mut seen_params = BTreeMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or_default().trim();
            if content.is_empty() {
                continue;
            }
            let eq = content.find('=').filter(|&i| !content[i + 1..].starts_with('>'));
            let colon = content.find(':');
            let named = match (eq, colon) {
                (Some(e), Some(c)) => c < e,
                (None, Some(_)) => true,
                _ => false,
            };
            if named {
                let ns: NamedSubstitution = content.parse().map_err(|e: Error| err(line, e.to_string()))?;
                add_sub(&mut subs, &mut sub_lines, ns, line)?;
                continue;
            }
            let Some(e) = eq else {
                return Err(err(line, format!("expected 'key = value', got {content:?}")));
            };
            let key = content[..e].trim();
            let value = content[e + 1..].trim();
            if value.is_empty() {
                return Err(err(line, format!("missing value for {key:?}")));
            }
            if let Some(rules) = value.strip_prefix('"') {
                let rules = rules
                    .strip_suffix('"')
                    .ok_or_else(|| err(line, "unterminated string"))?;
                if !is_name(key) || RESERVED.contains(&key) || params.clone().set(key, "1").unwrap_or(false) {
                    return Err(err(line, format!("{key:?} cannot name a substitution")));
                }
                let substitution: Substitution = rules.parse().map_err(|e: Error| err(line, e.to_string()))?;
                add_sub(
                    &mut subs,
                    &mut sub_lines,
                    NamedSubstitution {
                        name: key.to_string(),
                        substitution,
                    },
                    line,
                )?;
                continue;
            }
            match key {
                "sequence" => {
                    if sequence.is_some() {
                        return Err(err(line, "duplicate sequence"));
                    }
                    sequence = Some(parse_sequence(value, line)?);
                    sequence_line = line;
                }
                "model" => {
                    if model.is_some() {
                        return Err(err(line, "duplicate model"));
                    }
                    model = Some(parse_model(value, line)?);
                    model_line = line;
                }
                "transition" => {
                    if transition.replace((line, matrix(value, line)?)).is_some() {
                        return Err(err(line, "duplicate transition"));
                    }
                }
                "initial" => {
                    if initial.replace((line, number_list(value, line)?)).is_some() {
                        return Err(err(line, "duplicate initial"));
                    }
                }
                "edge" => edges.push((line, parse_edge(value, line)?)),
                _ => {
                    if let Some(prev) = seen_params.insert(key.to_string(), line) {
                        return Err(err(line, format!("{key:?} already set on line {prev}")));
                    }
                    match params.set(key, value) {
                        Ok(true) => {}
                        Ok(false) => return Err(err(line, format!("unknown key {key:?}"))),
                        Err(m) => return Err(err(line, format!("{key}: {m}"))),
                    }
                }
            }
        }

        if subs.is_empty() {
            return Err(err(1, "no substitutions defined"));
        }
        if sequence.is_none() && model.is_none() {
            return Err(err(1, "need a sequence or a model"));
        }
        if params.irreducible_from > params.irreducible_to {
            return Err(err(
                seen_params.get("irreducible_from").copied().unwrap_or(1),
                "irreducible_from exceeds irreducible_to",
            ));
        }

        match &mut model {
            Some(ModelSpec::Markov {
                names,
                transition: t,
                initial: init,
            }) => {
                let (_, rows) = transition
                    .take()
                    .ok_or_else(|| err(model_line, "markov model needs a transition matrix"))?;
                if rows.len() != names.len() || rows.iter().any(|r| r.len() != names.len()) {
                    return Err(err(model_line, format!("transition must be {0}×{0}", names.len())));
                }
                *t = rows;
                *init = initial.take().map(|x| x.1);
            }
            Some(ModelSpec::Sofic {
                edges: e,
                initial: init,
                ..
            }) => {
                if edges.is_empty() {
                    return Err(err(model_line, "sofic model needs edges"));
                }
                *e = edges.drain(..).map(|x| x.1).collect();
                *init = initial.take().map(|x| x.1);
            }
            _ => {}
        }
        if let Some((line, _)) = transition {
            return Err(err(line, "transition only applies to a markov model"));
        }
        if let Some((line, _)) = initial {
            return Err(err(line, "initial only applies to markov and sofic models"));
        }
        if let Some((line, _)) = edges.first() {
            return Err(err(*line, "edge only applies to a sofic model"));
        }

        let cfg = SystemConfig {
            substitutions: subs,
            sequence,
            model,
            params,
            sequence_line,
            model_line,
        };
        cfg.check_names()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| err(0, format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn check_names(&self) -> Result<()> {
        let known = |n: &String| self.substitutions.iter().any(|s| &s.name == n);
        let seq_names: Vec<&String> = match &self.sequence {
            Some(SequenceSpec::Periodic { cycle }) => cycle.iter().collect(),
            Some(SequenceSpec::EventuallyPeriodic { prefix, cycle }) => prefix.iter().chain(cycle).collect(),
            Some(SequenceSpec::Window { prefix }) => prefix.iter().collect(),
            None => Vec::new(),
        };
        if let Some(n) = seq_names.into_iter().find(|n| !known(n)) {
            return Err(err(self.sequence_line, format!("unknown substitution {n:?}")));
        }
        let model_names: Vec<&String> = match &self.model {
            Some(ModelSpec::Iid { names, .. }) | Some(ModelSpec::Markov { names, .. }) => names.iter().collect(),
            Some(ModelSpec::Sofic { edges, .. }) => edges.iter().map(|e| &e.2).collect(),
            None => Vec::new(),
        };
        if let Some(n) = model_names.into_iter().find(|n| !known(n)) {
            return Err(err(self.model_line, format!("unknown substitution {n:?}")));
        }
        Ok(())
    }

    pub fn substitution(&self, name: &str) -> Option<&Substitution> {
        self.substitutions
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.substitution)
    }

    fn resolve(&self, names: &[String]) -> Vec<Substitution> {
        names
            .iter()
            .map(|n| self.substitution(n).expect("names checked at parse time").clone())
            .collect()
    }

    pub fn directive(&self) -> Result<DirectiveSequence> {
        let line = self.sequence_line;
        let wrap = |e: Error| err(line, e.to_string());
        match &self.sequence {
            None => Err(err(1, "no sequence defined")),
            Some(SequenceSpec::Periodic { cycle }) => Ok(DirectiveSequence::periodic(self.resolve(cycle))
                .map_err(wrap)?
                .with_names(cycle.clone())),
            Some(SequenceSpec::EventuallyPeriodic { prefix, cycle }) => {
                Ok(DirectiveSequence::eventually_periodic(self.resolve(prefix), self.resolve(cycle))
                    .map_err(wrap)?
                    .with_names(prefix.iter().chain(cycle).cloned().collect()))
            }
            Some(SequenceSpec::Window { prefix }) => Ok(DirectiveSequence::finite_window(self.resolve(prefix))
                .map_err(wrap)?
                .with_names(prefix.clone())),
        }
    }

    pub fn sequence_model(&self) -> Result<SequenceModel> {
        let line = self.model_line;
        let wrap = |e: Error| err(line, e.to_string());
        let uniform = |k: usize| vec![1.0 / k as f64; k];
        match &self.model {
            None => Err(err(1, "no model defined")),
            Some(ModelSpec::Iid { names, weights }) => {
                SequenceModel::iid(names.clone(), self.resolve(names), weights.clone()).map_err(wrap)
            }
            Some(ModelSpec::Markov {
                names,
                transition,
                initial,
            }) => SequenceModel::new(
                names.clone(),
                self.resolve(names),
                Sampler::Markov {
                    transition: transition.clone(),
                    initial: initial.clone().unwrap_or_else(|| uniform(names.len())),
                },
            )
            .map_err(wrap),
            Some(ModelSpec::Sofic {
                states,
                edges,
                initial,
            }) => {
                let mut names: Vec<String> = Vec::new();
                let mut out = Vec::new();
                for (from, to, name, weight) in edges {
                    let sub = match names.iter().position(|n| n == name) {
                        Some(i) => i,
                        None => {
                            names.push(name.clone());
                            names.len() - 1
                        }
                    };
                    out.push(SoficEdge {
                        from: *from,
                        to: *to,
                        sub,
                        weight: *weight,
                    });
                }
                SequenceModel::new(
                    names.clone(),
                    self.resolve(&names),
                    Sampler::Sofic {
                        states: *states,
                        edges: out,
                        initial: initial.clone().unwrap_or_else(|| uniform(*states)),
                    },
                )
                .map_err(wrap)
            }
        }
    }
}

fn add_sub(
    subs: &mut Vec<NamedSubstitution>,
    lines: &mut BTreeMap<String, usize>,
    ns: NamedSubstitution,
    line: usize,
) -> Result<()> {
    if RESERVED.contains(&ns.name.as_str()) {
        return Err(err(line, format!("{:?} cannot name a substitution", ns.name)));
    }
    if let Some(prev) = lines.insert(ns.name.clone(), line) {
        return Err(err(line, format!("substitution {:?} already defined on line {prev}", ns.name)));
    }
    subs.push(ns);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directive::SequenceKind;

    #[test]
    fn fibonacci_file() {
        let cfg = SystemConfig::parse("# fib\nfib = \"1->12, 2->1\"\nsequence = periodic [fib]\nmaxlen = 100\n").unwrap();
        assert_eq!(cfg.params.maxlen, 100);
        assert_eq!(cfg.params.depth, 20);
        let d = cfg.directive().unwrap();
        assert_eq!(d.kind(), SequenceKind::Periodic);
        assert_eq!(d.get(7).unwrap(), &Substitution::fibonacci());
    }

    #[test]
    fn colon_form_and_prefix_cycle() {
        let cfg = SystemConfig::parse("a: 1->12, 2->1\nb: 1->21,2->1\nsequence = prefix [a, b, a] cycle [b, a]").unwrap();
        let d = cfg.directive().unwrap();
        assert_eq!(d.preperiod_len(), 3);
        assert_eq!(d.period(), Some(2));
        assert_eq!(d.name(3).unwrap(), "b");
    }

    #[test]
    fn errors_carry_lines() {
        let cases = [
            ("", 1),
            ("fib = \"1->12, 2->1\"\nsequence = periodic [tau]", 2),
            ("fib = \"1->12, 2->1\"\nsequence = periodic [fib]\nfrobnicate = 3", 3),
            ("fib = \"1->12, 2->1\"\nsequence = periodic [fib]\ndepth = -1", 3),
            ("fib = \"1->12, 2->\"", 1),
            ("fib = \"1->12, 2->1\"\nfib = \"1->1, 2->21\"", 2),
            ("fib = \"1->12, 2->1\"\nsequence = spiral [fib]", 2),
        ];
        for (text, want) in cases {
            match SystemConfig::parse(text) {
                Err(Error::Config { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn models() {
        let cfg = SystemConfig::parse(
            "a = \"1->12, 2->1\"\nb = \"1->112, 2->12\"\nmodel = markov [a, b]\ntransition = [[0.5, 0.5], [1, 0]]\n",
        )
        .unwrap();
        let m = cfg.sequence_model().unwrap();
        assert!(matches!(m.sampler, Sampler::Markov { .. }));
        assert!(m.strongly_connected());

        let cfg = SystemConfig::parse("a = \"1->12, 2->1\"\nb = \"1->21, 2->1\"\nmodel = iid [a, b]").unwrap();
        match cfg.model {
            Some(ModelSpec::Iid { ref weights, .. }) => assert_eq!(weights, &vec![0.5, 0.5]),
            _ => panic!(),
        }

        let cfg = SystemConfig::parse(
            "a = \"1->12, 2->1\"\nb = \"1->21, 2->1\"\nmodel = sofic 2\nedge = 0 -> 1 : a @ 1\nedge = 1 -> 0 : b @ 0.5\nedge = 1 -> 1 : a @ 0.5\n",
        )
        .unwrap();
        let m = cfg.sequence_model().unwrap();
        assert_eq!(m.names, vec!["a", "b"]);
        assert!(m.strongly_connected());
    }
}
