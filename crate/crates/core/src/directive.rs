//! Directive sequences `(σ_n)`, their partial products `M_[k,ℓ)`, and the
//! finitely checkable hypotheses on them.
//!
//! Infinite sequences are periodic or eventually periodic; anything else is a
//! finite window with an explicit horizon. Every verdict carries the window it
//! was computed on.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::word::Substitution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Periodic,
    EventuallyPeriodic,
    FiniteWindow,
}

/// Memoized partial products `M_[k,ℓ)`, shareable between threads.
#[derive(Default)]
pub struct ProductCache {
    products: RwLock<HashMap<(usize, usize), Mat2>>,
}

impl ProductCache {
    fn get(&self, key: (usize, usize)) -> Option<Mat2> {
        self.products
            .read()
            .expect("product cache poisoned")
            .get(&key)
            .cloned()
    }

    fn insert(&self, key: (usize, usize), m: Mat2) {
        self.products
            .write()
            .expect("product cache poisoned")
            .insert(key, m);
    }

    pub fn len(&self) -> usize {
        self.products.read().expect("product cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone)]
pub struct DirectiveSequence {
    preperiod: Vec<Substitution>,
    // Empty for finite windows.
    cycle: Vec<Substitution>,
    // Labels for reports; same length as preperiod ++ cycle.
    names: Vec<String>,
    incidence: Vec<Mat2>,
    cache: Arc<ProductCache>,
}

impl fmt::Debug for DirectiveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectiveSequence")
            .field("kind", &self.kind())
            .field("preperiod", &self.preperiod)
            .field("cycle", &self.cycle)
            .finish()
    }
}

impl DirectiveSequence {
    pub fn periodic(cycle: Vec<Substitution>) -> Result<Self> {
        Self::eventually_periodic(Vec::new(), cycle)
    }

    pub fn eventually_periodic(preperiod: Vec<Substitution>, cycle: Vec<Substitution>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidWindow("cycle must be non-empty".into()));
        }
        Ok(Self::build(preperiod, cycle))
    }

    /// A finite prefix; queries past its end fail with `HorizonExceeded`.
    pub fn finite_window(prefix: Vec<Substitution>) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidWindow("finite window must be non-empty".into()));
        }
        Ok(Self::build(prefix, Vec::new()))
    }

    fn build(preperiod: Vec<Substitution>, cycle: Vec<Substitution>) -> Self {
        let all: Vec<&Substitution> = preperiod.iter().chain(cycle.iter()).collect();
        let names = (0..all.len()).map(|i| format!("s{i}")).collect();
        let incidence = all.iter().map(|s| s.incidence()).collect();
        DirectiveSequence {
            preperiod,
            cycle,
            names,
            incidence,
            cache: Arc::new(ProductCache::default()),
        }
    }

    /// Attach display names (preperiod first, then cycle).
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        if names.len() == self.names.len() {
            self.names = names;
        }
        self
    }

    pub fn kind(&self) -> SequenceKind {
        match (self.preperiod.is_empty(), self.cycle.is_empty()) {
            (_, true) => SequenceKind::FiniteWindow,
            (true, false) => SequenceKind::Periodic,
            (false, false) => SequenceKind::EventuallyPeriodic,
        }
    }

    /// `None` when the sequence is defined for every index.
    pub fn horizon(&self) -> Option<usize> {
        if self.cycle.is_empty() {
            Some(self.preperiod.len())
        } else {
            None
        }
    }

    pub fn period(&self) -> Option<usize> {
        (!self.cycle.is_empty()).then_some(self.cycle.len())
    }

    pub fn preperiod_len(&self) -> usize {
        if self.cycle.is_empty() {
            0
        } else {
            self.preperiod.len()
        }
    }

    pub fn preperiod(&self) -> &[Substitution] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[Substitution] {
        &self.cycle
    }

    pub fn cache(&self) -> &ProductCache {
        &self.cache
    }

    fn slot(&self, n: usize) -> Result<usize> {
        if n < self.preperiod.len() {
            Ok(n)
        } else if self.cycle.is_empty() {
            Err(Error::HorizonExceeded {
                requested: n,
                horizon: self.preperiod.len(),
            })
        } else {
            Ok(self.preperiod.len() + (n - self.preperiod.len()) % self.cycle.len())
        }
    }

    pub fn get(&self, n: usize) -> Result<&Substitution> {
        let slot = self.slot(n)?;
        Ok(if slot < self.preperiod.len() {
            &self.preperiod[slot]
        } else {
            &self.cycle[slot - self.preperiod.len()]
        })
    }

    pub fn name(&self, n: usize) -> Result<&str> {
        Ok(&self.names[self.slot(n)?])
    }

    pub fn incidence(&self, n: usize) -> Result<&Mat2> {
        Ok(&self.incidence[self.slot(n)?])
    }

    /// Checks that indices `< end` are available.
    pub fn check_horizon(&self, end: usize) -> Result<()> {
        match self.horizon() {
            Some(h) if end > h => Err(Error::HorizonExceeded {
                requested: end,
                horizon: h,
            }),
            _ => Ok(()),
        }
    }

    /// `(σ_k, …, σ_{ℓ-1})`.
    pub fn segment(&self, k: usize, l: usize) -> Result<Vec<Substitution>> {
        if k > l {
            return Err(Error::InvalidWindow(format!("k = {k} > ℓ = {l}")));
        }
        self.check_horizon(l)?;
        (k..l).map(|n| self.get(n).cloned()).collect()
    }

    /// The composed substitution `σ_[k,ℓ) = σ_k ⋯ σ_{ℓ-1}`.
    pub fn composite(&self, k: usize, l: usize) -> Result<Substitution> {
        let seg = self.segment(k, l)?;
        Ok(seg
            .iter()
            .fold(Substitution::identity(), |acc, s| acc.compose(s)))
    }

    /// Exact `M_[k,ℓ) = M_k ⋯ M_{ℓ-1}`; the empty product is the identity.
    pub fn product_matrix(&self, k: usize, l: usize) -> Result<Mat2> {
        if k > l {
            return Err(Error::InvalidWindow(format!("k = {k} > ℓ = {l}")));
        }
        self.check_horizon(l)?;
        if k == l {
            return Ok(Mat2::identity());
        }
        if let Some(m) = self.cache.get((k, l)) {
            return Ok(m);
        }
        // Extend the longest cached product M_[k,m) rightwards.
        let mut m = l;
        let mut acc = Mat2::identity();
        while m > k {
            if let Some(hit) = self.cache.get((k, m)) {
                acc = hit;
                break;
            }
            m -= 1;
        }
        for j in m..l {
            acc = &acc * self.incidence(j)?;
            self.cache.insert((k, j + 1), acc.clone());
        }
        Ok(acc)
    }

    /// Least `ℓ` with `k < ℓ ≤ horizon` and `M_[k,ℓ)` entrywise positive.
    pub fn is_primitive(&self, k: usize, horizon: usize) -> Result<Primitivity> {
        if horizon <= k {
            return Err(Error::InvalidWindow(format!("horizon {horizon} ≤ k = {k}")));
        }
        self.check_horizon(horizon)?;
        let Some(ell) = self.first_positive(k, horizon)? else {
            return Ok(Primitivity::Unknown { k, horizon });
        };
        let all_k = self.primitivity_decided()? == Some(true);
        Ok(Primitivity::PositiveAt { k, ell, all_k })
    }

    fn first_positive(&self, k: usize, horizon: usize) -> Result<Option<usize>> {
        for ell in k + 1..=horizon {
            if self.product_matrix(k, ell)?.is_positive() {
                return Ok(Some(ell));
            }
        }
        Ok(None)
    }

    /// Decides primitivity outright for (eventually) periodic sequences.
    ///
    /// A non-negative 2×2 matrix is primitive iff its square is positive, so
    /// every tail product is eventually positive iff each rotated cycle
    /// product squared is positive and every preperiod start reaches one.
    pub fn primitivity_decided(&self) -> Result<Option<bool>> {
        let Some(p) = self.period() else {
            return Ok(None);
        };
        let q = self.preperiod_len();
        for k in 0..q + p {
            let start = k.max(q);
            let end = start + 2 * p;
            if !self.product_matrix(k, end)?.is_positive() {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    }

    /// Irreducibility over ℚ of the characteristic polynomial of `M_[k,ℓ)`
    /// for every `ℓ` in `[ℓ_min, ℓ_max]` with `ℓ > k`.
    pub fn is_algebraically_irreducible(
        &self,
        k: usize,
        l_min: usize,
        l_max: usize,
    ) -> Result<Irreducibility> {
        if k > l_min || l_min > l_max {
            return Err(Error::InvalidWindow(format!(
                "need k ≤ ℓ_min ≤ ℓ_max, got {k}, {l_min}, {l_max}"
            )));
        }
        let from = l_min.max(k + 1);
        if from > l_max {
            return Err(Error::InvalidWindow("window contains no ℓ > k".into()));
        }
        self.check_horizon(l_max)?;
        let mut reducible_at = Vec::new();
        for ell in from..=l_max {
            if !self.product_matrix(k, ell)?.char_poly_irreducible() {
                reducible_at.push(ell);
            }
        }
        let window = (from, l_max);
        Ok(match reducible_at.last() {
            None => Irreducibility::VerifiedOnWindow { k, window },
            Some(&last) if last == l_max && (reducible_at.len() >= 2 || from == l_max) => {
                Irreducibility::Refuted {
                    k,
                    ell: last,
                    window,
                    reducible_count: reducible_at.len(),
                }
            }
            Some(_) => Irreducibility::Unknown {
                k,
                window,
                reducible_at,
            },
        })
    }

    /// All `n ≥ 1` with `n + ℓ ≤ horizon` where `(σ_n, …, σ_{n+ℓ-1})` equals
    /// the initial window `(σ_0, …, σ_{ℓ-1})`.
    pub fn recurrence_windows(&self, l: usize, horizon: usize) -> Result<Vec<usize>> {
        if l == 0 {
            return Err(Error::InvalidWindow("window length must be ≥ 1".into()));
        }
        self.check_horizon(horizon)?;
        let mut hits = Vec::new();
        let mut n = 1;
        while n + l <= horizon {
            if self.window_matches(n, l)? {
                hits.push(n);
            }
            n += 1;
        }
        Ok(hits)
    }

    fn window_matches(&self, n: usize, l: usize) -> Result<bool> {
        for j in 0..l {
            if self.slot_equal(j, n + j)? {
                continue;
            }
            return Ok(false);
        }
        Ok(true)
    }

    fn slot_equal(&self, a: usize, b: usize) -> Result<bool> {
        Ok(self.get(a)? == self.get(b)?)
    }

    /// Decides recurrence for (eventually) periodic sequences: recurrent iff
    /// purely periodic; otherwise the initial window of length
    /// `preperiod + period` never reappears.
    pub fn recurrence_decided(&self) -> Result<Option<RecurrenceDecision>> {
        let Some(p) = self.period() else {
            return Ok(None);
        };
        let q = self.preperiod_len();
        for n in 0..q {
            if !self.slot_equal(n, n + p)? {
                return Ok(Some(RecurrenceDecision::NotRecurrent { ell: q + p }));
            }
        }
        Ok(Some(RecurrenceDecision::Recurrent { period: p }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Primitivity {
    /// `M_[k,ℓ)` is positive; `all_k` when periodicity extends this to every `k`.
    PositiveAt { k: usize, ell: usize, all_k: bool },
    Unknown { k: usize, horizon: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Irreducibility {
    VerifiedOnWindow {
        k: usize,
        window: (usize, usize),
    },
    /// Reducible at the end of the window, and not for the first time.
    Refuted {
        k: usize,
        ell: usize,
        window: (usize, usize),
        reducible_count: usize,
    },
    Unknown {
        k: usize,
        window: (usize, usize),
        reducible_at: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RecurrenceDecision {
    Recurrent { period: usize },
    NotRecurrent { ell: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Substitution {
        Substitution::fibonacci()
    }

    fn tm() -> Substitution {
        Substitution::from_images("12", "21").unwrap()
    }

    fn s112() -> Substitution {
        Substitution::from_images("112", "12").unwrap()
    }

    #[test]
    fn product_matrix_examples() {
        let d = DirectiveSequence::periodic(vec![fib()]).unwrap();
        assert_eq!(d.product_matrix(0, 2).unwrap(), Mat2::from_i64([[2, 1], [1, 1]]));
        assert_eq!(d.product_matrix(3, 3).unwrap(), Mat2::identity());
        assert_eq!(d.product_matrix(0, 10).unwrap(), Mat2::from_i64([[89, 55], [55, 34]]));
        assert!(!d.cache().is_empty());
    }

    #[test]
    fn finite_window_horizon() {
        let d = DirectiveSequence::finite_window(vec![fib(), tm()]).unwrap();
        assert!(d.product_matrix(0, 2).is_ok());
        assert_eq!(
            d.product_matrix(0, 3),
            Err(Error::HorizonExceeded { requested: 3, horizon: 2 })
        );
        assert!(DirectiveSequence::finite_window(vec![]).is_err());
        assert!(DirectiveSequence::periodic(vec![]).is_err());
    }

    #[test]
    fn primitivity_examples() {
        let d = DirectiveSequence::periodic(vec![fib()]).unwrap();
        assert_eq!(
            d.is_primitive(0, 20).unwrap(),
            Primitivity::PositiveAt { k: 0, ell: 2, all_k: true }
        );
        let lower = Substitution::from_images("12", "2").unwrap();
        let d = DirectiveSequence::periodic(vec![lower]).unwrap();
        for h in [1, 5, 40] {
            assert_eq!(d.is_primitive(0, h).unwrap(), Primitivity::Unknown { k: 0, horizon: h });
        }
        assert_eq!(d.primitivity_decided().unwrap(), Some(false));

        let d = DirectiveSequence::finite_window(vec![tm(), tm(), s112()]).unwrap();
        assert_eq!(
            d.is_primitive(2, 3).unwrap(),
            Primitivity::PositiveAt { k: 2, ell: 3, all_k: false }
        );
    }

    #[test]
    fn irreducibility_examples() {
        let d = DirectiveSequence::periodic(vec![fib()]).unwrap();
        assert_eq!(
            d.is_algebraically_irreducible(0, 1, 50).unwrap(),
            Irreducibility::VerifiedOnWindow { k: 0, window: (1, 50) }
        );
        let d = DirectiveSequence::periodic(vec![tm()]).unwrap();
        assert!(matches!(
            d.is_algebraically_irreducible(0, 1, 10).unwrap(),
            Irreducibility::Refuted { ell: 10, reducible_count: 10, .. }
        ));
        // ℓ = k is skipped: the empty product is never tested.
        let d = DirectiveSequence::periodic(vec![fib()]).unwrap();
        assert_eq!(
            d.is_algebraically_irreducible(3, 3, 4).unwrap(),
            Irreducibility::VerifiedOnWindow { k: 3, window: (4, 4) }
        );
        assert!(d.is_algebraically_irreducible(3, 3, 3).is_err());
    }

    #[test]
    fn reducible_early_only_is_unknown() {
        // M_[0,1) = I is reducible; every longer product is a Fibonacci power.
        let id = Substitution::identity();
        let d = DirectiveSequence::eventually_periodic(vec![id], vec![fib()]).unwrap();
        match d.is_algebraically_irreducible(0, 1, 8).unwrap() {
            Irreducibility::Unknown { reducible_at, .. } => assert_eq!(reducible_at, vec![1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn recurrence_examples() {
        let d = DirectiveSequence::periodic(vec![fib()]).unwrap();
        assert_eq!(d.recurrence_windows(3, 10).unwrap(), (1..=7).collect::<Vec<_>>());
        let d = DirectiveSequence::periodic(vec![fib(), s112()]).unwrap();
        assert_eq!(d.recurrence_windows(2, 9).unwrap(), vec![2, 4, 6]);
        let d = DirectiveSequence::finite_window(vec![fib(), s112(), tm(), s112()]).unwrap();
        assert_eq!(d.recurrence_windows(2, 4).unwrap(), Vec::<usize>::new());
        assert!(d.recurrence_windows(0, 4).is_err());
    }

    #[test]
    fn recurrence_decision() {
        let d = DirectiveSequence::periodic(vec![fib(), s112()]).unwrap();
        assert_eq!(d.recurrence_decided().unwrap(), Some(RecurrenceDecision::Recurrent { period: 2 }));
        // s112, (fib, s112)^∞ is purely periodic with period 2.
        let d = DirectiveSequence::eventually_periodic(vec![s112()], vec![fib(), s112()]).unwrap();
        assert_eq!(d.recurrence_decided().unwrap(), Some(RecurrenceDecision::Recurrent { period: 2 }));
        let d = DirectiveSequence::eventually_periodic(vec![tm()], vec![fib()]).unwrap();
        assert_eq!(d.recurrence_decided().unwrap(), Some(RecurrenceDecision::NotRecurrent { ell: 2 }));
        assert!(d.recurrence_windows(2, 40).unwrap().is_empty());
    }

    #[test]
    fn composite_matches_product() {
        let d = DirectiveSequence::periodic(vec![fib(), s112(), tm()]).unwrap();
        let c = d.composite(1, 6).unwrap();
        assert_eq!(c.incidence(), d.product_matrix(1, 6).unwrap());
    }
}
