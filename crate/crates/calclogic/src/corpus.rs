//! Batch checking of (term, formula) pairs with timing.

use std::time::{Duration, Instant};

use calclogic_core::checker::{Checker, Stats};
use calclogic_core::{Budget, Formula, GeneratorSet, Presentation, Term, Verdict};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub term: Term,
    pub formula: Formula,
    pub verdict: Verdict,
    pub stats: Stats,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusReport {
    pub entries: Vec<CorpusEntry>,
    pub elapsed: Duration,
}

impl CorpusReport {
    pub fn count(&self, label: &str) -> usize {
        self.entries.iter().filter(|e| e.verdict.label() == label).count()
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(|e| matches!(e.verdict, Verdict::Unknown(_)))
    }
}

/// Checks every pair with a fresh checker, so each verdict and its work
/// counters depend only on that pair. Pairs whose sorts disagree get an
/// Unknown verdict naming the error.
pub fn check_corpus(p: &Presentation, pairs: &[(Term, Formula)], gens: &GeneratorSet, budget: &Budget) -> CorpusReport {
    let start = Instant::now();
    let mut entries = Vec::with_capacity(pairs.len());
    for (t, f) in pairs {
        let t0 = Instant::now();
        let mut c = Checker::new(p, *budget).with_generators(gens.clone());
        let verdict = c.check(t, f).unwrap_or_else(|e| Verdict::Unknown(e.to_string()));
        entries.push(CorpusEntry {
            term: t.clone(),
            formula: f.clone(),
            verdict,
            stats: c.stats(),
            elapsed: t0.elapsed(),
        });
    }
    CorpusReport { entries, elapsed: start.elapsed() }
}
