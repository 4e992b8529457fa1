//! Verdicts shared by every checker.

use std::fmt::{self, Display};

use serde::ser::{Serialize, SerializeMap, Serializer};

/// The result class of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Verdict {
    /// Established by an exact decision procedure.
    Proven,
    /// A counterexample was found; see the witness.
    Refuted,
    /// No counterexample among the samples tried.
    Unfalsified,
}

impl Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proven => "Proven",
            Verdict::Refuted => "Refuted",
            Verdict::Unfalsified => "Unfalsified",
        })
    }
}

/// A rendered counterexample or certificate: ordered `name = value` pairs,
/// values rendered exactly (rationals as `p/q`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness(Vec<(String, String)>);

impl Witness {
    pub fn new() -> Self {
        Witness(Vec::new())
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Display) -> Self {
        self.0.push((name.into(), value.to_string()));
        self
    }

    /// Appends the entries of `other`.
    pub fn with_all(mut self, other: Witness) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn push(&mut self, name: impl Into<String>, value: impl Display) {
        self.0.push((name.into(), value.to_string()));
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Verdict of one check together with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub samples_tried: u64,
    pub seed: u64,
    pub note: Option<String>,
}

impl CheckOutcome {
    pub fn proven(samples_tried: u64, seed: u64) -> Self {
        CheckOutcome { verdict: Verdict::Proven, witness: None, samples_tried, seed, note: None }
    }

    pub fn unfalsified(samples_tried: u64, seed: u64) -> Self {
        CheckOutcome { verdict: Verdict::Unfalsified, witness: None, samples_tried, seed, note: None }
    }

    pub fn refuted(witness: Witness, samples_tried: u64, seed: u64) -> Self {
        CheckOutcome { verdict: Verdict::Refuted, witness: Some(witness), samples_tried, seed, note: None }
    }

    /// Proven when an exact procedure backs the sampled search, otherwise
    /// Unfalsified.
    pub fn passed(exact: bool, samples_tried: u64, seed: u64) -> Self {
        if exact {
            Self::proven(samples_tried, seed)
        } else {
            Self::unfalsified(samples_tried, seed)
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    pub fn is_proven(&self) -> bool {
        self.verdict == Verdict::Proven
    }

    /// Merges two outcomes of the same check: Refuted dominates, Proven only
    /// survives if both are Proven.
    pub fn and(self, other: CheckOutcome) -> CheckOutcome {
        let samples = self.samples_tried + other.samples_tried;
        let mut merged = match (self.verdict, other.verdict) {
            (Verdict::Refuted, _) => self,
            (_, Verdict::Refuted) => other,
            (Verdict::Proven, Verdict::Proven) => self,
            (Verdict::Unfalsified, _) => self,
            (_, Verdict::Unfalsified) => other,
        };
        merged.samples_tried = samples;
        merged
    }
}
