//! Report items, summaries and JSON-lines output.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Erratum,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Erratum => "erratum",
            Status::Skipped => "skipped",
        }
    }

    /// Outcome of a check on an entry with the given erratum flag.
    pub fn flagged(ok: bool, erratum: bool) -> Status {
        match (ok, erratum) {
            (true, false) => Status::Pass,
            (false, true) => Status::Erratum,
            _ => Status::Fail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub suite: String,
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Item {
    pub fn new(suite: &str, id: &str, status: Status) -> Self {
        Item {
            suite: suite.to_string(),
            id: id.to_string(),
            status,
            witness: None,
            detail: serde_json::Value::Null,
            timing_ms: None,
        }
    }

    pub fn witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    pub fn detail<T: Serialize>(mut self, d: &T) -> Self {
        self.detail = serde_json::to_value(d).unwrap_or(serde_json::Value::Null);
        self
    }
}

/// Orders ids like `L2` before `L10`: digit runs compare numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ai, mut bi) = (a.chars().peekable(), b.chars().peekable());
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut na = String::new();
                while let Some(c) = ai.peek().copied().filter(char::is_ascii_digit) {
                    na.push(c);
                    ai.next();
                }
                let mut nb = String::new();
                while let Some(c) = bi.peek().copied().filter(char::is_ascii_digit) {
                    nb.push(c);
                    bi.next();
                }
                let o = na.len().cmp(&nb.len()).then(na.cmp(&nb));
                if o != Ordering::Equal {
                    return o;
                }
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                ai.next();
                bi.next();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub summary: bool,
    pub suites: Vec<String>,
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
    pub version: String,
    pub seed: u64,
    /// Wall-clock milliseconds per suite, present only on request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub items: Vec<Item>,
    pub seed: u64,
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        Report { items: Vec::new(), seed, timings: None }
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = Item>) {
        self.items.extend(items);
    }

    /// Canonical order: by suite as first added, then by id.
    pub fn sorted(&self) -> Vec<Item> {
        let mut order: Vec<&str> = Vec::new();
        for it in &self.items {
            if !order.contains(&it.suite.as_str()) {
                order.push(&it.suite);
            }
        }
        let mut items = self.items.clone();
        items.sort_by(|a, b| {
            let sa = order.iter().position(|s| *s == a.suite);
            let sb = order.iter().position(|s| *s == b.suite);
            sa.cmp(&sb).then_with(|| natural_cmp(&a.id, &b.id))
        });
        items
    }

    pub fn count(&self, s: Status) -> usize {
        self.items.iter().filter(|i| i.status == s).count()
    }

    pub fn failed(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn summary(&self) -> Summary {
        let mut counts = BTreeMap::new();
        for s in [Status::Pass, Status::Fail, Status::Erratum, Status::Skipped] {
            counts.insert(s.name().to_string(), self.count(s));
        }
        let mut suites: Vec<String> = Vec::new();
        for it in &self.items {
            if !suites.contains(&it.suite) {
                suites.push(it.suite.clone());
            }
        }
        Summary {
            summary: true,
            suites,
            counts,
            total: self.items.len(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            timings: self.timings.clone(),
        }
    }

    /// One JSON object per item, then the summary line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for it in self.sorted() {
            serde_json::to_writer(&mut w, &it)?;
            w.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut w, &self.summary())?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 json")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = vec!["L10", "L2", "SL1", "L1", "as10", "as9"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, vec!["L1", "L2", "L10", "SL1", "as9", "as10"]);
    }

    #[test]
    fn flagged_status() {
        assert_eq!(Status::flagged(true, false), Status::Pass);
        assert_eq!(Status::flagged(false, false), Status::Fail);
        assert_eq!(Status::flagged(false, true), Status::Erratum);
        assert_eq!(Status::flagged(true, true), Status::Fail);
    }

    #[test]
    fn jsonl_ends_with_summary() {
        let mut r = Report::new(42);
        r.extend([Item::new("a", "x2", Status::Pass), Item::new("a", "x10", Status::Erratum)]);
        let out = r.to_jsonl();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("\"x2\""));
        let s: Summary = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(s.counts["erratum"], 1);
        assert!(!r.failed());
    }
}
