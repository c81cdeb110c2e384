//! The embedded subalgebra, ansatz and solution catalogs as one document.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::liealg::{subalgebras, Algebra, SubalgebraRep};
use crate::reduction::solutions::{solutions, SolutionRecord};
use crate::reduction::{ansatze, ReductionAnsatz};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub subalgebras: Vec<SubalgebraRep>,
    pub reductions: Vec<ReductionAnsatz>,
    pub solutions: Vec<SolutionRecord>,
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

impl Catalog {
    pub fn embedded() -> Self {
        Catalog {
            subalgebras: subalgebras().to_vec(),
            reductions: ansatze().to_vec(),
            solutions: solutions().to_vec(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn count(&self, alg: Algebra) -> usize {
        self.subalgebras.iter().filter(|s| s.algebra == alg).count()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for alg in [Algebra::Classical, Algebra::Susy] {
            let _ = writeln!(out, "## {} subalgebras\n", alg.name());
            out.push_str("| label | kind | representative | constraints |\n|---|---|---|---|\n");
            for s in self.subalgebras.iter().filter(|s| s.algebra == alg) {
                let _ = writeln!(out, "| {} | {} | {} | {} |", s.label, s.kind, cell(&s.display), cell(&s.constraints));
            }
            out.push('\n');
        }
        out.push_str("## Invariant ansätze and reduced equations\n\n");
        out.push_str("| label | σ | fields | reduced equations | erratum |\n|---|---|---|---|---|\n");
        for a in &self.reductions {
            let fields: Vec<String> = a.fields.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                a.label,
                cell(&a.sigma),
                cell(&fields.join(", ")),
                cell(&a.expected.join("; ")),
                if a.erratum { "yes" } else { "" }
            );
        }
        out.push_str("\n## Invariant solutions\n\n");
        out.push_str("| id | subalgebra | tier | fields | erratum |\n|---|---|---|---|---|\n");
        for r in &self.solutions {
            let fields: Vec<String> = r.fields.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                r.id,
                r.subalgebra,
                r.tier.name(),
                cell(&fields.join(", ")),
                if r.erratum { "yes" } else { "" }
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let c = Catalog::embedded();
        let j = c.to_json().unwrap();
        let back = Catalog::from_json(&j).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json().unwrap(), j);
    }

    #[test]
    fn counts() {
        let c = Catalog::embedded();
        assert_eq!(c.count(Algebra::Classical), 13);
        assert_eq!(c.count(Algebra::Susy), 28);
    }
}
