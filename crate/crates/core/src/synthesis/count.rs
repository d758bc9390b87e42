use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::Circuit;

/// Column order of the gate-count CSV.
pub const COUNT_CSV_HEADER: &str = "variant,basis,U1,U2,U3,CX,Rz,SX,X,total";
const COUNT_COLUMNS: [&str; 7] = ["u1", "u2", "u3", "cx", "rz", "sx", "x"];

/// Histogram of gate names (`Gate::name`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateCount(BTreeMap<String, usize>);

impl GateCount {
    pub fn get(&self, name: &str) -> usize {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// One row matching [`COUNT_CSV_HEADER`].
    pub fn csv_row(&self, variant: &str, basis: &str) -> String {
        let cols: Vec<String> = COUNT_COLUMNS
            .iter()
            .map(|c| self.get(c).to_string())
            .collect();
        format!("{variant},{basis},{},{}", cols.join(","), self.total())
    }
}

impl fmt::Display for GateCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn count_gates(c: &Circuit) -> GateCount {
    let mut counts = BTreeMap::new();
    for g in c.gates() {
        *counts.entry(g.name()).or_insert(0) += 1;
    }
    GateCount(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn histogram_and_row() {
        let mut c = Circuit::new(2);
        c.extend([Gate::cx(0, 1), Gate::cx(1, 0), Gate::rz(0.1, 0), Gate::h(1)])
            .unwrap();
        let n = count_gates(&c);
        assert_eq!(n.get("cx"), 2);
        assert_eq!(n.get("u3"), 0);
        assert_eq!(n.total(), 4);
        assert_eq!(n.csv_row("demo", "modern"), "demo,modern,0,0,0,2,1,0,0,4");
        assert_eq!(n.to_string(), "{cx: 2, h: 1, rz: 1}");
    }
}
