//! Built-in chart corpus: small charted morphisms with certified free
//! differential bases, shipped as ordinary chart files.

use crate::chart::LogChart;
use crate::error::Result;

pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub json: &'static str,
}

#[cfg(feature = "empty-corpus")]
pub const CORPUS: &[CorpusEntry] = &[];

#[cfg(not(feature = "empty-corpus"))]
pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "trivial-line",
        description: "affine line with trivial monoid chart and a zero connection",
        json: include_str!("../corpus/trivial-line.json"),
    },
    CorpusEntry {
        name: "trivial-plane",
        description: "affine plane with trivial monoid chart and a nilpotent rank-2 connection",
        json: include_str!("../corpus/trivial-plane.json"),
    },
    CorpusEntry {
        name: "nc-divisor",
        description: "affine line with the divisor x = 0 charted by the free monoid, dlog connection",
        json: include_str!("../corpus/nc-divisor.json"),
    },
    CorpusEntry {
        name: "semistable-node",
        description: "node xy = t over the affine line with the rank-2 free chart over the diagonal",
        json: include_str!("../corpus/semistable-node.json"),
    },
    CorpusEntry {
        name: "standard-log-point",
        description: "point with free-monoid chart mapping to zero, over the rationals",
        json: include_str!("../corpus/standard-log-point.json"),
    },
    CorpusEntry {
        name: "standard-log-point-f2",
        description: "point with free-monoid chart mapping to zero, over the field with two elements",
        json: include_str!("../corpus/standard-log-point-f2.json"),
    },
    CorpusEntry {
        name: "cusp-monoid",
        description: "cusp u^3 = v^2 charted by the numerical monoid generated by 2 and 3",
        json: include_str!("../corpus/cusp-monoid.json"),
    },
];

/// Names with one-line descriptions of the built-in charts.
pub fn list_corpus() -> Vec<(&'static str, &'static str)> {
    CORPUS.iter().map(|e| (e.name, e.description)).collect()
}

pub fn load_builtin(name: &str) -> Option<Result<LogChart>> {
    CORPUS
        .iter()
        .find(|e| e.name == name)
        .map(|e| LogChart::from_file_str(e.json))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    #[test]
    fn corpus_loads_and_validates() {
        for entry in CORPUS {
            let chart = LogChart::from_file_str(entry.json)
                .unwrap_or_else(|e| panic!("{} fails to parse: {e}", entry.name));
            let diags = chart.validate(&Limits::default()).unwrap();
            assert!(diags.is_empty(), "{}: {diags:?}", entry.name);
        }
    }

    #[test]
    fn corpus_listing() {
        let names: Vec<&str> = list_corpus().iter().map(|(n, _)| *n).collect();
        assert!(names.contains(&"semistable-node"));
        assert!(names.contains(&"standard-log-point-f2"));
        assert_eq!(names.len(), 7);
    }

    #[test]
    fn corpus_witnesses_certify() {
        for entry in CORPUS {
            let chart = LogChart::from_file_str(entry.json).unwrap();
            let data = crate::ctx::ChartData::new(chart, Limits::default());
            let w = data.omega1_basis();
            assert!(w.is_ok(), "{}: {:?}", entry.name, w.err());
        }
    }

    #[test]
    fn builtin_lookup() {
        assert!(load_builtin("cusp-monoid").is_some());
        assert!(load_builtin("no-such-chart").is_none());
    }
}
