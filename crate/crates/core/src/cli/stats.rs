//! Aggregate detection statistics over a labelled batch.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detector::{classify, Detection, Outcome, PairKind, Verdict};
use crate::producer::{Os, ProducerId, SectionKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub correct: usize,
    pub wrong: usize,
    pub no_result: usize,
}

impl Tally {
    pub fn add(&mut self, d: Detection) {
        match d {
            Detection::Correct => self.correct += 1,
            Detection::Wrong => self.wrong += 1,
            Detection::NoResult => self.no_result += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.correct + self.wrong + self.no_result
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PairTally {
    pub confused: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProducerRow {
    pub producer: ProducerId,
    pub files: usize,
    pub detected: usize,
    pub percentage: f64,
}

/// OS guesses. A guess is correct when the file carries an OS label and
/// every OS candidate names it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OsStats {
    pub labelled: usize,
    pub identified: usize,
    pub correct: usize,
    /// `correct` over all graded files.
    pub of_all: f64,
    /// `correct` over files whose producer was detected correctly.
    pub of_detected: f64,
}

/// One file as the aggregation sees it.
#[derive(Debug, Clone, PartialEq)]
pub struct Graded<'a> {
    pub truth: Option<&'a ProducerId>,
    pub truth_os: Option<Os>,
    /// `None` when the file could not be analysed.
    pub verdict: Option<&'a Verdict>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BatchStats {
    pub files: usize,
    /// Files with a truth label; every tally sums to this.
    pub graded: usize,
    pub ungraded: usize,
    /// Graded files that failed to parse, counted as no result.
    pub errors: usize,
    pub sections: BTreeMap<SectionKind, Tally>,
    pub pairs: BTreeMap<SectionKind, PairTally>,
    /// Ambiguous verdicts counted as wrong.
    pub file_level: Tally,
    pub ambiguous: usize,
    pub per_producer: Vec<ProducerRow>,
    pub os: OsStats,
}

type Column<T> = (&'static str, fn(&T) -> usize);

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        100.0 * n as f64 / d as f64
    }
}

impl BatchStats {
    pub fn from_files<'a>(files: impl IntoIterator<Item = Graded<'a>>) -> Self {
        let mut s = BatchStats {
            sections: SectionKind::ALL.into_iter().map(|k| (k, Tally::default())).collect(),
            pairs: SectionKind::ALL.into_iter().map(|k| (k, PairTally::default())).collect(),
            ..BatchStats::default()
        };
        let mut per: BTreeMap<ProducerId, (usize, usize)> = BTreeMap::new();
        for f in files {
            s.files += 1;
            let Some(truth) = f.truth else {
                s.ungraded += 1;
                continue;
            };
            s.graded += 1;
            let row = per.entry(truth.clone()).or_default();
            row.0 += 1;
            if f.truth_os.is_some() {
                s.os.labelled += 1;
            }
            let Some(v) = f.verdict else {
                s.errors += 1;
                s.file_level.add(Detection::NoResult);
                for t in s.sections.values_mut() {
                    t.add(Detection::NoResult);
                }
                continue;
            };
            let class = classify(v, truth);
            for sc in &class.sections {
                s.sections.get_mut(&sc.section).expect("all sections present").add(sc.detection);
                let p = s.pairs.get_mut(&sc.section).expect("all sections present");
                match sc.pair {
                    Some(PairKind::Confused) => p.confused += 1,
                    Some(PairKind::Error) => p.error += 1,
                    None => {}
                }
            }
            s.file_level.add(class.file);
            if matches!(v.outcome, Outcome::Ambiguous(_)) {
                s.ambiguous += 1;
            }
            if class.file == Detection::Correct {
                row.1 += 1;
            }
            let oses: std::collections::BTreeSet<Os> = v.os_candidates.iter().map(|c| c.0).collect();
            if !oses.is_empty() {
                s.os.identified += 1;
                if let Some(want) = f.truth_os {
                    if oses.len() == 1 && oses.contains(&want) {
                        s.os.correct += 1;
                    }
                }
            }
        }
        s.per_producer = per
            .into_iter()
            .map(|(producer, (files, detected))| ProducerRow { producer, files, detected, percentage: ratio(detected, files) })
            .collect();
        s.os.of_all = ratio(s.os.correct, s.graded);
        s.os.of_detected = ratio(s.os.correct, s.file_level.correct);
        s
    }

    /// The three-way table, the two-candidate table, the file-level
    /// result, per-producer accuracy and OS guesses, as text.
    pub fn render_tables(&self) -> String {
        let mut out = String::new();
        let n = self.graded;
        let cell = |v: usize| format!("{v} ({:.1}%)", ratio(v, n));
        let _ = writeln!(out, "files {} graded {} ungraded {} errors {}", self.files, self.graded, self.ungraded, self.errors);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<12}{:>16}{:>16}{:>16}{:>16}", "Detection", "Header", "Body", "Xref", "Trailer");
        let rows: [Column<Tally>; 3] =
            [("Correct", |t| t.correct), ("Wrong", |t| t.wrong), ("No result", |t| t.no_result)];
        for (name, get) in rows {
            let _ = write!(out, "{name:<12}");
            for t in self.sections.values() {
                let _ = write!(out, "{:>16}", cell(get(t)));
            }
            out.push('\n');
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<12}{:>16}{:>16}{:>16}{:>16}", "Two tools", "Header", "Body", "Xref", "Trailer");
        let pairs: [Column<PairTally>; 2] = [("Confused", |p| p.confused), ("Error", |p| p.error)];
        for (name, get) in pairs {
            let _ = write!(out, "{name:<12}");
            for p in self.pairs.values() {
                let _ = write!(out, "{:>16}", cell(get(p)));
            }
            out.push('\n');
        }
        let _ = writeln!(out);
        let f = &self.file_level;
        let _ = writeln!(
            out,
            "file level  correct {}  wrong {} (ambiguous {})  no result {}",
            cell(f.correct),
            cell(f.wrong),
            self.ambiguous,
            cell(f.no_result)
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<22}{:>8}{:>18}", "Producer", "Files", "Detected");
        for r in &self.per_producer {
            let _ = writeln!(out, "{:<22}{:>8}{:>18}", r.producer.to_string(), r.files, format!("{} ({:.1}%)", r.detected, r.percentage));
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "os  labelled {}  identified {}  correct {}  ({:.1}% of graded, {:.1}% of correctly detected)",
            self.os.labelled, self.os.identified, self.os.correct, self.os.of_all, self.os.of_detected
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{majority_vote, SectionVerdict};
    use std::collections::BTreeSet;
    use ProducerId::*;

    fn verdict(sets: [&[ProducerId]; 4]) -> Verdict {
        let svs: Vec<SectionVerdict> = SectionKind::ALL
            .into_iter()
            .zip(sets)
            .map(|(k, s)| SectionVerdict { section: k, candidates: s.iter().cloned().collect(), supporting_matches: vec![] })
            .collect();
        majority_vote(&svs)
    }

    #[test]
    fn empty_batch_is_all_zero() {
        let s = BatchStats::from_files(Vec::new());
        assert_eq!(s.files, 0);
        assert!(s.sections.values().all(|t| t.total() == 0));
        assert_eq!(s.file_level, Tally::default());
        assert!(s.render_tables().contains("0 (0.0%)"));
    }

    #[test]
    fn pair_with_truth_is_confused() {
        let v = verdict([&[PdfTeX, LuaTeX], &[], &[], &[]]);
        let files: Vec<Graded> = (0..5).map(|_| Graded { truth: Some(&PdfTeX), truth_os: None, verdict: Some(&v) }).collect();
        let s = BatchStats::from_files(files);
        assert_eq!(s.pairs[&SectionKind::Header], PairTally { confused: 5, error: 0 });
        assert_eq!(s.sections[&SectionKind::Header].wrong, 5);
        assert_eq!(s.sections[&SectionKind::Body].no_result, 5);
    }

    #[test]
    fn tallies_sum_to_graded() {
        let a = verdict([&[Cairo], &[], &[Cairo, SkiaPDF], &[Cairo]]);
        let b = verdict([&[Cairo, SkiaPDF], &[], &[], &[Cairo, SkiaPDF]]);
        let files = vec![
            Graded { truth: Some(&Cairo), truth_os: Some(Os::Linux), verdict: Some(&a) },
            Graded { truth: Some(&SkiaPDF), truth_os: None, verdict: Some(&b) },
            Graded { truth: Some(&Cairo), truth_os: None, verdict: None },
            Graded { truth: None, truth_os: None, verdict: Some(&a) },
        ];
        let s = BatchStats::from_files(files);
        assert_eq!((s.files, s.graded, s.ungraded, s.errors), (4, 3, 1, 1));
        for t in s.sections.values() {
            assert_eq!(t.total(), 3);
        }
        assert_eq!(s.file_level.total(), 3);
        assert_eq!(s.ambiguous, 1);
        assert_eq!(s.file_level, Tally { correct: 1, wrong: 1, no_result: 1 });
        let rows: BTreeSet<_> = s.per_producer.iter().map(|r| (r.producer.clone(), r.files, r.detected)).collect();
        assert_eq!(rows, [(Cairo, 2, 1), (SkiaPDF, 1, 0)].into());
    }

    #[test]
    fn os_denominators() {
        let mut v = verdict([&[Cairo], &[], &[], &[]]);
        v.os_candidates = [(Os::Linux, None)].into();
        let mut w = verdict([&[SkiaPDF], &[], &[], &[]]);
        w.os_candidates = [(Os::Linux, None)].into();
        let files = vec![
            Graded { truth: Some(&Cairo), truth_os: Some(Os::Linux), verdict: Some(&v) },
            Graded { truth: Some(&Cairo), truth_os: Some(Os::Linux), verdict: Some(&w) },
            Graded { truth: Some(&Cairo), truth_os: None, verdict: Some(&v) },
            Graded { truth: Some(&Cairo), truth_os: Some(Os::Windows), verdict: Some(&v) },
        ];
        let s = BatchStats::from_files(files);
        assert_eq!((s.os.labelled, s.os.identified, s.os.correct), (3, 4, 2));
        assert_eq!(s.os.of_all, 50.0);
        assert!((s.os.of_detected - 200.0 / 3.0).abs() < 1e-9);
    }
}
