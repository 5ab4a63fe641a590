//! Tab-delimited report files: per-family score tables, decision histograms
//! and training metrics. Every writer has a matching reader.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pipeline::config::parse_kv;
use crate::svm::{Histogram, Report};

/// One row of a score table: a family evaluated under one orbit setting.
/// `epsilon` is a number or the word `haar`; rates are `nan` when the file
/// held no samples of that class.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub family: String,
    pub epsilon: String,
    pub recall: f64,
    pub specificity: f64,
    pub n: u64,
}

pub fn write_score_table(path: &Path, rows: &[ScoreRow]) -> Result<()> {
    let mut out = String::from("family\tepsilon\trecall\tspecificity\tn\n");
    for row in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            row.family, row.epsilon, row.recall, row.specificity, row.n
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_score_table(path: &Path) -> Result<Vec<ScoreRow>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != "family\tepsilon\trecall\tspecificity\tn" {
        return Err(Error::Malformed { what: "score table", detail: "bad header".into() });
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::Malformed {
                what: "score table",
                detail: format!("line {} has {} fields", lineno + 2, fields.len()),
            });
        }
        rows.push(ScoreRow {
            family: fields[0].to_string(),
            epsilon: fields[1].to_string(),
            recall: parse_f64("score table", fields[2])?,
            specificity: parse_f64("score table", fields[3])?,
            n: fields[4].parse().map_err(|_| Error::Malformed {
                what: "score table",
                detail: format!("bad count {:?}", fields[4]),
            })?,
        });
    }
    Ok(rows)
}

pub fn write_histogram(path: &Path, histogram: &Histogram) -> Result<()> {
    let mut out = String::from("bin_left\tbin_right\tcount_separable\tcount_entangled\n");
    for i in 0..histogram.bins() {
        let (left, right) = histogram.edges(i);
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            left, right, histogram.separable[i], histogram.entangled[i]
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count_separable: u64,
    pub count_entangled: u64,
}

pub fn read_histogram(path: &Path) -> Result<Vec<HistogramRow>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != "bin_left\tbin_right\tcount_separable\tcount_entangled" {
        return Err(Error::Malformed { what: "histogram file", detail: "bad header".into() });
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::Malformed {
                what: "histogram file",
                detail: format!("line {} has {} fields", lineno + 2, fields.len()),
            });
        }
        let count = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Malformed {
                what: "histogram file",
                detail: format!("bad count {s:?}"),
            })
        };
        rows.push(HistogramRow {
            bin_left: parse_f64("histogram file", fields[0])?,
            bin_right: parse_f64("histogram file", fields[1])?,
            count_separable: count(fields[2])?,
            count_entangled: count(fields[3])?,
        });
    }
    Ok(rows)
}

/// Metrics are written in the same `key = value` form the config parser
/// reads, so reports round-trip through the module's own reader.
pub fn write_metrics(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let mut out = String::new();
    for (key, value) in entries {
        out.push_str(&format!("{key} = {value}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_metrics(path: &Path) -> Result<std::collections::BTreeMap<String, String>> {
    parse_kv(&fs::read_to_string(path)?)
}

/// Standard metric entries of one evaluation report.
pub fn report_entries(prefix: &str, report: &Report) -> Vec<(String, String)> {
    vec![
        (format!("{prefix}.n"), report.n.to_string()),
        (format!("{prefix}.entangled_recall"), report.entangled_recall.to_string()),
        (format!("{prefix}.separable_specificity"), report.separable_specificity.to_string()),
        (format!("{prefix}.accuracy"), report.accuracy.to_string()),
        (format!("{prefix}.confusion.detected"), report.confusion.detected.to_string()),
        (format!("{prefix}.confusion.missed"), report.confusion.missed.to_string()),
        (format!("{prefix}.confusion.passed"), report.confusion.passed.to_string()),
        (format!("{prefix}.confusion.false_alarm"), report.confusion.false_alarm.to_string()),
    ]
}

fn parse_f64(what: &'static str, s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Malformed { what, detail: format!("bad number {s:?}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_table_round_trips_including_nan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scores.tsv");
        let rows = vec![
            ScoreRow {
                family: "e3".into(),
                epsilon: "0.5".into(),
                recall: 0.9975,
                specificity: f64::NAN,
                n: 2000,
            },
            ScoreRow {
                family: "g".into(),
                epsilon: "haar".into(),
                recall: 0.013,
                specificity: 0.995,
                n: 2000,
            },
        ];
        write_score_table(&path, &rows).unwrap();
        let loaded = read_score_table(&path).unwrap();
        assert_eq!(loaded.len(), 2);
        assert_eq!(loaded[0].family, "e3");
        assert_eq!(loaded[0].recall, 0.9975);
        assert!(loaded[0].specificity.is_nan());
        assert_eq!(loaded[1].epsilon, "haar");
        assert_eq!(loaded[1].n, 2000);
    }

    #[test]
    fn histogram_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hist.tsv");
        let mut histogram = Histogram { separable: vec![0; 75], entangled: vec![0; 75] };
        histogram.separable[74] = 12;
        histogram.entangled[0] = 7;
        write_histogram(&path, &histogram).unwrap();
        let rows = read_histogram(&path).unwrap();
        assert_eq!(rows.len(), 75);
        assert_eq!(rows[74].count_separable, 12);
        assert_eq!(rows[0].count_entangled, 7);
        assert_eq!(rows[0].bin_left, -1.0);
        assert_eq!(rows[74].bin_right, 1.0);
    }

    #[test]
    fn metrics_round_trip_through_the_kv_parser() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.metrics");
        let entries = vec![
            ("family".to_string(), "e3".to_string()),
            ("test.entangled_recall".to_string(), "0.99".to_string()),
        ];
        write_metrics(&path, &entries).unwrap();
        let map = read_metrics(&path).unwrap();
        assert_eq!(map.get("family").map(String::as_str), Some("e3"));
        assert_eq!(map.get("test.entangled_recall").map(String::as_str), Some("0.99"));
    }

    #[test]
    fn rejects_malformed_tables() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tsv");
        std::fs::write(&path, "wrong header\n").unwrap();
        assert!(read_score_table(&path).is_err());
        assert!(read_histogram(&path).is_err());
    }
}
