//! Summary tables written by `evaluate`.

use std::fmt::Write as _;

use piezoloc_core::eval::ErrorStats;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub method: String,
    pub median: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub count: usize,
}

impl ReportRow {
    pub fn new(method: impl Into<String>, stats: &ErrorStats) -> Self {
        ReportRow {
            method: method.into(),
            median: stats.median,
            mean: stats.mean,
            std_dev: stats.std_dev,
            count: stats.per_point.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config_hash: String,
    pub test_set: String,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn row(&self, method: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "localization error (mm)");
        let _ = writeln!(s, "config_hash: {}", self.config_hash);
        let _ = writeln!(s, "test_set: {}", self.test_set);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<10} {:>10} {:>10} {:>10} {:>6}", "method", "median", "mean", "std", "n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<10} {:>10.4} {:>10.4} {:>10.4} {:>6}",
                r.method, r.median, r.mean, r.std_dev, r.count
            );
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# config_hash={}\nmethod,median_mm,mean_mm,std_mm,n\n", self.config_hash);
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{}", r.method, r.median, r.mean, r.std_dev, r.count);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use piezoloc_core::eval::PointError;
    use piezoloc_core::Point2;

    #[test]
    fn csv_and_text_layout() {
        let stats = ErrorStats::from_points(vec![
            PointError::new(Point2::new(0.0, 0.0), Point2::new(3.0, 4.0)),
            PointError::new(Point2::new(1.0, 1.0), Point2::new(1.0, 1.0)),
        ])
        .unwrap();
        let report = Report {
            config_hash: "abc".into(),
            test_set: "t.jsonl".into(),
            rows: vec![ReportRow::new("center", &stats)],
        };
        assert_eq!(
            report.to_csv(),
            "# config_hash=abc\nmethod,median_mm,mean_mm,std_mm,n\ncenter,2.5,2.5,2.5,2\n"
        );
        assert!(report.to_text().contains("center         2.5000"));
        assert_eq!(report.row("center").unwrap().count, 2);
        assert!(report.row("krr").is_none());
    }
}
