use std::fmt::Write as _;

use crate::aggregate::Rule;

use super::config::GraphFamily;
use super::csv_io::{ResultRow, Status};

/// Everything that identifies a cell except the rule.
#[derive(Debug, Clone, PartialEq)]
pub struct CellKey {
    pub experiment: String,
    pub graph_family: GraphFamily,
    pub n: usize,
    pub k: usize,
    pub noise_level: f64,
}

impl CellKey {
    fn of(r: &ResultRow) -> Self {
        Self {
            experiment: r.experiment.clone(),
            graph_family: r.graph_family,
            n: r.n,
            k: r.k,
            noise_level: r.noise_level,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub key: CellKey,
    pub rule: Rule,
    pub ok_trials: usize,
    pub infeasible_trials: usize,
    /// Mean recovered fraction over the feasible trials, as a fraction.
    pub mean: Option<f64>,
    /// Sample standard deviation over the feasible trials.
    pub std_dev: Option<f64>,
}

impl CellSummary {
    pub fn mean_percent(&self) -> Option<f64> {
        self.mean.map(|m| 100.0 * m)
    }

    /// `"83.2"`, or `"##.#"` when no trial was feasible.
    pub fn formatted(&self) -> String {
        match self.mean_percent() {
            Some(p) => format!("{p:.1}"),
            None => "##.#".to_string(),
        }
    }
}

/// Per-(cell, rule) statistics in order of first appearance.
pub fn summarize(rows: &[ResultRow]) -> Vec<CellSummary> {
    let mut cells: Vec<(CellKey, Rule, Vec<f64>, usize)> = Vec::new();
    for r in rows {
        let key = CellKey::of(r);
        let idx = match cells.iter().position(|(k, rule, _, _)| *k == key && *rule == r.rule) {
            Some(i) => i,
            None => {
                cells.push((key, r.rule, Vec::new(), 0));
                cells.len() - 1
            }
        };
        match (r.status, r.recovered_fraction) {
            (Status::Ok, Some(f)) => cells[idx].2.push(f),
            _ => cells[idx].3 += 1,
        }
    }
    cells
        .into_iter()
        .map(|(key, rule, values, infeasible)| {
            let m = values.len();
            let mean = (m > 0).then(|| values.iter().sum::<f64>() / m as f64);
            let std_dev = mean.filter(|_| m > 1).map(|mu| {
                (values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (m - 1) as f64).sqrt()
            });
            CellSummary { key, rule, ok_trials: m, infeasible_trials: infeasible, mean, std_dev }
        })
        .collect()
}

/// Text table: one line per cell, one column per rule, means in percent.
pub fn render(summaries: &[CellSummary]) -> String {
    let mut rules: Vec<Rule> = Vec::new();
    let mut keys: Vec<&CellKey> = Vec::new();
    for s in summaries {
        if !rules.contains(&s.rule) {
            rules.push(s.rule);
        }
        if !keys.contains(&&s.key) {
            keys.push(&s.key);
        }
    }
    rules.sort_by_key(|r| Rule::ALL.iter().position(|x| x == r));

    let mut out = String::new();
    let _ = write!(out, "{:<12} {:<8} {:>6} {:>4} {:>6}", "experiment", "family", "n", "k", "noise");
    for r in &rules {
        let _ = write!(out, " {:>7}", r.as_str());
    }
    out.push('\n');
    for key in keys {
        let _ = write!(
            out,
            "{:<12} {:<8} {:>6} {:>4} {:>5.0}%",
            key.experiment,
            key.graph_family.as_str(),
            key.n,
            key.k,
            100.0 * key.noise_level
        );
        for r in &rules {
            let cell = summaries.iter().find(|s| &s.key == key && s.rule == *r);
            let text = cell.map_or_else(|| "-".to_string(), CellSummary::formatted);
            let _ = write!(out, " {text:>7}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(rule: Rule, noise: f64, f: Option<f64>) -> ResultRow {
        ResultRow {
            experiment: "table2".into(),
            graph_family: GraphFamily::Random,
            n: 1000,
            k: 12,
            noise_level: noise,
            rule,
            trial_index: 0,
            trial_seed: 0,
            status: if f.is_some() { Status::Ok } else { Status::Infeasible },
            recovered_fraction: f,
        }
    }

    #[test]
    fn means_and_placeholders() {
        let rows = vec![
            r(Rule::Borda, 0.0, Some(0.9)),
            r(Rule::Borda, 0.0, Some(0.8)),
            r(Rule::Rsd, 0.0, Some(0.5)),
            r(Rule::Borda, 0.5, None),
            r(Rule::Borda, 0.5, None),
        ];
        let s = summarize(&rows);
        assert_eq!(s.len(), 3);
        assert!((s[0].mean.unwrap() - 0.85).abs() < 1e-12);
        assert_eq!(s[0].formatted(), "85.0");
        assert!((s[0].std_dev.unwrap() - 0.0707106781).abs() < 1e-9);
        assert_eq!(s[1].std_dev, None);
        assert_eq!(s[2].formatted(), "##.#");
        assert_eq!(s[2].infeasible_trials, 2);

        let text = render(&s);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].contains("85.0") && lines[1].contains("50.0"));
        assert!(lines[2].contains("##.#") && lines[2].trim_end().ends_with('-'));
    }
}
