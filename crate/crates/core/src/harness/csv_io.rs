use std::io::{Read, Write};

use crate::aggregate::Rule;
use crate::error::{Error, Result};

use super::config::GraphFamily;

pub const CSV_HEADER: &str =
    "experiment,graph_family,n,k,noise_level,rule,trial_index,trial_seed,recovered_fraction,status";

const COLUMNS: [&str; 10] = [
    "experiment",
    "graph_family",
    "n",
    "k",
    "noise_level",
    "rule",
    "trial_index",
    "trial_seed",
    "recovered_fraction",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Ok,
    Infeasible,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
        }
    }
}

/// One line of the results file. `recovered_fraction` is `None` exactly when
/// the trial was infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub graph_family: GraphFamily,
    pub n: usize,
    pub k: usize,
    pub noise_level: f64,
    pub rule: Rule,
    pub trial_index: usize,
    pub trial_seed: u64,
    pub recovered_fraction: Option<f64>,
    pub status: Status,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in rows {
        let fraction = r.recovered_fraction.map(|f| format!("{f:.4}")).unwrap_or_default();
        w.write_record([
            r.experiment.clone(),
            r.graph_family.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            format!("{:.4}", r.noise_level),
            r.rule.to_string(),
            r.trial_index.to_string(),
            r.trial_seed.to_string(),
            fraction,
            r.status.as_str().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn field<'a>(rec: &'a csv::StringRecord, idx: usize, line: u64) -> Result<&'a str> {
    rec.get(idx).ok_or_else(|| Error::Csv(format!("line {line}: missing field {}", COLUMNS[idx])))
}

fn parse<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize, line: u64) -> Result<T> {
    let s = field(rec, idx, line)?;
    s.parse().map_err(|_| Error::Csv(format!("line {line}: bad {} value {s:?}", COLUMNS[idx])))
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = rd.headers().map_err(csv_err)?.clone();
    let missing: Vec<&str> =
        COLUMNS.iter().copied().filter(|c| !headers.iter().any(|h| h == *c)).collect();
    if !missing.is_empty() {
        return Err(Error::Csv(format!("missing columns: {}", missing.join(", "))));
    }
    let pos: Vec<usize> =
        COLUMNS.iter().map(|c| headers.iter().position(|h| h == *c).unwrap()).collect();

    let mut rows = Vec::new();
    for rec in rd.records() {
        let raw = rec.map_err(csv_err)?;
        let line = raw.position().map_or(0, |p| p.line());
        // Reorder to the canonical column order.
        let rec: csv::StringRecord = pos.iter().map(|&i| raw.get(i).unwrap_or("")).collect();
        let status = match field(&rec, 9, line)? {
            "ok" => Status::Ok,
            "infeasible" => Status::Infeasible,
            s => return Err(Error::Csv(format!("line {line}: bad status {s:?}"))),
        };
        let recovered_fraction = match (status, field(&rec, 8, line)?) {
            (Status::Infeasible, "") => None,
            (Status::Infeasible, s) => {
                return Err(Error::Csv(format!("line {line}: infeasible row carries fraction {s:?}")))
            }
            (Status::Ok, _) => {
                let f: f64 = parse(&rec, 8, line)?;
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::Csv(format!("line {line}: fraction {f} outside [0, 1]")));
                }
                Some(f)
            }
        };
        rows.push(ResultRow {
            experiment: field(&rec, 0, line)?.to_string(),
            graph_family: parse(&rec, 1, line)?,
            n: parse(&rec, 2, line)?,
            k: parse(&rec, 3, line)?,
            noise_level: parse(&rec, 4, line)?,
            rule: parse(&rec, 5, line)?,
            trial_index: parse(&rec, 6, line)?,
            trial_seed: parse(&rec, 7, line)?,
            recovered_fraction,
            status,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ResultRow> {
        vec![
            ResultRow {
                experiment: "table2".into(),
                graph_family: GraphFamily::Random,
                n: 1000,
                k: 12,
                noise_level: 0.5,
                rule: Rule::Mc4,
                trial_index: 3,
                trial_seed: u64::MAX,
                recovered_fraction: None,
                status: Status::Infeasible,
            },
            ResultRow {
                experiment: "table1".into(),
                graph_family: GraphFamily::Girth6,
                n: 1001,
                k: 3,
                noise_level: 0.0,
                rule: Rule::Borda,
                trial_index: 0,
                trial_seed: 17,
                recovered_fraction: Some(0.83216),
                status: Status::Ok,
            },
        ]
    }

    #[test]
    fn writes_header_and_fixed_decimals() {
        let mut buf = Vec::new();
        write_rows(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], format!("table2,random,1000,12,0.5000,mc4,3,{},,infeasible", u64::MAX));
        assert_eq!(lines[2], "table1,girth6,1001,3,0.0000,borda,0,17,0.8322,ok");
    }

    #[test]
    fn round_trips_at_four_decimals() {
        let mut buf = Vec::new();
        write_rows(&mut buf, &sample()).unwrap();
        let back = read_rows(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], sample()[0]);
        assert_eq!(back[1].recovered_fraction, Some(0.8322));
    }

    #[test]
    fn missing_columns_are_named() {
        let err = read_rows("experiment,n,k\nx,1,2\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("graph_family") && err.contains("status"), "{err}");
        assert!(!err.contains(" n,"), "{err}");
    }

    #[test]
    fn rejects_bad_values() {
        let bad = format!("{CSV_HEADER}\ntable1,random,10,2,0.0000,borda,0,1,1.5000,ok\n");
        assert!(read_rows(bad.as_bytes()).is_err());
        let bad = format!("{CSV_HEADER}\ntable1,random,10,2,0.0000,borda,0,1,,ok\n");
        assert!(read_rows(bad.as_bytes()).is_err());
        let bad = format!("{CSV_HEADER}\ntable1,random,10,2,0.0000,borda,0,1,0.5,maybe\n");
        assert!(read_rows(bad.as_bytes()).is_err());
    }
}
