use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{weighted_rate, ScoringError};
use crate::tasks::{Level, TaskKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    #[default]
    Measured,
    Imported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessCell {
    pub task: TaskKind,
    pub level: Level,
    pub rate: f64,
    #[serde(default)]
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub successes: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attempts: Option<u32>,
}

/// Success rates per (task, level). Cells may be missing; scoring reports
/// which ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuccessTable {
    pub label: Option<String>,
    cells: BTreeMap<(TaskKind, Level), SuccessCell>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    cells: Vec<SuccessCell>,
}

impl SuccessTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn labelled(label: impl Into<String>) -> Self {
        Self { label: Some(label.into()), cells: BTreeMap::new() }
    }

    pub fn set(&mut self, task: TaskKind, level: Level, rate: f64, provenance: Provenance) -> Result<(), ScoringError> {
        check_rate(rate)?;
        self.cells.insert(
            (task, level),
            SuccessCell { task, level, rate, provenance, successes: None, attempts: None },
        );
        Ok(())
    }

    /// Records a measured cell from raw counts. Zero attempts leaves the cell
    /// empty.
    pub fn set_counts(&mut self, task: TaskKind, level: Level, successes: u32, attempts: u32) {
        if attempts == 0 {
            return;
        }
        let successes = successes.min(attempts);
        self.cells.insert(
            (task, level),
            SuccessCell {
                task,
                level,
                rate: successes as f64 / attempts as f64,
                provenance: Provenance::Measured,
                successes: Some(successes),
                attempts: Some(attempts),
            },
        );
    }

    pub fn get(&self, task: TaskKind, level: Level) -> Option<&SuccessCell> {
        self.cells.get(&(task, level))
    }

    pub fn rate(&self, task: TaskKind, level: Level) -> Option<f64> {
        self.get(task, level).map(|c| c.rate)
    }

    pub fn cells(&self) -> impl Iterator<Item = &SuccessCell> {
        self.cells.values()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells of the full 12 x 3 grid that have no value.
    pub fn missing(&self) -> Vec<(TaskKind, Level)> {
        TaskKind::ALL
            .iter()
            .flat_map(|&k| Level::ALL.map(|l| (k, l)))
            .filter(|key| !self.cells.contains_key(key))
            .collect()
    }

    pub fn weighted(&self, task: TaskKind) -> Result<f64, ScoringError> {
        let p: Vec<(Level, Option<f64>)> = Level::ALL.iter().map(|&l| (l, self.rate(task, l))).collect();
        let missing: Vec<_> = p.iter().filter(|(_, r)| r.is_none()).map(|&(l, _)| (task, l)).collect();
        if !missing.is_empty() {
            return Err(ScoringError::MissingCells(missing));
        }
        weighted_rate(p[0].1.unwrap(), p[1].1.unwrap(), p[2].1.unwrap())
    }

    /// Rate rounded to two decimals, as tables display it.
    pub fn display_rate(&self, task: TaskKind, level: Level) -> Option<String> {
        self.rate(task, level).map(|r| format!("{:.2}", (r * 100.0).round() / 100.0))
    }

    pub fn to_json(&self) -> String {
        let doc = TableJson { label: self.label.clone(), cells: self.cells.values().cloned().collect() };
        serde_json::to_string_pretty(&doc).expect("tables serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ScoringError> {
        let doc: TableJson = serde_json::from_str(text).map_err(|e| ScoringError::Parse(e.to_string()))?;
        let mut table = SuccessTable { label: doc.label, cells: BTreeMap::new() };
        for cell in doc.cells {
            check_rate(cell.rate)?;
            table.cells.insert((cell.task, cell.level), cell);
        }
        Ok(table)
    }

    /// Wide CSV: `task,L1,L2,L3`, one row per task, blank for missing.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["task", "L1", "L2", "L3"]).unwrap();
        for k in TaskKind::ALL {
            if Level::ALL.iter().all(|&l| self.rate(k, l).is_none()) {
                continue;
            }
            let mut row = vec![k.code().to_string()];
            row.extend(Level::ALL.iter().map(|&l| self.rate(k, l).map(|r| r.to_string()).unwrap_or_default()));
            w.write_record(&row).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// Reads the wide CSV form. Cells are tagged as imported.
    pub fn from_csv(text: &str) -> Result<Self, ScoringError> {
        let mut tables = read_tables_csv(text)?;
        match tables.len() {
            0 => Ok(SuccessTable::new()),
            1 => Ok(tables.pop().unwrap().1),
            n => Err(ScoringError::Parse(format!("{n} models in a single-table CSV"))),
        }
    }
}

fn check_rate(rate: f64) -> Result<(), ScoringError> {
    if (0.0..=1.0).contains(&rate) {
        Ok(())
    } else {
        Err(ScoringError::OutOfRange(rate))
    }
}

/// Reads `task,L1,L2,L3` or `model,task,L1,L2,L3`. Models keep file order.
pub fn read_tables_csv(text: &str) -> Result<Vec<(String, SuccessTable)>, ScoringError> {
    let perr = |e: csv::Error| ScoringError::Parse(e.to_string());
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = r.headers().map_err(perr)?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let task_col = col("task").ok_or_else(|| ScoringError::Parse("no task column".into()))?;
    let model_col = col("model");
    let level_cols: Vec<usize> = ["L1", "L2", "L3"]
        .iter()
        .map(|l| col(l).ok_or_else(|| ScoringError::Parse(format!("no {l} column"))))
        .collect::<Result<_, _>>()?;
    let mut out: Vec<(String, SuccessTable)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(perr)?;
        let model = model_col.map(|c| rec[c].to_string()).unwrap_or_default();
        let kind: TaskKind = rec[task_col].parse().map_err(|e: crate::tasks::TaskError| ScoringError::Parse(e.to_string()))?;
        let idx = match out.iter().position(|(m, _)| *m == model) {
            Some(i) => i,
            None => {
                let label = (!model.is_empty()).then(|| model.clone());
                out.push((model.clone(), SuccessTable { label, cells: BTreeMap::new() }));
                out.len() - 1
            }
        };
        for (level, &c) in Level::ALL.iter().zip(&level_cols) {
            let field = rec.get(c).unwrap_or("");
            if field.is_empty() {
                continue;
            }
            let rate: f64 = field.parse().map_err(|_| ScoringError::Parse(format!("bad rate {field:?}")))?;
            out[idx].1.set(kind, *level, rate, Provenance::Imported)?;
        }
    }
    Ok(out)
}
