//! Row/column tables and the report layouts built on them.

use crate::error::{CliError, CliResult};

/// A rectangular table of pre-formatted cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let mut row: Vec<String> = row.into_iter().map(Into::into).collect();
        row.resize(self.headers.len().max(row.len()), String::new());
        self.rows.push(row);
    }

    pub fn to_delimited(&self, delimiter: u8) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .flexible(true)
            .from_writer(Vec::new());
        w.write_record(&self.headers)
            .map_err(|e| CliError::Serialize(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row)
                .map_err(|e| CliError::Serialize(e.to_string()))?;
        }
        w.into_inner()
            .map_err(|e| CliError::Serialize(e.to_string()))
    }
}

/// Full-precision number for tidy files; empty when missing or non-finite.
pub fn num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() && v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) => format!("{v:e}"),
        Some(v) if v.is_finite() => format!("{v}"),
        _ => String::new(),
    }
}

pub fn fixed(x: Option<f64>, decimals: usize) -> String {
    match x {
        Some(v) if v.is_finite() => unsigned_zero(format!("{v:.decimals$}")),
        _ => "n/a".into(),
    }
}

/// `-0.00` -> `0.00`.
fn unsigned_zero(s: String) -> String {
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// `95%`, `99.5%`.
pub fn percent_label(alpha: f64) -> String {
    let pct = alpha * 100.0;
    let s = format!("{pct:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{s}%")
}

/// `mean` and sample standard deviation of the finite values.
pub fn mean_sd(values: &[Option<f64>]) -> Option<(f64, Option<f64>)> {
    let v: Vec<f64> = values.iter().flatten().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let sd = (v.len() > 1).then(|| (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)).sqrt());
    Some((m, sd))
}

/// One labelled row of a series-by-column table.
#[derive(Debug, Clone)]
pub struct PanelRow {
    pub label: String,
    pub values: Vec<Option<f64>>,
    pub decimals: usize,
}

#[derive(Debug, Clone)]
pub struct PanelBlock {
    pub title: Option<String>,
    pub rows: Vec<PanelRow>,
}

/// Series as columns, statistics as rows, optionally closed by an
/// `AVG (± sd)` column over the series.
#[derive(Debug, Clone)]
pub struct Panel {
    pub corner: String,
    pub series: Vec<String>,
    pub average: bool,
    pub blocks: Vec<PanelBlock>,
}

pub const AVG_HEADER: &str = "AVG (± sd)";

impl Panel {
    pub fn new(corner: impl Into<String>, series: Vec<String>, average: bool) -> Self {
        Self {
            corner: corner.into(),
            series,
            average,
            blocks: Vec::new(),
        }
    }

    pub fn block(&mut self, title: Option<String>) -> &mut PanelBlock {
        self.blocks.push(PanelBlock { title, rows: Vec::new() });
        self.blocks.last_mut().expect("just pushed")
    }

    pub fn to_table(&self) -> Table {
        let mut headers = vec![self.corner.clone()];
        headers.extend(self.series.iter().cloned());
        if self.average {
            headers.push(AVG_HEADER.into());
        }
        let mut t = Table::new(headers);
        for block in &self.blocks {
            if let Some(title) = &block.title {
                t.push([title.clone()]);
            }
            for row in &block.rows {
                let mut cells = vec![row.label.clone()];
                cells.extend(row.values.iter().map(|v| fixed(*v, row.decimals)));
                if self.average {
                    cells.push(match mean_sd(&row.values) {
                        Some((m, Some(sd))) => format!("{} ± {sd:.d$}", fixed(Some(m), row.decimals), d = row.decimals),
                        Some((m, None)) => format!("{} ± n/a", fixed(Some(m), row.decimals)),
                        None => "n/a".into(),
                    });
                }
                t.push(cells);
            }
        }
        t
    }
}

impl PanelBlock {
    pub fn row(&mut self, label: impl Into<String>, values: Vec<Option<f64>>, decimals: usize) {
        self.rows.push(PanelRow {
            label: label.into(),
            values,
            decimals,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(percent_label(0.95), "95%");
        assert_eq!(percent_label(0.995), "99.5%");
        assert_eq!(percent_label(0.975), "97.5%");
        assert_eq!(fixed(Some(-0.001), 2), "0.00");
        assert_eq!(fixed(Some(-0.01), 2), "-0.01");
    }

    #[test]
    fn tidy_numbers_round_trip() {
        for v in [0.0, 1.5, -0.65053, 3.248955254722124e-33, 1e20, 1.70e-6] {
            assert_eq!(num(Some(v)).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(Some(3.2e-33)), "3.2e-33");
        assert_eq!(num(Some(f64::NAN)), "");
        assert_eq!(num(None), "");
    }

    #[test]
    fn average_column() {
        let mut p = Panel::new("", vec!["A".into(), "B".into()], true);
        p.block(Some("alpha = 95%".into()))
            .row("p=0", vec![Some(-0.5), Some(-0.3)], 2);
        let t = p.to_table();
        assert_eq!(t.headers, ["", "A", "B", AVG_HEADER]);
        assert_eq!(t.rows[0][0], "alpha = 95%");
        assert_eq!(t.rows[1], ["p=0", "-0.50", "-0.30", "-0.40 ± 0.14"]);
    }

    #[test]
    fn delimited_quotes_when_needed() {
        let mut t = Table::new(["a", "b"]);
        t.push(["1,5", "x"]);
        let s = String::from_utf8(t.to_delimited(b',').unwrap()).unwrap();
        assert_eq!(s, "a,b\n\"1,5\",x\n");
    }
}
