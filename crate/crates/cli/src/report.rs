//! Layouts of the Monte Carlo experiment outputs.

use sqp_core::montecarlo::{McCell, McResult, Significance, Summary};

use crate::experiment::{ExperimentOutcome, GarchGroupRun, IidRun};
use crate::table::{num, percent_label, Table};

pub fn significance_label(s: Significance) -> &'static str {
    match s {
        Significance::Level99 => "99%",
        Significance::Level95 => "95%",
        Significance::Level90 => "90%",
        Significance::Level85 => "85%",
        Significance::NotSignificant => "ns",
    }
}

/// `-0.34**`; `-0.05 ns` when not significant; `(-0.19)` when the value has
/// no theoretical counterpart.
pub fn marked(mean: f64, sig: Significance, bracket: bool) -> String {
    if !mean.is_finite() {
        return "n/a".into();
    }
    if bracket {
        return format!("({mean:.2})");
    }
    match sig {
        Significance::NotSignificant => format!("{mean:.2} ns"),
        s => format!("{mean:.2}{}", s.marker()),
    }
}

fn summary_cells(s: &Summary) -> [String; 3] {
    [num(Some(s.mean)), num(s.sd), s.sd.is_some().to_string()]
}

const CELL_HEADERS: [&str; 17] = [
    "model",
    "T_years",
    "p",
    "alpha",
    "k",
    "replications",
    "pearson_mean",
    "pearson_sd",
    "pearson_sd_defined",
    "pearson_significance",
    "spearman_mean",
    "spearman_sd",
    "spearman_sd_defined",
    "spearman_significance",
    "theory",
    "no_theoretical_counterpart",
    "failures",
];

fn push_cells(t: &mut Table, prefix: &[String], label: &str, r: &McResult) {
    for c in &r.cells {
        let mut row: Vec<String> = prefix.to_vec();
        row.extend([
            label.to_string(),
            c.key.t_years.to_string(),
            c.key.p.to_string(),
            c.key.alpha.to_string(),
            c.key.kind.k().to_string(),
            r.config.replications.to_string(),
        ]);
        row.extend(summary_cells(&c.pearson));
        row.push(significance_label(c.pearson_significance).into());
        row.extend(summary_cells(&c.spearman));
        row.push(significance_label(c.spearman_significance).into());
        row.extend([
            num(c.theory),
            c.no_theoretical_counterpart.to_string(),
            c.failures.to_string(),
        ]);
        t.push(row);
    }
}

/// One row per (model, cell) with full-precision summaries.
pub fn cells_table(outcome: &ExperimentOutcome) -> Table {
    match outcome {
        ExperimentOutcome::Iid { runs } => {
            let mut t = Table::new(CELL_HEADERS);
            for run in runs {
                push_cells(&mut t, &[], &run.label, &run.result);
            }
            t
        }
        ExperimentOutcome::Garch { groups } => {
            let mut t = Table::new(std::iter::once("group").chain(CELL_HEADERS));
            for g in groups {
                for (label, r) in &g.result.sets {
                    push_cells(&mut t, std::slice::from_ref(&g.group), label, r);
                }
            }
            t
        }
    }
}

/// `(T, p)` sections present in a result, in grid order.
fn sections(r: &McResult) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for c in &r.cells {
        if !out.contains(&(c.key.t_years, c.key.p)) {
            out.push((c.key.t_years, c.key.p));
        }
    }
    out
}

fn find(r: &McResult, t: usize, p: f64, alpha: f64, k: u8) -> Option<&McCell> {
    r.cells
        .iter()
        .find(|c| c.key.t_years == t && c.key.p == p && c.key.alpha == alpha && c.key.kind.k() == k)
}

/// Generators and `k` as columns, Pearson then Spearman rows per level.
pub fn iid_table(runs: &[IidRun]) -> Table {
    let Some(first) = runs.first() else {
        return Table::default();
    };
    let cfg = &first.result.config;
    let ks: Vec<u8> = cfg.kinds.iter().map(|k| k.k()).collect();
    let mut headers = vec![String::new()];
    for run in runs {
        for k in &ks {
            headers.push(format!("{} k={k}", run.label));
        }
    }
    let mut t = Table::new(headers);
    let secs = sections(&first.result);
    for &(years, p) in &secs {
        for (name, pearson) in [("Pearson", true), ("Spearman", false)] {
            let title = if secs.len() > 1 {
                format!("{name} (p={p}, T={years}y)")
            } else {
                name.to_string()
            };
            t.push([title]);
            for &alpha in &cfg.alphas {
                let mut row = vec![format!("alpha = {}", percent_label(alpha))];
                for run in runs {
                    for &k in &ks {
                        row.push(match find(&run.result, years, p, alpha, k) {
                            Some(c) if pearson => {
                                marked(c.pearson.mean, c.pearson_significance, c.no_theoretical_counterpart)
                            }
                            Some(c) => marked(c.spearman.mean, c.spearman_significance, false),
                            None => "n/a".into(),
                        });
                    }
                }
                t.push(row);
            }
        }
    }
    t
}

/// Levels and model groups as columns, `p` as rows; each cell is the mean
/// over the group's models `± sd` of the per-model means.
pub fn garch_table(groups: &[GarchGroupRun], pearson: bool) -> Table {
    let Some(first) = groups.first() else {
        return Table::default();
    };
    let cfg = &first.result.sets[0].1.config;
    let mut headers = vec!["AVG ± sd".to_string()];
    for &alpha in &cfg.alphas {
        for g in groups {
            headers.push(format!("alpha = {} {}", percent_label(alpha), g.group));
        }
    }
    let mut t = Table::new(headers);
    let mut keys: Vec<(usize, u8)> = Vec::new();
    for a in &first.result.across {
        if !keys.contains(&(a.key.t_years, a.key.kind.k())) {
            keys.push((a.key.t_years, a.key.kind.k()));
        }
    }
    for &(years, k) in &keys {
        if keys.len() > 1 {
            t.push([format!("T={years}y, k={k}")]);
        }
        for &p in &cfg.p_values {
            let mut row = vec![format!("p={p}")];
            for &alpha in &cfg.alphas {
                for g in groups {
                    let cell = g.result.across.iter().find(|a| {
                        a.key.t_years == years && a.key.kind.k() == k && a.key.p == p && a.key.alpha == alpha
                    });
                    row.push(match cell {
                        Some(a) => {
                            let s = if pearson { &a.pearson } else { &a.spearman };
                            match s.sd {
                                Some(sd) => format!("{:.2} ± {sd:.2}", s.mean),
                                None => format!("{:.2} ± n/a", s.mean),
                            }
                        }
                        None => "n/a".into(),
                    });
                }
            }
            t.push(row);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markers() {
        assert_eq!(marked(-0.344, Significance::Level99, false), "-0.34**");
        assert_eq!(marked(-0.2, Significance::Level85, false), "-0.20\u{2020}");
        assert_eq!(marked(-0.23, Significance::Level90, false), "-0.23");
        assert_eq!(marked(-0.19, Significance::Level99, true), "(-0.19)");
        assert_eq!(marked(0.01, Significance::NotSignificant, false), "0.01 ns");
    }
}
