#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chrono::{Datelike, NaiveDate, Weekday};
use sqp_core::garch::{simulate, GarchParams, Innovation};

pub fn usa() -> GarchParams {
    GarchParams::new(1.70e-6, 0.099, 0.888, Innovation::Gaussian).unwrap()
}

/// Weekdays from 1990-01-01.
pub fn business_dates(n: usize) -> Vec<NaiveDate> {
    let mut d = NaiveDate::from_ymd_opt(1990, 1, 1).unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d.succ_opt().unwrap();
    }
    out
}

/// Price file whose log returns are `returns`, starting at 100.
pub fn write_prices(path: &Path, returns: &[f64]) {
    let dates = business_dates(returns.len() + 1);
    let mut text = String::from("date,close\n");
    let mut price: f64 = 100.0;
    writeln!(text, "{},{price:.17e}", dates[0]).unwrap();
    for (d, r) in dates[1..].iter().zip(returns) {
        price *= r.exp();
        writeln!(text, "{d},{price:.17e}").unwrap();
    }
    std::fs::write(path, text).unwrap();
}

pub fn garch_file(dir: &Path, name: &str, n: usize, seed: u64) -> PathBuf {
    let path = dir.join(format!("{name}.csv"));
    write_prices(&path, &simulate(&usa(), n, seed, 1000).unwrap());
    path
}

pub fn sqp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqp"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn ok(args: &[&str]) -> Output {
    let out = sqp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Rows of a comma-separated file, header first.
pub fn read_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

/// Column `name` of a tidy file as strings, in row order.
pub fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = rows[0].iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[i].clone()).collect()
}

pub fn fcolumn(rows: &[Vec<String>], name: &str) -> Vec<f64> {
    column(rows, name).iter().map(|s| s.parse().unwrap()).collect()
}
