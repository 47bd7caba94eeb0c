//! TOML experiment files for the Monte Carlo runners.
//!
//! ```toml
//! name = "iid-normal"
//! kind = "iid"            # or "garch"
//! seed = 7
//! replications = 1000
//! path_length = 8000
//!
//! [grid]
//! alphas = [0.95, 0.99]
//! p = [0.0]
//! k = [1, 2]
//!
//! [[generators]]
//! label = "Normal"
//! law = "normal"
//! ```
//!
//! GARCH specs list `[[models]]` instead of `[[generators]]`; models sharing
//! a `group` are summarized together.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sqp_core::garch::{GarchParams, Innovation};
use sqp_core::montecarlo::{
    run_garch_experiment, run_iid_experiment, Executor, GarchExperimentResult, GarchSet, Generator, IidPairing,
    McConfig, McResult,
};
use sqp_core::volatility::VolatilityKind;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Iid,
    Garch,
}

fn default_path_length() -> usize {
    8000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: ExperimentKind,
    pub seed: u64,
    pub replications: usize,
    #[serde(default = "default_path_length")]
    pub path_length: usize,
    #[serde(default)]
    pub burn_in: usize,
    #[serde(default)]
    pub pairing: IidPairing,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub models: Vec<ModelSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub alphas: Vec<f64>,
    pub p: Vec<f64>,
    pub k: Vec<u8>,
    pub t_years: Vec<usize>,
    pub year_days: usize,
    pub step_days: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            alphas: vec![0.95, 0.99],
            p: vec![0.0],
            k: vec![1, 2],
            t_years: vec![1],
            year_days: sqp_core::YEAR_DAYS,
            step_days: sqp_core::MONTH_DAYS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IidLaw {
    Normal,
    Student,
}

fn default_sigma() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub label: String,
    pub law: IidLaw,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub nu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnovationKind {
    Gaussian,
    Student,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub label: String,
    pub group: Option<String>,
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub innovation: InnovationKind,
    pub nu: Option<f64>,
    pub path_length: Option<usize>,
}

impl ModelSpec {
    pub fn group_name(&self) -> String {
        self.group.clone().unwrap_or_else(|| match self.innovation {
            InnovationKind::Gaussian => "Gaussian".into(),
            InnovationKind::Student => "Student-t".into(),
        })
    }
}

fn invalid(path: impl AsRef<str>, message: impl AsRef<str>) -> CliError {
    CliError::Config(format!("{}: {}", path.as_ref(), message.as_ref()))
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| CliError::Config(e.to_string()))?;
        let spec: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            invalid(if path == "." { "<root>".into() } else { path }, e.into_inner().message())
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.name.trim().is_empty() {
            return Err(invalid("name", "must not be empty"));
        }
        if self.replications == 0 {
            return Err(invalid("replications", "must be at least 1"));
        }
        let g = &self.grid;
        for (name, empty) in [
            ("grid.alphas", g.alphas.is_empty()),
            ("grid.p", g.p.is_empty()),
            ("grid.k", g.k.is_empty()),
            ("grid.t_years", g.t_years.is_empty()),
        ] {
            if empty {
                return Err(invalid(name, "must not be empty"));
            }
        }
        for (i, a) in g.alphas.iter().enumerate() {
            if !(*a > 0.0 && *a < 1.0) {
                return Err(invalid(format!("grid.alphas[{i}]"), format!("{a} is outside (0, 1)")));
            }
        }
        for (i, p) in g.p.iter().enumerate() {
            if !(*p >= 0.0 && p.is_finite()) {
                return Err(invalid(format!("grid.p[{i}]"), format!("{p} must be finite and non-negative")));
            }
        }
        for (i, k) in g.k.iter().enumerate() {
            if VolatilityKind::from_k(*k).is_err() {
                return Err(invalid(format!("grid.k[{i}]"), format!("{k} must be 1 or 2")));
            }
        }
        for (i, t) in g.t_years.iter().enumerate() {
            if *t == 0 {
                return Err(invalid(format!("grid.t_years[{i}]"), "must be at least 1"));
            }
        }
        if g.year_days < 2 {
            return Err(invalid("grid.year_days", "must be at least 2"));
        }
        if g.step_days == 0 {
            return Err(invalid("grid.step_days", "must be at least 1"));
        }
        match self.kind {
            ExperimentKind::Iid => {
                if self.generators.is_empty() {
                    return Err(invalid("generators", "an iid experiment needs at least one generator"));
                }
                if !self.models.is_empty() {
                    return Err(invalid("models", "only allowed when kind = \"garch\""));
                }
                for (i, gen) in self.generators.iter().enumerate() {
                    let at = |f: &str| format!("generators[{i}].{f}");
                    if !(gen.sigma > 0.0 && gen.sigma.is_finite()) {
                        return Err(invalid(at("sigma"), "must be positive and finite"));
                    }
                    if !gen.mu.is_finite() {
                        return Err(invalid(at("mu"), "must be finite"));
                    }
                    match (gen.law, gen.nu) {
                        (IidLaw::Student, Some(nu)) if nu > 2.0 && nu.is_finite() => {}
                        (IidLaw::Student, Some(nu)) => {
                            return Err(invalid(at("nu"), format!("{nu} must exceed 2")));
                        }
                        (IidLaw::Student, None) => {
                            return Err(invalid(at("nu"), "required when law = \"student\""));
                        }
                        (IidLaw::Normal, Some(_)) => {
                            return Err(invalid(at("nu"), "only applies to law = \"student\""));
                        }
                        (IidLaw::Normal, None) => {}
                    }
                }
            }
            ExperimentKind::Garch => {
                if self.models.is_empty() {
                    return Err(invalid("models", "a garch experiment needs at least one model"));
                }
                if !self.generators.is_empty() {
                    return Err(invalid("generators", "only allowed when kind = \"iid\""));
                }
                for (i, m) in self.models.iter().enumerate() {
                    let at = |f: &str| format!("models[{i}].{f}");
                    if !(m.omega > 0.0 && m.omega.is_finite()) {
                        return Err(invalid(at("omega"), "must be positive and finite"));
                    }
                    if !(m.alpha >= 0.0) {
                        return Err(invalid(at("alpha"), "must be non-negative"));
                    }
                    if !(m.beta >= 0.0) {
                        return Err(invalid(at("beta"), "must be non-negative"));
                    }
                    if !(m.alpha + m.beta < 1.0) {
                        return Err(invalid(
                            format!("models[{i}]"),
                            format!("alpha + beta = {} is not stationary", m.alpha + m.beta),
                        ));
                    }
                    match (m.innovation, m.nu) {
                        (InnovationKind::Student, Some(nu)) if nu > 2.0 && nu.is_finite() => {}
                        (InnovationKind::Student, Some(nu)) => {
                            return Err(invalid(at("nu"), format!("{nu} must exceed 2")));
                        }
                        (InnovationKind::Student, None) => {
                            return Err(invalid(at("nu"), "required when innovation = \"student\""));
                        }
                        (InnovationKind::Gaussian, Some(_)) => {
                            return Err(invalid(at("nu"), "only applies to innovation = \"student\""));
                        }
                        (InnovationKind::Gaussian, None) => {}
                    }
                    if let Some(n) = m.path_length {
                        self.check_length(n, &at("path_length"))?;
                    }
                }
            }
        }
        if self.kind == ExperimentKind::Garch || self.pairing == IidPairing::Rolling {
            self.check_length(self.path_length, "path_length")?;
        }
        Ok(())
    }

    fn check_length(&self, n: usize, path: &str) -> CliResult<()> {
        let g = &self.grid;
        let longest = g.t_years.iter().copied().max().unwrap_or(1);
        let needed = (longest + 1) * g.year_days + g.step_days;
        if n < needed {
            return Err(invalid(
                path,
                format!("{n} observations cannot hold the longest window pair; need at least {needed}"),
            ));
        }
        Ok(())
    }

    /// Core configuration with the given generator.
    pub fn mc_config(&self, generator: Generator) -> McConfig {
        let mut c = McConfig::new(generator, self.replications, self.seed);
        c.path_length = self.path_length;
        c.alphas = self.grid.alphas.clone();
        c.p_values = self.grid.p.clone();
        c.kinds = self
            .grid
            .k
            .iter()
            .map(|k| VolatilityKind::from_k(*k).expect("validated"))
            .collect();
        c.t_years = self.grid.t_years.clone();
        c.year_len = self.grid.year_days;
        c.step = self.grid.step_days;
        c.pairing = self.pairing;
        c.burn_in = self.burn_in;
        c
    }

    pub fn generator(g: &GeneratorSpec) -> Generator {
        match g.law {
            IidLaw::Normal => Generator::Normal { mu: g.mu, sigma: g.sigma },
            IidLaw::Student => Generator::Student {
                nu: g.nu.expect("validated"),
                mu: g.mu,
                sigma: g.sigma,
            },
        }
    }

    pub fn garch_set(m: &ModelSpec) -> CliResult<GarchSet> {
        let innovation = match m.innovation {
            InnovationKind::Gaussian => Innovation::Gaussian,
            InnovationKind::Student => Innovation::Student { nu: m.nu.expect("validated") },
        };
        let params = GarchParams::new(m.omega, m.alpha, m.beta, innovation)
            .map_err(|e| invalid(format!("models[{}]", m.label), e.to_string()))?;
        Ok(GarchSet {
            label: m.label.clone(),
            params,
            path_length: m.path_length,
        })
    }

    /// Distinct model groups in order of first appearance.
    pub fn groups(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for m in &self.models {
            let g = m.group_name();
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IidRun {
    pub label: String,
    pub result: McResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GarchGroupRun {
    pub group: String,
    pub master_seed: u64,
    pub result: GarchExperimentResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExperimentOutcome {
    Iid { runs: Vec<IidRun> },
    Garch { groups: Vec<GarchGroupRun> },
}

/// Runs every generator (iid) or every model group (GARCH). Group `g` uses
/// master seed `seed + g` so groups draw independent paths.
pub fn run<E: Executor>(spec: &ExperimentSpec, exec: &E) -> CliResult<ExperimentOutcome> {
    let core_err = |context: String| move |e| CliError::core(context, e);
    match spec.kind {
        ExperimentKind::Iid => {
            let mut runs = Vec::with_capacity(spec.generators.len());
            for g in &spec.generators {
                let config = spec.mc_config(ExperimentSpec::generator(g));
                let result = run_iid_experiment(&config, exec).map_err(core_err(format!("generator {}", g.label)))?;
                runs.push(IidRun {
                    label: g.label.clone(),
                    result,
                });
            }
            Ok(ExperimentOutcome::Iid { runs })
        }
        ExperimentKind::Garch => {
            let mut groups = Vec::new();
            for (gi, group) in spec.groups().into_iter().enumerate() {
                let sets = spec
                    .models
                    .iter()
                    .filter(|m| m.group_name() == group)
                    .map(ExperimentSpec::garch_set)
                    .collect::<CliResult<Vec<_>>>()?;
                let master_seed = spec.seed.wrapping_add(gi as u64);
                let mut config = spec.mc_config(Generator::Garch { params: sets[0].params });
                config.master_seed = master_seed;
                let result =
                    run_garch_experiment(&sets, &config, exec).map_err(core_err(format!("model group {group}")))?;
                groups.push(GarchGroupRun {
                    group,
                    master_seed,
                    result,
                });
            }
            Ok(ExperimentOutcome::Garch { groups })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "t"
kind = "iid"
seed = 1
replications = 2
path_length = 600

[[generators]]
label = "N"
law = "normal"
"#;

    #[test]
    fn minimal_experiment_parses_with_defaults() {
        let s = ExperimentSpec::from_toml(MINIMAL).unwrap();
        assert_eq!(s.grid, GridSpec::default());
        assert_eq!(s.generators[0].sigma, 0.01);
        assert_eq!(s.pairing, IidPairing::Rolling);
    }

    fn err(text: &str) -> String {
        ExperimentSpec::from_toml(text).unwrap_err().to_string()
    }

    #[test]
    fn errors_name_the_field() {
        let bad_alpha = MINIMAL.replace("[[generators]]", "[grid]\nalphas = [0.95, 1.5]\n\n[[generators]]");
        assert!(err(&bad_alpha).contains("grid.alphas[1]"), "{}", err(&bad_alpha));

        let bad_type = MINIMAL.replace("[[generators]]", "[grid]\nk = [1, \"two\"]\n\n[[generators]]");
        assert!(err(&bad_type).contains("grid.k[1]"), "{}", err(&bad_type));

        let unknown = MINIMAL.replace("law = \"normal\"", "law = \"normal\"\nsgima = 0.2");
        let e = err(&unknown);
        assert!(e.contains("generators[0]") && e.contains("sgima"), "{e}");

        let no_nu = MINIMAL.replace("law = \"normal\"", "law = \"student\"");
        assert!(err(&no_nu).contains("generators[0].nu"));

        let short = MINIMAL.replace("path_length = 600", "path_length = 400");
        assert!(err(&short).contains("path_length"));

        let missing = MINIMAL.replace("seed = 1\n", "");
        assert!(err(&missing).contains("seed"), "{}", err(&missing));
    }

    #[test]
    fn garch_groups_and_stationarity() {
        let text = r#"
name = "g"
kind = "garch"
seed = 3
replications = 1

[[models]]
label = "A"
omega = 1e-6
alpha = 0.1
beta = 0.8
innovation = "gaussian"

[[models]]
label = "A"
omega = 1e-6
alpha = 0.1
beta = 0.8
innovation = "student"
nu = 5.0
"#;
        let s = ExperimentSpec::from_toml(text).unwrap();
        assert_eq!(s.groups(), ["Gaussian", "Student-t"]);
        let e = err(&text.replacen("beta = 0.8", "beta = 0.95", 1));
        assert!(e.contains("models[0]") && e.contains("stationary"), "{e}");
    }
}
