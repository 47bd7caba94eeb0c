use std::path::PathBuf;

use super::to_json;
use crate::cli::ExperimentArgs;
use crate::error::CliResult;
use crate::executor::Rayon;
use crate::experiment::{self, ExperimentOutcome, ExperimentSpec};
use crate::ingest::sha256_file;
use crate::output::{InputDigest, OutputDir};
use crate::report::{cells_table, garch_table, iid_table};

pub(super) fn run(args: &ExperimentArgs) -> CliResult<Vec<PathBuf>> {
    let mut spec = ExperimentSpec::from_file(&args.config)?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(n) = args.replications {
        spec.replications = n;
    }
    spec.validate()?;
    let digest = InputDigest {
        name: spec.name.clone(),
        path: args.config.clone(),
        sha256: sha256_file(&args.config)?,
        observations: 0,
    };

    let outcome = experiment::run(&spec, &Rayon)?;
    let mut out = OutputDir::create(&args.out.out_dir)?;
    let name = &spec.name;
    out.write_json(&format!("{name}.json"), &outcome)?;
    out.write_table(&format!("{name}_cells.csv"), &cells_table(&outcome))?;
    match &outcome {
        ExperimentOutcome::Iid { runs } => {
            out.write_table(&format!("{name}_table.csv"), &iid_table(runs))?;
        }
        ExperimentOutcome::Garch { groups } => {
            out.write_table(&format!("{name}_pearson_table.csv"), &garch_table(groups, true))?;
            out.write_table(&format!("{name}_spearman_table.csv"), &garch_table(groups, false))?;
        }
    }

    let config = serde_json::json!({ "arguments": to_json(args)?, "spec": to_json(&spec)? });
    out.finish("experiment", config, vec![digest], Some(spec.seed))
}
