use mixqa::analysis::{AnalysisConfig, GenreProfiles};

use crate::args::{AnalysisOptions, ThresholdOverrides};
use crate::CliError;

/// Config file (if any), then `--profiles`, then individual flags.
pub fn analysis_config(options: &AnalysisOptions) -> Result<AnalysisConfig, CliError> {
    let mut config = match &options.config {
        Some(path) => AnalysisConfig::load(path).map_err(|e| CliError::Usage(e.to_string()))?,
        None => AnalysisConfig::default(),
    };
    if let Some(path) = &options.profiles {
        config.profiles = GenreProfiles::load(path).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    apply_overrides(&mut config, &options.thresholds);
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

pub fn apply_overrides(config: &mut AnalysisConfig, o: &ThresholdOverrides) {
    let issues = &mut config.issues;
    let pairs = [
        (o.mix_too_loud, &mut issues.mix_too_loud_lufs),
        (o.mix_too_quiet, &mut issues.mix_too_quiet_lufs),
        (o.master_too_loud, &mut issues.master_too_loud_lufs),
        (o.master_too_quiet, &mut issues.master_too_quiet_lufs),
    ];
    for (value, slot) in pairs {
        if let Some(v) = value {
            *slot = v;
        }
    }
    if let Some(t) = o.phase_threshold {
        config.phase_threshold_rad = t;
    }
}

pub fn load_config_file(path: Option<&std::path::Path>) -> Result<AnalysisConfig, CliError> {
    match path {
        Some(p) => AnalysisConfig::load(p).map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(AnalysisConfig::default()),
    }
}
