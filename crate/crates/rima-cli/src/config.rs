//! Strict config-file parsing.
//!
//! Unknown keys are hard errors (with a nearest-key suggestion) because a
//! silently ignored typo is the fastest way to report numbers from a run
//! nobody configured. Every resolved value, defaults included, is echoed
//! back into the run manifest.

use std::path::Path;

use toml::{Table, Value};

use rima_core::harness::{SweepScheme, SweepSpec};
use rima_core::psk::{make_psk_with_mapping, BitMapping};
use rima_core::{RisConfig, SchemeConfig, SchemeKind};

use crate::error::ConfigError;

const TOP_KEYS: &[&str] = &[
    "seed",
    "snr_grid_db",
    "trials_per_point",
    "min_errors",
    "schemes",
];
const SCHEME_KEYS: &[&str] = &[
    "type",
    "label",
    "mu",
    "power_split",
    "n_e",
    "n_g",
    "modulation_order",
    "leakage",
    "direct_link",
    "bit_mapping",
];

/// Power split used internally for schemes that never touch it.
const UNUSED_MU: f64 = 0.7;

/// A fully validated sweep plus the resolved key-value echo that rebuilds it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub spec: SweepSpec,
    /// Resolved configuration; parsing this table yields an identical spec.
    pub echo: Table,
}

pub fn parse_config(path: &Path) -> Result<ResolvedConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ResolvedConfig, ConfigError> {
    let table: Table = toml::from_str(text).map_err(|e| ConfigError::Syntax {
        message: e.to_string(),
    })?;
    parse_config_table(&table)
}

pub fn parse_config_table(table: &Table) -> Result<ResolvedConfig, ConfigError> {
    check_keys(table, TOP_KEYS, "config root")?;

    let seed = get_u64(table, "seed", "config root")?;
    let snr_grid_db = get_f64_array(table, "snr_grid_db", "config root")?;
    if snr_grid_db.is_empty() || snr_grid_db.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid(
            "snr_grid_db",
            "config root",
            "must be non-empty and strictly increasing",
        ));
    }
    let trials_per_point = get_u64(table, "trials_per_point", "config root")?;
    if trials_per_point == 0 {
        return Err(invalid("trials_per_point", "config root", "must be >= 1"));
    }
    let min_errors = match table.get("min_errors") {
        Some(_) => get_u64(table, "min_errors", "config root")?,
        None => 0,
    };

    let raw_schemes = match table.get("schemes") {
        Some(Value::Array(a)) if !a.is_empty() => a,
        Some(Value::Array(_)) => {
            return Err(invalid("schemes", "config root", "must list at least one scheme"))
        }
        Some(_) => return Err(invalid("schemes", "config root", "must be an array of tables")),
        None => return Err(missing("schemes", "config root")),
    };

    let mut schemes = Vec::with_capacity(raw_schemes.len());
    let mut echo_schemes = Vec::with_capacity(raw_schemes.len());
    for (index, raw) in raw_schemes.iter().enumerate() {
        let location = format!("schemes[{index}]");
        let scheme_table = match raw {
            Value::Table(t) => t,
            _ => return Err(invalid("schemes", "config root", "entries must be tables")),
        };
        let (scheme, echo) = parse_scheme(scheme_table, &location)?;
        schemes.push(scheme);
        echo_schemes.push(Value::Table(echo));
    }

    let mut labels: Vec<&str> = schemes.iter().map(|s| s.label.as_str()).collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid(
            "label",
            "schemes",
            "labels must be unique; set `label` explicitly when repeating a type",
        ));
    }

    let spec = SweepSpec {
        snr_grid_db: snr_grid_db.clone(),
        trials_per_point,
        min_errors,
        seed,
        schemes,
    };
    spec.validate().map_err(|e| ConfigError::InvalidValue {
        key: "schemes".into(),
        location: "config root".into(),
        reason: e.to_string(),
    })?;

    let mut echo = Table::new();
    echo.insert("seed".into(), Value::Integer(seed as i64));
    echo.insert(
        "snr_grid_db".into(),
        Value::Array(snr_grid_db.iter().map(|&v| Value::Float(v)).collect()),
    );
    echo.insert(
        "trials_per_point".into(),
        Value::Integer(trials_per_point as i64),
    );
    echo.insert("min_errors".into(), Value::Integer(min_errors as i64));
    echo.insert("schemes".into(), Value::Array(echo_schemes));

    Ok(ResolvedConfig { spec, echo })
}

fn parse_scheme(table: &Table, location: &str) -> Result<(SweepScheme, Table), ConfigError> {
    check_keys(table, SCHEME_KEYS, location)?;

    let kind = match get_str(table, "type", location)?.as_str() {
        "rima" => SchemeKind::Rima,
        "noma" => SchemeKind::Noma,
        "ris_noma" => SchemeKind::RisNoma,
        other => {
            return Err(invalid(
                "type",
                location,
                &format!("`{other}` is not one of rima, noma, ris_noma"),
            ))
        }
    };

    let label = match table.get("label") {
        Some(_) => get_str(table, "label", location)?,
        None => kind.as_str().to_string(),
    };
    if label.is_empty()
        || !label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        return Err(invalid(
            "label",
            location,
            "must be non-empty and use only [A-Za-z0-9_-]",
        ));
    }

    if table.contains_key("mu") && table.contains_key("power_split") {
        return Err(invalid(
            "mu",
            location,
            "give either `mu` or its alias `power_split`, not both",
        ));
    }
    let mu_key = if table.contains_key("power_split") {
        "power_split"
    } else {
        "mu"
    };
    let mu = match table.get(mu_key) {
        Some(_) => Some(get_f64(table, mu_key, location)?),
        None => None,
    };
    let power_split = if kind.is_noma_family() {
        let mu = mu.ok_or_else(|| missing("mu", location))?;
        if !(mu > 0.5 && mu < 1.0) {
            return Err(invalid(
                mu_key,
                location,
                &format!("{mu} outside (0.5, 1): the weak user takes the larger share"),
            ));
        }
        mu
    } else {
        match mu {
            Some(mu) if !(mu > 0.0 && mu < 1.0) => {
                return Err(invalid(mu_key, location, &format!("{mu} outside (0, 1)")))
            }
            Some(mu) => mu,
            None => UNUSED_MU,
        }
    };

    let modulation_order = get_u64(table, "modulation_order", location)?;
    if modulation_order < 2 || !modulation_order.is_power_of_two() || modulation_order > 256 {
        return Err(invalid(
            "modulation_order",
            location,
            &format!("{modulation_order} is not a power of two in [2, 256]"),
        ));
    }
    let modulation_order = modulation_order as u32;

    let bit_mapping = match table.get("bit_mapping") {
        Some(_) => match get_str(table, "bit_mapping", location)?.as_str() {
            "gray" => BitMapping::Gray,
            "natural" => BitMapping::Natural,
            other => {
                return Err(invalid(
                    "bit_mapping",
                    location,
                    &format!("`{other}` is not one of gray, natural"),
                ))
            }
        },
        None => BitMapping::Gray,
    };

    let leakage = match table.get("leakage") {
        Some(_) => {
            let v = get_f64(table, "leakage", location)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid("leakage", location, &format!("{v} outside [0, 1]")));
            }
            v
        }
        None => 0.0,
    };

    let direct_link = match table.get("direct_link") {
        Some(_) => get_bool(table, "direct_link", location)?,
        None => false,
    };

    let ris = match kind {
        SchemeKind::Noma => None,
        SchemeKind::Rima | SchemeKind::RisNoma => {
            let n_e = get_u64(table, "n_e", location)? as usize;
            let n_g = match (kind, table.get("n_g")) {
                (SchemeKind::Rima, None) => return Err(missing("n_g", location)),
                (_, Some(_)) => get_u64(table, "n_g", location)? as usize,
                (SchemeKind::RisNoma, None) => 1,
                _ => unreachable!(),
            };
            if n_g == 0 || n_e == 0 || n_e % n_g != 0 {
                return Err(invalid(
                    "n_g",
                    location,
                    &format!("n_g ({n_g}) does not divide n_e ({n_e})"),
                ));
            }
            if kind == SchemeKind::Rima && n_g != modulation_order as usize {
                return Err(invalid(
                    "n_g",
                    location,
                    &format!(
                        "n_g ({n_g}) must equal modulation_order ({modulation_order}) for rima"
                    ),
                ));
            }
            Some(RisConfig::new(n_e, n_g, leakage).map_err(|e| ConfigError::InvalidValue {
                key: "n_e".into(),
                location: location.to_string(),
                reason: e.to_string(),
            })?)
        }
    };

    let constellation = make_psk_with_mapping(modulation_order, bit_mapping).map_err(|e| {
        ConfigError::InvalidValue {
            key: "modulation_order".into(),
            location: location.to_string(),
            reason: e.to_string(),
        }
    })?;

    let config = SchemeConfig {
        scheme: kind,
        power_split,
        primary_modulation: constellation.clone(),
        secondary_modulation: constellation,
        direct_link_enabled: direct_link,
    };

    let mut echo = Table::new();
    echo.insert("type".into(), Value::String(kind.as_str().into()));
    echo.insert("label".into(), Value::String(label.clone()));
    if kind.is_noma_family() || mu.is_some() {
        echo.insert("mu".into(), Value::Float(power_split));
    }
    if let Some(ris) = &ris {
        echo.insert("n_e".into(), Value::Integer(ris.total_elements() as i64));
        echo.insert("n_g".into(), Value::Integer(ris.groups() as i64));
    }
    echo.insert(
        "modulation_order".into(),
        Value::Integer(modulation_order as i64),
    );
    echo.insert("leakage".into(), Value::Float(leakage));
    echo.insert("direct_link".into(), Value::Boolean(direct_link));
    echo.insert(
        "bit_mapping".into(),
        Value::String(bit_mapping.as_str().into()),
    );

    Ok((SweepScheme { label, config, ris }, echo))
}

fn check_keys(table: &Table, known: &[&str], location: &str) -> Result<(), ConfigError> {
    for key in table.keys() {
        if !known.contains(&key.as_str()) {
            let suggestion = known
                .iter()
                .map(|k| (strsim::levenshtein(key, k), *k))
                .min()
                .filter(|(d, _)| *d <= 3)
                .map(|(_, k)| k.to_string());
            return Err(ConfigError::UnknownKey {
                key: key.clone(),
                location: location.to_string(),
                suggestion,
            });
        }
    }
    Ok(())
}

fn missing(key: &str, location: &str) -> ConfigError {
    ConfigError::MissingKey {
        key: key.into(),
        location: location.into(),
    }
}

fn invalid(key: &str, location: &str, reason: &str) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.into(),
        location: location.into(),
        reason: reason.into(),
    }
}

fn get_u64(table: &Table, key: &str, location: &str) -> Result<u64, ConfigError> {
    match table.get(key) {
        Some(Value::Integer(v)) if *v >= 0 => Ok(*v as u64),
        Some(Value::Integer(v)) => Err(invalid(
            key,
            location,
            &format!("{v} must be a non-negative integer"),
        )),
        Some(_) => Err(invalid(key, location, "must be an integer")),
        None => Err(missing(key, location)),
    }
}

fn get_f64(table: &Table, key: &str, location: &str) -> Result<f64, ConfigError> {
    match table.get(key) {
        Some(Value::Float(v)) => Ok(*v),
        Some(Value::Integer(v)) => Ok(*v as f64),
        Some(_) => Err(invalid(key, location, "must be a number")),
        None => Err(missing(key, location)),
    }
}

fn get_bool(table: &Table, key: &str, location: &str) -> Result<bool, ConfigError> {
    match table.get(key) {
        Some(Value::Boolean(v)) => Ok(*v),
        Some(_) => Err(invalid(key, location, "must be a boolean")),
        None => Err(missing(key, location)),
    }
}

fn get_str(table: &Table, key: &str, location: &str) -> Result<String, ConfigError> {
    match table.get(key) {
        Some(Value::String(v)) => Ok(v.clone()),
        Some(_) => Err(invalid(key, location, "must be a string")),
        None => Err(missing(key, location)),
    }
}

fn get_f64_array(table: &Table, key: &str, location: &str) -> Result<Vec<f64>, ConfigError> {
    match table.get(key) {
        Some(Value::Array(items)) => items
            .iter()
            .map(|item| match item {
                Value::Float(v) => Ok(*v),
                Value::Integer(v) => Ok(*v as f64),
                _ => Err(invalid(key, location, "must contain only numbers")),
            })
            .collect(),
        Some(_) => Err(invalid(key, location, "must be an array of numbers")),
        None => Err(missing(key, location)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
seed = 7
snr_grid_db = [0, 5, 10]
trials_per_point = 100

[[schemes]]
type = "rima"
n_e = 24
n_g = 2
modulation_order = 2

[[schemes]]
type = "ris_noma"
mu = 0.7
n_e = 24
modulation_order = 2

[[schemes]]
type = "noma"
mu = 0.7
modulation_order = 2
"#;

    #[test]
    fn parses_reference_setup() {
        let resolved = parse_config_str(BASE).unwrap();
        assert_eq!(resolved.spec.seed, 7);
        assert_eq!(resolved.spec.snr_grid_db, vec![0.0, 5.0, 10.0]);
        assert_eq!(resolved.spec.trials_per_point, 100);
        assert_eq!(resolved.spec.min_errors, 0);
        assert_eq!(resolved.spec.schemes.len(), 3);
        let rima = &resolved.spec.schemes[0];
        assert_eq!(rima.label, "rima");
        assert_eq!(rima.ris.unwrap().indexing_size(), 12);
        assert_eq!(rima.config.secondary_modulation.order(), 2);
        assert!(!rima.config.direct_link_enabled);
        assert_eq!(resolved.spec.schemes[1].ris.unwrap().groups(), 1);
        assert!(resolved.spec.schemes[2].ris.is_none());
    }

    #[test]
    fn unknown_key_suggests_nearest() {
        let text = BASE.replace("mu = 0.7\nn_e", "powersplit = 0.7\nn_e");
        match parse_config_str(&text).unwrap_err() {
            ConfigError::UnknownKey { key, suggestion, .. } => {
                assert_eq!(key, "powersplit");
                assert_eq!(suggestion.as_deref(), Some("power_split"));
            }
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn divisibility_error_names_both_keys() {
        let text = BASE.replace("n_e = 24\nn_g = 2", "n_e = 10\nn_g = 4");
        match parse_config_str(&text).unwrap_err() {
            ConfigError::InvalidValue { key, reason, .. } => {
                assert_eq!(key, "n_g");
                assert!(reason.contains("n_g (4)") && reason.contains("n_e (10)"), "{reason}");
            }
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn power_split_alias_accepted_and_conflict_rejected() {
        let text = BASE.replace("type = \"noma\"\nmu = 0.7", "type = \"noma\"\npower_split = 0.7");
        assert!(parse_config_str(&text).is_ok());
        let text = BASE.replace(
            "type = \"noma\"\nmu = 0.7",
            "type = \"noma\"\nmu = 0.7\npower_split = 0.7",
        );
        assert!(matches!(
            parse_config_str(&text).unwrap_err(),
            ConfigError::InvalidValue { .. }
        ));
    }

    #[test]
    fn named_validation_errors() {
        let text = BASE.replace("mu = 0.7\nmodulation_order = 2", "mu = 1.3\nmodulation_order = 2");
        assert!(matches!(
            parse_config_str(&text).unwrap_err(),
            ConfigError::InvalidValue { key, .. } if key == "mu"
        ));
        let text = BASE.replace("modulation_order = 2\n\n[[schemes]]\ntype = \"noma\"", "modulation_order = 3\n\n[[schemes]]\ntype = \"noma\"");
        assert!(matches!(
            parse_config_str(&text).unwrap_err(),
            ConfigError::InvalidValue { key, .. } if key == "modulation_order"
        ));
        let text = BASE.replace("snr_grid_db = [0, 5, 10]", "snr_grid_db = [0, 5, 5]");
        assert!(matches!(
            parse_config_str(&text).unwrap_err(),
            ConfigError::InvalidValue { key, .. } if key == "snr_grid_db"
        ));
        let text = BASE.replace("type = \"noma\"\nmu = 0.7", "type = \"noma\"");
        assert!(matches!(
            parse_config_str(&text).unwrap_err(),
            ConfigError::MissingKey { key, .. } if key == "mu"
        ));
    }

    #[test]
    fn duplicate_labels_rejected_and_explicit_labels_allowed() {
        let text = format!("{BASE}\n[[schemes]]\ntype = \"noma\"\nmu = 0.8\nmodulation_order = 2\n");
        assert!(matches!(
            parse_config_str(&text).unwrap_err(),
            ConfigError::InvalidValue { key, .. } if key == "label"
        ));
        let text = format!(
            "{BASE}\n[[schemes]]\ntype = \"noma\"\nlabel = \"noma_heavy\"\nmu = 0.8\nmodulation_order = 2\n"
        );
        assert!(parse_config_str(&text).is_ok());
    }

    #[test]
    fn echo_round_trips_to_identical_spec() {
        let resolved = parse_config_str(BASE).unwrap();
        let rendered = toml::to_string(&resolved.echo).unwrap();
        let reparsed = parse_config_str(&rendered).unwrap();
        assert_eq!(resolved.spec, reparsed.spec);
        assert_eq!(resolved.echo, reparsed.echo);
    }

    #[test]
    fn infinity_snr_round_trips() {
        let text = BASE.replace("snr_grid_db = [0, 5, 10]", "snr_grid_db = [0, 5, inf]");
        let resolved = parse_config_str(&text).unwrap();
        assert!(resolved.spec.snr_grid_db[2].is_infinite());
        let rendered = toml::to_string(&resolved.echo).unwrap();
        let reparsed = parse_config_str(&rendered).unwrap();
        assert_eq!(resolved.spec, reparsed.spec);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = parse_config(Path::new("/nonexistent/rima.toml")).unwrap_err();
        assert_eq!(err.category(), "config/io");
    }
}
