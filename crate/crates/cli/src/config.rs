//! Flat `key = value` configuration files with `#` comments, plus the state
//! file and scenario schemas built on top.

use std::collections::BTreeMap;

use num_complex::Complex64;
use xqcorr::dephasing::{DephasingScenario, ReservoirSpec};
use xqcorr::radiative::AtomPairGeometry;
use xqcorr::XState;

/// Parse failure with 1-based line and column.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    Number(f64),
    /// The literal `inf`, accepted for `beta` only.
    Infinity,
}

impl RawValue {
    pub fn as_finite(&self, key: &str, line: usize) -> Result<f64, ParseError> {
        match self {
            RawValue::Number(v) => Ok(*v),
            RawValue::Infinity => Err(ParseError {
                line,
                col: 1,
                message: format!("key '{key}' does not accept 'inf'"),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub value: RawValue,
    pub line: usize,
}

/// Parse the flat grammar. Duplicate keys are rejected; values are floats or
/// the literal `inf`.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, Entry>, ParseError> {
    let mut map = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let without_comment = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        if without_comment.trim().is_empty() {
            continue;
        }
        let eq = without_comment.find('=').ok_or_else(|| ParseError {
            line: line_no,
            col: raw_line.len().max(1),
            message: "expected 'key = value'".into(),
        })?;
        let key_raw = &without_comment[..eq];
        let key = key_raw.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
            return Err(ParseError {
                line: line_no,
                col: without_comment.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1,
                message: format!("invalid key '{}'", key),
            });
        }
        let value_str = without_comment[eq + 1..].trim();
        let value_col = eq + 2 + without_comment[eq + 1..].len()
            - without_comment[eq + 1..].trim_start().len();
        if value_str.is_empty() {
            return Err(ParseError {
                line: line_no,
                col: value_col,
                message: format!("missing value for key '{key}'"),
            });
        }
        let value = if value_str == "inf" {
            RawValue::Infinity
        } else {
            match value_str.parse::<f64>() {
                Ok(v) if v.is_finite() => RawValue::Number(v),
                _ => {
                    return Err(ParseError {
                        line: line_no,
                        col: value_col,
                        message: format!("'{value_str}' is not a finite number"),
                    })
                }
            }
        };
        if map
            .insert(key.to_string(), Entry { value, line: line_no })
            .is_some()
        {
            return Err(ParseError {
                line: line_no,
                col: 1,
                message: format!("duplicate key '{key}'"),
            });
        }
    }
    Ok(map)
}

const RHO_KEYS: [&str; 8] = [
    "rho11", "rho22", "rho33", "rho44", "re14", "im14", "re23", "im23",
];
const BELL_KEYS: [&str; 3] = ["c1", "c2", "c3"];

/// Parsed state file: either explicit matrix entries or a Bell-diagonal
/// triple. Mixing the two key families is a parse error.
#[derive(Debug)]
pub enum StateSpec {
    Rho {
        populations: [f64; 4],
        rho14: Complex64,
        rho23: Complex64,
    },
    BellDiagonal(f64, f64, f64),
}

impl StateSpec {
    pub fn build(&self) -> xqcorr::Result<XState> {
        match self {
            StateSpec::Rho {
                populations,
                rho14,
                rho23,
            } => XState::new(*populations, *rho14, *rho23),
            StateSpec::BellDiagonal(c1, c2, c3) => XState::from_bell_diagonal(*c1, *c2, *c3),
        }
    }
}

pub fn parse_state_file(text: &str) -> Result<StateSpec, ParseError> {
    let map = parse_kv(text)?;
    if map.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "state file contains no keys".into(),
        });
    }
    let mut saw_rho = None;
    let mut saw_bell = None;
    for (key, entry) in &map {
        if RHO_KEYS.contains(&key.as_str()) {
            saw_rho.get_or_insert(entry.line);
        } else if BELL_KEYS.contains(&key.as_str()) {
            saw_bell.get_or_insert(entry.line);
        } else {
            return Err(ParseError {
                line: entry.line,
                col: 1,
                message: format!("unknown state key '{key}'"),
            });
        }
    }
    if let (Some(_), Some(bell_line)) = (saw_rho, saw_bell) {
        return Err(ParseError {
            line: bell_line,
            col: 1,
            message: "cannot mix rho-entry keys with Bell-diagonal c keys".into(),
        });
    }

    let get = |key: &str| -> Result<f64, ParseError> {
        match map.get(key) {
            Some(e) => e.value.as_finite(key, e.line),
            None => Ok(0.0),
        }
    };
    if saw_bell.is_some() {
        Ok(StateSpec::BellDiagonal(get("c1")?, get("c2")?, get("c3")?))
    } else {
        Ok(StateSpec::Rho {
            populations: [get("rho11")?, get("rho22")?, get("rho33")?, get("rho44")?],
            rho14: Complex64::new(get("re14")?, get("im14")?),
            rho23: Complex64::new(get("re23")?, get("im23")?),
        })
    }
}

/// Dephasing-sweep scenario file.
pub struct DephasingConfig {
    pub scenario: DephasingScenario,
    pub t_max: f64,
    pub n_steps: usize,
}

pub fn parse_dephasing_config(text: &str) -> Result<DephasingConfig, CliConfigError> {
    let map = parse_kv(text).map_err(CliConfigError::Parse)?;
    const KNOWN: [&str; 11] = [
        "c1", "c2", "c3", "v1", "v2", "s", "lambda", "omega", "beta", "t_max", "n_steps",
    ];
    reject_unknown(&map, &KNOWN)?;

    let require = |key: &str| -> Result<f64, CliConfigError> {
        let e = map.get(key).ok_or_else(|| {
            CliConfigError::Parse(ParseError {
                line: 1,
                col: 1,
                message: format!("missing required key '{key}'"),
            })
        })?;
        e.value.as_finite(key, e.line).map_err(CliConfigError::Parse)
    };
    let optional = |key: &str, default: f64| -> Result<f64, CliConfigError> {
        match map.get(key) {
            Some(e) => e.value.as_finite(key, e.line).map_err(CliConfigError::Parse),
            None => Ok(default),
        }
    };

    let beta = match map.get("beta") {
        Some(Entry {
            value: RawValue::Infinity,
            ..
        }) => f64::INFINITY,
        Some(e) => e.value.as_finite("beta", e.line).map_err(CliConfigError::Parse)?,
        None => {
            return Err(CliConfigError::Parse(ParseError {
                line: 1,
                col: 1,
                message: "missing required key 'beta' (a number, or 'inf' for T = 0)".into(),
            }))
        }
    };

    let omega = require("omega")?;
    let reservoir = ReservoirSpec::new(require("s")?, require("lambda")?, omega, beta)
        .map_err(CliConfigError::Invalid)?;
    let scenario = DephasingScenario::new(
        require("c1")?,
        require("c2")?,
        require("c3")?,
        optional("v1", omega)?,
        optional("v2", omega)?,
        reservoir,
    )
    .map_err(CliConfigError::Invalid)?;

    let t_max = optional("t_max", 10.0 / omega)?;
    let n_steps = optional("n_steps", 400.0)? as usize;
    if t_max < 0.0 {
        return Err(CliConfigError::Parse(ParseError {
            line: map.get("t_max").map(|e| e.line).unwrap_or(1),
            col: 1,
            message: "t_max must be nonnegative".into(),
        }));
    }
    Ok(DephasingConfig {
        scenario,
        t_max,
        n_steps: n_steps.max(1),
    })
}

/// Radiative-sweep scenario file: either `gamma_ratio` or the pair
/// (`k0r`, `mu_dot_rhat`), never both.
pub struct RadiativeConfig {
    pub gamma_ratio: f64,
    pub geometry: Option<AtomPairGeometry>,
    pub tau_max: f64,
    pub n_steps: usize,
}

pub fn parse_radiative_config(text: &str) -> Result<RadiativeConfig, CliConfigError> {
    let map = parse_kv(text).map_err(CliConfigError::Parse)?;
    const KNOWN: [&str; 5] = ["gamma_ratio", "k0r", "mu_dot_rhat", "tau_max", "n_steps"];
    reject_unknown(&map, &KNOWN)?;

    let has_gamma = map.contains_key("gamma_ratio");
    let has_geometry = map.contains_key("k0r") || map.contains_key("mu_dot_rhat");
    if has_gamma && has_geometry {
        let line = map.get("gamma_ratio").map(|e| e.line).unwrap_or(1);
        return Err(CliConfigError::Parse(ParseError {
            line,
            col: 1,
            message: "gamma_ratio and (k0r, mu_dot_rhat) are mutually exclusive".into(),
        }));
    }
    if !has_gamma && !has_geometry {
        return Err(CliConfigError::Parse(ParseError {
            line: 1,
            col: 1,
            message: "provide gamma_ratio or both of k0r and mu_dot_rhat".into(),
        }));
    }

    let finite = |key: &str| -> Result<f64, CliConfigError> {
        let e = map.get(key).ok_or_else(|| {
            CliConfigError::Parse(ParseError {
                line: 1,
                col: 1,
                message: format!("missing required key '{key}'"),
            })
        })?;
        e.value.as_finite(key, e.line).map_err(CliConfigError::Parse)
    };

    let (gamma_ratio, geometry) = if has_gamma {
        let g = finite("gamma_ratio")?;
        if g.abs() > 1.0 {
            return Err(CliConfigError::Parse(ParseError {
                line: map["gamma_ratio"].line,
                col: 1,
                message: format!("gamma_ratio = {g} must lie in [-1, 1]"),
            }));
        }
        (g, None)
    } else {
        let geom = AtomPairGeometry::new(finite("k0r")?, finite("mu_dot_rhat")?)
            .map_err(CliConfigError::Invalid)?;
        (geom.collective_damping_ratio(), Some(geom))
    };

    let tau_max = match map.get("tau_max") {
        Some(e) => e.value.as_finite("tau_max", e.line).map_err(CliConfigError::Parse)?,
        None => 5.0,
    };
    if tau_max < 0.0 {
        return Err(CliConfigError::Parse(ParseError {
            line: map.get("tau_max").map(|e| e.line).unwrap_or(1),
            col: 1,
            message: "tau_max must be nonnegative".into(),
        }));
    }
    let n_steps = match map.get("n_steps") {
        Some(e) => e.value.as_finite("n_steps", e.line).map_err(CliConfigError::Parse)? as usize,
        None => 400,
    };
    Ok(RadiativeConfig {
        gamma_ratio,
        geometry,
        tau_max,
        n_steps: n_steps.max(1),
    })
}

fn reject_unknown(
    map: &BTreeMap<String, Entry>,
    known: &[&str],
) -> Result<(), CliConfigError> {
    for (key, entry) in map {
        if !known.contains(&key.as_str()) {
            return Err(CliConfigError::Parse(ParseError {
                line: entry.line,
                col: 1,
                message: format!("unknown key '{key}'"),
            }));
        }
    }
    Ok(())
}

/// Configuration failures split by exit-code class: parse errors exit 2,
/// invalid physical parameters exit 3.
#[derive(Debug)]
pub enum CliConfigError {
    Parse(ParseError),
    Invalid(xqcorr::Error),
}

impl std::fmt::Display for CliConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliConfigError::Parse(e) => write!(f, "{e}"),
            CliConfigError::Invalid(e) => write!(f, "invalid scenario: {e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_parser_accepts_comments_and_blanks() {
        let map = parse_kv("# header\nc1 = 0.5 # inline\n\nc2=-0.25\n").unwrap();
        assert_eq!(map["c1"].value, RawValue::Number(0.5));
        assert_eq!(map["c2"].value, RawValue::Number(-0.25));
    }

    #[test]
    fn kv_parser_reports_positions() {
        let err = parse_kv("c1 = 0.5\nc2 = oops\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("oops"));
        let err = parse_kv("just_a_key\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_kv("c1 = 1\nc1 = 2\n").unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn state_file_families_must_not_mix() {
        let err = parse_state_file("c1 = 1\nrho11 = 0.5\n").unwrap_err();
        assert!(err.message.contains("mix"));
        assert!(parse_state_file("c1 = 1\nc2 = -1\nc3 = 1\n").is_ok());
        assert!(parse_state_file(
            "rho11 = 0.5\nrho44 = 0.5\nre14 = 0.5\n"
        )
        .is_ok());
    }

    #[test]
    fn dephasing_config_defaults() {
        let cfg = parse_dephasing_config(
            "c1 = 0.6\nc2 = -0.3\nc3 = 0.4\ns = 0.5\nlambda = 0.1\nomega = 2.0\nbeta = inf\n",
        )
        .unwrap();
        assert_eq!(cfg.scenario.v1, 2.0); // defaults to omega
        assert_eq!(cfg.n_steps, 400);
        assert!((cfg.t_max - 5.0).abs() < 1e-15); // span Ωt in [0, 10]
        assert!(cfg.scenario.reservoir.zero_temperature());
    }

    #[test]
    fn radiative_config_exclusivity() {
        assert!(parse_radiative_config("gamma_ratio = 0.5\nk0r = 1.0\n").is_err());
        assert!(parse_radiative_config("tau_max = 5\n").is_err());
        let cfg = parse_radiative_config("gamma_ratio = 0.5\n").unwrap();
        assert_eq!(cfg.gamma_ratio, 0.5);
        let cfg = parse_radiative_config("k0r = 0.0001\nmu_dot_rhat = 0.0\n").unwrap();
        assert!((cfg.gamma_ratio - 1.0).abs() < 1e-6);
    }
}
