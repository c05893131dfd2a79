//! Line-oriented `key = value` experiment configs with dotted keys.
//!
//! Grammar: one `key = value` pair per line; blank lines and lines starting
//! with `#` are ignored; keys are `[A-Za-z0-9_.]+`. Every key must be
//! consumed by the command that runs, so typos surface as "unknown key"
//! diagnostics with their line number instead of being silently ignored.

use std::collections::BTreeMap;
use std::str::FromStr;

use smm_core::degree::{build_categorical, dyadic_mu, DegreeDistribution};
use smm_core::point_process::{Boundary, Window};
use smm_core::{Error, Result};

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    consumed: bool,
}

/// A parsed config file plus CLI-flag overrides.
#[derive(Debug, Clone)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(Error::parse(line, "expected 'key = value'"));
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty()
                || !key.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.')
            {
                return Err(Error::parse(line, format!("malformed key {key:?}")));
            }
            if let Some(old) = entries.get(key) {
                return Err(Error::parse(
                    line,
                    format!("duplicate key '{key}' (first set at line {})", old.line),
                ));
            }
            entries.insert(
                key.to_owned(),
                Entry { value: value.to_owned(), line, consumed: false },
            );
        }
        Ok(Config { entries })
    }

    /// Replaces (or injects) a value, e.g. for `--seed`/`--out` flags.
    pub fn set_override(&mut self, key: &str, value: String) {
        self.entries.insert(key.to_owned(), Entry { value, line: 0, consumed: false });
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        let entry = self.entries.get_mut(key)?;
        entry.consumed = true;
        Some((entry.value.clone(), entry.line))
    }

    pub fn get_string(&mut self, key: &str) -> Option<String> {
        self.take(key).map(|(v, _)| v)
    }

    /// As [`Self::get_string`], also reporting the source line for
    /// diagnostics on values that need further parsing.
    pub fn get_with_line(&mut self, key: &str) -> Option<(String, usize)> {
        self.take(key)
    }

    fn parse_as<T: FromStr>(key: &str, value: &str, line: usize, what: &str) -> Result<T> {
        value.parse().map_err(|_| {
            Error::parse(line, format!("{key}: expected {what}, got {value:?}"))
        })
    }

    pub fn get_parsed<T: FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((value, line)) => Self::parse_as(key, &value, line, what).map(Some),
        }
    }

    pub fn get_f64(&mut self, key: &str) -> Result<Option<f64>> {
        let v: Option<f64> = self.get_parsed(key, "a real number")?;
        if let Some(x) = v {
            if !x.is_finite() {
                return Err(Error::invalid(format!("{key}: must be finite")));
            }
        }
        Ok(v)
    }

    pub fn get_u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.get_parsed(key, "a non-negative integer")
    }

    pub fn get_u32(&mut self, key: &str) -> Result<Option<u32>> {
        self.get_parsed(key, "a non-negative integer")
    }

    pub fn get_bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some((value, line)) => match value.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(Error::parse(line, format!("{key}: expected true or false, got {value:?}"))),
            },
        }
    }

    pub fn require_f64(&mut self, key: &str) -> Result<f64> {
        self.get_f64(key)?.ok_or_else(|| missing(key))
    }

    pub fn require_u64(&mut self, key: &str) -> Result<u64> {
        self.get_u64(key)?.ok_or_else(|| missing(key))
    }

    pub fn require_u32(&mut self, key: &str) -> Result<u32> {
        self.get_u32(key)?.ok_or_else(|| missing(key))
    }

    pub fn require_string(&mut self, key: &str) -> Result<String> {
        self.get_string(key).ok_or_else(|| missing(key))
    }

    /// Comma-separated list of reals; the key must be present and non-empty.
    pub fn require_f64_list(&mut self, key: &str) -> Result<Vec<f64>> {
        let (value, line) = self.take(key).ok_or_else(|| missing(key))?;
        let mut out = Vec::new();
        for item in value.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            out.push(Self::parse_as(key, item, line, "a real number")?);
        }
        if out.is_empty() {
            return Err(Error::parse(line, format!("{key}: the list is empty")));
        }
        Ok(out)
    }

    /// Errors on the first key that no command consumed.
    pub fn finish(self) -> Result<()> {
        for (key, entry) in &self.entries {
            if !entry.consumed {
                return Err(Error::parse(entry.line, format!("unknown key '{key}'")));
            }
        }
        Ok(())
    }

    /// `window.length` (required), `window.boundary` = open|torus (default
    /// open), `window.margin` (default 5% of the length; a torus has no
    /// boundary to keep away from, so its margin defaults to 0).
    pub fn window(&mut self) -> Result<Window<f64>> {
        let length = self.require_f64("window.length")?;
        let boundary = self.boundary()?;
        let default_margin = match boundary {
            Boundary::Open => 0.05 * length,
            Boundary::Torus => 0.0,
        };
        let margin = self.get_f64("window.margin")?.unwrap_or(default_margin);
        Window::new(length, boundary, margin)
    }

    pub fn boundary(&mut self) -> Result<Boundary> {
        match self.take("window.boundary") {
            None => Ok(Boundary::Open),
            Some((value, line)) => match value.as_str() {
                "open" => Ok(Boundary::Open),
                "torus" => Ok(Boundary::Torus),
                _ => Err(Error::parse(
                    line,
                    format!("window.boundary: expected open or torus, got {value:?}"),
                )),
            },
        }
    }

    /// The `distribution.*` block. `distribution.kind` selects the shape:
    /// `constant` (key `distribution.value`), `categorical` (key
    /// `distribution.masses` = `deg:mass,deg:mass,...`), or `dyadic` (keys
    /// `distribution.i_min`, `distribution.i_max`, optional
    /// `distribution.parity_shift` and `distribution.mass_at_one`).
    pub fn distribution(&mut self) -> Result<Option<DegreeDistribution>> {
        let Some((kind, line)) = self.take("distribution.kind") else {
            return Ok(None);
        };
        let law = match kind.as_str() {
            "constant" => {
                let value = self.require_u32("distribution.value")?;
                build_categorical(&[(value, 1.0)])?
            }
            "categorical" => {
                let (text, mline) = self
                    .take("distribution.masses")
                    .ok_or_else(|| missing("distribution.masses"))?;
                let atoms = parse_masses("distribution.masses", &text, mline)?;
                build_categorical(&atoms).map_err(|e| {
                    Error::parse(mline, format!("distribution.masses: {e}"))
                })?
            }
            "dyadic" => {
                let i_min = self.require_u32("distribution.i_min")?;
                let i_max = self.require_u32("distribution.i_max")?;
                let shift = self.get_u32("distribution.parity_shift")?.unwrap_or(0);
                let mass_at_one = self.get_bool("distribution.mass_at_one")?.unwrap_or(false);
                dyadic_mu(i_min, i_max, shift, mass_at_one)?
            }
            _ => {
                return Err(Error::parse(
                    line,
                    format!(
                        "distribution.kind: expected constant, categorical or dyadic, got {kind:?}"
                    ),
                ))
            }
        };
        Ok(Some(law))
    }

    pub fn require_distribution(&mut self) -> Result<DegreeDistribution> {
        self.distribution()?.ok_or_else(|| missing("distribution.kind"))
    }
}

fn missing(key: &str) -> Error {
    Error::invalid(format!("missing required key '{key}'"))
}

/// Parses `deg:mass` pairs separated by commas, e.g. `1:0.5,2:0.5`.
pub fn parse_masses(key: &str, text: &str, line: usize) -> Result<Vec<(u32, f64)>> {
    let mut atoms = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let Some((deg, mass)) = item.split_once(':') else {
            return Err(Error::parse(line, format!("{key}: expected deg:mass, got {item:?}")));
        };
        let deg: u32 = deg.trim().parse().map_err(|_| {
            Error::parse(line, format!("{key}: expected an integer degree, got {deg:?}"))
        })?;
        let mass: f64 = mass.trim().parse().map_err(|_| {
            Error::parse(line, format!("{key}: expected a real mass, got {mass:?}"))
        })?;
        atoms.push((deg, mass));
    }
    if atoms.is_empty() {
        return Err(Error::parse(line, format!("{key}: the list is empty")));
    }
    Ok(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_blanks_and_dotted_keys() {
        let mut cfg = Config::parse(
            "# experiment\n\nwindow.length = 100\nwindow.boundary = torus\nseed = 7\n",
        )
        .unwrap();
        let window = cfg.window().unwrap();
        assert_eq!(window.length(), 100.0);
        assert_eq!(window.boundary(), Boundary::Torus);
        assert_eq!(window.margin(), 0.0);
        assert_eq!(cfg.get_u64("seed").unwrap(), Some(7));
        cfg.finish().unwrap();
    }

    #[test]
    fn duplicate_and_unknown_keys_are_rejected_with_lines() {
        let err = Config::parse("a = 1\na = 2\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(err.to_string().contains("duplicate key 'a'"), "{err}");

        let cfg = Config::parse("seed = 1\nmystery = 3\n").unwrap();
        let err = cfg.finish().unwrap_err();
        assert!(err.to_string().contains("unknown key 'mystery'"), "{err}");
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn missing_equals_sign_is_a_parse_error() {
        let err = Config::parse("just words\n").unwrap_err();
        assert!(err.to_string().contains("key = value"), "{err}");
    }

    #[test]
    fn categorical_mass_errors_name_the_key() {
        let mut cfg = Config::parse(
            "distribution.kind = categorical\ndistribution.masses = 1:0.5,2:0.4\n",
        )
        .unwrap();
        let err = cfg.distribution().unwrap_err();
        assert!(err.to_string().contains("distribution.masses"), "{err}");
    }

    #[test]
    fn distribution_kinds_build() {
        let mut cfg = Config::parse(
            "distribution.kind = categorical\ndistribution.masses = 1:0.5, 2:0.5\n",
        )
        .unwrap();
        let law = cfg.require_distribution().unwrap();
        assert_eq!(law.support(), &[1, 2]);

        let mut cfg =
            Config::parse("distribution.kind = constant\ndistribution.value = 3\n").unwrap();
        assert_eq!(cfg.require_distribution().unwrap().support(), &[3]);

        let mut cfg = Config::parse(
            "distribution.kind = dyadic\ndistribution.i_min = 1\ndistribution.i_max = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.require_distribution().unwrap().support(), &[40, 160, 640]);
    }

    #[test]
    fn overrides_replace_config_values() {
        let mut cfg = Config::parse("seed = 1\n").unwrap();
        cfg.set_override("seed", "9".to_owned());
        assert_eq!(cfg.get_u64("seed").unwrap(), Some(9));
    }

    #[test]
    fn list_values_reject_empty() {
        let mut cfg = Config::parse("sweep.lengths = ,\n").unwrap();
        let err = cfg.require_f64_list("sweep.lengths").unwrap_err();
        assert!(err.to_string().contains("empty"), "{err}");
    }
}
