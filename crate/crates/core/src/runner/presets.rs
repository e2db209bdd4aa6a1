//! Named configurations shipped with the crate.

use super::config::RunConfig;
use crate::error::{Error, Result};

/// `(name, JSON)` of every shipped preset.
pub const PRESETS: &[(&str, &str)] = &[
    ("figure1", include_str!("../../presets/figure1.json")),
    ("figure2", include_str!("../../presets/figure2.json")),
    ("trivial", include_str!("../../presets/trivial.json")),
    ("powers", include_str!("../../presets/powers.json")),
    ("smooth", include_str!("../../presets/smooth.json")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset(name: &str) -> Result<RunConfig> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let known: Vec<_> = preset_names().collect();
        Error::Config(format!(
            "unknown preset `{name}` (known: {})",
            known.join(", ")
        ))
    })?;
    RunConfig::from_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::validate;

    #[test]
    fn presets_parse_and_validate() {
        for name in preset_names() {
            let cfg = preset(name).unwrap();
            assert_eq!(cfg.name, name);
            assert_eq!(validate(&cfg), Vec::<String>::new(), "{name}");
        }
    }

    #[test]
    fn unknown_preset_lists_the_known_ones() {
        let msg = preset("nope").unwrap_err().to_string();
        assert!(msg.contains("figure1"));
    }
}
