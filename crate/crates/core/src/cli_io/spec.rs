use std::path::Path;

use serde_json::Value;

use super::fixtures;
use crate::error::{invalid, Error, Result};
use crate::group_core::check_axioms;
use crate::shift_space::Shift;

/// Elements checked against the group axioms at load time.
const AXIOM_SPOT_CHECK: usize = 12;

/// A loaded shift descriptor.
#[derive(Clone, Debug)]
pub struct Spec {
    pub name: String,
    pub shift: Shift,
    pub raw: Value,
}

pub fn parse_spec(text: &str, origin: &str, bound: usize) -> Result<Spec> {
    let raw: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
    if !raw.is_object() {
        return Err(invalid("", "a shift descriptor must be a JSON object"));
    }
    let shift = Shift::from_json(&raw, "")?;
    if let Some(detail) = check_axioms(&shift.alphabet, AXIOM_SPOT_CHECK) {
        return Err(invalid("/alphabet", detail));
    }
    shift.validate(bound)?;
    let name = raw.get("name").and_then(Value::as_str).map_or_else(|| stem(origin), str::to_string);
    Ok(Spec { name, shift, raw })
}

fn stem(origin: &str) -> String {
    Path::new(origin).file_stem().and_then(|s| s.to_str()).unwrap_or(origin).to_string()
}

/// Reads a spec from disk, falling back to the bundled fixture of that name.
pub fn load_spec(path: &str, bound: usize) -> Result<Spec> {
    let text = read_text(path)?;
    parse_spec(&text, path, bound)
}

pub(crate) fn read_text(path: &str) -> Result<String> {
    match std::fs::read_to_string(path) {
        Ok(t) => Ok(t),
        Err(e) => fixtures::bundled(path).map(str::to_string).ok_or_else(|| Error::Io(format!("{path}: {e}"))),
    }
}

/// A bundled fixture by name. Panics if it is missing or invalid.
pub fn fixture(name: &str) -> Shift {
    let text = fixtures::bundled(name).unwrap_or_else(|| panic!("no bundled fixture {name}"));
    parse_spec(text, name, 64).unwrap_or_else(|e| panic!("fixture {name}: {e}")).shift
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_shift_loads() {
        for (name, text) in fixtures::BUNDLED {
            let v: Value = serde_json::from_str(text).unwrap();
            if v.get("shift").is_some() {
                parse_spec(text, name, 64).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }

    #[test]
    fn malformed_subgroup_is_a_validation_error() {
        let text = r#"{"alphabet": {"kind": "finite_cyclic", "n": 4},
            "shift": {"kind": "markov_coset",
                      "subgroup": {"kind": "finite_list", "elems": [0, 1]},
                      "hom": {"kind": "canonical_projection"}}}"#;
        match parse_spec(text, "inline", 64) {
            Err(Error::Validation { pointer, .. }) => assert!(pointer.starts_with("/shift/subgroup"), "{pointer}"),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn garbage_is_a_parse_error() {
        assert!(matches!(parse_spec("{nope", "inline", 64), Err(Error::Parse(_))));
    }

    #[test]
    fn bare_names_resolve_to_bundled_files() {
        let s = load_spec("z4_coset.json", 64).unwrap();
        assert_eq!(s.name, "z4_coset");
        assert!(load_spec("definitely/not/here.json", 64).is_err());
    }
}
