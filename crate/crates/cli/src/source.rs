use std::path::{Path, PathBuf};

use linkproj::geometry::{load_scene, Scene};
use linkproj::scenes::{builtin_scene, random_planar_scene};
use serde::Deserialize;

use crate::error::CliError;

const BUILTIN_PREFIX: &str = "builtin:";

/// A list of scene locations, resolved relative to the manifest's directory.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    scenes: Vec<String>,
}

/// Parses a comma-separated list of numbers.
pub fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::new(format!("{what}: `{s}` is not a number")))
        })
        .collect()
}

/// `builtin:hopf_r3`, `builtin:torus_link_r3:3,6`, `builtin:random_planar:7`,
/// or a path to a scene document.
pub fn load(location: &str) -> Result<Scene, CliError> {
    if let Some(rest) = location.strip_prefix(BUILTIN_PREFIX) {
        let (name, params) = rest.split_once(':').unwrap_or((rest, ""));
        return builtin(name, params, 0);
    }
    load_scene(Path::new(location)).map_err(|e| {
        CliError::from(e).with_hint("check the file path and the scene format section of the README")
    })
}

/// Builds a builtin family; `random_planar` takes its seed either as the only
/// parameter or from `seed`.
pub fn builtin(name: &str, params: &str, seed: u64) -> Result<Scene, CliError> {
    let values = parse_numbers(params, "scene parameters")?;
    if name == "random_planar" {
        let seed = match values.as_slice() {
            [] => seed,
            [s] if s.fract() == 0.0 && *s >= 0.0 => *s as u64,
            _ => return Err(CliError::new("random_planar takes one non-negative integer seed")),
        };
        return Ok(random_planar_scene(seed)?);
    }
    builtin_scene(name, &values).map_err(|e| {
        CliError::from(e).with_hint(format!(
            "builtin families: {}, random_planar",
            linkproj::scenes::BUILTIN_NAMES.join(", ")
        ))
    })
}

/// One scene, or every scene of a manifest.
pub fn load_target(location: &str) -> Result<Vec<Scene>, CliError> {
    if location.starts_with(BUILTIN_PREFIX) {
        return Ok(vec![load(location)?]);
    }
    let path = Path::new(location);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("{}: {e}", path.display())))?;
    let is_manifest = serde_json::from_str::<serde_json::Value>(&text)
        .map(|v| v.get("scenes").is_some())
        .unwrap_or(false);
    if !is_manifest {
        return Ok(vec![load(location)?]);
    }
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::new(format!("{}: manifest: {e}", path.display())))?;
    if manifest.scenes.is_empty() {
        return Err(CliError::new(format!("{}: manifest lists no scenes", path.display())));
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_else(PathBuf::new);
    manifest
        .scenes
        .iter()
        .map(|entry| {
            if entry.starts_with(BUILTIN_PREFIX) {
                load(entry)
            } else {
                load(&base.join(entry).to_string_lossy())
            }
        })
        .collect()
}

/// `a,b` into two names.
pub fn parse_pair(text: &str) -> Result<[String; 2], CliError> {
    match text.split(',').map(str::trim).collect::<Vec<_>>().as_slice() {
        [a, b] if !a.is_empty() && !b.is_empty() => Ok([a.to_string(), b.to_string()]),
        _ => Err(CliError::new(format!("--pair expects two names `a,b`, got `{text}`"))),
    }
}

/// Node schedule: `16..1024` doubles from 16 up to 1024, `16,48` is taken
/// literally. Empty schedules are rejected.
pub fn parse_schedule(text: &str) -> Result<Vec<usize>, CliError> {
    let int = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::new(format!("schedule: `{s}` is not a node count")))
    };
    let nodes = if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (int(lo)?, int(hi)?);
        if lo == 0 {
            return Err(CliError::new("schedule must start above 0"));
        }
        let mut out = Vec::new();
        let mut n = lo;
        while n <= hi {
            out.push(n);
            n *= 2;
        }
        out
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(int)
            .collect::<Result<Vec<_>, _>>()?
    };
    if nodes.is_empty() {
        return Err(CliError::new(format!("schedule `{text}` is empty")));
    }
    if let Some(&bad) = nodes.iter().find(|&&n| !(8..=4096).contains(&n)) {
        return Err(CliError::new(format!(
            "schedule entry {bad} outside 8..=4096 nodes per dimension"
        )));
    }
    Ok(nodes)
}

/// `1..6` (inclusive) or `1,3,5`.
pub fn parse_int_range(text: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let int = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| CliError::new(format!("{what}: `{s}` is not a non-negative integer")))
    };
    let values = if let Some((lo, hi)) = text.split_once("..") {
        (int(lo)?..=int(hi)?).collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(int)
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(CliError::new(format!("{what}: `{text}` is empty")));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(parse_schedule("16..128").unwrap(), vec![16, 32, 64, 128]);
        assert_eq!(parse_schedule("16, 48").unwrap(), vec![16, 48]);
        assert!(parse_schedule("").is_err());
        assert!(parse_schedule("64..32").is_err());
        assert!(parse_schedule("4..16").is_err());
    }

    #[test]
    fn pairs_and_ranges() {
        assert_eq!(parse_pair("g1, g2").unwrap(), ["g1".to_string(), "g2".to_string()]);
        assert!(parse_pair("g1").is_err());
        assert_eq!(parse_int_range("1..3", "p").unwrap(), vec![1, 2, 3]);
        assert!(parse_int_range("3..1", "p").is_err());
    }

    #[test]
    fn builtin_locations() {
        assert_eq!(load("builtin:hopf_r3").unwrap().name(), "hopf_r3");
        assert_eq!(load("builtin:torus_link_r3:3,6").unwrap().objects().len(), 3);
        assert_eq!(load("builtin:random_planar:4").unwrap().name(), "random_planar_4");
        assert!(load("builtin:trefoil").is_err());
    }
}
