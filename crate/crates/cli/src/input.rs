use std::path::PathBuf;

use serde::de::DeserializeOwned;

use triglide_core::{Pose, ReducedJoints};

use crate::{CliError, CliResult};

/// Returns the inline value or the contents of `file`, requiring exactly one.
pub fn inline_or_file(
    field: &str,
    inline: Option<String>,
    file: Option<PathBuf>,
) -> CliResult<String> {
    match (inline, file) {
        (Some(s), None) => Ok(s),
        (None, Some(path)) => std::fs::read_to_string(&path)
            .map_err(|e| CliError::Validation(format!("invalid `file` {}: {e}", path.display()))),
        _ => Err(CliError::Validation(format!(
            "missing `{field}`: pass --{field} or --file"
        ))),
    }
}

fn parse_json<T: DeserializeOwned>(field: &str, text: &str) -> CliResult<T> {
    serde_json::from_str(text.trim())
        .map_err(|e| CliError::Validation(format!("invalid `{field}`: {e}")))
}

/// `n` numbers given as `a,b,c` or as a JSON array.
pub fn parse_numbers(field: &str, text: &str, n: usize) -> CliResult<Vec<f64>> {
    let text = text.trim();
    let values: Vec<f64> = if text.starts_with('[') {
        parse_json(field, text)?
    } else {
        text.split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    CliError::Validation(format!(
                        "invalid `{field}`: `{}` is not a number",
                        s.trim()
                    ))
                })
            })
            .collect::<CliResult<_>>()?
    };
    if values.len() != n {
        return Err(CliError::Validation(format!(
            "invalid `{field}`: expected {n} numbers, got {}",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(CliError::Validation(format!(
            "invalid `{field}`: {v} is not finite"
        )));
    }
    Ok(values)
}

pub fn parse_pose(text: &str) -> CliResult<Pose> {
    let pose: Pose = parse_json("pose", text)?;
    let [x, y, z] = [pose.x, pose.y, pose.z];
    if ![x, y, z].iter().all(|v| v.is_finite()) {
        return Err(CliError::Validation(
            "invalid `pose`: position must be finite".into(),
        ));
    }
    Ok(pose)
}

/// Reduced joints as `a,b,c`, a JSON array, or a JSON object with
/// `mu2z`, `mu3z` and `mu3y`.
pub fn parse_mu(text: &str) -> CliResult<ReducedJoints> {
    let text = text.trim();
    if text.starts_with('{') {
        let mu: ReducedJoints = parse_json("mu", text)?;
        parse_numbers("mu", &format!("{},{},{}", mu.mu2z, mu.mu3z, mu.mu3y), 3)?;
        return Ok(mu);
    }
    let v = parse_numbers("mu", text, 3)?;
    Ok(ReducedJoints::new(v[0], v[1], v[2]))
}
