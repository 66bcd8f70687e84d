use std::path::Path;

use connections::GeometryBundle;
use manifold_zoo::{builtin_by_name, load_spec};

use crate::error::CliError;

/// Resolves a manifold argument: a path to a JSON specification, an inline
/// JSON document, or a built-in name such as `sphere:2` or
/// `random_statistical:3:7`.
pub fn load_manifold(arg: &str) -> Result<GeometryBundle, CliError> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return Ok(load_spec(trimmed)?);
    }
    let path = Path::new(trimmed);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
        return Ok(load_spec(&text)?);
    }
    Ok(builtin_by_name(trimmed)?)
}
