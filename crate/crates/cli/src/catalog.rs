//! Group catalogs for `scan`: one group per line, either a group spec or an
//! inline Cayley document. Blank lines and `#` comments are ignored.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use hurwitz::group::{Group, GroupSpec};

pub struct CatalogEntry {
    pub line: usize,
    pub group: Arc<Group>,
}

pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    /// One per rejected row, plus one for an empty catalog.
    pub warnings: Vec<String>,
}

#[derive(serde::Deserialize)]
struct Named {
    name: Option<String>,
}

fn load_row(text: &str, base: &Path, origin: &str) -> hurwitz::Result<Group> {
    if text.starts_with('{') {
        let name = serde_json::from_str::<Named>(text).ok().and_then(|n| n.name).unwrap_or_else(|| origin.to_string());
        return Group::from_cayley_json(&name, text);
    }
    match GroupSpec::parse(text)? {
        // relative table paths are read next to the catalog
        GroupSpec::Cayley(p) if p.is_relative() => Group::from_spec(GroupSpec::Cayley(base.join(p))),
        spec => Group::from_spec(spec),
    }
}

/// Reads a catalog. Only an unreadable file is an error; bad rows become
/// warnings naming the line and the reason.
pub fn ingest_catalog(path: &Path) -> std::io::Result<Catalog> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let origin = format!("{}#{}", path.display(), i + 1);
        match load_row(line, &base, &origin) {
            Ok(g) => entries.push(CatalogEntry { line: i + 1, group: Arc::new(g) }),
            Err(e) => warnings.push(format!("catalog line {} skipped: {e}", i + 1)),
        }
    }
    if entries.is_empty() && warnings.is_empty() {
        warnings.push(format!("catalog {} lists no groups", path.display()));
    }
    Ok(Catalog { entries, warnings })
}
