//! Loading and atomically saving a resource, plain or zipped, with its
//! metadata sidecar.

use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use namebank::resource::{apply_metadata, serialize_metadata};
use namebank::{parse_resource, serialize_resource, Repository};
use tempfile::NamedTempFile;
use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, ZipArchive, ZipWriter};

enum Container {
    Plain,
    Zip { entry: String },
}

/// Where a repository came from, so it can be written back the same way.
pub struct Store {
    path: PathBuf,
    container: Container,
}

fn is_zip(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("zip"))
}

/// `<resource>.meta`, next to the resource.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

fn read_zip(path: &Path, bytes: Vec<u8>) -> Result<(String, Vec<u8>)> {
    let mut archive =
        ZipArchive::new(Cursor::new(bytes)).with_context(|| format!("{}: not a zip archive", path.display()))?;
    for i in 0..archive.len() {
        let mut file = archive.by_index(i)?;
        if file.is_dir() {
            continue;
        }
        let name = file.name().to_string();
        let mut body = Vec::new();
        file.read_to_end(&mut body)
            .with_context(|| format!("{}: reading {name}", path.display()))?;
        return Ok((name, body));
    }
    bail!("{}: archive holds no resource file", path.display())
}

impl Store {
    pub fn load(path: &Path) -> Result<(Repository, Store)> {
        let raw = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        let (container, body) = if is_zip(path) {
            let (entry, body) = read_zip(path, raw)?;
            (Container::Zip { entry }, body)
        } else {
            (Container::Plain, raw)
        };
        let mut repo = parse_resource(&body).with_context(|| format!("{}", path.display()))?;
        let meta = sidecar_path(path);
        if meta.exists() {
            let bytes = fs::read(&meta).with_context(|| format!("cannot read {}", meta.display()))?;
            apply_metadata(&mut repo, &bytes).with_context(|| format!("{}", meta.display()))?;
        }
        let store = Store {
            path: path.to_path_buf(),
            container,
        };
        Ok((repo, store))
    }

    /// Writes the sidecar, then the resource. Each file is replaced by a
    /// rename, so readers see either the old or the new contents.
    pub fn save(&self, repo: &Repository) -> Result<()> {
        write_atomic(&sidecar_path(&self.path), &serialize_metadata(repo))?;
        let body = serialize_resource(repo);
        let bytes = match &self.container {
            Container::Plain => body,
            Container::Zip { entry } => {
                let mut zip = ZipWriter::new(Cursor::new(Vec::new()));
                zip.start_file(
                    entry.as_str(),
                    SimpleFileOptions::default().compression_method(CompressionMethod::Deflated),
                )?;
                zip.write_all(&body)?;
                zip.finish()?.into_inner()
            }
        };
        write_atomic(&self.path, &bytes)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        NamedTempFile::new_in(dir).with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    if let Ok(meta) = fs::metadata(path) {
        fs::set_permissions(tmp.path(), meta.permissions())?;
    }
    tmp.persist(path)
        .with_context(|| format!("cannot replace {}", path.display()))?;
    Ok(())
}
