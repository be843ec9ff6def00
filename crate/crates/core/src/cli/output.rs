//! Output artifacts: header line, CSV/JSON bodies and atomic writes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of the canonical config bytes.
pub fn config_hash(canonical: &[u8]) -> String {
    Sha256::digest(canonical).iter().map(|b| format!("{b:02x}")).collect()
}

/// `# config_sha256=<hash> eit-bleach=<version>`
pub fn header_line(hash: &str) -> String {
    format!("# config_sha256={hash} eit-bleach={VERSION}")
}

/// One named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// CSV body with the header comment as its first line.
pub fn csv_artifact<R: Serialize>(name: &str, hash: &str, rows: &[R]) -> Result<Artifact> {
    let mut bytes = header_line(hash).into_bytes();
    bytes.push(b'\n');
    {
        let mut w = csv::Writer::from_writer(&mut bytes);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(Artifact {
        name: name.to_string(),
        bytes,
    })
}

/// CSV body from a header row and pre-built records.
pub fn csv_table(name: &str, hash: &str, columns: &[String], rows: &[Vec<f64>]) -> Result<Artifact> {
    let mut bytes = header_line(hash).into_bytes();
    bytes.push(b'\n');
    {
        let mut w = csv::Writer::from_writer(&mut bytes);
        w.write_record(columns)?;
        for r in rows {
            w.write_record(r.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
    }
    Ok(Artifact {
        name: name.to_string(),
        bytes,
    })
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    header: Header<'a>,
    data: &'a T,
}

#[derive(Serialize)]
struct Header<'a> {
    config_sha256: &'a str,
    #[serde(rename = "eit-bleach")]
    version: &'a str,
}

/// JSON body `{"header": {...}, "data": ...}`.
pub fn json_artifact<T: Serialize>(name: &str, hash: &str, data: &T) -> Result<Artifact> {
    let mut bytes = serde_json::to_vec_pretty(&Wrapped {
        header: Header {
            config_sha256: hash,
            version: VERSION,
        },
        data,
    })?;
    bytes.push(b'\n');
    Ok(Artifact {
        name: name.to_string(),
        bytes,
    })
}

fn temp_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!(".{name}.tmp-{}", std::process::id()))
}

/// Writes every artifact to a temporary file first, then renames them all
/// into place. On failure the temporaries are removed and nothing is left
/// under the final names.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut staged = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let tmp = temp_path(dir, &a.name);
        if let Err(e) = fs::write(&tmp, &a.bytes) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        staged.push((tmp, dir.join(&a.name)));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, dest) in staged {
        fs::rename(&tmp, &dest)?;
        written.push(dest);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_hex_sha256() {
        assert_eq!(
            config_hash(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn csv_starts_with_header_comment() {
        #[derive(Serialize)]
        struct Row {
            x: f64,
        }
        let a = csv_artifact("a.csv", "ff", &[Row { x: 1.5 }]).unwrap();
        let text = String::from_utf8(a.bytes).unwrap();
        assert_eq!(text, format!("# config_sha256=ff eit-bleach={VERSION}\nx\n1.5\n"));
    }

    #[test]
    fn atomic_write_leaves_no_temporaries() {
        let dir = tempfile::tempdir().unwrap();
        let arts = vec![
            Artifact { name: "a.txt".into(), bytes: b"1".to_vec() },
            Artifact { name: "b.txt".into(), bytes: b"2".to_vec() },
        ];
        write_artifacts(dir.path(), &arts).unwrap();
        let mut names: Vec<String> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(names, ["a.txt", "b.txt"]);
    }
}
