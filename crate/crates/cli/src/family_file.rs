//! Plain-text family files.
//!
//! ```text
//! ccc2d-family 1
//! q 2
//! sets 4
//! arrays 4
//! rows 8
//! cols 16
//! provenance spec-sha256:<64 hex digits>      (or: provenance external)
//! spec-begin                                  (optional block, construction
//! q = 2                                        spec echoed as TOML)
//! ...
//! spec-end
//! set 0 array 0
//! 0 0 0 0 0 1 0 1 0 0 1 1 0 1 1 0
//! ...                                         (rows lines of cols integers)
//! set 0 array 1
//! ...
//! ```
//!
//! Blocks appear in `(set, array)` order. Writing is canonical: reading a file
//! this module wrote and writing it again yields identical bytes.

use std::fmt::Write as _;

use ccc2d::{CccFamily, ConstructionSpec, ZqArray};
use sha2::{Digest, Sha256};
use thiserror::Error;

const MAGIC: &str = "ccc2d-family 1";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// SHA-256 of the echoed spec text.
    Spec(String),
    External,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFile {
    pub provenance: Provenance,
    /// Construction spec as TOML, when the family came from `construct`.
    pub spec_toml: Option<String>,
    pub family: CccFamily,
}

impl FamilyFile {
    pub fn from_spec(spec: &ConstructionSpec) -> Self {
        let spec_toml = spec_to_toml(spec);
        Self {
            provenance: Provenance::Spec(spec_hash(&spec_toml)),
            family: spec.build_ccc(),
            spec_toml: Some(spec_toml),
        }
    }

    pub fn external(family: CccFamily) -> Self {
        Self {
            provenance: Provenance::External,
            spec_toml: None,
            family,
        }
    }

    pub fn to_text(&self) -> String {
        let (m, n, l1, l2) = self.family.parameters();
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "q {}", self.family.q());
        let _ = writeln!(out, "sets {m}");
        let _ = writeln!(out, "arrays {n}");
        let _ = writeln!(out, "rows {l1}");
        let _ = writeln!(out, "cols {l2}");
        match &self.provenance {
            Provenance::Spec(h) => {
                let _ = writeln!(out, "provenance spec-sha256:{h}");
            }
            Provenance::External => out.push_str("provenance external\n"),
        }
        if let Some(spec) = &self.spec_toml {
            out.push_str("spec-begin\n");
            for line in spec.lines() {
                let _ = writeln!(out, "{line}");
            }
            out.push_str("spec-end\n");
        }
        for (p, set) in self.family.sets().iter().enumerate() {
            for (t, array) in set.iter().enumerate() {
                let _ = writeln!(out, "set {p} array {t}");
                out.push_str(&array.to_string());
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = Lines::new(text);
        let magic = lines.next_line()?;
        if magic != MAGIC {
            return Err(lines.error("not a ccc2d family file"));
        }
        let q = lines.header("q")?;
        let sets = lines.header("sets")? as usize;
        let arrays = lines.header("arrays")? as usize;
        let rows = lines.header("rows")? as usize;
        let cols = lines.header("cols")? as usize;
        if q > u64::from(u32::MAX) || sets == 0 || arrays == 0 || rows == 0 || cols == 0 {
            return Err(lines.error("header values out of range"));
        }
        let q = q as u32;

        let prov = lines.next_line()?;
        let provenance = match prov.strip_prefix("provenance ") {
            Some("external") => Provenance::External,
            Some(p) => match p.strip_prefix("spec-sha256:") {
                Some(h) if h.len() == 64 && h.bytes().all(|b| b.is_ascii_hexdigit()) => {
                    Provenance::Spec(h.to_string())
                }
                _ => return Err(lines.error("bad provenance")),
            },
            None => return Err(lines.error("expected provenance")),
        };

        let mut spec_toml = None;
        if lines.peek() == Some("spec-begin") {
            lines.next_line()?;
            let mut spec = String::new();
            loop {
                let line = lines.next_line()?;
                if line == "spec-end" {
                    break;
                }
                spec.push_str(line);
                spec.push('\n');
            }
            spec_toml = Some(spec);
        }

        let mut family = Vec::with_capacity(sets);
        for p in 0..sets {
            let mut set = Vec::with_capacity(arrays);
            for t in 0..arrays {
                let expected = format!("set {p} array {t}");
                if lines.next_line()? != expected {
                    return Err(lines.error(format!("expected '{expected}'")));
                }
                let mut values = Vec::with_capacity(rows * cols);
                for _ in 0..rows {
                    let line = lines.next_line()?;
                    let before = values.len();
                    for tok in line.split_ascii_whitespace() {
                        let v: u32 = tok
                            .parse()
                            .map_err(|_| lines.error(format!("bad entry '{tok}'")))?;
                        if v >= q {
                            return Err(lines.error(format!("entry {v} is outside Z_{q}")));
                        }
                        values.push(v);
                    }
                    if values.len() - before != cols {
                        return Err(lines.error(format!("expected {cols} entries")));
                    }
                }
                set.push(
                    ZqArray::new(q, rows, cols, values).map_err(|e| lines.error(e.to_string()))?,
                );
            }
            family.push(set);
        }
        if let Some(extra) = lines.peek() {
            return Err(lines.error(format!("unexpected trailing content '{extra}'")));
        }
        let family = CccFamily::new(family).map_err(|e| lines.error(e.to_string()))?;
        Ok(Self {
            provenance,
            spec_toml,
            family,
        })
    }
}

/// Canonical TOML text of a spec, with every optional field written out.
pub fn spec_to_toml(spec: &ConstructionSpec) -> String {
    toml::to_string(&spec.to_document()).expect("spec documents serialize")
}

pub fn spec_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::str::Lines<'a>>,
    number: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().peekable(),
            number: 0,
        }
    }

    fn error(&self, msg: impl Into<String>) -> FormatError {
        FormatError {
            line: self.number,
            msg: msg.into(),
        }
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().copied()
    }

    fn next_line(&mut self) -> Result<&'a str, FormatError> {
        self.number += 1;
        self.inner
            .next()
            .ok_or_else(|| self.error("unexpected end of file"))
    }

    fn header(&mut self, key: &str) -> Result<u64, FormatError> {
        let line = self.next_line()?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| self.error(format!("expected '{key} <integer>'")))
    }
}
