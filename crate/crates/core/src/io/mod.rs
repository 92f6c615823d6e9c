//! The `TableFileV1` JSON format, an on-disk cache of tables, and comparison of table files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "spec": {"flavor": "laurent", "p": 2, "r": 2},
//!   "group_order": 96,
//!   "classes": [{"rep": ["1", "0", "0", "1"], "size": 1}, ...],
//!   "irreps": [{"label": "...", "dim": 1, "values": [[1.0, 0.0], ...]}, ...],
//!   "certified": true
//! }
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charfun::Level;
use crate::driver::{bottleneck_matching, CharacterTable, Certificate};
use crate::matgroup::{ConjClasses, Gl2Group, Mat2};
use crate::ring::{Ring, RingSpec};
use crate::{Error, DEFAULT_CAP};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "GL2REPS_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".gl2reps-cache";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    /// Entries `a, b, c, d` of the representative `[[a, b], [c, d]]`.
    pub rep: [String; 4],
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepEntry {
    pub label: String,
    pub dim: u64,
    pub values: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFileV1 {
    pub schema_version: u32,
    pub spec: RingSpec,
    pub group_order: u64,
    pub classes: Vec<ClassEntry>,
    pub irreps: Vec<IrrepEntry>,
    pub certified: bool,
}

impl TableFileV1 {
    /// A file for arbitrary rows on the classes of `level`; `certified` is
    /// recomputed from the rows.
    pub fn from_rows(level: &Level, labels: Vec<String>, rows: &[Vec<Complex64>]) -> TableFileV1 {
        let group = level.group();
        let ring = group.ring();
        let classes = level.classes();
        TableFileV1 {
            schema_version: SCHEMA_VERSION,
            spec: level.spec(),
            group_order: level.order() as u64,
            classes: classes
                .reps()
                .iter()
                .zip(classes.sizes())
                .map(|(&g, &size)| ClassEntry {
                    rep: group.mat(g).entries().map(|x| ring.format(x)),
                    size,
                })
                .collect(),
            irreps: labels
                .into_iter()
                .zip(rows)
                .map(|(label, row)| IrrepEntry {
                    label,
                    dim: row[0].re.round().max(0.0) as u64,
                    values: row.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
            certified: Certificate::for_rows(rows, classes).passed(),
        }
    }

    pub fn from_table(table: &CharacterTable) -> TableFileV1 {
        let labels = table.irreps().iter().map(|r| r.label.clone()).collect();
        TableFileV1::from_rows(table.level(), labels, &table.rows())
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.irreps
            .iter()
            .map(|r| r.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect()
    }

    /// Structural checks that do not need the group.
    pub fn validate(&self) -> Result<(), Error> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let n = self.classes.len();
        if let Some(bad) = self.irreps.iter().find(|r| r.values.len() != n) {
            return Err(Error::Parse(format!(
                "{}: {} values for {n} classes",
                bad.label,
                bad.values.len()
            )));
        }
        let total: u64 = self.classes.iter().map(|c| c.size as u64).sum();
        if total != self.group_order {
            return Err(Error::Parse(format!(
                "class sizes sum to {total}, group order is {}",
                self.group_order
            )));
        }
        Ok(())
    }

    /// Class representatives as matrices over the file's ring.
    pub fn class_reps(&self) -> Result<Vec<Mat2>, Error> {
        let ring = Ring::new(self.spec)?;
        self.classes
            .iter()
            .map(|c| {
                let mut e = [ring.from_int(0); 4];
                for (slot, s) in e.iter_mut().zip(&c.rep) {
                    *slot = ring.parse(s)?;
                }
                Ok(Mat2::from_entries(e))
            })
            .collect()
    }

    /// Rebuild the group and classes the file refers to, checking the stored sizes.
    pub fn level(&self) -> Result<Level, Error> {
        let group = Gl2Group::enumerate(self.spec, DEFAULT_CAP.max(self.group_order as usize))?;
        let reps = self
            .class_reps()?
            .iter()
            .map(|m| {
                group
                    .index_of(m)
                    .ok_or_else(|| Error::Parse(format!("class representative {m:?} is not invertible")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let classes = ConjClasses::from_reps(&group, group.generators(), &reps)?;
        if classes.sizes().iter().zip(&self.classes).any(|(&a, b)| a != b.size) {
            return Err(Error::Parse("stored class sizes do not match the group".into()));
        }
        Ok(Level::from_parts(group, classes))
    }

    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<TableFileV1, Error> {
        let file: TableFileV1 = serde_json::from_str(s)?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<TableFileV1, Error> {
        TableFileV1::from_json(&fs::read_to_string(path)?)
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn write(&self, path: &Path) -> Result<(), Error> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        std::io::Write::write_all(&mut tmp, self.to_json()?.as_bytes())?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}

/// Result of comparing two table files.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows_a: usize,
    pub rows_b: usize,
    /// Largest entry distance under the best row bijection; infinite when the
    /// row counts differ.
    pub residual: f64,
}

impl Comparison {
    pub fn passed(&self, tol: f64) -> bool {
        self.rows_a == self.rows_b && self.residual < tol
    }
}

/// Compares the rows of two files on the same ring, aligning their classes
/// through the group when the representatives differ.
pub fn compare_files(a: &TableFileV1, b: &TableFileV1) -> Result<Comparison, Error> {
    if a.spec != b.spec || a.group_order != b.group_order || a.classes.len() != b.classes.len() {
        return Err(Error::ClassMismatch);
    }
    let rows_a = a.rows();
    let mut rows_b = b.rows();
    if a.classes != b.classes {
        let level = a.level()?;
        let group = level.group();
        let col_of_b: Vec<usize> = b
            .class_reps()?
            .iter()
            .map(|m| group.index_of(m).map(|g| level.classes().class_of(g)).ok_or(Error::ClassMismatch))
            .collect::<Result<_, _>>()?;
        let mut seen = vec![false; col_of_b.len()];
        for &c in &col_of_b {
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::ClassMismatch);
            }
        }
        for row in &mut rows_b {
            let mut aligned = vec![Complex64::new(0.0, 0.0); row.len()];
            for (k, &c) in col_of_b.iter().enumerate() {
                aligned[c] = row[k];
            }
            *row = aligned;
        }
    }
    let residual = bottleneck_matching(&rows_a, &rows_b).map_or(f64::INFINITY, |m| m.1);
    Ok(Comparison {
        rows_a: rows_a.len(),
        rows_b: rows_b.len(),
        residual,
    })
}

/// Directory of certified tables, one file per `(flavor, p, r, schema_version)`.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// `$GL2REPS_CACHE`, or `./.gl2reps-cache`.
    pub fn from_env() -> Cache {
        Cache::new(std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: RingSpec) -> PathBuf {
        self.dir
            .join(format!("{}-p{}-r{}-v{SCHEMA_VERSION}.json", spec.flavor, spec.p, spec.r))
    }

    /// A cached certified table, if one exists and parses under the current schema.
    pub fn load(&self, spec: RingSpec) -> Option<TableFileV1> {
        let path = self.path_for(spec);
        match TableFileV1::read(&path) {
            Ok(file) if file.spec == spec && file.certified => Some(file),
            Ok(_) => None,
            Err(e) => {
                if path.exists() {
                    log::warn!("ignoring cache entry {}: {e}", path.display());
                }
                None
            }
        }
    }

    /// Stores certified tables only.
    pub fn store(&self, file: &TableFileV1) -> Result<(), Error> {
        if file.certified {
            file.write(&self.path_for(file.spec))?;
        }
        Ok(())
    }
}
