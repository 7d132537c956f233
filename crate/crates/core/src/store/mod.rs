// SPDX-License-Identifier: Apache-2.0

//! On-disk dataset: one directory per (design, PDK, constraint hash), one
//! subdirectory per stage holding Parquet entity tables, map arrays and a
//! JSON snapshot header. A root `manifest.json` indexes every instance.

mod codec;
mod maps;
mod table;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::DatasetInstance;
use crate::graphs::{ClockNetworkGraph, LayoutContext, NetlistGraph};
use crate::raster::Anchor;
use crate::schema::availability::window;
use crate::schema::{
    is_canonical_order, validate_snapshot, DesignConstraint, MapSet, PdnModel, Stage,
    StageSnapshot, Violation,
};

pub use self::codec::EntityKind;
pub use self::maps::{
    read_binary, read_scalar, read_sidecar, write_binary, write_scalar, MapKind, MapSidecar,
};
pub use self::table::{Column, Table};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
const SNAPSHOT_FILE: &str = "snapshot.json";
const MAP_DIR: &str = "maps";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parquet error: {0}")]
    Parquet(#[from] parquet::errors::ParquetError),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("corrupt artifact: {0}")]
    Corrupt(String),
    #[error("instance `{0}` not found")]
    NotFound(String),
    #[error("stage {stage} of instance `{id}` not found")]
    StageNotFound { id: String, stage: Stage },
    #[error("missing artifact {0}")]
    MissingArtifact(PathBuf),
    #[error("digest mismatch for {path}: manifest {expected}, file {actual}")]
    DigestMismatch {
        path: PathBuf,
        expected: String,
        actual: String,
    },
    #[error("{0} already exists")]
    PathCollision(String),
    #[error("stage {stage} failed validation: {}", summarize(violations))]
    Validation {
        stage: Stage,
        violations: Vec<Violation>,
    },
    #[error("stages are not in canonical order")]
    StageOrder,
}

fn summarize(v: &[Violation]) -> String {
    let head: Vec<String> = v
        .iter()
        .take(3)
        .map(|x| format!("{}: {}", x.path, x.message))
        .collect();
    let more = v.len().saturating_sub(3);
    if more > 0 {
        format!("{} (+{more} more)", head.join("; "))
    } else {
        head.join("; ")
    }
}

/// Identity and rendering settings of one design instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub design: String,
    pub pdk: String,
    pub constraint: Option<DesignConstraint>,
    pub anchor: Anchor,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageEntry {
    pub stage: Stage,
    pub run_status: String,
    /// Stage directory relative to the dataset root.
    pub path: String,
    /// SHA-256 hex per file, keyed by path relative to the stage directory.
    pub digests: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub design: String,
    pub pdk: String,
    pub constraint: Option<DesignConstraint>,
    pub constraint_hash: String,
    pub anchor: Anchor,
    pub k: u32,
    pub stages: Vec<StageEntry>,
}

impl ManifestEntry {
    pub fn stage_list(&self) -> Vec<Stage> {
        self.stages.iter().map(|s| s.stage).collect()
    }

    pub fn stage(&self, stage: Stage) -> Option<&StageEntry> {
        self.stages.iter().find(|s| s.stage == stage)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    pub instances: BTreeMap<String, ManifestEntry>,
}

impl Default for DatasetManifest {
    fn default() -> Self {
        DatasetManifest {
            schema_version: SCHEMA_VERSION,
            instances: BTreeMap::new(),
        }
    }
}

impl DatasetManifest {
    /// Manifest at `root`, or an empty one when the root has none yet.
    pub fn load(root: &Path) -> Result<DatasetManifest, StoreError> {
        let p = root.join(MANIFEST_FILE);
        if !p.exists() {
            return Ok(DatasetManifest::default());
        }
        let m: DatasetManifest = serde_json::from_slice(&fs::read(&p)?)?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(StoreError::Corrupt(format!(
                "manifest schema version {} (expected {SCHEMA_VERSION})",
                m.schema_version
            )));
        }
        Ok(m)
    }

    /// Write-temp-then-rename so readers see the old or the new file only.
    pub fn save(&self, root: &Path) -> Result<(), StoreError> {
        fs::create_dir_all(root)?;
        let tmp = root.join(format!(".{MANIFEST_FILE}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&serde_json::to_vec_pretty(self)?)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, root.join(MANIFEST_FILE))?;
        Ok(())
    }
}

/// Header of a stored stage: everything that is not an entity table or a map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct SnapshotHeader {
    stage: Stage,
    run_status: String,
    context: LayoutContext,
    clock_source: Option<String>,
    clock_tree: Option<ClockNetworkGraph>,
    pdn: Option<PdnModel>,
    binary_maps: Vec<String>,
    scalar_maps: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn file_digest(path: &Path) -> Result<String, StoreError> {
    if !path.exists() {
        return Err(StoreError::MissingArtifact(path.to_path_buf()));
    }
    Ok(sha256_hex(&fs::read(path)?))
}

/// First 12 hex digits of the SHA-256 of the constraint's JSON form.
pub fn constraint_hash(c: Option<&DesignConstraint>) -> String {
    let json = serde_json::to_string(&c).expect("constraint serializes");
    sha256_hex(json.as_bytes())[..12].to_string()
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn instance_id(spec: &InstanceSpec) -> String {
    format!(
        "{}__{}__{}",
        sanitize(&spec.design),
        sanitize(&spec.pdk),
        constraint_hash(spec.constraint.as_ref())
    )
}

// Serializes manifest read-modify-write cycles of writers in this process.
static MANIFEST_LOCK: Mutex<()> = Mutex::new(());

fn write_stage(dir: &Path, s: &StageSnapshot) -> Result<BTreeMap<String, String>, StoreError> {
    fs::create_dir_all(dir.join(MAP_DIR))?;
    let g = &s.netlist;
    let tables = [
        (EntityKind::Gates, codec::gates_table(&g.gates)),
        (EntityKind::Pins, codec::pins_table(&g.pins)),
        (EntityKind::Nets, codec::nets_table(&g.nets)),
        (EntityKind::Wires, codec::wires_table(&g.nets)),
        (EntityKind::Ports, codec::ports_table(&g.ports)),
        (EntityKind::Paths, codec::paths_table(&s.timing_paths)),
        (EntityKind::Arcs, codec::arcs_table(&s.timing_paths)),
        (
            EntityKind::Metrics,
            codec::metrics_table(&s.summary, &s.metrics),
        ),
    ];
    let mut files = Vec::new();
    for (kind, t) in &tables {
        t.write_parquet(&dir.join(kind.file_name()))?;
        files.push(kind.file_name());
    }
    let map_dir = dir.join(MAP_DIR);
    for m in s.maps.binary.values() {
        files.extend(
            maps::write_binary(&map_dir, m)?
                .into_iter()
                .map(|f| format!("{MAP_DIR}/{f}")),
        );
    }
    for m in s.maps.scalar.values() {
        files.extend(
            maps::write_scalar(&map_dir, m)?
                .into_iter()
                .map(|f| format!("{MAP_DIR}/{f}")),
        );
    }
    let header = SnapshotHeader {
        stage: s.stage,
        run_status: s.run_status.clone(),
        context: g.context.clone(),
        clock_source: s.clock_source.clone(),
        clock_tree: s.clock_tree.clone(),
        pdn: s.pdn.clone(),
        binary_maps: s.maps.binary.keys().cloned().collect(),
        scalar_maps: s.maps.scalar.keys().cloned().collect(),
    };
    fs::write(dir.join(SNAPSHOT_FILE), serde_json::to_vec_pretty(&header)?)?;
    files.push(SNAPSHOT_FILE.to_string());
    files
        .into_iter()
        .map(|f| Ok((f.clone(), file_digest(&dir.join(&f))?)))
        .collect()
}

/// Persist validated snapshots of one instance and register them in the
/// manifest. New stages may be added to an existing instance; rewriting a
/// stored stage is a collision.
pub fn write_instance(
    root: &Path,
    spec: &InstanceSpec,
    snapshots: &[StageSnapshot],
) -> Result<ManifestEntry, StoreError> {
    let stages: Vec<Stage> = snapshots.iter().map(|s| s.stage).collect();
    if !is_canonical_order(&stages) {
        return Err(StoreError::StageOrder);
    }
    for s in snapshots {
        let v = validate_snapshot(s);
        if !v.is_empty() {
            return Err(StoreError::Validation {
                stage: s.stage,
                violations: v,
            });
        }
    }
    let id = instance_id(spec);
    let _guard = MANIFEST_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    let mut manifest = DatasetManifest::load(root)?;
    let mut entry = manifest
        .instances
        .get(&id)
        .cloned()
        .unwrap_or_else(|| ManifestEntry {
            id: id.clone(),
            design: spec.design.clone(),
            pdk: spec.pdk.clone(),
            constraint: spec.constraint,
            constraint_hash: constraint_hash(spec.constraint.as_ref()),
            anchor: spec.anchor,
            k: spec.k,
            stages: Vec::new(),
        });
    for s in snapshots {
        let rel = format!("{id}/{}", s.stage.as_str());
        if entry.stage(s.stage).is_some() || root.join(&rel).exists() {
            return Err(StoreError::PathCollision(rel));
        }
    }
    for s in snapshots {
        let rel = format!("{id}/{}", s.stage.as_str());
        let digests = write_stage(&root.join(&rel), s)?;
        entry.stages.push(StageEntry {
            stage: s.stage,
            run_status: s.run_status.clone(),
            path: rel,
            digests,
        });
    }
    entry.stages.sort_by_key(|s| s.stage);
    manifest.instances.insert(id, entry.clone());
    manifest.save(root)?;
    Ok(entry)
}

/// Manifest entry plus on-demand stage loading.
#[derive(Clone, Debug)]
pub struct InstanceBundle {
    pub root: PathBuf,
    pub entry: ManifestEntry,
}

/// Open one instance; every referenced file must exist.
pub fn read_instance(root: &Path, id: &str) -> Result<InstanceBundle, StoreError> {
    let manifest = DatasetManifest::load(root)?;
    let entry = manifest
        .instances
        .get(id)
        .cloned()
        .ok_or_else(|| StoreError::NotFound(id.to_string()))?;
    if !is_canonical_order(&entry.stage_list()) {
        return Err(StoreError::StageOrder);
    }
    for s in &entry.stages {
        for f in s.digests.keys() {
            let p = root.join(&s.path).join(f);
            if !p.exists() {
                return Err(StoreError::MissingArtifact(p));
            }
        }
    }
    Ok(InstanceBundle {
        root: root.to_path_buf(),
        entry,
    })
}

/// Every instance listed in the manifest at `root`.
pub fn read_dataset(root: &Path) -> Result<Vec<InstanceBundle>, StoreError> {
    let manifest = DatasetManifest::load(root)?;
    manifest
        .instances
        .keys()
        .map(|id| read_instance(root, id))
        .collect()
}

impl InstanceBundle {
    pub fn id(&self) -> &str {
        &self.entry.id
    }

    pub fn stages(&self) -> Vec<Stage> {
        self.entry.stage_list()
    }

    fn stage_entry(&self, stage: Stage) -> Result<&StageEntry, StoreError> {
        self.entry
            .stage(stage)
            .ok_or_else(|| StoreError::StageNotFound {
                id: self.entry.id.clone(),
                stage,
            })
    }

    fn verified(&self, se: &StageEntry, file: &str) -> Result<PathBuf, StoreError> {
        let path = self.root.join(&se.path).join(file);
        let expected = se
            .digests
            .get(file)
            .ok_or_else(|| StoreError::Corrupt(format!("{file} is not listed in the manifest")))?;
        let actual = file_digest(&path)?;
        if &actual != expected {
            return Err(StoreError::DigestMismatch {
                path,
                expected: expected.clone(),
                actual,
            });
        }
        Ok(path)
    }

    /// One entity table of a stage, digest-checked.
    pub fn table(&self, stage: Stage, kind: EntityKind) -> Result<Table, StoreError> {
        let se = self.stage_entry(stage)?;
        Table::read_parquet(&self.verified(se, &kind.file_name())?)
    }

    /// Load, digest-check and re-validate one stage.
    pub fn load_stage(&self, stage: Stage) -> Result<StageSnapshot, StoreError> {
        let se = self.stage_entry(stage)?;
        for f in se.digests.keys() {
            self.verified(se, f)?;
        }
        let dir = self.root.join(&se.path);
        let header: SnapshotHeader = serde_json::from_slice(&fs::read(dir.join(SNAPSHOT_FILE))?)?;
        let read = |k: EntityKind| Table::read_parquet(&dir.join(k.file_name()));
        let netlist = NetlistGraph {
            context: header.context,
            gates: codec::gates_from(&read(EntityKind::Gates)?)?,
            pins: codec::pins_from(&read(EntityKind::Pins)?)?,
            nets: codec::nets_from(&read(EntityKind::Nets)?, &read(EntityKind::Wires)?)?,
            ports: codec::ports_from(&read(EntityKind::Ports)?)?,
        };
        let timing_paths = codec::paths_from(&read(EntityKind::Paths)?, &read(EntityKind::Arcs)?)?;
        let (summary, metrics) = codec::metrics_from(&read(EntityKind::Metrics)?)?;
        let map_dir = dir.join(MAP_DIR);
        let mut maps = MapSet::default();
        for name in &header.binary_maps {
            let sc = maps::read_sidecar(&map_dir, name)?;
            maps.binary
                .insert(name.clone(), maps::read_binary(&map_dir, &sc)?);
        }
        for name in &header.scalar_maps {
            let sc = maps::read_sidecar(&map_dir, name)?;
            maps.scalar
                .insert(name.clone(), maps::read_scalar(&map_dir, &sc)?);
        }
        let snap = StageSnapshot {
            stage: header.stage,
            run_status: header.run_status,
            netlist,
            summary,
            clock_source: header.clock_source,
            clock_tree: header.clock_tree,
            pdn: header.pdn,
            timing_paths,
            metrics,
            maps,
        };
        if snap.stage != stage {
            return Err(StoreError::Corrupt(format!(
                "{} holds stage {}",
                se.path, snap.stage
            )));
        }
        let v = validate_snapshot(&snap);
        if !v.is_empty() {
            return Err(StoreError::Validation {
                stage,
                violations: v,
            });
        }
        Ok(snap)
    }

    /// Every stored stage, loaded.
    pub fn load_all(&self) -> Result<DatasetInstance, StoreError> {
        let snapshots = self
            .stages()
            .into_iter()
            .map(|s| Ok((s, self.load_stage(s)?)))
            .collect::<Result<BTreeMap<_, _>, StoreError>>()?;
        Ok(DatasetInstance {
            id: self.entry.id.clone(),
            design: self.entry.design.clone(),
            pdk: self.entry.pdk.clone(),
            constraint: self.entry.constraint,
            snapshots,
        })
    }
}

fn empty_table(kind: EntityKind) -> Table {
    match kind {
        EntityKind::Gates => codec::gates_table(&[]),
        EntityKind::Pins => codec::pins_table(&[]),
        EntityKind::Nets => codec::nets_table(&[]),
        EntityKind::Wires => codec::wires_table(&[]),
        EntityKind::Ports => codec::ports_table(&[]),
        EntityKind::Paths => codec::paths_table(&[]),
        EntityKind::Arcs => codec::arcs_table(&[]),
        EntityKind::Metrics => {
            codec::metrics_table(&Default::default(), &Default::default()).empty_like()
        }
    }
}

fn with_keys(t: &Table, b: &InstanceBundle, stage: Stage) -> Table {
    let n = t.num_rows();
    let key = |v: &str| Column::Str(vec![Some(v.to_string()); n]);
    let mut out = Table::new();
    out.push("design", key(&b.entry.design))
        .push("pdk", key(&b.entry.pdk))
        .push("instance_id", key(&b.entry.id))
        .push("stage", key(stage.as_str()));
    out.columns.extend(t.columns.iter().cloned());
    out
}

/// Rows of one entity kind at one stage across instances, with
/// `(design, pdk, instance_id, stage)` key columns in front. Instances
/// without the stage are skipped; kinds outside their window give no rows.
pub fn export_tables(
    instances: &[InstanceBundle],
    stage: Stage,
    kind: EntityKind,
) -> Result<Table, StoreError> {
    let placeholder = InstanceBundle {
        root: PathBuf::new(),
        entry: ManifestEntry {
            id: String::new(),
            design: String::new(),
            pdk: String::new(),
            constraint: None,
            constraint_hash: String::new(),
            anchor: Anchor::Core,
            k: 1,
            stages: Vec::new(),
        },
    };
    let mut out = with_keys(&empty_table(kind), &placeholder, stage);
    if kind == EntityKind::Wires {
        let w = window("net.length").expect("known attribute");
        if !w.contains(stage) {
            log::warn!("wires are available only at {w}; {stage} export is empty");
            return Ok(out);
        }
    }
    for b in instances {
        if b.entry.stage(stage).is_none() {
            log::warn!("instance {} has no {stage} stage; skipped", b.id());
            continue;
        }
        let t = b.table(stage, kind)?;
        out.append(&with_keys(&t, b, stage))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_stable_and_safe() {
        let spec = InstanceSpec {
            design: "aes/core".into(),
            pdk: "NG45".into(),
            constraint: None,
            anchor: Anchor::Core,
            k: 50,
        };
        let a = instance_id(&spec);
        assert_eq!(a, instance_id(&spec));
        assert!(a.starts_with("aes_core__NG45__"));
        assert_eq!(a.len(), "aes_core__NG45__".len() + 12);
    }

    #[test]
    fn manifest_save_is_atomic_rename() {
        let dir = tempfile::tempdir().unwrap();
        DatasetManifest::default().save(dir.path()).unwrap();
        let names: Vec<String> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        assert_eq!(names, vec![MANIFEST_FILE.to_string()]);
        assert_eq!(
            DatasetManifest::load(dir.path()).unwrap(),
            DatasetManifest::default()
        );
    }

    #[test]
    fn unknown_id_is_not_found() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            read_instance(dir.path(), "nope"),
            Err(StoreError::NotFound(_))
        ));
    }
}
