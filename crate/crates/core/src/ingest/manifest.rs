//! Site manifest CSV: `path,site,view,plant,timestamp` with RFC 3339 times.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{CameraView, IngestError, SequenceManifest};
use crate::record::FrameRecord;

#[derive(Debug, Serialize, Deserialize)]
struct ManifestRow {
    path: String,
    site: String,
    view: String,
    plant: String,
    timestamp: String,
}

fn manifest_err(path: &Path, reason: impl Into<String>) -> IngestError {
    IngestError::Manifest {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Groups rows by site, in order of first appearance. Relative frame paths
/// resolve against the manifest's directory.
pub fn read_manifest_csv(path: &Path, nominal_interval_secs: i64) -> Result<Vec<SequenceManifest>, IngestError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| manifest_err(path, e.to_string()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();

    let mut order: Vec<String> = Vec::new();
    let mut sites: BTreeMap<String, (CameraView, String, Vec<(DateTime<Utc>, PathBuf)>)> = BTreeMap::new();
    for (i, row) in reader.deserialize::<ManifestRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| manifest_err(path, format!("line {line}: {e}")))?;
        if row.site.trim().is_empty() {
            return Err(manifest_err(path, format!("line {line}: empty site id")));
        }
        let view: CameraView = row
            .view
            .parse()
            .map_err(|e: String| manifest_err(path, format!("line {line}: {e}")))?;
        let ts = DateTime::parse_from_rfc3339(row.timestamp.trim())
            .map_err(|e| manifest_err(path, format!("line {line}: timestamp {:?}: {e}", row.timestamp)))?
            .with_timezone(&Utc);
        let frame_path = PathBuf::from(&row.path);
        let frame_path = if frame_path.is_absolute() {
            frame_path
        } else {
            base.join(frame_path)
        };
        let entry = sites.entry(row.site.clone()).or_insert_with(|| {
            order.push(row.site.clone());
            (view, row.plant.clone(), Vec::new())
        });
        if entry.0 != view || entry.1 != row.plant {
            return Err(manifest_err(
                path,
                format!("line {line}: site {} changes view or plant", row.site),
            ));
        }
        entry.2.push((ts, frame_path));
    }

    Ok(order
        .into_iter()
        .map(|site| {
            let (view, plant, mut frames) = sites.remove(&site).expect("site recorded");
            frames.sort();
            let frames = frames
                .into_iter()
                .enumerate()
                .map(|(k, (ts, p))| FrameRecord::new(site.clone(), ts, k, p))
                .collect();
            SequenceManifest {
                site_id: site,
                camera_view: view,
                plant,
                nominal_interval_secs,
                frames,
            }
        })
        .collect())
}

pub fn write_manifest_csv(path: &Path, manifests: &[SequenceManifest]) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| manifest_err(path, e.to_string()))?;
    for m in manifests {
        for f in &m.frames {
            w.serialize(ManifestRow {
                path: f.path.display().to_string(),
                site: m.site_id.clone(),
                view: m.camera_view.to_string(),
                plant: m.plant.clone(),
                timestamp: f.timestamp.to_rfc3339(),
            })
            .map_err(|e| manifest_err(path, e.to_string()))?;
        }
    }
    w.flush().map_err(|e| IngestError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn groups_and_sorts_by_site() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sites.csv");
        fs::write(
            &p,
            "path,site,view,plant,timestamp\n\
             s2/b.jpg,S2-1,Side,Mallow,2022-06-27T10:00:30Z\n\
             s1/a.jpg,S1-0,Top,Rocket,2022-06-14T10:00:00Z\n\
             s2/a.jpg,S2-1,Side,Mallow,2022-06-27T10:00:00Z\n",
        )
        .unwrap();
        let m = read_manifest_csv(&p, 30).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].site_id, "S2-1");
        assert_eq!(m[0].camera_view, CameraView::Side);
        assert_eq!(m[0].frames[0].stem(), "a");
        assert_eq!(m[0].frames[1].sequence_index, 1);
        assert_eq!(m[0].frames[0].path, dir.path().join("s2/a.jpg"));

        let q = dir.path().join("out.csv");
        write_manifest_csv(&q, &m).unwrap();
        assert_eq!(read_manifest_csv(&q, 30).unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sites.csv");
        fs::write(&p, "path,site,view,plant,timestamp\na.jpg,S1-0,Front,Rocket,2022-06-14T10:00:00Z\n").unwrap();
        assert!(read_manifest_csv(&p, 30).is_err());
        fs::write(&p, "path,site,view,plant,timestamp\na.jpg,S1-0,Top,Rocket,yesterday\n").unwrap();
        assert!(read_manifest_csv(&p, 30).is_err());
    }
}
