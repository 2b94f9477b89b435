//! The `planar_code` interchange format.
//!
//! A file starts with `>>planar_code<<` (optionally `>>planar_code le<<` or
//! `>>planar_code be<<`). Each record is a vertex count followed, for every
//! vertex in turn, by its 1-based neighbours in rotation order and a 0
//! terminator. If the vertex count byte is 0, the record switches to 16-bit
//! entries: the real count follows as a 16-bit word, and so does every
//! neighbour and terminator. Words are little-endian unless the header says
//! `be`.

use log::warn;
use thiserror::Error;

use crate::graph::Graph;
use crate::patch::{OuterFace, PatchError, PlanarPatch};

const HEADER: &[u8] = b">>planar_code<<";
const HEADER_LE: &[u8] = b">>planar_code le<<";
const HEADER_BE: &[u8] = b">>planar_code be<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("missing or malformed planar_code header")]
    MalformedHeader,
    #[error("record {record} is truncated")]
    TruncatedRecord { record: usize },
}

/// Parsed records: valid patches with their 0-based record index, and the
/// records rejected as not being patches.
#[derive(Debug, Clone, Default)]
pub struct PlanarCodeBatch {
    pub patches: Vec<(usize, PlanarPatch)>,
    pub skipped: Vec<(usize, PatchError)>,
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    big_endian: bool,
}

impl Reader<'_> {
    fn byte(&mut self) -> Option<usize> {
        let b = *self.bytes.get(self.pos)?;
        self.pos += 1;
        Some(b as usize)
    }

    fn word(&mut self) -> Option<usize> {
        let pair = self.bytes.get(self.pos..self.pos + 2)?;
        self.pos += 2;
        let w = if self.big_endian {
            u16::from_be_bytes([pair[0], pair[1]])
        } else {
            u16::from_le_bytes([pair[0], pair[1]])
        };
        Some(w as usize)
    }
}

/// Rotation lists of one record, 0-based.
fn read_record(r: &mut Reader<'_>) -> Option<Vec<Vec<usize>>> {
    let mut wide = false;
    let mut n = r.byte()?;
    if n == 0 {
        wide = true;
        n = r.word()?;
    }
    let mut rotation = Vec::with_capacity(n);
    for _ in 0..n {
        let mut list = Vec::new();
        loop {
            let v = if wide { r.word()? } else { r.byte()? };
            if v == 0 {
                break;
            }
            list.push(v - 1);
        }
        rotation.push(list);
    }
    Some(rotation)
}

fn to_patch(rotation: Vec<Vec<usize>>) -> Result<PlanarPatch, PatchError> {
    let n = rotation.len();
    for (v, list) in rotation.iter().enumerate() {
        if let Some(&u) = list.iter().find(|&&u| u >= n || !rotation[u].contains(&v)) {
            return Err(PatchError::InconsistentEmbedding(format!(
                "edge {v} -> {u} has no reverse"
            )));
        }
    }
    let edges = rotation
        .iter()
        .enumerate()
        .flat_map(|(v, list)| list.iter().map(move |&u| (v, u)));
    let graph = Graph::new(n, edges)?;
    let first_dart = rotation
        .first()
        .and_then(|l| l.first())
        .map(|&u| (0, u));
    match PlanarPatch::new(graph.clone(), rotation.clone(), OuterFace::Detect) {
        // a bare cycle: both faces qualify, take the one through the first dart
        Err(PatchError::AmbiguousOuterFace { .. })
            if graph.degrees().iter().all(|&d| d == 2) && first_dart.is_some() =>
        {
            let (u, v) = first_dart.unwrap();
            PlanarPatch::new(graph, rotation, OuterFace::Dart(u, v))
        }
        other => other,
    }
}

/// Parses a whole `planar_code` file. Records that are not patches are
/// skipped, logged and reported.
pub fn read_planar_code(bytes: &[u8]) -> Result<PlanarCodeBatch, IngestError> {
    let (start, big_endian) = if bytes.starts_with(HEADER) {
        (HEADER.len(), false)
    } else if bytes.starts_with(HEADER_LE) {
        (HEADER_LE.len(), false)
    } else if bytes.starts_with(HEADER_BE) {
        (HEADER_BE.len(), true)
    } else {
        return Err(IngestError::MalformedHeader);
    };
    let mut reader = Reader {
        bytes,
        pos: start,
        big_endian,
    };
    let mut batch = PlanarCodeBatch::default();
    let mut record = 0;
    while reader.pos < bytes.len() {
        let rotation = read_record(&mut reader).ok_or(IngestError::TruncatedRecord { record })?;
        match to_patch(rotation) {
            Ok(p) => batch.patches.push((record, p)),
            Err(e) => {
                warn!("planar_code record {record} skipped: {e}");
                batch.skipped.push((record, e));
            }
        }
        record += 1;
    }
    Ok(batch)
}

/// Encodes rotation systems as a little-endian `planar_code` file.
pub fn write_planar_code<'a, I>(rotations: I) -> Vec<u8>
where
    I: IntoIterator<Item = &'a [Vec<usize>]>,
{
    let mut out = HEADER.to_vec();
    for rotation in rotations {
        let n = rotation.len();
        let wide = n > 255;
        let put = |out: &mut Vec<u8>, v: usize| {
            if wide {
                out.extend_from_slice(&(v as u16).to_le_bytes());
            } else {
                out.push(v as u8);
            }
        };
        if wide {
            out.push(0);
        }
        put(&mut out, n);
        for list in rotation {
            for &u in list {
                put(&mut out, u + 1);
            }
            put(&mut out, 0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Polyhex, DIRECTIONS};

    fn hexagon_record() -> Vec<u8> {
        let mut bytes = HEADER.to_vec();
        bytes.push(6);
        for v in 0..6u8 {
            bytes.extend([(v + 1) % 6 + 1, (v + 5) % 6 + 1, 0]);
        }
        bytes
    }

    #[test]
    fn one_hexagon() {
        let batch = read_planar_code(&hexagon_record()).unwrap();
        assert_eq!(batch.patches.len(), 1);
        assert_eq!(batch.patches[0].1.order(), 6);
        assert!(batch.skipped.is_empty());
    }

    #[test]
    fn empty_after_header() {
        let batch = read_planar_code(HEADER).unwrap();
        assert!(batch.patches.is_empty());
    }

    #[test]
    fn header_and_truncation_errors() {
        assert!(matches!(read_planar_code(b"planar"), Err(IngestError::MalformedHeader)));
        let mut bytes = hexagon_record();
        bytes.pop();
        assert!(matches!(
            read_planar_code(&bytes),
            Err(IngestError::TruncatedRecord { record: 0 })
        ));
    }

    #[test]
    fn non_patch_records_are_skipped() {
        // K4 is planar but has no degree-2 vertex, so every face qualifies
        let k4: Vec<Vec<usize>> = vec![vec![1, 3, 2], vec![0, 2, 3], vec![0, 3, 1], vec![0, 1, 2]];
        let hex: Vec<Vec<usize>> = (0..6).map(|v| vec![(v + 1) % 6, (v + 5) % 6]).collect();
        let bytes = write_planar_code([k4.as_slice(), hex.as_slice()]);
        let batch = read_planar_code(&bytes).unwrap();
        assert_eq!(batch.patches.len(), 1);
        assert_eq!(batch.patches[0].0, 1);
        assert_eq!(batch.skipped.len(), 1);
    }

    #[test]
    fn round_trip_of_lattice_patches() {
        let mut cells = DIRECTIONS.to_vec();
        cells.push((0, 0));
        let coronene = Polyhex::new(cells).unwrap().to_patch().unwrap();
        let naph = Polyhex::new([(0, 0), (1, 0)]).unwrap().to_patch().unwrap();
        let bytes = write_planar_code([coronene.rotation(), naph.rotation()]);
        let batch = read_planar_code(&bytes).unwrap();
        assert_eq!(batch.patches[0].1.rotation(), coronene.rotation());
        assert_eq!(batch.patches[0].1.outer_walk().len(), coronene.perimeter());
        assert_eq!(batch.patches[1].1.graph(), naph.graph());
    }

    #[test]
    fn wide_records() {
        let n = 300;
        let cycle: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect();
        let bytes = write_planar_code([cycle.as_slice()]);
        assert_eq!(bytes[HEADER.len()], 0);
        let batch = read_planar_code(&bytes).unwrap();
        assert_eq!(batch.patches[0].1.order(), n);
    }
}
