//! Binary layout archive: the canonical intermediate between sampling and
//! feature construction. Self-contained (graphs travel with their layouts)
//! and checksummed, like the feature format.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::{EnergyTrace, Layout, LayoutAlgorithm, Positions};
use crate::sampler::LayoutEnsemble;

const DELA_MAGIC: &[u8; 4] = b"DELA";
const DELA_VERSION: u32 = 1;

fn algorithm_code(a: LayoutAlgorithm) -> u8 {
    match a {
        LayoutAlgorithm::FruchtermanReingold => 0,
        LayoutAlgorithm::KamadaKawai => 1,
        LayoutAlgorithm::ArModel => 2,
    }
}

fn algorithm_from_code(c: u8) -> Result<LayoutAlgorithm> {
    match c {
        0 => Ok(LayoutAlgorithm::FruchtermanReingold),
        1 => Ok(LayoutAlgorithm::KamadaKawai),
        2 => Ok(LayoutAlgorithm::ArModel),
        other => Err(Error::Format(format!("unknown algorithm code {other}"))),
    }
}

/// Write graphs together with their sampled ensembles.
pub fn write_archive(path: &Path, entries: &[(Graph, LayoutEnsemble)]) -> Result<()> {
    let mut hasher = crc32fast::Hasher::new();
    let mut w = BufWriter::new(File::create(path)?);
    let mut put = |w: &mut BufWriter<File>, bytes: &[u8]| -> Result<()> {
        hasher.update(bytes);
        w.write_all(bytes)?;
        Ok(())
    };

    put(&mut w, DELA_MAGIC)?;
    put(&mut w, &DELA_VERSION.to_le_bytes())?;
    put(&mut w, &(entries.len() as u32).to_le_bytes())?;
    for (g, ens) in entries {
        let id = g.graph_id().as_bytes();
        put(&mut w, &(id.len() as u32).to_le_bytes())?;
        put(&mut w, id)?;
        put(&mut w, &(g.node_count() as u32).to_le_bytes())?;
        put(&mut w, &(g.edge_count() as u32).to_le_bytes())?;
        for &(u, v) in g.edges() {
            put(&mut w, &u.to_le_bytes())?;
            put(&mut w, &v.to_le_bytes())?;
        }
        let dim = ens
            .layouts
            .first()
            .map(|l| l.positions.dim())
            .unwrap_or(2);
        put(&mut w, &(dim as u32).to_le_bytes())?;
        put(&mut w, &(ens.layouts.len() as u32).to_le_bytes())?;
        for (layout, trace) in ens.layouts.iter().zip(&ens.traces) {
            put(&mut w, &layout.seed.to_le_bytes())?;
            put(&mut w, &(layout.iterations_run as u32).to_le_bytes())?;
            put(&mut w, &[algorithm_code(layout.algorithm)])?;
            put(&mut w, &layout.final_energy.to_le_bytes())?;
            for &v in layout.positions.as_slice() {
                put(&mut w, &v.to_le_bytes())?;
            }
            put(&mut w, &(trace.0.len() as u32).to_le_bytes())?;
            for &v in &trace.0 {
                put(&mut w, &v.to_le_bytes())?;
            }
        }
    }
    let checksum = hasher.finalize();
    w.write_all(&checksum.to_le_bytes())?;
    w.flush()?;
    Ok(())
}

/// Read an archive back.
pub fn read_archive(path: &Path) -> Result<Vec<(Graph, LayoutEnsemble)>> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.len() < 16 {
        return Err(Error::Format("truncated archive".into()));
    }
    let (payload, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().unwrap());
    if stored != crc32fast::hash(payload) {
        return Err(Error::Format("archive checksum mismatch".into()));
    }

    let mut pos = 0usize;
    let take = |pos: &mut usize, len: usize| -> Result<&[u8]> {
        if *pos + len > payload.len() {
            return Err(Error::Format("truncated archive".into()));
        }
        let s = &payload[*pos..*pos + len];
        *pos += len;
        Ok(s)
    };
    let take_u32 = |pos: &mut usize| -> Result<u32> {
        Ok(u32::from_le_bytes(take(pos, 4)?.try_into().unwrap()))
    };
    let take_u64 = |pos: &mut usize| -> Result<u64> {
        Ok(u64::from_le_bytes(take(pos, 8)?.try_into().unwrap()))
    };
    let take_f64 = |pos: &mut usize| -> Result<f64> {
        Ok(f64::from_le_bytes(take(pos, 8)?.try_into().unwrap()))
    };

    if take(&mut pos, 4)? != DELA_MAGIC {
        return Err(Error::Format("bad magic bytes, not a layout archive".into()));
    }
    let version = take_u32(&mut pos)?;
    if version != DELA_VERSION {
        return Err(Error::Format(format!(
            "unsupported archive version {version} (expected {DELA_VERSION})"
        )));
    }
    let graph_count = take_u32(&mut pos)? as usize;
    let mut entries = Vec::with_capacity(graph_count);
    for _ in 0..graph_count {
        let id_len = take_u32(&mut pos)? as usize;
        let graph_id = String::from_utf8(take(&mut pos, id_len)?.to_vec())
            .map_err(|_| Error::Format("graph id is not valid UTF-8".into()))?;
        let n = take_u32(&mut pos)? as usize;
        let m = take_u32(&mut pos)? as usize;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let u = take_u32(&mut pos)?;
            let v = take_u32(&mut pos)?;
            edges.push((u, v));
        }
        let graph = Graph::new(n, edges, graph_id.clone())?;
        let dim = take_u32(&mut pos)? as usize;
        let k = take_u32(&mut pos)? as usize;
        let mut layouts = Vec::with_capacity(k);
        let mut traces = Vec::with_capacity(k);
        for _ in 0..k {
            let seed = take_u64(&mut pos)?;
            let iterations_run = take_u32(&mut pos)? as usize;
            let algorithm = algorithm_from_code(take(&mut pos, 1)?[0])?;
            let final_energy = take_f64(&mut pos)?;
            let mut data = Vec::with_capacity(n * dim);
            for _ in 0..n * dim {
                data.push(take_f64(&mut pos)?);
            }
            let positions = Positions::from_rows(n, dim, data)?;
            let trace_len = take_u32(&mut pos)? as usize;
            let mut trace = Vec::with_capacity(trace_len);
            for _ in 0..trace_len {
                trace.push(take_f64(&mut pos)?);
            }
            layouts.push(Layout {
                positions,
                seed,
                iterations_run,
                final_energy,
                algorithm,
            });
            traces.push(EnergyTrace(trace));
        }
        entries.push((
            graph,
            LayoutEnsemble {
                graph_id,
                layouts,
                traces,
            },
        ));
    }
    if pos != payload.len() {
        return Err(Error::Format("trailing bytes after last graph".into()));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::layout::LayoutParams;
    use crate::sampler::{sample_ensemble, SampleConfig};

    #[test]
    fn archive_round_trip() {
        let g = parse_edge_list("0 1\n1 2\n0 2\n", "tri").unwrap().graph;
        let cfg = SampleConfig {
            layouts_per_graph: 3,
            layout_params: LayoutParams {
                iterations: 5,
                ..LayoutParams::default()
            },
            ..SampleConfig::default()
        };
        let ens = sample_ensemble(&g, &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l.della");
        write_archive(&path, &[(g.clone(), ens.clone())]).unwrap();
        let back = read_archive(&path).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].0, g);
        assert_eq!(back[0].1.graph_id, ens.graph_id);
        for (a, b) in back[0].1.layouts.iter().zip(&ens.layouts) {
            assert_eq!(a.positions, b.positions);
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.final_energy.to_bits(), b.final_energy.to_bits());
        }
        assert_eq!(back[0].1.traces, ens.traces);
    }

    #[test]
    fn corrupted_archive_rejected() {
        let g = parse_edge_list("0 1\n", "p2").unwrap().graph;
        let cfg = SampleConfig {
            layouts_per_graph: 1,
            layout_params: LayoutParams {
                iterations: 2,
                ..LayoutParams::default()
            },
            ..SampleConfig::default()
        };
        let ens = sample_ensemble(&g, &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l.della");
        write_archive(&path, &[(g, ens)]).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 1;
        std::fs::write(&path, &bytes).unwrap();
        assert!(read_archive(&path).is_err());
    }
}
