//! Per-edge length features and their on-disk formats.
//!
//! A layout maps every edge to its Euclidean length; stacking the length
//! vectors of the k sampled layouts gives an m x k feature matrix per graph
//! (row = edge in canonical order, column = layout index). These are the
//! raw features a downstream learned projection consumes, so no
//! normalization is applied here.
//!
//! The binary `.delf` format stores 64-bit little-endian floats and is
//! bit-exact under round-trip; a CSV mirror at 17 significant digits decodes
//! to the same values.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::Layout;
use crate::sampler::LayoutEnsemble;

const DELF_MAGIC: &[u8; 4] = b"DELF";
const DELF_VERSION: u32 = 1;

/// Euclidean edge lengths of one layout, in canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLengthVector {
    pub graph_id: String,
    pub layout_index: usize,
    pub lengths: Vec<f64>,
}

/// m x k feature matrix for one graph: one row per canonical edge, one
/// column per layout. Stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFeatureTensor {
    pub graph_id: String,
    pub node_count: usize,
    pub edge_index: Vec<(u32, u32)>,
    values: Vec<f64>,
    num_layouts: usize,
}

impl EdgeFeatureTensor {
    pub fn edge_count(&self) -> usize {
        self.edge_index.len()
    }

    pub fn layout_count(&self) -> usize {
        self.num_layouts
    }

    /// Lengths of layout `j`, one per edge.
    pub fn column(&self, j: usize) -> &[f64] {
        let m = self.edge_count();
        &self.values[j * m..(j + 1) * m]
    }

    pub fn value(&self, edge: usize, layout: usize) -> f64 {
        self.values[layout * self.edge_count() + edge]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Euclidean length of every edge under one layout.
pub fn edge_lengths(layout: &Layout, g: &Graph, layout_index: usize) -> Result<EdgeLengthVector> {
    if layout.positions.node_count() != g.node_count() {
        return Err(Error::Mismatch(format!(
            "layout holds {} nodes, graph {} has {}",
            layout.positions.node_count(),
            g.graph_id(),
            g.node_count()
        )));
    }
    let lengths = g
        .edges()
        .iter()
        .map(|&(u, v)| layout.positions.distance(u as usize, v as usize))
        .collect();
    Ok(EdgeLengthVector {
        graph_id: g.graph_id().to_string(),
        layout_index,
        lengths,
    })
}

/// Assemble the m x k feature matrix from an ensemble, column by column.
pub fn feature_tensor(ens: &LayoutEnsemble, g: &Graph) -> Result<EdgeFeatureTensor> {
    if ens.graph_id != g.graph_id() {
        return Err(Error::Mismatch(format!(
            "ensemble belongs to {}, not {}",
            ens.graph_id,
            g.graph_id()
        )));
    }
    if ens.is_empty() {
        return Err(Error::Mismatch(format!(
            "ensemble for {} holds no layouts",
            ens.graph_id
        )));
    }
    let m = g.edge_count();
    let k = ens.len();
    let mut values = Vec::with_capacity(m * k);
    for (j, layout) in ens.layouts.iter().enumerate() {
        let column = edge_lengths(layout, g, j)?;
        values.extend_from_slice(&column.lengths);
    }
    Ok(EdgeFeatureTensor {
        graph_id: g.graph_id().to_string(),
        node_count: g.node_count(),
        edge_index: g.edges().to_vec(),
        values,
        num_layouts: k,
    })
}

struct CountingWriter<W: Write> {
    inner: W,
    hasher: crc32fast::Hasher,
}

impl<W: Write> CountingWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> Result<()> {
        self.hasher.update(bytes);
        self.inner.write_all(bytes)?;
        Ok(())
    }

    fn put_u32(&mut self, v: u32) -> Result<()> {
        self.put(&v.to_le_bytes())
    }

    fn put_f64(&mut self, v: f64) -> Result<()> {
        self.put(&v.to_le_bytes())
    }
}

/// Write feature tensors to the binary columnar `.delf` format.
pub fn write_features(path: &Path, tensors: &[EdgeFeatureTensor]) -> Result<()> {
    let file = File::create(path)?;
    let mut w = CountingWriter {
        inner: BufWriter::new(file),
        hasher: crc32fast::Hasher::new(),
    };
    w.put(DELF_MAGIC)?;
    w.put_u32(DELF_VERSION)?;
    w.put_u32(tensors.len() as u32)?;
    for t in tensors {
        let id = t.graph_id.as_bytes();
        w.put_u32(id.len() as u32)?;
        w.put(id)?;
        w.put_u32(t.node_count as u32)?;
        w.put_u32(t.edge_count() as u32)?;
        w.put_u32(t.layout_count() as u32)?;
        for &(u, v) in &t.edge_index {
            w.put_u32(u)?;
            w.put_u32(v)?;
        }
        for &value in &t.values {
            w.put_f64(value)?;
        }
    }
    let checksum = w.hasher.clone().finalize();
    w.inner.write_all(&checksum.to_le_bytes())?;
    w.inner.flush()?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.data.len() {
            return Err(Error::Format("truncated feature file".into()));
        }
        let slice = &self.data[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Read a `.delf` file back, verifying magic, version, and checksum.
pub fn read_features(path: &Path) -> Result<Vec<EdgeFeatureTensor>> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.len() < 12 + 4 {
        return Err(Error::Format("truncated feature file".into()));
    }
    let (payload, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().unwrap());
    let actual = crc32fast::hash(payload);
    if stored != actual {
        return Err(Error::Format(format!(
            "checksum mismatch: stored {stored:#010x}, computed {actual:#010x}"
        )));
    }

    let mut c = Cursor {
        data: payload,
        pos: 0,
    };
    if c.take(4)? != DELF_MAGIC {
        return Err(Error::Format("bad magic bytes, not a .delf file".into()));
    }
    let version = c.u32()?;
    if version != DELF_VERSION {
        return Err(Error::Format(format!(
            "unsupported feature file version {version} (expected {DELF_VERSION})"
        )));
    }
    let graph_count = c.u32()? as usize;
    let mut tensors = Vec::with_capacity(graph_count);
    for _ in 0..graph_count {
        let id_len = c.u32()? as usize;
        let graph_id = String::from_utf8(c.take(id_len)?.to_vec())
            .map_err(|_| Error::Format("graph id is not valid UTF-8".into()))?;
        let node_count = c.u32()? as usize;
        let m = c.u32()? as usize;
        let k = c.u32()? as usize;
        let mut edge_index = Vec::with_capacity(m);
        for _ in 0..m {
            let u = c.u32()?;
            let v = c.u32()?;
            edge_index.push((u, v));
        }
        let mut values = Vec::with_capacity(m * k);
        for _ in 0..m * k {
            values.push(c.f64()?);
        }
        tensors.push(EdgeFeatureTensor {
            graph_id,
            node_count,
            edge_index,
            values,
            num_layouts: k,
        });
    }
    if c.pos != payload.len() {
        return Err(Error::Format("trailing bytes after last graph".into()));
    }
    Ok(tensors)
}

/// CSV mirror: one row per edge with columns
/// `graph_id,u,v,len_0,...,len_{k-1}`, floats at 17 significant digits.
pub fn write_features_csv(path: &Path, tensors: &[EdgeFeatureTensor]) -> Result<()> {
    let k = match tensors.first() {
        Some(t) => t.layout_count(),
        None => 0,
    };
    if tensors.iter().any(|t| t.layout_count() != k) {
        return Err(Error::Mismatch(
            "cannot mirror tensors with differing layout counts to one CSV".into(),
        ));
    }
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "graph_id,u,v")?;
    for j in 0..k {
        write!(w, ",len_{j}")?;
    }
    writeln!(w)?;
    for t in tensors {
        for (row, &(u, v)) in t.edge_index.iter().enumerate() {
            write!(w, "{},{u},{v}", t.graph_id)?;
            for j in 0..k {
                write!(w, ",{:.16e}", t.value(row, j))?;
            }
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Decode the CSV mirror. Node counts are not stored in the CSV, so they are
/// inferred as `max id + 1`.
pub fn read_features_csv(path: &Path) -> Result<Vec<EdgeFeatureTensor>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV file".into()))?;
    let k = header.split(',').count().saturating_sub(3);

    struct Partial {
        graph_id: String,
        edges: Vec<(u32, u32)>,
        rows: Vec<Vec<f64>>,
    }
    let mut order: Vec<Partial> = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != k + 3 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected {} fields, got {}", k + 3, fields.len()),
            });
        }
        let parse_err = |what: &str| Error::Parse {
            line: idx + 1,
            message: format!("invalid {what}"),
        };
        let graph_id = fields[0].to_string();
        let u: u32 = fields[1].parse().map_err(|_| parse_err("node id"))?;
        let v: u32 = fields[2].parse().map_err(|_| parse_err("node id"))?;
        let mut row = Vec::with_capacity(k);
        for f in &fields[3..] {
            row.push(f.parse::<f64>().map_err(|_| parse_err("length"))?);
        }
        match order.last_mut() {
            Some(p) if p.graph_id == graph_id => {
                p.edges.push((u, v));
                p.rows.push(row);
            }
            _ => order.push(Partial {
                graph_id,
                edges: vec![(u, v)],
                rows: vec![row],
            }),
        }
    }

    Ok(order
        .into_iter()
        .map(|p| {
            let m = p.edges.len();
            let node_count = p
                .edges
                .iter()
                .map(|&(u, v)| u.max(v) as usize + 1)
                .max()
                .unwrap_or(0);
            let mut values = Vec::with_capacity(m * k);
            for j in 0..k {
                for row in &p.rows {
                    values.push(row[j]);
                }
            }
            EdgeFeatureTensor {
                graph_id: p.graph_id,
                node_count,
                edge_index: p.edges,
                values,
                num_layouts: k,
            }
        })
        .collect())
}
