//! JSON serialization of nets and OBJ mesh export.
//!
//! A net file is one JSON object:
//!
//! ```json
//! { "kind": "point_net", "ambient": "RP3", "dims": [2, 2],
//!   "meta": { "seed": 7 },
//!   "data": [[0, 0, 0, 1], [1, 0, 0, 1], [0, 1, 0, 1], [1, 1, 0, 1]] }
//! ```
//!
//! `data` is row-major. Lines of a `line_grid` are stored as the twelve
//! coordinates of two spanning points; a vertex at infinity of an `E3`
//! net is the empty array.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{Ambient, EuclidNet, Grid, IsoLineGrid, LineModel, PlaneNet, PointNet};
use crate::projective::{EPoint, HPoint, ProjLine, Vec3};

/// Optional provenance attached to a net file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetData {
    Points(PointNet),
    Planes(PlaneNet),
    Lines(IsoLineGrid),
    Euclid(EuclidNet),
}

impl NetData {
    pub fn kind(&self) -> &'static str {
        match self {
            NetData::Points(_) | NetData::Euclid(_) => "point_net",
            NetData::Planes(_) => "plane_net",
            NetData::Lines(_) => "line_grid",
        }
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            NetData::Points(n) => n.ambient(),
            NetData::Planes(_) => Ambient::RP3,
            NetData::Lines(g) => g.model().ambient(),
            NetData::Euclid(_) => Ambient::E3,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            NetData::Points(n) => n.dims(),
            NetData::Planes(n) => n.dims(),
            NetData::Lines(g) => g.dims(),
            NetData::Euclid(n) => n.dims(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetDocument {
    pub net: NetData,
    pub meta: Option<Meta>,
}

impl NetDocument {
    pub fn new(net: NetData) -> Self {
        NetDocument { net, meta: None }
    }

    pub fn with_meta(net: NetData, meta: Meta) -> Self {
        NetDocument {
            net,
            meta: Some(meta),
        }
    }
}

/// Shortest-exact-enough decimal: 17 significant digits.
pub fn fmt_f64(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot serialize {x}")));
    }
    Ok(format!("{x:.16e}"))
}

fn push_coords(out: &mut String, coords: &[f64]) -> Result<()> {
    out.push('[');
    for (k, c) in coords.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_f64(*c)?);
    }
    out.push(']');
    Ok(())
}

fn rows(net: &NetData) -> Vec<Vec<f64>> {
    match net {
        NetData::Points(n) => n.grid().data().iter().map(|p| p.as_slice().to_vec()).collect(),
        NetData::Planes(n) => n.grid().data().iter().map(|p| p.as_slice().to_vec()).collect(),
        NetData::Lines(g) => g
            .grid()
            .data()
            .iter()
            .map(|l| [l.a.as_slice(), l.b.as_slice()].concat())
            .collect(),
        NetData::Euclid(n) => n
            .grid()
            .data()
            .iter()
            .map(|p| match p {
                EPoint::Finite(v) => vec![v.x, v.y, v.z],
                EPoint::Infinity => Vec::new(),
            })
            .collect(),
    }
}

pub fn to_json_string(doc: &NetDocument) -> Result<String> {
    let (nu, nv) = doc.net.dims();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"kind\": \"{}\",", doc.net.kind());
    let _ = writeln!(out, "  \"ambient\": \"{}\",", doc.net.ambient());
    let _ = writeln!(out, "  \"dims\": [{nu}, {nv}],");
    if let Some(meta) = &doc.meta {
        let m = serde_json::to_string(meta).map_err(|e| Error::SchemaViolation(e.to_string()))?;
        let _ = writeln!(out, "  \"meta\": {m},");
    }
    out.push_str("  \"data\": [\n");
    let data = rows(&doc.net);
    for (k, row) in data.iter().enumerate() {
        out.push_str("    ");
        push_coords(&mut out, row)?;
        out.push_str(if k + 1 < data.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

pub fn write_net<W: Write>(mut w: W, doc: &NetDocument) -> Result<()> {
    w.write_all(to_json_string(doc)?.as_bytes())?;
    Ok(())
}

pub fn write_net_file(path: impl AsRef<Path>, doc: &NetDocument) -> Result<()> {
    std::fs::write(path, to_json_string(doc)?)?;
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: String,
    ambient: String,
    dims: [usize; 2],
    data: Vec<Vec<f64>>,
    #[serde(default)]
    meta: Option<Meta>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::SchemaViolation(msg.into())
}

fn entry_err(k: usize, nv: usize, e: Error) -> Error {
    schema(format!("field `data[{k}]` (vertex {}, {}): {e}", k / nv, k % nv))
}

fn expect_len(k: usize, row: &[f64], n: usize) -> Result<()> {
    if row.len() != n {
        return Err(schema(format!(
            "field `data[{k}]`: expected {n} coordinates, found {}",
            row.len()
        )));
    }
    Ok(())
}

pub fn from_json_str(text: &str) -> Result<NetDocument> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let ambient = Ambient::parse(&raw.ambient)
        .ok_or_else(|| schema(format!("field `ambient`: unknown value {:?}", raw.ambient)))?;
    let [nu, nv] = raw.dims;
    if nu == 0 || nv == 0 {
        return Err(schema(format!("field `dims`: [{nu}, {nv}] has a zero entry")));
    }
    if raw.data.len() != nu * nv {
        return Err(schema(format!(
            "field `data`: dims [{nu}, {nv}] need {} entries, found {}",
            nu * nv,
            raw.data.len()
        )));
    }
    fn grid_of<T>(nu: usize, nv: usize, items: Vec<T>) -> Result<Grid<T>> {
        Grid::new(nu, nv, items).map_err(|e| schema(e.to_string()))
    }
    let net = match (raw.kind.as_str(), ambient) {
        ("point_net", Ambient::E3) => {
            let mut pts = Vec::with_capacity(raw.data.len());
            for (k, row) in raw.data.iter().enumerate() {
                pts.push(match row.len() {
                    0 => EPoint::Infinity,
                    3 => EPoint::Finite(Vec3::new(row[0], row[1], row[2])),
                    n => {
                        return Err(schema(format!(
                            "field `data[{k}]`: expected 3 coordinates or [], found {n}"
                        )))
                    }
                });
            }
            NetData::Euclid(EuclidNet::new(grid_of(nu, nv, pts)?))
        }
        ("point_net", _) => {
            let dim = ambient.dim().unwrap_or(0);
            let mut pts = Vec::with_capacity(raw.data.len());
            for (k, row) in raw.data.iter().enumerate() {
                expect_len(k, row, dim)?;
                pts.push(HPoint::new(row).map_err(|e| entry_err(k, nv, e))?);
            }
            NetData::Points(PointNet::new(ambient, grid_of(nu, nv, pts)?).map_err(|e| schema(e.to_string()))?)
        }
        ("plane_net", Ambient::RP3) => {
            let mut pts = Vec::with_capacity(raw.data.len());
            for (k, row) in raw.data.iter().enumerate() {
                expect_len(k, row, 4)?;
                pts.push(HPoint::new(row).map_err(|e| entry_err(k, nv, e))?);
            }
            NetData::Planes(PlaneNet::new(grid_of(nu, nv, pts)?).map_err(|e| schema(e.to_string()))?)
        }
        ("line_grid", Ambient::R42 | Ambient::R33) => {
            let model = if ambient == Ambient::R42 {
                LineModel::Lie
            } else {
                LineModel::Pluecker
            };
            let mut lines = Vec::with_capacity(raw.data.len());
            for (k, row) in raw.data.iter().enumerate() {
                expect_len(k, row, 12)?;
                let line = HPoint::new(&row[..6])
                    .and_then(|a| Ok((a, HPoint::new(&row[6..])?)))
                    .and_then(|(a, b)| ProjLine::new(a, b))
                    .map_err(|e| entry_err(k, nv, e))?;
                lines.push(line);
            }
            NetData::Lines(IsoLineGrid::new(model, grid_of(nu, nv, lines)?).map_err(|e| schema(e.to_string()))?)
        }
        ("plane_net" | "line_grid", a) => {
            return Err(schema(format!(
                "field `ambient`: {a} is not valid for kind {:?}",
                raw.kind
            )))
        }
        (k, _) => return Err(schema(format!("field `kind`: unknown value {k:?}"))),
    };
    Ok(NetDocument {
        net,
        meta: raw.meta,
    })
}

pub fn read_net<R: Read>(mut r: R) -> Result<NetDocument> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    from_json_str(&text)
}

pub fn read_net_file(path: impl AsRef<Path>) -> Result<NetDocument> {
    from_json_str(&std::fs::read_to_string(path)?)
}

/// Anything with Euclidean vertices.
#[derive(Debug, Clone, Copy)]
pub enum Mesh<'a> {
    Points(&'a PointNet),
    Euclid(&'a EuclidNet),
}

impl<'a> From<&'a PointNet> for Mesh<'a> {
    fn from(n: &'a PointNet) -> Self {
        Mesh::Points(n)
    }
}

impl<'a> From<&'a EuclidNet> for Mesh<'a> {
    fn from(n: &'a EuclidNet) -> Self {
        Mesh::Euclid(n)
    }
}

/// Euclidean vertices of a point net: affine coordinates in RP3 (the plane
/// z = 0 for RP2), the Möbius drop in R41.
pub fn euclidean_vertices(net: &PointNet) -> Result<EuclidNet> {
    let grid = match net.ambient() {
        Ambient::RP3 => net.grid().map(|p| p.affine().map_or(EPoint::Infinity, EPoint::Finite)),
        Ambient::RP2 => net.grid().map(|p| {
            let c = p.as_slice();
            if c[2] == 0.0 {
                EPoint::Infinity
            } else {
                EPoint::new(c[0] / c[2], c[1] / c[2], 0.0)
            }
        }),
        Ambient::R41 => return EuclidNet::drop_from(net),
        a => {
            return Err(Error::InvalidArgument(format!(
                "no Euclidean vertices for ambient {a}"
            )))
        }
    };
    Ok(EuclidNet::new(grid))
}

pub fn obj_string<'a>(net: impl Into<Mesh<'a>>) -> Result<String> {
    let owned;
    let net = match net.into() {
        Mesh::Euclid(n) => n,
        Mesh::Points(p) => {
            owned = euclidean_vertices(p)?;
            &owned
        }
    };
    let (nu, nv) = net.dims();
    let mut out = String::new();
    for i in 0..nu {
        for j in 0..nv {
            let v = net.at(i, j).finite().ok_or(Error::InfiniteVertex { i, j })?;
            let _ = writeln!(out, "v {} {} {}", fmt_f64(v.x)?, fmt_f64(v.y)?, fmt_f64(v.z)?);
        }
    }
    let idx = |i: usize, j: usize| i * nv + j + 1;
    for i in 0..nu.saturating_sub(1) {
        for j in 0..nv.saturating_sub(1) {
            let _ = writeln!(
                out,
                "f {} {} {} {}",
                idx(i, j),
                idx(i, j + 1),
                idx(i + 1, j + 1),
                idx(i + 1, j)
            );
        }
    }
    Ok(out)
}

pub fn export_obj<'a, W: Write>(net: impl Into<Mesh<'a>>, mut w: W) -> Result<()> {
    w.write_all(obj_string(net)?.as_bytes())?;
    Ok(())
}

pub fn export_obj_file<'a>(net: impl Into<Mesh<'a>>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, obj_string(net)?)?;
    Ok(())
}
