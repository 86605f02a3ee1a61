//! Seed files for `subdivide --seeds`.
//!
//! Q scheme: `{"row": [[[x, y, z, w], ...], ...], "col": [...]}`, where
//! `row[i]` is the polyline on edge (i,0)→(i+1,0) and `col[j]` the one on
//! (0,j)→(0,j+1), endpoints included.
//!
//! Circular scheme: `{"u": [arc, ...], "v": [arc, ...]}` with
//! `arc = {"start": [x, y, z], "end": [x, y, z], "tangent": [x, y, z]}`.

use std::path::Path;

use multinet::projective::{HPoint, Vec3};
use multinet::subdivision::{CircArc, SeedArcs, SeedPolicy};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::{input, Fatal, Outcome};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Polylines {
    row: Vec<Vec<Vec<f64>>>,
    col: Vec<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Arc {
    start: [f64; 3],
    end: [f64; 3],
    tangent: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Arcs {
    u: Vec<Arc>,
    v: Vec<Arc>,
}

fn parse<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = input::read_text(&Some(path.to_path_buf()))?;
    serde_json::from_str(&text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

pub fn polylines(path: &Path, dim: usize) -> Outcome<SeedPolicy> {
    let raw: Polylines = parse(path)?;
    let convert = |polys: Vec<Vec<Vec<f64>>>, what: &str| -> Outcome<Vec<Vec<HPoint>>> {
        polys
            .into_iter()
            .enumerate()
            .map(|(k, poly)| {
                poly.iter()
                    .map(|c| {
                        if c.len() != dim {
                            return Err(Fatal(format!("{what}[{k}]: expected {dim} coordinates, got {}", c.len())));
                        }
                        HPoint::new(c).map_err(|e| Fatal(format!("{what}[{k}]: {e}")))
                    })
                    .collect()
            })
            .collect()
    };
    Ok(SeedPolicy::Given {
        row: convert(raw.row, "row")?,
        col: convert(raw.col, "col")?,
    })
}

pub fn arcs(path: &Path) -> Outcome<SeedArcs> {
    let raw: Arcs = parse(path)?;
    let convert = |arcs: Vec<Arc>| -> Outcome<Vec<CircArc>> {
        arcs.iter()
            .map(|a| {
                Ok(CircArc::new(
                    Vec3::from(a.start),
                    Vec3::from(a.end),
                    Vec3::from(a.tangent),
                )?)
            })
            .collect()
    };
    Ok(SeedArcs {
        u: convert(raw.u)?,
        v: convert(raw.v)?,
    })
}
