//! Reading nets and coercing them to the type a command needs.

use std::io::Read;
use std::path::{Path, PathBuf};

use multinet::io::{from_json_str, NetData, NetDocument};
use multinet::net::{Ambient, EuclidNet, IsoLineGrid, PlaneNet, PointNet};
use multinet::projective::{EPoint, HPoint};
use multinet::Error;

use crate::{Fatal, Outcome};

pub fn read_text(path: &Option<PathBuf>) -> Outcome<String> {
    match path.as_deref() {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| Fatal(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

pub fn load(path: &Option<PathBuf>) -> Outcome<NetDocument> {
    Ok(from_json_str(&read_text(path)?)?)
}

/// Projective points; Euclidean nets are embedded affinely in RP3.
pub fn points(net: &NetData) -> Outcome<PointNet> {
    match net {
        NetData::Points(n) => Ok(n.clone()),
        NetData::Euclid(n) => {
            let grid = n.grid().try_map(|i, j, p| match p {
                EPoint::Finite(v) => HPoint::new(&[v.x, v.y, v.z, 1.0]),
                EPoint::Infinity => Err(Error::InfiniteVertex { i, j }),
            })?;
            Ok(PointNet::new(Ambient::RP3, grid)?)
        }
        other => Err(wrong(other, "point_net")),
    }
}

/// Points of R^3 ∪ {∞}; RP3 points are dehomogenized and R41 points
/// dropped from the Möbius quadric.
pub fn euclid(net: &NetData) -> Outcome<EuclidNet> {
    match net {
        NetData::Euclid(n) => Ok(n.clone()),
        NetData::Points(n) if n.ambient() == Ambient::R41 => Ok(EuclidNet::drop_from(n)?),
        NetData::Points(n) if n.ambient() == Ambient::RP3 => Ok(multinet::io::euclidean_vertices(n)?),
        other => Err(wrong(other, "E3, RP3 or R41 point_net")),
    }
}

pub fn planes(net: &NetData) -> Outcome<PlaneNet> {
    match net {
        NetData::Planes(n) => Ok(n.clone()),
        other => Err(wrong(other, "plane_net")),
    }
}

pub fn lines(net: &NetData) -> Outcome<IsoLineGrid> {
    match net {
        NetData::Lines(g) => Ok(g.clone()),
        other => Err(wrong(other, "line_grid")),
    }
}

fn wrong(net: &NetData, want: &str) -> Fatal {
    Fatal(format!("expected a {want}, got a {} in {}", net.kind(), net.ambient()))
}
