//! Line-based text formats for graphs and curve systems.
//!
//! ```text
//! graph T1
//! vertex a angle=1/4 index=1
//! vertex b angle=3/4 index=2
//! edge e_ba tail=b head=a genus=1 boundary=0
//! edge e_ab tail=a head=b genus=2 boundary=0
//! ```

use std::collections::HashMap;
use std::fmt::Write;

use crate::angle::Angle;
use crate::curves::{CurveKind, CurveSystem};
use crate::error::{Error, Result};
use crate::graph::{MorseGraph, VertexKind};

fn valid_id(s: &str) -> bool {
    !s.is_empty() && !s.contains(['=', '#']) && !s.chars().any(char::is_whitespace)
}

/// Content lines with their 1-based numbers, comments stripped.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

/// `key=value` fields of a record; every key in `keys` must appear exactly once.
fn fields<'a>(line: usize, words: &[&'a str], keys: &[&str]) -> Result<HashMap<&'a str, &'a str>> {
    let mut map = HashMap::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| Error::parse(line, format!("expected key=value, found {w:?}")))?;
        if !keys.contains(&k) {
            return Err(Error::parse(line, format!("unknown field {k:?}")));
        }
        if map.insert(k, v).is_some() {
            return Err(Error::parse(line, format!("field {k:?} given twice")));
        }
    }
    if let Some(k) = keys.iter().find(|k| !map.contains_key(*k)) {
        return Err(Error::parse(line, format!("missing field {k:?}")));
    }
    Ok(map)
}

fn int<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::parse(line, format!("bad value {v:?} for {key}")))
}

fn id<'a>(line: usize, words: &[&'a str]) -> Result<&'a str> {
    match words.get(1) {
        Some(&w) if valid_id(w) => Ok(w),
        Some(w) => Err(Error::parse(line, format!("invalid id {w:?}"))),
        None => Err(Error::parse(line, "missing id")),
    }
}

fn header<'a>(line: usize, words: &[&'a str], seen: &mut bool) -> Result<&'a str> {
    if *seen {
        return Err(Error::parse(line, "second header line"));
    }
    *seen = true;
    if words.len() != 2 {
        return Err(Error::parse(line, "header takes exactly one name"));
    }
    id(line, words)
}

pub fn parse_graph(text: &str) -> Result<MorseGraph> {
    let mut g = MorseGraph::new("");
    let mut seen = false;
    for (n, words) in lines(text) {
        match words[0] {
            "graph" => g.set_name(header(n, &words, &mut seen)?),
            "vertex" => {
                let name = id(n, &words)?;
                let f = fields(n, &words[2..], &["angle", "index"])?;
                let angle: Angle = f["angle"].parse().map_err(|e: String| Error::parse(n, e))?;
                let kind = match f["index"] {
                    "1" => VertexKind::Index1,
                    "2" => VertexKind::Index2,
                    "regular" => VertexKind::Regular,
                    "0" | "3" => return Err(Error::parse(n, "local extrema (index 0 or 3) are not supported")),
                    other => return Err(Error::parse(n, format!("unknown index {other:?}"))),
                };
                if g.vertex_index(name).is_some() {
                    return Err(Error::parse(n, format!("duplicate vertex id {name}")));
                }
                g.add_vertex(name, angle, kind)?;
            }
            "edge" => {
                let name = id(n, &words)?;
                let f = fields(n, &words[2..], &["tail", "head", "genus", "boundary"])?;
                let end = |k: &str| {
                    g.vertex_index(f[k]).ok_or_else(|| Error::parse(n, format!("unknown vertex id {}", f[k])))
                };
                let (t, h) = (end("tail")?, end("head")?);
                if g.edge_index(name).is_some() {
                    return Err(Error::parse(n, format!("duplicate edge id {name}")));
                }
                let genus = int(n, "genus", f["genus"])?;
                let boundary = int(n, "boundary", f["boundary"])?;
                g.add_edge(name, t, h, genus, boundary)?;
            }
            other => return Err(Error::parse(n, format!("unknown record {other:?}"))),
        }
    }
    if !seen {
        return Err(Error::parse(1, "missing 'graph <name>' header"));
    }
    Ok(g)
}

pub fn print_graph(g: &MorseGraph) -> String {
    let mut s = format!("graph {}\n", g.name());
    for v in g.vertices() {
        writeln!(s, "vertex {} angle={} index={}", v.name, v.angle, v.kind.as_str()).unwrap();
    }
    for e in g.edges() {
        writeln!(
            s,
            "edge {} tail={} head={} genus={} boundary={}",
            e.name,
            g.vertex(e.tail).name,
            g.vertex(e.head).name,
            e.genus,
            e.boundary
        )
        .unwrap();
    }
    s
}

fn flag(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::parse(line, format!("{key} must be 0 or 1"))),
    }
}

pub fn parse_curves(text: &str) -> Result<CurveSystem> {
    let mut cs = CurveSystem::new("");
    let mut seen = false;
    for (n, words) in lines(text) {
        match words[0] {
            "curves" => cs.name = header(n, &words, &mut seen)?.to_string(),
            "region" => {
                let name = id(n, &words)?;
                let f = fields(n, &words[2..], &["euler", "fcomp", "boundary_arcs"])?;
                if cs.region_index(name).is_some() {
                    return Err(Error::parse(n, format!("duplicate region id {name}")));
                }
                if !valid_id(f["fcomp"]) {
                    return Err(Error::parse(n, "invalid fcomp id"));
                }
                let euler = int(n, "euler", f["euler"])?;
                let b = int(n, "boundary_arcs", f["boundary_arcs"])?;
                cs.add_region(name, euler, b, f["fcomp"]).map_err(|e| Error::parse(n, e.to_string()))?;
            }
            "curve" => {
                let name = id(n, &words)?;
                let f = fields(n, &words[2..], &["from", "to", "kind", "disk_in_F", "disk_in_S"])?;
                let end = |k: &str| {
                    cs.region_index(f[k]).ok_or_else(|| Error::parse(n, format!("unknown region id {}", f[k])))
                };
                let (from, to) = (end("from")?, end("to")?);
                if cs.curve_index(name).is_some() {
                    return Err(Error::parse(n, format!("duplicate curve id {name}")));
                }
                let kind = match f["kind"] {
                    "loop" => CurveKind::Loop,
                    "arc" => CurveKind::Arc,
                    other => return Err(Error::parse(n, format!("unknown curve kind {other:?}"))),
                };
                let df = flag(n, "disk_in_F", f["disk_in_F"])?;
                let ds = flag(n, "disk_in_S", f["disk_in_S"])?;
                cs.add_curve(name, from, to, kind, df, ds)?;
            }
            other => return Err(Error::parse(n, format!("unknown record {other:?}"))),
        }
    }
    if !seen {
        return Err(Error::parse(1, "missing 'curves <name>' header"));
    }
    Ok(cs)
}

pub fn print_curves(cs: &CurveSystem) -> String {
    let mut s = format!("curves {}\n", cs.name);
    for r in &cs.regions {
        writeln!(s, "region {} euler={} fcomp={} boundary_arcs={}", r.name, r.euler, r.fcomp, r.boundary_arcs).unwrap();
    }
    for c in &cs.curves {
        writeln!(
            s,
            "curve {} from={} to={} kind={} disk_in_F={} disk_in_S={}",
            c.name,
            cs.regions[c.from].name,
            cs.regions[c.to].name,
            c.kind.as_str(),
            c.disk_in_f as u8,
            c.disk_in_s as u8
        )
        .unwrap();
    }
    s
}
