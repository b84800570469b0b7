//! Gmsh MSH 2.2 ASCII subset: nodes, 2-node lines carrying the boundary
//! physical tag (1–4) and 3-node triangles.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{BoundaryEdge, BoundaryTag, Mesh};
use crate::{Error, Result};

const ELEM_POINT: u32 = 15;
const ELEM_LINE: u32 = 1;
const ELEM_TRIANGLE: u32 = 2;

pub fn read_msh2(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    parse_msh2(&text)
}

fn next_line<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, what: &str) -> Result<(usize, &'a str)> {
    loop {
        match lines.next() {
            Some((i, l)) if l.trim().is_empty() => {
                let _ = i;
                continue;
            }
            Some((i, l)) => return Ok((i + 1, l.trim())),
            None => return Err(Error::Format(format!("unexpected end of file while reading {what}"))),
        }
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Format(format!("line {line}: bad or missing {what}")))
}

pub fn parse_msh2(text: &str) -> Result<Mesh> {
    let mut lines = text.lines().enumerate();
    let mut version_seen = false;
    let mut node_index: HashMap<u64, usize> = HashMap::new();
    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut cells: Vec<[usize; 3]> = Vec::new();
    let mut boundary_edges = Vec::new();
    let mut raw_elements: Vec<(usize, u32, Vec<u32>, Vec<u64>)> = Vec::new();

    while let Some((i, line)) = lines.next() {
        let line = line.trim();
        match line {
            "" => continue,
            "$MeshFormat" => {
                let (ln, l) = next_line(&mut lines, "mesh format")?;
                let mut tok = l.split_whitespace();
                let version = tok.next().unwrap_or("");
                if version != "2.2" {
                    return Err(Error::Format(format!("line {ln}: unsupported MSH version {version:?}, expected 2.2")));
                }
                let file_type: u32 = parse_num(tok.next(), ln, "file type")?;
                if file_type != 0 {
                    return Err(Error::Format("binary MSH files are not supported".into()));
                }
                version_seen = true;
                expect_end(&mut lines, "$EndMeshFormat")?;
            }
            "$Nodes" => {
                if !version_seen {
                    return Err(Error::Format("$Nodes before $MeshFormat".into()));
                }
                let (ln, l) = next_line(&mut lines, "node count")?;
                let count: usize = parse_num(Some(l), ln, "node count")?;
                vertices.reserve(count);
                for _ in 0..count {
                    let (ln, l) = next_line(&mut lines, "node")?;
                    let mut tok = l.split_whitespace();
                    let id: u64 = parse_num(tok.next(), ln, "node id")?;
                    let x: f64 = parse_num(tok.next(), ln, "x")?;
                    let y: f64 = parse_num(tok.next(), ln, "y")?;
                    let z: f64 = match tok.next() {
                        Some(t) => parse_num(Some(t), ln, "z")?,
                        None => 0.0,
                    };
                    if z != 0.0 {
                        return Err(Error::Geometry(format!("line {ln}: node {id} has nonzero z = {z}")));
                    }
                    if node_index.insert(id, vertices.len()).is_some() {
                        return Err(Error::Format(format!("line {ln}: duplicate node id {id}")));
                    }
                    vertices.push([x, y]);
                }
                expect_end(&mut lines, "$EndNodes")?;
            }
            "$Elements" => {
                if !version_seen {
                    return Err(Error::Format("$Elements before $MeshFormat".into()));
                }
                let (ln, l) = next_line(&mut lines, "element count")?;
                let count: usize = parse_num(Some(l), ln, "element count")?;
                for _ in 0..count {
                    let (ln, l) = next_line(&mut lines, "element")?;
                    let mut tok = l.split_whitespace();
                    let _id: u64 = parse_num(tok.next(), ln, "element id")?;
                    let kind: u32 = parse_num(tok.next(), ln, "element type")?;
                    let ntags: usize = parse_num(tok.next(), ln, "tag count")?;
                    let tags = (0..ntags)
                        .map(|_| parse_num::<u32>(tok.next(), ln, "tag"))
                        .collect::<Result<Vec<_>>>()?;
                    let nodes = tok
                        .map(|t| t.parse::<u64>().map_err(|_| Error::Format(format!("line {ln}: bad node reference"))))
                        .collect::<Result<Vec<_>>>()?;
                    raw_elements.push((ln, kind, tags, nodes));
                }
                expect_end(&mut lines, "$EndElements")?;
            }
            s if s.starts_with('$') => {
                // skip unknown sections such as $PhysicalNames
                let end = format!("$End{}", &s[1..]);
                loop {
                    match lines.next() {
                        Some((_, l)) if l.trim() == end => break,
                        Some(_) => continue,
                        None => return Err(Error::Format(format!("unterminated section {s}"))),
                    }
                }
            }
            other => {
                return Err(Error::Format(format!("line {}: unexpected content {other:?}", i + 1)));
            }
        }
    }
    if !version_seen {
        return Err(Error::Format("missing $MeshFormat section".into()));
    }

    let lookup = |id: u64, ln: usize| {
        node_index
            .get(&id)
            .copied()
            .ok_or_else(|| Error::Format(format!("line {ln}: unknown node id {id}")))
    };
    for (ln, kind, tags, nodes) in raw_elements {
        match kind {
            ELEM_LINE => {
                if nodes.len() != 2 {
                    return Err(Error::Format(format!("line {ln}: line element needs 2 nodes")));
                }
                let phys = tags.first().copied().unwrap_or(0);
                let tag = BoundaryTag::from_physical(phys)
                    .ok_or_else(|| Error::Tagging(format!("line {ln}: boundary line has physical tag {phys}, expected 1-4")))?;
                boundary_edges.push(BoundaryEdge { vertices: [lookup(nodes[0], ln)?, lookup(nodes[1], ln)?], tag });
            }
            ELEM_TRIANGLE => {
                if nodes.len() != 3 {
                    return Err(Error::Format(format!("line {ln}: triangle needs 3 nodes")));
                }
                cells.push([lookup(nodes[0], ln)?, lookup(nodes[1], ln)?, lookup(nodes[2], ln)?]);
            }
            ELEM_POINT => {}
            other => return Err(Error::Format(format!("line {ln}: unsupported element type {other}"))),
        }
    }

    let mesh = Mesh { vertices, cells, boundary_edges };
    mesh.validate_topology()?;
    Ok(mesh)
}

fn expect_end<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, end: &str) -> Result<()> {
    let (ln, l) = next_line(lines, end)?;
    if l != end {
        return Err(Error::Format(format!("line {ln}: expected {end}, found {l:?}")));
    }
    Ok(())
}

/// Serializes with 1-based contiguous node numbering and 17 significant digits.
pub fn msh2_string(mesh: &Mesh) -> String {
    let mut s = String::with_capacity(64 * (mesh.vertices.len() + mesh.cells.len()));
    s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
    s.push_str("$PhysicalNames\n5\n1 1 \"G1\"\n1 2 \"G2\"\n1 3 \"G3\"\n1 4 \"G4\"\n2 5 \"domain\"\n$EndPhysicalNames\n");
    let _ = writeln!(s, "$Nodes\n{}", mesh.vertices.len());
    for (i, v) in mesh.vertices.iter().enumerate() {
        let _ = writeln!(s, "{} {:.16e} {:.16e} 0", i + 1, v[0], v[1]);
    }
    s.push_str("$EndNodes\n");
    let _ = writeln!(s, "$Elements\n{}", mesh.boundary_edges.len() + mesh.cells.len());
    let mut id = 1;
    for e in &mesh.boundary_edges {
        let p = e.tag.physical();
        let _ = writeln!(s, "{id} {ELEM_LINE} 2 {p} {p} {} {}", e.vertices[0] + 1, e.vertices[1] + 1);
        id += 1;
    }
    for c in &mesh.cells {
        let _ = writeln!(s, "{id} {ELEM_TRIANGLE} 2 5 1 {} {} {}", c[0] + 1, c[1] + 1, c[2] + 1);
        id += 1;
    }
    s.push_str("$EndElements\n");
    s
}

pub fn write_msh2(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    crate::io::write_atomic(path.as_ref(), msh2_string(mesh).as_bytes())
}
