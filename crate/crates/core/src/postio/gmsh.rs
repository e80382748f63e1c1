//! Reader and writer for the ASCII MSH 2.2 format.
//!
//! Supported element types: 1 (line), 2 (triangle), 4 (tetrahedron) and
//! 15 (point, ignored). The highest-dimensional elements become cells and the
//! ones of codimension one become tagged boundary facets (first tag = physical
//! group). Nodes not referenced by any cell are dropped; the others keep
//! the order of their ids.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::mesh::{SimplicialMesh, Tag};
use crate::{Error, Result};

struct Element {
    line: usize,
    kind: u32,
    tag: Tag,
    nodes: Vec<usize>,
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    path: &'a Path,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        loop {
            match self.iter.next() {
                Some((i, l)) => {
                    self.last = i + 1;
                    let t = l.trim();
                    if !t.is_empty() {
                        return Ok((i + 1, t));
                    }
                }
                None => return Err(self.error(self.last, "unexpected end of file")),
            }
        }
    }

    fn error(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, keyword: &str) -> Result<usize> {
        let (n, l) = self.next_line()?;
        if l != keyword {
            return Err(self.error(n, format!("expected {keyword}, found '{l}'")));
        }
        Ok(n)
    }

    fn count(&mut self) -> Result<usize> {
        let (n, l) = self.next_line()?;
        l.parse()
            .map_err(|_| self.error(n, format!("expected a count, found '{l}'")))
    }
}

fn parse_field<T: std::str::FromStr>(lines: &Lines, line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| lines.error(line, format!("malformed {what}")))
}

/// Reads a conforming simplicial mesh from an MSH 2.2 ASCII file.
pub fn read_gmsh(path: impl AsRef<Path>) -> Result<SimplicialMesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gmsh(&text, path)
}

/// Parses MSH 2.2 ASCII text; `path` is used in error messages only.
pub fn parse_gmsh(text: &str, path: &Path) -> Result<SimplicialMesh> {
    let mut lines = Lines {
        iter: text.lines().enumerate(),
        path,
        last: 0,
    };
    let mut nodes: HashMap<usize, [f64; 3]> = HashMap::new();
    let mut elements: Vec<Element> = Vec::new();
    let mut elements_line = 0;
    let mut seen_format = false;
    while let Some((idx, raw)) = lines.iter.next() {
        let n = idx + 1;
        lines.last = n;
        match raw.trim() {
            "" => continue,
            "$MeshFormat" => {
                let (ln, l) = lines.next_line()?;
                let mut it = l.split_whitespace();
                let version = it.next().unwrap_or("");
                let file_type = it.next().unwrap_or("");
                if version != "2.2" {
                    return Err(lines.error(ln, format!("unsupported MSH version '{version}' (need 2.2)")));
                }
                if file_type != "0" {
                    return Err(lines.error(ln, "binary MSH files are not supported"));
                }
                lines.expect("$EndMeshFormat")?;
                seen_format = true;
            }
            "$Nodes" => {
                if !seen_format {
                    return Err(lines.error(n, "$Nodes before $MeshFormat"));
                }
                let count = lines.count()?;
                for _ in 0..count {
                    let (ln, l) = lines.next_line()?;
                    let mut it = l.split_whitespace();
                    let id: usize = parse_field(&lines, ln, it.next(), "node id")?;
                    let mut x = [0.0; 3];
                    for c in x.iter_mut() {
                        *c = parse_field(&lines, ln, it.next(), "node coordinate")?;
                    }
                    if nodes.insert(id, x).is_some() {
                        return Err(lines.error(ln, format!("duplicate node id {id}")));
                    }
                }
                lines.expect("$EndNodes")?;
            }
            "$Elements" => {
                if !seen_format {
                    return Err(lines.error(n, "$Elements before $MeshFormat"));
                }
                elements_line = n;
                let count = lines.count()?;
                for _ in 0..count {
                    let (ln, l) = lines.next_line()?;
                    let mut it = l.split_whitespace();
                    let _id: usize = parse_field(&lines, ln, it.next(), "element id")?;
                    let kind: u32 = parse_field(&lines, ln, it.next(), "element type")?;
                    let ntags: usize = parse_field(&lines, ln, it.next(), "tag count")?;
                    let mut tags = Vec::with_capacity(ntags);
                    for _ in 0..ntags {
                        tags.push(parse_field::<Tag>(&lines, ln, it.next(), "element tag")?);
                    }
                    let nn = match kind {
                        1 => 2,
                        2 => 3,
                        4 => 4,
                        15 => 1,
                        other => {
                            return Err(lines.error(ln, format!("unsupported element type {other}")));
                        }
                    };
                    let mut ids = Vec::with_capacity(nn);
                    for _ in 0..nn {
                        ids.push(parse_field::<usize>(&lines, ln, it.next(), "element node")?);
                    }
                    if it.next().is_some() {
                        return Err(lines.error(ln, "trailing data after element nodes"));
                    }
                    if kind != 15 {
                        elements.push(Element {
                            line: ln,
                            kind,
                            tag: tags.first().copied().unwrap_or(0),
                            nodes: ids,
                        });
                    }
                }
                lines.expect("$EndElements")?;
            }
            section if section.starts_with('$') && !section.starts_with("$End") => {
                // skip unknown sections such as $PhysicalNames
                let end = format!("$End{}", &section[1..]);
                loop {
                    let (_, l) = lines.next_line()?;
                    if l == end {
                        break;
                    }
                }
            }
            other => return Err(lines.error(n, format!("unexpected content '{other}'"))),
        }
    }
    if !seen_format {
        return Err(lines.error(lines.last.max(1), "missing $MeshFormat section"));
    }
    let dim = if elements.iter().any(|e| e.kind == 4) {
        3
    } else if elements.iter().any(|e| e.kind == 2) {
        2
    } else {
        return Err(lines.error(elements_line.max(1), "no triangle or tetrahedron elements"));
    };
    let cell_kind = if dim == 3 { 4 } else { 2 };
    let facet_kind = if dim == 3 { 2 } else { 1 };

    let mut used: Vec<usize> = Vec::new();
    for e in elements.iter().filter(|e| e.kind == cell_kind) {
        for &id in &e.nodes {
            if !nodes.contains_key(&id) {
                return Err(lines.error(e.line, format!("element references unknown node {id}")));
            }
            used.push(id);
        }
    }
    used.sort_unstable();
    used.dedup();
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let order = used;
    let cells: Vec<usize> = elements
        .iter()
        .filter(|e| e.kind == cell_kind)
        .flat_map(|e| e.nodes.iter().map(|id| remap[id]))
        .collect();
    let mut coords = Vec::with_capacity(order.len() * dim);
    for id in &order {
        let x = nodes[id];
        if dim == 2 && x[2] != 0.0 {
            return Err(lines.error(elements_line, format!("node {id} of a planar mesh has z = {}", x[2])));
        }
        coords.extend_from_slice(&x[..dim]);
    }
    for (e, cell) in elements
        .iter()
        .filter(|e| e.kind == cell_kind)
        .zip(cells.chunks(dim + 1))
    {
        if signed_measure(dim, &coords, cell).abs() <= 1e-14 * extent(dim, &coords, cell).powi(dim as i32) {
            return Err(lines.error(e.line, "zero-volume cell"));
        }
    }
    let mut tagged = Vec::new();
    for e in elements.iter().filter(|e| e.kind == facet_kind) {
        let mapped: Option<Vec<usize>> = e.nodes.iter().map(|id| remap.get(id).copied()).collect();
        if let Some(f) = mapped {
            tagged.push((f, e.tag));
        }
    }
    SimplicialMesh::with_tagged_facets(dim, coords, cells, &tagged).map_err(|err| match err {
        Error::InvalidMesh(msg) => lines.error(elements_line, msg),
        other => other,
    })
}

fn signed_measure(dim: usize, coords: &[f64], cell: &[usize]) -> f64 {
    let e = |v: usize, r: usize| coords[cell[v] * dim + r] - coords[cell[0] * dim + r];
    if dim == 2 {
        e(1, 0) * e(2, 1) - e(2, 0) * e(1, 1)
    } else {
        e(1, 0) * (e(2, 1) * e(3, 2) - e(3, 1) * e(2, 2)) - e(2, 0) * (e(1, 1) * e(3, 2) - e(3, 1) * e(1, 2))
            + e(3, 0) * (e(1, 1) * e(2, 2) - e(2, 1) * e(1, 2))
    }
}

fn extent(dim: usize, coords: &[f64], cell: &[usize]) -> f64 {
    let mut best: f64 = 0.0;
    for a in cell {
        for b in cell {
            let d2: f64 = (0..dim)
                .map(|r| (coords[a * dim + r] - coords[b * dim + r]).powi(2))
                .sum();
            best = best.max(d2.sqrt());
        }
    }
    best
}

/// Writes a mesh as MSH 2.2 ASCII with boundary facets as tagged elements.
pub fn write_gmsh(path: impl AsRef<Path>, mesh: &SimplicialMesh) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, gmsh_string(mesh)).map_err(|e| Error::io(path, e))
}

pub fn gmsh_string(mesh: &SimplicialMesh) -> String {
    let d = mesh.dim();
    let mut out = String::new();
    out.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n");
    let _ = writeln!(out, "{}", mesh.num_vertices());
    for z in 0..mesh.num_vertices() {
        let x = mesh.vertex(z);
        let _ = write!(out, "{}", z + 1);
        for c in 0..3 {
            let _ = write!(out, " {:.17e}", x.get(c).copied().unwrap_or(0.0));
        }
        out.push('\n');
    }
    out.push_str("$EndNodes\n$Elements\n");
    let (facet_kind, cell_kind) = if d == 3 { (2, 4) } else { (1, 2) };
    let _ = writeln!(out, "{}", mesh.num_boundary_facets() + mesh.num_cells());
    let mut id = 1;
    for (facet, tag) in mesh.boundary_facets() {
        let _ = write!(out, "{id} {facet_kind} 2 {tag} {tag}");
        for v in facet {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
        id += 1;
    }
    for k in 0..mesh.num_cells() {
        let _ = write!(out, "{id} {cell_kind} 2 0 0");
        for v in mesh.cell(k) {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
        id += 1;
    }
    out.push_str("$EndElements\n");
    out
}
