//! ASCII OFF meshes (triangles only).

use std::fs;
use std::path::Path;

use pairperm_core::graph::TriangleMesh;

use crate::error::{Error, Result};

pub fn load_off(path: impl AsRef<Path>) -> Result<TriangleMesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
    parse_off(&text, path)
}

/// Parses OFF text; `path` is used in error messages only.
pub fn parse_off(text: &str, path: &Path) -> Result<TriangleMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or_else(|| Error::format(path, 1, "empty file"))?;
    let rest = header.strip_prefix("OFF").ok_or_else(|| Error::format(path, line, "missing `OFF` header"))?;
    let (count_line, counts) = if rest.trim().is_empty() {
        lines.next().ok_or_else(|| Error::format(path, line, "missing counts line"))?
    } else {
        (line, rest.trim())
    };
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::format(path, count_line, format!("bad count `{t}`"))))
        .collect::<Result<_>>()?;
    let [nv, nf, ..] = counts[..] else {
        return Err(Error::format(path, count_line, "counts line needs vertex and face counts"));
    };

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, l) = lines.next().ok_or_else(|| Error::format(path, count_line, format!("expected {nv} vertices")))?;
        let xyz: Vec<f64> = l
            .split_whitespace()
            .take(3)
            .map(|t| t.parse().map_err(|_| Error::format(path, line, format!("bad coordinate `{t}`"))))
            .collect::<Result<_>>()?;
        let [x, y, z] = xyz[..] else {
            return Err(Error::format(path, line, "vertex needs 3 coordinates"));
        };
        vertices.push([x, y, z]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, l) = lines.next().ok_or_else(|| Error::format(path, count_line, format!("expected {nf} faces")))?;
        let ints: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::format(path, line, format!("bad face entry `{t}`"))))
            .take_while(|r| r.is_ok())
            .collect::<Result<_>>()?;
        match ints.first() {
            Some(&3) if ints.len() >= 4 => faces.push([ints[1], ints[2], ints[3]]),
            Some(&k) if k != 3 => {
                return Err(Error::Unsupported { path: path.into(), msg: format!("line {line}: face with {k} vertices") })
            }
            _ => return Err(Error::format(path, line, "malformed face")),
        }
    }
    TriangleMesh::new(vertices, faces).map_err(|e| Error::format(path, count_line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_on_header_line_and_comments() {
        let text = "OFF 3 1 0\n# comment\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2 255 0 0\n";
        let m = parse_off(text, Path::new("t.off")).unwrap();
        assert_eq!(m.vertices().len(), 3);
        assert_eq!(m.faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn malformed_counts_are_format_errors() {
        assert!(matches!(parse_off("OFF\nx 1 0\n", Path::new("t")), Err(Error::Format { .. })));
        assert!(matches!(parse_off("OFF\n3 1 0\n0 0 0\n", Path::new("t")), Err(Error::Format { .. })));
    }
}
