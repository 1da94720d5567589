//! The canonical text format for designs.
//!
//! ```text
//! # comments and blank lines are ignored
//! gdd v=8 K=3
//! group 0 1
//! group 2 3
//! block 0 2 4
//! ```
//!
//! The header names the kind (`pbd` or `gdd`), the point count and,
//! optionally, the declared block sizes. Point lists are written ascending,
//! groups by smallest point, blocks lexicographically. Parsing accepts any
//! order; serializing always writes the canonical one.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::designs::{Blocks, DesignError, GroupDesign, PBDesign, Point};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DesignFile {
    Pbd(PBDesign),
    Gdd(GroupDesign),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Design { line: usize, source: DesignError },
    #[error("missing header line (expected `pbd v=..` or `gdd v=..`)")]
    MissingHeader,
    #[error("{0}")]
    Invalid(DesignError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn write_list(out: &mut String, keyword: &str, points: &[Point]) {
    out.push_str(keyword);
    for p in points {
        let _ = write!(out, " {p}");
    }
    out.push('\n');
}

fn header(out: &mut String, kind: &str, v: usize, sizes: Option<&BTreeSet<usize>>) {
    let _ = write!(out, "{kind} v={v}");
    if let Some(k) = sizes {
        let list: Vec<String> = k.iter().map(usize::to_string).collect();
        let _ = write!(out, " K={}", list.join(","));
    }
    out.push('\n');
}

impl DesignFile {
    pub fn v(&self) -> usize {
        match self {
            DesignFile::Pbd(d) => d.v(),
            DesignFile::Gdd(g) => g.v(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            DesignFile::Pbd(d) => {
                header(&mut out, "pbd", d.v(), d.declared_sizes());
                for b in d.blocks().iter() {
                    write_list(&mut out, "block", b);
                }
            }
            DesignFile::Gdd(g) => {
                header(&mut out, "gdd", g.v(), g.declared_sizes());
                for grp in g.groups() {
                    write_list(&mut out, "group", grp);
                }
                for b in g.blocks().iter() {
                    write_list(&mut out, "block", b);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("designs serialize")
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut kind: Option<(bool, usize, Option<BTreeSet<usize>>)> = None;
        let mut groups: Vec<Vec<Point>> = Vec::new();
        let mut group_lines: Vec<usize> = Vec::new();
        let mut blocks = Blocks::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut words = content.split_whitespace();
            let keyword = words.next().unwrap();
            match (keyword, &kind) {
                ("pbd" | "gdd", None) => {
                    let mut v = None;
                    let mut sizes = None;
                    for w in words {
                        match w.split_once('=') {
                            Some(("v", n)) => {
                                v = Some(n.parse::<usize>().map_err(|_| syntax(line, format!("bad point count '{n}'")))?)
                            }
                            Some(("K", list)) => sizes = Some(parse_sizes(list).map_err(|m| syntax(line, m))?),
                            _ => return Err(syntax(line, format!("unexpected header field '{w}'"))),
                        }
                    }
                    let v = v.ok_or_else(|| syntax(line, "header lacks v="))?;
                    if v > Point::MAX as usize {
                        return Err(syntax(line, "point count too large"));
                    }
                    kind = Some((keyword == "gdd", v, sizes));
                }
                ("pbd" | "gdd", Some(_)) => return Err(syntax(line, "second header line")),
                (_, None) => return Err(FormatError::MissingHeader),
                ("group", Some((is_gdd, v, _))) => {
                    if !is_gdd {
                        return Err(syntax(line, "group line in a pbd file"));
                    }
                    groups.push(parse_points(words, *v, line, "group")?);
                    group_lines.push(line);
                }
                ("block", Some((_, v, _))) => {
                    let b = parse_points(words, *v, line, "block")?;
                    blocks.push(&b);
                }
                (other, _) => return Err(syntax(line, format!("unknown line type '{other}'"))),
            }
        }

        let (is_gdd, v, sizes) = kind.ok_or(FormatError::MissingHeader)?;
        if !is_gdd {
            return Ok(DesignFile::Pbd(PBDesign::new(v, blocks, sizes).map_err(FormatError::Invalid)?));
        }
        // locate the first overlapping group for the message
        let mut owner = vec![false; v];
        for (g, &line) in groups.iter().zip(&group_lines) {
            for &p in g {
                if std::mem::replace(&mut owner[p as usize], true) {
                    return Err(FormatError::Design {
                        line,
                        source: DesignError::OverlappingGroups { point: p },
                    });
                }
            }
        }
        let g = GroupDesign::new(v, groups, blocks, sizes).map_err(FormatError::Invalid)?;
        Ok(DesignFile::Gdd(g))
    }
}

fn parse_sizes(list: &str) -> Result<BTreeSet<usize>, String> {
    list.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad block size '{s}'")))
        .collect()
}

fn parse_points<'a>(
    words: impl Iterator<Item = &'a str>,
    v: usize,
    line: usize,
    what: &'static str,
) -> Result<Vec<Point>, FormatError> {
    let mut pts = Vec::new();
    for w in words {
        let p: Point = w.parse().map_err(|_| syntax(line, format!("bad point '{w}'")))?;
        if p as usize >= v {
            return Err(FormatError::Design {
                line,
                source: DesignError::PointOutOfRange { point: p, v },
            });
        }
        pts.push(p);
    }
    let mut sorted = pts.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(FormatError::Design {
            line,
            source: DesignError::RepeatedPoint { point: w[0], what },
        });
    }
    Ok(sorted)
}

impl From<PBDesign> for DesignFile {
    fn from(d: PBDesign) -> Self {
        DesignFile::Pbd(d)
    }
}

impl From<GroupDesign> for DesignFile {
    fn from(g: GroupDesign) -> Self {
        DesignFile::Gdd(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{affine_space, transversal_design};

    #[test]
    fn canonical_round_trip() {
        for f in [
            DesignFile::from(affine_space(3, 2).unwrap()),
            DesignFile::from(transversal_design(3, 4).unwrap()),
            DesignFile::from(PBDesign::from_blocks(4, [[0u32, 1]]).unwrap()),
        ] {
            let text = f.to_text();
            let back = DesignFile::parse(&text).unwrap();
            assert_eq!(back, f);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn comments_and_order_are_normalized() {
        let text = "# a triangle\npbd v=3 K=2\nblock 2 1\n\nblock 0 2 # trailing\nblock 0 1\n";
        let f = DesignFile::parse(text).unwrap();
        assert_eq!(f.to_text(), "pbd v=3 K=2\nblock 0 1\nblock 0 2\nblock 1 2\n");
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("pbd v=3\nblock 0 3\n", "line 2: point 3 out of range for v = 3"),
            ("pbd v=3\nblock 0 1 1\n", "line 2: point 1 repeated within a block"),
            ("gdd v=4\ngroup 0 1\ngroup 1 2\n", "line 3: point 1 lies in more than one group"),
            ("block 0 1\n", "missing header line (expected `pbd v=..` or `gdd v=..`)"),
            ("pbd v=3\ngroup 0 1\n", "line 2: group line in a pbd file"),
            ("pbd v=x\n", "line 1: bad point count 'x'"),
            ("pbd v=3\npbd v=3\n", "line 2: second header line"),
            ("pbd v=3\nline 0 1\n", "line 2: unknown line type 'line'"),
            ("", "missing header line (expected `pbd v=..` or `gdd v=..`)"),
        ];
        for (text, msg) in cases {
            assert_eq!(DesignFile::parse(text).unwrap_err().to_string(), msg, "{text:?}");
        }
    }

    #[test]
    fn json_carries_the_same_content() {
        let f = DesignFile::from(transversal_design(2, 2).unwrap());
        assert_eq!(
            f.to_json(),
            r#"{"kind":"gdd","v":4,"groups":[[0,1],[2,3]],"blocks":[[0,2],[0,3],[1,2],[1,3]],"declared_sizes":[2]}"#
        );
    }
}
