//! Burmeister `.cxt` and CSV context files.
//!
//! `.cxt` layout: `B`, the context name (may be empty), the object count,
//! the attribute count, one line per object name, one line per attribute
//! name, then one grid line per object over `X` (incident) and `.`.
//! Readers accept `x` as incident, CRLF line ends, whitespace around the
//! counts, and the single blank line many tools put after the counts.
//! Writers emit LF, `X`, and no blank line.

use std::collections::HashSet;
use std::fmt::Write as _;

use fcarel_core::{AttrSet, FormalContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatErrorKind {
    #[error("expected \"B\" on the first line")]
    Magic,
    #[error("malformed count {0:?}")]
    Count(String),
    #[error("file ends early, {0} expected")]
    Truncated(&'static str),
    #[error("row has {found} cells, expected {expected}")]
    RowLength { expected: usize, found: usize },
    #[error("illegal character {0:?} in grid")]
    IllegalChar(char),
    #[error("duplicate object name {0:?}")]
    DuplicateObject(String),
    #[error("duplicate attribute name {0:?}")]
    DuplicateAttribute(String),
    #[error("unrecognized cell {0:?}")]
    Cell(String),
    #[error("unexpected content after the grid")]
    Trailing,
    #[error("empty file")]
    Empty,
    #[error("{0}")]
    Csv(String),
}

/// A parse failure at a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct FormatError {
    pub line: usize,
    pub kind: FormatErrorKind,
}

fn err<T>(line: usize, kind: FormatErrorKind) -> Result<T, FormatError> {
    Err(FormatError { line, kind })
}

fn lines(text: &str) -> Vec<&str> {
    let mut out: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    // a terminating newline does not start another line
    if out.last() == Some(&"") {
        out.pop();
    }
    out
}

pub fn parse_cxt(text: &str) -> Result<FormalContext, FormatError> {
    parse_cxt_named(text).map(|(_, ctx)| ctx)
}

/// Parses a `.cxt` file, returning its context name too.
pub fn parse_cxt_named(text: &str) -> Result<(String, FormalContext), FormatError> {
    let lines = lines(text);
    let at = |i: usize, what: &'static str| {
        lines.get(i).copied().ok_or(FormatError {
            line: i + 1,
            kind: FormatErrorKind::Truncated(what),
        })
    };
    if at(0, "\"B\"")? != "B" {
        return err(1, FormatErrorKind::Magic);
    }
    let name = at(1, "context name")?.to_string();
    let count = |i: usize| -> Result<usize, FormatError> {
        let raw = at(i, "count")?;
        raw.trim().parse().map_err(|_| FormatError {
            line: i + 1,
            kind: FormatErrorKind::Count(raw.to_string()),
        })
    };
    let n_objects = count(2)?;
    let n_attrs = count(3)?;

    let mut next = 4;
    let body = n_objects + n_attrs + n_objects;
    // optional blank separator line, only when the body still fits after it
    if lines.len().saturating_sub(next) > body && lines.get(next).is_some_and(|l| l.trim().is_empty()) {
        next += 1;
    }

    let mut take_names = |n: usize, what: &'static str| -> Result<Vec<(usize, String)>, FormatError> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push((next + 1, at(next, what)?.to_string()));
            next += 1;
        }
        Ok(out)
    };
    let objects = take_names(n_objects, "object name")?;
    let attributes = take_names(n_attrs, "attribute name")?;
    check_unique(&objects, FormatErrorKind::DuplicateObject)?;
    check_unique(&attributes, FormatErrorKind::DuplicateAttribute)?;

    let mut rows = Vec::with_capacity(n_objects);
    for _ in 0..n_objects {
        let line_no = next + 1;
        let raw = at(next, "grid row")?.trim_end();
        next += 1;
        let cells: Vec<char> = raw.chars().collect();
        if cells.len() != n_attrs {
            return err(
                line_no,
                FormatErrorKind::RowLength {
                    expected: n_attrs,
                    found: cells.len(),
                },
            );
        }
        let mut row = AttrSet::empty(n_attrs);
        for (m, &c) in cells.iter().enumerate() {
            match c {
                'X' | 'x' => row.insert(m),
                '.' => {}
                other => return err(line_no, FormatErrorKind::IllegalChar(other)),
            }
        }
        rows.push(row);
    }
    if let Some(extra) = lines[next..].iter().position(|l| !l.trim().is_empty()) {
        return err(next + extra + 1, FormatErrorKind::Trailing);
    }
    let ctx = FormalContext::new(
        objects.into_iter().map(|(_, n)| n).collect(),
        attributes.into_iter().map(|(_, n)| n).collect(),
        rows,
    )
    .expect("names checked unique and rows sized");
    Ok((name, ctx))
}

fn check_unique(names: &[(usize, String)], dup: fn(String) -> FormatErrorKind) -> Result<(), FormatError> {
    let mut seen = HashSet::new();
    for (line, name) in names {
        if !seen.insert(name) {
            return err(*line, dup(name.clone()));
        }
    }
    Ok(())
}

pub fn write_cxt(ctx: &FormalContext) -> String {
    write_cxt_named("", ctx)
}

pub fn write_cxt_named(name: &str, ctx: &FormalContext) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "B\n{name}\n{}\n{}", ctx.n_objects(), ctx.n_attributes());
    for name in ctx.objects().iter().chain(ctx.attributes()) {
        out.push_str(name);
        out.push('\n');
    }
    for row in ctx.rows() {
        out.extend((0..ctx.n_attributes()).map(|m| if row.contains(m) { 'X' } else { '.' }));
        out.push('\n');
    }
    out
}

/// Parses a CSV context: a header of attribute names (first cell ignored),
/// then one row per object, name first. Cells `1`, `X`, `x` are incident;
/// `0`, `.` and empty cells are not.
pub fn parse_csv(text: &str) -> Result<FormalContext, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let csv_err = |e: csv::Error| FormatError {
        line: e.position().map_or(0, |p| p.line() as usize),
        kind: FormatErrorKind::Csv(e.to_string()),
    };
    let header = match records.next() {
        Some(h) => h.map_err(csv_err)?,
        None => return err(1, FormatErrorKind::Empty),
    };
    let header_line = header.position().map_or(1, |p| p.line() as usize);
    let attributes: Vec<(usize, String)> = header
        .iter()
        .skip(1)
        .map(|a| (header_line, a.trim().to_string()))
        .collect();
    check_unique(&attributes, FormatErrorKind::DuplicateAttribute)?;
    let n_attrs = attributes.len();

    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != n_attrs + 1 {
            return err(
                line,
                FormatErrorKind::RowLength {
                    expected: n_attrs + 1,
                    found: record.len(),
                },
            );
        }
        let mut row = AttrSet::empty(n_attrs);
        for (m, cell) in record.iter().skip(1).enumerate() {
            match cell.trim() {
                "1" | "X" | "x" => row.insert(m),
                "0" | "." | "" => {}
                other => return err(line, FormatErrorKind::Cell(other.to_string())),
            }
        }
        objects.push((line, record[0].trim().to_string()));
        rows.push(row);
    }
    check_unique(&objects, FormatErrorKind::DuplicateObject)?;
    Ok(FormalContext::new(
        objects.into_iter().map(|(_, n)| n).collect(),
        attributes.into_iter().map(|(_, n)| n).collect(),
        rows,
    )
    .expect("names checked unique and rows sized"))
}

pub fn write_csv(ctx: &FormalContext) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("").chain(ctx.attributes().iter().map(String::as_str));
    writer.write_record(header).expect("in-memory write");
    for (g, name) in ctx.objects().iter().enumerate() {
        let cells = (0..ctx.n_attributes()).map(|m| if ctx.incident(g, m) { "1" } else { "0" });
        writer
            .write_record(std::iter::once(name.as_str()).chain(cells))
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cxt() {
        let ctx = parse_cxt("B\n\n 2\n2\no1\no2\na1\na2\nX.\nXX\n").unwrap();
        assert_eq!(ctx.objects(), ["o1", "o2"]);
        assert_eq!(ctx.attributes(), ["a1", "a2"]);
        assert!(ctx.incident(0, 0) && !ctx.incident(0, 1));
        assert!(ctx.incident(1, 0) && ctx.incident(1, 1));
    }

    #[test]
    fn cxt_accepts_crlf_lowercase_and_blank_after_counts() {
        let ctx = parse_cxt("B\r\nname\r\n2\r\n2\r\n\r\no1\r\no2\r\na1\r\na2\r\nx.\r\nXx\r\n").unwrap();
        assert_eq!(ctx.objects(), ["o1", "o2"]);
        assert!(ctx.incident(1, 1));
        let (name, _) = parse_cxt_named("B\nname\n0\n0\n").unwrap();
        assert_eq!(name, "name");
    }

    #[test]
    fn cxt_empty_context() {
        let ctx = parse_cxt("B\n\n0\n0\n").unwrap();
        assert_eq!(ctx.n_objects(), 0);
        assert_eq!(ctx.n_attributes(), 0);
        assert_eq!(write_cxt(&ctx), "B\n\n0\n0\n");
    }

    #[test]
    fn cxt_errors_carry_lines() {
        let e = parse_cxt("B\n\n1\n2\no\na\nb\nX.X\n").unwrap_err();
        assert_eq!(e.line, 8);
        assert_eq!(e.kind, FormatErrorKind::RowLength { expected: 2, found: 3 });

        let e = parse_cxt("A\n\n0\n0\n").unwrap_err();
        assert_eq!((e.line, e.kind), (1, FormatErrorKind::Magic));

        let e = parse_cxt("B\n\nzwei\n0\n").unwrap_err();
        assert_eq!(e.line, 3);

        let e = parse_cxt("B\n\n1\n2\no\na\nb\nX-\n").unwrap_err();
        assert_eq!((e.line, e.kind), (8, FormatErrorKind::IllegalChar('-')));

        let e = parse_cxt("B\n\n2\n1\no\no\na\nX\nX\n").unwrap_err();
        assert_eq!((e.line, e.kind), (6, FormatErrorKind::DuplicateObject("o".into())));

        let e = parse_cxt("B\n\n1\n2\no\na\na\nXX\n").unwrap_err();
        assert_eq!((e.line, e.kind), (7, FormatErrorKind::DuplicateAttribute("a".into())));

        let e = parse_cxt("B\n\n2\n1\no\np\na\nX\n").unwrap_err();
        assert_eq!((e.line, e.kind), (9, FormatErrorKind::Truncated("grid row")));
    }

    #[test]
    fn csv_basic() {
        let ctx = parse_csv(",a,b\no1,1,0\n").unwrap();
        assert_eq!(ctx.attributes(), ["a", "b"]);
        assert_eq!(ctx.objects(), ["o1"]);
        assert!(ctx.incident(0, 0) && !ctx.incident(0, 1));
        let ctx = parse_csv("obj,a,b,c\no1,X,.,\no2,x,1,0\n").unwrap();
        assert_eq!(ctx.row(1).to_vec(), [0, 1]);
    }

    #[test]
    fn csv_errors() {
        let e = parse_csv(",a,b\no1,1,0,1\n").unwrap_err();
        assert_eq!(
            (e.line, e.kind),
            (2, FormatErrorKind::RowLength { expected: 3, found: 4 })
        );
        let e = parse_csv(",a,b\no1,1,2\n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, FormatErrorKind::Cell("2".into())));
        assert_eq!(parse_csv("").unwrap_err().kind, FormatErrorKind::Empty);
    }

    #[test]
    fn csv_round_trip() {
        let ctx = FormalContext::coin_toss(7, 5, 0.5, 3).unwrap();
        assert_eq!(parse_csv(&write_csv(&ctx)).unwrap(), ctx);
    }
}
