//! Parser for approval-type Pabulib (`.pb`) participatory budgeting files.
//!
//! A file has `META`, `PROJECTS` and `VOTES` sections in any order. Each
//! section starts with a header row; fields are separated by `;` and may be
//! double-quoted. Only the `project_id` column of `PROJECTS` and the `vote`
//! column of `VOTES` are used; costs and metadata are ignored.

use crate::election::{Ballot, Election};
use crate::error::{parse_err, Error, Result};
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Section {
    Meta,
    Projects,
    Votes,
}

impl Section {
    fn parse(line: &str) -> Option<Section> {
        match line.trim().to_ascii_uppercase().as_str() {
            "META" => Some(Section::Meta),
            "PROJECTS" => Some(Section::Projects),
            "VOTES" => Some(Section::Votes),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Section::Meta => "META",
            Section::Projects => "PROJECTS",
            Section::Votes => "VOTES",
        }
    }
}

/// Splits one `;`-separated row, honouring double quotes (`""` escapes a
/// quote inside a quoted field).
fn split_row(line: &str, lineno: usize) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    let mut at_start = true;
    while let Some(c) = chars.next() {
        if quoted {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    quoted = false;
                }
            } else {
                cur.push(c);
            }
        } else if c == '"' && at_start {
            quoted = true;
            at_start = false;
        } else if c == ';' {
            fields.push(std::mem::take(&mut cur).trim().to_string());
            at_start = true;
        } else {
            if !c.is_whitespace() {
                at_start = false;
            }
            cur.push(c);
        }
    }
    if quoted {
        return parse_err(lineno, "unterminated quoted field");
    }
    fields.push(cur.trim().to_string());
    Ok(fields)
}

struct Table {
    header_line: usize,
    header: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    fn column(&self, name: &str, section: &str) -> Result<usize> {
        match self.header.iter().position(|h| h.eq_ignore_ascii_case(name)) {
            Some(i) => Ok(i),
            None => parse_err(self.header_line, format!("{section} header has no `{name}` column")),
        }
    }
}

/// Parses Pabulib text into an election whose candidates are the declared
/// projects in file order.
pub fn parse_pabulib(text: &str) -> Result<Election> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut tables: HashMap<Section, Table> = HashMap::new();
    let mut current: Option<Section> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(s) = Section::parse(line) {
            if tables.contains_key(&s) {
                return parse_err(lineno, format!("duplicate {} section", s.name()));
            }
            current = Some(s);
            continue;
        }
        let Some(s) = current else {
            return parse_err(lineno, "content before the first section header");
        };
        let fields = split_row(line, lineno)?;
        match tables.get_mut(&s) {
            None => {
                tables.insert(
                    s,
                    Table {
                        header_line: lineno,
                        header: fields,
                        rows: Vec::new(),
                    },
                );
            }
            Some(t) => {
                if fields.len() != t.header.len() {
                    return parse_err(
                        lineno,
                        format!("expected {} fields, found {}", t.header.len(), fields.len()),
                    );
                }
                t.rows.push((lineno, fields));
            }
        }
    }
    let end = last_line + 1;

    let mut label = None;
    if let Some(meta) = tables.get(&Section::Meta) {
        // META rows are key;value pairs; the first row is the header
        let rows = std::iter::once((meta.header_line, &meta.header)).chain(meta.rows.iter().map(|(l, r)| (*l, r)));
        for (lineno, row) in rows {
            let key = row[0].to_ascii_lowercase();
            let value = row.get(1).map(String::as_str).unwrap_or("");
            match key.as_str() {
                "vote_type" if !value.eq_ignore_ascii_case("approval") => {
                    return parse_err(lineno, format!("unsupported vote_type `{value}`; only approval is supported"));
                }
                "description" if !value.is_empty() => label = Some(value.to_string()),
                _ => {}
            }
        }
    }

    let Some(projects) = tables.get(&Section::Projects) else {
        return parse_err(end, "missing PROJECTS section");
    };
    let Some(votes) = tables.get(&Section::Votes) else {
        return parse_err(end, "missing VOTES section");
    };
    let id_col = projects.column("project_id", "PROJECTS")?;
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (lineno, row) in &projects.rows {
        let id = row[id_col].as_str();
        if id.is_empty() {
            return parse_err(*lineno, "empty project_id");
        }
        let next = index.len();
        if index.insert(id, next).is_some() {
            return parse_err(*lineno, format!("duplicate project_id `{id}`"));
        }
    }
    let m = index.len();
    if m == 0 {
        return parse_err(projects.header_line, "PROJECTS section declares no projects");
    }

    let vote_col = votes.column("vote", "VOTES")?;
    let mut ballots = Vec::with_capacity(votes.rows.len());
    for (lineno, row) in &votes.rows {
        let mut approved = Vec::new();
        for id in row[vote_col].split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match index.get(id) {
                Some(&j) => approved.push(j),
                None => return parse_err(*lineno, format!("vote references undeclared project `{id}`")),
            }
        }
        ballots.push(Ballot::from_approved(m, approved)?);
    }
    if ballots.is_empty() {
        return parse_err(votes.header_line, "VOTES section contains no votes");
    }
    let e = Election::new(m, ballots)?;
    Ok(match label {
        Some(l) => e.with_label(l),
        None => e,
    })
}

/// Like [`parse_pabulib`] for raw bytes; invalid UTF-8 is reported with the
/// line it occurs on.
pub fn parse_pabulib_bytes(bytes: &[u8]) -> Result<Election> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_pabulib(text),
        Err(err) => {
            let line = 1 + bytes[..err.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
            Err(Error::Parse {
                line,
                message: "invalid UTF-8".into(),
            })
        }
    }
}
