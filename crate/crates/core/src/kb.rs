//! Line-oriented knowledge-base files.
//!
//! ```text
//! # comment
//! name: birds
//! signature: b, p, f, w
//! (f | b)
//! (!f | p)
//! ```
//!
//! Without a `signature:` line the atoms are declared in order of first
//! occurrence.

use std::path::Path;

use thiserror::Error;

use crate::conditionals::{BaseError, BeliefBase};
use crate::logic::{max_atoms, parse_formula_with, Formula, LogicError, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: duplicate of the conditional on line {first_line}")]
    DuplicateConditional { line: usize, first_line: usize },
    #[error("line {line}: {source}")]
    Signature { line: usize, source: LogicError },
    #[error(transparent)]
    Base(#[from] BaseError),
}

/// A parsed knowledge-base file.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub name: Option<String>,
    pub base: BeliefBase,
    pub comments: Vec<String>,
    pub warnings: Vec<String>,
    /// Source line of each conditional, by label.
    pub lines: Vec<usize>,
}

impl KnowledgeBase {
    pub fn load(path: &Path) -> Result<KnowledgeBase, KbError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| KbError::Io { path: path.display().to_string(), message: e.to_string() })?;
        let mut kb = KnowledgeBase::parse(&text)?;
        if kb.name.is_none() {
            kb.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(kb)
    }

    pub fn parse(text: &str) -> Result<KnowledgeBase, KbError> {
        KnowledgeBase::parse_with_cap(text, max_atoms())
    }

    pub fn parse_with_cap(text: &str, cap: usize) -> Result<KnowledgeBase, KbError> {
        let mut name = None;
        let mut comments = Vec::new();
        let mut declared: Option<Signature> = None;
        let mut inferred: Vec<String> = Vec::new();
        let mut pairs: Vec<(Formula, Formula)> = Vec::new();
        let mut lines = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let (content, comment) = match raw.find('#') {
                Some(k) => (&raw[..k], Some(raw[k + 1..].trim())),
                None => (raw, None),
            };
            if let Some(c) = comment {
                comments.push(c.to_string());
            }
            let indent = content.len() - content.trim_start().len();
            let body = content.trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix("name:") {
                name = Some(rest.trim().to_string());
            } else if let Some(rest) = body.strip_prefix("signature:") {
                if declared.is_some() {
                    return Err(syntax(line_no, indent + 1, "second signature line"));
                }
                if !pairs.is_empty() {
                    return Err(syntax(line_no, indent + 1, "signature must precede the conditionals"));
                }
                let atoms: Vec<&str> = rest.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
                let sig = Signature::with_cap(&atoms, cap)
                    .map_err(|source| KbError::Signature { line: line_no, source })?;
                declared = Some(sig);
            } else if body.starts_with('(') {
                let (b, a) = parse_conditional(body, line_no, indent, &declared, &mut inferred)?;
                if let Some(first) = pairs.iter().position(|(pb, pa)| *pb == b && *pa == a) {
                    return Err(KbError::DuplicateConditional { line: line_no, first_line: lines[first] });
                }
                pairs.push((b, a));
                lines.push(line_no);
            } else {
                return Err(syntax(line_no, indent + 1, "expected `name:`, `signature:` or a conditional `(B | A)`"));
            }
        }

        let signature = match declared {
            Some(sig) => sig,
            None => Signature::with_cap(&inferred, cap).map_err(|source| KbError::Signature { line: 0, source })?,
        };
        let base = BeliefBase::new(signature, pairs)?;
        let warnings = base
            .semantic_duplicates()
            .into_iter()
            .map(|(a, b)| {
                format!(
                    "line {}: conditional is semantically equal to the one on line {}",
                    lines[b], lines[a]
                )
            })
            .collect();
        Ok(KnowledgeBase { name, base, comments, warnings, lines })
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("kb")
    }

    /// Canonical file text; parsing it again yields the same base.
    pub fn to_kb_string(&self) -> String {
        let sig = self.base.signature();
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("name: {n}\n"));
        }
        out.push_str(&format!("signature: {}\n", sig.atoms().join(", ")));
        for c in self.base.iter() {
            out.push_str(&format!("{}\n", c.display(sig)));
        }
        out
    }
}

fn syntax(line: usize, col: usize, message: &str) -> KbError {
    KbError::Syntax { line, col, message: message.to_string() }
}

/// Parses `(B | A)` into (consequent, antecedent).
pub fn parse_conditional(
    body: &str,
    line: usize,
    indent: usize,
    declared: &Option<Signature>,
    inferred: &mut Vec<String>,
) -> Result<(Formula, Formula), KbError> {
    let bytes = body.as_bytes();
    let mut depth = 0i32;
    let mut bar = None;
    let mut close = None;
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            b'|' if depth == 1 => {
                if bar.is_some() {
                    return Err(syntax(line, indent + i + 1, "a second `|`"));
                }
                bar = Some(i);
            }
            _ => {}
        }
    }
    let close = close.ok_or_else(|| syntax(line, indent + body.len() + 1, "`)` closing the conditional"))?;
    if close + 1 != body.len() {
        return Err(syntax(line, indent + close + 2, "end of line after the conditional"));
    }
    let bar = bar.ok_or_else(|| syntax(line, indent + 1, "`(B | A)` with a `|`"))?;
    let side = |text: &str, offset: usize, inferred: &mut Vec<String>| -> Result<Formula, KbError> {
        let mut resolve = |name: &str| match declared {
            Some(sig) => sig.index_of(name),
            None => Some(inferred.iter().position(|a| a == name).unwrap_or_else(|| {
                inferred.push(name.to_string());
                inferred.len() - 1
            })),
        };
        parse_formula_with(text, &mut resolve).map_err(|e| match e {
            LogicError::Syntax { position, expected } => {
                syntax(line, indent + offset + position + 1, &format!("expected {expected}"))
            }
            LogicError::UnknownAtom(name) => {
                let at = identifier_offset(text, &name).unwrap_or(0);
                syntax(line, indent + offset + at + 1, &format!("unknown atom `{name}`"))
            }
            other => KbError::Syntax { line, col: indent + offset + 1, message: other.to_string() },
        })
    };
    let consequent = side(&body[1..bar], 1, inferred)?;
    let antecedent = side(&body[bar + 1..close], bar + 1, inferred)?;
    Ok((consequent, antecedent))
}

fn identifier_offset(text: &str, name: &str) -> Option<usize> {
    let is_ident = |c: char| c.is_ascii_alphanumeric() || c == '_';
    text.match_indices(name).map(|(i, _)| i).find(|&i| {
        let before = text[..i].chars().next_back().is_none_or(|c| !is_ident(c));
        let after = text[i + name.len()..].chars().next().is_none_or(|c| !is_ident(c));
        before && after
    })
}

/// Parses a query `(B | A)` against a known signature.
pub fn parse_query(text: &str, sig: &Signature) -> Result<(Formula, Formula), KbError> {
    let body = text.trim();
    if !body.starts_with('(') {
        return Err(syntax(1, 1, "query of the form `(B | A)`"));
    }
    parse_conditional(body, 1, 0, &Some(sig.clone()), &mut Vec::new())
}
