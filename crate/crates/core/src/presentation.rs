//! The textual presentation language for algebras `kQ/I`, and its parser.
//!
//! The format is line oriented. `#` starts a comment. Four sections,
//! introduced by a keyword at the start of a line (content may follow the
//! keyword on the same line or on subsequent lines):
//!
//! ```text
//! field Q                 # or GF(p) with p prime
//! vertices u v w
//! arrows
//!   a : u -> v
//!   b : v -> w
//! relations
//!   a*b
//!   2*a*b - 1/3*a*b       # coeff := integer | integer/integer (rationals)
//! ```
//!
//! Relations must be length-homogeneous of degree at least two. They are
//! split into uniform summands (one origin/terminus block each) and stored
//! per degree and block as a canonical reduced-row-echelon basis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::Error;
use crate::linalg::Subspace;
use crate::quiver::{enumerate_paths, Arrow, Path, PathVector, Quiver, UniformBlock, VertexId};
use crate::scalar::FieldSpec;

/// A validated presentation: ground field, quiver, and a canonical basis of
/// uniform homogeneous relations.
#[derive(Clone, PartialEq, Debug)]
pub struct Presentation {
    field: FieldSpec,
    quiver: Quiver,
    relations: Vec<UniformBlock>,
    max_relation_degree: usize,
}

impl Presentation {
    /// Assembles a presentation from parts, splitting relations into
    /// uniform summands and canonicalizing per (degree, block).
    pub fn from_parts(
        field: FieldSpec,
        quiver: Quiver,
        raw_relations: Vec<PathVector>,
    ) -> Result<Self, Error> {
        field.validate()?;
        for rel in &raw_relations {
            if rel.is_zero() {
                return Err(Error::Validation("zero relation".into()));
            }
            if rel.degree() < 2 {
                return Err(Error::Validation(format!(
                    "relation of degree {} (must be at least 2)",
                    rel.degree()
                )));
            }
        }
        let relations = canonicalize_relations(&quiver, field, &raw_relations);
        let max_relation_degree = relations
            .iter()
            .map(|r| r.vector.degree())
            .max()
            .unwrap_or(0);
        Ok(Presentation {
            field,
            quiver,
            relations,
            max_relation_degree,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Canonical relation basis, ordered by degree, then block, then row.
    pub fn relations(&self) -> &[UniformBlock] {
        &self.relations
    }

    pub fn relations_of_degree(&self, d: usize) -> impl Iterator<Item = &UniformBlock> {
        self.relations
            .iter()
            .filter(move |r| r.vector.degree() == d)
    }

    pub fn max_relation_degree(&self) -> usize {
        self.max_relation_degree
    }

    /// True when every relation has degree exactly two (vacuously true for
    /// the hereditary case of no relations).
    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.vector.degree() == 2)
    }

    /// The same algebra presented over the opposite quiver, with every
    /// relation reversed. Mirrors left-module questions into right-module
    /// ones.
    pub fn opposite(&self) -> Presentation {
        let quiver = self.quiver.opposite();
        let raw: Vec<PathVector> = self.relations.iter().map(|r| r.vector.reversed()).collect();
        Presentation::from_parts(self.field, quiver, raw)
            .expect("opposite of a valid presentation is valid")
    }

    /// Canonical textual form in the input grammar; parsing it back yields
    /// an equal presentation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("field {}\n", self.field));
        out.push_str("vertices");
        for v in self.quiver.vertex_names() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
        if self.quiver.arrow_count() > 0 {
            out.push_str("arrows\n");
            for a in self.quiver.arrows() {
                out.push_str(&format!(
                    "  {} : {} -> {}\n",
                    a.name,
                    self.quiver.vertex_name(a.origin),
                    self.quiver.vertex_name(a.terminus)
                ));
            }
        }
        if !self.relations.is_empty() {
            out.push_str("relations\n");
            for r in &self.relations {
                out.push_str(&format!("  {}\n", r.vector.display(&self.quiver)));
            }
        }
        out
    }
}

/// Splits into uniform components, groups by (degree, origin, terminus),
/// and replaces each group by its canonical RREF basis.
fn canonicalize_relations(
    quiver: &Quiver,
    field: FieldSpec,
    raw: &[PathVector],
) -> Vec<UniformBlock> {
    let mut groups: BTreeMap<(usize, VertexId, VertexId), Vec<PathVector>> = BTreeMap::new();
    for rel in raw {
        for block in rel.uniform_components() {
            groups
                .entry((block.vector.degree(), block.origin, block.terminus))
                .or_default()
                .push(block.vector);
        }
    }
    let mut out = Vec::new();
    for ((degree, origin, terminus), vectors) in groups {
        let ambient = enumerate_paths(quiver, degree, Some((origin, terminus)));
        let space = Subspace::from_spanning(ambient, field, &vectors);
        for v in space.basis_vectors(degree) {
            out.push(UniformBlock {
                origin,
                terminus,
                vector: v,
            });
        }
    }
    out
}

/// Parses the presentation language. See the module docs for the grammar.
pub fn parse_presentation(text: &str) -> Result<Presentation, Error> {
    parse_with_field(text, None)
}

/// Like [`parse_presentation`] but with the ground field overridden,
/// ignoring (and not requiring) the `field` section of the input.
pub fn parse_with_field(text: &str, field: Option<FieldSpec>) -> Result<Presentation, Error> {
    let raw = RawPresentation::parse(text)?;
    raw.build(field)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Severity {
    Info,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Info => write!(f, "info"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

/// Non-fatal observations about a parsed presentation. Never mutates.
pub fn validate_presentation(p: &Presentation) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for r in p.relations() {
        let d = r.vector.degree();
        if d > 2 {
            out.push(Diagnostic {
                severity: Severity::Warning,
                message: format!("relation of degree {d}: algebra is not quadratic"),
            });
        }
    }
    if p.relations().is_empty() {
        out.push(Diagnostic {
            severity: Severity::Info,
            message: "hereditary: resolution terminates at level 1".into(),
        });
    }
    out
}

// ---------------------------------------------------------------------------
// raw parse tree
// ---------------------------------------------------------------------------

struct RawArrow {
    name: String,
    origin: String,
    terminus: String,
    line: usize,
    col: usize,
}

struct RawCoeff {
    numerator: BigInt,
    denominator: Option<BigInt>,
    line: usize,
    col: usize,
}

struct RawTerm {
    sign: i64,
    coeff: Option<RawCoeff>,
    // arrow names with their positions
    path: Vec<(String, usize, usize)>,
}

struct RawRelation {
    terms: Vec<RawTerm>,
    line: usize,
}

struct RawPresentation {
    field: Option<(FieldSpec, usize)>,
    vertices: Vec<(String, usize, usize)>,
    arrows: Vec<RawArrow>,
    relations: Vec<RawRelation>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Field,
    Vertices,
    Arrows,
    Relations,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RawPresentation {
    fn parse(text: &str) -> Result<RawPresentation, Error> {
        let mut raw = RawPresentation {
            field: None,
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
        };
        let mut section = Section::None;
        for (idx, full_line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match full_line.find('#') {
                Some(pos) => &full_line[..pos],
                None => full_line,
            };
            if line.trim().is_empty() {
                continue;
            }
            let trimmed = line.trim_start();
            let indent = line.len() - trimmed.len();
            let (keyword, rest) = match trimmed.find(char::is_whitespace) {
                Some(pos) => (&trimmed[..pos], trimmed[pos..].trim_start()),
                None => (trimmed, ""),
            };
            let (content, content_col) = match keyword {
                "field" => {
                    section = Section::Field;
                    (rest, indent + trimmed.len() - rest.len() + 1)
                }
                "vertices" => {
                    section = Section::Vertices;
                    (rest, indent + trimmed.len() - rest.len() + 1)
                }
                "arrows" => {
                    section = Section::Arrows;
                    (rest, indent + trimmed.len() - rest.len() + 1)
                }
                "relations" => {
                    section = Section::Relations;
                    (rest, indent + trimmed.len() - rest.len() + 1)
                }
                _ => (trimmed, indent + 1),
            };
            if content.is_empty() {
                continue;
            }
            match section {
                Section::None => {
                    return Err(Error::parse(
                        lineno,
                        content_col,
                        "expected a section keyword (field, vertices, arrows, relations)",
                    ));
                }
                Section::Field => {
                    if raw.field.is_some() {
                        return Err(Error::parse(
                            lineno,
                            content_col,
                            "duplicate field declaration",
                        ));
                    }
                    raw.field = Some((parse_field(content, lineno, content_col)?, lineno));
                }
                Section::Vertices => {
                    let mut col = content_col;
                    for piece in content.split(|c: char| c.is_whitespace() || c == ',') {
                        if piece.is_empty() {
                            col += 1;
                            continue;
                        }
                        if !is_ident(piece) {
                            return Err(Error::parse(
                                lineno,
                                col,
                                format!("invalid vertex name `{piece}`"),
                            ));
                        }
                        raw.vertices.push((piece.to_string(), lineno, col));
                        col += piece.len() + 1;
                    }
                }
                Section::Arrows => {
                    raw.arrows.push(parse_arrow(content, lineno, content_col)?);
                }
                Section::Relations => {
                    let terms = RelationScanner::new(content, lineno, content_col).parse()?;
                    raw.relations.push(RawRelation {
                        terms,
                        line: lineno,
                    });
                }
            }
        }
        Ok(raw)
    }

    fn build(self, field_override: Option<FieldSpec>) -> Result<Presentation, Error> {
        let field = match (field_override, &self.field) {
            (Some(f), _) => f,
            (None, Some((f, _))) => *f,
            (None, None) => {
                return Err(Error::parse(1, 1, "missing field declaration"));
            }
        };
        field.validate()?;

        let mut vertex_names = Vec::with_capacity(self.vertices.len());
        for (name, line, col) in &self.vertices {
            if vertex_names.contains(name) {
                return Err(Error::parse(
                    *line,
                    *col,
                    format!("duplicate vertex `{name}`"),
                ));
            }
            vertex_names.push(name.clone());
        }
        let mut arrows = Vec::with_capacity(self.arrows.len());
        for a in &self.arrows {
            let origin = vertex_names
                .iter()
                .position(|v| *v == a.origin)
                .ok_or_else(|| {
                    Error::parse(a.line, a.col, format!("unknown vertex `{}`", a.origin))
                })?;
            let terminus = vertex_names
                .iter()
                .position(|v| *v == a.terminus)
                .ok_or_else(|| {
                    Error::parse(a.line, a.col, format!("unknown vertex `{}`", a.terminus))
                })?;
            if arrows.iter().any(|b: &Arrow| b.name == a.name) {
                return Err(Error::parse(
                    a.line,
                    a.col,
                    format!("duplicate arrow `{}`", a.name),
                ));
            }
            arrows.push(Arrow {
                name: a.name.clone(),
                origin,
                terminus,
            });
        }
        let quiver = Quiver::new(vertex_names, arrows).map_err(|e| match e {
            Error::Validation(msg) => Error::parse(1, 1, msg),
            other => other,
        })?;

        let mut raw_relations = Vec::with_capacity(self.relations.len());
        for rel in &self.relations {
            raw_relations.push(build_relation(rel, &quiver, field)?);
        }
        let relations = canonicalize_relations(&quiver, field, &raw_relations);
        let max_relation_degree = relations
            .iter()
            .map(|r| r.vector.degree())
            .max()
            .unwrap_or(0);
        Ok(Presentation {
            field,
            quiver,
            relations,
            max_relation_degree,
        })
    }
}

fn parse_field(content: &str, line: usize, col: usize) -> Result<FieldSpec, Error> {
    let content = content.trim();
    if content == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(inner) = content
        .strip_prefix("GF(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, col, format!("invalid characteristic `{inner}`")))?;
        let spec = FieldSpec::PrimeField(p);
        spec.validate()?;
        return Ok(spec);
    }
    Err(Error::parse(
        line,
        col,
        format!("unknown field `{content}` (expected Q or GF(p))"),
    ))
}

fn parse_arrow(content: &str, line: usize, col: usize) -> Result<RawArrow, Error> {
    let err = || Error::parse(line, col, "expected arrow declaration `name : u -> v`");
    let (name, rest) = content.split_once(':').ok_or_else(err)?;
    let (origin, terminus) = rest.split_once("->").ok_or_else(err)?;
    let (name, origin, terminus) = (name.trim(), origin.trim(), terminus.trim());
    if !is_ident(name) || !is_ident(origin) || !is_ident(terminus) {
        return Err(err());
    }
    Ok(RawArrow {
        name: name.to_string(),
        origin: origin.to_string(),
        terminus: terminus.to_string(),
        line,
        col,
    })
}

fn build_relation(
    rel: &RawRelation,
    quiver: &Quiver,
    field: FieldSpec,
) -> Result<PathVector, Error> {
    let mut vector: Option<PathVector> = None;
    for term in &rel.terms {
        let mut coeff = match &term.coeff {
            None => field.one(),
            Some(c) => {
                let num = field.from_bigint(&c.numerator);
                match (&c.denominator, field) {
                    (None, _) => num,
                    (Some(d), FieldSpec::Rationals) => {
                        let den = field.from_bigint(d);
                        if den.is_zero() {
                            return Err(Error::parse(c.line, c.col, "zero denominator"));
                        }
                        &num * &den.inverse()
                    }
                    (Some(_), FieldSpec::PrimeField(_)) => {
                        return Err(Error::parse(
                            c.line,
                            c.col,
                            "rational coefficient not allowed over a prime field",
                        ));
                    }
                }
            }
        };
        if term.sign < 0 {
            coeff = -&coeff;
        }
        let mut path: Option<Path> = None;
        for (name, line, col) in &term.path {
            let id = quiver
                .arrow_index(name)
                .ok_or_else(|| Error::parse(*line, *col, format!("unknown arrow `{name}`")))?;
            let step = quiver.arrow_path(id);
            path = Some(match path {
                None => step,
                Some(p) => p.compose(&step).ok_or_else(|| {
                    Error::parse(
                        *line,
                        *col,
                        format!("non-composable path: `{name}` does not start where the previous arrow ends"),
                    )
                })?,
            });
        }
        let path = path.expect("terms always contain a path");
        match &mut vector {
            None => vector = Some(PathVector::single(path, coeff)),
            Some(v) => {
                if v.degree() != path.len() {
                    return Err(Error::parse(
                        rel.line,
                        1,
                        format!(
                            "mixed-degree relation: term of degree {} after degree {}",
                            path.len(),
                            v.degree()
                        ),
                    ));
                }
                v.add_term(path, coeff);
            }
        }
    }
    let vector = vector.expect("relations always contain a term");
    if vector.is_zero() {
        return Err(Error::parse(
            rel.line,
            1,
            "relation is zero after combining terms",
        ));
    }
    if vector.degree() < 2 {
        return Err(Error::parse(
            rel.line,
            1,
            format!(
                "relation of degree {} (must be at least 2)",
                vector.degree()
            ),
        ));
    }
    Ok(vector)
}

// ---------------------------------------------------------------------------
// relation expression scanner
// ---------------------------------------------------------------------------

struct RelationScanner<'a> {
    chars: Vec<(usize, char)>, // (column, char)
    pos: usize,
    line: usize,
    text_for_errors: &'a str,
}

impl<'a> RelationScanner<'a> {
    fn new(content: &'a str, line: usize, start_col: usize) -> Self {
        let chars = content
            .char_indices()
            .map(|(i, c)| (start_col + i, c))
            .collect();
        RelationScanner {
            chars,
            pos: 0,
            line,
            text_for_errors: content,
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        let _ = self.text_for_errors;
        Error::parse(self.line, col, msg)
    }

    fn current_col(&self) -> usize {
        self.peek()
            .map_or_else(|| self.chars.last().map_or(1, |(c, _)| c + 1), |(c, _)| c)
    }

    fn scan_ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let (col, c) = self.peek()?;
        if !(c.is_ascii_alphabetic() || c == '_') {
            return None;
        }
        let mut s = String::new();
        while let Some((_, c)) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Some((s, col))
    }

    fn scan_int(&mut self) -> Option<(BigInt, usize)> {
        self.skip_ws();
        let (col, c) = self.peek()?;
        if !c.is_ascii_digit() {
            return None;
        }
        let mut s = String::new();
        while let Some((_, c)) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Some((BigInt::from_str(&s).expect("digits"), col))
    }

    fn expect_char(&mut self, want: char) -> Result<(), Error> {
        self.skip_ws();
        match self.peek() {
            Some((_, c)) if c == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(self.current_col(), format!("expected `{want}`"))),
        }
    }

    fn parse(mut self) -> Result<Vec<RawTerm>, Error> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut sign = match self.peek() {
            Some((_, '-')) => {
                self.pos += 1;
                -1
            }
            Some((_, '+')) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            terms.push(self.parse_term(sign)?);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some((_, '+')) => {
                    self.pos += 1;
                    sign = 1;
                }
                Some((_, '-')) => {
                    self.pos += 1;
                    sign = -1;
                }
                Some((col, c)) => {
                    return Err(self.err(col, format!("expected `+` or `-`, found `{c}`")));
                }
            }
        }
        Ok(terms)
    }

    fn parse_term(&mut self, sign: i64) -> Result<RawTerm, Error> {
        self.skip_ws();
        let coeff = if let Some((numerator, col)) = self.scan_int() {
            let denominator = {
                self.skip_ws();
                if matches!(self.peek(), Some((_, '/'))) {
                    self.pos += 1;
                    let (d, _) = self
                        .scan_int()
                        .ok_or_else(|| self.err(self.current_col(), "expected denominator"))?;
                    Some(d)
                } else {
                    None
                }
            };
            self.expect_char('*')?;
            Some(RawCoeff {
                numerator,
                denominator,
                line: self.line,
                col,
            })
        } else {
            None
        };
        let mut path = Vec::new();
        let (first, col) = self
            .scan_ident()
            .ok_or_else(|| self.err(self.current_col(), "expected an arrow name"))?;
        path.push((first, self.line, col));
        loop {
            self.skip_ws();
            if matches!(self.peek(), Some((_, '*'))) {
                // lookahead: `*` may be followed by another arrow only
                self.pos += 1;
                let (name, col) = self.scan_ident().ok_or_else(|| {
                    self.err(self.current_col(), "expected an arrow name after `*`")
                })?;
                path.push((name, self.line, col));
            } else {
                break;
            }
        }
        Ok(RawTerm { sign, coeff, path })
    }
}
