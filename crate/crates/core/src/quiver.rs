//! Quivers, paths, and exact linear combinations of paths.
//!
//! A quiver is a finite directed graph. Paths compose left-to-right: `pq`
//! means "p then q" and requires the terminus of `p` to equal the origin of
//! `q`. A [`PathVector`] is a homogeneous k-linear combination of paths of a
//! single length, the element type for everything downstream: relations,
//! resolution generators, and differential coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::error::Error;
use crate::scalar::{FieldSpec, Scalar};

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrow {
    pub name: String,
    pub origin: VertexId,
    pub terminus: VertexId,
}

/// A finite directed graph with named vertices and arrows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver, checking name uniqueness and that arrow endpoints
    /// are declared vertices.
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, Error> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::Validation(format!("duplicate vertex name `{v}`")));
            }
        }
        for (i, a) in arrows.iter().enumerate() {
            if arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Validation(format!(
                    "duplicate arrow name `{}`",
                    a.name
                )));
            }
            if a.origin >= vertices.len() || a.terminus >= vertices.len() {
                return Err(Error::Validation(format!(
                    "arrow `{}` has an undeclared endpoint",
                    a.name
                )));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// The quiver with every arrow reversed (same names, same order).
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    origin: a.terminus,
                    terminus: a.origin,
                })
                .collect(),
        }
    }

    pub fn trivial_path(&self, v: VertexId) -> Path {
        Path {
            origin: v,
            terminus: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow_path(&self, a: ArrowId) -> Path {
        let arr = &self.arrows[a];
        Path {
            origin: arr.origin,
            terminus: arr.terminus,
            arrows: vec![a],
        }
    }

    /// Number of paths of length `d`, without materializing them.
    pub fn path_count(&self, d: usize) -> u128 {
        if d == 0 {
            return self.vertices.len() as u128;
        }
        // counts[v] = number of length-t paths ending at v
        let mut counts = vec![1u128; self.vertices.len()];
        for _ in 0..d {
            let mut next = vec![0u128; self.vertices.len()];
            for a in &self.arrows {
                next[a.terminus] = next[a.terminus].saturating_add(counts[a.origin]);
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, c| acc.saturating_add(*c))
    }
}

/// A directed path: an origin vertex and a composable arrow sequence.
/// The empty sequence is the trivial path at its origin.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    origin: VertexId,
    terminus: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn terminus(&self) -> VertexId {
        self.terminus
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Concatenation `self · other`, or `None` when the endpoints mismatch.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.terminus != other.origin {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            origin: self.origin,
            terminus: other.terminus,
            arrows,
        })
    }

    /// The same arrow sequence walked backwards; a path of the opposite quiver.
    pub fn reversed(&self) -> Path {
        Path {
            origin: self.terminus,
            terminus: self.origin,
            arrows: self.arrows.iter().rev().copied().collect(),
        }
    }

    pub fn display<'a>(&'a self, quiver: &'a Quiver) -> PathDisplay<'a> {
        PathDisplay { path: self, quiver }
    }
}

// Canonical order: by length, then lexicographically by arrow indices, then
// by origin (the last tie-break only matters for trivial paths).
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.origin.cmp(&other.origin))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    quiver: &'a Quiver,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.quiver.vertex_name(self.path.origin))
        } else {
            let names: Vec<&str> = self
                .path
                .arrows
                .iter()
                .map(|&a| self.quiver.arrow(a).name.as_str())
                .collect();
            write!(f, "{}", names.join("*"))
        }
    }
}

/// All paths of length `d`, optionally restricted to one (origin, terminus)
/// block, in canonical order (lexicographic on arrow indices; trivial paths
/// in vertex declaration order).
pub fn enumerate_paths(
    quiver: &Quiver,
    d: usize,
    block: Option<(VertexId, VertexId)>,
) -> Vec<Path> {
    let mut out = Vec::new();
    if d == 0 {
        for v in 0..quiver.vertex_count() {
            if block.map_or(true, |(u, w)| u == v && w == v) {
                out.push(quiver.trivial_path(v));
            }
        }
        return out;
    }
    let mut stack: Vec<ArrowId> = Vec::with_capacity(d);
    fn extend(
        quiver: &Quiver,
        d: usize,
        block: Option<(VertexId, VertexId)>,
        stack: &mut Vec<ArrowId>,
        origin: VertexId,
        at: VertexId,
        out: &mut Vec<Path>,
    ) {
        if stack.len() == d {
            if block.map_or(true, |(_, w)| w == at) {
                out.push(Path {
                    origin,
                    terminus: at,
                    arrows: stack.clone(),
                });
            }
            return;
        }
        for (id, arrow) in quiver.arrows().iter().enumerate() {
            if arrow.origin == at {
                stack.push(id);
                extend(quiver, d, block, stack, origin, arrow.terminus, out);
                stack.pop();
            }
        }
    }
    for (id, arrow) in quiver.arrows().iter().enumerate() {
        if let Some((u, _)) = block {
            if arrow.origin != u {
                continue;
            }
        }
        stack.push(id);
        extend(
            quiver,
            d,
            block,
            &mut stack,
            arrow.origin,
            arrow.terminus,
            &mut out,
        );
        stack.pop();
    }
    out.sort();
    out
}

/// A homogeneous element of the path algebra kQ: a finite linear combination
/// of paths of one fixed length, with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathVector {
    degree: usize,
    terms: BTreeMap<Path, Scalar>,
}

impl PathVector {
    pub fn zero(degree: usize) -> Self {
        PathVector {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Path, Scalar)>>(degree: usize, terms: I) -> Self {
        let mut v = PathVector::zero(degree);
        for (p, c) in terms {
            v.add_term(p, c);
        }
        v
    }

    pub fn single(path: Path, coeff: Scalar) -> Self {
        let degree = path.len();
        PathVector::from_terms(degree, [(path, coeff)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, path: &Path) -> Option<&Scalar> {
        self.terms.get(path)
    }

    pub fn add_term(&mut self, path: Path, coeff: Scalar) {
        assert_eq!(path.len(), self.degree, "inhomogeneous term");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(path) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &PathVector) -> PathVector {
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PathVector) -> PathVector {
        self.add(&other.negated())
    }

    pub fn negated(&self) -> PathVector {
        PathVector {
            degree: self.degree,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn scaled(&self, s: &Scalar) -> PathVector {
        if s.is_zero() {
            return PathVector::zero(self.degree);
        }
        PathVector {
            degree: self.degree,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect(),
        }
    }

    /// Bilinear extension of path concatenation; non-composable pairs
    /// contribute zero. The result lives in degree `self.degree + other.degree`.
    pub fn multiply(&self, other: &PathVector) -> PathVector {
        let mut out = PathVector::zero(self.degree + other.degree);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(r) = p.compose(q) {
                    out.add_term(r, a * b);
                }
            }
        }
        out
    }

    /// Splits into uniform summands by (origin, terminus), ordered by vertex
    /// indices. The blocks partition the terms and sum back to the input.
    pub fn uniform_components(&self) -> Vec<UniformBlock> {
        let mut blocks: BTreeMap<(VertexId, VertexId), PathVector> = BTreeMap::new();
        for (p, c) in &self.terms {
            blocks
                .entry((p.origin(), p.terminus()))
                .or_insert_with(|| PathVector::zero(self.degree))
                .add_term(p.clone(), c.clone());
        }
        blocks
            .into_iter()
            .map(|((origin, terminus), vector)| UniformBlock {
                origin,
                terminus,
                vector,
            })
            .collect()
    }

    /// Coordinates with respect to an ordered path basis; panics if a term
    /// falls outside the basis.
    pub fn to_coords(&self, ambient: &[Path], field: FieldSpec) -> Vec<Scalar> {
        let mut coords = vec![field.zero(); ambient.len()];
        for (p, c) in &self.terms {
            let idx = ambient
                .binary_search(p)
                .unwrap_or_else(|_| panic!("path outside ambient basis"));
            coords[idx] = c.clone();
        }
        coords
    }

    pub fn from_coords(degree: usize, ambient: &[Path], coords: &[Scalar]) -> PathVector {
        assert_eq!(ambient.len(), coords.len());
        PathVector::from_terms(
            degree,
            ambient
                .iter()
                .zip(coords)
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (p.clone(), c.clone())),
        )
    }

    /// All arrow sequences reversed: the image of this element in the
    /// opposite path algebra.
    pub fn reversed(&self) -> PathVector {
        PathVector {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.reversed(), c.clone()))
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, quiver: &'a Quiver) -> PathVectorDisplay<'a> {
        PathVectorDisplay {
            vector: self,
            quiver,
        }
    }
}

/// A uniform element: all paths run from one origin vertex to one terminus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniformBlock {
    pub origin: VertexId,
    pub terminus: VertexId,
    pub vector: PathVector,
}

pub struct PathVectorDisplay<'a> {
    vector: &'a PathVector,
    quiver: &'a Quiver,
}

impl fmt::Display for PathVectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vector.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.vector.terms().enumerate() {
            let (sign, mag) = match c {
                Scalar::Rat(r) if r.is_negative() => ("-", Scalar::Rat(-r)),
                _ => ("+", c.clone()),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if !mag.is_one() || p.is_empty() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", p.display(self.quiver))?;
        }
        Ok(())
    }
}
