//! Shared test support: the corpus of presentations and a brute-force
//! graded Betti oracle.
//!
//! The oracle computes a minimal graded resolution of the degree-zero part
//! degree by degree, with no linearity assumption: at each stage it takes
//! the graded kernel of the current projective cover, counts minimal
//! generators per degree as the codimension of (kernel)·(radical), and
//! lifts them as the next cover. It shares only the exact linear algebra
//! and normal-form substrate with the engine under test, not the
//! intersection construction, so it is an independent check of every rank
//! the engine reports.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use koszul::linalg::Matrix;
use koszul::quiver::{Path, PathVector, VertexId};
use koszul::quotient::QuotientAlgebra;
use koszul::scalar::Scalar;
use koszul::{Presentation, DEFAULT_SIZE_LIMIT};

pub fn algebras_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../algebras")
}

pub fn load(name: &str) -> String {
    let path = algebras_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path:?}: {e}"))
}

/// The Koszul corpus used across the acceptance criteria.
pub const CORPUS: [&str; 6] = [
    "dn.alg",
    "poly2.alg",
    "qp2.alg",
    "qp3.alg",
    "a4z.alg",
    "a3.alg",
];

/// One generator of a projective term in the oracle resolution: it covers
/// `e_vertex · Λ` shifted into `degree`, and maps to `image` in the
/// previous term (empty at level zero, where the cover maps onto Λ₀).
struct OracleGen {
    vertex: VertexId,
    degree: usize,
    image: Vec<(usize, PathVector)>,
}

/// Basis of the degree-d, terminus-w slice of the projective with the
/// given generators: one coordinate per (generator, class path).
fn slice_basis(
    alg: &QuotientAlgebra,
    gens: &[OracleGen],
    d: usize,
    w: VertexId,
) -> Vec<(usize, Path)> {
    let mut out = Vec::new();
    for (g, gen) in gens.iter().enumerate() {
        if gen.degree > d {
            continue;
        }
        for path in alg.class_basis(d - gen.degree, gen.vertex, w) {
            out.push((g, path.clone()));
        }
    }
    out
}

/// Graded Betti numbers β(n, d) for n ≤ max_level, d ≤ max_degree, by
/// degree-wise syzygy computation.
pub fn graded_betti(
    p: &Presentation,
    max_level: usize,
    max_degree: usize,
) -> BTreeMap<(usize, usize), usize> {
    let alg = QuotientAlgebra::new(p, max_degree, DEFAULT_SIZE_LIMIT).unwrap();
    let quiver = p.quiver();
    let field = p.field();
    let mut beta = BTreeMap::new();

    // level 0: one cover generator per vertex
    let mut prev_gens: Vec<OracleGen> = Vec::new();
    let mut gens: Vec<OracleGen> = (0..quiver.vertex_count())
        .map(|v| OracleGen {
            vertex: v,
            degree: 0,
            image: Vec::new(),
        })
        .collect();
    beta.insert((0, 0), gens.len());

    for n in 0..max_level {
        // kernel bases of the level-n map, per (terminus, degree)
        let mut kernels: BTreeMap<(VertexId, usize), Vec<Vec<Scalar>>> = BTreeMap::new();
        for w in 0..quiver.vertex_count() {
            for d in 0..=max_degree {
                let dom = slice_basis(&alg, &gens, d, w);
                if dom.is_empty() {
                    kernels.insert((w, d), Vec::new());
                    continue;
                }
                let rows: Vec<Vec<Scalar>> = if n == 0 {
                    // augmentation onto Λ₀: injective in degree 0, zero above
                    if d == 0 {
                        Vec::new()
                    } else {
                        let id = Matrix::identity(field, dom.len());
                        (0..dom.len()).map(|i| id.row_vec(i)).collect()
                    }
                } else {
                    let cod = slice_basis(&alg, &prev_gens, d, w);
                    let index: BTreeMap<(usize, Path), usize> = cod
                        .iter()
                        .cloned()
                        .enumerate()
                        .map(|(k, key)| (key, k))
                        .collect();
                    let mut m = Matrix::zero(field, cod.len(), dom.len());
                    for (col, (g, b)) in dom.iter().enumerate() {
                        let class = PathVector::single(b.clone(), field.one());
                        for (tgt, x) in &gens[*g].image {
                            let img = alg.normal_form(&x.multiply(&class));
                            for (path, c) in img.terms() {
                                let row = index[&(*tgt, path.clone())];
                                let add = c + m.get(row, col);
                                m.set(row, col, add);
                            }
                        }
                    }
                    let null = m.nullspace();
                    (0..null.rows()).map(|i| null.row_vec(i)).collect()
                };
                kernels.insert((w, d), rows);
            }
        }

        // minimal generators per (degree, terminus): kernel modulo
        // (previous-degree kernel)·(arrows)
        let mut new_gens: Vec<OracleGen> = Vec::new();
        for d in 0..=max_degree {
            for w in 0..quiver.vertex_count() {
                let kernel_rows = &kernels[&(w, d)];
                if kernel_rows.is_empty() {
                    continue;
                }
                let dom = slice_basis(&alg, &gens, d, w);
                let index: BTreeMap<(usize, Path), usize> = dom
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(k, key)| (key, k))
                    .collect();
                let mut radical_rows: Vec<Vec<Scalar>> = Vec::new();
                if d > 0 {
                    for a in 0..quiver.arrow_count() {
                        let arrow = quiver.arrow(a);
                        if arrow.terminus != w {
                            continue;
                        }
                        let prev_basis = slice_basis(&alg, &gens, d - 1, arrow.origin);
                        let step = PathVector::single(quiver.arrow_path(a), field.one());
                        for row in &kernels[&(arrow.origin, d - 1)] {
                            let mut out = vec![field.zero(); dom.len()];
                            for ((g, b), c) in prev_basis.iter().zip(row) {
                                if c.is_zero() {
                                    continue;
                                }
                                let moved = alg.normal_form(
                                    &PathVector::single(b.clone(), c.clone()).multiply(&step),
                                );
                                for (path, cc) in moved.terms() {
                                    let k = index[&(*g, path.clone())];
                                    out[k] = &out[k] + cc;
                                }
                            }
                            radical_rows.push(out);
                        }
                    }
                }
                let radical_rank = if radical_rows.is_empty() {
                    0
                } else {
                    Matrix::from_rows(field, radical_rows.clone()).rank()
                };
                let mut stacked = radical_rows.clone();
                stacked.extend(kernel_rows.iter().cloned());
                let total_rank = Matrix::from_rows(field, stacked).rank();
                let count = total_rank - radical_rank;
                if count == 0 {
                    continue;
                }
                *beta.entry((n + 1, d)).or_insert(0) += count;
                // lift a complement basis as the new generators
                let mut picked = 0usize;
                let mut seen = radical_rows;
                let canon = Matrix::from_rows(field, kernel_rows.clone()).rref();
                for i in 0..canon.rank {
                    if picked == count {
                        break;
                    }
                    let candidate = canon.matrix.row_vec(i);
                    let mut trial = seen.clone();
                    trial.push(candidate.clone());
                    if Matrix::from_rows(field, trial).rank() > radical_rank + picked {
                        seen.push(candidate.clone());
                        picked += 1;
                        let mut image: BTreeMap<usize, PathVector> = BTreeMap::new();
                        for ((g, b), c) in dom.iter().zip(&candidate) {
                            if c.is_zero() {
                                continue;
                            }
                            image
                                .entry(*g)
                                .or_insert_with(|| PathVector::zero(d - gens[*g].degree))
                                .add_term(b.clone(), c.clone());
                        }
                        new_gens.push(OracleGen {
                            vertex: w,
                            degree: d,
                            image: image.into_iter().collect(),
                        });
                    }
                }
                assert_eq!(picked, count, "failed to lift minimal generators");
            }
        }
        prev_gens = std::mem::replace(&mut gens, new_gens);
        if gens.is_empty() {
            break;
        }
    }
    beta
}

/// Betti numbers read off the oracle diagonal; entries beyond the last
/// computed level are zero.
pub fn oracle_betti(p: &Presentation, max_level: usize, max_degree: usize) -> Vec<usize> {
    let beta = graded_betti(p, max_level, max_degree);
    (0..=max_level)
        .map(|n| beta.get(&(n, n)).copied().unwrap_or(0))
        .collect()
}

/// True when the oracle sees no generator away from the diagonal, i.e. the
/// minimal resolution is linear in the inspected range.
pub fn oracle_linear(p: &Presentation, max_level: usize, max_degree: usize) -> bool {
    graded_betti(p, max_level, max_degree)
        .iter()
        .all(|(&(n, d), &count)| count == 0 || n == d)
}
