//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `--nocapture`). Every assertion is exact; there are no
//! tolerances anywhere.

mod common;

use std::time::Instant;

use koszul::bimodule::{
    build_bimodule_resolution, check_linear_over_enveloping, tensor_down_left, tensor_down_right,
    verify_delta_squared,
};
use koszul::comult::{build_left_resolution, comult_table, verify_h_identity};
use koszul::presentation::parse_with_field;
use koszul::quiver::PathVector;
use koszul::quotient::QuotientAlgebra;
use koszul::resolution::{certify_koszul_up_to, compute_resolution, KoszulVerdict, Witness};
use koszul::{parse_presentation, FieldSpec, DEFAULT_SIZE_LIMIT};

const FIELDS: [FieldSpec; 2] = [FieldSpec::Rationals, FieldSpec::PrimeField(5)];
const LEVELS: usize = 6;
const DEGREE: usize = 8;

fn corpus_over(field: FieldSpec) -> Vec<(String, koszul::Presentation)> {
    common::CORPUS
        .iter()
        .map(|name| {
            let text = common::load(name);
            let p = parse_with_field(&text, Some(field)).unwrap();
            (name.to_string(), p)
        })
        .collect()
}

#[test]
fn criterion_1_comult_reconstruction() {
    let start = Instant::now();
    for field in FIELDS {
        for (name, p) in corpus_over(field) {
            let data = compute_resolution(&p, LEVELS, DEFAULT_SIZE_LIMIT).unwrap();
            let table = comult_table(&data, LEVELS).unwrap();
            // every level must be covered by the table up to its rank
            for n in 1..=data.max_level() {
                for i in 0..data.level(n).rank() {
                    for r in 0..=n {
                        assert!(
                            table.entries.contains_key(&(n, i, r)),
                            "{name}/{field}: missing entry ({n}, {i}, {r})"
                        );
                    }
                }
            }
            for (&(n, i, r), entry) in &table.entries {
                let mut sum = PathVector::zero(n);
                for ((pi, qi), c) in &entry.coefficients {
                    let prod = data
                        .generator(r, *pi)
                        .vector
                        .multiply(&data.generator(n - r, *qi).vector);
                    sum = sum.add(&prod.scaled(c));
                }
                assert_eq!(
                    sum,
                    data.generator(n, i).vector,
                    "{name}/{field}: reconstruction fails at (n={n}, i={i}, r={r})"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "reconstruction sweep took {elapsed:?}, budget is 30 s"
    );
    println!(
        "criterion 1: PASS — comult reconstruction exact on corpus over Q and GF(5) in {elapsed:?}"
    );
}

#[test]
fn criterion_2_differential_identity() {
    for field in FIELDS {
        for (name, p) in corpus_over(field) {
            let data = compute_resolution(&p, LEVELS, DEFAULT_SIZE_LIMIT).unwrap();
            let table = comult_table(&data, LEVELS).unwrap();
            let report = verify_h_identity(&table, &data);
            assert!(report.ok, "{name}/{field}: {:?}", report.failures);
        }
    }
    println!(
        "criterion 2: PASS — differential equals arrows contracted with split-at-(n-1) constants"
    );
}

#[test]
fn criterion_3_delta_squared_zero() {
    for field in FIELDS {
        for (name, p) in corpus_over(field) {
            let data = compute_resolution(&p, LEVELS, DEFAULT_SIZE_LIMIT).unwrap();
            let table = comult_table(&data, LEVELS).unwrap();
            let res = build_bimodule_resolution(&table, &data).unwrap();
            let alg = QuotientAlgebra::new(&p, 2, DEFAULT_SIZE_LIMIT).unwrap();
            let report = verify_delta_squared(&res, &alg);
            assert!(report.ok, "{name}/{field}: {:?}", report.failures);
            assert!(check_linear_over_enveloping(&res), "{name}/{field}");
        }
    }
    println!("criterion 3: PASS — bimodule differential squares to zero mod I on corpus");
}

#[test]
fn criterion_4_tensor_down() {
    for field in FIELDS {
        for (name, p) in corpus_over(field) {
            let data = compute_resolution(&p, LEVELS, DEFAULT_SIZE_LIMIT).unwrap();
            let table = comult_table(&data, LEVELS).unwrap();
            let res = build_bimodule_resolution(&table, &data).unwrap();
            let right = tensor_down_right(&res, &table, &data);
            assert!(right.ok, "{name}/{field}: {:?}", right.failures);
            let left_data = build_left_resolution(&table, &data);
            let left = tensor_down_left(&res, &left_data);
            assert!(left.ok, "{name}/{field}: {:?}", left.failures);
        }
    }
    println!(
        "criterion 4: PASS — collapsing the left factor gives (-1)^n times the right differential; collapsing the right factor gives the left differential exactly"
    );
}

#[test]
fn criterion_5_left_right_agreement() {
    for field in FIELDS {
        for (name, p) in corpus_over(field) {
            let report =
                koszul::comult::verify_left_resolution(&p, LEVELS, DEGREE, DEFAULT_SIZE_LIMIT)
                    .unwrap();
            assert!(report.ranks_equal, "{name}/{field}: {:?}", report.failures);
            assert!(report.spans_equal, "{name}/{field}: {:?}", report.failures);
            assert!(report.ok(), "{name}/{field}: {:?}", report.failures);
        }
    }
    println!(
        "criterion 5: PASS — mirrored construction has equal ranks and generator spans per level"
    );
}

#[test]
fn criterion_6_exactness_and_betti() {
    // certified exactness up to (6, 8) for the Koszul corpus
    for (name, p) in corpus_over(FieldSpec::Rationals) {
        let verdict = certify_koszul_up_to(&p, LEVELS, DEGREE, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(
            verdict,
            KoszulVerdict::KoszulUpTo {
                levels: LEVELS,
                degree: DEGREE
            },
            "{name}"
        );
    }
    // Betti sequences against frozen closed forms
    let expected: [(&str, &[usize]); 5] = [
        ("dn.alg", &[1, 1, 1, 1, 1, 1, 1]),
        ("poly2.alg", &[1, 2, 1, 0, 0, 0, 0]),
        ("poly3.alg", &[1, 3, 3, 1, 0, 0, 0]),
        ("a4z.alg", &[4, 3, 2, 1, 0, 0, 0]),
        ("a3.alg", &[3, 2, 0, 0, 0, 0, 0]),
    ];
    for (name, betti) in expected {
        let p = parse_presentation(&common::load(name)).unwrap();
        let data = compute_resolution(&p, LEVELS, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(data.betti(), betti, "{name}");
    }
    // and against the live brute-force oracle, including the ring in three
    // variables which certifies up to (6, 8) as well
    let poly3 = parse_presentation(&common::load("poly3.alg")).unwrap();
    let verdict = certify_koszul_up_to(&poly3, LEVELS, DEGREE, DEFAULT_SIZE_LIMIT).unwrap();
    assert!(verdict.is_certified());
    let data = compute_resolution(&poly3, 4, DEFAULT_SIZE_LIMIT).unwrap();
    assert_eq!(data.betti(), common::oracle_betti(&poly3, 4, 6));
    println!(
        "criterion 6: PASS — homology vanishes up to (6, 8) and Betti sequences match the oracles"
    );
}

#[test]
fn criterion_7_negative_detection() {
    // cubic relation: refused with a non-quadratic witness, exit code 1
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_koszul"))
        .args(["check-koszul"])
        .arg(common::algebras_dir().join("kr3.alg"))
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(1),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["verdict"]["status"], "not_koszul");
    assert_eq!(json["verdict"]["witness"]["kind"], "non_quadratic_relation");
    assert_eq!(json["verdict"]["witness"]["degree"], 3);

    // quadratic but not Koszul: flagged with a homology witness in range
    let text = common::load("nonkoszul3.alg");
    let p = parse_presentation(&text).unwrap();
    assert!(p.is_quadratic());
    let verdict = certify_koszul_up_to(&p, 4, 6, DEFAULT_SIZE_LIMIT).unwrap();
    match verdict {
        KoszulVerdict::NotKoszul {
            witness: Witness::HomologyNonzero { level, degree, dim },
        } => {
            assert!(level <= 4 && degree <= 6, "witness at ({level}, {degree})");
            assert!(dim > 0);
            println!(
                "criterion 7: PASS — cubic input exits 1 with witness; quadratic non-Koszul flagged at level {level}, degree {degree}"
            );
        }
        other => panic!("expected a homology witness, got {other:?}"),
    }
    // the independent oracle agrees that the resolution is not linear
    assert!(!common::oracle_linear(&p, 4, 6));
}

#[test]
fn criterion_8_report_determinism() {
    let dir = std::env::temp_dir().join("koszul-acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    for name in common::CORPUS {
        let input = common::algebras_dir().join(name);
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("{name}.{run}.json"));
            let status = std::process::Command::new(env!("CARGO_BIN_EXE_koszul"))
                .arg("report")
                .arg(&input)
                .arg("-o")
                .arg(&path)
                .status()
                .unwrap();
            assert_eq!(status.code(), Some(0), "{name}");
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(
            outputs[0], outputs[1],
            "{name}: reports differ between runs"
        );
        assert!(!outputs[0].is_empty());
    }
    println!("criterion 8: PASS — repeated reports are byte-identical on the corpus");
}

#[test]
fn criterion_9_field_independence() {
    for name in common::CORPUS {
        let text = common::load(name);
        let over_q = parse_with_field(&text, Some(FieldSpec::Rationals)).unwrap();
        let over_f5 = parse_with_field(&text, Some(FieldSpec::PrimeField(5))).unwrap();
        let betti_q = compute_resolution(&over_q, LEVELS, DEFAULT_SIZE_LIMIT)
            .unwrap()
            .betti();
        let betti_f5 = compute_resolution(&over_f5, LEVELS, DEFAULT_SIZE_LIMIT)
            .unwrap()
            .betti();
        assert_eq!(betti_q, betti_f5, "{name}");
    }
    println!("criterion 9: PASS — Betti numbers agree between Q and GF(5) on the corpus");
}
