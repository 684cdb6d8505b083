//! Cross-checks of the brute-force graded Betti oracle against closed
//! forms, and of the engine against the oracle.

mod common;

use koszul::resolution::compute_resolution;
use koszul::{parse_presentation, DEFAULT_SIZE_LIMIT};

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn oracle_matches_closed_forms() {
    // dual numbers: one generator at every level
    let dn = parse_presentation(&common::load("dn.alg")).unwrap();
    assert_eq!(common::oracle_betti(&dn, 5, 7), vec![1; 6]);
    assert!(common::oracle_linear(&dn, 5, 7));

    // polynomial rings: binomial ranks
    let poly2 = parse_presentation(&common::load("poly2.alg")).unwrap();
    assert_eq!(
        common::oracle_betti(&poly2, 4, 6),
        (0..=4).map(|n| binomial(2, n)).collect::<Vec<_>>()
    );
    let poly3 = parse_presentation(&common::load("poly3.alg")).unwrap();
    assert_eq!(
        common::oracle_betti(&poly3, 5, 7),
        (0..=5).map(|n| binomial(3, n)).collect::<Vec<_>>()
    );

    // zigzag: one fewer generator per level
    let a4z = parse_presentation(&common::load("a4z.alg")).unwrap();
    assert_eq!(common::oracle_betti(&a4z, 5, 6), vec![4, 3, 2, 1, 0, 0]);

    // hereditary: stops after the arrows
    let a3 = parse_presentation(&common::load("a3.alg")).unwrap();
    assert_eq!(common::oracle_betti(&a3, 3, 5), vec![3, 2, 0, 0]);
}

#[test]
fn oracle_sees_nonlinear_syzygies_of_cubic_relations() {
    // k[x]/(x³) resolves with period-two degree jumps (3, 4, 6, 7, ...):
    // the oracle must place generators off the diagonal
    let kr3 = parse_presentation(&common::load("kr3.alg")).unwrap();
    let beta = common::graded_betti(&kr3, 3, 7);
    assert_eq!(beta[&(0, 0)], 1);
    assert_eq!(beta[&(1, 1)], 1);
    assert_eq!(beta.get(&(2, 2)).copied().unwrap_or(0), 0);
    assert_eq!(beta[&(2, 3)], 1);
    assert_eq!(beta[&(3, 4)], 1);
    assert!(!common::oracle_linear(&kr3, 3, 7));
}

#[test]
fn engine_ranks_match_oracle_on_corpus() {
    for name in common::CORPUS {
        let p = parse_presentation(&common::load(name)).unwrap();
        let data = compute_resolution(&p, 5, DEFAULT_SIZE_LIMIT).unwrap();
        let oracle = common::oracle_betti(&p, 5, 7);
        assert_eq!(data.betti(), oracle, "{name}");
    }
}
