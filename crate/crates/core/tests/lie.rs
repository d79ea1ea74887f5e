use gaugekit::expr::rat;
use gaugekit::lie::{
    check_structure, check_thooft, known_rank, so3_structure, so4_structure, thooft_eta,
    StructureConstants,
};

#[test]
fn catalogs_satisfy_jacobi_exhaustively() {
    for (f, n) in [(so3_structure(), 3usize), (so4_structure(), 6)] {
        let r = check_structure(&f);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.jacobi_tuples_checked, n.pow(4));
    }
}

#[test]
fn so4_representatives() {
    let f = so4_structure();
    assert_eq!(f.get(2, 1, 0), rat(1));
    assert_eq!(f.get(0, 1, 2), rat(-1));
    assert_eq!(f.get(0, 4, 5), rat(1));
    assert_eq!(f.get(1, 3, 5), rat(1));
    assert_eq!(f.get(2, 3, 4), rat(1));
    assert_eq!(f.get(0, 0, 1), rat(0));
    assert_eq!(f.entries().count(), 24);
}

#[test]
fn thooft_commutation_holds_on_all_tuples() {
    let r = check_thooft(&thooft_eta());
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.tuples_checked, 144);
}

#[test]
fn thooft_values() {
    let t = thooft_eta();
    // eta^i_{0 j} = delta_ij and eta^i_{jk} = eps_ijk on the spatial block.
    for i in 0..3 {
        assert_eq!(t.get(i, 0, i + 1), 1);
        assert_eq!(t.get(i, i + 1, 0), -1);
    }
    assert_eq!(t.get(0, 2, 3), 1);
    assert_eq!(t.get(2, 1, 2), 1);
}

#[test]
fn jacobi_violation_is_reported() {
    // Two so(3) triples sharing generator 2 do not form a Lie algebra.
    let f = StructureConstants::from_representatives(5, &[((0, 1, 2), rat(1)), ((2, 3, 4), rat(1))]).unwrap();
    let r = check_structure(&f);
    assert!(r.antisymmetry_violation.is_none());
    assert!(r.jacobi_violation.is_some());
}

#[test]
fn ranks_of_catalog_algebras() {
    assert_eq!(known_rank(&so3_structure()), Some(1));
    assert_eq!(known_rank(&so4_structure()), Some(2));
}
