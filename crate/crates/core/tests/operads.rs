use lieleib_core::quadratic::{
    hadamard_dim, orthogonal_complement, quotient_dim, relation_span, white_product,
};
use lieleib_core::zoo::{named_dual, presentation, verify_operadic_derived_bracket, NAMES};

#[test]
fn complement_dimension_is_arity_three_dimension() {
    for name in NAMES {
        let p = presentation(name).unwrap();
        let (_, perp) = orthogonal_complement(&p).unwrap();
        assert_eq!(perp.rank(), quotient_dim(&p, 3).unwrap(), "{name}");
    }
}

#[test]
fn registered_duals_match() {
    for name in NAMES {
        let Some(d) = named_dual(name) else { continue };
        let p = presentation(name).unwrap();
        let (_, perp) = orthogonal_complement(&p).unwrap();
        let span = relation_span(&presentation(d).unwrap(), 3).unwrap();
        assert_eq!(span.rank(), perp.rank(), "{name} vs {d}");
        assert!(perp.basis_vectors().iter().all(|v| span.contains_vec(v)), "{name} vs {d}");
    }
}

#[test]
fn dual_pairs_share_dimensions() {
    for (a, b) in [("Leib", "Zinb"), ("ZC", "sZC"), ("LL", "sInvLL")] {
        let (p, q) = (presentation(a).unwrap(), presentation(b).unwrap());
        for n in 1..=4 {
            assert_eq!(quotient_dim(&p, n).unwrap(), quotient_dim(&q, n).unwrap(), "{a}/{b} at {n}");
        }
    }
    let zc = presentation("ZC").unwrap();
    assert_eq!(relation_span(&zc, 3).unwrap().rank(), 14);
    assert_eq!(quotient_dim(&zc, 3).unwrap(), 13);
}

#[test]
fn white_product_of_lie_and_deriving_is_ll() {
    let w = white_product(&presentation("Lie").unwrap(), &presentation("D").unwrap()).unwrap();
    let ll = presentation("LL").unwrap();
    let ls = relation_span(&ll, 3).unwrap();
    let ws = relation_span(&w, 3).unwrap();
    assert_eq!(ws.rank(), ls.rank());
    assert!(ws.elements().iter().all(|e| ls.contains(&e.remap(&|g| g, &ll.sig))));
    for n in 1..=4 {
        assert_eq!(quotient_dim(&w, n).unwrap(), quotient_dim(&ll, n).unwrap());
    }
}

#[test]
fn hadamard_lie_sperm_is_sleib() {
    let (lie, sperm, sleib) =
        (presentation("Lie").unwrap(), presentation("sPerm").unwrap(), presentation("sLeib").unwrap());
    for n in 1..=4 {
        assert_eq!(hadamard_dim(&lie, &sperm, n).unwrap(), quotient_dim(&sleib, n).unwrap());
    }
    let r = verify_operadic_derived_bracket().unwrap();
    assert!(r.pass && r.perm_relation && r.dictionary, "{r:?}");
}
