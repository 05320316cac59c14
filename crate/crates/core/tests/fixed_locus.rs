use chowkit::graded::rat;
use chowkit::voisin::{
    det_degree, determinant_degrees, dims_report, fixed_locus_class, psi_star_h, rank_strata_codims,
};
use chowkit::{ChernPolynomial, Sheaf, Space};

#[test]
fn fixed_locus_r1() {
    let fl = fixed_locus_class(1).unwrap();
    assert_eq!(fl.class.to_string(), "21c2");
    assert_eq!(fl.integrand_degree, 11);
}

#[test]
fn fixed_locus_r2() {
    let fl = fixed_locus_class(2).unwrap();
    let expected = ChernPolynomial::from_terms(
        3,
        [(vec![3, 0, 0], rat(-20)), (vec![1, 1, 0], rat(110)), (vec![0, 0, 1], rat(49))],
    );
    assert_eq!(fl.class, expected);
    let ranks: Vec<usize> = fl.factors.iter().map(|f| f.expected_rank).collect();
    assert_eq!(ranks, vec![18, 6, 3]);
    assert_eq!(fl.integrand_degree, 27);
    // Same class in the Chern classes of E itself.
    assert_eq!(fl.class.from_sub_convention().to_string(), "20c1^3 - 110c1*c2 - 49c3");
}

#[test]
fn fixed_locus_r3_snapshot() {
    let fl = fixed_locus_class(3).unwrap();
    assert_eq!(
        fl.class.to_string(),
        "-96c1^4 + 344c1^2*c2 + 256c1*c3 + 268c2^2 + 209c4"
    );
}

#[test]
fn fixed_locus_range() {
    assert!(fixed_locus_class(0).is_err());
    assert!(fixed_locus_class(4).is_err());
}

#[test]
fn psi_multiplier() {
    for r in 1..=5 {
        let p = psi_star_h(r).unwrap();
        let r = r as i64;
        assert_eq!(p.c1_f, rat(-(r + 2)));
        assert_eq!(p.c1_psi_e, rat(-(3 * r + 4)));
        assert_eq!(p.ratio, 3 * r + 4);
    }
    assert!(psi_star_h(0).is_err());
}

#[test]
fn dimension_counts() {
    let d = dims_report(2).unwrap();
    assert_eq!((d.params.n, d.params.dim_x, d.relative_dim, d.fix_codim, d.dim_incidence), (9, 11, 3, 3, 227));
    assert_eq!(d.deltas, vec![19, 16, 10]);
    let d = dims_report(1).unwrap();
    assert_eq!((d.params.n, d.params.dim_x), (5, 4));
    assert_eq!(d.deltas, vec![7, 4]);
}

#[test]
fn strata_and_determinants() {
    assert_eq!(rank_strata_codims(5).unwrap(), vec![1, 3, 6, 10]);
    assert_eq!(rank_strata_codims(2).unwrap(), vec![1]);
    assert!(rank_strata_codims(1).is_err());
    assert_eq!(determinant_degrees().unwrap(), (7, 4));
}

#[test]
fn determinant_degree_readings_agree() {
    // A symmetric form with values in Sym²(W) ⊗ O(1), W = O(1) ⊕ O⁴, has a
    // determinant of degree 2 c_1(W) + rank W.
    let p5 = Space::projective(5);
    let w = Sheaf::twisting(&p5, 1).unwrap().sum(&Sheaf::trivial(&p5, 4)).unwrap();
    let direct = rat(2) * w.c1_degree().unwrap() + rat(w.rank());
    assert_eq!(direct, rat(7));
    let l = Sheaf::twisting(&p5, 1).unwrap();
    assert_eq!(det_degree(&w.dual(), &l).unwrap(), 7);
    assert!(det_degree(&w, &w).is_err());
}
