mod common;

use std::collections::BTreeMap;

use chowkit::graded::{rat, ClassAlgebra};
use chowkit::partition::schubert_product;
use chowkit::{BoxShape, GradedElement, Label, Space};
use common::{part, schur, schur_expand};
use proptest::prelude::*;

fn oracle_product(a: &[u32], b: &[u32], rows: usize, cols: u32) -> BTreeMap<Vec<u32>, i64> {
    let prod = schur(a, rows).times(&schur(b, rows));
    schur_expand(&prod)
        .into_iter()
        .filter(|(nu, _)| nu.first().copied().unwrap_or(0) <= cols)
        .map(|(mut nu, c)| {
            while nu.last() == Some(&0) {
                nu.pop();
            }
            assert!(c.is_integer());
            (nu, c.to_integer().try_into().unwrap())
        })
        .collect()
}

fn library_product(a: &[u32], b: &[u32], rows: usize, cols: u32) -> BTreeMap<Vec<u32>, i64> {
    let shape = BoxShape::new(rows, cols).unwrap();
    schubert_product(&part(a), &part(b), &shape)
        .unwrap()
        .into_iter()
        .map(|(p, c)| (p.parts().to_vec(), c as i64))
        .collect()
}

#[test]
fn sigma_21_squared_in_3_by_3() {
    let expected = BTreeMap::from([(vec![3, 3], 1), (vec![3, 2, 1], 2), (vec![2, 2, 2], 1)]);
    assert_eq!(oracle_product(&[2, 1], &[2, 1], 3, 3), expected);
    assert_eq!(library_product(&[2, 1], &[2, 1], 3, 3), expected);
}

#[test]
fn all_products_agree_with_schur_oracle() {
    for (rows, cols) in [(2, 2), (2, 3), (3, 3), (2, 4)] {
        let shape = BoxShape::new(rows, cols).unwrap();
        let parts = shape.partitions();
        for a in &parts {
            for b in &parts {
                assert_eq!(
                    library_product(a.parts(), b.parts(), rows, cols),
                    oracle_product(a.parts(), b.parts(), rows, cols),
                    "{a} * {b} in {rows}x{cols}"
                );
            }
        }
    }
}

#[test]
fn ring_multiplication_uses_the_same_constants() {
    let g = Space::grassmannian(3, 6).unwrap();
    let shape = BoxShape::new(3, 3).unwrap();
    for a in shape.partitions() {
        for b in shape.partitions() {
            let prod = &g.sigma(&a).unwrap() * &g.sigma(&b).unwrap();
            let expected = schubert_product(&a, &b, &shape).unwrap();
            assert_eq!(prod.num_terms(), expected.len());
            for (nu, c) in expected {
                assert_eq!(prod.coefficient(&Label::Schubert(nu)), rat(c as i64));
            }
        }
    }
}

#[test]
fn poincare_duality_exhaustive() {
    for (k, n) in [(2, 4), (2, 5), (3, 6)] {
        let g = Space::grassmannian(k, n).unwrap();
        let shape = BoxShape::new(k, (n - k) as u32).unwrap();
        for a in shape.partitions() {
            for b in shape.partitions() {
                let x = &g.sigma(&a).unwrap() * &g.sigma(&b).unwrap();
                let v = g.integrate(&x.homogeneous_part(g.dim())).unwrap();
                let dual = chowkit::partition::complement_in_box(&a, &shape).unwrap();
                assert_eq!(v, rat((b == dual) as i64), "Gr({k},{n}): {a} . {b}");
            }
        }
    }
}

#[test]
fn sigma_one_fourth_power() {
    let g = Space::grassmannian(2, 4).unwrap();
    let s1 = g.sigma(&part(&[1])).unwrap();
    assert_eq!(g.integrate(&s1.pow(4)).unwrap(), rat(2));
    let g = Space::grassmannian(2, 5).unwrap();
    let s1 = g.sigma(&part(&[1])).unwrap();
    assert_eq!(g.integrate(&s1.pow(6)).unwrap(), rat(5));
}

fn basis_element(g: &Space) -> impl Strategy<Value = GradedElement> {
    let g = g.clone();
    (0..g.basis_size(), -3i64..=3).prop_map(move |(i, c)| {
        GradedElement::from_label(&g, &g.label(i), &rat(c)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(
        (a, b, c) in {
            let g = Space::grassmannian(3, 7).unwrap();
            (basis_element(&g), basis_element(&g), basis_element(&g))
        }
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }
}
