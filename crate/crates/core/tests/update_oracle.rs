mod common;

use common::{instance, value_space_u_optimum};
use fdrepair::satisfies;
use fdrepair::urepair::brute_u_repair;
use proptest::prelude::*;

fn check(seed: u64, tuples: usize, attrs: usize) -> Result<(), TestCaseError> {
    // Empty catalog: the generator draws a random FD set.
    let (t, d) = instance(
        seed,
        &[],
        tuples,
        attrs,
        2 + (seed % 2) as usize,
        &[1.0, 2.0],
    );
    let u = brute_u_repair(&d, &t).unwrap();
    prop_assert!(satisfies(&t.apply(&u).unwrap(), &d).unwrap().is_empty());
    let n = t.len();
    let with_n = value_space_u_optimum(&d, &t, n);
    prop_assert!(
        (u.distance - with_n).abs() < 1e-9,
        "seed {seed}: search {} vs values {}",
        u.distance,
        with_n
    );
    let with_more = value_space_u_optimum(&d, &t, n + 1);
    prop_assert!(
        (with_n - with_more).abs() < 1e-9,
        "seed {seed}: an extra fresh symbol helped"
    );
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_tuples_three_attrs(seed in any::<u64>()) {
        check(seed, 3, 3)?;
    }

    #[test]
    fn four_tuples_two_attrs(seed in any::<u64>()) {
        check(seed, 4, 2)?;
    }
}

#[test]
fn chain_needs_two_cells() {
    // The cheapest fix changes both B and C of tuple 2, or one cell of
    // two different tuples.
    let d = fdrepair::parse_fds("A -> B\nB -> C", &["A", "B", "C"]).unwrap();
    let t = fdrepair::Table::from_csv("id,A,B,C\n1,a,b,c\n2,a,x,d\n3,y,x,e\n").unwrap();
    let u = brute_u_repair(&d, &t).unwrap();
    assert_eq!(u.distance, value_space_u_optimum(&d, &t, 3));
}
