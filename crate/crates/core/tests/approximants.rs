use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use autoarray::fixtures;
use autoarray::series::{
    alpha_n_exact, alpha_n_oracle, approximants, build_p_n, error_bound, error_enclosure, ArraySpec,
    FTable, Generator,
};
use autoarray::stammering::StammerPair;

fn pow(a: u64, e: usize) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(a), e))
}

/// `Σ_{j ≥ 0} a^{-(ν + j s)}` when `ν` is in the periodic part, else `a^{-ν}`.
fn weight(a: u64, r: usize, s: usize, nu: usize) -> BigRational {
    let base = pow(a, nu).recip();
    if nu < r {
        base
    } else {
        base * pow(a, s) / (pow(a, s) - BigRational::one())
    }
}

fn periodic_term(pair: &StammerPair<i64>, nu: usize) -> i64 {
    let (u, v) = (pair.u.as_slice(), pair.v.as_slice());
    if nu < u.len() {
        u[nu]
    } else {
        v[(nu - u.len()) % v.len()]
    }
}

/// Sums the periodized coefficient array over one fundamental box, folding
/// each periodic tail into a geometric factor.
fn box_sum(spec: &ArraySpec, n: u32) -> BigRational {
    let approx = approximants(spec, n).unwrap();
    let shape: Vec<(usize, usize)> = approx.shape();
    let sides: Vec<usize> = shape.iter().map(|(r, s)| r + s).collect();
    let total: usize = sides.iter().product();
    let mut sum = BigRational::zero();
    let mut nu = vec![0usize; sides.len()];
    for mut flat in 0..total {
        for (i, side) in sides.iter().enumerate() {
            nu[i] = flat % side;
            flat /= side;
        }
        let values: Vec<i64> = nu
            .iter()
            .enumerate()
            .map(|(i, &k)| periodic_term(&approx.dims[i].pair, k))
            .collect();
        let c = spec.f().get(&values).unwrap();
        if c == 0 {
            continue;
        }
        let mut term = BigRational::from_integer(BigInt::from(c));
        for (i, &k) in nu.iter().enumerate() {
            let (r, s) = shape[i];
            term *= weight(spec.bases()[i], r, s, k);
        }
        sum += term;
    }
    sum
}

#[test]
fn exact_matches_box_sum() {
    for (name, spec) in fixtures::bundled_specs() {
        let top = if spec.dimension() == 3 { 3 } else { 5 };
        for n in 1..=top {
            let approx = approximants(&spec, n).unwrap();
            let exact = alpha_n_exact(&spec, &approx).unwrap();
            assert_eq!(exact, box_sum(&spec, n), "{name} n={n}");
            assert_eq!(exact, alpha_n_oracle(&spec, &approx).unwrap(), "{name} n={n}");
        }
    }
}

#[test]
fn periodized_words_match_generators_on_matched_prefix() {
    for (name, spec) in fixtures::bundled_specs() {
        for n in 1..=4 {
            let approx = approximants(&spec, n).unwrap();
            for (i, d) in approx.dims.iter().enumerate() {
                let g = &spec.generators()[i];
                for k in 0..d.matched_len {
                    assert_eq!(periodic_term(&d.pair, k), g.term(k as u64).unwrap(), "{name} n={n} dim {i} k={k}");
                }
            }
        }
    }
}

#[test]
fn shapes_grow_and_keep_ratio() {
    let spec = fixtures::tm_rs_sum_2_3();
    let mut prev: Option<Vec<(usize, usize)>> = None;
    for n in 1..=6 {
        let shape = approximants(&spec, n).unwrap().shape();
        if let Some(p) = prev {
            for (a, b) in p.iter().zip(&shape) {
                assert_eq!(b.1, 2 * a.1);
                assert_eq!(b.0, 2 * a.0);
            }
        }
        prev = Some(shape);
    }
}

#[test]
fn polynomial_value_is_numerator() {
    for (name, spec) in fixtures::bundled_specs() {
        for n in 1..=3 {
            let approx = approximants(&spec, n).unwrap();
            let a: Vec<BigInt> = (0..spec.dimension()).map(|i| spec.base(i)).collect();
            let p = build_p_n(&spec, &approx).evaluate(&a);
            let d = approx.denominator(&spec);
            let lhs = BigRational::new(p, d);
            assert_eq!(lhs, alpha_n_exact(&spec, &approx).unwrap(), "{name} n={n}");
        }
    }
}

fn tm_rs_spec(table: &[i64]) -> ArraySpec {
    let sets = vec![vec![0, 1], vec![-1, 1]];
    let f = FTable::from_fn(sets, |t| {
        let i = t[0] as usize * 2 + usize::from(t[1] == 1);
        table[i]
    })
    .unwrap();
    let m = table.iter().map(|x| x.abs()).max().unwrap();
    ArraySpec::new(
        vec![2, 3],
        vec![
            Generator::from_morphism(fixtures::thue_morse()),
            Generator::from_morphism(fixtures::rudin_shapiro()),
        ],
        f,
        m,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_tables_agree_with_box_sum(table in proptest::collection::vec(-3i64..=3, 4), n in 1u32..=4) {
        let spec = tm_rs_spec(&table);
        let approx = approximants(&spec, n).unwrap();
        let exact = alpha_n_exact(&spec, &approx).unwrap();
        prop_assert_eq!(&exact, &box_sum(&spec, n));
        let stats = build_p_n(&spec, &approx).stats();
        prop_assert!(stats.max_abs <= 4 * spec.m().unsigned_abs() as u128);
    }

    #[test]
    fn random_tables_respect_error_bound(table in proptest::collection::vec(-3i64..=3, 4), n in 1u32..=4) {
        let spec = tm_rs_spec(&table);
        let approx = approximants(&spec, n).unwrap();
        let exact = alpha_n_exact(&spec, &approx).unwrap();
        let bound = error_bound(&spec, &approx).unwrap();
        let tiny = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 60));
        let alpha = spec.evaluate_alpha(&tiny).unwrap();
        prop_assert!(error_enclosure(&alpha, &exact).hi() <= &bound.rigorous);
    }
}
