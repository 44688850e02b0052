//! Places of ℚ, heights, witness vectors and the product `Π` over the
//! places in `S`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enclosure::{integer, sqrt_enclosure, RationalEnclosure};
use crate::error::{Error, Result};
use crate::logs::{ln_biguint, ln_enclosure, ln_rational, LogInterval};
use crate::series::{Approximant, ArraySpec};

/// Bits of relative precision for Euclidean norms that are not exact.
pub const NORM_BITS: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinite,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::InputDomain(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "∞"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn big_ord(x: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        x = q;
        e += 1;
    }
}

/// `ord_p(x)` for nonzero rational `x`.
pub fn p_adic_order(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::InputDomain("p-adic order of 0".into()));
    }
    if !is_prime(p) {
        return Err(Error::InputDomain(format!("{p} is not prime")));
    }
    Ok(big_ord(x.numer(), p) - big_ord(x.denom(), p))
}

/// `|x|_v`, exact at every place since `x` is rational.
pub fn abs_value(x: &BigRational, v: Place) -> Result<BigRational> {
    if x.is_zero() {
        return Err(Error::InputDomain("absolute value of 0 is handled by callers".into()));
    }
    match v {
        Place::Infinite => Ok(x.abs()),
        Place::Prime(p) => {
            let e = p_adic_order(x, p)?;
            let pp = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            Ok(if e >= 0 {
                BigRational::new(BigInt::one(), pp)
            } else {
                BigRational::from_integer(pp)
            })
        }
    }
}

/// `|x|_v` extended by `|0|_v = 0`.
fn abs_or_zero(x: &BigRational, v: Place) -> Result<BigRational> {
    if x.is_zero() {
        Ok(BigRational::zero())
    } else {
        abs_value(x, v)
    }
}

/// Euclidean norm at the real place, max norm at finite places.
pub fn vector_norm(x: &[BigRational], v: Place) -> Result<RationalEnclosure> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::InputDomain("norm of the zero vector".into()));
    }
    match v {
        Place::Infinite => {
            let sq: BigRational = x.iter().map(|c| c * c).sum();
            sqrt_enclosure(&sq, NORM_BITS)
        }
        Place::Prime(_) => {
            let mut best = BigRational::zero();
            for c in x {
                best = best.max(abs_or_zero(c, v)?);
            }
            Ok(RationalEnclosure::point(best))
        }
    }
}

/// Scales a nonzero rational vector to a primitive integer vector.
pub fn primitive_integer_vector(x: &[BigRational]) -> Result<Vec<BigInt>> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::InputDomain("zero vector".into()));
    }
    let l = x.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = x.iter().map(|c| (c * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Ok(ints.into_iter().map(|c| c / &g).collect())
}

/// `H(x) = ∏_v |x|_v`. The finite places contribute exactly `1/content`, so
/// `H` is the Euclidean norm of the primitive integer multiple of `x`.
pub fn height(x: &[BigRational]) -> Result<RationalEnclosure> {
    let y = primitive_integer_vector(x)?;
    let sq: BigInt = y.iter().map(|c| c * c).sum();
    sqrt_enclosure(&BigRational::from_integer(sq), NORM_BITS)
}

/// `S = {∞} ∪ {p : p | a_1 ⋯ a_r}`, infinite place first, primes ascending.
pub fn place_set(bases: &[u64]) -> Vec<Place> {
    let mut primes: Vec<u64> = bases
        .iter()
        .flat_map(|&a| factorize(a).into_iter().map(|(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Place::Infinite)
        .chain(primes.into_iter().map(Place::Prime))
        .collect()
}

/// Subsets of `{1..r}` in binary-counter order: position `j` is the subset
/// whose characteristic vector has bit `i - 1` set for each member `i`.
pub fn subset_order(r: usize) -> Vec<Vec<usize>> {
    (0..1usize << r)
        .map(|mask| (1..=r).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

/// `x_n = ((x_I)_I, −P_n(a))` with
/// `x_I = (−1)^{|I|} ∏_{i∉I} a_i^{r_i+s_i} ∏_{i∈I} a_i^{r_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessVector {
    pub n: u32,
    pub subsets: Vec<Vec<usize>>,
    pub coords: Vec<BigInt>,
}

impl WitnessVector {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The `2^r` coordinates `x_I`.
    pub fn subset_coords(&self) -> &[BigInt] {
        &self.coords[..self.coords.len() - 1]
    }

    /// `−P_n(a)`.
    pub fn last(&self) -> &BigInt {
        self.coords.last().expect("nonempty")
    }

    pub fn subset_sum(&self) -> BigInt {
        self.subset_coords().iter().sum()
    }

    pub fn as_rationals(&self) -> Vec<BigRational> {
        self.coords.iter().cloned().map(BigRational::from_integer).collect()
    }
}

/// Builds `x_n` and checks `Σ_I x_I = ∏ a_i^{r_i} (a_i^{s_i} − 1)`.
pub fn witness_vector(
    spec: &ArraySpec,
    approx: &Approximant,
    p_value: &BigInt,
) -> Result<WitnessVector> {
    let r = spec.dimension();
    if approx.dimension() != r {
        return Err(Error::Configuration(format!(
            "approximant has {} coordinates, spec has {r}",
            approx.dimension()
        )));
    }
    let shape = approx.shape();
    let subsets = subset_order(r);
    let mut coords = Vec::with_capacity(subsets.len() + 1);
    for mask in 0..1u32 << r {
        let mut x = if mask.count_ones() % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        for (i, &(ri, si)) in shape.iter().enumerate() {
            let e = if mask >> i & 1 == 1 { ri } else { ri + si };
            x *= num_traits::pow(spec.base(i), e);
        }
        coords.push(x);
    }
    coords.push(-p_value.clone());
    let w = WitnessVector {
        n: approx.n,
        subsets,
        coords,
    };
    let expected = approx.denominator(spec);
    if w.subset_sum() != expected {
        return Err(Error::Invariant(format!(
            "witness coordinates sum to {} instead of {expected}",
            w.subset_sum()
        )));
    }
    Ok(w)
}

/// Result of [`subspace_product`]. Logarithms are natural.
#[derive(Clone, Debug)]
pub struct SubspaceProduct {
    /// `None` when `Π = 0` exactly.
    pub log_pi: Option<LogInterval>,
    pub height: RationalEnclosure,
    pub log_height: LogInterval,
    /// `log Π / log H`; `None` when `Π = 0`.
    pub exponent: Option<LogInterval>,
    /// `L_{∞,last}(x) = α Σ_I x_I + x_last`.
    pub l_last: RationalEnclosure,
    /// `∏_{v∈S} |x_last|_v / |x|_v^m` over the finite places of `S`, exact.
    pub finite_factor: BigRational,
}

impl SubspaceProduct {
    pub fn is_exact_zero(&self) -> bool {
        self.log_pi.is_none()
    }
}

/// `Π = ∏_{v∈S} ∏_{i≤m} |L_{v,i}(x)|_v / |x|_v` with `m = 2^r + 1`, where
/// every form is a coordinate except `L_{∞,m} = α Σ_I x_I + x_m`.
pub fn subspace_product(
    x: &WitnessVector,
    alpha: &RationalEnclosure,
    places: &[Place],
) -> Result<SubspaceProduct> {
    let m = x.len();
    if m < 2 {
        return Err(Error::InputDomain("witness vector too short".into()));
    }
    if !places.contains(&Place::Infinite) {
        return Err(Error::InputDomain("S must contain the infinite place".into()));
    }
    let finite: Vec<Place> = places.iter().copied().filter(|v| *v != Place::Infinite).collect();
    let rats = x.as_rationals();

    // the first 2^r coordinates are S-units up to sign
    for (j, c) in rats[..m - 1].iter().enumerate() {
        if c.is_zero() {
            return Err(Error::Invariant(format!("witness coordinate {j} is 0")));
        }
        let mut prod = abs_value(c, Place::Infinite)?;
        for &v in &finite {
            prod *= abs_value(c, v)?;
        }
        if !prod.is_one() {
            return Err(Error::Invariant(format!(
                "coordinate {j} = {c} is not an S-unit (∏_S |x|_v = {prod})"
            )));
        }
    }

    let sum = BigRational::from_integer(x.subset_sum());
    let l_last = alpha.scale(&sum).shift(&rats[m - 1]);

    let norm_sq: BigInt = x.coords.iter().map(|c| c * c).sum();
    let content = x.coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let height = sqrt_enclosure(&BigRational::from_integer(norm_sq.clone()), NORM_BITS)?
        .scale(&BigRational::new(BigInt::one(), content.clone()));
    let ln_norm = ln_biguint(norm_sq.magnitude())?.scale(0.5);
    let log_height = ln_norm.sub(&ln_biguint(content.magnitude())?);

    let mut finite_factor = BigRational::one();
    for &v in &finite {
        let vec_norm = vector_norm(&rats, v)?.lo().clone();
        let num = abs_or_zero(&rats[m - 1], v)?;
        finite_factor *= num / pow_rational(&vec_norm, m);
    }

    let zero = finite_factor.is_zero() || (l_last.is_point() && l_last.lo().is_zero());
    if zero {
        return Ok(SubspaceProduct {
            log_pi: None,
            height,
            log_height,
            exponent: None,
            l_last,
            finite_factor,
        });
    }
    if l_last.contains_zero() {
        return Err(Error::PrecisionInsufficient(format!(
            "L_last enclosure {l_last} straddles 0"
        )));
    }
    let log_l = ln_enclosure(&l_last.abs())?;
    let log_pi = log_l
        .add(&ln_rational(&finite_factor)?)
        .sub(&ln_norm.scale(m as f64));
    let exponent = log_pi.div(&log_height)?;
    Ok(SubspaceProduct {
        log_pi: Some(log_pi),
        height,
        log_height,
        exponent: Some(exponent),
        l_last,
        finite_factor,
    })
}

fn pow_rational(x: &BigRational, e: usize) -> BigRational {
    BigRational::new(
        num_traits::pow(x.numer().clone(), e),
        num_traits::pow(x.denom().clone(), e),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// Primitive `m ≠ 0` with `∏ a_i^{m_i} = 1`, first nonzero entry positive.
    Dependent(Vec<BigInt>),
}

/// Decides whether `a_1^{m_1} ⋯ a_r^{m_r} = 1` has a nonzero integer solution
/// via the kernel of the prime-exponent matrix.
pub fn mult_independence(bases: &[u64]) -> Result<Independence> {
    if let Some(a) = bases.iter().find(|&&a| a < 2) {
        return Err(Error::InputDomain(format!("base {a} is below 2")));
    }
    let factored: Vec<Vec<(u64, u32)>> = bases.iter().map(|&a| factorize(a)).collect();
    let mut primes: Vec<u64> = factored.iter().flatten().map(|&(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    let r = bases.len();
    let mut rows: Vec<Vec<BigRational>> = primes
        .iter()
        .map(|&p| {
            factored
                .iter()
                .map(|f| {
                    let e = f.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e);
                    integer(e)
                })
                .collect()
        })
        .collect();

    // reduced row echelon form
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(sel) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, sel);
        let inv = BigRational::one() / rows[row][col].clone();
        for c in rows[row].iter_mut() {
            *c *= &inv;
        }
        let pivot = rows[row].clone();
        for (i, target) in rows.iter_mut().enumerate() {
            if i != row && !target[col].is_zero() {
                let factor = target[col].clone();
                for (t, p) in target.iter_mut().zip(&pivot) {
                    *t -= p * &factor;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    let Some(free) = (0..r).find(|c| !pivots.contains(c)) else {
        return Ok(Independence::Independent);
    };
    let mut v = vec![BigRational::zero(); r];
    v[free] = BigRational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[i][free].clone();
    }
    let mut cert = primitive_integer_vector(&v)?;
    if cert.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        cert.iter_mut().for_each(|c| *c = -c.clone());
    }
    Ok(Independence::Dependent(cert))
}

/// `∏_v |x|_v` over every place where `|x|_v ≠ 1`, for nonzero rational `x`.
pub fn product_over_places(x: &BigRational) -> Result<BigRational> {
    let mut prod = abs_value(x, Place::Infinite)?;
    for p in relevant_primes(x) {
        prod *= abs_value(x, Place::Prime(p))?;
    }
    Ok(prod)
}

/// Primes dividing the numerator or denominator of `x`.
pub fn relevant_primes(x: &BigRational) -> Vec<u64> {
    let mut out = Vec::new();
    for part in [x.numer(), x.denom()] {
        let m = part.magnitude();
        let Some(small) = m.to_u64() else {
            out.extend(big_factor_primes(m));
            continue;
        };
        out.extend(factorize(small).into_iter().map(|(p, _)| p));
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn big_factor_primes(n: &BigUint) -> Vec<u64> {
    // only used for numbers built from small primes; trial division is enough
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while n > BigUint::one() {
        let bd = BigUint::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
        if BigUint::from(d) * BigUint::from(d) > n && n > BigUint::one() {
            if let Some(p) = n.to_u64() {
                out.push(p);
            }
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::rational;
    use crate::fixtures;
    use crate::series::{alpha_n_exact, approximants, build_p_n};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| integer(c)).collect()
    }

    #[test]
    fn absolute_values() {
        let p = |n| Place::prime(n).unwrap();
        assert_eq!(abs_value(&integer(12), p(2)).unwrap(), rational(1, 4));
        assert_eq!(abs_value(&integer(12), p(5)).unwrap(), integer(1));
        assert_eq!(abs_value(&rational(-3, 8), p(2)).unwrap(), integer(8));
        assert_eq!(abs_value(&rational(-3, 8), Place::Infinite).unwrap(), rational(3, 8));
        assert!(abs_value(&integer(0), p(2)).is_err());
        assert!(Place::prime(9).is_err());
    }

    #[test]
    fn norms_and_heights() {
        assert_eq!(vector_norm(&ints(&[3, 4]), Place::Infinite).unwrap().lo(), &integer(5));
        assert_eq!(vector_norm(&ints(&[2, 4]), Place::Prime(2)).unwrap().lo(), &rational(1, 2));
        assert_eq!(vector_norm(&ints(&[1, 0, 0]), Place::Prime(7)).unwrap().lo(), &integer(1));
        assert!(vector_norm(&ints(&[0, 0]), Place::Prime(7)).is_err());
        let h = height(&ints(&[3, 4])).unwrap();
        assert!(h.is_point() && h.lo() == &integer(5));
        let h = height(&ints(&[2, 4])).unwrap();
        assert!(h.lo() * h.lo() <= integer(5) && h.hi() * h.hi() >= integer(5));
        let scaled: Vec<BigRational> = ints(&[3, 4]).iter().map(|c| c * rational(7, 3)).collect();
        assert_eq!(height(&scaled).unwrap(), height(&ints(&[3, 4])).unwrap());
    }

    #[test]
    fn witness_example() {
        // r = 0, s = 1 in both coordinates with bases (2, 3)
        let subsets = subset_order(2);
        assert_eq!(subsets, vec![vec![], vec![1], vec![2], vec![1, 2]]);
        let spec = fixtures::constant_2_3();
        let mut a = approximants(&spec, 1).unwrap();
        for d in a.dims.iter_mut() {
            d.seq.period = 1;
            d.seq.values.truncate(1);
        }
        let w = witness_vector(&spec, &a, &BigInt::from(6)).unwrap();
        let head: Vec<i64> = w.subset_coords().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(head, vec![6, -3, -2, 1]);
        assert_eq!(w.subset_sum(), BigInt::from(2));
        assert_eq!(w.last(), &BigInt::from(-6));
    }

    #[test]
    fn zero_table_witness_ends_in_zero() {
        let spec = fixtures::zero_2_3();
        let a = approximants(&spec, 2).unwrap();
        let p = build_p_n(&spec, &a).evaluate(&[BigInt::from(2), BigInt::from(3)]);
        let w = witness_vector(&spec, &a, &p).unwrap();
        assert!(w.last().is_zero());
        let sp = subspace_product(&w, &RationalEnclosure::zero(), &place_set(&[2, 3])).unwrap();
        assert!(sp.is_exact_zero());
    }

    #[test]
    fn constant_spec_gives_exact_zero() {
        let spec = fixtures::constant_2_3();
        let a = approximants(&spec, 2).unwrap();
        let p = build_p_n(&spec, &a).evaluate(&[BigInt::from(2), BigInt::from(3)]);
        let w = witness_vector(&spec, &a, &p).unwrap();
        let alpha = RationalEnclosure::point(integer(3));
        let sp = subspace_product(&w, &alpha, &place_set(&[2, 3])).unwrap();
        assert!(sp.is_exact_zero());
        assert!(sp.l_last.is_point() && sp.l_last.lo().is_zero());
    }

    #[test]
    fn l_last_matches_scaled_error() {
        let spec = fixtures::tm_tm_xor_2_3();
        let a = approximants(&spec, 2).unwrap();
        let alpha_n = alpha_n_exact(&spec, &a).unwrap();
        let alpha = spec.evaluate_alpha(&rational(1, 1u64 << 62)).unwrap();
        let p = build_p_n(&spec, &a).evaluate(&[BigInt::from(2), BigInt::from(3)]);
        let w = witness_vector(&spec, &a, &p).unwrap();
        let sp = subspace_product(&w, &alpha, &place_set(&[2, 3])).unwrap();
        let d = BigRational::from_integer(a.denominator(&spec));
        let other = alpha.shift(&-alpha_n).scale(&d);
        assert!(other.within(&sp.l_last) || sp.l_last.within(&other));
        for v in place_set(&[2, 3]).into_iter().skip(1) {
            let last = BigRational::from_integer(w.last().clone());
            assert!(abs_value(&last, v).unwrap() <= integer(1));
        }
        let e = sp.exponent.unwrap();
        assert!(e.hi < 0.0);
        // too coarse an alpha straddles zero
        let slack = rational(1, 10);
        let coarse = RationalEnclosure::new(alpha.lo() - &slack, alpha.hi() + &slack).unwrap();
        assert!(matches!(
            subspace_product(&w, &coarse, &place_set(&[2, 3])),
            Err(Error::PrecisionInsufficient(_))
        ));
    }

    #[test]
    fn independence_certificates() {
        assert_eq!(mult_independence(&[2, 3]).unwrap(), Independence::Independent);
        assert_eq!(
            mult_independence(&[4, 8]).unwrap(),
            Independence::Dependent(vec![BigInt::from(3), BigInt::from(-2)])
        );
        assert_eq!(mult_independence(&[6, 10, 15]).unwrap(), Independence::Independent);
        assert_eq!(
            mult_independence(&[2, 3, 6]).unwrap(),
            Independence::Dependent(vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)])
        );
        assert!(mult_independence(&[1, 2]).is_err());
    }

    #[test]
    fn place_sets() {
        assert_eq!(
            place_set(&[6, 10]),
            vec![Place::Infinite, Place::Prime(2), Place::Prime(3), Place::Prime(5)]
        );
    }

    proptest! {
        #[test]
        fn product_formula(n in -10_000i64..10_000, d in 1i64..10_000) {
            prop_assume!(n != 0);
            let x = rational(n, d);
            prop_assert_eq!(product_over_places(&x).unwrap(), integer(1));
        }

        #[test]
        fn certificates_are_relations(bases in proptest::collection::vec(2u64..200, 2..4)) {
            if let Independence::Dependent(m) = mult_independence(&bases).unwrap() {
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for (a, e) in bases.iter().zip(&m) {
                    let p = num_traits::pow(BigInt::from(*a), e.magnitude().to_usize().unwrap());
                    if e.is_negative() { den *= p } else { num *= p }
                }
                prop_assert_eq!(num, den);
                prop_assert!(m.iter().any(|c| !c.is_zero()));
            }
        }

        #[test]
        fn height_is_projective(v in proptest::collection::vec(-50i64..50, 2..5),
                                ln in -20i64..20, ld in 1i64..20) {
            prop_assume!(v.iter().any(|&c| c != 0) && ln != 0);
            let x = ints(&v);
            let lam = rational(ln, ld);
            let y: Vec<BigRational> = x.iter().map(|c| c * &lam).collect();
            prop_assert_eq!(height(&x).unwrap(), height(&y).unwrap());
        }
    }
}
