//! Periodized sequences and the rational approximants `α_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::build_p_n;
use super::ArraySpec;
use crate::enclosure::{integer, inverse_power, RationalEnclosure};
use crate::error::{Error, Result};
use crate::stammering::{find_seed, matched_len, stammer_pair, verify_pair, StammerPair};
use crate::words::CodedFixedPoint;

/// `p^(n)(i)`: the first `preperiod + period` terms of the sequence, then the
/// last `period` of them repeated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodizedSeq {
    pub dim: usize,
    pub preperiod: usize,
    pub period: usize,
    pub values: Vec<i64>,
}

impl PeriodizedSeq {
    pub fn term(&self, k: usize) -> i64 {
        if k < self.values.len() {
            self.values[k]
        } else {
            self.values[self.preperiod + (k - self.preperiod) % self.period]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<i64> {
        (0..len).map(|k| self.term(k)).collect()
    }

    pub fn head(&self) -> &[i64] {
        &self.values[..self.preperiod]
    }

    pub fn cycle(&self) -> &[i64] {
        &self.values[self.preperiod..]
    }
}

/// Builds `p^(n)(i)` from a coded pair `(U, V)` after checking that
/// `U V^w` is a prefix of the sequence.
pub fn periodize(
    spec: &ArraySpec,
    dim: usize,
    pair: &StammerPair<i64>,
    w: &BigRational,
) -> Result<PeriodizedSeq> {
    let g = spec
        .generators()
        .get(dim)
        .ok_or_else(|| Error::InputDomain(format!("no dimension {dim}")))?;
    let source = CodedFixedPoint(g.morphism());
    if !verify_pair(pair, w, &source)? {
        return Err(Error::Precondition {
            message: format!("U V^{w} is not a prefix of sequence {dim} (n = {})", pair.n),
            witness: Some(format!("|U| = {}, |V| = {}", pair.u.len(), pair.v.len())),
        });
    }
    let r = pair.preperiod();
    let s = pair.period();
    Ok(PeriodizedSeq {
        dim,
        preperiod: r,
        period: s,
        values: g.prefix(r + s),
    })
}

/// Per-dimension data of one approximant.
#[derive(Clone, Debug)]
pub struct DimApprox {
    /// `1 + 1/|𝔅_i|` for this coordinate's own morphism.
    pub own_exponent: BigRational,
    pub pair: StammerPair<i64>,
    pub seq: PeriodizedSeq,
    /// `T_i = r_n(i) + ⌈w s_n(i)⌉`: terms on which `p^(n)(i)` is certified.
    pub matched_len: usize,
}

impl DimApprox {
    pub fn preperiod(&self) -> usize {
        self.seq.preperiod
    }

    pub fn period(&self) -> usize {
        self.seq.period
    }
}

/// The `n`-th approximant: one periodized sequence per coordinate, all using
/// the common exponent `w = min_i w_i`.
#[derive(Clone, Debug)]
pub struct Approximant {
    pub n: u32,
    pub w: BigRational,
    pub dims: Vec<DimApprox>,
}

impl Approximant {
    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    /// `(r_n(i), s_n(i))` per coordinate.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.dims.iter().map(|d| (d.preperiod(), d.period())).collect()
    }

    /// `∏ a_i^{r_n(i)} (a_i^{s_n(i)} − 1)`.
    pub fn denominator(&self, spec: &ArraySpec) -> BigInt {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let a = spec.base(i);
                num_traits::pow(a.clone(), d.preperiod())
                    * (num_traits::pow(a, d.period()) - 1)
            })
            .product()
    }
}

pub fn approximants(spec: &ArraySpec, n: u32) -> Result<Approximant> {
    if n == 0 {
        return Err(Error::InputDomain("approximants are indexed from n = 1".into()));
    }
    let mut raw = Vec::with_capacity(spec.dimension());
    for g in spec.generators() {
        let m = g.morphism();
        let seed = find_seed(m);
        let pair = stammer_pair(&seed, m, n)?.coded(|a| m.code(*a));
        raw.push((seed.exponent, pair));
    }
    let w = raw
        .iter()
        .map(|(e, _)| e.clone())
        .min()
        .expect("at least two dimensions");
    let dims = raw
        .into_iter()
        .enumerate()
        .map(|(i, (own_exponent, pair))| {
            let seq = periodize(spec, i, &pair, &w)?;
            Ok(DimApprox {
                own_exponent,
                matched_len: matched_len(&pair, &w)?,
                pair,
                seq,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Approximant { n, w, dims })
}

fn check_shape(spec: &ArraySpec, approx: &Approximant) -> Result<()> {
    if approx.dimension() != spec.dimension() {
        return Err(Error::Configuration(format!(
            "approximant has {} coordinates, spec has {}",
            approx.dimension(),
            spec.dimension()
        )));
    }
    Ok(())
}

/// `α_n = P_n(a_1, ..., a_r) / ∏ a_i^{r_n(i)} (a_i^{s_n(i)} − 1)` in lowest terms.
pub fn alpha_n_exact(spec: &ArraySpec, approx: &Approximant) -> Result<BigRational> {
    check_shape(spec, approx)?;
    let p = build_p_n(spec, approx);
    let point: Vec<BigInt> = (0..spec.dimension()).map(|i| spec.base(i)).collect();
    Ok(BigRational::new(p.evaluate(&point), approx.denominator(spec)))
}

/// `α_n = Σ_v f(v) ∏ G_i(v_i)` with `G_i(v) = Σ_{p^(n)_k(i) = v} a_i^{-k}`,
/// summed over one preperiod and one period, then extended by the geometric
/// factor `1 / (a^s − 1)` for the remaining periods.
pub fn alpha_n_oracle(spec: &ArraySpec, approx: &Approximant) -> Result<BigRational> {
    check_shape(spec, approx)?;
    let f = spec.f();
    let g: Vec<Vec<BigRational>> = approx
        .dims
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let a = spec.base(i);
            let seq = &d.seq;
            let repeat = BigRational::new(BigInt::one(), num_traits::pow(a.clone(), seq.period) - 1);
            f.value_sets()[i]
                .iter()
                .map(|&v| {
                    let mut first = BigRational::zero();
                    let mut cycle = BigRational::zero();
                    for (k, &t) in seq.values.iter().enumerate() {
                        if t == v {
                            let term = inverse_power(&a, k as u64);
                            if k >= seq.preperiod {
                                cycle += &term;
                            }
                            first += term;
                        }
                    }
                    first + cycle * &repeat
                })
                .collect()
        })
        .collect();
    let mut total = BigRational::zero();
    for (tuple_idx, (_, fv)) in f.entries().enumerate() {
        if fv == 0 {
            continue;
        }
        let idx = unflatten(f, tuple_idx);
        let mut prod = integer(fv);
        for (i, &j) in idx.iter().enumerate() {
            prod *= &g[i][j];
        }
        total += prod;
    }
    Ok(total)
}

fn unflatten(f: &super::FTable, mut flat: usize) -> Vec<usize> {
    let sets = f.value_sets();
    let mut idx = vec![0; sets.len()];
    for d in (0..sets.len()).rev() {
        idx[d] = flat % sets[d].len();
        flat /= sets[d].len();
    }
    idx
}

/// Bounds on `|α − α_n|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorBound {
    /// `2M Σ_i a_i^{-T_i} (a_i/(a_i−1)) ∏_{j≠i} a_j/(a_j−1)`, skipping
    /// coordinates whose sequence is constant (their periodization is exact).
    pub rigorous: BigRational,
    /// Enclosure of `∏ a_i^{-(w−1) s_n(i)}`, exact when every exponent is an
    /// integer.
    pub nominal: RationalEnclosure,
}

pub fn error_bound(spec: &ArraySpec, approx: &Approximant) -> Result<ErrorBound> {
    check_shape(spec, approx)?;
    let r = spec.dimension();
    let geo: Vec<BigRational> = (0..r)
        .map(|i| BigRational::new(spec.base(i), spec.base(i) - 1))
        .collect();
    let all: BigRational = geo.iter().product();
    let mut sum = BigRational::zero();
    for (i, d) in approx.dims.iter().enumerate() {
        if spec.generators()[i].constant_value().is_some() {
            continue;
        }
        sum += inverse_power(&spec.base(i), d.matched_len as u64) * &all;
    }
    let rigorous = sum * integer(2 * spec.m());

    let excess = &approx.w - BigRational::one();
    let mut lo = BigRational::one();
    let mut hi = BigRational::one();
    for (i, d) in approx.dims.iter().enumerate() {
        let e = &excess * integer(d.period() as u64);
        let a = spec.base(i);
        let ceil = e.ceil().to_integer();
        let floor = e.floor().to_integer();
        lo *= inverse_power(&a, to_u64(&ceil));
        hi *= inverse_power(&a, to_u64(&floor));
    }
    Ok(ErrorBound {
        rigorous,
        nominal: RationalEnclosure::new(lo, hi)?,
    })
}

fn to_u64(x: &BigInt) -> u64 {
    u64::try_from(x).expect("exponent fits in u64")
}

/// `|α − α_n|` as an enclosure.
pub fn error_enclosure(alpha: &RationalEnclosure, alpha_n: &BigRational) -> RationalEnclosure {
    alpha.shift(&-alpha_n.clone()).abs()
}

/// Lowest-terms denominator divides the nominal one.
pub fn denominator_divides(alpha_n: &BigRational, nominal: &BigInt) -> bool {
    nominal.is_multiple_of(alpha_n.denom())
}
