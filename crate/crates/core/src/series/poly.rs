//! The numerator polynomial `P_n` in separable form.
//!
//! Writing `E_i(v) = A_i(v) + B_i(v)` with
//! `A_i(v) = Σ_{h<s, p_{r+h} = v} X^{s−h}` and
//! `B_i(v) = (Σ_{k<r, p_k = v} X^{r−k}) (X^s − 1)`,
//! one has `P_n = Σ_v f(v) ∏_i E_i(v_i)`. Expanding the product over subsets
//! `I` (coordinates contributing `A`) gives the parts `P_{n,I}`. A dense
//! expansion has `∏ (r_i + s_i + 1)` coefficients, so the polynomial is kept
//! as these univariate factors and coefficients are only streamed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Approximant, ArraySpec};

/// Integer polynomial in one variable, coefficients indexed by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniPoly(Vec<i64>);

impl UniPoly {
    pub fn from_coeffs(mut c: Vec<i64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Self(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        let c = (0..n)
            .map(|e| self.0.get(e).unwrap_or(&0) + other.0.get(e).unwrap_or(&0))
            .collect();
        UniPoly::from_coeffs(c)
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * x + c)
    }
}

/// Largest absolute coefficient and the exact degree in each variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyStats {
    pub max_abs: u128,
    /// `None` for the zero polynomial.
    pub degrees: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct SeparablePolynomial {
    sizes: Vec<usize>,
    f: Vec<i64>,
    periodic: Vec<Vec<UniPoly>>,
    preperiodic: Vec<Vec<UniPoly>>,
    degree_bounds: Vec<usize>,
}

pub fn build_p_n(spec: &ArraySpec, approx: &Approximant) -> SeparablePolynomial {
    let sets = spec.f().value_sets();
    let mut periodic = Vec::with_capacity(sets.len());
    let mut preperiodic = Vec::with_capacity(sets.len());
    for (i, d) in approx.dims.iter().enumerate() {
        let (r, s) = (d.preperiod(), d.period());
        let values = &d.seq.values;
        periodic.push(
            sets[i]
                .iter()
                .map(|&v| {
                    let mut c = vec![0; s + 1];
                    for h in 0..s {
                        if values[r + h] == v {
                            c[s - h] += 1;
                        }
                    }
                    UniPoly::from_coeffs(c)
                })
                .collect(),
        );
        preperiodic.push(
            sets[i]
                .iter()
                .map(|&v| {
                    // (Σ X^{r−k}) X^s − (Σ X^{r−k})
                    let mut c = vec![0; r + s + 1];
                    for k in 0..r {
                        if values[k] == v {
                            c[r - k + s] += 1;
                            c[r - k] -= 1;
                        }
                    }
                    UniPoly::from_coeffs(c)
                })
                .collect(),
        );
    }
    SeparablePolynomial {
        sizes: sets.iter().map(Vec::len).collect(),
        f: spec.f().dense().to_vec(),
        periodic,
        preperiodic,
        degree_bounds: approx.shape().iter().map(|&(r, s)| r + s).collect(),
    }
}

impl SeparablePolynomial {
    pub fn dimension(&self) -> usize {
        self.sizes.len()
    }

    /// `r_n(i) + s_n(i)`.
    pub fn degree_bound(&self, i: usize) -> usize {
        self.degree_bounds[i]
    }

    /// Factor of coordinate `i` at value index `j`: `A_i` when `i ∈ I`,
    /// otherwise `B_i`.
    pub fn factor(&self, i: usize, j: usize, in_subset: bool) -> &UniPoly {
        if in_subset {
            &self.periodic[i][j]
        } else {
            &self.preperiodic[i][j]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.stats().degrees.iter().all(Option::is_none)
    }

    /// `P_{n,I}(point)`; bit `i` of `subset` selects coordinate `i`.
    pub fn evaluate_part(&self, subset: u32, point: &[BigInt]) -> BigInt {
        let r = self.dimension();
        let vals: Vec<Vec<BigInt>> = (0..r)
            .map(|i| {
                let in_i = subset >> i & 1 == 1;
                (0..self.sizes[i])
                    .map(|j| self.factor(i, j, in_i).evaluate(&point[i]))
                    .collect()
            })
            .collect();
        let mut total = BigInt::zero();
        for (flat, &fv) in self.f.iter().enumerate() {
            if fv == 0 {
                continue;
            }
            let mut prod = BigInt::from(fv);
            for (i, j) in self.indices(flat).into_iter().enumerate() {
                prod *= &vals[i][j];
            }
            total += prod;
        }
        total
    }

    /// `P_n(point) = Σ_I P_{n,I}(point)`.
    pub fn evaluate(&self, point: &[BigInt]) -> BigInt {
        (0..1u32 << self.dimension())
            .map(|subset| self.evaluate_part(subset, point))
            .sum()
    }

    fn indices(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.sizes.len()];
        for d in (0..self.sizes.len()).rev() {
            idx[d] = flat % self.sizes[d];
            flat /= self.sizes[d];
        }
        idx
    }

    fn combined(&self) -> Vec<Vec<UniPoly>> {
        (0..self.dimension())
            .map(|i| {
                (0..self.sizes[i])
                    .map(|j| self.periodic[i][j].add(&self.preperiodic[i][j]))
                    .collect()
            })
            .collect()
    }

    /// Exact coefficient statistics, streamed one variable at a time so that
    /// only `∏_{j>i} |Δ_j|` partial sums are held per level.
    pub fn stats(&self) -> PolyStats {
        let e = self.combined();
        let mut stats = PolyStats {
            max_abs: 0,
            degrees: vec![None; self.dimension()],
        };
        let g: Vec<i128> = self.f.iter().map(|&v| v as i128).collect();
        contract(0, &g, &self.sizes, &e, &mut stats);
        stats
    }

    /// All nonzero coefficients keyed by exponent tuple. Only for small
    /// degrees.
    pub fn to_sparse(&self) -> BTreeMap<Vec<usize>, i128> {
        let e = self.combined();
        let mut out: BTreeMap<Vec<usize>, i128> = BTreeMap::new();
        for (flat, &fv) in self.f.iter().enumerate() {
            if fv == 0 {
                continue;
            }
            let mut terms: BTreeMap<Vec<usize>, i128> = BTreeMap::from([(Vec::new(), fv as i128)]);
            for (i, j) in self.indices(flat).into_iter().enumerate() {
                let mut next = BTreeMap::new();
                for (exps, c) in &terms {
                    for (ex, &k) in e[i][j].coeffs().iter().enumerate() {
                        if k != 0 {
                            let mut ex2 = exps.clone();
                            ex2.push(ex);
                            *next.entry(ex2).or_insert(0) += c * k as i128;
                        }
                    }
                }
                terms = next;
            }
            for (exps, c) in terms {
                *out.entry(exps).or_insert(0) += c;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// Contracts coordinate `level` of the coefficient tensor `g` against each
/// exponent of its factors. Returns whether any coefficient below is nonzero.
fn contract(
    level: usize,
    g: &[i128],
    sizes: &[usize],
    e: &[Vec<UniPoly>],
    stats: &mut PolyStats,
) -> bool {
    let n = sizes[level];
    let rest = g.len() / n;
    let max_len = e[level].iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let last = level + 1 == sizes.len();
    let mut any = false;
    let mut next = vec![0i128; rest];
    for ex in 0..max_len {
        let coeff = |j: usize| *e[level][j].coeffs().get(ex).unwrap_or(&0) as i128;
        if last {
            let val: i128 = (0..n).map(|j| g[j] * coeff(j)).sum();
            if val != 0 {
                stats.max_abs = stats.max_abs.max(val.unsigned_abs());
                stats.degrees[level] = stats.degrees[level].max(Some(ex));
                any = true;
            }
            continue;
        }
        next.iter_mut().for_each(|x| *x = 0);
        let mut nonzero = false;
        for j in 0..n {
            let c = coeff(j);
            if c == 0 {
                continue;
            }
            for (t, x) in next.iter_mut().enumerate() {
                *x += g[j * rest + t] * c;
            }
            nonzero = true;
        }
        if nonzero && next.iter().any(|&x| x != 0) && contract(level + 1, &next, sizes, e, stats) {
            stats.degrees[level] = stats.degrees[level].max(Some(ex));
            any = true;
        }
    }
    any
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::integer;
    use crate::fixtures;
    use crate::series::approximants;
    use num_rational::BigRational;

    #[test]
    fn constant_polynomial() {
        // r = 0, s = 2^n: P = f · (X^s + ... + X)(Y^s + ... + Y) restricted to I = {1,2}
        let spec = fixtures::constant_2_3();
        let a = approximants(&spec, 1).unwrap();
        let p = build_p_n(&spec, &a);
        let sparse = p.to_sparse();
        let expected: BTreeMap<Vec<usize>, i128> = [1, 2]
            .iter()
            .flat_map(|&i| [1, 2].iter().map(move |&j| (vec![i, j], 1)))
            .collect();
        assert_eq!(sparse, expected);
        let point = [BigInt::from(2), BigInt::from(3)];
        let value = BigRational::new(p.evaluate(&point), a.denominator(&spec));
        assert_eq!(value, integer(3));
        // only the full subset contributes when there is no preperiod
        assert_eq!(p.evaluate_part(0b11, &point), p.evaluate(&point));
    }

    #[test]
    fn zero_table_gives_zero_polynomial() {
        let spec = fixtures::zero_2_3();
        let a = approximants(&spec, 2).unwrap();
        let p = build_p_n(&spec, &a);
        assert!(p.is_zero());
        assert!(p.to_sparse().is_empty());
        assert_eq!(p.stats().max_abs, 0);
    }

    #[test]
    fn streamed_stats_match_sparse_expansion() {
        for (name, spec) in fixtures::bundled_specs() {
            for n in 1..=3 {
                let a = approximants(&spec, n).unwrap();
                let p = build_p_n(&spec, &a);
                let sparse = p.to_sparse();
                let stats = p.stats();
                let max = sparse.values().map(|c| c.unsigned_abs()).max().unwrap_or(0);
                assert_eq!(stats.max_abs, max, "{name} n={n}");
                for i in 0..p.dimension() {
                    let deg = sparse.keys().map(|k| k[i]).max();
                    assert_eq!(stats.degrees[i], deg, "{name} n={n} dim {i}");
                    if let Some(d) = deg {
                        assert!(d <= p.degree_bound(i));
                    }
                }
                let bound = (1u128 << spec.dimension()) * spec.m() as u128;
                assert!(stats.max_abs <= bound);
            }
        }
    }

    #[test]
    fn parts_sum_to_whole() {
        let spec = fixtures::tm_rs_sum_2_3();
        let a = approximants(&spec, 2).unwrap();
        let p = build_p_n(&spec, &a);
        let point = [BigInt::from(2), BigInt::from(3)];
        let parts: BigInt = (0..4).map(|s| p.evaluate_part(s, &point)).sum();
        assert_eq!(parts, p.evaluate(&point));
        // evaluation of the sparse form agrees
        let sparse: BigInt = p
            .to_sparse()
            .iter()
            .map(|(ex, c)| {
                BigInt::from(*c)
                    * num_traits::pow(point[0].clone(), ex[0])
                    * num_traits::pow(point[1].clone(), ex[1])
            })
            .sum();
        assert_eq!(sparse, p.evaluate(&point));
    }
}
