//! Automatic arrays `c_{n_1..n_r} = f(p_{n_1}(1), ..., p_{n_r}(r))` and the
//! series `α = Σ c_n / (a_1^{n_1} ⋯ a_r^{n_r})`.

mod approx;
mod poly;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use approx::{
    alpha_n_exact, alpha_n_oracle, approximants, denominator_divides, error_bound, error_enclosure,
    periodize, Approximant, DimApprox, ErrorBound, PeriodizedSeq,
};
pub use poly::{build_p_n, PolyStats, SeparablePolynomial, UniPoly};

use crate::automata::{DigitOrder, Dfao};
use crate::diophantine::{mult_independence, Independence};
use crate::enclosure::{integer, RationalEnclosure};
use crate::error::{Error, Result};
use crate::words::UniformMorphism;

/// Terms checked against the declared value sets when a spec is built.
pub const VALUE_SPOT_CHECK: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Morphism,
    Dfao,
}

/// A bounded automatic sequence, held in both morphism and automaton form.
/// `kind` records which form was supplied; the other is derived from it.
#[derive(Clone, Debug)]
pub struct Generator {
    kind: GeneratorKind,
    morphism: UniformMorphism,
    dfao: Dfao,
}

impl Generator {
    pub fn from_morphism(m: UniformMorphism) -> Self {
        let dfao = Dfao::from_morphism(&m);
        Self {
            kind: GeneratorKind::Morphism,
            morphism: m,
            dfao,
        }
    }

    pub fn from_dfao(d: Dfao) -> Result<Self> {
        if d.dimension() != 1 {
            return Err(Error::Configuration(format!(
                "sequence generators read one digit per step, got dimension {}",
                d.dimension()
            )));
        }
        let morphism = d.to_morphism()?;
        let g = Self {
            kind: GeneratorKind::Dfao,
            morphism,
            dfao: d,
        };
        let from_morphism = g.morphism.coded_prefix(VALUE_SPOT_CHECK);
        for (n, v) in from_morphism.iter().enumerate() {
            if g.dfao.seq_term(n as u64)? != *v {
                return Err(Error::Invariant(format!(
                    "derived morphism disagrees with its automaton at n = {n}"
                )));
            }
        }
        Ok(g)
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn morphism(&self) -> &UniformMorphism {
        &self.morphism
    }

    pub fn dfao(&self) -> &Dfao {
        &self.dfao
    }

    /// The automaton reading most significant digits first.
    pub fn msb_dfao(&self) -> Dfao {
        match self.dfao.order() {
            DigitOrder::MsbFirst => self.dfao.clone(),
            DigitOrder::LsbFirst => self.dfao.reverse_reading(),
        }
    }

    pub fn base(&self) -> u32 {
        self.morphism.k() as u32
    }

    pub fn term(&self, n: u64) -> Result<i64> {
        self.dfao.seq_term(n)
    }

    pub fn prefix(&self, len: usize) -> Vec<i64> {
        self.morphism.coded_prefix(len)
    }

    /// `Some(c)` when the sequence is provably constant: its padding-canonical
    /// minimal automaton has a single state.
    pub fn constant_value(&self) -> Option<i64> {
        let d = self.dfao.canonicalize_padding().minimize();
        (d.num_states() == 1).then(|| d.output(d.start()))
    }
}

/// A total table for `f` on `Δ_1 × ⋯ × Δ_r`, stored densely with the first
/// coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTable {
    value_sets: Vec<Vec<i64>>,
    values: Vec<i64>,
}

impl FTable {
    /// Fails with a schema error naming the first missing or duplicated tuple.
    pub fn new(value_sets: Vec<Vec<i64>>, entries: &[(Vec<i64>, i64)]) -> Result<Self> {
        let value_sets = normalize_sets(value_sets)?;
        let size: usize = value_sets.iter().map(Vec::len).product();
        let mut values: Vec<Option<i64>> = vec![None; size];
        let shell = Self {
            value_sets,
            values: Vec::new(),
        };
        for (pos, (tuple, v)) in entries.iter().enumerate() {
            let idx = shell.flat_index(tuple).ok_or_else(|| {
                Error::schema(
                    format!("f_table[{pos}]"),
                    format!("tuple {} is outside the value sets", show_tuple(tuple)),
                )
            })?;
            if values[idx].replace(*v).is_some() {
                return Err(Error::schema(
                    format!("f_table[{pos}]"),
                    format!("duplicate entry for {}", show_tuple(tuple)),
                ));
            }
        }
        let mut dense = Vec::with_capacity(size);
        for (idx, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => dense.push(v),
                None => {
                    return Err(Error::schema(
                        "f_table",
                        format!("missing entry for {}", show_tuple(&shell.tuple_at(idx))),
                    ))
                }
            }
        }
        Ok(Self {
            value_sets: shell.value_sets,
            values: dense,
        })
    }

    pub fn from_fn(value_sets: Vec<Vec<i64>>, f: impl Fn(&[i64]) -> i64) -> Result<Self> {
        let value_sets = normalize_sets(value_sets)?;
        let size: usize = value_sets.iter().map(Vec::len).product();
        let mut t = Self {
            value_sets,
            values: Vec::with_capacity(size),
        };
        t.values = (0..size).map(|idx| f(&t.tuple_at(idx))).collect();
        Ok(t)
    }

    pub fn dimension(&self) -> usize {
        self.value_sets.len()
    }

    pub fn value_sets(&self) -> &[Vec<i64>] {
        &self.value_sets
    }

    pub fn value_index(&self, dim: usize, v: i64) -> Option<usize> {
        self.value_sets[dim].binary_search(&v).ok()
    }

    pub fn get(&self, tuple: &[i64]) -> Option<i64> {
        self.flat_index(tuple).map(|i| self.values[i])
    }

    /// Value at a tuple of value indices.
    pub fn at(&self, indices: &[usize]) -> i64 {
        let mut idx = 0;
        for (d, &i) in indices.iter().enumerate() {
            idx = idx * self.value_sets[d].len() + i;
        }
        self.values[idx]
    }

    /// Dense values, first coordinate most significant.
    pub fn dense(&self) -> &[i64] {
        &self.values
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<i64>, i64)> + '_ {
        (0..self.values.len()).map(|i| (self.tuple_at(i), self.values[i]))
    }

    fn flat_index(&self, tuple: &[i64]) -> Option<usize> {
        if tuple.len() != self.dimension() {
            return None;
        }
        let mut idx = 0;
        for (d, &v) in tuple.iter().enumerate() {
            idx = idx * self.value_sets[d].len() + self.value_index(d, v)?;
        }
        Some(idx)
    }

    fn tuple_at(&self, mut idx: usize) -> Vec<i64> {
        let mut t = vec![0; self.dimension()];
        for d in (0..self.dimension()).rev() {
            let len = self.value_sets[d].len();
            t[d] = self.value_sets[d][idx % len];
            idx /= len;
        }
        t
    }
}

fn normalize_sets(sets: Vec<Vec<i64>>) -> Result<Vec<Vec<i64>>> {
    sets.into_iter()
        .enumerate()
        .map(|(i, s)| {
            let s: Vec<i64> = s.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            if s.is_empty() {
                Err(Error::schema(format!("value_sets[{i}]"), "empty value set"))
            } else {
                Ok(s)
            }
        })
        .collect()
}

fn show_tuple(t: &[i64]) -> String {
    let parts: Vec<String> = t.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

/// The data defining `α`: bases `a_i`, generators `p(i)`, the table `f` and
/// the declared bound `M ≥ |f|`.
#[derive(Clone, Debug)]
pub struct ArraySpec {
    bases: Vec<u64>,
    generators: Vec<Generator>,
    f: FTable,
    m: i64,
}

impl ArraySpec {
    pub fn new(bases: Vec<u64>, generators: Vec<Generator>, f: FTable, m: i64) -> Result<Self> {
        if bases.len() < 2 {
            return Err(Error::schema(
                "bases",
                format!("need at least 2 dimensions, got {}", bases.len()),
            ));
        }
        if let Some(i) = bases.iter().position(|&a| a < 2) {
            return Err(Error::schema(format!("bases[{i}]"), "bases must be at least 2"));
        }
        if generators.len() != bases.len() {
            return Err(Error::schema(
                "generators",
                format!("{} generators for {} bases", generators.len(), bases.len()),
            ));
        }
        if f.dimension() != bases.len() {
            return Err(Error::schema(
                "value_sets",
                format!("{} value sets for {} bases", f.dimension(), bases.len()),
            ));
        }
        if let Independence::Dependent(certificate) = mult_independence(&bases)? {
            return Err(Error::DependentBases { certificate });
        }
        if m < 0 || f.max_abs() > m {
            return Err(Error::schema(
                "m",
                format!("declared M = {m} but the table reaches {}", f.max_abs()),
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            if let Some((n, v)) = g
                .prefix(VALUE_SPOT_CHECK)
                .into_iter()
                .enumerate()
                .find(|(_, v)| f.value_index(i, *v).is_none())
            {
                return Err(Error::schema(
                    format!("generators[{i}]"),
                    format!("term {n} has value {v}, outside value set {:?}", f.value_sets()[i]),
                ));
            }
        }
        Ok(Self {
            bases,
            generators,
            f,
            m,
        })
    }

    pub fn dimension(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    pub fn base(&self, i: usize) -> BigInt {
        BigInt::from(self.bases[i])
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn f(&self) -> &FTable {
        &self.f
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// `c_{n_1..n_r}`.
    pub fn coefficient(&self, ns: &[u64]) -> Result<i64> {
        if ns.len() != self.dimension() {
            return Err(Error::InputDomain(format!(
                "index of length {} for a {}-dimensional array",
                ns.len(),
                self.dimension()
            )));
        }
        let values = ns
            .iter()
            .zip(&self.generators)
            .map(|(&n, g)| g.term(n))
            .collect::<Result<Vec<_>>>()?;
        self.lookup(&values)
    }

    fn lookup(&self, values: &[i64]) -> Result<i64> {
        self.f.get(values).ok_or_else(|| {
            Error::schema(
                "value_sets",
                format!("generator values {} outside the declared sets", show_tuple(values)),
            )
        })
    }

    /// The `[k_1, ..., k_r]`-automaton of the array, reading most significant
    /// digits first.
    pub fn product_dfao(&self) -> Result<Dfao> {
        let ds: Vec<Dfao> = self.generators.iter().map(Generator::msb_dfao).collect();
        Dfao::product(&ds, |vals| self.lookup(vals))
    }

    /// Enclosure of `α` of width at most `target_width`, from
    /// `α = Σ_v f(v) ∏ D_i(v_i)` with `D_i(v) = Σ_{p_k(i) = v} a_i^{-k}`.
    pub fn evaluate_alpha(&self, target_width: &BigRational) -> Result<RationalEnclosure> {
        if !target_width.is_positive() {
            return Err(Error::InputDomain("target width must be positive".into()));
        }
        if self.f.is_zero() {
            return Ok(RationalEnclosure::zero());
        }
        let constants: Vec<Option<i64>> =
            self.generators.iter().map(Generator::constant_value).collect();
        let mut n_terms = 64usize;
        loop {
            let d: Vec<Vec<RationalEnclosure>> = (0..self.dimension())
                .map(|i| self.digit_sums(i, constants[i], n_terms))
                .collect();
            let alpha = combine(&self.f, &d);
            if &alpha.width() <= target_width {
                return Ok(alpha);
            }
            if n_terms > 1 << 24 {
                return Err(Error::PrecisionInsufficient(format!(
                    "alpha enclosure still wider than {target_width} after {n_terms} terms"
                )));
            }
            n_terms *= 2;
        }
    }

    /// Enclosures of `D_i(v)` for each `v ∈ Δ_i` using terms `k ≤ n_terms`.
    fn digit_sums(&self, i: usize, constant: Option<i64>, n_terms: usize) -> Vec<RationalEnclosure> {
        let a = self.base(i);
        let set = &self.f.value_sets()[i];
        let geometric = BigRational::new(a.clone(), &a - 1);
        if let Some(c) = constant {
            return set
                .iter()
                .map(|&v| {
                    if v == c {
                        RationalEnclosure::point(geometric.clone())
                    } else {
                        RationalEnclosure::zero()
                    }
                })
                .collect();
        }
        let terms = self.generators[i].prefix(n_terms + 1);
        let scale = num_traits::pow(a.clone(), n_terms);
        let tail = &geometric / BigRational::from_integer(&scale * &a);
        set.iter()
            .map(|&v| {
                // Horner: Σ_{k ≤ N, p_k = v} a^{N-k}
                let mut num = BigInt::zero();
                for &t in &terms {
                    num *= &a;
                    if t == v {
                        num += 1;
                    }
                }
                let lo = BigRational::new(num, scale.clone());
                let hi = &lo + &tail;
                RationalEnclosure::new(lo, hi).expect("tail is nonnegative")
            })
            .collect()
    }
}

/// `Σ_v f(v) ∏_i d[i][v_i]` over all value tuples.
fn combine(f: &FTable, d: &[Vec<RationalEnclosure>]) -> RationalEnclosure {
    let r = d.len();
    let mut total = RationalEnclosure::zero();
    let mut idx = vec![0usize; r];
    loop {
        let fv = f.at(&idx);
        if fv != 0 {
            let mut prod = RationalEnclosure::point(BigRational::one());
            for (i, &j) in idx.iter().enumerate() {
                prod = &prod * &d[i][j];
            }
            total = &total + &prod.scale(&integer(fv));
        }
        // odometer, last coordinate fastest
        let mut pos = r;
        loop {
            if pos == 0 {
                return total;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < d[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
