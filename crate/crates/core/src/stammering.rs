//! Repetitive prefixes `U_n V_n^w` of fixed points of uniform morphisms.
//!
//! Among the first `|𝔅| + 1` letters of the fixed point some letter repeats,
//! which splits that prefix as `W₁ u W₂ u W₃`. Iterating the morphism then
//! gives `U_n = σⁿ(W₁)` and `V_n = σⁿ(uW₂)` with `U_n V_n^w` a prefix for
//! `w = 1 + 1/|𝔅|`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::words::{fractional_power_len, Symbol, UniformMorphism, Word, WordSource};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StammerSeed {
    pub w1: Word,
    pub u: Symbol,
    pub w2: Word,
    pub w3: Word,
    pub exponent: BigRational,
}

impl StammerSeed {
    /// `|W₁| / |uW₂|`, which is also `|U_n| / |V_n|` for every `n`.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.w1.len()),
            BigInt::from(self.w2.len() + 1),
        )
    }
}

/// One member of the family: `U`, `V` and the index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StammerPair<T = Symbol> {
    pub n: u32,
    pub u: Word<T>,
    pub v: Word<T>,
}

impl<T> StammerPair<T> {
    /// `r_n = |U_n|`.
    pub fn preperiod(&self) -> usize {
        self.u.len()
    }

    /// `s_n = |V_n|`.
    pub fn period(&self) -> usize {
        self.v.len()
    }

    /// Applies a letter-to-letter coding to both words.
    pub fn coded<U>(&self, f: impl Fn(&T) -> U) -> StammerPair<U> {
        StammerPair {
            n: self.n,
            u: self.u.map(&f),
            v: self.v.map(&f),
        }
    }
}

/// Splits the length-`|𝔅|+1` prefix of the fixed point at its first repeated
/// letter, using the first two occurrences of that letter.
pub fn find_seed(m: &UniformMorphism) -> StammerSeed {
    let size = m.alphabet().len();
    let prefix = m.fixed_point_prefix(size + 1).into_vec();
    let mut first_seen = vec![None; size];
    let (i, j) = prefix
        .iter()
        .enumerate()
        .find_map(|(pos, a)| match first_seen[a.index()] {
            Some(earlier) => Some((earlier, pos)),
            None => {
                first_seen[a.index()] = Some(pos);
                None
            }
        })
        .expect("pigeonhole: |B| + 1 letters over |B| symbols repeat");
    StammerSeed {
        w1: Word::new(prefix[..i].to_vec()),
        u: prefix[i],
        w2: Word::new(prefix[i + 1..j].to_vec()),
        w3: Word::new(prefix[j + 1..].to_vec()),
        exponent: BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(size)),
    }
}

/// `U_n = σⁿ(W₁)`, `V_n = σⁿ(uW₂)`.
pub fn stammer_pair(seed: &StammerSeed, m: &UniformMorphism, n: u32) -> Result<StammerPair> {
    if n == 0 {
        return Err(Error::InputDomain("stammer pairs are indexed from n = 1".into()));
    }
    let mut uw2 = vec![seed.u];
    uw2.extend_from_slice(seed.w2.as_slice());
    Ok(StammerPair {
        n,
        u: m.apply_n(&seed.w1, n)?,
        v: m.apply_n(&Word::new(uw2), n)?,
    })
}

/// `|U| + |V^w|`, the length of the prefix a pair asserts.
pub fn matched_len<T>(pair: &StammerPair<T>, w: &BigRational) -> Result<usize> {
    if pair.v.is_empty() {
        return Err(Error::InputDomain("V must be nonempty".into()));
    }
    Ok(pair.u.len() + fractional_power_len(pair.v.len(), w)?)
}

/// Whether `U · V^w` is a prefix of the word, checked letter by letter.
pub fn verify_pair<T, S>(pair: &StammerPair<T>, w: &BigRational, source: &S) -> Result<bool>
where
    T: PartialEq + Clone,
    S: WordSource<T> + ?Sized,
{
    let needed = matched_len(pair, w)?;
    let word = source.prefix(needed).ok_or(Error::Capacity { needed })?;
    let (head, tail) = word.split_at(pair.u.len());
    if head != pair.u.as_slice() {
        return Ok(false);
    }
    Ok(tail
        .iter()
        .zip(pair.v.as_slice().iter().cycle())
        .all(|(a, b)| a == b))
}

/// Best repetition found by [`exponent_scan`]: the prefix `U V^w` with
/// `|U| = u_len`, `|V| = v_len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub u_len: usize,
    pub v_len: usize,
    pub exponent: BigRational,
}

/// Searches prefixes `U V^w` with `|UV| <= max_len` and `|U| / |V| <=
/// ratio_bound` for the largest `w`. Ties go to the shortest `V`, then the
/// shortest `U`. Repetitions are followed through the first `4 * max_len`
/// letters of the word.
pub fn exponent_scan<T, S>(source: &S, max_len: usize, ratio_bound: &BigRational) -> Result<ScanResult>
where
    T: PartialEq + Clone,
    S: WordSource<T> + ?Sized,
{
    if max_len < 2 {
        return Err(Error::InputDomain("max_len must be at least 2".into()));
    }
    let horizon = 4 * max_len;
    let word = source
        .prefix(horizon)
        .ok_or(Error::Capacity { needed: horizon })?;
    let mut best: Option<ScanResult> = None;
    for v_len in 1..=max_len {
        for u_len in 0..=(max_len - v_len) {
            let ratio = BigRational::new(BigInt::from(u_len), BigInt::from(v_len));
            if &ratio > ratio_bound {
                break;
            }
            // how far the period v_len persists after U
            let run = (u_len + v_len..horizon)
                .take_while(|&i| word[i] == word[i - v_len])
                .count();
            let exponent = BigRational::new(BigInt::from(v_len + run), BigInt::from(v_len));
            if best.as_ref().is_none_or(|b| exponent > b.exponent) {
                best = Some(ScanResult {
                    u_len,
                    v_len,
                    exponent,
                });
            }
        }
    }
    Ok(best.expect("max_len >= 2 admits U = ε, |V| = 1"))
}
