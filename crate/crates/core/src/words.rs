//! Finite words, k-uniform morphisms and fractional powers.
//!
//! Infinite words are never materialized. Anything that behaves like one
//! implements [`WordSource`] and hands out bounded prefixes on request.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// A letter of a finite alphabet, identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite set of named letters. Letter `i` is `Symbol(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Construction("alphabet must be nonempty".into()));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if let Some(j) = seen.insert(name.as_str(), i) {
                return Err(Error::Construction(format!(
                    "letter `{name}` declared twice (positions {j} and {i})"
                )));
            }
        }
        Ok(Self { names })
    }

    /// Alphabet `{0, 1, ..., size - 1}` with decimal names.
    pub fn numbered(size: usize) -> Self {
        Self {
            names: (0..size).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.names.len()
    }

    pub fn name(&self, s: Symbol) -> Option<&str> {
        self.names.get(s.index()).map(String::as_str)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Symbol(i as u32))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.names.len() as u32).map(Symbol)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A finite word. The default letter type is [`Symbol`]; coded words use
/// integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word<T = Symbol>(Vec<T>);

impl<T> Word<T> {
    pub fn new(symbols: Vec<T>) -> Self {
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Word<U> {
        Word(self.0.iter().map(f).collect())
    }
}

impl<T: Clone> Word<T> {
    pub fn concat(&self, other: &Word<T>) -> Word<T> {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The prefix of length `min(len, |self|)`.
    pub fn prefix(&self, len: usize) -> Word<T> {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }
}

impl Word<Symbol> {
    /// Builds a word, rejecting letters that do not belong to `alphabet`.
    pub fn over(alphabet: &Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|s| !alphabet.contains(**s)) {
            return Err(Error::InputDomain(format!(
                "symbol {} not in alphabet of size {}",
                s.0,
                alphabet.len()
            )));
        }
        Ok(Self(symbols))
    }

    /// Parses a word from letter names.
    pub fn parse<S: AsRef<str>>(alphabet: &Alphabet, names: &[S]) -> Result<Self> {
        names
            .iter()
            .map(|n| {
                alphabet.symbol(n.as_ref()).ok_or_else(|| {
                    Error::InputDomain(format!("unknown letter `{}`", n.as_ref()))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Parses a word over a single-character alphabet, one letter per char.
    pub fn from_chars(alphabet: &Alphabet, s: &str) -> Result<Self> {
        let names: Vec<String> = s.chars().map(String::from).collect();
        Self::parse(alphabet, &names)
    }
}

impl<T> FromIterator<T> for Word<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<T> From<Vec<T>> for Word<T> {
    fn from(v: Vec<T>) -> Self {
        Word(v)
    }
}

impl<T: fmt::Debug> fmt::Debug for Word<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// Anything that can hand out prefixes of a (possibly infinite) word.
pub trait WordSource<T> {
    /// The first `len` letters, or `None` when fewer than `len` exist.
    fn prefix(&self, len: usize) -> Option<Vec<T>>;
}

impl<T: Clone> WordSource<T> for Word<T> {
    fn prefix(&self, len: usize) -> Option<Vec<T>> {
        (len <= self.0.len()).then(|| self.0[..len].to_vec())
    }
}

impl<T: Clone> WordSource<T> for [T] {
    fn prefix(&self, len: usize) -> Option<Vec<T>> {
        (len <= self.len()).then(|| self[..len].to_vec())
    }
}

/// An infinite word given by a generating function `i -> letter`.
pub struct FnSource<F>(pub F);

impl<T, F: Fn(usize) -> T> WordSource<T> for FnSource<F> {
    fn prefix(&self, len: usize) -> Option<Vec<T>> {
        Some((0..len).map(&self.0).collect())
    }
}

/// True iff `z = x · y` for some word `y`.
pub fn is_prefix<T: PartialEq, S: WordSource<T> + ?Sized>(x: &[T], z: &S) -> bool {
    match z.prefix(x.len()) {
        Some(p) => p.as_slice() == x,
        None => false,
    }
}

/// Length of `W^x` for a word of length `len`:
/// `floor(x) * len + ceil(frac(x) * len)`.
pub fn fractional_power_len(len: usize, x: &BigRational) -> Result<usize> {
    if !x.is_positive() {
        return Err(Error::InputDomain(format!("exponent {x} must be positive")));
    }
    let whole = x.floor();
    let frac = x - &whole;
    let len_q = BigRational::from_integer(BigInt::from(len));
    let extra = (frac * &len_q).ceil().to_integer();
    let total = whole.to_integer() * BigInt::from(len) + extra;
    total
        .to_usize()
        .ok_or_else(|| Error::InputDomain(format!("power length {total} too large")))
}

/// `W^x`: `floor(x)` copies of `W` followed by its prefix of length
/// `ceil(frac(x) * |W|)`.
pub fn fractional_power<T: Clone>(w: &Word<T>, x: &BigRational) -> Result<Word<T>> {
    if w.is_empty() {
        return Err(Error::InputDomain(
            "fractional power of the empty word".into(),
        ));
    }
    let total = fractional_power_len(w.len(), x)?;
    Ok(w.iter().cycle().take(total).cloned().collect())
}

/// A k-uniform morphism together with a coding into the integers and a
/// prolongable seed letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformMorphism {
    alphabet: Alphabet,
    k: usize,
    rules: Vec<Vec<Symbol>>,
    coding: Vec<i64>,
    seed: Symbol,
}

impl UniformMorphism {
    /// `rules[a]` is the image of letter `a`, `coding[a]` its output value.
    pub fn new(
        alphabet: Alphabet,
        rules: Vec<Vec<Symbol>>,
        coding: Vec<i64>,
        seed: Symbol,
    ) -> Result<Self> {
        let n = alphabet.len();
        if rules.len() != n {
            return Err(Error::Construction(format!(
                "{} rules for an alphabet of {n} letters",
                rules.len()
            )));
        }
        if coding.len() != n {
            return Err(Error::Construction(format!(
                "coding has {} entries for {n} letters",
                coding.len()
            )));
        }
        let k = rules[0].len();
        if k < 2 {
            return Err(Error::Construction(format!(
                "uniform morphisms need k >= 2, got {k}"
            )));
        }
        for (a, image) in rules.iter().enumerate() {
            if image.len() != k {
                return Err(Error::Construction(format!(
                    "image of `{}` has length {}, expected {k}",
                    alphabet.names()[a],
                    image.len()
                )));
            }
            if let Some(s) = image.iter().find(|s| !alphabet.contains(**s)) {
                return Err(Error::Construction(format!(
                    "image of `{}` uses unknown symbol {}",
                    alphabet.names()[a],
                    s.0
                )));
            }
        }
        if !alphabet.contains(seed) {
            return Err(Error::Construction(format!("seed {} not in alphabet", seed.0)));
        }
        if rules[seed.index()][0] != seed {
            return Err(Error::Construction(format!(
                "morphism is not prolongable on `{}`",
                alphabet.names()[seed.index()]
            )));
        }
        Ok(Self {
            alphabet,
            k,
            rules,
            coding,
            seed,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> Symbol {
        self.seed
    }

    pub fn image(&self, a: Symbol) -> &[Symbol] {
        &self.rules[a.index()]
    }

    pub fn coding(&self) -> &[i64] {
        &self.coding
    }

    pub fn code(&self, a: Symbol) -> i64 {
        self.coding[a.index()]
    }

    /// Applies the morphism letter by letter.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len() * self.k);
        for &a in w.iter() {
            if !self.alphabet.contains(a) {
                return Err(Error::InputDomain(format!(
                    "symbol {} outside the morphism alphabet",
                    a.0
                )));
            }
            out.extend_from_slice(&self.rules[a.index()]);
        }
        Ok(Word(out))
    }

    /// `n`-fold application.
    pub fn apply_n(&self, w: &Word, n: u32) -> Result<Word> {
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// The first `length` letters of the fixed point generated from the seed.
    pub fn fixed_point_prefix(&self, length: usize) -> Word {
        if length == 0 {
            return Word::empty();
        }
        let mut cur = vec![self.seed];
        while cur.len() < length {
            // prolongability makes every iterate a prefix of the next one
            let mut next = Vec::with_capacity(cur.len() * self.k);
            for &a in &cur {
                next.extend_from_slice(&self.rules[a.index()]);
                if next.len() >= length {
                    break;
                }
            }
            cur = next;
        }
        cur.truncate(length);
        Word(cur)
    }

    /// The first `length` terms of the coded fixed point.
    pub fn coded_prefix(&self, length: usize) -> Vec<i64> {
        self.fixed_point_prefix(length)
            .iter()
            .map(|&a| self.code(a))
            .collect()
    }

    /// Word source over the letters of the fixed point.
    pub fn fixed_point(&self) -> FixedPoint<'_> {
        FixedPoint(self)
    }
}

/// The fixed point of a prolongable morphism, read through [`WordSource`].
pub struct FixedPoint<'a>(&'a UniformMorphism);

impl WordSource<Symbol> for FixedPoint<'_> {
    fn prefix(&self, len: usize) -> Option<Vec<Symbol>> {
        Some(self.0.fixed_point_prefix(len).into_vec())
    }
}

/// The coded fixed point `coding(sigma^omega(seed))`.
pub struct CodedFixedPoint<'a>(pub &'a UniformMorphism);

impl WordSource<i64> for CodedFixedPoint<'_> {
    fn prefix(&self, len: usize) -> Option<Vec<i64>> {
        Some(self.0.coded_prefix(len))
    }
}
