//! Base-k digit words in one and several dimensions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which end of a digit word carries the least significant digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DigitOrder {
    LsbFirst,
    MsbFirst,
}

impl DigitOrder {
    pub fn flipped(self) -> Self {
        match self {
            DigitOrder::LsbFirst => DigitOrder::MsbFirst,
            DigitOrder::MsbFirst => DigitOrder::LsbFirst,
        }
    }
}

/// Number of letters of the product alphabet `Σ_{k1} × ... × Σ_{kr}`.
pub fn alphabet_size(bases: &[u32]) -> usize {
    bases.iter().map(|&k| k as usize).product()
}

/// Packs a digit tuple into a letter index (mixed radix, first component
/// least significant).
pub fn pack_letter(bases: &[u32], digits: &[u32]) -> usize {
    let mut letter = 0usize;
    for (&k, &d) in bases.iter().zip(digits).rev() {
        letter = letter * k as usize + d as usize;
    }
    letter
}

pub fn unpack_letter(bases: &[u32], mut letter: usize) -> Vec<u32> {
    bases
        .iter()
        .map(|&k| {
            let d = (letter % k as usize) as u32;
            letter /= k as usize;
            d
        })
        .collect()
}

/// A word over `Σ_{k1} × ... × Σ_{kr}`, stored tuple by tuple in reading
/// order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DigitWord {
    bases: Vec<u32>,
    order: DigitOrder,
    digits: Vec<u32>,
}

impl DigitWord {
    pub fn new(bases: Vec<u32>, order: DigitOrder, tuples: Vec<Vec<u32>>) -> Result<Self> {
        check_bases(&bases)?;
        let mut digits = Vec::with_capacity(tuples.len() * bases.len());
        for (pos, t) in tuples.iter().enumerate() {
            if t.len() != bases.len() {
                return Err(Error::InputDomain(format!(
                    "tuple {pos} has {} components, expected {}",
                    t.len(),
                    bases.len()
                )));
            }
            for (i, (&d, &k)) in t.iter().zip(&bases).enumerate() {
                if d >= k {
                    return Err(Error::InputDomain(format!(
                        "digit {d} at position {pos}, component {i} is not below base {k}"
                    )));
                }
            }
            digits.extend_from_slice(t);
        }
        Ok(Self {
            bases,
            order,
            digits,
        })
    }

    /// One-dimensional word from a digit list.
    pub fn from_digits(base: u32, order: DigitOrder, digits: &[u32]) -> Result<Self> {
        Self::new(
            vec![base],
            order,
            digits.iter().map(|&d| vec![d]).collect(),
        )
    }

    pub fn from_letters(bases: Vec<u32>, order: DigitOrder, letters: &[usize]) -> Self {
        let mut digits = Vec::with_capacity(letters.len() * bases.len());
        for &l in letters {
            digits.extend(unpack_letter(&bases, l));
        }
        Self {
            bases,
            order,
            digits,
        }
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn order(&self) -> DigitOrder {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.bases.len()
    }

    pub fn len(&self) -> usize {
        self.digits.len() / self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The `pos`-th tuple in reading order.
    pub fn tuple(&self, pos: usize) -> &[u32] {
        let r = self.bases.len();
        &self.digits[pos * r..(pos + 1) * r]
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[u32]> {
        self.digits.chunks(self.bases.len())
    }

    /// Digits of a one-dimensional word in reading order.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.tuples().map(|t| pack_letter(&self.bases, t))
    }

    /// The same word read in the opposite order.
    pub fn reversed(&self) -> Self {
        let mut tuples: Vec<&[u32]> = self.tuples().collect();
        tuples.reverse();
        Self {
            bases: self.bases.clone(),
            order: self.order.flipped(),
            digits: tuples.concat(),
        }
    }

    pub fn with_order(&self, order: DigitOrder) -> Self {
        if order == self.order {
            self.clone()
        } else {
            self.reversed()
        }
    }

    /// Appends `t` all-zero tuples at the most significant end.
    pub fn padded(&self, t: usize) -> Self {
        let r = self.bases.len();
        let zeros = vec![0u32; t * r];
        let digits = match self.order {
            DigitOrder::LsbFirst => [self.digits.as_slice(), &zeros].concat(),
            DigitOrder::MsbFirst => [zeros.as_slice(), &self.digits].concat(),
        };
        Self {
            bases: self.bases.clone(),
            order: self.order,
            digits,
        }
    }

    /// Strips all-zero tuples from the most significant end, keeping one
    /// tuple for the value zero.
    pub fn canonical(&self) -> Self {
        let r = self.bases.len();
        let mut tuples: Vec<&[u32]> = self.tuples().collect();
        if self.order == DigitOrder::MsbFirst {
            tuples.reverse();
        }
        while tuples.len() > 1 && tuples.last().is_some_and(|t| t.iter().all(|&d| d == 0)) {
            tuples.pop();
        }
        if tuples.is_empty() {
            return Self {
                bases: self.bases.clone(),
                order: self.order,
                digits: vec![0; r],
            };
        }
        if self.order == DigitOrder::MsbFirst {
            tuples.reverse();
        }
        Self {
            bases: self.bases.clone(),
            order: self.order,
            digits: tuples.concat(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }
}

impl fmt::Debug for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitWord({:?}, {:?}, {self})", self.bases, self.order)
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        if self.bases.len() == 1 && self.bases[0] <= 10 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
            return Ok(());
        }
        for t in self.tuples() {
            f.write_str("[")?;
            for (i, d) in t.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{d}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

pub(crate) fn check_bases(bases: &[u32]) -> Result<()> {
    if bases.is_empty() {
        return Err(Error::InputDomain("at least one base is required".into()));
    }
    if let Some(k) = bases.iter().find(|&&k| k < 2) {
        return Err(Error::InputDomain(format!("base {k} is below 2")));
    }
    Ok(())
}

/// Least significant digit first, `[0]` for zero.
pub(crate) fn lsb_digits(mut n: u64, k: u32) -> Vec<u32> {
    if n == 0 {
        return vec![0];
    }
    let k = k as u64;
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % k) as u32);
        n /= k;
    }
    out
}

/// Canonical base-`k` representation `(n)_k`.
pub fn encode(n: u64, k: u32, order: DigitOrder) -> Result<DigitWord> {
    check_bases(&[k])?;
    let mut digits = lsb_digits(n, k);
    if order == DigitOrder::MsbFirst {
        digits.reverse();
    }
    Ok(DigitWord {
        bases: vec![k],
        order,
        digits,
    })
}

/// `(n_1, ..., n_r)` in bases `(k_1, ..., k_r)`; shorter expansions are
/// padded with zeros at their most significant end to a common length.
pub fn encode_multidim(ns: &[u64], bases: &[u32], order: DigitOrder) -> Result<DigitWord> {
    check_bases(bases)?;
    if ns.len() != bases.len() {
        return Err(Error::InputDomain(format!(
            "{} components for {} bases",
            ns.len(),
            bases.len()
        )));
    }
    let expansions: Vec<Vec<u32>> = ns
        .iter()
        .zip(bases)
        .map(|(&n, &k)| lsb_digits(n, k))
        .collect();
    let len = expansions.iter().map(Vec::len).max().unwrap_or(1);
    let r = bases.len();
    let mut digits = vec![0u32; len * r];
    for (i, e) in expansions.iter().enumerate() {
        for (pos, &d) in e.iter().enumerate() {
            digits[pos * r + i] = d;
        }
    }
    let w = DigitWord {
        bases: bases.to_vec(),
        order: DigitOrder::LsbFirst,
        digits,
    };
    Ok(w.with_order(order))
}

/// Value of each component, `sum w_i k^i` with `w_0` least significant.
pub fn decode(w: &DigitWord) -> Result<Vec<u64>> {
    let r = w.dimension();
    let mut values = vec![0u64; r];
    let msb = w.with_order(DigitOrder::MsbFirst);
    // Horner from the most significant end
    for t in msb.tuples() {
        for i in 0..r {
            values[i] = values[i]
                .checked_mul(w.bases[i] as u64)
                .and_then(|v| v.checked_add(t[i] as u64))
                .ok_or_else(|| Error::InputDomain(format!("component {i} overflows u64")))?;
        }
    }
    Ok(values)
}

/// Value of a one-dimensional word.
pub fn decode_scalar(w: &DigitWord) -> Result<u64> {
    if w.dimension() != 1 {
        return Err(Error::Configuration(format!(
            "expected a one-dimensional word, got dimension {}",
            w.dimension()
        )));
    }
    Ok(decode(w)?[0])
}
