//! Deterministic finite automata with output over base-k digit alphabets.
//!
//! A [`Dfao`] reads a [`DigitWord`] in a fixed [`DigitOrder`] and emits the
//! output attached to the state it stops in. One-dimensional automata
//! generate automatic sequences through [`Dfao::seq_term`]; automata over
//! product alphabets generate arrays through [`Dfao::array_term`].

mod cobham;
pub mod digits;
mod ops;

use std::collections::VecDeque;

pub use digits::{
    alphabet_size, decode, decode_scalar, encode, encode_multidim, pack_letter, unpack_letter,
    DigitOrder, DigitWord,
};
pub use ops::{Kernel, KernelElement};

use crate::error::{Error, Result};

pub type State = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    bases: Vec<u32>,
    order: DigitOrder,
    start: State,
    // transitions[q * alphabet + letter]
    transitions: Vec<State>,
    outputs: Vec<i64>,
}

impl Dfao {
    /// `transitions[q]` lists the successors of `q` indexed by packed letter.
    pub fn new(
        bases: Vec<u32>,
        order: DigitOrder,
        start: State,
        transitions: Vec<Vec<State>>,
        outputs: Vec<i64>,
    ) -> Result<Self> {
        digits::check_bases(&bases)?;
        let n = outputs.len();
        if n == 0 {
            return Err(Error::Construction("automaton has no states".into()));
        }
        if transitions.len() != n {
            return Err(Error::Construction(format!(
                "{} transition rows for {n} states",
                transitions.len()
            )));
        }
        if start >= n {
            return Err(Error::Construction(format!("start state {start} out of range")));
        }
        let a = alphabet_size(&bases);
        let mut flat = Vec::with_capacity(n * a);
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != a {
                return Err(Error::Construction(format!(
                    "state {q} has {} transitions, alphabet has {a} letters",
                    row.len()
                )));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::Construction(format!(
                    "state {q} moves to unknown state {t}"
                )));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self {
            bases,
            order,
            start,
            transitions: flat,
            outputs,
        })
    }

    pub(crate) fn from_parts(
        bases: Vec<u32>,
        order: DigitOrder,
        start: State,
        transitions: Vec<State>,
        outputs: Vec<i64>,
    ) -> Self {
        debug_assert_eq!(transitions.len(), outputs.len() * alphabet_size(&bases));
        Self {
            bases,
            order,
            start,
            transitions,
            outputs,
        }
    }

    /// The one-state automaton with constant output.
    pub fn constant(bases: Vec<u32>, order: DigitOrder, value: i64) -> Result<Self> {
        let a = alphabet_size(&bases);
        Self::new(bases, order, 0, vec![vec![0; a]], vec![value])
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    /// The base of a one-dimensional automaton.
    pub fn base(&self) -> Result<u32> {
        match self.bases.as_slice() {
            [k] => Ok(*k),
            _ => Err(Error::Configuration(format!(
                "expected a one-dimensional automaton, got bases {:?}",
                self.bases
            ))),
        }
    }

    pub fn dimension(&self) -> usize {
        self.bases.len()
    }

    pub fn order(&self) -> DigitOrder {
        self.order
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.outputs.len()
    }

    pub fn alphabet_size(&self) -> usize {
        alphabet_size(&self.bases)
    }

    pub fn output(&self, q: State) -> i64 {
        self.outputs[q]
    }

    pub fn outputs(&self) -> &[i64] {
        &self.outputs
    }

    #[inline]
    pub fn step(&self, q: State, letter: usize) -> State {
        self.transitions[q * self.alphabet_size() + letter]
    }

    /// Row of successors of `q`, indexed by letter.
    pub fn row(&self, q: State) -> &[State] {
        let a = self.alphabet_size();
        &self.transitions[q * a..(q + 1) * a]
    }

    /// Extended transition function from an arbitrary state.
    pub fn walk(&self, q: State, letters: impl IntoIterator<Item = usize>) -> State {
        letters.into_iter().fold(q, |q, l| self.step(q, l))
    }

    /// `τ(δ(q₀, w))`.
    pub fn run(&self, w: &DigitWord) -> Result<i64> {
        if w.bases() != self.bases.as_slice() {
            return Err(Error::Configuration(format!(
                "word over bases {:?}, automaton over {:?}",
                w.bases(),
                self.bases
            )));
        }
        if w.order() != self.order {
            return Err(Error::Configuration(format!(
                "word read {:?}, automaton reads {:?}",
                w.order(),
                self.order
            )));
        }
        Ok(self.outputs[self.walk(self.start, w.letters())])
    }

    /// `a_n = τ(δ(q₀, (n)_k))`.
    pub fn seq_term(&self, n: u64) -> Result<i64> {
        let k = self.base()?;
        let mut digits = digits::lsb_digits(n, k);
        if self.order == DigitOrder::MsbFirst {
            digits.reverse();
        }
        Ok(self.outputs[self.walk(self.start, digits.into_iter().map(|d| d as usize))])
    }

    /// The first `len` sequence terms.
    pub fn seq_prefix(&self, len: usize) -> Result<Vec<i64>> {
        (0..len as u64).map(|n| self.seq_term(n)).collect()
    }

    /// `c_{n_1, ..., n_r}` read from the padded multidimensional encoding.
    pub fn array_term(&self, ns: &[u64]) -> Result<i64> {
        let w = encode_multidim(ns, &self.bases, self.order)?;
        self.run(&w)
    }

    /// States reachable from the start, in breadth-first order.
    pub fn reachable(&self) -> Vec<State> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &t in self.row(q) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Drops unreachable states and renumbers the rest in breadth-first order.
    pub fn prune(&self) -> Dfao {
        let order = self.reachable();
        let mut index = vec![usize::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            index[q] = i;
        }
        let a = self.alphabet_size();
        let mut transitions = Vec::with_capacity(order.len() * a);
        for &q in &order {
            transitions.extend(self.row(q).iter().map(|&t| index[t]));
        }
        Dfao::from_parts(
            self.bases.clone(),
            self.order,
            0,
            transitions,
            order.iter().map(|&q| self.outputs[q]).collect(),
        )
    }

    /// Shortest word (lexicographically least among shortest) reaching each
    /// reachable state.
    pub fn access_words(&self) -> Vec<Option<Vec<usize>>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.num_states()];
        words[self.start] = Some(Vec::new());
        let mut queue = VecDeque::from([self.start]);
        while let Some(q) = queue.pop_front() {
            let prefix = words[q].clone().unwrap_or_default();
            for (l, &t) in self.row(q).iter().enumerate() {
                if words[t].is_none() {
                    let mut w = prefix.clone();
                    w.push(l);
                    words[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }
        words
    }
}
