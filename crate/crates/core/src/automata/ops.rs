//! Constructions on automata: reversal, minimization, padding
//! canonicalization, kernels and products.

use std::collections::{HashMap, VecDeque};

use super::digits::{self, alphabet_size, unpack_letter};
use super::{DigitOrder, DigitWord, Dfao, State};
use crate::error::{Error, Result};

impl Dfao {
    /// An automaton reading digits in the opposite order that computes the
    /// same function of the digit word.
    ///
    /// States are the functions `g_w : q ↦ τ(δ(q, w))`; reading `d` before `w`
    /// maps `g_w` to `q ↦ g_w(δ(q, d))`. The result is minimized.
    pub fn reverse_reading(&self) -> Dfao {
        let d = self.prune();
        let a = d.alphabet_size();
        let mut index: HashMap<Vec<i64>, State> = HashMap::new();
        let mut funcs: Vec<Vec<i64>> = Vec::new();
        let mut transitions: Vec<State> = Vec::new();
        index.insert(d.outputs().to_vec(), 0);
        funcs.push(d.outputs().to_vec());
        let mut next = 0;
        while next < funcs.len() {
            let g = funcs[next].clone();
            for l in 0..a {
                let h: Vec<i64> = (0..d.num_states()).map(|q| g[d.step(q, l)]).collect();
                let id = match index.get(&h) {
                    Some(&id) => id,
                    None => {
                        let id = funcs.len();
                        index.insert(h.clone(), id);
                        funcs.push(h);
                        id
                    }
                };
                transitions.push(id);
            }
            next += 1;
        }
        let outputs = funcs.iter().map(|g| g[d.start()]).collect();
        Dfao::from_parts(
            d.bases().to_vec(),
            d.order().flipped(),
            0,
            transitions,
            outputs,
        )
        .minimize()
    }

    /// Minimal automaton for the same word-to-output function, by Moore
    /// partition refinement. States come out in breadth-first order, so two
    /// equivalent automata minimize to identical values.
    pub fn minimize(&self) -> Dfao {
        let d = self.prune();
        let n = d.num_states();
        let a = d.alphabet_size();

        let mut values: Vec<i64> = d.outputs().to_vec();
        values.sort_unstable();
        values.dedup();
        let mut class: Vec<usize> = d
            .outputs()
            .iter()
            .map(|o| values.binary_search(o).unwrap_or_default())
            .collect();
        let mut count = values.len();
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut refined = vec![0; n];
            for q in 0..n {
                let mut sig = Vec::with_capacity(a + 1);
                sig.push(class[q]);
                sig.extend(d.row(q).iter().map(|&t| class[t]));
                let next_id = ids.len();
                refined[q] = *ids.entry(sig).or_insert(next_id);
            }
            let new_count = ids.len();
            class = refined;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        let mut transitions = vec![0; count * a];
        let mut outputs = vec![0; count];
        for q in 0..n {
            let c = class[q];
            outputs[c] = d.output(q);
            for (l, &t) in d.row(q).iter().enumerate() {
                transitions[c * a + l] = class[t];
            }
        }
        Dfao::from_parts(
            d.bases().to_vec(),
            d.order(),
            class[d.start()],
            transitions,
            outputs,
        )
        .prune()
    }

    /// An automaton that agrees with this one on canonical words and ignores
    /// all-zero tuples at the most significant end. The empty word is treated
    /// as the encoding of zero.
    pub fn canonicalize_padding(&self) -> Dfao {
        let d = self.prune();
        let a = d.alphabet_size();
        let zero_state = d.step(d.start(), 0);
        match d.order() {
            DigitOrder::MsbFirst => {
                // state n absorbs leading zeros
                let n = d.num_states();
                let mut transitions = d.transitions.clone();
                transitions.push(n);
                transitions.extend((1..a).map(|l| d.step(d.start(), l)));
                let mut outputs = d.outputs().to_vec();
                outputs.push(d.output(zero_state));
                Dfao::from_parts(d.bases().to_vec(), d.order(), n, transitions, outputs)
                    .minimize()
            }
            DigitOrder::LsbFirst => {
                // (state after the last nonzero letter, current state)
                let mut index: HashMap<(State, State), State> = HashMap::new();
                let mut pairs = vec![(zero_state, d.start())];
                index.insert(pairs[0], 0);
                let mut transitions = Vec::new();
                let mut next = 0;
                while next < pairs.len() {
                    let (p, q) = pairs[next];
                    for l in 0..a {
                        let q2 = d.step(q, l);
                        let p2 = if l == 0 { p } else { q2 };
                        let id = *index.entry((p2, q2)).or_insert_with(|| {
                            pairs.push((p2, q2));
                            pairs.len() - 1
                        });
                        transitions.push(id);
                    }
                    next += 1;
                }
                let outputs = pairs.iter().map(|&(p, _)| d.output(p)).collect();
                Dfao::from_parts(d.bases().to_vec(), d.order(), 0, transitions, outputs)
                    .minimize()
            }
        }
    }

    /// Bounded check that appending zeros at the most significant end never
    /// changes the output: every canonical word of value below `pad_bound`
    /// is padded with up to `max(|Q|, 1)` zeros, which covers every state on
    /// the zero path. Returns a failing padded word, if any.
    pub fn check_zero_invariance(&self, pad_bound: u64) -> Result<Option<DigitWord>> {
        let k = self.base()?;
        let max_pad = self.num_states().max(1);
        for n in 0..pad_bound {
            let w = digits::encode(n, k, self.order)?;
            let base = self.run(&w)?;
            for t in 1..=max_pad {
                let padded = w.padded(t);
                if self.run(&padded)? != base {
                    return Ok(Some(padded));
                }
            }
        }
        Ok(None)
    }

    /// Exact version of [`Dfao::check_zero_invariance`] over all nonempty
    /// words: a shortest nonempty word on which this automaton and its
    /// padding-canonical form disagree.
    pub fn zero_padding_witness(&self) -> Option<DigitWord> {
        let canon = self.canonicalize_padding();
        first_disagreement(self, &canon, 1)
            .map(|letters| DigitWord::from_letters(self.bases().to_vec(), self.order(), &letters))
    }

    /// Shortest word on which the two automata disagree. Both must share
    /// bases and digit order.
    pub fn distinguishing_word(&self, other: &Dfao) -> Result<Option<DigitWord>> {
        if self.bases() != other.bases() || self.order() != other.order() {
            return Err(Error::Configuration(
                "automata read different alphabets or orders".into(),
            ));
        }
        Ok(first_disagreement(self, other, 0)
            .map(|letters| DigitWord::from_letters(self.bases().to_vec(), self.order(), &letters)))
    }

    /// The k-kernel `{ (a_{k^i n + j})_n }` of a one-dimensional automatic
    /// sequence. Each element is a state of the minimized padding-canonical
    /// least-significant-first automaton; `(i, j)` is a witness reaching it.
    pub fn kernel(&self) -> Result<Kernel> {
        let k = self.base()?;
        let lsb = match self.order() {
            DigitOrder::LsbFirst => self.clone(),
            DigitOrder::MsbFirst => self.reverse_reading(),
        };
        let automaton = lsb.canonicalize_padding();
        let elements = automaton
            .access_words()
            .into_iter()
            .enumerate()
            .filter_map(|(state, w)| {
                w.map(|w| {
                    let residue = w
                        .iter()
                        .rev()
                        .fold(0u64, |acc, &d| acc * k as u64 + d as u64);
                    KernelElement {
                        state,
                        exponent: w.len() as u32,
                        residue,
                    }
                })
            })
            .collect();
        Ok(Kernel {
            base: k,
            automaton,
            elements,
        })
    }

    /// The `[k_1, ..., k_r]`-automaton of `c_{n_1..n_r} = f(a_{n_1}(1), ...,
    /// a_{n_r}(r))`. Every input must be one-dimensional, share a digit order
    /// and ignore zero padding at the most significant end.
    pub fn product<F>(ds: &[Dfao], f: F) -> Result<Dfao>
    where
        F: Fn(&[i64]) -> Result<i64>,
    {
        let Some(first) = ds.first() else {
            return Err(Error::InputDomain("product of zero automata".into()));
        };
        let order = first.order();
        let mut bases = Vec::with_capacity(ds.len());
        for (i, d) in ds.iter().enumerate() {
            if d.order() != order {
                return Err(Error::Configuration(format!(
                    "automaton {i} reads {:?}, automaton 0 reads {order:?}",
                    d.order()
                )));
            }
            bases.push(d.base()?);
            if let Some(w) = d.zero_padding_witness() {
                return Err(Error::Precondition {
                    message: format!("automaton {i} is not invariant under zero padding"),
                    witness: Some(w.to_string()),
                });
            }
        }
        let a = alphabet_size(&bases);
        let letters: Vec<Vec<u32>> = (0..a).map(|l| unpack_letter(&bases, l)).collect();
        let start: Vec<State> = ds.iter().map(Dfao::start).collect();
        let mut index: HashMap<Vec<State>, State> = HashMap::from([(start.clone(), 0)]);
        let mut tuples = vec![start];
        let mut transitions = Vec::new();
        let mut next = 0;
        while next < tuples.len() {
            let cur = tuples[next].clone();
            for digits in &letters {
                let succ: Vec<State> = cur
                    .iter()
                    .zip(ds)
                    .zip(digits)
                    .map(|((&q, d), &dg)| d.step(q, dg as usize))
                    .collect();
                let id = match index.get(&succ) {
                    Some(&id) => id,
                    None => {
                        let id = tuples.len();
                        index.insert(succ.clone(), id);
                        tuples.push(succ);
                        id
                    }
                };
                transitions.push(id);
            }
            next += 1;
        }
        let outputs = tuples
            .iter()
            .map(|t| {
                let values: Vec<i64> = t.iter().zip(ds).map(|(&q, d)| d.output(q)).collect();
                f(&values)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dfao::from_parts(bases, order, 0, transitions, outputs))
    }
}

/// Breadth-first search over the synchronous product for a shortest word of
/// length `min_len` (0 or 1) or more with different outputs.
fn first_disagreement(a: &Dfao, b: &Dfao, min_len: usize) -> Option<Vec<usize>> {
    let start = (a.start(), b.start());
    let roots: Vec<((State, State), Vec<usize>)> = if min_len == 0 {
        vec![(start, Vec::new())]
    } else {
        (0..a.alphabet_size())
            .map(|l| ((a.step(start.0, l), b.step(start.1, l)), vec![l]))
            .collect()
    };
    let mut seen: HashMap<(State, State), ()> = HashMap::new();
    let mut queue = VecDeque::new();
    for (pair, w) in roots {
        if seen.insert(pair, ()).is_none() {
            queue.push_back((pair, w));
        }
    }
    while let Some((pair, word)) = queue.pop_front() {
        if a.output(pair.0) != b.output(pair.1) {
            return Some(word);
        }
        for l in 0..a.alphabet_size() {
            let succ = (a.step(pair.0, l), b.step(pair.1, l));
            if seen.insert(succ, ()).is_none() {
                let mut w = word.clone();
                w.push(l);
                queue.push_back((succ, w));
            }
        }
    }
    None
}

/// One kernel sequence `n ↦ a_{k^exponent · n + residue}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelElement {
    pub state: State,
    pub exponent: u32,
    pub residue: u64,
}

#[derive(Clone, Debug)]
pub struct Kernel {
    base: u32,
    automaton: Dfao,
    elements: Vec<KernelElement>,
}

impl Kernel {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[KernelElement] {
        &self.elements
    }

    /// The minimized least-significant-first automaton the elements live in.
    pub fn automaton(&self) -> &Dfao {
        &self.automaton
    }

    /// The `n`-th term of the kernel element generated by `state`.
    pub fn term(&self, state: State, n: u64) -> i64 {
        let digits = digits::lsb_digits(n, self.base);
        let q = self
            .automaton
            .walk(state, digits.into_iter().map(|d| d as usize));
        self.automaton.output(q)
    }
}
