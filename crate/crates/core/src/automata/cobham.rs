//! The two directions of Cobham's correspondence between k-uniform
//! morphisms with codings and most-significant-first automata.

use super::{DigitOrder, Dfao};
use crate::error::Result;
use crate::words::{Alphabet, Symbol, UniformMorphism};

impl Dfao {
    /// Automaton whose states are the morphism's letters: reading digit `j`
    /// in state `q` moves to the `j`-th letter of `σ(q)`.
    pub fn from_morphism(m: &UniformMorphism) -> Dfao {
        let k = m.k();
        let n = m.alphabet().len();
        let mut transitions = Vec::with_capacity(n * k);
        for a in m.alphabet().symbols() {
            transitions.extend(m.image(a).iter().map(|s| s.index()));
        }
        Dfao::from_parts(
            vec![k as u32],
            DigitOrder::MsbFirst,
            m.seed().index(),
            transitions,
            m.coding().to_vec(),
        )
    }

    /// A uniform morphism with coding whose coded fixed point is this
    /// automaton's sequence.
    ///
    /// When the start state does not loop on `0`, a fresh seed letter is added
    /// that absorbs leading zeros.
    pub fn to_morphism(&self) -> Result<UniformMorphism> {
        let k = self.base()? as usize;
        let msb = match self.order() {
            DigitOrder::MsbFirst => self.prune(),
            DigitOrder::LsbFirst => self.reverse_reading(),
        };
        let n = msb.num_states();
        let mut rules: Vec<Vec<Symbol>> = (0..n)
            .map(|q| msb.row(q).iter().map(|&t| Symbol(t as u32)).collect())
            .collect();
        let mut coding = msb.outputs().to_vec();
        let mut names: Vec<String> = (0..n).map(|q| format!("q{q}")).collect();
        let q0 = msb.start();
        let seed = if msb.step(q0, 0) == q0 {
            Symbol(q0 as u32)
        } else {
            let fresh = Symbol(n as u32);
            let mut image: Vec<Symbol> = msb.row(q0).iter().map(|&t| Symbol(t as u32)).collect();
            image[0] = fresh;
            rules.push(image);
            coding.push(msb.output(msb.step(q0, 0)));
            names.push("start".into());
            debug_assert_eq!(rules[fresh.index()].len(), k);
            fresh
        };
        UniformMorphism::new(Alphabet::new(names)?, rules, coding, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn thue_morse_from_morphism() {
        let d = Dfao::from_morphism(&fixtures::thue_morse());
        assert_eq!(d.num_states(), 2);
        assert_eq!(d.order(), DigitOrder::MsbFirst);
        let terms: Vec<i64> = (0..8).map(|n| d.seq_term(n).unwrap()).collect();
        assert_eq!(terms, vec![0, 1, 1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn constant_morphism_gives_one_state() {
        let d = Dfao::from_morphism(&fixtures::constant_morphism(7));
        assert_eq!(d.num_states(), 1);
        assert!((0..100).all(|n| d.seq_term(n).unwrap() == 7));
    }

    #[test]
    fn rudin_shapiro_has_four_states() {
        let m = fixtures::rudin_shapiro();
        let d = Dfao::from_morphism(&m);
        assert_eq!(d.num_states(), 4);
        let fp = m.coded_prefix(1 << 12);
        for (n, v) in fp.iter().enumerate() {
            assert_eq!(d.seq_term(n as u64).unwrap(), *v);
        }
    }

    #[test]
    fn to_morphism_round_trip() {
        for d in [
            fixtures::thue_morse_dfao(DigitOrder::LsbFirst),
            fixtures::rudin_shapiro_dfao(),
            fixtures::period_doubling_dfao(),
        ] {
            let m = d.to_morphism().unwrap();
            let coded = m.coded_prefix(2048);
            for (n, v) in coded.iter().enumerate() {
                assert_eq!(d.seq_term(n as u64).unwrap(), *v, "n = {n}");
            }
        }
    }

    #[test]
    fn fresh_seed_when_start_does_not_loop() {
        // start moves on 0, so a leading zero would change the state
        let d = Dfao::new(
            vec![2],
            DigitOrder::MsbFirst,
            0,
            vec![vec![1, 2], vec![1, 1], vec![2, 2]],
            vec![0, 3, 5],
        )
        .unwrap();
        let m = d.to_morphism().unwrap();
        assert_eq!(m.alphabet().len(), 4);
        let coded = m.coded_prefix(64);
        for (n, v) in coded.iter().enumerate() {
            assert_eq!(d.seq_term(n as u64).unwrap(), *v);
        }
    }
}
