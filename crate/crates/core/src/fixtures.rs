//! Bundled generators and array specs used by the tests and the CLI.

use crate::automata::{DigitOrder, Dfao};
use crate::series::ArraySpec;
use crate::spec;
use crate::words::{Alphabet, Symbol, UniformMorphism};

fn morphism(letters: &[&str], rules: &[&str], coding: &[i64]) -> UniformMorphism {
    let alphabet = Alphabet::new(letters.iter().copied()).expect("fixture alphabet");
    let rules = rules
        .iter()
        .map(|r| {
            r.chars()
                .map(|c| alphabet.symbol(&c.to_string()).expect("fixture letter"))
                .collect()
        })
        .collect();
    UniformMorphism::new(alphabet, rules, coding.to_vec(), Symbol(0)).expect("fixture morphism")
}

/// `0 → 01, 1 → 10`.
pub fn thue_morse() -> UniformMorphism {
    morphism(&["0", "1"], &["01", "10"], &[0, 1])
}

/// `a → ab, b → ac, c → db, d → dc` coded to `+1, +1, -1, -1`.
pub fn rudin_shapiro() -> UniformMorphism {
    morphism(&["a", "b", "c", "d"], &["ab", "ac", "db", "dc"], &[1, 1, -1, -1])
}

/// `0 → 01, 1 → 00`.
pub fn period_doubling() -> UniformMorphism {
    morphism(&["0", "1"], &["01", "00"], &[0, 1])
}

/// `a → aa` coded to `value`.
pub fn constant_morphism(value: i64) -> UniformMorphism {
    morphism(&["a"], &["aa"], &[value])
}

/// Parity of the binary digit sum; the same table works in both orders.
pub fn thue_morse_dfao(order: DigitOrder) -> Dfao {
    Dfao::new(vec![2], order, 0, vec![vec![0, 1], vec![1, 0]], vec![0, 1]).expect("fixture")
}

/// `(-1)^(number of 11 blocks)`, least significant digit first. States track
/// (last digit, parity).
pub fn rudin_shapiro_dfao() -> Dfao {
    // 0: (0, even) 1: (1, even) 2: (0, odd) 3: (1, odd)
    Dfao::new(
        vec![2],
        DigitOrder::LsbFirst,
        0,
        vec![vec![0, 1], vec![0, 3], vec![2, 3], vec![2, 1]],
        vec![1, 1, -1, -1],
    )
    .expect("fixture")
}

/// Parity of the number of trailing ones, least significant digit first.
pub fn period_doubling_dfao() -> Dfao {
    // 0: even run, 1: odd run, 2/3: run ended even/odd
    Dfao::new(
        vec![2],
        DigitOrder::LsbFirst,
        0,
        vec![vec![2, 1], vec![3, 0], vec![2, 2], vec![3, 3]],
        vec![0, 1, 0, 1],
    )
    .expect("fixture")
}

pub const THUE_MORSE_JSON: &str = include_str!("../fixtures/thue_morse.json");
pub const RUDIN_SHAPIRO_JSON: &str = include_str!("../fixtures/rudin_shapiro.json");
pub const PERIOD_DOUBLING_JSON: &str = include_str!("../fixtures/period_doubling.json");
pub const CONSTANT_JSON: &str = include_str!("../fixtures/constant.json");
pub const THUE_MORSE_DFAO_JSON: &str = include_str!("../fixtures/thue_morse_dfao.json");
pub const RUDIN_SHAPIRO_DFAO_JSON: &str = include_str!("../fixtures/rudin_shapiro_dfao.json");
pub const PERIOD_DOUBLING_DFAO_JSON: &str = include_str!("../fixtures/period_doubling_dfao.json");

pub const TM_TM_XOR_2_3_JSON: &str = include_str!("../fixtures/tm_tm_xor_2_3.json");
pub const TM_RS_SUM_2_3_JSON: &str = include_str!("../fixtures/tm_rs_sum_2_3.json");
pub const TM3_XOR_2_3_5_JSON: &str = include_str!("../fixtures/tm3_xor_2_3_5.json");
pub const CONSTANT_2_3_JSON: &str = include_str!("../fixtures/constant_2_3.json");
pub const ZERO_2_3_JSON: &str = include_str!("../fixtures/zero_2_3.json");

/// Directory holding the bundled JSON fixtures.
pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn bundled(text: &str) -> ArraySpec {
    spec::parse_spec(text, &fixture_dir()).expect("bundled spec")
}

/// Thue–Morse × Thue–Morse, `f = XOR`, bases (2, 3).
pub fn tm_tm_xor_2_3() -> ArraySpec {
    bundled(TM_TM_XOR_2_3_JSON)
}

/// Thue–Morse × Rudin–Shapiro, `f(x, y) = x + y`, bases (2, 3).
pub fn tm_rs_sum_2_3() -> ArraySpec {
    bundled(TM_RS_SUM_2_3_JSON)
}

/// Three Thue–Morse coordinates, `f = XOR`, bases (2, 3, 5).
pub fn tm3_xor_2_3_5() -> ArraySpec {
    bundled(TM3_XOR_2_3_5_JSON)
}

/// Constant sequences, `f ≡ 1`, bases (2, 3). Here `α = 3`.
pub fn constant_2_3() -> ArraySpec {
    bundled(CONSTANT_2_3_JSON)
}

/// Thue–Morse × Thue–Morse with `f ≡ 0`.
pub fn zero_2_3() -> ArraySpec {
    bundled(ZERO_2_3_JSON)
}

/// Every bundled array spec with its file name.
pub fn bundled_specs() -> Vec<(&'static str, ArraySpec)> {
    vec![
        ("tm_tm_xor_2_3.json", tm_tm_xor_2_3()),
        ("tm_rs_sum_2_3.json", tm_rs_sum_2_3()),
        ("tm3_xor_2_3_5.json", tm3_xor_2_3_5()),
        ("constant_2_3.json", constant_2_3()),
        ("zero_2_3.json", zero_2_3()),
    ]
}

/// Every bundled morphism with a short name.
pub fn bundled_morphisms() -> Vec<(&'static str, UniformMorphism)> {
    vec![
        ("thue_morse", thue_morse()),
        ("rudin_shapiro", rudin_shapiro()),
        ("period_doubling", period_doubling()),
        ("constant", constant_morphism(1)),
    ]
}
