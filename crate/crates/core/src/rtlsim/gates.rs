//! Gate-level arithmetic: full-adder cells chained into ripple-carry adders.
//!
//! The structural designs evaluate every addition through these cells
//! instead of host integer arithmetic. Operands are two's-complement words;
//! the shorter operand is widened by replicating its most significant bit,
//! and the result grows one bit so no chain can overflow.

/// One-bit full adder: sum = a xor b xor cin, carry = majority(a, b, cin).
#[inline]
pub fn full_adder(a: bool, b: bool, cin: bool) -> (bool, bool) {
    let sum = a ^ b ^ cin;
    let carry = (a & b) | (a & cin) | (b & cin);
    (sum, carry)
}

/// A two's-complement word of explicit width (1..=62 bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Word {
    pub value: i64,
    pub width: u32,
}

impl Word {
    pub fn new(value: i64, width: u32) -> Self {
        debug_assert!((1..=62).contains(&width));
        debug_assert!(
            value >= -(1i64 << (width - 1)) && value < (1i64 << (width - 1)),
            "{value} does not fit {width} bits"
        );
        Word { value, width }
    }

    /// Bit `i` with MSB replication beyond the word's width.
    #[inline]
    fn bit(&self, i: u32) -> bool {
        let i = i.min(self.width - 1);
        (self.value >> i) & 1 != 0
    }
}

/// Minimal two's-complement width holding every value in `[min, max]`.
pub fn width_for_range(min: i64, max: i64) -> u32 {
    debug_assert!(min <= max);
    for w in 1..=62 {
        if min >= -(1i64 << (w - 1)) && max < (1i64 << (w - 1)) {
            return w;
        }
    }
    63
}

/// Ripple-carry addition from full-adder cells. The result is one bit wider
/// than the wider operand, so it is always exact.
pub fn ripple_add(a: Word, b: Word) -> Word {
    let width = a.width.max(b.width) + 1;
    let mut out = 0i64;
    let mut carry = false;
    for i in 0..width {
        let (sum, c) = full_adder(a.bit(i), b.bit(i), carry);
        if sum {
            out |= 1i64 << i;
        }
        carry = c;
    }
    // Interpret the result word as a signed value.
    if out & (1i64 << (width - 1)) != 0 {
        out -= 1i64 << width;
    }
    Word { value: out, width }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_adder_truth_table() {
        assert_eq!(full_adder(false, false, false), (false, false));
        assert_eq!(full_adder(true, false, false), (true, false));
        assert_eq!(full_adder(false, true, false), (true, false));
        assert_eq!(full_adder(false, false, true), (true, false));
        assert_eq!(full_adder(true, true, false), (false, true));
        assert_eq!(full_adder(true, false, true), (false, true));
        assert_eq!(full_adder(false, true, true), (false, true));
        assert_eq!(full_adder(true, true, true), (true, true));
    }

    #[test]
    fn width_for_range_edges() {
        assert_eq!(width_for_range(0, 0), 1);
        assert_eq!(width_for_range(-1, 0), 1);
        assert_eq!(width_for_range(0, 1), 2);
        assert_eq!(width_for_range(-128, 127), 8);
        assert_eq!(width_for_range(-129, 127), 9);
        assert_eq!(width_for_range(-530, 530), 11);
        assert_eq!(width_for_range(-184, 184), 9);
    }

    #[test]
    fn exhaustive_8_bit_pairs() {
        for a in -128..=127i64 {
            for b in -128..=127i64 {
                let r = ripple_add(Word::new(a, 8), Word::new(b, 8));
                assert_eq!(r.value, a + b, "{a} + {b}");
                assert_eq!(r.width, 9);
            }
        }
    }

    #[test]
    fn identity_and_sign_extension() {
        let a = Word::new(-93, 8);
        assert_eq!(ripple_add(a, Word::new(0, 1)).value, -93);
        // 4-bit -1 plus 8-bit 1: the short operand sign-extends.
        assert_eq!(ripple_add(Word::new(-1, 4), Word::new(1, 8)).value, 0);
    }

    #[test]
    fn random_wide_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100_000 {
            let wa = rng.gen_range(1..=30);
            let wb = rng.gen_range(1..=30);
            let a = rng.gen_range(-(1i64 << (wa - 1))..(1i64 << (wa - 1)));
            let b = rng.gen_range(-(1i64 << (wb - 1))..(1i64 << (wb - 1)));
            let r = ripple_add(Word::new(a, wa), Word::new(b, wb));
            assert_eq!(r.value, a + b);
        }
    }
}
