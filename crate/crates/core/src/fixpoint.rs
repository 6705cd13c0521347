//! Q2.8 fixed-point coefficient representation and multiplierless arithmetic.
//!
//! The lifting constants are stored as two's-complement integers with an
//! implied /256 denominator (2 integer bits, 8 fractional bits). Constant
//! multiplication decomposes into shifted partial products, one per set bit
//! of the encoding, and results are brought back to scale by an arithmetic
//! 8-bit right shift.

use crate::error::{Error, Result};

/// Number of fractional bits of the coefficient format.
pub const FRAC_BITS: u32 = 8;
/// Total bit width of a coefficient encoding (2 integer bits + 8 fractional).
pub const COEFF_BITS: u32 = 10;

/// Identifies one of the six lifting/scaling constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffName {
    Alpha,
    Beta,
    Gamma,
    Delta,
    NegK,
    InvK,
}

impl CoeffName {
    pub const ALL: [CoeffName; 6] = [
        CoeffName::Alpha,
        CoeffName::Beta,
        CoeffName::Gamma,
        CoeffName::Delta,
        CoeffName::NegK,
        CoeffName::InvK,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CoeffName::Alpha => "alpha",
            CoeffName::Beta => "beta",
            CoeffName::Gamma => "gamma",
            CoeffName::Delta => "delta",
            CoeffName::NegK => "neg_k",
            CoeffName::InvK => "inv_k",
        }
    }
}

impl std::fmt::Display for CoeffName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which published integer column the constant set is decoded from.
///
/// The binary encodings and the integer ratios disagree for `delta`
/// (113 vs 114) and `neg_k` (-315 vs -314). The shift-add hardware realizes
/// the binary encodings, so that is the canonical set; the integer-ratio
/// variant stays selectable for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoeffVariant {
    /// Constants decoded from the binary two's-complement column (canonical).
    #[default]
    BinaryColumn,
    /// Constants taken from the integer-ratio column.
    IntegerColumn,
}

/// A lifting/FIR constant as a scaled two's-complement integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCoeff {
    pub name: CoeffName,
    /// Real value the integer approximates.
    pub float_value: f64,
    /// Scaled integer; the represented value is `scaled_int / 256`.
    pub scaled_int: i32,
    /// Width of the two's-complement encoding.
    pub bit_width: u32,
}

impl ScaledCoeff {
    fn new(name: CoeffName, float_value: f64, scaled_int: i32) -> Self {
        let c = ScaledCoeff {
            name,
            float_value,
            scaled_int,
            bit_width: COEFF_BITS,
        };
        debug_assert!(c.fits_width());
        c
    }

    fn fits_width(&self) -> bool {
        let half = 1i32 << (self.bit_width - 1);
        self.scaled_int >= -half && self.scaled_int < half
    }

    /// Two's-complement encoding of `scaled_int`, `bit_width` bits.
    pub fn encoding(&self) -> u16 {
        (self.scaled_int as u16) & (((1u32 << self.bit_width) - 1) as u16)
    }

    /// Decode a `bit_width`-bit two's-complement word back to the integer.
    pub fn decode(bits: u16, bit_width: u32) -> i32 {
        let sign = 1u16 << (bit_width - 1);
        let value = (bits & ((1u32 << bit_width) as u16).wrapping_sub(1)) as i32;
        if bits & sign != 0 {
            value - (1i32 << bit_width)
        } else {
            value
        }
    }

    /// Dotted binary rendering, e.g. `10.01101010` for -406/256.
    pub fn binary_string(&self) -> String {
        let bits = self.encoding();
        let mut s = String::with_capacity(self.bit_width as usize + 1);
        for i in (0..self.bit_width).rev() {
            s.push(if bits >> i & 1 != 0 { '1' } else { '0' });
            if i == FRAC_BITS {
                s.push('.');
            }
        }
        s
    }
}

/// The six constants of one variant, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSet {
    pub variant: CoeffVariant,
    coeffs: [ScaledCoeff; 6],
}

// Full-precision factorization constants; the published table prints the
// same values to nine or ten digits. Full precision keeps the float path's
// one-vanishing-moment identity exact to double precision.
const FLOAT_VALUES: [(CoeffName, f64); 6] = [
    (CoeffName::Alpha, -1.586_134_342_059_924),
    (CoeffName::Beta, -0.052_980_118_572_961),
    (CoeffName::Gamma, 0.882_911_075_530_934),
    (CoeffName::Delta, 0.443_506_852_043_971),
    (CoeffName::NegK, -1.230_174_104_914_001),
    (CoeffName::InvK, 0.812_893_066_115_961),
];

const BINARY_COLUMN_INTS: [i32; 6] = [-406, -14, 226, 113, -315, 208];
const INTEGER_COLUMN_INTS: [i32; 6] = [-406, -14, 226, 114, -314, 208];

impl CoeffSet {
    pub fn new(variant: CoeffVariant) -> Self {
        let ints = match variant {
            CoeffVariant::BinaryColumn => BINARY_COLUMN_INTS,
            CoeffVariant::IntegerColumn => INTEGER_COLUMN_INTS,
        };
        let mut it = FLOAT_VALUES.iter().zip(ints);
        let coeffs = std::array::from_fn(|_| {
            let (&(name, fv), int) = it.next().unwrap();
            ScaledCoeff::new(name, fv, int)
        });
        CoeffSet { variant, coeffs }
    }

    pub fn binary_column() -> Self {
        CoeffSet::new(CoeffVariant::BinaryColumn)
    }

    pub fn integer_column() -> Self {
        CoeffSet::new(CoeffVariant::IntegerColumn)
    }

    pub fn get(&self, name: CoeffName) -> &ScaledCoeff {
        self.coeffs
            .iter()
            .find(|c| c.name == name)
            .expect("all six constants present")
    }

    pub fn iter(&self) -> impl Iterator<Item = &ScaledCoeff> {
        self.coeffs.iter()
    }

    pub fn alpha(&self) -> &ScaledCoeff {
        self.get(CoeffName::Alpha)
    }
    pub fn beta(&self) -> &ScaledCoeff {
        self.get(CoeffName::Beta)
    }
    pub fn gamma(&self) -> &ScaledCoeff {
        self.get(CoeffName::Gamma)
    }
    pub fn delta(&self) -> &ScaledCoeff {
        self.get(CoeffName::Delta)
    }
    pub fn neg_k(&self) -> &ScaledCoeff {
        self.get(CoeffName::NegK)
    }
    pub fn inv_k(&self) -> &ScaledCoeff {
        self.get(CoeffName::InvK)
    }
}

/// The canonical six constants (binary-column decodings).
pub fn canonical_coeffs() -> CoeffSet {
    CoeffSet::binary_column()
}

/// Round a real value to the nearest /256 integer, ties away from zero.
pub fn round_to_q8(x: f64) -> Result<i32> {
    if x.is_nan() || x.abs() >= 2.0 {
        return Err(Error::Q8OutOfRange(x));
    }
    Ok((x * 256.0).round() as i32)
}

/// One signed power-of-two partial product of a shift-add decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialProduct {
    /// Bit position of the term; its weight is `2^shift`.
    pub shift: u32,
    /// `+1` or `-1`; only the sign bit contributes a negative term.
    pub sign: i32,
}

/// Signed power-of-two decomposition of a scaled constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftAddPlan {
    pub terms: Vec<PartialProduct>,
    pub constant: ScaledCoeff,
}

impl ShiftAddPlan {
    /// Sum of `sign * 2^shift` over terms; must equal `constant.scaled_int`.
    pub fn term_sum(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.sign as i64 * (1i64 << t.shift))
            .sum()
    }

    /// Re-encode the terms as a two's-complement word of the constant's width.
    pub fn reencode(&self) -> u16 {
        let mut bits = 0u16;
        for t in &self.terms {
            bits |= 1 << t.shift;
        }
        bits
    }
}

/// Decompose a constant into its two's-complement partial products.
///
/// Every set bit of the encoding yields a positive term except the sign bit,
/// which contributes the negative `-2^(width-1)` term.
pub fn shift_add_plan(c: &ScaledCoeff) -> ShiftAddPlan {
    let bits = c.encoding();
    let sign_pos = c.bit_width - 1;
    let terms = (0..c.bit_width)
        .filter(|&i| bits >> i & 1 != 0)
        .map(|i| PartialProduct {
            shift: i,
            sign: if i == sign_pos { -1 } else { 1 },
        })
        .collect();
    let plan = ShiftAddPlan { terms, constant: *c };
    debug_assert_eq!(plan.term_sum(), c.scaled_int as i64);
    plan
}

/// Multiply by a constant using only shifts and additions of partial
/// products. Exact: equals `x * plan.constant.scaled_int`.
pub fn mul_const(x: i64, plan: &ShiftAddPlan) -> i64 {
    let mut acc = 0i64;
    for t in &plan.terms {
        let pp = x << t.shift;
        acc = if t.sign >= 0 { acc + pp } else { acc - pp };
    }
    acc
}

/// The hardware truncation rule: arithmetic right shift by 8 bits,
/// i.e. floor(x / 256) for all signs.
pub fn scale_q8(x: i64) -> i64 {
    x >> FRAC_BITS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_constants_decode_from_binary_column() {
        let set = canonical_coeffs();
        assert_eq!(set.alpha().scaled_int, -406);
        assert_eq!(set.beta().scaled_int, -14);
        assert_eq!(set.gamma().scaled_int, 226);
        assert_eq!(set.delta().scaled_int, 113);
        assert_eq!(set.neg_k().scaled_int, -315);
        assert_eq!(set.inv_k().scaled_int, 208);
        assert_eq!(set.iter().count(), 6);
    }

    #[test]
    fn integer_column_variant_differs_only_on_delta_and_neg_k() {
        let bin = CoeffSet::binary_column();
        let int = CoeffSet::integer_column();
        assert_eq!(int.delta().scaled_int, 114);
        assert_eq!(int.neg_k().scaled_int, -314);
        for name in [CoeffName::Alpha, CoeffName::Beta, CoeffName::Gamma, CoeffName::InvK] {
            assert_eq!(bin.get(name).scaled_int, int.get(name).scaled_int);
        }
    }

    #[test]
    fn encoding_round_trips() {
        for set in [CoeffSet::binary_column(), CoeffSet::integer_column()] {
            for c in set.iter() {
                assert_eq!(ScaledCoeff::decode(c.encoding(), c.bit_width), c.scaled_int);
            }
        }
    }

    #[test]
    fn binary_strings_match_published_encodings() {
        let set = canonical_coeffs();
        assert_eq!(set.alpha().binary_string(), "10.01101010");
        assert_eq!(set.beta().binary_string(), "11.11110010");
        assert_eq!(set.gamma().binary_string(), "00.11100010");
        assert_eq!(set.delta().binary_string(), "00.01110001");
        assert_eq!(set.neg_k().binary_string(), "10.11000101");
        assert_eq!(set.inv_k().binary_string(), "00.11010000");
    }

    #[test]
    fn round_to_q8_reproduces_integer_ratios() {
        assert_eq!(round_to_q8(-1.586134342).unwrap(), -406);
        assert_eq!(round_to_q8(-0.052980118).unwrap(), -14);
        assert_eq!(round_to_q8(0.882911075).unwrap(), 226);
        assert_eq!(round_to_q8(0.812893066).unwrap(), 208);
        assert_eq!(round_to_q8(0.0).unwrap(), 0);
    }

    #[test]
    fn round_to_q8_on_the_inconsistent_rows() {
        // The float values land between the two published integer columns:
        // rounding gives 114 (integer column) for delta but -315 (binary
        // column) for neg_k. Both deviations stay visible, not patched.
        assert_eq!(round_to_q8(0.443506852).unwrap(), 114);
        assert_eq!(round_to_q8(-1.230174105).unwrap(), -315);
    }

    #[test]
    fn round_to_q8_rejects_out_of_range() {
        assert!(round_to_q8(2.0).is_err());
        assert!(round_to_q8(-2.5).is_err());
        assert!(round_to_q8(f64::NAN).is_err());
    }

    #[test]
    fn alpha_plan_has_published_terms() {
        let set = canonical_coeffs();
        let plan = shift_add_plan(set.alpha());
        let terms: Vec<(u32, i32)> = plan.terms.iter().map(|t| (t.shift, t.sign)).collect();
        assert_eq!(terms, vec![(1, 1), (3, 1), (5, 1), (6, 1), (9, -1)]);
    }

    #[test]
    fn inv_k_plan_decodes_three_positive_terms() {
        let set = canonical_coeffs();
        let plan = shift_add_plan(set.inv_k());
        let terms: Vec<(u32, i32)> = plan.terms.iter().map(|t| (t.shift, t.sign)).collect();
        assert_eq!(terms, vec![(4, 1), (6, 1), (7, 1)]);
        assert_eq!(plan.term_sum(), 208);
    }

    #[test]
    fn single_bit_plan() {
        let c = ScaledCoeff::new(CoeffName::InvK, 1.0 / 256.0, 1);
        let plan = shift_add_plan(&c);
        let terms: Vec<(u32, i32)> = plan.terms.iter().map(|t| (t.shift, t.sign)).collect();
        assert_eq!(terms, vec![(0, 1)]);
    }

    #[test]
    fn plans_reencode_to_the_original_word() {
        for set in [CoeffSet::binary_column(), CoeffSet::integer_column()] {
            for c in set.iter() {
                let plan = shift_add_plan(c);
                assert_eq!(plan.reencode(), c.encoding(), "{}", c.name);
                assert!(plan.terms.iter().filter(|t| t.sign < 0).count() <= 1);
                for t in plan.terms.iter().filter(|t| t.sign < 0) {
                    assert_eq!(t.shift, c.bit_width - 1);
                }
            }
        }
    }

    #[test]
    fn mul_const_examples() {
        let set = canonical_coeffs();
        let alpha = shift_add_plan(set.alpha());
        assert_eq!(mul_const(0, &alpha), 0);
        assert_eq!(mul_const(1, &alpha), -406);
        assert_eq!(mul_const(-128, &alpha), 51968);
    }

    #[test]
    fn mul_const_matches_direct_multiplication_exhaustively() {
        for set in [CoeffSet::binary_column(), CoeffSet::integer_column()] {
            for c in set.iter() {
                let plan = shift_add_plan(c);
                for x in -1024..=1024i64 {
                    assert_eq!(mul_const(x, &plan), x * c.scaled_int as i64);
                }
            }
        }
    }

    #[test]
    fn scale_q8_is_floor_division() {
        assert_eq!(scale_q8(51968), 203);
        assert_eq!(scale_q8(-1), -1);
        assert_eq!(scale_q8(255), 0);
        assert_eq!(scale_q8(-255), -1);
        assert_eq!(scale_q8(-256), -1);
        for x in -2000..=2000i64 {
            assert_eq!(scale_q8(x * 256), x);
            assert_eq!(scale_q8(x), (x as f64 / 256.0).floor() as i64);
        }
    }
}
