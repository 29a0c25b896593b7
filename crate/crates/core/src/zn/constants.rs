use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// `coefficient * base^exponent`, kept unexpanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicPower {
    pub coefficient: u64,
    pub base: u64,
    pub exponent: u64,
}

impl SymbolicPower {
    /// Decimal digit count from logarithms; exact unless the value sits within
    /// about 1e-9 of a power of ten.
    pub fn decimal_digits(&self) -> u64 {
        let log =
            (self.coefficient as f64).log10() + self.exponent as f64 * (self.base as f64).log10();
        log.floor() as u64 + 1
    }

    /// Binary length from logarithms.
    pub fn bit_length(&self) -> u64 {
        let log =
            (self.coefficient as f64).log2() + self.exponent as f64 * (self.base as f64).log2();
        log.floor() as u64 + 1
    }

    /// Full expansion. For the component bound this is a number of several
    /// million digits; call it only when that is really wanted.
    pub fn expand(&self) -> BigUint {
        let exp = u32::try_from(self.exponent).expect("exponent fits in u32");
        BigUint::from(self.base).pow(exp) * self.coefficient
    }

    pub fn render(&self) -> String {
        format!("{}*{}^{}", self.coefficient, self.base, self.exponent)
    }
}

/// Explicit constants of the derived-length bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperConstants {
    /// Upper bound on `|D~(d_1, d_2, d_3, d_4)|`: `5^4`.
    pub dtilde_max: u64,
    /// Bound on the initial segment length `u <= 6 * dtilde_max^2`.
    pub u_max: u64,
    /// Bound on nontrivial components of a generated ideal: `3 * dtilde_max^u_max`.
    pub e_bound: SymbolicPower,
    /// Derived-length bound supplied for quotients with at most `e^2` components.
    pub f1: u64,
    /// `max{3, f1 + 1} + 1`.
    pub final_length: u64,
}

impl PaperConstants {
    pub fn new(f1: u64) -> Self {
        let dtilde_max = 5u64.pow(4);
        let u_max = 6 * dtilde_max * dtilde_max;
        PaperConstants {
            dtilde_max,
            u_max,
            e_bound: SymbolicPower {
                coefficient: 3,
                base: 5,
                exponent: 4 * u_max,
            },
            f1,
            final_length: final_length(f1),
        }
    }
}

pub fn final_length(f1: u64) -> u64 {
    3u64.max(f1 + 1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let c = PaperConstants::new(3);
        assert_eq!(c.dtilde_max, 625);
        assert_eq!(c.u_max, 2_343_750);
        assert_eq!(c.e_bound.exponent, 9_375_000);
        assert_eq!(c.final_length, 5);
        assert_eq!(final_length(1), 4);
        assert_eq!(final_length(10), 12);
    }

    #[test]
    fn digits_match_expansion_for_small_exponents() {
        for exponent in [0u64, 1, 7, 50, 333, 1000] {
            let p = SymbolicPower {
                coefficient: 3,
                base: 5,
                exponent,
            };
            let exact = p.expand();
            assert_eq!(
                p.decimal_digits(),
                exact.to_string().len() as u64,
                "exponent {exponent}"
            );
            assert_eq!(p.bit_length(), exact.bits(), "exponent {exponent}");
        }
    }
}
