//! The constant system and its validation.

use crate::error::{Error, Result};
use num_rational::Rational64;
use serde::Serialize;

/// Exact measure type; Λ-measures and thresholds never touch floating point.
pub type Measure = Rational64;

pub const DEFAULT_TAU: i64 = 16;
pub const MIN_STRICT_EXPONENT: i64 = 593;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Lab,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "lab" => Ok(Mode::Lab),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    pub n: i64,
    pub m: u32,
    pub tau: i64,
    pub mode: Mode,
    pub epsilon: i64,
    pub alpha: i64,
    pub cert_floor: i64,
    pub lambda: Measure,
    pub lambda1: Measure,
    pub lambda2: Measure,
    pub mu: Measure,
    pub window_lo: Measure,
    pub window_hi: Measure,
}

fn int(v: i64) -> Measure {
    Measure::from_integer(v)
}

impl Params {
    /// Builds the constant system with the default nesting constant.
    pub fn new(n: i64, m: u32, mode: Mode) -> Result<Params> {
        Params::with_tau(n, m, mode, DEFAULT_TAU)
    }

    /// Strict mode at the smallest admissible exponent, two generators.
    pub fn standard() -> Params {
        Params::new(MIN_STRICT_EXPONENT, 2, Mode::Strict).expect("standard parameters are valid")
    }

    /// Lab mode with an overridden nesting constant.
    pub fn lab(n: i64, m: u32, tau: i64) -> Result<Params> {
        Params::with_tau(n, m, Mode::Lab, tau)
    }

    pub fn with_tau(n: i64, m: u32, mode: Mode, tau: i64) -> Result<Params> {
        if n % 2 == 0 {
            return Err(Error::EvenExponent(n));
        }
        if m < 2 {
            return Err(Error::TooFewGenerators(m));
        }
        if m > 26 {
            return Err(Error::TooManyGenerators(m));
        }
        match mode {
            Mode::Strict => {
                if n < MIN_STRICT_EXPONENT {
                    return Err(Error::ExponentTooSmall(n));
                }
                if tau != DEFAULT_TAU {
                    return Err(Error::InvalidTau(format!("tau is fixed at {DEFAULT_TAU} in strict mode")));
                }
            }
            Mode::Lab => {
                if n < 3 {
                    return Err(Error::ExponentTooSmall(n));
                }
                if tau < 2 {
                    return Err(Error::InvalidTau(format!("tau must be at least 2, got {tau}")));
                }
            }
        }
        let half = Measure::new(n, 2);
        let epsilon = 2 * tau + 1;
        let window_lo = half - int(5 * tau + 2);
        let window_hi = half + int(5 * tau + 2);
        let lambda2 = window_hi;
        let lambda1 = lambda2 + int(epsilon);
        let params = Params {
            n,
            m,
            tau,
            mode,
            epsilon,
            alpha: 3 * tau + 2,
            cert_floor: 5 * tau + 3,
            lambda: half + int(3 * tau + 1),
            lambda1,
            lambda2,
            mu: int(n - 8 * tau - 3),
            window_lo,
            window_hi,
        };
        if mode == Mode::Strict {
            params.check_regime()?;
        }
        Ok(params)
    }

    /// The inequalities the winner-side thresholds and μ must satisfy.
    pub fn check_regime(&self) -> Result<()> {
        let upper = int(self.n - (11 * self.tau + 5));
        let ok = upper >= self.lambda1
            && self.lambda1 > self.lambda2
            && self.lambda2 >= self.window_hi
            && self.lambda1 - self.lambda2 >= int(self.epsilon)
            && self.window_lo < self.window_hi
            && self.mu >= self.half() + int(9 * self.tau);
        if ok {
            Ok(())
        } else {
            Err(Error::BadRegime(format!("constants for n={} tau={}", self.n, self.tau)))
        }
    }

    pub fn half(&self) -> Measure {
        Measure::new(self.n, 2)
    }

    pub fn tau_m(&self) -> Measure {
        int(self.tau)
    }

    pub fn epsilon_m(&self) -> Measure {
        int(self.epsilon)
    }

    pub fn cert_floor_m(&self) -> Measure {
        int(self.cert_floor)
    }

    /// Threshold λ_{m(i)} selected by a control value in {1, 2}.
    pub fn lambda_for(&self, control: u8) -> Measure {
        if control == 1 {
            self.lambda1
        } else {
            self.lambda2
        }
    }

    /// Uniqueness of canonical forms is only claimed in strict mode.
    pub fn guarantees(&self) -> bool {
        self.mode == Mode::Strict
    }

    pub fn is_strict(&self) -> bool {
        self.mode == Mode::Strict
    }
}

#[derive(Serialize)]
struct ParamsView {
    n: i64,
    m: u32,
    tau: i64,
    mode: Mode,
    epsilon: i64,
    alpha: i64,
    cert_floor: i64,
    lambda: String,
    lambda1: String,
    lambda2: String,
    mu: String,
    window_lo: String,
    window_hi: String,
    uniqueness: &'static str,
}

impl Serialize for Params {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamsView {
            n: self.n,
            m: self.m,
            tau: self.tau,
            mode: self.mode,
            epsilon: self.epsilon,
            alpha: self.alpha,
            cert_floor: self.cert_floor,
            lambda: self.lambda.to_string(),
            lambda1: self.lambda1.to_string(),
            lambda2: self.lambda2.to_string(),
            mu: self.mu.to_string(),
            window_lo: self.window_lo.to_string(),
            window_hi: self.window_hi.to_string(),
            uniqueness: if self.guarantees() { "guaranteed" } else { "not guaranteed" },
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_constants() {
        let p = Params::new(593, 2, Mode::Strict).unwrap();
        assert_eq!(p.tau, 16);
        assert_eq!(p.epsilon, 33);
        assert_eq!(p.lambda, Measure::new(691, 2));
        assert_eq!(p.mu, int(462));
        assert_eq!(p.alpha, 50);
        assert_eq!(p.cert_floor, 83);
        assert_eq!(p.window_lo, Measure::new(429, 2));
        assert_eq!(p.window_hi, Measure::new(757, 2));
        assert_eq!(p.lambda2, Measure::new(757, 2));
        assert_eq!(p.lambda1, Measure::new(823, 2));
    }

    #[test]
    fn rejects_bad_exponents() {
        assert_eq!(Params::new(592, 2, Mode::Strict), Err(Error::EvenExponent(592)));
        assert_eq!(Params::new(591, 2, Mode::Strict), Err(Error::ExponentTooSmall(591)));
        assert_eq!(Params::new(593, 1, Mode::Strict), Err(Error::TooFewGenerators(1)));
        assert!(Params::with_tau(593, 2, Mode::Strict, 4).is_err());
    }

    #[test]
    fn lab_mode_small_exponent() {
        let p = Params::new(3, 2, Mode::Lab).unwrap();
        assert!(!p.guarantees());
        let p = Params::lab(3, 2, 2).unwrap();
        assert_eq!(p.epsilon, 5);
    }

    #[test]
    fn strict_regime_holds_for_larger_exponents() {
        for n in (593..2000).step_by(2) {
            let p = Params::new(n, 3, Mode::Strict).unwrap();
            assert!(p.window_hi <= p.lambda2 && p.lambda2 <= p.lambda1);
            assert!(p.lambda1 <= int(n - 181));
            assert!(p.mu >= p.half() + int(144));
        }
    }
}
