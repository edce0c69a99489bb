//! Reduction parameters and their ordering constraints.

use num::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub n: usize,
    #[serde(with = "rational::rat")]
    pub delta_tiny: Rational,
    #[serde(with = "rational::rat")]
    pub delta_t: Rational,
    #[serde(with = "rational::rat")]
    pub delta_w: Rational,
    pub p_large: u64,
    pub p_c: u64,
}

impl ReductionParams {
    /// `δtiny = 1/(100n²)`, `δT = 1/(10n²)`, `δw = 1/(4n)`, `p^C = 2n²`, `p^large = 10n`.
    pub fn desk(n: usize) -> Self {
        let n2 = (n * n) as i64;
        ReductionParams {
            n,
            delta_tiny: q(1, 100 * n2),
            delta_t: q(1, 10 * n2),
            delta_w: q(1, 4 * n as i64),
            p_large: 10 * n as u64,
            p_c: 2 * n2 as u64,
        }
    }

    /// Coarser grid for fully materialised reductions: `δtiny = 1/(12n)`, `δT = 1/(6n)`,
    /// `δw = 1/(4n)`, `p^C = 2n²`, `p^large = 2n`.
    pub fn coarse(n: usize) -> Self {
        let n = n as i64;
        ReductionParams {
            n: n as usize,
            delta_tiny: q(1, 12 * n),
            delta_t: q(1, 6 * n),
            delta_w: q(1, 4 * n),
            p_large: 2 * n as u64,
            p_c: 2 * (n * n) as u64,
        }
    }

    pub fn epsilon(&self) -> Rational {
        &self.delta_tiny / rational::int(10)
    }

    /// `n / δtiny`, required to be an integer.
    pub fn p_huge(&self) -> u64 {
        let r = rational::int(self.n as i64) / &self.delta_tiny;
        r.to_integer().to_u64().unwrap_or(0)
    }

    /// Sensor blocks per unit of the c-e region.
    pub fn per_unit(&self) -> u64 {
        self.p_huge() / self.n as u64
    }

    /// `κ = (1/10)(δtiny/2) p^large`.
    pub fn kappa(&self) -> Rational {
        &self.delta_tiny / rational::int(20) * rational::int(self.p_large as i64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(format!("parameters: {m}")));
        if self.n < 2 {
            return bad("n must be at least 2");
        }
        if !self.delta_tiny.is_positive() {
            return bad("δtiny must be positive");
        }
        let per_unit = rational::one() / &self.delta_tiny;
        if !per_unit.is_integer() {
            return bad("1/δtiny must be an integer");
        }
        if !(self.delta_tiny < self.delta_t && self.delta_t < self.delta_w) {
            return bad("need δtiny < δT < δw");
        }
        if self.delta_w >= q(1, 2 * self.n as i64) {
            return bad("need δw < 1/(2n)");
        }
        if self.p_large == 0 || self.p_large >= self.p_huge() {
            return bad("need 0 < p^large < p^huge");
        }
        if self.p_c < 2 * (self.n * self.n) as u64 {
            return bad("need p^C >= 2n²");
        }
        if self.kappa() >= rational::one() {
            return bad("κ must be below 1");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_values() {
        let p = ReductionParams::desk(2);
        p.validate().unwrap();
        assert_eq!(p.p_huge(), 800);
        assert_eq!(p.epsilon(), q(1, 4000));
        assert_eq!(p.p_c, 8);
        ReductionParams::desk(3).validate().unwrap();
        ReductionParams::coarse(3).validate().unwrap();
    }

    #[test]
    fn kappa_formula() {
        let p = ReductionParams { delta_tiny: q(1, 100), p_large: 10, ..ReductionParams::desk(2) };
        assert_eq!(p.kappa(), q(1, 200));
    }

    #[test]
    fn rejects_bad_order() {
        let mut p = ReductionParams::desk(2);
        p.delta_t = q(1, 1000);
        assert!(p.validate().is_err());
    }
}
