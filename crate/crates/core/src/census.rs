//! Closed-form counts `h`, `phi`, `psi` and their sum.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::seifert::SeifertData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiBranch {
    R2GtHalf,
    R1GtR2EqHalf,
    R1EqR2EqHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiBranch {
    R3Generic,
    R3Reciprocal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    #[serde(with = "crate::serde_big::biguint")]
    pub h: BigUint,
    #[serde(with = "crate::serde_big::biguint")]
    pub phi: BigUint,
    #[serde(with = "crate::serde_big::biguint")]
    pub psi: BigUint,
    #[serde(with = "crate::serde_big::biguint")]
    pub total: BigUint,
    pub branch_phi: PhiBranch,
    pub branch_psi: PsiBranch,
}

fn nat(x: BigInt) -> BigUint {
    debug_assert!(!x.is_negative());
    x.to_biguint().expect("census factors are nonnegative")
}

/// `a^i_j` for leg `i` in `1..=3`.
fn a(m: &SeifertData, i: usize, j: usize) -> BigInt {
    m.legs[i - 1].a(j)
}

/// `prod_{j >= from} (a^i_j - 1)`; finite since the tail factors are one.
fn tail(m: &SeifertData, i: usize, from: usize) -> BigInt {
    let leg = &m.legs[i - 1];
    (from..=leg.k()).map(|j| leg.a(j) - 1).product()
}

pub fn phi_branch(m: &SeifertData) -> PhiBranch {
    let half = crate::Rational::new(1, 2).unwrap();
    if m.r[1] > half {
        PhiBranch::R2GtHalf
    } else if m.r[0] > half {
        PhiBranch::R1GtR2EqHalf
    } else {
        PhiBranch::R1EqR2EqHalf
    }
}

pub fn psi_branch(m: &SeifertData) -> PsiBranch {
    if m.r[2].numer().is_one() {
        PsiBranch::R3Reciprocal
    } else {
        PsiBranch::R3Generic
    }
}

pub fn count_h(m: &SeifertData) -> BigUint {
    nat((a(m, 3, 1) - 1) * tail(m, 1, 2) * tail(m, 2, 2) * tail(m, 3, 2))
}

pub fn count_phi(m: &SeifertData) -> BigUint {
    let one = BigInt::one();
    let (a11, a12, a03) = (a(m, 1, 1), a(m, 2, 1), a(m, 3, 0));
    let v = match phi_branch(m) {
        PhiBranch::R2GtHalf => {
            let head = 2 * (&a11 - &one) * (&a12 - &one) + (&a03 - &one) * (&a11 + &a12 - 2);
            return nat(head) * count_h(m);
        }
        PhiBranch::R1GtR2EqHalf => {
            (2 * (&a11 - &one) + (&a03 - &one)) * (a(m, 3, 1) - &one) * tail(m, 1, 2) * tail(m, 3, 2)
        }
        PhiBranch::R1EqR2EqHalf => 2 * tail(m, 3, 1),
    };
    nat(v)
}

pub fn count_psi(m: &SeifertData) -> BigUint {
    let one = BigInt::one();
    let v = match psi_branch(m) {
        PsiBranch::R3Generic => {
            (a(m, 1, 1) - &one)
                * (a(m, 2, 1) - &one)
                * a(m, 3, 1)
                * tail(m, 1, 2)
                * tail(m, 2, 2)
                * tail(m, 3, 2)
        }
        PsiBranch::R3Reciprocal => tail(m, 1, 1) * tail(m, 2, 1),
    };
    nat(v)
}

pub fn count_total(m: &SeifertData) -> CensusResult {
    let (h, phi, psi) = (count_h(m), count_phi(m), count_psi(m));
    let total = &phi + &psi;
    CensusResult { h, phi, psi, total, branch_phi: phi_branch(m), branch_psi: psi_branch(m) }
}
