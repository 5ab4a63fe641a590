//! The nine SLOCC families of four-qubit pure states, plus the tags used to
//! label dataset records.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::state::PureState;
use crate::svm::Label;

/// Class tag carried by every dataset record. `G` and `E1`–`E5` are
/// parametrized entangled families, `E6`–`E8` single entangled states, `S0`
/// the factorized representative; `Sep` marks convex hulls of product states
/// and the Werner tags mark twirled states by class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    G,
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
    S0,
    Sep,
    WernerSep,
    WernerEnt,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 13] = [
        FamilyTag::G,
        FamilyTag::E1,
        FamilyTag::E2,
        FamilyTag::E3,
        FamilyTag::E4,
        FamilyTag::E5,
        FamilyTag::E6,
        FamilyTag::E7,
        FamilyTag::E8,
        FamilyTag::S0,
        FamilyTag::Sep,
        FamilyTag::WernerSep,
        FamilyTag::WernerEnt,
    ];

    /// The SLOCC families with a pure-state representative.
    pub const SLOCC: [FamilyTag; 10] = [
        FamilyTag::G,
        FamilyTag::E1,
        FamilyTag::E2,
        FamilyTag::E3,
        FamilyTag::E4,
        FamilyTag::E5,
        FamilyTag::E6,
        FamilyTag::E7,
        FamilyTag::E8,
        FamilyTag::S0,
    ];

    /// Binary class of states carrying this tag. `S0` states are factorized,
    /// hence separable.
    pub fn label(self) -> Label {
        match self {
            FamilyTag::Sep | FamilyTag::WernerSep | FamilyTag::S0 => Label::Separable,
            _ => Label::Entangled,
        }
    }

    /// Number of complex parameters of the family.
    pub fn param_count(self) -> usize {
        match self {
            FamilyTag::G => 4,
            FamilyTag::E1 => 3,
            FamilyTag::E2 | FamilyTag::E3 => 2,
            FamilyTag::E4 | FamilyTag::E5 => 1,
            _ => 0,
        }
    }

    pub fn is_slocc(self) -> bool {
        Self::SLOCC.contains(&self)
    }

    pub fn as_byte(self) -> u8 {
        match self {
            FamilyTag::G => 0,
            FamilyTag::E1 => 1,
            FamilyTag::E2 => 2,
            FamilyTag::E3 => 3,
            FamilyTag::E4 => 4,
            FamilyTag::E5 => 5,
            FamilyTag::E6 => 6,
            FamilyTag::E7 => 7,
            FamilyTag::E8 => 8,
            FamilyTag::S0 => 9,
            FamilyTag::Sep => 10,
            FamilyTag::WernerSep => 11,
            FamilyTag::WernerEnt => 12,
        }
    }

    pub fn from_byte(byte: u8) -> Option<Self> {
        Self::ALL.iter().copied().find(|t| t.as_byte() == byte)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FamilyTag::G => "g",
            FamilyTag::E1 => "e1",
            FamilyTag::E2 => "e2",
            FamilyTag::E3 => "e3",
            FamilyTag::E4 => "e4",
            FamilyTag::E5 => "e5",
            FamilyTag::E6 => "e6",
            FamilyTag::E7 => "e7",
            FamilyTag::E8 => "e8",
            FamilyTag::S0 => "s0",
            FamilyTag::Sep => "sep",
            FamilyTag::WernerSep => "werner_sep",
            FamilyTag::WernerEnt => "werner_ent",
        };
        f.write_str(name)
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        FamilyTag::ALL
            .iter()
            .copied()
            .find(|t| t.to_string() == key)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown family tag '{s}'")))
    }
}

/// Complex parameters a, b, c, d of the parametrized families; unused slots
/// stay zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl FamilyParams {
    pub const ZERO: FamilyParams = FamilyParams {
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(0.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    /// Draws the parameters the family uses, real and imaginary parts i.i.d.
    /// uniform on [-1, 1].
    pub fn random<R: Rng>(tag: FamilyTag, rng: &mut R) -> Result<Self> {
        if !tag.is_slocc() {
            return Err(Error::NotPureFamily(tag.to_string()));
        }
        let mut draw = |used: bool| {
            if used {
                Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let n = tag.param_count();
        Ok(Self { a: draw(n >= 1), b: draw(n >= 2), c: draw(n >= 3), d: draw(n >= 4) })
    }
}

// Computational-basis kets, qubit 1 as the most significant bit.
const K0000: usize = 0b0000;
const K0001: usize = 0b0001;
const K0010: usize = 0b0010;
const K0011: usize = 0b0011;
const K0101: usize = 0b0101;
const K0110: usize = 0b0110;
const K0111: usize = 0b0111;
const K1000: usize = 0b1000;
const K1001: usize = 0b1001;
const K1010: usize = 0b1010;
const K1011: usize = 0b1011;
const K1100: usize = 0b1100;
const K1101: usize = 0b1101;
const K1110: usize = 0b1110;
const K1111: usize = 0b1111;

/// Normalized representative state of a SLOCC family.
pub fn slocc_state(tag: FamilyTag, params: &FamilyParams) -> Result<PureState> {
    let FamilyParams { a, b, c, d } = *params;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let half = Complex64::new(0.5, 0.0);
    let terms: Vec<(usize, Complex64)> = match tag {
        FamilyTag::G => vec![
            (K0000, (a + d) * half),
            (K1111, (a + d) * half),
            (K0011, (a - d) * half),
            (K1100, (a - d) * half),
            (K0101, (b + c) * half),
            (K1010, (b + c) * half),
            (K0110, (b - c) * half),
            (K1001, (b - c) * half),
        ],
        FamilyTag::E1 => vec![
            (K0000, (a + b) * half),
            (K1111, (a + b) * half),
            (K0011, (a - b) * half),
            (K1100, (a - b) * half),
            (K0101, c),
            (K1010, c),
            (K0110, one),
        ],
        FamilyTag::E2 => vec![
            (K0000, a),
            (K1111, a),
            (K0101, b),
            (K1010, b),
            (K0110, one),
            (K0011, one),
        ],
        FamilyTag::E3 => {
            let is = i / Complex64::new(2.0f64.sqrt(), 0.0);
            vec![
                (K0000, a),
                (K1111, a),
                (K0101, (a + b) * half),
                (K1010, (a + b) * half),
                (K0110, (a - b) * half),
                (K1001, (a - b) * half),
                (K0001, is),
                (K0010, is),
                (K0111, is),
                (K1011, is),
            ]
        }
        FamilyTag::E4 => vec![
            (K0000, a),
            (K0101, a),
            (K1010, a),
            (K1111, a),
            (K0001, i),
            (K0110, one),
            (K1011, -i),
        ],
        FamilyTag::E5 => vec![
            (K0000, a),
            (K1111, a),
            (K0011, one),
            (K0101, one),
            (K0110, one),
        ],
        FamilyTag::E6 => vec![(K0000, one), (K0101, one), (K1000, one), (K1110, one)],
        FamilyTag::E7 => vec![(K0000, one), (K1011, one), (K1101, one), (K1110, one)],
        FamilyTag::E8 => vec![(K0000, one), (K0111, one)],
        FamilyTag::S0 => vec![(K0110, one)],
        FamilyTag::Sep | FamilyTag::WernerSep | FamilyTag::WernerEnt => {
            return Err(Error::NotPureFamily(tag.to_string()))
        }
    };
    PureState::from_terms(&terms)
}
