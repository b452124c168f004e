//! Initial qubit states: the four-qubit decoherence-free states, the two-qubit
//! Bell states, and user-supplied amplitude vectors.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::sector::{SectorDm, SectorLayout};
use crate::C64;

const NORM_TOL: f64 = 1e-12;

/// Normalized pure state over the configuration basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    n_qubits: usize,
    amplitudes: Array1<C64>,
}

impl QubitState {
    /// Wraps an amplitude vector of length `2^N`, which must already be
    /// normalized.
    pub fn new(n_qubits: usize, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Dimension { expected: 1 << n_qubits, got: amplitudes.len() });
        }
        let norm2 = norm_sqr(&amplitudes);
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(n_qubits: usize, amplitudes: Array1<C64>) -> Result<Self> {
        let norm2 = norm_sqr(&amplitudes);
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::NotNormalized(norm2));
        }
        let scale = C64::from(norm2.sqrt().recip());
        Self::new(n_qubits, amplitudes.mapv(|a| a * scale))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &QubitState) -> C64 {
        self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

fn norm_sqr(v: &Array1<C64>) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// How the logical `|0⟩/|1⟩` of the DF states maps onto charge states.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LogicalZero {
    /// `|0⟩ ≡ |↓⟩`.
    #[default]
    Down,
    /// `|0⟩ ≡ |↑⟩`.
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Df4State {
    Psi1,
    Psi2,
    Psi3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    A,
    B,
    C,
    D,
}

/// Basis index of a logical bit string; character `k` is qubit `k`.
pub fn logical_index(bits: &str, zero: LogicalZero) -> usize {
    bits.bytes().enumerate().fold(0, |acc, (k, ch)| {
        let one = ch == b'1';
        let up = match zero {
            LogicalZero::Down => one,
            LogicalZero::Up => !one,
        };
        acc | (usize::from(up) << k)
    })
}

fn from_terms(n_qubits: usize, terms: &[(f64, &str)], zero: LogicalZero) -> QubitState {
    let mut amps = Array1::<C64>::zeros(1 << n_qubits);
    for &(c, bits) in terms {
        amps[logical_index(bits, zero)] += C64::from(c);
    }
    QubitState::normalized(n_qubits, amps).expect("fixed coefficients")
}

/// Four-qubit decoherence-free states.
///
/// Ψ1 is the product of singlets on (1,2) and (3,4); Ψ2 is the symmetric
/// combination with weights (2,−1,−1,−1,−1,2); Ψ3 is Ψ1 with qubits relabeled
/// (1,2,3,4) → (1,4,3,2), i.e. singlets on (1,4) and (3,2).
pub fn make_df4(which: Df4State, zero: LogicalZero) -> QubitState {
    const PSI1: [(f64, &str); 4] = [(1.0, "0101"), (-1.0, "0110"), (-1.0, "1001"), (1.0, "1010")];
    match which {
        Df4State::Psi1 => from_terms(4, &PSI1, zero),
        Df4State::Psi2 => from_terms(
            4,
            &[(2.0, "0011"), (-1.0, "0101"), (-1.0, "0110"), (-1.0, "1001"), (-1.0, "1010"), (2.0, "1100")],
            zero,
        ),
        Df4State::Psi3 => {
            let psi1 = from_terms(4, &PSI1, zero);
            let mut amps = Array1::<C64>::zeros(16);
            for idx in 0..16usize {
                let bit = |q: usize| idx >> q & 1;
                // Ψ3(q1,q2,q3,q4) = Ψ1(q1,q4,q3,q2)
                let src = bit(0) | bit(3) << 1 | bit(2) << 2 | bit(1) << 3;
                amps[idx] = psi1.amplitudes[src];
            }
            QubitState::new(4, amps).expect("permutation keeps the norm")
        }
    }
}

/// Two-qubit Bell states in the ↑/↓ basis; `D` is the singlet.
pub fn make_bell(which: BellState) -> QubitState {
    // Indices: ↓↓ = 0, ↓↑ = 2, ↑↓ = 1, ↑↑ = 3 (qubit 1 is bit 0).
    let (i, j, sign) = match which {
        BellState::A => (0, 3, 1.0),
        BellState::B => (0, 3, -1.0),
        BellState::C => (2, 1, 1.0),
        BellState::D => (2, 1, -1.0),
    };
    let mut amps = Array1::<C64>::zeros(4);
    amps[i] = C64::from(FRAC_1_SQRT_2);
    amps[j] = C64::from(sign * FRAC_1_SQRT_2);
    QubitState { n_qubits: 2, amplitudes: amps }
}

/// Builds the initial sector state: ρ^a = |ψ⟩⟨ψ| with the island empty.
pub fn to_density(state: &QubitState, layout: SectorLayout) -> Result<SectorDm> {
    let norm2 = norm_sqr(&state.amplitudes);
    if (norm2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm2));
    }
    let mut dm = SectorDm::zeros(state.n_qubits, layout);
    let psi = &state.amplitudes;
    let mut a = dm.sector_mut(0);
    for ((z1, z2), v) in a.indexed_iter_mut() {
        *v = psi[z1] * psi[z2].conj();
    }
    Ok(dm)
}

/// A state addressable by name: `psi1`…`psi3`, `bell-a`…`bell-d`, or
/// `custom:<amplitudes>` with comma-separated complex amplitudes such as
/// `custom:0,0.7071,-0.7071i,0`.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    Df4(Df4State),
    Bell(BellState),
    Custom(Vec<C64>),
}

impl NamedState {
    /// All fixed names, in display order.
    pub const NAMES: [&'static str; 7] = ["psi1", "psi2", "psi3", "bell-a", "bell-b", "bell-c", "bell-d"];

    pub fn required_qubits(&self) -> Option<usize> {
        match self {
            NamedState::Df4(_) => Some(4),
            NamedState::Bell(_) => Some(2),
            NamedState::Custom(amps) => {
                let n = amps.len().trailing_zeros() as usize;
                (amps.len().is_power_of_two() && n > 0).then_some(n)
            }
        }
    }

    pub fn build(&self, n_qubits: usize, zero: LogicalZero) -> Result<QubitState> {
        if let Some(expected) = self.required_qubits() {
            if expected != n_qubits {
                return Err(Error::StateQubits { expected, got: n_qubits });
            }
        } else {
            return Err(Error::UnknownState(self.to_string()));
        }
        Ok(match self {
            NamedState::Df4(w) => make_df4(*w, zero),
            NamedState::Bell(w) => make_bell(*w),
            NamedState::Custom(amps) => QubitState::normalized(n_qubits, Array1::from(amps.clone()))?,
        })
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "psi1" => NamedState::Df4(Df4State::Psi1),
            "psi2" => NamedState::Df4(Df4State::Psi2),
            "psi3" => NamedState::Df4(Df4State::Psi3),
            "bell-a" => NamedState::Bell(BellState::A),
            "bell-b" => NamedState::Bell(BellState::B),
            "bell-c" => NamedState::Bell(BellState::C),
            "bell-d" => NamedState::Bell(BellState::D),
            _ => {
                let body = s.strip_prefix("custom:").ok_or_else(|| Error::UnknownState(s.into()))?;
                let amps = body
                    .split(',')
                    .map(parse_complex)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::UnknownState(s.into()))?;
                NamedState::Custom(amps)
            }
        })
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedState::Df4(w) => write!(f, "psi{}", *w as u8 + 1),
            NamedState::Bell(w) => write!(f, "bell-{}", (b'a' + *w as u8) as char),
            NamedState::Custom(amps) => {
                f.write_str("custom:")?;
                for (k, a) in amps.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}{:+}i", a.re, a.im)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `re`, `imi`, `re+imi` or `re-imi` (`j` accepted for `i`).
fn parse_complex(text: &str) -> Option<C64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().ok().map(C64::from);
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse::<f64>().ok(),
    };
    match split {
        Some(k) => Some(C64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(C64::new(0.0, imag(body)?)),
    }
}
