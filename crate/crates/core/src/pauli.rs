//! Pauli strings over {I, X, Y, Z}, one letter per qubit.
//!
//! Letter 1 applies to qubit 1 (the most significant bit of a basis index).

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            other => Err(Error::MalformedPauli(other.to_string())),
        }
    }

    /// True when the letter flips the computational basis bit.
    pub fn flips_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

/// A Pauli operator written as one letter per qubit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString { letters }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            letters: vec![Pauli::I; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Letter acting on 1-based qubit `q`.
    pub fn letter(&self, q: usize) -> Pauli {
        self.letters[q - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Bit mask (over basis indices, qubit 1 = MSB) of letters that flip bits.
    pub fn x_mask(&self, n_qubits: usize) -> usize {
        debug_assert_eq!(n_qubits, self.letters.len());
        let mut mask = 0usize;
        for (i, &p) in self.letters.iter().enumerate() {
            if p.flips_bit() {
                mask |= 1 << (n_qubits - 1 - i);
            }
        }
        mask
    }

    /// Phase factor of `P|b>` for basis state `b`, so that `P|b> = phase * |b ^ x_mask>`.
    pub fn basis_phase(&self, basis: usize, n_qubits: usize) -> Complex64 {
        let mut phase = Complex64::new(1.0, 0.0);
        for (i, &p) in self.letters.iter().enumerate() {
            let bit = (basis >> (n_qubits - 1 - i)) & 1;
            match p {
                Pauli::I | Pauli::X => {}
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
                Pauli::Y => {
                    // Y|0> = i|1>, Y|1> = -i|0>
                    phase *= if bit == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                }
            }
        }
        phase
    }

    /// All `4^n` Pauli strings on `n` qubits in lexicographic (I < X < Y < Z) order.
    pub fn enumerate(n_qubits: usize) -> Vec<PauliString> {
        let mut out = Vec::with_capacity(4usize.pow(n_qubits as u32));
        let mut current = vec![Pauli::I; n_qubits];
        fn rec(pos: usize, n: usize, current: &mut Vec<Pauli>, out: &mut Vec<PauliString>) {
            if pos == n {
                out.push(PauliString::new(current.clone()));
                return;
            }
            for p in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
                current[pos] = p;
                rec(pos + 1, n, current, out);
            }
        }
        rec(0, n_qubits, &mut current, &mut out);
        out
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::MalformedPauli("empty label".into()));
        }
        let letters = s.chars().map(Pauli::from_char).collect::<Result<_>>()?;
        Ok(PauliString { letters })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}
