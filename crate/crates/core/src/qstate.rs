//! Dense state vectors over named qubit registers.
//!
//! Bit order: registers are concatenated in declaration order with the first
//! register in the most significant bits. Inside a register, bit 0 is the most
//! significant bit, so `|i>_S |j>_R` reads left to right as a binary number.

use crate::error::{Error, Result};
use crate::scalar::{c, cone, czero, norm_sqr, Amp, Real};

/// Tolerance on the unit-norm invariant of [`PureState`].
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub width: usize,
}

/// Ordered list of named registers with a fixed global bit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    // shift[k] = number of qubits in registers declared after k
    shifts: Vec<usize>,
    total_qubits: usize,
}

/// One qubit of a register. `bit` 0 is the register's most significant qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Qubit {
    pub register: String,
    pub bit: usize,
}

impl Qubit {
    pub fn new(register: impl Into<String>, bit: usize) -> Self {
        Self {
            register: register.into(),
            bit,
        }
    }
}

impl From<&str> for Qubit {
    /// Bit 0 of the named register; the usual way to address a 1-qubit ancilla.
    fn from(register: &str) -> Self {
        Qubit::new(register, 0)
    }
}

impl RegisterLayout {
    pub fn new<S: AsRef<str>>(registers: &[(S, usize)]) -> Result<Self> {
        if registers.is_empty() {
            return Err(Error::EmptyLayout);
        }
        let mut regs: Vec<Register> = Vec::with_capacity(registers.len());
        for (name, width) in registers {
            let name = name.as_ref();
            if regs.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            if *width == 0 {
                return Err(Error::ZeroWidth(name.to_string()));
            }
            regs.push(Register {
                name: name.to_string(),
                width: *width,
            });
        }
        Ok(Self::from_registers(regs))
    }

    fn from_registers(registers: Vec<Register>) -> Self {
        let total_qubits = registers.iter().map(|r| r.width).sum();
        let mut shifts = vec![0; registers.len()];
        let mut acc = 0;
        for (k, r) in registers.iter().enumerate().rev() {
            shifts[k] = acc;
            acc += r.width;
        }
        Self {
            registers,
            shifts,
            total_qubits,
        }
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    /// Hilbert-space dimension `2^total_qubits`.
    pub fn dim(&self) -> usize {
        1usize << self.total_qubits
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.name == name)
    }

    pub fn width(&self, name: &str) -> Result<usize> {
        self.position(name)
            .map(|k| self.registers[k].width)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// `(shift, width)` of a register: its value is `(index >> shift) & (2^width - 1)`.
    pub fn span(&self, name: &str) -> Result<(usize, usize)> {
        self.position(name)
            .map(|k| (self.shifts[k], self.registers[k].width))
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// Mask selecting all bits of a register in a global index.
    pub fn register_mask(&self, name: &str) -> Result<usize> {
        let (shift, width) = self.span(name)?;
        Ok(((1usize << width) - 1) << shift)
    }

    /// Single-bit mask of a qubit in a global index.
    pub fn qubit_mask(&self, qubit: &Qubit) -> Result<usize> {
        let (shift, width) = self.span(&qubit.register)?;
        if qubit.bit >= width {
            return Err(Error::UnknownQubit {
                register: qubit.register.clone(),
                bit: qubit.bit,
                width,
            });
        }
        Ok(1usize << (shift + width - 1 - qubit.bit))
    }

    /// Value held by a register in the given global basis index.
    pub fn register_value(&self, name: &str, index: usize) -> Result<usize> {
        let (shift, width) = self.span(name)?;
        Ok((index >> shift) & ((1usize << width) - 1))
    }

    /// Global basis index of a full assignment.
    pub fn index_of<S: AsRef<str>>(&self, assignments: &[(S, usize)]) -> Result<usize> {
        for (name, _) in assignments {
            if !self.contains(name.as_ref()) {
                return Err(Error::UnknownRegister(name.as_ref().to_string()));
            }
        }
        let mut index = 0usize;
        for (k, reg) in self.registers.iter().enumerate() {
            let value = assignments
                .iter()
                .find(|(n, _)| n.as_ref() == reg.name)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::MissingAssignment(reg.name.clone()))?;
            if value >= 1usize << reg.width {
                return Err(Error::ValueOutOfRange {
                    register: reg.name.clone(),
                    value,
                    width: reg.width,
                });
            }
            index |= value << self.shifts[k];
        }
        Ok(index)
    }

    /// Inverse of [`index_of`](Self::index_of), in declaration order.
    pub fn assignment_of(&self, index: usize) -> Vec<(String, usize)> {
        self.registers
            .iter()
            .zip(&self.shifts)
            .map(|(r, &s)| (r.name.clone(), (index >> s) & ((1usize << r.width) - 1)))
            .collect()
    }

    /// Layout with a register appended in the least significant position.
    pub fn with_appended(&self, name: &str, width: usize) -> Result<Self> {
        if self.contains(name) {
            return Err(Error::DuplicateRegister(name.to_string()));
        }
        if width == 0 {
            return Err(Error::ZeroWidth(name.to_string()));
        }
        let mut regs = self.registers.clone();
        regs.push(Register {
            name: name.to_string(),
            width,
        });
        Ok(Self::from_registers(regs))
    }
}

/// Unit-norm complex amplitude vector over a [`RegisterLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    layout: RegisterLayout,
    amplitudes: Vec<Amp<T>>,
}

impl<T: Real> PureState<T> {
    /// Wraps amplitudes that are already unit norm (within [`NORM_TOLERANCE`]).
    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<Amp<T>>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::LengthMismatch {
                expected: layout.dim(),
                got: amplitudes.len(),
            });
        }
        let n = norm_sqr(&amplitudes).sqrt();
        if (n - T::one()).abs() > T::lit(NORM_TOLERANCE) || !n.is_finite() {
            return Err(Error::NotNormalized(n.as_f64()));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Normalizes `amplitudes` before wrapping them. Fails on the zero vector.
    pub fn normalized(layout: RegisterLayout, mut amplitudes: Vec<Amp<T>>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::LengthMismatch {
                expected: layout.dim(),
                got: amplitudes.len(),
            });
        }
        let n = norm_sqr(&amplitudes).sqrt();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::NotNormalized(n.as_f64()));
        }
        let inv = n.recip();
        amplitudes.iter_mut().for_each(|a| *a = a.scale(inv));
        Ok(Self { layout, amplitudes })
    }

    /// Computational basis state.
    pub fn basis<S: AsRef<str>>(
        layout: RegisterLayout,
        assignments: &[(S, usize)],
    ) -> Result<Self> {
        let index = layout.index_of(assignments)?;
        let mut amplitudes = vec![czero(); layout.dim()];
        amplitudes[index] = cone();
        Ok(Self { layout, amplitudes })
    }

    /// Crate-internal constructor for gate outputs, which are unit norm by construction.
    pub(crate) fn from_parts(layout: RegisterLayout, amplitudes: Vec<Amp<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.dim());
        Self { layout, amplitudes }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Amp<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Amp<T>> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    pub fn amplitude_of<S: AsRef<str>>(&self, assignments: &[(S, usize)]) -> Result<Amp<T>> {
        Ok(self.amplitudes[self.layout.index_of(assignments)?])
    }

    /// `self ⊗ |0>` with the new register in the least significant bits.
    pub fn add_ancilla(&self, name: &str, width: usize) -> Result<Self> {
        let layout = self.layout.with_appended(name, width)?;
        let stride = 1usize << width;
        let mut amplitudes = vec![czero(); layout.dim()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            amplitudes[i * stride] = *a;
        }
        Ok(Self { layout, amplitudes })
    }

    /// Unnormalized amplitudes of the sector where `register == value`, indexed
    /// by the remaining registers (register removed from the layout).
    pub fn sector(&self, register: &str, value: usize) -> Result<(RegisterLayout, Vec<Amp<T>>)> {
        let (shift, width) = self.layout.span(register)?;
        if value >= 1usize << width {
            return Err(Error::ValueOutOfRange {
                register: register.to_string(),
                value,
                width,
            });
        }
        let rest: Vec<(String, usize)> = self
            .layout
            .registers()
            .iter()
            .filter(|r| r.name != register)
            .map(|r| (r.name.clone(), r.width))
            .collect();
        if rest.is_empty() {
            let layout = RegisterLayout::new(&[("_", 1)])?;
            let mut amps = vec![czero(); 2];
            amps[0] = self.amplitudes[value];
            return Ok((layout, amps));
        }
        let layout = RegisterLayout::new(&rest)?;
        let low_mask = (1usize << shift) - 1;
        let amps = (0..layout.dim())
            .map(|r| {
                let high = r >> shift;
                let low = r & low_mask;
                self.amplitudes[(high << (shift + width)) | (value << shift) | low]
            })
            .collect();
        Ok((layout, amps))
    }

    /// Inner product `<self|other>`. Layouts must agree.
    pub fn inner(&self, other: &Self) -> Amp<T> {
        assert_eq!(self.layout, other.layout, "layout mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Largest entrywise amplitude difference. Layouts must agree.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.layout, other.layout, "layout mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    /// State multiplied by a unit-modulus phase.
    pub fn with_phase(&self, theta: T) -> Self {
        let p = c(theta.cos(), theta.sin());
        Self {
            layout: self.layout.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * p).collect(),
        }
    }
}
