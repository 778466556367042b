use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::Error;

/// Bits per instruction.
pub const INSTRUCTION_BITS: usize = 3;

/// Append-only instruction set. The numeric code is the enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Instruction {
    /// Append 0. Cost 1.
    Out0 = 0,
    /// Append 1. Cost 1.
    Out1 = 1,
    /// Append the input `y`. Cost `max(1, |y|)`.
    Cpy = 2,
    /// Append a copy of the output. Cost `max(1, |out|)`.
    Dbl = 3,
    /// Append the complement of the output. Cost `max(1, |out|)`.
    Inv = 4,
    /// Append the reversed output. Cost `max(1, |out|)`.
    Reva = 5,
    /// Cost 1.
    Nop = 6,
    /// Stop. Cost 1.
    Halt = 7,
}

impl Instruction {
    pub const ALL: [Instruction; 8] = [
        Instruction::Out0,
        Instruction::Out1,
        Instruction::Cpy,
        Instruction::Dbl,
        Instruction::Inv,
        Instruction::Reva,
        Instruction::Nop,
        Instruction::Halt,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Instruction::Out0 => "OUT0",
            Instruction::Out1 => "OUT1",
            Instruction::Cpy => "CPY",
            Instruction::Dbl => "DBL",
            Instruction::Inv => "INV",
            Instruction::Reva => "REVA",
            Instruction::Nop => "NOP",
            Instruction::Halt => "HALT",
        }
    }
}

impl FromStr for Instruction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|i| i.mnemonic().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown instruction {s:?}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TinyProgram(pub Vec<Instruction>);

impl TinyProgram {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The complexity measure: three bits per instruction.
    pub fn bit_length(&self) -> usize {
        INSTRUCTION_BITS * self.0.len()
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.0
    }

    pub fn mnemonics(&self) -> Vec<&'static str> {
        self.0.iter().map(|i| i.mnemonic()).collect()
    }

    /// Program `index` among those of `len` instructions, in lexicographic
    /// order of instruction codes.
    pub fn nth_of_len(len: usize, mut index: u64) -> Self {
        let mut codes = vec![Instruction::Out0; len];
        for slot in codes.iter_mut().rev() {
            *slot = Instruction::ALL[(index % 8) as usize];
            index /= 8;
        }
        Self(codes)
    }
}

impl fmt::Display for TinyProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.mnemonics().join(" "))
    }
}

impl FromStr for TinyProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineStatus {
    Halted,
    StepBudgetExceeded,
    OutputCapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineResult {
    pub status: MachineStatus,
    pub output: BitString,
    pub steps_used: u64,
}

/// Runs `program` on input `y`.
///
/// An instruction whose cost would push the step count past `budget` is not
/// executed and the run ends with `StepBudgetExceeded`. An instruction that
/// grows the output past `cap` bits is charged and the run ends with
/// `OutputCapExceeded`. Reaching the end of the program halts.
pub fn run_program(program: &TinyProgram, y: &BitString, budget: u64, cap: usize) -> MachineResult {
    let mut out: Vec<bool> = Vec::new();
    let mut steps = 0u64;
    let finish = |status, out: Vec<bool>, steps| MachineResult {
        status,
        output: BitString::from_bits(out),
        steps_used: steps,
    };
    for &ins in program.instructions() {
        let appended = match ins {
            Instruction::Out0 | Instruction::Out1 => 1,
            Instruction::Cpy => y.len(),
            Instruction::Dbl | Instruction::Inv | Instruction::Reva => out.len(),
            Instruction::Nop | Instruction::Halt => 0,
        };
        let cost = appended.max(1) as u64;
        if steps + cost > budget {
            return finish(MachineStatus::StepBudgetExceeded, out, steps);
        }
        steps += cost;
        if out.len() + appended > cap {
            return finish(MachineStatus::OutputCapExceeded, out, steps);
        }
        match ins {
            Instruction::Out0 => out.push(false),
            Instruction::Out1 => out.push(true),
            Instruction::Cpy => out.extend_from_slice(y.bits()),
            Instruction::Dbl => out.extend_from_within(..),
            Instruction::Inv => {
                let inv: Vec<bool> = out.iter().map(|b| !b).collect();
                out.extend(inv);
            }
            Instruction::Reva => {
                let rev: Vec<bool> = out.iter().rev().copied().collect();
                out.extend(rev);
            }
            Instruction::Nop => {}
            Instruction::Halt => return finish(MachineStatus::Halted, out, steps),
        }
    }
    finish(MachineStatus::Halted, out, steps)
}

/// Prints `x` bit by bit: the ceiling program, `3 * l(x)` bits long.
pub fn literal_program(x: &BitString) -> TinyProgram {
    TinyProgram(
        x.bits()
            .iter()
            .map(|&b| {
                if b {
                    Instruction::Out1
                } else {
                    Instruction::Out0
                }
            })
            .collect(),
    )
}
