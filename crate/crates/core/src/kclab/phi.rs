//! Budgeted conditional-complexity estimate.
//!
//! `phi(t, x, y)` is the bit length of the first program, in (length,
//! lexicographic) order among programs no longer than the literal program,
//! that halts within `t` steps on input `y` with output exactly `x`. When
//! none qualifies the estimate is the literal ceiling `3 * l(x)`.
//!
//! The search is exact but avoids enumerating all `8^n` programs. Output is
//! append-only, so any prefix whose output is not a prefix of `x` is dead.
//! What a live prefix can still become depends only on (instructions left,
//! output length, steps used, halted), so dead states are memoized.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::machine::{run_program, Instruction, TinyProgram, INSTRUCTION_BITS};
use crate::bits::BitString;
use crate::error::{Error, Result};

/// Longest `x` accepted by [`phi`].
pub const MAX_PHI_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KcEstimate {
    pub x: BitString,
    pub y: BitString,
    pub budget: u64,
    pub value_bits: usize,
    pub ceiling_bits: usize,
    pub witness: Option<TinyProgram>,
    pub witness_steps: Option<u64>,
}

/// JSON shape of one estimate.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRecord {
    pub x: String,
    pub y: String,
    pub t: u64,
    pub value_bits: usize,
    pub ceiling_bits: usize,
    pub witness: Option<Vec<&'static str>>,
    pub steps_of_witness: Option<u64>,
}

impl KcEstimate {
    pub fn record(&self) -> EstimateRecord {
        EstimateRecord {
            x: self.x.to_string(),
            y: self.y.to_string(),
            t: self.budget,
            value_bits: self.value_bits,
            ceiling_bits: self.ceiling_bits,
            witness: self.witness.as_ref().map(TinyProgram::mnemonics),
            steps_of_witness: self.witness_steps,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("estimate serializes")
    }
}

/// `3 * l(x)`, the length of [`literal_program`].
pub fn literal_ceiling(x: &BitString) -> usize {
    INSTRUCTION_BITS * x.len()
}

/// Any program of at most `l(x)` instructions that outputs exactly `x`
/// takes at most `2 * l(x)` steps (each step appends a bit or executes one
/// of at most `l(x)` instructions), so `phi` is constant from this budget on.
pub fn convergence_budget(x: &BitString) -> u64 {
    2 * x.len() as u64
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    left: u8,
    out_len: u8,
    steps: u64,
    halted: bool,
}

struct Search<'a> {
    x: &'a [bool],
    y: &'a [bool],
    budget: u64,
    dead: HashSet<Node>,
}

impl<'a> Search<'a> {
    fn new(x: &'a BitString, y: &'a BitString, budget: u64) -> Self {
        Self {
            x: x.bits(),
            y: y.bits(),
            budget,
            dead: HashSet::new(),
        }
    }

    /// The node after executing `ins`, or `None` if the run can no longer
    /// end with output `x`.
    fn step(&self, node: Node, ins: Instruction) -> Option<Node> {
        let left = node.left - 1;
        if node.halted {
            return Some(Node { left, ..node });
        }
        let n = node.out_len as usize;
        let x = self.x;
        let (appended, ok) = match ins {
            Instruction::Out0 => (1, n < x.len() && !x[n]),
            Instruction::Out1 => (1, n < x.len() && x[n]),
            Instruction::Cpy => {
                let m = self.y.len();
                (m, n + m <= x.len() && x[n..n + m] == *self.y)
            }
            Instruction::Dbl => (n, 2 * n <= x.len() && x[n..2 * n] == x[..n]),
            Instruction::Inv => (
                n,
                2 * n <= x.len() && x[n..2 * n].iter().zip(&x[..n]).all(|(a, b)| a != b),
            ),
            Instruction::Reva => (
                n,
                2 * n <= x.len()
                    && x[n..2 * n]
                        .iter()
                        .zip(x[..n].iter().rev())
                        .all(|(a, b)| a == b),
            ),
            Instruction::Nop | Instruction::Halt => (0, true),
        };
        let steps = node.steps + appended.max(1) as u64;
        if !ok || steps > self.budget {
            return None;
        }
        Some(Node {
            left,
            out_len: (n + appended) as u8,
            steps,
            halted: ins == Instruction::Halt,
        })
    }

    /// Lexicographically first completion from `node` ending with output `x`.
    fn solve(&mut self, node: Node, path: &mut Vec<Instruction>) -> bool {
        if node.left == 0 {
            return node.out_len as usize == self.x.len();
        }
        if self.dead.contains(&node) {
            return false;
        }
        for ins in Instruction::ALL {
            if let Some(next) = self.step(node, ins) {
                path.push(ins);
                if self.solve(next, path) {
                    return true;
                }
                path.pop();
            }
        }
        self.dead.insert(node);
        false
    }

    fn first_of_len(&mut self, len: usize, first: Option<Instruction>) -> Option<TinyProgram> {
        let root = Node {
            left: len as u8,
            out_len: 0,
            steps: 0,
            halted: false,
        };
        let mut path = Vec::with_capacity(len);
        let found = match first {
            None => self.solve(root, &mut path),
            Some(ins) => match self.step(root, ins) {
                Some(next) => {
                    path.push(ins);
                    self.solve(next, &mut path)
                }
                None => false,
            },
        };
        found.then_some(TinyProgram(path))
    }
}

fn check_len(x: &BitString) -> Result<()> {
    if x.len() > MAX_PHI_BITS {
        return Err(Error::InputTooLong(format!(
            "x has {} bits; phi searches programs up to 3*l(x) bits and accepts at most {MAX_PHI_BITS}",
            x.len()
        )));
    }
    Ok(())
}

fn estimate(x: &BitString, y: &BitString, budget: u64, witness: Option<TinyProgram>) -> KcEstimate {
    let ceiling_bits = literal_ceiling(x);
    let witness_steps = witness
        .as_ref()
        .map(|p| run_program(p, y, budget, x.len()).steps_used);
    KcEstimate {
        x: x.clone(),
        y: y.clone(),
        budget,
        value_bits: witness
            .as_ref()
            .map_or(ceiling_bits, TinyProgram::bit_length),
        ceiling_bits,
        witness,
        witness_steps,
    }
}

pub fn phi(budget: u64, x: &BitString, y: &BitString) -> Result<KcEstimate> {
    check_len(x)?;
    let mut search = Search::new(x, y, budget);
    let witness = (0..=x.len()).find_map(|len| search.first_of_len(len, None));
    Ok(estimate(x, y, budget, witness))
}

/// Same result as [`phi`], with each program length split across the eight
/// possible first instructions in parallel. The lowest-coded branch that
/// succeeds wins, which is exactly the serial enumeration order.
pub fn phi_par(budget: u64, x: &BitString, y: &BitString) -> Result<KcEstimate> {
    check_len(x)?;
    let mut witness = None;
    for len in 0..=x.len() {
        if len == 0 {
            witness = Search::new(x, y, budget).first_of_len(0, None);
        } else {
            let branches: Vec<Option<TinyProgram>> = Instruction::ALL
                .par_iter()
                .map(|&ins| Search::new(x, y, budget).first_of_len(len, Some(ins)))
                .collect();
            witness = branches.into_iter().flatten().next();
        }
        if witness.is_some() {
            break;
        }
    }
    Ok(estimate(x, y, budget, witness))
}

/// `phi` at each budget of a nondecreasing schedule.
pub fn phi_curve(x: &BitString, y: &BitString, schedule: &[u64]) -> Result<Vec<KcEstimate>> {
    if schedule.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(
            "budget schedule must be nondecreasing".into(),
        ));
    }
    schedule.iter().map(|&t| phi(t, x, y)).collect()
}

/// Reference implementation: runs every program in enumeration order.
/// Exponential; only for checking [`phi`] on short strings.
pub fn phi_exhaustive(budget: u64, x: &BitString, y: &BitString) -> KcEstimate {
    let witness = (0..=x.len()).find_map(|len| {
        (0..8u64.pow(len as u32))
            .map(|i| TinyProgram::nth_of_len(len, i))
            .find(|p| {
                let r = run_program(p, y, budget, x.len());
                r.status == super::MachineStatus::Halted && r.output == *x
            })
    });
    estimate(x, y, budget, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kclab::literal_program;
    use Instruction::*;

    fn literal_fits(x: &BitString, budget: u64) -> bool {
        run_program(&literal_program(x), &BitString::new(), budget, x.len()).status
            == super::super::MachineStatus::Halted
    }

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn eight_ones() {
        let x = bits("11111111");
        let e = BitString::new();
        let at4 = phi(4, &x, &e).unwrap();
        assert_eq!((at4.value_bits, at4.witness.is_none()), (24, true));
        let at8 = phi(8, &x, &e).unwrap();
        assert_eq!(at8.value_bits, 12);
        // Lexicographically first 4-instruction program: codes 1,1,3,3.
        assert_eq!(at8.witness, Some(TinyProgram(vec![Out1, Out1, Dbl, Dbl])));
        assert_eq!(at8.witness_steps, Some(8));
    }

    #[test]
    fn empty_target() {
        for t in [0, 1, 100] {
            let e = phi(t, &BitString::new(), &bits("101")).unwrap();
            assert_eq!(e.value_bits, 0);
            assert_eq!(e.witness, Some(TinyProgram::default()));
        }
    }

    #[test]
    fn copy_from_input() {
        let x = bits("0110100");
        let e = phi(7, &x, &x).unwrap();
        assert_eq!(e.value_bits, 3);
        assert_eq!(e.witness, Some(TinyProgram(vec![Cpy])));
    }

    #[test]
    fn too_long_is_rejected() {
        let x = BitString::from_u64(0, 17);
        assert!(matches!(
            phi(10, &x, &BitString::new()),
            Err(Error::InputTooLong(_))
        ));
    }

    #[test]
    fn schedule_must_not_decrease() {
        assert!(phi_curve(&bits("1"), &BitString::new(), &[4, 2]).is_err());
    }

    #[test]
    fn matches_exhaustive_on_short_strings() {
        for x in BitString::all_up_to(4) {
            for y in [BitString::new(), x.clone(), bits("01")] {
                for t in [0, 1, 2, 3, 5, 8] {
                    assert_eq!(
                        phi(t, &x, &y).unwrap(),
                        phi_exhaustive(t, &x, &y),
                        "x={x} y={y} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn witness_reaches_ceiling_when_budget_allows() {
        let x = bits("10010");
        let e = phi(5, &x, &BitString::new()).unwrap();
        assert!(e.value_bits <= 15);
        assert!(e.witness.is_some());
        assert!(literal_fits(&x, 5));
    }
}
