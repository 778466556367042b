use std::io::{self, Read, Write};

use crate::predictors::rng::XorShift64Star;

/// One addition exercise: problem `k`, worked carries `m`, answer `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorksheetRecord {
    pub problem: Vec<u8>,
    pub working: Vec<u8>,
    pub answer: Vec<u8>,
}

const WORKSHEET_STREAM: u64 = 0x776f_726b_7368_6565;

fn operand(rng: &mut XorShift64Star) -> u64 {
    let digits = 1 + rng.below(6) as u32;
    let lo = if digits == 1 {
        0
    } else {
        10u64.pow(digits - 1)
    };
    lo + rng.below(10u64.pow(digits) - lo)
}

fn digits_lsd_first(mut v: u64) -> Vec<u64> {
    let mut out = vec![v % 10];
    v /= 10;
    while v > 0 {
        out.push(v % 10);
        v /= 10;
    }
    out
}

/// Builds the record for `a + b`.
///
/// ```text
/// problem: "457+68="
/// working: "7+8+0=15 write 5 carry 1\n5+6+1=12 write 2 carry 1\n4+0+1=5 write 5 carry 0\nso 457+68=525\n"
/// answer:  "525"
/// ```
pub fn worksheet_record(a: u64, b: u64) -> WorksheetRecord {
    let sum = a + b;
    let da = digits_lsd_first(a);
    let db = digits_lsd_first(b);
    let mut working = String::new();
    let mut carry = 0;
    for i in 0..da.len().max(db.len()) {
        let x = da.get(i).copied().unwrap_or(0);
        let y = db.get(i).copied().unwrap_or(0);
        let s = x + y + carry;
        working.push_str(&format!(
            "{x}+{y}+{carry}={s} write {} carry {}\n",
            s % 10,
            s / 10
        ));
        carry = s / 10;
    }
    working.push_str(&format!("so {a}+{b}={sum}\n"));
    WorksheetRecord {
        problem: format!("{a}+{b}=").into_bytes(),
        working: working.into_bytes(),
        answer: sum.to_string().into_bytes(),
    }
}

/// `count` records with operands of 1 to 6 digits.
pub fn worksheet_corpus(seed: u64, count: usize) -> Vec<WorksheetRecord> {
    let mut rng = XorShift64Star::new(seed ^ WORKSHEET_STREAM);
    (0..count)
        .map(|_| {
            let a = operand(&mut rng);
            let b = operand(&mut rng);
            worksheet_record(a, b)
        })
        .collect()
}

/// Each record as three u32-LE-length-prefixed fields: problem, working, answer.
pub fn write_records<W: Write>(out: &mut W, records: &[WorksheetRecord]) -> io::Result<()> {
    for rec in records {
        for field in [&rec.problem, &rec.working, &rec.answer] {
            out.write_all(&(field.len() as u32).to_le_bytes())?;
            out.write_all(field)?;
        }
    }
    Ok(())
}

pub fn read_records<R: Read>(input: &mut R) -> io::Result<Vec<WorksheetRecord>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut rest = bytes.as_slice();
    let mut out = Vec::new();
    while !rest.is_empty() {
        out.push(WorksheetRecord {
            problem: take_field(&mut rest)?,
            working: take_field(&mut rest)?,
            answer: take_field(&mut rest)?,
        });
    }
    Ok(out)
}

fn take_field(rest: &mut &[u8]) -> io::Result<Vec<u8>> {
    let bad = || io::Error::new(io::ErrorKind::InvalidData, "truncated worksheet record");
    let len = rest.get(..4).ok_or_else(bad)?;
    let len = u32::from_le_bytes(len.try_into().unwrap()) as usize;
    let body = rest.get(4..4 + len).ok_or_else(bad)?.to_vec();
    *rest = &rest[4 + len..];
    Ok(body)
}

/// The whole corpus serialized by [`write_records`].
pub fn corpus_bytes(records: &[WorksheetRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    write_records(&mut out, records).expect("writing to a Vec");
    out
}

/// Plain text: for each record the problem and a newline, the working, then
/// the answer and a newline.
pub fn corpus_text(records: &[WorksheetRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    for rec in records {
        out.extend_from_slice(&rec.problem);
        out.push(b'\n');
        out.extend_from_slice(&rec.working);
        out.extend_from_slice(&rec.answer);
        out.push(b'\n');
    }
    out
}
