//! Reading and writing sample files and result reports.
//!
//! Sample files are line-oriented UTF-8 text:
//!
//! ```text
//! # comment lines start with '#', blank lines are ignored
//! .props: p,q            # ordered alphabet
//! .ops: !,|,&,->,X,U,F,G # optional; default = all eight operators
//! .positive:
//! 10;01|11               # u = "10","01" ; v = "11"
//! .negative:
//! 00|00
//! ```
//!
//! Each symbol is a bit vector in alphabet order (`1` = proposition holds),
//! symbols are separated by `;`, and `|` separates the prefix from the
//! period. An empty prefix is written `|11`; the period must be nonempty.
//!
//! Result reports are plain text: a `formula := <rendered formula>` line per
//! learned formula followed by `size := <n>`.

use std::io::{BufRead, Write};

use crate::alphabet::{OperatorSet, PropositionAlphabet};
use crate::error::TraceIoError;
use crate::syntax::SyntaxDag;
use crate::word::{LassoWord, Sample, Symbol};

/// Contents of a sample file: the sample plus the optional operator set
/// declared in a `.ops` block.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFile {
    pub sample: Sample,
    pub ops: Option<OperatorSet>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Positive,
    Negative,
}

fn parse_bits(chunk: &str, line: usize, alphabet_len: usize) -> Result<Symbol, TraceIoError> {
    if chunk.len() != alphabet_len {
        return Err(TraceIoError::BitVectorLength {
            line,
            found: chunk.len(),
            expected: alphabet_len,
        });
    }
    let mut symbol = Symbol::empty();
    for (i, c) in chunk.chars().enumerate() {
        match c {
            '1' => symbol.insert(i),
            '0' => {}
            _ => {
                return Err(TraceIoError::Malformed {
                    line,
                    message: format!("expected '0' or '1', found {c:?}"),
                })
            }
        }
    }
    Ok(symbol)
}

fn parse_word_part(
    part: &str,
    line: usize,
    alphabet_len: usize,
) -> Result<Vec<Symbol>, TraceIoError> {
    if part.is_empty() {
        return Ok(Vec::new());
    }
    part.split(';')
        .map(|chunk| parse_bits(chunk, line, alphabet_len))
        .collect()
}

fn parse_word_line(text: &str, line: usize, alphabet_len: usize) -> Result<LassoWord, TraceIoError> {
    let mut parts = text.split('|');
    let (u, v) = match (parts.next(), parts.next(), parts.next()) {
        (Some(u), Some(v), None) => (u, v),
        _ => {
            return Err(TraceIoError::Malformed {
                line,
                message: "word line must contain exactly one '|'".into(),
            })
        }
    };
    let prefix = parse_word_part(u, line, alphabet_len)?;
    let period = parse_word_part(v, line, alphabet_len)?;
    if period.is_empty() {
        return Err(TraceIoError::EmptyPeriod { line });
    }
    LassoWord::new(prefix, period).map_err(|_| TraceIoError::EmptyPeriod { line })
}

/// Parse a sample file. Errors carry the 1-based line number.
pub fn read_sample<R: BufRead>(reader: R) -> Result<SampleFile, TraceIoError> {
    let mut alphabet: Option<PropositionAlphabet> = None;
    let mut ops: Option<OperatorSet> = None;
    let mut positives: Vec<LassoWord> = Vec::new();
    let mut negatives: Vec<LassoWord> = Vec::new();
    let mut section = Section::None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let raw = line?;
        // strip comments, also trailing ones after a directive
        let text = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw.as_str(),
        };
        let text = text.trim();
        if text.is_empty() {
            continue;
        }

        if let Some(rest) = text.strip_prefix(".props:") {
            if alphabet.is_some() {
                return Err(TraceIoError::Malformed {
                    line: line_no,
                    message: "duplicate .props declaration".into(),
                });
            }
            let names: Vec<&str> = rest.split(',').map(str::trim).collect();
            alphabet = Some(PropositionAlphabet::new(names).map_err(|e| {
                TraceIoError::Malformed {
                    line: line_no,
                    message: e.to_string(),
                }
            })?);
            continue;
        }
        if let Some(rest) = text.strip_prefix(".ops:") {
            if ops.is_some() {
                return Err(TraceIoError::Malformed {
                    line: line_no,
                    message: "duplicate .ops declaration".into(),
                });
            }
            ops = Some(OperatorSet::parse(rest).map_err(|e| TraceIoError::Malformed {
                line: line_no,
                message: e.to_string(),
            })?);
            continue;
        }
        if text == ".positive:" {
            section = Section::Positive;
            continue;
        }
        if text == ".negative:" {
            section = Section::Negative;
            continue;
        }
        if text.starts_with('.') {
            return Err(TraceIoError::Malformed {
                line: line_no,
                message: format!("unknown directive {text:?}"),
            });
        }

        let alphabet = alphabet.as_ref().ok_or_else(|| TraceIoError::Malformed {
            line: line_no,
            message: "word before .props declaration".into(),
        })?;
        let word = parse_word_line(text, line_no, alphabet.len())?;
        match section {
            Section::None => {
                return Err(TraceIoError::Malformed {
                    line: line_no,
                    message: "word outside of a .positive:/.negative: block".into(),
                })
            }
            Section::Positive => {
                if negatives.iter().any(|n| n.omega_eq(&word)) {
                    return Err(TraceIoError::Contradictory { line: line_no });
                }
                if !positives.contains(&word) {
                    positives.push(word);
                }
            }
            Section::Negative => {
                if positives.iter().any(|p| p.omega_eq(&word)) {
                    return Err(TraceIoError::Contradictory { line: line_no });
                }
                if !negatives.contains(&word) {
                    negatives.push(word);
                }
            }
        }
    }

    let alphabet = alphabet.ok_or_else(|| TraceIoError::Malformed {
        line: 1,
        message: "missing .props declaration".into(),
    })?;
    let sample = Sample::new(alphabet, positives, negatives).map_err(|_| {
        // cross-block duplicates were caught per line; this is unreachable
        TraceIoError::Contradictory { line: 1 }
    })?;
    Ok(SampleFile { sample, ops })
}

fn write_word(word: &LassoWord, alphabet_len: usize, out: &mut String) {
    let bits = |s: Symbol, out: &mut String| {
        for i in 0..alphabet_len {
            out.push(if s.contains(i) { '1' } else { '0' });
        }
    };
    for (k, &s) in word.prefix().iter().enumerate() {
        if k > 0 {
            out.push(';');
        }
        bits(s, out);
    }
    out.push('|');
    for (k, &s) in word.period().iter().enumerate() {
        if k > 0 {
            out.push(';');
        }
        bits(s, out);
    }
}

/// Serialize a sample (and optional operator set) in the file format above.
/// Words are emitted in insertion order; reading the output back yields an
/// equal sample.
pub fn write_sample<W: Write>(
    sample: &Sample,
    ops: Option<&OperatorSet>,
    mut writer: W,
) -> std::io::Result<()> {
    let mut text = String::new();
    text.push_str(".props: ");
    text.push_str(&sample.alphabet().names().join(","));
    text.push('\n');
    if let Some(ops) = ops {
        text.push_str(".ops: ");
        text.push_str(&ops.render());
        text.push('\n');
    }
    text.push_str(".positive:\n");
    for w in sample.positives() {
        write_word(w, sample.alphabet().len(), &mut text);
        text.push('\n');
    }
    text.push_str(".negative:\n");
    for w in sample.negatives() {
        write_word(w, sample.alphabet().len(), &mut text);
        text.push('\n');
    }
    writer.write_all(text.as_bytes())
}

/// The `formula := ... / size := ...` result report for learned formulas.
pub fn render_report(formulas: &[SyntaxDag], size: usize) -> String {
    let mut out = String::new();
    for f in formulas {
        out.push_str("formula := ");
        out.push_str(&f.render());
        out.push('\n');
    }
    out.push_str(&format!("size := {size}\n"));
    out
}
