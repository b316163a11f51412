//! Plain-text word and error files, log notation with -1 for zero.

use agbms::agcode::{CodeSpec, ErrorPattern, Word};
use agbms::galois::{Field, FieldElem};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("word has {got} symbols, code length is {expected}")]
    Length { got: usize, expected: usize },
    #[error(transparent)]
    Code(#[from] agbms::agcode::CodeError),
}

pub fn read(path: &str) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.into(), source })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn log_elem(field: &Field, tok: &str, line: usize) -> Result<FieldElem, FileError> {
    let v: i32 = tok.parse().map_err(|_| FileError::Syntax { line, msg: format!("not an integer: {tok}") })?;
    field.elem(v).map_err(|_| FileError::Syntax { line, msg: format!("log {v} out of range") })
}

pub fn parse_word(code: &CodeSpec, text: &str) -> Result<Word, FileError> {
    let mut symbols = Vec::new();
    for (line, l) in content_lines(text) {
        for tok in l.split_whitespace() {
            symbols.push(log_elem(code.field(), tok, line)?);
        }
    }
    if symbols.len() != code.n {
        return Err(FileError::Length { got: symbols.len(), expected: code.n });
    }
    Ok(Word { symbols })
}

pub fn parse_errors(code: &CodeSpec, text: &str) -> Result<ErrorPattern, FileError> {
    let mut e = ErrorPattern::default();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [idx, val] = toks[..] else {
            return Err(FileError::Syntax { line, msg: "expected `index value_log`".into() });
        };
        let j = idx.parse().map_err(|_| FileError::Syntax { line, msg: format!("bad index: {idx}") })?;
        e.locs.push(j);
        e.vals.push(log_elem(code.field(), val, line)?);
    }
    e.validate(code.n)?;
    Ok(e)
}

pub fn format_word(w: &Word) -> String {
    let logs: Vec<String> = w.symbols.iter().map(|v| v.log().to_string()).collect();
    logs.join(" ")
}

pub fn format_errors(e: &ErrorPattern) -> String {
    e.locs.iter().zip(&e.vals).map(|(j, v)| format!("{j} {}\n", v.log())).collect()
}
