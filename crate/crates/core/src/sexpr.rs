//! A small S-expression reader shared by the term, pattern and formula syntaxes.
//!
//! Tokens are `(`, `)` and maximal runs of anything else that is not
//! whitespace. `#` starts a comment that runs to the end of the line.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, line: usize },
    List { items: Vec<Sexp>, line: usize },
}

impl Sexp {
    pub fn line(&self) -> usize {
        match self {
            Sexp::Atom { line, .. } | Sexp::List { line, .. } => *line,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Atom { .. } => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom { text, .. } => f.write_str(text),
            Sexp::List { items, .. } => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open(usize),
    Close(usize),
    Word(String, usize),
}

fn tokenize(text: &str, first_line: usize) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut line = first_line;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                tokens.push(Token::Open(line));
                chars.next();
            }
            ')' => {
                tokens.push(Token::Close(line));
                chars.next();
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '#' {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                tokens.push(Token::Word(word, line));
            }
        }
    }
    tokens
}

/// Reads every top-level expression in `text`.
pub fn parse_all(text: &str, first_line: usize) -> Result<Vec<Sexp>> {
    let tokens = tokenize(text, first_line);
    let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
    let mut out = Vec::new();
    for tok in tokens {
        match tok {
            Token::Open(line) => stack.push((Vec::new(), line)),
            Token::Close(line) => {
                let (items, open_line) =
                    stack.pop().ok_or_else(|| Error::syntax(line, "unbalanced `)`"))?;
                let node = Sexp::List { items, line: open_line };
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => out.push(node),
                }
            }
            Token::Word(text, line) => {
                let node = Sexp::Atom { text, line };
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => out.push(node),
                }
            }
        }
    }
    if let Some((_, line)) = stack.last() {
        return Err(Error::syntax(*line, "unclosed `(`"));
    }
    Ok(out)
}

/// Reads exactly one expression.
pub fn parse_one(text: &str, first_line: usize) -> Result<Sexp> {
    let mut all = parse_all(text, first_line)?;
    match all.len() {
        0 => Err(Error::syntax(first_line, "empty input")),
        1 => Ok(all.pop().unwrap()),
        _ => Err(Error::syntax(
            all[1].line(),
            alloc::format!("unexpected trailing input `{}`", all[1]),
        )),
    }
}
