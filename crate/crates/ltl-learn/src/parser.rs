//! Parser for the formula surface syntax.
//!
//! Operators are spelled `! & | -> X U F G`; parentheses are optional on
//! input, with precedence `unary > U > & > | > ->`. `U` and `->` associate
//! to the right, `&` and `|` to the left. Parsing hash-conses identical
//! subformulas, so the resulting DAG is maximally shared.

use crate::error::SyntaxError;
use crate::syntax::{DagBuilder, NodeId, SyntaxDag};
use crate::Operator;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Finally,
    Globally,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                tokens.push((col, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((col, Token::RParen));
                i += 1;
            }
            '!' => {
                tokens.push((col, Token::Not));
                i += 1;
            }
            '&' => {
                tokens.push((col, Token::And));
                i += 1;
            }
            '|' => {
                tokens.push((col, Token::Or));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((col, Token::Implies));
                    i += 2;
                } else {
                    return Err(SyntaxError::Parse {
                        position: col,
                        message: "expected '->'".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "X" => Token::Next,
                    "U" => Token::Until,
                    "F" => Token::Finally,
                    "G" => Token::Globally,
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => Token::Ident(word.to_string()),
                };
                tokens.push((col, tok));
            }
            _ => {
                return Err(SyntaxError::Parse {
                    position: col,
                    message: format!("unexpected character {c:?}"),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    builder: &'a mut DagBuilder,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse {
            position: self.here(),
            message: message.into(),
        }
    }

    fn implies(&mut self) -> Result<NodeId, SyntaxError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Token::Implies) {
            self.next();
            let rhs = self.implies()?;
            Ok(self.builder.binary(Operator::Implies, lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<NodeId, SyntaxError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.next();
            let rhs = self.and()?;
            lhs = self.builder.binary(Operator::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<NodeId, SyntaxError> {
        let mut lhs = self.until()?;
        while self.peek() == Some(&Token::And) {
            self.next();
            let rhs = self.until()?;
            lhs = self.builder.binary(Operator::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<NodeId, SyntaxError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Token::Until) {
            self.next();
            let rhs = self.until()?;
            Ok(self.builder.binary(Operator::Until, lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<NodeId, SyntaxError> {
        let op = match self.peek() {
            Some(Token::Not) => Some(Operator::Not),
            Some(Token::Next) => Some(Operator::Next),
            Some(Token::Finally) => Some(Operator::Finally),
            Some(Token::Globally) => Some(Operator::Globally),
            _ => None,
        };
        if let Some(op) = op {
            self.next();
            let child = self.unary()?;
            return Ok(self.builder.unary(op, child));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<NodeId, SyntaxError> {
        match self.next() {
            Some((_, Token::Ident(name))) => Ok(self.builder.prop(name)),
            Some((_, Token::True)) => Ok(self.builder.constant(true)),
            Some((_, Token::False)) => Ok(self.builder.constant(false)),
            Some((_, Token::LParen)) => {
                let inner = self.implies()?;
                match self.next() {
                    Some((_, Token::RParen)) => Ok(inner),
                    Some((col, _)) => Err(SyntaxError::Parse {
                        position: col,
                        message: "expected ')'".into(),
                    }),
                    None => Err(SyntaxError::Parse {
                        position: self.end,
                        message: "unclosed '('".into(),
                    }),
                }
            }
            Some((col, tok)) => Err(SyntaxError::Parse {
                position: col,
                message: format!("expected a formula, found {tok:?}"),
            }),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parse formula text into a maximally shared syntax DAG.
pub fn parse(text: &str) -> Result<SyntaxDag, SyntaxError> {
    let mut builder = DagBuilder::new();
    let root = parse_into(text, &mut builder)?;
    Ok(builder.finish(root))
}

/// Parse into an existing builder, returning the root node. Useful when
/// several formulas should share one DAG arena.
pub fn parse_into(text: &str, builder: &mut DagBuilder) -> Result<NodeId, SyntaxError> {
    let tokens = lex(text)?;
    let end = text.len() + 1;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
        builder,
    };
    let root = parser.implies()?;
    if let Some((col, tok)) = parser.next() {
        return Err(SyntaxError::Parse {
            position: col,
            message: format!("trailing input starting at {tok:?}"),
        });
    }
    Ok(root)
}
