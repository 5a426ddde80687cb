//! Tokens of the `.lctrs` input format.

use std::fmt;

use num_bigint::BigInt;

use crate::diag::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Semi,
    Colon,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Arrow,
    Plus,
    Minus,
    Star,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Neq,
    And,
    Or,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Arrow => "->",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::And => "/\\",
            Tok::Or => "\\/",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            s.push(c);
            self.bump();
        }
        s
    }
}

/// Splits `text` into tokens. Stops at the first unrecognised character.
pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut cur = Cursor { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } };
    while let Some(c) = cur.peek() {
        let pos = cur.pos;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            cur.take_while(|c| c != '\n');
            continue;
        }
        if ident_start(c) {
            let s = cur.take_while(ident_char);
            out.push(Token { tok: Tok::Ident(s), pos });
            continue;
        }
        if c.is_ascii_digit() {
            let s = cur.take_while(|c| c.is_ascii_digit());
            if let Some(c) = cur.peek().filter(|&c| ident_start(c)) {
                return Err(Diagnostic::new(pos, format!("malformed number `{s}{c}`")));
            }
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), pos });
            continue;
        }
        cur.bump();
        let next = cur.peek();
        let (tok, wide) = match (c, next) {
            (';', _) => (Tok::Semi, false),
            (':', _) => (Tok::Colon, false),
            (',', _) => (Tok::Comma, false),
            ('(', _) => (Tok::LParen, false),
            (')', _) => (Tok::RParen, false),
            ('[', _) => (Tok::LBrack, false),
            (']', _) => (Tok::RBrack, false),
            ('-', Some('>')) => (Tok::Arrow, true),
            ('-', _) => (Tok::Minus, false),
            ('+', _) => (Tok::Plus, false),
            ('*', _) => (Tok::Star, false),
            ('<', Some('=')) => (Tok::Le, true),
            ('<', _) => (Tok::Lt, false),
            ('>', Some('=')) => (Tok::Ge, true),
            ('>', _) => (Tok::Gt, false),
            ('=', _) => (Tok::Eq, false),
            ('!', Some('=')) => (Tok::Neq, true),
            ('/', Some('\\')) => (Tok::And, true),
            ('\\', Some('/')) => (Tok::Or, true),
            _ => return Err(Diagnostic::new(pos, format!("unexpected character `{c}`"))),
        };
        if wide {
            cur.bump();
        }
        out.push(Token { tok, pos });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_comments() {
        assert_eq!(
            toks("f x -> y [x >= 0 /\\ y != -1]; # done\n"),
            vec![
                Tok::Ident("f".into()),
                Tok::Ident("x".into()),
                Tok::Arrow,
                Tok::Ident("y".into()),
                Tok::LBrack,
                Tok::Ident("x".into()),
                Tok::Ge,
                Tok::Int(0.into()),
                Tok::And,
                Tok::Ident("y".into()),
                Tok::Neq,
                Tok::Minus,
                Tok::Int(1.into()),
                Tok::RBrack,
                Tok::Semi,
            ]
        );
    }

    #[test]
    fn positions() {
        let ts = lex("a\n  bc").unwrap();
        assert_eq!(ts[1].pos, Pos { line: 2, col: 3 });
        let e = lex("x\n $").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 2 });
        assert!(lex("12ab").is_err());
    }
}
