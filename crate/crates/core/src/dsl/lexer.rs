use std::fmt;

use super::{ParseError, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Semi,
    Colon,
    Comma,
    Eq,
    Arrow,
    Le,
    Turnstile,
    Implies,
    Bar,
    Amp,
    Bang,
    At,
    Caret,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Eof => "end of input".to_owned(),
            t => format!("`{t}`"),
        }
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Int(s) => s.as_str(),
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::Arrow => "->",
            Tok::Le => "<=",
            Tok::Turnstile => "|-",
            Tok::Implies => "=>",
            Tok::Bar => "|",
            Tok::Amp => "&",
            Tok::Bang => "!",
            Tok::At => "@",
            Tok::Caret => "^",
            Tok::Eof => "<eof>",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        let tok = if is_ident_start(c) {
            let mut s = String::new();
            while chars.peek().is_some_and(|&c| is_ident_char(c)) {
                s.push(bump(&mut chars));
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            Tok::Int(s)
        } else {
            bump(&mut chars);
            let next = chars.peek().copied();
            let mut two = |t: Tok, chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
                bump(chars);
                t
            };
            match (c, next) {
                ('-', Some('>')) => two(Tok::Arrow, &mut chars),
                ('<', Some('=')) => two(Tok::Le, &mut chars),
                ('|', Some('-')) => two(Tok::Turnstile, &mut chars),
                ('=', Some('>')) => two(Tok::Implies, &mut chars),
                ('{', _) => Tok::LBrace,
                ('}', _) => Tok::RBrace,
                ('(', _) => Tok::LParen,
                (')', _) => Tok::RParen,
                ('[', _) => Tok::LBrack,
                (']', _) => Tok::RBrack,
                (';', _) => Tok::Semi,
                (':', _) => Tok::Colon,
                (',', _) => Tok::Comma,
                ('=', _) => Tok::Eq,
                ('|', _) => Tok::Bar,
                ('&', _) => Tok::Amp,
                ('!', _) => Tok::Bang,
                ('@', _) => Tok::At,
                ('^', _) => Tok::Caret,
                _ => {
                    return Err(ParseError {
                        pos,
                        message: format!("unexpected character `{c}`"),
                        expected: vec![],
                    })
                }
            }
        };
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
