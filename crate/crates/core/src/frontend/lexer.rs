use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Eq,
    Neq,
    Amp,
    Tilde,
    Wedge,
    Vee,
    Turnstile,
    Arrow,
    Lt,
    Gt,
    Bar,
    Dollar,
    At,
    Plus,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Num(k) => return write!(f, "`{k}`"),
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Amp => "&",
            Tok::Tilde => "~",
            Tok::Wedge => "/\\",
            Tok::Vee => "\\/",
            Tok::Turnstile => "|-",
            Tok::Arrow => "<-",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Bar => "|",
            Tok::Dollar => "$",
            Tok::At => "@",
            Tok::Plus => "+",
            Tok::Eof => return write!(f, "end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits source text into tokens. `//` starts a comment running to the end
/// of the line.
pub fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: l0, col: c0 });
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let k = s.parse().map_err(|_| Error::Syntax { line, col, msg: format!("numeral `{s}` too large") })?;
            col += i - start;
            push(&mut out, Tok::Num(k));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        let two = |a: char, b: char| c == a && next == Some(b);
        let (tok, w) = if two('/', '\\') {
            (Tok::Wedge, 2)
        } else if two('\\', '/') {
            (Tok::Vee, 2)
        } else if two('|', '-') {
            (Tok::Turnstile, 2)
        } else if two('<', '-') {
            (Tok::Arrow, 2)
        } else if two('!', '=') {
            (Tok::Neq, 2)
        } else {
            let t = match c {
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '=' => Tok::Eq,
                '&' => Tok::Amp,
                '~' => Tok::Tilde,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '|' => Tok::Bar,
                '$' => Tok::Dollar,
                '@' => Tok::At,
                '+' => Tok::Plus,
                _ => return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") }),
            };
            (t, 1)
        };
        i += w;
        col += w;
        push(&mut out, tok);
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn connectives_are_single_tokens() {
        assert_eq!(
            toks("~A /\\ B \\/ C |- D"),
            vec![
                Tok::Tilde,
                Tok::Ident("A".into()),
                Tok::Wedge,
                Tok::Ident("B".into()),
                Tok::Vee,
                Tok::Ident("C".into()),
                Tok::Turnstile,
                Tok::Ident("D".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_and_comments() {
        let t = lex("// head\n  x <- 12").unwrap();
        assert_eq!((t[0].line, t[0].col), (2, 3));
        assert_eq!(t[1].tok, Tok::Arrow);
        assert_eq!(t[2].tok, Tok::Num(12));
    }

    #[test]
    fn stray_character_is_positioned() {
        assert_eq!(lex("a\n ?").unwrap_err(), Error::Syntax { line: 2, col: 2, msg: "unexpected character `?`".into() });
    }
}
