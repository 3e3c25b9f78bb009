//! Tokens of the proof-script language.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Type,
    Config,
    Show,
    Infer,
    Via,
    Lp,
    Nothing,
    Variable,
    Split,
    Kill,
    Weights,
    No,
    Automorphism,
    Group,
    Size,
    Dual,
    Min,
    Current,
    Base,
    Or,
}

impl Keyword {
    const ALL: [(&'static str, Keyword); 20] = [
        ("type", Keyword::Type),
        ("config", Keyword::Config),
        ("show", Keyword::Show),
        ("infer", Keyword::Infer),
        ("via", Keyword::Via),
        ("lp", Keyword::Lp),
        ("nothing", Keyword::Nothing),
        ("variable", Keyword::Variable),
        ("split", Keyword::Split),
        ("kill", Keyword::Kill),
        ("weights", Keyword::Weights),
        ("no", Keyword::No),
        ("automorphism", Keyword::Automorphism),
        ("group", Keyword::Group),
        ("size", Keyword::Size),
        ("dual", Keyword::Dual),
        ("min", Keyword::Min),
        ("current", Keyword::Current),
        ("base", Keyword::Base),
        ("or", Keyword::Or),
    ];

    fn lookup(s: &str) -> Option<Keyword> {
        Self::ALL.iter().find(|(k, _)| *k == s).map(|(_, kw)| *kw)
    }

    pub fn as_str(self) -> &'static str {
        Self::ALL.iter().find(|(_, kw)| *kw == self).map(|(k, _)| *k).expect("every keyword is listed")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword(Keyword),
    /// Digit string, kept verbatim so block patterns keep leading zeros.
    Number(String),
    /// The `_2` evenness suffix directly after a number.
    Suffix2,
    /// `x_10_0` or `x0022222`.
    XVar(String),
    /// `y14`.
    YVar(String),
    /// `mu5`.
    MuVar(String),
    Ident(String),
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Semi,
    Comma,
    Eq,
    Ne,
    Ge,
    /// Text between `(*` and `*)`.
    Comment(String),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => f.write_str(k.as_str()),
            TokenKind::Number(s)
            | TokenKind::XVar(s)
            | TokenKind::YVar(s)
            | TokenKind::MuVar(s)
            | TokenKind::Ident(s) => f.write_str(s),
            TokenKind::Suffix2 => f.write_str("_2"),
            TokenKind::LBracket => f.write_str("["),
            TokenKind::RBracket => f.write_str("]"),
            TokenKind::LBrace => f.write_str("{"),
            TokenKind::RBrace => f.write_str("}"),
            TokenKind::Colon => f.write_str(":"),
            TokenKind::Semi => f.write_str(";"),
            TokenKind::Comma => f.write_str(","),
            TokenKind::Eq => f.write_str("="),
            TokenKind::Ne => f.write_str("!="),
            TokenKind::Ge => f.write_str(">="),
            TokenKind::Comment(_) => f.write_str("comment"),
        }
    }
}

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("{pos}: unexpected character {ch:?}")]
    Unexpected { pos: Pos, ch: char },
    #[error("{pos}: unterminated comment")]
    UnterminatedComment { pos: Pos },
}

struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    rest: &'a str,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        self.rest.starts_with(s)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| f(c)) {
            s.push(c);
            self.bump();
        }
        s
    }
}

fn classify_word(w: String) -> TokenKind {
    if let Some(k) = Keyword::lookup(&w) {
        return TokenKind::Keyword(k);
    }
    let digits_after =
        |prefix: &str| w.strip_prefix(prefix).is_some_and(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit()));
    if digits_after("mu") {
        return TokenKind::MuVar(w);
    }
    if digits_after("y") {
        return TokenKind::YVar(w);
    }
    if w.len() > 1 && w.starts_with('x') && w[1..].bytes().all(|b| b.is_ascii_digit() || b == b'_') && !w.ends_with('_')
    {
        return TokenKind::XVar(w);
    }
    TokenKind::Ident(w)
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { chars: text.chars().peekable(), rest: text, pos: Pos { line: 1, col: 1 } };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let pos = cur.pos;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if cur.starts_with("(*") {
            cur.bump();
            cur.bump();
            let mut depth = 1;
            let mut body = String::new();
            loop {
                if cur.starts_with("*)") {
                    cur.bump();
                    cur.bump();
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                    body.push_str("*)");
                } else if cur.starts_with("(*") {
                    cur.bump();
                    cur.bump();
                    depth += 1;
                    body.push_str("(*");
                } else {
                    match cur.bump() {
                        Some(ch) => body.push(ch),
                        None => return Err(LexError::UnterminatedComment { pos }),
                    }
                }
            }
            out.push(Token { kind: TokenKind::Comment(body), pos });
            continue;
        }
        let kind = if c.is_ascii_digit() {
            let digits = cur.take_while(|c| c.is_ascii_digit());
            out.push(Token { kind: TokenKind::Number(digits), pos });
            if cur.starts_with("_2") && !cur.rest[2..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                let pos = cur.pos;
                cur.bump();
                cur.bump();
                out.push(Token { kind: TokenKind::Suffix2, pos });
            }
            continue;
        } else if c.is_ascii_alphabetic() || c == '_' {
            classify_word(cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_'))
        } else if cur.starts_with("!=") {
            cur.bump();
            cur.bump();
            TokenKind::Ne
        } else if cur.starts_with(">=") {
            cur.bump();
            cur.bump();
            TokenKind::Ge
        } else {
            let kind = match c {
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                '{' => TokenKind::LBrace,
                '}' => TokenKind::RBrace,
                ':' => TokenKind::Colon,
                ';' => TokenKind::Semi,
                ',' => TokenKind::Comma,
                '=' => TokenKind::Eq,
                _ => return Err(LexError::Unexpected { pos, ch: c }),
            };
            cur.bump();
            kind
        };
        out.push(Token { kind, pos });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn kinds(s: &str) -> Vec<TokenKind> {
        tokenize(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn type_command() {
        use TokenKind::*;
        assert_eq!(
            kinds("type [31,13,10_2];"),
            vec![
                Keyword(super::Keyword::Type),
                LBracket,
                Number("31".into()),
                Comma,
                Number("13".into()),
                Comma,
                Number("10".into()),
                Suffix2,
                RBracket,
                Semi
            ]
        );
    }

    #[test]
    fn comments_are_single_tokens() {
        assert_eq!(
            kinds("(* By Griesmer bound. *);"),
            vec![TokenKind::Comment(" By Griesmer bound. ".into()), TokenKind::Semi]
        );
        assert_eq!(kinds("(* a (* b *) c *)"), vec![TokenKind::Comment(" a (* b *) c ".into())]);
        assert!(matches!(tokenize("(* open"), Err(LexError::UnterminatedComment { .. })));
    }

    #[test]
    fn variable_spellings() {
        assert_eq!(
            kinds("x_10_0 x0022222 y14 mu5 a0"),
            vec![
                TokenKind::XVar("x_10_0".into()),
                TokenKind::XVar("x0022222".into()),
                TokenKind::YVar("y14".into()),
                TokenKind::MuVar("mu5".into()),
                TokenKind::Ident("a0".into()),
            ]
        );
    }

    #[test]
    fn relations_and_positions() {
        let toks = tokenize("show x_20 != 0;\n  dual min >= 7").unwrap();
        assert_eq!(toks[2].kind, TokenKind::Ne);
        assert_eq!(toks[5].pos, Pos { line: 2, col: 3 });
        assert_eq!(toks[7].kind, TokenKind::Ge);
        let err = tokenize("type ?").unwrap_err();
        assert_eq!(err.to_string(), "1:6: unexpected character '?'");
    }
}
