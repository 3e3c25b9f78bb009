//! Recursive-descent parser for proof scripts.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::ast::{Claim, Command, ConfigCmd, Method, Script, Target, VarRef};
use super::lexer::{tokenize, Keyword, LexError, Pos, Token, TokenKind};
use crate::gf2::Multiweight;
use crate::model::{CodeType, CountVar, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax { pos: Pos, expected: String, found: String },
    #[error("{pos}: {message}")]
    Invalid { pos: Pos, message: String },
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.at).map(|t| &t.kind)
    }

    fn peek2(&self) -> Option<&TokenKind> {
        self.tokens.get(self.at + 1).map(|t| &t.kind)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().map_or_else(|| "end of input".into(), |t| format!("'{t}'")),
        })
    }

    fn invalid<T>(&self, pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Invalid { pos, message: message.into() })
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            self.error(&format!("'{kind}'"))
        }
    }

    fn keyword(&mut self, k: Keyword) -> Result<(), ParseError> {
        self.expect(TokenKind::Keyword(k))
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(TokenKind::Number(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.error("a number"),
        }
    }

    fn number<T: core::str::FromStr>(&mut self) -> Result<T, ParseError> {
        let pos = self.pos();
        let s = self.digits()?;
        s.parse().or_else(|_| self.invalid(pos, format!("number {s} out of range")))
    }

    fn number_list(&mut self) -> Result<Vec<usize>, ParseError> {
        let mut out = alloc::vec![self.number()?];
        while self.eat(&TokenKind::Comma) {
            out.push(self.number()?);
        }
        Ok(out)
    }

    fn relation(&mut self) -> Result<Relation, ParseError> {
        let r = match self.peek() {
            Some(TokenKind::Eq) => Relation::Eq,
            Some(TokenKind::Ne) => Relation::Ne,
            Some(TokenKind::Ge) => Relation::Ge,
            _ => return self.error("'=', '!=' or '>='"),
        };
        self.at += 1;
        Ok(r)
    }

    fn var(&mut self) -> Result<VarRef, ParseError> {
        let pos = self.pos();
        let v = match self.peek() {
            Some(TokenKind::YVar(s)) => {
                VarRef::new(CountVar::Weight(s[1..].parse().or_else(|_| self.invalid(pos, "weight out of range"))?))
            }
            Some(TokenKind::MuVar(s)) => {
                VarRef::new(CountVar::DualWeight(s[2..].parse().or_else(|_| self.invalid(pos, "weight out of range"))?))
            }
            Some(TokenKind::XVar(s)) => {
                let body = &s[1..];
                if let Some(parts) = body.strip_prefix('_') {
                    let entries = parts
                        .split('_')
                        .map(|p| p.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .or_else(|_| self.invalid(pos, format!("malformed variable {s}")))?;
                    VarRef { var: CountVar::Split(Multiweight(entries)), compact: false }
                } else if body.bytes().all(|b| b.is_ascii_digit()) {
                    let entries = body.bytes().map(|b| (b - b'0') as usize).collect();
                    VarRef { var: CountVar::Split(Multiweight(entries)), compact: true }
                } else {
                    return self.invalid(pos, format!("malformed variable {s}"));
                }
            }
            _ => return self.error("a variable"),
        };
        self.at += 1;
        Ok(v)
    }

    fn claim(&mut self) -> Result<Claim, ParseError> {
        let var = self.var()?;
        let relation = self.relation()?;
        let value = self.number()?;
        Ok(Claim { var, relation, value })
    }

    fn claims_group(&mut self) -> Result<Vec<Claim>, ParseError> {
        self.expect(TokenKind::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&TokenKind::RBrace) {
            return Ok(out);
        }
        loop {
            out.push(self.claim()?);
            if self.eat(&TokenKind::RBrace) {
                return Ok(out);
            }
            self.expect(TokenKind::Comma)?;
        }
    }

    fn pattern_group(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(TokenKind::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&TokenKind::RBrace) {
            return Ok(out);
        }
        loop {
            let pos = self.pos();
            let p = self.digits()?;
            if !p.bytes().all(|b| b == b'0' || b == b'1') {
                return self.invalid(pos, format!("block pattern {p} is not binary"));
            }
            out.push(p);
            if self.eat(&TokenKind::RBrace) {
                return Ok(out);
            }
            self.expect(TokenKind::Comma)?;
        }
    }

    fn code_type(&mut self) -> Result<CodeType, ParseError> {
        let pos = self.pos();
        self.expect(TokenKind::LBracket)?;
        let n = self.number()?;
        self.expect(TokenKind::Comma)?;
        let k = self.number()?;
        self.expect(TokenKind::Comma)?;
        let d = self.number()?;
        let even = self.eat(&TokenKind::Suffix2);
        self.expect(TokenKind::RBracket)?;
        let constraints = if self.peek() == Some(&TokenKind::LBrace) {
            self.claims_group()?.iter().map(Claim::to_constraint).collect()
        } else {
            Vec::new()
        };
        CodeType::with_constraints(n, k, d, even, constraints).or_else(|e| self.invalid(pos, e.to_string()))
    }

    fn bracketed_name(&mut self) -> Result<String, ParseError> {
        self.expect(TokenKind::LBracket)?;
        let name = match self.peek() {
            Some(
                TokenKind::Ident(s)
                | TokenKind::Number(s)
                | TokenKind::XVar(s)
                | TokenKind::YVar(s)
                | TokenKind::MuVar(s),
            ) => s.clone(),
            _ => return self.error("a label"),
        };
        self.at += 1;
        self.expect(TokenKind::RBracket)?;
        Ok(name)
    }

    fn target(&mut self) -> Result<Target, ParseError> {
        match self.peek2() {
            Some(TokenKind::Keyword(Keyword::Current)) => {
                self.at += 2;
                self.expect(TokenKind::RBracket)?;
                Ok(Target::Current)
            }
            Some(TokenKind::Keyword(Keyword::Base)) => {
                self.at += 2;
                self.expect(TokenKind::RBracket)?;
                Ok(Target::Base)
            }
            _ => Ok(Target::Label(self.bracketed_name()?)),
        }
    }

    fn config(&mut self, label: Option<String>) -> Result<ConfigCmd, ParseError> {
        self.keyword(Keyword::Config)?;
        let partition = self.number_list()?;
        self.expect(TokenKind::Colon)?;
        let rows = self.pattern_group()?;
        let mut dual_rows = None;
        let mut constraints = None;
        if self.eat(&TokenKind::Colon) {
            dual_rows = Some(self.pattern_group()?);
            if self.eat(&TokenKind::Colon) {
                constraints = Some(self.claims_group()?);
            }
        }
        Ok(ConfigCmd { label, partition, rows, dual_rows, constraints })
    }

    fn command(&mut self) -> Result<Command, ParseError> {
        let cmd = match self.peek() {
            Some(TokenKind::Comment(text)) => {
                let text = text.clone();
                self.at += 1;
                self.eat(&TokenKind::Semi);
                return Ok(Command::Comment(text));
            }
            Some(TokenKind::LBracket) => {
                let label = self.bracketed_name()?;
                Command::Config(self.config(Some(label))?)
            }
            Some(TokenKind::Keyword(k)) => match k {
                Keyword::Type => {
                    self.at += 1;
                    Command::Type(self.code_type()?)
                }
                Keyword::Config => Command::Config(self.config(None)?),
                Keyword::Infer => {
                    self.at += 1;
                    if self.eat(&TokenKind::Keyword(Keyword::Dual)) {
                        self.keyword(Keyword::Min)?;
                        self.expect(TokenKind::Ge)?;
                        Command::InferDualMin(self.number()?)
                    } else {
                        Command::InferFact(self.claim()?)
                    }
                }
                Keyword::Show => {
                    self.at += 1;
                    Command::Show(self.claim()?)
                }
                Keyword::Via => {
                    self.at += 1;
                    let method = match self.peek() {
                        Some(TokenKind::Keyword(Keyword::Lp)) => {
                            self.at += 1;
                            Method::Lp
                        }
                        Some(TokenKind::Keyword(Keyword::Nothing)) => {
                            self.at += 1;
                            Method::Nothing
                        }
                        Some(TokenKind::Keyword(Keyword::Variable)) => {
                            self.at += 1;
                            self.keyword(Keyword::Split)?;
                            Method::VariableSplit
                        }
                        _ => return self.error("'lp', 'nothing' or 'variable split'"),
                    };
                    let target = self.target()?;
                    self.expect(TokenKind::Eq)?;
                    let mut branches = Vec::new();
                    if self.peek() == Some(&TokenKind::LBracket) {
                        branches.push(self.bracketed_name()?);
                        while self.eat(&TokenKind::Keyword(Keyword::Or)) {
                            branches.push(self.bracketed_name()?);
                        }
                    }
                    Command::Via { method, target, branches }
                }
                Keyword::Kill => {
                    self.at += 1;
                    self.keyword(Keyword::Weights)?;
                    Command::KillWeights(self.number_list()?)
                }
                Keyword::No => {
                    self.at += 1;
                    Command::No(self.code_type()?)
                }
                Keyword::Automorphism => {
                    self.at += 1;
                    Command::Automorphism(self.number_list()?)
                }
                Keyword::Group => {
                    self.at += 1;
                    self.keyword(Keyword::Size)?;
                    self.expect(TokenKind::Eq)?;
                    Command::GroupSize(self.number()?)
                }
                _ => return self.error("a command"),
            },
            _ => return self.error("a command"),
        };
        self.expect(TokenKind::Semi)?;
        Ok(cmd)
    }
}

/// Parses a whole script.
pub fn parse(text: &str) -> Result<Script, ParseError> {
    let tokens = tokenize(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map_or(Pos { line: 1, col: 1 }, |(i, l)| Pos { line: i + 1, col: l.chars().count() + 1 });
    let mut p = Parser { tokens, at: 0, end };
    let mut commands = Vec::new();
    while p.peek().is_some() {
        commands.push(p.command()?);
    }
    Ok(Script { commands })
}
