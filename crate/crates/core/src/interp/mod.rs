//! The proof-script language: lexer, parser, printer and interpreter.

pub mod ast;
pub mod exec;
pub mod lexer;
pub mod parser;

pub use ast::{Claim, Command, ConfigCmd, Method, Script, Target, VarRef};
pub use exec::*;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, ParseError};
