//! Abstract syntax of proof scripts and its printer.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::gf2::Multiweight;
use crate::model::{CodeType, CountVar, Relation, SideConstraint};

/// A counting variable together with its spelling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRef {
    pub var: CountVar,
    /// `x0022222` rather than `x_0_0_2_2_2_2_2`.
    pub compact: bool,
}

impl VarRef {
    pub fn new(var: CountVar) -> Self {
        Self { var, compact: false }
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.var {
            CountVar::Split(a) if self.compact && a.entries().iter().all(|&e| e < 10) => {
                f.write_str("x")?;
                a.entries().iter().try_for_each(|e| write!(f, "{e}"))
            }
            v => write!(f, "{v}"),
        }
    }
}

/// `var relation value`, e.g. `y14 != 0` or `x_20 != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Claim {
    pub var: VarRef,
    pub relation: Relation,
    pub value: u64,
}

impl Claim {
    pub fn to_constraint(&self) -> SideConstraint {
        SideConstraint::new(self.var.var.clone(), self.relation, self.value)
    }

    /// The multiweight of an `x` variable.
    pub fn multiweight(&self) -> Option<&Multiweight> {
        match &self.var.var {
            CountVar::Split(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.var, self.relation, self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfigCmd {
    pub label: Option<String>,
    pub partition: Vec<usize>,
    /// Block patterns, one character per block.
    pub rows: Vec<String>,
    pub dual_rows: Option<Vec<String>>,
    pub constraints: Option<Vec<Claim>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Lp,
    Nothing,
    VariableSplit,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target {
    Current,
    Base,
    Label(String),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Current => f.write_str("[current]"),
            Target::Base => f.write_str("[base]"),
            Target::Label(l) => write!(f, "[{l}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command {
    Type(CodeType),
    InferDualMin(usize),
    InferFact(Claim),
    Show(Claim),
    Config(ConfigCmd),
    Via {
        method: Method,
        target: Target,
        branches: Vec<String>,
    },
    KillWeights(Vec<usize>),
    No(CodeType),
    /// 1-based images.
    Automorphism(Vec<usize>),
    GroupSize(u128),
    Comment(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Script {
    pub commands: Vec<Command>,
}

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

fn group<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    if items.is_empty() {
        return f.write_str("{ }");
    }
    f.write_str("{")?;
    join(f, items, sep)?;
    f.write_str("}")
}

impl fmt::Display for ConfigCmd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "[{l}] ")?;
        }
        f.write_str("config ")?;
        join(f, &self.partition, ",")?;
        f.write_str(" : ")?;
        group(f, &self.rows, ",")?;
        if self.dual_rows.is_some() || self.constraints.is_some() {
            f.write_str(" : ")?;
            group(f, self.dual_rows.as_deref().unwrap_or(&[]), ",")?;
        }
        if let Some(c) = &self.constraints {
            f.write_str(" : ")?;
            group(f, c, ", ")?;
        }
        f.write_str(";")
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Type(t) => write!(f, "type {t};"),
            Command::InferDualMin(m) => write!(f, "infer dual min >= {m};"),
            Command::InferFact(c) => write!(f, "infer {c};"),
            Command::Show(c) => write!(f, "show {c};"),
            Command::Config(c) => write!(f, "{c}"),
            Command::Via { method, target, branches } => {
                let m = match method {
                    Method::Lp => "lp",
                    Method::Nothing => "nothing",
                    Method::VariableSplit => "variable split",
                };
                write!(f, "via {m} {target} =")?;
                for (i, b) in branches.iter().enumerate() {
                    write!(f, "{}[{b}]", if i == 0 { " " } else { " or " })?;
                }
                f.write_str(if branches.is_empty() { " ;" } else { ";" })
            }
            Command::KillWeights(ws) => {
                f.write_str("kill weights ")?;
                join(f, ws, ",")?;
                f.write_str(";")
            }
            Command::No(t) => write!(f, "no {t};"),
            Command::Automorphism(images) => {
                f.write_str("automorphism ")?;
                join(f, images, ",")?;
                f.write_str(";")
            }
            Command::GroupSize(s) => write!(f, "group size = {s};"),
            Command::Comment(text) => write!(f, "(*{text}*);"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.commands {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
