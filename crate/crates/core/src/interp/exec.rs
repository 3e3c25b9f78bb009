//! Execution of proof scripts over a tree of configurations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use super::ast::{Claim, Command, ConfigCmd, Method, Script, Target};
use super::parser::{parse, ParseError};
use crate::enumerator::{
    build_constraint_system, BuildOptions, CountFact, CountKind, EnumError, ProofContext, SplitSystem,
};
use crate::gf2::{BitMatrix, BitWord, Code, Multiweight, Partition};
use crate::groups::{group_order, induced_block_action, orbit_sum, verify_automorphism, Permutation};
use crate::lpcert::{
    prove_infeasible, CertStats, CertifyError, ConstraintSystem, FarkasCertificate, RetryPolicy, Row, RowTag, Sense,
};
use crate::model::{BlockPattern, CodeType, Configuration, CountVar, Relation, SideConstraint};
use crate::rules::{
    even_reduction, griesmer, griesmer_evenness, infer_dual_min, kill_configuration, min_weight_realized, refute, Fact,
    FactDatabase, Justification, Refutation, Statement,
};

/// Largest coset enumerated when looking for the new word of a configuration.
const COSET_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("no code type declared")]
    NoType,
    #[error("a code type is already declared")]
    TypeAlreadySet,
    #[error("node {0} is closed")]
    Closed(String),
    #[error("unknown label [{0}]")]
    UnknownLabel(String),
    #[error("label [{0}] is already used")]
    DuplicateLabel(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no open node is compatible with this configuration")]
    NoParent,
    #[error("variable {0} is identically zero at this node")]
    IdenticallyZero(String),
    #[error("cannot prove {what}: {reason}")]
    Unproved { what: String, reason: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("node {node} is not closed; open branches: {open}")]
    NotClosed { node: String, open: String },
    #[error("invalid split: {0}")]
    Split(String),
    #[error("invalid classification: {0}")]
    Classification(String),
    #[error("permutation is not an automorphism of {node}: {detail}")]
    NotAutomorphism { node: String, detail: String },
    #[error("group order is {found}, expected {expected}")]
    GroupOrder { expected: u128, found: u128 },
    #[error("missing premise: {0}")]
    Premise(String),
}

/// Interpreter knobs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExecOptions {
    pub retry: RetryPolicy,
    pub build: BuildOptions,
}

/// How a node relates to its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Base,
    /// One new word whose block pattern is determined by its multiweight
    /// relative to the parent partition. `forced` when a parent fact
    /// guarantees such a word exists.
    Extension {
        witness: Multiweight,
        forced: bool,
    },
    /// Finer partition, same words and constraints.
    Refinement,
    /// Same words, extra side constraints.
    Case {
        added: Vec<SideConstraint>,
    },
    /// Anything else: an unjustified assumption.
    Hypothesis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Open,
    Closed,
    /// Split into complementary cases.
    Resolved(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub label: Option<String>,
    pub parent: Option<usize>,
    pub kind: NodeKind,
    pub config: Configuration,
    pub facts: Vec<CountFact>,
    pub sides: Vec<SideConstraint>,
    pub status: Status,
    pub children: Vec<usize>,
    pub automorphisms: Vec<Permutation>,
}

impl Node {
    pub fn name(&self) -> String {
        match (&self.label, self.parent) {
            (Some(l), _) => format!("[{l}]"),
            (None, None) => "[base]".into(),
            (None, Some(_)) => format!("#{}", self.id),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.status == Status::Closed
    }
}

/// A verified Farkas certificate together with the system it refutes.
#[derive(Debug, Clone, PartialEq)]
pub struct CertRecord {
    pub id: usize,
    pub node: String,
    pub purpose: String,
    pub system: ConstraintSystem,
    pub certificate: FarkasCertificate,
    pub stats: CertStats,
}

/// One line of a proof report.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Fact { node: String, statement: Statement, justification: Justification },
    Axiom { node: String, statement: Statement, reason: String },
    Cert { id: usize, node: String, purpose: String, rows: usize, variables: usize },
    Note(String),
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Fact { node, statement, justification } => write!(f, "FACT {node} {statement} BY {justification}"),
            Entry::Axiom { node, statement, reason } => write!(f, "AXIOM {node} {statement} ({reason})"),
            Entry::Cert { id, node, purpose, rows, variables } => {
                write!(f, "CERT {id} {node} {purpose} rows={rows} vars={variables}")
            }
            Entry::Note(text) => write!(f, "NOTE {text}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandFailure {
    pub index: usize,
    pub command: String,
    pub message: String,
}

impl fmt::Display for CommandFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FAIL {} `{}`: {}", self.index + 1, self.command, self.message)
    }
}

/// Everything a run established.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofReport {
    pub entries: Vec<Entry>,
    pub certificates: Vec<CertRecord>,
    pub failures: Vec<CommandFailure>,
    /// Nonexistence and classification results.
    pub outcomes: Vec<Statement>,
    pub executed: usize,
    pub database: FactDatabase,
}

impl ProofReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn axiom_census(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e, Entry::Axiom { .. })).count()
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| matches!(e, Entry::Axiom { .. }))
    }
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        for x in &self.failures {
            writeln!(f, "{x}")?;
        }
        for o in &self.outcomes {
            writeln!(f, "RESULT {o}")?;
        }
        writeln!(
            f,
            "SUMMARY commands={} failures={} certificates={} axioms={}",
            self.executed,
            self.failures.len(),
            self.certificates.len(),
            self.axiom_census()
        )
    }
}

/// The proof state.
#[derive(Debug, Clone)]
pub struct Interpreter {
    options: ExecOptions,
    db: FactDatabase,
    code_type: Option<CodeType>,
    dual_min: usize,
    nodes: Vec<Node>,
    labels: BTreeMap<String, usize>,
    certificates: Vec<CertRecord>,
    entries: Vec<Entry>,
    used_db_axioms: BTreeSet<usize>,
    outcomes: Vec<Statement>,
    executed: usize,
    failures: Vec<CommandFailure>,
}

fn unproved(what: impl fmt::Display, reason: impl fmt::Display) -> ExecError {
    ExecError::Unproved { what: what.to_string(), reason: reason.to_string() }
}

fn config_err(e: impl fmt::Display) -> ExecError {
    ExecError::Config(e.to_string())
}

fn span_of(m: &BitMatrix) -> BitMatrix {
    m.reduce()
}

/// Whether `v` is `1...10...0` inside every block of `p`.
fn ones_first(v: &BitWord, p: &Partition) -> bool {
    p.blocks().all(|b| {
        let ones = v.weight_in(b.clone());
        b.clone().enumerate().all(|(i, c)| v.get(c) == (i < ones))
    })
}

/// Whether `a` is the only multiweight of `fine` coarsening to its image.
fn coarsening_unique(fine: &Partition, owner: &[usize], coarse_len: usize, a: &Multiweight) -> bool {
    (0..coarse_len).all(|j| {
        let subs: Vec<usize> = (0..fine.len()).filter(|&i| owner[i] == j).collect();
        let total: usize = subs.iter().map(|&i| a.entries()[i]).sum();
        let size: usize = subs.iter().map(|&i| fine.parts()[i]).sum();
        subs.len() <= 1 || total == 0 || total == size
    })
}

impl Interpreter {
    pub fn new(db: FactDatabase, options: ExecOptions) -> Self {
        Self {
            options,
            db,
            code_type: None,
            dual_min: 1,
            nodes: Vec::new(),
            labels: BTreeMap::new(),
            certificates: Vec::new(),
            entries: Vec::new(),
            used_db_axioms: BTreeSet::new(),
            outcomes: Vec::new(),
            executed: 0,
            failures: Vec::new(),
        }
    }

    pub fn code_type(&self) -> Option<&CodeType> {
        self.code_type.as_ref()
    }

    pub fn dual_min(&self) -> usize {
        self.dual_min
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_by_label(&self, label: &str) -> Option<&Node> {
        self.labels.get(label).map(|&i| &self.nodes[i])
    }

    pub fn base(&self) -> Option<&Node> {
        self.nodes.first()
    }

    /// The most recently opened node that is not closed.
    pub fn current(&self) -> Option<usize> {
        self.nodes.iter().rev().find(|n| !n.is_closed()).map(|n| n.id)
    }

    /// Runs every command; stops at the first failure unless
    /// `continue_on_error`.
    pub fn run(&mut self, script: &Script, continue_on_error: bool) {
        for cmd in &script.commands {
            if !self.step(cmd) && !continue_on_error {
                break;
            }
        }
    }

    /// Executes one command and records a failure; returns success.
    pub fn step(&mut self, cmd: &Command) -> bool {
        let index = self.executed;
        self.executed += 1;
        match self.execute(cmd) {
            Ok(()) => true,
            Err(e) => {
                self.failures.push(CommandFailure { index, command: cmd.to_string(), message: e.to_string() });
                false
            }
        }
    }

    pub fn failures(&self) -> &[CommandFailure] {
        &self.failures
    }

    pub fn report(&self) -> ProofReport {
        ProofReport {
            entries: self.entries.clone(),
            certificates: self.certificates.clone(),
            failures: self.failures.clone(),
            outcomes: self.outcomes.clone(),
            executed: self.executed,
            database: self.db.clone(),
        }
    }

    pub fn execute(&mut self, cmd: &Command) -> Result<(), ExecError> {
        match cmd {
            Command::Comment(_) => Ok(()),
            Command::Type(t) => self.exec_type(t),
            Command::InferDualMin(m) => self.exec_infer_dual_min(*m),
            Command::InferFact(c) => self.exec_infer(c),
            Command::Show(c) => self.exec_show(c),
            Command::Config(c) => self.exec_config(c),
            Command::Via { method, target, branches } => self.exec_via(*method, target, branches),
            Command::KillWeights(ws) => self.exec_kill(ws),
            Command::No(t) => self.exec_no(t),
            Command::Automorphism(images) => self.exec_automorphism(images),
            Command::GroupSize(s) => self.exec_group_size(*s),
        }
    }

    fn ty(&self) -> Result<&CodeType, ExecError> {
        self.code_type.as_ref().ok_or(ExecError::NoType)
    }

    fn name(&self, id: usize) -> String {
        self.nodes[id].name()
    }

    fn fact(&mut self, node: usize, statement: Statement, justification: Justification) {
        let node = self.name(node);
        self.entries.push(Entry::Fact { node, statement, justification });
    }

    fn axiom(&mut self, node: usize, statement: Statement, reason: impl Into<String>) {
        let node = self.name(node);
        self.entries.push(Entry::Axiom { node, statement, reason: reason.into() });
    }

    fn note(&mut self, text: String) {
        self.entries.push(Entry::Note(text));
    }

    fn use_db_premises(&mut self, premises: &[usize]) {
        for &p in premises {
            if self.db.facts[p].justification.is_axiom() && self.used_db_axioms.insert(p) {
                let statement = self.db.facts[p].statement.clone();
                self.entries.push(Entry::Axiom {
                    node: "[database]".into(),
                    statement,
                    reason: format!("database fact {p} is assumed"),
                });
            }
        }
    }

    fn open_node(&self, id: usize) -> Result<usize, ExecError> {
        if self.nodes[id].is_closed() {
            return Err(ExecError::Closed(self.name(id)));
        }
        Ok(id)
    }

    fn current_open(&self) -> Result<usize, ExecError> {
        self.ty()?;
        self.current().ok_or_else(|| ExecError::Closed("[base]".into()))
    }

    fn resolve_target(&self, target: &Target) -> Result<usize, ExecError> {
        self.ty()?;
        match target {
            Target::Base => Ok(0),
            Target::Current => self.current().ok_or_else(|| ExecError::Closed("[base]".into())),
            Target::Label(l) => self.labels.get(l).copied().ok_or_else(|| ExecError::UnknownLabel(l.clone())),
        }
    }

    fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = vec![id];
        let mut at = id;
        while let Some(p) = self.nodes[at].parent {
            out.push(p);
            at = p;
        }
        out
    }

    /// Count facts holding at `id`, including `y_w = 0` side constraints.
    fn visible_facts(&self, id: usize) -> Vec<CountFact> {
        let n = self.nodes[id].config.n();
        let mut out = Vec::new();
        for a in self.ancestors(id) {
            out.extend(self.nodes[a].facts.iter().cloned());
        }
        for c in self.visible_sides(id) {
            if let (CountVar::Weight(w), true) = (&c.var, c.is_zero()) {
                out.push(CountFact::weight(n, *w, CountKind::Zero));
            }
        }
        out
    }

    fn visible_sides(&self, id: usize) -> Vec<SideConstraint> {
        let mut out: Vec<SideConstraint> = self.nodes[id].config.constraints.clone();
        for a in self.ancestors(id) {
            for s in &self.nodes[a].sides {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    fn build(&self, id: usize, cfg: &Configuration) -> Result<SplitSystem, ExecError> {
        let ty = self.ty()?;
        let facts = self.visible_facts(id);
        let mut cfg = cfg.clone();
        for s in self.visible_sides(id) {
            if !cfg.constraints.contains(&s) {
                cfg.constraints.push(s);
            }
        }
        let ctx = ProofContext { code_type: ty, dual_min: self.dual_min, facts: &facts, options: self.options.build };
        build_constraint_system(&ctx, &cfg).map_err(|e| match e {
            EnumError::Inconsistent(m) => unproved("constraint system", m),
            e => ExecError::Unsupported(e.to_string()),
        })
    }

    /// Builds the node system, tags and certifies it; returns the
    /// certificate id.
    fn certify(&mut self, id: usize, cs: ConstraintSystem, purpose: String) -> Result<usize, ExecError> {
        match prove_infeasible(&cs, &self.options.retry) {
            Ok(c) => {
                let cid = self.certificates.len();
                let node = self.name(id);
                self.entries.push(Entry::Cert {
                    id: cid,
                    node: node.clone(),
                    purpose: purpose.clone(),
                    rows: cs.rows.len(),
                    variables: cs.num_vars(),
                });
                self.certificates.push(CertRecord {
                    id: cid,
                    node,
                    purpose,
                    system: cs,
                    certificate: c.certificate,
                    stats: c.stats,
                });
                Ok(cid)
            }
            Err(CertifyError::ProvablyFeasible { .. }) => Err(unproved(purpose, "the system is feasible")),
            Err(e) => Err(unproved(purpose, e)),
        }
    }

    fn exec_type(&mut self, t: &CodeType) -> Result<(), ExecError> {
        if self.code_type.is_some() {
            return Err(ExecError::TypeAlreadySet);
        }
        let mut ty = t.clone();
        let (n, k, d) = ty.plain();
        self.code_type = Some(ty.clone());
        self.nodes.push(Node {
            id: 0,
            label: None,
            parent: None,
            kind: NodeKind::Base,
            config: Configuration::base(n),
            facts: Vec::new(),
            sides: Vec::new(),
            status: Status::Open,
            children: Vec::new(),
            automorphisms: Vec::new(),
        });
        if !ty.even && griesmer_evenness(n, k, d) {
            ty.even = true;
            self.code_type = Some(ty.clone());
            self.fact(0, Statement::Even, Justification::rule("griesmer_evenness", vec![]));
        }
        if n < griesmer(k, d) {
            let r = Refutation::Griesmer { n, k, d };
            self.fact(
                0,
                Statement::Contradiction,
                Justification::rule(format!("griesmer:{}", r.to_string().replace(' ', "")), vec![]),
            );
            self.close(0)?;
        }
        Ok(())
    }

    fn exec_infer_dual_min(&mut self, m: usize) -> Result<(), ExecError> {
        let ty = self.ty()?.clone();
        let found = infer_dual_min(&ty, &self.db);
        if found.m >= m {
            let premises = found.premises();
            self.use_db_premises(&premises);
            self.fact(0, Statement::DualMinAtLeast(found.m), Justification::rule("infer_dual_min", premises));
            self.dual_min = self.dual_min.max(found.m);
        } else {
            self.axiom(0, Statement::DualMinAtLeast(m), format!("rules only give dual min >= {}", found.m));
        }
        self.dual_min = self.dual_min.max(m);
        Ok(())
    }

    /// The count fact a claim denotes at a node with partition `p`.
    fn claim_fact(&self, claim: &Claim, p: &Partition) -> Result<CountFact, ExecError> {
        let n = p.n();
        let kind = match (claim.relation, claim.value) {
            (Relation::Eq, 0) => CountKind::Zero,
            (Relation::Ne, 0) | (Relation::Ge, 1) => CountKind::Nonzero,
            _ => return Err(ExecError::Unsupported(format!("claim {claim} is not a zero or nonzero count"))),
        };
        match &claim.var.var {
            CountVar::Weight(w) if *w <= n => Ok(CountFact::weight(n, *w, kind)),
            CountVar::Split(a) if a.fits(p) => {
                Ok(CountFact::split(p.clone(), BTreeSet::from([a.clone()]), kind, false))
            }
            CountVar::Split(a) if a.entries().len() == 1 && a.total() <= n => Ok(CountFact::weight(n, a.total(), kind)),
            CountVar::Split(_) => Err(ExecError::Unsupported(format!("{} does not fit partition {p}", claim.var))),
            _ => Err(ExecError::Unsupported(format!("claim {claim} is not about codeword counts"))),
        }
    }

    /// Variables of `sys` whose counts enter the sum of `fact`.
    fn members(sys: &SplitSystem, fact: &CountFact) -> Vec<Multiweight> {
        let Some(owner) = sys.partition.refines(&fact.partition) else { return Vec::new() };
        sys.variables.iter().filter(|a| !a.is_zero() && fact.covers(&sys.partition, &owner, a)).cloned().collect()
    }

    fn with_row(sys: &SplitSystem, members: &[Multiweight], sense: Sense, rhs: i64, tag: &str) -> ConstraintSystem {
        let coeffs = sys.variables.iter().map(|a| i64::from(members.contains(a))).collect();
        let mut cs = sys.system.clone();
        cs.rows.push(Row { coeffs, sense, rhs, tag: RowTag::new(tag).expect("fixed tags have no whitespace") });
        cs
    }

    fn known(&self, id: usize, fact: &CountFact) -> bool {
        self.visible_facts(id)
            .iter()
            .any(|f| f.partition == fact.partition && f.kind == fact.kind && f.support == fact.support)
    }

    fn exec_infer(&mut self, claim: &Claim) -> Result<(), ExecError> {
        let id = self.current_open()?;
        let ty = self.ty()?.clone();
        let p = self.nodes[id].config.partition.clone();
        let fact = match self.claim_fact(claim, &p) {
            Ok(f) => f,
            Err(_) => {
                self.axiom(id, Statement::Side(claim.to_constraint()), "no rule applies to this claim");
                self.nodes[id].sides.push(claim.to_constraint());
                return Ok(());
            }
        };
        if self.known(id, &fact) {
            self.fact(id, Statement::Count(fact), Justification::rule("known", vec![]));
            return Ok(());
        }
        let facts = self.visible_facts(id);
        let totals = crate::enumerator::admissible_totals(&ty, &facts);
        if let Some(w) = fact.zero_weight() {
            if !totals.contains(&w) {
                self.fact(id, Statement::Count(fact.clone()), Justification::rule("excluded_weight", vec![]));
                self.nodes[id].facts.push(fact);
                return Ok(());
            }
        }
        if fact.kind == CountKind::Nonzero && fact.partition.len() == 1 {
            let w = fact.support.first().map_or(0, Multiweight::total);
            if min_weight_realized(ty.n, ty.k, &totals) == Some(w) {
                self.fact(id, Statement::Count(fact.clone()), Justification::rule("min_weight_realized", vec![]));
                self.nodes[id].facts.push(fact);
                return Ok(());
            }
        }
        let attempt = self.build(id, &self.nodes[id].config.clone()).map(|sys| {
            let members = Self::members(&sys, &fact);
            match fact.kind {
                CountKind::Nonzero => Self::with_row(&sys, &members, Sense::Eq, 0, "goal:zero"),
                CountKind::Zero => Self::with_row(&sys, &members, Sense::Ge, 1, "goal:nonzero"),
            }
        });
        let outcome = match attempt {
            Ok(cs) => self.certify(id, cs, format!("infer:{}", fact.to_string().replace(' ', ""))),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(cid) => self.fact(id, Statement::Count(fact.clone()), Justification::Certificate(cid)),
            Err(e) => self.axiom(id, Statement::Count(fact.clone()), format!("not derived: {e}")),
        }
        self.nodes[id].facts.push(fact);
        Ok(())
    }

    fn exec_show(&mut self, claim: &Claim) -> Result<(), ExecError> {
        let id = self.current_open()?;
        let p = self.nodes[id].config.partition.clone();
        let fact = self.claim_fact(claim, &p)?;
        if fact.kind != CountKind::Nonzero {
            return Err(ExecError::Unsupported("show expects a nonzero claim".into()));
        }
        let cfg = self.nodes[id].config.clone();
        let sys = self.build(id, &cfg)?;
        let members = Self::members(&sys, &fact);
        if members.is_empty() {
            return Err(ExecError::IdenticallyZero(claim.var.to_string()));
        }
        let purpose = format!("show:{}", claim.to_string().replace(' ', ""));
        let cs = Self::with_row(&sys, &members, Sense::Eq, 0, "goal:zero");
        let plain = match self.certify(id, cs, purpose.clone()) {
            Ok(cid) => {
                self.fact(id, Statement::Count(fact.clone()), Justification::Certificate(cid));
                self.nodes[id].facts.push(fact);
                return Ok(());
            }
            Err(e) => e,
        };
        let autos = self.nodes[id].automorphisms.clone();
        let Some(a) = claim.multiweight().filter(|a| a.fits(&p) && !autos.is_empty()) else { return Err(plain) };
        let actions = autos
            .iter()
            .map(|g| induced_block_action(&cfg, g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ExecError::Unsupported(e.to_string()))?;
        let orbit = orbit_sum(a, &actions);
        if orbit.len() == 1 {
            return Err(plain);
        }
        let orbit_fact = CountFact::split(p, orbit, CountKind::Nonzero, true);
        let members = Self::members(&sys, &orbit_fact);
        let cs = Self::with_row(&sys, &members, Sense::Eq, 0, "goal:orbit-zero");
        let cid = self.certify(id, cs, format!("{purpose}:orbit"))?;
        self.fact(id, Statement::Count(orbit_fact.clone()), Justification::Certificate(cid));
        self.nodes[id].facts.push(orbit_fact);
        Ok(())
    }

    fn configuration_of(&self, c: &ConfigCmd) -> Result<Configuration, ExecError> {
        let ty = self.ty()?;
        let cfg = configuration_from(c)?;
        if cfg.n() != ty.n {
            return Err(ExecError::Config(format!(
                "partition {} has length {}, expected {}",
                cfg.partition,
                cfg.n(),
                ty.n
            )));
        }
        Ok(cfg)
    }

    fn compatible(&self, parent: &Node, cfg: &Configuration, listed: bool) -> bool {
        if cfg.partition.refines(&parent.config.partition).is_none() {
            return false;
        }
        let sub = cfg.subcode_matrix();
        let dual = cfg.dual_matrix();
        let inside = |m: &BitMatrix, rows: &BitMatrix| rows.rows().iter().all(|r| m.span_contains(r).unwrap_or(false));
        if !inside(&sub, &parent.config.subcode_matrix()) || !inside(&dual, &parent.config.dual_matrix()) {
            return false;
        }
        !listed || parent.config.constraints.iter().all(|c| cfg.constraints.contains(c))
    }

    /// New words of `cfg` whose shape makes them a valid extension of
    /// `parent`, with their parent multiweights.
    fn witnesses(parent: &Configuration, cfg: &Configuration) -> Vec<Multiweight> {
        let old = parent.subcode_matrix();
        let new = span_of(&cfg.subcode_matrix());
        let Some(v) = new.rows().iter().find(|r| !old.span_contains(r).unwrap_or(true)) else { return Vec::new() };
        if old.nrows() >= usize::BITS as usize || (1usize << old.nrows()) > COSET_CAP {
            return Vec::new();
        }
        let mut out = BTreeSet::new();
        let span = Code::span(&old);
        let _ = span.for_each_codeword(COSET_CAP, |c| {
            let w = c.xor(v);
            if ones_first(&w, &parent.partition) {
                if let Ok(a) = parent.partition.multiweight(&w) {
                    out.insert(a);
                }
            }
        });
        out.into_iter().collect()
    }

    /// Whether a fact visible at `parent` guarantees a word of multiweight
    /// `a` outside the parent span.
    fn forces(&self, parent: usize, a: &Multiweight) -> bool {
        let cfg = &self.nodes[parent].config;
        let p = &cfg.partition;
        let mut span_weights = BTreeSet::new();
        let _ = Code::span(&cfg.subcode_matrix()).for_each_codeword(COSET_CAP, |w| {
            if let Ok(m) = p.multiweight(w) {
                span_weights.insert(m);
            }
        });
        self.visible_facts(parent).iter().filter(|f| f.kind == CountKind::Nonzero).any(|f| {
            let Some(owner) = p.refines(&f.partition) else { return false };
            if !f.covers(p, &owner, a) {
                return false;
            }
            let in_span = span_weights.iter().any(|m| !m.is_zero() && f.covers(p, &owner, m));
            if in_span {
                return false;
            }
            if f.up_to_symmetry {
                f.partition == *p
            } else {
                f.support.len() == 1 && coarsening_unique(p, &owner, f.partition.len(), a)
            }
        })
    }

    fn exec_config(&mut self, c: &ConfigCmd) -> Result<(), ExecError> {
        let current = self.current_open()?;
        if let Some(l) = &c.label {
            if self.labels.contains_key(l) {
                return Err(ExecError::DuplicateLabel(l.clone()));
            }
        }
        let mut cfg = self.configuration_of(c)?;
        let listed = c.constraints.is_some();
        let parent = self
            .ancestors(current)
            .into_iter()
            .find(|&a| self.compatible(&self.nodes[a], &cfg, listed))
            .ok_or(ExecError::NoParent)?;
        for s in &self.nodes[parent].config.constraints {
            if !cfg.constraints.contains(s) {
                cfg.constraints.push(s.clone());
            }
        }
        let pcfg = self.nodes[parent].config.clone();
        let new_dim = cfg.rows.len() - pcfg.rows.len();
        let new_dual = cfg.dual_rows.len() - pcfg.dual_rows.len();
        let added: Vec<SideConstraint> =
            cfg.constraints.iter().filter(|s| !pcfg.constraints.contains(s)).cloned().collect();
        let kind = match (new_dim, new_dual, added.is_empty()) {
            (0, 0, true) => NodeKind::Refinement,
            (0, 0, false) => NodeKind::Case { added },
            (1, 0, true) => {
                let ws = Self::witnesses(&pcfg, &cfg);
                match ws.iter().find(|a| self.forces(parent, a)) {
                    Some(a) => NodeKind::Extension { witness: a.clone(), forced: true },
                    None => match ws.into_iter().next() {
                        Some(a) => NodeKind::Extension { witness: a, forced: false },
                        None => NodeKind::Hypothesis,
                    },
                }
            }
            _ => NodeKind::Hypothesis,
        };
        let id = self.nodes.len();
        self.nodes.push(Node {
            id,
            label: c.label.clone(),
            parent: Some(parent),
            kind: kind.clone(),
            config: cfg,
            facts: Vec::new(),
            sides: Vec::new(),
            status: Status::Open,
            children: Vec::new(),
            automorphisms: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        if let Some(l) = &c.label {
            self.labels.insert(l.clone(), id);
        }
        let pname = self.name(parent);
        match kind {
            NodeKind::Extension { forced: false, witness } => {
                self.note(format!("{} assumes a word of multiweight {witness} at {pname}", self.name(id)))
            }
            NodeKind::Hypothesis => self.note(format!("{} is an unjustified refinement of {pname}", self.name(id))),
            _ => {}
        }
        Ok(())
    }

    /// Marks a node closed and propagates to its parent.
    fn close(&mut self, id: usize) -> Result<(), ExecError> {
        if self.nodes[id].is_closed() {
            return Ok(());
        }
        self.nodes[id].status = Status::Closed;
        let Some(parent) = self.nodes[id].parent else {
            let ty = self.ty()?.clone();
            let premises: Vec<usize> = self.used_db_axioms.iter().copied().collect();
            let statement = Statement::Nonexistence(ty);
            let idx = self
                .db
                .add(Fact { statement: statement.clone(), justification: Justification::rule("split_lp", premises) })
                .map_err(|e| ExecError::Premise(e.to_string()))?;
            self.fact(0, statement.clone(), Justification::rule("closed", vec![idx]));
            self.outcomes.push(statement);
            return Ok(());
        };
        let name = self.name(id);
        match self.nodes[id].kind.clone() {
            NodeKind::Refinement | NodeKind::Extension { forced: true, .. } => {
                self.fact(
                    parent,
                    Statement::Contradiction,
                    Justification::rule(format!("forced_child:{name}"), vec![]),
                );
                self.close(parent)?;
            }
            NodeKind::Extension { witness, forced: false } => {
                let p = self.nodes[parent].config.partition.clone();
                let zero = if p.len() == 1 {
                    CountFact::weight(p.n(), witness.total(), CountKind::Zero)
                } else {
                    CountFact::split(p, BTreeSet::from([witness]), CountKind::Zero, false)
                };
                self.fact(
                    parent,
                    Statement::Count(zero.clone()),
                    Justification::rule(format!("closed_child:{name}"), vec![]),
                );
                self.nodes[parent].facts.push(zero);
                self.check_resolved(parent)?;
            }
            NodeKind::Case { added } => {
                if let [c] = &added[..] {
                    if let Some(neg) = c.negation() {
                        self.fact(
                            parent,
                            Statement::Side(neg.clone()),
                            Justification::rule(format!("closed_case:{name}"), vec![]),
                        );
                        self.nodes[parent].sides.push(neg);
                    }
                }
                self.check_resolved(parent)?;
            }
            NodeKind::Hypothesis | NodeKind::Base => self.check_resolved(parent)?,
        }
        Ok(())
    }

    fn check_resolved(&mut self, id: usize) -> Result<(), ExecError> {
        if let Status::Resolved(branches) = &self.nodes[id].status {
            if branches.iter().all(|&b| self.nodes[b].is_closed()) {
                self.fact(id, Statement::Contradiction, Justification::rule("all_cases_closed", vec![]));
                return self.close(id);
            }
        }
        Ok(())
    }

    fn open_leaves(&self, id: usize, out: &mut Vec<usize>) {
        if self.nodes[id].is_closed() {
            return;
        }
        let open: Vec<usize> =
            self.nodes[id].children.iter().copied().filter(|&c| !self.nodes[c].is_closed()).collect();
        if open.is_empty() {
            out.push(id);
        }
        for c in open {
            self.open_leaves(c, out);
        }
    }

    fn exec_via(&mut self, method: Method, target: &Target, branches: &[String]) -> Result<(), ExecError> {
        let id = self.resolve_target(target)?;
        let branch_ids = branches
            .iter()
            .map(|l| self.labels.get(l).copied().ok_or_else(|| ExecError::UnknownLabel(l.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        match method {
            Method::Lp => {
                if !branches.is_empty() {
                    return Err(ExecError::Unsupported("via lp takes no branches".into()));
                }
                self.open_node(id)?;
                let cfg = self.nodes[id].config.clone();
                let sys = self.build(id, &cfg)?;
                let cid = self.certify(id, sys.system, "via-lp".into())?;
                self.fact(id, Statement::Contradiction, Justification::Certificate(cid));
                self.close(id)
            }
            Method::VariableSplit => {
                self.open_node(id)?;
                let [a, b] = branch_ids[..] else {
                    return Err(ExecError::Split("exactly two branches are required".into()));
                };
                let case = |x: usize| -> Result<SideConstraint, ExecError> {
                    let n = &self.nodes[x];
                    match (&n.kind, n.parent) {
                        (NodeKind::Case { added }, Some(p)) if p == id && added.len() == 1 => Ok(added[0].clone()),
                        _ => Err(ExecError::Split(format!(
                            "{} is not a one-constraint case of {}",
                            n.name(),
                            self.name(id)
                        ))),
                    }
                };
                let (ca, cb) = (case(a)?, case(b)?);
                if !ca.complementary(&cb) {
                    return Err(ExecError::Split(format!("{ca} and {cb} are not complementary")));
                }
                self.nodes[id].status = Status::Resolved(vec![a, b]);
                self.fact(
                    id,
                    Statement::Side(ca.clone()),
                    Justification::rule(format!("case_split:{}", ca.to_string().replace(' ', "")), vec![]),
                );
                self.check_resolved(id)
            }
            Method::Nothing if branches.is_empty() => {
                self.check_resolved(id)?;
                if self.nodes[id].is_closed() {
                    return Ok(());
                }
                let mut leaves = Vec::new();
                self.open_leaves(id, &mut leaves);
                let open = leaves.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(", ");
                Err(ExecError::NotClosed { node: self.name(id), open })
            }
            Method::Nothing => self.classify(id, &branch_ids, branches),
        }
    }

    fn classify(&mut self, id: usize, branch_ids: &[usize], labels: &[String]) -> Result<(), ExecError> {
        self.open_node(id)?;
        let mut leaves = Vec::new();
        self.open_leaves(id, &mut leaves);
        let unnamed: Vec<String> = leaves.iter().filter(|l| !branch_ids.contains(l)).map(|&l| self.name(l)).collect();
        if !unnamed.is_empty() {
            return Err(ExecError::Classification(format!("open branches not listed: {}", unnamed.join(", "))));
        }
        for &b in branch_ids {
            if !self.ancestors(b).contains(&id) {
                return Err(ExecError::Classification(format!("{} is not below {}", self.name(b), self.name(id))));
            }
        }
        let mut flagged = BTreeSet::new();
        for &b in branch_ids {
            let path = self.ancestors(b);
            for &x in path.iter().take_while(|&&x| x != id) {
                let parent = self.nodes[x].parent.expect("only the base has no parent");
                let justified = match &self.nodes[x].kind {
                    NodeKind::Refinement | NodeKind::Extension { forced: true, .. } => true,
                    NodeKind::Case { .. } => matches!(self.nodes[parent].status, Status::Resolved(_)),
                    _ => false,
                };
                if !justified {
                    flagged.insert(x);
                }
            }
        }
        for x in flagged {
            let parent = self.nodes[x].parent.expect("flagged nodes have parents");
            let statement = Statement::Classification(vec![self.name(x).trim_matches(|c| c == '[' || c == ']').into()]);
            self.axiom(
                parent,
                statement,
                format!("configuration {} is assumed for {}", self.name(x), self.name(parent)),
            );
        }
        let statement = Statement::Classification(labels.to_vec());
        self.fact(id, statement.clone(), Justification::rule("classification", vec![]));
        if id == 0 {
            self.outcomes.push(statement);
        }
        Ok(())
    }

    fn exec_kill(&mut self, ws: &[usize]) -> Result<(), ExecError> {
        let id = self.current_open()?;
        let ty = self.ty()?.clone();
        if self.nodes[id].config.partition.len() != 1 {
            return Err(ExecError::Unsupported("kill weights needs a node on the trivial partition".into()));
        }
        for &w in ws {
            let totals = crate::enumerator::admissible_totals(&ty, &self.visible_facts(id));
            let zero = CountFact::weight(ty.n, w, CountKind::Zero);
            if !totals.contains(&w) {
                self.fact(id, Statement::Count(zero), Justification::rule("excluded_weight", vec![]));
                continue;
            }
            let mut cfg =
                kill_configuration(ty.n, w).ok_or_else(|| ExecError::Unsupported(format!("cannot kill weight {w}")))?;
            cfg.constraints = self.nodes[id].config.constraints.clone();
            let sys = self.build(id, &cfg)?;
            let cid = self.certify(id, sys.system, format!("kill:y{w}"))?;
            self.fact(id, Statement::Count(zero.clone()), Justification::Certificate(cid));
            self.nodes[id].facts.push(zero);
        }
        Ok(())
    }

    fn exec_no(&mut self, t: &CodeType) -> Result<(), ExecError> {
        let (n, k, d) = t.plain();
        let statement = Statement::Nonexistence(t.clone());
        if let Some(i) = self.db.find(&statement) {
            self.use_db_premises(&[i]);
            self.fact(0, statement.clone(), Justification::rule("known", vec![i]));
            self.outcomes.push(statement);
            return Ok(());
        }
        let even = CodeType::new(n, k, d, true).map_err(config_err)?;
        let justification = match (even_reduction(n, k, d), self.db.find(&Statement::Nonexistence(even))) {
            (Some(reduced), Some(i)) if &reduced == t => Justification::rule("even_reduction", vec![i]),
            _ => match refute(n, k, d, t.even, &self.db) {
                Some(Refutation::Database { fact }) => {
                    self.use_db_premises(&[fact]);
                    Justification::rule("shorten", vec![fact])
                }
                Some(r) => Justification::rule(format!("refute:{}", r.to_string().replace(' ', "")), vec![]),
                None => return Err(ExecError::Premise(format!("nothing implies {statement}"))),
            },
        };
        self.db
            .add(Fact { statement: statement.clone(), justification: justification.clone() })
            .map_err(|e| ExecError::Premise(e.to_string()))?;
        self.entries.push(Entry::Fact { node: "[database]".into(), statement: statement.clone(), justification });
        self.outcomes.push(statement);
        Ok(())
    }

    fn exec_automorphism(&mut self, images: &[usize]) -> Result<(), ExecError> {
        let id = self.current_open()?;
        let g = Permutation::from_one_based(images).map_err(|e| ExecError::Unsupported(e.to_string()))?;
        let cfg = &self.nodes[id].config;
        if g.degree() != cfg.n() {
            return Err(ExecError::NotAutomorphism {
                node: self.name(id),
                detail: format!("degree {} but length {}", g.degree(), cfg.n()),
            });
        }
        match verify_automorphism(cfg, &g) {
            Ok(true) => {}
            Ok(false) => {
                let sub = cfg.subcode_matrix();
                let image = g.apply_matrix(&sub).map_err(|e| ExecError::Unsupported(e.to_string()))?;
                let both = image.stack(&sub).map(|m| m.rank()).unwrap_or(0);
                let meet = image.rank() + sub.rank() - both;
                return Err(ExecError::NotAutomorphism {
                    node: self.name(id),
                    detail: format!("image of the subcode meets it in dimension {meet} of {}", sub.rank()),
                });
            }
            Err(e) => return Err(ExecError::NotAutomorphism { node: self.name(id), detail: e.to_string() }),
        }
        self.nodes[id].automorphisms.push(g.clone());
        self.note(format!("{} has verified automorphism {g}", self.name(id)));
        Ok(())
    }

    fn exec_group_size(&mut self, expected: u128) -> Result<(), ExecError> {
        let id = self.current_open()?;
        let node = &self.nodes[id];
        let found =
            group_order(&node.automorphisms, node.config.n()).map_err(|e| ExecError::Unsupported(e.to_string()))?;
        if found != expected {
            return Err(ExecError::GroupOrder { expected, found });
        }
        self.note(format!("{} has a verified automorphism group of order {found}", self.name(id)));
        Ok(())
    }
}

/// The configuration a `config` command denotes, constraints included.
pub fn configuration_from(c: &ConfigCmd) -> Result<Configuration, ExecError> {
    let partition = Partition::new(c.partition.clone()).map_err(config_err)?;
    let pats = |rows: &[String]| -> Result<Vec<BlockPattern>, ExecError> {
        rows.iter()
            .map(|r| BlockPattern::parse(r).ok_or_else(|| ExecError::Config(format!("bad pattern {r}"))))
            .collect()
    };
    let rows = pats(&c.rows)?;
    let dual_rows = pats(c.dual_rows.as_deref().unwrap_or(&[]))?;
    let constraints = c.constraints.iter().flatten().map(Claim::to_constraint).collect();
    Configuration::new(partition, rows, dual_rows, constraints).map_err(config_err)
}

/// Parses and runs a script against a fact database.
pub fn run_script(
    text: &str,
    db: FactDatabase,
    options: ExecOptions,
    continue_on_error: bool,
) -> Result<ProofReport, ParseError> {
    let script = parse(text)?;
    let mut interp = Interpreter::new(db, options);
    interp.run(&script, continue_on_error);
    Ok(interp.report())
}
