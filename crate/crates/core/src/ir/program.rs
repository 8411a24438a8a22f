use indexmap::IndexSet;

use super::{HpFormula, Ident, Pos, StFormula, Term};

/// `x := θ`, identical in both languages.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub target: Ident,
    pub value: Term,
    pub pos: Pos,
}

impl Assignment {
    pub fn new(target: Ident, value: Term) -> Self {
        Assignment {
            target,
            value,
            pos: Pos::default(),
        }
    }
}

/// Loop-free, ODE-free controller in the PLC-translatable hybrid program
/// fragment. Tests only occur as the guard of a [`GuardedChoice`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HybridProgram {
    Assign(Assignment),
    Seq(Box<HybridProgram>, Box<HybridProgram>),
    Choice(GuardedChoice),
}

/// `(?φ; α) ∪ …` where the right-hand side is described by [`Alternative`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedChoice {
    pub guard: HpFormula,
    pub then: Box<HybridProgram>,
    pub otherwise: Alternative,
    pub pos: Pos,
}

/// Right branch of a guarded choice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Alternative {
    /// `∪ (?¬φ; β)`: if-then-else.
    Else(Box<HybridProgram>),
    /// `∪ ?¬φ`: if-then.
    Skip,
    /// `∪ β`: unguarded default, executable regardless of `φ`.
    Default(Box<HybridProgram>),
}

impl GuardedChoice {
    pub fn is_complemented(&self) -> bool {
        !matches!(self.otherwise, Alternative::Default(_))
    }
}

impl HybridProgram {
    pub fn assign(target: &Ident, value: Term) -> Self {
        HybridProgram::Assign(Assignment::new(target.clone(), value))
    }

    pub fn seq(first: HybridProgram, second: HybridProgram) -> Self {
        HybridProgram::Seq(Box::new(first), Box::new(second))
    }

    /// Right-folded sequence; `None` for an empty list.
    pub fn sequence(parts: impl IntoIterator<Item = HybridProgram>) -> Option<Self> {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(p) = parts.pop() {
            acc = HybridProgram::seq(p, acc);
        }
        Some(acc)
    }

    pub fn if_then_else(guard: HpFormula, then: HybridProgram, otherwise: HybridProgram) -> Self {
        Self::choice(guard, then, Alternative::Else(Box::new(otherwise)))
    }

    pub fn if_then(guard: HpFormula, then: HybridProgram) -> Self {
        Self::choice(guard, then, Alternative::Skip)
    }

    pub fn with_default(guard: HpFormula, then: HybridProgram, default: HybridProgram) -> Self {
        Self::choice(guard, then, Alternative::Default(Box::new(default)))
    }

    fn choice(guard: HpFormula, then: HybridProgram, otherwise: Alternative) -> Self {
        HybridProgram::Choice(GuardedChoice {
            guard,
            then: Box::new(then),
            otherwise,
            pos: Pos::default(),
        })
    }

    pub fn choice_count(&self) -> usize {
        match self {
            HybridProgram::Assign(_) => 0,
            HybridProgram::Seq(a, b) => a.choice_count() + b.choice_count(),
            HybridProgram::Choice(c) => {
                1 + c.then.choice_count()
                    + match &c.otherwise {
                        Alternative::Else(p) | Alternative::Default(p) => p.choice_count(),
                        Alternative::Skip => 0,
                    }
            }
        }
    }

    /// True when no choice uses an unguarded default branch, i.e. the
    /// program is deterministic.
    pub fn is_fully_complemented(&self) -> bool {
        match self {
            HybridProgram::Assign(_) => true,
            HybridProgram::Seq(a, b) => a.is_fully_complemented() && b.is_fully_complemented(),
            HybridProgram::Choice(c) => {
                c.then.is_fully_complemented()
                    && match &c.otherwise {
                        Alternative::Else(p) => p.is_fully_complemented(),
                        Alternative::Skip => true,
                        Alternative::Default(_) => false,
                    }
            }
        }
    }

    /// Every identifier read or written, in order of first occurrence.
    pub fn vars(&self) -> IndexSet<Ident> {
        let mut out = IndexSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut IndexSet<Ident>) {
        match self {
            HybridProgram::Assign(a) => {
                out.insert(a.target.clone());
                a.value.collect_vars(out);
            }
            HybridProgram::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            HybridProgram::Choice(c) => {
                c.guard.collect_vars(out);
                c.then.collect_vars(out);
                if let Alternative::Else(p) | Alternative::Default(p) = &c.otherwise {
                    p.collect_vars(out);
                }
            }
        }
    }

    pub fn assignments(&self) -> Vec<&Assignment> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a HybridProgram, out: &mut Vec<&'a Assignment>) {
            match p {
                HybridProgram::Assign(a) => out.push(a),
                HybridProgram::Seq(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                HybridProgram::Choice(c) => {
                    walk(&c.then, out);
                    if let Alternative::Else(q) | Alternative::Default(q) = &c.otherwise {
                        walk(q, out);
                    }
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

/// Loop-free ST statement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StStatement {
    Assign(Assignment),
    Seq(Box<StStatement>, Box<StStatement>),
    IfThenElse {
        cond: StFormula,
        then: Box<StStatement>,
        otherwise: Box<StStatement>,
        pos: Pos,
    },
    IfThen {
        cond: StFormula,
        then: Box<StStatement>,
        pos: Pos,
    },
}

impl StStatement {
    pub fn assign(target: &Ident, value: Term) -> Self {
        StStatement::Assign(Assignment::new(target.clone(), value))
    }

    /// Sequential composition, kept right-nested the way statement lists
    /// parse: `seq(seq(a, b), c)` yields `a; (b; c)`.
    pub fn seq(first: StStatement, second: StStatement) -> Self {
        match first {
            StStatement::Seq(a, b) => StStatement::Seq(a, Box::new(StStatement::seq(*b, second))),
            other => StStatement::Seq(Box::new(other), Box::new(second)),
        }
    }

    /// Right-folded statement list; `None` when empty.
    pub fn sequence(parts: impl IntoIterator<Item = StStatement>) -> Option<Self> {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(p) = parts.pop() {
            acc = StStatement::seq(p, acc);
        }
        Some(acc)
    }

    pub fn if_then_else(cond: StFormula, then: StStatement, otherwise: StStatement) -> Self {
        StStatement::IfThenElse {
            cond,
            then: Box::new(then),
            otherwise: Box::new(otherwise),
            pos: Pos::default(),
        }
    }

    pub fn if_then(cond: StFormula, then: StStatement) -> Self {
        StStatement::IfThen {
            cond,
            then: Box::new(then),
            pos: Pos::default(),
        }
    }

    pub fn vars(&self) -> IndexSet<Ident> {
        let mut out = IndexSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut IndexSet<Ident>) {
        match self {
            StStatement::Assign(a) => {
                out.insert(a.target.clone());
                a.value.collect_vars(out);
            }
            StStatement::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            StStatement::IfThenElse {
                cond,
                then,
                otherwise,
                ..
            } => {
                cond.collect_vars(out);
                then.collect_vars(out);
                otherwise.collect_vars(out);
            }
            StStatement::IfThen { cond, then, .. } => {
                cond.collect_vars(out);
                then.collect_vars(out);
            }
        }
    }

    /// Statements of a right-nested sequence spine.
    pub fn flatten(&self) -> Vec<&StStatement> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                StStatement::Seq(a, b) => {
                    out.extend(a.flatten());
                    cur = b;
                }
                other => {
                    out.push(other);
                    return out;
                }
            }
        }
    }
}
