use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ir::{
    Alternative, BinOp, CmpOp, Formula, GuardedChoice, HpFormula, HybridProgram, Ident, Number, Pos,
    State, StFormula, StStatement, Term,
};

/// Relative weights of the generated constructs.
#[derive(Debug, Clone, PartialEq)]
pub struct GenWeights {
    pub assign: u32,
    pub seq: u32,
    pub if_then_else: u32,
    pub if_then: u32,
    /// Unguarded default alternative; hybrid programs only.
    pub default_choice: u32,
    pub leaf: u32,
    pub neg: u32,
    pub arith: u32,
    pub pow: u32,
    pub atom: u32,
    pub not: u32,
    pub and_or: u32,
    /// XOR in ST, implication and equivalence in hybrid programs.
    pub dialect_connective: u32,
}

impl Default for GenWeights {
    fn default() -> Self {
        GenWeights {
            assign: 3,
            seq: 4,
            if_then_else: 3,
            if_then: 2,
            default_choice: 2,
            leaf: 4,
            neg: 1,
            arith: 4,
            pow: 1,
            atom: 4,
            not: 1,
            and_or: 3,
            dialect_connective: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    /// Maximum statement nesting; depth 1 is a single assignment.
    pub max_depth: u32,
    pub term_depth: u32,
    pub formula_depth: u32,
    pub var_pool: Vec<Ident>,
    pub literal_pool: Vec<f64>,
    pub seed: u64,
    pub weights: GenWeights,
    /// Bound on conditionals per program, which bounds reachable sets.
    pub max_choices: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 5,
            term_depth: 3,
            formula_depth: 2,
            var_pool: ["x", "y", "z", "u", "v", "w"]
                .iter()
                .map(|s| Ident::new(s).expect("valid"))
                .collect(),
            literal_pool: vec![0.0, 1.0, 2.0, 3.0, 0.5, 10.0, 0.1, -1.0, -2.5],
            seed: 0,
            weights: GenWeights::default(),
            max_choices: 12,
        }
    }
}

impl GenConfig {
    pub fn with_seed(&self, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..self.clone()
        }
    }
}

/// Seeded generator; successive calls draw from one random stream.
pub struct Generator<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    choices: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Lang {
    St,
    Hp,
}

impl<'a> Generator<'a> {
    pub fn new(cfg: &'a GenConfig) -> Self {
        assert!(cfg.max_depth >= 1, "max_depth must be at least 1");
        assert!(!cfg.var_pool.is_empty() && !cfg.literal_pool.is_empty(), "pools must be non-empty");
        Generator {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            choices: 0,
        }
    }

    /// Independent stream `stream` of the generator seeded with `seed`.
    pub fn with_stream(cfg: &'a GenConfig, seed: u64, stream: u64) -> Self {
        let mut g = Generator::new(cfg);
        g.rng = ChaCha8Rng::seed_from_u64(seed);
        g.rng.set_stream(stream);
        g
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn pick<T: Copy>(&mut self, options: &[(u32, T)]) -> T {
        let dist = WeightedIndex::new(options.iter().map(|(w, _)| *w)).expect("positive weights");
        options[dist.sample(&mut self.rng)].1
    }

    fn var(&mut self) -> Ident {
        let i = self.rng.gen_range(0..self.cfg.var_pool.len());
        self.cfg.var_pool[i].clone()
    }

    fn literal(&mut self) -> Term {
        let i = self.rng.gen_range(0..self.cfg.literal_pool.len());
        let v = self.cfg.literal_pool[i];
        let n = Term::Num(Number::from_value(v.abs()).expect("finite literal"));
        if v < 0.0 {
            Term::neg(n)
        } else {
            n
        }
    }

    pub fn term(&mut self, depth: u32) -> Term {
        let w = &self.cfg.weights;
        #[derive(Clone, Copy)]
        enum K {
            Leaf,
            Neg,
            Arith,
            Pow,
        }
        let k = if depth <= 1 {
            K::Leaf
        } else {
            self.pick(&[(w.leaf, K::Leaf), (w.neg, K::Neg), (w.arith, K::Arith), (w.pow, K::Pow)])
        };
        match k {
            K::Leaf => {
                if self.rng.gen_bool(0.6) {
                    Term::Var(self.var())
                } else {
                    self.literal()
                }
            }
            K::Neg => Term::neg(self.term(depth - 1)),
            K::Arith => {
                let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][self.rng.gen_range(0..4)];
                Term::bin(op, self.term(depth - 1), self.term(depth - 1))
            }
            K::Pow => Term::bin(BinOp::Pow, self.term(depth - 1), self.literal()),
        }
    }

    fn atom(&mut self) -> Formula {
        let op = [CmpOp::Eq, CmpOp::Ne, CmpOp::Gt, CmpOp::Ge, CmpOp::Lt, CmpOp::Le][self.rng.gen_range(0..6)];
        let d = self.cfg.term_depth.min(2);
        match self.rng.gen_range(0..20) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Cmp(op, self.term(d), self.term(d)),
        }
    }

    fn formula(&mut self, depth: u32, lang: Lang) -> Formula {
        let w = &self.cfg.weights;
        #[derive(Clone, Copy)]
        enum K {
            Atom,
            Not,
            AndOr,
            Dialect,
        }
        let k = if depth <= 1 {
            K::Atom
        } else {
            self.pick(&[(w.atom, K::Atom), (w.not, K::Not), (w.and_or, K::AndOr), (w.dialect_connective, K::Dialect)])
        };
        let sub = |g: &mut Self| g.formula(depth - 1, lang);
        match k {
            K::Atom => self.atom(),
            K::Not => Formula::Not(Box::new(sub(self))),
            K::AndOr => {
                let (l, r) = (sub(self), sub(self));
                if self.rng.gen_bool(0.5) {
                    Formula::And(Box::new(l), Box::new(r))
                } else {
                    Formula::Or(Box::new(l), Box::new(r))
                }
            }
            K::Dialect => {
                let (l, r) = (Box::new(sub(self)), Box::new(sub(self)));
                match lang {
                    Lang::St => Formula::Xor(l, r),
                    Lang::Hp if self.rng.gen_bool(0.5) => Formula::Imply(l, r),
                    Lang::Hp => Formula::Equiv(l, r),
                }
            }
        }
    }

    pub fn st_formula(&mut self, depth: u32) -> StFormula {
        StFormula::new_unchecked(self.formula(depth, Lang::St))
    }

    pub fn hp_formula(&mut self, depth: u32) -> HpFormula {
        HpFormula::new_unchecked(self.formula(depth, Lang::Hp))
    }

    fn assignment(&mut self) -> crate::ir::Assignment {
        let target = self.var();
        crate::ir::Assignment::new(target, self.term(self.cfg.term_depth))
    }

    pub fn st(&mut self, depth: u32) -> StStatement {
        self.choices = 0;
        self.st_rec(depth)
    }

    fn st_rec(&mut self, depth: u32) -> StStatement {
        #[derive(Clone, Copy)]
        enum K {
            Assign,
            Seq,
            Ite,
            It,
        }
        let w = self.cfg.weights.clone();
        let k = if depth <= 1 {
            K::Assign
        } else if self.choices >= self.cfg.max_choices {
            self.pick(&[(w.assign, K::Assign), (w.seq, K::Seq)])
        } else {
            self.pick(&[(w.assign, K::Assign), (w.seq, K::Seq), (w.if_then_else, K::Ite), (w.if_then, K::It)])
        };
        let fd = self.cfg.formula_depth;
        match k {
            K::Assign => StStatement::Assign(self.assignment()),
            K::Seq => {
                let a = self.st_rec(depth - 1);
                let b = self.st_rec(depth - 1);
                StStatement::seq(a, b)
            }
            K::Ite => {
                self.choices += 1;
                let cond = self.st_formula(fd);
                let then = self.st_rec(depth - 1);
                let otherwise = self.st_rec(depth - 1);
                StStatement::if_then_else(cond, then, otherwise)
            }
            K::It => {
                self.choices += 1;
                let cond = self.st_formula(fd);
                let then = self.st_rec(depth - 1);
                StStatement::if_then(cond, then)
            }
        }
    }

    pub fn hp(&mut self, depth: u32) -> HybridProgram {
        self.choices = 0;
        self.hp_rec(depth)
    }

    fn hp_rec(&mut self, depth: u32) -> HybridProgram {
        #[derive(Clone, Copy)]
        enum K {
            Assign,
            Seq,
            Else,
            Skip,
            Default,
        }
        let w = self.cfg.weights.clone();
        let k = if depth <= 1 {
            K::Assign
        } else if self.choices >= self.cfg.max_choices {
            self.pick(&[(w.assign, K::Assign), (w.seq, K::Seq)])
        } else {
            self.pick(&[
                (w.assign, K::Assign),
                (w.seq, K::Seq),
                (w.if_then_else, K::Else),
                (w.if_then, K::Skip),
                (w.default_choice, K::Default),
            ])
        };
        let fd = self.cfg.formula_depth;
        match k {
            K::Assign => HybridProgram::Assign(self.assignment()),
            K::Seq => {
                let a = self.hp_rec(depth - 1);
                let b = self.hp_rec(depth - 1);
                HybridProgram::seq(a, b)
            }
            K::Else | K::Skip | K::Default => {
                self.choices += 1;
                let guard = self.hp_formula(fd);
                let then = Box::new(self.hp_rec(depth - 1));
                let otherwise = match k {
                    K::Else => Alternative::Else(Box::new(self.hp_rec(depth - 1))),
                    K::Skip => Alternative::Skip,
                    _ => Alternative::Default(Box::new(self.hp_rec(depth - 1))),
                };
                HybridProgram::Choice(GuardedChoice {
                    guard,
                    then,
                    otherwise,
                    pos: Pos::default(),
                })
            }
        }
    }

    fn value(&mut self) -> f64 {
        if self.rng.gen_bool(0.5) {
            let i = self.rng.gen_range(0..self.cfg.literal_pool.len());
            let v = self.cfg.literal_pool[i];
            if self.rng.gen_bool(0.5) {
                -v
            } else {
                v
            }
        } else {
            self.rng.gen_range(-10.0..10.0)
        }
    }

    /// A state binding every pool variable.
    pub fn state(&mut self) -> State {
        let mut s = State::new();
        for i in 0..self.cfg.var_pool.len() {
            let v = self.value();
            s.insert(self.cfg.var_pool[i].clone(), v);
        }
        s
    }
}

pub fn gen_term(cfg: &GenConfig) -> Term {
    Generator::new(cfg).term(cfg.term_depth)
}

pub fn gen_st_formula(cfg: &GenConfig) -> StFormula {
    Generator::new(cfg).st_formula(cfg.formula_depth)
}

pub fn gen_hp_formula(cfg: &GenConfig) -> HpFormula {
    Generator::new(cfg).hp_formula(cfg.formula_depth)
}

pub fn gen_st(cfg: &GenConfig) -> StStatement {
    Generator::new(cfg).st(cfg.max_depth)
}

pub fn gen_hp(cfg: &GenConfig) -> HybridProgram {
    Generator::new(cfg).hp(cfg.max_depth)
}
