use indexmap::IndexSet;

use crate::ir::{Alternative, HybridProgram, Ident};

/// Free, bound and must-bound variables of a controller, each in order of
/// first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VarSets {
    pub free: IndexSet<Ident>,
    pub bound: IndexSet<Ident>,
    pub must_bound: IndexSet<Ident>,
}

pub fn var_sets(p: &HybridProgram) -> VarSets {
    match p {
        HybridProgram::Assign(a) => {
            let bound: IndexSet<Ident> = std::iter::once(a.target.clone()).collect();
            VarSets {
                free: a.value.vars(),
                must_bound: bound.clone(),
                bound,
            }
        }
        HybridProgram::Seq(a, b) => {
            let va = var_sets(a);
            let vb = var_sets(b);
            let mut free = va.free;
            free.extend(vb.free.into_iter().filter(|x| !va.must_bound.contains(x)));
            let mut bound = va.bound;
            bound.extend(vb.bound);
            let mut must_bound = va.must_bound;
            must_bound.extend(vb.must_bound);
            VarSets {
                free,
                bound,
                must_bound,
            }
        }
        HybridProgram::Choice(c) => {
            let vt = var_sets(&c.then);
            let vo = match &c.otherwise {
                Alternative::Else(q) | Alternative::Default(q) => var_sets(q),
                Alternative::Skip => VarSets::default(),
            };
            let mut free = c.guard.vars();
            free.extend(vt.free);
            free.extend(vo.free);
            let mut bound = vt.bound;
            bound.extend(vo.bound);
            let must_bound = vt
                .must_bound
                .into_iter()
                .filter(|x| vo.must_bound.contains(x))
                .collect();
            VarSets {
                free,
                bound,
                must_bound,
            }
        }
    }
}
