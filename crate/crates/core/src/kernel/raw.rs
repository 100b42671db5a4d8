use super::{Head, KernelError, Name, Result, SimpleType, Term, TypingEnv};

/// Unrestricted Church-typed lambda term with de Bruijn indices. This is the
/// form terms take before normalization (parser output, explicit applications).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Raw {
    Var(usize),
    Free(Name),
    Const(Name),
    Lam(SimpleType, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
}

impl Raw {
    pub fn app(f: Raw, a: Raw) -> Raw {
        Raw::App(Box::new(f), Box::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Raw>>(f: Raw, args: I) -> Raw {
        args.into_iter().fold(f, Raw::app)
    }

    pub fn lam(ty: SimpleType, body: Raw) -> Raw {
        Raw::Lam(ty, Box::new(body))
    }

    pub fn type_of(&self, env: &TypingEnv) -> Result<SimpleType> {
        self.infer(&mut Vec::new(), env)
    }

    fn infer(&self, ctx: &mut Vec<SimpleType>, env: &TypingEnv) -> Result<SimpleType> {
        match self {
            Raw::Var(i) => ctx
                .len()
                .checked_sub(i + 1)
                .map(|l| ctx[l].clone())
                .ok_or_else(|| KernelError::Unbound(format!("index {i}"))),
            Raw::Free(n) => env
                .get(n)
                .cloned()
                .ok_or_else(|| KernelError::Unbound(n.to_string())),
            Raw::Const(_) => Ok(SimpleType::Ground),
            Raw::Lam(ty, body) => {
                ctx.push(ty.clone());
                let b = body.infer(ctx, env);
                ctx.pop();
                Ok(SimpleType::arrow(ty.clone(), b?))
            }
            Raw::App(f, a) => {
                let ft = f.infer(ctx, env)?;
                let at = a.infer(ctx, env)?;
                match ft {
                    SimpleType::Arrow(d, c) if *d == at => Ok(*c),
                    SimpleType::Arrow(d, _) => Err(KernelError::Type(format!(
                        "function expects {d} but is applied to {at}"
                    ))),
                    SimpleType::Ground => Err(KernelError::Type(format!(
                        "term of type o applied to an argument of type {at}"
                    ))),
                }
            }
        }
    }

    fn shift(&self, by: isize, cutoff: usize) -> Raw {
        match self {
            Raw::Var(i) if *i >= cutoff => Raw::Var((*i as isize + by) as usize),
            Raw::Lam(ty, b) => Raw::lam(ty.clone(), b.shift(by, cutoff + 1)),
            Raw::App(f, a) => Raw::app(f.shift(by, cutoff), a.shift(by, cutoff)),
            other => other.clone(),
        }
    }

    /// `self[s/j]`, with indices above `j` left untouched.
    fn subst(&self, j: usize, s: &Raw) -> Raw {
        match self {
            Raw::Var(i) if *i == j => s.shift(j as isize, 0),
            Raw::Lam(ty, b) => Raw::lam(ty.clone(), b.subst(j + 1, s)),
            Raw::App(f, a) => Raw::app(f.subst(j, s), a.subst(j, s)),
            other => other.clone(),
        }
    }

    fn contract(body: &Raw, arg: &Raw) -> Raw {
        body.subst(0, &arg.shift(1, 0)).shift(-1, 0)
    }

    /// One leftmost-outermost reduction step.
    fn step(&self) -> Option<Raw> {
        match self {
            Raw::App(f, a) => {
                if let Raw::Lam(_, body) = &**f {
                    return Some(Raw::contract(body, a));
                }
                if let Some(f2) = f.step() {
                    return Some(Raw::App(Box::new(f2), a.clone()));
                }
                a.step().map(|a2| Raw::App(f.clone(), Box::new(a2)))
            }
            Raw::Lam(ty, b) => b.step().map(|b2| Raw::lam(ty.clone(), b2)),
            _ => None,
        }
    }

    pub fn is_beta_normal(&self) -> bool {
        match self {
            Raw::App(f, a) => !matches!(**f, Raw::Lam(..)) && f.is_beta_normal() && a.is_beta_normal(),
            Raw::Lam(_, b) => b.is_beta_normal(),
            _ => true,
        }
    }

    /// Typechecks, β-normalizes and η-expands.
    pub fn canonical(&self, env: &TypingEnv) -> Result<Term> {
        self.type_of(env)?;
        eta_long(&beta_normalize(self), env)
    }
}

/// The β-normal form by leftmost-outermost reduction. Terminates on well-typed
/// input.
pub fn beta_normalize(t: &Raw) -> Raw {
    let mut cur = t.clone();
    while let Some(next) = cur.step() {
        cur = next;
    }
    cur
}

/// η-long form of a β-normal term.
pub fn eta_long(t: &Raw, env: &TypingEnv) -> Result<Term> {
    if !t.is_beta_normal() {
        return Err(KernelError::NotNormal);
    }
    let ty = t.type_of(env)?;
    let mut st = Eta {
        env,
        levels: Vec::new(),
        types: Vec::new(),
    };
    st.node(t, &ty)
}

struct Eta<'a> {
    env: &'a TypingEnv,
    /// level of each raw binder in scope, innermost last
    levels: Vec<usize>,
    /// type of each level
    types: Vec<SimpleType>,
}

impl Eta<'_> {
    fn node(&mut self, t: &Raw, ty: &SimpleType) -> Result<Term> {
        let wanted = ty.args();
        let mut cur = t;
        let mut peeled = 0;
        while let Raw::Lam(bty, body) = cur {
            self.levels.push(self.types.len());
            self.types.push(bty.clone());
            peeled += 1;
            cur = body;
        }
        // fresh η binders, not visible to the raw term
        let first_eta = self.types.len();
        for extra in &wanted[peeled..] {
            self.types.push(extra.clone());
        }
        let depth = self.types.len();

        let mut spine = Vec::new();
        let mut head = cur;
        while let Raw::App(f, a) = head {
            spine.push(&**a);
            head = f;
        }
        spine.reverse();
        let (head, head_ty) = match head {
            Raw::Var(i) => {
                let l = self.levels[self.levels.len() - 1 - i];
                (Head::Var(l), self.types[l].clone())
            }
            Raw::Free(n) => (
                Head::Free(n.clone()),
                self.env
                    .get(n)
                    .cloned()
                    .ok_or_else(|| KernelError::Unbound(n.to_string()))?,
            ),
            Raw::Const(c) => (Head::Const(c.clone()), SimpleType::Ground),
            _ => return Err(KernelError::NotNormal),
        };
        let arg_tys = head_ty.args();
        let mut args = Vec::with_capacity(arg_tys.len());
        for (a, aty) in spine.iter().zip(&arg_tys) {
            args.push(self.node(a, aty)?);
        }
        for (j, extra) in wanted[peeled..].iter().enumerate() {
            args.push(Term::eta_var(first_eta + j, extra, depth));
        }
        self.types.truncate(depth - wanted.len());
        self.levels.truncate(self.levels.len() - peeled);
        Ok(Term::new(wanted, head, args))
    }
}

impl Term {
    /// The same term as a raw term. Holes become free names `#hole<k>`.
    pub fn to_raw(&self) -> Raw {
        self.to_raw_at(0)
    }

    /// For a node whose binders start at level `depth`.
    pub fn to_raw_at(&self, depth: usize) -> Raw {
        let inner = depth + self.binders.len();
        let head = match &self.head {
            Head::Var(l) => Raw::Var(inner - 1 - l),
            Head::Free(n) => Raw::Free(n.clone()),
            Head::Const(c) => Raw::Const(c.clone()),
            Head::Hole(k) => Raw::Free(Name::from(format!("#hole{k}"))),
        };
        let body = Raw::apps(head, self.args.iter().map(|a| a.to_raw_at(inner)));
        self.binders
            .iter()
            .rev()
            .fold(body, |acc, ty| Raw::lam(ty.clone(), acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_raw, parse_type, print_term, Signature};

    fn sig() -> Signature {
        Signature::parse("a,b").unwrap()
    }

    fn norm(text: &str) -> String {
        let r = parse_raw(text, &sig(), &TypingEnv::new()).unwrap();
        print_term(&r.canonical(&TypingEnv::new()).unwrap())
    }

    #[test]
    fn beta_examples() {
        assert_eq!(norm("(\\x:o. x) a"), "a");
        assert_eq!(norm("(\\f:o->o. \\x:o. f (f x)) (\\y:o. a) b"), "a");
        let r = parse_raw("\\y:o. y", &sig(), &TypingEnv::new()).unwrap();
        assert_eq!(beta_normalize(&r), r);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(norm("\\y:o->o. y"), "\\y0:o->o. \\y1:o. y0 y1");
        assert_eq!(norm("a"), "a");
        assert_eq!(
            norm("\\y1:(o->o)->o. y1"),
            "\\y0:(o->o)->o. \\y1:o->o. y0 (\\y2:o. y1 y2)"
        );
        let raw = parse_raw("(\\x:o. x) a", &sig(), &TypingEnv::new()).unwrap();
        assert_eq!(eta_long(&raw, &TypingEnv::new()), Err(KernelError::NotNormal));
    }

    #[test]
    fn raw_typing_errors() {
        let env = TypingEnv::new();
        let r = Raw::app(Raw::Const("a".into()), Raw::Const("b".into()));
        assert!(matches!(r.type_of(&env), Err(KernelError::Type(_))));
        let f = Raw::lam(SimpleType::Ground, Raw::Var(0));
        let g = Raw::lam(SimpleType::Ground, Raw::Var(0));
        assert!(Raw::app(f, g).type_of(&env).is_err());
        assert_eq!(
            parse_raw("\\x:o->o. x a", &sig(), &env).unwrap().type_of(&env).unwrap(),
            parse_type("(o->o)->o").unwrap()
        );
    }

    #[test]
    fn to_raw_round_trip() {
        let t = crate::kernel::parse_term(
            "\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 (y1 (\\w:o. z)))",
            &sig(),
        )
        .unwrap();
        assert_eq!(t.to_raw().canonical(&TypingEnv::new()).unwrap(), t);
    }
}
