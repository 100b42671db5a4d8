use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Head, Signature, SimpleType, Term};

/// Seeded generator of random types and closed canonical terms.
pub struct TermGen {
    rng: ChaCha8Rng,
    sig: Signature,
    /// Nesting depth of heads below which only constants and ground
    /// variables are chosen.
    pub max_depth: usize,
    /// Probability of picking a constant head when a variable is available.
    pub constant_bias: f64,
}

impl TermGen {
    pub fn new(seed: u64, sig: Signature) -> TermGen {
        TermGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sig,
            max_depth: 4,
            constant_bias: 0.25,
        }
    }

    /// A type of order at most `max_order` whose arrows have at most
    /// `max_arity` arguments.
    pub fn ty(&mut self, max_order: usize, max_arity: usize) -> SimpleType {
        if max_order <= 1 {
            return SimpleType::Ground;
        }
        let arity = self.rng.gen_range(1..=max_arity.max(1));
        let args: Vec<SimpleType> = (0..arity)
            .map(|_| self.ty(max_order - 1, max_arity))
            .collect();
        SimpleType::from_args(args)
    }

    pub fn term(&mut self, ty: &SimpleType) -> Term {
        let mut ctx = Vec::new();
        self.node(ty, &mut ctx, self.max_depth)
    }

    fn node(&mut self, ty: &SimpleType, ctx: &mut Vec<SimpleType>, depth: usize) -> Term {
        let binders = ty.args();
        let before = ctx.len();
        ctx.extend(binders.iter().cloned());
        let body = self.body(ctx, depth);
        ctx.truncate(before);
        Term::abstracted(binders, body)
    }

    fn body(&mut self, ctx: &mut Vec<SimpleType>, depth: usize) -> Term {
        let vars: Vec<usize> = (0..ctx.len())
            .filter(|&l| depth > 0 || ctx[l].is_ground())
            .collect();
        if vars.is_empty() || self.rng.gen_bool(self.constant_bias) {
            let c = self.rng.gen_range(0..self.sig.len());
            return Term::ground(Head::Const(self.sig.names()[c].clone()), vec![]);
        }
        let l = vars[self.rng.gen_range(0..vars.len())];
        let args = ctx[l]
            .args()
            .iter()
            .map(|a| self.node(a, ctx, depth.saturating_sub(1)))
            .collect();
        Term::ground(Head::Var(l), args)
    }
}

/// A deterministic corpus of `count` closed terms of at most `max_size`
/// nodes, with types of order at most `max_order` and signatures `{a}` or
/// `{a,b}`.
pub fn corpus(seed: u64, count: usize, max_order: usize, max_size: usize) -> Vec<(Term, Signature)> {
    let sigs = [
        Signature::parse("a").expect("valid signature"),
        Signature::parse("a,b").expect("valid signature"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let sig = sigs[rng.gen_range(0..sigs.len())].clone();
        let mut g = TermGen::new(rng.gen(), sig.clone());
        g.max_depth = rng.gen_range(1..=4);
        let order = rng.gen_range(1..=max_order);
        let ty = g.ty(order, 2);
        let t = g.term(&ty);
        if t.size() <= max_size {
            out.push((t, sig));
        }
    }
    out
}

pub fn random_type(seed: u64, max_order: usize, max_arity: usize) -> SimpleType {
    TermGen::new(seed, Signature::parse("a").expect("valid signature")).ty(max_order, max_arity)
}

pub fn random_closed_term(ty: &SimpleType, sig: &Signature, seed: u64) -> Term {
    TermGen::new(seed, sig.clone()).term(ty)
}
