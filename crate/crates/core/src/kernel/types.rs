use std::fmt;

/// A simple type over the single ground type `o`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Ground,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(domain: SimpleType, codomain: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// Builds `A1 -> ... -> An -> o`.
    pub fn from_args<I>(args: I) -> SimpleType
    where
        I: IntoIterator<Item = SimpleType>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(SimpleType::Ground, |acc, a| SimpleType::arrow(a, acc))
    }

    /// The unique decomposition `A1 -> ... -> An -> o`, returning `[A1, ..., An]`.
    pub fn args(&self) -> Vec<SimpleType> {
        let mut out = Vec::new();
        let mut cur = self;
        while let SimpleType::Arrow(d, c) = cur {
            out.push((**d).clone());
            cur = c;
        }
        out
    }

    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let SimpleType::Arrow(_, c) = cur {
            n += 1;
            cur = c;
        }
        n
    }

    /// Ground has order 1; `A -> B` has order `max(order(A) + 1, order(B))`.
    pub fn order(&self) -> usize {
        match self {
            SimpleType::Ground => 1,
            SimpleType::Arrow(d, c) => (d.order() + 1).max(c.order()),
        }
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, SimpleType::Ground)
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Ground => write!(f, "o"),
            SimpleType::Arrow(d, c) => {
                if d.is_ground() {
                    write!(f, "o->{}", c)
                } else {
                    write!(f, "({})->{}", d, c)
                }
            }
        }
    }
}
