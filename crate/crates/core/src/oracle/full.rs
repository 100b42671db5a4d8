use std::collections::HashMap;

use crate::kernel::{Head, Signature, SimpleType, Term};

use super::{OracleError, Result};

/// A value of the full type hierarchy over the constants: a constant index at
/// `o`, and at `A->B` the image of every element of `A`, listed in the
/// enumeration order of `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunctionTable {
    Ground(u32),
    Fun(Vec<FunctionTable>),
}

impl FunctionTable {
    /// `a`, or `[..]` listing the images in domain order.
    pub fn render(&self, sig: &Signature) -> String {
        match self {
            FunctionTable::Ground(i) => sig.names()[*i as usize].to_string(),
            FunctionTable::Fun(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.render(sig)).collect();
                format!("[{}]", parts.join(" "))
            }
        }
    }
}

/// Sizes and element lists of the full hierarchy, computed on demand under a
/// ceiling on the size of any single type.
pub struct FullModel<'s> {
    sig: &'s Signature,
    limit: usize,
    elements: HashMap<SimpleType, Vec<FunctionTable>>,
}

/// Default ceiling on the number of elements of one type.
pub const MAX_ELEMENTS: usize = 1 << 14;

impl<'s> FullModel<'s> {
    pub fn new(sig: &'s Signature, limit: usize) -> FullModel<'s> {
        FullModel {
            sig,
            limit,
            elements: HashMap::new(),
        }
    }

    pub fn size(&self, ty: &SimpleType) -> Result<usize> {
        let n = match ty {
            SimpleType::Ground => Some(self.sig.len()),
            SimpleType::Arrow(a, b) => {
                let (sa, sb) = (self.size(a)?, self.size(b)?);
                u32::try_from(sa).ok().and_then(|e| sb.checked_pow(e))
            }
        };
        n.filter(|&n| n <= self.limit).ok_or(OracleError::Budget {
            what: "full hierarchy elements",
            limit: self.limit,
        })
    }

    /// Every element of `ty`; at `A->B` in mixed-radix order of the image
    /// indices, first image most significant.
    pub fn elements(&mut self, ty: &SimpleType) -> Result<Vec<FunctionTable>> {
        if let Some(v) = self.elements.get(ty) {
            return Ok(v.clone());
        }
        let out = match ty {
            SimpleType::Ground => (0..self.sig.len() as u32).map(FunctionTable::Ground).collect(),
            SimpleType::Arrow(a, b) => {
                let sa = self.size(a)?;
                self.size(ty)?;
                let cod = self.elements(b)?;
                let mut out = Vec::new();
                let mut idx = vec![0usize; sa];
                loop {
                    out.push(FunctionTable::Fun(idx.iter().map(|&i| cod[i].clone()).collect()));
                    let mut pos = sa;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if idx[pos] < cod.len() {
                            break;
                        }
                        idx[pos] = 0;
                    }
                    if idx.iter().all(|&i| i == 0) {
                        break;
                    }
                }
                out
            }
        };
        self.elements.insert(ty.clone(), out.clone());
        Ok(out)
    }

    /// Position of `v` in [`FullModel::elements`] of `ty`.
    pub fn index(&self, v: &FunctionTable, ty: &SimpleType) -> Result<usize> {
        match (v, ty) {
            (FunctionTable::Ground(i), SimpleType::Ground) => Ok(*i as usize),
            (FunctionTable::Fun(images), SimpleType::Arrow(_, b)) => {
                let sb = self.size(b)?;
                images
                    .iter()
                    .try_fold(0usize, |acc, x| Ok(acc * sb + self.index(x, b)?))
            }
            _ => Err(OracleError::Kernel(crate::kernel::KernelError::Type(
                "value does not match its type".into(),
            ))),
        }
    }

    pub fn eval(&mut self, t: &Term) -> Result<FunctionTable> {
        if !t.is_closed() {
            return Err(OracleError::NotClosed);
        }
        let mut env = Vec::new();
        let mut tys = Vec::new();
        self.node(t, &mut env, &mut tys)
    }

    fn node(
        &mut self,
        t: &Term,
        env: &mut Vec<FunctionTable>,
        tys: &mut Vec<SimpleType>,
    ) -> Result<FunctionTable> {
        self.abstract_from(t, 0, env, tys)
    }

    fn abstract_from(
        &mut self,
        t: &Term,
        j: usize,
        env: &mut Vec<FunctionTable>,
        tys: &mut Vec<SimpleType>,
    ) -> Result<FunctionTable> {
        if j == t.binders().len() {
            return self.body(t, env, tys);
        }
        let ty = &t.binders()[j];
        let mut images = Vec::new();
        for x in self.elements(ty)? {
            env.push(x);
            tys.push(ty.clone());
            let r = self.abstract_from(t, j + 1, env, tys);
            env.pop();
            tys.pop();
            images.push(r?);
        }
        Ok(FunctionTable::Fun(images))
    }

    fn body(
        &mut self,
        t: &Term,
        env: &mut Vec<FunctionTable>,
        tys: &mut Vec<SimpleType>,
    ) -> Result<FunctionTable> {
        let (mut f, mut fty) = match t.head() {
            Head::Var(l) => (env[*l].clone(), tys[*l].clone()),
            Head::Const(c) => {
                let i = self.sig.index_of(c).ok_or_else(|| {
                    OracleError::Kernel(crate::kernel::KernelError::Signature(format!(
                        "constant `{c}` is not in the signature"
                    )))
                })?;
                (FunctionTable::Ground(i as u32), SimpleType::Ground)
            }
            _ => return Err(OracleError::NotClosed),
        };
        for a in t.args() {
            let v = self.node(a, env, tys)?;
            let SimpleType::Arrow(dom, cod) = fty else {
                unreachable!("well-typed application")
            };
            let i = self.index(&v, &dom)?;
            f = match f {
                FunctionTable::Fun(mut images) => images.swap_remove(i),
                FunctionTable::Ground(_) => unreachable!("well-typed application"),
            };
            fty = *cod;
        }
        Ok(f)
    }
}

/// The denotation of a closed term in the full hierarchy over `sig`.
pub fn full_model_eval(t: &Term, sig: &Signature) -> Result<FunctionTable> {
    FullModel::new(sig, MAX_ELEMENTS).eval(t)
}
