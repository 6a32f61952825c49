//! Ring contexts: coefficient field, weighted variables and monomial orders.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

pub use crate::scalar::FieldSpec;

use crate::error::Error;
use crate::Result;

/// A monomial order on exponent vectors. Orders compare raw exponents and are
/// independent of the grading weights; `Block` is an elimination order for its
/// front variable set (grevlex within each block, front block first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Eliminates the given variable indices (sorted, deduplicated).
    Block(Vec<usize>),
}

impl MonomialOrder {
    pub fn block(mut front: Vec<usize>) -> MonomialOrder {
        front.sort_unstable();
        front.dedup();
        MonomialOrder::Block(front)
    }

    /// Compares two exponent vectors of equal length.
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex(a, b, &mut (0..a.len())),
            MonomialOrder::Block(front) => {
                let in_front = |i: &usize| front.binary_search(i).is_ok();
                let front_cmp = grevlex(a, b, &mut (0..a.len()).filter(in_front));
                if front_cmp != Ordering::Equal {
                    return front_cmp;
                }
                grevlex(a, b, &mut (0..a.len()).filter(|i| !in_front(i)))
            }
        }
    }
}

/// Graded reverse lexicographic comparison restricted to the given index set.
fn grevlex(a: &[u32], b: &[u32], indices: &mut dyn Iterator<Item = usize>) -> Ordering {
    let indices: Vec<usize> = indices.collect();
    let ta: u64 = indices.iter().map(|&i| a[i] as u64).sum();
    let tb: u64 = indices.iter().map(|&i| b[i] as u64).sum();
    match ta.cmp(&tb) {
        Ordering::Equal => {}
        c => return c,
    }
    for &i in indices.iter().rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            // larger = smaller exponent in the last differing position
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::GrevLex => write!(f, "grevlex"),
            MonomialOrder::Block(front) => write!(f, "block{front:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub weight: i64,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct ContextData {
    field: FieldSpec,
    vars: Vec<Variable>,
    order: MonomialOrder,
    /// Extra parser spellings, e.g. `t^-1` for the Rees variable u.
    aliases: Vec<(String, usize)>,
}

/// An ambient weighted polynomial ring: field, ordered variables with integer
/// grading weights, and the active monomial order. Cheap to clone and share.
#[derive(Debug, Clone)]
pub struct RingContext(Arc<ContextData>);

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for RingContext {}

impl RingContext {
    /// Builds a context. Variable names must be unique and nonempty.
    pub fn new(field: FieldSpec, vars: Vec<(String, i64)>, order: MonomialOrder) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, _) in &vars {
            if name.is_empty() || !seen.insert(name.clone()) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        if let MonomialOrder::Block(front) = &order {
            if front.iter().any(|&i| i >= vars.len()) {
                return Err(Error::UnknownVariable("block order index".into()));
            }
        }
        Ok(RingContext(Arc::new(ContextData {
            field,
            vars: vars
                .into_iter()
                .map(|(name, weight)| Variable { name, weight })
                .collect(),
            order,
            aliases: Vec::new(),
        })))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.0.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.0.order
    }

    pub fn num_vars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.0.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.0.vars[i].name
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.0.vars[i].weight
    }

    pub fn weights(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.vars.iter().map(|v| v.weight)
    }

    /// Resolves a variable name or alias to its index.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0
            .vars
            .iter()
            .position(|v| v.name == name)
            .or_else(|| {
                self.0
                    .aliases
                    .iter()
                    .find(|(alias, _)| alias == name)
                    .map(|(_, i)| *i)
            })
    }

    pub fn aliases(&self) -> &[(String, usize)] {
        &self.0.aliases
    }

    /// Returns a copy of this context carrying an extra parser alias.
    pub fn with_alias(&self, alias: &str, index: usize) -> Self {
        let mut data = ContextData {
            field: self.0.field,
            vars: self.0.vars.clone(),
            order: self.0.order.clone(),
            aliases: self.0.aliases.clone(),
        };
        data.aliases.push((alias.to_string(), index));
        RingContext(Arc::new(data))
    }

    /// Returns a copy with a different active order.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        RingContext(Arc::new(ContextData {
            field: self.0.field,
            vars: self.0.vars.clone(),
            order,
            aliases: self.0.aliases.clone(),
        }))
    }

    /// Context with additional variables appended.
    pub fn extended(&self, extra: Vec<(String, i64)>, order: MonomialOrder) -> Result<Self> {
        let mut vars: Vec<(String, i64)> = self
            .0
            .vars
            .iter()
            .map(|v| (v.name.clone(), v.weight))
            .collect();
        vars.extend(extra);
        RingContext::new(self.0.field, vars, order)
    }

    /// Context keeping only the variables whose indices satisfy `keep`,
    /// in their original order.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool, order: MonomialOrder) -> Self {
        let vars: Vec<(String, i64)> = self
            .0
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, v)| (v.name.clone(), v.weight))
            .collect();
        RingContext::new(self.0.field, vars, order).expect("restricted names stay unique")
    }

    /// A variable name not currently taken, derived from `base` by
    /// appending underscores.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut candidate = base.to_string();
        while self.var_index(&candidate).is_some() {
            candidate.push('_');
        }
        candidate
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.0.field)?;
        for (i, v) in self.0.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", v.name, v.weight)?;
        }
        write!(f, "]")
    }
}

/// An exponent vector aligned with a context's variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, ctx: &RingContext) -> i64 {
        self.0
            .iter()
            .zip(ctx.weights())
            .map(|(&e, w)| e as i64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}
