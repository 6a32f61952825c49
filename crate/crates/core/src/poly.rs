//! Sparse multivariate polynomials in canonical form.
//!
//! Terms are stored with no zero coefficients and monomials strictly
//! descending in the context's active order, so equal polynomials have
//! identical representations and print identically.

use std::fmt;

use crate::error::Error;
use crate::ring::{Monomial, MonomialOrder, RingContext};
use crate::scalar::Scalar;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: RingContext,
    terms: Vec<(Monomial, Scalar)>,
}

/// Weighted degree of a polynomial; the zero polynomial is homogeneous of
/// every degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(i64),
    ZeroPolynomial,
    Mixed(Vec<i64>),
}

impl Polynomial {
    pub fn zero(ctx: &RingContext) -> Self {
        Polynomial { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &RingContext) -> Self {
        Polynomial::constant(ctx, ctx.field().one())
    }

    pub fn constant(ctx: &RingContext, c: Scalar) -> Self {
        if c.is_zero() {
            return Polynomial::zero(ctx);
        }
        Polynomial {
            ctx: ctx.clone(),
            terms: vec![(Monomial::one(ctx.num_vars()), c)],
        }
    }

    pub fn var(ctx: &RingContext, index: usize) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(ctx.num_vars(), index), ctx.field().one())],
        }
    }

    pub fn monomial(ctx: &RingContext, mono: Monomial, coeff: Scalar) -> Self {
        Polynomial::from_terms(ctx, vec![(mono, coeff)])
    }

    /// Normalizes an arbitrary term list into canonical form: sorts
    /// descending in the active order, merges equal monomials, drops zeros.
    pub fn from_terms(ctx: &RingContext, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        let order = ctx.order().clone();
        terms.sort_by(|a, b| order.cmp(&b.0 .0, &a.0 .0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (mono, coeff) in terms {
            match out.last_mut() {
                Some((last, acc)) if *last == mono => *acc = acc.add(&coeff),
                _ => out.push((mono, coeff)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { ctx: ctx.clone(), terms: out }
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Polynomial::from_terms(&self.ctx, terms))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca.mul(cb)));
            }
        }
        Ok(Polynomial::from_terms(&self.ctx, terms))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    /// Multiplies by the term `c * mono`.
    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        // multiplication by a monomial preserves the term order
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), k.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    /// Leading term under the polynomial's own context order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// Leading coefficient made 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn weighted_degree(&self) -> WeightedDegree {
        if self.terms.is_empty() {
            return WeightedDegree::ZeroPolynomial;
        }
        let mut degrees: Vec<i64> = self
            .terms
            .iter()
            .map(|(m, _)| m.weighted_degree(&self.ctx))
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        if degrees.len() == 1 {
            WeightedDegree::Homogeneous(degrees[0])
        } else {
            WeightedDegree::Mixed(degrees)
        }
    }

    /// True for the zero polynomial and for polynomials all of whose terms
    /// share one weighted degree.
    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.weighted_degree(), WeightedDegree::Mixed(_))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    /// Image of this polynomial under the ring map determined by
    /// `images[i]` for variable `i`; all images must live in `target`.
    pub fn substitute(&self, target: &RingContext, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ctx.num_vars() {
            return Err(Error::ContextMismatch);
        }
        for img in images {
            if img.context() != target {
                return Err(Error::ContextMismatch);
            }
        }
        let mut acc = Polynomial::zero(target);
        for (mono, coeff) in &self.terms {
            let mut term = Polynomial::constant(target, coeff.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Transports a polynomial into a context that contains every variable
    /// actually occurring in it under the same name (weights may differ).
    pub fn transport(&self, target: &RingContext) -> Result<Polynomial> {
        let mut map: Vec<Option<usize>> = vec![None; self.ctx.num_vars()];
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.num_vars()];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let j = match map[i] {
                    Some(j) => j,
                    None => {
                        let name = self.ctx.var_name(i);
                        let j = target
                            .var_index(name)
                            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                        map[i] = Some(j);
                        j
                    }
                };
                e[j] = exp;
            }
            terms.push((Monomial(e), c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Re-expresses the polynomial in a context whose variables are a
    /// superset-free restriction: every variable actually occurring must
    /// exist in `target` by name.
    pub fn restrict(&self, target: &RingContext) -> Result<Polynomial> {
        self.transport(target)
    }
}

/// Division with remainder by a list of divisors under an explicit order.
/// Returns the remainder; no term of the remainder is divisible by any
/// divisor's leading monomial. Deterministic: the first divisor whose
/// leading monomial divides is used. Zero divisors are skipped.
pub(crate) fn reduce(p: &Polynomial, divisors: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let ctx = p.context();
    // pre-sort each divisor once; multiplication by a monomial keeps the
    // term list sorted under any monomial order
    let sorted_divisors: Vec<Vec<(Monomial, Scalar)>> = divisors
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| sorted_terms(d, order))
        .collect();
    let mut work = sorted_terms(p, order);
    let mut remainder: Vec<(Monomial, Scalar)> = Vec::new();
    'outer: while let Some((mono, coeff)) = work.first().cloned() {
        for terms in &sorted_divisors {
            let (lm, lc) = &terms[0];
            if lm.divides(&mono) {
                let q_mono = lm.div_into(&mono);
                let q_coeff = coeff.div(lc);
                let prod: Vec<(Monomial, Scalar)> = terms
                    .iter()
                    .map(|(m, c)| (m.mul(&q_mono), c.mul(&q_coeff)))
                    .collect();
                work = sub_merged(work, prod, order);
                continue 'outer;
            }
        }
        remainder.push((mono, coeff));
        work.remove(0);
    }
    Polynomial::from_terms(ctx, remainder)
}

/// Exact division `p / d`; returns `None` when the remainder is nonzero.
pub(crate) fn exact_div(p: &Polynomial, d: &Polynomial) -> Option<Polynomial> {
    let order = p.context().order().clone();
    let mut work = sorted_terms(p, &order);
    let (lm, lc) = leading_under(d, &order)?;
    let mut quotient: Vec<(Monomial, Scalar)> = Vec::new();
    while let Some((mono, coeff)) = work.first().cloned() {
        if !lm.divides(&mono) {
            return None;
        }
        let q_mono = lm.div_into(&mono);
        let q_coeff = coeff.div(lc);
        let prod = sorted_terms(&d.mul_term(&q_mono, &q_coeff), &order);
        work = sub_merged(work, prod, &order);
        quotient.push((q_mono, q_coeff));
    }
    Some(Polynomial::from_terms(p.context(), quotient))
}

pub(crate) fn sorted_terms(p: &Polynomial, order: &MonomialOrder) -> Vec<(Monomial, Scalar)> {
    let mut terms = p.terms().to_vec();
    terms.sort_by(|a, b| order.cmp(&b.0 .0, &a.0 .0));
    terms
}

pub(crate) fn leading_under<'a>(
    p: &'a Polynomial,
    order: &MonomialOrder,
) -> Option<(&'a Monomial, &'a Scalar)> {
    p.terms()
        .iter()
        .max_by(|a, b| order.cmp(&a.0 .0, &b.0 .0))
        .map(|(m, c)| (m, c))
}

/// `a - b` for term lists sorted descending under `order`.
fn sub_merged(
    a: Vec<(Monomial, Scalar)>,
    b: Vec<(Monomial, Scalar)>,
    order: &MonomialOrder,
) -> Vec<(Monomial, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(ia.next().unwrap()),
            (None, Some(_)) => {
                let (m, c) = ib.next().unwrap();
                out.push((m, c.neg()));
            }
            (Some((ma, _)), Some((mb, _))) => match order.cmp(&ma.0, &mb.0) {
                std::cmp::Ordering::Greater => out.push(ia.next().unwrap()),
                std::cmp::Ordering::Less => {
                    let (m, c) = ib.next().unwrap();
                    out.push((m, c.neg()));
                }
                std::cmp::Ordering::Equal => {
                    let (m, ca) = ia.next().unwrap();
                    let (_, cb) = ib.next().unwrap();
                    let c = ca.sub(&cb);
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            },
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            if mono.is_one() {
                write!(f, "{mag}")?;
            } else {
                let mut first = true;
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                    first = false;
                }
                for (vi, &e) in mono.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    write!(f, "{}", self.ctx.var_name(vi))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn ctx2() -> RingContext {
        RingContext::new(
            FieldSpec::Rational,
            vec![("x".into(), 0), ("y".into(), 0)],
            MonomialOrder::GrevLex,
        )
        .unwrap()
    }

    #[test]
    fn canonical_form_merges_and_drops_zeros() {
        let ctx = ctx2();
        let x = Polynomial::var(&ctx, 0);
        let p = x.add(&x).unwrap().sub(&x).unwrap().sub(&x).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn product_of_sum_and_difference() {
        let ctx = ctx2();
        let x = Polynomial::var(&ctx, 0);
        let y = Polynomial::var(&ctx, 1);
        let p = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn additive_identity() {
        let ctx = ctx2();
        let x = Polynomial::var(&ctx, 0);
        let z = Polynomial::zero(&ctx);
        assert_eq!(x.add(&z).unwrap(), x);
    }

    #[test]
    fn weighted_degree_cases() {
        let ctx = RingContext::new(
            FieldSpec::Rational,
            vec![("x".into(), 0), ("v".into(), 1), ("u".into(), -1)],
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let x = Polynomial::var(&ctx, 0);
        let v = Polynomial::var(&ctx, 1);
        let u = Polynomial::var(&ctx, 2);
        let vvu = v.mul(&v).unwrap().mul(&u).unwrap();
        assert_eq!(vvu.weighted_degree(), WeightedDegree::Homogeneous(1));
        assert_eq!(
            x.add(&v).unwrap().weighted_degree(),
            WeightedDegree::Mixed(vec![0, 1])
        );
        assert_eq!(
            Polynomial::zero(&ctx).weighted_degree(),
            WeightedDegree::ZeroPolynomial
        );
        // degree is additive on homogeneous factors
        let uv = u.mul(&v).unwrap();
        assert_eq!(uv.weighted_degree(), WeightedDegree::Homogeneous(0));
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = ctx2();
        let b = RingContext::new(
            FieldSpec::Rational,
            vec![("x".into(), 0)],
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let p = Polynomial::var(&a, 0);
        let q = Polynomial::var(&b, 0);
        assert!(matches!(p.add(&q), Err(Error::ContextMismatch)));
    }

    #[test]
    fn exact_division() {
        let ctx = ctx2();
        let x = Polynomial::var(&ctx, 0);
        let y = Polynomial::var(&ctx, 1);
        let sum = x.add(&y).unwrap();
        let prod = sum.mul(&sum).unwrap();
        assert_eq!(exact_div(&prod, &sum).unwrap(), sum);
        assert_eq!(exact_div(&x, &y), None);
    }

    #[test]
    fn reduce_by_linear_relation() {
        let ctx = ctx2();
        let x = Polynomial::var(&ctx, 0);
        let y = Polynomial::var(&ctx, 1);
        let x_minus_y = x.sub(&y).unwrap();
        let x2 = x.mul(&x).unwrap();
        let r = reduce(&x2, &[x_minus_y], &MonomialOrder::GrevLex);
        assert_eq!(r.to_string(), "y^2");
    }

    #[test]
    fn display_constant_and_fractions() {
        let ctx = ctx2();
        let half = Polynomial::constant(&ctx, ctx.field().from_fraction(1, 2).unwrap());
        let x = Polynomial::var(&ctx, 0);
        let p = x.mul(&x).unwrap().sub(&half.mul(&x).unwrap()).unwrap();
        assert_eq!(p.to_string(), "x^2 - 1/2*x");
        assert_eq!(half.to_string(), "1/2");
    }
}
