//! Ideal calculus on top of a deterministic Buchberger kernel.
//!
//! Gröbner bases are reduced (monic, autoreduced) and therefore unique per
//! (ideal, order); bases are cached per order behind a mutex so ideals can be
//! shared across threads. Ideal equality means equality of reduced bases
//! under grevlex.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::Error;
use crate::poly::{exact_div, leading_under, reduce, Polynomial};
use crate::ring::{Monomial, MonomialOrder, RingContext};
use crate::Result;

/// A reduced Gröbner basis: monic, autoreduced, sorted ascending by leading
/// monomial under its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGB {
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    leading: Vec<Monomial>,
}

impl ReducedGB {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// True when the basis is `{1}`, i.e. the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    /// A monomial is standard when no basis leading monomial divides it.
    pub fn is_standard(&self, mono: &Monomial) -> bool {
        !self.leading.iter().any(|lm| lm.divides(mono))
    }
}

/// An ideal given by generators, with cached reduced Gröbner bases.
#[derive(Debug, Clone)]
pub struct Ideal {
    ctx: RingContext,
    gens: Vec<Polynomial>,
    cache: Arc<Mutex<std::collections::BTreeMap<MonomialOrder, Arc<ReducedGB>>>>,
}

impl Ideal {
    /// Builds an ideal; zero generators are dropped.
    pub fn new(ctx: &RingContext, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if g.context() != ctx {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(Ideal {
            ctx: ctx.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Arc::new(Mutex::new(std::collections::BTreeMap::new())),
        })
    }

    pub fn zero(ctx: &RingContext) -> Self {
        Ideal::new(ctx, Vec::new()).expect("no generators")
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// The reduced Gröbner basis under `order`, computed once and cached.
    pub fn groebner(&self, order: &MonomialOrder) -> Arc<ReducedGB> {
        {
            let cache = self.cache.lock().unwrap();
            if let Some(gb) = cache.get(order) {
                return gb.clone();
            }
        }
        let gb = Arc::new(buchberger(&self.gens, order));
        let mut cache = self.cache.lock().unwrap();
        cache.entry(order.clone()).or_insert(gb).clone()
    }

    /// Unique remainder of `p` modulo the reduced basis under `order`.
    pub fn normal_form(&self, p: &Polynomial, order: &MonomialOrder) -> Result<Polynomial> {
        if p.context() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        let gb = self.groebner(order);
        Ok(reduce(p, gb.basis(), order))
    }

    /// Membership test: `p ∈ I` iff the grevlex normal form vanishes.
    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p, &MonomialOrder::GrevLex)?.is_zero())
    }

    /// Ideal equality: identical reduced grevlex bases.
    pub fn equals(&self, other: &Ideal) -> bool {
        self.ctx == other.ctx
            && self.groebner(&MonomialOrder::GrevLex).basis()
                == other.groebner(&MonomialOrder::GrevLex).basis()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.groebner(&MonomialOrder::GrevLex).is_unit()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ctx, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b)?);
            }
        }
        Ideal::new(&self.ctx, gens)
    }

    /// n-th power; the zeroth power is the unit ideal.
    pub fn power(&self, n: u32) -> Ideal {
        let mut acc = Ideal::new(&self.ctx, vec![Polynomial::one(&self.ctx)]).unwrap();
        for _ in 0..n {
            acc = acc.product(self).expect("same context");
        }
        acc
    }

    /// Intersection via the auxiliary-variable construction:
    /// `I ∩ J = (tI + (1-t)J) ∩ k[x̄]`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.gens.is_empty() || other.gens.is_empty() {
            return Ok(Ideal::zero(&self.ctx));
        }
        let aux_name = self.ctx.fresh_name("t_aux");
        let n = self.ctx.num_vars();
        let ext = self
            .ctx
            .extended(vec![(aux_name, 0)], MonomialOrder::block(vec![n]))?;
        let t = Polynomial::var(&ext, n);
        let one_minus_t = Polynomial::one(&ext).sub(&t)?;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(g.transport(&ext)?.mul(&t)?);
        }
        for h in &other.gens {
            gens.push(h.transport(&ext)?.mul(&one_minus_t)?);
        }
        let ext_ideal = Ideal::new(&ext, gens)?;
        let gb = ext_ideal.groebner(ext.order());
        let kept: Vec<Polynomial> = gb
            .basis()
            .iter()
            .filter(|p| p.terms().iter().all(|(m, _)| m.0[n] == 0))
            .map(|p| p.restrict(&self.ctx))
            .collect::<Result<_>>()?;
        Ideal::new(&self.ctx, kept)
    }

    /// Colon ideal `I : g` for a single nonzero element, via
    /// `I ∩ (g) = g·(I : g)`.
    pub fn colon_element(&self, g: &Polynomial) -> Result<Ideal> {
        if g.context() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        if g.is_zero() {
            return Err(Error::DivisionByZeroGenerator);
        }
        let principal = Ideal::new(&self.ctx, vec![g.clone()])?;
        let meet = self.intersection(&principal)?;
        let gens: Vec<Polynomial> = meet
            .generators()
            .iter()
            .map(|p| exact_div(p, g).expect("intersection generators are multiples of g"))
            .collect();
        Ideal::new(&self.ctx, gens)
    }

    /// Quotient `I : J = ∩_g (I : g)` over the nonzero generators of `J`.
    pub fn quotient(&self, other: &Ideal) -> Result<Ideal> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let nonzero: Vec<&Polynomial> = other.gens.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::DivisionByZeroGenerator);
        }
        let mut acc: Option<Ideal> = None;
        for g in nonzero {
            let part = self.colon_element(g)?;
            acc = Some(match acc {
                None => part,
                Some(prev) => prev.intersection(&part)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// Saturation `I : f^∞` by iterated colon ideals. Returns the fixed
    /// point together with the number of strictly enlarging colon steps
    /// (0 when `I` is already saturated).
    pub fn saturation(&self, f: &Polynomial) -> Result<(Ideal, u32)> {
        if f.is_zero() {
            return Err(Error::DivisionByZeroGenerator);
        }
        let mut current = self.clone();
        let mut steps = 0u32;
        loop {
            let next = current.colon_element(f)?;
            if next.equals(&current) {
                return Ok((current, steps));
            }
            current = next;
            steps += 1;
        }
    }

    /// `I ∩ k[remaining variables]` via a block-elimination basis; the result
    /// lives in the restricted context.
    pub fn eliminate(&self, vars: &BTreeSet<usize>) -> Result<Ideal> {
        for &i in vars {
            if i >= self.ctx.num_vars() {
                return Err(Error::UnknownVariable(format!("#{i}")));
            }
        }
        let order = MonomialOrder::block(vars.iter().copied().collect());
        let gb = self.groebner(&order);
        let keep_ctx = restricted_order_ctx(&self.ctx, vars);
        let kept: Vec<Polynomial> = gb
            .basis()
            .iter()
            .filter(|p| {
                p.terms()
                    .iter()
                    .all(|(m, _)| vars.iter().all(|&i| m.0[i] == 0))
            })
            .map(|p| p.restrict(&keep_ctx))
            .collect::<Result<_>>()?;
        Ideal::new(&keep_ctx, kept)
    }
}

fn restricted_order_ctx(ctx: &RingContext, removed: &BTreeSet<usize>) -> RingContext {
    let order = match ctx.order() {
        MonomialOrder::Block(_) => MonomialOrder::GrevLex,
        o => o.clone(),
    };
    ctx.restricted(|i| !removed.contains(&i), order)
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for Ideal {}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Kernel of the ring map `source → target_ambient/target_ideal` determined
/// by `images` (one per source variable), computed by eliminating the target
/// variables from the graph ideal.
pub fn map_kernel(
    source: &RingContext,
    images: &[Polynomial],
    target_ideal: &Ideal,
) -> Result<Ideal> {
    if images.len() != source.num_vars() {
        return Err(Error::ContextMismatch);
    }
    let target_ctx = target_ideal.context();
    if source.field() != target_ctx.field() {
        return Err(Error::ContextMismatch);
    }
    for img in images {
        if img.context() != target_ctx {
            return Err(Error::ContextMismatch);
        }
    }
    let nt = target_ctx.num_vars();
    // combined context: target variables first, then (freshened) source copies
    let mut vars: Vec<(String, i64)> = target_ctx
        .vars()
        .iter()
        .map(|v| (v.name.clone(), v.weight))
        .collect();
    let mut taken: BTreeSet<String> = vars.iter().map(|(n, _)| n.clone()).collect();
    let mut source_positions = Vec::new();
    for (i, v) in source.vars().iter().enumerate() {
        let mut name = v.name.clone();
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        source_positions.push(vars.len());
        let weight = match images[i].weighted_degree() {
            crate::poly::WeightedDegree::Homogeneous(d) => d,
            _ => 0,
        };
        vars.push((name, weight));
    }
    let front: Vec<usize> = (0..nt).collect();
    let combined = RingContext::new(*source.field(), vars, MonomialOrder::block(front))?;
    let mut gens: Vec<Polynomial> = Vec::new();
    for g in target_ideal.generators() {
        gens.push(g.transport(&combined)?);
    }
    for (i, img) in images.iter().enumerate() {
        let xi = Polynomial::var(&combined, source_positions[i]);
        gens.push(xi.sub(&img.transport(&combined)?)?);
    }
    let graph = Ideal::new(&combined, gens)?;
    let gb = graph.groebner(combined.order());
    let kept: Vec<Polynomial> = gb
        .basis()
        .iter()
        .filter(|p| {
            p.terms()
                .iter()
                .all(|(m, _)| m.0[..nt].iter().all(|&e| e == 0))
        })
        .map(|p| {
            // re-express in the source context by position
            let terms = p
                .terms()
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0u32; source.num_vars()];
                    for (si, &pos) in source_positions.iter().enumerate() {
                        e[si] = m.0[pos];
                    }
                    (Monomial(e), c.clone())
                })
                .collect();
            Polynomial::from_terms(source, terms)
        })
        .collect();
    Ideal::new(source, kept)
}

/// Outcome of the iterated-colon regular sequence test.
#[derive(Debug, Clone)]
pub struct RegularSequenceReport {
    pub regular: bool,
    /// 1-based index of the first failing element, when not regular.
    pub failing_index: Option<usize>,
    /// An element of the failing colon ideal outside the base ideal.
    pub witness: Option<Polynomial>,
    /// Whether `base + (sequence)` is a proper ideal.
    pub proper: bool,
}

/// Tests whether `seq` is a regular sequence modulo `base`, in the given
/// order: for each i, `((base + (f₁..fᵢ)) : f_{i+1}) = base + (f₁..fᵢ)`,
/// and the full sum stays proper.
pub fn regular_sequence_test(seq: &[Polynomial], base: &Ideal) -> Result<RegularSequenceReport> {
    let ctx = base.context().clone();
    for f in seq {
        if f.context() != &ctx {
            return Err(Error::ContextMismatch);
        }
    }
    let mut current = base.clone();
    for (i, f) in seq.iter().enumerate() {
        if f.is_zero() {
            return Ok(RegularSequenceReport {
                regular: false,
                failing_index: Some(i + 1),
                witness: Some(Polynomial::one(&ctx)),
                proper: true,
            });
        }
        let colon = current.colon_element(f)?;
        if !colon.equals(&current) {
            let witness = colon
                .groebner(&MonomialOrder::GrevLex)
                .basis()
                .iter()
                .find_map(|g| {
                    let nf = current.normal_form(g, &MonomialOrder::GrevLex).ok()?;
                    (!nf.is_zero()).then_some(g.clone())
                });
            return Ok(RegularSequenceReport {
                regular: false,
                failing_index: Some(i + 1),
                witness,
                proper: true,
            });
        }
        current = current.sum(&Ideal::new(&ctx, vec![f.clone()])?)?;
    }
    let proper = !current.is_unit_ideal();
    Ok(RegularSequenceReport {
        regular: proper,
        failing_index: None,
        witness: (!proper).then(|| Polynomial::one(&ctx)),
        proper,
    })
}

/// Annihilator of `f` in the quotient by `base`: the colon ideal `base : f`.
/// `f` is a zero divisor modulo `base` exactly when the result is strictly
/// larger than `base`.
pub fn annihilator(f: &Polynomial, base: &Ideal) -> Result<Ideal> {
    base.colon_element(f)
}

/// Monomials of weighted degree `d`. Exponents of variables with weight
/// `<= 0` are capped by `cap`, which is mandatory once such variables exist.
pub fn weighted_monomials(ctx: &RingContext, d: i64, cap: Option<u32>) -> Result<Vec<Monomial>> {
    let has_nonpositive = ctx.weights().any(|w| w <= 0);
    if has_nonpositive && cap.is_none() {
        return Err(Error::UnboundedPiece);
    }
    let n = ctx.num_vars();
    let weights: Vec<i64> = ctx.weights().collect();
    let cap_val = cap.unwrap_or(0) as i64;
    // least achievable contribution of the suffix starting at i
    let mut suffix_min = vec![0i64; n + 1];
    for i in (0..n).rev() {
        suffix_min[i] = suffix_min[i + 1] + if weights[i] < 0 { weights[i] * cap_val } else { 0 };
    }

    fn rec(
        i: usize,
        remaining: i64,
        weights: &[i64],
        suffix_min: &[i64],
        cap: i64,
        stack: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == weights.len() {
            if remaining == 0 {
                out.push(Monomial(stack.clone()));
            }
            return;
        }
        let w = weights[i];
        let max_e = if w > 0 {
            let room = remaining - suffix_min[i + 1];
            if room < 0 {
                return;
            }
            room / w
        } else {
            cap
        };
        for e in 0..=max_e {
            stack[i] = e as u32;
            rec(i + 1, remaining - e * w, weights, suffix_min, cap, stack, out);
        }
        stack[i] = 0;
    }

    let mut out = Vec::new();
    let mut stack = vec![0u32; n];
    rec(0, d, &weights, &suffix_min, cap_val, &mut stack, &mut out);
    let order = ctx.order().clone();
    out.sort_by(|a, b| order.cmp(&b.0, &a.0));
    Ok(out)
}

/// Standard monomials of weighted degree `d` modulo the grevlex basis of
/// `ideal`.
pub fn standard_monomials(ideal: &Ideal, d: i64, cap: Option<u32>) -> Result<Vec<Monomial>> {
    let gb = ideal.groebner(&MonomialOrder::GrevLex);
    Ok(weighted_monomials(ideal.context(), d, cap)?
        .into_iter()
        .filter(|m| gb.is_standard(m))
        .collect())
}

/// Hilbert function of the quotient by `ideal` on an inclusive degree range;
/// requires strictly positive weights.
pub fn hilbert_function(ideal: &Ideal, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>> {
    if ideal.context().weights().any(|w| w <= 0) {
        return Err(Error::NonPositiveWeights);
    }
    (lo..=hi)
        .map(|d| Ok((d, standard_monomials(ideal, d, None)?.len())))
        .collect()
}

/// Deterministic Buchberger: normal selection strategy (minimal lcm total
/// degree, ties by pair creation index) with the coprime and chain criteria,
/// followed by minimization and autoreduction.
fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> ReducedGB {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        let nf = reduce(g, &basis, order);
        if !nf.is_zero() {
            basis.push(monic_under(&nf, order));
        }
    }
    let mut leads: Vec<Monomial> = basis
        .iter()
        .map(|p| leading_under(p, order).unwrap().0.clone())
        .collect();

    #[derive(Clone)]
    struct Pair {
        i: usize,
        j: usize,
        lcm: Monomial,
        degree: u64,
        index: usize,
        pending: bool,
    }
    fn push_pairs(pairs: &mut Vec<Pair>, leads: &[Monomial], new: usize) {
        for i in 0..new {
            let lcm = leads[i].lcm(&leads[new]);
            let index = pairs.len();
            pairs.push(Pair {
                i,
                j: new,
                degree: lcm.total_degree(),
                lcm,
                index,
                pending: true,
            });
        }
    }
    let mut pairs: Vec<Pair> = Vec::new();
    for j in 0..basis.len() {
        push_pairs(&mut pairs, &leads, j);
    }
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    loop {
        let Some(best) = pairs
            .iter()
            .filter(|p| p.pending)
            .min_by_key(|p| (p.degree, p.index))
            .cloned()
        else {
            break;
        };
        pairs[best.index].pending = false;
        done.insert((best.i, best.j));

        // coprime criterion
        if leads[best.i].coprime(&leads[best.j]) {
            continue;
        }
        // chain criterion
        let chained = (0..basis.len()).any(|k| {
            k != best.i
                && k != best.j
                && leads[k].divides(&best.lcm)
                && done.contains(&key(best.i, k))
                && done.contains(&key(best.j, k))
        });
        if chained {
            continue;
        }

        let s = s_polynomial(&basis[best.i], &basis[best.j], order);
        let nf = reduce(&s, &basis, order);
        if !nf.is_zero() {
            basis.push(monic_under(&nf, order));
            leads.push(leading_under(basis.last().unwrap(), order).unwrap().0.clone());
            push_pairs(&mut pairs, &leads, basis.len() - 1);
        }
    }

    // minimize: drop elements whose leading monomial another one divides
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i != j && keep[j] && leads[j].divides(&leads[i]) && (leads[j] != leads[i] || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Polynomial> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();

    // autoreduce until stable
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter_map(|(j, p)| (j != i).then(|| p.clone()))
                .collect();
            let r = monic_under(&reduce(&minimal[i], &others, order), order);
            if r != minimal[i] {
                minimal[i] = r;
                changed = true;
            }
        }
        minimal.retain(|p| !p.is_zero());
        if !changed {
            break;
        }
    }

    minimal.sort_by(|a, b| {
        let la = leading_under(a, order).unwrap().0;
        let lb = leading_under(b, order).unwrap().0;
        order.cmp(&la.0, &lb.0)
    });
    let leading = minimal
        .iter()
        .map(|p| leading_under(p, order).unwrap().0.clone())
        .collect();
    ReducedGB { order: order.clone(), basis: minimal, leading }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn monic_under(p: &Polynomial, order: &MonomialOrder) -> Polynomial {
    match leading_under(p, order) {
        None => p.clone(),
        Some((_, c)) => p.scale(&c.inv()),
    }
}

/// S-polynomial under `order`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (lmf, lcf) = leading_under(f, order).expect("nonzero");
    let (lmg, lcg) = leading_under(g, order).expect("nonzero");
    let lcm = lmf.lcm(lmg);
    let a = f.mul_term(&lmf.div_into(&lcm), &lcf.inv());
    let b = g.mul_term(&lmg.div_into(&lcm), &lcg.inv());
    a.sub(&b).expect("same context")
}

/// Normal form as a free function, mirroring `Ideal::normal_form`.
pub fn normal_form(p: &Polynomial, ideal: &Ideal, order: &MonomialOrder) -> Result<Polynomial> {
    ideal.normal_form(p, order)
}

/// Remainder of `p` modulo an explicit polynomial list (not necessarily a
/// Gröbner basis) under `order`.
pub fn reduce_by(p: &Polynomial, divisors: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    reduce(p, divisors, order)
}
