//! Presented ℤ-graded affine algebras: graded pieces, the degree-zero /
//! irrelevant splitting, homogeneous localization charts, Veronese subrings,
//! generation-in-degree-1 certificates and twist cocycles.

use std::collections::BTreeSet;
use std::fmt;

use crate::blowup::{Chart, ProjAtlas, RatExpr};
use crate::error::Error;
use crate::ideal::{map_kernel, standard_monomials, Ideal};
use crate::poly::{Polynomial, WeightedDegree};
use crate::ring::{Monomial, MonomialOrder, RingContext};
use crate::span::in_span;
use crate::Result;

/// A presented ℤ-graded affine algebra: weighted ambient ring modulo a
/// weighted-homogeneous ideal. The zero ring (1 ∈ J) is permitted; query it
/// with [`GradedAlgebra::is_zero_ring`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    ctx: RingContext,
    ideal: Ideal,
    name: Option<String>,
}

impl GradedAlgebra {
    /// Validates that every generator is weighted-homogeneous.
    pub fn new(ctx: &RingContext, ideal: Ideal, name: Option<String>) -> Result<Self> {
        if ideal.context() != ctx {
            return Err(Error::ContextMismatch);
        }
        for g in ideal.generators() {
            if let WeightedDegree::Mixed(degrees) = g.weighted_degree() {
                return Err(Error::NonHomogeneous {
                    generator: g.to_string(),
                    degrees,
                });
            }
        }
        Ok(GradedAlgebra {
            ctx: ctx.clone(),
            ideal,
            name,
        })
    }

    /// The free weighted polynomial ring (zero defining ideal).
    pub fn free(ctx: &RingContext, name: Option<String>) -> Self {
        GradedAlgebra {
            ctx: ctx.clone(),
            ideal: Ideal::zero(ctx),
            name,
        }
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn is_zero_ring(&self) -> bool {
        self.ideal.is_unit_ideal()
    }

    pub fn is_n_graded(&self) -> bool {
        self.ctx.weights().all(|w| w >= 0)
    }

    /// Presentations are compared by reduced Gröbner bases.
    pub fn equals(&self, other: &GradedAlgebra) -> bool {
        self.ctx == other.ctx && self.ideal.equals(&other.ideal)
    }

    /// Basis of the weighted-degree-`d` piece as standard monomials modulo
    /// the defining ideal. `bound` caps exponents of non-positive-weight
    /// variables and is mandatory when such variables exist.
    pub fn piece(&self, d: i64, bound: Option<u32>) -> Result<GradedPiece> {
        let basis = standard_monomials(&self.ideal, d, bound)?;
        Ok(GradedPiece {
            degree: d,
            basis,
            bound,
        })
    }

    /// Piece of the graded shift B(n): `B(n)_d = B_{n+d}`.
    pub fn shifted_piece(&self, n: i64, d: i64, bound: Option<u32>) -> Result<GradedPiece> {
        let mut piece = self.piece(n + d, bound)?;
        piece.degree = d;
        Ok(piece)
    }

    /// Hilbert function on an inclusive range; strictly positive weights only.
    pub fn hilbert_function(&self, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>> {
        crate::ideal::hilbert_function(&self.ideal, lo, hi)
    }

    /// Normal form of an element modulo the defining ideal (grevlex).
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        self.ideal.normal_form(p, &MonomialOrder::GrevLex)
    }
}

impl fmt::Display for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            write!(f, "{name} = ")?;
        }
        write!(f, "{}", self.ctx)?;
        if !self.ideal.is_zero_ideal() {
            write!(f, " / {}", self.ideal)?;
        }
        Ok(())
    }
}

/// Monomial basis of one graded piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: i64,
    pub basis: Vec<Monomial>,
    pub bound: Option<u32>,
}

impl GradedPiece {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn polynomials(&self, ctx: &RingContext) -> Vec<Polynomial> {
        self.basis
            .iter()
            .map(|m| Polynomial::monomial(ctx, m.clone(), ctx.field().one()))
            .collect()
    }
}

/// The degree-zero part and the irrelevant ideal of an ℕ-graded algebra.
#[derive(Debug, Clone)]
pub struct Split {
    pub degree_zero: GradedAlgebra,
    /// Ideal of the ambient ring generated by the positive-weight variables.
    pub irrelevant: Ideal,
}

/// Splits an ℕ-graded algebra as B ≃ B₀ ⊕ B₊: B₀ is presented on the
/// weight-0 variables with the positive variables eliminated, B₊ is the
/// ideal they generate.
pub fn split_degree_zero(algebra: &GradedAlgebra) -> Result<Split> {
    let ctx = algebra.context();
    if ctx.weights().any(|w| w < 0) {
        return Err(Error::NegativeWeights);
    }
    let positive: BTreeSet<usize> = (0..ctx.num_vars())
        .filter(|&i| ctx.weight(i) > 0)
        .collect();
    let zero_ideal = algebra.ideal().eliminate(&positive)?;
    let zero_ctx = zero_ideal.context().clone();
    let degree_zero = GradedAlgebra::new(&zero_ctx, zero_ideal, None)?;
    let irrelevant = Ideal::new(
        ctx,
        positive.iter().map(|&i| Polynomial::var(ctx, i)).collect(),
    )?;
    Ok(Split {
        degree_zero,
        irrelevant,
    })
}

/// Per-degree certificate of `B_d = (B₀)_d ⊕ (B₊)_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDegreeCheck {
    pub degree: i64,
    pub dim_total: usize,
    pub dim_zero_part: usize,
    pub dim_plus_part: usize,
    pub additive: bool,
}

/// Checks dimension additivity of the splitting degree-wise up to `d_max`.
/// `bound` caps weight-0 exponents during enumeration.
pub fn split_additivity(
    algebra: &GradedAlgebra,
    d_max: i64,
    bound: Option<u32>,
) -> Result<Vec<SplitDegreeCheck>> {
    let split = split_degree_zero(algebra)?;
    let ctx = algebra.context();
    let mut out = Vec::new();
    for d in 0..=d_max {
        let piece = algebra.piece(d, bound)?;
        let (zero_like, plus_like): (Vec<&Monomial>, Vec<&Monomial>) =
            piece.basis.iter().partition(|m| {
                m.0.iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || ctx.weight(i) == 0)
            });
        let b0_dim = split.degree_zero.piece(d, bound)?.dimension();
        out.push(SplitDegreeCheck {
            degree: d,
            dim_total: piece.dimension(),
            dim_zero_part: zero_like.len(),
            dim_plus_part: plus_like.len(),
            additive: zero_like.len() == b0_dim
                && zero_like.len() + plus_like.len() == piece.dimension(),
        });
    }
    Ok(out)
}

fn single_variable(p: &Polynomial) -> Option<usize> {
    let [(mono, coeff)] = p.terms() else {
        return None;
    };
    if !coeff.is_one() || mono.total_degree() != 1 {
        return None;
    }
    mono.0.iter().position(|&e| e == 1)
}

/// Requires an ℕ-graded context whose positive weights are all 1; returns
/// the indices of the degree-1 variables.
fn degree_one_variables(ctx: &RingContext) -> Result<Vec<usize>> {
    if ctx.weights().any(|w| w < 0) {
        return Err(Error::NegativeWeights);
    }
    if ctx.weights().any(|w| w > 1) {
        return Err(Error::NotNGraded);
    }
    Ok((0..ctx.num_vars()).filter(|&i| ctx.weight(i) == 1).collect())
}

/// Names for the chart variables standing for the degree-1 variables other
/// than the center: `w` when there is exactly one, else `w1, w2, ...`.
fn chart_names(count: usize, taken: &BTreeSet<String>) -> Vec<String> {
    let mut names = Vec::new();
    let mut used = taken.clone();
    for i in 0..count {
        let base = if count == 1 {
            "w".to_string()
        } else {
            format!("w{}", i + 1)
        };
        let mut name = base;
        while used.contains(&name) {
            name.push('_');
        }
        used.insert(name.clone());
        names.push(name);
    }
    names
}

/// Homogeneous localization chart B₍f₎ at a degree-1 element: saturate the
/// defining ideal at f, adjoin w-variables for the other degree-1 variables
/// and dehomogenize at f = 1. Non-variable centers first get a fresh
/// degree-1 variable z with the relation z - f.
pub fn homogeneous_localization_chart(
    algebra: &GradedAlgebra,
    center: &Polynomial,
) -> Result<Chart> {
    if center.context() != algebra.context() {
        return Err(Error::ContextMismatch);
    }
    match center.weighted_degree() {
        WeightedDegree::Homogeneous(1) => {}
        _ => return Err(Error::NotDegreeOne(center.to_string())),
    }
    if let Some(index) = single_variable(center) {
        return chart_at_variable(algebra, index);
    }
    // adjoin a fresh degree-1 variable equal to the center
    let ctx = algebra.context();
    let z_name = ctx.fresh_name("z");
    let ext = ctx.extended(vec![(z_name.clone(), 1)], ctx.order().clone())?;
    let z_index = ext.num_vars() - 1;
    let z = Polynomial::var(&ext, z_index);
    let mut gens: Vec<Polynomial> = algebra
        .ideal()
        .generators()
        .iter()
        .map(|g| g.transport(&ext))
        .collect::<Result<_>>()?;
    gens.push(z.sub(&center.transport(&ext)?)?);
    let extended = GradedAlgebra::new(&ext, Ideal::new(&ext, gens)?, None)?;
    chart_at_variable(&extended, z_index)
}

fn chart_at_variable(algebra: &GradedAlgebra, center_index: usize) -> Result<Chart> {
    let ctx = algebra.context();
    let degree_one = degree_one_variables(ctx)?;
    if !degree_one.contains(&center_index) {
        return Err(Error::NotDegreeOne(ctx.var_name(center_index).to_string()));
    }
    let center = Polynomial::var(ctx, center_index);
    let (saturated, _) = algebra.ideal().saturation(&center)?;

    let zero_vars: Vec<usize> = (0..ctx.num_vars()).filter(|&i| ctx.weight(i) == 0).collect();
    let others: Vec<usize> = degree_one
        .iter()
        .copied()
        .filter(|&i| i != center_index)
        .collect();
    let taken: BTreeSet<String> = zero_vars
        .iter()
        .map(|&i| ctx.var_name(i).to_string())
        .collect();
    let w_names = chart_names(others.len(), &taken);

    // chart variables keep the original relative order, each degree-1
    // variable replaced in place by its w-variable (the center is dropped)
    let mut chart_vars: Vec<(String, i64)> = Vec::new();
    let mut source_vars: Vec<usize> = Vec::new();
    for i in 0..ctx.num_vars() {
        if ctx.weight(i) == 0 {
            chart_vars.push((ctx.var_name(i).to_string(), 0));
            source_vars.push(i);
        } else if i != center_index {
            let pos = others.iter().position(|&o| o == i).unwrap();
            chart_vars.push((w_names[pos].clone(), 0));
            source_vars.push(i);
        }
    }
    let chart_ctx = RingContext::new(*ctx.field(), chart_vars, MonomialOrder::GrevLex)?;

    let mut substitution: Vec<Polynomial> = Vec::with_capacity(ctx.num_vars());
    for i in 0..ctx.num_vars() {
        if i == center_index {
            substitution.push(Polynomial::one(&chart_ctx));
        } else {
            let pos = source_vars.iter().position(|&s| s == i).unwrap();
            substitution.push(Polynomial::var(&chart_ctx, pos));
        }
    }

    let chart_gens: Vec<Polynomial> = saturated
        .generators()
        .iter()
        .map(|g| g.substitute(&chart_ctx, &substitution))
        .collect::<Result<_>>()?;
    let ring = GradedAlgebra::new(&chart_ctx, Ideal::new(&chart_ctx, chart_gens)?, None)?;
    Ok(Chart {
        ring,
        source_ctx: ctx.clone(),
        center,
        center_index: Some(center_index),
        substitution,
        source_vars,
        exceptional: None,
    })
}

/// Two-sided verification that B₍f₎[t^±1] ⇄ B_f (t ↦ f) are mutually
/// inverse on generators, expressed through membership checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deg0locReport {
    /// Each chart-ideal generator, homogenized by the center, lands in the
    /// saturated defining ideal.
    pub forward_ok: bool,
    /// Each saturated-ideal generator dehomogenizes into the chart ideal.
    pub backward_ok: bool,
}

pub fn verify_deg0loc(algebra: &GradedAlgebra, chart: &Chart) -> Result<Deg0locReport> {
    let ctx = algebra.context();
    let (saturated, _) = algebra.ideal().saturation(&chart.center)?;

    // forward: w_i -> v_i, multiply by center^(max w-degree)
    let mut forward_ok = true;
    let images: Vec<Polynomial> = chart
        .source_vars
        .iter()
        .map(|&s| Polynomial::var(ctx, s))
        .collect();
    for g in chart.ring.ideal().generators() {
        let lifted = g.substitute(ctx, &images)?;
        // each monomial w^β lifts to v^β of weighted degree |β|; multiply by
        // center^(D - deg) termwise to homogenize at degree D
        let degrees: Vec<i64> = lifted
            .terms()
            .iter()
            .map(|(m, _)| m.weighted_degree(ctx))
            .collect();
        let top = degrees.iter().copied().max().unwrap_or(0);
        let mut homog = Polynomial::zero(ctx);
        for ((mono, coeff), deg) in lifted.terms().iter().zip(&degrees) {
            let factor = chart.center.pow((top - deg) as u32);
            let term = Polynomial::monomial(ctx, mono.clone(), coeff.clone());
            homog = homog.add(&term.mul(&factor)?)?;
        }
        if !saturated.contains(&homog)? {
            forward_ok = false;
        }
    }

    // backward: v_i -> w_i * t, center -> t; dehomogenization must land in
    // the chart ideal
    let mut backward_ok = true;
    for g in saturated.generators() {
        let dehom = g.substitute(chart.ring.context(), &chart.substitution)?;
        if !chart.ring.ideal().contains(&dehom)? {
            backward_ok = false;
        }
    }
    Ok(Deg0locReport {
        forward_ok,
        backward_ok,
    })
}

/// A Veronese presentation together with its generator dictionary.
#[derive(Debug, Clone)]
pub struct Veronese {
    pub algebra: GradedAlgebra,
    /// Fresh weight-1 generator name paired with its image in B.
    pub generators: Vec<(String, Polynomial)>,
    pub bound: Option<u32>,
}

/// Veronese subring B^(δ): one fresh weight-1 variable per standard monomial
/// of weighted degree δ (weight-0 variables are kept as degree-0 generators),
/// with the ideal computed as a map kernel. `bound` caps weight-0 exponents
/// in the generator search and is reported back.
pub fn veronese(algebra: &GradedAlgebra, delta: u32, bound: Option<u32>) -> Result<Veronese> {
    let ctx = algebra.context();
    if ctx.weights().any(|w| w < 0) {
        return Err(Error::NegativeWeights);
    }
    if delta == 0 {
        return Err(Error::IllFormedPayload("veronese index must be positive".into()));
    }
    let monomials = standard_monomials(algebra.ideal(), delta as i64, bound)?;
    let zero_vars: Vec<usize> = (0..ctx.num_vars()).filter(|&i| ctx.weight(i) == 0).collect();
    let taken: BTreeSet<String> = zero_vars
        .iter()
        .map(|&i| ctx.var_name(i).to_string())
        .collect();
    let names = chart_names(monomials.len(), &taken);

    let mut vars: Vec<(String, i64)> = zero_vars
        .iter()
        .map(|&i| (ctx.var_name(i).to_string(), 0))
        .collect();
    vars.extend(names.iter().map(|n| (n.clone(), 1)));
    let vctx = RingContext::new(*ctx.field(), vars, MonomialOrder::GrevLex)?;

    let mut images: Vec<Polynomial> = zero_vars
        .iter()
        .map(|&i| Polynomial::var(ctx, i))
        .collect();
    let mut generators = Vec::new();
    for (name, mono) in names.iter().zip(&monomials) {
        let image = Polynomial::monomial(ctx, mono.clone(), ctx.field().one());
        generators.push((name.clone(), image.clone()));
        images.push(image);
    }
    let kernel = map_kernel(&vctx, &images, algebra.ideal())?;
    let algebra = GradedAlgebra::new(&vctx, kernel, None)?;
    Ok(Veronese {
        algebra,
        generators,
        bound,
    })
}

/// Certificate for generation in degree 1 up to a degree bound.
#[derive(Debug, Clone)]
pub struct GenerationReport {
    pub generated: bool,
    pub bound: i64,
    pub enumeration_bound: Option<u32>,
    /// First failing degree with the basis monomials missed by B₁·B_{d-1}.
    pub failure: Option<(i64, Vec<Monomial>)>,
}

/// Degree-wise check that B_d = B₁·B_{d-1} for 2 ≤ d ≤ bound: every basis
/// monomial of B_d must be a k-combination of normal forms of products of
/// the degree-1 and degree-(d-1) bases.
pub fn generated_in_degree_one(
    algebra: &GradedAlgebra,
    bound: i64,
    enumeration_bound: Option<u32>,
) -> Result<GenerationReport> {
    let ctx = algebra.context();
    if ctx.weights().any(|w| w < 0) {
        return Err(Error::NegativeWeights);
    }
    let gb = algebra.ideal().groebner(&crate::ring::MonomialOrder::GrevLex);
    for d in 2..=bound {
        let target_monos = algebra.piece(d, enumeration_bound)?.basis;
        if target_monos.is_empty() {
            continue;
        }
        let ones = algebra.piece(1, enumeration_bound)?.basis;
        let lower = algebra.piece(d - 1, enumeration_bound)?.basis;

        // products of standard monomials that stay standard cover their
        // target directly; only the rest need the linear span check
        let target_set: BTreeSet<&Monomial> = target_monos.iter().collect();
        let mut covered: BTreeSet<Monomial> = BTreeSet::new();
        let mut reduced_rows: Vec<Polynomial> = Vec::new();
        for p in &ones {
            for q in &lower {
                let product = p.mul(q);
                if gb.is_standard(&product) {
                    if target_set.contains(&product) {
                        covered.insert(product);
                    }
                } else {
                    let poly = Polynomial::monomial(ctx, product, ctx.field().one());
                    reduced_rows.push(algebra.reduce(&poly)?);
                }
            }
        }
        let pending: Vec<Polynomial> = target_monos
            .iter()
            .filter(|m| !covered.contains(m))
            .map(|m| Polynomial::monomial(ctx, m.clone(), ctx.field().one()))
            .collect();
        let missed: Vec<Monomial> = if pending.is_empty() {
            Vec::new()
        } else {
            let mut spanning: Vec<Polynomial> = covered
                .iter()
                .map(|m| Polynomial::monomial(ctx, m.clone(), ctx.field().one()))
                .collect();
            spanning.append(&mut reduced_rows);
            in_span(&spanning, &pending)
                .iter()
                .zip(&pending)
                .filter(|(ok, _)| !**ok)
                .map(|(_, t)| t.terms()[0].0.clone())
                .collect()
        };
        if !missed.is_empty() {
            return Ok(GenerationReport {
                generated: false,
                bound,
                enumeration_bound,
                failure: Some((d, missed)),
            });
        }
    }
    Ok(GenerationReport {
        generated: true,
        bound,
        enumeration_bound,
        failure: None,
    })
}

/// One twist cocycle entry: the unit g⁽ⁿ⁾ᵢⱼ = (vᵢ/vⱼ)ⁿ in chart-j
/// coordinates, with its inverse.
#[derive(Debug, Clone)]
pub struct TwistEntry {
    pub from: usize,
    pub to: usize,
    pub unit: RatExpr,
    pub inverse: RatExpr,
}

#[derive(Debug, Clone)]
pub struct TwistTable {
    pub twist: i64,
    pub entries: Vec<TwistEntry>,
}

/// Twist cocycle table for O(n) on a Proj atlas built from degree-1
/// generator variables.
pub fn twist_cocycle(atlas: &ProjAtlas, n: i64) -> Result<TwistTable> {
    let mut entries = Vec::new();
    for i in 0..atlas.charts.len() {
        for j in 0..atlas.charts.len() {
            if i == j {
                continue;
            }
            let base = atlas.generator_in_chart(i, j)?;
            let unit = base.int_pow(n);
            let inverse = base.int_pow(-n);
            entries.push(TwistEntry {
                from: i,
                to: j,
                unit,
                inverse,
            });
        }
    }
    Ok(TwistTable { twist: n, entries })
}

impl TwistTable {
    /// Entry for an ordered chart pair.
    pub fn entry(&self, from: usize, to: usize) -> Option<&TwistEntry> {
        self.entries
            .iter()
            .find(|e| e.from == from && e.to == to)
    }

    /// Entrywise check g⁽ⁿ⁾·g⁽ᵐ⁾ = g⁽ⁿ⁺ᵐ⁾ against another table over the
    /// same atlas, modulo the chart ideals.
    pub fn multiplicativity(&self, other: &TwistTable, atlas: &ProjAtlas) -> Result<bool> {
        for e in &self.entries {
            let o = other
                .entry(e.from, e.to)
                .ok_or_else(|| Error::IllFormedPayload("twist tables disagree".into()))?;
            let sum_entry = twist_cocycle(atlas, self.twist + other.twist)?;
            let target = sum_entry.entry(e.from, e.to).unwrap();
            let product = e.unit.mul(&o.unit)?;
            if !product.equivalent(&target.unit, atlas.charts[e.to].ring.ideal())? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
