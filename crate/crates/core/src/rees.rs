//! Extended Rees algebras of finite quotients at the discrete level:
//! construction, cone, regularization, t⁻¹-regularity diagnostics,
//! comparison with classical Rees algebras, and naturality.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::graded::GradedAlgebra;
use crate::ideal::{standard_monomials, Ideal};
use crate::poly::Polynomial;
use crate::ring::{MonomialOrder, RingContext};
use crate::Result;

/// A finite quotient A → A/(f₁,…,f_k): a base algebra concentrated in
/// degree 0 together with a sequence of its elements. Elements are stored in
/// normal form modulo the base ideal; zero entries are kept (the quotient by
/// a zero element is meaningful).
#[derive(Debug, Clone)]
pub struct ImmersionData {
    base: GradedAlgebra,
    elements: Vec<Polynomial>,
}

impl ImmersionData {
    pub fn new(base: GradedAlgebra, elements: Vec<Polynomial>) -> Result<Self> {
        if base.context().weights().any(|w| w != 0) {
            return Err(Error::WeightedBase);
        }
        let elements = elements
            .into_iter()
            .map(|f| {
                if f.context() != base.context() {
                    return Err(Error::ContextMismatch);
                }
                base.reduce(&f)
            })
            .collect::<Result<_>>()?;
        Ok(ImmersionData { base, elements })
    }

    pub fn base(&self) -> &GradedAlgebra {
        &self.base
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }
}

/// Extended Rees presentation: ambient x̄ (weight 0) ∪ v₁..v_k (weight 1)
/// ∪ u (weight −1) with ideal J_A + (vᵢu − fᵢ); u realizes t⁻¹ and the
/// parser accepts `t^-1` as a synonym for it.
#[derive(Debug, Clone)]
pub struct ReesPresentation {
    algebra: GradedAlgebra,
    data: ImmersionData,
    v_indices: Vec<usize>,
    u_index: usize,
}

impl ReesPresentation {
    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn context(&self) -> &RingContext {
        self.algebra.context()
    }

    pub fn ideal(&self) -> &Ideal {
        self.algebra.ideal()
    }

    pub fn data(&self) -> &ImmersionData {
        &self.data
    }

    pub fn v_indices(&self) -> &[usize] {
        &self.v_indices
    }

    pub fn u_index(&self) -> usize {
        self.u_index
    }

    pub fn u(&self) -> Polynomial {
        Polynomial::var(self.context(), self.u_index)
    }

    /// Evaluation onto the base: xᵢ ↦ xᵢ, vᵢ ↦ fᵢ, u ↦ 1. Sends a
    /// degree-n element to the coefficient of tⁿ in A[t, t⁻¹].
    pub fn evaluate_to_base(&self, p: &Polynomial) -> Result<Polynomial> {
        let base_ctx = self.data.base.context();
        let mut images = Vec::with_capacity(self.context().num_vars());
        for i in 0..self.context().num_vars() {
            if i == self.u_index {
                images.push(Polynomial::one(base_ctx));
            } else if let Some(pos) = self.v_indices.iter().position(|&v| v == i) {
                images.push(self.data.elements[pos].clone());
            } else {
                images.push(Polynomial::var(
                    base_ctx,
                    base_ctx
                        .var_index(self.context().var_name(i))
                        .expect("base variable"),
                ));
            }
        }
        p.substitute(base_ctx, &images)
    }

    /// Bounded check that the degree-(−m) pieces are spanned by u^m over the
    /// base: every standard monomial of degree −m is congruent to
    /// (its base evaluation)·u^m modulo the Rees ideal.
    pub fn lower_shape_ok(&self, m_max: i64, cap: u32) -> Result<bool> {
        let ctx = self.context();
        for m in 0..=m_max {
            let monos = standard_monomials(self.ideal(), -m, Some(cap))?;
            for mono in monos {
                let p = Polynomial::monomial(ctx, mono, ctx.field().one());
                let base_part = self.evaluate_to_base(&p)?.transport(ctx)?;
                let um = self.u().pow(m as u32);
                let diff = p.sub(&base_part.mul(&um)?)?;
                if !self.ideal().contains(&diff)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Builds the extended Rees presentation of a finite quotient, with
/// deterministic naming v1..vk, u (freshened against the base variables).
pub fn rees_extended(data: &ImmersionData) -> Result<ReesPresentation> {
    let base_ctx = data.base.context();
    let k = data.elements.len();
    let mut vars: Vec<(String, i64)> = base_ctx
        .vars()
        .iter()
        .map(|v| (v.name.clone(), 0))
        .collect();
    let mut taken: BTreeSet<String> = vars.iter().map(|(n, _)| n.clone()).collect();
    let fresh = |base: String, taken: &mut BTreeSet<String>| {
        let mut name = base;
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        name
    };
    let n0 = vars.len();
    for i in 1..=k {
        vars.push((fresh(format!("v{i}"), &mut taken), 1));
    }
    vars.push((fresh("u".to_string(), &mut taken), -1));
    let u_index = vars.len() - 1;
    let v_indices: Vec<usize> = (n0..n0 + k).collect();
    let ctx = RingContext::new(*base_ctx.field(), vars, MonomialOrder::GrevLex)?
        .with_alias("t^-1", u_index);

    let mut gens: Vec<Polynomial> = data
        .base
        .ideal()
        .generators()
        .iter()
        .map(|g| g.transport(&ctx))
        .collect::<Result<_>>()?;
    let u = Polynomial::var(&ctx, u_index);
    for (i, f) in data.elements.iter().enumerate() {
        let v = Polynomial::var(&ctx, v_indices[i]);
        gens.push(v.mul(&u)?.sub(&f.transport(&ctx)?)?);
    }
    let algebra = GradedAlgebra::new(&ctx, Ideal::new(&ctx, gens)?, None)?;
    let rees = ReesPresentation {
        algebra,
        data: data.clone(),
        v_indices,
        u_index,
    };
    debug_assert!(rees.lower_shape_ok(1, 1)?);
    Ok(rees)
}

/// The cone R̄ = R/(t⁻¹): adjoin u to the Rees ideal and eliminate it.
/// The result is ℕ-graded on x̄ ∪ v̄.
pub fn cone(rees: &ReesPresentation) -> Result<GradedAlgebra> {
    let ctx = rees.context();
    let with_u = rees
        .ideal()
        .sum(&Ideal::new(ctx, vec![rees.u()])?)?;
    let eliminated = with_u.eliminate(&BTreeSet::from([rees.u_index]))?;
    let cone_ctx = eliminated.context().clone();
    GradedAlgebra::new(&cone_ctx, eliminated, None)
}

/// Result of regularization: the universal t⁻¹-regular quotient.
#[derive(Debug, Clone)]
pub struct Regularized {
    pub algebra: GradedAlgebra,
    /// Generators of the regularization kernel (saturation generators that
    /// are nonzero modulo the input ideal).
    pub kernel: Ideal,
    /// Number of strictly enlarging colon steps in the saturation.
    pub stabilized_at: u32,
    pub zero_ring: bool,
}

fn distinguished_u(ctx: &RingContext) -> Result<usize> {
    let negatives: Vec<usize> = (0..ctx.num_vars()).filter(|&i| ctx.weight(i) == -1).collect();
    match negatives.as_slice() {
        [u] => Ok(*u),
        _ => Err(Error::MissingInverseVariable),
    }
}

/// Regularization of any presented graded algebra over A[t⁻¹]: the quotient
/// by the union of kernels of multiplication by powers of t⁻¹, computed as
/// the saturation of the defining ideal at u.
pub fn regularize(algebra: &GradedAlgebra) -> Result<Regularized> {
    let ctx = algebra.context();
    let u_index = distinguished_u(ctx)?;
    let u = Polynomial::var(ctx, u_index);
    let (saturated, stabilized_at) = algebra.ideal().saturation(&u)?;
    let kernel_gens: Vec<Polynomial> = saturated
        .groebner(&MonomialOrder::GrevLex)
        .basis()
        .iter()
        .filter(|g| {
            !algebra
                .ideal()
                .contains(g)
                .expect("same context")
        })
        .cloned()
        .collect();
    let kernel = Ideal::new(ctx, kernel_gens)?;
    let out = GradedAlgebra::new(ctx, saturated, None)?;
    let zero_ring = out.is_zero_ring();
    Ok(Regularized {
        algebra: out,
        kernel,
        stabilized_at,
        zero_ring,
    })
}

/// t⁻¹-regularity diagnosis.
#[derive(Debug, Clone)]
pub struct TRegularity {
    pub regular: bool,
    /// Annihilator of u modulo the defining ideal, reduced modulo it:
    /// zero exactly when regular.
    pub obstruction: Ideal,
}

/// t⁻¹ is a non-zero-divisor iff (J : u) = J; the obstruction lists colon
/// generators that are nonzero in the quotient.
pub fn t_regularity(algebra: &GradedAlgebra) -> Result<TRegularity> {
    let ctx = algebra.context();
    let u_index = distinguished_u(ctx)?;
    let u = Polynomial::var(ctx, u_index);
    let colon = algebra.ideal().colon_element(&u)?;
    let residual: Vec<Polynomial> = colon
        .groebner(&MonomialOrder::GrevLex)
        .basis()
        .iter()
        .map(|g| algebra.ideal().normal_form(g, &MonomialOrder::GrevLex))
        .collect::<Result<_>>()?;
    let obstruction = Ideal::new(ctx, residual)?;
    Ok(TRegularity {
        regular: obstruction.is_zero_ideal(),
        obstruction,
    })
}

/// Per-degree certificates of the comparison with the classical extended
/// Rees algebra ⊕ Iⁿtⁿ.
#[derive(Debug, Clone)]
pub struct DegreeComparison {
    pub degree: i64,
    /// Every (capped) basis monomial of the regularized degree-n piece
    /// evaluates into Iⁿ modulo the base ideal.
    pub membership_ok: bool,
    /// Every degree-n product of the quotient elements lifts along the
    /// v-monomial witness.
    pub lifts_ok: bool,
    /// The capped degree-n pieces of the presentation and its
    /// regularization have equal dimension.
    pub unregularized_agrees: bool,
}

#[derive(Debug, Clone)]
pub struct ClassicalComparison {
    pub bound: i64,
    pub cap: u32,
    pub t_regular: bool,
    pub degrees: Vec<DegreeComparison>,
    /// All membership and lift certificates hold for the regularization.
    pub regularized_matches: bool,
    /// The unregularized presentation already agrees degree-wise.
    pub unregularized_matches: bool,
}

/// Compares a Rees presentation against the classical oracle: ideal powers
/// Iⁿ of I = (f̄) + J_A for 1 ≤ n ≤ bound. Enumeration caps weight-0 and
/// u exponents by `cap`.
pub fn compare_to_classical(
    rees: &ReesPresentation,
    bound: i64,
    cap: u32,
) -> Result<ClassicalComparison> {
    let base = rees.data().base();
    let base_ctx = base.context();
    let regularized = regularize(rees.algebra())?;
    let t_regular = t_regularity(rees.algebra())?.regular;

    let ideal_i = Ideal::new(
        base_ctx,
        rees.data()
            .elements()
            .iter()
            .cloned()
            .chain(base.ideal().generators().iter().cloned())
            .collect(),
    )?;

    let mut degrees = Vec::new();
    for n in 1..=bound {
        let oracle = ideal_i.power(n as u32).sum(base.ideal())?;

        let reg_basis = standard_monomials(regularized.algebra.ideal(), n, Some(cap))?;
        let mut membership_ok = true;
        for mono in &reg_basis {
            let p = Polynomial::monomial(rees.context(), mono.clone(), rees.context().field().one());
            let image = rees.evaluate_to_base(&p)?;
            if !oracle.contains(&image)? {
                membership_ok = false;
            }
        }

        let mut lifts_ok = true;
        for exponents in compositions(n as u32, rees.data().elements().len()) {
            let mut witness = Polynomial::one(rees.context());
            let mut product = Polynomial::one(base_ctx);
            for (i, &e) in exponents.iter().enumerate() {
                let v = Polynomial::var(rees.context(), rees.v_indices()[i]);
                witness = witness.mul(&v.pow(e))?;
                product = product.mul(&rees.data().elements()[i].pow(e))?;
            }
            let evaluated = rees.evaluate_to_base(&witness)?;
            let diff = evaluated.sub(&product)?;
            if !base.ideal().contains(&diff)? {
                lifts_ok = false;
            }
        }

        let unreg_dim = standard_monomials(rees.ideal(), n, Some(cap))?.len();
        let reg_dim = reg_basis.len();
        degrees.push(DegreeComparison {
            degree: n,
            membership_ok,
            lifts_ok,
            unregularized_agrees: unreg_dim == reg_dim,
        });
    }
    let regularized_matches = degrees.iter().all(|d| d.membership_ok && d.lifts_ok);
    let unregularized_matches = degrees.iter().all(|d| d.unregularized_agrees);
    Ok(ClassicalComparison {
        bound,
        cap,
        t_regular,
        degrees,
        regularized_matches,
        unregularized_matches,
    })
}

/// All exponent vectors of length `k` summing to `n`.
fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, k - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// A presented extension A → A' by images of the ambient variables.
#[derive(Debug, Clone)]
pub struct RingExtension {
    pub target: GradedAlgebra,
    pub images: Vec<Polynomial>,
}

#[derive(Debug, Clone)]
pub struct BaseChangeReport {
    /// Rees presentation of (A', f').
    pub rees: ReesPresentation,
    /// The base-changed ideal J_{A'} + (vᵢu − φ(fᵢ)) in the same ambient.
    pub transported: Ideal,
    /// Presentation-level equality, verified by two-sided membership.
    pub equal: bool,
}

/// Base change of the Rees presentation along A → A'. Errors when the
/// variable images do not define a ring map (a base relation fails
/// membership in J_{A'}).
pub fn base_change(data: &ImmersionData, extension: &RingExtension) -> Result<BaseChangeReport> {
    let target = &extension.target;
    if target.context().weights().any(|w| w != 0) {
        return Err(Error::WeightedBase);
    }
    if extension.images.len() != data.base().context().num_vars() {
        return Err(Error::IllFormedPayload(
            "one image per base variable required".into(),
        ));
    }
    for g in data.base().ideal().generators() {
        let image = g.substitute(target.context(), &extension.images)?;
        if !target.ideal().contains(&image)? {
            return Err(Error::IllFormedPayload(format!(
                "relation {g} does not map into the target ideal"
            )));
        }
    }
    let mapped: Vec<Polynomial> = data
        .elements()
        .iter()
        .map(|f| f.substitute(target.context(), &extension.images))
        .collect::<Result<_>>()?;
    let left = rees_extended(&ImmersionData::new(target.clone(), mapped.clone())?)?;

    let ctx = left.context().clone();
    let u = left.u();
    let mut gens: Vec<Polynomial> = target
        .ideal()
        .generators()
        .iter()
        .map(|g| g.transport(&ctx))
        .collect::<Result<_>>()?;
    for (i, f) in mapped.iter().enumerate() {
        let v = Polynomial::var(&ctx, left.v_indices()[i]);
        gens.push(v.mul(&u)?.sub(&f.transport(&ctx)?)?);
    }
    let transported = Ideal::new(&ctx, gens)?;
    let equal = transported.equals(left.ideal());
    Ok(BaseChangeReport {
        rees: left,
        transported,
        equal,
    })
}

/// Payload for naturality in the target: ambient C, sequence a defining
/// A = C/(a), and sequence b lifting the ideal of B in A.
#[derive(Debug, Clone)]
pub struct TargetPayload {
    pub ambient: GradedAlgebra,
    pub quotient_seq: Vec<Polynomial>,
    pub center_seq: Vec<Polynomial>,
}

#[derive(Debug, Clone)]
pub struct TargetReport {
    pub source: ReesPresentation,
    pub target: ReesPresentation,
    /// Images of the source v-variables in the target, in order.
    pub v_images: Vec<Polynomial>,
    pub well_defined: bool,
    /// Per-degree surjectivity certificates (degree, target dimension, ok).
    pub surjective: Vec<(i64, usize, bool)>,
}

/// The graded map R_{B/C} → R_{B/A} sending the a-variables to 0, the
/// b-variables to the target v's, and u to u; verifies well-definedness and
/// degree-wise surjectivity up to `bound`.
pub fn target_functoriality(payload: &TargetPayload, bound: i64) -> Result<TargetReport> {
    let ambient = &payload.ambient;
    let m = payload.quotient_seq.len();
    let mut seq = payload.quotient_seq.clone();
    seq.extend(payload.center_seq.iter().cloned());
    let source = rees_extended(&ImmersionData::new(ambient.clone(), seq)?)?;

    let quotient_ideal = Ideal::new(ambient.context(), payload.quotient_seq.clone())?;
    let a_algebra = GradedAlgebra::new(
        ambient.context(),
        ambient.ideal().sum(&quotient_ideal)?,
        None,
    )?;
    let target = rees_extended(&ImmersionData::new(
        a_algebra,
        payload.center_seq.clone(),
    )?)?;

    let tctx = target.context().clone();
    let sctx = source.context();
    let mut images: Vec<Polynomial> = Vec::with_capacity(sctx.num_vars());
    let mut v_images = Vec::new();
    for i in 0..sctx.num_vars() {
        if i == source.u_index() {
            images.push(target.u());
        } else if let Some(pos) = source.v_indices().iter().position(|&v| v == i) {
            let img = if pos < m {
                Polynomial::zero(&tctx)
            } else {
                Polynomial::var(&tctx, target.v_indices()[pos - m])
            };
            v_images.push(img.clone());
            images.push(img);
        } else {
            let name = sctx.var_name(i);
            images.push(Polynomial::var(
                &tctx,
                tctx.var_index(name).ok_or_else(|| Error::UnknownVariable(name.into()))?,
            ));
        }
    }

    let mut well_defined = true;
    for g in source.ideal().generators() {
        let image = g.substitute(&tctx, &images)?;
        if !target.ideal().contains(&image)? {
            well_defined = false;
        }
    }

    // surjectivity: every target basis monomial is the image of the
    // corresponding source monomial
    let mut surjective = Vec::new();
    for d in 0..=bound {
        let basis = standard_monomials(target.ideal(), d, Some(bound.max(1) as u32))?;
        let mut ok = true;
        for mono in &basis {
            let mut preimage = Polynomial::one(sctx);
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let source_var = if i == target.u_index() {
                    source.u_index()
                } else if let Some(pos) = target.v_indices().iter().position(|&v| v == i) {
                    source.v_indices()[m + pos]
                } else {
                    sctx.var_index(tctx.var_name(i))
                        .ok_or_else(|| Error::UnknownVariable(tctx.var_name(i).into()))?
                };
                preimage = preimage.mul(&Polynomial::var(sctx, source_var).pow(e))?;
            }
            let image = preimage.substitute(&tctx, &images)?;
            let target_mono =
                Polynomial::monomial(&tctx, mono.clone(), tctx.field().one());
            let diff = image.sub(&target_mono)?;
            if !target.ideal().contains(&diff)? {
                ok = false;
            }
        }
        surjective.push((d, basis.len(), ok));
    }
    Ok(TargetReport {
        source,
        target,
        v_images,
        well_defined,
        surjective,
    })
}
