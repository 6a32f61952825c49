//! Proj atlases, blow-ups, exceptional divisors and the deformation to the
//! normal cone, all as presented charts with transition data.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::graded::{
    generated_in_degree_one, homogeneous_localization_chart, GenerationReport, GradedAlgebra,
};
use crate::ideal::{standard_monomials, Ideal};
use crate::poly::{Polynomial, WeightedDegree};
use crate::rees::{cone, rees_extended, ImmersionData, ReesPresentation};
use crate::ring::{MonomialOrder, RingContext};
use crate::scalar::Scalar;
use crate::Result;

/// Degree bound used for the generation-in-degree-1 certificate attached to
/// non-negative parts, and as the default report bound elsewhere.
pub const DEFAULT_BOUND: i64 = 6;

/// Exponent cap for weight-0 variables during bounded enumerations.
pub const DEFAULT_ENUM_CAP: u32 = 3;

/// A fraction of polynomials over a chart ring. Denominators are invertible
/// on the overlap where the expression is used; equality is decided by
/// cross-multiplication modulo the chart ideal, saturated at the
/// denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatExpr {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RatExpr {
    pub fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(p.context());
        RatExpr { num: p, den: one }
    }

    pub fn one(ctx: &RingContext) -> Self {
        RatExpr {
            num: Polynomial::one(ctx),
            den: Polynomial::one(ctx),
        }
    }

    pub fn mul(&self, other: &RatExpr) -> Result<RatExpr> {
        Ok(RatExpr {
            num: self.num.mul(&other.num)?,
            den: self.den.mul(&other.den)?,
        })
    }

    pub fn add(&self, other: &RatExpr) -> Result<RatExpr> {
        Ok(RatExpr {
            num: self
                .num
                .mul(&other.den)?
                .add(&other.num.mul(&self.den)?)?,
            den: self.den.mul(&other.den)?,
        })
    }

    /// Integer power; negative exponents swap numerator and denominator.
    pub fn int_pow(&self, n: i64) -> RatExpr {
        if n >= 0 {
            RatExpr {
                num: self.num.pow(n as u32),
                den: self.den.pow(n as u32),
            }
        } else {
            RatExpr {
                num: self.den.pow((-n) as u32),
                den: self.num.pow((-n) as u32),
            }
        }
    }

    /// Substitutes rational expressions for the variables of `p`.
    pub fn substitute_into(
        p: &Polynomial,
        target: &RingContext,
        images: &[RatExpr],
    ) -> Result<RatExpr> {
        let mut acc = RatExpr {
            num: Polynomial::zero(target),
            den: Polynomial::one(target),
        };
        for (mono, coeff) in p.terms() {
            let mut term = RatExpr::from_poly(Polynomial::constant(target, coeff.clone()));
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].int_pow(e as i64))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn substitute(&self, target: &RingContext, images: &[RatExpr]) -> Result<RatExpr> {
        let num = RatExpr::substitute_into(&self.num, target, images)?;
        let den = RatExpr::substitute_into(&self.den, target, images)?;
        Ok(RatExpr {
            num: num.num.mul(&den.den)?,
            den: num.den.mul(&den.num)?,
        })
    }

    /// Equality on the overlap: cross-multiplied difference lies in the
    /// chart ideal saturated at the denominators.
    pub fn equivalent(&self, other: &RatExpr, ideal: &Ideal) -> Result<bool> {
        let cross = self
            .num
            .mul(&other.den)?
            .sub(&other.num.mul(&self.den)?)?;
        if ideal.contains(&cross)? {
            return Ok(true);
        }
        let dens = self.den.mul(&other.den)?;
        if dens.is_zero() {
            return Ok(false);
        }
        let (saturated, _) = ideal.saturation(&dens)?;
        saturated.contains(&cross)
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// An affine chart of a Proj: the dehomogenized presentation at a degree-1
/// center, together with the substitution that produced it.
#[derive(Debug, Clone)]
pub struct Chart {
    /// The chart coordinate ring (all weights 0).
    pub ring: GradedAlgebra,
    /// Ambient context the chart was cut from.
    pub source_ctx: RingContext,
    /// The degree-1 center f, in the source context.
    pub center: Polynomial,
    /// Variable index of the center when it is one.
    pub center_index: Option<usize>,
    /// Chart expression for each source variable (center ↦ 1, other degree-1
    /// variables ↦ their w-variable, weight-0 variables ↦ themselves).
    pub substitution: Vec<Polynomial>,
    /// Source variable index behind each chart variable.
    pub source_vars: Vec<usize>,
    /// Principal exceptional generator, when attached by a blow-up.
    pub exceptional: Option<Polynomial>,
}

impl Chart {
    pub fn is_zero_ring(&self) -> bool {
        self.ring.is_zero_ring()
    }

    /// Expresses an element of the source ring (or any ring whose variables
    /// are a subset by name) in chart coordinates.
    pub fn express(&self, p: &Polynomial) -> Result<Polynomial> {
        let lifted = p.transport(&self.source_ctx)?;
        lifted.substitute(self.ring.context(), &self.substitution)
    }
}

/// Transition data from one chart to another: a rational expression per
/// chart variable.
#[derive(Debug, Clone)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    /// Image of each chart-`from` variable in chart-`to` coordinates.
    pub images: Vec<RatExpr>,
}

/// Affine atlas of a Proj: one chart per chosen degree-1 generator plus
/// pairwise transition substitutions.
#[derive(Debug, Clone)]
pub struct ProjAtlas {
    pub source: GradedAlgebra,
    pub generators: Vec<Polynomial>,
    pub charts: Vec<Chart>,
    /// Whether the supplied generators generate the irrelevant ideal.
    pub generators_generate: bool,
    /// Whether all 2-cycle transition compositions are the identity.
    pub transitions_consistent: bool,
}

impl ProjAtlas {
    /// Generator `i` expressed in chart-`j` coordinates (the center of
    /// chart `j` becomes 1, so this is the unit vᵢ/vⱼ on the overlap).
    pub fn generator_in_chart(&self, i: usize, j: usize) -> Result<RatExpr> {
        let expr = self.charts[j].express(&self.generators[i])?;
        Ok(RatExpr::from_poly(expr))
    }

    /// Transition from chart `i` to chart `j` coordinates:
    /// w_s^{(i)} = (s in chart j) / (center_i in chart j).
    pub fn transition(&self, i: usize, j: usize) -> Result<Transition> {
        let chart_i = &self.charts[i];
        let chart_j = &self.charts[j];
        let den = chart_j.express(&self.generators[i].restrict(&chart_i.source_ctx)?)?;
        let mut images = Vec::new();
        for &s in &chart_i.source_vars {
            let num = chart_j.substitution[s].clone();
            if chart_i.source_ctx.weight(s) == 0 {
                images.push(RatExpr::from_poly(num));
            } else {
                images.push(RatExpr {
                    num,
                    den: den.clone(),
                });
            }
        }
        Ok(Transition {
            from: i,
            to: j,
            images,
        })
    }

    /// Checks that composing i→j→i is the identity on chart-i generators.
    pub fn roundtrip_is_identity(&self, i: usize, j: usize) -> Result<bool> {
        let forward = self.transition(i, j)?;
        let backward = self.transition(j, i)?;
        let ctx_i = self.charts[i].ring.context();
        for (p, image) in forward.images.iter().enumerate() {
            let composed = image.substitute(ctx_i, &backward.images)?;
            let var = RatExpr::from_poly(Polynomial::var(ctx_i, p));
            if !composed.equivalent(&var, self.charts[i].ring.ideal())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty() || self.charts.iter().all(|c| c.is_zero_ring())
    }
}

/// True iff every chart ring is the zero ring or there are no charts.
pub fn is_empty_atlas(atlas: &ProjAtlas) -> bool {
    atlas.is_empty()
}

/// Builds the affine atlas of Proj B from degree-1 generators.
pub fn proj_atlas(algebra: &GradedAlgebra, generators: &[Polynomial]) -> Result<ProjAtlas> {
    let ctx = algebra.context();
    if ctx.weights().any(|w| w < 0) {
        return Err(Error::NotNGraded);
    }
    for g in generators {
        match g.weighted_degree() {
            WeightedDegree::Homogeneous(1) => {}
            _ => return Err(Error::NotDegreeOne(g.to_string())),
        }
    }
    // do the generators span the irrelevant ideal?
    let mut gen_ideal_gens: Vec<Polynomial> = generators.to_vec();
    gen_ideal_gens.extend(algebra.ideal().generators().iter().cloned());
    let gen_ideal = Ideal::new(ctx, gen_ideal_gens)?;
    let mut generators_generate = true;
    for i in 0..ctx.num_vars() {
        if ctx.weight(i) > 0 && !gen_ideal.contains(&Polynomial::var(ctx, i))? {
            generators_generate = false;
        }
    }

    let charts: Vec<Chart> = generators
        .iter()
        .map(|g| homogeneous_localization_chart(algebra, g))
        .collect::<Result<_>>()?;

    let mut atlas = ProjAtlas {
        source: algebra.clone(),
        generators: generators.to_vec(),
        charts,
        generators_generate,
        transitions_consistent: true,
    };
    for i in 0..atlas.charts.len() {
        for j in 0..atlas.charts.len() {
            if i != j && !atlas.roundtrip_is_identity(i, j)? {
                atlas.transitions_consistent = false;
            }
        }
    }
    Ok(atlas)
}

/// The non-negative part R_{≥0} of an extended Rees presentation, with a
/// generation-in-degree-1 certificate attached.
#[derive(Debug, Clone)]
pub struct NonNegPart {
    pub algebra: GradedAlgebra,
    pub generation: GenerationReport,
}

/// Presents R_{≥0} on x̄ ∪ v̄ by eliminating u from the Rees ideal.
pub fn nonneg_part(rees: &ReesPresentation) -> Result<NonNegPart> {
    let eliminated = rees
        .ideal()
        .eliminate(&BTreeSet::from([rees.u_index()]))?;
    let ctx = eliminated.context().clone();
    let algebra = GradedAlgebra::new(&ctx, eliminated, None)?;
    let generation = generated_in_degree_one(&algebra, DEFAULT_BOUND, Some(DEFAULT_ENUM_CAP))?;
    Ok(NonNegPart {
        algebra,
        generation,
    })
}

/// Transports the v-variables of a Rees presentation into a context derived
/// from it by eliminating u.
fn v_generators(rees: &ReesPresentation, ctx: &RingContext) -> Result<Vec<Polynomial>> {
    rees.v_indices()
        .iter()
        .map(|&i| {
            let name = rees.context().var_name(i);
            let idx = ctx
                .var_index(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            Ok(Polynomial::var(ctx, idx))
        })
        .collect()
}

/// Blow-up Bl_Z X = Proj R_{≥0}: one chart per v-variable, carrying its
/// principal exceptional generator (the image of fⱼ).
pub fn blow_up(data: &ImmersionData) -> Result<ProjAtlas> {
    let rees = rees_extended(data)?;
    let part = nonneg_part(&rees)?;
    let gens = v_generators(&rees, part.algebra.context())?;
    let mut atlas = proj_atlas(&part.algebra, &gens)?;
    for (j, chart) in atlas.charts.iter_mut().enumerate() {
        let f = &data.elements()[j];
        chart.exceptional = Some(chart.express(f)?);
    }
    Ok(atlas)
}

/// Exceptional divisor data: the atlas of E = Proj R̄ plus the chart-wise
/// comparison with the blow-up and the degree-wise κ surjectivity check.
#[derive(Debug, Clone)]
pub struct ExceptionalDivisor {
    pub atlas: ProjAtlas,
    /// Per chart: does the E-chart equal the Bl-chart modulo its principal
    /// exceptional generator?
    pub chart_agreement: Vec<bool>,
    pub kappa: KappaReport,
}

/// Report on κ: i*R_{Z/X} → R̄ (vⱼ ↦ vⱼ).
#[derive(Debug, Clone)]
pub struct KappaReport {
    /// The source ideal maps into the cone ideal.
    pub well_defined: bool,
    /// Per degree: (degree, source dimension, cone dimension, spanned).
    pub degrees: Vec<(i64, usize, usize, bool)>,
    pub surjective: bool,
}

pub fn exceptional_divisor(data: &ImmersionData, bound: i64) -> Result<ExceptionalDivisor> {
    let rees = rees_extended(data)?;
    let cone_algebra = cone(&rees)?;
    let cone_ctx = cone_algebra.context().clone();
    let gens = v_generators(&rees, &cone_ctx)?;
    let mut atlas = proj_atlas(&cone_algebra, &gens)?;

    let bl = blow_up(data)?;
    let mut chart_agreement = Vec::new();
    for (j, chart) in atlas.charts.iter_mut().enumerate() {
        let bl_chart = &bl.charts[j];
        let exceptional = bl_chart.exceptional.clone().expect("attached by blow_up");
        chart.exceptional = Some(exceptional.clone());
        let cut = bl_chart
            .ring
            .ideal()
            .sum(&Ideal::new(bl_chart.ring.context(), vec![exceptional])?)?;
        chart_agreement.push(chart.ring.ideal().equals(&cut));
    }

    // κ: (R_{≥0} ⊗ B) → R̄ on the shared ambient x̄ ∪ v̄
    let part = nonneg_part(&rees)?;
    let pullback_gens: Vec<Polynomial> = data
        .elements()
        .iter()
        .map(|f| f.transport(&cone_ctx))
        .collect::<Result<_>>()?;
    let source_ideal = part
        .algebra
        .ideal()
        .sum(&Ideal::new(&cone_ctx, pullback_gens)?)?;
    let mut well_defined = true;
    for g in source_ideal.generators() {
        if !cone_algebra.ideal().contains(g)? {
            well_defined = false;
        }
    }
    let mut degrees = Vec::new();
    let mut surjective = true;
    for d in 0..=bound {
        let cap = Some(bound.max(1) as u32);
        let source_dim = standard_monomials(&source_ideal, d, cap)?.len();
        let cone_basis = standard_monomials(cone_algebra.ideal(), d, cap)?;
        // identity on monomials: each cone basis monomial is its own image,
        // so the degree-d piece is spanned iff the source piece is at least
        // as large and the map is well defined
        let spanned = well_defined && source_dim >= cone_basis.len();
        if !spanned {
            surjective = false;
        }
        degrees.push((d, source_dim, cone_basis.len(), spanned));
    }
    Ok(ExceptionalDivisor {
        atlas,
        chart_agreement,
        kappa: KappaReport {
            well_defined,
            degrees,
            surjective,
        },
    })
}

/// The Rees presentation viewed as a family over the u-line.
#[derive(Debug, Clone)]
pub struct DeformationFamily {
    pub rees: ReesPresentation,
}

impl DeformationFamily {
    pub fn new(rees: ReesPresentation) -> Self {
        DeformationFamily { rees }
    }

    pub fn fiber(&self, c: &Scalar) -> Result<Fiber> {
        deformation_fiber(&self.rees, c)
    }
}

/// A fiber of the deformation family.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub algebra: GradedAlgebra,
    /// The fiber at 0 is the cone, returned verbatim with its grading.
    pub at_zero: bool,
    /// For c ≠ 0, the verified isomorphism with the base via vᵢ ↦ fᵢ/c.
    pub iso_to_base: Option<FiberIso>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberIso {
    /// Fiber relations map into the base ideal under vᵢ ↦ fᵢ/c.
    pub forward_ok: bool,
    /// Base relations hold in the fiber.
    pub backward_ok: bool,
    /// vᵢ − fᵢ/c vanishes in the fiber (the two maps compose to the
    /// identity on generators).
    pub composite_ok: bool,
}

impl FiberIso {
    pub fn verified(&self) -> bool {
        self.forward_ok && self.backward_ok && self.composite_ok
    }
}

/// Fiber of Spec R over u = c: adjoin (u − c) and eliminate u. The zero
/// fiber is the cone; nonzero fibers are ungraded (all weights 0) and come
/// with a verified isomorphism to the base.
pub fn deformation_fiber(rees: &ReesPresentation, c: &Scalar) -> Result<Fiber> {
    if c.is_zero() {
        return Ok(Fiber {
            algebra: cone(rees)?,
            at_zero: true,
            iso_to_base: None,
        });
    }
    let ctx = rees.context();
    let u_minus_c = rees
        .u()
        .sub(&Polynomial::constant(ctx, c.clone()))?;
    let with_fiber = rees
        .ideal()
        .sum(&Ideal::new(ctx, vec![u_minus_c])?)?;
    let eliminated = with_fiber.eliminate(&BTreeSet::from([rees.u_index()]))?;

    // nonzero fibers lose the grading: same variable names, all weights 0
    let flat_ctx = RingContext::new(
        *ctx.field(),
        eliminated
            .context()
            .vars()
            .iter()
            .map(|v| (v.name.clone(), 0))
            .collect(),
        MonomialOrder::GrevLex,
    )?;
    let gens: Vec<Polynomial> = eliminated
        .generators()
        .iter()
        .map(|g| g.transport(&flat_ctx))
        .collect::<Result<_>>()?;
    let fiber_ideal = Ideal::new(&flat_ctx, gens)?;
    let algebra = GradedAlgebra::new(&flat_ctx, fiber_ideal, None)?;

    // isomorphism with the base: xᵢ ↦ xᵢ, vᵢ ↦ fᵢ/c
    let base = rees.data().base();
    let base_ctx = base.context();
    let c_inv = c.inv();
    let mut images = Vec::with_capacity(flat_ctx.num_vars());
    for i in 0..flat_ctx.num_vars() {
        let name = flat_ctx.var_name(i);
        if let Some(pos) = rees
            .v_indices()
            .iter()
            .position(|&v| rees.context().var_name(v) == name)
        {
            images.push(rees.data().elements()[pos].scale(&c_inv));
        } else {
            images.push(Polynomial::var(
                base_ctx,
                base_ctx
                    .var_index(name)
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?,
            ));
        }
    }
    let mut forward_ok = true;
    for g in algebra.ideal().generators() {
        if !base.ideal().contains(&g.substitute(base_ctx, &images)?)? {
            forward_ok = false;
        }
    }
    let mut backward_ok = true;
    for g in base.ideal().generators() {
        if !algebra.ideal().contains(&g.transport(&flat_ctx)?)? {
            backward_ok = false;
        }
    }
    let mut composite_ok = true;
    for (pos, &v) in rees.v_indices().iter().enumerate() {
        let name = rees.context().var_name(v);
        let v_var = Polynomial::var(&flat_ctx, flat_ctx.var_index(name).unwrap());
        let image = rees.data().elements()[pos]
            .scale(&c_inv)
            .transport(&flat_ctx)?;
        if !algebra.ideal().contains(&v_var.sub(&image)?)? {
            composite_ok = false;
        }
    }
    Ok(Fiber {
        algebra,
        at_zero: false,
        iso_to_base: Some(FiberIso {
            forward_ok,
            backward_ok,
            composite_ok,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_polynomial;
    use crate::ring::FieldSpec;

    fn base(vars: &[&str], gens: &[&str]) -> GradedAlgebra {
        let ctx = RingContext::new(
            FieldSpec::Rational,
            vars.iter().map(|n| (n.to_string(), 0)).collect(),
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let ideal = Ideal::new(
            &ctx,
            gens.iter()
                .map(|g| parse_polynomial(g, &ctx).unwrap())
                .collect(),
        )
        .unwrap();
        GradedAlgebra::new(&ctx, ideal, None).unwrap()
    }

    fn immersion(base_alg: &GradedAlgebra, elements: &[&str]) -> ImmersionData {
        let ctx = base_alg.context();
        ImmersionData::new(
            base_alg.clone(),
            elements
                .iter()
                .map(|f| parse_polynomial(f, ctx).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn nonneg_part_of_origin_rees() {
        let a = base(&["x", "y"], &[]);
        let rees = rees_extended(&immersion(&a, &["x", "y"])).unwrap();
        let part = nonneg_part(&rees).unwrap();
        let ctx = part.algebra.context().clone();
        let expected = Ideal::new(
            &ctx,
            vec![parse_polynomial("y*v1 - x*v2", &ctx).unwrap()],
        )
        .unwrap();
        assert!(part.algebra.ideal().equals(&expected));
        assert!(part.generation.generated);
    }

    #[test]
    fn nonneg_part_of_zero_element_is_free_line() {
        let a = base(&["x"], &[]);
        let rees = rees_extended(&immersion(&a, &["0"])).unwrap();
        let part = nonneg_part(&rees).unwrap();
        assert!(part.algebra.ideal().is_zero_ideal());
        assert_eq!(part.algebra.context().num_vars(), 2);
    }

    #[test]
    fn projective_line_atlas() {
        let ctx = RingContext::new(
            FieldSpec::Rational,
            vec![("v1".into(), 1), ("v2".into(), 1)],
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let b = GradedAlgebra::new(&ctx, Ideal::zero(&ctx), None).unwrap();
        let gens = vec![Polynomial::var(&ctx, 0), Polynomial::var(&ctx, 1)];
        let atlas = proj_atlas(&b, &gens).unwrap();
        assert_eq!(atlas.charts.len(), 2);
        assert!(atlas.generators_generate);
        assert!(atlas.transitions_consistent);
        assert!(!atlas.is_empty());
        for chart in &atlas.charts {
            assert_eq!(chart.ring.context().num_vars(), 1);
            assert!(chart.ring.ideal().is_zero_ideal());
        }
        // transition sends w to 1/w
        let t = atlas.transition(0, 1).unwrap();
        assert_eq!(t.images[0].num.to_string(), "1");
        assert_eq!(t.images[0].den.to_string(), "w");
    }

    #[test]
    fn empty_bplus_gives_empty_atlas() {
        let a = base(&["x"], &[]);
        let atlas = blow_up(&immersion(&a, &[])).unwrap();
        assert!(atlas.charts.is_empty());
        assert!(is_empty_atlas(&atlas));
    }

    #[test]
    fn blow_up_of_plane_origin() {
        let a = base(&["x", "y"], &[]);
        let atlas = blow_up(&immersion(&a, &["x", "y"])).unwrap();
        assert_eq!(atlas.charts.len(), 2);
        assert!(atlas.transitions_consistent);
        let c0 = &atlas.charts[0];
        let cc = c0.ring.context().clone();
        let expected = Ideal::new(&cc, vec![parse_polynomial("y - x*w", &cc).unwrap()]).unwrap();
        assert!(c0.ring.ideal().equals(&expected));
        assert_eq!(c0.exceptional.as_ref().unwrap().to_string(), "x");
        assert_eq!(atlas.charts[1].exceptional.as_ref().unwrap().to_string(), "y");
    }

    #[test]
    fn blow_up_degenerate_cases() {
        let a = base(&["x"], &["x^3 - x"]);
        // f = (1): single chart isomorphic to A
        let unit = blow_up(&immersion(&a, &["1"])).unwrap();
        assert_eq!(unit.charts.len(), 1);
        assert!(!is_empty_atlas(&unit));
        let chart = &unit.charts[0];
        let cc = chart.ring.context().clone();
        let expected =
            Ideal::new(&cc, vec![parse_polynomial("x^3 - x", &cc).unwrap()]).unwrap();
        assert!(chart.ring.ideal().equals(&expected));

        // f = (0): also a single chart isomorphic to A
        let zero = blow_up(&immersion(&a, &["0"])).unwrap();
        assert_eq!(zero.charts.len(), 1);
        assert!(zero.charts[0].ring.ideal().equals(&expected));
    }

    #[test]
    fn exceptional_divisor_of_origin() {
        let a = base(&["x", "y"], &[]);
        let e = exceptional_divisor(&immersion(&a, &["x", "y"]), 4).unwrap();
        assert_eq!(e.atlas.charts.len(), 2);
        assert!(e.chart_agreement.iter().all(|&ok| ok));
        assert!(e.kappa.well_defined);
        assert!(e.kappa.surjective);
        // E is the projective line: chart rings are k[w]
        for chart in &e.atlas.charts {
            let cc = chart.ring.context();
            let nonzero_vars: Vec<&str> = cc
                .vars()
                .iter()
                .map(|v| v.name.as_str())
                .filter(|n| {
                    let idx = cc.var_index(n).unwrap();
                    let var = Polynomial::var(cc, idx);
                    !chart.ring.ideal().contains(&var).unwrap()
                })
                .collect();
            assert_eq!(nonzero_vars, vec!["w"]);
        }
    }

    #[test]
    fn exceptional_divisor_of_unit_is_empty() {
        let a = base(&["x"], &[]);
        let e = exceptional_divisor(&immersion(&a, &["1"]), 2).unwrap();
        assert!(is_empty_atlas(&e.atlas));
    }

    #[test]
    fn deformation_fibers() {
        let a = base(&["x", "y"], &[]);
        let rees = rees_extended(&immersion(&a, &["x", "y"])).unwrap();
        let family = DeformationFamily::new(rees.clone());

        let zero = family.fiber(&FieldSpec::Rational.from_integer(0)).unwrap();
        assert!(zero.at_zero);
        assert!(zero.algebra.equals(&cone(&rees).unwrap()));

        for c in [1, 2] {
            let fiber = family.fiber(&FieldSpec::Rational.from_integer(c)).unwrap();
            assert!(!fiber.at_zero);
            let iso = fiber.iso_to_base.unwrap();
            assert!(iso.verified());
        }
    }
}
