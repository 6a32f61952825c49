//! Statement execution against named bindings.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use rees_blowup::blowup::{
    blow_up, deformation_fiber, exceptional_divisor, nonneg_part, proj_atlas, ProjAtlas,
};
use rees_blowup::graded::{
    generated_in_degree_one, homogeneous_localization_chart, split_additivity, split_degree_zero,
    twist_cocycle, veronese, GradedAlgebra,
};
use rees_blowup::ideal::{annihilator, map_kernel, regular_sequence_test, Ideal};
use rees_blowup::parser::parse_polynomial;
use rees_blowup::poly::Polynomial;
use rees_blowup::rees::{
    base_change, compare_to_classical, cone, rees_extended, regularize, t_regularity,
    target_functoriality, ImmersionData, ReesPresentation, RingExtension, TargetPayload,
};
use rees_blowup::ring::{FieldSpec, MonomialOrder, RingContext};
use rees_blowup::Scalar;

use crate::Options;

pub struct Session {
    options: Options,
    algebras: BTreeMap<String, GradedAlgebra>,
    ideals: BTreeMap<String, Ideal>,
    rees: BTreeMap<String, ReesPresentation>,
    atlases: BTreeMap<String, ProjAtlas>,
}

type Exec = Result<(String, Value), String>;

fn fail<T>(message: impl Into<String>) -> Result<T, String> {
    Err(message.into())
}

fn core_err(e: rees_blowup::Error) -> String {
    e.to_string()
}

/// Splits off the first whitespace-delimited word.
fn next_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(pos) => (&s[..pos], s[pos..].trim_start()),
        None => (s, ""),
    }
}

/// Reads a leading `[...]` group, returning its comma-split entries.
fn bracket_list(s: &str) -> Result<(Vec<String>, &str), String> {
    let s = s.trim_start();
    if !s.starts_with('[') {
        return fail(format!("expected `[` at `{s}`"));
    }
    let close = s
        .find(']')
        .ok_or_else(|| "unterminated `[` group".to_string())?;
    let inner = &s[1..close];
    let rest = s[close + 1..].trim_start();
    let entries: Vec<String> = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|e| e.trim().to_string()).collect()
    };
    Ok((entries, rest))
}

pub(crate) fn parse_field(token: &str) -> Result<FieldSpec, String> {
    if token == "QQ" {
        return Ok(FieldSpec::Rational);
    }
    if let Some(p) = token.strip_prefix("Fp:") {
        let p: u64 = p.parse().map_err(|_| format!("bad prime `{p}`"))?;
        return FieldSpec::prime(p).map_err(core_err);
    }
    fail(format!("unknown field `{token}` (use QQ or Fp:<p>)"))
}

fn parse_var_decl(entry: &str) -> Result<(String, i64), String> {
    match entry.split_once(':') {
        Some((name, weight)) => {
            let weight: i64 = weight
                .trim()
                .parse()
                .map_err(|_| format!("bad weight in `{entry}`"))?;
            Ok((name.trim().to_string(), weight))
        }
        None => Ok((entry.trim().to_string(), 0)),
    }
}

fn expect_eq(rest: &str) -> Result<&str, String> {
    let (tok, rest) = next_word(rest);
    if tok != "=" {
        return fail(format!("expected `=`, found `{tok}`"));
    }
    Ok(rest)
}

fn json_polys(polys: &[Polynomial]) -> Value {
    Value::Array(
        polys
            .iter()
            .map(|p| Value::String(p.to_string()))
            .collect(),
    )
}

fn json_weights(ctx: &RingContext) -> Value {
    let mut map = serde_json::Map::new();
    for v in ctx.vars() {
        map.insert(v.name.clone(), json!(v.weight));
    }
    Value::Object(map)
}

/// Ordered context description; enough to rebuild the ring and re-parse the
/// generator strings.
fn json_context(ctx: &RingContext) -> Value {
    json!({
        "field": ctx.field().to_string(),
        "vars": ctx
            .vars()
            .iter()
            .map(|v| json!([v.name, v.weight]))
            .collect::<Vec<_>>(),
    })
}

/// Canonical generator list of a computed ideal: its reduced grevlex basis.
fn canonical_gens(ideal: &Ideal) -> Vec<Polynomial> {
    ideal.groebner(&MonomialOrder::GrevLex).basis().to_vec()
}

fn fmt_gens(polys: &[Polynomial]) -> String {
    let items: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
    format!("({})", items.join(", "))
}

fn fmt_algebra(alg: &GradedAlgebra) -> String {
    let mut s = format!("{}", alg.context());
    if !alg.ideal().is_zero_ideal() {
        s.push_str(&format!(" / {}", fmt_gens(alg.ideal().generators())));
    }
    s
}

fn json_algebra(name: Option<&str>, alg: &GradedAlgebra) -> Value {
    json!({
        "kind": "algebra",
        "name": name,
        "generators": json_polys(alg.ideal().generators()),
        "weights": json_weights(alg.context()),
        "context": json_context(alg.context()),
    })
}

impl Session {
    pub fn new(options: Options) -> Self {
        Session {
            options,
            algebras: BTreeMap::new(),
            ideals: BTreeMap::new(),
            rees: BTreeMap::new(),
            atlases: BTreeMap::new(),
        }
    }

    fn bind_algebra(&mut self, name: &str, alg: GradedAlgebra) -> Result<(), String> {
        if self.algebras.contains_key(name) {
            return fail(format!("ring `{name}` is already bound"));
        }
        self.algebras
            .insert(name.to_string(), alg.with_name(name.to_string()));
        Ok(())
    }

    fn bind_ideal(&mut self, name: &str, ideal: Ideal) -> Result<(), String> {
        if self.ideals.contains_key(name) {
            return fail(format!("ideal `{name}` is already bound"));
        }
        self.ideals.insert(name.to_string(), ideal);
        Ok(())
    }

    fn bind_rees(&mut self, name: &str, rees: ReesPresentation) -> Result<(), String> {
        if self.rees.contains_key(name) {
            return fail(format!("rees `{name}` is already bound"));
        }
        self.rees.insert(name.to_string(), rees);
        Ok(())
    }

    fn bind_atlas(&mut self, name: &str, atlas: ProjAtlas) -> Result<(), String> {
        if self.atlases.contains_key(name) {
            return fail(format!("atlas `{name}` is already bound"));
        }
        self.atlases.insert(name.to_string(), atlas);
        Ok(())
    }

    fn algebra(&self, name: &str) -> Result<&GradedAlgebra, String> {
        self.algebras
            .get(name)
            .ok_or_else(|| format!("unknown ring `{name}`"))
    }

    fn ideal(&self, name: &str) -> Result<&Ideal, String> {
        self.ideals
            .get(name)
            .ok_or_else(|| format!("unknown ideal `{name}`"))
    }

    fn rees_binding(&self, name: &str) -> Result<&ReesPresentation, String> {
        self.rees
            .get(name)
            .ok_or_else(|| format!("unknown rees presentation `{name}`"))
    }

    fn atlas(&self, name: &str) -> Result<&ProjAtlas, String> {
        self.atlases
            .get(name)
            .ok_or_else(|| format!("unknown atlas `{name}`"))
    }

    /// Rees binding or graded-algebra binding, for regularize/treg.
    fn graded_over_u(&self, name: &str) -> Result<GradedAlgebra, String> {
        if let Some(r) = self.rees.get(name) {
            return Ok(r.algebra().clone());
        }
        self.algebra(name).cloned()
    }

    fn parse_in(&self, ctx: &RingContext, text: &str) -> Result<Polynomial, String> {
        parse_polynomial(text, ctx).map_err(core_err)
    }

    fn parse_list(&self, ctx: &RingContext, entries: &[String]) -> Result<Vec<Polynomial>, String> {
        entries.iter().map(|e| self.parse_in(ctx, e)).collect()
    }

    pub fn execute(&mut self, stmt: &str) -> Exec {
        let (head, rest) = next_word(stmt);
        match head {
            "ring" => self.cmd_ring(rest, false),
            "graded" => self.cmd_ring(rest, true),
            "ideal" => self.cmd_ideal(rest),
            "gb" => self.cmd_gb(rest),
            "nf" => self.cmd_nf(rest),
            "member" => self.cmd_member(rest),
            "quotient" => self.cmd_quotient(rest),
            "intersect" => self.cmd_intersect(rest),
            "saturate" => self.cmd_saturate(rest),
            "eliminate" => self.cmd_eliminate(rest),
            "kernel" => self.cmd_kernel(rest),
            "regseq" => self.cmd_regseq(rest),
            "ann" => self.cmd_ann(rest),
            "hilbert" => self.cmd_hilbert(rest),
            "piece" => self.cmd_piece(rest),
            "split" => self.cmd_split(rest),
            "chart" => self.cmd_chart(rest),
            "veronese" => self.cmd_veronese(rest),
            "gendeg1" => self.cmd_gendeg1(rest),
            "twist" => self.cmd_twist(rest),
            "rees" => self.cmd_rees(rest),
            "cone" => self.cmd_cone(rest),
            "regularize" => self.cmd_regularize(rest),
            "treg" => self.cmd_treg(rest),
            "compare-classical" => self.cmd_compare_classical(rest),
            "naturality" => self.cmd_naturality(rest),
            "nonneg" => self.cmd_nonneg(rest),
            "proj" => self.cmd_proj(rest),
            "blowup" => self.cmd_blowup(rest),
            "exceptional" => self.cmd_exceptional(rest),
            "empty" => self.cmd_empty(rest),
            "deform" => self.cmd_deform(rest),
            other => fail(format!("unknown command `{other}`")),
        }
    }

    /// `ring NAME FIELD? [x:0, ...] (mod [p, ...])?`; `graded` is the same
    /// with arbitrary weights, `ring` requires weight 0 everywhere. When
    /// the field token is omitted the session default (`--field`) applies.
    fn cmd_ring(&mut self, rest: &str, graded: bool) -> Exec {
        let (name, rest) = next_word(rest);
        if name.is_empty() {
            return fail("expected a binding name");
        }
        let (field, rest) = if rest.trim_start().starts_with('[') {
            (self.options.field, rest)
        } else {
            let (field_tok, rest) = next_word(rest);
            (parse_field(field_tok)?, rest)
        };
        let (vars, rest) = bracket_list(rest)?;
        let vars: Vec<(String, i64)> = vars
            .iter()
            .map(|v| parse_var_decl(v))
            .collect::<Result<_, _>>()?;
        if !graded {
            if let Some((bad, w)) = vars.iter().find(|(_, w)| *w != 0) {
                return fail(format!(
                    "ring variables must have weight 0 (got {bad}:{w}); use `graded` for weighted rings"
                ));
            }
        }
        let ctx = RingContext::new(field, vars, self.options.order.clone()).map_err(core_err)?;
        let ideal = if rest.is_empty() {
            Ideal::zero(&ctx)
        } else {
            let (kw, rest) = next_word(rest);
            if kw != "mod" {
                return fail(format!("expected `mod`, found `{kw}`"));
            }
            let (gens, tail) = bracket_list(rest)?;
            if !tail.is_empty() {
                return fail(format!("trailing input `{tail}`"));
            }
            Ideal::new(&ctx, self.parse_list(&ctx, &gens)?).map_err(core_err)?
        };
        let algebra = GradedAlgebra::new(&ctx, ideal, None).map_err(core_err)?;
        self.bind_algebra(name, algebra)?;
        let bound = &self.algebras[name];
        Ok((
            format!("{bound}"),
            json_algebra(Some(name), bound),
        ))
    }

    /// `ideal NAME in RING = [p, ...]`
    fn cmd_ideal(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let (kw, rest) = next_word(rest);
        if kw != "in" {
            return fail(format!("expected `in`, found `{kw}`"));
        }
        let (ring, rest) = next_word(rest);
        let ctx = self.algebra(ring)?.context().clone();
        let rest = expect_eq(rest)?;
        let (gens, tail) = bracket_list(rest)?;
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let ideal = Ideal::new(&ctx, self.parse_list(&ctx, &gens)?).map_err(core_err)?;
        let printed = fmt_gens(ideal.generators());
        let json = json!({
            "kind": "ideal",
            "name": name,
            "generators": json_polys(ideal.generators()),
            "weights": json_weights(&ctx),
            "context": json_context(&ctx),
        });
        self.bind_ideal(name, ideal)?;
        Ok((format!("{name} = {printed}"), json))
    }

    /// `gb IDEAL`
    fn cmd_gb(&mut self, rest: &str) -> Exec {
        let (name, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let ideal = self.ideal(name)?;
        let order = self.options.order.clone();
        let gb = ideal.groebner(&order);
        let items: Vec<String> = gb.basis().iter().map(|p| p.to_string()).collect();
        Ok((
            format!("gb({name}) [{order}] = {{{}}}", items.join(", ")),
            json!({
                "kind": "groebner",
                "name": name,
                "order": order.to_string(),
                "generators": json_polys(gb.basis()),
            }),
        ))
    }

    /// `nf IDEAL expr`
    fn cmd_nf(&mut self, rest: &str) -> Exec {
        let (name, expr) = next_word(rest);
        let ideal = self.ideal(name)?;
        let p = self.parse_in(ideal.context(), expr)?;
        let nf = ideal
            .normal_form(&p, &self.options.order)
            .map_err(core_err)?;
        Ok((
            format!("nf = {nf}"),
            json!({ "kind": "polynomial", "value": nf.to_string() }),
        ))
    }

    /// `member IDEAL expr`
    fn cmd_member(&mut self, rest: &str) -> Exec {
        let (name, expr) = next_word(rest);
        let ideal = self.ideal(name)?;
        let p = self.parse_in(ideal.context(), expr)?;
        let member = ideal.contains(&p).map_err(core_err)?;
        Ok((
            format!("member: {member}"),
            json!({ "kind": "bool", "value": member }),
        ))
    }

    /// `quotient NAME = I : J`
    fn cmd_quotient(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (lhs, rest) = next_word(rest);
        let (colon, rest) = next_word(rest);
        if colon != ":" {
            return fail(format!("expected `:`, found `{colon}`"));
        }
        let (rhs, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let result = self
            .ideal(lhs)?
            .quotient(self.ideal(rhs)?)
            .map_err(core_err)?;
        self.emit_computed_ideal(name, result)
    }

    /// `intersect NAME = I J`
    fn cmd_intersect(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (lhs, rest) = next_word(rest);
        let (rhs, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let result = self
            .ideal(lhs)?
            .intersection(self.ideal(rhs)?)
            .map_err(core_err)?;
        self.emit_computed_ideal(name, result)
    }

    fn emit_computed_ideal(&mut self, name: &str, ideal: Ideal) -> Exec {
        let gens = canonical_gens(&ideal);
        let text = format!("{name} = {}", fmt_gens(&gens));
        let json = json!({
            "kind": "ideal",
            "name": name,
            "generators": json_polys(&gens),
            "weights": json_weights(ideal.context()),
            "context": json_context(ideal.context()),
        });
        self.bind_ideal(name, ideal)?;
        Ok((text, json))
    }

    /// `saturate NAME = IDEAL expr`
    fn cmd_saturate(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (src, expr) = next_word(rest);
        let ideal = self.ideal(src)?;
        let f = self.parse_in(ideal.context(), expr)?;
        let (saturated, steps) = ideal.saturation(&f).map_err(core_err)?;
        let gens = canonical_gens(&saturated);
        let text = format!(
            "{name} = {}\nstabilized at: {steps}",
            fmt_gens(&gens)
        );
        let json = json!({
            "kind": "ideal",
            "name": name,
            "generators": json_polys(&gens),
            "weights": json_weights(saturated.context()),
            "context": json_context(saturated.context()),
            "reports": { "stabilized_at": steps },
        });
        self.bind_ideal(name, saturated)?;
        Ok((text, json))
    }

    /// `eliminate NAME = IDEAL [vars]`
    fn cmd_eliminate(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (src, rest) = next_word(rest);
        let (vars, tail) = bracket_list(rest)?;
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let ideal = self.ideal(src)?;
        let ctx = ideal.context();
        let mut indices = std::collections::BTreeSet::new();
        for v in &vars {
            let i = ctx
                .var_index(v)
                .ok_or_else(|| format!("unknown variable `{v}`"))?;
            indices.insert(i);
        }
        let result = ideal.eliminate(&indices).map_err(core_err)?;
        let gens = canonical_gens(&result);
        let text = format!(
            "{name} = {} in {}",
            fmt_gens(&gens),
            result.context()
        );
        let json = json!({
            "kind": "ideal",
            "name": name,
            "generators": json_polys(&gens),
            "weights": json_weights(result.context()),
            "context": json_context(result.context()),
        });
        self.bind_ideal(name, result)?;
        Ok((text, json))
    }

    /// `kernel NAME in RING = [srcvar, ...] -> [img, ...]`
    fn cmd_kernel(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let (kw, rest) = next_word(rest);
        if kw != "in" {
            return fail(format!("expected `in`, found `{kw}`"));
        }
        let (ring, rest) = next_word(rest);
        let target = self.algebra(ring)?.clone();
        let rest = expect_eq(rest)?;
        let (src_vars, rest) = bracket_list(rest)?;
        let (arrow, rest) = next_word(rest);
        if arrow != "->" {
            return fail(format!("expected `->`, found `{arrow}`"));
        }
        let (img_entries, tail) = bracket_list(rest)?;
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        if src_vars.len() != img_entries.len() {
            return fail("one image per source variable required");
        }
        let images = self.parse_list(target.context(), &img_entries)?;
        let vars: Vec<(String, i64)> = src_vars
            .iter()
            .zip(&images)
            .map(|(v, img)| {
                let (name, declared) = parse_var_decl(v)?;
                let weight = match img.weighted_degree() {
                    rees_blowup::poly::WeightedDegree::Homogeneous(d) => d,
                    _ => declared,
                };
                Ok::<(String, i64), String>((name, weight))
            })
            .collect::<Result<_, _>>()?;
        let source = RingContext::new(*target.context().field(), vars, MonomialOrder::GrevLex)
            .map_err(core_err)?;
        let kernel = map_kernel(&source, &images, target.ideal()).map_err(core_err)?;
        let gens = canonical_gens(&kernel);
        let text = format!("{name} = {} in {}", fmt_gens(&gens), kernel.context());
        let json = json!({
            "kind": "ideal",
            "name": name,
            "generators": json_polys(&gens),
            "weights": json_weights(kernel.context()),
            "context": json_context(kernel.context()),
        });
        self.bind_ideal(name, kernel)?;
        Ok((text, json))
    }

    /// `regseq RING [f1, ...]`
    fn cmd_regseq(&mut self, rest: &str) -> Exec {
        let (ring, rest) = next_word(rest);
        let algebra = self.algebra(ring)?.clone();
        let (entries, tail) = bracket_list(rest)?;
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let seq = self.parse_list(algebra.context(), &entries)?;
        if !self.options.permutations {
            let report = regular_sequence_test(&seq, algebra.ideal()).map_err(core_err)?;
            let mut text = format!("regular: {}", report.regular);
            if let Some(index) = report.failing_index {
                let witness = report
                    .witness
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_default();
                text = format!("regular: false (failing index {index}, witness {witness})");
            } else if !report.proper {
                text = "regular: false (sequence generates the unit ideal)".to_string();
            }
            let json = json!({
                "kind": "regseq",
                "reports": {
                    "regular": report.regular,
                    "failing_index": report.failing_index,
                    "witness": report.witness.map(|w| w.to_string()),
                    "proper": report.proper,
                },
            });
            return Ok((text, json));
        }
        // all permutations, in lexicographic index order
        let mut lines = Vec::new();
        let mut results = Vec::new();
        for perm in permutations(seq.len()) {
            let ordered: Vec<Polynomial> = perm.iter().map(|&i| seq[i].clone()).collect();
            let report = regular_sequence_test(&ordered, algebra.ideal()).map_err(core_err)?;
            let display: Vec<String> = perm.iter().map(|i| (i + 1).to_string()).collect();
            lines.push(format!(
                "regular [{}]: {}",
                display.join(","),
                report.regular
            ));
            results.push(json!({
                "order": perm,
                "regular": report.regular,
            }));
        }
        Ok((
            lines.join("\n"),
            json!({ "kind": "regseq", "reports": { "permutations": results } }),
        ))
    }

    /// `ann RING expr`
    fn cmd_ann(&mut self, rest: &str) -> Exec {
        let (ring, expr) = next_word(rest);
        let algebra = self.algebra(ring)?.clone();
        let f = self.parse_in(algebra.context(), expr)?;
        let ann = annihilator(&f, algebra.ideal()).map_err(core_err)?;
        let gens = canonical_gens(&ann);
        Ok((
            format!("annihilator = {}", fmt_gens(&gens)),
            json!({
                "kind": "ideal",
                "generators": json_polys(&gens),
                "weights": json_weights(ann.context()),
                "context": json_context(ann.context()),
            }),
        ))
    }

    /// `hilbert RING LO HI`
    fn cmd_hilbert(&mut self, rest: &str) -> Exec {
        let (ring, rest) = next_word(rest);
        let algebra = self.algebra(ring)?.clone();
        let (lo, rest) = next_word(rest);
        let (hi, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let lo: i64 = lo.parse().map_err(|_| format!("bad degree `{lo}`"))?;
        let hi: i64 = hi.parse().map_err(|_| format!("bad degree `{hi}`"))?;
        let values = algebra.hilbert_function(lo, hi).map_err(core_err)?;
        let text = values
            .iter()
            .map(|(d, n)| format!("HF({d}) = {n}"))
            .collect::<Vec<_>>()
            .join("\n");
        let json = json!({
            "kind": "hilbert",
            "reports": {
                "values": values.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
            },
        });
        Ok((text, json))
    }

    /// `piece RING D (shift N)?`
    fn cmd_piece(&mut self, rest: &str) -> Exec {
        let (ring, rest) = next_word(rest);
        let algebra = self.algebra(ring)?.clone();
        let (d, rest) = next_word(rest);
        let d: i64 = d.parse().map_err(|_| format!("bad degree `{d}`"))?;
        let mut shift = 0i64;
        let mut rest = rest;
        if !rest.is_empty() {
            let (kw, r) = next_word(rest);
            if kw != "shift" {
                return fail(format!("expected `shift`, found `{kw}`"));
            }
            let (n, tail) = next_word(r);
            shift = n.parse().map_err(|_| format!("bad shift `{n}`"))?;
            rest = tail;
        }
        if !rest.is_empty() {
            return fail(format!("trailing input `{rest}`"));
        }
        let needs_bound = algebra.context().weights().any(|w| w <= 0);
        let bound = needs_bound.then_some(self.options.bound.max(0) as u32);
        let piece = algebra.shifted_piece(shift, d, bound).map_err(core_err)?;
        let polys = piece.polynomials(algebra.context());
        let items: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
        let label = if shift == 0 {
            format!("piece({d})")
        } else {
            format!("piece({d}; shift {shift})")
        };
        Ok((
            format!("{label} = {{{}}} (dim {})", items.join(", "), items.len()),
            json!({
                "kind": "piece",
                "reports": {
                    "degree": d,
                    "shift": shift,
                    "dimension": items.len(),
                    "basis": json_polys(&polys),
                    "bound": piece.bound,
                },
            }),
        ))
    }

    /// `split RING`
    fn cmd_split(&mut self, rest: &str) -> Exec {
        let (ring, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let algebra = self.algebra(ring)?.clone();
        let split = split_degree_zero(&algebra).map_err(core_err)?;
        let checks =
            split_additivity(&algebra, self.options.bound, Some(self.options.bound.max(0) as u32))
                .map_err(core_err)?;
        let additive = checks.iter().all(|c| c.additive);
        let text = format!(
            "B0 = {}\nB+ = {}\nadditive up to {}: {additive}",
            fmt_algebra(&split.degree_zero),
            fmt_gens(split.irrelevant.generators()),
            self.options.bound,
        );
        let json = json!({
            "kind": "split",
            "reports": {
                "degree_zero": json_algebra(None, &split.degree_zero),
                "irrelevant": json_polys(split.irrelevant.generators()),
                "additive": additive,
                "checks": checks.iter().map(|c| json!({
                    "degree": c.degree,
                    "dim_total": c.dim_total,
                    "dim_zero_part": c.dim_zero_part,
                    "dim_plus_part": c.dim_plus_part,
                    "additive": c.additive,
                })).collect::<Vec<_>>(),
            },
        });
        Ok((text, json))
    }

    /// `chart NAME = RING at expr`
    fn cmd_chart(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (ring, rest) = next_word(rest);
        let algebra = self.algebra(ring)?.clone();
        let (kw, expr) = next_word(rest);
        if kw != "at" {
            return fail(format!("expected `at`, found `{kw}`"));
        }
        let center = self.parse_in(algebra.context(), expr)?;
        let chart = homogeneous_localization_chart(&algebra, &center).map_err(core_err)?;
        let (text, json) = describe_chart(Some(name), &chart);
        self.bind_algebra(name, chart.ring.clone())?;
        Ok((text, json))
    }

    /// `veronese NAME = RING DELTA`
    fn cmd_veronese(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (ring, rest) = next_word(rest);
        let algebra = self.algebra(ring)?.clone();
        let (delta, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let delta: u32 = delta.parse().map_err(|_| format!("bad index `{delta}`"))?;
        let needs_bound = algebra.context().weights().any(|w| w <= 0);
        let bound = needs_bound.then_some(self.options.bound.max(0) as u32);
        let v = veronese(&algebra, delta, bound).map_err(core_err)?;
        let dict: Vec<String> = v
            .generators
            .iter()
            .map(|(n, img)| format!("{n} -> {img}"))
            .collect();
        let text = format!(
            "{name} = {}\ngenerators: {}",
            fmt_algebra(&v.algebra),
            dict.join(", "),
        );
        let mut dict_json = serde_json::Map::new();
        for (n, img) in &v.generators {
            dict_json.insert(n.clone(), Value::String(img.to_string()));
        }
        let json = json!({
            "kind": "algebra",
            "name": name,
            "generators": json_polys(v.algebra.ideal().generators()),
            "weights": json_weights(v.algebra.context()),
            "context": json_context(v.algebra.context()),
            "reports": {
                "veronese_index": delta,
                "generator_images": Value::Object(dict_json),
                "bound": v.bound,
            },
        });
        self.bind_algebra(name, v.algebra)?;
        Ok((text, json))
    }

    /// `gendeg1 RING`
    fn cmd_gendeg1(&mut self, rest: &str) -> Exec {
        let (ring, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let algebra = self.algebra(ring)?.clone();
        let needs_bound = algebra.context().weights().any(|w| w <= 0);
        let bound = needs_bound.then_some(self.options.bound.max(0) as u32);
        let report =
            generated_in_degree_one(&algebra, self.options.bound, bound).map_err(core_err)?;
        let text = match &report.failure {
            None => format!(
                "generated in degree 1 (bound {}): {}",
                report.bound, report.generated
            ),
            Some((d, missed)) => {
                let items: Vec<String> = missed
                    .iter()
                    .map(|m| {
                        Polynomial::monomial(
                            algebra.context(),
                            m.clone(),
                            algebra.context().field().one(),
                        )
                        .to_string()
                    })
                    .collect();
                format!(
                    "generated in degree 1 (bound {}): false at degree {d}, missed {{{}}}",
                    report.bound,
                    items.join(", ")
                )
            }
        };
        let json = json!({
            "kind": "bool",
            "value": report.generated,
            "reports": { "bound": report.bound },
        });
        Ok((text, json))
    }

    /// `twist ATLAS N`
    fn cmd_twist(&mut self, rest: &str) -> Exec {
        let (atlas_name, rest) = next_word(rest);
        let (n, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let n: i64 = n.parse().map_err(|_| format!("bad twist `{n}`"))?;
        let atlas = self.atlas(atlas_name)?;
        let table = twist_cocycle(atlas, n).map_err(core_err)?;
        let lines: Vec<String> = table
            .entries
            .iter()
            .map(|e| format!("g[{}->{}] = {}", e.from + 1, e.to + 1, e.unit))
            .collect();
        let json = json!({
            "kind": "twist",
            "reports": {
                "twist": n,
                "entries": table.entries.iter().map(|e| json!({
                    "from": e.from + 1,
                    "to": e.to + 1,
                    "unit": e.unit.to_string(),
                    "inverse": e.inverse.to_string(),
                })).collect::<Vec<_>>(),
            },
        });
        Ok((format!("twist({n}):\n{}", lines.join("\n")), json))
    }

    /// `rees NAME = RING IDEAL`
    fn cmd_rees(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (ring, rest) = next_word(rest);
        let (ideal_name, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let base = self.algebra(ring)?.clone();
        let elements = self.ideal(ideal_name)?.generators().to_vec();
        let data = ImmersionData::new(base, elements).map_err(core_err)?;
        let rees = rees_extended(&data).map_err(core_err)?;
        let ctx = rees.context().clone();
        let v_names: Vec<String> = rees
            .v_indices()
            .iter()
            .map(|&i| ctx.var_name(i).to_string())
            .collect();
        let u_name = ctx.var_name(rees.u_index()).to_string();
        let text = format!(
            "{name} = {} / {}\nvariables: v = [{}], u = {u_name} (t^-1)",
            ctx,
            fmt_gens(rees.ideal().generators()),
            v_names.join(", "),
        );
        let json = json!({
            "kind": "rees",
            "name": name,
            "generators": json_polys(rees.ideal().generators()),
            "weights": json_weights(&ctx),
            "context": json_context(&ctx),
            "reports": { "v_variables": v_names, "u_variable": u_name },
        });
        self.bind_rees(name, rees)?;
        Ok((text, json))
    }

    /// `cone NAME = REES`
    fn cmd_cone(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (src, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let rees = self.rees_binding(src)?.clone();
        let result = cone(&rees).map_err(core_err)?;
        let json = json_algebra(Some(name), &result);
        self.bind_algebra(name, result)?;
        Ok((format!("{}", self.algebras[name]), json))
    }

    /// `regularize (NAME =)? REES_OR_RING`
    fn cmd_regularize(&mut self, rest: &str) -> Exec {
        let (first, after) = next_word(rest);
        let (bind, src, tail) = {
            let (maybe_eq, after_eq) = next_word(after);
            if maybe_eq == "=" {
                let (src, tail) = next_word(after_eq);
                (Some(first), src, tail)
            } else {
                (None, first, after)
            }
        };
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let algebra = self.graded_over_u(src)?;
        let reg = regularize(&algebra).map_err(core_err)?;
        let label = bind.unwrap_or("regularized");
        let kernel_gens = canonical_gens(&reg.kernel);
        let text = format!(
            "{label} = {}\nkernel = {}\nstabilized at: {}\nzero ring: {}",
            fmt_algebra(&reg.algebra),
            fmt_gens(&kernel_gens),
            reg.stabilized_at,
            reg.zero_ring,
        );
        let json = json!({
            "kind": "algebra",
            "name": bind,
            "generators": json_polys(reg.algebra.ideal().generators()),
            "weights": json_weights(reg.algebra.context()),
            "context": json_context(reg.algebra.context()),
            "reports": {
                "kernel": json_polys(&kernel_gens),
                "stabilized_at": reg.stabilized_at,
                "zero_ring": reg.zero_ring,
            },
        });
        if let Some(name) = bind {
            self.bind_algebra(name, reg.algebra)?;
        }
        Ok((text, json))
    }

    /// `treg REES_OR_RING`
    fn cmd_treg(&mut self, rest: &str) -> Exec {
        let (src, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let algebra = self.graded_over_u(src)?;
        let report = t_regularity(&algebra).map_err(core_err)?;
        let obstruction = canonical_gens(&report.obstruction);
        let text = if report.regular {
            format!("t-regular: {}", report.regular)
        } else {
            format!(
                "t-regular: false\nobstruction = {}",
                fmt_gens(&obstruction)
            )
        };
        let json = json!({
            "kind": "treg",
            "reports": {
                "regular": report.regular,
                "obstruction": json_polys(&obstruction),
            },
        });
        Ok((text, json))
    }

    /// `compare-classical REES`
    fn cmd_compare_classical(&mut self, rest: &str) -> Exec {
        let (src, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let rees = self.rees_binding(src)?.clone();
        let bound = self.options.bound;
        let report =
            compare_to_classical(&rees, bound, bound.max(1) as u32).map_err(core_err)?;
        let mut lines = vec![format!("t-regular: {}", report.t_regular)];
        for d in &report.degrees {
            lines.push(format!(
                "degree {}: membership {}, lifts {}, unregularized {}",
                d.degree,
                if d.membership_ok { "ok" } else { "FAIL" },
                if d.lifts_ok { "ok" } else { "FAIL" },
                if d.unregularized_agrees { "agrees" } else { "differs" },
            ));
        }
        lines.push(format!("regularized matches: {}", report.regularized_matches));
        lines.push(format!(
            "unregularized matches: {}",
            report.unregularized_matches
        ));
        let json = json!({
            "kind": "comparison",
            "reports": {
                "bound": report.bound,
                "t_regular": report.t_regular,
                "regularized_matches": report.regularized_matches,
                "unregularized_matches": report.unregularized_matches,
                "degrees": report.degrees.iter().map(|d| json!({
                    "degree": d.degree,
                    "membership_ok": d.membership_ok,
                    "lifts_ok": d.lifts_ok,
                    "unregularized_agrees": d.unregularized_agrees,
                })).collect::<Vec<_>>(),
            },
        });
        Ok((lines.join("\n"), json))
    }

    /// `naturality base REES RING [img, ...]` or
    /// `naturality target RING [a, ...] [b, ...]`
    fn cmd_naturality(&mut self, rest: &str) -> Exec {
        let (mode, rest) = next_word(rest);
        match mode {
            "base" => {
                let (rees_name, rest) = next_word(rest);
                let (ring, rest) = next_word(rest);
                let (entries, tail) = bracket_list(rest)?;
                if !tail.is_empty() {
                    return fail(format!("trailing input `{tail}`"));
                }
                let rees = self.rees_binding(rees_name)?.clone();
                let target = self.algebra(ring)?.clone();
                let images = self.parse_list(target.context(), &entries)?;
                let report = base_change(
                    rees.data(),
                    &RingExtension {
                        target,
                        images,
                    },
                )
                .map_err(core_err)?;
                let text = format!("base change equal: {}", report.equal);
                let json = json!({
                    "kind": "naturality",
                    "reports": { "mode": "base_change", "equal": report.equal },
                });
                Ok((text, json))
            }
            "target" => {
                let (ring, rest) = next_word(rest);
                let ambient = self.algebra(ring)?.clone();
                let (a_entries, rest) = bracket_list(rest)?;
                let (b_entries, tail) = bracket_list(rest)?;
                if !tail.is_empty() {
                    return fail(format!("trailing input `{tail}`"));
                }
                let payload = TargetPayload {
                    quotient_seq: self.parse_list(ambient.context(), &a_entries)?,
                    center_seq: self.parse_list(ambient.context(), &b_entries)?,
                    ambient,
                };
                let bound = self.options.bound.min(4);
                let report = target_functoriality(&payload, bound).map_err(core_err)?;
                let surjective = report.surjective.iter().all(|(_, _, ok)| *ok);
                let text = format!(
                    "well-defined: {}\nsurjective through degree {bound}: {surjective}",
                    report.well_defined,
                );
                let json = json!({
                    "kind": "naturality",
                    "reports": {
                        "mode": "target",
                        "well_defined": report.well_defined,
                        "surjective": surjective,
                        "degrees": report.surjective.iter().map(|(d, dim, ok)| json!({
                            "degree": d, "dimension": dim, "ok": ok,
                        })).collect::<Vec<_>>(),
                    },
                });
                Ok((text, json))
            }
            other => fail(format!("unknown naturality mode `{other}`")),
        }
    }

    /// `nonneg NAME = REES`
    fn cmd_nonneg(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (src, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let rees = self.rees_binding(src)?.clone();
        let part = nonneg_part(&rees).map_err(core_err)?;
        let text = format!(
            "{name} = {}\ngenerated in degree 1 (bound {}): {}",
            fmt_algebra(&part.algebra),
            part.generation.bound,
            part.generation.generated,
        );
        let json = json!({
            "kind": "algebra",
            "name": name,
            "generators": json_polys(part.algebra.ideal().generators()),
            "weights": json_weights(part.algebra.context()),
            "context": json_context(part.algebra.context()),
            "reports": {
                "generated_in_degree_1": part.generation.generated,
                "bound": part.generation.bound,
            },
        });
        self.bind_algebra(name, part.algebra)?;
        Ok((text, json))
    }

    /// `proj NAME = RING [gen, ...]`
    fn cmd_proj(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (ring, rest) = next_word(rest);
        let algebra = self.algebra(ring)?.clone();
        let (entries, tail) = bracket_list(rest)?;
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let gens = self.parse_list(algebra.context(), &entries)?;
        let atlas = proj_atlas(&algebra, &gens).map_err(core_err)?;
        let (text, json) = describe_atlas(name, &atlas);
        self.bind_atlas(name, atlas)?;
        Ok((text, json))
    }

    /// `blowup NAME = RING IDEAL`
    fn cmd_blowup(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (ring, rest) = next_word(rest);
        let (ideal_name, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let data = self.immersion_from(ring, ideal_name)?;
        let atlas = blow_up(&data).map_err(core_err)?;
        let (text, json) = describe_atlas(name, &atlas);
        self.bind_atlas(name, atlas)?;
        Ok((text, json))
    }

    /// `exceptional NAME = RING IDEAL`
    fn cmd_exceptional(&mut self, rest: &str) -> Exec {
        let (name, rest) = next_word(rest);
        let rest = expect_eq(rest)?;
        let (ring, rest) = next_word(rest);
        let (ideal_name, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let data = self.immersion_from(ring, ideal_name)?;
        let result = exceptional_divisor(&data, self.options.bound).map_err(core_err)?;
        let (atlas_text, atlas_json) = describe_atlas(name, &result.atlas);
        let agreement: Vec<String> = result
            .chart_agreement
            .iter()
            .map(|b| b.to_string())
            .collect();
        let text = format!(
            "{atlas_text}\nchart agreement: [{}]\nkappa surjective (degree <= {}): {}",
            agreement.join(", "),
            self.options.bound,
            result.kappa.surjective,
        );
        let mut json_map = atlas_json.as_object().cloned().unwrap_or_default();
        json_map.insert(
            "reports".into(),
            json!({
                "chart_agreement": result.chart_agreement,
                "kappa_well_defined": result.kappa.well_defined,
                "kappa_surjective": result.kappa.surjective,
            }),
        );
        self.bind_atlas(name, result.atlas)?;
        Ok((text, Value::Object(json_map)))
    }

    /// `empty ATLAS`
    fn cmd_empty(&mut self, rest: &str) -> Exec {
        let (name, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let empty = self.atlas(name)?.is_empty();
        Ok((
            format!("empty: {empty}"),
            json!({ "kind": "bool", "value": empty }),
        ))
    }

    /// `deform REES SCALAR`
    fn cmd_deform(&mut self, rest: &str) -> Exec {
        let (src, rest) = next_word(rest);
        let (scalar_text, tail) = next_word(rest);
        if !tail.is_empty() {
            return fail(format!("trailing input `{tail}`"));
        }
        let rees = self.rees_binding(src)?.clone();
        let c = self.parse_scalar(rees.context().field(), scalar_text)?;
        let fiber = deformation_fiber(&rees, &c).map_err(core_err)?;
        let text = if fiber.at_zero {
            format!("fiber at 0 = cone: {}", fmt_algebra(&fiber.algebra))
        } else {
            let iso = fiber.iso_to_base.as_ref().unwrap();
            format!(
                "fiber at {scalar_text} = {}\nisomorphic to base: {}",
                fmt_algebra(&fiber.algebra),
                iso.verified(),
            )
        };
        let json = json!({
            "kind": "fiber",
            "generators": json_polys(fiber.algebra.ideal().generators()),
            "weights": json_weights(fiber.algebra.context()),
            "context": json_context(fiber.algebra.context()),
            "reports": {
                "at_zero": fiber.at_zero,
                "isomorphic_to_base": fiber.iso_to_base.as_ref().map(|i| i.verified()),
            },
        });
        Ok((text, json))
    }

    fn immersion_from(&self, ring: &str, ideal_name: &str) -> Result<ImmersionData, String> {
        let base = self.algebra(ring)?.clone();
        let elements = self.ideal(ideal_name)?.generators().to_vec();
        ImmersionData::new(base, elements).map_err(core_err)
    }

    fn parse_scalar(&self, field: &FieldSpec, text: &str) -> Result<Scalar, String> {
        let ctx = RingContext::new(*field, vec![], MonomialOrder::GrevLex).map_err(core_err)?;
        let p = parse_polynomial(text, &ctx).map_err(core_err)?;
        if p.is_zero() {
            return Ok(field.zero());
        }
        Ok(p.terms()[0].1.clone())
    }
}

fn describe_chart(name: Option<&str>, chart: &rees_blowup::blowup::Chart) -> (String, Value) {
    let gens = canonical_gens(chart.ring.ideal());
    let mut subst_lines = Vec::new();
    let mut subst_json = serde_json::Map::new();
    for (i, image) in chart.substitution.iter().enumerate() {
        let var = chart.source_ctx.var_name(i);
        subst_json.insert(var.to_string(), Value::String(image.to_string()));
        if chart.source_ctx.weight(i) != 0 {
            subst_lines.push(format!("{var} -> {image}"));
        }
    }
    let label = name.unwrap_or("chart");
    let mut text = format!(
        "{label} = {}",
        if gens.is_empty() {
            format!("{}", chart.ring.context())
        } else {
            format!("{} / {}", chart.ring.context(), fmt_gens(&gens))
        }
    );
    text.push_str(&format!("\nat: {}", chart.center));
    if !subst_lines.is_empty() {
        text.push_str(&format!("\nsubstitution: {}", subst_lines.join(", ")));
    }
    if let Some(exc) = &chart.exceptional {
        text.push_str(&format!("\nexceptional: {exc}"));
    }
    let json = json!({
        "kind": "chart",
        "name": name,
        "center": chart.center.to_string(),
        "ideal": json_polys(&gens),
        "substitution": Value::Object(subst_json),
        "weights": json_weights(chart.ring.context()),
        "context": json_context(chart.ring.context()),
        "exceptional": chart.exceptional.as_ref().map(|e| e.to_string()),
        "zero_ring": chart.is_zero_ring(),
    });
    (text, json)
}

fn describe_atlas(name: &str, atlas: &ProjAtlas) -> (String, Value) {
    let mut lines = vec![format!(
        "atlas {name}: {} chart{}",
        atlas.charts.len(),
        if atlas.charts.len() == 1 { "" } else { "s" },
    )];
    let mut charts_json = Vec::new();
    for (i, chart) in atlas.charts.iter().enumerate() {
        let gens = canonical_gens(chart.ring.ideal());
        let ring_text = if gens.is_empty() {
            format!("{}", chart.ring.context())
        } else {
            format!("{} / {}", chart.ring.context(), fmt_gens(&gens))
        };
        let mut line = format!("chart {} at {}: {ring_text}", i + 1, chart.center);
        if let Some(exc) = &chart.exceptional {
            line.push_str(&format!("; exceptional: {exc}"));
        }
        lines.push(line);
        let (_, chart_json) = describe_chart(None, chart);
        charts_json.push(chart_json);
    }
    lines.push(format!(
        "generators generate B+: {}",
        atlas.generators_generate
    ));
    lines.push(format!(
        "transitions consistent: {}",
        atlas.transitions_consistent
    ));
    lines.push(format!("empty: {}", atlas.is_empty()));
    let json = json!({
        "kind": "atlas",
        "name": name,
        "charts": charts_json,
        "empty": atlas.is_empty(),
        "generators_generate": atlas.generators_generate,
        "transitions_consistent": atlas.transitions_consistent,
    });
    (lines.join("\n"), json)
}

/// Permutations of 0..n in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut perm = vec![first];
            for r in rest {
                perm.push(if r >= first { r + 1 } else { r });
            }
            out.push(perm);
        }
    }
    out
}
