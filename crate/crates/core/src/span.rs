//! Exact linear span checks over the coefficient field, used by the
//! generation-in-degree-one certificates.

use std::collections::BTreeMap;

use crate::poly::Polynomial;
use crate::ring::Monomial;
use crate::scalar::Scalar;

/// Row-reduces `spanning` and answers, for each target, whether it lies in
/// the k-linear span. Coordinates are indexed by every monomial occurring.
pub fn in_span(spanning: &[Polynomial], targets: &[Polynomial]) -> Vec<bool> {
    let mut columns: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in spanning.iter().chain(targets) {
        for (m, _) in p.terms() {
            let next = columns.len();
            columns.entry(m.clone()).or_insert(next);
        }
    }
    let width = columns.len();
    let to_row = |p: &Polynomial| {
        let mut row: Vec<Option<Scalar>> = vec![None; width];
        for (m, c) in p.terms() {
            row[columns[m]] = Some(c.clone());
        }
        row
    };

    // reduced rows with their pivot column
    fn eliminate(
        pivots: &[(usize, Vec<Option<Scalar>>)],
        mut row: Vec<Option<Scalar>>,
    ) -> (bool, Vec<Option<Scalar>>) {
        loop {
            let Some(lead) = row.iter().position(|c| c.is_some()) else {
                return (true, row);
            };
            match pivots.iter().find(|(p, _)| *p == lead) {
                None => {
                    // normalize so the pivot entry is 1
                    let inv = row[lead].clone().unwrap().inv();
                    for c in row.iter_mut().flatten() {
                        *c = c.mul(&inv);
                    }
                    return (false, row);
                }
                Some((_, pivot_row)) => {
                    let factor = row[lead].clone().unwrap();
                    for (i, pc) in pivot_row.iter().enumerate() {
                        if let Some(pc) = pc {
                            let delta = pc.mul(&factor);
                            row[i] = match row[i].take() {
                                None => Some(delta.neg()),
                                Some(c) => {
                                    let s = c.sub(&delta);
                                    (!s.is_zero()).then_some(s)
                                }
                            };
                        }
                    }
                }
            }
        }
    }

    let mut pivots: Vec<(usize, Vec<Option<Scalar>>)> = Vec::new();
    for p in spanning {
        if p.is_zero() {
            continue;
        }
        let (zeroed, row) = eliminate(&pivots, to_row(p));
        if !zeroed {
            let lead = row.iter().position(|c| c.is_some()).unwrap();
            pivots.push((lead, row));
        }
    }
    targets
        .iter()
        .map(|t| {
            if t.is_zero() {
                return true;
            }
            eliminate(&pivots, to_row(t)).0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_polynomial;
    use crate::ring::{FieldSpec, MonomialOrder, RingContext};

    #[test]
    fn span_membership() {
        let ctx = RingContext::new(
            FieldSpec::Rational,
            vec![("x".into(), 0), ("y".into(), 0)],
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let p = |s: &str| parse_polynomial(s, &ctx).unwrap();
        let spanning = vec![p("x + y"), p("x - y")];
        let targets = vec![p("x"), p("y"), p("x^2"), p("0")];
        assert_eq!(in_span(&spanning, &targets), vec![true, true, false, true]);
    }
}
