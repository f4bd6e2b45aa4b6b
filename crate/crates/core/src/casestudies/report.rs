//! Experiment reports: computed values next to their references.

use std::fmt::Write as _;

use num_traits::Zero;

use super::backend::Backend;
use crate::scalar::{print_digits, rational_valuation, PadicScalar, PrimeContext, Rational};

/// Number of base-p digits on which `computed` agrees with `reference`,
/// counted from the valuation of the reference and up to the smaller of the
/// two absolute precisions. A computed value whose valuation differs from
/// the reference's scores zero, as does any comparison with a reference
/// indistinguishable from zero.
pub fn agreeing_digits(computed: &PadicScalar, reference: &PadicScalar) -> u64 {
    if reference.is_indistinguishable_from_zero() || computed.is_indistinguishable_from_zero() {
        return 0;
    }
    let v = reference.v();
    if computed.v() != v {
        return 0;
    }
    let cap = match (computed.abs_prec(), reference.abs_prec()) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => i64::MAX,
    };
    let ctx = PrimeContext::new(reference.p()).expect("prime of a scalar");
    let diff: Rational = computed.to_rational() - reference.to_rational();
    let agree_to = if diff.is_zero() {
        cap
    } else {
        rational_valuation(&diff, &ctx).finite().expect("nonzero").min(cap)
    };
    (agree_to - v).max(0) as u64
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantityRecord {
    pub id: String,
    pub backend: Backend,
    /// Digit-style rendering of the computed value.
    pub value: String,
    /// Absolute precision claimed for the value (`None` when exact).
    pub claimed_precision: Option<i64>,
    pub reference: Option<String>,
    pub agreeing_digits: Option<u64>,
}

/// The outcome of an experiment, one record per computed quantity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub records: Vec<QuantityRecord>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        ExperimentReport { name: name.into(), records: Vec::new() }
    }

    /// Record a scalar quantity, comparing it with a reference when given.
    pub fn record(
        &mut self,
        id: impl Into<String>,
        backend: Backend,
        value: &PadicScalar,
        reference: Option<&PadicScalar>,
    ) {
        self.records.push(QuantityRecord {
            id: id.into(),
            backend,
            value: print_digits(value),
            claimed_precision: value.abs_prec(),
            reference: reference.map(print_digits),
            agreeing_digits: reference.map(|r| agreeing_digits(value, r)),
        });
    }

    /// Record a quantity whose computation failed.
    pub fn record_failure(&mut self, id: impl Into<String>, backend: Backend, what: &str) {
        self.records.push(QuantityRecord {
            id: id.into(),
            backend,
            value: what.to_string(),
            claimed_precision: None,
            reference: None,
            agreeing_digits: None,
        });
    }

    pub fn get(&self, id: &str) -> Option<&QuantityRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Mean of the agreement counts over the records that have one.
    pub fn average_agreement(&self) -> Option<f64> {
        let counts: Vec<u64> = self.records.iter().filter_map(|r| r.agreeing_digits).collect();
        (!counts.is_empty()).then(|| counts.iter().sum::<u64>() as f64 / counts.len() as f64)
    }

    /// Tab-separated rendering: a header line, then one row per quantity
    /// with the columns id, backend, value, precision, reference, agreement.
    /// Missing fields are written as `-`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("quantity\tbackend\tvalue\tprecision\treference\tagreeing\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.id,
                r.backend,
                r.value,
                r.claimed_precision.map_or("-".to_string(), |n| n.to_string()),
                r.reference.as_deref().unwrap_or("-"),
                r.agreeing_digits.map_or("-".to_string(), |n| n.to_string()),
            );
        }
        out
    }

    /// Aligned plain-text rendering of the same columns.
    pub fn to_table(&self) -> String {
        let header = ["quantity", "backend", "value", "precision", "reference", "agreeing"];
        let rows: Vec<[String; 6]> = self
            .records
            .iter()
            .map(|r| {
                [
                    r.id.clone(),
                    r.backend.to_string(),
                    r.value.clone(),
                    r.claimed_precision.map_or("-".to_string(), |n| format!("O(p^{n})")),
                    r.reference.clone().unwrap_or_else(|| "-".to_string()),
                    r.agreeing_digits.map_or("-".to_string(), |n| n.to_string()),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        if !self.name.is_empty() {
            let _ = writeln!(out, "{}", self.name);
        }
        let line = |cells: &[&str]| -> String {
            cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let _ = writeln!(out, "{}", line(&header));
        for row in &rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            let _ = writeln!(out, "{}", line(&cells));
        }
        out
    }
}
