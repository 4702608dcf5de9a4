//! CSV tables and plain-text reports.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! that every value round-trips exactly and identical runs produce identical
//! bytes.

use std::fmt::Write as _;
use std::io::Write;

use num_bigint::BigUint;
use stabtherm_core::duality::SeriesComparison;
use stabtherm_core::thermo::ThermoPoint;
use stabtherm_core::WeightEnumerator;

/// Renders `x` with 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// A header plus rows of already formatted fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("fields are UTF-8")
    }
}

/// `beta, logZ, f, u, c, flags`.
pub fn thermo_table(points: &[ThermoPoint]) -> Table {
    let mut t = Table::new(vec!["beta", "logZ", "f", "u", "c", "flags"]);
    for p in points {
        t.push(vec![
            float(p.beta),
            float(p.log_z),
            float(p.f_density),
            optional(p.u_density),
            optional(p.c_density),
            p.flags.render(),
        ]);
    }
    t
}

/// `weight, count` for every weight up to the tracked maximum.
pub fn enumerator_table(w: &WeightEnumerator) -> Table {
    let mut t = Table::new(vec!["weight", "count"]);
    for n in 0..=w.max_tracked().min(w.len()) {
        t.push(vec![n.to_string(), w.coeff(n).to_string()]);
    }
    t
}

/// `weight, lhs, rhs` over the longer of the two coefficient lists.
pub fn series_table(c: &SeriesComparison) -> Table {
    let mut t = Table::new(vec!["weight", "lhs", "rhs"]);
    let n = c.lhs.len().max(c.rhs.len());
    let at = |s: &[BigUint], i: usize| s.get(i).map(|v| v.to_string()).unwrap_or_else(|| "0".into());
    for i in 0..n {
        t.push(vec![i.to_string(), at(&c.lhs, i), at(&c.rhs, i)]);
    }
    t
}

/// A plain-text report: a title followed by named sections of `key: value`
/// lines, always printed in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Report {
    title: String,
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            sections: Vec::new(),
        }
    }

    pub fn section(&mut self, name: impl Into<String>) -> &mut Self {
        self.sections.push((name.into(), Vec::new()));
        self
    }

    /// Adds a line to the most recent section.
    pub fn line(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        if self.sections.is_empty() {
            self.section("summary");
        }
        let last = self.sections.last_mut().expect("a section exists");
        last.1.push((key.into(), value.to_string()));
        self
    }

    /// Value of the first line with this key, in any section.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .flat_map(|(_, lines)| lines)
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for (name, lines) in &self.sections {
            let _ = writeln!(out, "\n[{name}]");
            let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in lines {
                let _ = writeln!(out, "{k:<width$}  {v}");
            }
        }
        out
    }
}

/// Adds the standard sections for a series comparison.
pub fn describe_comparison(r: &mut Report, c: &SeriesComparison) {
    r.section("claim").line("claim", &c.claim);
    r.section("result")
        .line("cutoff", c.cutoff)
        .line("matched", c.matched)
        .line(
            "first_mismatch",
            match &c.first_mismatch {
                None => "none".to_string(),
                Some((n, lhs, rhs)) => format!("n={n} lhs={lhs} rhs={rhs}"),
            },
        );
    // Orders at and above the cutoff are reported without a verdict.
    let at = |s: &[BigUint]| s.get(c.cutoff).map_or_else(|| "0".to_string(), |v| v.to_string());
    r.line("lhs_at_cutoff", at(&c.lhs)).line("rhs_at_cutoff", at(&c.rhs));
}
