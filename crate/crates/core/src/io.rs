//! The versioned set file format and plain-text renderings of reports.
//!
//! A set file is TOML:
//!
//! ```toml
//! format_version = 1
//! level = 4
//! elements = [
//!   ["1", "1/2", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
//! ]
//!
//! [flags]
//! inverse_closed = false
//! all_niner = true
//! single_privileged_orthant = true
//! ```
//!
//! Coordinates are strings `"num/den"` (or `"num"`) in lowest terms. The
//! `flags` table is optional; any flag it declares is checked on load.

use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::{dim, CdNumber, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::pipeline::{BallCheck, BoundReport, Certification, CompanionSummary, Mode};
use crate::rational::{approx, format_rational, parse_rational, Rational};
use crate::search::{HistoryEntry, Outcome, SearchRecord};
use crate::set::ElementSet;

pub const FORMAT_VERSION: i64 = 1;

const FLAG_NAMES: [&str; 3] = ["inverse_closed", "all_niner", "single_privileged_orthant"];

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Renders a set file declaring the set's actual flags.
pub fn set_to_string(a: &ElementSet) -> String {
    let mut out = String::new();
    writeln!(out, "format_version = {FORMAT_VERSION}").unwrap();
    writeln!(out, "level = {}", a.level()).unwrap();
    out.push_str("elements = [\n");
    for x in a {
        let coords: Vec<String> = x.coords().iter().map(|c| format!("\"{}\"", format_rational(c))).collect();
        writeln!(out, "  [{}],", coords.join(", ")).unwrap();
    }
    out.push_str("]\n\n[flags]\n");
    let flags = a.flags();
    for (name, value) in FLAG_NAMES.iter().zip([
        flags.inverse_closed,
        flags.all_niner,
        flags.single_privileged_orthant,
    ]) {
        writeln!(out, "{name} = {value}").unwrap();
    }
    out
}

fn parse_element(level: u8, index: usize, value: &toml::Value) -> Result<CdNumber> {
    let toml::Value::Array(items) = value else {
        return Err(parse_err(format!("element {index} is not a list of coordinates")));
    };
    if items.len() != dim(level) {
        return Err(parse_err(format!(
            "element {index} has {} coordinates, level {level} needs {}",
            items.len(),
            dim(level)
        )));
    }
    let coords = items
        .iter()
        .map(|item| match item {
            toml::Value::String(s) => parse_rational(s),
            other => Err(parse_err(format!(
                "element {index}: coordinate {other} is not a \"num/den\" string"
            ))),
        })
        .collect::<Result<Vec<Rational>>>()?;
    CdNumber::new(level, coords)
}

/// Parses a set file and re-validates every declared flag.
pub fn set_from_str(text: &str) -> Result<ElementSet> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| parse_err(e.message().to_string()))?;
    if let Some(key) = table
        .keys()
        .find(|k| !["format_version", "level", "elements", "flags"].contains(&k.as_str()))
    {
        return Err(parse_err(format!("unknown key `{key}`")));
    }
    match table.get("format_version") {
        Some(toml::Value::Integer(FORMAT_VERSION)) => {}
        Some(other) => return Err(parse_err(format!("unsupported format_version {other}"))),
        None => return Err(parse_err("missing format_version")),
    }
    let level = match table.get("level") {
        Some(toml::Value::Integer(l)) if (0..=i64::from(MAX_LEVEL)).contains(l) => *l as u8,
        Some(other) => return Err(parse_err(format!("level {other} is outside 0..={MAX_LEVEL}"))),
        None => return Err(parse_err("missing level")),
    };
    let items = match table.get("elements") {
        Some(toml::Value::Array(items)) => items,
        Some(_) => return Err(parse_err("elements must be a list")),
        None => return Err(parse_err("missing elements")),
    };
    let elements = items
        .iter()
        .enumerate()
        .map(|(i, v)| parse_element(level, i, v))
        .collect::<Result<Vec<_>>>()?;
    let count = elements.len();
    let set = ElementSet::new(level, elements)?;
    if set.len() != count {
        return Err(parse_err("elements contain duplicates"));
    }

    if let Some(declared) = table.get("flags") {
        let toml::Value::Table(declared) = declared else {
            return Err(parse_err("flags must be a table"));
        };
        let actual = set.flags();
        for (key, value) in declared {
            let Some(&name) = FLAG_NAMES.iter().find(|n| **n == key.as_str()) else {
                return Err(parse_err(format!("unknown flag `{key}`")));
            };
            let toml::Value::Boolean(value) = value else {
                return Err(parse_err(format!("flag `{key}` must be true or false")));
            };
            let holds = match name {
                "inverse_closed" => actual.inverse_closed,
                "all_niner" => actual.all_niner,
                _ => actual.single_privileged_orthant,
            };
            if *value != holds {
                return Err(Error::FlagMismatch(name));
            }
        }
    }
    Ok(set)
}

pub fn load_set(path: &Path) -> Result<ElementSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
    set_from_str(&text)
}

pub fn save_set(path: &Path, a: &ElementSet) -> Result<()> {
    std::fs::write(path, set_to_string(a))
        .map_err(|e| parse_err(format!("cannot write {}: {e}", path.display())))
}

/// `exact  (approx 1.23457)`
fn exact_with_approx(r: &Rational) -> String {
    format!("{}  (approx {})", format_rational(r), approx(r))
}

struct Doc(String);

impl Doc {
    fn section(&mut self, name: &str) {
        if !self.0.is_empty() {
            self.0.push('\n');
        }
        writeln!(self.0, "[{name}]").unwrap();
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        writeln!(self.0, "{key} = {value}").unwrap();
    }

    fn line(&mut self, text: impl std::fmt::Display) {
        writeln!(self.0, "{text}").unwrap();
    }
}

fn ball_text(ball: &BallCheck) -> String {
    match ball {
        BallCheck::NotApplicable => "not applicable".into(),
        BallCheck::Holds { checked } => format!("holds ({checked} quotients checked)"),
        BallCheck::Fails { quadruple, lhs, rhs } => format!(
            "FAILS: distance^2 {} > radius^2 {} at ({}, {}, {}, {})",
            format_rational(lhs),
            format_rational(rhs),
            quadruple[0],
            quadruple[1],
            quadruple[2],
            quadruple[3]
        ),
    }
}

fn k_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Octonion => "k8_lower",
        Mode::SixteenOn => "k16_lower",
    }
}

fn write_report(doc: &mut Doc, r: &BoundReport) {
    doc.section("report");
    doc.kv("mode", r.mode.name());
    doc.kv("side", r.side.name());
    doc.kv("count_basis", r.basis.name());
    match &r.certification {
        Certification::Certified => doc.kv("certification", "certified"),
        Certification::Uncertified(reason) => doc.kv("certification", format!("uncertified: {reason}")),
    }
    doc.kv("set_size", r.set_size);
    doc.kv("sumset_size", r.sumset_size);
    doc.kv("productset_size", r.productset_size);
    doc.kv("left_quotient_size", r.left_quotient_size);
    doc.kv("right_quotient_size", r.right_quotient_size);
    doc.kv("ratioset_size", r.ratioset_size);
    doc.kv("energy", r.energy);
    doc.kv("energy_prime", r.energy_prime);

    doc.section("hypothesis");
    doc.kv("holds", r.hypothesis.holds);
    doc.kv("min_side", r.hypothesis.min_side.name());
    doc.kv("sum_ell_r", r.hypothesis.sum_ell_r);
    doc.kv("sum_ell_sq", r.hypothesis.sum_ell_sq);
    doc.kv("sum_r_sq", r.hypothesis.sum_r_sq);

    doc.section("ell_sum");
    doc.kv("actual", r.ell_sum.actual);
    doc.kv("even_spread_value", format_rational(&r.ell_sum.claimed));
    doc.kv("equal", r.ell_sum.holds);

    doc.section("buckets");
    doc.kv("primary", r.buckets.primary.name());
    doc.kv("swapped", r.buckets.swapped);
    doc.kv("chosen_i", r.buckets.chosen_i);
    for (i, w) in &r.buckets.weights {
        doc.kv(&format!("weight_{i}"), format!("{w} ({} ratios)", r.buckets.buckets[i].len()));
    }
    doc.kv("r_size", r.r_size());

    doc.section("r");
    for p in r.r_profiles() {
        doc.line(format!("{}  ell {}  r {}", p.x, p.ell, p.r));
    }

    doc.section("phi");
    for (x, y) in &r.phi {
        doc.line(format!("{x} -> {y}"));
    }

    if !r.sx.is_empty() {
        doc.section("sx");
        for s in &r.sx {
            doc.line(format!(
                "{}: size {}  expected {}  injective {}  solved {}  ball {}",
                s.x,
                s.size,
                s.expected,
                s.injective(),
                s.solver_hits,
                ball_text(&s.ball)
            ));
        }
    }

    doc.section("bound");
    match (&r.sum_sx, &r.union_sx, &r.ratio, &r.k_lower) {
        (Some(sum), Some(union), Some(ratio), Some(k)) => {
            doc.kv("sum_sx", sum);
            doc.kv("union_sx", union);
            doc.kv("ratio", exact_with_approx(ratio));
            doc.kv(k_name(r.mode), exact_with_approx(k));
        }
        _ => doc.kv("ratio", "not computed (uncertified)"),
    }
    if let Some(s) = r.sanity {
        doc.kv("ceiling", s.ceiling);
        doc.kv("ceiling_violated", s.violated);
    }

    doc.section("chain");
    for s in &r.chain {
        doc.line(format!(
            "{}: {} {} {}  {}{}",
            s.name,
            format_rational(&s.lhs),
            s.relation,
            format_rational(&s.rhs),
            if s.holds { "holds" } else { "FAILS" },
            if s.audited { "" } else { "  (not audited)" }
        ));
        doc.line(format!("  {}", s.statement));
    }
    doc.kv("chain_holds", r.chain_holds());

    if let Some(c) = &r.companion {
        doc.section("companion");
        match c {
            CompanionSummary::Degenerate { basis, size } => {
                doc.kv("count_basis", basis.name());
                doc.kv("result", format!("degenerate R ({size} ratio)"));
            }
            CompanionSummary::Bound {
                basis,
                primary,
                chosen_i,
                r_size,
                sum_sx,
                union_sx,
                ratio,
                chain_holds,
            } => {
                doc.kv("count_basis", basis.name());
                doc.kv("primary", primary.name());
                doc.kv("chosen_i", chosen_i);
                doc.kv("r_size", r_size);
                doc.kv("sum_sx", sum_sx);
                doc.kv("union_sx", union_sx);
                doc.kv("ratio", exact_with_approx(ratio));
                doc.kv("chain_holds", chain_holds);
            }
        }
    }
}

/// The full report: every inequality input as an exact rational, decimal
/// values only as `approx` annotations.
pub fn render_bound_report(r: &BoundReport) -> String {
    let mut doc = Doc(String::new());
    write_report(&mut doc, r);
    doc.0
}

fn opt_rational(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "-".into(), format_rational)
}

/// Tab-separated history, one row per iteration, for plotting.
pub fn render_history(history: &[HistoryEntry]) -> String {
    let mut out = String::from("iteration\tmove\tcandidate\taccepted\tcurrent\tbest\n");
    for h in history {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            h.iteration,
            h.mv.map_or("initial", |m| m.name()),
            opt_rational(&h.candidate),
            h.accepted,
            format_rational(&h.current),
            format_rational(&h.best)
        )
        .unwrap();
    }
    out
}

/// Config, best result, failures and history in one deterministic document.
pub fn render_search_record(rec: &SearchRecord) -> String {
    let mut doc = Doc(String::new());
    doc.section("config");
    doc.0.push_str(&rec.config.to_toml_table().to_string());

    doc.section("best");
    doc.kv("ratio", exact_with_approx(&rec.best_score.ratio));
    let k = &rec.best_score.ratio - Rational::from_integer(1.into());
    doc.kv("k16_lower", exact_with_approx(&k));
    doc.kv(
        "outcome",
        match &rec.best_score.outcome {
            Outcome::Certified => "certified".to_string(),
            Outcome::Degenerate => "degenerate R (scored 1)".to_string(),
            Outcome::Rejected(reason) => format!("rejected (scored 0): {reason}"),
        },
    );
    doc.kv("set_size", rec.best_set.len());
    for x in &rec.best_set {
        doc.line(x);
    }

    doc.section("failures");
    doc.kv("count", rec.failures.len());
    for f in &rec.failures {
        doc.line(format!("{}: {}", f.iteration, f.reason));
    }

    doc.section("history");
    doc.0.push_str(&render_history(&rec.history));

    if let Some(report) = &rec.best_report {
        write_report(&mut doc, report);
    }
    doc.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{evaluate_bound, EvalOptions};
    use crate::rational::{int, ratio};

    fn sample() -> ElementSet {
        let x = CdNumber::new(4, (0..16).map(|i| match i { 0 => int(1), 1 => ratio(1, 2), _ => int(0) }).collect()).unwrap();
        let y = CdNumber::new(4, (0..16).map(|i| match i { 0 => ratio(3, 7), 1 => int(2), _ => int(0) }).collect()).unwrap();
        ElementSet::new(4, vec![x, y]).unwrap()
    }

    #[test]
    fn round_trip() {
        let a = sample();
        let text = set_to_string(&a);
        assert_eq!(set_from_str(&text).unwrap(), a);
        assert!(text.contains("\"1/2\""));
        assert!(text.contains("single_privileged_orthant = true"));
    }

    #[test]
    fn empty_set_round_trips() {
        let a = ElementSet::empty(2);
        assert_eq!(set_from_str(&set_to_string(&a)).unwrap(), a);
    }

    #[test]
    fn false_flag_declaration_is_an_error() {
        let text = set_to_string(&sample()).replace("inverse_closed = false", "inverse_closed = true");
        assert_eq!(set_from_str(&text), Err(Error::FlagMismatch("inverse_closed")));
        let text = set_to_string(&sample()).replace("all_niner = true", "all_niner = false");
        assert_eq!(set_from_str(&text), Err(Error::FlagMismatch("all_niner")));
    }

    #[test]
    fn flags_are_optional() {
        let text = "format_version = 1\nlevel = 0\nelements = [[\"2\"], [\"-1/3\"]]\n";
        assert_eq!(set_from_str(text).unwrap().len(), 2);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let cases = [
            "format_version = 2\nlevel = 0\nelements = []",
            "level = 0\nelements = []",
            "format_version = 1\nlevel = 5\nelements = []",
            "format_version = 1\nlevel = 1\nelements = [[\"1\"]]",
            "format_version = 1\nlevel = 0\nelements = [[\"2/4\"]]",
            "format_version = 1\nlevel = 0\nelements = [[1]]",
            "format_version = 1\nlevel = 0\nelements = [[\"1\"], [\"1\"]]",
            "format_version = 1\nlevel = 0\nelements = []\ncolour = 3",
            "format_version = 1\nlevel = 0\nelements = []\n[flags]\nshiny = true",
        ];
        for text in cases {
            assert!(matches!(set_from_str(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn report_prints_exact_values() {
        let a = ElementSet::new(4, [1, 2, 4, 8].map(|v| CdNumber::real(4, int(v)))).unwrap();
        let r = evaluate_bound(&a, EvalOptions::new(Mode::SixteenOn)).unwrap();
        let text = render_bound_report(&r);
        assert!(text.contains("ratio = 9/7  (approx 1.28571)"));
        assert!(text.contains("k16_lower = 2/7  (approx 0.285714)"));
        assert!(text.contains("certification = certified"));
        assert!(text.contains("chain_holds = true"));
    }
}
