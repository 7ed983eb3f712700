use std::collections::BTreeMap;
use std::fmt::Write;

use decnum_core::modrep::IrreducibleLabel;

use crate::{Format, OutputRecord, Results, StalkDegree, Table};

pub fn per_character_cell(m: &BTreeMap<IrreducibleLabel, usize>) -> String {
    m.iter().map(|(l, n)| format!("{l}: {n}")).collect::<Vec<_>>().join(", ")
}

fn stalk_cell(s: &[StalkDegree]) -> String {
    let parts: Vec<String> = s.iter().map(|d| format!("{}: {}", d.degree, d.module)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn row(cells: &[&dyn ToString]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

fn header(cells: &[&str]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

/// Tables shown in text and markdown modes.
pub fn tables_of(results: &Results) -> Vec<Table> {
    match results {
        Results::Lattice(l) => {
            let cartan: Vec<String> = l
                .cartan
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            vec![Table {
                title: format!("Lattice data of {}", l.diagram),
                note: String::new(),
                header: header(&["quantity", "value"]),
                rows: vec![
                    row(&[&"Cartan matrix", &cartan.join("; ")]),
                    row(&[&"roots", &l.roots]),
                    row(&[&"dual Coxeter number", &l.dual_coxeter]),
                    row(&[&"P/Q", &l.weight_quotient.text]),
                    row(&[&"P∨/Q∨", &l.coweight_quotient.text]),
                    row(&[&"connection index", &l.connection_index]),
                    row(&[&"long root subsystem", &l.long_root_subsystem]),
                    row(&[&"folding", &format!("{} with A = {}", l.folding_target, l.folding_symmetry)]),
                ],
            }]
        }
        Results::Decomposition(list) => vec![Table {
            title: "Decomposition numbers".into(),
            note: String::new(),
            header: header(&["singularity", "Γ̂", "A", "P/Q", "ℓ", "d", "per character"]),
            rows: list
                .entries
                .iter()
                .map(|e| {
                    row(&[
                        &e.singularity,
                        &e.gamma_hat,
                        &e.symmetry,
                        &e.group.text,
                        &e.ell,
                        &e.d,
                        &per_character_cell(&e.per_character),
                    ])
                })
                .collect(),
        }],
        Results::Minimal(list) => vec![Table {
            title: "Minimal orbit closures".into(),
            note: String::new(),
            header: header(&["singularity", "dim", "Γ′", "P∨(Φ′)/Q∨(Φ′)", "ℓ", "d"]),
            rows: list
                .entries
                .iter()
                .map(|e| row(&[&e.singularity, &e.orbit_dim, &e.gamma_prime, &e.group.text, &e.ell, &e.d]))
                .collect(),
        }],
        Results::Stalks(s) => vec![Table {
            title: format!("Stalks at the singular point of {} (d = {})", s.cone, s.open_dim),
            note: if s.partial {
                "Only the degrees determined by the known window of link cohomology are shown.".into()
            } else {
                String::new()
            },
            header: header(&["flavor", "coeff", "ℓ", "object", "stalk"]),
            rows: s
                .entries
                .iter()
                .map(|e| {
                    let ell = e.ell.map_or("-".to_string(), |l| l.to_string());
                    row(&[&e.flavor, &format!("{:?}", e.coeff), &ell, &e.object, &stalk_cell(&e.stalk)])
                })
                .collect(),
        }],
        Results::Tables(t) => {
            let mut out = t.tables.clone();
            out.push(Table {
                title: "Grid".into(),
                note: "Every case behind the tables above.".into(),
                header: header(&["family", "singularity", "ℓ", "d", "per character"]),
                rows: t
                    .grid
                    .iter()
                    .map(|g| row(&[&g.family, &g.singularity, &g.ell, &g.d, &per_character_cell(&g.per_character)]))
                    .collect(),
            });
            out
        }
    }
}

fn width(s: &str) -> usize {
    s.chars().filter(|c| !is_combining(*c)).count()
}

fn is_combining(c: char) -> bool {
    ('\u{0300}'..='\u{036f}').contains(&c)
}

fn pad(s: &str, w: usize) -> String {
    let mut out = s.to_string();
    out.extend(std::iter::repeat_n(' ', w.saturating_sub(width(s))));
    out
}

fn text_table(t: &Table, out: &mut String) {
    let n = t.header.len();
    let mut widths: Vec<usize> = t.header.iter().map(|h| width(h)).collect();
    for r in &t.rows {
        for (i, c) in r.iter().enumerate().take(n) {
            widths[i] = widths[i].max(width(c));
        }
    }
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| pad(c, w)).collect();
        padded.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", t.title);
    if !t.note.is_empty() {
        let _ = writeln!(out, "{}", t.note);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", line(&t.header));
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let _ = writeln!(out, "{}", rule.join("  "));
    for r in &t.rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn markdown_table(t: &Table, out: &mut String) {
    let _ = writeln!(out, "### {}", t.title);
    let _ = writeln!(out);
    if !t.note.is_empty() {
        let _ = writeln!(out, "{}", t.note);
        let _ = writeln!(out);
    }
    let line = |cells: &[String]| format!("| {} |", cells.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "));
    let _ = writeln!(out, "{}", line(&t.header));
    let _ = writeln!(out, "|{}", "---|".repeat(t.header.len()));
    for r in &t.rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

/// Renders a record; byte-identical for equal records.
pub fn render(rec: &OutputRecord, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rec).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Text | Format::Markdown => {
            let mut out = String::new();
            for (i, t) in tables_of(&rec.results).iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                if format == Format::Text {
                    text_table(t, &mut out);
                } else {
                    markdown_table(t, &mut out);
                }
            }
            out
        }
    }
}
