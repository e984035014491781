use std::fmt::Write;

use super::{sort_rows, BenchRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
}

pub const CSV_HEADER: &str = "name,kind,mode,size_in,size_out,ratio,wall_time";

/// Renders rows sorted by name, then kind and mode.
pub fn emit_report(rows: &[BenchRow], format: ReportFormat) -> String {
    let mut rows = rows.to_vec();
    sort_rows(&mut rows);
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{:.6},{:.6}",
                    r.name,
                    r.kind,
                    r.mode_label(),
                    r.size_in,
                    r.size_out,
                    r.ratio,
                    r.wall_time
                );
            }
        }
        ReportFormat::Table => {
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(4);
            let _ = writeln!(
                out,
                "{:<width$}  {:<4}  {:<12}  {:>10}  {:>10}  {:>7}  {:>8}  {:>9}",
                "name", "kind", "mode", "size_in", "size_out", "ratio", "rules", "time_s"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:<width$}  {:<4}  {:<12}  {:>10}  {:>10}  {:>7.4}  {:>8}  {:>9.3}",
                    r.name,
                    r.kind,
                    r.mode_label(),
                    r.size_in,
                    r.size_out,
                    r.ratio,
                    r.rules,
                    r.wall_time
                );
            }
        }
    }
    out
}
