use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    /// Whitespace-separated, `#` header, blank line between blocks.
    Gnuplot,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            // shortest round-trip form; scientific outside [1e-4, 1e15)
            Cell::Num(v) if *v == 0.0 || (1e-4..1e15).contains(&v.abs()) => write!(f, "{v}"),
            Cell::Num(v) => write!(f, "{v:e}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// Rows with a fixed schema; `block` names the column whose changes start a
/// new gnuplot data block.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub block: Option<usize>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            block: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, meta: &str, format: Format, mut out: W) -> io::Result<()> {
        writeln!(out, "# meta: {meta}")?;
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    writeln!(out, "{}", join(row, ","))?;
                }
            }
            Format::Gnuplot => {
                writeln!(out, "# {}", self.columns.join(" "))?;
                let mut prev: Option<String> = None;
                for row in &self.rows {
                    if let Some(b) = self.block {
                        let key = row[b].to_string();
                        if prev.as_ref().is_some_and(|p| *p != key) {
                            writeln!(out)?;
                            writeln!(out)?;
                        }
                        prev = Some(key);
                    }
                    writeln!(out, "{}", join(row, " "))?;
                }
            }
        }
        out.flush()
    }
}

fn join(row: &[Cell], sep: &str) -> String {
    row.iter().map(Cell::to_string).collect::<Vec<_>>().join(sep)
}
