//! CSV output: `#`-prefixed metadata lines, a header row, data rows.
//!
//! Several trajectories (sweeps, figure presets) become consecutive blocks
//! separated by one blank line. Floats are written with 17 significant
//! digits so that reading a file back reproduces every value exactly.

use std::io::Write;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::trajectory::TrajectoryRecord;

pub const COLUMNS: [&str; 9] = ["t", "a1", "a2", "a3_re", "a3_im", "a5", "a6", "negativity", "bell"];
pub const ORACLE_COLUMNS: [&str; 2] = ["negativity_oracle", "bell_oracle"];
pub const TOOL: &str = concat!("tavis ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Block {
    pub metadata: Vec<(String, String)>,
    pub records: Vec<TrajectoryRecord>,
}

impl Block {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Full parameter echo for one run. Extra entries (preset id, panel, which
/// values are reconstructed) go after these.
pub fn run_metadata(cfg: &RunConfig) -> Vec<(String, String)> {
    let p = &cfg.params;
    let mut meta = vec![
        ("tool", TOOL.to_string()),
        ("g", format_float(p.g)),
        ("omega", format_float(p.omega)),
        ("big_omega", format_float(p.big_omega)),
        ("gamma", format_float(p.gamma)),
        ("n", p.n.to_string()),
        ("theta", format_float(p.theta)),
        ("t_max", format_float(cfg.t_max)),
        ("steps", cfg.steps.to_string()),
        ("with_oracle", cfg.with_oracle.to_string()),
    ];
    if cfg.with_oracle {
        meta.push(("n_max", cfg.oracle_cutoff().to_string()));
    }
    meta.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn header(with_oracle: bool) -> Vec<&'static str> {
    let mut cols = COLUMNS.to_vec();
    if with_oracle {
        cols.extend(ORACLE_COLUMNS);
    }
    cols
}

fn record_fields(r: &TrajectoryRecord) -> Vec<String> {
    let mut out: Vec<String> = [r.t, r.a1, r.a2, r.a3_re, r.a3_im, r.a5, r.a6, r.negativity, r.bell]
        .into_iter()
        .map(format_float)
        .collect();
    out.extend(r.negativity_oracle.into_iter().chain(r.bell_oracle).map(format_float));
    out
}

pub fn write_blocks<W: Write>(mut w: W, blocks: &[Block]) -> Result<()> {
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        for (k, v) in &block.metadata {
            if k.contains(':') || k.contains('\n') || v.contains('\n') {
                return Err(CliError::InvalidArgument(format!(
                    "metadata entry `{k}` cannot be written"
                )));
            }
            writeln!(w, "# {k}: {v}")?;
        }
        let with_oracle = block.records.first().is_some_and(TrajectoryRecord::has_oracle);
        if block
            .records
            .iter()
            .any(|r| r.has_oracle() != with_oracle || r.bell_oracle.is_some() != with_oracle)
        {
            return Err(CliError::InvalidArgument(
                "block mixes rows with and without oracle columns".into(),
            ));
        }
        let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(&mut w);
        csv.write_record(header(with_oracle))?;
        for r in &block.records {
            csv.write_record(record_fields(r))?;
        }
        csv.flush()?;
    }
    Ok(())
}

pub fn to_string(blocks: &[Block]) -> Result<String> {
    let mut buf = Vec::new();
    write_blocks(&mut buf, blocks)?;
    String::from_utf8(buf).map_err(|e| CliError::MalformedCsv(e.to_string()))
}

fn parse_block(chunk: &str) -> Result<Block> {
    let metadata = chunk
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .map(|l| {
            let (k, v) = l
                .split_once(':')
                .ok_or_else(|| CliError::MalformedCsv(format!("metadata line `#{l}` has no `:`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(chunk.as_bytes());
    let head: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let with_oracle = if head == header(false) {
        false
    } else if head == header(true) {
        true
    } else {
        return Err(CliError::MalformedCsv(format!("unexpected header {head:?}")));
    };
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let v = row
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| CliError::MalformedCsv(format!("bad number `{f}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        records.push(TrajectoryRecord {
            t: v[0],
            a1: v[1],
            a2: v[2],
            a3_re: v[3],
            a3_im: v[4],
            a5: v[5],
            a6: v[6],
            negativity: v[7],
            bell: v[8],
            negativity_oracle: with_oracle.then(|| v[9]),
            bell_oracle: with_oracle.then(|| v[10]),
        });
    }
    Ok(Block { metadata, records })
}

/// Inverse of [`write_blocks`].
pub fn read_blocks(text: &str) -> Result<Vec<Block>> {
    let text = text.replace("\r\n", "\n");
    text.split("\n\n")
        .filter(|chunk| !chunk.trim().is_empty())
        .map(parse_block)
        .collect()
}
