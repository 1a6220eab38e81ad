//! Output assembly: CSV tables with a `#`-prefixed metadata block, and the
//! matching JSON object layout. Every run echoes the fully resolved SI
//! parameter set so results are reproducible from their own header.

use std::fmt::Write as _;
use std::path::Path;

use fluxline::{CircuitParams, DerivedParams};

pub struct Meta {
    lines: Vec<(String, String)>,
}

impl Meta {
    pub fn new(subcommand: &str, timestamp: bool) -> Self {
        let mut lines = vec![("generated_by".into(), format!("fluxline {subcommand}"))];
        if timestamp {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            lines.push(("timestamp_unix".into(), secs.to_string()));
        }
        Self { lines }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn push_params(&mut self, p: &CircuitParams) {
        self.push("X", cell(p.length));
        self.push("l", cell(p.inductance_per_length));
        self.push("c", cell(p.capacitance_per_length));
        self.push("L_c", cell(p.coupling_inductance));
        self.push("L_2", cell(p.loop_inductance));
        self.push("C_q", cell(p.junction_capacitance));
        self.push("E_J", cell(p.josephson_energy));
        self.push("C_R", cell(p.termination_capacitance));
        self.push("Phi_ext", cell(p.external_flux));
    }

    pub fn push_derived(&mut self, d: &DerivedParams) {
        self.push("L_c2", cell(d.boundary_inductance));
        self.push("Z0", cell(d.impedance));
        self.push("omega0", cell(d.omega0));
        self.push("omega_cutoff", cell(d.omega_cutoff));
        self.push("n_cutoff", cell(d.n_cutoff));
        self.push("Xl", cell(d.total_inductance));
        self.push("Xc", cell(d.total_capacitance));
    }
}

/// One CSV cell; floats use the shortest round-trip scientific
/// representation so that identical runs produce byte-identical files and
/// re-ingestion loses nothing.
pub fn cell(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_csv(
    path: &Path,
    meta: &Meta,
    header: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    let mut text = String::new();
    for (k, v) in &meta.lines {
        let _ = writeln!(text, "# {k} = {v}");
    }
    let _ = writeln!(text, "{}", header.join(","));
    for row in rows {
        let _ = writeln!(text, "{}", row.join(","));
    }
    std::fs::write(path, text)
}

/// Parameter block for JSON outputs; feeding the whole JSON document back
/// in as `--config` reproduces the same derived constants.
pub fn params_json(p: &CircuitParams) -> serde_json::Value {
    serde_json::json!({
        "X": p.length,
        "l": p.inductance_per_length,
        "c": p.capacitance_per_length,
        "L_c": p.coupling_inductance,
        "L_2": p.loop_inductance,
        "C_q": p.junction_capacitance,
        "E_J": p.josephson_energy,
        "C_R": p.termination_capacitance,
        "Phi_ext": p.external_flux,
    })
}

/// `base.csv` + tag `L_c=231pH` → `base.L_c=231pH.csv`.
pub fn tagged_path(path: &Path, tag: &str) -> std::path::PathBuf {
    let safe: String = tag
        .chars()
        .map(|c| if c == '/' || c.is_whitespace() { '_' } else { c })
        .collect();
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => path.with_extension(format!("{safe}.{ext}")),
        None => path.with_extension(safe),
    }
}
