use std::fmt::Write as _;
use std::path::Path;

/// Record of one invocation, written next to its outputs. The `arg` lines
/// hold the full argument list, so `replay` can run the command again.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunManifest {
    pub command: String,
    pub config_path: Option<String>,
    pub demand_path: Option<String>,
    pub rng_seed: Option<u64>,
    pub output_dir: String,
    pub tool_version: String,
    /// Zero unless timing was requested, so reruns stay byte-identical.
    pub wall_ms: u64,
    pub args: Vec<String>,
}

pub const MANIFEST_FILE: &str = "manifest.txt";

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "config_path = {}", opt(&self.config_path));
        let _ = writeln!(s, "demand_path = {}", opt(&self.demand_path));
        let _ = writeln!(s, "rng_seed = {}", self.rng_seed.map(|v| v.to_string()).unwrap_or_default());
        let _ = writeln!(s, "output_dir = {}", self.output_dir);
        let _ = writeln!(s, "tool_version = {}", self.tool_version);
        let _ = writeln!(s, "wall_ms = {}", self.wall_ms);
        for a in &self.args {
            let _ = writeln!(s, "arg = {a}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<RunManifest, String> {
        let mut m = RunManifest::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line.split_once(" = ").or_else(|| line.strip_suffix(" =").map(|k| (k, ""))).ok_or_else(
                || format!("manifest line {}: expected `key = value`", i + 1),
            )?;
            let some = |v: &str| (!v.is_empty()).then(|| v.to_string());
            match k {
                "command" => m.command = v.to_string(),
                "config_path" => m.config_path = some(v),
                "demand_path" => m.demand_path = some(v),
                "rng_seed" => {
                    m.rng_seed = match v {
                        "" => None,
                        s => Some(s.parse().map_err(|_| format!("manifest line {}: bad rng_seed", i + 1))?),
                    }
                }
                "output_dir" => m.output_dir = v.to_string(),
                "tool_version" => m.tool_version = v.to_string(),
                "wall_ms" => m.wall_ms = v.parse().map_err(|_| format!("manifest line {}: bad wall_ms", i + 1))?,
                "arg" => m.args.push(v.to_string()),
                other => return Err(format!("manifest line {}: unknown key `{other}`", i + 1)),
            }
        }
        if m.args.is_empty() {
            return Err("manifest has no arguments to replay".into());
        }
        Ok(m)
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join(MANIFEST_FILE), self.to_text())
    }
}
