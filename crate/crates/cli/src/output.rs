use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::params::Params;

pub const SCHEMA_VERSION: u32 = 1;

/// Writes CSV and JSON artifacts for one module run. Without a report
/// directory, the JSON report goes to stdout and CSV files are skipped.
pub struct Output {
    dir: Option<PathBuf>,
    module: &'static str,
}

/// Appends `module` and `params` columns to every row of a CSV body.
pub fn annotate_csv(body: &str, module: &str, params: &str) -> String {
    let mut out = String::with_capacity(body.len() * 2);
    for (i, line) in body.lines().enumerate() {
        out.push_str(line);
        if i == 0 {
            out.push_str(",module,params\n");
        } else {
            out.push_str(&format!(",{module},{params}\n"));
        }
    }
    out
}

impl Output {
    pub fn new(dir: Option<PathBuf>, module: &'static str) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
        }
        Ok(Self { dir, module })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        if let Some(d) = &self.dir {
            let path = d.join(name);
            std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
            println!("wrote {}", path.display());
        }
        Ok(())
    }

    pub fn csv(&self, name: &str, body: &str, params: &Params) -> Result<(), CliError> {
        self.write(name, &annotate_csv(body, self.module, &params.provenance()))
    }

    pub fn json(&self, name: &str, passed: bool, params: &Params, report: &impl Serialize) -> Result<(), CliError> {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "module": self.module,
            "params": params.as_map(),
            "passed": passed,
            "report": report,
        });
        let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))? + "\n";
        if self.dir.is_some() {
            self.write(name, &text)
        } else {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotation() {
        let csv = annotate_csv("t,x\n1,2\n3,4\n", "tower", "k=1;rank=2");
        assert_eq!(csv, "t,x,module,params\n1,2,tower,k=1;rank=2\n3,4,tower,k=1;rank=2\n");
    }
}
