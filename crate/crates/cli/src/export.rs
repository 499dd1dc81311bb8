use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

use firefly_core::dynamics::{Orbit, Trace};
use firefly_core::graph::{to_dot, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    Json,
    Csv,
    DotFrames,
}

/// Rows `t = 0 ..= sync_time` for a synchronizing orbit, otherwise every
/// configuration up to the cycle closing.
fn csv(orbit: &Orbit) -> Result<String> {
    if orbit.is_truncated() {
        bail!("orbit hit the step cap; csv needs a closed orbit");
    }
    let last = orbit.sync_time().unwrap_or(orbit.trajectory().len() - 1);
    let mut out = String::from("t");
    for v in 0..orbit.vertex_count() {
        let _ = write!(out, ",x{v}");
    }
    out.push('\n');
    for t in 0..=last {
        let _ = write!(out, "{t}");
        for s in orbit.states_at(t) {
            let _ = write!(out, ",{s}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn export_trace(g: &Graph, orbit: &Orbit, format: TraceFormat, path: &Path) -> Result<()> {
    match format {
        TraceFormat::Json => {
            let mut text = serde_json::to_string_pretty(&Trace::new(g, orbit))?;
            text.push('\n');
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        TraceFormat::Csv => fs::write(path, csv(orbit)?).with_context(|| format!("writing {}", path.display())),
        TraceFormat::DotFrames => {
            fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))?;
            let width = orbit.trajectory().len().to_string().len().max(4);
            for (t, x) in orbit.trajectory().iter().enumerate() {
                let labels: Vec<String> = x.iter().map(u32::to_string).collect();
                let file = path.join(format!("frame_{t:0width$}.dot"));
                fs::write(&file, to_dot(g, &format!("t{t}"), Some(&labels)))
                    .with_context(|| format!("writing {}", file.display()))?;
            }
            Ok(())
        }
    }
}
