//! Context configurations: a bundled fixture name or a JSON file.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context as _};
use morita_core::context::fixtures::Fixture;
use morita_core::context::{continuous_unitary_lift, holomorphic_frame, Level, Lift, MoritaContext};
use morita_core::equivariant::UnitaryTwist;
use morita_core::function_core::{Domain, GridLayout, DEFAULT_RADIAL, DEFAULT_SAMPLES};
use serde::Deserialize;

/// On-disk context description. Without `lifts`, the canonical lifts for
/// the level are registered.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextFile {
    pub domain: Domain,
    pub twist: UnitaryTwist,
    #[serde(default = "holomorphic")]
    pub level: Level,
    #[serde(default)]
    pub lifts: Option<Vec<Lift>>,
}

fn holomorphic() -> Level {
    Level::Holomorphic
}

pub fn canonical_lifts(domain: Domain, twist: &UnitaryTwist, level: Level) -> anyhow::Result<Vec<Lift>> {
    let frame = holomorphic_frame(twist, domain)?;
    Ok(match level {
        Level::Holomorphic => vec![frame.lift_b, frame.lift_a],
        Level::Continuous => {
            let layout = GridLayout::new(domain, DEFAULT_SAMPLES, DEFAULT_RADIAL)?;
            vec![continuous_unitary_lift(twist, &layout)?, frame.lift_a]
        }
    })
}

impl ContextFile {
    pub fn into_context(self) -> anyhow::Result<MoritaContext> {
        let lifts = match self.lifts {
            Some(l) => l,
            None => canonical_lifts(self.domain, &self.twist, self.level)?,
        };
        Ok(MoritaContext::new(self.domain, self.twist, self.level, lifts)?)
    }
}

/// Resolves a fixture name or reads a JSON context file.
pub fn load_context(source: &str) -> anyhow::Result<MoritaContext> {
    if let Ok(fx) = source.parse::<Fixture>() {
        return Ok(fx.context()?);
    }
    let path = Path::new(source);
    if !path.exists() {
        bail!("{source:?} is neither a bundled fixture (disk, annulus-trivial, annulus-twisted) nor a file");
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ContextFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.into_context()
}
