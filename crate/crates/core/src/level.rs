//! Autonomy level classification over the four NCAP layers:
//! perception, modeling, planning and execution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcapError, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerEvidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perception: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modeling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planning: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub execution: Option<String>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapabilityProfile {
    pub platform: String,
    #[serde(default = "yes")]
    pub perception: bool,
    #[serde(default)]
    pub modeling: bool,
    #[serde(default)]
    pub planning: bool,
    #[serde(default)]
    pub execution: bool,
    #[serde(default)]
    pub evidence: LayerEvidence,
}

impl CapabilityProfile {
    pub fn new(
        platform: impl Into<String>,
        modeling: bool,
        planning: bool,
        execution: bool,
    ) -> Self {
        Self {
            platform: platform.into(),
            perception: true,
            modeling,
            planning,
            execution,
            evidence: LayerEvidence::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutonomyLevel {
    pub value: u8,
    pub warnings: Vec<String>,
}

impl fmt::Display for AutonomyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Level = length of the consecutive run of modeling, planning, execution
/// starting at modeling. A capability above a missing layer does not count
/// and is reported as a warning.
pub fn classify(p: &CapabilityProfile) -> Result<AutonomyLevel> {
    if !p.perception {
        return Err(NcapError::InadmissibleProfile {
            platform: p.platform.clone(),
        });
    }
    let layers = [
        ("modeling", p.modeling),
        ("planning", p.planning),
        ("execution", p.execution),
    ];
    let value = layers.iter().take_while(|(_, on)| *on).count();
    let warnings = layers
        .iter()
        .enumerate()
        .skip(value + 1)
        .filter(|(_, (_, on))| *on)
        .map(|(_, (name, _))| {
            format!(
                "{}: {name} capability ignored because {} is absent",
                p.platform, layers[value].0
            )
        })
        .collect();
    Ok(AutonomyLevel {
        value: value as u8,
        warnings,
    })
}
