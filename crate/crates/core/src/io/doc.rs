//! JSON documents under the "troplag/1" schema.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::round_sig;
use crate::bundle::KaneyamaBundle;
use crate::error::{Error, Result};
use crate::fan::{build_fan, Fan, LatticeVector};
use crate::multisection::{CoveringKind, Lift, RayLift, TropicalMultiSection};
use crate::realization::pipeline::Overrides;

pub const SCHEMA: &str = "troplag/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDoc {
    pub rays: Vec<LatticeVector>,
}

/// Tropical data, either as potential values at the upstairs rays or as
/// explicit lifts and ray adjacencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiSectionDoc {
    pub degree: usize,
    pub kind: CoveringKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_values: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<Vec<Lift>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<RayLift>>,
}

/// Everything a rebuild of the glued potential needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluedDoc {
    pub fan: FanDoc,
    pub multisection: MultiSectionDoc,
    pub overrides: Overrides,
}

/// Any input document. Which keys are required depends on the command.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InputDoc {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multisection: Option<MultiSectionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<KaneyamaBundle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<Overrides>,
    /// Present in realize responses; read back by verify and plot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glued: Option<GluedDoc>,
    #[serde(flatten)]
    pub rest: Map<String, Value>,
}

pub fn parse_input(text: &str) -> Result<InputDoc> {
    let doc: InputDoc = serde_json::from_str(text)?;
    if doc.schema != SCHEMA {
        return Err(Error::Parse(format!("schema {:?} is not {SCHEMA:?}", doc.schema)));
    }
    Ok(doc)
}

impl FanDoc {
    pub fn of(fan: &Fan) -> Self {
        FanDoc { rays: fan.rays().to_vec() }
    }

    pub fn build(&self) -> Result<Fan> {
        build_fan(&self.rays)
    }
}

impl MultiSectionDoc {
    pub fn of(ts: &TropicalMultiSection) -> Self {
        MultiSectionDoc {
            degree: ts.degree,
            kind: ts.kind,
            ray_values: None,
            lifts: Some(ts.lifts.clone()),
            adjacency: Some(ts.adjacency.clone()),
        }
    }

    pub fn build(&self, fan: &Fan) -> Result<TropicalMultiSection> {
        match (&self.ray_values, &self.lifts, &self.adjacency) {
            (Some(v), None, None) => TropicalMultiSection::from_ray_values(fan, self.degree, self.kind, v),
            (None, Some(l), Some(a)) => Ok(TropicalMultiSection {
                fan: fan.clone(),
                degree: self.degree,
                kind: self.kind,
                lifts: l.clone(),
                adjacency: a.clone(),
            }),
            _ => Err(Error::Parse("multisection needs either ray_values or both lifts and adjacency".into())),
        }
    }
}

impl InputDoc {
    pub fn fan(&self) -> Result<Fan> {
        self.fan.as_ref().ok_or_else(|| Error::Parse("missing key \"fan\"".into()))?.build()
    }

    pub fn multisection(&self) -> Result<TropicalMultiSection> {
        let fan = self.fan()?;
        self.multisection.as_ref().ok_or_else(|| Error::Parse("missing key \"multisection\"".into()))?.build(&fan)
    }
}

/// Round every non-integral number to six significant digits.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0), 6);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

/// A response document: the schema tag, the command, then `body`'s fields.
pub fn response(command: &str, body: impl Serialize) -> Result<String> {
    let mut out = Map::new();
    out.insert("schema".into(), Value::from(SCHEMA));
    out.insert("command".into(), Value::from(command));
    match serde_json::to_value(body)? {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&rounded(Value::Object(out)))?;
    s.push('\n');
    Ok(s)
}
