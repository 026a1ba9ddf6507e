//! The JSON instance document: a measure, an optional kernel, an optional
//! partition, and the arithmetic mode.
//!
//! ```json
//! {"n":3,"nu":["1/2","1/4","1/4"],"R":[["1","0","0"],["0","1/2","1/2"],["0","1/2","1/2"]],
//!  "partition":[[0],[1,2]]}
//! ```
//!
//! Rational mode (the default) accepts `"p/q"` strings and integers only.
//! Float mode also accepts decimals; each row and the measure must sum to 1
//! within `epsilon` and are then rescaled exactly onto the simplex.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{check_dim, Error, Result};
use crate::measure::{Kernel, Measure};
use crate::partition::Partition;
use crate::rational::Rat;

pub const DEFAULT_EPSILON: (i64, i64) = (1, 1_000_000_000);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Rational,
    /// Diagnostic comparisons within a max-norm tolerance.
    Float { epsilon: Rat },
}

impl Mode {
    pub fn float_default() -> Mode {
        Mode::Float { epsilon: Rat::new(DEFAULT_EPSILON.0, DEFAULT_EPSILON.1) }
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Mode::Float { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float { .. } => "float",
        }
    }

    pub fn epsilon(&self) -> Option<&Rat> {
        match self {
            Mode::Rational => None,
            Mode::Float { epsilon } => Some(epsilon),
        }
    }

    /// Epsilon as its exact decimal expansion, when it has one.
    pub fn epsilon_string(&self) -> Option<String> {
        self.epsilon().map(|e| e.to_decimal_string().unwrap_or_else(|| e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub nu: Measure,
    pub kernel: Option<Kernel>,
    pub partition: Option<Partition>,
    pub mode: Mode,
}

impl Instance {
    pub fn new(nu: Measure) -> Self {
        Instance { nu, kernel: None, partition: None, mode: Mode::Rational }
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Result<Self> {
        check_dim(self.n(), kernel.n())?;
        self.kernel = Some(kernel);
        Ok(self)
    }

    pub fn with_partition(mut self, partition: Partition) -> Result<Self> {
        check_dim(self.n(), partition.n())?;
        self.partition = Some(partition);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.nu.n()
    }

    pub fn require_kernel(&self) -> Result<&Kernel> {
        self.kernel.as_ref().ok_or_else(|| Error::MalformedDocument("instance has no kernel `R`".into()))
    }

    pub fn require_partition(&self) -> Result<&Partition> {
        self.partition
            .as_ref()
            .ok_or_else(|| Error::MalformedDocument("instance has no `partition`".into()))
    }

    pub fn require_rational(&self) -> Result<()> {
        if self.mode.is_float() {
            Err(Error::FloatModeRefused)
        } else {
            Ok(())
        }
    }

    fn to_doc(&self) -> Doc {
        let strings = |v: &[Rat]| v.iter().map(|x| Value::String(x.to_string())).collect();
        Doc {
            n: self.n(),
            nu: strings(self.nu.weights()),
            r: self.kernel.as_ref().map(|k| k.rows().iter().map(|row| strings(row)).collect()),
            partition: self.partition.as_ref().map(Partition::to_index_lists),
            mode: self.mode.is_float().then(|| self.mode.name().to_string()),
            epsilon: self.mode.epsilon_string(),
        }
    }

    fn from_doc(doc: Doc) -> Result<Self> {
        let mode = match (doc.mode.as_deref(), &doc.epsilon) {
            (None | Some("rational"), None) => Mode::Rational,
            (None | Some("rational"), Some(_)) => {
                return Err(Error::MalformedDocument("`epsilon` is only allowed in float mode".into()))
            }
            (Some("float"), None) => Mode::float_default(),
            (Some("float"), Some(e)) => {
                let epsilon = Rat::from_decimal_str(e)
                    .filter(|e| !e.is_negative())
                    .ok_or_else(|| Error::MalformedDocument(format!("invalid epsilon `{e}`")))?;
                Mode::Float { epsilon }
            }
            (Some(other), _) => return Err(Error::MalformedDocument(format!("unknown mode `{other}`"))),
        };
        let n = doc.n;
        if n == 0 {
            return Err(Error::MalformedDocument("`n` must be at least 1".into()));
        }
        check_dim(n, doc.nu.len())?;
        let nu = parse_vector(&doc.nu, &mode).and_then(|w| onto_simplex(w, &mode, "nu"))?;
        let nu = Measure::new(nu)?;
        let kernel = match &doc.r {
            None => None,
            Some(rows) => {
                check_dim(n, rows.len())?;
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(x, row)| {
                        check_dim(n, row.len())?;
                        parse_vector(row, &mode).and_then(|w| onto_simplex(w, &mode, &format!("row {x}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(Kernel::new(rows)?)
            }
        };
        let partition = doc.partition.as_ref().map(|p| Partition::from_index_lists(p, n)).transpose()?;
        Ok(Instance { nu, kernel, partition, mode })
    }
}

fn parse_scalar(v: &Value, mode: &Mode) -> Result<Rat> {
    let bad = || Error::MalformedDocument(format!("invalid probability value {v}"));
    match v {
        Value::String(s) => match s.parse::<Rat>() {
            Ok(r) => Ok(r),
            Err(_) if mode.is_float() => Rat::from_decimal_str(s).ok_or_else(bad),
            Err(_) => Err(bad()),
        },
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(Rat::from_integer(i))
            } else if mode.is_float() {
                Rat::from_decimal_str(&num.to_string()).ok_or_else(bad)
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

fn parse_vector(values: &[Value], mode: &Mode) -> Result<Vec<Rat>> {
    values.iter().map(|v| parse_scalar(v, mode)).collect()
}

/// Rational mode: unchanged (validated by the constructors). Float mode: the
/// sum must be within epsilon of 1, then the vector is divided by its sum.
fn onto_simplex(weights: Vec<Rat>, mode: &Mode, what: &str) -> Result<Vec<Rat>> {
    let Mode::Float { epsilon } = mode else { return Ok(weights) };
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::NotAProbability(format!("{what} has negative entry {w}")));
    }
    let total: Rat = weights.iter().sum();
    if (&total - &Rat::one()).abs() > *epsilon {
        return Err(Error::NotAProbability(format!("{what} sums to {total}, not within epsilon of 1")));
    }
    Ok(weights.iter().map(|w| w / &total).collect())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    n: usize,
    nu: Vec<Value>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    r: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partition: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
}

pub fn parse_instance(doc: &str) -> Result<Instance> {
    let raw: Doc = serde_json::from_str(doc).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    Instance::from_doc(raw)
}

/// Compact, canonical JSON: keys in document order, rationals in lowest terms.
pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string(&inst.to_doc()).expect("instance documents always serialize")
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = Doc::deserialize(deserializer)?;
        Instance::from_doc(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::fixtures::e4;

    const E4_DOC: &str = r#"{"n":4,"nu":["1/4","1/4","1/4","1/4"],"R":[["0","1/3","1/3","1/3"],["0","1","0","0"],["0","0","1/2","1/2"],["0","0","1/2","1/2"]]}"#;

    #[test]
    fn one_point_instance_round_trips_verbatim() {
        let doc = r#"{"n":1,"nu":["1"],"R":[["1"]]}"#;
        let inst = parse_instance(doc).unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.kernel, Some(Kernel::identity(1).unwrap()));
        assert_eq!(serialize_instance(&inst), doc);
    }

    #[test]
    fn four_state_fixture_parses_and_round_trips() {
        let inst = parse_instance(E4_DOC).unwrap();
        assert_eq!(inst.kernel.as_ref().unwrap(), &e4());
        assert_eq!(serialize_instance(&inst), E4_DOC);
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn rejects_non_probabilities() {
        let doc = r#"{"n":2,"nu":["1/2","1/3"]}"#;
        assert!(matches!(parse_instance(doc), Err(Error::NotAProbability(_))));
        let doc = r#"{"n":2,"nu":["3/2","-1/2"]}"#;
        assert!(matches!(parse_instance(doc), Err(Error::NotAProbability(_))));
        let doc = r#"{"n":2,"nu":["1/2","1/2"],"R":[["1","0"],["1/2","1/3"]]}"#;
        assert!(matches!(parse_instance(doc), Err(Error::NotAProbability(_))));
    }

    #[test]
    fn rejects_malformed_and_mismatched_documents() {
        assert!(matches!(parse_instance("{"), Err(Error::MalformedDocument(_))));
        assert!(matches!(parse_instance(r#"{"n":2,"nu":["1"]}"#), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            parse_instance(r#"{"n":1,"nu":["1"],"R":[["1","0"]]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(parse_instance(r#"{"n":1,"nu":["1.0"]}"#), Err(Error::MalformedDocument(_))));
        assert!(matches!(parse_instance(r#"{"n":1,"nu":[0.5]}"#), Err(Error::MalformedDocument(_))));
        assert!(matches!(
            parse_instance(r#"{"n":1,"nu":["1"],"epsilon":"0.1"}"#),
            Err(Error::MalformedDocument(_))
        ));
        assert!(matches!(parse_instance(r#"{"n":1,"nu":["1"],"extra":1}"#), Err(Error::MalformedDocument(_))));
        assert!(matches!(
            parse_instance(r#"{"n":2,"nu":["1/2","1/2"],"partition":[[0,1],[1]]}"#),
            Err(Error::OverlappingBlocks(1))
        ));
    }

    #[test]
    fn bare_integers_are_rationals() {
        let inst = parse_instance(r#"{"n":2,"nu":[1,"0"],"R":[[1,0],[0,1]]}"#).unwrap();
        assert!(inst.nu.weight(0).is_one());
    }

    #[test]
    fn float_mode_accepts_decimals_within_epsilon() {
        let doc = r#"{"n":2,"nu":["0.5","0.5"],"R":[["0.3333333333","0.6666666667"],[0.25,"3/4"]],"mode":"float","epsilon":"1e-9"}"#;
        let inst = parse_instance(doc).unwrap();
        assert_eq!(inst.mode, Mode::Float { epsilon: Rat::new(1, 1_000_000_000) });
        let k = inst.kernel.as_ref().unwrap();
        assert_eq!(k.entry(1, 0), &Rat::new(1, 4));
        assert_eq!(k.entry(0, 0), &Rat::new(3333333333, 10000000000));
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
        assert!(serialize_instance(&inst).ends_with(r#""mode":"float","epsilon":"0.000000001"}"#));

        let loose = r#"{"n":2,"nu":["0.5","0.4"],"mode":"float","epsilon":"0.001"}"#;
        assert!(matches!(parse_instance(loose), Err(Error::NotAProbability(_))));
        let default_eps = parse_instance(r#"{"n":1,"nu":["1"],"mode":"float"}"#).unwrap();
        assert_eq!(default_eps.mode, Mode::float_default());
    }
}
