use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The static part of a generalized knapsack instance: item weights and the
/// penalty rate charged per unit of excess weight.
#[derive(Debug, Clone, PartialEq)]
pub struct GkpStatic<S> {
    weights: Vec<S>,
    penalty: S,
}

impl<S: Scalar> GkpStatic<S> {
    pub fn new(weights: Vec<S>, penalty: S) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| *w < S::zero()) {
            return Err(Error::InvalidParameter(format!("item weight {i} is negative")));
        }
        if penalty < S::zero() {
            return Err(Error::InvalidParameter("penalty rate is negative".into()));
        }
        Ok(Self { weights, penalty })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn penalty(&self) -> S {
        self.penalty
    }

    /// Sum of all item weights.
    pub fn total_weight(&self) -> S {
        self.weights.iter().fold(S::zero(), |acc, w| acc + *w)
    }
}

/// One revealed round: item profits and the knapsack capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct GkpRound<S> {
    pub(crate) profits: Vec<S>,
    pub(crate) capacity: S,
}

impl<S: Scalar> GkpRound<S> {
    pub fn new(profits: Vec<S>, capacity: S) -> Result<Self> {
        if let Some(i) = profits.iter().position(|p| *p < S::zero()) {
            return Err(Error::InvalidParameter(format!("profit {i} is negative")));
        }
        if capacity < S::zero() {
            return Err(Error::InvalidParameter("capacity is negative".into()));
        }
        Ok(Self { profits, capacity })
    }

    pub fn profits(&self) -> &[S] {
        &self.profits
    }

    pub fn capacity(&self) -> S {
        self.capacity
    }

    /// The same round with every profit multiplied by `factor`.
    pub fn scale_profits(&self, factor: S) -> Self {
        Self { profits: self.profits.iter().map(|p| *p * factor).collect(), capacity: self.capacity }
    }
}

/// Static data plus a list of rounds, checked for matching dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct GkpSet<S> {
    pub statics: GkpStatic<S>,
    pub rounds: Vec<GkpRound<S>>,
}

impl<S: Scalar> GkpSet<S> {
    pub fn new(statics: GkpStatic<S>, rounds: Vec<GkpRound<S>>) -> Result<Self> {
        let n = statics.n();
        for (t, r) in rounds.iter().enumerate() {
            if r.profits.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.profits.len() }.at_round(t + 1));
            }
        }
        Ok(Self { statics, rounds })
    }

    /// Reads `{"w":[...], "c":..., "rounds":[{"p":[...], "B":...}, ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text)?;
        let obj = root.as_object().ok_or_else(|| invalid("top level must be an object"))?;
        let w = scalar_array(field(obj, "w")?, "w")?;
        let c = scalar(field(obj, "c")?, "c")?;
        let rounds = field(obj, "rounds")?
            .as_array()
            .ok_or_else(|| invalid("`rounds` must be an array"))?
            .iter()
            .enumerate()
            .map(|(t, r)| {
                let r = r.as_object().ok_or_else(|| invalid(format!("round {} must be an object", t + 1)))?;
                let p = scalar_array(field(r, "p")?, "p")?;
                let b = scalar(field(r, "B")?, "B")?;
                GkpRound::new(p, b)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(GkpStatic::new(w, c)?, rounds)
    }

    pub fn to_json(&self) -> String {
        let rounds: Vec<Value> = self
            .rounds
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("p".into(), Value::Array(r.profits.iter().map(scalar_value).collect()));
                m.insert("B".into(), scalar_value(&r.capacity));
                Value::Object(m)
            })
            .collect();
        let mut root = Map::new();
        root.insert("w".into(), Value::Array(self.statics.weights.iter().map(scalar_value).collect()));
        root.insert("c".into(), scalar_value(&self.statics.penalty));
        root.insert("rounds".into(), Value::Array(rounds));
        Value::Object(root).to_string()
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| invalid(format!("missing field `{key}`")))
}

// Numbers keep their source text (arbitrary_precision), so decimal input is
// read exactly. Non-terminating rationals are written as strings like "1/3".
fn scalar<S: Scalar>(v: &Value, name: &str) -> Result<S> {
    let text = match v {
        Value::Number(n) => n.as_str(),
        Value::String(s) => s.as_str(),
        _ => return Err(invalid(format!("`{name}` must be a number"))),
    };
    S::parse_decimal(text).ok_or_else(|| invalid(format!("`{name}`: bad number `{text}`")))
}

fn scalar_array<S: Scalar>(v: &Value, name: &str) -> Result<Vec<S>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("`{name}` must be an array")))?
        .iter()
        .map(|x| scalar(x, name))
        .collect()
}

fn scalar_value<S: Scalar>(s: &S) -> Value {
    let text = s.to_decimal();
    match serde_json::from_str::<Number>(&text) {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn json_roundtrip_f64() {
        let set = GkpSet::new(
            GkpStatic::new(vec![1.0, 2.5], 0.75).unwrap(),
            vec![GkpRound::new(vec![3.0, 1.0], 2.0).unwrap(), GkpRound::new(vec![0.0, 0.1], 1.0).unwrap()],
        )
        .unwrap();
        let text = set.to_json();
        assert_eq!(text, r#"{"c":0.75,"rounds":[{"B":2,"p":[3,1]},{"B":1,"p":[0,0.1]}],"w":[1,2.5]}"#);
        assert_eq!(GkpSet::<f64>::from_json(&text).unwrap(), set);
    }

    #[test]
    fn json_reads_decimals_exactly() {
        let set = GkpSet::<Rational>::from_json(r#"{"w":[0.1],"c":"1/3","rounds":[{"p":[2.5],"B":0.3}]}"#).unwrap();
        assert_eq!(set.statics.weights()[0], Rational::new(1, 10));
        assert_eq!(set.statics.penalty(), Rational::new(1, 3));
        assert_eq!(set.rounds[0].capacity(), Rational::new(3, 10));
        assert_eq!(GkpSet::<Rational>::from_json(&set.to_json()).unwrap(), set);
    }

    #[test]
    fn json_errors() {
        assert!(GkpSet::<f64>::from_json(r#"{"w":[1],"c":1}"#).is_err());
        assert!(GkpSet::<f64>::from_json(r#"{"w":[1],"c":1,"rounds":[{"p":[1,2],"B":1}]}"#).is_err());
        assert!(GkpSet::<f64>::from_json(r#"{"w":[-1],"c":1,"rounds":[]}"#).is_err());
        assert!(GkpSet::<f64>::from_json("[1]").is_err());
    }

    #[test]
    fn scaling_profits() {
        let r = GkpRound::new(vec![1.0, 0.0], 3.0).unwrap();
        assert_eq!(r.scale_profits(2.5).profits(), &[2.5, 0.0]);
        assert_eq!(r.scale_profits(2.5).capacity(), 3.0);
    }
}
