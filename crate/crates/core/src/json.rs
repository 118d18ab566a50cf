//! JSON wire formats. Integers that can grow (cocycle values, carries,
//! orders) are written as strings and read from strings or numbers.
//! Residues, depths and digits are plain numbers.
//!
//! Clopen sets and points carry no base of their own; they take it from the
//! enclosing object or from the caller.

use serde_json::{json, Map, Value};

use crate::cantor::{BaseSequence, ClopenSet, Point};
use crate::element::TfgElement;
use crate::error::{Error, Result};
use crate::genperm::{GenPermSpec, TwoCycleSpec};
use crate::nowhere_dense::{NdConstruction, OmegaWord};
use crate::perm::Perm;
use crate::property_e::{Certificate, Factor, Tag, TorsionFactorization};
use crate::scalar::Scalar;
use crate::stabilizers::{FinitePointSet, StabilizerClass};
use crate::towers::{build_kr, KrPartition};

pub trait Json: Sized {
    fn to_json(&self) -> Value;

    /// `base` supplies the base sequence for objects that do not embed one.
    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self>;
}

pub fn to_string<J: Json>(x: &J) -> String {
    x.to_json().to_string()
}

pub fn from_str<J: Json>(s: &str, base: Option<&BaseSequence>) -> Result<J> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    J::from_json(&v, base)
}

fn bad(what: &str) -> Error {
    Error::Parse(format!("expected {what}"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn usize_of(v: &Value) -> Result<usize> {
    v.as_u64().and_then(|n| usize::try_from(n).ok()).ok_or_else(|| bad("a nonnegative integer"))
}

fn usizes(v: &Value) -> Result<Vec<usize>> {
    v.as_array().ok_or_else(|| bad("an array"))?.iter().map(usize_of).collect()
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| bad(&format!("{key:?} to be an array")))
}

pub fn scalar_to_json<T: Scalar>(x: &T) -> Value {
    Value::String(x.to_string())
}

pub fn scalar_from_json<T: Scalar>(v: &Value) -> Result<T> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(bad("an integer or an integer string")),
    };
    text.trim().parse().map_err(|_| Error::Parse(format!("bad integer {text:?}")))
}

fn need_base(base: Option<&BaseSequence>) -> Result<&BaseSequence> {
    base.ok_or_else(|| Error::Parse("no base sequence in context".into()))
}

/// The embedded `"base"` field, else the context base.
fn base_here(v: &Value, base: Option<&BaseSequence>) -> Result<BaseSequence> {
    match v.get("base") {
        Some(b) => BaseSequence::from_json(b, None),
        None => need_base(base).cloned(),
    }
}

impl Json for BaseSequence {
    fn to_json(&self) -> Value {
        json!({ "pre": self.pre_period(), "period": self.period() })
    }

    fn from_json(v: &Value, _: Option<&BaseSequence>) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return s.parse();
        }
        let pre = match v.get("pre") {
            Some(p) => usizes(p)?,
            None => Vec::new(),
        };
        BaseSequence::new(pre, usizes(field(v, "period")?)?)
    }
}

impl Json for ClopenSet {
    fn to_json(&self) -> Value {
        json!({ "depth": self.depth(), "residues": self.residues() })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let base = base_here(v, base)?;
        ClopenSet::new(&base, usize_of(field(v, "depth")?)?, usizes(field(v, "residues")?)?)
    }
}

impl Json for Point {
    fn to_json(&self) -> Value {
        json!({ "pre": self.pre_digits(), "period": self.period_digits() })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let base = base_here(v, base)?;
        let pre = match v.get("pre") {
            Some(p) => usizes(p)?,
            None => Vec::new(),
        };
        Point::new(&base, pre, usizes(field(v, "period")?)?)
    }
}

impl Json for Perm {
    fn to_json(&self) -> Value {
        json!(self.images())
    }

    fn from_json(v: &Value, _: Option<&BaseSequence>) -> Result<Self> {
        Perm::new(usizes(v)?)
    }
}

impl<T: Scalar> Json for TfgElement<T> {
    fn to_json(&self) -> Value {
        json!({
            "base": self.base().to_json(),
            "depth": self.depth(),
            "cocycle": self.cocycle().iter().map(scalar_to_json).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let base = base_here(v, base)?;
        let depth = usize_of(field(v, "depth")?)?;
        let cocycle = array(v, "cocycle")?.iter().map(scalar_from_json).collect::<Result<_>>()?;
        TfgElement::from_cocycle(&base, depth, cocycle)
    }
}

impl<T: Scalar> Json for GenPermSpec<T> {
    fn to_json(&self) -> Value {
        json!({
            "base": self.u().base().to_json(),
            "u": self.u().to_json(),
            "maps": self.maps().iter().map(Json::to_json).collect::<Vec<_>>(),
            "pi": self.pi().to_json(),
        })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let base = base_here(v, base)?;
        let u = ClopenSet::from_json(field(v, "u")?, Some(&base))?;
        let maps = array(v, "maps")?.iter().map(|m| TfgElement::from_json(m, Some(&base))).collect::<Result<_>>()?;
        GenPermSpec::new(u, maps, Perm::from_json(field(v, "pi")?, None)?)
    }
}

impl<T: Scalar> Json for TwoCycleSpec<T> {
    fn to_json(&self) -> Value {
        json!({ "u": self.u().to_json(), "g": self.g().to_json() })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let g = TfgElement::from_json(field(v, "g")?, base)?;
        let u = ClopenSet::from_json(field(v, "u")?, Some(g.base()))?;
        TwoCycleSpec::new(u, g)
    }
}

impl<T: Scalar> Json for KrPartition<T> {
    fn to_json(&self) -> Value {
        let towers: Vec<Value> = self
            .towers()
            .iter()
            .map(|t| {
                json!({
                    "height": t.height,
                    "levels": t.levels.iter().map(Json::to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut m = Map::new();
        m.insert("u".into(), self.u().to_json());
        m.insert("g".into(), self.g().to_json());
        m.insert("towers".into(), Value::Array(towers));
        if !self.avoiding().is_empty() {
            m.insert("avoiding".into(), self.avoiding().to_json());
        }
        Value::Object(m)
    }

    /// Rebuilds from `u` and `g` and checks the stored towers agree.
    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let g = TfgElement::from_json(field(v, "g")?, base)?;
        let u = ClopenSet::from_json(field(v, "u")?, Some(g.base()))?;
        let kr = build_kr(&u, &g)?;
        if let Some(stored) = v.get("towers") {
            if *stored != kr.to_json()["towers"] {
                return Err(Error::Parse("stored towers differ from the recomputed partition".into()));
            }
        }
        Ok(kr)
    }
}

impl Json for Tag {
    fn to_json(&self) -> Value {
        json!(match self {
            Tag::U1 => "U1",
            Tag::U2 => "U2",
        })
    }

    fn from_json(v: &Value, _: Option<&BaseSequence>) -> Result<Self> {
        match v.as_str() {
            Some("U1") => Ok(Tag::U1),
            Some("U2") => Ok(Tag::U2),
            _ => Err(bad("tag \"U1\" or \"U2\"")),
        }
    }
}

impl<T: Scalar> Json for Certificate<T> {
    fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_json(),
            "u1": self.u1.to_json(),
            "u2": self.u2.to_json(),
            "factors": self
                .factors
                .iter()
                .map(|f| json!({ "tag": f.tag.to_json(), "element": f.element.to_json() }))
                .collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let target = TfgElement::from_json(field(v, "target")?, base)?;
        let b = target.base().clone();
        let factors = array(v, "factors")?
            .iter()
            .map(|f| {
                Ok(Factor {
                    tag: Tag::from_json(field(f, "tag")?, None)?,
                    element: TfgElement::from_json(field(f, "element")?, Some(&b))?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Certificate {
            u1: ClopenSet::from_json(field(v, "u1")?, Some(&b))?,
            u2: ClopenSet::from_json(field(v, "u2")?, Some(&b))?,
            target,
            factors,
        })
    }
}

impl<T: Scalar> Json for TorsionFactorization<T> {
    fn to_json(&self) -> Value {
        json!({
            "input": self.input.to_json(),
            "t1": self.t1.to_json(),
            "t2": self.t2.to_json(),
            "order1": scalar_to_json(&self.order1),
            "order2": scalar_to_json(&self.order2),
        })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        Ok(TorsionFactorization {
            input: TfgElement::from_json(field(v, "input")?, base)?,
            t1: TfgElement::from_json(field(v, "t1")?, base)?,
            t2: TfgElement::from_json(field(v, "t2")?, base)?,
            order1: scalar_from_json(field(v, "order1")?)?,
            order2: scalar_from_json(field(v, "order2")?)?,
        })
    }
}

impl Json for FinitePointSet {
    fn to_json(&self) -> Value {
        json!({
            "base": self.base().to_json(),
            "points": self.points().iter().map(Json::to_json).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let base = base_here(v, base)?;
        let points = array(v, "points")?.iter().map(|p| Point::from_json(p, Some(&base))).collect::<Result<_>>()?;
        FinitePointSet::new(&base, points)
    }
}

impl Json for StabilizerClass {
    fn to_json(&self) -> Value {
        match self {
            StabilizerClass::Maximal => json!({ "class": "Maximal" }),
            StabilizerClass::NotMaximal => json!({ "class": "NotMaximal" }),
            StabilizerClass::WholeGroup => json!({ "class": "WholeGroup" }),
            StabilizerClass::IndexTwoInPartitionStabilizer { partition_stabilizer_is_whole } => json!({
                "class": "IndexTwoInPartitionStabilizer",
                "partition_stabilizer_is_whole": partition_stabilizer_is_whole,
            }),
            StabilizerClass::ReducesTo { subset, class } => json!({
                "class": "ReducesTo",
                "subset": subset,
                "reduced": class.to_json(),
            }),
        }
    }

    fn from_json(v: &Value, _: Option<&BaseSequence>) -> Result<Self> {
        Ok(match field(v, "class")?.as_str() {
            Some("Maximal") => StabilizerClass::Maximal,
            Some("NotMaximal") => StabilizerClass::NotMaximal,
            Some("WholeGroup") => StabilizerClass::WholeGroup,
            Some("IndexTwoInPartitionStabilizer") => StabilizerClass::IndexTwoInPartitionStabilizer {
                partition_stabilizer_is_whole: field(v, "partition_stabilizer_is_whole")?
                    .as_bool()
                    .ok_or_else(|| bad("a boolean"))?,
            },
            Some("ReducesTo") => StabilizerClass::ReducesTo {
                subset: usizes(field(v, "subset")?)?,
                class: Box::new(StabilizerClass::from_json(field(v, "reduced")?, None)?),
            },
            _ => return Err(bad("a stabilizer class name")),
        })
    }
}

impl Json for OmegaWord {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value, _: Option<&BaseSequence>) -> Result<Self> {
        v.as_str().ok_or_else(|| bad("an omega string"))?.parse()
    }
}

impl<T: Scalar> Json for NdConstruction<T> {
    fn to_json(&self) -> Value {
        json!({
            "base": self.base().to_json(),
            "stages": self
                .stages()
                .iter()
                .map(|s| json!({ "u": s.u.to_json(), "g": s.g.to_json(), "h": s.h.to_json() }))
                .collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value, base: Option<&BaseSequence>) -> Result<Self> {
        let base = base_here(v, base)?;
        let stages = array(v, "stages")?
            .iter()
            .map(|s| {
                Ok((
                    ClopenSet::from_json(field(s, "u")?, Some(&base))?,
                    TfgElement::from_json(field(s, "g")?, Some(&base))?,
                    TfgElement::from_json(field(s, "h")?, Some(&base))?,
                ))
            })
            .collect::<Result<_>>()?;
        NdConstruction::from_stages(&base, stages)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::DEFAULT_DEPTH_LIMIT;
    use crate::nowhere_dense::build_construction;
    use crate::property_e::{decompose_local, factor_kernel};
    use num_bigint::BigInt;

    type E = TfgElement<i64>;

    fn b23() -> BaseSequence {
        BaseSequence::new(vec![2], vec![3]).unwrap()
    }

    fn round_trip<J: Json + PartialEq + std::fmt::Debug>(x: &J, base: Option<&BaseSequence>) {
        let s = to_string(x);
        let y: J = from_str(&s, base).unwrap();
        assert_eq!(&y, x, "{s}");
        assert_eq!(to_string(&y), s);
    }

    #[test]
    fn element_wire_format() {
        let f = E::odometer(&BaseSequence::dyadic());
        assert_eq!(to_string(&f), r#"{"base":{"period":[2],"pre":[]},"cocycle":["1"],"depth":0}"#);
        let from_numbers: E = from_str(r#"{"base":{"period":[2]},"depth":1,"cocycle":[1,-1]}"#, None).unwrap();
        assert_eq!(from_numbers.cocycle(), &[1, -1]);
        let big: TfgElement<BigInt> =
            from_str(r#"{"base":"2","depth":0,"cocycle":["123456789012345678901234567890"]}"#, None).unwrap();
        round_trip(&big, None);
        assert!(from_str::<E>(r#"{"base":"2","depth":1,"cocycle":[1,0]}"#, None).is_err());
        assert!(from_str::<E>(r#"{"depth":0,"cocycle":[1]}"#, None).is_err());
    }

    #[test]
    fn round_trips() {
        let b = b23();
        let u = ClopenSet::new(&b, 2, vec![0, 3, 5]).unwrap();
        round_trip(&u, Some(&b));
        round_trip(&b, None);
        round_trip(&Point::new(&b, vec![1], vec![2, 0]).unwrap(), Some(&b));
        round_trip(&Perm::new(vec![2, 0, 1]).unwrap(), None);

        let b2 = BaseSequence::dyadic();
        let set = |d, r: &[usize]| ClopenSet::new(&b2, d, r.to_vec()).unwrap();
        let f = E::odometer(&b2);
        let spec = GenPermSpec::new(
            set(2, &[0]),
            vec![E::identity(&b2), f.clone(), f.power(&2)],
            Perm::new(vec![1, 2, 0]).unwrap(),
        )
        .unwrap();
        round_trip(&spec, None);
        round_trip(&TwoCycleSpec::new(set(1, &[0]), f.clone()).unwrap(), None);
        round_trip(&build_kr(&set(2, &[0, 1]), &f).unwrap(), None);
        round_trip(&build_kr(&set(2, &[0]), &E::odometer_power(&b2, 2)).unwrap(), None);

        let g = E::from_cocycle(&b2, 2, vec![2, 0, -2, 0]).unwrap();
        round_trip(&decompose_local(&g, &set(2, &[0, 1]), &set(2, &[1, 2])).unwrap(), None);
        round_trip(&factor_kernel(&E::from_cocycle(&b2, 1, vec![2, -2]).unwrap(), None).unwrap(), None);

        let y = FinitePointSet::new(&b2, vec![Point::zero(&b2), Point::from_integer(&b2, &-1i64)]).unwrap();
        round_trip(&y, None);
        for c in [
            StabilizerClass::Maximal,
            StabilizerClass::IndexTwoInPartitionStabilizer { partition_stabilizer_is_whole: false },
            StabilizerClass::ReducesTo { subset: vec![0, 2], class: Box::new(StabilizerClass::NotMaximal) },
        ] {
            round_trip(&c, None);
        }
        round_trip(&"1221".parse::<OmegaWord>().unwrap(), None);
        let nd: NdConstruction<i64> = build_construction(&b2, 3, DEFAULT_DEPTH_LIMIT).unwrap();
        round_trip(&nd, None);
    }

    #[test]
    fn tampered_towers_rejected() {
        let b2 = BaseSequence::dyadic();
        let kr = build_kr(&ClopenSet::new(&b2, 1, vec![0]).unwrap(), &E::odometer(&b2)).unwrap();
        let mut v = kr.to_json();
        v["towers"][0]["height"] = json!(3);
        assert!(KrPartition::<i64>::from_json(&v, None).is_err());
    }
}
