use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::geometry::{Affine, Child, Patch, PeriodicTiling, Seed, SubstitutionRule, SubstitutionTiling};
use crate::ramsey::Coloring;
use crate::{BaseKind, Error, GroupElement, Pattern, Point, Result, Tile, TilingSource};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileDoc {
    pub outer: Vec<Point>,
    #[serde(default)]
    pub holes: Vec<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub class: String,
}

impl TryFrom<TileDoc> for Tile {
    type Error = Error;
    fn try_from(d: TileDoc) -> Result<Tile> {
        let t = Tile::new(d.outer, d.holes, d.class)?;
        Ok(match d.label {
            Some(l) => t.with_label(l),
            None => t,
        })
    }
}

impl From<Tile> for TileDoc {
    fn from(t: Tile) -> Self {
        TileDoc {
            outer: t.outer().to_vec(),
            holes: t.holes().to_vec(),
            label: t.label().map(str::to_string),
            class: t.class_id().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub proto: usize,
    pub matrix: [[f64; 2]; 2],
    pub offset: Point,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub name: String,
    pub expansion: f64,
    pub levels: u32,
    /// Children of each prototile (indices into `tiles`).
    pub children: Vec<Vec<MapDoc>>,
    pub seed: MapDoc,
    pub chain: Vec<usize>,
}

/// On-disk tiling: `tiles` is the fundamental patch (periodic), the
/// prototile list (substitution) or the patch itself (explicit).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingDoc {
    pub dimension: u32,
    pub kind: String,
    pub tiles: Vec<TileDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[Point; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleDoc>,
}

fn map_doc(proto: usize, a: &Affine) -> MapDoc {
    MapDoc { proto, matrix: a.m, offset: a.t }
}

impl TilingDoc {
    pub fn from_source(src: &TilingSource) -> TilingDoc {
        let tiles = |p: &[Tile]| p.iter().cloned().map(TileDoc::from).collect();
        match src {
            TilingSource::Periodic(p) => TilingDoc {
                dimension: 2,
                kind: "periodic".into(),
                tiles: tiles(p.fundamental().tiles()),
                lattice: Some(p.lattice()),
                rule: None,
            },
            TilingSource::Explicit(p) => {
                TilingDoc { dimension: 2, kind: "explicit".into(), tiles: tiles(p.tiles()), lattice: None, rule: None }
            }
            TilingSource::Substitution(s) => {
                let rule = s.rule();
                let children = rule
                    .children
                    .iter()
                    .map(|cs| cs.iter().map(|c| map_doc(c.proto, &c.map)).collect())
                    .collect();
                TilingDoc {
                    dimension: 2,
                    kind: "substitution".into(),
                    tiles: tiles(&rule.prototiles),
                    lattice: None,
                    rule: Some(RuleDoc {
                        name: rule.name.clone(),
                        expansion: rule.expansion,
                        levels: s.levels(),
                        children,
                        seed: map_doc(s.seed().proto, &s.seed().placement),
                        chain: s.seed().chain.clone(),
                    }),
                }
            }
        }
    }

    pub fn into_source(self) -> Result<TilingSource> {
        if self.dimension != 2 {
            return Err(Error::Parse(format!("field `dimension`: only 2 is supported, got {}", self.dimension)));
        }
        let tiles = self.tiles.into_iter().map(Tile::try_from).collect::<Result<Vec<_>>>()?;
        match self.kind.as_str() {
            "periodic" => {
                let lattice = self.lattice.ok_or_else(|| Error::Parse("missing field `lattice` for a periodic tiling".into()))?;
                Ok(TilingSource::Periodic(PeriodicTiling::new(Patch::new(tiles)?, lattice)?))
            }
            "explicit" => Ok(TilingSource::Explicit(Patch::new(tiles)?)),
            "substitution" => {
                let r = self.rule.ok_or_else(|| Error::Parse("missing field `rule` for a substitution tiling".into()))?;
                let children = r
                    .children
                    .iter()
                    .map(|cs| cs.iter().map(|c| Child { proto: c.proto, map: Affine::new(c.matrix, c.offset) }).collect())
                    .collect();
                let rule = SubstitutionRule { name: r.name, expansion: r.expansion, prototiles: tiles, children };
                let seed = Seed { proto: r.seed.proto, placement: Affine::new(r.seed.matrix, r.seed.offset), chain: r.chain };
                Ok(TilingSource::Substitution(SubstitutionTiling::new(rule, seed, r.levels)?))
            }
            other => Err(Error::Parse(format!("field `kind`: unknown tiling kind `{other}`"))),
        }
    }
}

/// Flat JSON form of a group element.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// Hole translation of a paired element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hole_v: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<BTreeMap<usize, ElementDoc>>,
}

impl From<GroupElement> for ElementDoc {
    fn from(g: GroupElement) -> Self {
        let kind = g.kind_name().to_string();
        match g {
            GroupElement::Translation(v) => ElementDoc { kind, v: Some(v), ..Default::default() },
            GroupElement::Rigid { angle, v } => ElementDoc { kind, v: Some(v), angle: Some(angle), ..Default::default() },
            GroupElement::Homothety { scale, v } => ElementDoc { kind, v: Some(v), scale: Some(scale), ..Default::default() },
            GroupElement::Pair { outer, inner } => {
                ElementDoc { kind, v: Some(outer), hole_v: Some(inner), ..Default::default() }
            }
            GroupElement::Piecewise { base, components } => ElementDoc {
                kind,
                base: Some(base.name().to_string()),
                components: Some(components.into_iter().map(|(k, c)| (k, c.into())).collect()),
                ..Default::default()
            },
        }
    }
}

impl TryFrom<ElementDoc> for GroupElement {
    type Error = Error;
    fn try_from(d: ElementDoc) -> Result<GroupElement> {
        let need_v = || d.v.ok_or_else(|| Error::Parse(format!("missing field `v` for a {} element", d.kind)));
        match d.kind.as_str() {
            "translation" => Ok(GroupElement::Translation(need_v()?)),
            "rigid" => Ok(GroupElement::rigid(
                d.angle.ok_or_else(|| Error::Parse("missing field `angle` for a rigid element".into()))?,
                need_v()?,
            )),
            "homothety" => GroupElement::homothety(
                d.scale.ok_or_else(|| Error::Parse("missing field `scale` for a homothety".into()))?,
                need_v()?,
            ),
            "pair" => Ok(GroupElement::Pair {
                outer: need_v()?,
                inner: d.hole_v.ok_or_else(|| Error::Parse("missing field `hole_v` for a pair element".into()))?,
            }),
            "piecewise" => {
                let base = BaseKind::parse(d.base.as_deref().unwrap_or("translation"))?;
                let components = d
                    .components
                    .ok_or_else(|| Error::Parse("missing field `components` for a piecewise element".into()))?
                    .into_iter()
                    .map(|(k, c)| Ok((k, GroupElement::try_from(c)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(GroupElement::Piecewise { base, components })
            }
            other => Err(Error::Parse(format!("field `kind`: unknown element kind `{other}`"))),
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_tiling(text: &str) -> Result<TilingSource> {
    parse_json::<TilingDoc>(text)?.into_source()
}

pub fn parse_pattern(text: &str) -> Result<Pattern> {
    parse_json(text)
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    parse_json(text)
}

pub fn parse_element(text: &str) -> Result<GroupElement> {
    parse_json(text)
}

pub fn tiling_to_json(src: &TilingSource) -> Result<String> {
    emit_canonical(&TilingDoc::from_source(src))
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"));
            if x.fract() == 0.0 && x.abs() < 1e15 {
                Value::from(x as i64)
            } else {
                serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys and numbers rounded to 12 significant digits.
pub fn emit_canonical<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&canonicalize(v)).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
