//! JSON documents for spaces, morphisms, diagrams and results.
//!
//! Parsing is strict: unknown keys, wrong types and unknown point names are
//! rejected with the JSON pointer of the offending value. Emission is
//! canonical, so `emit(parse(doc)) == doc` for every emitted document.
//!
//! Space document: `{"points": [...], "opens": [[...], ...], "dist": [[...], ...]}`,
//! with `"base"` (the minimal neighborhoods) in place of `"opens"` when the
//! open family is larger than the `opens` cap.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cats::{Arrow, CategoryTag, ConeCert, Diagram, Side};
use crate::config::Caps;
use crate::error::{EmtError, Result};
use crate::extmetric::{validate_pseudometric, ExtPseudoMetric, MetricViolation};
use crate::finmap::FinMap;
use crate::fintop::{minimal_neighborhoods, FiniteTopology};
use crate::functors::FunctorResult;
use crate::spaces::{CSMorphism, Space};
use crate::value::ExtValue;

/// Pretty-printed text with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Any serializable report as a JSON value.
pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

fn at(ptr: &str, token: impl std::fmt::Display) -> String {
    format!("{ptr}/{}", escape(&token.to_string()))
}

fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| EmtError::parse("", format!("malformed JSON: {e}")))
}

fn object<'a>(v: &'a Value, ptr: &str, required: &[&str], optional: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| EmtError::parse(ptr, "expected an object"))?;
    if let Some(k) = m.keys().find(|k| !required.contains(&k.as_str()) && !optional.contains(&k.as_str())) {
        return Err(EmtError::parse(at(ptr, k), "unknown key"));
    }
    if let Some(k) = required.iter().find(|k| !m.contains_key(**k)) {
        return Err(EmtError::parse(ptr, format!("missing key {k:?}")));
    }
    Ok(m)
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| EmtError::parse(ptr, "expected an array"))
}

fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| EmtError::parse(ptr, "expected a string"))
}

fn index(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| EmtError::parse(ptr, "expected a non-negative integer"))
}

fn ext_value(v: &Value, ptr: &str) -> Result<ExtValue> {
    let s = string(v, ptr)?;
    if s.trim() != s {
        return Err(EmtError::parse(ptr, "surrounding whitespace"));
    }
    s.parse().map_err(|e: EmtError| match e {
        EmtError::Parse { message, .. } => EmtError::parse(ptr, message),
        other => other,
    })
}

fn name_lookup(names: &[String]) -> HashMap<&str, usize> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

/// A list of point names as sorted indices; repeats are rejected.
fn point_list(v: &Value, ptr: &str, lookup: &HashMap<&str, usize>) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (j, p) in array(v, ptr)?.iter().enumerate() {
        let q = at(ptr, j);
        let name = string(p, &q)?;
        let i = *lookup.get(name).ok_or_else(|| EmtError::parse(&q, format!("unknown point {name:?}")))?;
        if !seen.insert(i) {
            return Err(EmtError::parse(&q, format!("point {name:?} listed twice")));
        }
        out.push(i);
    }
    out.sort_unstable();
    Ok(out)
}

fn names_of(names: &[String], set: &[usize]) -> Value {
    Value::Array(set.iter().map(|&i| Value::String(names[i].clone())).collect())
}

pub fn space_to_value(s: &Space, caps: &Caps) -> Value {
    let names = s.names();
    let mut m = Map::new();
    m.insert("points".into(), json!(names));
    match s.topology().opens(caps) {
        Ok(opens) => {
            m.insert("opens".into(), Value::Array(opens.iter().map(|o| names_of(names, o)).collect()));
        }
        Err(_) => {
            let mut base = minimal_neighborhoods(s.topology());
            base.sort();
            base.dedup();
            m.insert("base".into(), Value::Array(base.iter().map(|b| names_of(names, b)).collect()));
        }
    }
    let dist = (0..s.len())
        .map(|x| Value::Array((0..s.len()).map(|y| Value::String(s.dist(x, y).to_string())).collect()))
        .collect();
    m.insert("dist".into(), Value::Array(dist));
    Value::Object(m)
}

fn metric_pointer(ptr: &str, v: &MetricViolation) -> String {
    match v {
        MetricViolation::NotSquare { row, .. } => at(&at(ptr, "dist"), row),
        MetricViolation::NonzeroDiagonal { x } => at(&at(&at(ptr, "dist"), x), x),
        MetricViolation::Asymmetric { x, y } | MetricViolation::Triangle { x, y, .. } => {
            at(&at(&at(ptr, "dist"), x), y)
        }
    }
}

/// Reads a space document found at `ptr`.
///
/// Schema problems are [`EmtError::Parse`]; a well-formed document whose
/// opens or distances violate the axioms gives `InvalidTopology` or
/// `InvalidMetric`, with the pointer leading the message.
pub fn space_from_value(v: &Value, ptr: &str) -> Result<Space> {
    let m = object(v, ptr, &["points", "dist"], &["opens", "base"])?;
    let pp = at(ptr, "points");
    let mut names = Vec::new();
    let mut seen = HashSet::new();
    for (i, p) in array(&m["points"], &pp)?.iter().enumerate() {
        let name = string(p, &at(&pp, i))?;
        if !seen.insert(name) {
            return Err(EmtError::parse(at(&pp, i), format!("duplicate point name {name:?}")));
        }
        names.push(name.to_string());
    }
    let n = names.len();
    let lookup = name_lookup(&names);

    let topology = match (m.get("opens"), m.get("base")) {
        (Some(_), Some(_)) => return Err(EmtError::parse(ptr, "both \"opens\" and \"base\" given")),
        (None, None) => return Err(EmtError::parse(ptr, "missing key \"opens\" (or \"base\")")),
        (Some(opens), None) => {
            let op = at(ptr, "opens");
            let sets = array(opens, &op)?
                .iter()
                .enumerate()
                .map(|(i, o)| point_list(o, &at(&op, i), &lookup))
                .collect::<Result<Vec<_>>>()?;
            FiniteTopology::from_opens(n, &sets).map_err(|e| EmtError::InvalidTopology(format!("{op}: {e}")))?
        }
        (None, Some(base)) => {
            let bp = at(ptr, "base");
            let sets = array(base, &bp)?
                .iter()
                .enumerate()
                .map(|(i, o)| point_list(o, &at(&bp, i), &lookup))
                .collect::<Result<Vec<_>>>()?;
            topology_from_base(n, &sets).map_err(|e| EmtError::InvalidTopology(format!("{bp}: {e}")))?
        }
    };

    let dp = at(ptr, "dist");
    let rows = array(&m["dist"], &dp)?;
    if rows.len() != n {
        return Err(EmtError::parse(&dp, format!("expected {n} rows, got {}", rows.len())));
    }
    let mut d = Vec::with_capacity(n);
    for (x, row) in rows.iter().enumerate() {
        let rp = at(&dp, x);
        let row = array(row, &rp)?;
        if row.len() != n {
            return Err(EmtError::parse(&rp, format!("expected {n} entries, got {}", row.len())));
        }
        d.push(row.iter().enumerate().map(|(y, e)| ext_value(e, &at(&rp, y))).collect::<Result<Vec<_>>>()?);
    }
    validate_pseudometric(&d).map_err(|e| EmtError::InvalidMetric(format!("{}: {e}", metric_pointer(ptr, &e))))?;
    let metric = ExtPseudoMetric::new(d).map_err(|e| EmtError::InvalidMetric(e.to_string()))?;
    Space::new(names, topology, metric).map_err(|e| EmtError::InvalidSpace(e.to_string()))
}

/// The topology of a base: `U_x` is the intersection of the members
/// containing `x`, and each `U_x` must itself be a member.
fn topology_from_base(n: usize, base: &[Vec<usize>]) -> std::result::Result<FiniteTopology, String> {
    let mut nbhd = Vec::with_capacity(n);
    for x in 0..n {
        let mut containing = base.iter().filter(|b| b.contains(&x));
        let first = containing.next().ok_or_else(|| format!("point {x} is in no base set"))?;
        let u: Vec<usize> = first.iter().copied().filter(|p| base.iter().filter(|b| b.contains(&x)).all(|b| b.contains(p))).collect();
        if !base.contains(&u) {
            return Err(format!("the smallest open set around {x} is not a base set"));
        }
        nbhd.push(u);
    }
    FiniteTopology::from_minimal_neighborhoods(n, &nbhd).map_err(|e| match e {
        EmtError::InvalidTopology(m) => m,
        other => other.to_string(),
    })
}

pub fn parse_space(text: &str) -> Result<Space> {
    space_from_value(&parse_text(text)?, "")
}

pub fn emit_space(s: &Space, caps: &Caps) -> String {
    to_text(&space_to_value(s, caps))
}

/// `{"map": {"srcName": "dstName", ...}}` in source order.
pub fn morphism_to_value(src: &Space, dst: &Space, map: &FinMap) -> Value {
    let m: Map<String, Value> = (0..src.len())
        .map(|x| (src.names()[x].clone(), Value::String(dst.names()[map.apply(x)].clone())))
        .collect();
    json!({ "map": m })
}

/// Reads a morphism document between two known spaces.
pub fn morphism_from_value(v: &Value, ptr: &str, src: &Space, dst: &Space) -> Result<FinMap> {
    let m = object(v, ptr, &["map"], &[])?;
    map_from_value(&m["map"], &at(ptr, "map"), src, dst)
}

fn map_from_value(v: &Value, ptr: &str, src: &Space, dst: &Space) -> Result<FinMap> {
    let entries = v.as_object().ok_or_else(|| EmtError::parse(ptr, "expected an object"))?;
    let mut image = vec![usize::MAX; src.len()];
    for (k, val) in entries {
        let q = at(ptr, k);
        let x = src.index_of(k).ok_or_else(|| EmtError::parse(&q, format!("unknown source point {k:?}")))?;
        let name = string(val, &q)?;
        image[x] = dst.index_of(name).ok_or_else(|| EmtError::parse(&q, format!("unknown target point {name:?}")))?;
    }
    if let Some(x) = image.iter().position(|&y| y == usize::MAX) {
        return Err(EmtError::parse(ptr, format!("no image for {:?}", src.names()[x])));
    }
    FinMap::new(dst.len(), image)
}

pub fn parse_morphism(text: &str, src: &Space, dst: &Space) -> Result<FinMap> {
    morphism_from_value(&parse_text(text)?, "", src, dst)
}

pub fn diagram_to_value(d: &Diagram, caps: &Caps) -> Value {
    let arrows: Vec<Value> = d
        .arrows
        .iter()
        .map(|a| {
            let mut m = Map::new();
            m.insert("name".into(), json!(a.name));
            m.insert("src".into(), json!(a.src));
            m.insert("dst".into(), json!(a.dst));
            m.insert("map".into(), morphism_to_value(&d.objects[a.src], &d.objects[a.dst], &a.map)["map"].clone());
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("category".into(), json!(d.category.to_string()));
    m.insert("objects".into(), Value::Array(d.objects.iter().map(|o| space_to_value(o, caps)).collect()));
    m.insert("arrows".into(), Value::Array(arrows));
    Value::Object(m)
}

pub fn diagram_from_value(v: &Value, ptr: &str) -> Result<Diagram> {
    let m = object(v, ptr, &["category", "objects", "arrows"], &[])?;
    let cp = at(ptr, "category");
    let category: CategoryTag = string(&m["category"], &cp)?
        .parse()
        .map_err(|_| EmtError::parse(&cp, "expected one of SET, TOP, EXTPMET, PRE, EMT"))?;
    let op = at(ptr, "objects");
    let objects = array(&m["objects"], &op)?
        .iter()
        .enumerate()
        .map(|(i, o)| space_from_value(o, &at(&op, i)).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let ap = at(ptr, "arrows");
    let mut names = HashSet::new();
    let mut arrows = Vec::new();
    for (i, a) in array(&m["arrows"], &ap)?.iter().enumerate() {
        let p = at(&ap, i);
        let am = object(a, &p, &["name", "src", "dst", "map"], &[])?;
        let name = string(&am["name"], &at(&p, "name"))?.to_string();
        if !names.insert(name.clone()) {
            return Err(EmtError::parse(at(&p, "name"), format!("duplicate arrow name {name:?}")));
        }
        let endpoint = |key: &str| -> Result<usize> {
            let q = at(&p, key);
            let k = index(&am[key], &q)?;
            if k >= objects.len() {
                return Err(EmtError::parse(q, format!("object {k} out of range")));
            }
            Ok(k)
        };
        let (src, dst) = (endpoint("src")?, endpoint("dst")?);
        let map = map_from_value(&am["map"], &at(&p, "map"), &objects[src], &objects[dst])?;
        arrows.push(Arrow { name, src, dst, map });
    }
    Diagram::new(category, objects, arrows)
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    diagram_from_value(&parse_text(text)?, "")
}

pub fn emit_diagram(d: &Diagram, caps: &Caps) -> String {
    to_text(&diagram_to_value(d, caps))
}

/// `{"side", "apex", "legs": [{"map": ...}, ...]}`.
pub fn cone_to_value(c: &ConeCert, caps: &Caps) -> Value {
    let mut m = Map::new();
    m.insert("side".into(), to_value(&c.side));
    m.insert("apex".into(), space_to_value(&c.apex, caps));
    m.insert(
        "legs".into(),
        Value::Array(c.legs.iter().map(|l| morphism_to_value(&l.source, &l.target, &l.map)).collect()),
    );
    Value::Object(m)
}

/// Reads a candidate (co)cone over `d`. Legs are not checked here; the
/// verifier reports invalid legs as failures.
pub fn cone_from_value(v: &Value, ptr: &str, d: &Diagram) -> Result<ConeCert> {
    let m = object(v, ptr, &["side", "apex", "legs"], &[])?;
    let sp = at(ptr, "side");
    let side = match string(&m["side"], &sp)? {
        "cone" => Side::Cone,
        "cocone" => Side::Cocone,
        _ => return Err(EmtError::parse(sp, "expected \"cone\" or \"cocone\"")),
    };
    let apex = Arc::new(space_from_value(&m["apex"], &at(ptr, "apex"))?);
    let lp = at(ptr, "legs");
    let legs = array(&m["legs"], &lp)?;
    if legs.len() != d.objects.len() {
        return Err(EmtError::parse(&lp, format!("expected {} legs, got {}", d.objects.len(), legs.len())));
    }
    let legs = legs
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let (source, target) = match side {
                Side::Cone => (apex.clone(), d.objects[i].clone()),
                Side::Cocone => (d.objects[i].clone(), apex.clone()),
            };
            let map = morphism_from_value(l, &at(&lp, i), &source, &target)?;
            Ok(CSMorphism { source, target, map })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConeCert { apex, legs, side })
}

pub fn parse_cone(text: &str, d: &Diagram) -> Result<ConeCert> {
    cone_from_value(&parse_text(text)?, "", d)
}

/// `{"tag", "direction", "object", "unit": {"map": ...}, "warnings"}`.
pub fn functor_result_to_value(r: &FunctorResult, caps: &Caps) -> Value {
    let mut m = Map::new();
    m.insert("tag".into(), json!(r.tag));
    m.insert("direction".into(), to_value(&r.direction));
    m.insert("object".into(), space_to_value(&r.object, caps));
    m.insert("unit".into(), morphism_to_value(&r.unit.source, &r.unit.target, &r.unit.map));
    m.insert("warnings".into(), json!(r.warnings));
    Value::Object(m)
}

/// Parses text that is either a space or a diagram document.
pub enum Document {
    Space(Space),
    Diagram(Diagram),
}

pub fn parse_document(text: &str) -> Result<Document> {
    let v = parse_text(text)?;
    if v.get("category").is_some() {
        diagram_from_value(&v, "").map(Document::Diagram)
    } else {
        space_from_value(&v, "").map(Document::Space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extmetric::tests::metric;
    use crate::gen::{random_instances, GenConfig};

    const SIERPINSKI: &str = r#"{
  "points": [
    "a",
    "b"
  ],
  "opens": [
    [],
    [
      "a"
    ],
    [
      "a",
      "b"
    ]
  ],
  "dist": [
    [
      "0",
      "1"
    ],
    [
      "1",
      "0"
    ]
  ]
}
"#;

    fn pointer(e: EmtError) -> String {
        match e {
            EmtError::Parse { pointer, .. } => pointer,
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn canonical_roundtrip() {
        let s = parse_space(SIERPINSKI).unwrap();
        assert_eq!(s.names(), ["a", "b"]);
        assert_eq!(s.topology(), &FiniteTopology::from_opens(2, &[vec![], vec![0], vec![0, 1]]).unwrap());
        assert_eq!(emit_space(&s, &Caps::default()), SIERPINSKI);
    }

    #[test]
    fn generated_spaces_roundtrip() {
        let caps = Caps::default();
        let cfg = GenConfig { max_points: 4, ..GenConfig::default() };
        for s in random_instances(&cfg, 200).unwrap() {
            let text = emit_space(&s, &caps);
            assert_eq!(parse_space(&text).unwrap(), s);
            assert_eq!(emit_space(&parse_space(&text).unwrap(), &caps), text);
        }
    }

    #[test]
    fn base_form_when_opens_exceed_cap() {
        let caps = Caps { opens: 2, ..Caps::default() };
        let s = Space::anonymous(FiniteTopology::discrete(2), metric(&[&["0", "1"], &["1", "0"]])).unwrap();
        let text = emit_space(&s, &caps);
        assert!(text.contains("\"base\""));
        assert_eq!(parse_space(&text).unwrap(), s);
        assert_eq!(emit_space(&parse_space(&text).unwrap(), &caps), text);
    }

    #[test]
    fn rejects_bad_documents() {
        let neg = SIERPINSKI.replacen("\"1\"", "\"-1\"", 1);
        assert_eq!(pointer(parse_space(&neg).unwrap_err()), "/dist/0/1");
        let dup = SIERPINSKI.replacen("\"b\"", "\"a\"", 1);
        assert_eq!(pointer(parse_space(&dup).unwrap_err()), "/points/1");
        let extra = SIERPINSKI.replacen("{", "{\"x\": 1,", 1);
        assert_eq!(pointer(parse_space(&extra).unwrap_err()), "/x");
        let unknown = SIERPINSKI.replacen("[\n      \"a\"\n    ]", "[\"c\"]", 1);
        assert_eq!(pointer(parse_space(&unknown).unwrap_err()), "/opens/1/0");
        assert!(matches!(parse_space("{"), Err(EmtError::Parse { .. })));
        assert!(matches!(parse_space("[]"), Err(EmtError::Parse { .. })));
        let bad_top = SIERPINSKI.replacen("[],", "", 1);
        assert!(matches!(parse_space(&bad_top), Err(EmtError::InvalidTopology(_))));
        let triangle = r#"{"points":["a","b","c"],"opens":[[],["a","b","c"]],
            "dist":[["0","1","5"],["1","0","1"],["5","1","0"]]}"#;
        match parse_space(triangle) {
            Err(EmtError::InvalidMetric(m)) => assert!(m.starts_with("/dist/0/2"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn morphism_and_diagram_roundtrip() {
        let caps = Caps::default();
        let x = Arc::new(parse_space(SIERPINSKI).unwrap());
        let pt = Arc::new(Space::point());
        let f = FinMap::new(2, vec![0]).unwrap();
        let doc = to_text(&morphism_to_value(&pt, &x, &f));
        assert_eq!(parse_morphism(&doc, &pt, &x).unwrap(), f);
        assert!(parse_morphism(r#"{"map":{"0":"z"}}"#, &pt, &x).is_err());
        assert!(parse_morphism(r#"{"map":{}}"#, &pt, &x).is_err());

        let d = Diagram::parallel_pair(CategoryTag::Pre, pt, x, f, FinMap::new(2, vec![1]).unwrap()).unwrap();
        let text = emit_diagram(&d, &caps);
        let back = parse_diagram(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(emit_diagram(&back, &caps), text);
        let dup = text.replacen("\"g\"", "\"f\"", 1);
        assert_eq!(pointer(parse_diagram(&dup).unwrap_err()), "/arrows/1/name");
    }

    #[test]
    fn cone_roundtrip() {
        let caps = Caps::default();
        let x = Arc::new(parse_space(SIERPINSKI).unwrap());
        let d = Diagram::discrete(CategoryTag::Pre, vec![x.clone(), x]).unwrap();
        let c = crate::cats::limit(&d, &crate::Config::default()).unwrap();
        let text = to_text(&cone_to_value(&c, &caps));
        assert_eq!(parse_cone(&text, &d).unwrap(), c);
    }

    #[test]
    fn pointer_escaping() {
        assert_eq!(at("", "a/b~c"), "/a~1b~0c");
    }
}
