//! The JSON map document and report rendering.
//!
//! A map document looks like
//!
//! ```json
//! {
//!   "x": {"vertices": ["m", "z", "p"], "simplices": [["m", "z"], ["z", "p"]]},
//!   "y": {"vertices": ["y0", "y1"], "simplices": [["y0", "y1"]]},
//!   "map": {"m": "y1", "z": "y0", "p": "y1"}
//! }
//! ```
//!
//! with an optional `"metadata"` object. Vertex order is input order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::alternating::AltComplex;
use crate::complex::{validate_map, MapReport, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::linalg::{bigint_json, HomologyGroup};
use crate::multiplicity::{Kind, MultiplePointComplex, MultiplePointTower};
use crate::spectral::{CollapseReport, SpectralSequenceReport};

/// One side of a map document: named vertices and (maximal) simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexDocument {
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<String>>,
}

/// Expected homology of one degree, for documentation inside fixtures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedGroup {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

impl From<&HomologyGroup> for ExpectedGroup {
    fn from(g: &HomologyGroup) -> Self {
        Self { rank: g.rank(), torsion: g.torsion_u64().unwrap_or_default() }
    }
}

impl ExpectedGroup {
    pub fn to_group(&self) -> HomologyGroup {
        HomologyGroup::from_parts(self.rank, &self.torsion.iter().map(|&d| d as i64).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    /// `H_n(Y)` for `n = 0, 1, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_homology: Option<Vec<ExpectedGroup>>,
}

/// A finite simplicial map `X → Y` in named-vertex form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDocument {
    pub x: ComplexDocument,
    pub y: ComplexDocument,
    /// `(x vertex, y vertex)` in `x` vertex order.
    pub map: Vec<(String, String)>,
    pub metadata: Option<Metadata>,
}

fn expect_object<'a>(v: &'a Value, location: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(location, "expected an object"))
}

fn expect_array<'a>(v: &'a Value, location: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(location, "expected an array"))
}

fn expect_str<'a>(v: &'a Value, location: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::parse(location, "expected a vertex name (string)"))
}

fn check_fields(obj: &Map<String, Value>, location: &str, allowed: &[&str], required: &[&str]) -> Result<()> {
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::parse(format!("{location}.{k}"), "unexpected field"));
    }
    if let Some(k) = required.iter().find(|k| !obj.contains_key(**k)) {
        return Err(Error::parse(location, format!("missing field '{k}'")));
    }
    Ok(())
}

fn parse_complex(v: &Value, name: &str) -> Result<(ComplexDocument, HashMap<String, usize>)> {
    let obj = expect_object(v, name)?;
    check_fields(obj, name, &["vertices", "simplices"], &["vertices", "simplices"])?;
    let mut vertices = Vec::new();
    let mut index = HashMap::new();
    for (i, item) in expect_array(&obj["vertices"], &format!("{name}.vertices"))?.iter().enumerate() {
        let location = format!("{name}.vertices[{i}]");
        let label = expect_str(item, &location)?;
        if index.insert(label.to_string(), i).is_some() {
            return Err(Error::parse(location, format!("duplicate vertex '{label}'")));
        }
        vertices.push(label.to_string());
    }
    let mut simplices = Vec::new();
    for (i, s) in expect_array(&obj["simplices"], &format!("{name}.simplices"))?.iter().enumerate() {
        let location = format!("{name}.simplices[{i}]");
        let items = expect_array(s, &location)?;
        if items.is_empty() {
            return Err(Error::parse(location, "empty simplex"));
        }
        let mut simplex = Vec::new();
        for (j, item) in items.iter().enumerate() {
            let location = format!("{name}.simplices[{i}][{j}]");
            let label = expect_str(item, &location)?;
            if !index.contains_key(label) {
                return Err(Error::parse(location, format!("unknown vertex '{label}'")));
            }
            if simplex.iter().any(|s: &String| s == label) {
                return Err(Error::parse(location, format!("vertex '{label}' repeated in simplex")));
            }
            simplex.push(label.to_string());
        }
        simplices.push(simplex);
    }
    Ok((ComplexDocument { vertices, simplices }, index))
}

/// Parses a map document. Syntax errors name the line and column; schema
/// errors name the offending field and, where relevant, the vertex.
pub fn parse_map(text: &str) -> Result<MapDocument> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let obj = expect_object(&value, "document")?;
    check_fields(obj, "document", &["x", "y", "map", "metadata"], &["x", "y", "map"])?;
    let (x, x_index) = parse_complex(&obj["x"], "x")?;
    let (y, y_index) = parse_complex(&obj["y"], "y")?;
    let map_obj = expect_object(&obj["map"], "map")?;
    let mut images: Vec<Option<String>> = vec![None; x.vertices.len()];
    for (key, target) in map_obj {
        let location = format!("map.{key}");
        let Some(&i) = x_index.get(key) else {
            return Err(Error::parse(location, format!("unknown source vertex '{key}'")));
        };
        let target = expect_str(target, &location)?;
        if !y_index.contains_key(target) {
            return Err(Error::parse(location, format!("unknown target vertex '{target}'")));
        }
        images[i] = Some(target.to_string());
    }
    let mut map = Vec::with_capacity(images.len());
    for (v, image) in x.vertices.iter().zip(images) {
        let image = image.ok_or_else(|| Error::parse("map", format!("vertex '{v}' of x has no image")))?;
        map.push((v.clone(), image));
    }
    let metadata = match obj.get("metadata") {
        None | Some(Value::Null) => None,
        Some(m) => Some(serde_json::from_value(m.clone()).map_err(|e| Error::parse("metadata", e.to_string()))?),
    };
    Ok(MapDocument { x, y, map, metadata })
}

impl ComplexDocument {
    fn indices(&self) -> Vec<Vec<usize>> {
        let index: HashMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        self.simplices.iter().map(|s| s.iter().map(|v| index[v.as_str()]).collect()).collect()
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::with_labels(self.vertices.clone(), &self.indices())
    }

    /// Vertices of each simplex in vertex order; simplices sorted and deduplicated.
    fn canonical(&self) -> Self {
        let mut simplices = self.indices();
        for s in simplices.iter_mut() {
            s.sort_unstable();
        }
        simplices.sort();
        simplices.dedup();
        let simplices =
            simplices.into_iter().map(|s| s.into_iter().map(|v| self.vertices[v].clone()).collect()).collect();
        Self { vertices: self.vertices.clone(), simplices }
    }

    fn from_complex(c: &SimplicialComplex) -> Self {
        let vertices = c.labels().to_vec();
        let simplices =
            c.facets().iter().map(|s| s.vertices().iter().map(|&v| vertices[v].clone()).collect()).collect();
        Self { vertices, simplices }
    }

    fn to_json(&self) -> Value {
        json!({"vertices": self.vertices, "simplices": self.simplices})
    }
}

impl MapDocument {
    /// The document of an existing map, listing facets only.
    pub fn from_map(f: &SimplicialMap, metadata: Option<Metadata>) -> Self {
        let x = ComplexDocument::from_complex(f.source());
        let y = ComplexDocument::from_complex(f.target());
        let map = x.vertices.iter().enumerate().map(|(i, v)| (v.clone(), y.vertices[f.apply(i)].clone())).collect();
        Self { x, y, map, metadata }
    }

    fn vertex_map(&self) -> Vec<usize> {
        let y_index: HashMap<&str, usize> = self.y.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        self.map.iter().map(|(_, w)| y_index[w.as_str()]).collect()
    }

    /// Builds `X`, `Y` and checks the three map properties.
    pub fn validate(&self) -> Result<MapReport> {
        Ok(validate_map(&self.vertex_map(), &self.x.to_complex()?, &self.y.to_complex()?))
    }

    /// The simplicial map, or [`Error::InvalidMap`] if some simplex image is
    /// not a simplex of `Y`.
    pub fn to_map(&self) -> Result<Arc<SimplicialMap>> {
        let x = Arc::new(self.x.to_complex()?);
        let y = Arc::new(self.y.to_complex()?);
        Ok(Arc::new(SimplicialMap::new(x, y, self.vertex_map())?))
    }

    pub fn canonical(&self) -> Self {
        Self { x: self.x.canonical(), y: self.y.canonical(), map: self.map.clone(), metadata: self.metadata.clone() }
    }

    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("x".into(), self.x.to_json());
        obj.insert("y".into(), self.y.to_json());
        obj.insert("map".into(), Value::Object(self.map.iter().map(|(a, b)| (a.clone(), Value::from(b.clone()))).collect()));
        if let Some(m) = &self.metadata {
            obj.insert("metadata".into(), serde_json::to_value(m).expect("metadata serializes"));
        }
        Value::Object(obj)
    }

    /// Pretty JSON of the canonical form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical().to_json_value()).expect("document serializes") + "\n"
    }
}

/// Output format of [`emit_report`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Human,
    Json,
}

/// Something the command line can print.
pub trait Report {
    fn human(&self) -> String;
    fn json(&self) -> Value;
    /// Whether the report describes a failed check.
    fn failed(&self) -> bool {
        false
    }
}

pub fn emit_report<R: Report + ?Sized>(report: &R, format: Format) -> String {
    match format {
        Format::Human => report.human(),
        Format::Json => serde_json::to_string_pretty(&report.json()).expect("report serializes") + "\n",
    }
}

fn group_json(g: &HomologyGroup) -> Value {
    serde_json::to_value(g).expect("group serializes")
}

impl Report for MapReport {
    fn human(&self) -> String {
        let mut out = String::new();
        let yes = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(out, "simplicial:     {}", yes(self.simplicial));
        let _ = writeln!(out, "finite-to-one:  {}", yes(self.finite_to_one));
        let _ = writeln!(out, "surjective:     {}", yes(self.surjective));
        for p in &self.problems {
            let _ = writeln!(out, "  - {p}");
        }
        let _ = writeln!(out, "valid: {}", yes(self.is_valid()));
        out
    }

    fn json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["valid"] = Value::from(self.is_valid());
        v
    }

    fn failed(&self) -> bool {
        !self.is_valid()
    }
}

/// Homology of one or more named complexes, degree by degree.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyListing {
    pub entries: Vec<(String, Vec<HomologyGroup>)>,
}

impl Report for HomologyListing {
    fn human(&self) -> String {
        let mut out = String::new();
        for (name, groups) in &self.entries {
            let _ = writeln!(out, "{name}");
            for (n, g) in groups.iter().enumerate() {
                let _ = writeln!(out, "  H_{n} = {g}");
            }
        }
        out
    }

    fn json(&self) -> Value {
        Value::Object(
            self.entries
                .iter()
                .map(|(name, groups)| (name.clone(), Value::Array(groups.iter().map(group_json).collect())))
                .collect(),
        )
    }
}

impl Report for SpectralSequenceReport {
    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (p_max = {}, q_max = {})", self.kind, self.p_max, self.q_max);
        let _ = writeln!(out, "{:<8} {:>3} {:>3}  group", "page", "p", "q");
        for e in &self.pages {
            let _ = writeln!(out, "{:<8} {:>3} {:>3}  {}", format!("E^{}", e.r), e.p, e.q, e.group);
        }
        for c in self.column_checks.iter().filter(|c| !c.matches()) {
            let _ = writeln!(out, "E^1_{{{},{}}} = {} but column homology is {}", c.p, c.q, c.page, c.column);
        }
        for (p, q) in &self.stable_mismatches {
            let _ = writeln!(out, "stable page at ({p},{q}) differs from E^inf");
        }
        for v in &self.verdicts {
            let pieces = v.e_infinity.iter().map(|(p, g)| format!("p={p}: {g}")).collect::<Vec<_>>().join(", ");
            let _ = writeln!(
                out,
                "n = {}: E^inf [{}]; H_n(Y) = {}; {}",
                v.n,
                pieces,
                v.target,
                if v.matches() { "match" } else { "MISMATCH" }
            );
        }
        let _ = writeln!(out, "converges: {}", if self.converges() { "yes" } else { "no" });
        out
    }

    fn json(&self) -> Value {
        let page = |e: &crate::spectral::PageEntry| {
            json!({"r": e.r, "p": e.p, "q": e.q, "rank": e.group.rank(), "torsion": bigint_json(e.group.torsion())})
        };
        json!({
            "kind": self.kind.to_string(),
            "p_max": self.p_max,
            "q_max": self.q_max,
            "pages": self.pages.iter().map(page).collect::<Vec<_>>(),
            "skipped": self.skipped,
            "column_checks": self.column_checks.iter().map(|c| json!({
                "p": c.p, "q": c.q, "page": group_json(&c.page), "column": group_json(&c.column), "matches": c.matches()
            })).collect::<Vec<_>>(),
            "target": self.target.iter().map(group_json).collect::<Vec<_>>(),
            "verdicts": self.verdicts.iter().map(|v| {
                let mut j = serde_json::to_value(v).expect("verdict serializes");
                j["matches"] = v.matches().into();
                j
            }).collect::<Vec<_>>(),
            "stable_mismatches": self.stable_mismatches,
            "converges": self.converges(),
        })
    }

    fn failed(&self) -> bool {
        !self.converges()
    }
}

impl Report for CollapseReport {
    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {} cells checked, {} skipped", self.label, self.checked, self.skipped.len());
        for v in &self.violations {
            let _ = writeln!(out, "  E^{}_{{{},{}}} = {} (expected {})", v.r, v.p, v.q, v.found, v.expected);
        }
        let _ = writeln!(out, "collapsed: {}", if self.collapsed() { "yes" } else { "no" });
        out
    }

    fn json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["collapsed"] = self.collapsed().into();
        v
    }

    fn failed(&self) -> bool {
        !self.collapsed()
    }
}

/// The vertices and simplices of a multiple-point space, with vertices shown
/// as tuples of source vertex names.
#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub kind: String,
    pub k: usize,
    pub f_vector: Vec<usize>,
    pub vertices: Vec<Vec<String>>,
    pub simplices: Vec<Vec<usize>>,
}

impl BuildReport {
    pub fn new(z: &MultiplePointComplex) -> Self {
        let x = z.map().source();
        let complex = z.complex();
        Self {
            kind: z.kind().to_string(),
            k: z.k(),
            f_vector: complex.f_vector(),
            vertices: z.tuples().iter().map(|t| t.iter().map(|&v| x.label(v).to_string()).collect()).collect(),
            simplices: complex.facets().iter().map(|s| s.vertices().to_vec()).collect(),
        }
    }
}

impl Report for BuildReport {
    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}^{}: f-vector {:?}", self.kind, self.k, self.f_vector);
        for (i, t) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} = ({})", t.join(", "));
        }
        let _ = writeln!(out, "maximal simplices:");
        for s in &self.simplices {
            let _ = writeln!(out, "  [{}]", s.iter().map(|v| format!("v{v}")).collect::<Vec<_>>().join(", "));
        }
        out
    }

    fn json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Homology of `X`, `Y`, and of `W^k`, `D^k` and the alternating complex of
/// `D^k` for `2 ≤ k ≤ top`, in degrees up to `q_max`.
pub fn homology_listing(f: &Arc<SimplicialMap>, top: usize, q_max: usize) -> Result<HomologyListing> {
    let upto = |x: &SimplicialComplex| -> Vec<HomologyGroup> { x.homology().into_iter().take(q_max + 1).collect() };
    let mut entries = vec![("X".to_string(), upto(f.source())), ("Y".to_string(), upto(f.target()))];
    if top >= 2 {
        for kind in [Kind::W, Kind::D] {
            let tower = MultiplePointTower::new(f, kind, top)?;
            for k in 2..=top {
                entries.push((format!("{kind}^{k}"), upto(tower.level(k).complex())));
            }
        }
        let tower = MultiplePointTower::new(f, Kind::D, top)?;
        for k in 2..=top {
            let z = tower.level(k);
            let alt = AltComplex::new(z, q_max)?;
            let groups = (0..=q_max).map(|n| alt.homology(n)).collect::<Result<Vec<_>>>()?;
            entries.push((format!("AH(D^{k})"), groups));
        }
    }
    Ok(HomologyListing { entries })
}
