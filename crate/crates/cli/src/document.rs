//! The JSON document: named collections of fields, bases, polyhedral
//! divisors, fans, groups, actions, toric fans and homomorphisms, with all
//! cross-references resolved at load time and a canonical re-serialization.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Map, Value};

use divfan_core::arith::{FieldAutomorphism, FieldElement, FiniteGroup, NumberField};
use divfan_core::base::{
    BasePoint, BaseVariety, MobiusMatrix, Plurifunction, RationalFunction, SemilinearBaseMap,
};
use divfan_core::fan::{DivisorialFan, FaceEdge};
use divfan_core::galois::{GaloisFanAction, SemilinearFanMorphism, ToricFan};
use divfan_core::polyhedral::{Cone, Polyhedron};
use divfan_core::ppdiv::{FaceCertificate, PpDivisor};
use divfan_core::rat::{format_rat, parse_rat, QMat, QVec, Rat};

pub struct Document {
    pub fields: BTreeMap<String, Arc<NumberField>>,
    pub bases: BTreeMap<String, (String, BaseVariety)>,
    pub ppdivisors: BTreeMap<String, (String, PpDivisor)>,
    pub fans: BTreeMap<String, (String, DivisorialFan)>,
    pub groups: BTreeMap<String, FiniteGroup>,
    pub actions: BTreeMap<String, (String, GaloisFanAction)>,
    pub toric_fans: BTreeMap<String, ToricFan>,
    pub homs: BTreeMap<String, (String, String, BTreeMap<String, QMat>)>,
}

fn as_object(v: &Value, what: &str) -> Result<Map<String, Value>> {
    v.as_object()
        .cloned()
        .ok_or_else(|| anyhow!("{what} must be a JSON object"))
}

fn rat_of(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => Ok(parse_rat(s)?),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| anyhow!("non-integer numeric literal {n}"))?;
            Ok(divfan_core::rat::rint(i))
        }
        _ => bail!("expected a rational string, got {v}"),
    }
}

fn qvec_of(v: &Value) -> Result<QVec> {
    let items = v
        .as_array()
        .ok_or_else(|| anyhow!("expected a coordinate array"))?;
    Ok(QVec(items.iter().map(rat_of).collect::<Result<Vec<_>>>()?))
}

fn qvec_json(v: &QVec) -> Value {
    Value::Array(v.0.iter().map(|x| json!(format_rat(x))).collect())
}

fn element_of(field: &Arc<NumberField>, v: &Value) -> Result<FieldElement> {
    let coeffs = qvec_of(v)?;
    Ok(FieldElement::new(field, coeffs.0)?)
}

fn element_json(e: &FieldElement) -> Value {
    Value::Array(e.coeffs.iter().map(|x| json!(format_rat(x))).collect())
}

fn point_of(field: &Arc<NumberField>, v: &Value) -> Result<BasePoint> {
    match v {
        Value::String(s) if s == "inf" => Ok(BasePoint::Infinity),
        Value::Object(o) => {
            let a = o.get("a").ok_or_else(|| anyhow!("point object needs 'a'"))?;
            Ok(BasePoint::Finite(element_of(field, a)?))
        }
        _ => bail!("a point is \"inf\" or {{\"a\": [...]}}"),
    }
}

fn point_json(p: &BasePoint) -> Value {
    match p {
        BasePoint::Infinity => json!("inf"),
        BasePoint::Finite(a) => json!({ "a": element_json(a) }),
    }
}

fn cone_of(rank: usize, v: &Value) -> Result<Cone> {
    let o = as_object(v, "cone")?;
    let rays = o
        .get("rays")
        .and_then(|r| r.as_array())
        .ok_or_else(|| anyhow!("cone needs a 'rays' array"))?;
    let rays = rays.iter().map(qvec_of).collect::<Result<Vec<_>>>()?;
    Ok(Cone::from_rays(rank, &rays)?)
}

fn cone_json(c: &Cone) -> Value {
    json!({ "rays": c.generators().iter().map(qvec_json).collect::<Vec<_>>() })
}

fn poly_of(rank: usize, tail: &Cone, v: &Value) -> Result<Polyhedron> {
    let o = as_object(v, "polyhedron")?;
    if o.get("empty").and_then(|b| b.as_bool()).unwrap_or(false) {
        return Ok(Polyhedron::empty(rank, tail.clone()));
    }
    let vertices = o
        .get("vertices")
        .and_then(|r| r.as_array())
        .ok_or_else(|| anyhow!("polyhedron needs 'vertices'"))?
        .iter()
        .map(qvec_of)
        .collect::<Result<Vec<_>>>()?;
    let tail = match o.get("rays") {
        Some(r) => {
            let rays = r
                .as_array()
                .ok_or_else(|| anyhow!("'rays' must be an array"))?
                .iter()
                .map(qvec_of)
                .collect::<Result<Vec<_>>>()?;
            Cone::from_rays(rank, &rays)?
        }
        None => tail.clone(),
    };
    Ok(Polyhedron::from_vertices(rank, &vertices, &tail)?)
}

fn poly_json(p: &Polyhedron) -> Value {
    if p.is_empty() {
        return json!({ "empty": true });
    }
    json!({
        "vertices": p.vertices().iter().map(qvec_json).collect::<Vec<_>>(),
        "rays": p.tail().generators().iter().map(qvec_json).collect::<Vec<_>>(),
        "empty": false,
    })
}

fn function_of(field: &Arc<NumberField>, v: &Value) -> Result<RationalFunction> {
    let o = as_object(v, "function")?;
    let c = element_of(field, o.get("c").ok_or_else(|| anyhow!("function needs 'c'"))?)?;
    let mut factors = Vec::new();
    if let Some(items) = o.get("factors").and_then(|f| f.as_array()) {
        for item in items {
            let fo = as_object(item, "factor")?;
            let root = element_of(
                field,
                fo.get("root").ok_or_else(|| anyhow!("factor needs 'root'"))?,
            )?;
            let exp = fo
                .get("exp")
                .and_then(|e| e.as_i64())
                .ok_or_else(|| anyhow!("factor needs an integer 'exp'"))?;
            factors.push((root, exp));
        }
    }
    Ok(RationalFunction::new(c, factors)?)
}

pub fn function_json(f: &RationalFunction) -> Value {
    json!({
        "c": element_json(&f.constant),
        "factors": f.factors.iter().map(|(root, exp)| json!({
            "root": element_json(root),
            "exp": exp,
        })).collect::<Vec<_>>(),
    })
}

fn plurifunction_of(field: &Arc<NumberField>, rank: usize, v: &Value) -> Result<Plurifunction> {
    let items = v
        .as_array()
        .ok_or_else(|| anyhow!("plurifunction must be a list of terms"))?;
    let mut terms = Vec::new();
    for item in items {
        let o = as_object(item, "plurifunction term")?;
        let vector = qvec_of(o.get("vector").ok_or_else(|| anyhow!("term needs 'vector'"))?)?;
        let function = function_of(
            field,
            o.get("function").ok_or_else(|| anyhow!("term needs 'function'"))?,
        )?;
        terms.push((vector, function));
    }
    Ok(Plurifunction::from_terms(rank, field, &terms)?)
}

fn plurifunction_json(pf: &Plurifunction) -> Value {
    let mut terms = Vec::new();
    for (j, f) in pf.components.iter().enumerate() {
        if f.is_one() {
            continue;
        }
        let mut e = vec![0i64; pf.rank()];
        e[j] = 1;
        terms.push(json!({
            "vector": e,
            "function": function_json(f),
        }));
    }
    Value::Array(terms)
}

fn imat_of(v: &Value) -> Result<QMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| anyhow!("matrix must be an array of rows"))?
        .iter()
        .map(qvec_of)
        .collect::<Result<Vec<_>>>()?;
    let m = QMat { rows };
    if !m.is_integral() {
        bail!("matrix entries must be integers");
    }
    Ok(m)
}

fn imat_json(m: &QMat) -> Value {
    Value::Array(
        m.rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.0.iter()
                        .map(|x| json!(x.to_integer().to_string().parse::<i64>().unwrap_or(0)))
                        .collect(),
                )
            })
            .collect(),
    )
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let root: Value = serde_json::from_str(text).context("malformed JSON")?;
        let root = as_object(&root, "document")?;
        let version = root
            .get("version")
            .and_then(|v| v.as_i64())
            .ok_or_else(|| anyhow!("document needs \"version\": 1"))?;
        if version != 1 {
            bail!("unsupported document version {version}");
        }
        let mut doc = Document {
            fields: BTreeMap::new(),
            bases: BTreeMap::new(),
            ppdivisors: BTreeMap::new(),
            fans: BTreeMap::new(),
            groups: BTreeMap::new(),
            actions: BTreeMap::new(),
            toric_fans: BTreeMap::new(),
            homs: BTreeMap::new(),
        };

        if let Some(fields) = root.get("fields") {
            for (name, v) in as_object(fields, "fields")? {
                let o = as_object(&v, "field")?;
                let modulus = o
                    .get("modulus")
                    .and_then(|m| m.as_array())
                    .ok_or_else(|| anyhow!("field {name} needs 'modulus'"))?
                    .iter()
                    .map(rat_of)
                    .collect::<Result<Vec<_>>>()?;
                let generator = o
                    .get("generator")
                    .and_then(|g| g.as_str())
                    .unwrap_or("a");
                doc.fields
                    .insert(name.clone(), NumberField::new(modulus, generator)?);
            }
        }

        if let Some(bases) = root.get("bases") {
            for (name, v) in as_object(bases, "bases")? {
                let o = as_object(&v, "base")?;
                let kind = o
                    .get("kind")
                    .and_then(|k| k.as_str())
                    .ok_or_else(|| anyhow!("base {name} needs 'kind'"))?;
                let base = match kind {
                    "point" => ("".to_string(), BaseVariety::Point),
                    "p1" => {
                        let field_name = o
                            .get("field")
                            .and_then(|f| f.as_str())
                            .ok_or_else(|| anyhow!("base {name} needs 'field'"))?;
                        let field = doc
                            .fields
                            .get(field_name)
                            .ok_or_else(|| anyhow!("unknown field {field_name}"))?;
                        let mut removed = Vec::new();
                        if let Some(items) = o.get("removed").and_then(|r| r.as_array()) {
                            for item in items {
                                removed.push(point_of(field, item)?);
                            }
                        }
                        let base = BaseVariety::line(field).remove(&removed)?;
                        (field_name.to_string(), base)
                    }
                    other => bail!("unknown base kind {other:?}"),
                };
                doc.bases.insert(name.clone(), base);
            }
        }

        if let Some(pp) = root.get("ppdivisors") {
            for (name, v) in as_object(pp, "ppdivisors")? {
                let o = as_object(&v, "ppdivisor")?;
                let base_name = o
                    .get("base")
                    .and_then(|b| b.as_str())
                    .ok_or_else(|| anyhow!("ppdivisor {name} needs 'base'"))?;
                let (field_name, base) = doc
                    .bases
                    .get(base_name)
                    .ok_or_else(|| anyhow!("unknown base {base_name}"))?
                    .clone();
                let rank = o
                    .get("rank")
                    .and_then(|r| r.as_u64())
                    .ok_or_else(|| anyhow!("ppdivisor {name} needs 'rank'"))?
                    as usize;
                let tail = cone_of(rank, o.get("tail").ok_or_else(|| anyhow!("needs 'tail'"))?)?;
                let mut coeffs = Vec::new();
                if let Some(items) = o.get("coeffs").and_then(|c| c.as_array()) {
                    let field = doc
                        .fields
                        .get(&field_name)
                        .cloned()
                        .unwrap_or_else(NumberField::rationals);
                    for item in items {
                        let co = as_object(item, "coefficient")?;
                        let point = point_of(
                            &field,
                            co.get("point").ok_or_else(|| anyhow!("needs 'point'"))?,
                        )?;
                        let poly = if co.get("empty").and_then(|b| b.as_bool()).unwrap_or(false) {
                            Polyhedron::empty(rank, tail.clone())
                        } else {
                            poly_of(
                                rank,
                                &tail,
                                co.get("poly").ok_or_else(|| anyhow!("needs 'poly'"))?,
                            )?
                        };
                        coeffs.push((point, poly));
                    }
                }
                let d = PpDivisor::new(base, rank, tail, coeffs)?;
                doc.ppdivisors.insert(name.clone(), (base_name.to_string(), d));
            }
        }

        if let Some(fans) = root.get("fans") {
            for (name, v) in as_object(fans, "fans")? {
                let o = as_object(&v, "fan")?;
                let base_name = o
                    .get("base")
                    .and_then(|b| b.as_str())
                    .ok_or_else(|| anyhow!("fan {name} needs 'base'"))?;
                let (field_name, base) = doc
                    .bases
                    .get(base_name)
                    .ok_or_else(|| anyhow!("unknown base {base_name}"))?
                    .clone();
                let rank = o
                    .get("rank")
                    .and_then(|r| r.as_u64())
                    .ok_or_else(|| anyhow!("fan {name} needs 'rank'"))? as usize;
                let member_names = o
                    .get("members")
                    .and_then(|m| m.as_array())
                    .ok_or_else(|| anyhow!("fan {name} needs 'members'"))?;
                let mut members = Vec::new();
                for m in member_names {
                    let mname = m
                        .as_str()
                        .ok_or_else(|| anyhow!("member names are strings"))?;
                    let (_, d) = doc
                        .ppdivisors
                        .get(mname)
                        .ok_or_else(|| anyhow!("unknown ppdivisor {mname}"))?;
                    members.push((mname.to_string(), d.clone()));
                }
                let field = doc
                    .fields
                    .get(&field_name)
                    .cloned()
                    .unwrap_or_else(NumberField::rationals);
                let mut edges = Vec::new();
                if let Some(items) = o.get("certificates").and_then(|c| c.as_array()) {
                    for item in items {
                        let eo = as_object(item, "certificate")?;
                        let sub = eo
                            .get("sub")
                            .and_then(|s| s.as_str())
                            .ok_or_else(|| anyhow!("certificate needs 'sub'"))?;
                        let sup = eo
                            .get("super")
                            .and_then(|s| s.as_str())
                            .ok_or_else(|| anyhow!("certificate needs 'super'"))?;
                        let sub_idx = members
                            .iter()
                            .position(|(n, _)| n == sub)
                            .ok_or_else(|| anyhow!("unknown member {sub}"))?;
                        let sup_idx = members
                            .iter()
                            .position(|(n, _)| n == sup)
                            .ok_or_else(|| anyhow!("unknown member {sup}"))?;
                        let mut witnesses = Vec::new();
                        for w in eo
                            .get("witnesses")
                            .and_then(|w| w.as_array())
                            .ok_or_else(|| anyhow!("certificate needs 'witnesses'"))?
                        {
                            let wo = as_object(w, "witness")?;
                            let m = qvec_of(wo.get("m").ok_or_else(|| anyhow!("needs 'm'"))?)?;
                            let f = function_of(
                                &field,
                                wo.get("f").ok_or_else(|| anyhow!("needs 'f'"))?,
                            )?;
                            witnesses.push((m, f));
                        }
                        edges.push(FaceEdge {
                            sub: sub_idx,
                            sup: sup_idx,
                            cert: FaceCertificate { witnesses },
                        });
                    }
                }
                let fan = DivisorialFan {
                    base,
                    rank,
                    members,
                    edges,
                };
                doc.fans.insert(name.clone(), (base_name.to_string(), fan));
            }
        }

        if let Some(groups) = root.get("groups") {
            for (name, v) in as_object(groups, "groups")? {
                let o = as_object(&v, "group")?;
                let elements = o
                    .get("elements")
                    .and_then(|e| e.as_array())
                    .ok_or_else(|| anyhow!("group {name} needs 'elements'"))?
                    .iter()
                    .map(|e| {
                        e.as_str()
                            .map(|s| s.to_string())
                            .ok_or_else(|| anyhow!("element labels are strings"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let table = o
                    .get("table")
                    .and_then(|t| t.as_array())
                    .ok_or_else(|| anyhow!("group {name} needs 'table'"))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| anyhow!("table rows are arrays"))?
                            .iter()
                            .map(|x| {
                                x.as_u64()
                                    .map(|u| u as usize)
                                    .ok_or_else(|| anyhow!("table entries are indices"))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                doc.groups
                    .insert(name.clone(), FiniteGroup::from_table(elements, table)?);
            }
        }

        if let Some(actions) = root.get("actions") {
            for (name, v) in as_object(actions, "actions")? {
                let o = as_object(&v, "action")?;
                let group_name = o
                    .get("group")
                    .and_then(|g| g.as_str())
                    .ok_or_else(|| anyhow!("action {name} needs 'group'"))?;
                let group = doc
                    .groups
                    .get(group_name)
                    .ok_or_else(|| anyhow!("unknown group {group_name}"))?
                    .clone();
                let field_name = o
                    .get("field")
                    .and_then(|f| f.as_str())
                    .ok_or_else(|| anyhow!("action {name} needs 'field'"))?;
                let field = doc
                    .fields
                    .get(field_name)
                    .ok_or_else(|| anyhow!("unknown field {field_name}"))?
                    .clone();
                let rank = o
                    .get("rank")
                    .and_then(|r| r.as_u64())
                    .ok_or_else(|| anyhow!("action {name} needs 'rank'"))?
                    as usize;
                let mut morphisms = BTreeMap::new();
                for (label, mv) in as_object(
                    o.get("elements")
                        .ok_or_else(|| anyhow!("action {name} needs 'elements'"))?,
                    "action elements",
                )? {
                    let mo = as_object(&mv, "action element")?;
                    let mobius = match mo.get("mobius") {
                        Some(m) => {
                            let rows = m
                                .as_array()
                                .ok_or_else(|| anyhow!("mobius is a 2x2 array"))?;
                            if rows.len() != 2 {
                                bail!("mobius is a 2x2 array");
                            }
                            let mut entries = Vec::new();
                            for row in rows {
                                for e in row
                                    .as_array()
                                    .ok_or_else(|| anyhow!("mobius rows are arrays"))?
                                {
                                    entries.push(element_of(&field, e)?);
                                }
                            }
                            MobiusMatrix::new(entries.try_into().map_err(|_| {
                                anyhow!("mobius needs exactly four entries")
                            })?)?
                        }
                        None => MobiusMatrix::identity(&field),
                    };
                    let twist = match mo.get("twist") {
                        Some(t) => FieldAutomorphism::new(&field, element_of(&field, t)?)?,
                        None => FieldAutomorphism::identity(&field),
                    };
                    let f_matrix = imat_of(
                        mo.get("F").ok_or_else(|| anyhow!("element needs 'F'"))?,
                    )?;
                    let plurifn = match mo.get("plurifunction") {
                        Some(pf) => plurifunction_of(&field, rank, pf)?,
                        None => Plurifunction::one(rank, &field),
                    };
                    let mut assignment = BTreeMap::new();
                    if let Some(a) = mo.get("assignment") {
                        for (k, val) in as_object(a, "assignment")? {
                            assignment.insert(
                                k,
                                val.as_str()
                                    .ok_or_else(|| anyhow!("assignment values are names"))?
                                    .to_string(),
                            );
                        }
                    }
                    morphisms.insert(
                        label.clone(),
                        SemilinearFanMorphism {
                            gamma: label.clone(),
                            psi: SemilinearBaseMap::new(mobius, twist)?,
                            f_matrix,
                            plurifn,
                            assignment,
                        },
                    );
                }
                doc.actions.insert(
                    name.clone(),
                    (field_name.to_string(), GaloisFanAction { group, morphisms }),
                );
            }
        }

        if let Some(tfs) = root.get("toric_fans") {
            for (name, v) in as_object(tfs, "toric_fans")? {
                let o = as_object(&v, "toric fan")?;
                let rank = o
                    .get("rank")
                    .and_then(|r| r.as_u64())
                    .ok_or_else(|| anyhow!("toric fan {name} needs 'rank'"))?
                    as usize;
                let cones = o
                    .get("cones")
                    .and_then(|c| c.as_array())
                    .ok_or_else(|| anyhow!("toric fan {name} needs 'cones'"))?
                    .iter()
                    .map(|c| cone_of(rank, c))
                    .collect::<Result<Vec<_>>>()?;
                doc.toric_fans.insert(name.clone(), ToricFan::new(rank, &cones)?);
            }
        }

        if let Some(homs) = root.get("homs") {
            for (name, v) in as_object(homs, "homs")? {
                let o = as_object(&v, "hom")?;
                let group = o
                    .get("group")
                    .and_then(|g| g.as_str())
                    .ok_or_else(|| anyhow!("hom {name} needs 'group'"))?
                    .to_string();
                let toric = o
                    .get("toric")
                    .and_then(|t| t.as_str())
                    .ok_or_else(|| anyhow!("hom {name} needs 'toric'"))?
                    .to_string();
                if !doc.groups.contains_key(&group) {
                    bail!("unknown group {group}");
                }
                if !doc.toric_fans.contains_key(&toric) {
                    bail!("unknown toric fan {toric}");
                }
                let mut images = BTreeMap::new();
                for (label, m) in as_object(
                    o.get("images").ok_or_else(|| anyhow!("hom needs 'images'"))?,
                    "images",
                )? {
                    images.insert(label, imat_of(&m)?);
                }
                doc.homs.insert(name.clone(), (group, toric, images));
            }
        }

        Ok(doc)
    }

    /// Canonical re-serialization: deterministic key order, canonical
    /// rational strings, declared-but-trivial coefficients written out.
    pub fn dump(&self) -> String {
        let mut root = Map::new();
        root.insert("version".into(), json!(1));
        if !self.fields.is_empty() {
            let mut m = Map::new();
            for (name, f) in &self.fields {
                m.insert(
                    name.clone(),
                    json!({
                        "modulus": f.modulus.iter().map(|c| json!(format_rat(c))).collect::<Vec<_>>(),
                        "generator": f.generator,
                    }),
                );
            }
            root.insert("fields".into(), Value::Object(m));
        }
        if !self.bases.is_empty() {
            let mut m = Map::new();
            for (name, (field_name, base)) in &self.bases {
                let v = match base {
                    BaseVariety::Point => json!({ "kind": "point" }),
                    _ => json!({
                        "kind": "p1",
                        "field": field_name,
                        "removed": base.removed().iter().map(point_json).collect::<Vec<_>>(),
                    }),
                };
                m.insert(name.clone(), v);
            }
            root.insert("bases".into(), Value::Object(m));
        }
        if !self.ppdivisors.is_empty() {
            let mut m = Map::new();
            for (name, (base_name, d)) in &self.ppdivisors {
                m.insert(name.clone(), ppdivisor_json(base_name, d));
            }
            root.insert("ppdivisors".into(), Value::Object(m));
        }
        if !self.fans.is_empty() {
            let mut m = Map::new();
            for (name, (base_name, fan)) in &self.fans {
                m.insert(
                    name.clone(),
                    json!({
                        "base": base_name,
                        "rank": fan.rank,
                        "members": fan.members.iter().map(|(n, _)| json!(n)).collect::<Vec<_>>(),
                        "certificates": fan.edges.iter().map(|e| json!({
                            "sub": fan.members[e.sub].0,
                            "super": fan.members[e.sup].0,
                            "witnesses": e.cert.witnesses.iter().map(|(mv, f)| json!({
                                "m": qvec_json(mv),
                                "f": function_json(f),
                            })).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    }),
                );
            }
            root.insert("fans".into(), Value::Object(m));
        }
        if !self.groups.is_empty() {
            let mut m = Map::new();
            for (name, g) in &self.groups {
                m.insert(
                    name.clone(),
                    json!({ "elements": g.elements, "table": g.table }),
                );
            }
            root.insert("groups".into(), Value::Object(m));
        }
        if !self.actions.is_empty() {
            let mut m = Map::new();
            for (name, (field_name, act)) in &self.actions {
                let mut elements = Map::new();
                for (label, g) in &act.morphisms {
                    let mobius = &g.psi.mobius;
                    elements.insert(
                        label.clone(),
                        json!({
                            "mobius": [
                                [element_json(&mobius.entries[0]), element_json(&mobius.entries[1])],
                                [element_json(&mobius.entries[2]), element_json(&mobius.entries[3])],
                            ],
                            "twist": element_json(&g.psi.twist.generator_image),
                            "F": imat_json(&g.f_matrix),
                            "plurifunction": plurifunction_json(&g.plurifn),
                            "assignment": g.assignment,
                        }),
                    );
                }
                m.insert(
                    name.clone(),
                    json!({
                        "group": group_name_of(self, &act.group),
                        "field": field_name,
                        "rank": act
                            .morphisms
                            .values()
                            .next()
                            .map(|g| g.f_matrix.nrows())
                            .unwrap_or(1),
                        "elements": Value::Object(elements),
                    }),
                );
            }
            root.insert("actions".into(), Value::Object(m));
        }
        if !self.toric_fans.is_empty() {
            let mut m = Map::new();
            for (name, t) in &self.toric_fans {
                m.insert(
                    name.clone(),
                    json!({
                        "rank": t.rank,
                        "cones": divfan_core::fan::maximal_cones(&t.cones)
                            .iter()
                            .map(cone_json)
                            .collect::<Vec<_>>(),
                    }),
                );
            }
            root.insert("toric_fans".into(), Value::Object(m));
        }
        if !self.homs.is_empty() {
            let mut m = Map::new();
            for (name, (group, toric, images)) in &self.homs {
                let mut imgs = Map::new();
                for (label, mat) in images {
                    imgs.insert(label.clone(), imat_json(mat));
                }
                m.insert(
                    name.clone(),
                    json!({ "group": group, "toric": toric, "images": Value::Object(imgs) }),
                );
            }
            root.insert("homs".into(), Value::Object(m));
        }
        serde_json::to_string_pretty(&Value::Object(root)).expect("serializable document") + "\n"
    }
}

fn group_name_of(doc: &Document, group: &FiniteGroup) -> String {
    doc.groups
        .iter()
        .find(|(_, g)| *g == group)
        .map(|(n, _)| n.clone())
        .unwrap_or_else(|| "group".into())
}

pub fn ppdivisor_json(base_name: &str, d: &PpDivisor) -> Value {
    let mut coeffs = Vec::new();
    let mut listed: Vec<BasePoint> = Vec::new();
    for (p, poly) in d.listed() {
        listed.push(p.clone());
        if poly.is_empty() {
            coeffs.push(json!({ "point": point_json(p), "empty": true }));
        } else {
            coeffs.push(json!({ "point": point_json(p), "poly": poly_json(poly) }));
        }
    }
    for p in d.support_points() {
        if !listed.contains(&p) {
            coeffs.push(json!({
                "point": point_json(&p),
                "poly": poly_json(&d.tail_polyhedron()),
            }));
        }
    }
    json!({
        "base": base_name,
        "rank": d.rank(),
        "tail": cone_json(d.tail()),
        "coeffs": coeffs,
    })
}
