//! JSON artifact formats: triangulations, weight systems, and representation
//! descriptors.
//!
//! All indices in files are 1-based (faces, slots, edges) and complex numbers
//! are `[re, im]` pairs; plain JSON numbers are accepted on input as real
//! values.  Each document carries an optional `"schema"` tag
//! (`qteich.triangulation/1`, `qteich.weights/1`, `qteich.rep/1`); documents
//! with an unexpected tag are rejected, untagged documents are accepted.
//! The formats are documented in `docs/formats.md`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::qalgebra::QParams;
use crate::rep::LocalRep;
use crate::surface::Triangulation;

pub const TRIANGULATION_SCHEMA: &str = "qteich.triangulation/1";
pub const WEIGHTS_SCHEMA: &str = "qteich.weights/1";
pub const REP_SCHEMA: &str = "qteich.rep/1";

// ---------------------------------------------------------------------------
// Complex numbers
// ---------------------------------------------------------------------------

/// Serialize a complex number as an `[re, im]` pair.
pub fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Serialize a weight vector as a list of `[re, im]` pairs.
pub fn complex_vec_value(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex_value(z)).collect())
}

/// Parse a complex number from `[re, im]`, a plain number, or
/// `{"re": …, "im": …}`.
pub fn complex_from_value(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(n) => {
            let re = n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("number {n} is not representable as f64")))?;
            Ok(Complex64::new(re, 0.0))
        }
        Value::Array(parts) => {
            if parts.len() != 2 {
                return Err(Error::Parse(format!(
                    "a complex number needs exactly [re, im], got {} entries",
                    parts.len()
                )));
            }
            let re = parts[0]
                .as_f64()
                .ok_or_else(|| Error::Parse("complex re part is not a number".into()))?;
            let im = parts[1]
                .as_f64()
                .ok_or_else(|| Error::Parse("complex im part is not a number".into()))?;
            Ok(Complex64::new(re, im))
        }
        Value::Object(map) => {
            let re = map
                .get("re")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Parse("complex object needs a numeric \"re\"".into()))?;
            let im = map.get("im").and_then(Value::as_f64).unwrap_or(0.0);
            Ok(Complex64::new(re, im))
        }
        other => Err(Error::Parse(format!(
            "expected a complex number ([re, im] or plain number), got {other}"
        ))),
    }
}

fn check_schema(map: &Map<String, Value>, expected: &str) -> Result<()> {
    if let Some(tag) = map.get("schema") {
        let tag = tag
            .as_str()
            .ok_or_else(|| Error::Parse("\"schema\" must be a string".into()))?;
        if tag != expected {
            return Err(Error::Parse(format!(
                "schema mismatch: document says \"{tag}\", this reader expects \"{expected}\""
            )));
        }
    }
    Ok(())
}

fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON object")))
}

fn as_index(v: &Value, what: &str) -> Result<usize> {
    let n = v
        .as_u64()
        .ok_or_else(|| Error::Parse(format!("{what} must be a positive integer, got {v}")))?;
    if n == 0 {
        return Err(Error::Parse(format!("{what} is 1-based; 0 is out of range")));
    }
    Ok((n - 1) as usize)
}

// ---------------------------------------------------------------------------
// Triangulations
// ---------------------------------------------------------------------------

/// Serialize a triangulation in the gluing-table form:
/// `{"faces": m, "gluing": [[[j, s], [j', s']], …]}` with 1-based face and
/// slot indices.  Edge labels are implicit: both in this file format and in
/// the crate, edges are numbered by first occurrence in (face, slot) scan
/// order, so a round trip preserves the labeling.
pub fn triangulation_to_value(t: &Triangulation) -> Value {
    let mut gluing = Vec::new();
    for e in 0..t.n_edges() {
        let sides = t.sides(e);
        if sides.len() == 2 {
            let (j, s) = sides[0];
            let (j2, s2) = sides[1];
            gluing.push(json!([[j + 1, s + 1], [j2 + 1, s2 + 1]]));
        }
    }
    json!({
        "schema": TRIANGULATION_SCHEMA,
        "faces": t.m(),
        "gluing": gluing,
    })
}

fn side_from_value(v: &Value, m: usize) -> Result<(usize, usize)> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("a glued side must be [face, slot], got {v}")))?;
    let j = as_index(&pair[0], "face index")?;
    let s = as_index(&pair[1], "slot index")?;
    if j >= m {
        return Err(Error::Parse(format!(
            "face index {} out of range for {m} faces",
            j + 1
        )));
    }
    if s >= 3 {
        return Err(Error::Parse(format!("slot index {} out of range 1..3", s + 1)));
    }
    Ok((j, s))
}

/// Read a triangulation from either accepted form:
///
/// * `{"faces": m, "gluing": [[[j, s], [j', s']], …]}` — the gluing table,
///   with edges numbered by first occurrence in scan order;
/// * `{"faces": [[e1, e2, e3], …]}` — an explicit 1-based edge-label table.
pub fn triangulation_from_value(v: &Value) -> Result<Triangulation> {
    let map = as_object(v, "a triangulation document")?;
    check_schema(map, TRIANGULATION_SCHEMA)?;
    let faces = map
        .get("faces")
        .ok_or_else(|| Error::Parse("triangulation document needs a \"faces\" field".into()))?;
    match faces {
        Value::Array(rows) => {
            let mut table = Vec::with_capacity(rows.len());
            for (j, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == 3)
                    .ok_or_else(|| {
                        Error::Parse(format!("face {} must list exactly 3 edge labels", j + 1))
                    })?;
                let mut face = [0usize; 3];
                for (s, e) in row.iter().enumerate() {
                    face[s] = as_index(e, "edge label")?;
                }
                table.push(face);
            }
            Triangulation::from_faces(table)
        }
        Value::Number(_) => {
            let m = faces
                .as_u64()
                .ok_or_else(|| Error::Parse("\"faces\" count must be a positive integer".into()))?
                as usize;
            if m == 0 {
                return Err(Error::Parse("a triangulation needs at least one face".into()));
            }
            let gluing = match map.get("gluing") {
                None => &[] as &[Value],
                Some(Value::Array(pairs)) => pairs.as_slice(),
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "\"gluing\" must be a list of side pairs, got {other}"
                    )))
                }
            };
            let mut partner: Vec<[Option<(usize, usize)>; 3]> = vec![[None; 3]; m];
            for entry in gluing {
                let pair = entry
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| {
                        Error::Parse(format!("each gluing entry pairs two sides, got {entry}"))
                    })?;
                let a = side_from_value(&pair[0], m)?;
                let b = side_from_value(&pair[1], m)?;
                if a == b {
                    return Err(Error::Parse(format!(
                        "side [{}, {}] cannot be glued to itself",
                        a.0 + 1,
                        a.1 + 1
                    )));
                }
                for side in [a, b] {
                    if partner[side.0][side.1].is_some() {
                        return Err(Error::Parse(format!(
                            "side [{}, {}] appears in more than one gluing entry",
                            side.0 + 1,
                            side.1 + 1
                        )));
                    }
                }
                partner[a.0][a.1] = Some(b);
                partner[b.0][b.1] = Some(a);
            }
            // Edges numbered by first occurrence in (face, slot) scan order.
            let mut table = vec![[usize::MAX; 3]; m];
            let mut next = 0usize;
            for j in 0..m {
                for s in 0..3 {
                    if table[j][s] != usize::MAX {
                        continue;
                    }
                    table[j][s] = next;
                    if let Some((j2, s2)) = partner[j][s] {
                        table[j2][s2] = next;
                    }
                    next += 1;
                }
            }
            Triangulation::from_faces(table)
        }
        other => Err(Error::Parse(format!(
            "\"faces\" must be a face count or an explicit face table, got {other}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Weight systems
// ---------------------------------------------------------------------------

/// Serialize a weight system: `{"weights": [[re, im], …]}` aligned with the
/// triangulation's edge order.
pub fn weights_to_value(x: &[Complex64]) -> Value {
    json!({
        "schema": WEIGHTS_SCHEMA,
        "weights": complex_vec_value(x),
    })
}

/// Read a weight system from `{"weights": […]}` or a bare list.
pub fn weights_from_value(v: &Value) -> Result<Vec<Complex64>> {
    let list = match v {
        Value::Array(list) => list,
        Value::Object(map) => {
            check_schema(map, WEIGHTS_SCHEMA)?;
            map.get("weights")
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    Error::Parse("weights document needs a \"weights\" list".into())
                })?
        }
        other => {
            return Err(Error::Parse(format!(
                "expected a weights document or list, got {other}"
            )))
        }
    };
    list.iter().map(complex_from_value).collect()
}

// ---------------------------------------------------------------------------
// Representation descriptors
// ---------------------------------------------------------------------------

/// Serialize a representation descriptor:
/// `{"q": {"N": …, "c": …}, "triangulation": …, "faces": [{"w": [w1, w2, w3],
/// "h": h}, …]}` with side weights `w_s = y_s^N` and face loads `h_j`.  The
/// descriptor pins the isomorphism class representative (two of the three
/// side scalars are recovered as principal roots), not the internal gauge.
pub fn rep_to_value(rep: &LocalRep) -> Value {
    let n = rep.params().n();
    let faces: Vec<Value> = rep
        .face_data()
        .iter()
        .map(|f| {
            json!({
                "w": complex_vec_value(&f.weights(n)),
                "h": complex_value(f.load()),
            })
        })
        .collect();
    json!({
        "schema": REP_SCHEMA,
        "q": {"N": rep.params().n(), "c": rep.params().c()},
        "triangulation": triangulation_to_value(rep.triangulation()),
        "faces": faces,
    })
}

/// Read a representation descriptor.  The triangulation is taken from the
/// document's own `"triangulation"` field when present, otherwise from
/// `fallback`; it is an error to have neither.
pub fn rep_from_value(
    v: &Value,
    fallback: Option<&Triangulation>,
    dim_cap: usize,
) -> Result<LocalRep> {
    let map = as_object(v, "a representation document")?;
    check_schema(map, REP_SCHEMA)?;
    let qmap = as_object(
        map.get("q")
            .ok_or_else(|| Error::Parse("representation document needs a \"q\" field".into()))?,
        "the \"q\" field",
    )?;
    let n = qmap
        .get("N")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("\"q\" needs an integer \"N\"".into()))? as usize;
    let c = qmap.get("c").and_then(Value::as_i64).unwrap_or(1);
    let params = QParams::new(n, c)?;

    let t = match map.get("triangulation") {
        Some(tv) => triangulation_from_value(tv)?,
        None => fallback
            .cloned()
            .ok_or_else(|| {
                Error::Parse(
                    "representation document has no \"triangulation\" field; \
                     supply one with --triangulation"
                        .into(),
                )
            })?,
    };

    let faces = map
        .get("faces")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("representation document needs a \"faces\" list".into()))?;
    let mut data = Vec::with_capacity(faces.len());
    for (j, fv) in faces.iter().enumerate() {
        let fmap = as_object(fv, "a face entry")?;
        let w = fmap
            .get("w")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| {
                Error::Parse(format!("face {} needs \"w\" with exactly 3 side weights", j + 1))
            })?;
        let w0 = complex_from_value(&w[0])?;
        let w1 = complex_from_value(&w[1])?;
        let w2 = complex_from_value(&w[2])?;
        let h = complex_from_value(
            fmap.get("h")
                .ok_or_else(|| Error::Parse(format!("face {} needs a load \"h\"", j + 1)))?,
        )?;
        data.push(([w0, w1, w2], h));
    }
    LocalRep::from_face_weights(&t, &params, &data, dim_cap)
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Read and parse a JSON file.
pub fn read_value(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn triangulation_roundtrips_through_the_gluing_form() {
        for t in fixtures::all() {
            let v = triangulation_to_value(&t);
            let back = triangulation_from_value(&v).unwrap();
            assert_eq!(back.faces(), t.faces(), "{v}");
        }
    }

    #[test]
    fn face_table_form_is_accepted_one_based() {
        let v = json!({"faces": [[1, 2, 3], [1, 4, 5]]});
        let t = triangulation_from_value(&v).unwrap();
        assert_eq!(t.faces(), fixtures::square().faces());
    }

    #[test]
    fn gluing_form_numbers_edges_by_scan_order() {
        // The torus: two faces, all three sides glued crosswise.
        let v = json!({
            "faces": 2,
            "gluing": [[[1,1],[2,1]], [[1,2],[2,2]], [[1,3],[2,3]]],
        });
        let t = triangulation_from_value(&v).unwrap();
        assert_eq!(t.faces(), fixtures::punctured_torus().faces());
    }

    #[test]
    fn malformed_gluing_is_rejected() {
        for bad in [
            json!({"faces": 2, "gluing": [[[1,1],[1,1]]]}),
            json!({"faces": 2, "gluing": [[[1,1],[2,1]], [[1,1],[2,2]]]}),
            json!({"faces": 2, "gluing": [[[1,4],[2,1]]]}),
            json!({"faces": 2, "gluing": [[[3,1],[2,1]]]}),
            json!({"faces": 0}),
            json!({"schema": "qteich.rep/1", "faces": 1}),
        ] {
            assert!(triangulation_from_value(&bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_values_parse_from_all_accepted_shapes() {
        assert_eq!(complex_from_value(&json!(2.5)).unwrap(), c(2.5, 0.0));
        assert_eq!(complex_from_value(&json!([1.0, -2.0])).unwrap(), c(1.0, -2.0));
        assert_eq!(
            complex_from_value(&json!({"re": 3.0, "im": 4.0})).unwrap(),
            c(3.0, 4.0)
        );
        assert!(complex_from_value(&json!([1.0])).is_err());
        assert!(complex_from_value(&json!("1+2i")).is_err());
    }

    #[test]
    fn weights_roundtrip_and_accept_bare_lists() {
        let x = vec![c(0.5, 1.0), c(-2.0, 0.0), c(0.0, 3.0)];
        let v = weights_to_value(&x);
        assert_eq!(weights_from_value(&v).unwrap(), x);
        assert_eq!(
            weights_from_value(&json!([1.0, [2.0, -1.0]])).unwrap(),
            vec![c(1.0, 0.0), c(2.0, -1.0)]
        );
    }

    #[test]
    fn rep_descriptor_roundtrips_and_classifies_identically() {
        let t = fixtures::square();
        let params = QParams::new(3, 1).unwrap();
        let x: Vec<Complex64> = vec![c(1.5, 0.5), c(2.0, 0.0), c(0.5, -0.5), c(1.0, 1.0), c(0.7, 0.0)];
        let h = params.principal_nth_root(x.iter().product());
        let rep = LocalRep::from_edge_weights(&t, &params, &x, h, 4096).unwrap();
        let v = rep_to_value(&rep);
        let back = rep_from_value(&v, None, 4096).unwrap();
        assert_eq!(back.triangulation().faces(), t.faces());
        let a = rep.classify(1e-9).unwrap();
        let b = back.classify(1e-9).unwrap();
        assert!(a.approx_eq(&b, 1e-9));
    }

    #[test]
    fn rep_descriptor_without_triangulation_needs_the_fallback() {
        let t = fixtures::punctured_torus();
        let params = QParams::new(2, 1).unwrap();
        let rep = LocalRep::standard(&t, &params, 1, 4096).unwrap();
        let mut v = rep_to_value(&rep);
        v.as_object_mut().unwrap().remove("triangulation");
        assert!(rep_from_value(&v, None, 4096).is_err());
        let back = rep_from_value(&v, Some(&t), 4096).unwrap();
        assert_eq!(back.dim(), rep.dim());
    }
}
