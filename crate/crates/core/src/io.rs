//! JSON and binary file formats.
//!
//! Complex numbers are `[re, im]` pairs everywhere. A group may be embedded
//! inline or referenced by a builtin name (`"Z2xZ2"`) or a file path.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cocycle::{Cochain1, Cocycle2};
use crate::cohomology::{enumerate_h2, CohomologyClass, H2};
use crate::error::{Error, Result};
use crate::group::{builtin_group, FiniteGroup};
use crate::linalg::{Mat, C64};
use crate::projective::ProjectiveRep;
use crate::state::{DenseState, SiteSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    #[serde(default)]
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn group_to_file(g: &FiniteGroup) -> GroupFile {
    GroupFile {
        order: g.order(),
        identity: g.identity(),
        table: g.table().to_vec(),
        labels: g.labels().map(|l| l.to_vec()),
    }
}

/// Build a group from its file form; the loader relabels so that the
/// identity becomes element 0.
pub fn group_from_file(f: &GroupFile) -> Result<FiniteGroup> {
    if f.table.len() != f.order {
        return Err(Error::MalformedGroup(format!("order {} but {} table rows", f.order, f.table.len())));
    }
    FiniteGroup::from_table(f.table.clone(), f.labels.clone())
}

pub fn group_json(g: &FiniteGroup) -> Value {
    serde_json::to_value(group_to_file(g)).expect("group serializes")
}

/// A group reference: builtin name, path to a group JSON file, or an inline
/// object.
pub fn resolve_group(v: &Value, base: Option<&Path>) -> Result<FiniteGroup> {
    match v {
        Value::String(s) => load_group(s, base),
        Value::Object(_) => group_from_file(&serde_json::from_value(v.clone())?),
        _ => Err(Error::MalformedGroup("group must be a name, a path or an object".into())),
    }
}

/// Builtin name first, then a JSON file.
pub fn load_group(name_or_path: &str, base: Option<&Path>) -> Result<FiniteGroup> {
    if let Ok(g) = builtin_group(name_or_path) {
        return Ok(g);
    }
    let mut path = PathBuf::from(name_or_path);
    if path.is_relative() {
        if let Some(b) = base {
            path = b.join(path);
        }
    }
    if !path.exists() {
        return Err(Error::InvalidArgument(format!("unknown group '{name_or_path}' (not builtin, no such file)")));
    }
    let text = fs::read_to_string(&path)?;
    group_from_file(&serde_json::from_str(&text)?)
}

fn cplx(z: C64) -> Value {
    json!([z.re, z.im])
}

fn parse_cplx(v: &Value) -> Result<C64> {
    let a = v.as_array().filter(|a| a.len() == 2);
    let a = a.ok_or_else(|| Error::InvalidArgument("complex numbers are [re, im] pairs".into()))?;
    let re = a[0].as_f64().ok_or_else(|| Error::InvalidArgument("non-numeric real part".into()))?;
    let im = a[1].as_f64().ok_or_else(|| Error::InvalidArgument("non-numeric imaginary part".into()))?;
    Ok(C64::new(re, im))
}

pub fn matrix_json(m: &Mat) -> Value {
    Value::Array(m.rows().into_iter().map(|r| Value::Array(r.iter().map(|z| cplx(*z)).collect())).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<Mat> {
    let rows = v.as_array().ok_or_else(|| Error::InvalidArgument("matrix must be an array of rows".into()))?;
    let n = rows.len();
    let m = rows.first().and_then(|r| r.as_array()).map_or(0, |r| r.len());
    let mut out = Array2::zeros((n, m));
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().filter(|r| r.len() == m);
        let r = r.ok_or_else(|| Error::DimensionMismatch("ragged matrix rows".into()))?;
        for (j, z) in r.iter().enumerate() {
            out[(i, j)] = parse_cplx(z)?;
        }
    }
    Ok(out)
}

pub fn cocycle_json(nu: &Cocycle2) -> Value {
    match nu.exact_parts() {
        Some((m, v)) => json!({"mode": "exact", "denominator": m, "values": v}),
        None => {
            let t = nu.to_complex_table();
            let values: Vec<Value> = t.iter().map(|r| Value::Array(r.iter().map(|z| cplx(*z)).collect())).collect();
            json!({"mode": "float", "values": values})
        }
    }
}

/// Cocycle file with the group embedded.
pub fn cocycle_file_json(nu: &Cocycle2) -> Value {
    let mut v = cocycle_json(nu);
    v["group"] = group_json(nu.group());
    v
}

pub fn cocycle_from_json(v: &Value, group: Option<Arc<FiniteGroup>>, base: Option<&Path>) -> Result<Cocycle2> {
    let group = match (group, v.get("group")) {
        (Some(g), _) => g,
        (None, Some(gv)) => Arc::new(resolve_group(gv, base)?),
        (None, None) => return Err(Error::InvalidArgument("cocycle needs a group".into())),
    };
    let values = v.get("values").and_then(|x| x.as_array());
    let values = values.ok_or_else(|| Error::InvalidArgument("cocycle needs a 'values' table".into()))?;
    match v.get("mode").and_then(|m| m.as_str()).unwrap_or("exact") {
        "exact" => {
            let m = v.get("denominator").and_then(|d| d.as_u64());
            let m = m.ok_or_else(|| Error::InvalidArgument("exact cocycle needs a denominator".into()))?;
            let table = values
                .iter()
                .map(|r| {
                    let r = r.as_array().ok_or_else(|| Error::InvalidArgument("rows must be arrays".into()))?;
                    r.iter()
                        .map(|k| {
                            k.as_i64()
                                .map(|k| k.rem_euclid(m as i64) as u64)
                                .ok_or_else(|| Error::MixedMode)
                        })
                        .collect::<Result<Vec<u64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Cocycle2::exact(group, m, table)
        }
        "float" => {
            let table = values
                .iter()
                .map(|r| {
                    let r = r.as_array().ok_or_else(|| Error::InvalidArgument("rows must be arrays".into()))?;
                    r.iter().map(|z| parse_cplx(z).map_err(|_| Error::MixedMode)).collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Cocycle2::float(group, table)
        }
        other => Err(Error::InvalidArgument(format!("unknown cocycle mode '{other}'"))),
    }
}

pub fn cochain_json(mu: &Cochain1) -> Value {
    match mu.exact_parts() {
        Some((m, v)) => json!({"mode": "exact", "denominator": m, "values": v}),
        None => {
            let values: Vec<Value> = (0..mu.group().order()).map(|g| cplx(mu.phase(g))).collect();
            json!({"mode": "float", "values": values})
        }
    }
}

pub fn h2_json(h2: &H2) -> Value {
    json!({
        "group_order": h2.group.order(),
        "structure": h2.structure(),
        "invariant_factors": h2.invariant_factors,
        "count": h2.len(),
        "classes": h2.classes.iter().map(|c| json!({
            "index": c.index,
            "coset": c.coset,
            "order": c.order,
            "representative": cocycle_json(&c.representative),
        })).collect::<Vec<_>>(),
    })
}

pub fn class_json(c: &CohomologyClass) -> Value {
    let structure = if c.index.is_some() { enumerate_h2(&c.group).ok().map(|h| h.structure()) } else { None };
    json!({
        "trivial": c.is_trivial(),
        "index": c.index,
        "coset": c.coset,
        "h2": structure,
        "pairing": c.pairing.as_ref().map(cocycle_json),
    })
}

pub fn rep_json(rho: &ProjectiveRep) -> Value {
    json!({
        "group": group_json(rho.group()),
        "dimension": rho.dim(),
        "matrices": rho.matrices().iter().map(matrix_json).collect::<Vec<_>>(),
        "cocycle": cocycle_json(rho.cocycle()),
    })
}

pub fn rep_from_json(v: &Value, base: Option<&Path>) -> Result<ProjectiveRep> {
    let gv = v.get("group").ok_or_else(|| Error::InvalidArgument("representation needs a group".into()))?;
    let group = Arc::new(resolve_group(gv, base)?);
    let mats = v.get("matrices").and_then(|m| m.as_array());
    let mats = mats.ok_or_else(|| Error::InvalidArgument("representation needs 'matrices'".into()))?;
    let matrices = mats.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
    match v.get("cocycle") {
        Some(cv) => {
            let nu = cocycle_from_json(cv, Some(group.clone()), base)?;
            ProjectiveRep::with_cocycle(group, matrices, nu)
        }
        None => ProjectiveRep::new(group, matrices),
    }
}

/// `SiteSpec` header: distinct site representations listed once.
pub fn spec_json(spec: &SiteSpec) -> Value {
    let mut distinct: Vec<Arc<Vec<Mat>>> = Vec::new();
    let mut site_reps = Vec::with_capacity(spec.n_sites());
    for j in 0..spec.n_sites() {
        let r = spec.site_rep(j);
        let k = match distinct.iter().position(|d| Arc::ptr_eq(d, r) || d.as_ref() == r.as_ref()) {
            Some(k) => k,
            None => {
                distinct.push(r.clone());
                distinct.len() - 1
            }
        };
        site_reps.push(k);
    }
    json!({
        "group": group_json(spec.group()),
        "dims": spec.dims(),
        "reps": distinct.iter().map(|r| r.iter().map(matrix_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "site_reps": site_reps,
    })
}

pub fn spec_from_json(v: &Value, base: Option<&Path>) -> Result<SiteSpec> {
    let gv = v.get("group").ok_or_else(|| Error::InvalidArgument("spec needs a group".into()))?;
    let group = Arc::new(resolve_group(gv, base)?);
    let reps = v.get("reps").and_then(|r| r.as_array());
    let reps = reps.ok_or_else(|| Error::InvalidArgument("spec needs 'reps'".into()))?;
    let distinct: Vec<Arc<Vec<Mat>>> = reps
        .iter()
        .map(|r| {
            let r = r.as_array().ok_or_else(|| Error::InvalidArgument("a rep is a list of matrices".into()))?;
            Ok(Arc::new(r.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?))
        })
        .collect::<Result<Vec<_>>>()?;
    let idx = v.get("site_reps").and_then(|r| r.as_array());
    let idx = idx.ok_or_else(|| Error::InvalidArgument("spec needs 'site_reps'".into()))?;
    let site = idx
        .iter()
        .map(|k| {
            k.as_u64()
                .and_then(|k| distinct.get(k as usize).cloned())
                .ok_or_else(|| Error::InvalidArgument("bad site_reps entry".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    SiteSpec::new(group, site)
}

pub const STATE_ENCODING: &str = "complex128-le";

fn bin_path(json_path: &Path) -> PathBuf {
    json_path.with_extension("bin")
}

/// Write `<name>.json` (header) and `<name>.bin` (amplitudes as
/// little-endian `f64` pairs, site 0 slowest).
pub fn save_state(state: &DenseState, json_path: &Path) -> Result<()> {
    let amps = state.amplitudes();
    let header = json!({
        "spec": spec_json(state.spec()),
        "encoding": STATE_ENCODING,
        "count": amps.len(),
    });
    fs::write(json_path, serde_json::to_string_pretty(&header)? + "\n")?;
    let mut bytes = Vec::with_capacity(amps.len() * 16);
    for z in amps.iter() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(bin_path(json_path), bytes)?;
    Ok(())
}

pub fn load_state(json_path: &Path) -> Result<DenseState> {
    let header: Value = serde_json::from_str(&fs::read_to_string(json_path)?)?;
    let enc = header.get("encoding").and_then(|e| e.as_str()).unwrap_or("");
    if enc != STATE_ENCODING {
        return Err(Error::InvalidArgument(format!("unsupported state encoding '{enc}'")));
    }
    let spec_v = header.get("spec").ok_or_else(|| Error::InvalidArgument("state header needs 'spec'".into()))?;
    let spec = Arc::new(spec_from_json(spec_v, json_path.parent())?);
    let count = header.get("count").and_then(|c| c.as_u64()).unwrap_or(0) as usize;
    if count != spec.total_dim() {
        return Err(Error::DimensionMismatch(format!("count {count} vs spec dimension {}", spec.total_dim())));
    }
    let bytes = fs::read(bin_path(json_path))?;
    if bytes.len() != count * 16 {
        return Err(Error::DimensionMismatch(format!("binary holds {} bytes, expected {}", bytes.len(), count * 16)));
    }
    let mut amps = Array1::zeros(count);
    for (k, chunk) in bytes.chunks_exact(16).enumerate() {
        let re = f64::from_le_bytes(chunk[..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..].try_into().unwrap());
        amps[k] = C64::new(re, im);
    }
    DenseState::new(spec, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::clock_shift_rep;
    use crate::state::build_eps_dense;

    #[test]
    fn state_container_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let p = clock_shift_rep(2, 1).unwrap();
        let psi = build_eps_dense(&p, 3).unwrap();
        let path = dir.path().join("eps.json");
        save_state(&psi, &path).unwrap();
        let back = load_state(&path).unwrap();
        assert_eq!(back.amplitudes(), psi.amplitudes());
        assert_eq!(back.spec().dims(), psi.spec().dims());
    }

    #[test]
    fn rep_and_cocycle_round_trip() {
        let p = clock_shift_rep(3, 2).unwrap();
        let back = rep_from_json(&rep_json(&p), None).unwrap();
        assert_eq!(back.cocycle(), p.cocycle());
        let nu = cocycle_from_json(&cocycle_file_json(p.cocycle()), None, None).unwrap();
        assert_eq!(&nu, p.cocycle());
    }
}
