//! Line-oriented text formats for module data and representations.
//!
//! Both formats are `key = value` lines; blank lines and lines starting with
//! `#` are ignored.
//!
//! ```text
//! field = 2
//! m = 4
//! weights = 1:2
//! v = u[1,1]
//! y = 0; 0,1,0
//! g u[1,2] = 0,0,0,1
//! ```
//!
//! In characteristic 0 or `p >= m` the data is `alpha = ..` plus functional
//! values `f u[δ,t] = c`; otherwise it is `y = ..` plus maps
//! `g u[δ,t] = c_0,...,c_{m-1}`. Omitted values are zero. A representation
//! file lists `field`, `weights`, `dim`, then `x = rows` and `u[δ,t] = rows`
//! with rows written `a,b;c,d`.

use std::fmt::Write as _;

use super::{Generator, ModuleSpec, ModuleSpecCharP, ModuleSpecCharZero, Representation, SolvableAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jordan::TruncPoly;
use crate::matrix::Matrix;
use crate::orbit::ClassY;

fn entries(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Parse(format!("expected 'key = value', got {l:?}")))
        })
        .collect()
}

fn take<'a>(pairs: &'a [(String, String)], key: &str) -> Result<Option<&'a str>> {
    let mut found = pairs.iter().filter(|(k, _)| k == key);
    let first = found.next().map(|(_, v)| v.as_str());
    if found.next().is_some() {
        return Err(Error::Parse(format!("duplicate key {key:?}")));
    }
    Ok(first)
}

fn require<'a>(pairs: &'a [(String, String)], key: &str) -> Result<&'a str> {
    take(pairs, key)?.ok_or_else(|| Error::Parse(format!("missing key {key:?}")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::Parse(format!("{key} must be a natural number, got {v:?}")))
}

/// Lines after the `field`/`m`/`weights` header.
pub fn render_spec_body(g: &SolvableAlgebra, spec: &ModuleSpec) -> String {
    let mut out = String::new();
    writeln!(out, "v = {}", g.label(spec.v())).unwrap();
    match spec {
        ModuleSpec::CharZero(s) => {
            writeln!(out, "alpha = {}", s.alpha).unwrap();
            for u in g.a_generators() {
                let Generator::U { weight, slot } = u else {
                    unreachable!()
                };
                writeln!(out, "f {} = {}", g.label(u), s.functionals[weight][slot]).unwrap();
            }
        }
        ModuleSpec::CharP(s) => {
            writeln!(out, "y = {}", s.y.render()).unwrap();
            for u in g.a_generators() {
                let Generator::U { weight, slot } = u else {
                    unreachable!()
                };
                writeln!(out, "g {} = {}", g.label(u), s.maps[weight][slot]).unwrap();
            }
        }
    }
    out
}

pub fn render_spec(g: &SolvableAlgebra, spec: &ModuleSpec) -> String {
    format!(
        "field = {}\nm = {}\nweights = {}\n{}",
        g.field(),
        spec.m(),
        g.weights_text(),
        render_spec_body(g, spec)
    )
}

/// Parses a spec file. Only syntax is checked here; the builders validate
/// normalization and ranges.
pub fn parse_spec(text: &str) -> Result<(SolvableAlgebra, ModuleSpec)> {
    let pairs = entries(text)?;
    let field: Field = require(&pairs, "field")?.parse()?;
    let m = parse_usize("m", require(&pairs, "m")?)?;
    let g = SolvableAlgebra::parse_weights(field, require(&pairs, "weights")?)?;
    let v = match take(&pairs, "v")? {
        Some(l) => g.parse_label(l)?,
        None => {
            let w = g.weight_index(&field.one()).ok_or(Error::MissingWeightOne)?;
            Generator::U { weight: w, slot: 0 }
        }
    };
    let char_zero = ModuleSpec::char_zero_regime(field, m);
    let (data_key, other_key) = if char_zero { ("f", "g") } else { ("g", "f") };
    let mut values: Vec<Vec<Option<String>>> = g.weights().iter().map(|(_, n)| vec![None; *n]).collect();
    for (k, val) in &pairs {
        match k.split_once(' ') {
            Some((head, label)) if head == data_key => {
                let Generator::U { weight, slot } = g.parse_label(label)? else {
                    return Err(Error::Parse(format!("{k:?} must name a basis vector of a")));
                };
                if values[weight][slot].replace(val.clone()).is_some() {
                    return Err(Error::Parse(format!("duplicate key {k:?}")));
                }
            }
            Some((head, _)) if head == other_key => {
                return Err(Error::Parse(format!(
                    "{k:?} does not fit characteristic {} with m = {m}",
                    field.characteristic()
                )));
            }
            None if ["field", "m", "weights", "v", "alpha", "y"].contains(&k.as_str()) => {}
            _ => return Err(Error::Parse(format!("unknown key {k:?}"))),
        }
    }
    let alpha = take(&pairs, "alpha")?.map(|a| field.parse_scalar(a)).transpose()?;
    let spec = if char_zero {
        if take(&pairs, "y")?.is_some() {
            return Err(Error::Parse("y only applies when the characteristic is below m".into()));
        }
        let functionals = values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.as_deref().map_or(Ok(field.zero()), |s| field.parse_scalar(s)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        ModuleSpec::CharZero(ModuleSpecCharZero {
            m,
            alpha: alpha.ok_or_else(|| Error::Parse("missing key \"alpha\"".into()))?,
            v,
            functionals,
        })
    } else {
        let y = match take(&pairs, "y")? {
            Some(t) => {
                let y = ClassY::parse(field, t)?;
                if y.m() != m {
                    return Err(Error::Parse(format!("y has order {} with m = {m}", y.m())));
                }
                if alpha.as_ref().is_some_and(|a| a != y.alpha()) {
                    return Err(Error::Parse("alpha disagrees with y".into()));
                }
                y
            }
            None => ClassY::diagonal(alpha.ok_or_else(|| Error::Parse("missing key \"y\"".into()))?, m),
        };
        let maps = values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        v.as_deref()
                            .map_or(Ok(TruncPoly::zero(field, m)), |s| TruncPoly::parse(field, s))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        ModuleSpec::CharP(ModuleSpecCharP { y, v, maps })
    };
    Ok((g, spec))
}

pub fn render_representation(r: &Representation) -> String {
    let g = r.algebra();
    let mut out = format!(
        "field = {}\nweights = {}\ndim = {}\n",
        g.field(),
        g.weights_text(),
        r.dim()
    );
    for z in g.generators() {
        writeln!(out, "{} = {}", g.label(z), r.image(z).rows_text()).unwrap();
    }
    out
}

pub fn parse_representation(text: &str) -> Result<Representation> {
    let pairs = entries(text)?;
    let field: Field = require(&pairs, "field")?.parse()?;
    let g = SolvableAlgebra::parse_weights(field, require(&pairs, "weights")?)?;
    let dim = parse_usize("dim", require(&pairs, "dim")?)?;
    let mut rep = Representation::zero(g.clone(), dim);
    let mut seen = Vec::new();
    for (k, v) in &pairs {
        if ["field", "weights", "dim"].contains(&k.as_str()) {
            continue;
        }
        let z = g.parse_label(k)?;
        if seen.contains(&z) {
            return Err(Error::Parse(format!("duplicate key {k:?}")));
        }
        seen.push(z);
        let m = Matrix::parse_rows(field, v)?;
        rep.set_image(z, m).map_err(|e| Error::Parse(format!("{k}: {e}")))?;
    }
    if let Some(z) = g.generators().into_iter().find(|z| !seen.contains(z)) {
        return Err(Error::Parse(format!("missing image of {}", g.label(z))));
    }
    Ok(rep)
}
