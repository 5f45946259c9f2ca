//! CSV and JSON formats for signals and planes.
//!
//! CSV: the first line is `# ` followed by a JSON object with the axis
//! metadata, then a header row and one row per sample
//! (`index,re,im` for signals, `ix,iy,re,im` for planes).
//! JSON: `{grid, origin_index, values: [[re, im], ...]}` for signals and
//! `{x, y, semantics, values}` for planes.

use super::grid::{Axis, GridSpec};
use super::plane::{PlaneArray, Semantics};
use super::signal::{SampledSignal, C64};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Read, Write};

#[derive(Serialize, Deserialize)]
struct SignalEnvelope {
    grid: GridSpec,
    origin_index: usize,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct PlaneEnvelope {
    x: Axis,
    y: Axis,
    semantics: Semantics,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CsvMeta {
    Signal { grid: GridSpec, origin_index: usize },
    Plane { x: Axis, y: Axis, semantics: Semantics },
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn unpairs(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|p| C64::new(p[0], p[1])).collect()
}

pub fn signal_to_json(s: &SampledSignal) -> Result<String> {
    let env = SignalEnvelope { grid: s.grid, origin_index: s.origin_index, values: pairs(&s.values) };
    Ok(serde_json::to_string(&env)?)
}

pub fn signal_from_json(text: &str) -> Result<SampledSignal> {
    let env: SignalEnvelope = serde_json::from_str(text)?;
    SampledSignal::new(env.grid, env.origin_index, unpairs(&env.values))
}

pub fn plane_to_json(p: &PlaneArray) -> Result<String> {
    let env = PlaneEnvelope { x: p.x, y: p.y, semantics: p.semantics, values: pairs(&p.values) };
    Ok(serde_json::to_string(&env)?)
}

pub fn plane_from_json(text: &str) -> Result<PlaneArray> {
    let env: PlaneEnvelope = serde_json::from_str(text)?;
    if env.values.len() != env.x.len * env.y.len {
        return Err(Error::Parse("plane value count does not match its axes".into()));
    }
    Ok(PlaneArray { x: env.x, y: env.y, semantics: env.semantics, values: unpairs(&env.values) })
}

fn write_meta<W: Write>(w: &mut W, meta: &CsvMeta) -> Result<()> {
    writeln!(w, "# {}", serde_json::to_string(meta)?)?;
    Ok(())
}

pub fn write_signal_csv<W: Write>(s: &SampledSignal, mut w: W) -> Result<()> {
    write_meta(&mut w, &CsvMeta::Signal { grid: s.grid, origin_index: s.origin_index })?;
    let mut cw = csv::Writer::from_writer(w);
    cw.write_record(["index", "re", "im"])?;
    for (i, v) in s.values.iter().enumerate() {
        cw.write_record([i.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    cw.flush()?;
    Ok(())
}

pub fn write_plane_csv<W: Write>(p: &PlaneArray, mut w: W) -> Result<()> {
    write_meta(&mut w, &CsvMeta::Plane { x: p.x, y: p.y, semantics: p.semantics })?;
    let mut cw = csv::Writer::from_writer(w);
    cw.write_record(["ix", "iy", "re", "im"])?;
    for i in 0..p.x.len {
        for j in 0..p.y.len {
            let v = p.get(i, j);
            cw.write_record([i.to_string(), j.to_string(), v.re.to_string(), v.im.to_string()])?;
        }
    }
    cw.flush()?;
    Ok(())
}

fn read_meta<R: Read>(r: R) -> Result<(CsvMeta, csv::Reader<BufReader<R>>)> {
    let mut br = BufReader::new(r);
    let mut first = String::new();
    br.read_line(&mut first)?;
    let body = first
        .trim_end()
        .strip_prefix("# ")
        .ok_or_else(|| Error::Parse("missing metadata line".into()))?;
    let meta: CsvMeta = serde_json::from_str(body)?;
    Ok((meta, csv::Reader::from_reader(br)))
}

fn num(field: Option<&str>) -> Result<f64> {
    field
        .ok_or_else(|| Error::Parse("short row".into()))?
        .parse::<f64>()
        .map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_signal_csv<R: Read>(r: R) -> Result<SampledSignal> {
    let (meta, mut cr) = read_meta(r)?;
    let CsvMeta::Signal { grid, origin_index } = meta else {
        return Err(Error::Parse("expected a signal file".into()));
    };
    let mut values = vec![C64::new(0.0, 0.0); grid.n()];
    for rec in cr.records() {
        let rec = rec?;
        let i = num(rec.get(0))? as usize;
        if i >= values.len() {
            return Err(Error::Parse(format!("index {i} out of range")));
        }
        values[i] = C64::new(num(rec.get(1))?, num(rec.get(2))?);
    }
    SampledSignal::new(grid, origin_index, values)
}

pub fn read_plane_csv<R: Read>(r: R) -> Result<PlaneArray> {
    let (meta, mut cr) = read_meta(r)?;
    let CsvMeta::Plane { x, y, semantics } = meta else {
        return Err(Error::Parse("expected a plane file".into()));
    };
    let mut p = PlaneArray::zeros(x, y, semantics)?;
    for rec in cr.records() {
        let rec = rec?;
        let i = num(rec.get(0))? as usize;
        let j = num(rec.get(1))? as usize;
        if i >= x.len || j >= y.len {
            return Err(Error::Parse(format!("entry ({i},{j}) out of range")));
        }
        *p.get_mut(i, j) = C64::new(num(rec.get(2))?, num(rec.get(3))?);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SampledSignal {
        let g = GridSpec::new(0.5, 2, 1, 3).unwrap();
        let v = (0..6).map(|i| C64::new(i as f64 * 0.1, -(i as f64) / 3.0)).collect();
        SampledSignal::new(g, 2, v).unwrap()
    }

    #[test]
    fn signal_round_trips() {
        let s = sample();
        assert_eq!(signal_from_json(&signal_to_json(&s).unwrap()).unwrap(), s);
        let mut buf = Vec::new();
        write_signal_csv(&s, &mut buf).unwrap();
        assert_eq!(read_signal_csv(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn plane_round_trips() {
        let g = GridSpec::new(0.5, 2, 1, 2).unwrap();
        let mut p = PlaneArray::zeros(Axis::full(g), Axis::span(g.dual(), -1, 3), Semantics::Symbol).unwrap();
        *p.get_mut(1, 2) = C64::new(0.25, 1.0 / 7.0);
        assert_eq!(plane_from_json(&plane_to_json(&p).unwrap()).unwrap(), p);
        let mut buf = Vec::new();
        write_plane_csv(&p, &mut buf).unwrap();
        assert_eq!(read_plane_csv(buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let mut buf = Vec::new();
        write_signal_csv(&sample(), &mut buf).unwrap();
        assert!(read_plane_csv(buf.as_slice()).is_err());
        assert!(read_signal_csv("index,re,im\n".as_bytes()).is_err());
    }
}
