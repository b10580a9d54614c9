//! File formats.
//!
//! Point sets are headerless CSV, one point per row. Every JSON artifact
//! carries `"schema": 1`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::lp::{lp_radii, CenterCopy, FractionalSolution};
use crate::{Error, KMedianInstance, Metric, PointSet, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub fn parse_points_csv<R: Read>(reader: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {f:?}: {e}", line + 1))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    PointSet::new(rows)
}

pub fn read_points_csv(path: &Path) -> Result<PointSet> {
    parse_points_csv(fs::File::open(path)?)
}

pub fn write_points_csv<W: Write>(writer: W, points: &PointSet) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for p in points.iter() {
        w.write_record(p.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn check_schema(found: u32) -> Result<()> {
    if found != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema {found}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricTag {
    Sqeuclidean,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: u32,
    pub metric: MetricTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demands: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<Vec<f64>>>,
    /// `table[demand][center]`, only for the table metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub back_map: Option<Vec<usize>>,
}

impl InstanceFile {
    pub fn from_instance(inst: &KMedianInstance) -> Self {
        let (demands, centers, table) = match inst.metric() {
            Metric::SqEuclidean => (inst.demands().map(PointSet::to_rows), inst.centers().map(PointSet::to_rows), None),
            Metric::Table => (None, None, Some((0..inst.num_demands()).map(|x| inst.row(x).to_vec()).collect())),
        };
        let metric = match inst.metric() {
            Metric::SqEuclidean => MetricTag::Sqeuclidean,
            Metric::Table => MetricTag::Table,
        };
        Self { schema: SCHEMA_VERSION, metric, demands, centers, table, back_map: inst.back_map().map(<[_]>::to_vec) }
    }

    pub fn into_instance(self) -> Result<KMedianInstance> {
        check_schema(self.schema)?;
        let inst = match self.metric {
            MetricTag::Sqeuclidean => {
                let (Some(d), Some(c)) = (self.demands, self.centers) else {
                    return Err(Error::Parse("sqeuclidean instance needs demands and centers".into()));
                };
                KMedianInstance::sq_euclidean(PointSet::new(d)?, PointSet::new(c)?)?
            }
            MetricTag::Table => {
                let Some(t) = self.table else {
                    return Err(Error::Parse("table instance needs a table".into()));
                };
                KMedianInstance::from_table(t)?
            }
        };
        match self.back_map {
            Some(psi) => inst.with_back_map(psi),
            None => Ok(inst),
        }
    }
}

pub fn read_instance(path: &Path) -> Result<KMedianInstance> {
    read_json::<InstanceFile>(path)?.into_instance()
}

pub fn write_instance(path: &Path, inst: &KMedianInstance) -> Result<()> {
    write_json(path, &InstanceFile::from_instance(inst))
}

/// A normalized LP solution on disk. `z` holds `[demand, copy, weight]`
/// triples for the nonzero entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolutionFile {
    pub schema: u32,
    pub k: usize,
    pub value: f64,
    pub copies: Vec<CenterCopy>,
    pub z: Vec<(usize, usize, f64)>,
}

impl LpSolutionFile {
    pub fn from_solution(sol: &FractionalSolution) -> Self {
        let z = sol
            .support
            .iter()
            .enumerate()
            .flat_map(|(x, s)| s.iter().map(move |&c| (x, c, sol.copies[c].weight)))
            .collect();
        Self { schema: SCHEMA_VERSION, k: sol.k, value: sol.lp_value, copies: sol.copies.clone(), z }
    }

    /// Rebuilds the solution against `inst`, recomputing the radii.
    pub fn into_solution(self, inst: &KMedianInstance) -> Result<FractionalSolution> {
        check_schema(self.schema)?;
        let n = inst.num_demands();
        if let Some(c) = self.copies.iter().find(|c| c.center >= inst.num_centers()) {
            return Err(Error::Parse(format!("copy refers to center {} of {}", c.center, inst.num_centers())));
        }
        let mut support = vec![Vec::new(); n];
        for &(x, c, _) in &self.z {
            if x >= n || c >= self.copies.len() {
                return Err(Error::Parse(format!("z entry ({x}, {c}) out of range")));
            }
            support[x].push(c);
        }
        for s in &mut support {
            s.sort_unstable();
            s.dedup();
        }
        let mut sol = FractionalSolution { k: self.k, copies: self.copies, support, lp_value: 0.0, radii: Vec::new() };
        let (radii, value) = lp_radii(inst, &sol);
        sol.radii = radii;
        sol.lp_value = value;
        Ok(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{normalize, solve_lp, LpOptions};

    #[test]
    fn points_csv_round_trip() {
        let x = PointSet::new(vec![vec![0.1, -2.0], vec![1e-300, 3.5]]).unwrap();
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &x).unwrap();
        assert_eq!(parse_points_csv(&buf[..]).unwrap(), x);
        assert!(parse_points_csv("1,2\n3\n".as_bytes()).is_err());
        assert!(parse_points_csv("1,x\n".as_bytes()).is_err());
        assert!(parse_points_csv("".as_bytes()).is_err());
        assert_eq!(parse_points_csv("# c\n 0 \n2\n".as_bytes()).unwrap().len(), 2);
    }

    #[test]
    fn instance_round_trip() {
        let x = PointSet::new(vec![vec![0.0], vec![2.0]]).unwrap();
        let inst = KMedianInstance::sq_euclidean(x.clone(), x).unwrap().with_back_map(vec![1, 0]).unwrap();
        let file = InstanceFile::from_instance(&inst);
        let text = to_json_string(&file).unwrap();
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        let inst2 = back.into_instance().unwrap();
        assert_eq!(inst2.row(0), inst.row(0));
        assert_eq!(inst2.back_map(), Some(&[1, 0][..]));

        let t = KMedianInstance::from_table(vec![vec![1.0, 2.0]]).unwrap();
        let back = InstanceFile::from_instance(&t).into_instance().unwrap();
        assert_eq!(back.row(0), &[1.0, 2.0]);
        let bad = InstanceFile { schema: 2, ..InstanceFile::from_instance(&t) };
        assert!(bad.into_instance().is_err());
    }

    #[test]
    fn lp_solution_round_trip() {
        let x = PointSet::new(vec![vec![0.0], vec![1.0], vec![4.0]]).unwrap();
        let inst = KMedianInstance::sq_euclidean(x.clone(), x).unwrap();
        let sol = normalize(&inst, &solve_lp(&inst, 1, &LpOptions::default()).unwrap());
        let file = LpSolutionFile::from_solution(&sol);
        let text = to_json_string(&file).unwrap();
        let back: LpSolutionFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_solution(&inst).unwrap(), sol);
    }
}
