//! Sampled channel families read from CSV.
//!
//! Header: `t,T11,T12,T13,T21,T22,T23,T31,T32,T33,c1,c2,c3`, one row per sample,
//! strictly increasing `t`, at least two rows. Between samples every entry of `T`
//! and `c` is interpolated linearly; outside the sampled range the nearest row is
//! held.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::{Matrix3, Vector3};

use super::{AffineChannel, ChannelFamily};
use crate::bloch::check_increasing;
use crate::error::{Error, Result};

pub const HEADER: [&str; 13] = [
    "t", "T11", "T12", "T13", "T21", "T22", "T23", "T31", "T32", "T33", "c1", "c2", "c3",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTable {
    times: Vec<f64>,
    channels: Vec<AffineChannel>,
}

impl ChannelTable {
    pub fn new(rows: Vec<(f64, AffineChannel)>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Table(format!(
                "need at least 2 rows, got {}",
                rows.len()
            )));
        }
        let (times, channels): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        check_increasing(&times).map_err(|e| Error::Table(e.to_string()))?;
        if let Some(k) = channels.iter().position(|c| !c.is_finite()) {
            return Err(Error::Table(format!(
                "non-finite entry at t = {}",
                times[k]
            )));
        }
        Ok(Self { times, channels })
    }

    /// Sample a family on the given times.
    pub fn sample(fam: &ChannelFamily, times: &[f64]) -> Result<Self> {
        Self::new(times.iter().map(|&t| (t, fam.eval(t))).collect())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.iter().ne(HEADER.iter().copied()) {
            return Err(Error::Table(format!(
                "header must be `{}`, got `{}`",
                HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Table(format!("row {}: {e}", line + 1)))?;
            let m = Matrix3::from_row_slice(&vals[1..10]);
            let c = Vector3::new(vals[10], vals[11], vals[12]);
            rows.push((vals[0], AffineChannel::new(m, c)));
        }
        Self::new(rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(HEADER)?;
        for (t, ch) in self.times.iter().zip(&self.channels) {
            let mut row = vec![t.to_string()];
            // row-major T
            for i in 0..3 {
                for j in 0..3 {
                    row.push(ch.linear[(i, j)].to_string());
                }
            }
            row.extend(ch.translation.iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn eval(&self, t: f64) -> AffineChannel {
        let last = self.times.len() - 1;
        if t <= self.times[0] {
            return self.channels[0];
        }
        if t >= self.times[last] {
            return self.channels[last];
        }
        let hi = self.times.partition_point(|&s| s <= t);
        let lo = hi - 1;
        let a = (t - self.times[lo]) / (self.times[hi] - self.times[lo]);
        let (x, y) = (&self.channels[lo], &self.channels[hi]);
        AffineChannel::new(
            x.linear * (1.0 - a) + y.linear * a,
            x.translation * (1.0 - a) + y.translation * a,
        )
    }

    pub fn into_family(self, name: impl Into<String>) -> ChannelFamily {
        let (t0, t1) = (self.times[0], self.times[self.times.len() - 1]);
        ChannelFamily::from_fn(
            name,
            vec![("t_first".into(), t0), ("t_last".into(), t1)],
            move |t| self.eval(t),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::family_gad;

    const IDENTITY_CSV: &str = "t,T11,T12,T13,T21,T22,T23,T31,T32,T33,c1,c2,c3\n\
        0,1,0,0,0,1,0,0,0,1,0,0,0\n\
        10,1,0,0,0,1,0,0,0,1,0,0,0\n";

    #[test]
    fn parses_identity_table() {
        let table = ChannelTable::from_reader(IDENTITY_CSV.as_bytes()).unwrap();
        assert_eq!(table.times(), &[0.0, 10.0]);
        assert_eq!(table.eval(3.3), AffineChannel::identity());
    }

    #[test]
    fn rejects_bad_header_order_and_short_tables() {
        let bad_header = IDENTITY_CSV.replacen("T11", "T00", 1);
        assert!(ChannelTable::from_reader(bad_header.as_bytes()).is_err());

        let one_row = "t,T11,T12,T13,T21,T22,T23,T31,T32,T33,c1,c2,c3\n0,1,0,0,0,1,0,0,0,1,0,0,0\n";
        assert!(ChannelTable::from_reader(one_row.as_bytes()).is_err());

        let unordered = "t,T11,T12,T13,T21,T22,T23,T31,T32,T33,c1,c2,c3\n\
            1,1,0,0,0,1,0,0,0,1,0,0,0\n\
            1,1,0,0,0,1,0,0,0,1,0,0,0\n";
        assert!(ChannelTable::from_reader(unordered.as_bytes()).is_err());

        let garbage = IDENTITY_CSV.replacen("10,1", "ten,1", 1);
        assert!(ChannelTable::from_reader(garbage.as_bytes()).is_err());
    }

    #[test]
    fn interpolates_linearly_and_holds_ends() {
        let table = ChannelTable::new(vec![
            (0.0, AffineChannel::identity()),
            (
                2.0,
                AffineChannel::diagonal([0.0, 0.5, 1.0], [0.0, 0.0, 0.4]),
            ),
        ])
        .unwrap();
        let mid = table.eval(0.5);
        assert!(
            mid.max_abs_diff(&AffineChannel::diagonal(
                [0.75, 0.875, 1.0],
                [0.0, 0.0, 0.1]
            )) < 1e-15
        );
        assert_eq!(table.eval(-1.0), AffineChannel::identity());
        assert_eq!(table.eval(7.0), table.eval(2.0));
    }

    #[test]
    fn write_then_read_reproduces_samples() {
        let fam = family_gad(0.1, 4.0).unwrap();
        let times: Vec<f64> = (0..=40).map(|k| 0.125 * k as f64).collect();
        let table = ChannelTable::sample(&fam, &times).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let back = ChannelTable::from_reader(buf.as_slice()).unwrap();
        assert_eq!(back, table);
        let fam2 = back.into_family("gad-table");
        for &t in &times {
            assert!(fam2.eval(t).max_abs_diff(&fam.eval(t)) < 1e-15);
        }
    }
}
