//! Cohomology tables `h^i(E(t))` over a window of twists.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::character::PnCharacter;
use super::complex::LineBundleComplex;
use super::hypercohomology;
use crate::error::{Error, Result};
use crate::exact::rational::qi;

/// `columns[t][i] = h^i(E(t))`, `None` where the value is not known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub dim: usize,
    pub columns: BTreeMap<i64, Vec<Option<usize>>>,
    /// Nonzero hypercohomology outside degrees `0..=dim`, by twist.
    pub off_range: BTreeMap<i64, BTreeMap<i64, usize>>,
}

impl CohomologyTable {
    pub fn empty(dim: usize) -> Self {
        CohomologyTable {
            dim,
            columns: BTreeMap::new(),
            off_range: BTreeMap::new(),
        }
    }

    /// `h^i(E(t))`, or [`Error::InsufficientWindow`] if unknown.
    pub fn get(&self, i: usize, t: i64) -> Result<usize> {
        self.columns
            .get(&t)
            .and_then(|c| c.get(i).copied().flatten())
            .ok_or(Error::InsufficientWindow(t))
    }

    pub fn twists(&self) -> impl Iterator<Item = i64> + '_ {
        self.columns.keys().copied()
    }

    /// Alternating sum of a fully known column.
    pub fn euler(&self, t: i64) -> Option<i64> {
        let col = self.columns.get(&t)?;
        let mut acc = 0i64;
        for (i, h) in col.iter().enumerate() {
            let h = (*h)? as i64;
            acc += if i % 2 == 0 { h } else { -h };
        }
        if let Some(extra) = self.off_range.get(&t) {
            for (&i, &h) in extra {
                acc += if i.rem_euclid(2) == 0 { h as i64 } else { -(h as i64) };
            }
        }
        Some(acc)
    }

    /// Every fully known column matches `chi(ch(t))`.
    pub fn euler_consistent(&self, ch: &PnCharacter) -> bool {
        self.twists()
            .all(|t| self.euler(t).is_none_or(|e| qi(e) == ch.euler_characteristic(t)))
    }

    pub fn to_json(&self) -> Value {
        let cols: Vec<Value> = self
            .columns
            .iter()
            .map(|(t, col)| {
                json!({
                    "t": t,
                    "h": col.iter().map(|h| h.map_or(Value::Null, Value::from)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"dim": self.dim, "columns": cols})
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |v: Option<usize>| v.map_or("*".to_string(), |x| x.to_string());
        write!(f, "{:>8}", "t")?;
        for t in self.columns.keys() {
            write!(f, "{t:>6}")?;
        }
        writeln!(f)?;
        for i in (0..=self.dim).rev() {
            write!(f, "{:>8}", format!("h^{i}"))?;
            for col in self.columns.values() {
                write!(f, "{:>6}", cell(col[i]))?;
            }
            writeln!(f)?;
        }
        for (t, extra) in &self.off_range {
            for (i, h) in extra {
                writeln!(f, "note: H^{i}(C({t})) = {h} outside 0..={}", self.dim)?;
            }
        }
        Ok(())
    }
}

/// Hypercohomology of `C(t)` for `t` in `t_lo..=t_hi`, one column per twist.
/// For a monad in degrees `(-1, 0, 1)` the rows are the `h^i` of its middle
/// cohomology sheaf.
pub fn cohomology_table(c: &LineBundleComplex, t_lo: i64, t_hi: i64) -> Result<CohomologyTable> {
    let n = c.n();
    let cols: Vec<(i64, BTreeMap<i64, usize>)> = (t_lo..=t_hi)
        .into_par_iter()
        .map(|t| Ok((t, hypercohomology(c, t)?)))
        .collect::<Result<_>>()?;
    let mut table = CohomologyTable::empty(n);
    for (t, h) in cols {
        let mut col = vec![Some(0); n + 1];
        for (&i, &v) in &h {
            if (0..=n as i64).contains(&i) {
                col[i as usize] = Some(v);
            } else if v > 0 {
                table.off_range.entry(t).or_default().insert(i, v);
            }
        }
        table.columns.insert(t, col);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::super::bott::bott_line;
    use super::super::complex::fixtures::null_correlation;
    use super::*;

    #[test]
    fn null_correlation_window() {
        let c = null_correlation();
        let tab = cohomology_table(&c, -4, 1).unwrap();
        assert_eq!(tab.get(1, -1).unwrap(), 1);
        assert_eq!(tab.get(1, -2).unwrap(), 0);
        assert_eq!(tab.get(2, -1).unwrap(), 0);
        assert!(tab.euler_consistent(&c.character()));
        assert!(matches!(tab.get(0, 5), Err(Error::InsufficientWindow(5))));
    }

    #[test]
    fn structure_sheaf_gives_bott() {
        let c = LineBundleComplex::single(3, 0, vec![(0, 1)]);
        let tab = cohomology_table(&c, -6, 3).unwrap();
        for t in -6..=3 {
            let b = bott_line(3, t);
            for i in 0..=3 {
                assert_eq!(tab.get(i, t).unwrap(), b[i]);
            }
        }
    }
}
