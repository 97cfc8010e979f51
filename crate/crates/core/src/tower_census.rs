//! Chain counting on tower levels and full `(b, c)` sweeps.
//!
//! Chains are counted on the affine model: tuples `(x_0, ..., x_L)` over
//! `F_{q^ext}` with `x_{i+1}^3 = x_i f(x_i)`. The ratio `count / 3^L` is a
//! heuristic proxy for `N(F_L)/[F_L:F_0]`; affine chains need not match rational
//! places at ramified or singular points.

use std::io::Write;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier_criterion::{check_criterion, classify, TowerSpec, DEFAULT_MAX_WITNESS_DEGREE};
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FiniteField};
use crate::polynomial::Poly;

/// Default cap on `q^ext * 3^level`.
pub const DEFAULT_CHAIN_BUDGET: u128 = 10_000_000;

pub const ESTIMATOR_CAVEAT: &str =
    "chain_count / 3^level counts affine chains; it is a proxy for N(F_L)/[F_L:F_0], not the splitting rate";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelData {
    pub level: u32,
    pub extension_degree_over_f0: u64,
    pub chain_count: u64,
    pub ext: u32,
}

/// `F_{q^ext}` together with the image of the spec's `b` and `c`.
fn lift(spec: &TowerSpec, ext: u32, budget: u128) -> Result<(FiniteField, FieldElement, FieldElement)> {
    let base = &spec.field;
    let r = base.r() * ext;
    let bound = u64::try_from(budget).unwrap_or(u64::MAX);
    let big = FiniteField::with_bound(base.p(), r, bound)?;
    if ext == 1 {
        return Ok((big, spec.b.clone(), spec.c.clone()));
    }
    let theta = match base.modulus() {
        None => None,
        Some(m) => {
            let m: Vec<i64> = m.iter().map(|&c| c as i64).collect();
            let roots = Poly::from_ints(&big, &m).roots_in_field()?;
            Some(roots.into_iter().next().ok_or_else(|| Error::Diagnostic("F_q does not embed".into()))?)
        }
    };
    let embed = |a: &FieldElement| match &theta {
        None => big.from_int(a.coeffs()[0] as i64),
        Some(t) => a
            .coeffs()
            .iter()
            .rev()
            .fold(big.zero(), |acc, &c| &(&acc * t) + &big.from_int(c as i64)),
    };
    let (b, c) = (embed(&spec.b), embed(&spec.c));
    Ok((big, b, c))
}

fn check_budget(q: u64, ext: u32, level: u32, budget: u128) -> Result<()> {
    let needed = (q as u128)
        .checked_pow(ext)
        .and_then(|n| n.checked_mul(3u128.checked_pow(level)?))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Chain counts for levels `0..=max_level` over `F_{q^ext}`.
pub fn count_chain_levels(spec: &TowerSpec, max_level: u32, ext: u32, budget: u128) -> Result<Vec<LevelData>> {
    spec.validate()?;
    if ext == 0 {
        return Err(Error::ZeroExtensionDegree);
    }
    check_budget(spec.field.q(), ext, max_level, budget)?;
    let (big, b, c) = lift(spec, ext, budget)?;
    let size = big.q() as usize;
    // roots[a] lists every z with z^3 = a, by index
    let mut roots: Vec<Vec<u32>> = vec![Vec::new(); size];
    let mut successors = Vec::with_capacity(size);
    for z in big.elements() {
        roots[(&(&z * &z) * &z).index() as usize].push(z.index() as u32);
        let u = &z * &(&(&(&z * &z) + &(&b * &z)) + &c);
        successors.push(u.index() as usize);
    }
    let mut counts = vec![1u64; size];
    let mut out = Vec::new();
    for level in 0..=max_level {
        out.push(LevelData {
            level,
            extension_degree_over_f0: 3u64.pow(level),
            chain_count: counts.iter().sum(),
            ext,
        });
        if level == max_level {
            break;
        }
        let mut next = vec![0u64; size];
        for (x, &n) in counts.iter().enumerate().filter(|(_, &n)| n > 0) {
            for &z in &roots[successors[x]] {
                next[z as usize] += n;
            }
        }
        counts = next;
    }
    Ok(out)
}

pub fn count_chains(spec: &TowerSpec, level: u32, ext: u32, budget: u128) -> Result<LevelData> {
    Ok(count_chain_levels(spec, level, ext, budget)?.pop().expect("nonempty"))
}

/// `chain_count / 3^level`.
pub fn splitting_estimator(spec: &TowerSpec, level: u32, ext: u32, budget: u128) -> Result<Ratio<u64>> {
    let data = count_chains(spec, level, ext, budget)?;
    Ok(Ratio::new(data.chain_count, data.extension_degree_over_f0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub q: u64,
    pub b: String,
    pub c: String,
    pub class: String,
    pub genus: u64,
    pub deg_diff_x: i64,
    pub deg_diff_y: i64,
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    pub criterion: String,
    pub d: Option<u64>,
    pub chains: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    pub levels: u32,
    pub ext: u32,
    pub chain_budget: u128,
    pub max_witness_degree: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { levels: 1, ext: 1, chain_budget: DEFAULT_CHAIN_BUDGET, max_witness_degree: DEFAULT_MAX_WITNESS_DEGREE }
    }
}

pub fn census_row(spec: &TowerSpec, opts: &CensusOptions) -> Result<CensusRow> {
    let bf = spec.basic_field()?;
    let diff_x = bf.different_over_x();
    let diff_y = bf.different_over_y()?;
    let verdict = check_criterion(spec, opts.max_witness_degree)?;
    let chains = count_chain_levels(spec, opts.levels, opts.ext, opts.chain_budget)?;
    Ok(CensusRow {
        q: spec.field.q(),
        b: spec.b.to_arg_string(),
        c: spec.c.to_arg_string(),
        class: classify(spec).tag().to_string(),
        genus: bf.genus(),
        deg_diff_x: diff_x.degree(),
        deg_diff_y: diff_y.degree(),
        n: bf.degree_set_n()?.into_iter().collect(),
        criterion: verdict.tag().to_string(),
        d: verdict.d(),
        chains: chains.iter().map(|l| l.chain_count).collect(),
    })
}

/// Receives census rows in canonical order.
pub trait RowSink {
    fn write_row(&mut self, row: &CensusRow) -> Result<()>;
    fn finish(&mut self) -> Result<()>;
}

impl RowSink for Vec<CensusRow> {
    fn write_row(&mut self, row: &CensusRow) -> Result<()> {
        self.push(row.clone());
        Ok(())
    }
    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

pub fn csv_header(levels: u32) -> Vec<String> {
    let mut header: Vec<String> = ["q", "b", "c", "class", "genus", "degDiffX", "degDiffY", "N", "criterion", "d"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((0..=levels).map(|l| format!("chains_L{l}")));
    header
}

pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(inner: W, levels: u32) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(inner);
        writer.write_record(csv_header(levels))?;
        Ok(CsvSink { writer })
    }
}

impl<W: Write> RowSink for CsvSink<W> {
    fn write_row(&mut self, row: &CensusRow) -> Result<()> {
        let n: Vec<String> = row.n.iter().map(u64::to_string).collect();
        let mut record = vec![
            row.q.to_string(),
            row.b.clone(),
            row.c.clone(),
            row.class.clone(),
            row.genus.to_string(),
            row.deg_diff_x.to_string(),
            row.deg_diff_y.to_string(),
            n.join(";"),
            row.criterion.clone(),
            row.d.map(|d| d.to_string()).unwrap_or_default(),
        ];
        record.extend(row.chains.iter().map(u64::to_string));
        self.writer.write_record(record)?;
        Ok(())
    }
    fn finish(&mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

/// A JSON array written one row at a time.
pub struct JsonSink<W: Write> {
    inner: W,
    rows: usize,
}

impl<W: Write> JsonSink<W> {
    pub fn new(inner: W) -> Self {
        JsonSink { inner, rows: 0 }
    }
}

impl<W: Write> RowSink for JsonSink<W> {
    fn write_row(&mut self, row: &CensusRow) -> Result<()> {
        let sep = if self.rows == 0 { "[\n  " } else { ",\n  " };
        write!(self.inner, "{sep}{}", serde_json::to_string(row)?)?;
        self.rows += 1;
        Ok(())
    }
    fn finish(&mut self) -> Result<()> {
        if self.rows == 0 {
            writeln!(self.inner, "[]")?;
        } else {
            writeln!(self.inner, "\n]")?;
        }
        self.inner.flush()?;
        Ok(())
    }
}

const CHUNK: usize = 32;

/// Every valid `(b, c)` over `field`; rows are computed in parallel and
/// handed to `sink` in b-major canonical order.
pub fn census(field: &FiniteField, opts: &CensusOptions, sink: &mut dyn RowSink) -> Result<usize> {
    if !field.q_mod3_ok() {
        return Err(Error::QNotOneModThree(field.q()));
    }
    check_budget(field.q(), opts.ext, opts.levels, opts.chain_budget)?;
    let specs = TowerSpec::sweep(field);
    for chunk in specs.chunks(CHUNK) {
        let rows: Vec<CensusRow> = chunk.par_iter().map(|s| census_row(s, opts)).collect::<Result<_>>()?;
        for row in &rows {
            sink.write_row(row)?;
        }
    }
    sink.finish()?;
    Ok(specs.len())
}

pub fn census_rows(field: &FiniteField, opts: &CensusOptions) -> Result<Vec<CensusRow>> {
    let mut rows = Vec::new();
    census(field, opts, &mut rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_spec() -> TowerSpec {
        let f4 = FiniteField::new(2, 2).unwrap();
        TowerSpec::new(&f4, f4.one(), f4.one())
    }

    #[test]
    fn chain_counts_match_the_brute_force_oracle() {
        let counts: Vec<u64> = count_chain_levels(&f4_spec(), 4, 1, DEFAULT_CHAIN_BUDGET)
            .unwrap()
            .iter()
            .map(|l| l.chain_count)
            .collect();
        assert_eq!(counts, vec![4, 6, 8, 10, 12]);
        let f7 = FiniteField::new(7, 1).unwrap();
        let counts: Vec<u64> = count_chain_levels(&TowerSpec::from_ints(&f7, 0, 1), 4, 1, DEFAULT_CHAIN_BUDGET)
            .unwrap()
            .iter()
            .map(|l| l.chain_count)
            .collect();
        assert_eq!(counts, vec![7, 1, 1, 1, 1]);
    }

    #[test]
    fn extension_counts_start_at_q_to_the_ext() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let spec = TowerSpec::from_ints(&f7, 0, 1);
        assert_eq!(count_chains(&spec, 0, 2, DEFAULT_CHAIN_BUDGET).unwrap().chain_count, 49);
        let levels = count_chain_levels(&f4_spec(), 3, 2, DEFAULT_CHAIN_BUDGET).unwrap();
        let counts: Vec<u64> = levels.iter().map(|l| l.chain_count).collect();
        assert_eq!(counts, vec![16, 6, 8, 10]);
        let f13 = FiniteField::new(13, 1).unwrap();
        let counts: Vec<u64> = count_chain_levels(&TowerSpec::from_ints(&f13, 0, 2), 3, 1, DEFAULT_CHAIN_BUDGET)
            .unwrap()
            .iter()
            .map(|l| l.chain_count)
            .collect();
        assert_eq!(counts, vec![13, 13, 13, 13]);
        for pair in levels.windows(2) {
            assert!(pair[1].chain_count <= 3 * pair[0].chain_count);
        }
    }

    #[test]
    fn estimator_and_budget() {
        assert_eq!(splitting_estimator(&f4_spec(), 0, 1, DEFAULT_CHAIN_BUDGET).unwrap(), Ratio::from_integer(4));
        assert_eq!(splitting_estimator(&f4_spec(), 2, 1, DEFAULT_CHAIN_BUDGET).unwrap(), Ratio::new(8, 9));
        assert_eq!(
            count_chains(&f4_spec(), 3, 1, 100).unwrap_err(),
            Error::BudgetExceeded { needed: 108, budget: 100 }
        );
    }

    #[test]
    fn census_rows_and_csv() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let rows = census_rows(&f4, &CensusOptions::default()).unwrap();
        assert_eq!(rows.len(), 15);
        let mut buf = Vec::new();
        let mut sink = CsvSink::new(&mut buf, 1).unwrap();
        for row in &rows {
            sink.write_row(row).unwrap();
        }
        sink.finish().unwrap();
        drop(sink);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("q,b,c,class,genus,degDiffX,degDiffY,N,criterion,d,chains_L0,chains_L1\n"));
        assert_eq!(text.lines().count(), 16);
    }
}
