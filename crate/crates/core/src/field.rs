//! Simulated field of investigation under the normal means model.
//!
//! Each of the `m` hypotheses carries a Z-ratio that is N(0, 1) when the
//! null is true and N(μ, 1) when it is false; its one-sided P-value is
//! 1 − Φ(Z). The number of false nulls is fixed at `round(pi1 * m)`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::probability::{EffectSize, Probability};
use crate::rng::{substream, SeedSpec};
use crate::scalar::Real;
use crate::special::phi_upper;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HypothesisStatus {
    TrueNull,
    FalseNull,
}

impl HypothesisStatus {
    pub fn is_false_null(self) -> bool {
        self == HypothesisStatus::FalseNull
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HypothesisStatus::TrueNull => "true_null",
            HypothesisStatus::FalseNull => "false_null",
        }
    }
}

impl fmt::Display for HypothesisStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HypothesisStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "true_null" => Ok(HypothesisStatus::TrueNull),
            "false_null" => Ok(HypothesisStatus::FalseNull),
            other => Err(Error::Parse(format!("unknown hypothesis status `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    m: usize,
    pi1: Probability<T>,
    mu: EffectSize<T>,
}

impl<T: Real> ModelParams<T> {
    pub fn new(m: usize, pi1: T, mu: T) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("a field needs at least one hypothesis"));
        }
        Ok(ModelParams { m, pi1: Probability::new(pi1)?, mu: EffectSize::new(mu)? })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pi1(&self) -> Probability<T> {
        self.pi1
    }

    pub fn mu(&self) -> EffectSize<T> {
        self.mu
    }

    /// Number of false nulls, `round(pi1 * m)`.
    pub fn m1(&self) -> usize {
        let raw = (self.pi1.value() * T::from_count(self.m)).round();
        raw.to_usize().unwrap_or(self.m).min(self.m)
    }

    pub fn m0(&self) -> usize {
        self.m - self.m1()
    }

    pub fn with_m(&self, m: usize) -> Result<Self> {
        ModelParams::new(m, self.pi1.value(), self.mu.value())
    }

    pub fn with_pi1(&self, pi1: T) -> Result<Self> {
        ModelParams::new(self.m, pi1, self.mu.value())
    }
}

/// Where the false nulls sit in the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    /// Uniformly random positions.
    #[default]
    Shuffled,
    /// The first `m1` positions. Handy in unit tests.
    Leading,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisField<T> {
    statuses: Vec<HypothesisStatus>,
    z_ratios: Vec<T>,
    p_values: Vec<Probability<T>>,
    params: ModelParams<T>,
}

impl<T: Real> HypothesisField<T> {
    pub fn len(&self) -> usize {
        self.statuses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statuses.is_empty()
    }

    pub fn statuses(&self) -> &[HypothesisStatus] {
        &self.statuses
    }

    pub fn z_ratios(&self) -> &[T] {
        &self.z_ratios
    }

    pub fn p_values(&self) -> &[Probability<T>] {
        &self.p_values
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    /// Writes the `index,status,z,p` table.
    pub fn write_table<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["index", "status", "z", "p"])?;
        for i in 0..self.len() {
            wtr.write_record([
                i.to_string(),
                self.statuses[i].to_string(),
                format!("{:e}", self.z_ratios[i]),
                format!("{:e}", self.p_values[i].value()),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn generate_field<T: Real>(params: &ModelParams<T>, seed: SeedSpec) -> HypothesisField<T> {
    generate_field_with(params, seed, Placement::Shuffled)
}

pub fn generate_field_with<T: Real>(
    params: &ModelParams<T>,
    seed: SeedSpec,
    placement: Placement,
) -> HypothesisField<T> {
    let m = params.m();
    let m1 = params.m1();
    let mut rng = substream(seed);

    let mut statuses = vec![HypothesisStatus::TrueNull; m];
    statuses[..m1].fill(HypothesisStatus::FalseNull);
    if placement == Placement::Shuffled {
        statuses.shuffle(&mut rng);
    }

    let mu = params.mu().value();
    let mut z_ratios = Vec::with_capacity(m);
    let mut p_values = Vec::with_capacity(m);
    for status in &statuses {
        let noise = T::standard_normal(&mut rng);
        let z = if status.is_false_null() { noise + mu } else { noise };
        z_ratios.push(z);
        p_values.push(Probability::saturating(phi_upper(z)));
    }

    HypothesisField { statuses, z_ratios, p_values, params: *params }
}

/// Fraction of P-values at or below `t`.
pub fn empirical_pvalue_cdf<T: Real>(field: &HypothesisField<T>, t: Probability<T>) -> T {
    let hits = field.p_values.iter().filter(|p| **p <= t).count();
    T::from_count(hits) / T::from_count(field.len())
}

/// P-values loaded from a table, with statuses when the table has them.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueTable<T> {
    pub indices: Vec<usize>,
    pub p_values: Vec<Probability<T>>,
    pub statuses: Option<Vec<HypothesisStatus>>,
}

impl<T: Real> PValueTable<T> {
    pub fn len(&self) -> usize {
        self.p_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_values.is_empty()
    }
}

impl<T: Real> From<&HypothesisField<T>> for PValueTable<T> {
    fn from(field: &HypothesisField<T>) -> Self {
        PValueTable {
            indices: (0..field.len()).collect(),
            p_values: field.p_values.clone(),
            statuses: Some(field.statuses.clone()),
        }
    }
}

/// Reads a field table. Only the `p` column is required; `index` and
/// `status` are used when present, `z` is ignored.
pub fn read_table<T: Real, R: Read>(input: R) -> Result<PValueTable<T>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let p_col = col("p").ok_or_else(|| Error::Parse("table has no `p` column".into()))?;
    let index_col = col("index");
    let status_col = col("status");

    let mut table = PValueTable {
        indices: Vec::new(),
        p_values: Vec::new(),
        statuses: status_col.map(|_| Vec::new()),
    };
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |c: usize| {
            record
                .get(c)
                .ok_or_else(|| Error::Parse(format!("row {}: missing column", row + 1)))
        };
        let p: f64 = field(p_col)?
            .parse()
            .map_err(|e| Error::Parse(format!("row {}: bad p-value: {e}", row + 1)))?;
        let p = Probability::new(T::lit(p))
            .map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
        let index = match index_col {
            Some(c) => field(c)?
                .parse()
                .map_err(|e| Error::Parse(format!("row {}: bad index: {e}", row + 1)))?,
            None => row,
        };
        if let (Some(c), Some(statuses)) = (status_col, table.statuses.as_mut()) {
            statuses.push(field(c)?.parse()?);
        }
        table.indices.push(index);
        table.p_values.push(p);
    }
    Ok(table)
}
