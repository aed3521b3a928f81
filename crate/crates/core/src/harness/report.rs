//! Flat report rows and their CSV / JSON renderings.
//!
//! Floating-point values are written with 17 significant digits so reports
//! round-trip exactly and compare byte-for-byte across runs.

use std::io::Write;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::Result;
use crate::harness::experiment::{ExperimentReport, PointSummary};
use crate::metrics::{Estimate, EstimateFlag};

pub const REPORT_COLUMNS: [&str; 11] =
    ["m", "pi1", "mu", "procedure", "param", "metric", "estimate", "stderr", "trials", "target", "flag"];

/// Fragment columns for a bare set of rate estimates.
pub const FRAGMENT_COLUMNS: [&str; 5] = ["metric", "estimate", "stderr", "trials", "flag"];

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub m: usize,
    pub pi1: f64,
    pub mu: f64,
    pub procedure: &'static str,
    pub param: f64,
    pub metric: &'static str,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub trials: u64,
    pub target: Option<f64>,
    pub flag: Option<String>,
}

impl ReportRow {
    fn cells(&self) -> [String; 11] {
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        [
            self.m.to_string(),
            fmt_f64(self.pi1),
            fmt_f64(self.mu),
            self.procedure.to_string(),
            fmt_f64(self.param),
            self.metric.to_string(),
            opt(self.estimate),
            opt(self.stderr),
            self.trials.to_string(),
            opt(self.target),
            self.flag.clone().unwrap_or_default(),
        ]
    }

    fn to_json(&self) -> Value {
        let num = |x: Option<f64>| {
            x.map(|v| Value::Number(Number::from_str(&fmt_f64(v)).expect("finite float")))
                .unwrap_or(Value::Null)
        };
        let mut obj = Map::new();
        obj.insert("m".into(), Value::from(self.m));
        obj.insert("pi1".into(), num(Some(self.pi1)));
        obj.insert("mu".into(), num(Some(self.mu)));
        obj.insert("procedure".into(), Value::from(self.procedure));
        obj.insert("param".into(), num(Some(self.param)));
        obj.insert("metric".into(), Value::from(self.metric));
        obj.insert("estimate".into(), num(self.estimate));
        obj.insert("stderr".into(), num(self.stderr));
        obj.insert("trials".into(), Value::from(self.trials));
        obj.insert("target".into(), num(self.target));
        obj.insert("flag".into(), self.flag.clone().map(Value::from).unwrap_or(Value::Null));
        Value::Object(obj)
    }
}

fn flag_text(flag: Option<EstimateFlag>) -> Option<String> {
    flag.map(|f| f.to_string())
}

fn point_rows(point: &PointSummary) -> Vec<ReportRow> {
    let trials = point.rates.trials;
    let base = |metric, estimate: Option<f64>, stderr, target, flag| ReportRow {
        m: point.model.m(),
        pi1: point.model.pi1().value(),
        mu: point.model.mu().value(),
        procedure: point.procedure.name(),
        param: point.procedure.param().value(),
        metric,
        estimate,
        stderr,
        trials,
        target,
        flag,
    };
    let est = |metric, e: &Estimate, target| base(metric, e.value, e.stderr, target, flag_text(e.flag));

    let r = &point.rates;
    let t = &point.targets;
    let mut rows = vec![
        est("fdr", &r.fdr, None),
        est("mfdr", &r.mfdr, t.mfdr),
        est("ppv", &r.ppv, t.ppv),
        est("fwer", &r.fwer, t.fwer),
        est("rejections", &r.mean_rejections, None),
        base("tau_mean", Some(point.tau.mean), point.tau.stderr, t.tau_limit, flag_text(r.fdr.flag)),
        base("tau_sd", point.tau.sd, None, None, None),
    ];
    if let Some(dev) = point.tau_deviation() {
        rows.push(base("tau_deviation", Some(dev), point.tau.stderr, Some(0.0), None));
    }
    rows
}

impl ExperimentReport {
    pub fn rows(&self) -> Vec<ReportRow> {
        self.points.iter().flat_map(point_rows).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(REPORT_COLUMNS)?;
        for row in self.rows() {
            wtr.write_record(row.cells())?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.rows().iter().map(ReportRow::to_json).collect())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json()).map_err(std::io::Error::from)?;
        writeln!(out)?;
        Ok(())
    }
}

/// Writes rate estimates as `metric,estimate,stderr,trials,flag`.
pub fn write_rates_csv<W: Write>(rates: &crate::metrics::RateEstimates, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(FRAGMENT_COLUMNS)?;
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for (name, e) in [
        ("fdr", &rates.fdr),
        ("mfdr", &rates.mfdr),
        ("ppv", &rates.ppv),
        ("fwer", &rates.fwer),
        ("rejections", &rates.mean_rejections),
    ] {
        wtr.write_record([
            name.to_string(),
            opt(e.value),
            opt(e.stderr),
            rates.trials.to_string(),
            flag_text(e.flag).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ModelParams;
    use crate::harness::config::{ExperimentConfig, ProcedureSpec};
    use crate::harness::experiment::run_experiment;
    use crate::metrics::{estimate_rates, OutcomeTable};
    use crate::probability::Probability;

    fn report() -> ExperimentReport {
        let model = ModelParams::new(300, 0.1, 2.0).unwrap();
        let config =
            ExperimentConfig::new(model, ProcedureSpec::Bh(Probability::new(0.1).unwrap()), 20, 4)
                .unwrap();
        run_experiment(&config, 2).unwrap()
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(2.0), "2.0000000000000000e0");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn csv_layout() {
        let csv = report().to_csv_string().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), REPORT_COLUMNS.join(","));
        let metrics: Vec<&str> = lines.map(|l| l.split(',').nth(5).unwrap()).collect();
        assert_eq!(
            metrics,
            ["fdr", "mfdr", "ppv", "fwer", "rejections", "tau_mean", "tau_sd", "tau_deviation"]
        );
    }

    #[test]
    fn json_mirrors_csv() {
        let r = report();
        let json = r.to_json();
        let rows = json.as_array().unwrap();
        assert_eq!(rows.len(), r.rows().len());
        let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, REPORT_COLUMNS);
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"param\": 1.0000000000000001e-1"));
    }

    #[test]
    fn fragment_csv() {
        let rates = estimate_rates(&[OutcomeTable { v: 0, s: 0, u: 5, t: 5 }]).unwrap();
        let mut buf = Vec::new();
        write_rates_csv(&rates, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("metric,estimate,stderr,trials,flag\n"));
        assert!(text.contains("mfdr,,,1,undefined_no_rejections"));
    }
}
